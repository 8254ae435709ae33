"""Class members built from Schwarz functions, and the functionals they carry.

A Schwarz function is parametrized by Schur parameters ``sigma_0..sigma_m``
in the closed unit disk:

    s_m = sigma_m,   s_k = (sigma_k + z s_{k+1}) / (1 + conj(sigma_k) z s_{k+1}),
    w(z) = z s_0(z).

Every such ``w`` maps the disk into itself, so ``f`` solving
``f' + alpha z f'' = phi(w)`` is a member of the class by construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .phi import ClassParams, PhiSpec, coefficients
from .series import (
    TruncatedSeries,
    compose_coeffs,
    differentiate,
    horner,
    log_div_z_coeffs,
    mul_coeffs,
    reciprocal_coeffs,
    revert_coeffs,
)

SCHUR_TOL = 1e-12
PROFILE_TOL = 1e-12


class ProfileConsistencyError(ArithmeticError):
    """Series-derived functionals disagree with their closed forms."""


# ---------------------------------------------------------------------------
# Schwarz functions
# ---------------------------------------------------------------------------

def _shift(c: np.ndarray) -> np.ndarray:
    """Multiply by z, keeping the length."""
    out = np.zeros_like(c)
    out[..., 1:] = c[..., :-1]
    return out


def schwarz_coeffs(sigma, order: int) -> np.ndarray:
    """Coefficients ``c_0..c_order`` of the Schwarz function for each row of ``sigma``."""
    sigma = np.atleast_1d(np.asarray(sigma, dtype=complex))
    if np.any(np.abs(sigma) > 1 + SCHUR_TOL):
        raise ValueError("Schur parameters must lie in the closed unit disk")
    if order < 1:
        raise ValueError("order must be at least 1")
    m = sigma.shape[-1] - 1
    s = np.zeros(sigma.shape[:-1] + (order,), dtype=complex)
    s[..., 0] = sigma[..., m]
    for k in range(m - 1, -1, -1):
        zs = _shift(s)
        num = zs.copy()
        num[..., 0] += sigma[..., k]
        den = np.conj(sigma[..., k])[..., None] * zs
        den[..., 0] += 1.0
        s = mul_coeffs(num, reciprocal_coeffs(den))
    w = np.zeros(sigma.shape[:-1] + (order + 1,), dtype=complex)
    w[..., 1:] = s
    return w


def schwarz_eval(sigma: Sequence[complex], z):
    """Pointwise value of the Schwarz function by running the recursion at ``z``."""
    sigma = [complex(x) for x in sigma]
    z = np.asarray(z, dtype=complex)
    s = np.full(z.shape, sigma[-1], dtype=complex)
    for sk in reversed(sigma[:-1]):
        zs = z * s
        s = (sk + zs) / (1 + np.conj(sk) * zs)
    return z * s


def schwarz_c123(sigma: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """First three Schwarz coefficients from ``sigma_0, sigma_1, sigma_2`` in closed form.

    c1 = s0
    c2 = (1 - |s0|^2) s1
    c3 = (1 - |s0|^2)(1 - |s1|^2) s2 - conj(s0) (1 - |s0|^2) s1^2
    """
    sigma = np.asarray(sigma)
    s0, s1, s2 = sigma[..., 0], sigma[..., 1], sigma[..., 2]
    e0 = 1 - np.abs(s0) ** 2
    e1 = 1 - np.abs(s1) ** 2
    return s0, e0 * s1, e0 * e1 * s2 - np.conj(s0) * e0 * s1**2


@dataclass(frozen=True)
class SchwarzSample:
    schur_params: tuple[complex, ...]
    series: TruncatedSeries

    @property
    def c(self) -> np.ndarray:
        return self.series.coeffs

    def coefficient_inequality_holds(self, slack: float = 1e-9) -> bool:
        """``|c_1| <= 1`` and ``|c_n| <= 1 - |c_1|^2`` for ``n >= 2``."""
        c = np.abs(self.series.coeffs)
        if self.series.order < 1:
            return True
        if c[1] > 1 + slack:
            return False
        return bool(np.all(c[2:] <= 1 - c[1] ** 2 + slack))

    def max_modulus(self, r: float = 0.99, grid: int = 512) -> float:
        theta = 2 * np.pi * np.arange(grid) / grid
        return float(np.abs(horner(self.series.coeffs, r * np.exp(1j * theta))).max())


def schur_to_schwarz(params: Sequence[complex], N: int) -> SchwarzSample:
    """Expand the Schwarz function with the given Schur parameters to order ``N``."""
    params = tuple(complex(p) for p in params)
    if not params:
        raise ValueError("at least one Schur parameter is required")
    w = schwarz_coeffs(np.array(params), N)
    return SchwarzSample(params, TruncatedSeries(w))


def monomial_params(k: int) -> tuple[complex, ...]:
    """Schur parameters of ``w(z) = z^k`` (``k = 0`` gives ``w = 0``)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return (0j,)
    return (0j,) * (k - 1) + (1 + 0j,)


# ---------------------------------------------------------------------------
# members
# ---------------------------------------------------------------------------

def member_coeffs(phi_coeffs: np.ndarray, alpha: complex, w: np.ndarray) -> np.ndarray:
    """Coefficients of ``f`` from ``f' + alpha z f'' = phi(w)``, batched over ``w``.

    With ``p = phi(w)``, comparing coefficients gives
    ``a_n = p_{n-1} / (n (1 + (n-1) alpha))``.
    """
    w = np.asarray(w, dtype=complex)
    N = w.shape[-1] - 1
    p = compose_coeffs(np.asarray(phi_coeffs)[: N + 1], w)
    n = np.arange(2, N + 1)
    a = np.zeros(p.shape, dtype=complex)
    a[..., 1] = 1.0
    a[..., 2:] = p[..., 1:N] / (n * (1 + (n - 1) * alpha))
    return a


def member_from_schwarz(params: ClassParams, spec: PhiSpec, w: SchwarzSample,
                        N: int | None = None) -> TruncatedSeries:
    """The class member whose differential expression equals ``phi(w(z))``."""
    if N is None:
        N = w.series.order
    if N > w.series.order:
        raise ValueError("Schwarz sample is truncated below the requested order")
    phi = np.array([1.0, *coefficients(spec, N)])
    return TruncatedSeries(member_coeffs(phi, params.alpha, w.series.coeffs[: N + 1]))


def class_operator(f: TruncatedSeries, alpha: complex) -> TruncatedSeries:
    """``f'(z) + alpha z f''(z)``, known to order ``f.order - 1``."""
    d1 = differentiate(f)
    d2 = differentiate(d1)
    zd2 = TruncatedSeries(np.concatenate([[0.0], d2.coeffs]), d1.order)
    return d1 + complex(alpha) * zd2


def member_residual(params: ClassParams, spec: PhiSpec, f: TruncatedSeries,
                    w: SchwarzSample) -> float:
    """Max coefficient modulus of ``f' + alpha z f'' - phi(w)`` through order ``N - 2``."""
    N = f.order
    lhs = class_operator(f, params.alpha).coeffs[: N - 1]
    phi = np.array([1.0, *coefficients(spec, N)])
    rhs = compose_coeffs(phi, w.series.coeffs[: N + 1])[: N - 1]
    return float(np.max(np.abs(lhs - rhs)))


@dataclass(frozen=True)
class DistortionGrowth:
    pass


@dataclass(frozen=True)
class Coeff:
    n: int


@dataclass(frozen=True)
class Rotation:
    k: int


Extremal = Union[DistortionGrowth, Coeff, Rotation]


def extremal(params: ClassParams, spec: PhiSpec, which: Extremal, N: int = 32) -> TruncatedSeries:
    """Sharpness witnesses.

    ``DistortionGrowth()`` is ``z + sum B_n z^{n+1} / ((n+1)(1 + n Re alpha))``;
    ``Coeff(n)`` uses ``w = z^{n-1}``; ``Rotation(k)`` uses ``w = z^k``.
    """
    if isinstance(which, DistortionGrowth):
        ra = params.alpha.real
        B = coefficients(spec, N - 1)
        c = np.zeros(N + 1, dtype=complex)
        c[1] = 1.0
        for n in range(1, N):
            c[n + 1] = B[n - 1] / ((n + 1) * (1 + n * ra))
        return TruncatedSeries(c)
    if isinstance(which, Coeff):
        if which.n < 2:
            raise ValueError("Coeff(n) requires n >= 2")
        k = which.n - 1
    elif isinstance(which, Rotation):
        if which.k < 1:
            raise ValueError("Rotation(k) requires k >= 1")
        k = which.k
    else:
        raise TypeError(f"unknown extremal kind {which!r}")
    w = schur_to_schwarz(monomial_params(k), N)
    return member_from_schwarz(params, spec, w, N)


# ---------------------------------------------------------------------------
# functional profiles
# ---------------------------------------------------------------------------

def profile_arrays(a: np.ndarray, check: bool = True) -> dict[str, np.ndarray]:
    """Logarithmic and inverse coefficients for a stack of normalized members.

    Returns arrays ``gamma`` (..., 3) and ``inv`` (..., 3) holding
    ``gamma_1..gamma_3`` and ``A_2..A_4``.
    """
    a = np.asarray(a, dtype=complex)
    if a.shape[-1] < 5:
        raise ValueError("profile needs members known to order 4")
    gamma = log_div_z_coeffs(a[..., :5])[..., 1:4] / 2
    inv = revert_coeffs(a[..., :5])[..., 2:5]
    if check:
        _check_closed_forms(a, gamma, inv)
    return {"gamma": gamma, "inv": inv}


def _check_closed_forms(a, gamma, inv) -> None:
    a2, a3, a4 = a[..., 2], a[..., 3], a[..., 4]
    g = np.stack([a2 / 2, (a3 - a2**2 / 2) / 2, (a4 - a2 * a3 + a2**3 / 3) / 2], axis=-1)
    A = np.stack([-a2, 2 * a2**2 - a3, -5 * a2**3 + 5 * a2 * a3 - a4], axis=-1)
    scale = np.maximum(1.0, np.max(np.abs(a[..., 2:5]), axis=-1, keepdims=True)) ** 3
    if np.any(np.abs(gamma - g) > PROFILE_TOL * scale):
        raise ProfileConsistencyError("logarithmic coefficients disagree with closed forms")
    if np.any(np.abs(inv - A) > PROFILE_TOL * scale):
        raise ProfileConsistencyError("inverse coefficients disagree with closed forms")


@dataclass(frozen=True)
class FunctionalProfile:
    a: tuple[complex, ...]       # a_2..a_N
    gamma: tuple[complex, ...]   # gamma_1..gamma_3
    inv: tuple[complex, ...]     # A_2..A_4
    h2: complex                  # A_2 A_4 - A_3^2

    def fs(self, mu: complex) -> complex:
        """Fekete-Szego functional ``A_3 - mu A_2^2``."""
        return self.inv[1] - complex(mu) * self.inv[0] ** 2


def profile(f: TruncatedSeries, N: int | None = None) -> FunctionalProfile:
    """Every functional the bounds speak about, for one normalized member."""
    if N is None:
        N = f.order
    if N < 4 or f.order < N:
        raise ValueError("profile needs a series known to order >= 4")
    c = f.coeffs[: N + 1]
    if abs(c[0]) > 1e-12 or abs(c[1] - 1) > 1e-12:
        raise ValueError("profile expects f(0) = 0 and f'(0) = 1")
    arr = profile_arrays(c)
    gamma = tuple(complex(x) for x in arr["gamma"])
    inv = tuple(complex(x) for x in arr["inv"])
    return FunctionalProfile(
        a=tuple(complex(x) for x in c[2:]),
        gamma=gamma,
        inv=inv,
        h2=inv[0] * inv[2] - inv[1] ** 2,
    )
