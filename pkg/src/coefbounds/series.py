"""Truncated complex power series.

Coefficient kernels operate on arrays whose trailing axis holds the
coefficients ``c_0..c_N``; leading axes are batch axes.  ``TruncatedSeries``
wraps a single 1-D coefficient vector for interactive use, while the
verification code calls the kernels directly on stacks of series.
"""
from __future__ import annotations

from typing import Iterable, Union

import numpy as np

Number = Union[int, float, complex]

NORMALIZATION_TOL = 1e-12


class NormalizationError(ValueError):
    """A series does not satisfy the normalization an operation requires."""


# ---------------------------------------------------------------------------
# array kernels (trailing axis = coefficients)
# ---------------------------------------------------------------------------

def _common(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    n = min(a.shape[-1], b.shape[-1])
    return a[..., :n], b[..., :n], n


def mul_coeffs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cauchy product truncated to the shorter operand."""
    a, b, n = _common(np.asarray(a, complex), np.asarray(b, complex))
    if a.ndim == 1 and b.ndim == 1:
        return np.convolve(a, b)[:n]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
    for j in range(n):
        out[..., j:] += a[..., j : j + 1] * b[..., : n - j]
    return out


def compose_coeffs(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """Coefficients of ``outer(inner(z))``; ``inner`` must vanish at 0."""
    outer, inner, n = _common(np.asarray(outer, complex), np.asarray(inner, complex))
    if np.any(np.abs(inner[..., 0]) > NORMALIZATION_TOL):
        raise NormalizationError("inner series must have zero constant term")
    inner = inner.copy()
    inner[..., 0] = 0.0
    shape = np.broadcast_shapes(outer.shape, inner.shape)
    res = np.zeros(shape, dtype=complex)
    res[..., 0] = outer[..., n - 1]
    for k in range(n - 2, -1, -1):
        res = mul_coeffs(res, inner)
        res[..., 0] += outer[..., k]
    return res


def reciprocal_coeffs(a: np.ndarray) -> np.ndarray:
    """Coefficients of ``1/a``; requires ``a_0 != 0``."""
    a = np.asarray(a, complex)
    if np.any(a[..., 0] == 0):
        raise ZeroDivisionError("series with zero constant term has no reciprocal")
    n = a.shape[-1]
    inv0 = 1.0 / a[..., 0]
    b = np.zeros_like(a)
    b[..., 0] = inv0
    for k in range(1, n):
        acc = np.sum(a[..., 1 : k + 1] * b[..., k - 1 :: -1][..., :k], axis=-1)
        b[..., k] = -inv0 * acc
    return b


def _check_normalized(c: np.ndarray, what: str) -> None:
    if c.shape[-1] < 2:
        raise NormalizationError(f"{what}: series of order >= 1 required")
    if np.any(np.abs(c[..., 0]) > NORMALIZATION_TOL) or np.any(
        np.abs(c[..., 1] - 1.0) > NORMALIZATION_TOL
    ):
        raise NormalizationError(f"{what}: expected c0 = 0 and c1 = 1")


def log1p_coeffs(h: np.ndarray) -> np.ndarray:
    """Coefficients of ``log h`` for a series with ``h_0 = 1``."""
    h = np.asarray(h, complex)
    n = h.shape[-1]
    g = np.zeros_like(h)
    for k in range(1, n):
        # k g_k = k h_k - sum_{j=1}^{k-1} j g_j h_{k-j}
        j = np.arange(1, k)
        acc = np.sum(j * g[..., 1:k] * h[..., k - 1 : 0 : -1], axis=-1) if k > 1 else 0.0
        g[..., k] = h[..., k] - acc / k
    return g


def log_div_z_coeffs(f: np.ndarray) -> np.ndarray:
    f = np.asarray(f, complex)
    _check_normalized(f, "log_div_z")
    h = f[..., 1:].copy()
    h[..., 0] = 1.0
    return log1p_coeffs(h)


def revert_coeffs(f: np.ndarray) -> np.ndarray:
    """Compositional inverse, solved one order at a time."""
    f = np.asarray(f, complex)
    _check_normalized(f, "revert")
    n = f.shape[-1]
    g = np.zeros(f.shape, dtype=complex)
    g[..., 1] = 1.0
    for k in range(2, n):
        # [z^k] f(g) is g_k + (terms in g_1..g_{k-1}); g_k is still zero here
        ck = compose_coeffs(f[..., : k + 1], g[..., : k + 1])[..., k]
        g[..., k] = -ck
    return g


def differentiate_coeffs(f: np.ndarray) -> np.ndarray:
    f = np.asarray(f, complex)
    n = f.shape[-1]
    if n == 1:
        return np.zeros_like(f)
    return f[..., 1:] * np.arange(1, n)


def horner(coeffs: np.ndarray, z) -> np.ndarray:
    """Evaluate a 1-D coefficient vector at ``z`` (scalar or array)."""
    z = np.asarray(z, complex)
    acc = np.zeros_like(z) + coeffs[-1]
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc


# ---------------------------------------------------------------------------
# public series type
# ---------------------------------------------------------------------------

class TruncatedSeries:
    """Complex Taylor coefficients ``c_0..c_N`` known exactly to order ``N``.

    Binary operations truncate to the smaller operand order.  Instances are
    immutable; the coefficient array is read-only.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[Number] | np.ndarray, order: int | None = None):
        c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs, dtype=complex)
        if c.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        if order is None:
            order = len(c) - 1
        if order < 0:
            raise ValueError("order must be non-negative")
        if len(c) < order + 1:
            c = np.concatenate([c, np.zeros(order + 1 - len(c), dtype=complex)])
        c = c[: order + 1].copy()
        c.setflags(write=False)
        self._c = c

    # construction helpers
    @classmethod
    def constant(cls, value: Number, order: int) -> "TruncatedSeries":
        return cls([value], order)

    @classmethod
    def monomial(cls, k: int, order: int, coeff: Number = 1.0) -> "TruncatedSeries":
        c = np.zeros(order + 1, dtype=complex)
        if k <= order:
            c[k] = coeff
        return cls(c, order)

    @classmethod
    def identity(cls, order: int) -> "TruncatedSeries":
        return cls.monomial(1, order)

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def order(self) -> int:
        return len(self._c) - 1

    def __len__(self) -> int:
        return len(self._c)

    def __getitem__(self, k):
        return self._c[k]

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return TruncatedSeries(self._c[: order + 1])

    def __call__(self, z):
        return horner(self._c, z)

    # arithmetic
    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        if np.isscalar(other):
            return TruncatedSeries.constant(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = min(self.order, other.order)
        return TruncatedSeries(self._c[: n + 1] + other._c[: n + 1])

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self._c)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other):
            return TruncatedSeries(self._c * other)
        if isinstance(other, TruncatedSeries):
            return mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if np.isscalar(other):
            return TruncatedSeries(self._c / other)
        if isinstance(other, TruncatedSeries):
            return mul(self, reciprocal(other))
        return NotImplemented

    def __rtruediv__(self, other):
        if np.isscalar(other):
            return reciprocal(self) * other
        return NotImplemented

    def allclose(self, other: "TruncatedSeries", atol: float = 1e-12) -> bool:
        n = min(self.order, other.order)
        return bool(np.all(np.abs(self._c[: n + 1] - other._c[: n + 1]) <= atol))

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and bool(np.array_equal(self._c, other._c))

    def __hash__(self):
        return hash((self.order, self._c.tobytes()))

    def __repr__(self) -> str:
        shown = ", ".join(_fmt_c(c) for c in self._c[:6])
        more = ", ..." if self.order > 5 else ""
        return f"TruncatedSeries([{shown}{more}], order={self.order})"


def _fmt_c(c: complex) -> str:
    if c.imag == 0:
        return f"{c.real:.6g}"
    return f"{c.real:.6g}{c.imag:+.6g}j"


# module-level operations -----------------------------------------------------

def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries(mul_coeffs(a.coeffs, b.coeffs))


def compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """Taylor coefficients of ``outer(inner(z))`` to the shared order.

    Raises NormalizationError if ``inner`` has a nonzero constant term.
    """
    return TruncatedSeries(compose_coeffs(outer.coeffs, inner.coeffs))


def reciprocal(a: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries(reciprocal_coeffs(a.coeffs))


def revert(f: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse ``g`` with ``f(g(w)) = w`` to the order of ``f``."""
    return TruncatedSeries(revert_coeffs(f.coeffs))


def log_div_z(f: TruncatedSeries) -> TruncatedSeries:
    """Series of ``log(f(z)/z)`` for normalized ``f = z + a_2 z^2 + ...``.

    The result has order ``f.order - 1`` because dividing by ``z`` drops one
    known coefficient.
    """
    return TruncatedSeries(log_div_z_coeffs(f.coeffs))


def differentiate(f: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries(differentiate_coeffs(f.coeffs))


def modulus_extrema_on_circle(f: TruncatedSeries, r: float, grid: int) -> tuple[float, float]:
    """Min and max of ``|f(r e^{i theta})|`` over ``grid`` equally spaced angles."""
    if not 0 < r < 1:
        raise ValueError("radius must lie in (0, 1)")
    if grid < 8:
        raise ValueError("grid must have at least 8 points")
    theta = 2 * np.pi * np.arange(grid) / grid
    vals = np.abs(horner(f.coeffs, r * np.exp(1j * theta)))
    return float(vals.min()), float(vals.max())
