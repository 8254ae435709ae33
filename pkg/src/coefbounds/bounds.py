"""Closed-form coefficient bounds for f with f'(z) + alpha z f''(z) subordinate to phi."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .phi import ClassParams, PhiSpec, coefficients

REGION_TOL = 1e-12


class Variant(str, Enum):
    """Which form of the distortion/growth lower bound to evaluate.

    ``AS_STATED`` uses ``|B_n|`` in both sums; ``AS_PROVED`` uses the signed
    ``B_n`` of the integral representation, which is what the extremal
    function attains.
    """

    AS_STATED = "as_stated"
    AS_PROVED = "as_proved"


class NoRegionMatched(ArithmeticError):
    pass


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    # magnitude of the first omitted term of the partial sums
    tail: float = 0.0
    # number of terms summed
    order: int = 0

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval ({self.lo}, {self.hi})")

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi


def _alpha(params: ClassParams | complex) -> complex:
    return params.alpha if isinstance(params, ClassParams) else complex(params)


def _real_alpha(params, what: str) -> float:
    a = _alpha(params)
    if a.imag != 0:
        raise ValueError(f"{what} requires real alpha, got {a}")
    return a.real


# ---------------------------------------------------------------------------
# distortion and growth
# ---------------------------------------------------------------------------

SUM_TOL = 1e-17


def _two_sided(params, spec, r, N, variant, denom) -> Interval:
    # Sums at least N terms, then keeps going while the next term still
    # matters in double precision (capped by the target's max_order).
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    if N < 1:
        raise ValueError("N must be positive")
    variant = Variant(variant)
    ra = _alpha(params).real
    cap = max(N, spec.max_order - 1)
    B = coefficients(spec, cap + 1)
    lo = hi = 1.0
    n = 0
    while n < cap:
        n += 1
        b = B[n - 1] if variant is Variant.AS_PROVED else abs(B[n - 1])
        d = denom(n, ra)
        lo += b * (-r) ** n / d
        hi += b * r**n / d
        if n >= N and abs(B[n]) * r ** (n + 1) / denom(n + 1, ra) <= SUM_TOL * max(1.0, abs(hi)):
            break
    tail = abs(B[n]) * r ** (n + 1) / denom(n + 1, ra)
    if lo > hi:
        raise ValueError("lower bound exceeds upper bound; target is not increasing on (-1, 1)")
    return Interval(lo, hi, tail, n)


def distortion_bounds(params: ClassParams, spec: PhiSpec, r: float, N: int = 32,
                      variant: Variant | str = Variant.AS_PROVED) -> Interval:
    """Bounds on ``|f'(z)|`` for ``|z| = r``.

    ``N`` is the minimum number of series terms; summation continues until
    the next term is negligible or the target's ``max_order`` is reached.
    """
    return _two_sided(params, spec, r, N, variant, lambda n, ra: n * ra + 1)


def growth_bounds(params: ClassParams, spec: PhiSpec, r: float, N: int = 32,
                  variant: Variant | str = Variant.AS_PROVED) -> Interval:
    """Bounds on ``|f(z)|/|z|`` for ``|z| = r``; ``N`` as in :func:`distortion_bounds`."""
    return _two_sided(params, spec, r, N, variant, lambda n, ra: (n + 1) * (n * ra + 1))


def taylor_coeff_bound(params: ClassParams, spec: PhiSpec, n: int) -> float:
    """``|a_n| <= B_1 / |n + n(n-1) alpha|``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    a = _alpha(params)
    return coefficients(spec, 1)[0] / abs(n + n * (n - 1) * a)


# ---------------------------------------------------------------------------
# the H(q1, q2) function for |c3 + q1 c1 c2 + q2 c1^3|
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HResult:
    q1: float
    q2: float
    region: str
    value: float


def _le(a: float, b: float) -> bool:
    return a <= b + REGION_TOL


def _region_tests(q1: float, q2: float):
    s = abs(q1)
    t = s + 1
    cubic = 4.0 / 27.0 * t**3 - t
    low4 = -2.0 / 3.0 * t
    par = (q1 * q1 + 8) / 12.0
    rat_p = 2 * s * t / (s * s + 2 * s + 4)
    rat_m = 2 * s * (s - 1) / (s * s - 2 * s + 4)
    lin7 = 2.0 / 3.0 * (s - 1)
    return (
        ("D1", _le(s, 0.5) and _le(abs(q2), 1)),
        ("D2", _le(0.5, s) and _le(s, 2) and _le(cubic, q2) and _le(q2, 1)),
        ("D3", _le(s, 0.5) and _le(q2, -1)),
        ("D4", _le(0.5, s) and _le(q2, low4)),
        ("D5", _le(s, 2) and _le(1, q2)),
        ("D6", _le(2, s) and _le(s, 4) and _le(par, q2)),
        ("D7", _le(4, s) and _le(lin7, q2)),
        ("D8", _le(0.5, s) and _le(s, 2) and _le(low4, q2) and _le(q2, cubic)),
        ("D9", _le(2, s) and _le(low4, q2) and _le(q2, rat_p)),
        ("D10", _le(2, s) and _le(s, 4) and _le(rat_p, q2) and _le(q2, par)),
        ("D11", _le(4, s) and _le(rat_p, q2) and _le(q2, rat_m)),
        ("D12", _le(4, s) and _le(rat_m, q2) and _le(q2, lin7)),
    )


def h_region(q1: float, q2: float) -> str:
    if abs(q1 - 2) <= REGION_TOL and abs(q2 - 1) <= REGION_TOL:
        return "SpecialPoint21"
    for name, inside in _region_tests(q1, q2):
        if inside:
            return name
    raise NoRegionMatched(f"(q1, q2) = ({q1}, {q2}) lies in no listed region")


def h_branch_value(region: str, q1: float, q2: float) -> float:
    """Value of the branch of H assigned to ``region`` at ``(q1, q2)``."""
    s = abs(q1)
    if region in ("SpecialPoint21", "D1", "D2"):
        return 1.0
    if region in ("D3", "D4", "D5", "D6", "D7"):
        return abs(q2)
    if region in ("D8", "D9"):
        t = s + 1
        return 2.0 / 3.0 * t * math.sqrt(t / (3 * max(t + q2, 0.0)))
    if region in ("D10", "D11"):
        m = q1 * q1 - 4
        return q2 / 3 * (m / (q1 * q1 - 4 * q2)) * math.sqrt(max(m, 0.0) / (3 * (q2 - 1)))
    if region == "D12":
        u = s - 1
        return 2.0 / 3.0 * u * math.sqrt(u / (3 * (u - q2)))
    raise ValueError(f"unknown region {region!r}")


def eval_H(q1: float, q2: float) -> HResult:
    """Sharp maximum of ``|c3 + q1 c1 c2 + q2 c1^3|`` over Schwarz functions.

    Regions are tested in listed order after the special point ``(2, 1)``;
    the first match decides the branch.  Boundary points (within 1e-12)
    therefore belong to the earlier region.
    """
    q1, q2 = float(q1), float(q2)
    region = h_region(q1, q2)
    return HResult(q1, q2, region, h_branch_value(region, q1, q2))


H_OVERLAP_NOTE = (
    "H(q1,q2): the |q2| branch is listed for D1..D7, overlapping the constant "
    "branch on D1 and D2; regions are matched first-wins in listed order, so "
    "|q2| applies on D3..D7"
)


# ---------------------------------------------------------------------------
# logarithmic and inverse coefficients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogCoeffBounds:
    g1: float
    g2: float
    g3: float | None
    g2_branch: int
    h: HResult | None = None


@dataclass(frozen=True)
class InverseCoeffBounds:
    b2: float
    b3: float
    b4: float | None
    mu: complex
    h: HResult | None = None


def log_coeff_q(params, spec: PhiSpec) -> tuple[float, float]:
    a = _real_alpha(params, "gamma3 bound")
    B1, B2, B3 = coefficients(spec, 3)
    k = (1 + 3 * a) / (3 * (1 + a) * (1 + 2 * a))
    q1 = 2 * B2 / B1 - 2 * B1 * k
    q2 = B3 / B1 - 2 * B2 * k + B1**2 * (1 + 3 * a) / (6 * (1 + a) ** 3)
    return q1, q2


def inverse_coeff_q(params, spec: PhiSpec) -> tuple[float, float]:
    a = _real_alpha(params, "A4 bound")
    B1, B2, B3 = coefficients(spec, 3)
    k = (1 + 3 * a) / (3 * (1 + a) * (1 + 2 * a))
    q1 = 2 * (B2 / B1 - 5 * B1 * k)
    q2 = B3 / B1 - 10 * B2 * k + 5 * B1**2 * (1 + 3 * a) / (2 * (1 + a) ** 3)
    return q1, q2


def log_coeff_bounds(params: ClassParams, spec: PhiSpec) -> LogCoeffBounds:
    """Bounds on ``|gamma_1|, |gamma_2|, |gamma_3|``.

    ``g3`` is None when alpha is not real.
    """
    a = _alpha(params)
    B1, B2, _ = coefficients(spec, 3)
    g1 = B1 / (4 * abs(1 + a))
    x = abs(8 * (1 + a) ** 2 * B2 - 3 * (1 + 2 * a) * B1**2)
    if x <= 8 * B1 * abs((1 + a) ** 2):
        g2, branch = B1 / (6 * abs(1 + 2 * a)), 1
    else:
        g2, branch = x / (48 * abs((1 + a) ** 2) * abs(1 + 2 * a)), 2
    g3 = h = None
    if a.imag == 0:
        h = eval_H(*log_coeff_q(params, spec))
        g3 = B1 / (8 * (1 + 3 * a.real)) * h.value
    return LogCoeffBounds(g1, g2, g3, branch, h)


def inverse_mu(params, spec: PhiSpec) -> complex:
    a = _alpha(params)
    B1, B2 = coefficients(spec, 2)
    return 3 * B1 * (1 + 2 * a) / (2 * (1 + a) ** 2) - B2 / B1


def inverse_coeff_bounds(params: ClassParams, spec: PhiSpec) -> InverseCoeffBounds:
    """Bounds on the inverse coefficients ``|A_2|, |A_3|, |A_4|``.

    ``b4`` is None when alpha is not real.
    """
    a = _alpha(params)
    B1 = coefficients(spec, 1)[0]
    mu = inverse_mu(params, spec)
    b2 = B1 / (2 * abs(1 + a))
    b3 = B1 / (3 * abs(1 + 2 * a)) * max(1.0, abs(mu))
    b4 = h = None
    if a.imag == 0:
        h = eval_H(*inverse_coeff_q(params, spec))
        b4 = B1 / (4 * (1 + 3 * a.real)) * h.value
    return InverseCoeffBounds(b2, b3, b4, complex(mu), h)


def fekete_szego_inverse_bound(params: ClassParams, spec: PhiSpec, mu: complex) -> float:
    """Bound on ``|A_3 - mu A_2^2|`` for complex ``mu``."""
    a = _alpha(params)
    B1, B2 = coefficients(spec, 2)
    inner = 3 * B1 * (1 + 2 * a) * (complex(mu) - 2) / (4 * (1 + a) ** 2) + B2 / B1
    return B1 / (3 * abs(1 + 2 * a)) * max(1.0, abs(inner))


# ---------------------------------------------------------------------------
# second Hankel determinant of inverse coefficients
# ---------------------------------------------------------------------------

def quad_max_unit(P: float, Q: float, R: float) -> float:
    """``max_{0 <= t <= 4} P t^2 + Q t + R`` by the three-branch formula."""
    if Q <= 0 and P <= -Q / 4:
        return R
    if (Q >= 0 and P >= -Q / 8) or (Q <= 0 and P >= -Q / 4):
        return 16 * P + 4 * Q + R
    if Q > 0 and P <= -Q / 8:
        return (4 * P * R - Q * Q) / (4 * P)
    raise ValueError(f"non-finite quadratic coefficients ({P}, {Q}, {R})")


def _quad_branch(P: float, Q: float) -> tuple[str, float]:
    if Q <= 0 and P <= -Q / 4:
        return "t=0", 0.0
    if (Q >= 0 and P >= -Q / 8) or (Q <= 0 and P >= -Q / 4):
        return "t=4", 4.0
    return "vertex", -Q / (2 * P)


class HankelMethod(str, Enum):
    CASES = "cases"
    QUADRATIC = "quadratic"


@dataclass(frozen=True)
class HankelIntermediates:
    d1: float
    d2: float
    d3: float
    P: float
    Q: float
    R: float
    t_argmax: float


@dataclass(frozen=True)
class HankelBound:
    bound: float
    intermediates: HankelIntermediates
    case: str
    method: HankelMethod
    cases_bound: float | None
    quadratic_bound: float
    quadratic_branch: str
    mismatch: bool
    notes: tuple[str, ...] = field(default=())


def hankel_intermediates(params, spec: PhiSpec) -> HankelIntermediates:
    a = _real_alpha(params, "Hankel bound")
    B1, B2, B3 = coefficients(spec, 3)
    a1, a2, a3 = abs(1 + a), abs(1 + 2 * a), abs(1 + 3 * a)
    d1 = (B1**3 / (16 * a1**3) + B2**2 * a1 / (9 * B1 * a2**2)
          + B1 * abs(B2) / (12 * a1 * a2) + abs(B3) / (8 * a3))
    d2 = B1**2 / (12 * a1 * a2) + abs(B2) / (4 * a3) + 2 * abs(B2) * a1 / (9 * a2**2)
    d3 = 8 * B1 * a1 / (9 * a2**2) - B1 / (2 * a3)
    K = B1 * a1 / (9 * a2**2)
    beta = B1 / a3
    c = B1 / (16 * a1)
    P = c * (d1 - d2 - beta / 8 + K)
    Q = c * (4 * d2 - d3)
    R = B1**2 / (9 * a2**2)
    _, t = _quad_branch(P, Q)
    return HankelIntermediates(d1, d2, d3, P, Q, R, t)


def _hankel_cases(params, spec, im: HankelIntermediates) -> list[tuple[str, float]]:
    a = _real_alpha(params, "Hankel bound")
    B1 = coefficients(spec, 1)[0]
    a1, a2, a3 = abs(1 + a), abs(1 + 2 * a), abs(1 + 3 * a)
    d1, d2, d3 = im.d1, im.d2, im.d3
    K = B1 * a1 / (9 * a2**2)
    beta = B1 / a3
    gap = d1 - d2 / 2 - B1 / (16 * a3)
    matched = []
    if 4 * d2 <= d3 and d1 <= K:
        matched.append(("i", B1**2 / (9 * a2**2)))
    if (4 * d2 >= d3 and gap >= 0) or (4 * d2 <= d3 and d1 >= K):
        matched.append(("ii", B1 * d1 / a1))
    # case (iii) discriminates on 4 d1 > d3 as printed
    if 4 * d1 > d3 and gap <= 0:
        num = B1 / (16 * a1) * (16 * K * d1 - beta * d2 - 4 * d2**2 - beta**2 / 16)
        den = d1 - d2 - beta / 8 + K
        matched.append(("iii", num / den))
    return matched


def _close(x: float, y: float, rtol: float = 1e-12) -> bool:
    return abs(x - y) <= rtol * max(1.0, abs(x), abs(y))


def hankel_second_bound(params: ClassParams, spec: PhiSpec,
                        method: HankelMethod | str = HankelMethod.QUADRATIC) -> HankelBound:
    """Bound on ``|A_2 A_4 - A_3^2|`` for real alpha.

    Both the three-case statement and the quadratic-maximum route are
    evaluated.  When no case (or several disagreeing cases) match, the
    case route falls back to the quadratic one and a note is attached.
    """
    method = HankelMethod(method)
    im = hankel_intermediates(params, spec)
    quad = quad_max_unit(im.P, im.Q, im.R)
    qbranch, _ = _quad_branch(im.P, im.Q)
    notes = []
    matched = _hankel_cases(params, spec, im)
    if not matched:
        case, cases_bound = "fallback", None
        notes.append("Hankel: NoCaseMatched; cases (i)-(iii) do not cover (d1,d2,d3), "
                     "quadratic route used")
    elif any(not _close(v, matched[0][1]) for _, v in matched[1:]):
        case, cases_bound = "fallback", None
        notes.append("Hankel: cases " + ",".join(c for c, _ in matched)
                     + " match with different values; quadratic route used")
    else:
        case, cases_bound = matched[0]
    mismatch = cases_bound is not None and not _close(cases_bound, quad)
    if mismatch:
        notes.append(f"Hankel: case ({case}) value {cases_bound!r} differs from quadratic "
                     f"maximum {quad!r}")
    if method is HankelMethod.CASES and cases_bound is not None:
        bound = cases_bound
    else:
        bound = quad
    return HankelBound(bound, im, case, method, cases_bound, quad, qbranch, mismatch, tuple(notes))
