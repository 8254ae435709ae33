"""Brute-force maximizers that check the closed-form bounds.

Campaigns draw Schur parameters, build genuine class members through the
series machinery, and take the largest modulus of each functional.  Random
draws for trial ``i`` depend only on ``(seed, i)``, so serial and parallel
runs produce identical reports.
"""
from __future__ import annotations

import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from . import bounds as B
from .phi import ClassParams, PhiSpec, coefficients
from .witness import member_coeffs, monomial_params, profile_arrays, schwarz_c123, schwarz_coeffs

VIOLATION_TOL = 1e-9
_GOLDEN = (math.sqrt(5) - 1) / 2


class BoundViolated(AssertionError):
    pass


class ParameterMode(str, Enum):
    REAL = "real"
    COMPLEX = "complex"


@dataclass(frozen=True)
class SearchConfig:
    trials: int = 2000
    grid_step: float = 0.1
    refine_iters: int = 3
    seed: int = 0
    parameter_mode: ParameterMode = ParameterMode.REAL

    def __post_init__(self):
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
        if not self.grid_step > 0:
            raise ValueError("grid_step must be positive")
        if self.refine_iters < 0:
            raise ValueError("refine_iters must be non-negative")
        object.__setattr__(self, "parameter_mode", ParameterMode(self.parameter_mode))


# ---------------------------------------------------------------------------
# functionals
# ---------------------------------------------------------------------------

FUNCTIONAL_NAMES = ("an", "gamma1", "gamma2", "gamma3", "A2", "A3", "A4", "fs", "hankel2")
NEEDS_REAL_ALPHA = frozenset({"gamma3", "A4", "hankel2"})


@dataclass(frozen=True)
class Functional:
    name: str
    n: int | None = None
    mu: complex | None = None

    def __post_init__(self):
        if self.name not in FUNCTIONAL_NAMES:
            raise ValueError(f"unknown functional {self.name!r}")
        if self.name == "an" and (self.n is None or self.n < 2):
            raise ValueError("functional an needs n >= 2")
        if self.name == "fs":
            if self.mu is None:
                raise ValueError("functional fs needs mu")
            object.__setattr__(self, "mu", complex(self.mu))

    @property
    def label(self) -> str:
        if self.name == "an":
            return f"an({self.n})"
        if self.name == "fs":
            return f"fs({_fmt_complex(self.mu)})"
        return self.name

    @property
    def needs_real_alpha(self) -> bool:
        return self.name in NEEDS_REAL_ALPHA

    @property
    def order(self) -> int:
        """Series order a member needs for this functional."""
        return max(4, self.n or 0)


def _fmt_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:g}"
    return f"{z.real:g}{z.imag:+g}i"


_FUNC_RE = re.compile(r"^\s*(\w+)\s*(?:\(\s*([^)]*)\s*\))?\s*$")


def parse_functional(text: str, n: int | None = None, mu: complex | None = None) -> Functional:
    """Parse ``"an(3)"``, ``"fs(0.5)"``, ``"gamma2"`` etc.; ``n``/``mu`` fill in bare names."""
    m = _FUNC_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse functional {text!r}")
    name, arg = m.group(1), m.group(2)
    if name == "an":
        return Functional("an", n=int(arg) if arg else n)
    if name == "fs":
        val = complex(arg.replace("i", "j")) if arg else mu
        return Functional("fs", mu=val)
    if arg:
        raise ValueError(f"functional {name!r} takes no argument")
    return Functional(name)


def closed_form_bound(params: ClassParams, spec: PhiSpec, fn: Functional) -> float:
    name = fn.name
    if fn.needs_real_alpha and not params.is_real:
        raise ValueError(f"{fn.label} bound requires real alpha")
    if name == "an":
        return B.taylor_coeff_bound(params, spec, fn.n)
    if name.startswith("gamma"):
        lb = B.log_coeff_bounds(params, spec)
        return {"gamma1": lb.g1, "gamma2": lb.g2, "gamma3": lb.g3}[name]
    if name in ("A2", "A3", "A4"):
        ib = B.inverse_coeff_bounds(params, spec)
        return {"A2": ib.b2, "A3": ib.b3, "A4": ib.b4}[name]
    if name == "fs":
        return B.fekete_szego_inverse_bound(params, spec, fn.mu)
    return B.hankel_second_bound(params, spec, B.HankelMethod.QUADRATIC).bound


def _functional_moduli(a: np.ndarray, prof: dict, fn: Functional) -> np.ndarray:
    g, A = prof["gamma"], prof["inv"]
    name = fn.name
    if name == "an":
        return np.abs(a[..., fn.n])
    if name in ("gamma1", "gamma2", "gamma3"):
        return np.abs(g[..., int(name[-1]) - 1])
    if name in ("A2", "A3", "A4"):
        return np.abs(A[..., int(name[-1]) - 2])
    if name == "fs":
        return np.abs(A[..., 1] - fn.mu * A[..., 0] ** 2)
    return np.abs(A[..., 0] * A[..., 2] - A[..., 1] ** 2)


def evaluate_functionals(params: ClassParams, spec: PhiSpec, functionals: Sequence[Functional],
                         sigma: np.ndarray) -> np.ndarray:
    """Moduli of each functional for each row of Schur parameters.

    Returns an array of shape ``(len(sigma), len(functionals))``.
    """
    sigma = np.atleast_2d(np.asarray(sigma, dtype=complex))
    order = max(fn.order for fn in functionals)
    phi = np.array([1.0, *coefficients(spec, order)])
    w = schwarz_coeffs(sigma, order)
    a = member_coeffs(phi, params.alpha, w)
    prof = profile_arrays(a)
    return np.stack([_functional_moduli(a, prof, fn) for fn in functionals], axis=-1)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def draw_params(seed: int, index: int, dim: int, mode: ParameterMode) -> np.ndarray:
    """Schur parameters for trial ``index``; a pure function of its arguments."""
    rng = np.random.default_rng([seed, index])
    if ParameterMode(mode) is ParameterMode.REAL:
        return rng.uniform(-1.0, 1.0, dim).astype(complex)
    modulus = rng.uniform(0.0, 1.0, dim)
    phase = rng.uniform(0.0, 2 * np.pi, dim)
    return modulus * np.exp(1j * phase)


def panel_params(dim: int, extra_powers: Sequence[int] = ()) -> np.ndarray:
    """Deterministic panel ``w = 0, z, z^2, z^3`` plus ``z^k`` for ``extra_powers``."""
    rows = []
    for k in dict.fromkeys([0, 1, 2, 3, *extra_powers]):
        p = list(monomial_params(k))
        if len(p) > dim:
            continue
        rows.append(p + [0j] * (dim - len(p)))
    return np.array(rows, dtype=complex)


def _trial_block(args) -> tuple[np.ndarray, np.ndarray]:
    params, spec, functionals, seed, start, stop, dim, mode = args
    sigma = np.array([draw_params(seed, i, dim, mode) for i in range(start, stop)])
    if len(sigma) == 0:
        return sigma.reshape(0, dim), np.zeros((0, len(functionals)))
    return sigma, evaluate_functionals(params, spec, functionals, sigma)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    functional: str
    bound: float
    observed_max: float
    argmax_params: list
    sharpness_ratio: float
    violations: int
    evaluations: int
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def raise_for_violation(self) -> None:
        if self.violations:
            raise BoundViolated(
                f"{self.functional}: observed {self.observed_max!r} exceeds bound {self.bound!r} "
                f"({self.violations} violations)"
            )

    def to_json(self) -> dict:
        return asdict(self)


def _params_to_json(p: np.ndarray) -> list:
    return [float(x.real) if x.imag == 0 else [float(x.real), float(x.imag)] for x in p]


# ---------------------------------------------------------------------------
# local refinement
# ---------------------------------------------------------------------------

def golden_max(fun: Callable[[np.ndarray], np.ndarray], lo, hi, iters: int = 40):
    """Golden-section search for maxima, run independently on each row.

    ``fun`` maps an array of abscissae (one per row) to the row values.
    Returns the best abscissae and values seen, endpoints included.
    """
    a = np.array(lo, dtype=float, ndmin=1)
    b = np.array(hi, dtype=float, ndmin=1)
    best_t, best_v = a.copy(), fun(a)
    vb = fun(b)
    take = vb > best_v
    best_t[take], best_v[take] = b[take], vb[take]
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = fun(x1), fun(x2)
    for x, f in ((x1, f1), (x2, f2)):
        take = f > best_v
        best_t[take], best_v[take] = x[take], f[take]
    for _ in range(iters):
        right = f1 < f2  # maximum lies in [x1, b]
        a = np.where(right, x1, a)
        b = np.where(right, b, x2)
        nx1 = np.where(right, x2, b - _GOLDEN * (b - a))
        nx2 = np.where(right, a + _GOLDEN * (b - a), x1)
        probe = np.where(right, nx2, nx1)
        fp = fun(probe)
        f1, f2 = np.where(right, f2, fp), np.where(right, fp, f1)
        x1, x2 = nx1, nx2
        take = fp > best_v
        best_t[take], best_v[take] = probe[take], fp[take]
        if np.all(b - a < 1e-12):
            break
    return best_t, best_v


def refine(objective: Callable[[np.ndarray], np.ndarray], start: np.ndarray, lows: np.ndarray,
           highs: np.ndarray, scales: np.ndarray, step: float, rounds: int):
    """Coordinatewise golden-section refinement of each row of ``start``.

    Each round sweeps every coordinate over ``[x - step*scale, x + step*scale]``
    clipped to ``[low, high]``.  ``objective`` maps a ``(K, D)`` array of
    coordinates to ``K`` values.  Returns best coordinates and values.
    """
    x = np.array(start, dtype=float, ndmin=2)
    best = objective(x)
    for _ in range(rounds):
        for i in range(x.shape[1]):
            lo = np.maximum(lows[i], x[:, i] - step * scales[i])
            hi = np.minimum(highs[i], x[:, i] + step * scales[i])

            def along(t, i=i):
                y = x.copy()
                y[:, i] = t
                return objective(y)

            t, v = golden_max(along, lo, hi)
            take = v > best
            x[take, i] = t[take]
            best = np.where(take, v, best)
    return x, best


def _coord_box(dim: int, mode: ParameterMode):
    if mode is ParameterMode.REAL:
        return np.full(dim, -1.0), np.full(dim, 1.0), np.ones(dim)
    lows = np.concatenate([np.zeros(dim), np.full(dim, -np.inf)])
    highs = np.concatenate([np.ones(dim), np.full(dim, np.inf)])
    scales = np.concatenate([np.ones(dim), np.full(dim, np.pi)])
    return lows, highs, scales


def _to_coords(p: np.ndarray, mode: ParameterMode) -> np.ndarray:
    if mode is ParameterMode.REAL:
        return p.real.copy()
    return np.concatenate([np.abs(p), np.angle(p)], axis=-1)


def _from_coords(x: np.ndarray, mode: ParameterMode) -> np.ndarray:
    if mode is ParameterMode.REAL:
        return x.astype(complex)
    d = x.shape[-1] // 2
    return x[..., :d] * np.exp(1j * x[..., d:])


# ---------------------------------------------------------------------------
# campaigns
# ---------------------------------------------------------------------------

def campaign(params: ClassParams, spec: PhiSpec, functionals: Sequence[Functional],
             cfg: SearchConfig, jobs: int = 1, panel: np.ndarray | None = None) -> list[VerificationReport]:
    """Search every functional over one shared sample of Schwarz functions.

    The sample is the deterministic panel plus ``cfg.trials`` random draws;
    the best draw for each functional is then refined locally.  Every
    evaluated member counts toward the violation tally.
    """
    functionals = list(functionals)
    if not functionals:
        return []
    for fn in functionals:
        if fn.needs_real_alpha and not params.is_real:
            raise ValueError(f"{fn.label} requires real alpha")
    order = max(fn.order for fn in functionals)
    dim = order - 1
    mode = cfg.parameter_mode
    if panel is None:
        panel = panel_params(dim, [fn.n - 1 for fn in functionals if fn.name == "an"])
    panel = np.asarray(panel, dtype=complex).reshape(-1, dim)
    nfn = len(functionals)
    sigmas = [panel]
    values = [evaluate_functionals(params, spec, functionals, panel) if len(panel)
              else np.zeros((0, nfn))]

    if cfg.trials:
        chunk = max(1, -(-cfg.trials // max(1, jobs)))
        blocks = [(params, spec, functionals, cfg.seed, s, min(s + chunk, cfg.trials), dim, mode)
                  for s in range(0, cfg.trials, chunk)]
        if jobs > 1 and len(blocks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_trial_block, blocks))
        else:
            results = [_trial_block(b) for b in blocks]
        for s, v in results:
            sigmas.append(s)
            values.append(v)

    sigma = np.concatenate(sigmas, axis=0)
    vals = np.concatenate(values, axis=0)
    bounds = np.array([closed_form_bound(params, spec, fn) for fn in functionals], dtype=float)
    evaluations = np.full(nfn, len(vals))
    violations = np.sum(vals > bounds + VIOLATION_TOL, axis=0)
    if len(vals):
        idx = np.argmax(vals, axis=0)  # first maximizer on ties
        best_p = sigma[idx]
        best_v = vals[idx, np.arange(nfn)]
    else:
        best_p = np.zeros((nfn, dim), dtype=complex)
        best_v = np.zeros(nfn)

    if cfg.refine_iters and len(vals):
        rows = np.arange(nfn)

        def objective(x):
            v = evaluate_functionals(params, spec, functionals, _from_coords(x, mode))[rows, rows]
            evaluations[:] += 1
            violations[:] += v > bounds + VIOLATION_TOL
            return v

        lows, highs, scales = _coord_box(dim, mode)
        x, v = refine(objective, _to_coords(best_p, mode), lows, highs, scales,
                      cfg.grid_step, cfg.refine_iters)
        better = v > best_v
        best_p = np.where(better[:, None], _from_coords(x, mode), best_p)
        best_v = np.where(better, v, best_v)

    reports = []
    for j, fn in enumerate(functionals):
        bound = float(bounds[j])
        observed = float(best_v[j])
        reports.append(VerificationReport(
            functional=fn.label,
            bound=bound,
            observed_max=observed,
            argmax_params=_params_to_json(best_p[j]),
            sharpness_ratio=observed / bound if bound > 0 else math.inf,
            violations=int(violations[j]),
            evaluations=int(evaluations[j]),
        ))
    return reports


def verify_class_bounds(params: ClassParams, spec: PhiSpec, functional: Functional | str,
                        cfg: SearchConfig, jobs: int = 1) -> VerificationReport:
    """Search one functional and compare the observed maximum with its closed-form bound."""
    if isinstance(functional, str):
        functional = parse_functional(functional)
    return campaign(params, spec, [functional], cfg, jobs=jobs)[0]


# ---------------------------------------------------------------------------
# H function and quadratic maximum
# ---------------------------------------------------------------------------

def _h_values(sigma: np.ndarray, q1: float, q2: float) -> np.ndarray:
    c1, c2, c3 = schwarz_c123(sigma)
    return np.abs(c3 + q1 * c1 * c2 + q2 * c1**3)


def _h_reduced(x: np.ndarray, q1: float, q2: float) -> np.ndarray:
    """Max over sigma_2 of the H functional, given (sigma_0 real, |sigma_1|, arg sigma_1).

    With sigma_0, sigma_1 fixed the functional is ``e0 e1 sigma_2 + X``, so the
    best sigma_2 on the closed disk gives ``e0 e1 + |X|``.
    """
    s0 = x[..., 0]
    s1 = x[..., 1] * np.exp(1j * x[..., 2])
    e0 = 1 - s0 * s0
    e1 = 1 - x[..., 1] ** 2
    c1, c2 = s0, e0 * s1
    rest = -s0 * e0 * s1**2 + q1 * c1 * c2 + q2 * c1**3
    return e0 * e1 + np.abs(rest)


def h_oracle(q1: float, q2: float, cfg: SearchConfig | None = None) -> float:
    """Brute-force ``max |c3 + q1 c1 c2 + q2 c1^3|`` over Schwarz functions.

    Real mode scans Schur parameters on a grid of ``[-1, 1]^3``.  Complex
    mode rotates ``c1`` onto the real axis, scans ``sigma_0`` in ``[-1, 1]``
    and ``sigma_1`` on a polar grid over the upper half disk, and places
    ``sigma_2`` optimally on the unit circle.  Both finish with coordinatewise refinement.
    """
    cfg = cfg or SearchConfig(trials=0, grid_step=1e-2, parameter_mode=ParameterMode.COMPLEX)
    step = cfg.grid_step
    g = np.linspace(-1.0, 1.0, int(round(2.0 / step)) + 1)
    if cfg.parameter_mode is ParameterMode.REAL:
        u, v = np.meshgrid(g, g, indexing="ij")

        def values(x):
            return _h_values(x.astype(complex), q1, q2)

        lows, highs, scales = np.full(3, -1.0), np.full(3, 1.0), np.ones(3)
    else:
        rho = np.linspace(0.0, 1.0, int(round(1.0 / step)) + 1)
        # conjugating every parameter conjugates the functional, so half the circle suffices
        theta = np.linspace(0.0, np.pi, int(np.ceil(np.pi / step)) + 1)
        u, v = np.meshgrid(rho, theta, indexing="ij")

        def values(x):
            return _h_reduced(x, q1, q2)

        lows = np.array([-1.0, 0.0, -np.inf])
        highs = np.array([1.0, 1.0, np.inf])
        scales = np.array([1.0, 1.0, 1.0])
    u, v = u.ravel(), v.ravel()
    best_v, best_x = -1.0, None
    for s0 in g:
        x = np.stack([np.full_like(u, s0), u, v], axis=-1)
        val = values(x)
        i = int(np.argmax(val))
        if val[i] > best_v:
            best_v, best_x = float(val[i]), x[i]
    if cfg.parameter_mode is ParameterMode.COMPLEX and cfg.trials:
        sig = np.array([draw_params(cfg.seed, i, 3, ParameterMode.COMPLEX) for i in range(cfg.trials)])
        val = _h_values(sig, q1, q2)
        i = int(np.argmax(val))
        if val[i] > best_v:
            best_v = float(val[i])
    if cfg.refine_iters and best_x is not None:
        _, v_ref = refine(values, best_x, lows, highs, scales, step, cfg.refine_iters)
        best_v = max(best_v, float(v_ref[0]))
    return best_v


def qe_grid_max(P: float, Q: float, R: float, step: float = 1e-4) -> float:
    """Direct maximum of ``P t^2 + Q t + R`` on a uniform grid of ``[0, 4]``."""
    if not 0 < step <= 1e-3:
        raise ValueError("step must lie in (0, 1e-3]")
    t = np.linspace(0.0, 4.0, int(round(4.0 / step)) + 1)
    return float(np.max((P * t + Q) * t + R))
