"""Ma-Minda targets phi(z) = 1 + B_1 z + B_2 z^2 + ... and the class parameter alpha."""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Sequence

import numpy as np

from .series import TruncatedSeries

DEFAULT_MAX_ORDER = 256


class PhiValidationError(ValueError):
    pass


class NonPositiveB1(PhiValidationError):
    pass


class NonRealCoefficients(PhiValidationError):
    pass


class JanowskiOrderViolation(PhiValidationError):
    pass


class PhiKind(str, Enum):
    HALF_PLANE = "halfplane"
    EXPONENTIAL = "exp"
    SQRT_LEMNISCATE = "sqrt"
    JANOWSKI = "janowski"
    CUSTOM = "custom"


_ALIASES = {
    "halfplane": PhiKind.HALF_PLANE,
    "half-plane": PhiKind.HALF_PLANE,
    "exp": PhiKind.EXPONENTIAL,
    "exponential": PhiKind.EXPONENTIAL,
    "sqrt": PhiKind.SQRT_LEMNISCATE,
    "lemniscate": PhiKind.SQRT_LEMNISCATE,
    "janowski": PhiKind.JANOWSKI,
    "custom": PhiKind.CUSTOM,
}


@dataclass(frozen=True)
class PhiSpec:
    """A target function chosen from the preset catalog or given by coefficients.

    Custom targets are polynomials ``1 + sum coeffs[k-1] z^k``; convexity of
    their image is not checked.
    """

    kind: PhiKind
    A: float | None = None
    B: float | None = None
    coeffs: tuple = ()
    max_order: int = DEFAULT_MAX_ORDER

    @classmethod
    def half_plane(cls, max_order: int = DEFAULT_MAX_ORDER) -> "PhiSpec":
        return cls(PhiKind.HALF_PLANE, max_order=max_order)

    @classmethod
    def exponential(cls, max_order: int = DEFAULT_MAX_ORDER) -> "PhiSpec":
        return cls(PhiKind.EXPONENTIAL, max_order=max_order)

    @classmethod
    def sqrt_lemniscate(cls, max_order: int = DEFAULT_MAX_ORDER) -> "PhiSpec":
        return cls(PhiKind.SQRT_LEMNISCATE, max_order=max_order)

    @classmethod
    def janowski(cls, A: float, B: float, max_order: int = DEFAULT_MAX_ORDER) -> "PhiSpec":
        return cls(PhiKind.JANOWSKI, A=float(A), B=float(B), max_order=max_order)

    @classmethod
    def custom(cls, coeffs: Sequence[complex | float], max_order: int = DEFAULT_MAX_ORDER) -> "PhiSpec":
        return cls(PhiKind.CUSTOM, coeffs=tuple(coeffs), max_order=max_order)

    @property
    def label(self) -> str:
        if self.kind is PhiKind.JANOWSKI:
            return f"janowski({self.A:g},{self.B:g})"
        if self.kind is PhiKind.CUSTOM:
            return "custom(" + ",".join(f"{c:g}" for c in self.coeffs) + ")"
        return self.kind.value

    def series(self, order: int) -> TruncatedSeries:
        """``phi`` as a truncated series with constant term 1."""
        return TruncatedSeries([1.0, *coefficients(self, order)], order)

    def __call__(self, z: complex) -> complex:
        """Closed-form value of phi at a point of the unit disk."""
        z = complex(z)
        if self.kind is PhiKind.HALF_PLANE:
            return (1 + z) / (1 - z)
        if self.kind is PhiKind.EXPONENTIAL:
            return cmath.exp(z)
        if self.kind is PhiKind.SQRT_LEMNISCATE:
            return cmath.sqrt(1 + z)
        if self.kind is PhiKind.JANOWSKI:
            return (1 + self.A * z) / (1 + self.B * z)
        return 1 + sum(c * z ** (k + 1) for k, c in enumerate(self.coeffs))

    # JSON
    def to_json(self) -> dict[str, Any]:
        params: dict[str, Any] = {}
        if self.kind is PhiKind.JANOWSKI:
            params = {"A": self.A, "B": self.B}
        elif self.kind is PhiKind.CUSTOM:
            params = {"coeffs": [_json_number(c) for c in self.coeffs]}
        doc: dict[str, Any] = {"kind": self.kind.value, "params": params}
        if self.max_order != DEFAULT_MAX_ORDER:
            doc["max_order"] = self.max_order
        return doc

    @classmethod
    def from_json(cls, doc: dict[str, Any] | str) -> "PhiSpec":
        if isinstance(doc, str):
            doc = json.loads(doc)
        if not isinstance(doc, dict):
            raise PhiValidationError("phi spec must be a JSON object")
        unknown = set(doc) - {"kind", "params", "max_order"}
        if unknown:
            raise PhiValidationError(f"unknown phi keys: {sorted(unknown)}")
        kind = parse_kind(str(doc.get("kind", "")))
        params = dict(doc.get("params") or {})
        max_order = int(doc.get("max_order", DEFAULT_MAX_ORDER))
        allowed = {PhiKind.JANOWSKI: {"A", "B"}, PhiKind.CUSTOM: {"coeffs"}}.get(kind, set())
        if set(params) - allowed:
            raise PhiValidationError(f"unknown params for {kind.value}: {sorted(set(params) - allowed)}")
        if kind is PhiKind.JANOWSKI:
            if set(params) != {"A", "B"}:
                raise PhiValidationError("janowski requires params A and B")
            spec = cls.janowski(float(params["A"]), float(params["B"]), max_order)
        elif kind is PhiKind.CUSTOM:
            spec = cls.custom([_from_json_number(c) for c in params.get("coeffs", [])], max_order)
        else:
            spec = cls(kind, max_order=max_order)
        validate(spec)
        return spec


def _json_number(c):
    c = complex(c)
    return c.real if c.imag == 0 else [c.real, c.imag]


def _from_json_number(c):
    if isinstance(c, (list, tuple)):
        return complex(c[0], c[1])
    return float(c)


def parse_kind(name: str) -> PhiKind:
    try:
        return _ALIASES[name.strip().lower()]
    except KeyError:
        raise PhiValidationError(f"unknown phi kind {name!r}") from None


def _raw_coefficients(spec: PhiSpec, n: int) -> list:
    kind = spec.kind
    if kind is PhiKind.HALF_PLANE:
        return [2.0] * n
    if kind is PhiKind.EXPONENTIAL:
        out, c = [], 1.0
        for k in range(1, n + 1):
            c /= k
            out.append(c)
        return out
    if kind is PhiKind.SQRT_LEMNISCATE:
        out, c = [], 1.0
        for k in range(1, n + 1):
            c *= (0.5 - (k - 1)) / k  # binom(1/2, k)
            out.append(c)
        return out
    if kind is PhiKind.JANOWSKI:
        A, B = spec.A, spec.B
        return [(A - B) * (-B) ** (k - 1) for k in range(1, n + 1)]
    raw = list(spec.coeffs[:n])
    return raw + [0.0] * (n - len(raw))


def validate(spec: PhiSpec) -> None:
    """Raise a PhiValidationError subclass unless the standing hypotheses hold."""
    if spec.max_order < 1:
        raise PhiValidationError("max_order must be at least 1")
    if spec.kind is PhiKind.JANOWSKI:
        if spec.A is None or spec.B is None:
            raise PhiValidationError("janowski requires A and B")
        if not (-1 <= spec.B < spec.A <= 1):
            raise JanowskiOrderViolation(f"need -1 <= B < A <= 1, got A={spec.A}, B={spec.B}")
    if spec.kind is PhiKind.CUSTOM:
        if not spec.coeffs:
            raise NonPositiveB1("custom target needs at least B_1")
        if any(complex(c).imag != 0 for c in spec.coeffs):
            raise NonRealCoefficients("target coefficients must be real")
    b1 = complex(_raw_coefficients(spec, 1)[0]).real
    if not b1 > 0:
        raise NonPositiveB1(f"B_1 must be positive, got {b1}")


def coefficients(spec: PhiSpec, n: int) -> tuple[float, ...]:
    """Taylor coefficients ``B_1..B_n`` of the target."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > spec.max_order:
        raise ValueError(f"requested {n} coefficients but max_order is {spec.max_order}")
    validate(spec)
    return tuple(float(complex(c).real) for c in _raw_coefficients(spec, n))


@dataclass(frozen=True)
class ClassParams:
    """The parameter alpha of the class; Re(alpha) must be non-negative."""

    alpha: complex = 0.0

    def __post_init__(self):
        a = complex(self.alpha)
        if not (math.isfinite(a.real) and math.isfinite(a.imag)):
            raise ValueError("alpha must be finite")
        if a.real < 0:
            raise ValueError(f"Re(alpha) must be >= 0, got {a}")
        object.__setattr__(self, "alpha", a)
        # 1 + k alpha cannot vanish when Re(alpha) >= 0, checked regardless
        k = np.arange(1, DEFAULT_MAX_ORDER + 1)
        assert np.all(np.abs(1 + k * a) > 0)

    @property
    def is_real(self) -> bool:
        return self.alpha.imag == 0

    @property
    def real(self) -> float:
        return self.alpha.real


def parse_alpha(text: str) -> complex:
    """Parse ``"a"``, ``"a+bi"``, ``"a-bi"`` or ``"bi"`` into a complex number."""
    s = text.strip().replace(" ", "").replace("I", "i")
    if not s:
        raise ValueError("empty alpha")
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        raise ValueError(f"cannot parse alpha {text!r}") from None


def format_alpha(a: complex) -> str:
    a = complex(a)
    if a.imag == 0:
        return repr(a.real)
    return f"{a.real!r}{'+' if a.imag >= 0 else '-'}{abs(a.imag)!r}i"
