import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from scipy import integrate

from coefbounds import bounds as B
from coefbounds.oracle import qe_grid_max
from coefbounds.phi import ClassParams, PhiSpec

from shared import H_PANEL, PRESETS, boundary_pairs

HP, EXP, SQRT = PhiSpec.half_plane(), PhiSpec.exponential(), PhiSpec.sqrt_lemniscate()


# ---------------------------------------------------------------------------
# distortion and growth against numerical integration
#   sum B_n x^n / (1 + n a)            = int_0^1 (phi(x t^a) - 1) dt
#   sum B_n x^n / ((n + 1)(1 + n a))   = int_0^1 int_0^1 (phi(x s t^a) - 1) ds dt
# ---------------------------------------------------------------------------

def _phi_real(spec, x):
    return spec(x).real


def distortion_oracle(spec, a, x):
    val, _ = integrate.quad(lambda t: _phi_real(spec, x * t**a) - 1, 0, 1, epsabs=1e-14, epsrel=1e-13)
    return 1 + val


def growth_oracle(spec, a, x):
    val, _ = integrate.dblquad(lambda s, t: _phi_real(spec, x * s * t**a) - 1, 0, 1, 0, 1,
                               epsabs=1e-13, epsrel=1e-12)
    return 1 + val


@pytest.mark.parametrize("name", ["halfplane", "exp", "sqrt", "janowski"])
@pytest.mark.parametrize("a", [0.0, 0.5, 1.0, 2.0])
def test_distortion_matches_integral(name, a):
    spec = PRESETS[name]
    for r in (0.25, 0.5, 0.75):
        iv = B.distortion_bounds(ClassParams(a), spec, r, N=64)
        assert iv.lo == pytest.approx(distortion_oracle(spec, a, -r), abs=1e-8)
        assert iv.hi == pytest.approx(distortion_oracle(spec, a, r), abs=1e-8)


@pytest.mark.parametrize("name", ["halfplane", "exp", "sqrt"])
@pytest.mark.parametrize("a", [0.0, 1.0])
def test_growth_matches_integral(name, a):
    spec = PRESETS[name]
    iv = B.growth_bounds(ClassParams(a), spec, 0.5, N=64)
    assert iv.lo == pytest.approx(growth_oracle(spec, a, -0.5), abs=1e-8)
    assert iv.hi == pytest.approx(growth_oracle(spec, a, 0.5), abs=1e-8)


def test_distortion_frozen_values():
    iv = B.distortion_bounds(ClassParams(1), HP, 0.5, N=64)
    # 1 + 2 sum (+-r)^n / (n + 1) = 2 log(1 -+ r) / (-+r) - 1
    assert iv.lo == pytest.approx(4 * math.log(1.5) - 1, abs=1e-12)
    assert iv.lo == pytest.approx(0.62186, abs=5e-6)
    assert iv.hi == pytest.approx(4 * math.log(2) - 1, abs=1e-12)
    assert iv.hi == pytest.approx(1.7725887222397811, abs=1e-12)
    g = B.growth_bounds(ClassParams(0), HP, 0.5, N=64)
    assert g.hi == pytest.approx(1.7725887222397811, abs=1e-12)
    e = B.growth_bounds(ClassParams(0), EXP, 0.5, N=64)
    assert e.lo == pytest.approx((1 - math.exp(-0.5)) / 0.5, abs=1e-14)
    assert e.lo == pytest.approx(0.7869386805747332, abs=1e-14)


@pytest.mark.parametrize("name", list(PRESETS))
@pytest.mark.parametrize("r", [0.1, 0.25, 0.5, 0.75, 0.9])
def test_as_proved_alpha_zero_is_phi_on_axis(name, r):
    spec = PRESETS[name]
    iv = B.distortion_bounds(ClassParams(0), spec, r, N=64)
    assert abs(iv.lo - spec(-r).real) <= max(iv.tail * 10, 1e-12) + 1e-12
    assert abs(iv.hi - spec(r).real) <= max(iv.tail * 10, 1e-12) + 1e-12


def test_half_plane_alpha_zero_interval():
    for variant in B.Variant:
        iv = B.distortion_bounds(ClassParams(0), HP, 0.5, N=64, variant=variant)
        assert iv.lo == pytest.approx(1 / 3, abs=1e-15)
        assert iv.hi == pytest.approx(3, abs=1e-15)


def test_variants_differ_only_for_signed_coefficients():
    p = ClassParams(0.5)
    stated = B.distortion_bounds(p, SQRT, 0.5, variant=B.Variant.AS_STATED)
    proved = B.distortion_bounds(p, SQRT, 0.5, variant=B.Variant.AS_PROVED)
    assert stated.lo != proved.lo
    assert proved.hi <= stated.hi
    a = B.distortion_bounds(p, EXP, 0.5, variant="as_stated")
    b = B.distortion_bounds(p, EXP, 0.5, variant="as_proved")
    assert a == b


def test_order_is_a_minimum():
    iv = B.distortion_bounds(ClassParams(0), HP, 0.75, N=64)
    assert iv.order > 64
    assert iv.hi == pytest.approx(7.0, abs=1e-12)
    assert iv.tail <= 1e-16
    short = B.distortion_bounds(ClassParams(0), PhiSpec.half_plane(max_order=40), 0.75, N=8)
    assert short.order == 39
    assert short.tail == pytest.approx(2 * 0.75**40, rel=1e-12)
    assert B.distortion_bounds(ClassParams(0), PhiSpec.custom([1.0]), 0.5, N=5).order >= 5


def test_small_radius_and_monotonicity():
    for spec in PRESETS.values():
        iv = B.growth_bounds(ClassParams(1), spec, 1e-12)
        assert iv.lo == pytest.approx(1) and iv.hi == pytest.approx(1)
        his = [B.distortion_bounds(ClassParams(1), spec, r / 10).hi for r in range(1, 10)]
        assert all(x <= y for x, y in zip(his, his[1:]))
    with pytest.raises(ValueError):
        B.distortion_bounds(ClassParams(0), HP, 1.0)


def test_complex_alpha_uses_real_part():
    a = B.distortion_bounds(ClassParams(1 + 3j), EXP, 0.5)
    b = B.distortion_bounds(ClassParams(1), EXP, 0.5)
    assert a == b


# ---------------------------------------------------------------------------
# Taylor coefficients
# ---------------------------------------------------------------------------

def test_taylor_coeff_examples():
    assert B.taylor_coeff_bound(ClassParams(0), HP, 3) == pytest.approx(2 / 3, abs=1e-15)
    assert B.taylor_coeff_bound(ClassParams(1), HP, 2) == pytest.approx(0.5, abs=1e-15)
    for spec in PRESETS.values():
        b1 = spec.series(1)[1].real
        assert B.taylor_coeff_bound(ClassParams(1j), spec, 2) == pytest.approx(b1 / (2 * math.sqrt(2)))
    with pytest.raises(ValueError):
        B.taylor_coeff_bound(ClassParams(0), HP, 1)


# ---------------------------------------------------------------------------
# H function
# ---------------------------------------------------------------------------

def test_eval_h_examples():
    assert B.eval_H(0, 0) == B.HResult(0.0, 0.0, "D1", 1.0)
    assert B.eval_H(0, -2).value == 2.0 and B.eval_H(0, -2).region == "D3"
    assert B.eval_H(2, 1).region == "SpecialPoint21" and B.eval_H(2, 1).value == 1.0
    h = B.eval_H(3, -1)
    assert h.region == "D9" and h.value == pytest.approx(16 / 9, abs=1e-15)


@pytest.mark.parametrize("region", list(H_PANEL))
def test_panel_points_classify(region):
    q1, q2 = H_PANEL[region]
    assert B.h_region(q1, q2) == region
    assert B.h_region(-q1, q2) == region


def test_regions_cover_the_plane():
    g = np.round(np.arange(-100, 101) * 0.05, 10)
    for q1 in g:
        for q2 in g:
            B.eval_H(q1, q2)


def test_boundary_continuity():
    pairs = list(boundary_pairs())
    assert len(pairs) == 20
    for ra, pa, rb, pb in pairs:
        a, b = B.eval_H(*pa), B.eval_H(*pb)
        assert (a.region, b.region) == (ra, rb)
        assert abs(a.value - b.value) <= 1e-3


def test_first_match_order():
    # D1 and D2 overlap the constant branch at |q1| = 1/2
    assert B.h_region(0.5, 0.0) == "D1"
    with pytest.raises(ValueError):
        B.h_branch_value("D13", 0, 0)


# ---------------------------------------------------------------------------
# logarithmic, inverse and Fekete-Szego bounds
# ---------------------------------------------------------------------------

def _member_symbols():
    a, B1, B2, B3, c1, c2, c3 = sp.symbols("alpha B1 B2 B3 c1 c2 c3")
    a2 = B1 * c1 / (2 * (1 + a))
    a3 = (B1 * c2 + B2 * c1**2) / (3 * (1 + 2 * a))
    a4 = (B1 * c3 + 2 * B2 * c1 * c2 + B3 * c1**3) / (4 * (1 + 3 * a))
    return (a, B1, B2, B3, c1, c2, c3), (a2, a3, a4)


def test_gamma3_q_formulas_symbolic():
    (a, B1, B2, B3, c1, c2, c3), (a2, a3, a4) = _member_symbols()
    gamma3 = (a4 - a2 * a3 + a2**3 / 3) / 2
    poly = sp.Poly(sp.expand(gamma3 * 8 * (1 + 3 * a) / B1), c1, c2, c3)
    assert sp.simplify(poly.coeff_monomial(c3) - 1) == 0
    for av, spec in ((0.0, EXP), (0.5, HP), (2.0, SQRT)):
        q1, q2 = B.log_coeff_q(av, spec)
        b1, b2, b3 = (float(x) for x in spec.series(3).coeffs[1:].real)
        subs = {a: av, B1: b1, B2: b2, B3: b3}
        assert float(poly.coeff_monomial(c1 * c2).subs(subs)) == pytest.approx(q1, abs=1e-13)
        assert float(poly.coeff_monomial(c1**3).subs(subs)) == pytest.approx(q2, abs=1e-13)


def test_inverse_q_formulas_symbolic():
    (a, B1, B2, B3, c1, c2, c3), (a2, a3, a4) = _member_symbols()
    A3 = 2 * a2**2 - a3
    A4 = -5 * a2**3 + 5 * a2 * a3 - a4
    poly = sp.Poly(sp.expand(-A4 * 4 * (1 + 3 * a) / B1), c1, c2, c3)
    assert sp.simplify(poly.coeff_monomial(c3) - 1) == 0
    poly3 = sp.Poly(sp.expand(-A3 * 3 * (1 + 2 * a) / B1), c1, c2)
    for av, spec in ((0.0, EXP), (1.0, HP), (0.5, PRESETS["janowski"])):
        q1, q2 = B.inverse_coeff_q(av, spec)
        b1, b2, b3 = (float(x) for x in spec.series(3).coeffs[1:].real)
        subs = {a: av, B1: b1, B2: b2, B3: b3}
        assert float(poly.coeff_monomial(c1 * c2).subs(subs)) == pytest.approx(q1, abs=1e-13)
        assert float(poly.coeff_monomial(c1**3).subs(subs)) == pytest.approx(q2, abs=1e-13)
        # A3 = -B1/(3(1+2a)) (c2 - mu c1^2)
        mu = -float(poly3.coeff_monomial(c1**2).subs(subs))
        assert B.inverse_mu(av, spec) == pytest.approx(mu, abs=1e-13)


def test_log_coeff_examples():
    lb = B.log_coeff_bounds(ClassParams(0), EXP)
    assert (lb.g1, lb.g2) == pytest.approx((1 / 4, 1 / 6), abs=1e-15)
    lb = B.log_coeff_bounds(ClassParams(1), EXP)
    assert (lb.g1, lb.g2) == pytest.approx((1 / 8, 1 / 18), abs=1e-15)
    lb = B.log_coeff_bounds(ClassParams(0), HP)
    assert (lb.h.q1, lb.h.q2) == pytest.approx((2 / 3, 1 / 3), abs=1e-15)
    assert lb.h.region == "D2"
    assert lb.g3 == pytest.approx(1 / 4, abs=1e-15)
    lb = B.log_coeff_bounds(ClassParams(1 + 1j), EXP)
    assert lb.g3 is None and lb.h is None


def test_gamma2_second_branch():
    # B2 large against B1 pushes the modulus past 8 B1 |1 + a|^2
    spec = PhiSpec.custom([0.1, 1.0])
    lb = B.log_coeff_bounds(ClassParams(0), spec)
    assert lb.g2_branch == 2
    assert lb.g2 == pytest.approx(abs(8 * 1.0 - 3 * 0.01) / 48)


def test_inverse_examples():
    ib = B.inverse_coeff_bounds(ClassParams(0), SQRT)
    assert (ib.b2, ib.b3) == pytest.approx((1 / 4, 1 / 6), abs=1e-15)
    ib = B.inverse_coeff_bounds(ClassParams(0), EXP)
    assert ib.b3 == pytest.approx(1 / 3, abs=1e-15)
    assert (ib.h.q1, ib.h.q2) == pytest.approx((-7 / 3, 1), abs=1e-14)
    assert B.inverse_coeff_bounds(ClassParams(1j), EXP).b4 is None


def test_fekete_szego_examples():
    for spec in PRESETS.values():
        b = spec.series(2).coeffs.real
        if abs(b[2] / b[1]) <= 1:
            for a in (0, 0.5, 1j):
                got = B.fekete_szego_inverse_bound(ClassParams(a), spec, 2)
                assert got == pytest.approx(b[1] / (3 * abs(1 + 2 * a)))
    assert B.fekete_szego_inverse_bound(ClassParams(0), HP, 0) == pytest.approx(4 / 3)
    assert B.fekete_szego_inverse_bound(ClassParams(0), HP, 1) == pytest.approx(2 / 3)
    # mu at the extremal value reproduces the A3 bound
    p = ClassParams(0.5)
    assert B.fekete_szego_inverse_bound(p, EXP, 0) == pytest.approx(B.inverse_coeff_bounds(p, EXP).b3)


@pytest.mark.parametrize("name", list(PRESETS))
@pytest.mark.parametrize("a", [0, 0.5, 1, 2, 1j, 1 + 1j])
def test_every_bound_positive_and_finite(name, a):
    spec, p = PRESETS[name], ClassParams(a)
    vals = [B.taylor_coeff_bound(p, spec, n) for n in range(2, 8)]
    lb, ib = B.log_coeff_bounds(p, spec), B.inverse_coeff_bounds(p, spec)
    vals += [lb.g1, lb.g2, ib.b2, ib.b3, B.fekete_szego_inverse_bound(p, spec, 0.5 - 1j)]
    vals += [B.distortion_bounds(p, spec, 0.5).lo, B.growth_bounds(p, spec, 0.5).lo]
    if p.is_real:
        vals += [lb.g3, ib.b4, B.hankel_second_bound(p, spec).bound]
    else:
        with pytest.raises(ValueError):
            B.hankel_second_bound(p, spec)
    assert all(math.isfinite(v) and v > 0 for v in vals)


# ---------------------------------------------------------------------------
# quadratic maximum and the Hankel bound
# ---------------------------------------------------------------------------

def test_quad_max_examples():
    assert B.quad_max_unit(-1, 0, 5) == 5
    assert B.quad_max_unit(1, 1, 0) == 20
    assert B.quad_max_unit(-1, 4, 0) == 4
    assert B.quad_max_unit(0, 0, 3) == 3


def test_quad_max_against_grid():
    rng = np.random.default_rng(11)
    for P, Q, R in rng.uniform(-5, 5, size=(1000, 3)):
        exact = B.quad_max_unit(P, Q, R)
        grid = qe_grid_max(P, Q, R, 1e-4)
        assert grid <= exact + 1e-9
        assert exact - grid <= 1e-6


def test_hankel_half_plane_intermediates():
    im = B.hankel_intermediates(ClassParams(0), HP)
    assert Fraction(im.d1).limit_denominator(1000) == Fraction(47, 36)
    assert Fraction(im.d2).limit_denominator(1000) == Fraction(23, 18)
    assert Fraction(im.d3).limit_denominator(1000) == Fraction(7, 9)
    assert im.d1 == pytest.approx(47 / 36, abs=1e-15)
    assert im.R == pytest.approx(4 / 9, abs=1e-15)
    hb = B.hankel_second_bound(ClassParams(0), HP, B.HankelMethod.CASES)
    assert hb.case == "ii"
    assert hb.bound == pytest.approx(47 / 18, abs=1e-14)
    assert hb.quadratic_bound == pytest.approx(47 / 18, abs=1e-14)
    assert not hb.mismatch


@pytest.mark.parametrize("name", list(PRESETS))
@pytest.mark.parametrize("a", [0.0, 0.5, 1.0, 2.0])
def test_hankel_methods_agree_on_panel(name, a):
    spec = PRESETS[name]
    q = B.hankel_second_bound(ClassParams(a), spec, "quadratic")
    c = B.hankel_second_bound(ClassParams(a), spec, "cases")
    if c.case != "fallback":
        assert abs(q.bound - c.bound) <= 1e-12 * max(1, q.bound)
    assert q.bound == pytest.approx(q.quadratic_bound)


def test_hankel_quadratic_matches_direct_grid():
    for spec in PRESETS.values():
        im = B.hankel_intermediates(ClassParams(0.5), spec)
        assert qe_grid_max(im.P, im.Q, im.R) == pytest.approx(B.quad_max_unit(im.P, im.Q, im.R), abs=1e-6)
