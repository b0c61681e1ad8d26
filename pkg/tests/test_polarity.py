import random
from fractions import Fraction
from math import factorial

import pytest
import sympy as sp

from hesscay.algebra import QQ, TernaryForm, canonicalize, make_extension, monomials, parse_form
from hesscay.cubic import weierstrass_form
from hesscay.errors import NotOnCurveError, SingularPointError
from hesscay.pencil import hesse_cubic, hesse_specialization
from hesscay.polarity import (DEGENERATE, ProjPoint, SymMat3, conic_kernel, hessian_form,
                              hessian_matrix, line_multiplicity, matrix_rank, plane_points, polar,
                              tangent_line, taylor_coefficients)

from oracles import brute_force_flex, form_to_sympy, proportional, sympy_hessian, x, y, z


def _random_form(rng, d, field=QQ, lo=-9, hi=9):
    coeffs = {m: rng.randint(lo, hi) for m in monomials(d)}
    coeffs = {m: c for m, c in coeffs.items() if c}
    return TernaryForm(coeffs or {(d, 0, 0): 1}, d, field)


def _random_point(rng, field=QQ):
    while True:
        v = [field(Fraction(rng.randint(-20, 20), rng.randint(1, 9))) if field is QQ
             else field.random(rng) for _ in range(3)]
        if any(v):
            return v


def _rational_sympy(c):
    return sp.Rational(c.numerator, c.denominator)


# -- polar operators --------------------------------------------------------------------


def test_polar_examples():
    W = weierstrass_form(Fraction(2), Fraction(3))
    assert polar(W, (0, 1, 0), 0) == W
    assert polar(W, (0, 1, 0), 1) == parse_form("2*y*z")
    a = (Fraction(1), Fraction(-2), Fraction(5))
    assert polar(W, a, 3).coefficient((0, 0, 0)) == factorial(3) * W(a)
    with pytest.raises(ValueError):
        polar(W, a, 4)


def test_polar_scales_with_representative():
    rng = random.Random(11)
    F = _random_form(rng, 4)
    a = _random_point(rng)
    for k in range(5):
        assert polar(F, [3 * c for c in a], k) == polar(F, a, k) * 3**k


def test_euler_identity():
    rng = random.Random(12)
    for _ in range(60):
        d = rng.randint(1, 4)
        F = _random_form(rng, d)
        a = _random_point(rng)
        for k in range(d + 1):
            falling = factorial(d) // factorial(d - k)
            assert polar(F, a, k)(a) == falling * F(a)


def test_symmetric_polar_relations():
    rng = random.Random(13)
    for _ in range(60):
        F = _random_form(rng, 3)
        a, b = _random_point(rng), _random_point(rng)
        assert F(a) == polar(F, a, 3)(b) / 6
        assert polar(F, b, 1)(a) == polar(F, a, 2)(b) / 2
        assert polar(F, b, 2)(a) / 2 == polar(F, a, 1)(b)
        assert polar(F, b, 3)(a) / 6 == F(b)


def test_taylor_expansion_against_sympy():
    rng = random.Random(14)
    s, t = sp.symbols("s t")
    for _ in range(100):
        F = _random_form(rng, 3)
        a, b = _random_point(rng), _random_point(rng)
        expr = form_to_sympy(F)
        sub = {v: s * _rational_sympy(ai) + t * _rational_sympy(bi)
               for v, ai, bi in zip((x, y, z), a, b)}
        poly = sp.Poly(sp.expand(expr.subs(sub, simultaneous=True)), s, t)
        expected = [poly.coeff_monomial(s**(3 - k) * t**k) for k in range(4)]
        got = taylor_coefficients(F, a, b)
        assert [_rational_sympy(c) for c in got] == expected
        assert got == [F(a), polar(F, b, 1)(a), polar(F, b, 2)(a) / 2, polar(F, b, 3)(a) / 6]


# -- the Hessian ----------------------------------------------------------------------


def test_weierstrass_hessian_matrix_rows():
    A, B = Fraction(5, 3), Fraction(-7, 2)
    M = hessian_matrix(weierstrass_form(A, B))
    X, Y, Z = (TernaryForm.linear(*e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    expected = [[X * -3, TernaryForm.zero(1), Z * -A],
                [TernaryForm.zero(1), Z, Y],
                [Z * -A, Y, X * -A + Z * (-3 * B)]]
    for i in range(3):
        for j in range(3):
            assert M[i, j] == expected[i][j]


def test_weierstrass_hessian_form():
    for A, B in [(1, 1), (Fraction(2, 7), -5), (-3, 0), (0, 4)]:
        A, B = Fraction(A), Fraction(B)
        He = hessian_form(weierstrass_form(A, B))
        assert He == TernaryForm({(2, 0, 1): 3 * A, (1, 0, 2): 9 * B, (1, 2, 0): 3,
                                  (0, 0, 3): -A * A}, 3, QQ)


def test_hessian_matches_sympy_on_random_cubics():
    rng = random.Random(15)
    for _ in range(20):
        F = _random_form(rng, 3)
        assert sp.expand(form_to_sympy(hessian_form(F)) - sympy_hessian(form_to_sympy(F))) == 0


def test_hessian_trivial_examples():
    assert hessian_matrix(parse_form("x^3")) == SymMat3(
        [[parse_form("3*x"), TernaryForm.zero(1), TernaryForm.zero(1)],
         [TernaryForm.zero(1)] * 3, [TernaryForm.zero(1)] * 3])
    assert hessian_form(parse_form("x*y^2 + z*y^2")).is_zero()
    with pytest.raises(ValueError):
        hessian_matrix(parse_form("x^2"))


@pytest.mark.parametrize("lam", [Fraction(2), Fraction(-1, 3), Fraction(5, 7), Fraction(1, 2)])
def test_hesse_cubic_hessian(lam):
    He = hessian_form(hesse_cubic(lam))
    assert canonicalize(He) == canonicalize(hesse_specialization(lam).He)


def test_hessian_is_cubic_in_scalar():
    rng = random.Random(16)
    for _ in range(20):
        F = _random_form(rng, 3)
        lam = Fraction(rng.randint(-30, 30) or 1, rng.randint(1, 30))
        assert hessian_form(F * lam) == hessian_form(F) * lam**3


# -- tangent lines and conic kernels -----------------------------------------------------


def test_tangent_examples():
    W = weierstrass_form(Fraction(1), Fraction(1))
    assert tangent_line(W, (0, 1, 0)) == parse_form("z")
    F = parse_form("x^3 + y^3 + z^3 - 3*x*y*z")
    assert tangent_line(F, (1, -1, 0)) == parse_form("x + y + z")
    with pytest.raises(NotOnCurveError):
        tangent_line(W, (1, 1, 1))
    with pytest.raises(SingularPointError):
        tangent_line(F, (1, 1, 1))


def test_tangent_is_second_polar():
    F7 = make_extension(101)
    rng = random.Random(17)
    n = 0
    while n < 30:
        F = _random_form(rng, 3, F7)
        pts = [P for P in plane_points(F7) if not F(P) and any(g(P) for g in F.gradient())]
        for P in pts[:3]:
            assert tangent_line(F, P) == canonicalize(polar(F, P, 2))
            n += 1


def test_conic_kernel_examples():
    one, zero = Fraction(1), Fraction(0)
    assert conic_kernel(SymMat3([[one, zero, zero], [zero, one, zero], [zero, zero, one]])) is None
    k = conic_kernel(SymMat3([[one, zero, zero], [zero, one, zero], [zero, zero, zero]]))
    assert k == ProjPoint((0, 0, 1))
    assert conic_kernel(SymMat3([[one, zero, zero], [zero, zero, zero], [zero, zero, zero]])) \
        is DEGENERATE
    A, B = Fraction(2), Fraction(-1)
    W = weierstrass_form(A, B)
    He = hessian_form(W)
    # compare with the closed form of iota on every point of He over F_103
    F = make_extension(103)
    Wp, Hp = W.reduce(F), He.reduce(F)
    Mp = hessian_matrix(Wp)
    count = 0
    for P in plane_points(F):
        if Hp(P):
            continue
        x0, y0, z0 = P.coords
        expected = (F(A) * z0 * z0, 3 * x0 * y0, -3 * x0 * z0)
        if any(expected):
            assert conic_kernel(Mp.evaluate(P)) == ProjPoint(expected, field=F)
            count += 1
    assert count > 50
    assert conic_kernel(hessian_matrix(W).evaluate((0, 1, 0))) == ProjPoint((1, 0, 0))


def test_polar_conic_rank_is_two_on_smooth_hessian():
    F = make_extension(101)
    for A, B in [(1, 1), (3, 7), (50, 2)]:
        W = weierstrass_form(F(A), F(B))
        He = hessian_form(W)
        M = hessian_matrix(W)
        for P in plane_points(F):
            if not He(P):
                assert matrix_rank(M.evaluate(P)) == 2


# -- inflection criterion ----------------------------------------------------------------


def test_inflection_criterion_brute_force():
    F = make_extension(31)
    rng = random.Random(18)
    done = 0
    while done < 20:
        C = _random_form(rng, 3, F, 0, 30)
        pts = [P for P in plane_points(F) if not C(P)]
        smooth = [P for P in pts if any(g(P) for g in C.gradient())]
        if len(smooth) != len(pts):
            continue  # singular curve; the criterion is stated for smooth cubics
        He = hessian_form(C)
        for P in smooth:
            assert brute_force_flex(C, P) == (not He(P))
        done += 1


def test_line_multiplicity():
    W = weierstrass_form(Fraction(1), Fraction(1))
    # the line at infinity meets the curve only at the flex (0:1:0), three times
    assert line_multiplicity(W, (0, 1, 0), (1, 0, 0)) == 3
    assert line_multiplicity(W, (1, 1, 1), (0, 1, 0)) == 0
