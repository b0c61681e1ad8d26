import random
from fractions import Fraction

import pytest
import sympy as sp

from hesscay.algebra import UniPoly, make_extension
from hesscay.cubic import PlaneCubic, cayleyan_primed
from hesscay.errors import DegenerateError, HypothesisViolation
from hesscay.genus2 import (RationalMap, cayleyan_model, e0_model, frey_kani_curve,
                            on_curve_residual, psi1, psi2, psi2_printed, ramification_at_infinity,
                            verify_morphism_degree)

from conftest import grid_ab, random_ab

X, Y = sp.symbols("X Y")


def _sym(poly):
    return sum(sp.Rational(c.numerator, c.denominator) * X**i for i, c in enumerate(poly.coeffs))


def test_frey_kani_example():
    C = frey_kani_curve(Fraction(1), Fraction(1))
    expected = sp.expand(-(3 * X**2 + 4) * (X**3 + X + 1))
    assert sp.expand(_sym(C.f) - expected) == 0
    assert C.f.degree == 5 and C.genus == 2


def test_squarefree_iff_hypothesis():
    for a in range(-6, 7):
        for b in range(-6, 7):
            A, B = Fraction(a), Fraction(b)
            ok = bool(A) and bool(4 * A**3 + 27 * B**2)
            if ok:
                assert frey_kani_curve(A, B).is_squarefree()
            else:
                with pytest.raises(HypothesisViolation):
                    frey_kani_curve(A, B)


@pytest.mark.parametrize("which", ["psi1", "psi2"])
def test_on_curve_identity(which):
    pairs = random_ab(random.Random(61)) + grid_ab(6)
    for A, B in pairs:
        C = frey_kani_curve(A, B)
        m, target = (psi1(A, B), e0_model(A, B)) if which == "psi1" else \
            (psi2(A, B), cayleyan_model(A, B))
        assert on_curve_residual(m, C, target).is_zero()


def test_on_curve_identity_symbolic():
    """The same identities with A, B symbolic, checked by sympy on the displayed formulas."""
    A, B = sp.symbols("A B")
    delta = 4 * A**3 + 27 * B**2
    f = -(3 * X**2 + 4 * A) * (X**3 + A * X + B)
    x1 = -(X**3 + 4 * B) / (3 * X**2 + 4 * A)
    y1sq = (X**3 + 4 * A * X - 8 * B)**2 * f / (3 * X**2 + 4 * A)**4
    assert sp.simplify(y1sq - (x1**3 + A * x1 + B)) == 0
    g = X**3 + A * X + B
    y2sq = (delta * (3 * X**2 + A))**2 * f / (9 * g**2)**2
    x2 = delta / (3 * g)
    assert sp.simplify(-3 * y2sq - (x2**3 - 18 * B * x2**2 + 3 * delta * x2)) == 0
    # the displayed sign of the x-component lands on 3y^2 = x^3 + 18Bx^2 + 3 delta x instead
    x2p = -x2
    assert sp.simplify(-3 * y2sq - (x2p**3 - 18 * B * x2p**2 + 3 * delta * x2p)) != 0
    assert sp.simplify(3 * y2sq - (x2p**3 + 18 * B * x2p**2 + 3 * delta * x2p)) == 0


def test_printed_psi2_misses_model():
    for A, B in random_ab(random.Random(62), n=5):
        C = frey_kani_curve(A, B)
        assert not on_curve_residual(psi2_printed(A, B), C, cayleyan_model(A, B)).is_zero()
    with pytest.raises(DegenerateError):
        verify_morphism_degree(psi2_printed(Fraction(1), Fraction(1)),
                               frey_kani_curve(Fraction(1), Fraction(1)),
                               cayleyan_model(Fraction(1), Fraction(1)), 101)


def test_psi1_component_degrees():
    for A, B in random_ab(random.Random(63), n=10):
        m = psi1(A, B)
        assert m.x_num.degree == 3 and m.x_den.degree == 2
        assert m.x_degree() == 3
        assert psi2(A, B).x_degree() == 3


@pytest.mark.parametrize("which", ["psi1", "psi2"])
def test_degree_certificate(which):
    A, B = Fraction(1), Fraction(1)
    C = frey_kani_curve(A, B)
    m, target = (psi1(A, B), e0_model(A, B)) if which == "psi1" else \
        (psi2(A, B), cayleyan_model(A, B))
    cert = verify_morphism_degree(m, C, target, 101)
    assert cert.certificate == 3 and cert.fiber_poly_degree == 3
    assert 1 <= cert.max_fiber <= 3
    assert sum(cert.histogram.values()) == cert.samples == 50


def test_degree_certificate_errors():
    A, B = Fraction(1), Fraction(1)
    C = frey_kani_curve(A, B)
    F = C.field
    const = RationalMap(UniPoly([F(2)], F), UniPoly([F(1)], F), UniPoly([F(1)], F),
                        UniPoly([F(1)], F))
    with pytest.raises(DegenerateError):
        verify_morphism_degree(const, C, e0_model(A, B), 101)
    # delta = 31 for A = B = 1: the target degenerates mod 31
    with pytest.raises(HypothesisViolation):
        verify_morphism_degree(psi2(A, B), C, cayleyan_model(A, B), 31)


def test_ramification_at_infinity():
    for A, B in random_ab(random.Random(64), n=10):
        C = frey_kani_curve(A, B)
        r = ramification_at_infinity(psi2(A, B), C, cayleyan_model(A, B))
        assert r.image == "x=0" and r.index == 3
        r1 = ramification_at_infinity(psi1(A, B), C, e0_model(A, B))
        assert r1.image == "O"


def test_hyperelliptic_involution_commutes():
    F = make_extension(101)
    A, B = F(3), F(7)
    C = frey_kani_curve(A, B)
    for m in (psi1(A, B), psi2(A, B)):
        for X0, Y0 in C.affine_points():
            try:
                x, y = m(X0, Y0)
            except ZeroDivisionError:
                continue
            assert m(X0, -Y0) == (x, -y)


def test_maps_send_points_to_targets():
    F = make_extension(103)
    A, B = F(2), F(5)
    C = frey_kani_curve(A, B)
    for m, target in ((psi1(A, B), e0_model(A, B)), (psi2(A, B), cayleyan_model(A, B))):
        hits = 0
        for X0, Y0 in C.affine_points():
            try:
                x, y = m(X0, Y0)
            except ZeroDivisionError:
                continue
            assert target.contains(x, y)
            hits += 1
        assert hits > 20


@pytest.mark.parametrize("p", [31, 37, 43])
def test_cayleyan_model_matches_dual_cubic(p):
    """#Ca(F_p) of the plane cubic in primed coordinates equals #model(F_p)."""
    F = make_extension(p)
    rng = random.Random(p)
    done = 0
    while done < 4:
        A, B = F.random(rng), F.random(rng)
        if not A or not 4 * A**3 + 27 * B**2:
            continue
        model = cayleyan_model(A, B)
        n_model = len(model.affine_points()) + 1
        n_plane = len(PlaneCubic(cayleyan_primed(A, B)).points())
        assert n_model == n_plane
        done += 1


def test_cayleyan_model_j():
    assert cayleyan_model(Fraction(1), Fraction(1)).j_invariant() == Fraction(-54000, 961)
