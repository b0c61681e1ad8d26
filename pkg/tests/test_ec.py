import json
import random
from fractions import Fraction
from itertools import product

import pytest
import sympy as sp

from hesscay.algebra import make_extension
from hesscay.cubic import f0_weierstrass
from hesscay.ec import (Classification, CurvePoint, PairingValue, TorsionInstance,
                        WeierstrassCurve, classify_isomorphism, find_full_torsion_instance,
                        get_fixture, has_full_3_torsion, j_from_coefficients, load_fixtures,
                        save_fixtures, scaled_to_standard, torsion_basis, weil_pairing_3)
from hesscay.errors import DegenerateError, HypothesisViolation
from hesscay.polarity import hessian_form

from conftest import FIXTURES, random_ab
from oracles import A as sA, B as sB, miller_pairing_3


# -- j-invariants and scaling -------------------------------------------------------------


def test_j_examples():
    assert WeierstrassCurve(Fraction(1), Fraction(0)).j_invariant() == 1728
    assert WeierstrassCurve(Fraction(0), Fraction(1)).j_invariant() == 0
    with pytest.raises(HypothesisViolation):
        WeierstrassCurve(Fraction(-3), Fraction(2))


def test_scaled_to_standard():
    a, b = Fraction(3, 5), Fraction(-7, 2)
    assert scaled_to_standard(1, a, b) == (a, b)
    assert scaled_to_standard(-1, a, b) == (a, -b)
    with pytest.raises(DegenerateError):
        scaled_to_standard(0, a, b)
    # j is unchanged by the scaling
    for c in (Fraction(2), Fraction(-5, 3)):
        assert j_from_coefficients(*scaled_to_standard(c, a, b)) == j_from_coefficients(a, b)


def test_j_relation_f0():
    """j(F0) * j(E0) = 1728^2 for F0: delta y^2 = x^3 - delta x - 2B delta."""
    rng = random.Random(31)
    for A, B in random_ab(rng, need_b=True):
        F0 = f0_weierstrass(A, B)
        delta = F0.coefficient((0, 2, 1))
        c = delta / -F0.coefficient((3, 0, 0))
        a = F0.coefficient((1, 0, 2)) / F0.coefficient((3, 0, 0))
        b = F0.coefficient((0, 0, 3)) / F0.coefficient((3, 0, 0))
        # c y^2 = x^3 + a x + b after dividing by the x^3 coefficient
        jF = j_from_coefficients(*scaled_to_standard(c, a, b))
        assert jF * WeierstrassCurve(A, B).j_invariant() == 1728**2


# -- the 3-division polynomial and E[3] ------------------------------------------------------


def test_division_poly_example():
    assert WeierstrassCurve(Fraction(-1), Fraction(0)).division_poly_3().coeffs == \
        tuple(Fraction(c) for c in (-1, 0, -6, 0, 3))


def test_division_poly_is_hessian_on_curve():
    X, Y = sp.symbols("X Y")
    for A, B in random_ab(random.Random(32)):
        E = WeierstrassCurve(A, B)
        He = hessian_form(E.plane_cubic().form)
        expr = sum(sp.Rational(c.numerator, c.denominator) * X**i * Y**j
                   for (i, j, k), c in He.items())
        expr = sp.expand(expr.subs(Y**2, X**3 + sp.Rational(A.numerator, A.denominator) * X
                                   + sp.Rational(B.numerator, B.denominator)))
        psi = sum(sp.Rational(c.numerator, c.denominator) * X**i
                  for i, c in enumerate(E.division_poly_3().coeffs))
        assert sp.expand(expr - psi) == 0
    # the same identity symbolically in A, B
    x = sp.Symbol("x")
    lhs = 3 * x * (x**3 + sA * x + sB) + (3 * sA * x**2 + 9 * sB * x - sA**2)
    assert sp.expand(lhs - (3 * x**4 + 6 * sA * x**2 + 12 * sB * x - sA**2)) == 0


@pytest.mark.parametrize("p", [7, 13, 19, 31, 37])
def test_torsion3_matches_scan(p):
    F = make_extension(p)
    rng = random.Random(p)
    for _ in range(6):
        A, B = F.random(rng), F.random(rng)
        if not 4 * A**3 + 27 * B**2:
            continue
        E = WeierstrassCurve(A, B)
        scan = {P for P in E.points() if E.mul(3, P).is_infinity}
        got = E.torsion3()
        assert set(got) == scan and len(got) == len(scan)
        assert len(got) in (1, 3, 9)
        for P in got:
            assert E.add(P, E.add(P, P)).is_infinity


def test_full_torsion_is_group(fixture_first):
    E = fixture_first.curve
    pts = E.torsion3()
    assert len(pts) == 9
    S = set(pts)
    for P, Q in product(pts, repeat=2):
        assert E.add(P, Q) in S


def test_no_torsion_example():
    F = make_extension(7)
    found = None
    for a, b in product(range(1, 7), range(7)):
        if not (4 * a**3 + 27 * b**2) % 7:
            continue
        E = WeierstrassCurve(F(a), F(b))
        if len(E.torsion3()) == 1:
            found = E
            break
    assert found is not None
    assert [P for P in found.points() if found.mul(3, P).is_infinity] == [CurvePoint.infinity()]


# -- the Weil pairing -------------------------------------------------------------------------


@pytest.fixture(scope="module", params=["first", "k1"])
def instance(request):
    return get_fixture(request.param, FIXTURES)


def test_pairing_trivial_cases(instance):
    E = instance.curve
    O = CurvePoint.infinity()
    for P in E.torsion3():
        assert weil_pairing_3(E, P, P).is_trivial
        assert weil_pairing_3(E, P, O).is_trivial
        assert weil_pairing_3(E, O, P).is_trivial


def test_pairing_alternating_and_bilinear(instance):
    E = instance.curve
    pts = E.torsion3()
    table = {(P, Q): weil_pairing_3(E, P, Q) for P, Q in product(pts, repeat=2)}
    for P, Q in product(pts, repeat=2):
        assert table[P, Q] * table[Q, P] == PairingValue(0)
    for P, P2, Q in product(pts, repeat=3):
        assert table[E.add(P, P2), Q] == table[P, Q] * table[P2, Q]


def test_pairing_nondegenerate(instance):
    E = instance.curve
    basis = torsion_basis(E)
    assert not basis.pairing.is_trivial
    assert (weil_pairing_3(E, basis.P1, basis.P2) * weil_pairing_3(E, basis.P2, basis.P1)).is_trivial


def test_pairing_independent_of_auxiliary_point(instance):
    E = instance.curve
    basis = torsion_basis(E)
    values = {weil_pairing_3(E, basis.P1, basis.P2, seed=s).exponent for s in range(10)}
    assert len(values) == 1


def test_pairing_matches_miller_oracle(instance):
    E = instance.curve
    pts = [P for P in E.torsion3() if not P.is_infinity]
    aux = [(P.x, P.y) for P in E.points() if not P.is_infinity]
    rng = random.Random(33)
    for P, Q in product(pts, repeat=2):
        rng.shuffle(aux)
        expected = miller_pairing_3(E, (P.x, P.y), (Q.x, Q.y), aux)
        assert weil_pairing_3(E, P, Q).value == expected


def test_pairing_requires_cube_roots():
    F = make_extension(11)
    E = WeierstrassCurve(F(1), F(1))
    O = CurvePoint.infinity()
    with pytest.raises(ValueError):
        weil_pairing_3(E, O, O)


def test_fixtures_file_consistent():
    raw = json.loads(FIXTURES.read_text())
    for name, d in raw.items():
        inst = TorsionInstance.from_json(d)
        assert inst.to_json() == d
        assert has_full_3_torsion(inst.curve.A, inst.curve.B)
    assert find_full_torsion_instance() == get_fixture("first", FIXTURES)
    assert find_full_torsion_instance(require_k1=True) == get_fixture("k1", FIXTURES)


def test_fixture_roundtrip(tmp_path):
    fx = load_fixtures(FIXTURES)
    out = save_fixtures(fx, tmp_path / "fx.json")
    assert load_fixtures(out) == fx


# -- classification ------------------------------------------------------------------------------


def test_classify_identity_and_negation(instance):
    E = instance.curve
    b = torsion_basis(E)
    assert classify_isomorphism(E, E, (b.P1, b.P2), (b.P1, b.P2)).verdict is \
        Classification.SYMPLECTIC
    neg = (E.neg(b.P1), E.neg(b.P2))
    assert classify_isomorphism(E, E, (b.P1, b.P2), neg).verdict is Classification.SYMPLECTIC
    swap = (b.P2, b.P1)
    assert classify_isomorphism(E, E, (b.P1, b.P2), swap).verdict is \
        Classification.ANTI_SYMPLECTIC
    assert classify_isomorphism(E, E, (b.P1, b.P2), (b.P1, b.P1)).verdict is \
        Classification.NEITHER


def test_classify_detects_nonlinear_correspondence(instance):
    E = instance.curve
    b = torsion_basis(E)
    bad = {E.add(b.P1, b.P2): b.P1}
    res = classify_isomorphism(E, E, (b.P1, b.P2), (b.P1, b.P2), correspondence=bad)
    assert res.verdict is Classification.NEITHER


def test_two_isogeny_squares_the_pairing(fixture_k1):
    """A degree-2 isogeny multiplies e_3 by its degree: e(phi P1, phi P2) = e(P1, P2)^2."""
    E = fixture_k1.curve
    F = E.field
    x0 = next(x for x in F.elements() if not E.rhs(x))
    t = 3 * x0 * x0 + E.A
    w = x0 * t
    E2 = WeierstrassCurve(E.A - 5 * t, E.B - 7 * w)

    def phi(P):
        if P.is_infinity or P.x == x0:
            return CurvePoint.infinity()
        d = P.x - x0
        return CurvePoint(P.x + t / d, P.y * (1 - t / (d * d)))

    b = torsion_basis(E)
    Q1, Q2 = phi(b.P1), phi(b.P2)
    assert E2.contains(Q1) and E2.contains(Q2)
    assert weil_pairing_3(E2, Q1, Q2) == b.pairing**2 == b.pairing.inverse()
    assert classify_isomorphism(E, E2, (b.P1, b.P2), (Q1, Q2)).verdict is \
        Classification.ANTI_SYMPLECTIC
