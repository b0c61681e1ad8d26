"""Plane cubics with an inflection origin: chord-tangent group law, flexes, the
involution on the Hessian, and the Cayleyan curve."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import (QQ, TernaryForm, UniPoly, canonicalize, common_field, crt_pair,
                      divide_exact, is_prime, make_extension, monomials, nullspace,
                      rational_reconstruction, uni_roots)
from .errors import (DegenerateError, HypothesisViolation, InsufficientSamplesError,
                     NotOnCurveError, SingularPointError)
from .polarity import (DEGENERATE, DualPoint, ProjPoint, conic_kernel, gradient_at,
                       hessian_form, hessian_matrix, plane_points, polar, tangent_line)

HE_SINGULAR_MSG = "He(E) is singular if and only if A(4A^3+27B^2)=0"


def weierstrass_form(A, B, field=None) -> TernaryForm:
    """y^2 z - x^3 - A x z^2 - B z^3."""
    field = field or common_field(A, B)
    return TernaryForm({(0, 2, 1): 1, (3, 0, 0): -1, (1, 0, 2): -field(A), (0, 0, 3): -field(B)},
                       3, field)


def check_hessian_smooth(A, B) -> None:
    """Raise HypothesisViolation unless A * (4A^3 + 27B^2) != 0."""
    if not A or not (4 * A**3 + 27 * B**2):
        raise HypothesisViolation(HE_SINGULAR_MSG)


def _point_like(template: ProjPoint, coords) -> ProjPoint:
    return type(template)(coords, field=template.field)


class PlaneCubic:
    """A plane cubic F = 0, optionally with a marked inflection point as origin.

    Group operations need the origin.  Points are ProjPoints (DualPoints when
    the cubic lives in the dual plane).
    """

    def __init__(self, form: TernaryForm, origin: ProjPoint | Sequence | None = None):
        if form.degree != 3:
            raise ValueError(f"a plane cubic needs a degree-3 form, got {form.degree}")
        self.form = form
        self.field = form.field
        self._grad = form.gradient()
        self._half_hess = hessian_matrix(form)
        self._hessian = None
        self._points = None
        if origin is not None:
            origin = self.point(origin)
            if form(origin):
                raise NotOnCurveError(f"origin {origin} is not on the curve")
            if not any(g(origin) for g in self._grad):
                raise SingularPointError(f"origin {origin} is singular")
            if self.hessian(origin):
                raise ValueError(f"origin {origin} is not an inflection point")
        self.origin = origin

    def point(self, coords) -> ProjPoint:
        cls = DualPoint if self.form.dual else ProjPoint
        if isinstance(coords, ProjPoint):
            if coords.dual != self.form.dual:
                raise ValueError("point and curve live in different planes")
            return coords
        return cls(coords, field=self.field)

    @property
    def hessian(self) -> TernaryForm:
        if self._hessian is None:
            self._hessian = hessian_form(self.form)
        return self._hessian

    def __contains__(self, point) -> bool:
        return not self.form(point)

    def is_smooth_at(self, point) -> bool:
        return any(g(point) for g in self._grad)

    def gradient(self, point) -> tuple:
        return tuple(g(point) for g in self._grad)

    def polar_matrix(self, point):
        """F''(a)/2 as a scalar symmetric matrix (the matrix of the polar conic P_a)."""
        return self._half_hess.evaluate(point)

    def _require_on(self, *pts) -> None:
        for P in pts:
            if self.form(P):
                raise NotOnCurveError(f"{P} is not on the curve")

    # group law ----------------------------------------------------------------

    def third_intersection(self, P, Q) -> ProjPoint:
        """Residual point of the line PQ (the tangent if P == Q) on the cubic."""
        P, Q = self.point(P), self.point(Q)
        self._require_on(P, Q)
        if P == Q:
            grad = self.gradient(P)
            if not any(grad):
                raise SingularPointError(f"{P} is a singular point")
            b = self._other_point_on_line(grad, P)
            # F(sP + tb) = t^2 (c2 s + c3 t): c0 = c1 = 0 since P is a smooth point of the tangent
            c2 = self.polar_matrix(P).bilinear(b.coords, b.coords)
            c3 = self.form(b)
            if not c2 and not c3:
                raise DegenerateError("tangent line is contained in the curve")
            coords = tuple(c3 * p - c2 * q for p, q in zip(P.coords, b.coords))
            return _point_like(P, coords)
        # F(sP + tQ) = s t (c1 s + c2 t)
        c1 = sum((g * q for g, q in zip(self.gradient(P), Q.coords)), self.field.zero)
        c2 = self.polar_matrix(P).bilinear(Q.coords, Q.coords)
        if not c1 and not c2:
            raise DegenerateError(f"the line through {P} and {Q} lies on the curve")
        coords = tuple(c2 * p - c1 * q for p, q in zip(P.coords, Q.coords))
        return _point_like(P, coords)

    def _other_point_on_line(self, line: Sequence, P: ProjPoint) -> ProjPoint:
        one, zero = self.field.one, self.field.zero
        basis = ((one, zero, zero), (zero, one, zero), (zero, zero, one))
        for e in basis:
            c = (line[1] * e[2] - line[2] * e[1], line[2] * e[0] - line[0] * e[2],
                 line[0] * e[1] - line[1] * e[0])
            if any(c):
                b = _point_like(P, c)
                if b != P:
                    return b
        raise AssertionError("a line has at least two points")  # pragma: no cover

    def _require_origin(self) -> ProjPoint:
        if self.origin is None:
            raise ValueError("group law needs a marked inflection origin")
        return self.origin

    def neg(self, P) -> ProjPoint:
        return self.third_intersection(P, self._require_origin())

    def add(self, P, Q) -> ProjPoint:
        O = self._require_origin()
        return self.third_intersection(self.third_intersection(P, Q), O)

    def sub(self, P, Q) -> ProjPoint:
        return self.add(P, self.neg(Q))

    def mul(self, n: int, P) -> ProjPoint:
        O = self._require_origin()
        if n < 0:
            return self.mul(-n, self.neg(P))
        result, base = O, self.point(P)
        while n:
            if n & 1:
                result = self.add(result, base)
            base = self.add(base, base)
            n >>= 1
        return result

    # enumeration ----------------------------------------------------------------

    def points(self) -> list[ProjPoint]:
        """All F_q-rational points (finite fields only)."""
        if not self.field.is_finite:
            raise ValueError("point enumeration needs a finite field")
        if self._points is None:
            self._points = [P for P in plane_points(self.field, self.form.dual) if not self.form(P)]
        return self._points

    def random_point(self, rng: random.Random) -> ProjPoint:
        return rng.choice(self.points())

    def inflection_points(self) -> list[ProjPoint]:
        """Flexes C n He(C): all of them over a finite field, rational ones over QQ.

        Over QQ only Weierstrass-shaped cubics are supported.
        """
        if self.hessian.is_zero():
            raise DegenerateError("the Hessian vanishes identically")
        if self.field.is_finite:
            return [P for P in self.points() if not self.hessian(P) and self.is_smooth_at(P)]
        ab = weierstrass_coefficients(self.form)
        if ab is None:
            raise NotImplementedError("rational flexes are only computed for Weierstrass cubics")
        return rational_weierstrass_flexes(*ab)

    # the Hessian involution and the Cayleyan ------------------------------------

    def iota(self, a) -> ProjPoint:
        """The singular point of the degenerate polar conic P_a(C), for a on He(C)."""
        a = self.point(a)
        k = conic_kernel(self.polar_matrix(a))
        if k is None:
            raise NotOnCurveError(f"{a} is not on the Hessian")
        if k is DEGENERATE:
            raise SingularPointError(f"polar conic at {a} has rank <= 1 (He singular there)")
        return _point_like(a, k.coords)

    def cayleyan_line(self, a) -> ProjPoint:
        """The line through a and iota(a), as a point of the dual plane."""
        a = self.point(a)
        return a.cross(self.iota(a))

    def polar_residual_line(self, a) -> ProjPoint:
        """For a flex a: the component of P_a(C) other than the tangent at a.

        This is iota'(eta(a)), the image of a under the anti-symplectic
        torsion map onto the Cayleyan.
        """
        a = self.point(a)
        conic = polar(self.form, a.coords, 1)
        t = tangent_line(self.form, a)
        if self.hessian(a):
            raise ValueError(f"{a} is not an inflection point")
        other = divide_exact(conic, t)
        return DualPoint.from_line(other) if not a.dual else ProjPoint(
            DualPoint.from_line(other).coords, field=self.field)

    def __repr__(self) -> str:
        return f"PlaneCubic({self.form.to_string()}, origin={self.origin})"


def weierstrass_coefficients(form: TernaryForm):
    """(A, B) if the form is a multiple of y^2 z - x^3 - A x z^2 - B z^3, else None."""
    if form.degree != 3:
        return None
    lead = form.coefficient((0, 2, 1))
    if not lead:
        return None
    f = form * (form.field.one / lead)
    A = -f.coefficient((1, 0, 2))
    B = -f.coefficient((0, 0, 3))
    return (A, B) if f == weierstrass_form(A, B, form.field) else None


def division_poly_3(A, B, field=None) -> UniPoly:
    """3x^4 + 6Ax^2 + 12Bx - A^2."""
    field = field or common_field(A, B)
    return UniPoly([-field(A) ** 2, 12 * field(B), 6 * field(A), 0, 3], field)


def rational_weierstrass_flexes(A, B) -> list[ProjPoint]:
    field = common_field(A, B)
    out = [ProjPoint((0, 1, 0), field=field)]
    for x in sorted(uni_roots(division_poly_3(A, B, field))):
        r = x**3 + A * x + B
        y = _rational_sqrt(r)
        if y is None:
            continue
        out.append(ProjPoint((x, y, 1), field=field))
        if y:
            out.append(ProjPoint((x, -y, 1), field=field))
    return out


def _rational_sqrt(r: Fraction):
    from math import isqrt
    if r < 0:
        return None
    n, d = isqrt(r.numerator), isqrt(r.denominator)
    if n * n == r.numerator and d * d == r.denominator:
        return Fraction(n, d)
    return None


# ---------------------------------------------------------------------------
# closed forms for a Weierstrass curve E0: y^2 z = x^3 + A x z^2 + B z^3
# ---------------------------------------------------------------------------


def _dual(coeffs: dict, field) -> TernaryForm:
    return TernaryForm(coeffs, 3, field, dual=True)


def cayleyan_weierstrass(A, B) -> TernaryForm:
    """Ca(E0): A xi^3 + 9B xi eta^2 + 3 xi zeta^2 - 6A eta^2 zeta, canonicalized."""
    check_hessian_smooth(A, B)
    field = common_field(A, B)
    A, B = field(A), field(B)
    return canonicalize(_dual({(3, 0, 0): A, (1, 2, 0): 9 * B, (1, 0, 2): 3,
                               (0, 2, 1): -6 * A}, field))


def change_of_variables(A, B) -> tuple[TernaryForm, TernaryForm, TernaryForm]:
    """xi' = 3B xi - 2A zeta, eta' = 2A eta, zeta' = -xi, as forms in (xi, eta, zeta)."""
    field = common_field(A, B)
    A, B = field(A), field(B)
    return (TernaryForm.linear(3 * B, 0, -2 * A, field=field, dual=True),
            TernaryForm.linear(0, 2 * A, 0, field=field, dual=True),
            TernaryForm.linear(-1, 0, 0, field=field, dual=True))


def to_primed(A, B, point: ProjPoint) -> DualPoint:
    """Primed coordinates of a dual point given in (xi:eta:zeta)."""
    xi, eta, zeta = point.coords
    return DualPoint((3 * B * xi - 2 * A * zeta, 2 * A * eta, -xi), field=point.field)


def from_primed(A, B, point: ProjPoint) -> DualPoint:
    xp, ep, zp = point.coords
    xi = -zp
    return DualPoint((xi, ep / (2 * A), (3 * B * xi - xp) / (2 * A)), field=point.field)


def unprime_form(A, B, form: TernaryForm) -> TernaryForm:
    """Rewrite a form in primed coordinates as a form in (xi, eta, zeta)."""
    return form.substitute(change_of_variables(A, B), dual=True)


def cayleyan_primed(A, B) -> TernaryForm:
    """Ca(E0) after the change of variables:
    -3 xi'^2 zeta' - 18B xi' zeta'^2 + 3 xi' eta'^2 - delta zeta'^3."""
    check_hessian_smooth(A, B)
    field = common_field(A, B)
    A, B = field(A), field(B)
    delta = 4 * A**3 + 27 * B**2
    return _dual({(2, 0, 1): -3, (1, 0, 2): -18 * B, (1, 2, 0): 3, (0, 0, 3): -delta}, field)


def f0_weierstrass(A, B) -> TernaryForm:
    """F0 in primed coordinates: delta y^2 z - x^3 + delta x z^2 + 2B delta z^3."""
    check_hessian_smooth(A, B)
    field = common_field(A, B)
    A, B = field(A), field(B)
    delta = 4 * A**3 + 27 * B**2
    return _dual({(0, 2, 1): delta, (3, 0, 0): -1, (1, 0, 2): delta, (0, 0, 3): 2 * B * delta},
                 field)


def f0_unprimed(A, B) -> TernaryForm:
    return canonicalize(unprime_form(A, B, f0_weierstrass(A, B)))


# ---------------------------------------------------------------------------
# the Cayleyan by interpolation
# ---------------------------------------------------------------------------


def hessian_points(C: PlaneCubic, limit: int | None = None) -> list[ProjPoint]:
    He = C.hessian
    out = []
    for P in plane_points(C.field, C.form.dual):
        if not He(P):
            out.append(P)
            if limit is not None and len(out) >= limit:
                break
    return out


def cayleyan_interpolate(C: PlaneCubic, field=None, min_samples: int = 12) -> TernaryForm:
    """Dual cubic through the lines a iota(a), a running over He(C)(F_q).

    Raises InsufficientSamplesError if fewer than ``min_samples`` distinct lines
    are available and DegenerateError unless the solution space is a line.
    """
    if field is not None and field != C.field:
        C = PlaneCubic(C.form.reduce(field))
    field = C.field
    if not field.is_finite:
        raise ValueError("interpolation runs over a finite field; see cayleyan_rational")
    lines = []
    seen = set()
    for a in hessian_points(C):
        ell = C.cayleyan_line(a)
        if ell not in seen:
            seen.add(ell)
            lines.append(ell)
    if len(lines) < min_samples:
        raise InsufficientSamplesError(f"only {len(lines)} distinct Cayleyan lines over {field!r}")
    mons = monomials(3)
    rows = [[_monomial_value(m, ell.coords, field) for m in mons] for ell in lines]
    basis = nullspace(rows, field)
    if len(basis) != 1:
        raise DegenerateError(f"solution space has dimension {len(basis)}, expected 1")
    dual = not C.form.dual
    return canonicalize(TernaryForm(dict(zip(mons, basis[0])), 3, field, dual=dual))


def _monomial_value(m, v, field):
    return v[0] ** m[0] * v[1] ** m[1] * v[2] ** m[2] * field.one


def cayleyan_rational(C: PlaneCubic, primes: Iterable[int] | None = None,
                      start: int = 101) -> TernaryForm:
    """Cayleyan of a rational cubic: interpolate mod several primes, CRT, reconstruct.

    Stops once the reconstruction is stable under one more prime.
    """
    if C.field is not QQ:
        raise ValueError("cayleyan_rational needs a cubic over QQ")
    denoms = 1
    for _, c in C.form.items():
        denoms *= c.denominator
    prime_iter = iter(primes) if primes is not None else _primes_from(start)
    residues: dict = {}
    modulus = 1
    support = None
    previous = None
    for p in prime_iter:
        if denoms % p == 0:
            continue
        F = make_extension(p, 1)
        try:
            G = cayleyan_interpolate(PlaneCubic(C.form.reduce(F)))
        except (DegenerateError, SingularPointError, InsufficientSamplesError):
            continue
        sup = frozenset(m for m, _ in G.items())
        if support is None:
            support = sup
        elif sup != support:
            if not sup > support:
                # a coefficient vanished mod p
                continue
            support, residues, modulus, previous = sup, {}, 1, None
        for m, c in G.items():
            r = c.c[0]
            residues[m] = crt_pair(residues[m], modulus, r, p)[0] if m in residues else r
        modulus *= p
        recon = {}
        for m in support:
            v = rational_reconstruction(residues[m], modulus)
            if v is None:
                break
            recon[m] = v
        else:
            form = canonicalize(TernaryForm(recon, 3, QQ, dual=not C.form.dual))
            if form == previous:
                return form
            previous = form
    raise InsufficientSamplesError("ran out of primes before the reconstruction stabilised")


def _primes_from(n: int):
    while True:
        if is_prime(n) and n > 3:
            yield n
        n += 1


# ---------------------------------------------------------------------------
# conic splitting
# ---------------------------------------------------------------------------


def split_conic(conic: TernaryForm):
    """Factor a rank-2 conic into two lines over its field.

    Returns a pair of DualPoints (lines), or None when the two lines are not
    defined over the field.
    """
    if conic.degree != 2:
        raise ValueError("need a conic")
    field = conic.field
    half = field.one / 2
    m = [[conic.coefficient(_mono2(i, j)) * (1 if i == j else half) for j in range(3)]
         for i in range(3)]
    from .polarity import SymMat3
    s = conic_kernel(SymMat3(m))
    if s is None:
        raise DegenerateError("conic is nonsingular")
    if s is DEGENERATE:
        raise DegenerateError("conic has rank <= 1")
    one, zero = field.one, field.zero
    # a line not through s: one of the coordinate lines
    for ell in ((one, zero, zero), (zero, one, zero), (zero, zero, one)):
        if sum((a * b for a, b in zip(ell, s.coords)), zero):
            break
    # two points spanning ell
    pts = []
    for e in ((one, zero, zero), (zero, one, zero), (zero, zero, one)):
        c = (ell[1] * e[2] - ell[2] * e[1], ell[2] * e[0] - ell[0] * e[2],
             ell[0] * e[1] - ell[1] * e[0])
        if any(c) and all(not ProjPoint(c, field=field) == q for q in pts):
            pts.append(ProjPoint(c, field=field))
        if len(pts) == 2:
            break
    u, v = pts
    # conic(s*u + t*v) = a s^2 + b s t + c t^2
    a = conic(u.coords)
    c = conic(v.coords)
    b = conic(tuple(x + y for x, y in zip(u.coords, v.coords))) - a - c
    roots = _binary_quadratic_roots(a, b, c, field)
    if roots is None:
        return None
    lines = []
    for (rs, rt) in roots:
        w = ProjPoint(tuple(rs * x + rt * y for x, y in zip(u.coords, v.coords)), field=field)
        lines.append(s.cross(w))
    return tuple(lines)


def _mono2(i, j):
    m = [0, 0, 0]
    m[i] += 1
    m[j] += 1
    return tuple(m)


def _binary_quadratic_roots(a, b, c, field):
    if not a:
        # (1:0) is a root; the other is (c : -b)
        return [(field.one, field.zero), (c, -b)] if b else None
    disc = b * b - 4 * a * c
    if field.is_finite:
        r = disc.sqrt()
    else:
        r = _rational_sqrt(disc)
    if r is None:
        return None
    return [(-b + r, 2 * a), (-b - r, 2 * a)]
