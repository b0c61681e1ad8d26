"""The symplectic pencil E0 + t He(E0), the anti-symplectic pencil F0 + t Ca(E0),
their Weierstrass families and parameter maps."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .algebra import TernaryForm, UniPoly, common_field, squarefree_decomposition, uni_roots
from .cubic import (PlaneCubic, cayleyan_primed, check_hessian_smooth, f0_weierstrass, to_primed,
                    weierstrass_form)
from .ec import j_from_coefficients, scaled_to_standard
from .errors import DegenerateError
from .polarity import DualPoint, ProjPoint, hessian_form


class _Infinity:
    """The parameter t = infinity, i.e. (t0:t1) = (0:1)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


class PencilKind(enum.Enum):
    SYMPLECTIC = "symplectic"
    ANTI_SYMPLECTIC = "anti"


def _homogeneous(t, field):
    """(t0, t1) with member = t0*F + t1*G."""
    if t is INFINITY:
        return field.zero, field.one
    if isinstance(t, tuple):
        t0, t1 = field(t[0]), field(t[1])
        if not t0 and not t1:
            raise DegenerateError("(0:0) is not a pencil parameter")
        return t0, t1
    return field.one, field(t)


def _moebius(num, den, t):
    """Apply t -> (num[0] t + num[1]) / (den[0] t + den[1]) on P^1 (INFINITY allowed)."""
    if t is INFINITY:
        n, d = num[0], den[0]
    else:
        n, d = num[0] * t + num[1], den[0] * t + den[1]
    if not d:
        if not n:
            raise DegenerateError("0/0 in parameter map")
        return INFINITY
    return n / d


@dataclass(frozen=True)
class FamilyWeierstrass:
    """c Y^2 = X^3 + a(t) X + b(t)."""

    a: UniPoly
    b: UniPoly
    c: object = 1

    def at(self, t) -> tuple:
        return self.a(t), self.b(t)

    def standard(self, t) -> tuple:
        """Coefficients of the isomorphic curve Y^2 = X^3 + a' X + b'."""
        return scaled_to_standard(self.c, *self.at(t))

    def discriminant(self) -> UniPoly:
        """-16 (4 a'^3 + 27 b'^2) for the standard-form coefficients."""
        c = self.a.field(self.c)
        a, b = self.a * c**2, self.b * c**3
        return (a**3 * 4 + b**2 * 27) * (-16)

    def j_polys(self) -> tuple[UniPoly, UniPoly]:
        """(numerator, denominator) of j(t) = 1728 * 4a^3 / (4a^3 + 27b^2)."""
        return self.a**3 * 6912, self.a**3 * 4 + self.b**2 * 27

    def j(self, t):
        return j_from_coefficients(*self.standard(t))

    def fiber_structure(self) -> tuple[object, UniPoly]:
        """(c, g) with discriminant = c * g^3 and g squarefree; raises otherwise."""
        delta = self.discriminant()
        parts = squarefree_decomposition(delta)
        nonconst = [(g, e) for g, e in parts if g.degree > 0]
        if len(nonconst) != 1 or nonconst[0][1] != 3:
            raise DegenerateError(f"discriminant is not c*g^3: multiplicities "
                                  f"{[(g.degree, e) for g, e in nonconst]}")
        g = nonconst[0][0].monic()
        q, r = divmod(delta, g**3)
        if r or q.degree != 0:
            raise DegenerateError("discriminant is not c*g^3")  # pragma: no cover
        return q[0], g

    def singular_fibers(self) -> list[tuple[object, int]]:
        """Parameters of singular fibers visible over the field, with multiplicities.

        Over QQ only rational roots are listed.  A drop of deg below 12 puts
        the missing multiplicity at INFINITY.
        """
        delta = self.discriminant()
        out = sorted(uni_roots(delta).items())
        if delta.degree < 12:
            out.append((INFINITY, 12 - delta.degree))
        return out

    def is_singular_at(self, t) -> bool:
        delta = self.discriminant()
        if t is INFINITY:
            return delta.degree < 12
        return not delta(t)


@dataclass(frozen=True)
class CubicPencil:
    """member(t) = F + t G, member(INFINITY) = G."""

    F: TernaryForm
    G: TernaryForm
    kind: PencilKind
    A: object
    B: object
    reparametrised: bool = False

    @property
    def field(self):
        return self.F.field

    @property
    def origin(self) -> ProjPoint:
        cls = DualPoint if self.F.dual else ProjPoint
        return cls((0, 1, 0), field=self.field)

    def member(self, t) -> TernaryForm:
        t0, t1 = _homogeneous(t, self.field)
        return self.F * t0 + self.G * t1

    def member_curve(self, t) -> PlaneCubic:
        return PlaneCubic(self.member(t), origin=self.origin)

    def weierstrass(self) -> FamilyWeierstrass:
        if self.kind is PencilKind.SYMPLECTIC:
            return family_weierstrass_E(self.A, self.B)
        return family_weierstrass_F(self.A, self.B)

    def weierstrass_parameter(self, t):
        """Parameter of the Weierstrass family describing member(t)."""
        if self.kind is PencilKind.SYMPLECTIC or self.reparametrised:
            return t
        return anti_prime_parameter(self.A, self.B, t)

    def is_smooth_member(self, t) -> bool:
        return not self.weierstrass().is_singular_at(self.weierstrass_parameter(t))

    def base_points(self) -> list[ProjPoint]:
        """Common zeros of F and G over a finite field."""
        C = PlaneCubic(self.F)
        return [P for P in C.points() if not self.G(P)]

    def reduce(self, field) -> "CubicPencil":
        return CubicPencil(self.F.reduce(field), self.G.reduce(field), self.kind,
                           field(self.A), field(self.B), self.reparametrised)


def symplectic_family(A, B) -> CubicPencil:
    """E0 + t He(E0)."""
    check_hessian_smooth(A, B)
    field = common_field(A, B)
    E0 = weierstrass_form(A, B, field)
    return CubicPencil(E0, hessian_form(E0), PencilKind.SYMPLECTIC, field(A), field(B))


def antisymplectic_family(A, B) -> CubicPencil:
    """F0 + t Ca(E0), both in primed dual coordinates."""
    check_hessian_smooth(A, B)
    field = common_field(A, B)
    return CubicPencil(f0_weierstrass(A, B), cayleyan_primed(A, B), PencilKind.ANTI_SYMPLECTIC,
                       field(A), field(B))


def antisymplectic_prime_pencil(A, B, printed_sign: bool = False) -> CubicPencil:
    """(9B t - 2A) F0 + delta t Ca(E0), the reparametrised pencil described by Weier-F.

    With ``printed_sign`` the Cayleyan enters with a minus sign instead; that
    variant does not match the Weier-F coefficients (kept for comparison).
    """
    check_hessian_smooth(A, B)
    field = common_field(A, B)
    A, B = field(A), field(B)
    delta = 4 * A**3 + 27 * B**2
    F0, Ca = f0_weierstrass(A, B), cayleyan_primed(A, B)
    sign = -1 if printed_sign else 1
    return CubicPencil(F0 * (-2 * A), F0 * (9 * B) + Ca * (sign * delta),
                       PencilKind.ANTI_SYMPLECTIC, A, B, reparametrised=True)


def anti_member_parameter(A, B, t_prime):
    """The parameter u with F'_{t'} proportional to F0 + u Ca: u = delta t' / (9B t' - 2A)."""
    field = common_field(A, B)
    A, B = field(A), field(B)
    delta = 4 * A**3 + 27 * B**2
    return _moebius((delta, 0 * A), (9 * B, -2 * A), t_prime)


def anti_prime_parameter(A, B, u):
    """Inverse of :func:`anti_member_parameter`: t' = 2A u / (9B u - delta)."""
    field = common_field(A, B)
    A, B = field(A), field(B)
    delta = 4 * A**3 + 27 * B**2
    return _moebius((2 * A, 0 * A), (9 * B, -delta), u)


# ---------------------------------------------------------------------------
# torsion maps E0[3] -> F0[3]
# ---------------------------------------------------------------------------


def torsion_map_phi(A, B, P) -> DualPoint:
    """The displayed map (x:y:z) -> (-y(3Ax^2+9Bxz-A^2z^2) : Az(3x^2+Az^2) : 3xyz).

    Its image of a point a on He(E0) is -1/2 times the line a iota(a) in primed
    coordinates, so it lands on Ca(E0) rather than on F0; see
    :func:`antisymplectic_torsion_map` for the map onto the base points.
    """
    field = common_field(A, B, *P.coords) if isinstance(P, ProjPoint) else common_field(A, B, *P)
    x, y, z = (field(c) for c in getattr(P, "coords", P))
    A, B = field(A), field(B)
    img = (-y * (3 * A * x**2 + 9 * B * x * z - A**2 * z**2), A * z * (3 * x**2 + A * z**2),
           3 * x * y * z)
    if not any(img):
        raise DegenerateError(f"all coordinates of phi{tuple(getattr(P, 'coords', P))} vanish")
    return DualPoint(img, field=field)


def antisymplectic_torsion_map(A, B, P) -> DualPoint:
    """iota'(eta(P)) in primed coordinates, for P an inflection point of E0.

    It is the component of the polar conic P_P(E0) other than the tangent at
    P.  It sends O = (0:1:0) to (0:1:0) and E0[3] onto the base points of the
    anti-symplectic pencil.
    """
    field = common_field(A, B, *getattr(P, "coords", P))
    E0 = PlaneCubic(weierstrass_form(A, B, field))
    line = E0.polar_residual_line(ProjPoint(getattr(P, "coords", P), field=field))
    return to_primed(field(A), field(B), line)


# ---------------------------------------------------------------------------
# Weierstrass families
# ---------------------------------------------------------------------------


def _b_poly(A, B, field) -> UniPoly:
    return UniPoly([B, 4 * A**2, -45 * A * B, 270 * B**2, 135 * A**2 * B,
                    54 * A * (2 * A**3 + 9 * B**2), -243 * B * (A**3 + 6 * B**2)], field)


def family_weierstrass_E(A, B) -> FamilyWeierstrass:
    """Y^2 = X^3 + a(t) X + b(t) for the symplectic pencil."""
    check_hessian_smooth(A, B)
    field = common_field(A, B)
    A, B = field(A), field(B)
    a = UniPoly([A, -18 * B, -18 * A**2, 54 * A * B, -27 * (A**3 + 9 * B**2)], field)
    return FamilyWeierstrass(a, _b_poly(A, B, field), field.one)


def family_weierstrass_F(A, B) -> FamilyWeierstrass:
    """-delta Y^2 = X^3 + a(t) X + b(t) for the reparametrised anti-symplectic pencil."""
    check_hessian_smooth(A, B)
    field = common_field(A, B)
    A, B = field(A), field(B)
    delta = 4 * A**3 + 27 * B**2
    a = UniPoly([-1, 0, -18 * A, 108 * B, 27 * A**2], field) * delta
    return FamilyWeierstrass(a, _b_poly(A, B, field) * (2 * delta), -delta)


def discriminant(fam: FamilyWeierstrass) -> UniPoly:
    return fam.discriminant()


def singular_fibers(fam: FamilyWeierstrass) -> list:
    return fam.singular_fibers()


# ---------------------------------------------------------------------------
# parameter maps
# ---------------------------------------------------------------------------


def hessian_parameter(A, B, t):
    """t_H with He(E0 + t He(E0)) proportional to E0 + t_H He(E0)."""
    field = common_field(A, B, t) if t is not INFINITY else common_field(A, B)
    A, B = field(A), field(B)
    if t is INFINITY:
        return -B / A**2
    t = field(t)
    den = 9 * t * (3 * A**2 * t**2 + 9 * B * t - A)
    num = -27 * B * t**3 + 9 * A * t**2 + 1
    if not den:
        raise DegenerateError(f"t_H has a pole at t = {t}")
    return num / den


def rubin_silverberg_param(A, B, t_rs):
    """t = 6AB t_RS / (27B^2 t_RS + delta)."""
    field = common_field(A, B, t_rs)
    A, B, t_rs = field(A), field(B), field(t_rs)
    den = 27 * B**2 * t_rs + 4 * A**3 + 27 * B**2
    if not den:
        raise DegenerateError(f"pole at t_RS = {t_rs}")
    return 6 * A * B * t_rs / den


def rubin_silverberg_inverse(A, B, t):
    """t_RS = delta t / (6AB - 27B^2 t)."""
    field = common_field(A, B, t)
    A, B, t = field(A), field(B), field(t)
    den = 6 * A * B - 27 * B**2 * t
    if not den:
        raise DegenerateError(f"pole at t = {t}")
    return (4 * A**3 + 27 * B**2) * t / den


# ---------------------------------------------------------------------------
# Hesse pencil
# ---------------------------------------------------------------------------


def hesse_cubic(lam, field=None, dual: bool = False) -> TernaryForm:
    """x^3 + y^3 + z^3 - 3 lam xyz."""
    field = field or common_field(lam)
    return TernaryForm({(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): 1, (1, 1, 1): -3 * field(lam)},
                       3, field, dual)


@dataclass(frozen=True)
class HesseForms:
    He: TernaryForm
    Ca: TernaryForm
    F0: TernaryForm


def hesse_specialization(lam, field=None) -> HesseForms:
    """Closed forms of He, Ca and F0 for the Hesse cubic with parameter lam."""
    field = field or common_field(lam)
    lam = field(lam)
    if not lam:
        raise DegenerateError("lambda = 0: the displayed forms divide by lambda")
    if lam**3 == 1:
        raise DegenerateError("lambda^3 = 1: the Hesse cubic is singular")

    def cubic(k, dual):
        return TernaryForm({(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): 1, (1, 1, 1): -k}, 3, field,
                           dual)

    return HesseForms(He=cubic((4 - lam**3) / lam**2, False),
                      Ca=cubic((lam**3 + 2) / lam, True),
                      F0=cubic(-6 / lam, True))


__all__ = [
    "INFINITY", "PencilKind", "FamilyWeierstrass", "CubicPencil", "symplectic_family",
    "antisymplectic_family", "antisymplectic_prime_pencil", "anti_member_parameter",
    "anti_prime_parameter", "torsion_map_phi", "antisymplectic_torsion_map",
    "family_weierstrass_E", "family_weierstrass_F", "discriminant", "singular_fibers",
    "hessian_parameter", "rubin_silverberg_param", "rubin_silverberg_inverse", "hesse_cubic",
    "HesseForms", "hesse_specialization",
]
