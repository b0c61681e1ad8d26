"""A genus-2 curve with two degree-3 maps: one to E0, one to a model of Ca(E0)."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field as dc_field

from .algebra import UniPoly, common_field, make_extension, poly_gcd, uni_roots
from .cubic import check_hessian_smooth
from .errors import DegenerateError, HypothesisViolation, InsufficientSamplesError


@dataclass(frozen=True)
class HyperellipticCurve:
    """Y^2 = f(X)."""

    f: UniPoly

    @property
    def field(self):
        return self.f.field

    def is_squarefree(self) -> bool:
        return poly_gcd(self.f, self.f.derivative()).degree == 0

    @property
    def genus(self) -> int:
        if not self.is_squarefree():
            raise DegenerateError("f is not squarefree")
        return (self.f.degree - 1) // 2

    def contains(self, X, Y) -> bool:
        return Y * Y == self.f(X)

    def reduce(self, field) -> "HyperellipticCurve":
        return HyperellipticCurve(self.f.map_coefficients(field, field))

    def affine_points(self) -> list[tuple]:
        F = self.field
        out = []
        for X in F.elements():
            Y = self.f(X).sqrt()
            if Y is None:
                continue
            out.append((X, Y))
            if Y:
                out.append((X, -Y))
        return out

    def __repr__(self) -> str:
        return f"Y^2 = {self.f.to_string('X')}"


@dataclass(frozen=True)
class WeierstrassModel:
    """c y^2 = x^3 + a2 x^2 + a4 x + a6."""

    c: object
    a2: object
    a4: object
    a6: object

    @property
    def field(self):
        return common_field(self.c, self.a2, self.a4, self.a6)

    def rhs(self, x):
        return x**3 + self.a2 * x**2 + self.a4 * x + self.a6

    def contains(self, x, y) -> bool:
        return self.c * y * y == self.rhs(x)

    def reduce(self, field) -> "WeierstrassModel":
        return WeierstrassModel(field(self.c), field(self.a2), field(self.a4), field(self.a6))

    def affine_points(self) -> list[tuple]:
        F = self.field
        inv = F.one / self.c
        out = []
        for x in F.elements():
            y = (self.rhs(x) * inv).sqrt()
            if y is None:
                continue
            out.append((x, y))
            if y:
                out.append((x, -y))
        return out

    def standard(self) -> tuple:
        """(a, b) of y^2 = x^3 + a x + b isomorphic to this model (shift x, then rescale)."""
        from .ec import scaled_to_standard
        s = self.a2 / 3
        # x = u - s removes the quadratic term
        a = self.a4 - self.a2 * s
        b = self.a6 - self.a4 * s + 2 * s**3
        return scaled_to_standard(self.c, a, b)

    def j_invariant(self):
        from .ec import j_from_coefficients
        return j_from_coefficients(*self.standard())

    def __repr__(self) -> str:
        return f"WeierstrassModel({self.c}*y^2 = x^3 + {self.a2}*x^2 + {self.a4}*x + {self.a6})"


@dataclass(frozen=True)
class RationalMap:
    """(X, Y) -> (x_num/x_den, y_num * Y / y_den) with components in lowest terms."""

    x_num: UniPoly
    x_den: UniPoly
    y_num: UniPoly
    y_den: UniPoly
    name: str = dc_field(default="", compare=False)

    def __post_init__(self):
        for num, den, tag in (("x_num", "x_den", "x"), ("y_num", "y_den", "y")):
            n, d = getattr(self, num), getattr(self, den)
            if d.is_zero():
                raise DegenerateError(f"{tag}-component has a zero denominator")
            g = poly_gcd(n, d) if not n.is_zero() else d
            if g.degree > 0:
                object.__setattr__(self, num, n // g)
                object.__setattr__(self, den, d // g)

    @property
    def field(self):
        return self.x_num.field

    def __call__(self, X, Y) -> tuple:
        xd, yd = self.x_den(X), self.y_den(X)
        if not xd or not yd:
            raise ZeroDivisionError(f"map has a pole at X = {X}")
        return self.x_num(X) / xd, self.y_num(X) * Y / yd

    def reduce(self, field) -> "RationalMap":
        return RationalMap(*(p.map_coefficients(field, field) for p in
                             (self.x_num, self.x_den, self.y_num, self.y_den)), name=self.name)

    def x_degree(self) -> int:
        """Degree of X -> x, i.e. max(deg num, deg den) in lowest terms."""
        if self.x_num.degree <= 0 and self.x_den.degree <= 0:
            return 0
        return max(self.x_num.degree, self.x_den.degree)

    def compose_x(self, a, b) -> "RationalMap":
        """Follow the map by the affine change x -> a x + b on the target."""
        return RationalMap(self.x_num * a + self.x_den * b, self.x_den, self.y_num, self.y_den,
                           name=self.name)

    def to_strings(self) -> dict:
        return {"x": f"({self.x_num.to_string('X')})/({self.x_den.to_string('X')})",
                "y": f"({self.y_num.to_string('X')})*Y/({self.y_den.to_string('X')})"}


def _setup(A, B):
    check_hessian_smooth(A, B)
    field = common_field(A, B)
    A, B = field(A), field(B)
    return field, A, B, 4 * A**3 + 27 * B**2


def frey_kani_curve(A, B) -> HyperellipticCurve:
    """Y^2 = -(3X^2 + 4A)(X^3 + AX + B)."""
    field = common_field(A, B)
    A, B = field(A), field(B)
    f = -(UniPoly([4 * A, 0, 3], field) * UniPoly([B, A, 0, 1], field))
    C = HyperellipticCurve(f)
    if not C.is_squarefree():
        raise HypothesisViolation("-(3X^2+4A)(X^3+AX+B) is not squarefree: needs "
                                  "A(4A^3+27B^2) != 0")
    return C


def e0_model(A, B) -> WeierstrassModel:
    field = common_field(A, B)
    return WeierstrassModel(field.one, field.zero, field(A), field(B))


def cayleyan_model(A, B) -> WeierstrassModel:
    """-3y^2 = x^3 - 18B x^2 + 3 delta x."""
    field, A, B, delta = _setup(A, B)
    return WeierstrassModel(field(-3), -18 * B, 3 * delta, field.zero)


def psi1(A, B) -> RationalMap:
    """(X, Y) -> (-(X^3+4B)/(3X^2+4A), (X^3+4AX-8B) Y/(3X^2+4A)^2)."""
    field, A, B, _ = _setup(A, B)
    den = UniPoly([4 * A, 0, 3], field)
    return RationalMap(-UniPoly([4 * B, 0, 0, 1], field), den,
                       UniPoly([-8 * B, 4 * A, 0, 1], field), den * den, name="psi1")


def psi2(A, B) -> RationalMap:
    """(X, Y) -> (delta/(3(X^3+AX+B)), delta(3X^2+A) Y/(9(X^3+AX+B)^2)).

    The x-component differs in sign from the displayed one; this version maps
    onto the model -3y^2 = x^3 - 18Bx^2 + 3 delta x.
    """
    m = psi2_printed(A, B).compose_x(-1, 0)
    return RationalMap(m.x_num, m.x_den, m.y_num, m.y_den, name="psi2")


def psi2_printed(A, B) -> RationalMap:
    """(X, Y) -> (-delta/(3(X^3+AX+B)), delta(3X^2+A) Y/(9(X^3+AX+B)^2)), as displayed.

    It lands on 3y^2 = x^3 + 18Bx^2 + 3 delta x, the image of the model under x -> -x.
    """
    field, A, B, delta = _setup(A, B)
    g = UniPoly([B, A, 0, 1], field)
    return RationalMap(UniPoly([-delta], field), g * 3, UniPoly([A, 0, 3], field) * delta,
                       g * g * 9, name="psi2_printed")


def on_curve_residual(m: RationalMap, C: HyperellipticCurve, target: WeierstrassModel) -> UniPoly:
    """Numerator of c y^2 - (x^3 + a2 x^2 + a4 x + a6) after substituting the map and Y^2 = f(X).

    Zero exactly when the map sends C into the target.
    """
    n, d = m.x_num, m.x_den
    rhs = n**3 + n * n * d * target.a2 + n * d * d * target.a4 + d**3 * target.a6
    return m.y_num**2 * C.f * d**3 * target.c - m.y_den**2 * rhs


@dataclass
class DegreeCertificate:
    p: int
    certificate: int
    fiber_poly_degree: int
    max_fiber: int
    histogram: dict
    samples: int

    def to_json(self) -> dict:
        return {"p": self.p, "certificate": self.certificate,
                "fiber_poly_degree": self.fiber_poly_degree, "max_fiber": self.max_fiber,
                "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
                "samples": self.samples}


def _good_reduction(values, p) -> bool:
    from fractions import Fraction
    for v in values:
        v = Fraction(v)
        if v.denominator % p == 0:
            return False
    return True


def verify_morphism_degree(m: RationalMap, C: HyperellipticCurve, target: WeierstrassModel,
                           p: int, samples: int = 50, seed: int = 0) -> DegreeCertificate:
    """Estimate the degree of a map of curves by counting fibers over F_p.

    The certificate is the degree of the fiber polynomial x_num - x0 * x_den
    in X (in lowest terms), which is the degree of C -> target since both are
    double covers of their x-lines.  Sampled fibers must not exceed it.
    """
    if m.x_degree() == 0:
        raise DegenerateError("x-component is constant: the map has degree 0")
    F = make_extension(p)
    coeffs = [c for poly in (C.f, m.x_num, m.x_den, m.y_num, m.y_den) for c in poly.coeffs]
    coeffs += [target.c, target.a2, target.a4, target.a6]
    if not _good_reduction(coeffs, p):
        raise HypothesisViolation(f"bad reduction at p = {p}: a denominator vanishes")
    Cp, Tp, mp = C.reduce(F), target.reduce(F), m.reduce(F)
    if not Cp.is_squarefree() or not Tp.c:
        raise HypothesisViolation(f"bad reduction at p = {p}: the source curve degenerates")
    disc_t = _cubic_discriminant(Tp)
    if not disc_t:
        raise HypothesisViolation(f"bad reduction at p = {p}: the target is singular")
    if mp.x_degree() != m.x_degree():
        raise HypothesisViolation(f"bad reduction at p = {p}: the map degenerates")
    pts = Tp.affine_points()
    if len(pts) < samples:
        raise InsufficientSamplesError(f"only {len(pts)} affine target points over F_{p}")
    rng = random.Random(seed)
    chosen = rng.sample(pts, samples)
    hist: Counter = Counter()
    fiber_deg = 0
    for x0, y0 in chosen:
        fiber_poly = mp.x_num - mp.x_den * x0
        fiber_deg = max(fiber_deg, fiber_poly.degree)
        count = 0
        for X in uni_roots(fiber_poly):
            if not mp.x_den(X) or not mp.y_den(X):
                continue
            yn = mp.y_num(X)
            for Y in _ys(Cp, X):
                if yn * Y / mp.y_den(X) == y0:
                    count += 1
        hist[count] += 1
    cert = m.x_degree()
    max_fiber = max(hist)
    if max_fiber == 0:
        raise DegenerateError("no sampled target point has a preimage: the map misses the target")
    if max_fiber > cert:
        raise DegenerateError(f"fiber of size {max_fiber} exceeds the certificate {cert}")
    return DegreeCertificate(p, cert, fiber_deg, max_fiber, dict(hist), samples)


def _ys(C: HyperellipticCurve, X) -> list:
    Y = C.f(X).sqrt()
    if Y is None:
        return []
    return [Y] if not Y else [Y, -Y]


def _cubic_discriminant(T: WeierstrassModel):
    a, b, c = T.a2, T.a4, T.a6
    return a * a * b * b - 4 * b**3 - 4 * a**3 * c - 27 * c * c + 18 * a * b * c


@dataclass(frozen=True)
class Ramification:
    image: str
    valuation_source: int
    valuation_target: int

    @property
    def index(self) -> int:
        return self.valuation_source // self.valuation_target


def ramification_at_infinity(m: RationalMap, C: HyperellipticCurve,
                             target: WeierstrassModel) -> Ramification:
    """Ramification index at the unique point at infinity of an odd-degree model.

    At that point X has valuation -2.  We find the image point and compare
    valuations of a local function vanishing there on both sides.
    """
    if C.f.degree % 2 == 0:
        raise ValueError("needs an odd-degree model (one point at infinity)")
    n, d = m.x_num, m.x_den
    if n.degree > d.degree:
        # image is the point at infinity of the target; 1/x has valuation 2 there
        return Ramification("O", 2 * (n.degree - d.degree), 2)
    if n.degree < d.degree:
        x0 = m.field.zero
    else:
        x0 = n.lc / d.lc
    g = n - d * x0
    v_source = 2 * (d.degree - g.degree)
    v_target = 2 if not target.rhs(x0) else 1
    return Ramification(f"x={x0}", v_source, v_target)
