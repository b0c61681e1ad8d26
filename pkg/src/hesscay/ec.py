"""Short Weierstrass curves, 3-torsion and the mod-3 Weil pairing.

The pairing is computed on any plane cubic with an inflection origin using the
inflection tangents: for a 3-torsion point P the function f_P = T_P / T_O has
divisor 3(P) - 3(O).
"""

from __future__ import annotations

import enum
import json
import os
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Iterable, Sequence

from .algebra import GF, GFElem, QQ, UniPoly, common_field, is_prime, make_extension, uni_roots
from .cubic import PlaneCubic, division_poly_3 as _psi3, weierstrass_form
from .errors import DegenerateError, HypothesisViolation, NotOnCurveError
from .polarity import ProjPoint, gradient_at

MAX_AUX_ATTEMPTS = 32


# ---------------------------------------------------------------------------
# points and curves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CurvePoint:
    """Affine point (x, y), or the point at infinity when ``x is None``."""

    x: object = None
    y: object = None

    @classmethod
    def infinity(cls) -> "CurvePoint":
        return cls()

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def to_proj(self, field) -> ProjPoint:
        if self.is_infinity:
            return ProjPoint((0, 1, 0), field=field)
        return ProjPoint((self.x, self.y, 1), field=field)

    @classmethod
    def from_proj(cls, P: ProjPoint) -> "CurvePoint":
        x, y, z = P.coords
        if not z:
            return cls()
        return cls(x / z, y / z)

    def to_json(self):
        if self.is_infinity:
            return None
        return [_scalar_json(self.x), _scalar_json(self.y)]

    def __repr__(self) -> str:
        return "O" if self.is_infinity else f"({self.x}, {self.y})"


def _scalar_json(c):
    if isinstance(c, GFElem):
        return c.to_json()
    return str(c)


def scaled_to_standard(c, a, b) -> tuple:
    """Coefficients of y^2 = x^3 + a' x + b' isomorphic to c y^2 = x^3 + a x + b."""
    if not c:
        raise DegenerateError("scale factor must be nonzero")
    return a * c**2, b * c**3


def j_from_coefficients(a, b):
    d = 4 * a**3 + 27 * b**2
    if not d:
        raise HypothesisViolation("singular curve: 4A^3 + 27B^2 = 0")
    return 1728 * 4 * a**3 / d


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 = x^3 + A x + B over QQ or a finite field."""

    A: object
    B: object

    def __post_init__(self):
        field = common_field(self.A, self.B)
        object.__setattr__(self, "A", field(self.A))
        object.__setattr__(self, "B", field(self.B))
        if field.characteristic in (2, 3):  # pragma: no cover - GF refuses these already
            raise ValueError("characteristic 2 or 3")
        if not self.delta:
            raise HypothesisViolation("singular curve: 4A^3 + 27B^2 = 0")

    @property
    def field(self):
        return common_field(self.A, self.B)

    @property
    def delta(self):
        return 4 * self.A**3 + 27 * self.B**2

    def j_invariant(self):
        return j_from_coefficients(self.A, self.B)

    def division_poly_3(self) -> UniPoly:
        return _psi3(self.A, self.B, self.field)

    def plane_cubic(self) -> PlaneCubic:
        return PlaneCubic(weierstrass_form(self.A, self.B, self.field),
                          origin=ProjPoint((0, 1, 0), field=self.field))

    def rhs(self, x):
        return x**3 + self.A * x + self.B

    def contains(self, P: CurvePoint) -> bool:
        return P.is_infinity or P.y**2 == self.rhs(P.x)

    def _check(self, *pts) -> None:
        for P in pts:
            if not self.contains(P):
                raise NotOnCurveError(f"{P} is not on {self}")

    # group law (affine formulas, independent of the chord construction) -----

    def neg(self, P: CurvePoint) -> CurvePoint:
        return P if P.is_infinity else CurvePoint(P.x, -P.y)

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        self._check(P, Q)
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        if P.x == Q.x:
            if P.y == -Q.y:
                return CurvePoint.infinity()
            lam = (3 * P.x**2 + self.A) / (2 * P.y)
        else:
            lam = (Q.y - P.y) / (Q.x - P.x)
        x = lam**2 - P.x - Q.x
        return CurvePoint(x, lam * (P.x - x) - P.y)

    def mul(self, n: int, P: CurvePoint) -> CurvePoint:
        if n < 0:
            return self.mul(-n, self.neg(P))
        out, base = CurvePoint.infinity(), P
        while n:
            if n & 1:
                out = self.add(out, base)
            base = self.add(base, base)
            n >>= 1
        return out

    # enumeration over finite fields -------------------------------------------

    def points(self) -> list[CurvePoint]:
        F = self.field
        if not F.is_finite:
            raise ValueError("point enumeration needs a finite field")
        out = [CurvePoint.infinity()]
        for x in F.elements():
            r = self.rhs(x)
            y = r.sqrt()
            if y is None:
                continue
            out.append(CurvePoint(x, y))
            if y:
                out.append(CurvePoint(x, -y))
        return out

    def torsion3(self) -> list[CurvePoint]:
        """E[3] over the base field, via roots of the 3-division polynomial."""
        out = [CurvePoint.infinity()]
        for x in sorted(uni_roots(self.division_poly_3())):
            r = self.rhs(x)
            if self.field.is_finite:
                y = r.sqrt()
            else:
                from .cubic import _rational_sqrt
                y = _rational_sqrt(r)
            if y is None:
                continue
            out.append(CurvePoint(x, y))
            if y:
                out.append(CurvePoint(x, -y))
        return out

    def __repr__(self) -> str:
        return f"WeierstrassCurve(A={self.A}, B={self.B})"


# ---------------------------------------------------------------------------
# Weil pairing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairingValue:
    """e_3(P, Q) = zeta3 ** exponent for the canonical primitive cube root zeta3."""

    exponent: int
    value: object = dc_field(compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "exponent", self.exponent % 3)

    def __mul__(self, other: "PairingValue") -> "PairingValue":
        return PairingValue(self.exponent + other.exponent)

    def inverse(self) -> "PairingValue":
        return PairingValue(-self.exponent)

    def __pow__(self, n: int) -> "PairingValue":
        return PairingValue(self.exponent * n)

    @property
    def is_trivial(self) -> bool:
        return self.exponent == 0


def _as_plane(curve) -> PlaneCubic:
    if isinstance(curve, WeierstrassCurve):
        return curve.plane_cubic()
    if curve.origin is None:
        raise ValueError("pairing needs a marked inflection origin")
    return curve


def _as_proj(curve, P) -> ProjPoint:
    if isinstance(P, CurvePoint):
        return P.to_proj(curve.field)
    return P


def random_curve_point(C: PlaneCubic, rng: random.Random) -> ProjPoint:
    """A random F_q-point of C: intersect C with random lines until one splits off a root."""
    F = C.field
    for _ in range(1000):
        u = [F.random(rng) for _ in range(3)]
        v = [F.random(rng) for _ in range(3)]
        if not any(u) or not any(v):
            continue
        lin = [UniPoly([a, b], F) for a, b in zip(u, v)]
        g = UniPoly([], F)
        for (i, j, k), c in C.form.items():
            g = g + lin[0] ** i * lin[1] ** j * lin[2] ** k * c
        if g.is_zero():
            continue
        roots = sorted(uni_roots(g))
        if roots:
            r = rng.choice(roots)
            coords = tuple(a + r * b for a, b in zip(u, v))
            if any(coords):
                return C.point(coords)
    raise DegenerateError("could not find a random point on the curve")  # pragma: no cover


def _tangent_values(C: PlaneCubic, P: ProjPoint):
    return gradient_at(C.form, P)


def _eval_ratio(num_line, den_line, X: ProjPoint):
    n = sum((a * b for a, b in zip(num_line, X.coords)), X.field.zero)
    d = sum((a * b for a, b in zip(den_line, X.coords)), X.field.zero)
    if not n or not d:
        return None
    return n / d


def _is_3_torsion(C: PlaneCubic, P: ProjPoint) -> bool:
    return P == C.origin or (not C.form(P) and not C.hessian(P))


def weil_pairing_3(curve, P, Q, rng: random.Random | None = None, seed: int = 0) -> PairingValue:
    """e_3(P, Q) on a Weierstrass curve or a plane cubic with inflection origin.

    e(P,Q) = f_P(Q+S) f_Q(-S) / (f_P(S) f_Q(P-S)) for a random auxiliary point
    S, retried while an evaluation hits a zero or pole.
    """
    C = _as_plane(curve)
    F = C.field
    if not F.is_finite:
        raise ValueError("pairing is computed over finite fields")
    zeta = F.primitive_cube_root()
    P, Q = _as_proj(C, P), _as_proj(C, Q)
    for R in (P, Q):
        if not _is_3_torsion(C, R):
            raise NotOnCurveError(f"{R} is not a 3-torsion point")
    O = C.origin
    if P == O or Q == O or P == Q:
        return PairingValue(0, F.one)
    rng = rng or random.Random(seed)
    tO = _tangent_values(C, O)
    tP = _tangent_values(C, P)
    tQ = _tangent_values(C, Q)
    for _ in range(MAX_AUX_ATTEMPTS):
        S = random_curve_point(C, rng)
        try:
            pts = (C.add(Q, S), S, C.neg(S), C.sub(P, S))
        except DegenerateError:
            continue
        vals = [_eval_ratio(tP, tO, pts[0]), _eval_ratio(tP, tO, pts[1]),
                _eval_ratio(tQ, tO, pts[2]), _eval_ratio(tQ, tO, pts[3])]
        if any(v is None for v in vals):
            continue
        e = vals[0] * vals[2] / (vals[1] * vals[3])
        for k, w in enumerate((F.one, zeta, zeta * zeta)):
            if e == w:
                return PairingValue(k, e)
        raise DegenerateError(f"pairing value {e} is not a cube root of unity")
    raise DegenerateError(f"no usable auxiliary point in {MAX_AUX_ATTEMPTS} attempts")


@dataclass(frozen=True)
class TorsionBasis:
    P1: object
    P2: object
    pairing: PairingValue


def torsion_points(curve) -> list:
    """E[3] as CurvePoints for a WeierstrassCurve, as ProjPoints (the flexes) for a plane cubic."""
    if isinstance(curve, WeierstrassCurve):
        return curve.torsion3()
    return curve.inflection_points()


def torsion_basis(curve) -> TorsionBasis:
    pts = torsion_points(curve)
    if len(pts) != 9:
        raise DegenerateError(f"E[3] is not rational: found {len(pts)} points")
    O = CurvePoint.infinity() if isinstance(curve, WeierstrassCurve) else curve.origin
    nz = [P for P in pts if P != O]
    P1 = nz[0]
    for P2 in nz[1:]:
        e = weil_pairing_3(curve, P1, P2)
        if not e.is_trivial:
            return TorsionBasis(P1, P2, e)
    raise DegenerateError("pairing is degenerate on E[3]")  # pragma: no cover


class Classification(enum.Enum):
    SYMPLECTIC = "Symplectic"
    ANTI_SYMPLECTIC = "AntiSymplectic"
    NEITHER = "Neither"

    def __str__(self) -> str:
        return self.value


@dataclass
class ClassificationResult:
    verdict: Classification
    source_pairing: PairingValue
    target_pairing: PairingValue | None
    reason: str = ""


def _group_ops(curve):
    if isinstance(curve, WeierstrassCurve):
        return curve.add, curve.neg, CurvePoint.infinity()
    C = _as_plane(curve)
    return C.add, C.neg, C.origin


def _lin_comb(curve, a: int, b: int, P1, P2):
    add, neg, O = _group_ops(curve)
    out = O
    for _ in range(a % 3):
        out = add(out, P1)
    for _ in range(b % 3):
        out = add(out, P2)
    return out


def classify_isomorphism(E1, E2, basis: Sequence, images: Sequence,
                         correspondence: dict | None = None) -> ClassificationResult:
    """Compare e_3 on a basis (P1, P2) of E1[3] with e_3 on the images (Q1, Q2) in E2[3].

    ``correspondence`` (optional) maps further points P -> phi(P); it is checked
    against the linear extension of the basis images and any mismatch yields
    NEITHER.
    """
    P1, P2 = basis
    Q1, Q2 = images
    e1 = weil_pairing_3(E1, P1, P2)
    if e1.is_trivial:
        raise ValueError("P1, P2 are not a basis of E1[3]")
    try:
        e2 = weil_pairing_3(E2, Q1, Q2)
    except NotOnCurveError as exc:
        return ClassificationResult(Classification.NEITHER, e1, None, str(exc))
    if e2.is_trivial:
        return ClassificationResult(Classification.NEITHER, e1, e2, "images are dependent")
    if correspondence:
        table = {}
        for a, b in product(range(3), repeat=2):
            table[a, b] = (_lin_comb(E1, a, b, P1, P2), _lin_comb(E2, a, b, Q1, Q2))
        for P, image in correspondence.items():
            expected = next((q for p, q in table.values() if p == P), None)
            if expected is None:
                return ClassificationResult(Classification.NEITHER, e1, e2,
                                            f"{P} is not in the span of the basis")
            if expected != image:
                return ClassificationResult(Classification.NEITHER, e1, e2,
                                            f"image of {P} breaks linearity")
    if e2 == e1:
        return ClassificationResult(Classification.SYMPLECTIC, e1, e2)
    return ClassificationResult(Classification.ANTI_SYMPLECTIC, e1, e2)


# ---------------------------------------------------------------------------
# fixture instances with full rational 3-torsion
# ---------------------------------------------------------------------------

FIXTURE_ENV = "HESSCAY_FIXTURES"
DEFAULT_FIXTURES = Path(__file__).resolve().parents[2] / "tests" / "data" / "fixtures.json"


@dataclass(frozen=True)
class TorsionInstance:
    p: int
    k: int
    modulus: tuple
    A: object
    B: object

    @property
    def field(self) -> GF:
        return GF(self.p, self.k, self.modulus)

    @property
    def curve(self) -> WeierstrassCurve:
        F = self.field
        return WeierstrassCurve(F(self.A), F(self.B))

    def to_json(self) -> dict:
        curve = self.curve
        basis = torsion_basis(curve)
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus),
                "A": _elem_json(self.A), "B": _elem_json(self.B),
                "basis": [basis.P1.to_json(), basis.P2.to_json()]}

    @classmethod
    def from_json(cls, d: dict) -> "TorsionInstance":
        F = GF(d["p"], d["k"], d["modulus"])
        return cls(d["p"], d["k"], tuple(d["modulus"]), _elem_load(F, d["A"]),
                   _elem_load(F, d["B"]))


def _elem_json(c):
    return list(c.c) if isinstance(c, GFElem) else int(c)


def _elem_load(F: GF, v):
    return F(tuple(v)) if isinstance(v, list) else F(int(v))


def has_full_3_torsion(A, B) -> bool:
    F = common_field(A, B)
    if not A or not (4 * A**3 + 27 * B**2):
        return False
    roots = uni_roots(_psi3(A, B, F))
    if len(roots) != 4:
        return False
    return all((x**3 + A * x + B).is_square() for x in roots)


def find_full_torsion_instance(primes: Iterable[int] | None = None,
                               degrees: Sequence[int] = (1, 2, 3, 4, 6),
                               require_k1: bool = False, max_q: int = 10**5) -> TorsionInstance:
    """First (p, k, A, B) in search order with E[3] inside E(F_{p^k}) and A*delta != 0.

    Order: p ascending over [5, 200], then k, then (A, B) over the prime subfield.
    """
    primes = list(primes) if primes is not None else [p for p in range(5, 201) if is_prime(p)]
    for p in primes:
        for k in degrees:
            if require_k1 and k != 1:
                continue
            q = p**k
            if q > max_q or (q - 1) % 3:
                continue
            F = make_extension(p, k)
            for a, b in product(range(1, p), range(p)):
                A, B = F(a), F(b)
                if has_full_3_torsion(A, B):
                    return TorsionInstance(p, k, F.modulus, A, B)
    raise DegenerateError("no instance with full 3-torsion in the search range")


def fixtures_path(override: str | os.PathLike | None = None) -> Path:
    if override:
        return Path(override)
    env = os.environ.get(FIXTURE_ENV)
    return Path(env) if env else DEFAULT_FIXTURES


def load_fixtures(path=None) -> dict:
    path = fixtures_path(path)
    if not path.exists():
        return {}
    with open(path) as fh:
        data = json.load(fh)
    return {name: TorsionInstance.from_json(d) for name, d in data.items()}


def save_fixtures(instances: dict, path=None) -> Path:
    path = fixtures_path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = {name: inst.to_json() for name, inst in sorted(instances.items())}
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def get_fixture(name: str = "first", path=None) -> TorsionInstance:
    """Cached instance: ``first`` (any k) or ``k1`` (prime field); searched and stored if missing."""
    fx = load_fixtures(path)
    if name in fx:
        return fx[name]
    if name not in ("first", "k1"):
        raise KeyError(name)
    inst = find_full_torsion_instance(require_k1=(name == "k1"))
    fx[name] = inst
    try:
        save_fixtures(fx, path)
    except OSError:
        pass
    return inst
