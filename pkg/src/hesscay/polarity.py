"""Polar operators, the (half-normalised) Hessian, tangent lines and conic kernels."""

from __future__ import annotations

from math import factorial
from typing import Sequence

from .algebra import TernaryForm, canonicalize, common_field
from .errors import DegenerateError, FieldMismatchError, NotOnCurveError, SingularPointError


class ProjPoint:
    """A point of the projective plane; equality is equality up to a nonzero scalar."""

    __slots__ = ("coords", "field")
    dual = False

    def __init__(self, *coords, field=None):
        if len(coords) == 1:
            coords = tuple(coords[0])
        if len(coords) != 3:
            raise ValueError("a projective point needs three coordinates")
        field = field or common_field(*coords)
        coords = tuple(field(c) for c in coords)
        if not any(coords):
            raise DegenerateError("(0:0:0) is not a projective point")
        self.coords = coords
        self.field = field

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __len__(self):
        return 3

    def normalized(self) -> tuple:
        """Representative whose first nonzero coordinate is 1."""
        lead = next(c for c in self.coords if c)
        inv = self.field.one / lead
        return tuple(c * inv for c in self.coords)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjPoint):
            return NotImplemented
        if self.dual != other.dual:
            return False
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")
        a, b = self.coords, other.coords
        return (a[1] * b[2] == a[2] * b[1] and a[2] * b[0] == a[0] * b[2]
                and a[0] * b[1] == a[1] * b[0])

    def __hash__(self) -> int:
        return hash((self.dual, self.normalized()))

    def cross(self, other: "ProjPoint") -> "ProjPoint":
        """The line through two points (a DualPoint), or the meet of two lines."""
        a, b = self.coords, other.coords
        c = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
        cls = ProjPoint if self.dual else DualPoint
        return cls(c, field=self.field)

    def pairing(self, other: "ProjPoint"):
        """The incidence value sum a_i b_i between a point and a line."""
        return sum((x * y for x, y in zip(self.coords, other.coords)), self.field.zero)

    def reduce(self, field) -> "ProjPoint":
        return type(self)(tuple(field(c) for c in self.coords), field=field)

    def to_json(self) -> list:
        return [c.to_json() if hasattr(c, "to_json") else str(c) for c in self.normalized()]

    def __repr__(self) -> str:
        return "(" + ":".join(str(c) for c in self.normalized()) + ")"


class DualPoint(ProjPoint):
    """A point (xi:eta:zeta) of the dual plane, i.e. a line of the primal plane."""

    __slots__ = ()
    dual = True

    def incident(self, point: ProjPoint) -> bool:
        return not self.pairing(point)

    def line_form(self) -> TernaryForm:
        """The linear form xi*x + eta*y + zeta*z cutting out this line."""
        return TernaryForm.linear(*self.coords, field=self.field)

    @classmethod
    def from_line(cls, line: TernaryForm) -> "DualPoint":
        if line.degree != 1:
            raise ValueError("need a linear form")
        return cls(line.coefficient((1, 0, 0)), line.coefficient((0, 1, 0)),
                   line.coefficient((0, 0, 1)), field=line.field)


class _Degenerate:
    """Marker returned by :func:`conic_kernel` for conics of rank <= 1."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "DEGENERATE"


DEGENERATE = _Degenerate()


class SymMat3:
    """Symmetric 3x3 matrix whose entries are forms or scalars."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence]):
        rows = tuple(tuple(r) for r in rows)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("need a 3x3 matrix")
        for i in range(3):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("matrix is not symmetric")
        self.rows = rows

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def evaluate(self, point) -> "SymMat3":
        return SymMat3([[e(point) for e in row] for row in self.rows])

    def det(self):
        m = self.rows
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))

    def adjugate(self) -> list[list]:
        m = self.rows
        cof = [[None] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                r = [a for a in range(3) if a != i]
                c = [b for b in range(3) if b != j]
                minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
                cof[i][j] = minor if (i + j) % 2 == 0 else -minor
        return [[cof[j][i] for j in range(3)] for i in range(3)]

    def apply(self, vec: Sequence) -> tuple:
        return tuple(sum((self.rows[i][j] * vec[j] for j in range(3)), 0 * vec[0])
                     for i in range(3))

    def bilinear(self, u: Sequence, v: Sequence):
        mv = self.apply(v)
        return sum((a * b for a, b in zip(u, mv)), 0 * u[0])

    def conic(self, field=None, dual: bool = False) -> TernaryForm:
        """The quadratic form x^T M x of a scalar matrix."""
        field = field or common_field(*[e for r in self.rows for e in r])
        c = {}
        for i in range(3):
            for j in range(3):
                m = [0, 0, 0]
                m[i] += 1
                m[j] += 1
                m = tuple(m)
                c[m] = c.get(m, field.zero) + self.rows[i][j]
        return TernaryForm(c, 2, field, dual)

    def __eq__(self, other) -> bool:
        return isinstance(other, SymMat3) and self.rows == other.rows

    def __repr__(self) -> str:
        def fmt(e):
            return e.to_string() if isinstance(e, TernaryForm) else str(e)
        return "SymMat3(" + "; ".join(", ".join(fmt(e) for e in r) for r in self.rows) + ")"


def plane_points(field, dual: bool = False):
    """Every point of P^2 over a finite field, in a fixed order."""
    cls = DualPoint if dual else ProjPoint
    one, zero = field.one, field.zero
    elems = list(field.elements())
    for a in elems:
        for b in elems:
            yield cls((a, b, one), field=field)
    for a in elems:
        yield cls((a, one, zero), field=field)
    yield cls((one, zero, zero), field=field)


def _vector(point, field):
    v = getattr(point, "coords", point)
    return tuple(field(c) for c in v)


def directional_derivative(f: TernaryForm, a) -> TernaryForm:
    """nabla_a f = a0 f_x + a1 f_y + a2 f_z."""
    a = _vector(a, f.field)
    out = TernaryForm.zero(max(f.degree - 1, 0), f.field, f.dual)
    for i in range(3):
        if a[i]:
            out = out + f.partial(i) * a[i]
    return out


def polar(f: TernaryForm, a, k: int) -> TernaryForm:
    """The k-th polar nabla_{a^k} f, a form of degree d - k."""
    if not 0 <= k <= f.degree:
        raise ValueError(f"polar order {k} outside [0, {f.degree}]")
    for _ in range(k):
        f = directional_derivative(f, a)
    return f


def taylor_coefficients(f: TernaryForm, a, b) -> list:
    """Coefficients c_k of s^(d-k) t^k in f(s*a + t*b), k = 0..d.

    c_k = nabla_{b^k} f (a) / k!.
    """
    d = f.degree
    out = []
    g = f
    for k in range(d + 1):
        out.append(g(a) / factorial(k))
        if k < d:
            g = directional_derivative(g, b)
    return out


def line_multiplicity(f: TernaryForm, a, b) -> int:
    """Intersection multiplicity at a of the line through a, b with f = 0 (d+1 if contained)."""
    for k, c in enumerate(taylor_coefficients(f, a, b)):
        if c:
            return k
    return f.degree + 1


def hessian_matrix(f: TernaryForm) -> SymMat3:
    """F''/2: entry (i, j) is d^2 F / dx_i dx_j divided by 2."""
    if f.degree != 3:
        raise ValueError(f"hessian_matrix needs a cubic, got degree {f.degree}")
    if f.field.characteristic == 2:
        raise ValueError("characteristic 2")
    half = f.field.one / 2
    d1 = f.gradient()
    return SymMat3([[d1[i].partial(j) * half for j in range(3)] for i in range(3)])


def hessian_form(f: TernaryForm) -> TernaryForm:
    """det(F''/2); may be identically zero."""
    return hessian_matrix(f).det()


def gradient_at(f: TernaryForm, a) -> tuple:
    return tuple(g(a) for g in f.gradient())


def tangent_line(f: TernaryForm, a) -> TernaryForm:
    """Canonical linear form F_x(a) x + F_y(a) y + F_z(a) z of the tangent at a smooth point."""
    if f(a):
        raise NotOnCurveError(f"{a} is not on the curve")
    grad = gradient_at(f, a)
    if not any(grad):
        raise SingularPointError(f"{a} is a singular point")
    return canonicalize(TernaryForm.linear(*grad, field=f.field, dual=f.dual))


def conic_kernel(m: SymMat3):
    """Singular point of the conic x^T M x.

    Returns None for a nonsingular conic (rank 3), the unique kernel point for
    rank 2 (a nonzero column of adj M), and DEGENERATE for rank <= 1.
    """
    if m.det():
        return None
    adj = m.adjugate()
    for j in range(3):
        col = (adj[0][j], adj[1][j], adj[2][j])
        if any(col):
            return ProjPoint(col, field=_entry_field(m))
    return DEGENERATE


def matrix_rank(m: SymMat3) -> int:
    if m.det():
        return 3
    if any(e for row in m.adjugate() for e in row):
        return 2
    if any(e for row in m.rows for e in row):
        return 1
    return 0


def _entry_field(m: SymMat3):
    return common_field(*[e for r in m.rows for e in r])
