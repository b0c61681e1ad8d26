"""Exact fields and the small polynomial containers everything else is built on.

Two kinds of field are supported:

* ``QQ`` -- the rationals, with elements represented by :class:`fractions.Fraction`;
* ``GF(p, k)`` -- the finite field with ``p**k`` elements, ``p > 3`` prime, realised
  as ``F_p[x]/(m(x))`` for the lexicographically smallest monic irreducible ``m``.

Polynomials come in two shapes: :class:`UniPoly` (dense, one variable) and
:class:`TernaryForm` (homogeneous in three variables, sparse exponent map).
"""

from __future__ import annotations

import itertools
import math
import random
import re
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from sympy import divisors as _divisors

from .errors import DegenerateError, FieldMismatchError

# ---------------------------------------------------------------------------
# primality
# ---------------------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# the rational field
# ---------------------------------------------------------------------------


class RationalField:
    """The field of rational numbers; elements are ``Fraction`` instances."""

    characteristic = 0
    is_finite = False
    degree = 1

    def __call__(self, value) -> Fraction:
        if isinstance(value, GFElem):
            raise FieldMismatchError(f"cannot coerce {value!r} into QQ")
        if isinstance(value, str):
            return Fraction(value.strip())
        return Fraction(value)

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def random(self, rng: random.Random, height: int = 10**4) -> Fraction:
        return random_rational(rng, height)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")

    def __repr__(self) -> str:
        return "QQ"


QQ = RationalField()


def random_rational(rng: random.Random, height: int = 10**4, nonzero: bool = False) -> Fraction:
    """Uniform-ish rational with numerator in [-height, height], denominator in [1, height]."""
    while True:
        r = Fraction(rng.randint(-height, height), rng.randint(1, height))
        if r or not nonzero:
            return r


# ---------------------------------------------------------------------------
# raw F_p[x] helpers (int lists, lowest degree first) used inside GF
# ---------------------------------------------------------------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim([c % p for c in out])


def _pdivmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        s = len(a) - len(b)
        q[s] = c
        for i, bi in enumerate(b):
            a[s + i] = (a[s + i] - c * bi) % p
        _trim(a)
    return _trim(q), a


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _ppowmod(base: Sequence[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pdivmod(base, m, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, p), m, p)[1]
        base = _pdivmod(_pmul(base, base, p), m, p)[1]
        e >>= 1
    return result


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial ``f`` (lowest degree first) over F_p."""
    f = _trim([c % p for c in f])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    if _ppowmod(x, p**n, f, p) != _trim(x[:]):
        return False
    for r in _prime_factors(n):
        h = _ppowmod(x, p ** (n // r), f, p)
        diff = _trim([(a - b) % p for a, b in itertools.zip_longest(h, x, fillvalue=0)])
        if len(_pgcd(f, diff, p)) != 1:
            return False
    return True


def _monic_polys(p: int, k: int) -> Iterator[list[int]]:
    # counting n = sum c_i p^i orders (c_{k-1}, ..., c_0) lexicographically
    for n in range(p**k):
        coeffs = []
        for _ in range(k):
            n, r = divmod(n, p)
            coeffs.append(r)
        yield coeffs + [1]


# ---------------------------------------------------------------------------
# finite fields
# ---------------------------------------------------------------------------


class GF:
    """The finite field F_{p^k} = F_p[x]/(modulus).

    Use :func:`make_extension` to get the canonical modulus; passing ``modulus``
    explicitly is allowed (e.g. when reloading a fixture file) and is checked for
    irreducibility.
    """

    is_finite = True

    def __init__(self, p: int, k: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p in (2, 3):
            raise ValueError("characteristic 2 and 3 are not supported")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        if modulus is None:
            modulus = _smallest_irreducible(p, k)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {k}")
        if not is_irreducible_mod_p(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible mod {p}")
        self.p = p
        self.k = k
        self.modulus = modulus
        self.q = p**k
        self.characteristic = p
        self.degree = k

    # construction -----------------------------------------------------------

    def __call__(self, value) -> "GFElem":
        if isinstance(value, GFElem):
            if value.field != self:
                if value.field.p == self.p and value.field.k == 1:
                    return self._from_ints((value.c[0],))
                raise FieldMismatchError(f"{value!r} is not in {self!r}")
            return value
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return self._from_ints((value % self.p,))
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError(f"{value} has no reduction mod {self.p}")
            return self._from_ints((value.numerator * pow(value.denominator, -1, self.p) % self.p,))
        if isinstance(value, (tuple, list)):
            if len(value) > self.k:
                raise ValueError("too many coefficients")
            return self._from_ints(tuple(int(c) % self.p for c in value))
        raise FieldMismatchError(f"cannot coerce {value!r} into {self!r}")

    def _from_ints(self, coeffs: Sequence[int]) -> "GFElem":
        c = tuple(coeffs) + (0,) * (self.k - len(coeffs))
        return GFElem(self, c)

    @property
    def zero(self) -> "GFElem":
        return self._from_ints(())

    @property
    def one(self) -> "GFElem":
        return self._from_ints((1,))

    @property
    def gen(self) -> "GFElem":
        """The class of x in F_p[x]/(modulus)."""
        if self.k == 1:
            return self(-self.modulus[0])
        return self._from_ints((0, 1))

    def elements(self) -> Iterator["GFElem"]:
        for n in range(self.q):
            coeffs = []
            for _ in range(self.k):
                n, r = divmod(n, self.p)
                coeffs.append(r)
            yield GFElem(self, tuple(coeffs))

    def random(self, rng: random.Random, nonzero: bool = False) -> "GFElem":
        while True:
            e = self._from_ints(tuple(rng.randrange(self.p) for _ in range(self.k)))
            if e or not nonzero:
                return e

    def primitive_cube_root(self) -> "GFElem":
        """Canonical primitive cube root of unity: the smaller (by ``sort_key``) root of x^2+x+1."""
        if (self.q - 1) % 3:
            raise ValueError(f"F_{self.q} contains no primitive cube root of unity")
        g = self._nonresidue_like(3)
        w = g ** ((self.q - 1) // 3)
        roots = [w, w * w]
        return min(roots, key=GFElem.sort_key)

    def _nonresidue_like(self, r: int) -> "GFElem":
        # first element (in enumeration order) that is not an r-th power
        e = (self.q - 1) // r
        for a in self.elements():
            if a and a**e != self.one:
                return a
        raise AssertionError("no non-residue found")

    def __eq__(self, other) -> bool:
        return isinstance(other, GF) and self.p == other.p and self.modulus == other.modulus

    def __hash__(self) -> int:
        return hash((self.p, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.p})" if self.k == 1 else f"GF({self.p}^{self.k})"


def _smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    for f in _monic_polys(p, k):
        if is_irreducible_mod_p(f, p):
            return tuple(f)
    raise AssertionError(f"no irreducible polynomial of degree {k} over F_{p}")  # pragma: no cover


def make_extension(p: int, k: int = 1) -> GF:
    """F_{p^k} with the lexicographically smallest monic irreducible modulus.

    Candidates are ordered by ``sum(c_i * p**i)``, i.e. lexicographically on
    ``(c_{k-1}, ..., c_0)``.  For ``k == 1`` that is the modulus ``x``.
    """
    return GF(p, k)


class GFElem:
    """Element of a :class:`GF`; immutable."""

    __slots__ = ("field", "c")

    def __init__(self, field: GF, c: tuple[int, ...]):
        self.field = field
        self.c = c

    def _coerce(self, other) -> "GFElem | None":
        if isinstance(other, GFElem):
            if other.field is self.field or other.field == self.field:
                return other
            raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")
        if isinstance(other, int):
            return self.field(other)
        if isinstance(other, Fraction):
            raise FieldMismatchError(f"cannot mix {self.field!r} with rational {other}")
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return GFElem(self.field, tuple((a + b) % p for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return GFElem(self.field, tuple(-a % p for a in self.c))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return GFElem(self.field, tuple((a - b) % p for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        f = self.field
        if f.k == 1:
            return GFElem(f, (self.c[0] * o.c[0] % f.p,))
        prod = _pmul(self.c, o.c, f.p)
        rem = _pdivmod(prod, f.modulus, f.p)[1]
        return f._from_ints(rem)

    __rmul__ = __mul__

    def inverse(self) -> "GFElem":
        f = self.field
        if not self:
            raise ZeroDivisionError("inverse of zero")
        if f.k == 1:
            return GFElem(f, (pow(self.c[0], f.p - 2, f.p),))
        return self ** (f.q - 2)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        f = self.field
        if e < 0:
            return self.inverse() ** (-e)
        if f.k == 1:
            return GFElem(f, (pow(self.c[0], e, f.p),))
        if not self:
            return f.one if e == 0 else f.zero
        e %= f.q - 1
        result, base = f.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self) -> bool:
        return any(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, GFElem):
            return self.field == other.field and self.c == other.c
        if isinstance(other, int):
            return self.c == self.field(other).c
        return NotImplemented

    def __hash__(self) -> int:
        if self.field.k == 1:
            return hash(self.c[0])
        return hash((self.field.p, self.c))

    def sort_key(self) -> tuple[int, ...]:
        """Lexicographic key on (c_{k-1}, ..., c_0); agrees with integer order on F_p."""
        return tuple(reversed(self.c))

    def __lt__(self, other: "GFElem") -> bool:
        return self.sort_key() < other.sort_key()

    def is_square(self) -> bool:
        return not self or self ** ((self.field.q - 1) // 2) == self.field.one

    def sqrt(self) -> "GFElem | None":
        """A square root (Tonelli-Shanks), or None for non-squares."""
        f = self.field
        if not self:
            return f.zero
        if not self.is_square():
            return None
        q = f.q
        s, m = 0, q - 1
        while m % 2 == 0:
            m //= 2
            s += 1
        z = f._nonresidue_like(2)
        c = z**m
        x = self ** ((m + 1) // 2)
        t = self**m
        while t != f.one:
            i, t2 = 0, t
            while t2 != f.one:
                t2 = t2 * t2
                i += 1
            b = c ** (1 << (s - i - 1))
            x, c = x * b, b * b
            t, s = t * c, i
        return x

    def to_json(self):
        return self.c[0] if self.field.k == 1 else list(self.c)

    def __repr__(self) -> str:
        if self.field.k == 1:
            return str(self.c[0])
        terms = []
        for i, a in reversed(list(enumerate(self.c))):
            if a:
                mono = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
                if not mono:
                    terms.append(str(a))
                else:
                    terms.append(mono if a == 1 else f"{a}*{mono}")
        return " + ".join(terms) if terms else "0"

    __str__ = __repr__


def field_of(value):
    """The field a scalar lives in (ints and Fractions belong to QQ)."""
    if isinstance(value, GFElem):
        return value.field
    if isinstance(value, (int, Fraction)):
        return QQ
    raise FieldMismatchError(f"unsupported scalar {value!r}")


def common_field(*values):
    """The field of the first non-rational scalar, else QQ; checks consistency."""
    field = QQ
    for v in values:
        f = field_of(v)
        if f is QQ:
            continue
        if field is QQ:
            field = f
        elif f != field:
            raise FieldMismatchError(f"{field!r} vs {f!r}")
    return field


def scalar_str(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)


# ---------------------------------------------------------------------------
# univariate polynomials
# ---------------------------------------------------------------------------


class UniPoly:
    """Dense univariate polynomial over QQ or a GF, coefficients lowest degree first.

    The zero polynomial has ``degree == -1``.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, coeffs: Iterable, field=None):
        coeffs = list(coeffs)
        if field is None:
            field = common_field(*coeffs) if coeffs else QQ
        cs = [field(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls, field=QQ) -> "UniPoly":
        return cls([0, 1], field)

    @classmethod
    def const(cls, c, field=None) -> "UniPoly":
        return cls([c], field)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def _lift(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")
            return other
        return UniPoly([other], self.field)

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return UniPoly([self[i] + o[i] for i in range(n)], self.field)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs], self.field)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        if not self.coeffs or not o.coeffs:
            return UniPoly([], self.field)
        out = [self.field.zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] = out[i + j] + a * b
        return UniPoly(out, self.field)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = UniPoly([1], self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        o = self._lift(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [self.field.zero] * max(len(rem) - len(o.coeffs) + 1, 0)
        inv = self.field.one / o.lc
        while len(rem) >= len(o.coeffs) and rem:
            c = rem[-1] * inv
            s = len(rem) - len(o.coeffs)
            q[s] = c
            for i, b in enumerate(o.coeffs):
                rem[s + i] = rem[s + i] - c * b
            rem.pop()
            while rem and not rem[-1]:
                rem.pop()
        return UniPoly(q, self.field), UniPoly(rem, self.field)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, t):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:], self.field)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        inv = self.field.one / self.lc
        return UniPoly([c * inv for c in self.coeffs], self.field)

    def map_coefficients(self, fn: Callable, field) -> "UniPoly":
        return UniPoly([fn(c) for c in self.coeffs], field)

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, GFElem)):
            return self == self._lift(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def to_string(self, var: str = "t") -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c:
                terms.append((c, "" if i == 0 else (var if i == 1 else f"{var}^{i}")))
        return _join_terms(terms)

    def __repr__(self) -> str:
        return f"UniPoly({self.to_string()})"


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd (zero if both are zero)."""
    while b:
        a, b = b, a % b
    return a.monic()


def squarefree_decomposition(f: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm: monic squarefree, pairwise coprime g_i with f = lc * prod g_i^i.

    Only factors with positive degree are returned.  Correct in characteristic 0
    and in characteristic p when deg f < p.
    """
    if f.is_zero():
        raise DegenerateError("squarefree decomposition of the zero polynomial")
    if f.field.characteristic and f.degree >= f.field.characteristic:
        raise ValueError("degree too large for Yun's algorithm in this characteristic")
    out = []
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f // a
    c = df // a
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        g = poly_gcd(b, d)
        b = b // g
        c = d // g
        if g.degree > 0:
            out.append((g, i))
        d = c - b.derivative()
        i += 1
    return out


def _integer_primitive(f: UniPoly) -> list[int]:
    den = 1
    for c in f.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in f.coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    return [c // g for c in ints]


def uni_roots(f: UniPoly, field=None) -> dict:
    """Roots of ``f`` in ``field`` (default: its own field) with multiplicities.

    Finite fields are scanned exhaustively.  Over QQ only rational roots are
    found, by the rational root theorem.
    """
    if f.is_zero():
        raise DegenerateError("roots of the zero polynomial")
    field = field or f.field
    if field != f.field:
        f = f.map_coefficients(field, field)
    if field.is_finite:
        candidates = [a for a in field.elements() if not f(a)]
    else:
        candidates = _rational_root_candidates(f)
    roots = {}
    for r in candidates:
        lin = UniPoly([-r, 1], field)
        g, m = f, 0
        while True:
            q, rem = divmod(g, lin)
            if rem:
                break
            g, m = q, m + 1
        if m:
            roots[r] = m
    return roots


def _rational_root_candidates(f: UniPoly) -> list[Fraction]:
    ints = _integer_primitive(f)
    shift = 0
    while ints and ints[0] == 0:
        ints = ints[1:]
        shift += 1
    cands = [Fraction(0)] if shift else []
    if len(ints) <= 1:
        return cands
    g = UniPoly(ints, QQ)
    for d in _divisors(abs(ints[0])):
        for e in _divisors(abs(ints[-1])):
            for r in (Fraction(d, e), Fraction(-d, e)):
                if r not in cands and not g(r):
                    cands.append(r)
    return cands


# ---------------------------------------------------------------------------
# ternary forms
# ---------------------------------------------------------------------------

PRIMAL_VARS = ("x", "y", "z")
DUAL_VARS = ("xi", "eta", "zeta")


def monomials(d: int) -> list[tuple[int, int, int]]:
    """Exponent triples of degree d in descending lex order (x > y > z)."""
    return [(i, j, d - i - j) for i in range(d, -1, -1) for j in range(d - i, -1, -1)]


class TernaryForm:
    """Homogeneous polynomial in three variables over QQ or a GF.

    ``coeffs`` maps exponent triples (i, j, k) to nonzero scalars.  ``dual``
    only affects variable names (xi, eta, zeta) and guards against mixing the
    primal and the dual plane.
    """

    __slots__ = ("degree", "field", "dual", "_c")

    def __init__(self, coeffs: Mapping[tuple[int, int, int], object], degree: int | None = None,
                 field=None, dual: bool = False):
        if field is None:
            field = common_field(*coeffs.values()) if coeffs else QQ
        c = {}
        for m, v in coeffs.items():
            m = tuple(int(e) for e in m)
            if len(m) != 3 or min(m) < 0:
                raise ValueError(f"bad exponent triple {m}")
            if degree is None:
                degree = sum(m)
            if sum(m) != degree:
                raise ValueError(f"monomial {m} is not of degree {degree}")
            v = field(v)
            if v:
                c[m] = c[m] + v if m in c else v
                if not c[m]:
                    del c[m]
        if degree is None:
            raise ValueError("degree required for the zero form")
        self.degree = degree
        self.field = field
        self.dual = dual
        self._c = c

    # constructors -------------------------------------------------------------

    @classmethod
    def zero(cls, degree: int, field=QQ, dual: bool = False) -> "TernaryForm":
        return cls({}, degree, field, dual)

    @classmethod
    def variable(cls, i: int, field=QQ, dual: bool = False) -> "TernaryForm":
        m = [0, 0, 0]
        m[i] = 1
        return cls({tuple(m): 1}, 1, field, dual)

    @classmethod
    def linear(cls, a, b, c, field=None, dual: bool = False) -> "TernaryForm":
        field = field or common_field(a, b, c)
        return cls({(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c}, 1, field, dual)

    @classmethod
    def constant(cls, c, field=None, dual: bool = False) -> "TernaryForm":
        field = field or field_of(c)
        return cls({(0, 0, 0): c}, 0, field, dual)

    # access -------------------------------------------------------------------

    def coefficient(self, m: tuple[int, int, int]):
        return self._c.get(tuple(m), self.field.zero)

    def items(self) -> list[tuple[tuple[int, int, int], object]]:
        """Nonzero terms in descending lex order."""
        return sorted(self._c.items(), reverse=True)

    def coefficient_vector(self) -> list:
        return [self.coefficient(m) for m in monomials(self.degree)]

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    @property
    def variables(self) -> tuple[str, str, str]:
        return DUAL_VARS if self.dual else PRIMAL_VARS

    # arithmetic ---------------------------------------------------------------

    def _check(self, other: "TernaryForm") -> None:
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")
        if other.dual != self.dual:
            raise FieldMismatchError("cannot mix primal and dual forms")

    def __add__(self, other):
        if not isinstance(other, TernaryForm):
            return NotImplemented
        self._check(other)
        if other.degree != self.degree and self._c and other._c:
            raise ValueError("cannot add forms of different degree")
        degree = self.degree if self._c else other.degree
        c = dict(self._c)
        for m, v in other._c.items():
            c[m] = c[m] + v if m in c else v
        return TernaryForm(c, degree, self.field, self.dual)

    def __neg__(self):
        return TernaryForm({m: -v for m, v in self._c.items()}, self.degree, self.field, self.dual)

    def __sub__(self, other):
        if not isinstance(other, TernaryForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TernaryForm):
            self._check(other)
            c: dict = {}
            for m1, v1 in self._c.items():
                for m2, v2 in other._c.items():
                    m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                    c[m] = c[m] + v1 * v2 if m in c else v1 * v2
            return TernaryForm(c, self.degree + other.degree, self.field, self.dual)
        s = self.field(other)
        return TernaryForm({m: v * s for m, v in self._c.items()}, self.degree, self.field, self.dual)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, e: int):
        result = TernaryForm.constant(self.field.one, self.field, self.dual)
        for _ in range(e):
            result = result * self
        return result

    def partial(self, i: int) -> "TernaryForm":
        """Partial derivative with respect to the i-th variable."""
        c = {}
        for m, v in self._c.items():
            if m[i]:
                n = list(m)
                n[i] -= 1
                c[tuple(n)] = v * m[i]
        return TernaryForm(c, max(self.degree - 1, 0), self.field, self.dual)

    def gradient(self) -> tuple["TernaryForm", "TernaryForm", "TernaryForm"]:
        return self.partial(0), self.partial(1), self.partial(2)

    def __call__(self, point):
        v = getattr(point, "coords", point)
        if len(v) != 3:
            raise ValueError("need three coordinates")
        field = self.field
        vals = []
        for a in v:
            a_field = field_of(a)
            if a_field != field and not (a_field is QQ and isinstance(a, int)):
                raise FieldMismatchError(f"point over {a_field!r}, form over {field!r}")
            vals.append(field(a))
        d = self.degree
        pows = [[field.one] * (d + 1) for _ in range(3)]
        for i in range(3):
            for e in range(1, d + 1):
                pows[i][e] = pows[i][e - 1] * vals[i]
        acc = field.zero
        for (i, j, k), c in self._c.items():
            acc = acc + c * pows[0][i] * pows[1][j] * pows[2][k]
        return acc

    def substitute(self, images: Sequence["TernaryForm"], dual: bool | None = None) -> "TernaryForm":
        """F(L0, L1, L2) for forms L_i of a common degree."""
        e = images[0].degree
        dual = images[0].dual if dual is None else dual
        out = TernaryForm.zero(self.degree * e, self.field, dual)
        cache: dict = {}

        def power(i, n):
            if (i, n) not in cache:
                cache[(i, n)] = images[i] ** n
            return cache[(i, n)]

        for (i, j, k), c in self._c.items():
            out = out + power(0, i) * power(1, j) * power(2, k) * c
        return out

    def map_coefficients(self, fn: Callable, field) -> "TernaryForm":
        return TernaryForm({m: fn(v) for m, v in self._c.items()}, self.degree, field, self.dual)

    def reduce(self, field) -> "TernaryForm":
        """Reduce a rational form into a finite field."""
        return self.map_coefficients(field, field)

    def with_dual(self, dual: bool) -> "TernaryForm":
        return TernaryForm(self._c, self.degree, self.field, dual)

    def ratio_to(self, other: "TernaryForm"):
        """The scalar s with self == s * other, or None if not proportional."""
        self._check(other)
        if self.degree != other.degree or not other._c:
            return None
        if set(self._c) != set(other._c):
            return None
        it = iter(other._c)
        m0 = next(it)
        s = self._c[m0] / other._c[m0]
        for m in it:
            if self._c[m] != s * other._c[m]:
                return None
        return s

    def is_proportional(self, other: "TernaryForm") -> bool:
        return self.ratio_to(other) is not None

    def __eq__(self, other) -> bool:
        if not isinstance(other, TernaryForm):
            return NotImplemented
        return (self.field == other.field and self.dual == other.dual
                and self.degree == other.degree and self._c == other._c)

    def __hash__(self) -> int:
        return hash((self.degree, self.dual, frozenset(self._c.items())))

    def to_string(self) -> str:
        names = self.variables
        terms = []
        for m, c in self.items():
            parts = []
            for name, e in zip(names, m):
                if e == 1:
                    parts.append(name)
                elif e > 1:
                    parts.append(f"{name}^{e}")
            terms.append((c, "*".join(parts)))
        return _join_terms(terms)

    def __repr__(self) -> str:
        return f"TernaryForm({self.to_string()} over {self.field!r})"


def _join_terms(terms: list[tuple[object, str]]) -> str:
    """Render (coefficient, monomial) pairs as 'c*m + c*m - ...'."""
    if not terms:
        return "0"
    out = []
    for idx, (c, mono) in enumerate(terms):
        neg = isinstance(c, Fraction) and c < 0
        mag = -c if neg else c
        if not mono:
            body = scalar_str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{scalar_str(mag)}*{mono}"
        if idx == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def divide_exact(f: TernaryForm, g: TernaryForm) -> TernaryForm:
    """Quotient f/g of forms; raises DegenerateError if g does not divide f."""
    f._check(g)
    if g.is_zero():
        raise ZeroDivisionError("division by the zero form")
    lm_g, lc_g = g.items()[0]
    rem = f
    q = TernaryForm.zero(f.degree - g.degree, f.field, f.dual)
    while rem:
        lm, lc = rem.items()[0]
        e = tuple(a - b for a, b in zip(lm, lm_g))
        if min(e) < 0:
            raise DegenerateError("form is not divisible")
        term = TernaryForm({e: lc / lc_g}, f.degree - g.degree, f.field, f.dual)
        q = q + term
        rem = rem - term * g
    return q


def canonicalize(f: TernaryForm) -> TernaryForm:
    """Canonical representative of the line spanned by a nonzero form.

    Over QQ: integer coefficients with content 1 and a positive leading
    coefficient (descending lex, x > y > z).  Over GF: leading coefficient 1.
    """
    if f.is_zero():
        raise DegenerateError("cannot canonicalize the zero form")
    lead = f.items()[0][1]
    if f.field.is_finite:
        return f * (f.field.one / lead)
    den = 1
    for _, c in f.items():
        den = den * c.denominator // math.gcd(den, c.denominator)
    g = 0
    for _, c in f.items():
        g = math.gcd(g, int(c * den))
    scale = Fraction(den, g)
    if lead < 0:
        scale = -scale
    return f * scale


_TERM_RE = re.compile(r"\s*([+-]?)\s*([^+-]+)")


def parse_form(text: str, field=QQ, dual: bool | None = None) -> TernaryForm:
    """Parse the output format of :meth:`TernaryForm.to_string`."""
    text = text.strip()
    if dual is None:
        dual = any(v in text for v in DUAL_VARS)
    names = DUAL_VARS if dual else PRIMAL_VARS
    coeffs: dict = {}
    degree = None
    if text == "0":
        raise ValueError("degree of the zero form is ambiguous")
    pos = 0
    for match in _TERM_RE.finditer(text):
        if match.start() != pos:
            raise ValueError(f"cannot parse {text!r}")
        pos = match.end()
        sign, body = match.group(1), match.group(2).strip()
        coeff = field.one
        exps = [0, 0, 0]
        for factor in body.split("*"):
            factor = factor.strip()
            base, _, exp = factor.partition("^")
            if base in names:
                exps[names.index(base)] += int(exp) if exp else 1
            else:
                coeff = coeff * field(Fraction(factor))
        if sign == "-":
            coeff = -coeff
        m = tuple(exps)
        coeffs[m] = coeffs[m] + coeff if m in coeffs else coeff
        degree = sum(m)
    if pos != len(text):
        raise ValueError(f"cannot parse {text!r}")
    return TernaryForm(coeffs, degree, field, dual)


# ---------------------------------------------------------------------------
# linear algebra and modular reconstruction
# ---------------------------------------------------------------------------


def nullspace(rows: Sequence[Sequence], field) -> list[list]:
    """Basis of {v : M v = 0} by Gauss-Jordan elimination over ``field``."""
    if not rows:
        raise ValueError("empty system")
    ncols = len(rows[0])
    m = [[field(c) for c in r] for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.one / m[r][col]
        m[r] = [c * inv for c in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero] * ncols
        v[fc] = field.one
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    """Combine x = r1 mod m1 and x = r2 mod m2 for coprime moduli."""
    t = (r2 - r1) * pow(m1, -1, m2) % m2
    return r1 + m1 * t, m1 * m2


def rational_reconstruction(a: int, m: int) -> Fraction | None:
    """n/d with n = a*d mod m, |n|, d <= sqrt(m/2); None if no such fraction exists."""
    a %= m
    bound = math.isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or math.gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)
