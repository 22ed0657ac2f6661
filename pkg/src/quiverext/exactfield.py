"""Exact coefficient fields and dense/sparse exact linear algebra.

Three kinds of field are supported:

* ``Q``                     rationals, elements are :class:`gmpy2.mpq`
* ``F_p``                   prime fields, elements are :class:`Mod`
* ``Q[x]/(f)``              simple number fields, elements are :class:`NFElem`

All scalars support ``+ - * /``, equality and truthiness (``not x`` means
``x == 0``), so the linear algebra below is written once for every field.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import gmpy2
from gmpy2 import mpq

__all__ = [
    "FieldError", "NonPrimeModulus", "NotSquarefree", "MalformedDescriptor",
    "DimensionMismatch", "Field", "Rationals", "PrimeField", "NumberField",
    "Mod", "NFElem", "QQ", "field_from_spec", "Matrix", "rref", "solve_linear",
    "SparseEchelon", "solve_sparse", "poly_divmod", "poly_gcd", "poly_xgcd",
    "poly_mul", "factor_poly",
]


class FieldError(ValueError):
    pass


class NonPrimeModulus(FieldError):
    pass


class NotSquarefree(FieldError):
    pass


class MalformedDescriptor(FieldError):
    pass


class DimensionMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# scalars

class Mod:
    """Residue class modulo a prime, canonical value in ``[0, p)``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other) -> int | None:
        if isinstance(other, Mod):
            if other.p != self.p:
                raise FieldError(f"mixing F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, type(mpq())):
            if other.denominator == 1:
                return int(other.numerator)
            return int(other.numerator) * pow(int(other.denominator), -1, self.p)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Mod(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Mod(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Mod(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Mod(-self.v, self.p)

    def inverse(self) -> "Mod":
        if self.v == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return Mod(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * Mod(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Mod(o, self.p) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return Mod(pow(self.v, n, self.p), self.p)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash(("Mod", self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v}"

    def __int__(self):
        return self.v


class NFElem:
    """Element of ``Q[x]/(f)``: coefficient tuple of length ``deg f``, low degree first."""

    __slots__ = ("c", "K")

    def __init__(self, coeffs: Sequence, K: "NumberField"):
        self.c = tuple(coeffs)
        self.K = K

    def _coerce(self, other):
        if isinstance(other, NFElem):
            if other.K is not self.K and other.K != self.K:
                raise FieldError("mixing elements of different number fields")
            return other
        if isinstance(other, (int, type(mpq()))):
            return self.K(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NFElem(tuple(a + b for a, b in zip(self.c, o.c)), self.K)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NFElem(tuple(a - b for a, b in zip(self.c, o.c)), self.K)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return NFElem(tuple(-a for a in self.c), self.K)

    def __mul__(self, other):
        if isinstance(other, (int, type(mpq()))):
            return NFElem(tuple(a * other for a in self.c), self.K)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NFElem(self.K._reduce(poly_mul(list(self.c), list(o.c))), self.K)

    __rmul__ = __mul__

    def inverse(self) -> "NFElem":
        if not self:
            raise ZeroDivisionError("0 has no inverse")
        g, s, _ = poly_xgcd(_strip(list(self.c)), list(self.K.modulus))
        if len(g) != 1:
            raise ZeroDivisionError(f"{self!r} is a zero divisor in {self.K.descriptor}")
        inv = [x / g[0] for x in s]
        return NFElem(self.K._reduce(inv), self.K)

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

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = self.K.one, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        if all(a == 0 for a in self.c[1:]):
            return hash(self.c[0])
        return hash(self.c)

    def __bool__(self):
        return any(self.c)

    def __repr__(self):
        terms = []
        for i, a in enumerate(self.c):
            if a:
                terms.append(f"{a}" if i == 0 else f"{a}*x" + (f"^{i}" if i > 1 else ""))
        return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# fields

class Field:
    characteristic: int = 0
    descriptor: str = ""
    is_field: bool = True

    zero = None
    one = None

    def __call__(self, x):
        raise NotImplementedError

    def random(self, rng, bound: int = 3):
        return self(rng.randint(-bound, bound))

    @property
    def is_finite(self) -> bool:
        return self.characteristic > 0

    def __eq__(self, other):
        return isinstance(other, Field) and self.descriptor == other.descriptor

    def __hash__(self):
        return hash(self.descriptor)

    def __repr__(self):
        return self.descriptor

    def to_json(self, x):
        return str(x)


class Rationals(Field):
    characteristic = 0
    descriptor = "Q"

    def __init__(self):
        self.zero = mpq(0)
        self.one = mpq(1)

    def __call__(self, x):
        if isinstance(x, str):
            x = x.strip()
            if not re.fullmatch(r"[+-]?\d+(/\d+)?", x):
                raise MalformedDescriptor(f"not a rational literal: {x!r}")
        if isinstance(x, Mod):
            raise FieldError("cannot coerce a residue into Q")
        return mpq(x)

    def to_json(self, x):
        return str(x)


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or not gmpy2.is_prime(p):
            raise NonPrimeModulus(f"F_{p}: {p} is not prime")
        self.p = p
        self.characteristic = p
        self.descriptor = f"F_{p}"
        self.zero = Mod(0, p)
        self.one = Mod(1, p)

    def __call__(self, x):
        if isinstance(x, Mod):
            if x.p != self.p:
                raise FieldError(f"residue mod {x.p} is not in F_{self.p}")
            return x
        if isinstance(x, str):
            x = x.strip()
            m = re.fullmatch(r"([+-]?\d+)(?:/(\d+))?", x)
            if not m:
                raise MalformedDescriptor(f"not a literal: {x!r}")
            num = int(m.group(1))
            den = int(m.group(2) or 1)
            return Mod(num, self.p) / Mod(den, self.p)
        if isinstance(x, type(mpq())):
            return Mod(int(x.numerator), self.p) / Mod(int(x.denominator), self.p)
        return Mod(int(x), self.p)

    def random(self, rng, bound: int = 3):
        return Mod(rng.randrange(self.p), self.p)

    def elements(self):
        return [Mod(v, self.p) for v in range(self.p)]

    @property
    def order(self) -> int:
        return self.p


class NumberField(Field):
    """``Q[x]/(f)`` for monic squarefree integer ``f`` of degree at least 2.

    ``is_field`` is decided by the rational-root test, which is complete for
    degree at most 3.  For degree 4 and above a reducible ``f`` with no rational
    root (e.g. ``(x^2-2)(x^2-3)``) is accepted as a field; this is a known
    limitation of the check.  Reducible squarefree ``f`` gives an etale algebra
    (``is_field = False``) which is still usable for base change.
    """

    characteristic = 0

    def __init__(self, coeffs: Sequence[int]):
        coeffs = [int(c) for c in coeffs]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) < 3:
            raise MalformedDescriptor("number field modulus must have degree >= 2")
        if coeffs[-1] != 1:
            raise MalformedDescriptor("number field modulus must be monic")
        self.int_modulus = tuple(coeffs)
        self.modulus = tuple(mpq(c) for c in coeffs)
        self.degree = len(coeffs) - 1
        deriv = [mpq(i * c) for i, c in enumerate(coeffs)][1:]
        g = poly_gcd(list(self.modulus), deriv)
        if len(g) > 1:
            raise NotSquarefree(f"gcd(f, f') = {g} is not constant")
        self.descriptor = f"Q[x]/({_poly_str(coeffs)})"
        self.zero = NFElem((mpq(0),) * self.degree, self)
        self.one = NFElem((mpq(1),) + (mpq(0),) * (self.degree - 1), self)
        self.rational_roots = rational_roots(list(self.modulus))
        self.is_field = not self.rational_roots
        self.irreducibility_certified = self.degree <= 3 or bool(self.rational_roots)

    def _reduce(self, c: list) -> tuple:
        _, r = poly_divmod(c, list(self.modulus))
        r = list(r) + [mpq(0)] * (self.degree - len(r))
        return tuple(r[: self.degree])

    def __call__(self, x):
        if isinstance(x, NFElem):
            return x
        if isinstance(x, (list, tuple)):
            return NFElem(self._reduce([mpq(v) for v in x]), self)
        if isinstance(x, str):
            return NFElem((QQ(x),) + (mpq(0),) * (self.degree - 1), self)
        return NFElem((mpq(x),) + (mpq(0),) * (self.degree - 1), self)

    @property
    def gen(self) -> NFElem:
        return NFElem((mpq(0), mpq(1)) + (mpq(0),) * (self.degree - 2), self)

    def random(self, rng, bound: int = 3):
        return NFElem(tuple(mpq(rng.randint(-bound, bound)) for _ in range(self.degree)), self)

    def to_json(self, x):
        return [str(a) for a in x.c]


QQ = Rationals()


def _poly_str(coeffs: Sequence[int]) -> str:
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if i == 0:
            body = f"{a}"
        else:
            body = ("" if a == 1 else f"{a}") + ("x" if i == 1 else f"x^{i}")
        parts.append((sign, body))
    s = ""
    for k, (sign, body) in enumerate(parts):
        if k == 0:
            s += ("-" if sign == "-" else "") + body
        else:
            s += sign + body
    return s or "0"


_TERM = re.compile(r"([+-]?)(\d*)(\*?x(?:\^(\d+))?)?")


def _parse_int_poly(text: str) -> list[int]:
    text = text.replace(" ", "")
    if not text:
        raise MalformedDescriptor("empty polynomial")
    pos = 0
    coeffs: dict[int, int] = {}
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise MalformedDescriptor(f"cannot parse polynomial at {text[pos:]!r}")
        sign, num, xpart, exp = m.groups()
        if not num and not xpart:
            raise MalformedDescriptor(f"cannot parse polynomial at {text[pos:]!r}")
        if pos > 0 and not sign:
            raise MalformedDescriptor(f"missing operator before {text[pos:]!r}")
        c = int(num) if num else 1
        if sign == "-":
            c = -c
        d = 0 if not xpart else (int(exp) if exp else 1)
        coeffs[d] = coeffs.get(d, 0) + c
        pos = m.end()
    n = max(coeffs)
    return [coeffs.get(i, 0) for i in range(n + 1)]


def field_from_spec(text: str) -> Field:
    """Parse ``Q``, ``F_<p>`` or ``Q[x]/(<monic integer polynomial>)``."""
    t = re.sub(r"\s+", "", text)
    if t == "Q":
        return QQ
    m = re.fullmatch(r"F_(\d+)", t)
    if m:
        return PrimeField(int(m.group(1)))
    m = re.fullmatch(r"Q\[x\]/\((.+)\)", t)
    if m:
        return NumberField(_parse_int_poly(m.group(1)))
    raise MalformedDescriptor(f"unrecognised field descriptor {text!r}")


# ---------------------------------------------------------------------------
# univariate polynomials: lists of scalars, low degree first, no trailing zeros

def _strip(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [a[0] * 0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    return _strip(out)


def poly_add(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else None
        y = b[i] if i < len(b) else None
        out.append(x if y is None else (y if x is None else x + y))
    return _strip(out)


def poly_scale(a: Sequence, c) -> list:
    return _strip([x * c for x in a])


def poly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a = _strip(list(a))
    b = _strip(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    lead_inv = 1 / b[-1] if not isinstance(b[-1], (Mod, NFElem)) else b[-1].inverse()
    q = [a[0] * 0] * (len(a) - len(b) + 1)
    r = list(a)
    for k in range(len(a) - len(b), -1, -1):
        c = r[k + len(b) - 1] * lead_inv
        q[k] = c
        if c:
            for j, y in enumerate(b):
                r[k + j] = r[k + j] - c * y
    return _strip(q), _strip(r[: len(b) - 1])


def poly_gcd(a: Sequence, b: Sequence) -> list:
    """Monic gcd."""
    a = _strip(list(a))
    b = _strip(list(b))
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    return poly_scale(a, 1 / a[-1] if not isinstance(a[-1], (Mod, NFElem)) else a[-1].inverse())


def poly_xgcd(a: Sequence, b: Sequence) -> tuple[list, list, list]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` (g not normalised)."""
    a = _strip(list(a))
    b = _strip(list(b))
    one = (a or b)[0] * 0 + 1
    s0, s1 = [one], []
    t0, t1 = [], [one]
    while b:
        q, r = poly_divmod(a, b)
        a, b = b, r
        s0, s1 = s1, poly_add(s0, poly_scale(poly_mul(q, s1), -1))
        t0, t1 = t1, poly_add(t0, poly_scale(poly_mul(q, t1), -1))
    return a, s0, t0


def rational_roots(p: Sequence) -> list:
    """Rational roots of a polynomial with rational coefficients."""
    p = _strip([mpq(c) for c in p])
    if len(p) <= 1:
        return []
    den = 1
    for c in p:
        den = gmpy2.lcm(den, c.denominator)
    ints = [int(c * den) for c in p]
    roots = set()
    # strip zero roots
    k = 0
    while ints[k] == 0:
        k += 1
    if k:
        roots.add(mpq(0))
    ints = ints[k:]
    if len(ints) == 1:
        return sorted(roots)
    a0, an = abs(ints[0]), abs(ints[-1])
    for u in _divisors(a0):
        for v in _divisors(an):
            for s in (1, -1):
                r = mpq(s * u, v)
                val = mpq(0)
                for c in reversed(ints):
                    val = val * r + c
                if val == 0:
                    roots.add(r)
    return sorted(roots)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return out


def factor_poly(p: Sequence, field: Field) -> list[tuple[list, int]]:
    """Monic irreducible factors with multiplicity.

    Factoring itself is delegated to sympy (rationals, prime fields, and
    algebraic extensions of Q via ``QQ.algebraic_field``).
    """
    import sympy

    p = _strip(list(p))
    if len(p) <= 1:
        return []
    x = sympy.Symbol("x")
    if isinstance(field, Rationals):
        poly = sympy.Poly([sympy.Rational(int(c.numerator), int(c.denominator)) for c in reversed(p)], x, domain=sympy.QQ)
        _, facs = poly.factor_list()
        out = []
        for f, m in facs:
            coeffs = [mpq(int(c.p), int(c.q)) for c in reversed(f.monic().all_coeffs())]
            out.append((coeffs, m))
        return out
    if isinstance(field, PrimeField):
        poly = sympy.Poly([int(c) for c in reversed(p)], x, modulus=field.p)
        _, facs = poly.factor_list()
        out = []
        for f, m in facs:
            coeffs = [Mod(int(c), field.p) for c in reversed(f.monic().all_coeffs())]
            out.append((coeffs, m))
        return out
    if isinstance(field, NumberField):
        if not field.is_field:
            raise FieldError(f"cannot factor over the non-field {field.descriptor}")
        y = sympy.Symbol("y")
        fpoly = sum(int(c) * y**i for i, c in enumerate(field.int_modulus))
        alpha = sympy.CRootOf(fpoly, 0)
        K = sympy.QQ.algebraic_field(alpha)

        def to_k(e: NFElem):
            return K.from_sympy(sum(sympy.Rational(int(a.numerator), int(a.denominator)) * alpha**i
                                    for i, a in enumerate(e.c)))

        poly = sympy.Poly([K.to_sympy(to_k(c)) for c in reversed(p)], x, domain=K)
        _, facs = poly.factor_list()
        out = []
        for f, m in facs:
            coeffs = []
            for c in reversed(f.monic().all_coeffs()):
                rep = K.from_sympy(c).to_list()  # highest power first, in alpha
                vals = [mpq(int(r.numerator), int(r.denominator)) for r in reversed(rep)]
                coeffs.append(field(vals))
            out.append((coeffs, m))
        return out
    raise FieldError(f"no factoring backend for {field!r}")


# ---------------------------------------------------------------------------
# dense matrices

@dataclass
class Matrix:
    """Dense matrix over an exact field (row-major list of lists)."""

    field: Field
    rows: list
    ncols: int

    @classmethod
    def from_rows(cls, field: Field, rows: Iterable[Iterable], ncols: int | None = None) -> "Matrix":
        rows = [[field(x) for x in r] for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatch("ragged matrix")
        return cls(field, rows, ncols)

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        return cls(field, [[field.zero] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.rows[i][i] = field.one
        return m

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and all(
            a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        zero = self.field.zero
        out = []
        for r in self.rows:
            row = [zero] * other.ncols
            for k, a in enumerate(r):
                if a:
                    for j, b in enumerate(other.rows[k]):
                        if b:
                            row[j] = row[j] + a * b
            out.append(row)
        return Matrix(self.field, out, other.ncols)

    def apply(self, v: Sequence) -> list:
        if len(v) != self.ncols:
            raise DimensionMismatch("vector length")
        zero = self.field.zero
        out = []
        for r in self.rows:
            s = zero
            for a, b in zip(r, v):
                if a and b:
                    s = s + a * b
            out.append(s)
        return out

    def transpose(self) -> "Matrix":
        return Matrix(self.field, [list(c) for c in zip(*self.rows)] if self.rows else [[] for _ in range(self.ncols)],
                      self.nrows)

    def rank(self) -> int:
        return rref(self)[1]

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def copy(self) -> "Matrix":
        return Matrix(self.field, [list(r) for r in self.rows], self.ncols)


def rref(m: Matrix) -> tuple[Matrix, int, list[int]]:
    """Reduced row echelon form.

    Pivot rule: leftmost column with a nonzero entry at or below the current
    row; the first such row is the pivot row.
    """
    rows = [list(r) for r in m.rows]
    nrows, ncols = len(rows), m.ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c] if not isinstance(rows[r][c], (Mod, NFElem)) else rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                ri = rows[i]
                rr = rows[r]
                rows[i] = [a - f * b if b else a for a, b in zip(ri, rr)]
        pivots.append(c)
        r += 1
    return Matrix(m.field, rows, ncols), len(pivots), pivots


def kernel_basis(m: Matrix) -> list[list]:
    red, _, pivots = rref(m)
    field = m.field
    free = [c for c in range(m.ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [field.zero] * m.ncols
        v[f] = field.one
        for i, p in enumerate(pivots):
            v[p] = -red.rows[i][f]
        basis.append(v)
    return basis


def solve_linear(a: Matrix, b: Sequence) -> tuple[list, list[list]] | None:
    """Solve ``a x = b``; return ``(particular, kernel_basis)`` or ``None``."""
    if len(b) != a.nrows:
        raise DimensionMismatch(f"matrix has {a.nrows} rows, right-hand side has {len(b)}")
    field = a.field
    aug = Matrix(field, [list(r) + [field(x)] for r, x in zip(a.rows, b)], a.ncols + 1)
    red, _, pivots = rref(aug)
    if a.ncols in pivots:
        return None
    x = [field.zero] * a.ncols
    for i, p in enumerate(pivots):
        x[p] = red.rows[i][a.ncols]
    return x, kernel_basis(a)


# ---------------------------------------------------------------------------
# sparse incremental echelon form

def _inv(x):
    return x.inverse() if isinstance(x, (Mod, NFElem)) else 1 / x


class SparseEchelon:
    """Incrementally maintained row-echelon basis of sparse vectors.

    Vectors are ``{column: scalar}`` dicts.  Every stored row has leading
    coefficient 1 at its pivot (its smallest column), and no two rows share a
    pivot.  :meth:`reduce` returns the unique normal form of a vector modulo the
    row space, supported on non-pivot columns.
    """

    def __init__(self, rows: Iterable[dict] = ()):
        self.rows: dict[int, dict] = {}
        for r in rows:
            self.add(r)

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def reduce(self, vec: dict, track: bool = False):
        import heapq

        v = {k: c for k, c in vec.items() if c}
        coeffs: dict[int, object] = {}
        heap = list(v)
        heapq.heapify(heap)
        seen = set()
        rows = self.rows
        while heap:
            k = heapq.heappop(heap)
            if k in seen:
                continue
            seen.add(k)
            c = v.get(k)
            if c is None or k not in rows:
                continue
            row = rows[k]
            if track:
                coeffs[k] = c
            for j, a in row.items():
                old = v.get(j)
                if old is None:
                    v[j] = -c * a
                    heapq.heappush(heap, j)
                else:
                    new = old - c * a
                    if new:
                        v[j] = new
                    else:
                        del v[j]
        if track:
            return v, coeffs
        return v

    def add(self, vec: dict) -> bool:
        r = self.reduce(vec)
        if not r:
            return False
        p = min(r)
        inv = _inv(r[p])
        self.rows[p] = {k: c * inv for k, c in r.items()}
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)


def solve_sparse(equations: Sequence[dict], rhs: Sequence, nvars: int, field: Field,
                 want_kernel: bool = True) -> tuple[list, list[list]] | None:
    """Solve a sparse linear system.

    ``equations[i]`` maps variable index to coefficient; ``rhs[i]`` is its
    right-hand side.  Returns ``(particular, kernel_basis)`` or ``None`` when
    the system is inconsistent.
    """
    if len(equations) != len(rhs):
        raise DimensionMismatch("equation/rhs count mismatch")
    ech = SparseEchelon()
    for eq, b in zip(equations, rhs):
        row = {k: c for k, c in eq.items() if c}
        if b:
            row[nvars] = field(b) if not isinstance(b, (Mod, NFElem)) else b
        if row:
            ech.add(row)
    if nvars in ech.rows:
        return None
    pivots = sorted(ech.rows, reverse=True)
    pivset = set(pivots)

    def back(assign: dict) -> list:
        # assign: values for free variables, plus the rhs column
        x = dict(assign)
        for p in pivots:
            row = ech.rows[p]
            s = field.zero
            for j, a in row.items():
                if j == p:
                    continue
                val = x.get(j)
                if val:
                    s = s + a * val
            if j_rhs := row.get(nvars):
                s = s - j_rhs
            x[p] = -s
        return [x.get(i, field.zero) for i in range(nvars)]

    particular = back({})
    kernel = []
    if want_kernel:
        for f in range(nvars):
            if f not in pivset:
                vec = _back_homogeneous(ech, pivots, nvars, f, field)
                kernel.append(vec)
    return particular, kernel


def _back_homogeneous(ech: SparseEchelon, pivots: list[int], nvars: int, free: int, field: Field) -> list:
    x = {free: field.one}
    for p in pivots:
        if p > free:
            continue
        row = ech.rows[p]
        s = field.zero
        for j, a in row.items():
            if j != p and j != nvars:
                val = x.get(j)
                if val:
                    s = s + a * val
        if s:
            x[p] = -s
    return [x.get(i, field.zero) for i in range(nvars)]
