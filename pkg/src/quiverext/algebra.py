"""Finite-dimensional associative algebras in structure-constant form.

Elements are dense coordinate lists.  ``table[i][j]`` is the product
``b_i * b_j`` as a sparse ``{k: coeff}`` dict.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .exactfield import (Field, Matrix, Mod, NFElem, SparseEchelon, factor_poly, field_from_spec,
                         poly_mul, poly_xgcd, solve_sparse)

__all__ = [
    "AlgebraError", "PositiveCharacteristic", "NonSplitSemisimpleQuotient", "RadicalUnavailable",
    "CenterNotSplit", "CapTooSmall", "NotBasic", "AssocAlgebra", "Module", "IdempotentDecomposition",
    "radical_via_trace", "center", "lift_idempotents", "block_decomposition", "block_algebras",
    "basic_reduction", "gabriel_quiver", "is_projective_right", "is_projective_left",
    "direct_product", "subspace_algebra", "quotient_algebra", "load_algebra_json",
]

SPLIT_RETRIES = 64
LIFT_STEPS = 64


class AlgebraError(ValueError):
    pass


class PositiveCharacteristic(AlgebraError):
    pass


class NonSplitSemisimpleQuotient(AlgebraError):
    pass


class RadicalUnavailable(AlgebraError):
    pass


class CenterNotSplit(AlgebraError):
    pass


class CapTooSmall(AlgebraError):
    pass


class NotBasic(AlgebraError):
    pass


def _inv(x):
    return x.inverse() if isinstance(x, (Mod, NFElem)) else 1 / x


def _sparse(v: Sequence) -> dict:
    return {i: c for i, c in enumerate(v) if c}


def span_echelon(vectors: Sequence[Sequence]) -> SparseEchelon:
    ech = SparseEchelon()
    for v in vectors:
        ech.add(_sparse(v))
    return ech


def span_basis(vectors: Sequence[Sequence], field: Field, n: int) -> list[list]:
    """Basis of the span in reduced row echelon form (rows sorted by pivot)."""
    ech = span_echelon(vectors)
    # back-reduce so that each row is zero on the other pivots
    piv = sorted(ech.rows)
    rows = {p: dict(ech.rows[p]) for p in piv}
    for p in reversed(piv):
        for q in piv:
            if q < p and p in rows[q]:
                c = rows[q][p]
                for j, a in rows[p].items():
                    nv = rows[q].get(j, field.zero) - c * a
                    if nv:
                        rows[q][j] = nv
                    else:
                        rows[q].pop(j, None)
    out = []
    for p in piv:
        v = [field.zero] * n
        for j, a in rows[p].items():
            v[j] = a
        out.append(v)
    return out


class AssocAlgebra:
    """Unital associative algebra given by structure constants."""

    def __init__(self, field: Field, dim: int, table, unit: Sequence, radical=None,
                 origin: str = "manual", labels=None, generators=None, check: bool = True):
        self.field = field
        self.dim = int(dim)
        self.table = table
        self.unit = list(unit)
        self.radical = None if radical is None else [list(r) for r in radical]
        self.origin = origin
        self.labels = list(labels) if labels is not None else [f"b{i}" for i in range(self.dim)]
        self.generators = list(generators) if generators is not None else list(range(self.dim))
        self.presentation = None
        self._rad_ech = None
        if len(self.unit) != self.dim or len(table) != self.dim:
            raise AlgebraError("structure constants and unit must match the dimension")
        if check:
            self.check()

    # -- element arithmetic -------------------------------------------------
    def zero(self) -> list:
        return [self.field.zero] * self.dim

    def basis_vector(self, i: int) -> list:
        v = self.zero()
        v[i] = self.field.one
        return v

    def mul(self, x: Sequence, y: Sequence) -> list:
        out = self.zero()
        ys = [(j, b) for j, b in enumerate(y) if b]
        table = self.table
        for i, a in enumerate(x):
            if not a:
                continue
            row = table[i]
            for j, b in ys:
                ab = a * b
                for k, c in row[j].items():
                    out[k] = out[k] + ab * c
        return out

    def add(self, x, y) -> list:
        return [a + b for a, b in zip(x, y)]

    def sub(self, x, y) -> list:
        return [a - b for a, b in zip(x, y)]

    def scale(self, c, x) -> list:
        return [c * a for a in x]

    def combo(self, coeffs, vectors) -> list:
        out = self.zero()
        for c, v in zip(coeffs, vectors):
            if c:
                out = [o + c * a for o, a in zip(out, v)]
        return out

    def is_zero(self, x) -> bool:
        return not any(x)

    def random_element(self, rng, basis=None, bound: int = 3) -> list:
        basis = basis if basis is not None else [self.basis_vector(i) for i in range(self.dim)]
        return self.combo([self.field(rng.randint(-bound, bound)) for _ in basis], basis)

    def left_matrix(self, x) -> Matrix:
        """Matrix of ``y -> x*y`` acting on coordinate columns."""
        cols = [self.mul(x, self.basis_vector(j)) for j in range(self.dim)]
        return Matrix(self.field, [list(r) for r in zip(*cols)] if cols else [], self.dim)

    def right_matrix(self, x) -> Matrix:
        cols = [self.mul(self.basis_vector(j), x) for j in range(self.dim)]
        return Matrix(self.field, [list(r) for r in zip(*cols)] if cols else [], self.dim)

    def power(self, x, n: int) -> list:
        out = list(self.unit)
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def eval_poly(self, poly: Sequence, x, unit=None) -> list:
        unit = self.unit if unit is None else unit
        out = self.zero()
        for c in reversed(poly):
            out = self.mul(out, x)
            if c:
                out = [o + c * u for o, u in zip(out, unit)]
        return out

    def minimal_polynomial(self, x, unit=None) -> list:
        """Monic minimal polynomial of ``x`` in the unital subalgebra with identity ``unit``."""
        unit = self.unit if unit is None else unit
        n = self.dim
        f = self.field
        ech = SparseEchelon()
        p = list(unit)
        k = 0
        while True:
            vec = _sparse(p)
            vec[n + k] = f.one
            red = ech.reduce(vec)
            if all(i >= n for i in red):
                coeffs = [red.get(n + j, f.zero) for j in range(k + 1)]
                lead = _inv(coeffs[-1])
                return [c * lead for c in coeffs]
            ech.add(vec)
            p = self.mul(p, x)
            k += 1

    # -- validation --------------------------------------------------------
    def check(self):
        self.check_unit()
        self.check_associative()
        if self.radical is not None:
            self.check_radical()

    def check_unit(self):
        for i in range(self.dim):
            b = self.basis_vector(i)
            if self.mul(self.unit, b) != b or self.mul(b, self.unit) != b:
                raise AlgebraError(f"unit law fails on basis element {self.labels[i]}")

    def check_associative(self):
        for i in range(self.dim):
            bi = self.basis_vector(i)
            for j in range(self.dim):
                bij = self.mul(bi, self.basis_vector(j))
                for k in range(self.dim):
                    bk = self.basis_vector(k)
                    if self.mul(bij, bk) != self.mul(bi, self.mul(self.basis_vector(j), bk)):
                        raise AlgebraError(f"associativity fails on ({i},{j},{k})")

    def check_radical(self):
        rad = self.radical
        ech = self.radical_echelon()
        for r in rad:
            for i in range(self.dim):
                b = self.basis_vector(i)
                if not ech.contains(_sparse(self.mul(b, r))) or not ech.contains(_sparse(self.mul(r, b))):
                    raise AlgebraError("designated radical is not a two-sided ideal")
        # nilpotent: rad^k = 0 for some k <= dim + 1
        if self.radical_nilpotency() is None:
            raise AlgebraError("designated radical is not nilpotent")
        if self.field.characteristic == 0:
            tr = radical_via_trace(self)
            if len(tr) != len(span_basis(rad, self.field, self.dim)) or not all(ech.contains(_sparse(v)) for v in tr):
                raise AlgebraError("quotient by the designated radical is not semisimple")

    # -- radical helpers ---------------------------------------------------
    def radical_echelon(self) -> SparseEchelon:
        if self._rad_ech is None:
            self._rad_ech = span_echelon(self.get_radical())
        return self._rad_ech

    def get_radical(self) -> list[list]:
        if self.radical is None:
            if self.field.characteristic != 0:
                raise RadicalUnavailable("no designated radical and characteristic is positive")
            self.radical = radical_via_trace(self)
        return self.radical

    def in_radical(self, x) -> bool:
        return self.radical_echelon().contains(_sparse(x))

    def radical_powers(self) -> list[list[list]]:
        """Bases of rad^1, rad^2, ... up to the first zero power (exclusive)."""
        f = self.field
        cur = span_basis(self.get_radical(), f, self.dim)
        out = []
        rad = cur
        while cur:
            out.append(cur)
            if len(out) > self.dim + 1:
                return None
            cur = span_basis([self.mul(x, r) for x in cur for r in rad], f, self.dim)
        return out

    def radical_nilpotency(self) -> int | None:
        p = self.radical_powers()
        return None if p is None else len(p) + 1 if p else 1

    def is_commutative(self) -> bool:
        return all(self.table[i][j] == self.table[j][i] for i in range(self.dim) for j in range(i))

    # -- serialisation -------------------------------------------------------
    def to_json(self) -> dict:
        f = self.field
        sc = [[[f.to_json(self.table[i][j].get(k, f.zero)) for k in range(self.dim)]
               for j in range(self.dim)] for i in range(self.dim)]
        out = {"field": f.descriptor, "dimension": self.dim, "unit": [f.to_json(c) for c in self.unit],
               "structureConstants": sc, "labels": self.labels}
        if self.radical is not None:
            out["radicalBasis"] = [[f.to_json(c) for c in r] for r in self.radical]
        return out

    def __repr__(self):
        return f"AssocAlgebra({self.field.descriptor}, dim={self.dim}, origin={self.origin})"


def load_algebra_json(data) -> AssocAlgebra:
    """Manual entry: {field, dimension, unit, structureConstants[i][j][k], radicalBasis?}."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    f = field_from_spec(data["field"])
    n = int(data["dimension"])
    sc = data["structureConstants"]
    coerce = (lambda x: f(x) if not isinstance(x, list) else f(x))
    table = [[{k: coerce(c) for k, c in enumerate(sc[i][j]) if coerce(c)} for j in range(n)] for i in range(n)]
    unit = [coerce(c) for c in data["unit"]]
    rad = data.get("radicalBasis")
    if rad is not None:
        rad = [[coerce(c) for c in r] for r in rad]
    return AssocAlgebra(f, n, table, unit, radical=rad, origin="manual", labels=data.get("labels"))


def direct_product(a: AssocAlgebra, b: AssocAlgebra) -> AssocAlgebra:
    if a.field != b.field:
        raise AlgebraError("factors must share a field")
    n, m = a.dim, b.dim
    table = [[{} for _ in range(n + m)] for _ in range(n + m)]
    for i in range(n):
        for j in range(n):
            table[i][j] = dict(a.table[i][j])
    for i in range(m):
        for j in range(m):
            table[n + i][n + j] = {n + k: c for k, c in b.table[i][j].items()}
    f = a.field
    rad = None
    if a.radical is not None and b.radical is not None:
        rad = [list(r) + [f.zero] * m for r in a.radical] + [[f.zero] * n + list(r) for r in b.radical]
    gens = list(a.generators) + [n + g for g in b.generators]
    return AssocAlgebra(f, n + m, table, list(a.unit) + list(b.unit), radical=rad, origin="manual",
                        labels=[f"{x}|0" for x in a.labels] + [f"0|{x}" for x in b.labels],
                        generators=gens, check=False)


def subspace_algebra(a: AssocAlgebra, spanning: Sequence, unit: Sequence, radical=None,
                     origin: str | None = None) -> tuple[AssocAlgebra, list[list]]:
    """Algebra structure on a subspace closed under multiplication with identity ``unit``.

    Returns the new algebra and its basis as vectors of ``a`` (reduced echelon
    form, so coordinates are read off at the pivot positions).
    """
    f = a.field
    basis = span_basis(spanning, f, a.dim)
    pivots = [next(i for i, c in enumerate(v) if c) for v in basis]
    m = len(basis)

    def coords(v):
        return [v[p] for p in pivots]

    table = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            prod = a.mul(basis[i], basis[j])
            c = coords(prod)
            table[i][j] = {k: x for k, x in enumerate(c) if x}
    rad = None
    if radical is not None:
        rad = [coords(r) for r in span_basis(radical, f, a.dim)]
    sub = AssocAlgebra(f, m, table, coords(unit), radical=rad, origin=origin or a.origin, check=False)
    sub.embedding = basis
    sub.coords = coords
    return sub, basis


def quotient_algebra(a: AssocAlgebra, ideal: Sequence):
    """Return ``(S, section, project)`` for ``S = a / ideal``."""
    f = a.field
    ech = span_echelon(ideal)
    comp = [i for i in range(a.dim) if i not in ech.rows]
    m = len(comp)
    pos = {i: k for k, i in enumerate(comp)}

    def project(v):
        red = ech.reduce(_sparse(v))
        out = [f.zero] * m
        for i, c in red.items():
            out[pos[i]] = c
        return out

    section = [a.basis_vector(i) for i in comp]
    table = [[None] * m for _ in range(m)]
    for x in range(m):
        for y in range(m):
            p = project(a.mul(section[x], section[y]))
            table[x][y] = {k: c for k, c in enumerate(p) if c}
    s = AssocAlgebra(f, m, table, project(a.unit), radical=None, origin="quotient",
                     labels=[a.labels[i] for i in comp], check=False)

    def lift(v):
        out = a.zero()
        for k, c in enumerate(v):
            if c:
                out[comp[k]] = c
        return out

    return s, lift, project


# ---------------------------------------------------------------------------
# radical

def radical_via_trace(a: AssocAlgebra) -> list[list]:
    """Dickson's criterion: rad = {x : tr(L_x L_y) = 0 for all y} in characteristic 0."""
    if a.field.characteristic != 0:
        raise PositiveCharacteristic("trace-form radical needs characteristic 0; supply a radical basis")
    n = a.dim
    f = a.field
    # tr(L_i L_j) = sum_{k,l} c_{i,l}^k c_{j,k}^l
    gram = [[f.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            s = f.zero
            for l in range(n):
                for k, c in a.table[i][l].items():
                    d = a.table[j][k].get(l)
                    if d:
                        s = s + c * d
            gram[i][j] = s
            gram[j][i] = s
    eqs = [{j: gram[i][j] for j in range(n) if gram[i][j]} for i in range(n)]
    res = solve_sparse(eqs, [f.zero] * n, n, f)
    return span_basis(res[1], f, n)


def center(a: AssocAlgebra) -> list[list]:
    f = a.field
    n = a.dim
    eqs = []
    for g in a.generators:
        for k in range(n):
            eq = {}
            for i in range(n):
                c = a.table[i][g].get(k, f.zero) - a.table[g][i].get(k, f.zero)
                if c:
                    eq[i] = c
            if eq:
                eqs.append(eq)
    res = solve_sparse(eqs, [f.zero] * len(eqs), n, f)
    return span_basis(res[1], f, n)


def intersect(u: Sequence, w: Sequence, field: Field, n: int) -> list[list]:
    if not u or not w:
        return []
    nu = len(u)
    eqs = []
    for k in range(n):
        eq = {}
        for i, v in enumerate(u):
            if v[k]:
                eq[i] = v[k]
        for j, v in enumerate(w):
            if v[k]:
                eq[nu + j] = -v[k]
        if eq:
            eqs.append(eq)
    res = solve_sparse(eqs, [field.zero] * len(eqs), nu + len(w), field)
    out = []
    for sol in res[1]:
        vec = [field.zero] * n
        for i, v in enumerate(u):
            if sol[i]:
                vec = [x + sol[i] * y for x, y in zip(vec, v)]
        out.append(vec)
    return span_basis(out, field, n)


# ---------------------------------------------------------------------------
# idempotents

def _corner_basis(s: AssocAlgebra, e) -> list[list]:
    return span_basis([s.mul(s.mul(e, s.basis_vector(i)), e) for i in range(s.dim)], s.field, s.dim)


def _split_semisimple(s: AssocAlgebra, rng: random.Random, require_split: bool) -> list[tuple[list, bool]]:
    """Primitive orthogonal idempotents of a semisimple algebra.

    Returns ``(idempotent, split)`` pairs; ``split`` means ``eSe`` is the ground field.
    """
    out = []
    stack = [list(s.unit)]
    while stack:
        e = stack.pop()
        cb = _corner_basis(s, e)
        d = len(cb)
        if d == 1:
            out.append((e, True))
            continue
        comm = all(s.mul(x, y) == s.mul(y, x) for i, x in enumerate(cb) for y in cb[:i])
        pieces = None
        primitive_field = False
        for _ in range(SPLIT_RETRIES):
            y = s.random_element(rng, cb)
            m = s.minimal_polynomial(y, unit=e)
            facs = factor_poly(m, s.field)
            if len(facs) > 1:
                pieces = _crt_idempotents(s, y, e, facs)
                break
            if comm and facs and facs[0][1] == 1 and len(facs[0][0]) - 1 == d:
                primitive_field = True
                break
        if pieces is not None:
            stack.extend(reversed(pieces))
            continue
        if primitive_field and not require_split:
            out.append((e, False))
            continue
        raise NonSplitSemisimpleQuotient(
            f"cannot split a {d}-dimensional corner of the semisimple quotient over "
            f"{s.field.descriptor}; extend the field")
    return out


def _crt_idempotents(s: AssocAlgebra, y, e, facs) -> list[list]:
    parts = []
    for g, mult in facs:
        p = [s.field.one]
        for _ in range(mult):
            p = poly_mul(p, g)
        parts.append(p)
    out = []
    for i, p in enumerate(parts):
        q = [s.field.one]
        for j, r in enumerate(parts):
            if j != i:
                q = poly_mul(q, r)
        g, sc, _ = poly_xgcd(q, p)
        ginv = _inv(g[0])
        poly = [c * ginv for c in poly_mul(sc, q)]
        eps = s.eval_poly(poly, y, unit=e)
        if s.mul(eps, eps) != eps:
            raise AlgebraError("idempotent splitting failed to produce an idempotent")
        out.append(eps)
    return out


def _lift_sequence(a: AssocAlgebra, reps: Sequence[list], start=None) -> list[list]:
    """Lift orthogonal idempotents (given by representatives modulo a nilpotent ideal)
    to orthogonal idempotents summing to ``start`` (default 1)."""
    rest = list(a.unit) if start is None else list(start)
    out = []
    for r in reps[:-1]:
        x = a.mul(a.mul(rest, r), rest)
        for _ in range(LIFT_STEPS):
            x2 = a.mul(x, x)
            if x2 == x:
                break
            x3 = a.mul(x2, x)
            x = [3 * p - 2 * q for p, q in zip(x2, x3)]
        else:
            raise AlgebraError("idempotent lifting did not converge")
        out.append(x)
        rest = a.sub(rest, x)
    out.append(rest)
    return out


@dataclass
class IdempotentDecomposition:
    idempotents: list
    iso_classes: list          # list of lists of indices into idempotents
    intertwiners: dict = dc_field(default_factory=dict)   # (i, j) -> (x, y) with xy = e_i, yx = e_j
    split: bool = True

    def class_of(self, i: int) -> int:
        return next(k for k, c in enumerate(self.iso_classes) if i in c)

    def representatives(self) -> list[int]:
        return [c[0] for c in self.iso_classes]


def _primitive_decomposition(a: AssocAlgebra, seed: int = 0, require_split: bool = True,
                             start=None) -> tuple[list[list], list[bool], list[list[int]]]:
    rng = random.Random(seed)
    rad = a.get_radical()
    s, lift, project = quotient_algebra(a, rad)
    if start is None:
        ss = _split_semisimple(s, rng, require_split)
    else:
        # decompose e S e only
        e_bar = project(start)
        sub, emb = subspace_algebra(s, _corner_basis(s, e_bar), e_bar)
        pieces = _split_semisimple(sub, rng, require_split)
        ss = [(s.combo(p, emb), fl) for p, fl in pieces]
    idem_bar = [e for e, _ in ss]
    flags = [fl for _, fl in ss]
    order = sorted(range(len(idem_bar)), key=lambda i: _leading_key(idem_bar[i]))
    idem_bar = [idem_bar[i] for i in order]
    flags = [flags[i] for i in order]
    # iso classes in S: e_i S e_j != 0
    classes: list[list[int]] = []
    for i, e in enumerate(idem_bar):
        for c in classes:
            ej = idem_bar[c[0]]
            if any(s.mul(s.mul(ej, s.basis_vector(k)), e) != s.zero() for k in range(s.dim)):
                c.append(i)
                break
        else:
            classes.append([i])
    lifted = _lift_sequence(a, [lift(e) for e in idem_bar], start=start)
    return lifted, flags, classes


def _leading_key(v):
    for i, c in enumerate(v):
        if c:
            return (i,)
    return (len(v),)


def lift_idempotents(a: AssocAlgebra, seed: int = 0) -> IdempotentDecomposition:
    """Complete set of primitive orthogonal idempotents with isomorphism classes."""
    lifted, flags, classes = _primitive_decomposition(a, seed, require_split=True)
    dec = IdempotentDecomposition(lifted, classes)
    rng = random.Random(seed + 1)
    for c in classes:
        r = c[0]
        for j in c[1:]:
            dec.intertwiners[(r, j)] = _intertwiner(a, lifted[r], lifted[j], rng)
    return dec


def _intertwiner(a: AssocAlgebra, ei, ej, rng):
    """x in e_i A e_j, y in e_j A e_i with xy = e_i and yx = e_j."""
    f = a.field
    xs = span_basis([a.mul(a.mul(ei, a.basis_vector(k)), ej) for k in range(a.dim)], f, a.dim)
    ys = span_basis([a.mul(a.mul(ej, a.basis_vector(k)), ei) for k in range(a.dim)], f, a.dim)
    for attempt in range(SPLIT_RETRIES):
        x = xs[attempt] if attempt < len(xs) else a.random_element(rng, xs)
        prods = [a.mul(x, y) for y in ys]
        eqs = [{t: p[k] for t, p in enumerate(prods) if p[k]} for k in range(a.dim)]
        res = solve_sparse(eqs, ei, len(ys), f, want_kernel=False)
        if res is None:
            continue
        y = a.combo(res[0], ys)
        if a.mul(y, x) == ej:
            return x, y
    raise AlgebraError("could not certify isomorphism of idempotents")


def block_decomposition(a: AssocAlgebra, seed: int = 0) -> list[list]:
    """Central primitive idempotents (one per block), ordered by leading coordinate."""
    f = a.field
    z = center(a)
    if a.radical is not None or f.characteristic == 0:
        zrad = intersect(z, a.get_radical(), f, a.dim)
    else:
        raise RadicalUnavailable("block decomposition needs a radical")
    zalg, emb = subspace_algebra(a, z, a.unit, radical=zrad)
    s, lift, project = quotient_algebra(zalg, zalg.radical)
    rng = random.Random(seed)
    try:
        pieces = _split_semisimple(s, rng, require_split=False)
    except NonSplitSemisimpleQuotient as e:
        raise CenterNotSplit(str(e)) from e
    reps = [a.combo(lift(p), emb) for p, _ in pieces]
    reps.sort(key=_leading_key)
    lifted = _lift_sequence(a, reps)
    for c in lifted:
        if any(a.mul(c, a.basis_vector(i)) != a.mul(a.basis_vector(i), c) for i in range(a.dim)):
            raise AlgebraError("lifted block idempotent is not central")
    lifted.sort(key=_leading_key)
    return lifted


def corner_algebra(a: AssocAlgebra, e, origin: str | None = None) -> AssocAlgebra:
    span = [a.mul(a.mul(e, a.basis_vector(i)), e) for i in range(a.dim)]
    rad = None
    if a.radical is not None:
        rad = [a.mul(a.mul(e, r), e) for r in a.radical]
    sub, _ = subspace_algebra(a, span, e, radical=rad, origin=origin)
    return sub


def block_algebras(a: AssocAlgebra, seed: int = 0) -> list[AssocAlgebra]:
    return [corner_algebra(a, c, origin="block") for c in block_decomposition(a, seed)]


def basic_reduction(a: AssocAlgebra, seed: int = 0) -> tuple[AssocAlgebra, list[int]]:
    dec = lift_idempotents(a, seed)
    reps = dec.representatives()
    e = a.zero()
    for r in reps:
        e = a.add(e, dec.idempotents[r])
    basic = corner_algebra(a, e, origin="basic")
    return basic, [len(c) for c in dec.iso_classes]


# ---------------------------------------------------------------------------
# Gabriel quiver

@dataclass
class GabrielData:
    presentation: object
    idempotents: list
    arrow_elements: dict        # arrow label -> element of the algebra
    images: list                # image in the algebra of each basis path of the result


def gabriel_quiver(basic: AssocAlgebra, degree_cap: int | None = None, seed: int = 0):
    """Quiver with relations presenting a basic split algebra."""
    return gabriel_data(basic, degree_cap, seed).presentation


def gabriel_data(basic: AssocAlgebra, degree_cap: int | None = None, seed: int = 0) -> GabrielData:
    from .quiver import Arrow, Path, Presentation, Quiver, Relation, path_basis_algebra

    f = basic.field
    n = basic.dim
    dec = lift_idempotents(basic, seed)
    if any(len(c) > 1 for c in dec.iso_classes):
        raise NotBasic("algebra is not basic; apply basic_reduction first")
    idem = dec.idempotents
    nv = len(idem)
    rad = span_basis(basic.get_radical(), f, n)
    powers = basic.radical_powers()
    loewy = len(powers) + 1 if powers else 1
    cap = loewy if degree_cap is None else int(degree_cap)
    rad2 = powers[1] if len(powers) > 1 else []
    vertices = [str(i + 1) for i in range(nv)]
    arrows = []
    elements = {}
    count = 0
    for i in range(nv):
        for j in range(nv):
            w = SparseEchelon()
            for s_ in rad2:
                w.add(_sparse(basic.mul(basic.mul(idem[j], s_), idem[i])))
            for r in rad:
                x = basic.mul(basic.mul(idem[j], r), idem[i])
                if w.add(_sparse(x)):
                    count += 1
                    lab = _arrow_label(count)
                    arrows.append(Arrow(lab, vertices[i], vertices[j]))
                    elements[lab] = x
    quiver = Quiver(vertices, arrows)
    vidx = {v: k for k, v in enumerate(vertices)}

    def image(p: Path):
        if not p.arrows:
            return idem[vidx[p.source]]
        out = elements[p.arrows[0]]
        for lab in p.arrows[1:]:
            out = basic.mul(elements[lab], out)
        return out

    paths = []
    for length in range(cap + 1):
        paths.extend(sorted(quiver.paths_of_length(length), key=lambda p: p.arrows))
    pidx = {p: k for k, p in enumerate(paths)}
    images = [image(p) for p in paths]
    # kernel of span(paths) -> A; one syzygy per dependent path
    deps = SparseEchelon()
    kernel = []
    for k, img in enumerate(images):
        vec = _sparse(img)
        vec[n + k] = f.one
        red = deps.reduce(vec)
        if all(i >= n for i in red):
            kernel.append({i - n: c for i, c in red.items()})
        else:
            deps.add(vec)
    # greedy generating set of the ideal, truncated at the cap
    ideal = SparseEchelon()
    relations = []
    for kv in kernel:
        if ideal.contains(_ideal_key(kv, paths)):
            continue
        terms = [(paths[k], c) for k, c in kv.items()]
        lead = min(terms, key=lambda t: (-len(t[0]), t[0].arrows))[1]
        rel = Relation.from_terms((p, c * _inv(lead)) for p, c in terms)
        relations.append(rel)
        for vec in _two_sided_multiples(quiver, rel, cap):
            ideal.add({pidx[p]: c for p, c in vec.items()})
    for p in quiver.paths_of_length(cap):
        if not ideal.contains({pidx[p]: f.one}):
            raise CapTooSmall(f"path {p} of length {cap} not in the computed ideal; raise the degree cap")
    pres = Presentation(f, quiver, relations, cap=max(cap, 2))
    try:
        pa = path_basis_algebra(pres)
    except Exception as e:
        raise CapTooSmall(f"recovered presentation is not admissible within the cap: {e}") from e
    if pa.dim != n:
        raise CapTooSmall(f"recovered presentation has dimension {pa.dim}, algebra has {n}")
    imgs = [image(p) for p in pa.paths]
    if len(span_basis(imgs, f, n)) != n:
        raise CapTooSmall("recovered presentation does not map isomorphically onto the algebra")
    return GabrielData(pres, idem, elements, imgs)


def _ideal_key(kv: dict, paths) -> dict:
    return dict(kv)


def _two_sided_multiples(quiver, rel, cap: int):
    from .quiver import Path

    lo = min(len(p) for p, _ in rel.terms)
    for j in range(cap - lo + 1):
        for v in quiver.paths_of_length(j, end=rel.source):
            for k in range(cap - lo - j + 1):
                for u in quiver.paths_of_length(k, start=rel.target):
                    vec = {}
                    for p, c in rel.terms:
                        full = Path(v.source, u.target, v.arrows + p.arrows + u.arrows)
                        if len(full) <= cap:
                            vec[full] = c
                    if vec:
                        yield vec


def _arrow_label(k: int) -> str:
    letters = "abcdefghijklmnopqrstuvwxyz"
    if k <= 26:
        return letters[k - 1]
    return f"x{k}"


# ---------------------------------------------------------------------------
# modules and projectivity

@dataclass
class Module:
    """Finite-dimensional module: ``action[i]`` is the matrix of basis element ``i``.

    Left modules: ``a.v = action[a] @ v``.  Right modules: ``v.a = action[a] @ v``.
    """

    algebra: AssocAlgebra
    dim: int
    action: list
    side: str = "left"

    def act(self, x, v) -> list:
        f = self.algebra.field
        out = [f.zero] * self.dim
        for i, c in enumerate(x):
            if c:
                w = self.action[i].apply(v)
                out = [o + c * a for o, a in zip(out, w)]
        return out

    def matrix_of(self, x) -> Matrix:
        f = self.algebra.field
        m = Matrix.zeros(f, self.dim, self.dim)
        for i, c in enumerate(x):
            if c:
                for r in range(self.dim):
                    row = self.action[i].rows[r]
                    for s in range(self.dim):
                        if row[s]:
                            m.rows[r][s] = m.rows[r][s] + c * row[s]
        return m

    def check(self):
        a = self.algebra
        ident = Matrix.identity(a.field, self.dim)
        if self.matrix_of(a.unit) != ident:
            raise AlgebraError("unit does not act as the identity")
        for i in range(a.dim):
            for j in range(a.dim):
                prod = self.matrix_of(a.mul(a.basis_vector(i), a.basis_vector(j)))
                if self.side == "left":
                    ok = prod == self.action[i] @ self.action[j]
                else:
                    ok = prod == self.action[j] @ self.action[i]
                if not ok:
                    raise AlgebraError(f"action does not respect b{i}*b{j}")
        return True


def regular_module(a: AssocAlgebra, side: str = "left") -> Module:
    mats = [a.left_matrix(a.basis_vector(i)) if side == "left" else a.right_matrix(a.basis_vector(i))
            for i in range(a.dim)]
    return Module(a, a.dim, mats, side)


def _span_dim(vectors, field, n) -> int:
    return SparseEchelon([_sparse(v) for v in vectors]).rank if vectors else 0


def _projectivity(m: Module, dec: IdempotentDecomposition | None, seed: int):
    a = m.algebra
    f = a.field
    if dec is None:
        dec = lift_idempotents(a, seed)
    rad = a.get_radical()
    basis = [[f.one if k == i else f.zero for k in range(m.dim)] for i in range(m.dim)]
    rad_mats = [m.matrix_of(r) for r in rad]
    mrad = [mat.apply(v) for mat in rad_mats for v in basis]
    mults = []
    pdim = 0
    for cls in dec.iso_classes:
        e = dec.idempotents[cls[0]]
        em = m.matrix_of(e)
        top = _span_dim([em.apply(v) for v in basis], f, m.dim) - _span_dim([em.apply(v) for v in mrad], f, m.dim)
        mults.append(top)
        if m.side == "right":
            proj = _span_dim([a.mul(e, a.basis_vector(k)) for k in range(a.dim)], f, a.dim)
        else:
            proj = _span_dim([a.mul(a.basis_vector(k), e) for k in range(a.dim)], f, a.dim)
        pdim += top * proj
    return pdim == m.dim, mults, pdim


def is_projective_right(m: Module, dec: IdempotentDecomposition | None = None, seed: int = 0):
    """(verdict, multiplicity of e_c A per isomorphism class) for a right module."""
    if m.side != "right":
        raise AlgebraError("expected a right module")
    ok, mults, _ = _projectivity(m, dec, seed)
    return ok, mults


def is_projective_left(m: Module, dec: IdempotentDecomposition | None = None, seed: int = 0):
    if m.side != "left":
        raise AlgebraError("expected a left module")
    ok, mults, _ = _projectivity(m, dec, seed)
    return ok, mults
