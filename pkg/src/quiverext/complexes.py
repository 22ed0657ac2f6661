"""Bounded complexes of finitely generated projective left modules.

Projectives are ``P_v = A f_v`` for the idempotents ``f_v`` of a :class:`Frame`
(pairwise non-isomorphic primitive idempotents).  A map ``P_v -> P_w`` is right
multiplication ``z -> z x`` by an element ``x`` of ``f_v A f_w``.  A differential
``d^i`` is stored as a matrix of such elements: rows are the summands of degree
``i+1``, columns the summands of degree ``i``.  Composition of ``d^i`` and then
``d^{i+1}`` has entry ``sum_t d^i[t][s] * d^{i+1}[u][t]``.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from typing import Sequence

from .algebra import AlgebraError, AssocAlgebra, Module, _primitive_decomposition, _sparse, span_basis
from .exactfield import Field, Matrix, SparseEchelon, kernel_basis, solve_sparse

__all__ = [
    "ComplexError", "DepthInsufficient", "BudgetExceeded", "InfiniteFieldUnsupported", "DictionaryUnavailable",
    "Frame", "ProjComplex", "ModuleComplex", "projective_module", "simple_module", "quotient_module",
    "module_from_representation", "minimal_proj_resolution", "lemma_bound", "good_truncate",
    "extend_scalars_complex", "projective_dictionary", "finiteness_sampler", "lemma_iso_roundtrip",
    "random_complex", "modules_isomorphic", "complexes_isomorphic", "complex_invariant", "FINITE_FIELD_CAVEAT",
]

FINITE_FIELD_CAVEAT = ("Finite ground field: derived-discreteness is defined over an infinite field, so counts "
                       "over F_p are desk-scale evidence only and verify nothing about the infinite-field statement.")
DEFAULT_BUDGET = 2 ** 24


class ComplexError(ValueError):
    pass


class DepthInsufficient(ComplexError):
    pass


class BudgetExceeded(ComplexError):
    pass


class InfiniteFieldUnsupported(ComplexError):
    pass


class DictionaryUnavailable(ComplexError):
    pass


# ---------------------------------------------------------------------------
# frames

class Frame:
    """Pairwise non-isomorphic primitive idempotents of a basic algebra, with cached
    bases of the projectives ``A f_v`` and of the spaces ``f_v A f_w``."""

    def __init__(self, algebra: AssocAlgebra, idempotents: Sequence, labels: Sequence[str] | None = None):
        self.algebra = algebra
        self.field = algebra.field
        self.idem = [list(e) for e in idempotents]
        self.labels = list(labels) if labels is not None else [str(i + 1) for i in range(len(self.idem))]
        self._proj: dict[int, tuple[list, list[int]]] = {}
        self._hom: dict[tuple[int, int, bool], list] = {}
        self._inv_cache: dict = {}

    @classmethod
    def of(cls, algebra: AssocAlgebra, seed: int = 0) -> "Frame":
        fr = getattr(algebra, "_frame", None)
        if fr is not None:
            return fr
        if getattr(algebra, "presentation", None) is not None and getattr(algebra, "vertex_idempotents", None):
            idem = [algebra.basis_vector(i) for i in algebra.vertex_idempotents]
            fr = cls(algebra, idem, list(algebra.presentation.quiver.vertices))
        else:
            lifted, _, classes = _primitive_decomposition(algebra, seed, require_split=False)
            fr = cls(algebra, [lifted[c[0]] for c in classes])
            fr.multiplicities = [len(c) for c in classes]
        algebra._frame = fr
        return fr

    def __len__(self):
        return len(self.idem)

    def index(self, label: str) -> int:
        return self.labels.index(str(label))

    def proj(self, v: int) -> tuple[list, list[int]]:
        """RREF basis of ``A f_v`` and its pivot columns."""
        if v not in self._proj:
            a = self.algebra
            basis = span_basis([a.mul(a.basis_vector(k), self.idem[v]) for k in range(a.dim)], self.field, a.dim)
            piv = [next(i for i, c in enumerate(b) if c) for b in basis]
            self._proj[v] = (basis, piv)
        return self._proj[v]

    def proj_dim(self, v: int) -> int:
        return len(self.proj(v)[0])

    def coords(self, v: int, x) -> list:
        return [x[p] for p in self.proj(v)[1]]

    def element(self, v: int, coords) -> list:
        return self.algebra.combo(coords, self.proj(v)[0])

    def hom(self, v: int, w: int, radical: bool = False) -> list:
        """Basis of ``f_v A f_w`` (or ``f_v rad f_w``): the entries of maps ``P_v -> P_w``."""
        key = (v, w, radical)
        if key not in self._hom:
            a = self.algebra
            src = a.get_radical() if radical else [a.basis_vector(k) for k in range(a.dim)]
            self._hom[key] = span_basis([a.mul(a.mul(self.idem[v], x), self.idem[w]) for x in src],
                                        self.field, a.dim)
        return self._hom[key]

    def in_hom(self, v: int, w: int, x) -> bool:
        a = self.algebra
        return a.mul(a.mul(self.idem[v], x), self.idem[w]) == list(x)

    def right_mult(self, v: int, w: int, x) -> Matrix:
        """k-matrix of ``P_v -> P_w, z -> z x`` in the RREF bases."""
        a = self.algebra
        basis, _ = self.proj(v)
        cols = [self.coords(w, a.mul(b, x)) for b in basis]
        nr = self.proj_dim(w)
        return Matrix(self.field, [[cols[j][i] for j in range(len(cols))] for i in range(nr)], len(cols))

    def inverse(self, v: int, x) -> list:
        """Inverse of a unit ``x`` of the local ring ``f_v A f_v``."""
        a = self.algebra
        basis = self.hom(v, v)
        prods = [a.mul(x, y) for y in basis]
        eqs = [{j: p[k] for j, p in enumerate(prods) if p[k]} for k in range(a.dim)]
        res = solve_sparse(eqs, self.idem[v], len(basis), self.field, want_kernel=False)
        if res is None:
            raise ComplexError("entry is not invertible in its corner")
        y = a.combo(res[0], basis)
        if a.mul(y, x) != self.idem[v]:
            raise ComplexError("one-sided inverse only; corner is not local")
        return y

    def max_proj_dim(self) -> int:
        return max((self.proj_dim(v) for v in range(len(self))), default=0)


def _compose(frame: Frame, first: list, second: list, n_src: int) -> list:
    """Entry matrix of ``second o first``."""
    a = frame.algebra
    n_mid = len(first)
    n_tgt = len(second)
    out = []
    for u in range(n_tgt):
        row = []
        for s in range(n_src):
            acc = a.zero()
            for t in range(n_mid):
                x, y = first[t][s], second[u][t]
                if any(x) and any(y):
                    acc = a.add(acc, a.mul(x, y))
            row.append(acc)
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# complexes of projectives

class ProjComplex:
    """Bounded complex of projectives ``P^i = (+)_s P_{terms[i][s]}``."""

    def __init__(self, frame: Frame, terms: dict, diffs: dict | None = None, check: bool = True):
        self.frame = frame
        self.algebra = frame.algebra
        self.terms = {int(i): list(t) for i, t in terms.items() if t}
        self.diffs = {}
        diffs = diffs or {}
        for i, m in diffs.items():
            i = int(i)
            if self.terms.get(i) and self.terms.get(i + 1):
                self.diffs[i] = [[list(x) for x in row] for row in m]
        if check:
            self.check()

    # -- bookkeeping -------------------------------------------------------
    @property
    def degrees(self) -> list[int]:
        return sorted(self.terms)

    @property
    def lo(self):
        return min(self.terms) if self.terms else None

    @property
    def hi(self):
        return max(self.terms) if self.terms else None

    def term(self, i: int) -> list:
        return self.terms.get(i, [])

    def diff(self, i: int) -> list:
        src, tgt = self.term(i), self.term(i + 1)
        if i in self.diffs:
            return self.diffs[i]
        return [[self.algebra.zero() for _ in src] for _ in tgt]

    def is_zero(self) -> bool:
        return not self.terms

    def copy(self) -> "ProjComplex":
        return ProjComplex(self.frame, self.terms, self.diffs, check=False)

    def check(self):
        fr = self.frame
        for i in self.degrees:
            m = self.diff(i)
            src, tgt = self.term(i), self.term(i + 1)
            if len(m) != len(tgt) or any(len(r) != len(src) for r in m):
                raise ComplexError(f"differential {i} has the wrong shape")
            for t, w in enumerate(tgt):
                for s, v in enumerate(src):
                    if not fr.in_hom(v, w, m[t][s]):
                        raise ComplexError(f"entry ({t},{s}) of d^{i} is not in f_{fr.labels[v]} A f_{fr.labels[w]}")
        if not self.d_squared_zero():
            raise ComplexError("d^2 is not zero")
        return True

    def d_squared_zero(self) -> bool:
        for i in self.degrees:
            if not self.term(i + 2):
                continue
            comp = _compose(self.frame, self.diff(i), self.diff(i + 1), len(self.term(i)))
            if any(any(x) for row in comp for x in row):
                return False
        return True

    # -- linear data -------------------------------------------------------
    def term_dim(self, i: int) -> int:
        return sum(self.frame.proj_dim(v) for v in self.term(i))

    def klinear(self, i: int) -> Matrix:
        """k-matrix of ``d^i`` (rows: basis of ``P^{i+1}``, columns: basis of ``P^i``)."""
        fr = self.frame
        src, tgt = self.term(i), self.term(i + 1)
        m = self.diff(i)
        rows = []
        for t, w in enumerate(tgt):
            blocks = [fr.right_mult(v, w, m[t][s]) for s, v in enumerate(src)]
            for r in range(fr.proj_dim(w)):
                rows.append([x for b in blocks for x in b.rows[r]])
        return Matrix(fr.field, rows, self.term_dim(i))

    def component_dims(self) -> dict:
        return {i: self.term_dim(i) for i in self.degrees}

    def cohomology_dims(self) -> dict:
        ranks = {i: self.klinear(i).rank() if self.term(i + 1) else 0 for i in self.degrees}
        out = {}
        for i in self.degrees:
            h = self.term_dim(i) - ranks[i] - ranks.get(i - 1, 0)
            if h:
                out[i] = h
        return out

    def is_minimal(self) -> bool:
        a = self.algebra
        return all(a.in_radical(x) for m in self.diffs.values() for row in m for x in row)

    # -- transformations ---------------------------------------------------
    def minimize(self, check: bool = True) -> "ProjComplex":
        """Cancel contractible summands until every entry lies in the radical."""
        c = self.copy()
        a = self.algebra
        while True:
            hit = None
            for i in sorted(c.diffs):
                m = c.diffs[i]
                for t, row in enumerate(m):
                    for s, x in enumerate(row):
                        if any(x) and not a.in_radical(x):
                            hit = (i, t, s)
                            break
                    if hit:
                        break
                if hit:
                    break
            if hit is None:
                return c
            c = c._eliminate(*hit)
            if check and not c.d_squared_zero():
                raise ComplexError("d^2 != 0 after an elimination step")

    def _eliminate(self, i: int, t: int, s: int) -> "ProjComplex":
        fr = self.frame
        a = self.algebra
        src, tgt = self.term(i), self.term(i + 1)
        v = src[s]
        if tgt[t] != v:
            raise ComplexError("unit entry between non-isomorphic projectives; frame is not basic")
        m = self.diff(i)
        y = fr.inverse(v, m[t][s])
        new = []
        for t2 in range(len(tgt)):
            if t2 == t:
                continue
            row = []
            beta = m[t2][s]
            for s2 in range(len(src)):
                if s2 == s:
                    continue
                x = m[t2][s2]
                gamma = m[t][s2]
                if any(beta) and any(gamma):
                    x = a.sub(x, a.mul(a.mul(gamma, y), beta))
                row.append(x)
            new.append(row)
        terms = dict(self.terms)
        terms[i] = [x for k, x in enumerate(src) if k != s]
        terms[i + 1] = [x for k, x in enumerate(tgt) if k != t]
        diffs = dict(self.diffs)
        diffs[i] = new
        if i - 1 in diffs:
            diffs[i - 1] = [row for k, row in enumerate(diffs[i - 1]) if k != s]
        if i + 1 in diffs:
            diffs[i + 1] = [[x for k, x in enumerate(row) if k != t] for row in diffs[i + 1]]
        return ProjComplex(fr, terms, diffs, check=False)

    def brutal_truncate(self, t: int) -> "ProjComplex":
        terms = {i: x for i, x in self.terms.items() if i >= t}
        diffs = {i: m for i, m in self.diffs.items() if i >= t}
        return ProjComplex(self.frame, terms, diffs, check=False)

    def shift(self, k: int) -> "ProjComplex":
        """``X[k]``: degree i moves to i - k; differentials change sign for odd k."""
        a = self.algebra
        sign = -1 if k % 2 else 1
        terms = {i - k: x for i, x in self.terms.items()}
        diffs = {i - k: [[a.scale(a.field(sign), x) for x in row] for row in m] for i, m in self.diffs.items()}
        return ProjComplex(self.frame, terms, diffs, check=False)

    def direct_sum(self, other: "ProjComplex") -> "ProjComplex":
        a = self.algebra
        degs = set(self.terms) | set(other.terms)
        terms = {i: self.term(i) + other.term(i) for i in degs}
        diffs = {}
        for i in degs:
            m1, m2 = self.diff(i), other.diff(i)
            n1, n2 = len(self.term(i)), len(other.term(i))
            rows = [list(r) + [a.zero()] * n2 for r in m1] + [[a.zero()] * n1 + list(r) for r in m2]
            diffs[i] = rows
        return ProjComplex(self.frame, terms, diffs, check=False)

    def to_module_complex(self) -> "ModuleComplex":
        mods = {i: projective_module(self.frame, self.term(i)) for i in self.degrees}
        return ModuleComplex(self.algebra, mods, {i: self.klinear(i) for i in self.degrees if self.term(i + 1)})

    # -- serialisation -----------------------------------------------------
    def to_json(self) -> dict:
        fr = self.frame
        a = self.algebra
        f = a.field

        def entry(x):
            return {a.labels[k]: f.to_json(c) for k, c in enumerate(x) if c}

        return {
            "degrees": [self.lo, self.hi] if self.terms else [],
            "terms": {str(i): [fr.labels[v] for v in self.terms[i]] for i in self.degrees},
            "differentials": {str(i): [[entry(x) for x in row] for row in m] for i, m in sorted(self.diffs.items())},
        }

    @classmethod
    def from_json(cls, data, frame: Frame) -> "ProjComplex":
        """Entries are path-coefficient maps; paths are written ``b*a`` or ``e_v``."""
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        a = frame.algebra
        pres = getattr(a, "presentation", None)
        terms = {int(i): [frame.index(v) for v in vs] for i, vs in data.get("terms", {}).items()}
        diffs = {}
        for i, m in data.get("differentials", {}).items():
            diffs[int(i)] = [[_parse_entry(a, pres, e) for e in row] for row in m]
        return cls(frame, terms, diffs)

    def __repr__(self):
        return f"ProjComplex({ {i: [self.frame.labels[v] for v in t] for i, t in sorted(self.terms.items())} })"


def _parse_entry(a: AssocAlgebra, pres, entry: dict) -> list:
    from .quiver import path_vector

    f = a.field
    if pres is None:
        out = a.zero()
        for lab, c in entry.items():
            out[a.labels.index(lab)] = out[a.labels.index(lab)] + f(str(c))
        return out
    vec = {}
    q = pres.quiver
    for lab, c in entry.items():
        lab = lab.strip()
        if lab.startswith("e_"):
            p = q.trivial(lab[2:])
        else:
            p = q.path([x.strip() for x in lab.split("*")])
        vec[p] = vec.get(p, f.zero) + f(str(c))
    return path_vector(pres, vec)


# ---------------------------------------------------------------------------
# modules

def projective_module(frame: Frame, vertices: Sequence[int]) -> Module:
    """``(+) A f_v`` as a left module in the concatenated RREF bases."""
    a = frame.algebra
    f = frame.field
    dims = [frame.proj_dim(v) for v in vertices]
    total = sum(dims)
    mats = []
    for k in range(a.dim):
        bk = a.basis_vector(k)
        m = Matrix.zeros(f, total, total)
        off = 0
        for v, d in zip(vertices, dims):
            basis, _ = frame.proj(v)
            for j, y in enumerate(basis):
                col = frame.coords(v, a.mul(bk, y))
                for r, c in enumerate(col):
                    if c:
                        m.rows[off + r][off + j] = c
            off += d
        mats.append(m)
    mod = Module(a, total, mats, "left")
    mod.summands = list(vertices)
    return mod


def _split_coords(frame: Frame, vertices, vec) -> list:
    """Components (as algebra elements) of a coordinate vector of ``(+) P_v``."""
    out = []
    off = 0
    for v in vertices:
        d = frame.proj_dim(v)
        out.append(frame.element(v, vec[off:off + d]))
        off += d
    return out


def quotient_module(m: Module, sub: Sequence) -> tuple[Module, callable]:
    """``m / span(sub)`` (``sub`` must be a submodule) and the projection on coordinates."""
    f = m.algebra.field
    ech = SparseEchelon([_sparse(v) for v in sub])
    comp = [j for j in range(m.dim) if j not in ech.rows]
    pos = {j: k for k, j in enumerate(comp)}

    def project(v):
        out = [f.zero] * len(comp)
        for j, c in ech.reduce(_sparse(v)).items():
            out[pos[j]] = c
        return out

    mats = []
    for mat in m.action:
        cols = [project([mat.rows[r][j] for r in range(m.dim)]) for j in comp]
        mats.append(Matrix(f, [[cols[j][i] for j in range(len(comp))] for i in range(len(comp))], len(comp)))
    q = Module(m.algebra, len(comp), mats, m.side)
    q.section = comp
    return q, project


def submodule(m: Module, vectors: Sequence) -> tuple[Module, list]:
    """Submodule spanned by ``vectors`` (assumed closed) with its RREF basis in ``m``."""
    f = m.algebra.field
    basis = span_basis(vectors, f, m.dim)
    piv = [next(i for i, c in enumerate(b) if c) for b in basis]
    mats = []
    for mat in m.action:
        cols = [[mat.apply(b)[p] for p in piv] for b in basis]
        mats.append(Matrix(f, [[cols[j][i] for j in range(len(basis))] for i in range(len(basis))], len(basis)))
    return Module(m.algebra, len(basis), mats, m.side), basis


def simple_module(frame: Frame, v: int) -> Module:
    p = projective_module(frame, [v])
    rad = _radical_span(p)
    return quotient_module(p, rad)[0]


def _radical_span(m: Module) -> list:
    a = m.algebra
    out = []
    for r in a.get_radical():
        mat = m.matrix_of(r)
        for j in range(m.dim):
            out.append([row[j] for row in mat.rows])
    return out


def module_from_representation(alg: AssocAlgebra, dims: dict, arrow_maps: dict) -> Module:
    """Left module of a path-basis algebra from a quiver representation.

    ``dims[v]`` is the dimension at vertex v and ``arrow_maps[label]`` the matrix
    ``V_source -> V_target`` (rows indexed by the target).  Relations must hold.
    """
    pres = alg.presentation
    f = alg.field
    q = pres.quiver
    offs = {}
    total = 0
    for v in q.vertices:
        offs[v] = total
        total += dims.get(v, 0)

    def path_matrix(p):
        d_s, d_t = dims.get(p.source, 0), dims.get(p.target, 0)
        cur = Matrix.identity(f, d_s)
        for lab in p.arrows:
            arr = q.arrow(lab)
            mat = arrow_maps.get(lab)
            if mat is None:
                mat = Matrix.zeros(f, dims.get(arr.target, 0), dims.get(arr.source, 0))
            elif not isinstance(mat, Matrix):
                mat = Matrix(f, [[f(c) for c in r] for r in mat], dims.get(arr.source, 0))
            cur = mat @ cur
        full = Matrix.zeros(f, total, total)
        for r in range(d_t):
            for c in range(d_s):
                full.rows[offs[p.target] + r][offs[p.source] + c] = cur.rows[r][c] if cur.rows else f.zero
        return full

    mats = [path_matrix(p) for p in alg.paths]
    for r in pres.relations:
        acc = Matrix.zeros(f, total, total)
        for p, c in r.terms:
            pm = path_matrix(p)
            acc = Matrix(f, [[x + c * y for x, y in zip(ra, rb)] for ra, rb in zip(acc.rows, pm.rows)], total)
        if not acc.is_zero():
            raise ComplexError(f"representation violates relation {r}")
    mod = Module(alg, total, mats, "left")
    mod.dimension_vector = {v: dims.get(v, 0) for v in q.vertices}
    return mod


# ---------------------------------------------------------------------------
# complexes of modules and good truncation

@dataclass
class ModuleComplex:
    algebra: AssocAlgebra
    terms: dict            # degree -> Module
    diffs: dict            # degree -> Matrix (k-linear, A-linear)

    def dim(self, i: int) -> int:
        return self.terms[i].dim if i in self.terms else 0

    def diff(self, i: int) -> Matrix:
        if i in self.diffs:
            return self.diffs[i]
        return Matrix.zeros(self.algebra.field, self.dim(i + 1), self.dim(i))

    def check(self):
        for i in self.terms:
            if i + 2 in self.terms and i in self.diffs and i + 1 in self.diffs:
                if not (self.diffs[i + 1] @ self.diffs[i]).is_zero():
                    raise ComplexError("d^2 is not zero")
        for i, d in self.diffs.items():
            src, tgt = self.terms.get(i), self.terms.get(i + 1)
            if src is None or tgt is None:
                continue
            for k in range(self.algebra.dim):
                if tgt.action[k] @ d != d @ src.action[k]:
                    raise ComplexError(f"d^{i} is not A-linear")
        return True

    def cohomology_dims(self) -> dict:
        ranks = {i: self.diff(i).rank() if self.dim(i) and self.dim(i + 1) else 0 for i in self.terms}
        out = {}
        for i in sorted(self.terms):
            h = self.dim(i) - ranks[i] - ranks.get(i - 1, 0)
            if h:
                out[i] = h
        return out


def good_truncate(mc: ModuleComplex, t: int) -> ModuleComplex:
    """``0 -> X^t / Im d^{t-1} -> X^{t+1} -> ...``: cohomology in degrees >= t is kept."""
    terms = {i: m for i, m in mc.terms.items() if i > t}
    diffs = {i: d for i, d in mc.diffs.items() if i > t}
    if t in mc.terms:
        xt = mc.terms[t]
        d_in = mc.diff(t - 1)
        image = [[row[j] for row in d_in.rows] for j in range(d_in.ncols)] if mc.dim(t - 1) else []
        q, _ = quotient_module(xt, image)
        terms[t] = q
        if t + 1 in mc.terms:
            d = mc.diff(t)
            diffs[t] = Matrix(mc.algebra.field, [[row[j] for j in q.section] for row in d.rows], q.dim)
    out = ModuleComplex(mc.algebra, terms, diffs)
    out.check()
    return out


# ---------------------------------------------------------------------------
# resolutions and the dimension bound

def _top_generators(frame: Frame, m: Module) -> list[tuple[int, list]]:
    """Pairs (v, g) with g in f_v m whose images form a basis of m / rad m."""
    ech = SparseEchelon([_sparse(v) for v in _radical_span(m)])
    gens = []
    for v, e in enumerate(frame.idem):
        fm = m.matrix_of(e)
        for j in range(m.dim):
            col = [row[j] for row in fm.rows]
            if ech.add(_sparse(col)):
                gens.append((v, col))
    return gens


def minimal_proj_resolution(m: Module, depth: int, frame: Frame | None = None) -> ProjComplex:
    """Minimal projective resolution truncated to degrees ``[-depth, 0]``."""
    a = m.algebra
    frame = frame or Frame.of(a)
    f = a.field
    terms, diffs = {}, {}
    gens = _top_generators(frame, m)
    verts = [v for v, _ in gens]
    terms[0] = verts
    # cover map P^0 -> m
    cols = []
    for v, g in gens:
        for y in frame.proj(v)[0]:
            cols.append(m.act(y, g))
    prev_verts = verts
    cover = Matrix(f, [[cols[j][i] for j in range(len(cols))] for i in range(m.dim)], len(cols))
    kernel = kernel_basis(cover) if cols else []
    for k in range(1, depth + 1):
        if not kernel:
            break
        pmod = projective_module(frame, prev_verts)
        kmod, kb = submodule(pmod, kernel)
        kgens = _top_generators(frame, kmod)
        new_verts = [v for v, _ in kgens]
        entries = [[None] * len(new_verts) for _ in prev_verts]
        images = []
        for s, (u, g) in enumerate(kgens):
            gp = kmod_to_parent(g, kb, f)
            comps = _split_coords(frame, prev_verts, gp)
            for t in range(len(prev_verts)):
                entries[t][s] = comps[t]
            for y in frame.proj(u)[0]:
                images.append(pmod.act(y, gp))
        terms[-k] = new_verts
        diffs[-k] = entries
        mapm = Matrix(f, [[images[j][i] for j in range(len(images))] for i in range(pmod.dim)], len(images))
        kernel = kernel_basis(mapm)
        prev_verts = new_verts
    return ProjComplex(frame, terms, diffs)


def kmod_to_parent(g, basis, field) -> list:
    out = [field.zero] * len(basis[0])
    for c, b in zip(g, basis):
        if c:
            out = [o + c * x for o, x in zip(out, b)]
    return out


def lemma_bound(frame: Frame, n: dict, t: int) -> dict:
    """Upper bounds ``m_i`` on ``dim P^i`` for minimal complexes with cohomology vector ``n``.

    ``m_i = (n_i + m_{i+1}) * M`` downward from the top of the support, where
    ``M`` is the largest dimension of an indecomposable projective.
    """
    n = {int(i): int(x) for i, x in n.items() if x}
    if not n:
        return {i: 0 for i in range(t, 1)} if t <= 0 else {}
    r = max(n)
    if t > r:
        raise ComplexError("t must not exceed the top of the support")
    big = frame.max_proj_dim()
    out = {}
    nxt = 0
    for i in range(r, t - 1, -1):
        nxt = (n.get(i, 0) + nxt) * big
        out[i] = nxt
    return dict(sorted(out.items()))


# ---------------------------------------------------------------------------
# extension of scalars

def projective_dictionary(phi, frame_a: Frame, frame_b: Frame, seed: int = 0) -> dict:
    """For each ``v``: the decomposition ``B phi(f_v) = (+)_j B f'_{u_j}`` as triples
    ``(u_j, x_j, y_j)`` with ``x_j y_j = eps_j``, ``y_j x_j = f'_{u_j}`` and
    ``sum eps_j = phi(f_v)``."""
    b = phi.target
    out = {}
    for v, e in enumerate(frame_a.idem):
        pe = phi.apply(e)
        try:
            pieces, _, _ = _primitive_decomposition(b, seed, require_split=False, start=pe)
        except AlgebraError as err:
            raise DictionaryUnavailable(str(err)) from err
        entry = []
        for eps in pieces:
            match = None
            for u, fu in enumerate(frame_b.idem):
                cert = _iso_certificate(b, eps, fu)
                if cert is not None:
                    match = (u, *cert)
                    break
            if match is None:
                raise DictionaryUnavailable("summand of B phi(f_v) matches no frame idempotent of B")
            entry.append(match)
        out[v] = entry
    return out


def _iso_certificate(b: AssocAlgebra, eps, fu):
    """(x, y) with x in eps B fu, y in fu B eps, xy = eps, yx = fu; None if not isomorphic."""
    f = b.field
    xs = span_basis([b.mul(b.mul(eps, b.basis_vector(k)), fu) for k in range(b.dim)], f, b.dim)
    ys = span_basis([b.mul(b.mul(fu, b.basis_vector(k)), eps) for k in range(b.dim)], f, b.dim)
    corner = span_basis([b.mul(b.mul(eps, b.basis_vector(k)), eps) for k in range(b.dim)], f, b.dim)
    for x in xs:
        for y in ys:
            w = b.mul(x, y)
            if b.in_radical(w):
                continue
            prods = [b.mul(w, z) for z in corner]
            eqs = [{j: p[k] for j, p in enumerate(prods) if p[k]} for k in range(b.dim)]
            res = solve_sparse(eqs, eps, len(corner), f, want_kernel=False)
            if res is None:
                continue
            winv = b.combo(res[0], corner)
            y2 = b.mul(y, winv)
            if b.mul(x, y2) == list(eps) and b.mul(y2, x) == list(fu):
                return x, y2
    return None


def extend_scalars_complex(c: ProjComplex, phi, frame_b: Frame | None = None, seed: int = 0,
                           dictionary: dict | None = None) -> ProjComplex:
    """``B (x)_A c`` with summands rewritten in the frame of B."""
    src = phi.source
    if src is not c.algebra and (src.dim != c.algebra.dim or src.field != c.algebra.field or src.table != c.algebra.table):
        raise ComplexError("complex is not over the source of the extension")
    b = phi.target
    try:
        frame_b = frame_b or Frame.of(b, seed)
    except AlgebraError as err:
        raise DictionaryUnavailable(str(err)) from err
    dic = dictionary or projective_dictionary(phi, c.frame, frame_b, seed)
    terms, slots = {}, {}
    for i in c.degrees:
        terms[i] = []
        slots[i] = []
        for s, v in enumerate(c.term(i)):
            for j, (u, x, y) in enumerate(dic[v]):
                terms[i].append(u)
                slots[i].append((s, j))
    diffs = {}
    for i, m in c.diffs.items():
        rows = []
        for t, l in slots[i + 1]:
            w = c.term(i + 1)[t]
            xl = dic[w][l][1]
            row = []
            for s, j in slots[i]:
                v = c.term(i)[s]
                yj = dic[v][j][2]
                row.append(b.mul(b.mul(yj, phi.apply(m[t][s])), xl))
            rows.append(row)
        diffs[i] = rows
    return ProjComplex(frame_b, terms, diffs)


# ---------------------------------------------------------------------------
# chain maps and isomorphism tests

def _enumerate_space(basis: Sequence, field: Field, budget: int):
    """All F_p-combinations of ``basis`` (zero first), lexicographic in the coefficients."""
    p = field.characteristic
    if p == 0:
        raise InfiniteFieldUnsupported("exhaustive enumeration needs a finite field")
    if p ** len(basis) > budget:
        raise BudgetExceeded(f"{p}^{len(basis)} candidates exceed the budget {budget}")
    elems = field.elements()
    for combo in itertools.product(elems, repeat=len(basis)):
        yield combo


def _chain_map_space(c1: ProjComplex, c2: ProjComplex) -> tuple[list, list]:
    """Basis of chain maps ``c1 -> c2`` (same term data), as lists of per-degree entry matrices."""
    fr = c1.frame
    a = fr.algebra
    f = fr.field
    degs = sorted(set(c1.degrees) | set(c2.degrees))
    slots = []          # (degree, t, s, basis element)
    for i in degs:
        for t, w in enumerate(c2.term(i)):
            for s, v in enumerate(c1.term(i)):
                for x in fr.hom(v, w):
                    slots.append((i, t, s, x))
    nv = len(slots)
    eqs = []
    for i in degs:
        src, tgt = c1.term(i), c2.term(i + 1)
        if not src or not tgt:
            continue
        d1, d2 = c1.diff(i), c2.diff(i)
        # (f^{i+1} o d1)[u][s] - (d2 o f^i)[u][s] = 0
        acc: dict = {}
        for k, (j, t, s, x) in enumerate(slots):
            if j == i + 1:
                # f^{i+1} entry (u=t, from c1 summand s at degree i+1) composed after d1[s][s0]
                for s0 in range(len(src)):
                    y = d1[s][s0]
                    if any(y):
                        prod = a.mul(y, x)
                        for coord, cval in enumerate(prod):
                            if cval:
                                key = (t, s0, coord)
                                acc.setdefault(key, {})
                                acc[key][k] = acc[key].get(k, f.zero) + cval
            elif j == i:
                for u in range(len(tgt)):
                    y = d2[u][t]
                    if any(y):
                        prod = a.mul(x, y)
                        for coord, cval in enumerate(prod):
                            if cval:
                                key = (u, s, coord)
                                acc.setdefault(key, {})
                                acc[key][k] = acc[key].get(k, f.zero) - cval
        for eq in acc.values():
            eq = {k: v for k, v in eq.items() if v}
            if eq:
                eqs.append(eq)
    res = solve_sparse(eqs, [f.zero] * len(eqs), nv, f)
    return slots, res[1]


def _assemble(c1: ProjComplex, c2: ProjComplex, slots, coeffs) -> dict:
    a = c1.algebra
    out = {}
    for i in sorted(set(c1.degrees) | set(c2.degrees)):
        out[i] = [[a.zero() for _ in c1.term(i)] for _ in c2.term(i)]
    for (i, t, s, x), c in zip(slots, coeffs):
        if c:
            out[i][t][s] = a.add(out[i][t][s], a.scale(c, x))
    return out


def _degreewise_invertible(c1: ProjComplex, c2: ProjComplex, fmap: dict) -> bool:
    fr = c1.frame
    for i, m in fmap.items():
        if c1.term_dim(i) != c2.term_dim(i):
            return False
        if not m:
            continue
        src, tgt = c1.term(i), c2.term(i)
        rows = []
        for t, w in enumerate(tgt):
            blocks = [fr.right_mult(v, w, m[t][s]) for s, v in enumerate(src)]
            for r in range(fr.proj_dim(w)):
                rows.append([x for b in blocks for x in b.rows[r]])
        if Matrix(fr.field, rows, c1.term_dim(i)).rank() != c1.term_dim(i):
            return False
    return True


def complexes_isomorphic(c1: ProjComplex, c2: ProjComplex, seed: int = 0, budget: int = DEFAULT_BUDGET,
                         tries: int = 64) -> tuple[bool | None, dict | None]:
    """Isomorphism of complexes via an invertible chain map.

    Over F_p the chain-map space is searched exhaustively (exact answer).  Over
    an infinite field random elements are tried: ``(None, None)`` means "not
    shown isomorphic", never a proof of non-isomorphism.
    """
    if complex_invariant(c1) != complex_invariant(c2):
        return False, None
    slots, basis = _chain_map_space(c1, c2)
    if len(basis) != complex_invariant(c1)[-1]:
        return False, None
    f = c1.frame.field
    rng = random.Random(seed)

    def attempt(combo):
        fmap = _assemble(c1, c2, slots, _combine(combo, basis, f, len(slots)))
        return fmap if _degreewise_invertible(c1, c2, fmap) else None

    for _ in range(tries):
        fmap = attempt([f.random(rng, 5) for _ in basis])
        if fmap is not None:
            return True, fmap
    if not f.characteristic:
        return None, None
    for combo in _enumerate_space(basis, f, budget):
        fmap = attempt(combo)
        if fmap is not None:
            return True, fmap
    return False, None


def complex_invariant(c: ProjComplex) -> tuple:
    """Cheap isomorphism invariant: terms, cohomology, ranks and ``dim End`` (cached)."""
    inv = getattr(c, "_invariant", None)
    if inv is None:
        terms = tuple((i, tuple(sorted(c.term(i)))) for i in c.degrees)
        ranks = tuple((i, c.klinear(i).rank()) for i in c.degrees if c.term(i + 1))
        coh = tuple(sorted(c.cohomology_dims().items()))
        inv = (terms, coh, ranks, len(_chain_map_space(c, c)[1]))
        c._invariant = inv
    return inv


def _combine(combo, basis, f, n) -> list:
    out = [f.zero] * n
    for c, v in zip(combo, basis):
        if c:
            out = [o + c * x for o, x in zip(out, v)]
    return out


def module_hom_space(x: Module, y: Module) -> list[Matrix]:
    """Basis of Hom_A(x, y) as dim y x dim x matrices."""
    a = x.algebra
    f = a.field
    n, m = x.dim, y.dim

    def var(r, c):
        return r * n + c

    eqs = []
    for g in a.generators:
        ax, ay = x.action[g], y.action[g]
        for r in range(m):
            for c in range(n):
                eq = {}
                for k in range(m):
                    if ay.rows[r][k]:
                        eq[var(k, c)] = eq.get(var(k, c), f.zero) + ay.rows[r][k]
                for k in range(n):
                    if ax.rows[k][c]:
                        eq[var(r, k)] = eq.get(var(r, k), f.zero) - ax.rows[k][c]
                eq = {k: v for k, v in eq.items() if v}
                if eq:
                    eqs.append(eq)
    res = solve_sparse(eqs, [f.zero] * len(eqs), n * m, f)
    return [Matrix(f, [[v[var(r, c)] for c in range(n)] for r in range(m)], n) for v in res[1]]


def modules_isomorphic(x: Module, y: Module, seed: int = 0, budget: int = DEFAULT_BUDGET,
                       tries: int = 64) -> tuple[bool | None, Matrix | None]:
    if x.dim != y.dim:
        return False, None
    f = x.algebra.field
    if x.dim == 0:
        return True, Matrix.zeros(f, 0, 0)
    basis = module_hom_space(x, y)
    # Hom(x, y), End(x) and End(y) have equal dimensions when x and y are isomorphic
    if not basis or len(basis) != len(module_hom_space(x, x)) or len(basis) != len(module_hom_space(y, y)):
        return False, None

    def build(combo):
        rows = [[f.zero] * x.dim for _ in range(y.dim)]
        for c, b in zip(combo, basis):
            if c:
                rows = [[p + c * q for p, q in zip(r1, r2)] for r1, r2 in zip(rows, b.rows)]
        return Matrix(f, rows, x.dim)

    if f.characteristic:
        for combo in _enumerate_space(basis, f, budget):
            m = build(combo)
            if m.rank() == x.dim:
                return True, m
        return False, None
    rng = random.Random(seed)
    for _ in range(tries):
        m = build([f(rng.randint(-5, 5)) for _ in basis])
        if m.rank() == x.dim:
            return True, m
    return None, None


def _truncated_resolution(m: Module, depth: int, t: int, frame: Frame) -> ProjComplex:
    cache = m.__dict__.setdefault("_truncations", {})
    key = (depth, t, id(frame))
    if key not in cache:
        cache[key] = minimal_proj_resolution(m, depth, frame).brutal_truncate(t)
    return cache[key]


@dataclass
class RoundtripResult:
    truncations_equivalent: bool | None
    modules_isomorphic: bool | None
    t: int
    depth: int
    exact: bool

    @property
    def consistent(self) -> bool:
        return not (self.truncations_equivalent is True and self.modules_isomorphic is False)

    def to_json(self) -> dict:
        return {"truncationsEquivalent": self.truncations_equivalent, "modulesIsomorphic": self.modules_isomorphic,
                "t": self.t, "depth": self.depth, "exact": self.exact, "consistent": self.consistent}


def lemma_iso_roundtrip(x: Module, y: Module, t: int, frame: Frame | None = None, seed: int = 0,
                        budget: int = DEFAULT_BUDGET) -> RoundtripResult:
    """Compare ``(pX)_{>=t}`` and ``(pY)_{>=t}`` with an independent module isomorphism test.

    Minimal complexes are homotopy equivalent exactly when they are isomorphic,
    so equivalence of the truncated minimal resolutions is tested as an
    isomorphism of complexes.
    """
    if t >= 0:
        raise DepthInsufficient("modules sit in degree 0; the truncation degree must be negative")
    frame = frame or Frame.of(x.algebra)
    depth = abs(t) + 2
    px = _truncated_resolution(x, depth, t, frame)
    py = _truncated_resolution(y, depth, t, frame)
    eq, _ = complexes_isomorphic(px, py, seed, budget)
    iso, _ = modules_isomorphic(x, y, seed, budget)
    return RoundtripResult(eq, iso, t, depth, bool(x.algebra.field.characteristic))


# ---------------------------------------------------------------------------
# finiteness sampling over F_p

def _vertex_multisets(frame: Frame, total: int) -> list[list[int]]:
    dims = [frame.proj_dim(v) for v in range(len(frame))]
    out = []

    def rec(start, left, acc):
        if left == 0:
            out.append(list(acc))
            return
        for v in range(start, len(dims)):
            if dims[v] <= left:
                acc.append(v)
                rec(v, left - dims[v], acc)
                acc.pop()

    rec(0, total, [])
    return out


@dataclass
class SamplerResult:
    class_count: int
    representatives: list
    complexes_enumerated: int
    candidates: int
    caveat: str = FINITE_FIELD_CAVEAT

    def to_json(self) -> dict:
        return {"isoClassCount": self.class_count, "complexesEnumerated": self.complexes_enumerated,
                "candidatesExamined": self.candidates,
                "representatives": [r.to_json() for r in self.representatives], "caveat": self.caveat}


def finiteness_sampler(frame: Frame, cdim: dict, radical_only: bool = False,
                       budget: int = DEFAULT_BUDGET) -> SamplerResult:
    """Isomorphism classes of complexes with component dimension vector ``cdim`` over F_p."""
    f = frame.field
    if not f.characteristic:
        raise InfiniteFieldUnsupported(f"sampler needs a finite field, got {f.descriptor}")
    p = f.characteristic
    cdim = {int(i): int(d) for i, d in cdim.items() if d}
    degs = sorted(cdim)
    choices = [_vertex_multisets(frame, cdim[i]) for i in degs]
    configs = list(itertools.product(*choices)) if degs else [()]
    plans = []
    total = 0
    for conf in configs:
        terms = dict(zip(degs, conf))
        slots = []
        for i in degs:
            if i + 1 not in terms:
                continue
            for t, w in enumerate(terms[i + 1]):
                for s, v in enumerate(terms[i]):
                    for x in frame.hom(v, w, radical_only):
                        slots.append((i, t, s, x))
        total += p ** len(slots)
        plans.append((terms, slots))
    if total > budget:
        raise BudgetExceeded(f"{total} candidate differentials exceed the budget {budget}")
    a = frame.algebra
    reps: list[ProjComplex] = []
    enumerated = 0
    for terms, slots in plans:
        for combo in itertools.product(f.elements(), repeat=len(slots)):
            diffs = {i: [[a.zero() for _ in terms[i]] for _ in terms[i + 1]] for i in degs if i + 1 in terms}
            for (i, t, s, x), c in zip(slots, combo):
                if c:
                    diffs[i][t][s] = a.add(diffs[i][t][s], a.scale(c, x))
            cx = ProjComplex(frame, terms, diffs, check=False)
            if not cx.d_squared_zero():
                continue
            enumerated += 1
            for r in reps:
                if complexes_isomorphic(r, cx, budget=budget)[0]:
                    break
            else:
                reps.append(cx)
    return SamplerResult(len(reps), reps, enumerated, total)


# ---------------------------------------------------------------------------
# random complexes

def random_complex(frame: Frame, rng: random.Random, max_len: int = 3, max_summands: int = 2,
                   lo: int = -1, bound: int = 2) -> ProjComplex:
    """Random bounded complex; each differential is drawn from the solutions of ``d^i d^{i-1} = 0``."""
    a = frame.algebra
    f = frame.field
    n = len(frame)
    length = rng.randint(1, max_len)
    terms = {lo + k: [rng.randrange(n) for _ in range(rng.randint(1, max_summands))] for k in range(length)}
    diffs = {}
    for i in range(lo, lo + length - 1):
        src, tgt = terms[i], terms[i + 1]
        slots = [(t, s, x) for t, w in enumerate(tgt) for s, v in enumerate(src) for x in frame.hom(v, w)]
        if i - 1 in diffs:
            prev = diffs[i - 1]
            n_prev = len(terms[i - 1])
            acc: dict = {}
            for k, (t, s, x) in enumerate(slots):
                for s0 in range(n_prev):
                    y = prev[s][s0]
                    if any(y):
                        for coord, c in enumerate(a.mul(y, x)):
                            if c:
                                acc.setdefault((t, s0, coord), {})
                                acc[(t, s0, coord)][k] = acc[(t, s0, coord)].get(k, f.zero) + c
            eqs = [{k: v for k, v in eq.items() if v} for eq in acc.values()]
            eqs = [e for e in eqs if e]
            basis = solve_sparse(eqs, [f.zero] * len(eqs), len(slots), f)[1] if slots else []
        else:
            basis = [[f.one if j == k else f.zero for j in range(len(slots))] for k in range(len(slots))]
        coeffs = _combine([f(rng.randint(-bound, bound)) for _ in basis], basis, f, len(slots))
        m = [[a.zero() for _ in src] for _ in tgt]
        for (t, s, x), c in zip(slots, coeffs):
            if c:
                m[t][s] = a.add(m[t][s], a.scale(c, x))
        diffs[i] = m
    return ProjComplex(frame, terms, diffs)
