"""Algebra extensions: base change, skew group algebras, quotients.

Split and separable are decided through their classical module-level forms:
an A-bimodule retraction of the map, and a separability idempotent in B (x)_A B.
Both are finite linear systems; every certificate found is re-verified on all
basis elements before it is returned.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .algebra import (AlgebraError, AssocAlgebra, Module, NonSplitSemisimpleQuotient, RadicalUnavailable,
                      _sparse, basic_reduction, block_algebras, gabriel_quiver, is_projective_left,
                      is_projective_right, lift_idempotents)
from .exactfield import (QQ, Field, Matrix, NotSquarefree, NumberField, SparseEchelon, field_from_spec,
                         solve_sparse)
from .gentleclass import ClassificationVerdict, classify_components
from .quiver import Path, Presentation, path_basis_algebra, path_vector

__all__ = [
    "ExtensionError", "InseparablePolynomial", "InvalidGroupAction", "ExtensionMorphism", "GroupAction",
    "SeparabilityCertificate", "WitnessReport", "identity_extension", "base_change", "skew_group_algebra",
    "quotient_extension", "split_witness", "separability_idempotent", "restriction_modules",
    "witness_report", "classify_algebra", "run_consistency_experiment", "load_group_action", "trivial_action",
]


class ExtensionError(ValueError):
    pass


class InseparablePolynomial(ExtensionError):
    pass


class InvalidGroupAction(ExtensionError):
    pass


@dataclass
class ExtensionMorphism:
    """Unital algebra map ``A -> B``; ``images[i]`` is the image of basis element ``i`` of A."""

    source: AssocAlgebra
    target: AssocAlgebra
    images: list
    kind: str = "manual"
    flags: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    @property
    def matrix(self) -> Matrix:
        a, b = self.source, self.target
        return Matrix(b.field, [[self.images[j][i] for j in range(a.dim)] for i in range(b.dim)], a.dim)

    def apply(self, x) -> list:
        return self.target.combo(x, self.images)

    def validate(self):
        a, b = self.source, self.target
        if a.field != b.field:
            raise ExtensionError("source and target must be algebras over the same field")
        if len(self.images) != a.dim or any(len(v) != b.dim for v in self.images):
            raise ExtensionError("map has the wrong shape")
        if self.apply(a.unit) != b.unit:
            raise ExtensionError("map is not unital")
        for i in range(a.dim):
            for j in range(a.dim):
                lhs = self.apply(a.mul(a.basis_vector(i), a.basis_vector(j)))
                if lhs != b.mul(self.images[i], self.images[j]):
                    raise ExtensionError(f"map is not multiplicative on ({a.labels[i]}, {a.labels[j]})")

    @property
    def is_surjective(self) -> bool:
        return SparseEchelon([_sparse(v) for v in self.images]).rank == self.target.dim


def identity_extension(a: AssocAlgebra) -> ExtensionMorphism:
    return ExtensionMorphism(a, a, [a.basis_vector(i) for i in range(a.dim)], kind="identity")


# ---------------------------------------------------------------------------
# base change

def base_change(a: AssocAlgebra, ext) -> ExtensionMorphism:
    """``A -> A (x)_Q K`` for ``K = Q[x]/(f)``, with ``A (x) K`` viewed over Q.

    Basis ``a_i (x) x^j`` sits at index ``i*d + j``.  When ``f`` is (heuristically)
    irreducible the target also carries ``kform``: the same algebra written over K,
    used to classify blocks that do not split over Q.
    """
    if isinstance(ext, str):
        try:
            ext = field_from_spec(ext)
        except NotSquarefree as e:
            raise InseparablePolynomial(str(e)) from e
    if not isinstance(ext, NumberField):
        raise ExtensionError("base change needs a number-field descriptor Q[x]/(f)")
    if a.field != QQ:
        raise ExtensionError("base change by Q[x]/(f) needs an algebra over Q")
    n, d = a.dim, ext.degree
    f = a.field
    # x^s mod f as coefficient vectors, s < 2d - 1
    powers = []
    for s in range(2 * d - 1):
        powers.append(list(ext([f.zero] * s + [f.one]).c))
    table = [[None] * (n * d) for _ in range(n * d)]
    for i in range(n):
        for k in range(n):
            prod = a.table[i][k]
            for j in range(d):
                for l in range(d):
                    entry = {}
                    xp = powers[j + l]
                    for m, c in prod.items():
                        for t, e in enumerate(xp):
                            if e:
                                key = m * d + t
                                val = entry.get(key, f.zero) + c * e
                                if val:
                                    entry[key] = val
                                else:
                                    entry.pop(key, None)
                    table[i * d + j][k * d + l] = entry
    unit = [f.zero] * (n * d)
    for i, c in enumerate(a.unit):
        unit[i * d] = c
    rad = None
    if a.radical is not None or a.field.characteristic == 0:
        rad = []
        for r in a.get_radical():
            for j in range(d):
                v = [f.zero] * (n * d)
                for i, c in enumerate(r):
                    v[i * d + j] = c
                rad.append(v)
    labels = [f"{a.labels[i]}" + ("" if j == 0 else f"⊗x^{j}" if j > 1 else "⊗x") for i in range(n) for j in range(d)]
    gens = [g * d for g in a.generators] + [1]
    b = AssocAlgebra(f, n * d, table, unit, radical=rad, origin="baseChange", labels=labels, generators=gens,
                     check=False)
    if ext.is_field:
        kt = [[{k: ext(c) for k, c in a.table[i][j].items()} for j in range(n)] for i in range(n)]
        krad = None if rad is None else [[ext(c) for c in r] for r in a.get_radical()]
        b.kform = AssocAlgebra(ext, n, kt, [ext(c) for c in a.unit], radical=krad, origin="baseChange",
                               labels=a.labels, generators=a.generators, check=False)
    images = []
    for i in range(n):
        v = [f.zero] * (n * d)
        v[i * d] = f.one
        images.append(v)
    flags = {"extension": ext.descriptor, "degree": d, "etale": not ext.is_field,
             "irreducibilityCertified": ext.irreducibility_certified}
    return ExtensionMorphism(a, b, images, kind="baseChange", flags=flags)


# ---------------------------------------------------------------------------
# group actions and skew group algebras

@dataclass
class GroupAction:
    """Finite group acting on an algebra by automorphisms.

    ``matrices[g]`` acts on coordinate columns: ``g(x) = matrices[g] @ x``.
    """

    algebra: AssocAlgebra
    elements: list
    table: dict            # (g, h) -> g*h
    matrices: dict         # g -> Matrix
    generators: list = dc_field(default_factory=list)

    def __post_init__(self):
        self.validate()

    @property
    def identity(self):
        for e in self.elements:
            if all(self.table[(e, g)] == g and self.table[(g, e)] == g for g in self.elements):
                return e
        raise InvalidGroupAction("multiplication table has no identity")

    @property
    def order(self) -> int:
        return len(self.elements)

    def inverse(self, g):
        e = self.identity
        return next(h for h in self.elements if self.table[(g, h)] == e)

    def act(self, g, x) -> list:
        return self.matrices[g].apply(x)

    def validate(self):
        els = self.elements
        if len(set(els)) != len(els):
            raise InvalidGroupAction("duplicate group element labels")
        for g in els:
            for h in els:
                if self.table.get((g, h)) not in els:
                    raise InvalidGroupAction(f"product {g}*{h} missing from the table")
        for g in els:
            for h in els:
                for k in els:
                    if self.table[(self.table[(g, h)], k)] != self.table[(g, self.table[(h, k)])]:
                        raise InvalidGroupAction("multiplication table is not associative")
        e = self.identity
        for g in els:
            if not any(self.table[(g, h)] == e for h in els):
                raise InvalidGroupAction(f"element {g} has no inverse")
        a = self.algebra
        ident = Matrix.identity(a.field, a.dim)
        if self.matrices[e] != ident:
            raise InvalidGroupAction("identity element does not act trivially")
        for g in els:
            m = self.matrices[g]
            if m.apply(a.unit) != a.unit:
                raise InvalidGroupAction(f"{g} does not fix the unit")
            imgs = [m.apply(a.basis_vector(i)) for i in range(a.dim)]
            for i in range(a.dim):
                for j in range(a.dim):
                    if m.apply(a.mul(a.basis_vector(i), a.basis_vector(j))) != a.mul(imgs[i], imgs[j]):
                        raise InvalidGroupAction(f"{g} is not multiplicative on ({a.labels[i]}, {a.labels[j]})")
            for h in els:
                if self.matrices[g] @ self.matrices[h] != self.matrices[self.table[(g, h)]]:
                    raise InvalidGroupAction(f"action does not respect {g}*{h}")


def _close_action(elements, table, gen_mats: dict, field: Field, dim: int) -> dict:
    """Matrices for all elements from the generator matrices (breadth-first over the table)."""
    e = next(x for x in elements if all(table[(x, g)] == g for g in elements))
    mats = {e: Matrix.identity(field, dim)}
    frontier = [e]
    while frontier:
        nxt = []
        for g in frontier:
            for s, ms in gen_mats.items():
                h = table[(s, g)]
                if h not in mats:
                    mats[h] = ms @ mats[g]
                    nxt.append(h)
        frontier = nxt
    missing = [g for g in elements if g not in mats]
    if missing:
        raise InvalidGroupAction(f"generators do not reach elements {missing}")
    return mats


def _presentation_automorphism(alg: AssocAlgebra, vmap: dict, amap: dict) -> Matrix:
    pres: Presentation = alg.presentation
    q = pres.quiver
    vmap = {v: str(vmap.get(v, v)) for v in q.vertices}
    amap = {x.label: str(amap.get(x.label, x.label)) for x in q.arrows}
    if sorted(vmap.values()) != sorted(q.vertices) or sorted(amap.values()) != sorted(amap):
        raise InvalidGroupAction("vertex or arrow map is not a permutation")
    for x in q.arrows:
        y = q.arrow(amap[x.label])
        if (y.source, y.target) != (vmap[x.source], vmap[x.target]):
            raise InvalidGroupAction(f"arrow map sends {x.label} to {y.label}, which is not parallel to its image")

    def image(p: Path) -> Path:
        return Path(vmap[p.source], vmap[p.target], tuple(amap[x] for x in p.arrows))

    for r in pres.relations:
        img = {image(p): c for p, c in r.terms}
        if any(path_vector(pres, img)):
            raise InvalidGroupAction(f"action does not preserve the ideal: image of {r} is nonzero")
    cols = [path_vector(pres, {image(p): pres.field.one}) for p in alg.paths]
    return Matrix(alg.field, [list(row) for row in zip(*cols)], alg.dim)


def load_group_action(data, alg: AssocAlgebra) -> GroupAction:
    """JSON: {elements, table (rows of labels), generators: {g: {vertices, arrows} | {matrix}}}."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    els = [str(x) for x in data["elements"]]
    rows = data["table"]
    if len(rows) != len(els) or any(len(r) != len(els) for r in rows):
        raise InvalidGroupAction("multiplication table must be square over the element list")
    table = {(g, h): str(rows[i][j]) for i, g in enumerate(els) for j, h in enumerate(els)}
    gen_mats = {}
    for g, spec in data.get("generators", {}).items():
        if "matrix" in spec:
            m = Matrix(alg.field, [[alg.field(c) for c in row] for row in spec["matrix"]], alg.dim)
        else:
            if getattr(alg, "presentation", None) is None:
                raise InvalidGroupAction("permutation data needs a presentation-derived algebra")
            m = _presentation_automorphism(alg, spec.get("vertices", {}), spec.get("arrows", {}))
        gen_mats[str(g)] = m
    mats = _close_action(els, table, gen_mats, alg.field, alg.dim)
    return GroupAction(alg, els, table, mats, list(gen_mats))


def trivial_action(alg: AssocAlgebra, n: int = 2) -> GroupAction:
    """Cyclic group of order n acting trivially."""
    els = [f"g{i}" for i in range(n)]
    table = {(els[i], els[j]): els[(i + j) % n] for i in range(n) for j in range(n)}
    ident = Matrix.identity(alg.field, alg.dim)
    return GroupAction(alg, els, table, {g: ident for g in els}, [els[1 % n]])


def skew_group_algebra(a: AssocAlgebra, act: GroupAction) -> ExtensionMorphism:
    """``A -> AG``; basis ``a_i (x) g`` at index ``i*|G| + g``."""
    f = a.field
    els = act.elements
    m = len(els)
    pos = {g: k for k, g in enumerate(els)}
    n = a.dim
    moved = {g: [act.act(g, a.basis_vector(i)) for i in range(n)] for g in els}
    table = [[None] * (n * m) for _ in range(n * m)]
    for i in range(n):
        bi = a.basis_vector(i)
        for gi, g in enumerate(els):
            for k in range(n):
                prod = a.mul(bi, moved[g][k])
                for hi, h in enumerate(els):
                    gh = pos[act.table[(g, h)]]
                    table[i * m + gi][k * m + hi] = {t * m + gh: c for t, c in enumerate(prod) if c}
    e = pos[act.identity]
    unit = [f.zero] * (n * m)
    for i, c in enumerate(a.unit):
        unit[i * m + e] = c
    invertible = f.characteristic == 0 or m % f.characteristic != 0
    rad = None
    if invertible and (a.radical is not None or f.characteristic == 0):
        rad = []
        for r in a.get_radical():
            for g in range(m):
                v = [f.zero] * (n * m)
                for i, c in enumerate(r):
                    v[i * m + g] = c
                rad.append(v)
    gens = [gi * m + e for gi in a.generators]
    gens += [i * m + pos[g] for g in (act.generators or els) for i in range(n) if a.unit[i]]
    labels = [f"{a.labels[i]}⊗{g}" for i in range(n) for g in els]
    b = AssocAlgebra(f, n * m, table, unit, radical=rad, origin="skewGroup", labels=labels,
                     generators=sorted(set(gens)), check=False)
    images = []
    for i in range(n):
        v = [f.zero] * (n * m)
        v[i * m + e] = f.one
        images.append(v)
    flags = {"groupOrder": m, "groupOrderInvertible": invertible}
    return ExtensionMorphism(a, b, images, kind="skewGroup", flags=flags)


# ---------------------------------------------------------------------------
# quotients

def quotient_extension(p: Presentation, extra: Sequence) -> ExtensionMorphism:
    rels = [p.parse_relation(r) if isinstance(r, str) else r for r in extra]
    q = p.with_relations(rels)
    a = path_basis_algebra(p)
    b = path_basis_algebra(q)
    images = [path_vector(q, {path: p.field.one}) for path in a.paths]
    kind = "quotient" if rels else "identity"
    return ExtensionMorphism(a, b, images, kind=kind, flags={"addedRelations": [str(r) for r in rels]})


# ---------------------------------------------------------------------------
# witnesses

def split_witness(phi: ExtensionMorphism) -> Matrix | None:
    """A-bimodule retraction ``pi: B -> A`` of ``phi`` (dim A x dim B), or None."""
    a, b = phi.source, phi.target
    f = a.field
    na, nb = a.dim, b.dim

    def var(i, k):
        return i * nb + k

    eqs, rhs = [], []
    for j in range(na):
        img = phi.images[j]
        for i in range(na):
            eqs.append({var(i, k): c for k, c in enumerate(img) if c})
            rhs.append(f.one if i == j else f.zero)
    for g in a.generators:
        ag = a.basis_vector(g)
        pg = phi.images[g]
        lmul = [a.mul(ag, a.basis_vector(l)) for l in range(na)]
        rmul = [a.mul(a.basis_vector(l), ag) for l in range(na)]
        for k in range(nb):
            bk = b.basis_vector(k)
            left = b.mul(pg, bk)
            right = b.mul(bk, pg)
            for i in range(na):
                eq = {}
                for mm, c in enumerate(left):
                    if c:
                        eq[var(i, mm)] = eq.get(var(i, mm), f.zero) + c
                for l in range(na):
                    c = lmul[l][i]
                    if c:
                        eq[var(l, k)] = eq.get(var(l, k), f.zero) - c
                eqs.append({x: c for x, c in eq.items() if c})
                rhs.append(f.zero)
                eq = {}
                for mm, c in enumerate(right):
                    if c:
                        eq[var(i, mm)] = eq.get(var(i, mm), f.zero) + c
                for l in range(na):
                    c = rmul[l][i]
                    if c:
                        eq[var(l, k)] = eq.get(var(l, k), f.zero) - c
                eqs.append({x: c for x, c in eq.items() if c})
                rhs.append(f.zero)
    res = solve_sparse(eqs, rhs, na * nb, f, want_kernel=False)
    if res is None:
        return None
    sol = res[0]
    pi = Matrix(f, [[sol[var(i, k)] for k in range(nb)] for i in range(na)], nb)
    if not verify_split(phi, pi):
        raise AlgebraError("split retraction failed re-verification")
    return pi


def verify_split(phi: ExtensionMorphism, pi: Matrix) -> bool:
    a, b = phi.source, phi.target
    for j in range(a.dim):
        if pi.apply(phi.images[j]) != a.basis_vector(j):
            return False
    for j in range(a.dim):
        aj = a.basis_vector(j)
        for k in range(b.dim):
            bk = b.basis_vector(k)
            pk = pi.apply(bk)
            if pi.apply(b.mul(phi.images[j], bk)) != a.mul(aj, pk):
                return False
            if pi.apply(b.mul(bk, phi.images[j])) != a.mul(pk, aj):
                return False
    return True


class TensorOverA:
    """``B (x)_A B`` as an explicit quotient of ``B (x)_k B``; ``b_k (x) b_l`` at ``k*nB + l``."""

    def __init__(self, phi: ExtensionMorphism):
        self.phi = phi
        b = phi.target
        nb = b.dim
        self.nb = nb
        ech = SparseEchelon()
        gens = phi.source.generators
        for g in gens:
            pg = phi.images[g]
            right = [b.mul(b.basis_vector(k), pg) for k in range(nb)]
            left = [b.mul(pg, b.basis_vector(l)) for l in range(nb)]
            for k in range(nb):
                for l in range(nb):
                    vec = {}
                    for s, c in enumerate(right[k]):
                        if c:
                            vec[s * nb + l] = vec.get(s * nb + l, b.field.zero) + c
                    for s, c in enumerate(left[l]):
                        if c:
                            vec[k * nb + s] = vec.get(k * nb + s, b.field.zero) - c
                    vec = {x: c for x, c in vec.items() if c}
                    if vec:
                        ech.add(vec)
        self.ech = ech
        self.basis = [x for x in range(nb * nb) if x not in ech.rows]
        self.pos = {x: i for i, x in enumerate(self.basis)}
        self.dim = len(self.basis)

    def project(self, vec: dict) -> list:
        f = self.phi.target.field
        out = [f.zero] * self.dim
        for x, c in self.ech.reduce({k: v for k, v in vec.items() if v}).items():
            out[self.pos[x]] = c
        return out

    def pair(self, i: int) -> tuple[int, int]:
        return divmod(self.basis[i], self.nb)

    def left_act(self, x, i: int) -> dict:
        b = self.phi.target
        k, l = self.pair(i)
        prod = b.mul(x, b.basis_vector(k))
        return {s * self.nb + l: c for s, c in enumerate(prod) if c}

    def right_act(self, i: int, x) -> dict:
        b = self.phi.target
        k, l = self.pair(i)
        prod = b.mul(b.basis_vector(l), x)
        return {k * self.nb + s: c for s, c in enumerate(prod) if c}

    def mu(self, i: int) -> list:
        b = self.phi.target
        k, l = self.pair(i)
        return b.mul(b.basis_vector(k), b.basis_vector(l))

    def commutator(self, x, coords) -> list:
        """Coordinates of ``x*e - e*x``."""
        f = self.phi.target.field
        acc: dict = {}
        for i, c in enumerate(coords):
            if not c:
                continue
            for s, v in self.left_act(x, i).items():
                acc[s] = acc.get(s, f.zero) + c * v
            for s, v in self.right_act(i, x).items():
                acc[s] = acc.get(s, f.zero) - c * v
        return self.project(acc)


@dataclass
class SeparabilityCertificate:
    coords: list
    tensor_dim: int
    terms: list            # (left label, right label, coefficient) over the chosen quotient basis

    def to_json(self, field: Field) -> dict:
        return {"tensorDimension": self.tensor_dim,
                "terms": [{"left": l, "right": r, "coefficient": field.to_json(c)} for l, r, c in self.terms]}


def separability_idempotent(phi: ExtensionMorphism) -> SeparabilityCertificate | None:
    b = phi.target
    f = b.field
    t = TensorOverA(phi)
    nb = b.dim
    eqs, rhs = [], []
    mus = [t.mu(i) for i in range(t.dim)]
    for s in range(nb):
        eqs.append({i: mus[i][s] for i in range(t.dim) if mus[i][s]})
        rhs.append(b.unit[s])
    for g in b.generators:
        x = b.basis_vector(g)
        cols = [t.commutator(x, [f.one if j == i else f.zero for j in range(t.dim)]) for i in range(t.dim)]
        for s in range(t.dim):
            eq = {i: cols[i][s] for i in range(t.dim) if cols[i][s]}
            if eq:
                eqs.append(eq)
                rhs.append(f.zero)
    res = solve_sparse(eqs, rhs, t.dim, f, want_kernel=False)
    if res is None:
        return None
    coords = res[0]
    if not verify_separability(t, coords):
        raise AlgebraError("separability idempotent failed re-verification")
    terms = [(b.labels[t.pair(i)[0]], b.labels[t.pair(i)[1]], c) for i, c in enumerate(coords) if c]
    cert = SeparabilityCertificate(coords, t.dim, terms)
    cert.tensor = t
    return cert


def verify_separability(t: TensorOverA, coords) -> bool:
    b = t.phi.target
    mu = b.zero()
    for i, c in enumerate(coords):
        if c:
            mu = b.add(mu, b.scale(c, t.mu(i)))
    if mu != b.unit:
        return False
    return all(not any(t.commutator(b.basis_vector(k), coords)) for k in range(b.dim))


def restriction_modules(phi: ExtensionMorphism) -> tuple[Module, Module]:
    """(B as right A-module via b.a = b phi(a), B as left A-module via a.b = phi(a) b)."""
    a, b = phi.source, phi.target
    right = Module(a, b.dim, [b.right_matrix(phi.images[i]) for i in range(a.dim)], "right")
    left = Module(a, b.dim, [b.left_matrix(phi.images[i]) for i in range(a.dim)], "left")
    return right, left


@dataclass
class WitnessReport:
    split: Matrix | None
    separable: SeparabilityCertificate | None
    right_projective: tuple | None
    left_projective: tuple | None
    notes: list = dc_field(default_factory=list)

    def to_json(self, field: Field) -> dict:
        def proj(x):
            return None if x is None else {"projective": x[0], "multiplicities": x[1]}

        return {
            "split": self.split is not None,
            "splitRetraction": None if self.split is None else
            [[field.to_json(c) for c in row] for row in self.split.rows],
            "separable": self.separable is not None,
            "separabilityIdempotent": None if self.separable is None else self.separable.to_json(field),
            "rightProjective": proj(self.right_projective),
            "leftProjective": proj(self.left_projective),
            "notes": self.notes,
        }


def witness_report(phi: ExtensionMorphism, seed: int = 0, projectivity: bool = True) -> WitnessReport:
    notes = []
    pi = split_witness(phi)
    sep = separability_idempotent(phi)
    rp = lp = None
    if projectivity:
        try:
            dec = lift_idempotents(phi.source, seed)
            right, left = restriction_modules(phi)
            rp = is_projective_right(right, dec)
            lp = is_projective_left(left, dec)
        except (NonSplitSemisimpleQuotient, RadicalUnavailable) as e:
            notes.append(f"projectivity not decided: {type(e).__name__}: {e}")
    return WitnessReport(pi, sep, rp, lp, notes)


# ---------------------------------------------------------------------------
# classification of algebras and consistency experiments

@dataclass
class BlockVerdict:
    dimension: int
    multiplicities: list
    presentation: Presentation
    verdict: ClassificationVerdict
    via: str = "ground field"

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "multiplicities": self.multiplicities,
                "presentation": self.presentation.to_text(), "verdict": self.verdict.to_json(),
                "via": self.via}


def classify_algebra(alg: AssocAlgebra, seed: int = 0) -> list[BlockVerdict]:
    """Per-block verdicts after basic reduction and Gabriel quiver recovery."""
    try:
        return _classify_blocks(alg, seed, "ground field")
    except NonSplitSemisimpleQuotient:
        kform = getattr(alg, "kform", None)
        if kform is None:
            raise
        return _classify_blocks(kform, seed, f"scalar extension to {kform.field.descriptor}")


def _classify_blocks(alg: AssocAlgebra, seed: int, via: str) -> list[BlockVerdict]:
    out = []
    for blk in block_algebras(alg, seed):
        basic, mults = basic_reduction(blk, seed)
        pres = gabriel_quiver(basic, seed=seed)
        parts = classify_components(pres)
        verdict = parts[0]
        out.append(BlockVerdict(blk.dim, mults, pres, verdict, via))
    return out


def _all_status(blocks: list[BlockVerdict]) -> bool | None:
    """True if every block is derived-discrete, False if one is not, None if undecided."""
    stats = [b.verdict.status for b in blocks]
    if "NotDerivedDiscrete" in stats:
        return False
    if "Unknown" in stats:
        return None
    return True


def _ph_status(v: ClassificationVerdict, pres: Presentation) -> bool | None:
    """Piecewise hereditary, in the sub-cases decided here."""
    if not pres.relations:
        return True
    if v.reason == "GentleOneCycleClock":
        return False
    if v.reason == "GentleOneCycleNoClock":
        return True
    return None


def _gentle_clock(v: ClassificationVerdict) -> bool | None:
    if v.reason == "GentleOneCycleClock":
        return True
    if v.status in ("NotDerivedDiscrete",) or v.reason == "HereditaryDynkin":
        return False
    return None


def _conj(vals) -> bool | None:
    vals = list(vals)
    if any(v is False for v in vals):
        return False
    if any(v is None for v in vals):
        return None
    return True


def _implication(name: str, hyps: dict, conclusion: bool | None) -> dict:
    """Evaluate ``hyps => conclusion`` with three-valued inputs."""
    h = _conj(hyps.values())
    if h is False:
        status = "hypothesis fails"
    elif h is None:
        status = "inconclusive"
    elif conclusion is None:
        status = "inconclusive"
    elif conclusion:
        status = "holds"
    else:
        status = "violated"
    return {"statement": name, "hypotheses": hyps, "conclusion": conclusion, "status": status}


def run_consistency_experiment(phi: ExtensionMorphism, mode: str, seed: int = 0) -> dict:
    if mode not in ("theorem41", "prop51", "prop53"):
        raise ValueError(f"unknown experiment mode {mode!r}")
    w = witness_report(phi, seed)
    a_blocks = classify_algebra(phi.source, seed)
    b_blocks = classify_algebra(phi.target, seed)
    split = w.split is not None
    sep = w.separable is not None
    rproj = None if w.right_projective is None else w.right_projective[0]
    lproj = None if w.left_projective is None else w.left_projective[0]
    checks = []
    if mode == "theorem41":
        a_dd, b_dd = _all_status(a_blocks), _all_status(b_blocks)
        checks.append(_implication("split and B derived-discrete => A derived-discrete",
                                   {"split": split, "BDerivedDiscrete": b_dd}, a_dd))
        checks.append(_implication("separable and B_A projective and A derived-discrete => B derived-discrete",
                                   {"separable": sep, "rightProjective": rproj, "ADerivedDiscrete": a_dd}, b_dd))
    elif mode == "prop51":
        a_ph = _conj(_ph_status(x.verdict, x.presentation) for x in a_blocks)
        b_ph = _conj(_ph_status(x.verdict, x.presentation) for x in b_blocks)
        checks.append(_implication("split and B piecewise hereditary => A piecewise hereditary",
                                   {"split": split, "BPiecewiseHereditary": b_ph}, a_ph))
        checks.append(_implication("separable and _AB projective and A piecewise hereditary => "
                                   "B piecewise hereditary",
                                   {"separable": sep, "leftProjective": lproj, "APiecewiseHereditary": a_ph}, b_ph))
    else:
        applicable = phi.kind in ("baseChange", "skewGroup", "identity") and len(a_blocks) == 1
        if phi.kind == "skewGroup" and not phi.flags.get("groupOrderInvertible", False):
            applicable = False
        a_gc = _gentle_clock(a_blocks[0].verdict) if a_blocks else None
        b_gc = _conj(_gentle_clock(x.verdict) for x in b_blocks)
        if not applicable:
            status = "hypothesis fails"
        elif a_gc is None or b_gc is None:
            status = "inconclusive"
        elif a_gc == b_gc:
            status = "holds"
        else:
            status = "violated"
        checks.append({"statement": "A gentle one-cycle with clock <=> every block of B is",
                       "hypotheses": {"applicableExtension": applicable, "AConnected": len(a_blocks) == 1},
                       "conclusion": {"A": a_gc, "B": b_gc}, "status": status})
    if any(c["status"] == "violated" for c in checks):
        overall = "VIOLATION"
    elif any(c["status"] == "inconclusive" for c in checks):
        overall = "INCONCLUSIVE"
    else:
        overall = "CONSISTENT"
    caveats = list(w.notes)
    if any(x.via != "ground field" for x in b_blocks):
        caveats.append("blocks of B classified after extending scalars; derived-discreteness is "
                       "invariant under this finite separable scalar extension")
    if phi.source.field.characteristic:
        caveats.append("finite ground field: the classification criterion assumes an algebraically closed field")
    return {
        "mode": mode,
        "extension": {"kind": phi.kind, "flags": phi.flags, "dimA": phi.source.dim, "dimB": phi.target.dim},
        "witnesses": w.to_json(phi.source.field),
        "blocksA": [x.to_json() for x in a_blocks],
        "blocksB": [x.to_json() for x in b_blocks],
        "checks": checks,
        "outcome": overall,
        "caveats": caveats,
    }
