"""Quivers, paths, relations, the presentation file parser, and kQ/I as structure constants.

Paths compose right to left: ``b*a`` means *a first, then b*.  Internally a
:class:`Path` stores its arrows in traversal order, so ``b*a`` is
``Path(arrows=("a", "b"))``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .exactfield import QQ, Field, SparseEchelon, field_from_spec

__all__ = [
    "Arrow", "Quiver", "Path", "Relation", "Presentation", "PresentationError",
    "PresentationSyntaxError", "UnknownVertex", "UnknownArrow", "NonComposablePath",
    "NonParallelRelation", "NotAdmissible", "parse_presentation", "load_presentation",
    "admissible_check", "path_basis_algebra", "connected_components",
]

DEFAULT_CAP = 32
MAX_PATHS_PER_DEGREE = 200_000


class PresentationError(ValueError):
    pass


class PresentationSyntaxError(PresentationError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"line {line}, column {col}: {msg}" if line else msg)
        self.line = line
        self.col = col


class UnknownVertex(PresentationError):
    pass


class UnknownArrow(PresentationError):
    pass


class NonComposablePath(PresentationError):
    pass


class NonParallelRelation(PresentationError):
    pass


class NotAdmissible(PresentationError):
    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason
        self.detail = detail


@dataclass(frozen=True)
class Arrow:
    label: str
    source: str
    target: str


@dataclass(frozen=True, order=True)
class Path:
    source: str
    target: str
    arrows: tuple = ()

    def __len__(self):
        return len(self.arrows)

    def __str__(self):
        if not self.arrows:
            return f"e_{self.source}"
        return "*".join(reversed(self.arrows))

    def then(self, other: "Path") -> "Path | None":
        """Concatenate: traverse ``self`` and then ``other``; None if not composable."""
        if self.target != other.source:
            return None
        return Path(self.source, other.target, self.arrows + other.arrows)


class Quiver:
    def __init__(self, vertices: Sequence[str], arrows: Sequence[Arrow]):
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise PresentationError("duplicate vertex label")
        vset = set(self.vertices)
        self.arrows = tuple(arrows)
        labels = [a.label for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise PresentationError("duplicate arrow label")
        if vset & set(labels):
            raise PresentationError("vertex and arrow labels overlap")
        for a in self.arrows:
            for v in (a.source, a.target):
                if v not in vset:
                    raise UnknownVertex(f"arrow {a.label} uses undeclared vertex {v!r}")
        self._by_label = {a.label: a for a in self.arrows}
        self._out: dict[str, list[Arrow]] = {v: [] for v in self.vertices}
        self._in: dict[str, list[Arrow]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            self._out[a.source].append(a)
            self._in[a.target].append(a)

    def arrow(self, label: str) -> Arrow:
        try:
            return self._by_label[label]
        except KeyError:
            raise UnknownArrow(f"unknown arrow {label!r}") from None

    def out_arrows(self, v: str) -> list[Arrow]:
        return self._out[v]

    def in_arrows(self, v: str) -> list[Arrow]:
        return self._in[v]

    def trivial(self, v: str) -> Path:
        return Path(v, v, ())

    def path(self, labels_right_to_left: Sequence[str]) -> Path:
        """Build the path written ``labels[0]*labels[1]*...`` (last label traversed first)."""
        trav = list(reversed(labels_right_to_left))
        arrs = [self.arrow(x) for x in trav]
        for prev, nxt in zip(arrs, arrs[1:]):
            if prev.target != nxt.source:
                raise NonComposablePath(
                    f"{nxt.label}*{prev.label}: target({prev.label})={prev.target} "
                    f"!= {nxt.source}=source({nxt.label})")
        return Path(arrs[0].source, arrs[-1].target, tuple(a.label for a in arrs))

    def paths_of_length(self, n: int, start: str | None = None, end: str | None = None) -> list[Path]:
        if n == 0:
            return [self.trivial(v) for v in self.vertices
                    if (start is None or v == start) and (end is None or v == end)]
        starts = [start] if start is not None else list(self.vertices)
        layer = [Path(v, v, ()) for v in starts]
        for _ in range(n):
            nxt = []
            for p in layer:
                for a in self._out[p.target]:
                    nxt.append(Path(p.source, a.target, p.arrows + (a.label,)))
            layer = nxt
            if len(layer) > MAX_PATHS_PER_DEGREE:
                raise NotAdmissible("capExceeded", f"more than {MAX_PATHS_PER_DEGREE} paths of length {n}")
        if end is not None:
            layer = [p for p in layer if p.target == end]
        return layer

    def relabel(self, vmap: dict[str, str], amap: dict[str, str]) -> "Quiver":
        return Quiver([vmap[v] for v in self.vertices],
                      [Arrow(amap[a.label], vmap[a.source], vmap[a.target]) for a in self.arrows])

    def __eq__(self, other):
        return isinstance(other, Quiver) and self.vertices == other.vertices and self.arrows == other.arrows

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


@dataclass(frozen=True)
class Relation:
    """Linear combination of parallel paths of length >= 2 (not checked here)."""

    terms: tuple  # ((Path, coeff), ...) sorted, nonzero coefficients

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Path, object]]) -> "Relation":
        acc: dict[Path, object] = {}
        for p, c in terms:
            acc[p] = acc[p] + c if p in acc else c
        return cls(tuple(sorted(((p, c) for p, c in acc.items() if c), key=lambda t: (len(t[0]), t[0]))))

    @property
    def source(self) -> str:
        return self.terms[0][0].source

    @property
    def target(self) -> str:
        return self.terms[0][0].target

    @property
    def is_homogeneous(self) -> bool:
        return len({len(p) for p, _ in self.terms}) <= 1

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __str__(self):
        out = ""
        for k, (p, c) in enumerate(self.terms):
            neg = str(c).startswith("-")
            mag = str(-c) if neg else str(c)
            body = str(p) if mag == "1" else f"{mag} {p}"
            if k == 0:
                out = ("-" if neg else "") + body
            else:
                out += (" - " if neg else " + ") + body
        return out or "0"


class Presentation:
    """A quiver with relations over an exact field: the syntactic form of kQ/I."""

    def __init__(self, field: Field, quiver: Quiver, relations: Sequence[Relation] = (),
                 cap: int = DEFAULT_CAP, name: str = ""):
        self.field = field
        self.quiver = quiver
        self.cap = int(cap)
        self.name = name
        rels = []
        for r in relations:
            if not r.terms:
                continue
            src, tgt = r.source, r.target
            for p, _ in r.terms:
                if p.source != src or p.target != tgt:
                    raise NonParallelRelation(f"relation {r} mixes paths {src}->{tgt} and {p.source}->{p.target}")
            rels.append(r)
        self.relations = tuple(rels)
        self._cache = None

    def with_relations(self, extra: Sequence[Relation]) -> "Presentation":
        return Presentation(self.field, self.quiver, list(self.relations) + list(extra), self.cap, self.name)

    def parse_relation(self, text: str) -> Relation:
        return _parse_relation(text, self.quiver, self.field, 0)

    def restrict(self, vertices: Iterable[str]) -> "Presentation":
        vs = set(vertices)
        q = Quiver([v for v in self.quiver.vertices if v in vs],
                   [a for a in self.quiver.arrows if a.source in vs])
        rels = [r for r in self.relations if r.source in vs]
        return Presentation(self.field, q, rels, self.cap, self.name)

    def relabel(self, vmap: dict[str, str], amap: dict[str, str], vertex_order=None, arrow_order=None) -> "Presentation":
        q = self.quiver.relabel(vmap, amap)
        if vertex_order is not None or arrow_order is not None:
            vs = list(q.vertices) if vertex_order is None else [vmap[v] for v in vertex_order]
            ars = list(q.arrows)
            if arrow_order is not None:
                pos = {amap[a]: i for i, a in enumerate(arrow_order)}
                ars.sort(key=lambda a: pos[a.label])
            q = Quiver(vs, ars)
        rels = [Relation.from_terms((Path(vmap[p.source], vmap[p.target], tuple(amap[a] for a in p.arrows)), c)
                                    for p, c in r.terms) for r in self.relations]
        return Presentation(self.field, q, rels, self.cap, self.name)

    def to_text(self) -> str:
        lines = [f"field {self.field.descriptor}", "vertices " + " ".join(self.quiver.vertices)]
        for a in self.quiver.arrows:
            lines.append(f"arrow {a.label} : {a.source} -> {a.target}")
        if self.cap != DEFAULT_CAP:
            lines.append(f"cap {self.cap}")
        if self.relations:
            lines.append("relations")
            for r in self.relations:
                lines.append(f"  {_relation_text(r)}")
            lines.append("end")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return (f"Presentation({self.field.descriptor}, {len(self.quiver.vertices)} vertices, "
                f"{len(self.quiver.arrows)} arrows, {len(self.relations)} relations)")


def _relation_text(r: Relation) -> str:
    out = []
    for k, (p, c) in enumerate(r.terms):
        s = str(c)
        neg = s.startswith("-")
        mag = s[1:] if neg else s
        body = str(p) if mag == "1" else f"{mag} {p}"
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


# ---------------------------------------------------------------------------
# parser

_LABEL = r"[A-Za-z_][A-Za-z0-9_']*"
_REL_TOKEN = re.compile(rf"\s*(?:(?P<op>[+-])|(?P<num>\d+(?:/\d+)?)\s*\*?|(?P<path>{_LABEL}(?:\s*\*\s*{_LABEL})*))")


def _parse_relation(text: str, quiver: Quiver, field: Field, lineno: int, col0: int = 1) -> Relation:
    pos = 0
    terms = []
    sign = 1
    coeff = None
    expect_term = True
    text = text.rstrip()
    while pos < len(text):
        m = _REL_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PresentationSyntaxError(f"unexpected {text[pos:].strip()!r}", lineno, col0 + pos)
        col = col0 + m.start(m.lastgroup)
        if m.group("op"):
            if not expect_term and coeff is None:
                expect_term = True
                sign = 1
            elif coeff is not None:
                raise PresentationSyntaxError("operator after coefficient", lineno, col)
            if m.group("op") == "-":
                sign = -sign
        elif m.group("num"):
            if coeff is not None or not expect_term:
                raise PresentationSyntaxError("unexpected coefficient", lineno, col)
            coeff = field(m.group("num"))
        else:
            if not expect_term:
                raise PresentationSyntaxError("missing '+' or '-' between terms", lineno, col)
            labels = [s.strip() for s in m.group("path").split("*")]
            for lab in labels:
                if lab not in quiver._by_label:
                    raise UnknownArrow(f"line {lineno}, column {col}: unknown arrow {lab!r}")
            p = quiver.path(labels)
            c = field(sign) * (coeff if coeff is not None else field.one)
            terms.append((p, c))
            sign, coeff, expect_term = 1, None, False
        pos = m.end()
    if expect_term:
        raise PresentationSyntaxError("relation ends without a path", lineno, col0 + len(text))
    rel = Relation.from_terms(terms)
    if rel.terms:
        src, tgt = rel.source, rel.target
        for p, _ in rel.terms:
            if p.source != src or p.target != tgt:
                raise NonParallelRelation(f"line {lineno}: relation {text.strip()!r} is not a combination of parallel paths")
    return rel


def parse_presentation(text: str, name: str = "") -> Presentation:
    """Parse the line-oriented presentation format (see README)."""
    fld: Field | None = None
    vertices: list[str] | None = None
    arrows: list[Arrow] = []
    rel_lines: list[tuple[int, int, str]] = []
    cap = DEFAULT_CAP
    in_rel = False
    closed = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        stripped = line.strip()
        if in_rel:
            if stripped == "end":
                in_rel = False
                closed = True
                continue
            rel_lines.append((lineno, indent + 1, stripped))
            continue
        word, _, rest = stripped.partition(" ")
        rest = rest.strip()
        if word == "field":
            if fld is not None:
                raise PresentationSyntaxError("duplicate field line", lineno, 1)
            try:
                fld = field_from_spec(rest)
            except ValueError as e:
                raise PresentationSyntaxError(str(e), lineno, indent + 7) from e
        elif word == "vertices":
            if vertices is not None:
                raise PresentationSyntaxError("duplicate vertices line", lineno, 1)
            vertices = rest.split()
            if not vertices:
                raise PresentationSyntaxError("no vertices declared", lineno, indent + 1)
        elif word == "arrow":
            m = re.fullmatch(rf"({_LABEL})\s*:\s*(\S+)\s*->\s*(\S+)", rest)
            if not m:
                raise PresentationSyntaxError("expected 'arrow <label> : <source> -> <target>'", lineno, indent + 7)
            if vertices is None:
                raise PresentationSyntaxError("arrow declared before vertices", lineno, 1)
            lab, s, t = m.groups()
            for v in (s, t):
                if v not in vertices:
                    raise UnknownVertex(f"line {lineno}: unknown vertex {v!r} in arrow {lab}")
            arrows.append(Arrow(lab, s, t))
        elif word == "cap":
            if not rest.isdigit() or int(rest) < 1:
                raise PresentationSyntaxError("cap must be a positive integer", lineno, indent + 5)
            cap = int(rest)
        elif word == "relations" and not rest:
            if closed:
                raise PresentationSyntaxError("duplicate relations block", lineno, 1)
            in_rel = True
        else:
            raise PresentationSyntaxError(f"unknown directive {word!r}", lineno, indent + 1)
    if in_rel:
        raise PresentationSyntaxError("relations block not closed with 'end'", len(text.splitlines()), 1)
    if vertices is None:
        raise PresentationSyntaxError("missing vertices line", 1, 1)
    if fld is None:
        fld = QQ
    try:
        quiver = Quiver(vertices, arrows)
    except UnknownVertex:
        raise
    except PresentationError as e:
        raise PresentationSyntaxError(str(e)) from e
    rels = [_parse_relation(t, quiver, fld, ln, col) for ln, col, t in rel_lines]
    return Presentation(fld, quiver, rels, cap, name)


def load_presentation(path) -> Presentation:
    from pathlib import Path as _P

    p = _P(path)
    return parse_presentation(p.read_text(encoding="utf-8"), name=p.stem)


# ---------------------------------------------------------------------------
# ideal reduction

class _Reducer:
    """Normal forms of paths in kQ/I.

    ``graded`` (all relations homogeneous): one echelon per path length.
    Otherwise: one echelon over all paths shorter than the nilpotency index,
    with columns ordered longest-first so that normal forms prefer short paths.
    """

    def __init__(self, pres: Presentation):
        self.pres = pres
        self.quiver = pres.quiver
        self.field = pres.field
        self.graded = all(r.is_homogeneous for r in pres.relations)
        self.paths: dict[int, list[Path]] = {}
        self.index: dict[Path, int] = {}
        self.nilpotency: int | None = None

    def _paths(self, n: int) -> list[Path]:
        if n not in self.paths:
            self.paths[n] = self.quiver.paths_of_length(n)
        return self.paths[n]

    def _ideal_vectors(self, max_len: int, truncate: bool, exact_len: int | None = None) -> Iterator[dict]:
        """Vectors ``u*r*v`` as {Path: coeff}; truncated drops terms longer than max_len."""
        q = self.quiver
        for r in self.pres.relations:
            lens = [len(p) for p, _ in r.terms]
            lo, hi = min(lens), max(lens)
            budget = max_len - (lo if truncate else hi)
            if exact_len is not None:
                budget = exact_len - lo
            if budget < 0:
                continue
            for j in range(budget + 1):
                vs = q.paths_of_length(j, end=r.source)
                for k in range(budget - j + 1):
                    if exact_len is not None and j + k != budget:
                        continue
                    us = q.paths_of_length(k, start=r.target)
                    for v in vs:
                        for u in us:
                            vec = {}
                            for p, c in r.terms:
                                full = Path(v.source, u.target, v.arrows + p.arrows + u.arrows)
                                if truncate and len(full) > max_len:
                                    continue
                                vec[full] = c
                            if vec:
                                yield vec

    def build(self):
        cap = self.pres.cap
        f = self.field
        if not self.pres.relations:
            for n in range(cap + 1):
                if not self._paths(n):
                    self.nilpotency = n
                    break
            else:
                raise NotAdmissible("capExceeded", f"nonzero paths of length {cap} remain (no relations)")
            self.ech = {}
            self._finish()
            return
        for r in self.pres.relations:
            for p, _ in r.terms:
                if len(p) < 2:
                    raise NotAdmissible("lengthOneTerm", f"relation {r} has term {p} of length {len(p)}")
        if self.graded:
            self.ech = {}
            for n in range(cap + 1):
                paths = self._paths(n)
                if not paths:
                    self.nilpotency = n
                    break
                idx = {p: i for i, p in enumerate(paths)}
                ech = SparseEchelon()
                for vec in self._ideal_vectors(n, truncate=False, exact_len=n):
                    ech.add({idx[p]: c for p, c in vec.items()})
                    if ech.rank == len(paths):
                        break
                self.ech[n] = (idx, ech)
                if ech.rank == len(paths):
                    self.nilpotency = n
                    break
            else:
                raise NotAdmissible("capExceeded", f"nonzero paths of length {cap} remain in kQ/I")
        else:
            order, idx, ech = self._truncated(cap)
            N = None
            for n in range(cap + 1):
                if all(not ech.reduce({idx[p]: f.one}) for p in self._paths(n)):
                    N = n
                    break
            if N is None:
                raise NotAdmissible("capExceeded", f"nonzero paths of length {cap} remain in kQ/I")
            # certify J^N in I without truncation
            all_paths = [p for n in range(cap + 1) for p in self._paths(n)]
            gidx = {p: i for i, p in enumerate(sorted(all_paths, key=lambda p: (-len(p), p)))}
            exact = SparseEchelon()
            for vec in self._ideal_vectors(cap, truncate=False):
                exact.add({gidx[p]: c for p, c in vec.items()})
            for p in self._paths(N):
                if not exact.contains({gidx[p]: f.one}):
                    raise NotAdmissible("capExceeded",
                                        f"path {p} vanishes only modulo long paths; nilpotency of the arrow ideal "
                                        f"is not certified within cap {cap}")
            self.nilpotency = N
            self.ech = {"all": self._truncated(N - 1)[1:]} if N > 0 else {"all": ({}, SparseEchelon())}
        self._finish()

    def _truncated(self, M: int):
        paths = [p for n in range(M + 1) for p in self._paths(n)]
        order = sorted(paths, key=lambda p: (-len(p), p))
        idx = {p: i for i, p in enumerate(order)}
        ech = SparseEchelon()
        for vec in self._ideal_vectors(M, truncate=True):
            ech.add({idx[p]: c for p, c in vec.items()})
        return order, idx, ech

    def _finish(self):
        N = self.nilpotency
        basis: list[Path] = []
        for n in range(N):
            for p in self._paths(n):
                if self.graded or not self.pres.relations:
                    ent = self.ech.get(n)
                    if ent is None or ent[0][p] not in ent[1].rows:
                        basis.append(p)
                else:
                    idx, ech = self.ech["all"]
                    if idx[p] not in ech.rows:
                        basis.append(p)
        self.basis = basis
        self.basis_index = {p: i for i, p in enumerate(basis)}

    def normal_form(self, vec: dict) -> dict:
        """Reduce {Path: coeff} to {basis index: coeff}."""
        f = self.field
        out: dict[int, object] = {}
        if self.graded or not self.pres.relations:
            by_len: dict[int, dict] = {}
            for p, c in vec.items():
                if len(p) >= self.nilpotency or not c:
                    continue
                by_len.setdefault(len(p), {})
                by_len[len(p)][p] = by_len[len(p)].get(p, f.zero) + c
            for n, part in by_len.items():
                ent = self.ech.get(n)
                if ent is None:
                    for p, c in part.items():
                        k = self.basis_index[p]
                        out[k] = out.get(k, f.zero) + c
                    continue
                idx, ech = ent
                paths = self.paths[n]
                red = ech.reduce({idx[p]: c for p, c in part.items()})
                for i, c in red.items():
                    k = self.basis_index[paths[i]]
                    out[k] = out.get(k, f.zero) + c
        else:
            idx, ech = self.ech["all"]
            inv = getattr(self, "_inv_idx", None)
            if inv is None:
                inv = self._inv_idx = {i: p for p, i in idx.items()}
            v = {}
            for p, c in vec.items():
                if len(p) >= self.nilpotency or not c:
                    continue
                v[idx[p]] = v.get(idx[p], f.zero) + c
            for i, c in ech.reduce(v).items():
                k = self.basis_index[inv[i]]
                out[k] = out.get(k, f.zero) + c
        return {k: c for k, c in out.items() if c}


def _reducer(pres: Presentation) -> _Reducer:
    if pres._cache is None:
        red = _Reducer(pres)
        red.build()
        pres._cache = red
    return pres._cache


@dataclass
class AdmissibleVerdict:
    admissible: bool
    nilpotency_index: int
    dimension: int
    graded: bool
    reason: str = ""

    def __bool__(self):
        return self.admissible


def admissible_check(pres: Presentation) -> AdmissibleVerdict:
    """Raise :class:`NotAdmissible` unless every relation term has length >= 2 and
    all paths of length ``cap`` vanish in kQ/I."""
    red = _reducer(pres)
    return AdmissibleVerdict(True, red.nilpotency, len(red.basis), red.graded)


def path_basis_algebra(pres: Presentation):
    """Structure-constant form of kQ/I on the basis of surviving paths."""
    from .algebra import AssocAlgebra

    red = _reducer(pres)
    basis = red.basis
    n = len(basis)
    f = pres.field
    table = [[None] * n for _ in range(n)]
    for i, p in enumerate(basis):
        for j, q in enumerate(basis):
            # b_i * b_j = traverse q then p
            cat = q.then(p)
            if cat is None:
                table[i][j] = {}
            else:
                table[i][j] = red.normal_form({cat: f.one})
    unit = [f.zero] * n
    for v in pres.quiver.vertices:
        unit[red.basis_index[pres.quiver.trivial(v)]] = f.one
    radical = []
    for i, p in enumerate(basis):
        if len(p) >= 1:
            vec = [f.zero] * n
            vec[i] = f.one
            radical.append(vec)
    gens = [i for i, p in enumerate(basis) if len(p) <= 1]
    alg = AssocAlgebra(f, n, table, unit, radical=radical, origin="presentation",
                       labels=[str(p) for p in basis], generators=gens, check=False)
    alg.presentation = pres
    alg.paths = list(basis)
    alg.vertex_idempotents = [red.basis_index[pres.quiver.trivial(v)] for v in pres.quiver.vertices]
    alg.nilpotency_index = red.nilpotency
    return alg


def path_vector(pres: Presentation, vec: dict) -> list:
    """Coordinates in the path basis of a {Path: coeff} combination."""
    red = _reducer(pres)
    out = [pres.field.zero] * len(red.basis)
    for k, c in red.normal_form(vec).items():
        out[k] = c
    return out


def connected_components(q: Quiver) -> list[list[str]]:
    """Vertex sets of the connected components of the underlying graph, in declaration order."""
    parent = {v: v for v in q.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in q.arrows:
        ra, rb = find(a.source), find(a.target)
        if ra != rb:
            parent[rb] = ra
    comps: dict[str, list[str]] = {}
    for v in q.vertices:
        comps.setdefault(find(v), []).append(v)
    return sorted(comps.values(), key=lambda c: q.vertices.index(c[0]))
