"""Combinatorial derived-discreteness criterion on quiver presentations.

A connected presentation is decided derived-discrete when it is hereditary of
Dynkin type, or gentle with exactly one cycle whose clockwise and
counterclockwise relation counts differ.  Gentle one-cycle presentations with
equal counts are not derived-discrete.  Everything else is reported Unknown.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .quiver import Presentation, connected_components

__all__ = [
    "NotApplicable", "CycleInfo", "CycleReport", "ClockResult", "ClassificationVerdict",
    "is_gentle", "cycle_structure", "clock_condition", "dynkin_hereditary_type",
    "classify_derived_discrete", "classify_components", "recheck_verdict",
]

WITH = "with"
AGAINST = "against"


class NotApplicable(ValueError):
    pass


@dataclass
class CycleInfo:
    vertices: list[str]
    betti: int
    cycle: list[tuple[str, str]] | None = None    # (arrow label, with|against)
    walk: list[str] | None = None                 # vertices visited, closing at the start

    def to_json(self) -> dict:
        out = {"vertices": self.vertices, "bettiNumber": self.betti}
        if self.cycle is not None:
            out["cycle"] = [{"arrow": a, "orientation": o} for a, o in self.cycle]
            out["walk"] = self.walk
        return out


@dataclass
class CycleReport:
    components: list[CycleInfo]

    @property
    def betti_numbers(self) -> list[int]:
        return [c.betti for c in self.components]

    def to_json(self) -> dict:
        return {"components": [c.to_json() for c in self.components]}


@dataclass
class ClockResult:
    clockwise: int
    counterclockwise: int
    off_cycle: list[str] = dc_field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.clockwise != self.counterclockwise

    def to_json(self) -> dict:
        return {"clockwise": self.clockwise, "counterclockwise": self.counterclockwise,
                "holds": self.holds, "offCycleRelations": self.off_cycle}


@dataclass
class ClassificationVerdict:
    status: str                 # DerivedDiscrete | NotDerivedDiscrete | Unknown
    reason: str
    dynkin_type: str | None = None
    evidence: dict = dc_field(default_factory=dict)

    @property
    def label(self) -> str:
        if self.status == "Unknown":
            return f"Unknown({self.reason})"
        if self.dynkin_type:
            return f"{self.status}({self.reason}({self.dynkin_type}))"
        return f"{self.status}({self.reason})"

    @property
    def definite(self) -> bool:
        return self.status != "Unknown"

    def to_json(self) -> dict:
        return {"status": self.status, "reason": self.reason, "label": self.label,
                "dynkinType": self.dynkin_type, "evidence": self.evidence}


# ---------------------------------------------------------------------------

def _quadratic_monomials(p: Presentation) -> set[tuple[str, str]]:
    """Pairs (first, second) with ``second*first`` a monomial relation of length 2."""
    out = set()
    for r in p.relations:
        if r.is_monomial and len(r.terms[0][0]) == 2:
            a, b = r.terms[0][0].arrows
            out.add((a, b))
    return out


def is_gentle(p: Presentation) -> tuple[bool, list[str]]:
    violations = []
    q = p.quiver
    for r in p.relations:
        if not r.is_monomial:
            violations.append(f"relation {r} is not a monomial")
        elif len(r.terms[0][0]) != 2:
            violations.append(f"relation {r} does not have length 2")
    for v in q.vertices:
        if len(q.in_arrows(v)) > 2:
            violations.append(f"vertex {v} has {len(q.in_arrows(v))} incoming arrows")
        if len(q.out_arrows(v)) > 2:
            violations.append(f"vertex {v} has {len(q.out_arrows(v))} outgoing arrows")
    zero = _quadratic_monomials(p)
    for b in q.arrows:
        before = q.in_arrows(b.source)
        after = q.out_arrows(b.target)
        z_in = [a.label for a in before if (a.label, b.label) in zero]
        n_in = [a.label for a in before if (a.label, b.label) not in zero]
        z_out = [c.label for c in after if (b.label, c.label) in zero]
        n_out = [c.label for c in after if (b.label, c.label) not in zero]
        if len(z_in) > 1:
            violations.append(f"arrow {b.label} is killed by several predecessors {z_in}")
        if len(n_in) > 1:
            violations.append(f"arrow {b.label} composes nontrivially with several predecessors {n_in}")
        if len(z_out) > 1:
            violations.append(f"arrow {b.label} is killed by several successors {z_out}")
        if len(n_out) > 1:
            violations.append(f"arrow {b.label} composes nontrivially with several successors {n_out}")
    return not violations, violations


def _component_cycle(p: Presentation, comp: list[str], reverse: bool) -> CycleInfo:
    q = p.quiver
    cset = set(comp)
    arrows = [a for a in q.arrows if a.source in cset]
    betti = len(arrows) - len(comp) + 1
    if betti != 1:
        return CycleInfo(list(comp), betti)
    # prune leaves until only the cycle remains
    alive_v = set(comp)
    alive_a = {a.label: a for a in arrows}
    changed = True
    while changed:
        changed = False
        for v in list(alive_v):
            deg = sum((a.source == v) + (a.target == v) for a in alive_a.values())
            if deg <= 1:
                alive_v.discard(v)
                for lab in [lab for lab, a in alive_a.items() if v in (a.source, a.target)]:
                    del alive_a[lab]
                changed = True
    order = [a for a in arrows if a.label in alive_a]
    start = next(v for v in comp if v in alive_v)
    used: set[str] = set()
    walk = [start]
    cycle = []
    cur = start
    while len(used) < len(order):
        a = next(a for a in order if a.label not in used and cur in (a.source, a.target))
        used.add(a.label)
        if a.source == cur:
            cycle.append((a.label, WITH))
            cur = a.target
        else:
            cycle.append((a.label, AGAINST))
            cur = a.source
        walk.append(cur)
    if reverse:
        cycle = [(lab, AGAINST if o == WITH else WITH) for lab, o in reversed(cycle)]
        walk = list(reversed(walk))
    return CycleInfo(list(comp), betti, cycle, walk)


def cycle_structure(p: Presentation, reverse: bool = False) -> CycleReport:
    """Betti number per component; the oriented cycle when it is unique.

    Traversal starts at the first declared cycle vertex along its first
    declared cycle arrow; ``reverse`` walks the same cycle the other way.
    """
    return CycleReport([_component_cycle(p, comp, reverse) for comp in connected_components(p.quiver)])


def clock_condition(p: Presentation, reverse: bool = False) -> ClockResult:
    """Clockwise / counterclockwise relation counts on the unique cycle of a connected
    gentle presentation."""
    comps = connected_components(p.quiver)
    if len(comps) != 1:
        raise NotApplicable("clock condition needs a connected presentation")
    gentle, why = is_gentle(p)
    if not gentle:
        raise NotApplicable("presentation is not gentle: " + "; ".join(why))
    info = _component_cycle(p, comps[0], reverse)
    if info.betti != 1:
        raise NotApplicable(f"Betti number is {info.betti}, not 1")
    orient = dict(info.cycle)
    cw = ccw = 0
    off = []
    for r in p.relations:
        labels = r.terms[0][0].arrows
        if not all(x in orient for x in labels):
            off.append(str(r))
            continue
        kinds = {orient[x] for x in labels}
        if kinds == {WITH}:
            cw += 1
        elif kinds == {AGAINST}:
            ccw += 1
        else:
            off.append(str(r))
    return ClockResult(cw, ccw, off)


def _dynkin_of_tree(vertices: list[str], edges: list[tuple[str, str]]) -> str | None:
    n = len(vertices)
    if len(edges) != n - 1:
        return None
    adj: dict[str, list[str]] = {v: [] for v in vertices}
    for s, t in edges:
        if s == t:
            return None
        adj[s].append(t)
        adj[t].append(s)
    degs = {v: len(adj[v]) for v in vertices}
    if max(degs.values(), default=0) <= 2:
        return f"A{n}"
    branch = [v for v in vertices if degs[v] >= 3]
    if len(branch) != 1 or degs[branch[0]] != 3:
        return None
    centre = branch[0]
    arms = []
    for nb in adj[centre]:
        length, prev, cur = 1, centre, nb
        while degs[cur] == 2:
            nxt = next(x for x in adj[cur] if x != prev)
            prev, cur = cur, nxt
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return f"D{n}"
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return f"E{n}"
    return None


def dynkin_hereditary_type(p: Presentation) -> str | None:
    """Dynkin type of a connected hereditary presentation (no relations), else None."""
    if p.relations:
        return None
    comps = connected_components(p.quiver)
    if len(comps) != 1:
        return None
    edges = [(a.source, a.target) for a in p.quiver.arrows]
    return _dynkin_of_tree(list(p.quiver.vertices), edges)


def _classify_connected(p: Presentation, reverse: bool = False) -> ClassificationVerdict:
    ev: dict = {"vertices": list(p.quiver.vertices), "arrows": len(p.quiver.arrows),
                "relations": [str(r) for r in p.relations]}
    info = _component_cycle(p, list(p.quiver.vertices), reverse)
    ev["bettiNumber"] = info.betti
    dyn = dynkin_hereditary_type(p)
    if dyn is not None:
        return ClassificationVerdict("DerivedDiscrete", "HereditaryDynkin", dyn, ev)
    gentle, why = is_gentle(p)
    ev["gentle"] = gentle
    if not gentle:
        ev["gentleViolations"] = why
        return ClassificationVerdict("Unknown", "non-gentle presentation", evidence=ev)
    if info.betti != 1:
        if not p.relations:
            reason = "hereditary of non-Dynkin type" if info.betti == 0 else f"Betti number {info.betti}"
        else:
            reason = f"Betti number {info.betti}"
        return ClassificationVerdict("Unknown", reason, evidence=ev)
    clock = clock_condition(p, reverse)
    ev["cycle"] = info.to_json()["cycle"]
    ev["walk"] = info.walk
    ev["clock"] = clock.to_json()
    if clock.off_cycle:
        return ClassificationVerdict("Unknown", "relations off-cycle", evidence=ev)
    if clock.holds:
        return ClassificationVerdict("DerivedDiscrete", "GentleOneCycleClock", evidence=ev)
    return ClassificationVerdict("NotDerivedDiscrete", "GentleOneCycleNoClock", evidence=ev)


def classify_components(p: Presentation, reverse: bool = False) -> list[ClassificationVerdict]:
    return [_classify_connected(p.restrict(c), reverse) for c in connected_components(p.quiver)]


def classify_derived_discrete(p: Presentation, reverse: bool = False) -> ClassificationVerdict:
    """Overall verdict; per-component verdicts are kept in the evidence.

    An algebra is derived-discrete iff each block is, so one negative block makes
    the whole negative and one Unknown block (without a negative) makes it Unknown.
    """
    parts = classify_components(p, reverse)
    if len(parts) == 1:
        return parts[0]
    ev = {"components": [v.to_json() for v in parts]}
    if any(v.status == "NotDerivedDiscrete" for v in parts):
        return ClassificationVerdict("NotDerivedDiscrete", "ComponentNotDerivedDiscrete", evidence=ev)
    if any(v.status == "Unknown" for v in parts):
        return ClassificationVerdict("Unknown", "component verdict unknown", evidence=ev)
    return ClassificationVerdict("DerivedDiscrete", "AllComponentsDerivedDiscrete", evidence=ev)


def recheck_verdict(p: Presentation, v: ClassificationVerdict) -> bool:
    """Replay a definite verdict from its evidence alone, against the raw quiver data."""
    if not v.definite:
        return True
    ev = v.evidence
    if "components" in ev:
        parts = [ClassificationVerdict(c["status"], c["reason"], c["dynkinType"], c["evidence"])
                 for c in ev["components"]]
        subs = [p.restrict(c) for c in connected_components(p.quiver)]
        return len(parts) == len(subs) and all(recheck_verdict(s, x) for s, x in zip(subs, parts))
    q = p.quiver
    if ev["bettiNumber"] != len(q.arrows) - len(q.vertices) + 1:
        return False
    if v.reason == "HereditaryDynkin":
        edges = [(a.source, a.target) for a in q.arrows]
        return not p.relations and _dynkin_of_tree(list(q.vertices), edges) == v.dynkin_type
    # replay the cycle: it must be a closed walk using each listed arrow once
    walk = ev["walk"]
    cyc = ev["cycle"]
    if walk[0] != walk[-1] or len(walk) != len(cyc) + 1:
        return False
    orient = {}
    for k, step in enumerate(cyc):
        a = q.arrow(step["arrow"])
        u, w = walk[k], walk[k + 1]
        if step["orientation"] == WITH and (a.source, a.target) != (u, w):
            return False
        if step["orientation"] == AGAINST and (a.target, a.source) != (u, w):
            return False
        orient[a.label] = step["orientation"]
    cw = ccw = 0
    for r in p.relations:
        if len(r.terms) != 1:
            return False
        kinds = {orient.get(x) for x in r.terms[0][0].arrows}
        cw += kinds == {WITH}
        ccw += kinds == {AGAINST}
    holds = cw != ccw
    return (cw, ccw) == (ev["clock"]["clockwise"], ev["clock"]["counterclockwise"]) and \
        holds == (v.status == "DerivedDiscrete")
