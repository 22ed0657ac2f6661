"""Command-line interface: ``quiverext <command> ...``.

Every command prints a short human summary and, with ``--json PATH``, writes a
deterministic JSON report.  Exit codes: 0 success, 2 computation succeeded with
a negative answer, 1 error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path as FsPath

from . import __version__
from .algebra import AlgebraError
from .complexes import (FINITE_FIELD_CAVEAT, ComplexError, Frame, ProjComplex, finiteness_sampler, good_truncate,
                        lemma_bound, lemma_iso_roundtrip, minimal_proj_resolution, module_from_representation,
                        projective_module, simple_module)
from .exactfield import FieldError
from .extensions import (ExtensionError, base_change, classify_algebra, load_group_action, quotient_extension,
                         run_consistency_experiment, skew_group_algebra, trivial_action, verify_separability,
                         verify_split, witness_report, TensorOverA)
from .gentleclass import classify_derived_discrete, clock_condition, cycle_structure, NotApplicable
from .quiver import PresentationError, admissible_check, parse_presentation, path_basis_algebra

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE = 0, 1, 2
KNOWN_ERRORS = (AlgebraError, ComplexError, ExtensionError, FieldError, PresentationError, NotApplicable,
                OSError, json.JSONDecodeError)


class UsageError(ValueError):
    pass


class Session:
    """Collects inputs and report sections for one invocation."""

    def __init__(self, command: str, seed: int, cap: int | None):
        self.command = command
        self.seed = seed
        self.cap = cap
        self.inputs: list[dict] = []
        self.verdicts: dict = {}
        self.certificates: dict = {}
        self.caveats: list[str] = []
        self.lines: list[str] = []

    def read(self, path: str) -> str:
        text = FsPath(path).read_text()
        self.inputs.append({"path": path, "sha256": hashlib.sha256(text.encode()).hexdigest(), "content": text})
        return text

    def presentation(self, path: str):
        pres = parse_presentation(self.read(path), name=FsPath(path).stem)
        if self.cap is not None:
            pres.cap = self.cap
        if pres.field.characteristic:
            self.caveat("finite ground field: outside the infinite-field setting of the derived-discrete "
                        "classification; results are desk-scale evidence")
        return pres

    def algebra(self, path: str):
        pres = self.presentation(path)
        admissible_check(pres)
        return pres, path_basis_algebra(pres)

    def caveat(self, text: str):
        if text not in self.caveats:
            self.caveats.append(text)

    def say(self, line: str):
        self.lines.append(line)

    def report(self) -> dict:
        return {"command": self.command, "inputs": self.inputs, "verdicts": self.verdicts,
                "certificates": self.certificates, "caveats": self.caveats, "seed": self.seed,
                "toolVersion": __version__}


def dump_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# argument helpers

def _parse_vector(text: str) -> dict:
    """``"-1:2,0:4"`` -> {-1: 2, 0: 4}; a JSON object is accepted too."""
    text = text.strip()
    if text.startswith("{"):
        return {int(k): int(v) for k, v in json.loads(text).items()}
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        deg, _, val = part.rpartition(":")
        if not deg:
            raise UsageError(f"expected degree:value pairs, got {part!r}")
        out[int(deg)] = int(val)
    return out


def _extension(s: Session, kind: str, path: str, args):
    pres, alg = s.algebra(path)
    if kind == "base-change":
        if not args.field:
            raise UsageError("base change needs --field 'Q[x]/(f)'")
        phi = base_change(alg, args.field)
        if phi.flags.get("etale"):
            s.caveat("the polynomial is reducible: the extension is an étale algebra, not a field")
    elif kind == "skew":
        if args.action:
            act = load_group_action(s.read(args.action), alg)
        else:
            act = trivial_action(alg, args.trivial_group or 2)
        phi = skew_group_algebra(alg, act)
    elif kind == "quotient":
        if not args.add:
            raise UsageError("quotient needs at least one --add relation")
        phi = quotient_extension(pres, args.add)
    else:
        raise UsageError(f"unknown extension kind {kind!r}")
    return phi


def _extension_from_flags(s: Session, args):
    picked = [(k, getattr(args, k.replace("-", "_"))) for k in ("base-change", "skew", "quotient")]
    picked = [(k, p) for k, p in picked if p]
    if len(picked) != 1:
        raise UsageError("give exactly one of --base-change, --skew, --quotient")
    return _extension(s, picked[0][0], picked[0][1], args)


def _extension_summary(phi) -> dict:
    return {"kind": phi.kind, "dimA": phi.source.dim, "dimB": phi.target.dim,
            "flags": phi.flags, "field": phi.source.field.descriptor}


def _module(s: Session, frame: Frame, alg, spec: str):
    """``simple:v``, ``projective:v`` or a representation JSON file."""
    kind, _, rest = spec.partition(":")
    if kind in ("simple", "projective") and rest:
        v = frame.index(rest)
        return simple_module(frame, v) if kind == "simple" else projective_module(frame, [v])
    data = json.loads(s.read(spec))
    return module_from_representation(alg, {str(k): int(v) for k, v in data["dims"].items()}, data.get("arrows", {}))


# ---------------------------------------------------------------------------
# commands

def cmd_validate(s: Session, args) -> int:
    pres = s.presentation(args.file)
    try:
        v = admissible_check(pres)
    except PresentationError as e:
        s.verdicts["admissible"] = False
        s.verdicts["reason"] = f"{type(e).__name__}: {e}"
        s.say(f"not admissible: {type(e).__name__}: {e}")
        return EXIT_NEGATIVE
    s.verdicts.update({"admissible": True, "dimension": v.dimension, "nilpotencyIndex": v.nilpotency_index,
                       "graded": v.graded, "vertices": len(pres.quiver.vertices),
                       "arrows": len(pres.quiver.arrows), "relations": len(pres.relations)})
    s.say(f"admissible: dim {v.dimension}, radical nilpotency index {v.nilpotency_index}")
    return EXIT_OK


def cmd_classify(s: Session, args) -> int:
    pres = s.presentation(args.file)
    admissible_check(pres)
    verdict = classify_derived_discrete(pres, reverse=args.reverse)
    s.verdicts["classification"] = verdict.to_json()
    try:
        s.verdicts["cycles"] = cycle_structure(pres, args.reverse).to_json()
    except NotApplicable:
        s.verdicts["cycles"] = None
    try:
        clock = clock_condition(pres, args.reverse)
        s.verdicts["clock"] = clock.to_json()
        if clock.off_cycle:
            s.caveat("relations off the cycle: the clock condition does not cover them, verdict kept Unknown")
    except NotApplicable:
        s.verdicts["clock"] = None
    s.say(verdict.label)
    if s.verdicts["clock"]:
        c = s.verdicts["clock"]
        s.say(f"clock counts (clockwise, counterclockwise) = ({c['clockwise']}, {c['counterclockwise']})")
    if pres.field.descriptor != "Q" and not pres.field.characteristic:
        s.caveat("the classification criterion is stated over an algebraically closed field")
    return EXIT_NEGATIVE if verdict.status == "NotDerivedDiscrete" else EXIT_OK


def cmd_extend(s: Session, args) -> int:
    phi = _extension(s, args.kind, args.file, args)
    s.verdicts["extension"] = _extension_summary(phi)
    blocks = classify_algebra(phi.target, s.seed)
    s.verdicts["blocksB"] = [b.to_json() for b in blocks]
    f = phi.source.field
    s.certificates["imageMatrix"] = [[f.to_json(c) for c in row] for row in phi.matrix.rows]
    s.say(f"{phi.kind}: dim A = {phi.source.dim}, dim B = {phi.target.dim}, {len(blocks)} block(s) in B")
    for i, b in enumerate(blocks):
        s.say(f"  block {i}: dim {b.dimension}, multiplicities {b.multiplicities}, {b.verdict.label}")
    return EXIT_OK


def cmd_witness(s: Session, args) -> int:
    phi = _extension_from_flags(s, args)
    f = phi.source.field
    s.verdicts["extension"] = _extension_summary(phi)
    w = witness_report(phi, s.seed, projectivity=args.which in ("projective", "all"))
    data = w.to_json(f)
    s.caveats.extend(n for n in w.notes if n not in s.caveats)
    code = EXIT_OK
    if args.which in ("split", "all"):
        ok = w.split is not None and verify_split(phi, w.split)
        s.verdicts["split"] = w.split is not None
        s.verdicts["splitVerified"] = ok
        s.certificates["splitRetraction"] = data["splitRetraction"]
        s.say("split retraction: " + ("found, re-verified" if ok else "absent"))
        code = code if ok else EXIT_NEGATIVE
    if args.which in ("separable", "all"):
        ok = w.separable is not None and verify_separability(TensorOverA(phi), w.separable.coords)
        s.verdicts["separable"] = w.separable is not None
        s.verdicts["separableVerified"] = ok
        s.certificates["separabilityIdempotent"] = data["separabilityIdempotent"]
        if ok:
            terms = data["separabilityIdempotent"].get("terms", [])
            s.say(f"separability idempotent: found, re-verified ({len(terms)} terms)")
            for t in terms[:12]:
                s.say(f"  {t['coefficient']} ({t['left']}) ⊗ ({t['right']})")
        else:
            s.say("separability idempotent: absent")
        code = code if ok else EXIT_NEGATIVE
    if args.which in ("projective", "all"):
        s.verdicts["rightProjective"] = data["rightProjective"]
        s.verdicts["leftProjective"] = data["leftProjective"]
        rp = None if w.right_projective is None else w.right_projective[0]
        lp = None if w.left_projective is None else w.left_projective[0]
        s.say(f"B projective as right A-module: {rp}; as left A-module: {lp}")
        if rp is False or lp is False:
            code = EXIT_NEGATIVE
        if rp is None or lp is None:
            code = EXIT_ERROR if code == EXIT_OK else code
    return code


def cmd_experiment(s: Session, args) -> int:
    phi = _extension_from_flags(s, args)
    rep = run_consistency_experiment(phi, args.mode, s.seed)
    for c in rep.pop("caveats"):
        s.caveat(c)
    s.certificates["witnesses"] = rep.pop("witnesses")
    s.verdicts.update(rep)
    s.say(f"{args.mode}: {rep['outcome']}")
    for c in rep["checks"]:
        s.say(f"  {c['statement']}: {c['status']}")
    return EXIT_NEGATIVE if rep["outcome"] == "VIOLATION" else EXIT_OK


def _load_complex(s: Session, frame: Frame, path: str) -> ProjComplex:
    return ProjComplex.from_json(json.loads(s.read(path)), frame)


def _complex_summary(c: ProjComplex) -> dict:
    return {"complex": c.to_json(), "componentDims": {str(k): v for k, v in c.component_dims().items()},
            "cohomologyDims": {str(k): v for k, v in c.cohomology_dims().items()}, "minimal": c.is_minimal()}


def cmd_complex(s: Session, args) -> int:
    pres, alg = s.algebra(args.file)
    frame = Frame.of(alg, s.seed)
    action = args.action
    if action == "minimize":
        c = _load_complex(s, frame, args.complex)
        m = c.minimize()
        s.verdicts["input"] = _complex_summary(c)
        s.verdicts["output"] = _complex_summary(m)
        s.say(f"minimized: {m!r}; cohomology {m.cohomology_dims()}")
        return EXIT_OK
    if action == "truncate":
        if args.at is None:
            raise UsageError("truncate needs --at t")
        c = _load_complex(s, frame, args.complex)
        s.verdicts["input"] = _complex_summary(c)
        if args.good:
            mc = good_truncate(c.to_module_complex(), args.at)
            s.verdicts["goodTruncation"] = {
                "termDims": {str(i): m.dim for i, m in sorted(mc.terms.items())},
                "cohomologyDims": {str(k): v for k, v in mc.cohomology_dims().items()}}
            s.say(f"good truncation at {args.at}: cohomology {mc.cohomology_dims()}")
        else:
            t = c.brutal_truncate(args.at)
            s.verdicts["output"] = _complex_summary(t)
            s.say(f"brutal truncation at {args.at}: {t!r}")
        return EXIT_OK
    if action == "resolve":
        if not args.module:
            raise UsageError("resolve needs --module simple:v | projective:v | rep.json")
        m = _module(s, frame, alg, args.module)
        r = minimal_proj_resolution(m, args.depth, frame)
        s.verdicts["resolution"] = _complex_summary(r)
        s.say(f"minimal resolution to depth {args.depth}: {r!r}")
        return EXIT_OK
    if action == "bound":
        if not args.coh:
            raise UsageError("bound needs --coh 'deg:dim,...'")
        n = _parse_vector(args.coh)
        t = args.at if args.at is not None else min(n) - args.depth
        b = lemma_bound(frame, n, t)
        s.verdicts["bound"] = {str(k): v for k, v in b.items()}
        s.verdicts["maxProjectiveDim"] = frame.max_proj_dim()
        s.say(f"bound on [{t}, {max(n)}]: {b}")
        if args.module:
            r = minimal_proj_resolution(_module(s, frame, alg, args.module), max(0, -t), frame)
            dims = r.component_dims()
            ok = all(dims.get(i, 0) <= b.get(i, 0) for i in dims if i >= t)
            s.verdicts["resolutionDims"] = {str(k): v for k, v in dims.items()}
            s.verdicts["withinBound"] = ok
            s.say(f"resolution dims {dims}: " + ("within bound" if ok else "EXCEED the bound"))
            return EXIT_OK if ok else EXIT_NEGATIVE
        return EXIT_OK
    if action == "sample":
        if not args.cdim:
            raise UsageError("sample needs --cdim 'deg:dim,...'")
        res = finiteness_sampler(frame, _parse_vector(args.cdim), args.radical_only, args.budget)
        s.verdicts["sample"] = res.to_json()
        s.caveat(FINITE_FIELD_CAVEAT)
        s.say(f"{res.class_count} isomorphism classes among {res.complexes_enumerated} complexes "
              f"({res.candidates} candidates)")
        return EXIT_OK
    if action == "roundtrip":
        if not (args.module and args.other) or args.at is None:
            raise UsageError("roundtrip needs --module, --other and --at t")
        x = _module(s, frame, alg, args.module)
        y = _module(s, frame, alg, args.other)
        res = lemma_iso_roundtrip(x, y, args.at, frame, s.seed, args.budget)
        s.verdicts["roundtrip"] = res.to_json()
        if not res.exact:
            s.caveat("over an infinite field the chain-map search is one-sided: failure means not shown equivalent")
        s.say(f"truncations equivalent: {res.truncations_equivalent}; modules isomorphic: "
              f"{res.modules_isomorphic}; consistent: {res.consistent}")
        return EXIT_OK if res.consistent else EXIT_NEGATIVE
    raise UsageError(f"unknown complex action {action!r}")


# ---------------------------------------------------------------------------
# parser

def _add_extension_flags(p):
    p.add_argument("--base-change", metavar="FILE", help="presentation to extend by scalars")
    p.add_argument("--skew", metavar="FILE", help="presentation for a skew group algebra")
    p.add_argument("--quotient", metavar="FILE", help="presentation to quotient")
    _add_extension_params(p)


def _add_extension_params(p):
    p.add_argument("--field", help="extension field descriptor, e.g. 'Q[x]/(x^2-2)'")
    p.add_argument("--action", metavar="JSON", help="group action file")
    p.add_argument("--trivial-group", type=int, metavar="N", help="cyclic group of order N acting trivially")
    p.add_argument("--add", action="append", metavar="REL", help="extra relation (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    def common_flags(suppress: bool) -> argparse.ArgumentParser:
        # subcommand copies must not overwrite values given before the subcommand
        flags = argparse.ArgumentParser(add_help=False)
        flags.add_argument("--json", metavar="PATH", help="write the JSON report here",
                           **({"default": argparse.SUPPRESS} if suppress else {}))
        flags.add_argument("--seed", type=int, default=argparse.SUPPRESS if suppress else 0,
                           help="seed for all randomized steps (default 0)")
        flags.add_argument("--cap", type=int, help="nilpotency/degree cap for presentations",
                           **({"default": argparse.SUPPRESS} if suppress else {}))
        return flags

    common = common_flags(True)
    parser = argparse.ArgumentParser(prog="quiverext", description="Exact computations with quiver algebras, "
                                     "extensions and derived-discreteness checks.", parents=[common_flags(False)])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="parse and check admissibility")
    p.add_argument("file")
    p = sub.add_parser("classify", parents=[common], help="derived-discrete classification")
    p.add_argument("file")
    p.add_argument("--reverse", action="store_true", help="traverse the cycle the other way")

    p = sub.add_parser("extend", parents=[common], help="build an extension A -> B")
    p.add_argument("kind", choices=["base-change", "skew", "quotient"])
    p.add_argument("file")
    _add_extension_params(p)

    p = sub.add_parser("witness", parents=[common], help="split / separability / projectivity witnesses")
    p.add_argument("which", choices=["split", "separable", "projective", "all"])
    _add_extension_flags(p)

    p = sub.add_parser("experiment", parents=[common], help="consistency experiments on an extension")
    p.add_argument("mode", choices=["theorem41", "prop51", "prop53"])
    _add_extension_flags(p)

    p = sub.add_parser("complex", parents=[common], help="complexes of projectives")
    p.add_argument("action", choices=["minimize", "truncate", "resolve", "bound", "sample", "roundtrip"])
    p.add_argument("file", help="presentation of the algebra")
    p.add_argument("--complex", metavar="JSON", help="complex literal")
    p.add_argument("--at", type=int, help="truncation degree")
    p.add_argument("--good", action="store_true", help="good instead of brutal truncation")
    p.add_argument("--module", help="simple:v, projective:v or a representation JSON file")
    p.add_argument("--other", help="second module for roundtrip")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--coh", help="cohomology dimension vector, e.g. --coh=0:1 (use '=' before negative degrees)")
    p.add_argument("--cdim", help="component dimension vector, e.g. --cdim=-1:2,0:4")
    p.add_argument("--radical-only", action="store_true")
    p.add_argument("--budget", type=int, default=2 ** 24)
    return parser


COMMANDS = {"validate": cmd_validate, "classify": cmd_classify, "extend": cmd_extend, "witness": cmd_witness,
            "experiment": cmd_experiment, "complex": cmd_complex}


def run(argv: list[str] | None = None, out=None) -> tuple[int, dict]:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return (EXIT_OK if not e.code else EXIT_ERROR), {}
    sub = getattr(args, "kind", None) or getattr(args, "which", None) or getattr(args, "mode", None) \
        or getattr(args, "action", None)
    name = args.command + (f" {sub}" if sub else "")
    s = Session(name, args.seed, args.cap)
    try:
        code = COMMANDS[args.command](s, args)
    except UsageError as e:
        s.verdicts["error"] = {"type": "UsageError", "message": str(e)}
        s.say(f"usage error: {e}")
        code = EXIT_ERROR
    except KNOWN_ERRORS as e:
        s.verdicts["error"] = {"type": type(e).__name__, "message": str(e)}
        s.say(f"error: {type(e).__name__}: {e}")
        code = EXIT_ERROR
    rep = s.report()
    for line in s.lines:
        print(line, file=out)
    if args.json:
        FsPath(args.json).write_text(dump_report(rep))
    return code, rep


def main(argv: list[str] | None = None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
