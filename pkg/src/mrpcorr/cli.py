"""Command-line interface.

Exit codes: 0 success / everything holds, 1 a check failed or a disagreement
was found, 2 usage or input-format error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .correspond import (
    CorrespondError, TermSyntaxError, alba_output, correspondent, ineq_holds, parse_rel_inequality,
)
from .frames import (
    FrameError, GraphFrame, KripkeFrame, PolarityFrame, concept_lattice, dumps_frame, lift, loads_frame,
    shift, validate_frame,
)
from .roughsets import NotPawlak, classify_space, pawlak_check
from .semantics import ValidityCapExceeded, frame_valid
from .syntax import (
    Analytic, MrpError, NotSahlqvist, ParseError, TypeA, classify_mrp, parse_inequality,
)
from .verify import (
    CATALOGUE_MRPS, jsonable_valuation, catalogue, verify_correspondence, verify_lifting, verify_shifting,
)

__all__ = ["main", "build_parser"]

LANG_OF = {"kripke": "KRel", "graph": "GRel", "polarity": "PRel"}
EXTRA_MRPS = ("dia p <= box dia box p",)


class UsageError(Exception):
    """Input that cannot be processed; reported with exit code 2."""


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _classify(text: str):
    s, t = parse_inequality(text)
    return classify_mrp(s, t)


def _sahlqvist(text: str):
    c = _classify(text)
    if isinstance(c, NotSahlqvist):
        raise UsageError(f"not a Sahlqvist modal reduction principle: {text}")
    return c


def _load_frame(path: str):
    try:
        f = loads_frame(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read frame file {path}: {exc.strerror}") from exc
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed frame file {path}: {exc}") from exc
    rep = validate_frame(f)
    if not rep:
        raise UsageError("invalid frame:\n  " + "\n  ".join(rep.problems))
    return f


def _describe_part(part) -> str:
    if isinstance(part, TypeA):
        return (f"type a: phi={part.phi.text()}  alpha={part.alpha.text()}  "
                f"psi={part.psi.text()}  chi={part.chi.string.text()}")
    return (f"type b: phi={part.phi.text()}  zeta={part.zeta.string.text()}  "
            f"psi={part.psi.text()}  delta={part.delta.text()}")


def _write(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    c = _classify(args.mrp)
    if isinstance(c, NotSahlqvist):
        print("not Sahlqvist")
        return 1
    if isinstance(c, Analytic):
        print("analytic")
        print("(a) " + _describe_part(c.a))
        print("(b) " + _describe_part(c.b))
    else:
        print(_describe_part(c))
    return 0


def cmd_alba(args) -> int:
    for p in alba_output(_sahlqvist(args.mrp)):
        print(p.unicode() if args.unicode else p.text())
    return 0


def cmd_correspond(args) -> int:
    c = _sahlqvist(args.mrp)
    for ineq in correspondent(c, LANG_OF[args.semantics], norm=not args.raw):  # type: ignore[arg-type]
        line = ineq.unicode() if args.unicode else ineq.text()
        print(f"({ineq.label}) {line}" if args.labels else line)
    return 0


def cmd_frame_check(args) -> int:
    f = _load_frame(args.frame)
    lang = "KRel" if isinstance(f, KripkeFrame) else "GRel" if isinstance(f, GraphFrame) else "PRel"
    ineq = parse_rel_inequality(args.ineq, lang)  # type: ignore[arg-type]
    ok, pair = ineq_holds(ineq, f)
    if ok:
        print("holds")
        return 0
    assert pair is not None
    print(f"fails, witness ({pair[0]},{pair[1]})")
    return 1


def cmd_frame_validate(args) -> int:
    f = _load_frame(args.frame)
    if isinstance(f, PolarityFrame):
        raise UsageError("sequent validation needs a Kripke or graph-based frame")
    s, t = parse_inequality(args.sequent)
    v = frame_valid(f, s, t, cap=args.cap)
    if v.valid:
        print(f"valid ({v.valuations_checked} valuations)")
        return 0
    print("invalid; countermodel:")
    print(dumps_frame(f, valuation=jsonable_valuation(v.countervaluation)))
    return 1


def cmd_frame_lattice(args) -> int:
    lat = concept_lattice(_load_frame(args.frame))
    if args.dot:
        print(lat.to_dot())
        return 0
    print(f"{len(lat)} concepts")
    for k in range(len(lat)):
        print(lat.label(k))
    return 0


def cmd_frame_shift(args) -> int:
    f = _load_frame(args.frame)
    if not isinstance(f, KripkeFrame):
        raise UsageError("shift needs a Kripke frame")
    _write(dumps_frame(shift(f)), args.out)
    return 0


def cmd_frame_lift(args) -> int:
    f = _load_frame(args.frame)
    if not isinstance(f, GraphFrame):
        raise UsageError("lift needs a graph-based frame")
    _write(dumps_frame(lift(f)), args.out)
    return 0


def cmd_frame_classify(args) -> int:
    f = _load_frame(args.frame)
    if isinstance(f, PolarityFrame):
        raise UsageError("classification needs a Kripke or graph-based frame")
    rep = classify_space(f)
    if args.json:
        print(rep.to_json())
    else:
        for k, v in rep.flags.items():
            w = rep.witnesses.get(k)
            tail = f"  (fails {w[0]} at ({w[1]},{w[2]}))" if w else ""
            print(f"{k}: {'yes' if v else 'no'}{tail}")
    return 0


def cmd_frame_pawlak(args) -> int:
    f = _load_frame(args.frame)
    if not isinstance(f, GraphFrame):
        raise UsageError("the Pawlak check needs a graph-based frame")
    try:
        items = pawlak_check(f, force=args.force)
    except NotPawlak as exc:
        print(str(exc))
        print(exc.report.to_json())
        return 1
    for it in items:
        tail = "" if it.ok else f"  witness {', '.join(it.witness or ())}"
        print(f"{it.number:2d}. {'PASS' if it.ok else 'FAIL'}  {it.statement}{tail}")
    return 0 if all(it.ok for it in items) else 1


def cmd_verify(args) -> int:
    mrps = list(args.mrp) if args.mrp else list(CATALOGUE_MRPS) + list(EXTRA_MRPS)
    for m in mrps:
        _sahlqvist(m)
    reports = []
    for m in mrps:
        kw = {"seed": args.seed}
        if args.samples is not None:
            kw["samples"] = args.samples
        if args.size is not None:
            kw["size"] = args.size
        if args.what == "correspondence":
            r = verify_correspondence(m, args.semantics, jobs=args.jobs, **kw)
        elif args.what == "shifting":
            r = verify_shifting(m, **kw)
        else:
            r = verify_lifting(m, **kw)
        reports.append(r)
        if not args.json:
            print(r.summary())
    if args.json:
        docs = [json.loads(r.to_json(include_timing=args.timing)) for r in reports]
        print(json.dumps(docs if len(docs) > 1 else docs[0], ensure_ascii=False, indent=2, sort_keys=True))
    return 0 if all(r.ok for r in reports) else 1


def cmd_catalogue(args) -> int:
    rows, diffs = catalogue()
    for row in rows:
        print(f"{row['property']}: {row['mrp']}")
        for label in ("a", "b"):
            cells = [f"{lang}: {row[f'{label}:{lang}']}" for lang in LANG_OF.values()]
            if any(not c.endswith(": -") for c in cells):
                print(f"  ({label}) " + " | ".join(cells))
    if diffs:
        print(f"{len(diffs)} mismatches against the golden catalogue:")
        for d in diffs:
            print(f"  {d.property} ({d.row}) {d.lang}: expected {d.expected}, got {d.got}")
        return 1
    print("golden catalogue: 0 mismatches")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mrpcorr",
        description="Sahlqvist modal reduction principles: classification, relational correspondents, "
                    "and brute-force verification on finite frames.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify an mrp as type a, type b, analytic or not Sahlqvist")
    c.add_argument("mrp")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("alba", help="print the pure inequalities produced by the reduction")
    c.add_argument("mrp")
    c.add_argument("--unicode", action="store_true")
    c.set_defaults(func=cmd_alba)

    c = sub.add_parser("correspond", help="print the relational correspondent(s)")
    c.add_argument("mrp")
    c.add_argument("--semantics", choices=sorted(LANG_OF), default="graph")
    c.add_argument("--unicode", action="store_true")
    c.add_argument("--labels", action="store_true", help="prefix each line with its (a)/(b) label")
    c.add_argument("--raw", action="store_true", help="skip display normalization")
    c.set_defaults(func=cmd_correspond)

    fr = sub.add_parser("frame", help="operations on frame files")
    fsub = fr.add_subparsers(dest="frame_command", required=True)
    specs = [
        ("check", cmd_frame_check, "evaluate a relational inequality"),
        ("validate", cmd_frame_validate, "brute-force the validity of a sequent"),
        ("lattice", cmd_frame_lattice, "list the concepts of the complex algebra"),
        ("shift", cmd_frame_shift, "shift a Kripke frame to a graph-based frame"),
        ("lift", cmd_frame_lift, "lift a graph-based frame to a polarity-based frame"),
        ("classify", cmd_frame_classify, "class flags of an approximation space"),
        ("pawlak", cmd_frame_pawlak, "the ten algebraic checks for Pawlak spaces"),
    ]
    for name, func, hlp in specs:
        c = fsub.add_parser(name, help=hlp)
        c.add_argument("--frame", required=True, help="frame JSON file")
        c.set_defaults(func=func)
        if name == "check":
            c.add_argument("--ineq", required=True)
        elif name == "validate":
            c.add_argument("--sequent", required=True)
            c.add_argument("--cap", type=int, default=1_000_000, help="maximum number of valuations")
        elif name == "lattice":
            c.add_argument("--dot", action="store_true")
        elif name in ("shift", "lift"):
            c.add_argument("--out", help="write the frame here instead of stdout")
        elif name == "classify":
            c.add_argument("--json", action="store_true")
        elif name == "pawlak":
            c.add_argument("--force", action="store_true", help="run the checks on non-Pawlak frames too")

    c = sub.add_parser("verify", help="instance-check correspondence, shifting or lifting")
    c.add_argument("what", choices=("correspondence", "shifting", "lifting"))
    c.add_argument("mrp", nargs="*", help="mrps to check (default: the full catalogue)")
    c.add_argument("--semantics", choices=("graph", "kripke"), default="graph")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--size", type=int)
    c.add_argument("--samples", type=int)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--json", action="store_true", help="print the full report(s)")
    c.add_argument("--timing", action="store_true", help="include wall-clock time in JSON reports")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("catalogue", help="regenerate the correspondent catalogue and diff it against the golden copy")
    c.set_defaults(func=cmd_catalogue)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError, MrpError, TermSyntaxError, CorrespondError, FrameError,
            ValidityCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
