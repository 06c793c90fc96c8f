"""Command-line front end.

Exit codes: 0 everything checked passed, 1 an axiom, property or hypothesis
failed, 2 the input or the command line could not be parsed, 3 a file could
not be read or written.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from combprob import __version__
from combprob.bridges import (
    ConventionalMeasure,
    ExtendedMeasure,
    check_extended_axioms,
    check_kolmogorov,
    combined_to_extended,
    conventional_to_combined,
    extended_to_combined,
    restrict_positive,
)
from combprob.document import DocumentError, MeasureDocument, event_from_spec, parse_document
from combprob.errors import ConstructionError, EventNotInFamilyError, HypothesisError, NotDigitalizedError
from combprob.events import Event
from combprob.measure import (
    CombinedMeasure,
    classify_normalization,
    evaluate,
    is_complete,
    Completeness,
    elementary_classes,
    validate_axioms,
)
from combprob.oracle import check_catalog, default_sweep
from combprob.rational import parse_rational
from combprob.report import ClauseResult, Status, ValidationReport, Witness
from combprob.structures import is_set_algebra

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


# -- output ---------------------------------------------------------------------------


class Output:
    def __init__(self, args, command: str, digest: str | None):
        self.machine = args.format == "machine"
        self.report: dict = {"tool": "combprob", "version": __version__, "command": command}
        if digest is not None:
            self.report["input"] = {"sha256": digest}
        self.lines: list[str] = []

    def say(self, line: str = "") -> None:
        self.lines.append(line)

    def finish(self, code: int) -> int:
        self.report["exit_code"] = code
        if self.machine:
            sys.stdout.write(json.dumps(self.report, indent=2, ensure_ascii=False) + "\n")
        elif self.lines:
            sys.stdout.write("\n".join(self.lines) + "\n")
        return code


def _read(path: str) -> tuple[str, str]:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise DocumentError(f"{path} is not UTF-8 text") from None
    return text, hashlib.sha256(data).hexdigest()


def _load(path: str, max_atoms: int):
    text, digest = _read(path)
    doc = parse_document(text)
    if len(doc.atoms) > max_atoms:
        raise UsageError(f"{len(doc.atoms)} atoms exceeds --max-atoms {max_atoms}")
    return doc, digest


def _construction_report(exc: ConstructionError) -> ValidationReport:
    events = (("A", exc.event),) if isinstance(exc.event, Event) else ()
    w = Witness(exc.axiom, events, note=str(exc))
    return ValidationReport([ClauseResult(exc.axiom, Status.FAIL, w, str(exc), 1)])


def _build(doc: MeasureDocument):
    """The measure, or the report of the axiom that made it unbuildable."""
    try:
        return doc.build(), None
    except ConstructionError as exc:
        return None, _construction_report(exc)


def _axioms(m) -> ValidationReport:
    if isinstance(m, CombinedMeasure):
        return validate_axioms(m)
    if isinstance(m, ExtendedMeasure):
        return check_extended_axioms(m)
    report = check_kolmogorov(m)
    alg = is_set_algebra(m.family, unit=m.universe)
    w = None
    if not alg and alg.witness is not None:
        f = alg.witness
        w = Witness("algebra", (("A", f.left), ("B", f.right)), note=str(f))
    report.checks.append(ClauseResult("algebra", Status.PASS if alg else Status.FAIL, w,
                                      f"family is a set algebra with unit {m.universe}",
                                      0 if alg else 1))
    return report


def _emit_report(out: Output, report: ValidationReport) -> None:
    out.report["ok"] = report.ok
    out.report["results"] = [c.to_dict() for c in report]
    out.say(report.render())
    failures = report.failures()
    out.say("OK" if not failures else f"FAILED: {', '.join(c.clause for c in failures)}")


# -- commands ------------------------------------------------------------------------


def cmd_validate(args) -> int:
    doc, digest = _load(args.file, args.max_atoms)
    out = Output(args, "validate", digest)
    out.report["kind"] = doc.kind
    m, report = _build(doc)
    if m is not None:
        report = _axioms(m)
    _emit_report(out, report)
    return out.finish(EXIT_OK if report.ok else EXIT_FAIL)


def cmd_eval(args) -> int:
    doc, digest = _load(args.file, args.max_atoms)
    out = Output(args, "eval", digest)
    m, report = _build(doc)
    if m is None:
        _emit_report(out, report)
        return out.finish(EXIT_FAIL)
    try:
        ev = event_from_spec(m.space, args.event)
    except DocumentError as exc:
        raise UsageError(str(exc)) from None
    out.report["event"] = str(ev)
    try:
        if isinstance(m, CombinedMeasure):
            value = evaluate(m, ev)
        else:
            value = m.prob(ev)
    except (EventNotInFamilyError, KeyError):
        out.report["error"] = f"event {ev} is not in the family"
        print(f"error: event {ev} is not in the family", file=sys.stderr)
        return out.finish(EXIT_FAIL)
    out.report["value"] = str(value)
    out.say(str(value))
    return out.finish(EXIT_OK)


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def cmd_classify(args) -> int:
    doc, digest = _load(args.file, args.max_atoms)
    out = Output(args, "classify", digest)
    m, report = _build(doc)
    if m is not None and not isinstance(m, CombinedMeasure):
        raise UsageError(f"classify takes a combined measure, not a {doc.kind} one")
    if m is not None:
        report = validate_axioms(m)
    if not report.ok:
        out.say("refusing to classify a measure that fails the axioms")
        _emit_report(out, report)
        return out.finish(EXIT_FAIL)
    norm = classify_normalization(m)
    try:
        comp = is_complete(m)
    except NotDigitalizedError:
        comp = Completeness(False, False, None, None)
    pos, neg, zero = elementary_classes(m)
    info = {
        "digitalized": m.is_digitalized,
        "positively_normalized": norm.positively_normalized,
        "positive_witness": str(norm.positive_witness) if norm.positive_witness is not None else None,
        "negatively_normalized": norm.negatively_normalized,
        "negative_witness": str(norm.negative_witness) if norm.negative_witness is not None else None,
        "positively_complete": comp.positively_complete,
        "positive_mass": None if comp.positive_mass is None else str(comp.positive_mass),
        "negatively_complete": comp.negatively_complete,
        "negative_mass": None if comp.negative_mass is None else str(comp.negative_mass),
        "omega_+p": len(pos), "omega_-p": len(neg), "omega_0p": len(zero),
    }
    out.report["ok"] = True
    out.report["classification"] = info

    def mass(v):
        return "undefined" if v is None else v

    out.say(f"digitalized: {_yes(m.is_digitalized)}")
    out.say(f"positively normalized: {_yes(norm.positively_normalized)}"
            + (f" (witness {norm.positive_witness})" if norm.positive_witness is not None else ""))
    out.say(f"negatively normalized: {_yes(norm.negatively_normalized)}"
            + (f" (witness {norm.negative_witness})" if norm.negative_witness is not None else ""))
    out.say(f"positively complete: {_yes(comp.positively_complete)} (p(Omega_+p) = {mass(comp.positive_mass)})")
    out.say(f"negatively complete: {_yes(comp.negatively_complete)} (p(Omega_-p) = {mass(comp.negative_mass)})")
    out.say(f"|Omega_+p| = {len(pos)}, |Omega_-p| = {len(neg)}, |Omega_0p| = {len(zero)}")
    return out.finish(EXIT_OK)


def _convert(m, target: str):
    if target == "combined":
        if isinstance(m, ExtendedMeasure):
            return extended_to_combined(m)
        if isinstance(m, ConventionalMeasure):
            return conventional_to_combined(m)
        return m
    if isinstance(m, ExtendedMeasure):
        combined = extended_to_combined(m)
    elif isinstance(m, ConventionalMeasure):
        combined = conventional_to_combined(m)
    else:
        combined = m
    if target == "extended":
        return m if isinstance(m, ExtendedMeasure) else combined_to_extended(combined)
    return m if isinstance(m, ConventionalMeasure) else restrict_positive(combined)


def cmd_convert(args) -> int:
    doc, digest = _load(args.file, args.max_atoms)
    out = Output(args, "convert", digest)
    out.report["source"] = doc.kind
    out.report["target"] = args.target
    m, report = _build(doc)
    if m is None:
        _emit_report(out, report)
        return out.finish(EXIT_FAIL)
    try:
        result = _convert(m, args.target)
    except (HypothesisError, NotDigitalizedError) as exc:
        hypothesis = getattr(exc, "hypothesis", "digitalized")
        axiom = getattr(exc, "axiom", None)
        witness = getattr(exc, "witness", None)
        failure = {"hypothesis": hypothesis, "reason": getattr(exc, "reason", "not-digitalized"),
                   "message": str(exc)}
        if axiom:
            failure["axiom"] = axiom
        if witness is not None:
            failure["witness"] = witness.to_dict()
        out.report["ok"] = False
        out.report["failure"] = failure
        out.say(f"conversion to {args.target} failed: {exc}")
        out.say(f"violated hypothesis: {hypothesis}" + (f" (target axiom {axiom})" if axiom else ""))
        if witness is not None:
            out.say(f"witness: {witness.describe()}")
        return out.finish(EXIT_FAIL)
    check = _axioms(result)
    new_doc = MeasureDocument.from_measure(result)
    out.report["ok"] = check.ok
    out.report["target_axioms"] = [c.to_dict() for c in check]
    out.report["document"] = json.loads(new_doc.to_json())
    if args.output:
        path = Path(args.output)
        body = new_doc.to_json() if path.suffix == ".json" else new_doc.to_text()
        try:
            path.write_text(body, encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
        out.say(f"wrote {new_doc.kind} measure to {path}")
    else:
        out.say(new_doc.to_text().rstrip("\n"))
    if not check.ok:
        out.say(f"converted measure fails {', '.join(c.clause for c in check.failures())}")
    return out.finish(EXIT_OK if check.ok else EXIT_FAIL)


def _parse_grid(text: str):
    try:
        return [parse_rational(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise UsageError(f"bad grid: {exc}") from None


def cmd_check(args) -> int:
    if args.sweep is not None:
        if args.file:
            raise UsageError("give either a file or --sweep, not both")
        n_text, grid_text = args.sweep
        try:
            n = int(n_text)
        except ValueError:
            raise UsageError(f"sweep size must be an integer, got {n_text!r}") from None
        if not 1 <= n <= args.max_atoms:
            raise UsageError(f"sweep size must be between 1 and --max-atoms {args.max_atoms}")
        grid = _parse_grid(grid_text)
        try:
            summary = default_sweep(n, grid, jobs=args.jobs)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        out = Output(args, "check", None)
        out.report["sweep"] = {"atoms": n, "grid": [str(g) for g in sorted(set(grid))]}
        out.report["ok"] = summary.ok
        out.report["summary"] = summary.to_dict()
        out.say(f"sweep over 1..{n} atoms, grid {', '.join(str(g) for g in sorted(set(grid)))}")
        out.say(f"candidates: {summary.candidates}, valid: {summary.valid}, "
                f"rejected by construction: {summary.rejected}")
        out.say(f"measures passing every checked clause: {summary.passed}")
        out.say(f"failures: {len(summary.failures)}")
        for f in summary.failures:
            assignment = ", ".join(f"{k} = {v}" for k, v in f.assignment.items())
            out.say(f"  [{assignment}] {f.result.clause}: "
                    + (f.result.witness.describe() if f.result.witness else f.result.detail))
        for clause, count in sorted(summary.flagged.items()):
            out.say(f"flagged {clause}: {count} measures")
        return out.finish(EXIT_OK if summary.ok else EXIT_FAIL)
    if not args.file:
        raise UsageError("check needs a measure file or --sweep N GRID")
    doc, digest = _load(args.file, args.max_atoms)
    out = Output(args, "check", digest)
    m, report = _build(doc)
    if m is not None and not isinstance(m, CombinedMeasure):
        raise UsageError(f"check takes a combined measure, not a {doc.kind} one")
    if m is not None:
        report = check_catalog(m)
    _emit_report(out, report)
    flagged = report.flagged()
    if flagged:
        out.say(f"flagged (not counted): {', '.join(c.clause for c in flagged)}")
    return out.finish(EXIT_OK if report.ok else EXIT_FAIL)


# -- entry point ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "machine"), default="text",
                        help="text for people, machine for a JSON report")
    common.add_argument("--max-atoms", type=int, default=6, metavar="N",
                        help="refuse spaces with more than N positive atoms (default 6)")

    parser = _Parser(prog="combprob", description="Exact combined probability on finite symmetric spaces.")
    parser.add_argument("--version", action="version", version=f"combprob {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", parents=[common], help="check the axioms of a measure file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("eval", parents=[common], help="value of one event")
    p.add_argument("file")
    p.add_argument("event", help='comma-separated signed labels, e.g. "w,-v"; "" is the empty event')
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("classify", parents=[common], help="normalization and completeness")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("convert", parents=[common], help="convert between probability systems")
    p.add_argument("file")
    p.add_argument("--target", required=True, choices=("extended", "conventional", "combined"))
    p.add_argument("-o", "--output", help="write the converted document here (.json selects JSON)")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("check", parents=[common], help="run the property catalog")
    p.add_argument("file", nargs="?")
    p.add_argument("--sweep", nargs=2, metavar=("N", "GRID"),
                   help='sweep all digitalized measures on 1..N atoms with values from GRID, e.g. "-1/4,0,1/4"')
    p.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    p.set_defaults(func=cmd_check)
    return parser


_SHORT_FLAGS = ("-h", "-o")


def _protect_negatives(argv: list[str]) -> list[str]:
    """Let values such as ``-w`` or ``-1/4,0,1/4`` through argparse.

    A leading ASCII minus that does not start a known option becomes U+2212,
    which the event and rational parsers read as a sign.
    """
    out = []
    for tok in argv:
        if (len(tok) > 1 and tok[0] == "-" and tok[1] != "-"
                and tok not in _SHORT_FLAGS and not tok.startswith("-o")):
            tok = "\u2212" + tok[1:]
        out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_protect_negatives(sys.argv[1:] if argv is None else list(argv)))
    if args.max_atoms < 1:
        parser.error("--max-atoms must be positive")
    try:
        return args.func(args)
    except (DocumentError, UsageError) as exc:
        print(f"combprob {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"combprob {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
