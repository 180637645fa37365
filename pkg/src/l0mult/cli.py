"""Command-line front end.

Subcommands mirror the independently testable stages: analyze (full
pipeline), enumerate, classify, family, boundedness, spark, check.

Exit codes: 0 success, 1 usage error, 2 parse or dimension error,
3 work cap exceeded, 4 no solution within the cardinality cap.
Reports are deterministic; the reserved --seed flag is accepted and
ignored because the pipeline has no random choices.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .conditions import (ALL_LABELS, build_context, check_mstar, check_necessary,
                         check_boundedness, classify_multiplicity, spark)
from .enumerator import enumerate_sparsest
from .errors import (DimensionError, InvalidDirection, NoSolutionWithinCap,
                     ParseError, WorkCapExceeded)
from .families import build_family, sample_and_verify
from .model import (ProblemInstance, is_feasible, make_record, parse_instance,
                    parse_point)
from . import report as rpt

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_WORKCAP = 3
EXIT_NOSOLUTION = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="l0mult",
                     description="Exact analyzer for constrained l0-minimization")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, samples=False):
        p.add_argument("--input", required=True, help="instance JSON path")
        p.add_argument("--output", default=None, help="report path (default stdout)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--kcap", type=int, default=None,
                       help="largest support size to try (default n)")
        p.add_argument("--max-supports", type=int, default=10 ** 6)
        p.add_argument("--max-active-subsets", type=int, default=10 ** 6)
        p.add_argument("--seed", type=int, default=None,
                       help="reserved; the pipeline is deterministic")
        if samples:
            p.add_argument("--samples", type=int, default=5,
                           help="family members verified per family")

    common(sub.add_parser("analyze", help="full pipeline report"), samples=True)
    common(sub.add_parser("enumerate", help="sparsest supports and witnesses"))
    p = sub.add_parser("classify", help="multiplicity conditions of one point")
    common(p)
    p.add_argument("--point", required=True, help="comma-separated exact point")
    p = sub.add_parser("family", help="lambda interval for one point and condition")
    common(p, samples=True)
    p.add_argument("--point", required=True)
    p.add_argument("--condition", required=True, choices=ALL_LABELS)
    p.add_argument("--direction", default=None,
                   help="comma-separated exact direction (default: classifier witness)")
    common(sub.add_parser("boundedness", help="E1/E2/E3 and spark"))
    common(sub.add_parser("spark", help="spark of A"))
    p = sub.add_parser("check", help="feasibility of one point")
    common(p)
    p.add_argument("--point", required=True)
    return parser


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_instance(args) -> ProblemInstance:
    with open(args.input, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


def _point_record(inst, args):
    x = parse_point(args.point, inst.n)
    if not is_feasible(inst, x):
        return x, None
    return x, make_record(inst, x)


def _sparsest_context(inst, args, rec):
    enum = enumerate_sparsest(inst, kcap=args.kcap, max_supports=args.max_supports,
                              max_active_subsets=args.max_active_subsets)
    if len(rec.support) != enum.kstar:
        print(f"point has {len(rec.support)} nonzeros but kstar = {enum.kstar}; "
              "not a sparsest solution", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    return enum, build_context(inst, rec)


def _run(args) -> int:
    inst = _load_instance(args)

    if args.command == "analyze":
        doc = rpt.analyze(inst, kcap=args.kcap, samples=args.samples,
                          max_supports=args.max_supports,
                          max_active_subsets=args.max_active_subsets)
        _emit(args, rpt.render_json(doc) if args.format == "json"
              else rpt.render_text(doc))
        return EXIT_OK

    if args.command == "enumerate":
        enum = enumerate_sparsest(inst, kcap=args.kcap,
                                  max_supports=args.max_supports,
                                  max_active_subsets=args.max_active_subsets)
        doc = rpt.enumeration_json(enum)
        if args.format == "json":
            _emit(args, json.dumps(doc, indent=2) + "\n")
        else:
            lines = [f"kstar = {doc['kstar']}"]
            for rec in doc["witnesses"]:
                lines.append(f"support {{{','.join(map(str, rec['support']))}}}: "
                             f"x = ({', '.join(rec['x']['exact'])})")
            lines.append(f"max active cardinality = {doc['max_active_cardinality']}")
            if "empirical_gamma" in doc:
                lines.append(f"empirical gamma (EMPIRICAL) = "
                             f"{doc['empirical_gamma']['exact']}")
            _emit(args, "\n".join(lines) + "\n")
        return EXIT_OK

    if args.command == "classify":
        x, rec = _point_record(inst, args)
        if rec is None:
            print("point is not feasible", file=sys.stderr)
            return EXIT_USAGE
        enum, ctx = _sparsest_context(inst, args, rec)
        rep = classify_multiplicity(ctx, enum)
        holds, violation = check_necessary(ctx)
        doc = {
            "point": rpt.record_json(rec),
            "necessary_condition": {"holds": holds},
            "mstar_full_rank": check_mstar(ctx),
            "case": rep.case,
            "conditions": rpt.multiplicity_json(rep),
        }
        if args.format == "json":
            _emit(args, json.dumps(doc, indent=2) + "\n")
        else:
            lines = [f"point ({', '.join(doc['point']['x']['exact'])}): case {rep.case}"]
            for label in ALL_LABELS:
                cond = doc["conditions"][label]
                line = f"{label}: {cond['status']}"
                if "directions" in cond:
                    line += "  direction " + ", ".join(
                        "(" + ", ".join(d["exact"]) + ")" for d in cond["directions"])
                lines.append(line)
            _emit(args, "\n".join(lines) + "\n")
        return EXIT_OK

    if args.command == "family":
        x, rec = _point_record(inst, args)
        if rec is None:
            print("point is not feasible", file=sys.stderr)
            return EXIT_USAGE
        enum, ctx = _sparsest_context(inst, args, rec)
        if args.direction is not None:
            direction = parse_point(args.direction, inst.n)
        else:
            rep = classify_multiplicity(ctx, enum)
            finding = rep.findings[args.condition]
            if finding.status != "holds" or not finding.directions:
                print(f"{args.condition} does not hold for this point; "
                      "pass --direction to force a construction", file=sys.stderr)
                return EXIT_USAGE
            direction = finding.directions[0]
        try:
            fam = build_family(ctx, args.condition, direction)
        except InvalidDirection as exc:
            print(f"invalid direction: {exc}", file=sys.stderr)
            return EXIT_USAGE
        samples = sample_and_verify(inst, fam, args.samples)
        doc = rpt.family_json(fam, samples)
        if args.format == "json":
            _emit(args, json.dumps(doc, indent=2) + "\n")
        else:
            iv = doc["interval"]
            lines = [
                f"condition {doc['condition']}: family x + lambda*d",
                f"d = ({', '.join(doc['direction']['exact'])})",
                f"lambda in {rpt._fmt_interval(iv)}",
                f"verified {doc['sample_count']} sampled members exactly",
            ]
            _emit(args, "\n".join(lines) + "\n")
        return EXIT_OK

    if args.command == "boundedness":
        enum = enumerate_sparsest(inst, kcap=args.kcap,
                                  max_supports=args.max_supports,
                                  max_active_subsets=args.max_active_subsets)
        bd = check_boundedness(inst, enum.kstar, enum.empirical_gamma,
                               max_subsets=args.max_supports)
        doc = rpt.boundedness_json(bd)
        if args.format == "json":
            _emit(args, json.dumps(doc, indent=2) + "\n")
        else:
            _emit(args, f"kstar = {enum.kstar}\nE1 = {bd.E1}\nE2 = {bd.E2}\n"
                        f"E3 = {bd.E3}\nspark = {bd.spark}\n"
                        f"verdict: {doc['verdict']}\n")
        return EXIT_OK

    if args.command == "spark":
        value = spark(inst.A)
        if args.format == "json":
            _emit(args, json.dumps({"spark": value}) + "\n")
        else:
            _emit(args, f"{value}\n")
        return EXIT_OK

    if args.command == "check":
        x = parse_point(args.point, inst.n)
        if is_feasible(inst, x):
            rec = make_record(inst, x)
            doc = {"feasible": True, **rpt.record_json(rec)}
            if args.format == "json":
                _emit(args, json.dumps(doc, indent=2) + "\n")
            else:
                _emit(args, f"feasible, support {{{','.join(map(str, doc['support']))}}}, "
                            f"active {{{','.join(map(str, doc['active_set']))}}}\n")
        else:
            if args.format == "json":
                _emit(args, json.dumps({"feasible": False}, indent=2) + "\n")
            else:
                _emit(args, "infeasible\n")
        return EXIT_OK

    raise AssertionError(f"unhandled command {args.command}")


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return _run(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ParseError, DimensionError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except WorkCapExceeded as exc:
        print(f"work cap exceeded: {exc}", file=sys.stderr)
        return EXIT_WORKCAP
    except NoSolutionWithinCap as exc:
        print(f"no solution: {exc}", file=sys.stderr)
        return EXIT_NOSOLUTION


if __name__ == "__main__":
    sys.exit(main())
