"""Command-line front end.

Usage::

    qdisent classify    INPUT            [--tol T] [--format text|structured] [--output PATH]
    qdisent disentangle INPUT [--state L] [--method auto|prop1a|prop1b|prop2] ...
    qdisent verify      INPUT OUTPUT [--state L] ...
    qdisent demo

INPUT is a catalog name (eq3, eq4, eq5, bell, maxent-pair) or a path to a
state-set file; prefix a path with ``file:`` to bypass the catalog lookup.

Exit statuses: 0 success, 1 demo claim mismatch, 2 usage error or unknown
label, 3 I/O error, 4 parse error, 5 invalid state, 6 precondition violated,
7 dimension mismatch.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import catalog, fileformat
from .disentangle import classify, run, verify
from .errors import (
    AmbiguousMatchError,
    DimensionError,
    InvalidStateError,
    NoMatchError,
    ParseError,
    PreconditionViolated,
    UnsupportedDimensionsError,
)
from .linalg import Tolerance
from .report import MISMATCH, Report, demo

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_PARSE = 4
EXIT_INVALID_STATE = 5
EXIT_PRECONDITION = 6
EXIT_DIMENSION = 7

class UsageError(Exception):
    pass


def resolve_input(source: str, tol: Tolerance):
    """Catalog names win over paths unless the argument starts with ``file:``."""
    if source.startswith("file:"):
        return fileformat.load(source[len("file:"):], tol)
    if source in catalog.names():
        return catalog.get(source).set
    return fileformat.load(source, tol)


def _pick(states, label: str | None) -> str:
    if label is None:
        if len(states) != 1:
            raise UsageError(f"{states.name!r} has {len(states)} states; choose one with --state")
        return states.labels[0]
    if label not in states.labels:
        raise UsageError(f"no state labelled {label!r} in {states.name!r}; have {states.labels}")
    return label


def cmd_classify(args, tol) -> Report:
    states = resolve_input(args.input, tol)
    cls = classify(states, tol)
    report = Report("classify", states.name, cls, warnings=list(states.warnings))
    if cls.all_members_separable:
        report.notes.append("all members are already separable; the identity map disentangles them")
    return report


def cmd_disentangle(args, tol) -> Report:
    states = resolve_input(args.input, tol)
    cls = classify(states, tol)
    labels = [_pick(states, args.state)] if args.state is not None else states.labels
    report = Report("disentangle", states.name, cls, warnings=list(states.warnings))
    report.states = [run(states, label, args.method, tol) for label in labels]
    return report


def cmd_verify(args, tol) -> Report:
    src = resolve_input(args.input, tol)
    dst = resolve_input(args.result, tol)
    label = _pick(src, args.state)
    out_label = label if label in dst.labels else _pick(dst, None)
    r = verify(src[label], dst[out_label], tol, label=label)
    return Report("verify", src.name, states=[r], warnings=list(src.warnings) + list(dst.warnings))


def cmd_demo(args, tol) -> Report:
    return demo(tol)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdisent",
        description="Classify bipartite state sets by sufficient disentanglement conditions and run the machines.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9, help="absolute and relative tolerance (default 1e-9)")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--output", help="write the report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="evaluate the sufficient conditions")
    p.add_argument("input")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("disentangle", parents=[common], help="run a machine on set members")
    p.add_argument("input")
    p.add_argument("--state", help="label of the member to disentangle (default: all)")
    p.add_argument("--method", choices=("auto", "prop1a", "prop1b", "prop2"), default="auto")
    p.set_defaults(func=cmd_disentangle)

    p = sub.add_parser("verify", parents=[common], help="check marginals and separability of an output")
    p.add_argument("input")
    p.add_argument("result", metavar="output-state")
    p.add_argument("--state", help="label of the input member")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo", parents=[common], help="check every catalog claim")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        tol = Tolerance.uniform(args.tol)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = args.func(args, tol)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvalidStateError as exc:
        print(f"invalid state: {exc}", file=sys.stderr)
        return EXIT_INVALID_STATE
    except (PreconditionViolated, NoMatchError, AmbiguousMatchError) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (DimensionError, UnsupportedDimensionsError) as exc:
        print(f"dimension error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO

    text = report.to_json() if args.format == "structured" else report.to_text()
    if args.output:
        try:
            Path(args.output).write_text(text)
        except OSError as exc:
            print(f"I/O error: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    if any(c.status == MISMATCH for c in report.claims):
        return EXIT_MISMATCH
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
