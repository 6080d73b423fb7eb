"""Command-line front end: ``hyperharm eval|table|verify|degeneracy``.

File arguments take a path or inline JSON (anything starting with ``{`` or
``[``).  Exit codes: 0 success, 1 a verification check failed, 2 bad input.
"""
import argparse
import csv
import json
import sys
from pathlib import Path

from . import documents as docs
from .catalog import FAMILIES, family
from .quadrature import build_grid
from .trees import RANK_CAP, TreeBasis, TreeError, check_point
from .verification import SUITES, run_suite

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read_json(arg, what):
    text = arg if arg.lstrip()[:1] in ("{", "[") else None
    if text is None:
        try:
            text = Path(arg).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {what} file {arg!r}: {exc.strerror}") from None
    return docs.loads(text, what)


def _num(x):
    # shortest repr that round-trips; folds -0.0 into 0.0
    return repr(float(x) + 0.0)


class _Target:
    """A tree basis or a catalog family, with document parsing for its indices."""

    def __init__(self, args):
        if bool(args.tree) == bool(args.catalog):
            raise InputError("give exactly one of --tree and --catalog")
        if args.tree:
            self.basis = TreeBasis(docs.tree_from_doc(_read_json(args.tree, "tree")))
            self.family = None
        else:
            try:
                self.family = family(args.catalog)
            except ValueError as exc:
                raise InputError(str(exc)) from None
            self.basis = self.family
        self.tree = self.basis.tree

    def parse_index(self, doc):
        if self.family is None:
            return docs.index_from_doc(self.tree, doc)
        fields = self.family.fields
        if isinstance(doc, dict):
            if sorted(doc) != sorted(fields):
                raise TreeError(f"{self.family.name} index needs keys {', '.join(fields)}")
            doc = [doc[f] for f in fields]
        if not isinstance(doc, list) or len(doc) != len(fields):
            raise TreeError(f"{self.family.name} index is a list of {len(fields)} integers ({', '.join(fields)})")
        for f, v in zip(fields, doc):
            if isinstance(v, bool) or not isinstance(v, int):
                raise TreeError(f"{f} must be an integer, got {v!r}")
        index = tuple(doc)
        if self.family.rank(index) > RANK_CAP:
            raise TreeError(f"rank exceeds the cap {RANK_CAP}")
        return index

    def index_columns(self, index):
        if self.family is None:
            return docs.flatten(docs.index_to_doc(index))
        return list(zip(self.family.fields, index))

    def evaluate(self, index, point):
        try:
            return self.basis.evaluate(index, point)
        except TreeError:
            raise
        except ValueError as exc:
            raise InputError(str(exc)) from None


def cmd_eval(args, out):
    target = _Target(args)
    index = target.parse_index(_read_json(args.index, "index"))
    point = docs.point_from_doc(target.tree, _read_json(args.point, "point"))
    value = complex(target.evaluate(index, point))
    out.write(f"{_num(value.real)} {_num(value.imag)}\n")
    return EXIT_OK


def _table_points(args, tree):
    if args.points:
        doc = _read_json(args.points, "points")
        if not isinstance(doc, list) or not doc:
            raise InputError("points file must hold a non-empty JSON list of point documents")
        return [docs.point_from_doc(tree, p, f"points[{k}]") for k, p in enumerate(doc)]
    if args.order is None:
        raise InputError("table needs --points FILE or --order N")
    return [p for p, _ in build_grid(tree, args.order).nodes()]


def _check_jmax(jmax):
    if jmax is None:
        raise InputError("--jmax is required")
    if not 0 <= jmax <= RANK_CAP:
        raise InputError(f"--jmax must lie in [0, {RANK_CAP}], got {jmax}")
    return jmax


def cmd_table(args, out):
    target = _Target(args)
    jmax = _check_jmax(args.jmax)
    points = _table_points(args, target.tree)
    for p in points:
        check_point(target.tree, p)
    indices = [i for J in range(jmax + 1) for i in target.basis.indices(J)]
    rows = []
    for index in indices:
        idx_cols = target.index_columns(index)
        for p in points:
            value = complex(target.evaluate(index, p))
            rows.append((idx_cols, docs.flatten(docs.point_to_doc(p)), value))
    expected = sum(len(target.basis.indices(J)) for J in range(jmax + 1)) * len(points)
    if len(rows) != expected:
        raise RuntimeError(f"table has {len(rows)} rows, expected {expected}")
    if args.format == "json":
        records = [
            {"index": dict(i), "point": dict(p), "re": v.real + 0.0, "im": v.imag + 0.0} for i, p, v in rows
        ]
        out.write(json.dumps(records, indent=2) + "\n")
        return EXIT_OK
    writer = csv.writer(out, lineterminator="\n")
    header = [k for k, _ in rows[0][0]] + [k for k, _ in rows[0][1]] + ["re", "im"]
    writer.writerow(header)
    for i, p, v in rows:
        writer.writerow([str(x) for _, x in i] + [_num(x) for _, x in p] + [_num(v.real), _num(v.imag)])
    return EXIT_OK


def cmd_verify(args, out):
    target = _Target(args)
    suite = args.suite_flag or args.suite or "all"
    jmax = 4 if args.jmax is None else _check_jmax(args.jmax)
    order = 48 if args.order is None else args.order
    try:
        report = run_suite(target.basis, suite, jmax=jmax, order=order, seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report["tree"] = docs.tree_to_doc(target.tree)
    if args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["check", "parameters", "measured", "tolerance", "passed"])
        for c in report["checks"]:
            measured = c["measured"]
            worst = max(measured.values()) if isinstance(measured, dict) else measured
            params = json.dumps({k: v for k, v in c["parameters"].items() if k != "deltas"}, sort_keys=True)
            writer.writerow([c["name"], params, _num(worst), _num(c["tolerance"]), c["passed"]])
    else:
        out.write(json.dumps(report, indent=2) + "\n")
    return EXIT_OK if report["passed"] else EXIT_FAILED


def cmd_degeneracy(args, out):
    target = _Target(args)
    jmax = _check_jmax(args.jmax)
    counts = [(J, len(target.basis.indices(J))) for J in range(jmax + 1)]
    if args.format == "json":
        out.write(json.dumps([{"J": J, "count": n} for J, n in counts]) + "\n")
    else:
        out.write("J,count\n" + "".join(f"{J},{n}\n" for J, n in counts))
    return EXIT_OK


def _parser():
    parser = argparse.ArgumentParser(prog="hyperharm", description="Evaluate and verify hyperspherical harmonics.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=("csv", "json"), default="csv"):
        p.add_argument("--tree", metavar="FILE", help="tree document (path or inline JSON)")
        p.add_argument("--catalog", metavar="NAME", help=f"catalog family: {', '.join(sorted(FAMILIES))}")
        p.add_argument("--format", choices=fmt, default=default)

    p = sub.add_parser("eval", help="evaluate one harmonic at one point")
    common(p)
    p.add_argument("--index", metavar="FILE", required=True)
    p.add_argument("--point", metavar="FILE", required=True)
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("table", help="tabulate all harmonics of rank <= jmax on a set of points")
    common(p)
    p.add_argument("--jmax", type=int)
    p.add_argument("--points", metavar="FILE", help="JSON list of point documents")
    p.add_argument("--order", type=int, help="use the tensor quadrature grid of this order")
    p.set_defaults(run=cmd_table)

    p = sub.add_parser("verify", help="run a verification suite and print a report")
    common(p, default="json")
    p.add_argument("suite", nargs="?", choices=SUITES + ("all",))
    p.add_argument("--suite", dest="suite_flag", choices=SUITES + ("all",))
    p.add_argument("--jmax", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("degeneracy", help="number of harmonics per rank")
    common(p)
    p.add_argument("--jmax", type=int)
    p.set_defaults(run=cmd_degeneracy)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    args = _parser().parse_args(argv)
    try:
        return args.run(args, out)
    except (InputError, TreeError) as exc:
        print(f"hyperharm: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
