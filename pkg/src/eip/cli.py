"""``eip`` command line interface.

Exit codes: 0 success, 1 validation error, 2 budget exceeded, 3 internal
invariant violation.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys

from . import bounds, daisy, defects, experiments, lattice, oracle, order, rearrange
from .errors import EIPError, InvariantViolation, ValidationError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are validation errors (exit 1); 2 is reserved for budgets
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _point(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.replace(",", " ").split())
    except ValueError:
        raise ValidationError(f"cannot parse point {text!r}") from None


def _emit(args, payload, *, rows: list[list] | None = None, header: list[str] | None = None) -> None:
    """Write ``payload`` as JSON, or ``header``/``rows`` as CSV."""
    fmt = args.format or "json"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if rows is None:
            header = ["key", "value"]
            rows = [[k, json.dumps(v) if isinstance(v, (list, dict)) else v] for k, v in payload.items()]
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    elif fmt == "text":
        text = payload if isinstance(payload, str) else json.dumps(payload, indent=2)
        text = text if text.endswith("\n") else text + "\n"
    else:
        text = json.dumps(payload, sort_keys=False) + "\n"
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)


def _read(path: str) -> lattice.Config:
    try:
        return lattice.read_config(path)
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ValidationError(f"cannot read configuration {path}: {exc}") from exc


# -- subcommands --------------------------------------------------------------

def cmd_order_cmp(args):
    res = order.compare(_point(args.x), _point(args.y))
    _emit(args, str(res) if args.format == "text" else {"x": _point(args.x), "y": _point(args.y), "result": str(res)})


def cmd_initial_segment(args):
    _emit(args, order.initial_segment(args.n, args.d).to_json_obj())


def cmd_daisy(args):
    if args.matrix_in:
        with open(args.matrix_in) as fh:
            spec = daisy.from_matrix(daisy.DaisyMatrix.parse(fh.read()))
    else:
        if args.n is None or args.d is None:
            raise ValidationError("daisy needs -n and -d (or --matrix-in)")
        spec = daisy.daisy_of_cardinality(args.n, args.d)
    if args.points:
        _emit(args, daisy.materialize(spec).to_json_obj())
    elif args.perimeter:
        _emit(args, {"n": spec.cardinality, "d": spec.dim, "perimeter": daisy.daisy_perimeter(spec)})
    elif args.matrix or args.format == "text":
        args.format = "text"
        _emit(args, daisy.to_matrix(spec).format() if spec.layers else "")
    else:
        _emit(args, {"dim": spec.dim, "layers": [list(t) for t in spec.layers], "cardinality": spec.cardinality,
                     "value_change_columns": spec.value_change_columns()})


def cmd_perimeter(args):
    C = _read(args.input)
    _emit(args, {"n": len(C), "d": C.dim, "perimeter": lattice.edge_perimeter(C), "bonds": lattice.bond_count(C)})


def cmd_minimize_check(args):
    C = _read(args.input)
    _emit(args, {
        "n": len(C), "d": C.dim,
        "perimeter": lattice.edge_perimeter(C),
        "eip": daisy.eip_value(len(C), C.dim),
        "is_minimizer": daisy.is_minimizer(C),
        "sections_are_minimizers": rearrange.sections_are_minimizers(C) if C.dim >= 2 else None,
    })


def cmd_rearrange(args):
    C = _read(args.input)
    _emit(args, rearrange.decreasing_rearrangement(C, args.axis).to_json_obj())


def cmd_normalize(args):
    C = _read(args.input)
    nf = defects.normalize_minimizer(C)
    if args.trace:
        with open(args.trace, "w") as fh:
            for rec in nf.trace:
                fh.write(json.dumps(rec) + "\n")
    _emit(args, {
        "block_extents": list(nf.block_extents),
        "height": nf.height,
        "top_daisy": [list(t) for t in nf.top_daisy.layers],
        "lateral_axis": nf.lateral_axis,
        "lateral_level": nf.lateral_level,
        "lateral_residue": [list(p) for p in nf.lateral_residue],
        "axis_order": [a + 1 for a in nf.axis_order],
        "height_bound_holds": defects.height_bound_holds(nf),
        "points": [list(p) for p in nf.materialize()],
    })


BOUNDS_HEADER = ["d", "ell", "j", "p", "theta_family", "theta_daisy", "is_minimizer"]


def bounds_rows(mode: str, d: int, ell_min: int, ell_max: int) -> list[list]:
    rows = []
    for ell in range(ell_min, ell_max + 1):
        if mode == "lb":
            for p in range(0, min(bounds.scaling_floor(ell, d), ell - 1) + 1):
                fam = bounds.slab(ell, d, p)
                rows.append([d, ell, "", p, lattice.edge_perimeter(fam),
                             daisy.eip_value(len(fam), d), daisy.is_minimizer(fam)])
        else:
            start = bounds.converse_threshold_ceil(ell, d)
            for j in range(d):
                for twop in range(start, ell, 2):
                    fam = bounds.padded_slab(ell, j, d, twop)
                    rows.append([d, ell, j, twop, lattice.edge_perimeter(fam),
                                 daisy.eip_value(len(fam), d), daisy.is_minimizer(fam)])
    return rows


def cmd_bounds(args):
    if args.ell_min < 1 or args.ell_max < args.ell_min:
        raise ValidationError("need 1 <= --ell-min <= --ell-max")
    rows = bounds_rows("lb" if args.check_lb else "converse", args.d, args.ell_min, args.ell_max)
    if args.format == "json":
        _emit(args, [dict(zip(BOUNDS_HEADER, r)) for r in rows])
    else:
        args.format = "csv"
        _emit(args, None, rows=rows, header=BOUNDS_HEADER)


def cmd_oracle(args):
    rep = oracle.eip_bruteforce(args.n, args.d)
    _emit(args, rep.to_json_obj(with_list=args.list))


def cmd_fluctuation(args):
    cfg = experiments.ScanConfig(args.d, args.ell_min, args.ell_max, args.ell_step, args.family,
                                 args.offset, args.threads)
    rows = cfg.run()
    if args.format == "json":
        _emit(args, [dict(zip(experiments.ROW_FIELDS, r.as_csv_row())) for r in rows])
    else:
        args.format = "csv"
        _emit(args, None, rows=[r.as_csv_row() for r in rows], header=experiments.ROW_FIELDS)


def cmd_fit(args):
    with open(args.input) as fh:
        rows = experiments.rows_from_csv(fh.read())
    fit = experiments.fit_exponent(rows)
    pred = {r.exponent_pred for r in rows}
    _emit(args, {"slope": fit.slope, "constant": fit.constant, "residual": fit.residual,
                 "exponent_pred": str(pred.pop()) if len(pred) == 1 else None, "rows": len(rows)})


def cmd_selfcheck(args):
    """Randomized identity and monotonicity checks, seeded by --seed."""
    rng = random.Random(args.seed)
    bad = 0
    for _ in range(args.samples):
        d = rng.choice((2, 3, 4))
        side = rng.randint(1, 6)
        pts = {tuple(rng.randint(1, side) for _ in range(d)) for _ in range(rng.randint(1, 3 * side))}
        C = lattice.Config(d, pts)
        per = lattice.edge_perimeter(C)
        if per + 2 * lattice.bond_count(C) != 2 * d * len(C):
            bad += 1
        s = rng.randint(1, d)
        if lattice.edge_perimeter(rearrange.decreasing_rearrangement(C, s)) > per:
            bad += 1
    _emit(args, {"seed": args.seed, "samples": args.samples, "violations": bad})
    if bad:
        raise InvariantViolation(f"{bad} violations")


# -- parser -------------------------------------------------------------------

def _globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("-o", "--output", default=dflt(None), help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "csv", "text"), default=dflt(None))
    p.add_argument("--threads", type=int, default=dflt(os.cpu_count() or 1))
    p.add_argument("--seed", type=int, default=dflt(0))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eip", description="Edge-isoperimetric minimizers on Z^d.")
    _globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    _globals(common, suppress=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("order-cmp", cmd_order_cmp, "compare two points of N^d in the daisy order")
    sp.add_argument("x")
    sp.add_argument("y")

    sp = add("initial-segment", cmd_initial_segment, "first n points of N^d in the order")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-d", type=int, required=True)

    sp = add("daisy", cmd_daisy, "the daisy with n points")
    sp.add_argument("-n", type=int)
    sp.add_argument("-d", type=int)
    sp.add_argument("--matrix-in", help="read a dot/number matrix instead of -n/-d")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--matrix", action="store_true")
    g.add_argument("--points", action="store_true")
    g.add_argument("--perimeter", action="store_true")

    for name, fn, help_ in (("perimeter", cmd_perimeter, "edge perimeter and bonds of a point set"),
                            ("minimize-check", cmd_minimize_check, "is the point set a minimizer?")):
        sp = add(name, fn, help_)
        sp.add_argument("-i", "--input", required=True)

    sp = add("rearrange", cmd_rearrange, "decreasing rearrangement along one axis")
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument("--axis", type=int, required=True)

    sp = add("normalize", cmd_normalize, "normal form of a minimizer")
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument("--trace", help="write the move log as JSON lines")

    sp = add("bounds", cmd_bounds, "sweep the slab families against the daisy perimeter")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--check-lb", action="store_true", help="thin slabs are minimizers")
    g.add_argument("--check-converse", action="store_true", help="thick padded slabs are not")
    sp.add_argument("-d", type=int, required=True)
    sp.add_argument("--ell-min", type=int, required=True)
    sp.add_argument("--ell-max", type=int, required=True)

    sp = add("oracle", cmd_oracle, "brute-force EIP value and minimizers")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-d", type=int, required=True)
    sp.add_argument("--list", action="store_true", help="include the minimizers")

    sp = add("fluctuation", cmd_fluctuation, "symmetric difference to the Wulff cube over ell")
    sp.add_argument("-d", type=int, required=True)
    sp.add_argument("--family", choices=experiments.FAMILIES, default="slab-extremal")
    sp.add_argument("--ell-min", type=int, required=True)
    sp.add_argument("--ell-max", type=int, required=True)
    sp.add_argument("--ell-step", type=int, default=1)
    sp.add_argument("--offset", type=int, default=1, help="daisy family uses ell^d - offset points")

    sp = add("fit", cmd_fit, "log-log fit of a fluctuation CSV")
    sp.add_argument("-i", "--input", required=True)

    sp = add("selfcheck", cmd_selfcheck, "seeded randomized identity checks")
    sp.add_argument("--samples", type=int, default=1000)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except EIPError as exc:
        print(f"eip: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OverflowError) as exc:
        print(f"eip: validation error: {exc}", file=sys.stderr)
        return 1
    except AssertionError as exc:
        print(f"eip: invariant violation: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
