"""Compute generating function coefficients, scaling functions and cell volume laws

Every subcommand writes a plot-ready table, as CSV with a JSON metadata
comment line or as a JSON document, to standard output or to the file given
with -o.  The metadata records the full run configuration.

"""

import argparse
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import partial
import json
import logging
from pathlib import Path
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

from mpmath import mp

from voronoicells import __version__, asym, celllaw, mapgf, scaling, tables, verify
from voronoicells.config import (
    ILTConfig,
    ILTMethod,
    OutputFormat,
    RunConfig,
    default_precision,
)
from voronoicells.errors import ConfigError, VoronoiCellsError
from voronoicells.numeric import big, nstr

logger = logging.getLogger(__name__)

LOG_LEVELS = ("error", "warning", "info", "debug")


def parse_grid(text: str) -> List[Fraction]:
    """Parse "start:stop:step" (stop included) or a comma separated list"""
    try:
        if ":" in text:
            start, stop, step = (Fraction(part) for part in text.split(":"))
            if step <= 0:
                raise ConfigError(f"grid step must be positive in {text!r}")
            if stop < start:
                raise ConfigError(f"grid {text!r} ends before it starts")
            count = int((stop - start) / step) + 1
            return [start + k * step for k in range(count)]
        return [Fraction(part) for part in text.split(",")]
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"malformed grid {text!r}: {e}") from e


def _grid_arg(text: str) -> List[Fraction]:
    try:
        return parse_grid(text)
    except ConfigError as e:
        raise argparse.ArgumentTypeError(str(e))


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number")


class Table:
    """Rows of an output table with its metadata"""

    def __init__(self, columns: Sequence[str], rows: List[Sequence[str]], **metadata: Any):
        self.columns = list(columns)
        self.rows = rows
        self.metadata = metadata

    def write(self, run: RunConfig, out) -> None:
        header = {"config": run.to_dict(), **self.metadata}
        if run.output_format is OutputFormat.JSON:
            doc = dict(header, columns=self.columns, rows=[list(r) for r in self.rows])
            json.dump(doc, out, indent=2)
            out.write("\n")
            return
        out.write("# " + json.dumps(header, sort_keys=True) + "\n")
        out.write(",".join(self.columns) + "\n")
        for row in self.rows:
            out.write(",".join(str(x) for x in row) + "\n")


def _map(fn: Callable, items: Sequence, jobs: int) -> List:
    """Ordered map, fanned out over worker processes when jobs > 1"""
    logger.info("evaluating %d grid points with %d jobs", len(items), jobs)
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _ilt_config(args, precision_bits: int) -> ILTConfig:
    return ILTConfig(
        method=ILTMethod.parse(args.ilt_method),
        node_count=args.ilt_nodes,
        precision_bits=max(precision_bits // 4 * 3, 64),
        target_tol=args.ilt_tol,
    )


# Row workers are module level so that worker processes can unpickle them.


def _scaling_row(S: Fraction, a: Fraction, b: Fraction, bits: int) -> List[str]:
    with mp.workprec(bits):
        return [str(S), nstr(scaling.eval_F(big(S), big(a), big(b), bits), 30)]


def _extract_row(tau: Fraction, i: int, bits: int) -> List[str]:
    with mp.workprec(bits):
        return [str(tau), nstr(scaling.extract_phi_coeff(i, big(tau), bits), 30)]


def _E_row(sigma: Fraction, bits: int) -> List[str]:
    with mp.workprec(bits):
        return [str(sigma), nstr(celllaw.E_sigma(big(sigma), bits), 30)]


def _P_row(V: Fraction, cfg: ILTConfig) -> List[str]:
    with mp.workprec(cfg.precision_bits):
        inverted = celllaw.P_V(big(V), cfg)
        return [str(V), nstr(inverted.value, 20), nstr(inverted.error, 3)]


def _asympt_row(V: Fraction, cfg: ILTConfig) -> List[str]:
    with mp.workprec(cfg.precision_bits):
        inverted = celllaw.P_V(big(V), cfg)
        return [
            str(V),
            nstr(inverted.value, 20),
            nstr(inverted.error, 3),
            nstr(celllaw.asympt_tail(big(V)), 20),
            nstr(celllaw.asympt_flat(big(V)), 20),
        ]


def _tree_row(V: Fraction, alpha: Optional[Fraction], cfg: ILTConfig) -> List[str]:
    with mp.workprec(cfg.precision_bits):
        if alpha is None:
            inverted = celllaw.ilt(celllaw.tree_laplace, big(V), cfg)
            exact = celllaw.tree_P(big(V))
            return [str(V), nstr(inverted.value, 20), nstr(inverted.error, 3), nstr(exact, 20)]

        inverted = celllaw.levy_density(big(alpha), big(V), cfg)
        forms = celllaw.levy_asympt(big(alpha), big(V))
        return [
            str(V),
            nstr(inverted.value, 20),
            nstr(inverted.error, 3),
            nstr(forms.small_V_form, 20),
            nstr(forms.tail_form, 20),
        ]


def cmd_coeffs(args, run: RunConfig) -> Table:
    doc = mapgf.coeff_table_json(args.s, args.order2)
    rows = [[str(i), str(j), str(num), str(den)] for i, j, num, den in doc["entries"]]
    return Table(("n1_doubled", "n2_doubled", "numerator", "denominator"), rows, s=args.s)


def cmd_profile(args, run: RunConfig) -> Table:
    with mp.workprec(run.precision_bits):
        profile = mapgf.profile_ratio(args.s, args.N, precision_bits=run.precision_bits)
        rows = [[str(n), nstr(r, 20)] for n, r in sorted(profile.ratios.items())]
        reference = big(mapgf.profile_constant(args.s).f3)
        return Table(
            ("n", "ratio"),
            rows,
            extrapolated=nstr(profile.estimate.value, 20),
            extrapolation_error=nstr(profile.estimate.error, 3),
            profile_constant=nstr(reference, 20),
        )


def cmd_scaling(args, run: RunConfig) -> Table:
    bits = run.precision_bits
    if args.extract is not None:
        rows = _map(partial(_extract_row, i=args.extract, bits=bits), args.tau_grid, run.jobs)
        return Table(("tau", f"coeff_{args.extract}"), rows, a="sqrt(6)")
    rows = _map(partial(_scaling_row, a=args.a, b=args.b, bits=bits), args.S_grid, run.jobs)
    return Table(("s", "value"), rows, a=str(args.a), b=str(args.b))


def cmd_law(args, run: RunConfig) -> Table:
    if args.V_grid is not None:
        cfg = run.ilt
        rows = _map(partial(_P_row, cfg=cfg), args.V_grid, run.jobs)
        return Table(("v", "density", "error"), rows)
    rows = _map(partial(_E_row, bits=run.precision_bits), args.sigma_grid, run.jobs)
    return Table(("sigma", "laplace_transform"), rows)


def cmd_asympt(args, run: RunConfig) -> Table:
    rows = _map(partial(_asympt_row, cfg=run.ilt), args.V_grid, run.jobs)
    return Table(("v", "density", "error", "tail_form", "flat_form"), rows)


def cmd_asym(args, run: RunConfig) -> Table:
    rows = [
        [str(w), nstr(big(p), 20)] for w, p in asym.pi_table(asym.omega_grid(args.grid))
    ]
    return Table(("omega", "trapping_probability"), rows)


def cmd_tree(args, run: RunConfig) -> Table:
    rows = _map(partial(_tree_row, alpha=args.alpha, cfg=run.ilt), args.V_grid, run.jobs)
    if args.alpha is None:
        return Table(("v", "density", "error", "exact_density"), rows)
    with mp.workprec(run.precision_bits):
        forms = celllaw.levy_asympt(big(args.alpha), mp.one)
    return Table(
        ("v", "density", "error", "small_v_form", "tail_form"),
        rows,
        alpha=str(args.alpha),
        small_v_exponent=nstr(forms.small_V_exponent, 20),
        flat_exponent=nstr(forms.flat_exponent, 20),
        tail_exponent=nstr(forms.tail_exponent, 20),
    )


def cmd_tables(args, run: RunConfig) -> Dict[str, Any]:
    return {"config": run.to_dict(), "tables": tables.dump_tables()}


def cmd_verify(args, run: RunConfig) -> Dict[str, Any]:
    results = verify.run_checks(args.check or None, quick=args.quick, jobs=run.jobs)
    return verify.emit_report(results, run.to_dict())


COMMANDS = {
    "coeffs": cmd_coeffs,
    "profile": cmd_profile,
    "scaling": cmd_scaling,
    "law": cmd_law,
    "asympt": cmd_asympt,
    "asym": cmd_asym,
    "tree": cmd_tree,
    "tables": cmd_tables,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voronoicells",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-L", "--log-level", choices=LOG_LEVELS, default="warning", help="Logging level"
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--precision", type=int, help="Working precision in bits (default: 256)"
    )
    common.add_argument("-o", "--output", type=Path, help="Output file (default: stdout)")
    common.add_argument(
        "--format", choices=[str(f) for f in OutputFormat], default="csv", help="Output format"
    )
    common.add_argument("--jobs", type=int, default=1, help="Worker processes for grids")

    ilt = argparse.ArgumentParser(add_help=False)
    ilt.add_argument(
        "--ilt-method",
        choices=[str(m) for m in ILTMethod],
        default=str(ILTMethod.DEFORMED_CONTOUR),
        help="Inversion method whose value is reported",
    )
    ilt.add_argument("--ilt-nodes", type=int, default=ILTConfig.node_count)
    ilt.add_argument("--ilt-tol", type=float, default=ILTConfig.target_tol)

    subparsers = parser.add_subparsers(dest="subparser_name", help="Subcommands", required=True)

    p = subparsers.add_parser("coeffs", parents=[common], help="Coefficients F_{n1,n2}(s)")
    p.add_argument("-s", type=int, required=True, help="Half distance between the sources")
    p.add_argument("--order2", type=int, default=16, help="Doubled total degree")

    p = subparsers.add_parser("profile", parents=[common], help="Distance profile ratios")
    p.add_argument("-s", type=int, required=True)
    p.add_argument("-N", type=int, default=200, help="Largest number of faces")

    p = subparsers.add_parser("scaling", parents=[common], help="The scaling function")
    p.add_argument("-a", type=_fraction_arg, default=Fraction(1))
    p.add_argument("-b", type=_fraction_arg, default=Fraction(1))
    p.add_argument("--S-grid", dest="S_grid", type=_grid_arg, default=parse_grid("0.25:2:0.25"))
    p.add_argument(
        "--extract",
        type=int,
        choices=(0, 1, 2, 3),
        help="Extract [S^(2i-3)] F(S, sqrt 6, tau / S) instead",
    )
    p.add_argument("--tau-grid", dest="tau_grid", type=_grid_arg, default=parse_grid("0:4:0.5"))

    p = subparsers.add_parser("law", parents=[common, ilt], help="E(sigma) or P(V)")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--sigma-grid", dest="sigma_grid", type=_grid_arg, default=parse_grid("0:20:0.1"))
    group.add_argument("--V-grid", dest="V_grid", type=_grid_arg)

    p = subparsers.add_parser("asympt", parents=[common, ilt], help="P(V) against its asymptotic forms")
    p.add_argument("--V-grid", dest="V_grid", type=_grid_arg, default=parse_grid("0.05,0.1,0.5,1,10,100,1000,10000"))

    p = subparsers.add_parser("asym", parents=[common], help="Trapping probability of asymmetric cells")
    p.add_argument("--grid", type=int, default=101, help="Number of omega points")

    p = subparsers.add_parser("tree", parents=[common, ilt], help="Tree and one-sided Levy laws")
    p.add_argument("--V-grid", dest="V_grid", type=_grid_arg, default=parse_grid("0.1,0.3,1,3,10"))
    p.add_argument("--alpha", type=_fraction_arg, help="Levy parameter (default: the tree law)")

    subparsers.add_parser("tables", parents=[common], help="Audit JSON of the closed-form tables")

    p = subparsers.add_parser("verify", parents=[common], help="Run the verification suite")
    p.add_argument("--quick", action="store_true", help="Reduced sizes")
    p.add_argument(
        "--check", action="append", choices=list(verify.CHECKS), help="Run only this check"
    )
    return parser


def _run_config(args) -> RunConfig:
    precision = args.precision if args.precision is not None else default_precision()
    if precision < 53:
        raise ConfigError("precision must be at least 53 bits")
    if args.jobs < 1:
        raise ConfigError("--jobs must be positive")

    skip = {"log_level", "precision", "output", "format", "jobs", "subparser_name"}
    arguments = {k: v for k, v in vars(args).items() if k not in skip and not k.startswith("ilt_")}
    orders = {k: arguments[k] for k in ("order2", "N") if k in arguments}
    run = RunConfig(
        command=args.subparser_name,
        arguments=arguments,
        precision_bits=precision,
        orders=orders,
        output=str(args.output) if args.output else None,
        output_format=OutputFormat.parse(args.format),
        jobs=args.jobs,
    )
    if hasattr(args, "ilt_method"):
        run.ilt = _ilt_config(args, precision)
    return run


def _emit(result, run: RunConfig, out) -> None:
    if isinstance(result, Table):
        result.write(run, out)
    else:
        json.dump(result, out, indent=2)
        out.write("\n")


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit status

    Argument errors exit with status 2 through argparse.

    """

    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level.upper()),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        config = _run_config(args)
        with mp.workprec(config.precision_bits):
            result = COMMANDS[args.subparser_name](args, config)
        if config.output:
            with open(config.output, "w") as f:
                _emit(result, config, f)
        else:
            _emit(result, config, sys.stdout)
    except VoronoiCellsError as e:
        print(f"voronoicells: error: {e}", file=sys.stderr)
        return 1

    if args.subparser_name == "verify" and not result["passed"]:
        print(
            f"voronoicells: {len(result['failures'])} checks failed: "
            + ", ".join(result["failures"]),
            file=sys.stderr,
        )
        return 1
    return 0


def main() -> int:
    return run()


if __name__ == "__main__":
    sys.exit(main())
