"""
Command-line surface: evaluate functions, run verification suites, classify
periodic ODEs, probe growth and reproduce the quantization table.

Every command prints one JSON document on stdout; logs go to stderr.
Exit codes: 0 success, 1 verification failure, 2 domain or internal error, 64 usage error.
"""
import argparse
import cmath
import logging
import sys
from typing import Callable, Dict, List, Optional

from lommel import ode_engine, verify
from lommel.functions import bessel, lommel, special_polys
from lommel.functions.core_complex import Eval, LogPoint, branch_shift
from lommel.functions.lommel import LommelParams
from lommel.utils.config import get_log_level
from lommel.utils.errors import LommelError, error_code
from lommel.utils.formatting import parse_complex, parse_forcing, to_json
from lommel.utils.grid_writer import GridWriter

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2
EXIT_USAGE = 64

FUNCTIONS = ["J", "Y", "H1", "H2", "s", "S", "struveH", "struveK", "neumannO", "gegenbauerA", "schlafliS"]
TABLE_SAMPLE_POINTS = (complex(-1.0, 0.5), complex(0.0, 0.0), complex(1.0, -0.5))


class UsageError(Exception):
    """Flag combination that argparse alone cannot reject."""


class LommelArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with 64 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _complex_flag(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _forcing_flag(text: str) -> List[ode_engine.Forcing]:
    try:
        return [ode_engine.Forcing(mu=mu, sigma=sigma) for mu, sigma in parse_forcing(text)]
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _add_ode_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("Periodic ODE")
    group.add_argument("--L", type=_complex_flag, default=complex(1), help="Scale L of zeta = L e^{Mz} (default: 1)")
    group.add_argument("--M", type=_complex_flag, default=complex(1), help="Rate M of zeta = L e^{Mz} (default: 1)")
    group.add_argument("--N", type=_complex_flag, default=complex(0), help="Damping N (default: 0)")
    group.add_argument("--nu", type=_complex_flag, default=complex(0), help="Order nu (default: 0)")
    group.add_argument("--forcing", type=_forcing_flag, default=[], help='Forcing terms "mu1:sigma1;mu2:sigma2"')
    group.add_argument("--A", type=_complex_flag, default=complex(0), help="Coefficient of J_nu (default: 0)")
    group.add_argument("--B", type=_complex_flag, default=complex(0), help="Coefficient of Y_nu (default: 0)")


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    parser = LommelArgumentParser(prog="lommel", description="Lommel function numerics")
    commands = parser.add_subparsers(dest="command", required=True)

    eval_parser = commands.add_parser("eval", help="Evaluate one function at one point")
    eval_parser.add_argument("--fn", required=True, choices=FUNCTIONS, help="Function family")
    eval_parser.add_argument("--mu", type=_complex_flag, help="Lommel parameter mu, RE[,IM]")
    eval_parser.add_argument("--nu", type=_complex_flag, help="Order nu, RE[,IM]")
    eval_parser.add_argument("--n", type=int, help="Integer index for neumannO, gegenbauerA, schlafliS")
    point = eval_parser.add_mutually_exclusive_group()
    point.add_argument("--w", type=_complex_flag, help="Logarithmic coordinate w with zeta = e^w")
    point.add_argument("--zeta", type=_complex_flag, help="zeta itself, mapped to the principal branch")
    eval_parser.add_argument("--branch", type=int, default=0,
                             help="Apply zeta -> zeta e^{-BRANCH pi i}, i.e. w -> w - i pi BRANCH (default: 0)")
    eval_parser.add_argument("--csv", help="Write a grid dump to this CSV path instead of one value")
    eval_parser.add_argument("--grid", type=str, help="RMIN,RMAX,COUNT of the radii dumped with --csv")

    verify_parser = commands.add_parser("verify", help="Run identity checks on random samples")
    verify_parser.add_argument("--suite", default=verify.Suite.ALL, choices=[s.value for s in verify.Suite])
    verify_parser.add_argument("--samples", type=int, default=50, help="Cases per suite (default: 50)")
    verify_parser.add_argument("--seed", type=int, default=0, help="Seed of the case generator (default: 0)")
    verify_parser.add_argument("--tol", type=float, help="Pass threshold (default: per suite)")

    classify_parser = commands.add_parser("classify", help="Decide subnormality of a solution")
    _add_ode_flags(classify_parser)

    probe_parser = commands.add_parser("probe", help="Sample growth along the probe sequence")
    _add_ode_flags(probe_parser)
    probe_parser.add_argument("--n-max", type=int, default=8, help="Last probe index (default: 8)")
    probe_parser.add_argument("--fn", choices=["solution", "struveH"], default="solution",
                              help="Probe the assembled solution or H_nu(L e^{Mz}) (default: solution)")

    table_parser = commands.add_parser("table1", help="Reproduce one quantization case")
    table_parser.add_argument("--case", type=int, required=True, choices=[1, 2, 3, 4], help="Case id")
    table_parser.add_argument("--p", type=int, required=True, help="Nonnegative integer p")
    table_parser.add_argument("--sigma", type=_complex_flag, default=complex(1), help="Forcing amplitude (default: 1)")

    args = parser.parse_args(argv)
    if args.command == "table1" and args.p < 0:
        parser.error("--p must be >= 0")
    if args.command == "probe" and args.n_max < 3:
        parser.error("--n-max must be >= 3")
    if args.command == "verify" and args.samples < 1:
        parser.error("--samples must be >= 1")
    return args


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{name}" for name in names if getattr(args, name) is None]
    if missing:
        raise UsageError(f"--fn {args.fn} needs {', '.join(missing)}")


def _evaluator(args: argparse.Namespace) -> Callable[[LogPoint], Eval]:
    """Bind the flags of `eval` to a function of the point."""
    fn = args.fn
    if fn in ("s", "S"):
        _require(args, "mu", "nu")
        params = LommelParams(mu=args.mu, nu=args.nu)
        if fn == "s":
            return lambda w: lommel.lommel_s_small(params, w)
        return lambda w: lommel.lommel_S(params, w)
    if fn in ("neumannO", "schlafliS"):
        _require(args, "n")
        kernel = special_polys.neumann_o if fn == "neumannO" else special_polys.schlafli_s
        return lambda w: kernel(args.n, w)
    if fn == "gegenbauerA":
        _require(args, "n", "nu")
        return lambda w: special_polys.gegenbauer_a(args.n, args.nu, w)
    _require(args, "nu")
    kernels: Dict[str, Callable[[LogPoint], Eval]] = {
        "J": lambda w: bessel.bessel_j(args.nu, w),
        "Y": lambda w: bessel.bessel_y(args.nu, w),
        "H1": lambda w: bessel.hankel(bessel.HankelKind.FIRST, args.nu, w),
        "H2": lambda w: bessel.hankel(bessel.HankelKind.SECOND, args.nu, w),
        "struveH": lambda w: special_polys.struve_h(args.nu, w),
        "struveK": lambda w: special_polys.struve_k(args.nu, w),
    }
    return kernels[fn]


def _point(args: argparse.Namespace) -> LogPoint:
    if args.w is not None:
        w = LogPoint.from_w(args.w)
    elif args.zeta is not None:
        w = LogPoint.from_zeta(args.zeta)
    else:
        raise UsageError("eval needs --w or --zeta")
    return branch_shift(w, args.branch)


def _parse_grid(text: Optional[str]) -> tuple:
    if text is None:
        raise UsageError("--csv needs --grid RMIN,RMAX,COUNT")
    parts = text.split(",")
    try:
        r_min, r_max, count = float(parts[0]), float(parts[1]), int(parts[2])
    except (IndexError, ValueError) as e:
        raise UsageError(f"--grid must be RMIN,RMAX,COUNT, got {text!r}") from e
    if len(parts) != 3 or not 0 < r_min <= r_max or count < 1:
        raise UsageError(f"--grid needs 0 < RMIN <= RMAX and COUNT >= 1, got {text!r}")
    return r_min, r_max, count


def cmd_eval(args: argparse.Namespace) -> int:
    evaluate = _evaluator(args)
    if args.csv is None:
        result = evaluate(_point(args))
        print(to_json(result.to_json_dict()))
        return EXIT_OK

    r_min, r_max, count = _parse_grid(args.grid)
    angle = cmath.phase(args.zeta) if args.zeta is not None else 0.0
    if count == 1:
        radii = [r_min]
    else:
        radii = [r_min + (r_max - r_min) * i / (count - 1) for i in range(count)]
    points = [cmath.rect(r, angle) for r in radii]
    rows = GridWriter(args.csv).write(
        points, lambda zeta: evaluate(branch_shift(LogPoint.from_zeta(zeta), args.branch))
    )
    print(to_json({"rows": rows, "csv": args.csv}))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    report = verify.run_suite(verify.Suite(args.suite), samples=args.samples, seed=args.seed, tol=args.tol)
    print(to_json(report.to_json_dict()))
    return EXIT_OK if report.failed == 0 else EXIT_FAILED


def _solution(args: argparse.Namespace) -> ode_engine.SolutionSpec:
    try:
        spec = ode_engine.OdeSpec(L=args.L, M=args.M, N=args.N, nu=args.nu, forcing=args.forcing)
    except ValueError as e:
        raise UsageError(str(e)) from e
    return ode_engine.SolutionSpec(A=args.A, B=args.B, spec=spec)


def _term_json(term: lommel.TerminatingLommel) -> dict:
    return {"mu": term.mu, "nu": term.nu, "p": term.p, "coeffs": term.coefficients[: term.p + 1]}


def cmd_classify(args: argparse.Namespace) -> int:
    sol = _solution(args)
    verdict = ode_engine.classify_subnormal(sol)
    payload = {
        "verdict": verdict.verdict,
        "reason": verdict.reason,
        "index": verdict.index,
        "terms": [_term_json(term) for term in verdict.terms],
        "solution_string": verdict.solution_string(sol.spec),
    }
    print(to_json(payload))
    return EXIT_OK


def cmd_probe(args: argparse.Namespace) -> int:
    if args.fn == "struveH":
        sol = ode_engine.struve_solution(args.nu, L=args.L, M=args.M)
    else:
        sol = _solution(args)
    report = ode_engine.growth_probe(sol, n_max=args.n_max)
    payload = {
        "samples": [
            {
                "n": sample.n,
                "r_n": sample.r_n,
                "z_n": sample.z_n,
                "log_modulus": sample.log_modulus,
                "loglogM_over_r": sample.loglog_over_r,
                "growth_over_r": sample.growth_over_r,
                "error": sample.error,
            }
            for sample in report.samples
        ],
        "tail": report.tail,
        "expected_if_unbounded": report.expected_if_unbounded,
        "bounded": report.bounded,
        "unbounded_signature": report.unbounded_signature,
        "achieved_n": report.achieved_n,
        "branch": report.branch,
    }
    print(to_json(payload))
    return EXIT_OK


def cmd_table1(args: argparse.Namespace) -> int:
    case = ode_engine.quantization_case(args.case, args.p, args.sigma)
    sol = case.solution_spec()
    verdict = ode_engine.classify_subnormal(sol)
    residuals = [
        {"z": z, "residual": ode_engine.ode_residual(sol, z, value_fn=case.mp_value)} for z in TABLE_SAMPLE_POINTS
    ]
    payload = {
        "case": case.case_id,
        "p": case.p,
        "mu": case.mu,
        "nu": case.nu,
        "K": float(case.K),
        "K_exact": case.K_exact,
        "description": case.description,
        "solution_string": verdict.solution_string(sol.spec),
        "residual_at": residuals,
    }
    print(to_json(payload))
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "eval": cmd_eval,
    "verify": cmd_verify,
    "classify": cmd_classify,
    "probe": cmd_probe,
    "table1": cmd_table1,
}


def _error(code: str, message: str) -> None:
    print(to_json({"error": code, "message": message}))


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command and return its exit code."""
    args = parse_args(argv)
    try:
        logging.basicConfig(
            level=get_log_level(),
            format='%(asctime)s - %(levelname)s - %(message)s',
            stream=sys.stderr,
        )
    except ValueError as e:
        _error("config", str(e))
        return EXIT_ERROR

    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"lommel {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (LommelError, OverflowError) as e:
        logger.error(f"{args.command} failed: {e}")
        _error(error_code(e), str(e))
        return EXIT_ERROR
    except FileNotFoundError as e:
        _error("io", str(e))
        return EXIT_ERROR
    except Exception as e:
        logger.exception(f"Unexpected failure in {args.command}")
        _error("internal", str(e))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
