"""Command-line interface for bispec."""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from loguru import logger
from pydantic import ValidationError

from src.bispec.amplitudes import creation_probabilities, sum_rule_diagnostic
from src.bispec.calibrate import calibrate
from src.bispec.config import RunConfig
from src.bispec.errors import BispecError
from src.bispec.models import ModelKind, OutputFormat, QuantumNumbers, Suite
from src.bispec.report import (
    compare,
    emit,
    generate_table,
    ingest_experimental,
    join_experimental,
    mu2_sweep,
)
from src.bispec.spectrum import mass_squared, physical_mass, virton_mass_gev
from src.bispec.suites import run_suite

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_DOMAIN_ERROR = 2
BUNDLED = "bundled"


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, help="JSON config file (or BISPEC_CONFIG)")
    common.add_argument(
        "--model", type=str, choices=[m.value for m in ModelKind], help="Model (default: h16)"
    )
    common.add_argument("--mu2", type=float, help="Temperature parameter mu^2")
    common.add_argument("--lambda2", type=int, help="Central constant squared (default: 136)")
    common.add_argument("--chi", type=float, help="Phase of epsilon in radians (default: 0)")
    common.add_argument("--scale-gev2", type=float, help="(khc)^2 in GeV^2 (default: 1)")
    common.add_argument("--output", type=str, help="Write the report to this file")
    common.add_argument("--debug", action="store_true", help="Enable debug logging")
    return common


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    common = _common_parser()
    parser = argparse.ArgumentParser(description="Bare-hadron spectrum toolkit")
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser(
        "calibrate", parents=[common], help="Fix mu^2, zbar z, eta and epsilon and check V"
    )

    mass = commands.add_parser("mass", parents=[common], help="Mass of one multiplet")
    mass.add_argument("--F", dest="F", type=int, required=True, help="Fermion charge, 0 or 1")
    mass.add_argument("--N", dest="N", type=int, required=True, help="Isotonic number")
    mass.add_argument("--Y", dest="Y", type=int, default=0, help="Hypercharge (default: 0)")
    mass.add_argument("--i", dest="i", type=float, default=0.0, help="Isospin (default: 0)")
    mass.add_argument("--i3", dest="i3", type=float, help="Isospin projection (default: i)")
    mass.add_argument(
        "--synthetic", action="store_true", help="Allow the calibration point N=-1, i=-1/2"
    )

    table = commands.add_parser("table", parents=[common], help="Mass table of the eight families")
    table.add_argument("--n-max", type=int, help="Largest member index (default: 10)")
    table.add_argument(
        "--format",
        type=str,
        choices=[f.value for f in OutputFormat],
        help="Report format (default: markdown)",
    )
    table.add_argument(
        "--compare",
        type=str,
        nargs="?",
        const=BUNDLED,
        help="Experimental CSV to compare with; without a value the bundled file",
    )
    table.add_argument(
        "--mu2-sweep",
        action="store_true",
        help="Report comparison statistics over mu^2 = 0.063..0.069 instead of a table",
    )

    verify = commands.add_parser("verify", parents=[common], help="Run verification suites")
    verify.add_argument(
        "--suite",
        type=str,
        choices=[s.value for s in Suite],
        default=Suite.ALL.value,
        help="Suite to run (default: all)",
    )

    probabilities = commands.add_parser(
        "probabilities", parents=[common], help="Creation probabilities at calibrated parameters"
    )
    probabilities.add_argument(
        "--printed-override", action="store_true", help="Use the printed Xi normalization"
    )

    commands.add_parser("params", parents=[common], help="Print the effective configuration")

    return parser.parse_args(argv)


def create_config_from_args(args: argparse.Namespace) -> RunConfig:
    """Create configuration from command line arguments over file and environment layers."""
    overrides = {
        "model": args.model,
        "mu2": args.mu2,
        "lambda2": args.lambda2,
        "chi": args.chi,
        "scale_gev2": args.scale_gev2,
        "output_path": args.output,
        "n_max": getattr(args, "n_max", None),
        "format": getattr(args, "format", None),
    }
    compare_path = getattr(args, "compare", None)
    if compare_path and compare_path != BUNDLED:
        overrides["experimental_path"] = compare_path
    return RunConfig.load(Path(args.config) if args.config else None, overrides)


def _print_json(payload: Any) -> None:
    print(json.dumps(payload, indent=2, default=str))


def cmd_calibrate(config: RunConfig) -> int:
    result = calibrate(
        config.lambda2, config.chi, config.mu2, config.scale_gev2, config.policy
    )
    _print_json(result.to_report())
    return EXIT_OK if result.passed else EXIT_VERIFICATION_FAILED


def cmd_mass(config: RunConfig, qn: QuantumNumbers) -> int:
    """Both branches, the physical mass and, for fermions, the virton value."""
    mu2 = config.table_mu2
    solution = mass_squared(config.model, qn, mu2, config.scale_gev2)
    payload: Dict[str, Any] = {
        "quantum_numbers": qn.model_dump(),
        "model": config.model.value,
        "mu2": mu2,
        "m2_baryon": solution.m2_baryon,
        "m2_meson": solution.m2_meson,
        "discriminant": solution.discriminant,
        "mass_gev": physical_mass(solution, qn.F),
    }
    if qn.F == 1 and not qn.synthetic:
        payload["virton_mass_gev"] = virton_mass_gev(qn, config.lambda2)
    _print_json(payload)
    return EXIT_OK


def cmd_table(config: RunConfig, compare_with: Optional[str], sweep: bool) -> int:
    """generate_table, then compare when asked, then emit."""
    if sweep:
        points = mu2_sweep(n_max=config.n_max)
        _print_json([p.model_dump(mode="json") for p in points])
        return EXIT_OK

    rows = generate_table(
        config.table_mu2, config.n_max, model=config.model, scale_gev2=config.scale_gev2
    )
    stats = None
    if compare_with:
        experimental = ingest_experimental(config.experimental_path)
        rows = join_experimental(rows, experimental)
        stats = compare(rows, experimental)
    content = emit(rows, stats, config.format, config.output_path, mu2=config.table_mu2)
    if config.output_path is None:
        sys.stdout.write(content)
    return EXIT_OK


def cmd_verify(suite: Suite, config: RunConfig) -> int:
    report = run_suite(suite, config.policy)
    _print_json(report.model_dump(mode="json"))
    return EXIT_OK if report.passed else EXIT_VERIFICATION_FAILED


def cmd_probabilities(config: RunConfig, printed_override: bool) -> int:
    result = calibrate(
        config.lambda2, config.chi, config.mu2, config.scale_gev2, config.policy
    )
    states = creation_probabilities(
        result.params, printed_override=printed_override, policy=config.policy
    )
    _print_json(
        {
            "params": result.params.model_dump(),
            "states": [s.to_report() for s in states],
            "sum_rule": sum_rule_diagnostic(result.params, config.policy),
        }
    )
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Run a bispec command; returns the process exit code."""
    args = parse_args(argv)

    # Configure logging; stdout carries the report
    log_level = "DEBUG" if args.debug else "INFO"
    logger.remove()
    logger.add(sys.stderr, level=log_level)

    try:
        config = create_config_from_args(args)
        if args.command == "calibrate":
            return cmd_calibrate(config)
        if args.command == "mass":
            qn = QuantumNumbers(
                F=args.F, N=args.N, Y=args.Y, i=args.i, i3=args.i3, synthetic=args.synthetic
            )
            return cmd_mass(config, qn)
        if args.command == "table":
            return cmd_table(config, args.compare, args.mu2_sweep)
        if args.command == "verify":
            return cmd_verify(Suite(args.suite), config)
        if args.command == "probabilities":
            return cmd_probabilities(config, args.printed_override)
        _print_json(config.model_dump(mode="json"))
        return EXIT_OK
    except BispecError as e:
        logger.error(f"{type(e).__name__}: {e}")
        _print_json(e.to_dict())
        return e.exit_code
    except ValidationError as e:
        logger.error(f"Invalid input: {e}")
        _print_json({"error": "ValidationError", "message": str(e)})
        return EXIT_DOMAIN_ERROR


if __name__ == "__main__":
    sys.exit(main())
