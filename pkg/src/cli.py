import argparse
import logging
import os
import sys
import tempfile
from pathlib import Path
from typing import List, Optional, Sequence

import pandas as pd
from pydantic import ValidationError

from baselines.oracle import OracleGuardError
from config import ConfigValueError, UnknownConfigKeyError, apply_overrides, get_settings, load_sim_config
from config.logging import configure_logging
from harness import DegenerateScenarioError, HarnessError, run_oracle, run_single, run_sweep, sweep_to_csv
from schemas.simulation import SchemeId, SimConfig, SweepAxis, SweepSpec, parse_schemes

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

DEFAULT_SCHEMES = "channel-comparison,power-comparison"
DEFAULT_P_G_MAX_VALUES = [1.0, 5.0, 10.0, 20.0, 30.0]


class UsageError(ValueError):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="SimConfig JSON document (defaults to the shipped one)")
    common.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
        help="override one SimConfig key, repeatable",
    )
    common.add_argument("--seed", type=int, default=0, help="base seed")
    common.add_argument("--out", help="output file; written only on success")
    common.add_argument(
        "--workers", type=int, default=get_settings().WORKERS,
        help="worker processes (env D2DSIM_WORKERS)",
    )

    parser = argparse.ArgumentParser(prog="d2dsim", description="D2D multicast underlay simulator")
    verbs = parser.add_subparsers(dest="verb", required=True)

    sweep = verbs.add_parser("sweep", parents=[common], help="Monte Carlo sweep to CSV")
    sweep.add_argument("--axis", choices=[axis.value for axis in SweepAxis], default=SweepAxis.LAMBDA_GT.value)
    sweep.add_argument("--values", help="comma separated, strictly increasing axis values")
    sweep.add_argument("--schemes", default=DEFAULT_SCHEMES, help="presets or CHANNEL+POWER pairs")
    sweep.add_argument("--instances", type=int, default=500, help="instances per sweep point")

    single = verbs.add_parser("single", parents=[common], help="one instance with full JSON traces")
    single.add_argument("--schemes", default=DEFAULT_SCHEMES)

    oracle = verbs.add_parser("oracle", parents=[common], help="gap to the exhaustive optimum on a small instance")
    oracle.add_argument("--schemes", default=DEFAULT_SCHEMES)
    oracle.add_argument("--max-cus", type=int, default=2)
    oracle.add_argument("--max-mgs", type=int, default=2)
    oracle.add_argument("--grid-levels", type=int, default=6)

    verbs.add_parser("validate-config", parents=[common], help="check a config and its overrides")
    return parser


def describe_validation_error(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors(include_url=False):
        location = ".".join(str(part) for part in error["loc"])
        parts.append(f"{location}: {error['msg']}" if location else error["msg"])
    return "; ".join(parts)


def write_atomic(path: str, text: str) -> None:
    """Write to a temporary file next to ``path`` and rename it into place."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    tmp = tempfile.NamedTemporaryFile("w", dir=target.parent, suffix=".tmp", delete=False, encoding="utf-8")
    try:
        with tmp:
            tmp.write(text)
        os.replace(tmp.name, target)
    except BaseException:
        Path(tmp.name).unlink(missing_ok=True)
        raise


def emit(text: str, out: Optional[str]) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def parse_values(raw: Optional[str], axis: SweepAxis, config: SimConfig) -> List[float]:
    if raw is None:
        if axis is SweepAxis.LAMBDA_GT:
            return [config.lambda_gt * factor for factor in (0.5, 1.0, 2.0, 4.0)]
        return list(DEFAULT_P_G_MAX_VALUES)
    try:
        return [float(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"--values must be a comma separated list of numbers, got {raw!r}") from None


def scheme_list(text: str) -> List[SchemeId]:
    try:
        return parse_schemes(text)
    except ValueError as exc:
        raise UsageError(f"--schemes: {exc}") from None


def _sweep(args: argparse.Namespace, config: SimConfig) -> int:
    axis = SweepAxis(args.axis)
    try:
        spec = SweepSpec(
            axis=axis,
            values=parse_values(args.values, axis, config),
            schemes=scheme_list(args.schemes),
            instances_per_point=args.instances,
            base_seed=args.seed,
        )
    except ValidationError as exc:
        raise UsageError(describe_validation_error(exc)) from None
    frame = run_sweep(spec, config, workers=args.workers)
    emit(sweep_to_csv(frame), args.out)
    return EXIT_OK


def _single(args: argparse.Namespace, config: SimConfig) -> int:
    report = run_single(config, args.seed, scheme_list(args.schemes))
    emit(report.model_dump_json(indent=2), args.out)
    return EXIT_OK


def _oracle(args: argparse.Namespace, config: SimConfig) -> int:
    report = run_oracle(
        config,
        args.seed,
        scheme_list(args.schemes),
        max_cus=args.max_cus,
        max_mgs=args.max_mgs,
        grid_levels=args.grid_levels,
    )
    table = pd.DataFrame([row.model_dump() for row in report.rows])
    sys.stdout.write(
        f"optimum objective_bps={report.optimum.objective_bps:.6g} "
        f"({report.n_cu} CU, {report.n_mg} MG, {len(report.power_grid_mw)} power levels)\n"
    )
    sys.stdout.write(table.to_string(index=False, float_format=lambda v: f"{v:.6g}") + "\n")
    if args.out:
        write_atomic(args.out, report.model_dump_json(indent=2))
    return EXIT_OK


COMMANDS = {"sweep": _sweep, "single": _single, "oracle": _oracle}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse ``argv`` and run one verb.

    :return: 0 on success, 1 on invalid configs or runtime failures, 2 on usage errors.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    configure_logging(get_settings().LOG_LEVEL)

    try:
        config = apply_overrides(load_sim_config(args.config), args.overrides)
    except (UnknownConfigKeyError, ConfigValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ValidationError as exc:
        sys.stderr.write(f"error: invalid config: {describe_validation_error(exc)}\n")
        return EXIT_FAILURE
    except (FileNotFoundError, IsADirectoryError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAILURE

    if args.verb == "validate-config":
        sys.stdout.write("config is valid\n")
        return EXIT_OK

    try:
        return COMMANDS[args.verb](args, config)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (DegenerateScenarioError, OracleGuardError, HarnessError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
