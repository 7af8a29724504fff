"""Command-line entry point for running noise-fidelity experiments."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, NoReturn

from pydantic import ValidationError

from . import __version__
from .config import ExperimentConfig, load_config
from .errors import NoiseFidelityError
from .harness import run_experiment
from .schemas import ExperimentKind, NoiseKind

logger = logging.getLogger(__name__)

# Subcommand name -> experiment kind; "run" takes the kind from the config file.
COMMANDS: dict[str, ExperimentKind] = {
    "gamma-sweep": ExperimentKind.GAMMA_SWEEP,
    "time-sweep": ExperimentKind.TIME_SWEEP,
    "variance-sweep": ExperimentKind.VARIANCE_SWEEP,
    "distribution": ExperimentKind.DISTRIBUTION,
    "convergence": ExperimentKind.CONVERGENCE,
    "psd": ExperimentKind.PSD,
    "rb": ExperimentKind.RB,
    "spam-fit": ExperimentKind.SPAM_FIT,
    "replay": ExperimentKind.REPLAY,
}

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_ERROR = 2


def setup_logging(level: str = "INFO") -> None:
    """Configure logging for the application."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        force=True,
    )
    # Reduce noise from matplotlib
    logging.getLogger("matplotlib").setLevel(logging.WARNING)


def _common_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--gamma", type=float, nargs="+", help="Noise strength(s)")
    parent.add_argument("--kappa", type=float, help="OU damping rate (1/s)")
    parent.add_argument(
        "--kind", choices=[k.value for k in NoiseKind], help="Noise kind (wn, ou, bm)"
    )
    parent.add_argument("--realizations", type=int, help="Noise realizations per point")
    parent.add_argument("--seed", type=int, help="Master seed")
    parent.add_argument("--out", type=Path, help="Output directory")
    parent.add_argument("--workers", type=int, help="Worker processes")
    parent.add_argument(
        "--plots", action="store_true", default=None, help="Render SVG quick-look plots"
    )
    parent.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (default: from config, INFO)",
    )
    return parent


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        prog="noise-fidelity",
        description="Noise-fidelity toolkit - control-noise simulation experiments",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Run the experiment named in a config file
  noise-fidelity run configs/default.toml

  # OU gamma sweep with a smaller ensemble
  noise-fidelity gamma-sweep --gamma 0 3 6 --realizations 20 --out ./runs

  # Replay persisted traces against measured fidelities
  noise-fidelity replay --noise-dir traces/ --measurements measurements.csv

Flag overrides:
  --gamma     sweep gammas; the first value also sets the noise, RB and
              per-kind gamma of the selected noise kind
  --kind      noise kind for single-kind experiments and per-kind sweeps
  --realizations  ensemble size, RB sequences per length and PSD traces

Environment:
  NOISE_FIDELITY_WORKERS  Worker processes (overrides the config file)
  NOISE_FIDELITY_SEED     Master seed (default: 0)
  NOISE_KIND, NOISE_GAMMA, NOISE_KAPPA  Noise process defaults
  ARRAY_N_SITES, ARRAY_N_MEAS, ARRAY_P01, ARRAY_P10  Array model defaults
  OUTPUT_OUTPUT_DIR       Output directory (default: ./runs)
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = _common_options()
    subparsers = parser.add_subparsers(dest="command", required=True)
    run = subparsers.add_parser(
        "run", parents=[common], help="Run the experiment named in a config file"
    )
    run.add_argument("config", type=Path, help="TOML config file")
    for name, kind in COMMANDS.items():
        sub = subparsers.add_parser(
            name, parents=[common], help=f"Run the {kind.value} experiment"
        )
        sub.add_argument("--config", type=Path, help="TOML config file")
        if kind is ExperimentKind.REPLAY:
            sub.add_argument("--noise-dir", type=Path, help="Directory of trace files")
            sub.add_argument(
                "--measurements", type=Path, help="CSV with realization,F_measured"
            )
    return parser.parse_args(argv)


def _overrides(args: argparse.Namespace, config: ExperimentConfig) -> dict[str, Any]:
    """Config updates implied by the command-line flags."""
    updates: dict[str, Any] = {}
    sections: dict[str, dict[str, Any]] = {}

    def put(section: str, **values: Any) -> None:
        sections.setdefault(section, {}).update(values)

    if args.command != "run":
        updates["experiment"] = COMMANDS[args.command]
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.workers is not None:
        updates["workers"] = args.workers
    if args.log_level is not None:
        updates["log_level"] = args.log_level

    kind = NoiseKind(args.kind) if args.kind else config.noise.kind
    if args.kind:
        put("noise", kind=kind)
        put("sweep", kinds=(kind,))
        put("rb", noise_kind=kind)
    if args.gamma:
        gamma = args.gamma[0]
        put("noise", gamma=gamma)
        kind_gammas = {**config.sweep.kind_gammas, kind: gamma}
        put("sweep", gammas=tuple(args.gamma), kind_gammas=kind_gammas)
        put("rb", gamma=gamma)
    if args.kappa is not None:
        put("noise", kappa=args.kappa)
        put("rb", kappa=args.kappa)
    if args.realizations is not None:
        put(
            "sweep",
            realizations=args.realizations,
            convergence_realizations=args.realizations,
        )
        put("rb", n_sequences=args.realizations)
        put("psd", n_traces=args.realizations)
    if args.out is not None:
        put("output", output_dir=args.out)
    if args.plots:
        put("output", plots=True)
    if getattr(args, "noise_dir", None) is not None:
        put("replay", noise_dir=args.noise_dir)
    if getattr(args, "measurements", None) is not None:
        put("replay", measurements_file=args.measurements)

    updates.update(sections)
    return updates


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    """Load the config file, if any, and apply the command-line overrides."""
    path = args.config
    config = load_config(path) if path is not None else ExperimentConfig()
    config = config.override(_overrides(args, config))
    config.check_paths()
    return config


def _report(error: dict[str, Any]) -> None:
    print(json.dumps(error, default=str), file=sys.stderr)


def main() -> NoReturn:
    """Main entry point."""
    args = parse_args()
    setup_logging(args.log_level or "INFO")

    try:
        config = build_config(args)
        setup_logging(config.log_level)
        logger.info("noise-fidelity %s: %s", __version__, config.experiment.value)
        tables = run_experiment(config)
    except NoiseFidelityError as e:
        logger.error("%s", e)
        _report(e.to_dict())
        sys.exit(EXIT_ERROR)
    except ValidationError as e:
        logger.error("Invalid configuration: %s", e)
        _report(
            {
                "error": "ValidationError",
                "message": str(e),
                "errors": e.errors(include_url=False),
            }
        )
        sys.exit(EXIT_ERROR)
    except Exception as e:  # pylint: disable=broad-exception-caught
        logger.exception("Unexpected failure")
        _report({"error": type(e).__name__, "message": str(e)})
        sys.exit(EXIT_UNEXPECTED)

    logger.info("Wrote %d tables to %s", len(tables), config.output.output_dir)
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
