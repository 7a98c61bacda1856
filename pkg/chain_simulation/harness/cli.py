"""
Command Line Interface

Subcommands:
- simulate       one experiment (config file and/or flags)
- sweep          policies over a p grid, writes sweep.csv
- walk           random-walk bounds, roots and Monte Carlo statistics
- verify-lemmas  Monte Carlo and exhaustive lemma checks, writes lemmas.json
- fit            scaling fits from a sweep.csv
- accept         desk-scale acceptance criteria, writes acceptance.json

Exit status: 0 on success, 1 on a simulation error, violated invariant,
failed lemma or failed acceptance criterion, 2 on an invalid configuration.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from ..config.simulation_config import DonorRule, LemmaName, PolicyName, SimulationConfig, TieBreak
from ..errors import ChainSimulationError, ConfigError
from .acceptance import run_acceptance
from .lemmas import verify_lemmas
from .models import AcceptanceRequest, ExperimentConfig, LemmaRequest, SweepConfig, WalkRequest, load_flat_config
from .sweep import fit_sweep, read_sweep, run_sweep
from .walk_report import build_grid_report, build_walk_report
from .workflow import run_experiment, write_json

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def _overrides(args: argparse.Namespace, keys: List[str]) -> Dict[str, Any]:
    return {key: getattr(args, key) for key in keys if getattr(args, key, None) is not None}


def _load(args: argparse.Namespace) -> Dict[str, Any]:
    return load_flat_config(args.config) if args.config else {}


def _emit(payload: Any) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def cmd_simulate(args: argparse.Namespace) -> int:
    values = _load(args)
    values.update(
        _overrides(
            args,
            ["policy", "p", "c", "donors", "tie_break", "T", "replications", "base_seed", "burn_in", "probe", "output_dir", "workers"],
        )
    )
    if args.eager_edges:
        values["eager_edges"] = True
    report = run_experiment(ExperimentConfig(**values))
    _emit({"aggregate": report.aggregate, "seeds": report.seeds, "outputs": report.outputs})
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    values = _load(args)
    values.update(
        _overrides(
            args,
            ["policies", "p_grid", "c", "donors", "donor_rule", "tie_break", "T", "replications", "base_seed", "output_dir", "workers"],
        )
    )
    frame = run_sweep(SweepConfig(**values))
    print(frame.to_csv(index=False), end="")
    return EXIT_FAILURE if frame["error"].notna().any() else EXIT_OK


def cmd_walk(args: argparse.Namespace) -> int:
    if args.grid:
        reports = build_grid_report(args.steps, seed=args.seed, deltas=args.delta)
    else:
        if None in (args.M, args.K, args.rho, args.beta):
            raise ConfigError("walk needs --M, --K, --rho and --beta (or --grid)")
        request = WalkRequest(
            M=args.M, K=args.K, rho=args.rho, beta=args.beta, steps=args.steps, seed=args.seed,
            deltas=args.delta or [0.05, 0.2],
        )
        reports = [build_walk_report(request)]
    payload = [report.model_dump(mode="json") for report in reports]
    if args.output:
        write_json({"reports": payload}, args.output)
    _emit(payload)
    failed = any(not all(report.checks.values()) for report in reports)
    return EXIT_FAILURE if failed else EXIT_OK


def cmd_verify_lemmas(args: argparse.Namespace) -> int:
    request = LemmaRequest(**_overrides(args, ["lemmas", "trials", "seed"]))
    report = verify_lemmas(request.lemmas, trials=request.trials, seed=request.seed)
    payload = report.model_dump(mode="json")
    if args.output_dir:
        args.output_dir.mkdir(parents=True, exist_ok=True)
        write_json(payload, args.output_dir / SimulationConfig.LEMMAS_FILE)
    _emit(payload)
    return EXIT_OK if report.passed else EXIT_FAILURE


def cmd_fit(args: argparse.Namespace) -> int:
    try:
        frame = read_sweep(args.sweep)
    except OSError as e:
        raise ConfigError(f"cannot read sweep table {args.sweep}: {e}") from e
    fits = fit_sweep(frame)
    _emit({policy: {model: fit.model_dump(mode="json") for model, fit in models.items()} for policy, models in fits.items()})
    return EXIT_OK


def cmd_accept(args: argparse.Namespace) -> int:
    request = AcceptanceRequest(
        **_overrides(args, ["criteria", "T", "replications", "base_seed", "workers", "walk_steps", "lemma_trials", "output_dir"])
    )
    report = run_acceptance(request)
    _emit(report.model_dump(mode="json"))
    return EXIT_OK if report.passed else EXIT_FAILURE



def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chain_simulation", description="Altruistic-donor chain matching simulator")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="Run one experiment")
    simulate.add_argument("--config", type=Path, help="Flat key: value config file")
    simulate.add_argument("--policy", type=PolicyName, choices=list(PolicyName))
    simulate.add_argument("--p", type=float)
    simulate.add_argument("--c", type=float)
    simulate.add_argument("--donors", type=int)
    simulate.add_argument("--tie-break", dest="tie_break", type=TieBreak, choices=list(TieBreak))
    simulate.add_argument("--T", type=int)
    simulate.add_argument("--replications", type=int)
    simulate.add_argument("--seed", dest="base_seed", type=int)
    simulate.add_argument("--burn-in", dest="burn_in", type=float)
    simulate.add_argument("--probe", type=int)
    simulate.add_argument("--eager-edges", action="store_true")
    simulate.add_argument("--output", dest="output_dir", type=Path)
    simulate.add_argument("--workers", type=int)
    simulate.set_defaults(handler=cmd_simulate)

    sweep = sub.add_parser("sweep", help="Run policies over a p grid")
    sweep.add_argument("--config", type=Path)
    sweep.add_argument("--policies", type=PolicyName, nargs="+", choices=list(PolicyName))
    sweep.add_argument("--p-grid", dest="p_grid", type=float, nargs="+")
    sweep.add_argument("--c", type=float)
    sweep.add_argument("--donors", type=int)
    sweep.add_argument("--donor-rule", dest="donor_rule", type=DonorRule, choices=list(DonorRule))
    sweep.add_argument("--tie-break", dest="tie_break", type=TieBreak, choices=list(TieBreak))
    sweep.add_argument("--T", type=int)
    sweep.add_argument("--replications", type=int)
    sweep.add_argument("--seed", dest="base_seed", type=int)
    sweep.add_argument("--output", dest="output_dir", type=Path)
    sweep.add_argument("--workers", type=int)
    sweep.set_defaults(handler=cmd_sweep)

    walk = sub.add_parser("walk", help="Random-walk report")
    walk.add_argument("--M", type=int)
    walk.add_argument("--K", type=float)
    walk.add_argument("--rho", type=float)
    walk.add_argument("--beta", type=float)
    walk.add_argument("--steps", type=int, default=1_000_000)
    walk.add_argument("--seed", type=int, default=0)
    walk.add_argument("--delta", type=float, action="append")
    walk.add_argument("--grid", action="store_true", help="Use the built-in five-point grid")
    walk.add_argument("--output", type=Path)
    walk.set_defaults(handler=cmd_walk)

    lemmas = sub.add_parser("verify-lemmas", help="Check the random-graph lemmas")
    lemmas.add_argument("--lemma", dest="lemmas", type=LemmaName, action="append", choices=list(LemmaName))
    lemmas.add_argument("--trials", type=int)
    lemmas.add_argument("--seed", type=int)
    lemmas.add_argument("--output", dest="output_dir", type=Path)
    lemmas.set_defaults(handler=cmd_verify_lemmas)

    fit = sub.add_parser("fit", help="Fit scaling laws to a sweep table")
    fit.add_argument("sweep", type=Path, help="sweep.csv written by the sweep subcommand")
    fit.set_defaults(handler=cmd_fit)

    accept = sub.add_parser("accept", help="Evaluate the desk-scale acceptance criteria")
    accept.add_argument("--criterion", dest="criteria", type=int, action="append", help="Criterion number 1..10 (all when omitted)")
    accept.add_argument("--T", type=int)
    accept.add_argument("--replications", type=int)
    accept.add_argument("--seed", dest="base_seed", type=int)
    accept.add_argument("--workers", type=int)
    accept.add_argument("--walk-steps", dest="walk_steps", type=int)
    accept.add_argument("--lemma-trials", dest="lemma_trials", type=int)
    accept.add_argument("--output", dest="output_dir", type=Path)
    accept.set_defaults(handler=cmd_accept)


    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except (ValidationError, ConfigError) as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_CONFIG
    except ChainSimulationError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
