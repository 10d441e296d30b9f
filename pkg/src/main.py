#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    This program simulates trains running one behind the
    other, each made of coupled carriages whose actuators
    suffer faults, under a distributed observer-based
    fault-tolerant cruise controller, and checks the
    spacing and velocity requirements on the result.

     _____________________________________________________________________
    | VERSION | DATE YYYY-MM-DD |                 CONTENT                 |
    |=====================================================================|
    |  0.1.0  |      2026-09-14 | Initial release: carriage models,       |
    |         |                 | fault exosystem, reference profile.     |
    |---------|-----------------|-----------------------------------------|
    |  0.2.0  |      2026-09-22 | Add the state-fault observer and its    |
    |         |                 | gain synthesis by pole placement.       |
    |         |                 | Add the linear error-dynamics oracle.   |
    |---------|-----------------|-----------------------------------------|
    |  0.3.0  |      2026-09-30 | Add the follower and head controllers.  |
    |         |                 | Partial derivatives of the virtual      |
    |         |                 | controls are computed by the new Dual   |
    |         |                 | forward-mode number.                    |
    |---------|-----------------|-----------------------------------------|
    |  0.4.0  |      2026-10-06 | Add the Simulator with the RK4          |
    |         |                 | integrator, the Gaussian disturbance    |
    |         |                 | and the requirement monitor.            |
    |         |                 | Barrier arguments are saturated instead |
    |         |                 | of aborting the run, unless asked.      |
    |---------|-----------------|-----------------------------------------|
    |  0.5.0  |      2026-10-12 | Add the run, validate and export        |
    |         |                 | commands, the CSV records and the JSON  |
    |         |                 | summaries.                              |
    |         |                 | Batch runs over several configs, presets|
    |         |                 | and seeds, optionally in parallel.      |
    |---------|-----------------|-----------------------------------------|
    |  1.0.0  |      2026-10-18 | Drop the GUI and the hotkey libraries.  |
    |         |                 | Plant and composite representations can |
    |         |                 | run side by side.                       |
     ‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾
"""


# =--------------= #
# Libraries import #
# =--------------= #

from typing             import Any, Dict, List, Optional, Sequence, Tuple
from concurrent.futures import ProcessPoolExecutor
from dataclasses        import dataclass, field
from pathlib            import Path
from src.config         import OVERRIDE_PATHS, ScenarioConfig, config_hash, load_config, load_preset, save_config
from src.errors         import ConfigurationError, ConstraintViolationError, IntegrationError
from src.Simulator      import run_scenario
import argparse
import logging
import sys
import src.logger as logger
import src.utils  as utils

# =------------------------------------------------------------------------------------------------= #


# =--------= #
# Authorship #
# =--------= #

__author__       = "TrainCruise contributors"
__date__         = "2026-10-18"
__license__      = "LGPL-2.1"
__status__       = "Production"
__version__      = "1.0.0"

# =-------------------------------------------------= #


# =-------------= #
# Global variable #
# =-------------= #

# Process exit codes.
EXIT_PASS: int = 0
EXIT_VERDICT: int = 1
EXIT_CONFIG: int = 2
EXIT_RUNTIME: int = 3

# =------------------------= #


# =----------= #
# Domain types #
# =----------= #

@dataclass(frozen=True)
class RunJob:
    """One scenario run of a batch; everything a worker process needs."""
    kind:       str
    source:     str
    overrides:  Dict[str, Any]
    directory:  Path
    no_verdict: bool
    log_level:  int


@dataclass
class OutputBundle:
    """Files written by one run, and its outcome."""
    record_file:    Optional[Path]
    summary_file:   Path
    exit_code:      int
    companion_file: Optional[Path] = None
    passed:         Optional[bool] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "record": str(self.record_file) if self.record_file else None,
            "companion_record": str(self.companion_file) if self.companion_file else None,
            "summary": str(self.summary_file),
            "exit_code": self.exit_code,
            "passed": self.passed,
        }

# =---------------------------------------------------------------= #


# =------------------------= #
# Scenario loading functions #
# =------------------------= #

def cli_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Dotted-path overrides requested on the command line, seeds excepted."""
    overrides: Dict[str, Any] = {}
    if getattr(args, "step", None) is not None:
        overrides[OVERRIDE_PATHS["step"]] = args.step
    if getattr(args, "duration", None) is not None:
        overrides[OVERRIDE_PATHS["duration"]] = args.duration
    if getattr(args, "no_noise", False):
        overrides[OVERRIDE_PATHS["noise"]] = False
    if getattr(args, "representation", None) is not None:
        overrides[OVERRIDE_PATHS["representation"]] = args.representation
    if getattr(args, "abort_on_violation", False):
        overrides[OVERRIDE_PATHS["abort_on_violation"]] = True
    if getattr(args, "decimate", None) is not None:
        overrides[OVERRIDE_PATHS["decimate"]] = args.decimate
    return overrides


def load_source(kind: str, source: str, overrides: Dict[str, Any]) -> ScenarioConfig:
    """Load a config file ("config") or a preset ("preset")."""
    return load_config(source, overrides) if kind == "config" else load_preset(source, overrides)


def scenario_sources(args: argparse.Namespace) -> List[Tuple[str, str]]:
    """Every (kind, source) pair given, the shipped preset by default."""
    sources: List[Tuple[str, str]] = [("config", path) for path in args.config or []]
    sources.extend(("preset", name) for name in args.preset or [])
    return sources or [("preset", "paper-s5")]

# =----------------------------------------------------------------------------------------------------= #


# =-----------= #
# Run functions #
# =-----------= #

def execute_job(job: RunJob) -> OutputBundle:
    """
    Run one scenario and write its record and summary in the job directory.
    Every failure is turned into a summary carrying a structured report.

    :param RunJob job: The job.
    :rtype: OutputBundle
    """

    # Worker processes set their own logger up.
    logger.init_logger(job.log_level)
    summary_file: Path = job.directory / "summary.json"
    summary: Dict[str, Any] = {"source": job.source, "kind": job.kind, "overrides": job.overrides}

    try:
        # Load, then run.
        config: ScenarioConfig = load_source(job.kind, job.source, job.overrides)
        summary.update({"config_name": config.name, "config_hash": config_hash(config), "seed": config.noise.seed})
        save_config(config, job.directory / "config.json")
        record, report = run_scenario(config)

        # Time series.
        record_file: Path = job.directory / "record.csv"
        record.write_csv(record_file)
        companion_file: Optional[Path] = None
        if record.companion is not None:
            companion_file = job.directory / "record_plant.csv"
            record.companion.write_csv(companion_file)

        # Summary.
        summary.update(report.to_dict())
        exit_code: int = EXIT_PASS if report.passed or job.no_verdict else EXIT_VERDICT
        summary["exit_code"] = exit_code
        utils.json_write(summary, summary_file)
        return OutputBundle(record_file, summary_file, exit_code, companion_file, report.passed)

    except ConfigurationError as e:
        logger.error(f"{job.source}: {e}")
        summary.update(e.to_dict())
        exit_code = EXIT_CONFIG
    except ConstraintViolationError as e:
        logger.error(f"{job.source}: {e}")
        summary.update({"error": "constraint_violation", "message": str(e), "time_s": e.time, "pair": e.pair, "quantity": e.quantity})
        exit_code = EXIT_VERDICT
    except IntegrationError as e:
        logger.critical(f"{job.source}: {e}")
        summary.update({"error": "integration", "message": str(e), "time_s": e.time, "states": e.labels})
        exit_code = EXIT_RUNTIME

    summary["exit_code"] = exit_code
    utils.json_write(summary, summary_file)
    return OutputBundle(None, summary_file, exit_code)


def plan_jobs(args: argparse.Namespace, out: Path) -> List[RunJob]:
    """One job per source and seed, each with its own fresh directory."""
    overrides: Dict[str, Any] = cli_overrides(args)
    seeds: Sequence[Optional[int]] = args.seed or [None]
    level: int = log_level(args)
    jobs: List[RunJob] = []

    for kind, source in scenario_sources(args):
        for seed in seeds:

            # Seed override and directory stem.
            job_overrides: Dict[str, Any] = dict(overrides)
            stem: str = Path(source).stem if kind == "config" else source
            if seed is not None:
                job_overrides[OVERRIDE_PATHS["seed"]] = seed
                stem = f"{stem}-seed{seed}"

            # Directories are claimed here, before any worker starts.
            directory: Path = utils.next_run_directory_available(out, stem)
            directory.mkdir(parents=True)
            jobs.append(RunJob(kind, source, job_overrides, directory, args.no_verdict, level))

    return jobs


def run_command(args: argparse.Namespace) -> int:
    """
    Execute every requested scenario and write the batch index.

    :returns: The worst exit code of the batch.
    :rtype: int
    """
    out: Path = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    jobs: List[RunJob] = plan_jobs(args, out)

    # Sequential or pooled execution.
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            bundles: List[OutputBundle] = list(pool.map(execute_job, jobs))
    else:
        bundles = [execute_job(job) for job in jobs]

    # Batch index.
    index: Dict[str, Any] = {
        "version": __version__,
        "runs": [{"source": job.source, "kind": job.kind, "directory": str(job.directory), **bundle.to_dict()} for job, bundle in zip(jobs, bundles)],
    }
    utils.json_write(index, out / "index.json")
    return max(bundle.exit_code for bundle in bundles)


def validate_command(args: argparse.Namespace) -> int:
    """Load and validate every source, printing a JSON report."""
    overrides: Dict[str, Any] = cli_overrides(args)
    reports: List[Dict[str, Any]] = []
    exit_code: int = EXIT_PASS

    for kind, source in scenario_sources(args):
        try:
            config: ScenarioConfig = load_source(kind, source, overrides)
            reports.append({"source": source, "valid": True, "config_hash": config_hash(config)})
        except ConfigurationError as e:
            reports.append({"source": source, "valid": False, **e.to_dict()})
            exit_code = EXIT_CONFIG

    print(utils.json_dumps(reports))
    return exit_code


def export_command(args: argparse.Namespace) -> int:
    """Write a preset, fully spelled out, as a config file."""
    try:
        config: ScenarioConfig = load_preset(args.preset)
    except ConfigurationError as e:
        print(utils.json_dumps(e.to_dict()))
        return EXIT_CONFIG
    destination: Path = Path(args.out)
    destination.parent.mkdir(parents=True, exist_ok=True)
    save_config(config, destination)
    logger.info(f"preset {args.preset!r} exported to {destination}")
    return EXIT_PASS

# =------------------------------------------------------------------------------------------------------------------= #


# =----------------------= #
# Argument parser function #
# =----------------------= #

def log_level(args: argparse.Namespace) -> int:
    if getattr(args, "verbose", False):
        return logging.DEBUG
    if getattr(args, "quiet", False):
        return logging.WARNING
    return logging.INFO


def build_parser() -> argparse.ArgumentParser:
    """Command line of the run, validate and export commands."""
    parser: argparse.ArgumentParser = argparse.ArgumentParser(prog="traincruise", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="log debug messages")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="log warnings and errors only")
    commands = parser.add_subparsers(dest="command", required=True)

    # Options shared by run and validate.
    scenario: argparse.ArgumentParser = argparse.ArgumentParser(add_help=False)
    scenario.add_argument("--config", action="append", metavar="PATH", help="scenario JSON file (repeatable)")
    scenario.add_argument("--preset", action="append", metavar="NAME", help="built-in scenario (repeatable)")
    scenario.add_argument("--step", type=float, metavar="S", help="integration step (s)")
    scenario.add_argument("--duration", type=float, metavar="S", help="horizon (s)")
    scenario.add_argument("--no-noise", action="store_true", help="disable the Gaussian disturbance")
    scenario.add_argument("--representation", choices=("composite", "plant", "both"))
    scenario.add_argument("--abort-on-violation", action="store_true", help="stop at the first barrier saturation")
    scenario.add_argument("--decimate", type=int, metavar="N", help="record every N steps")

    # run.
    run = commands.add_parser("run", parents=[scenario], help="simulate scenarios and check the requirements")
    run.add_argument("--out", default="out", metavar="DIR", help="output directory")
    run.add_argument("--seed", type=int, action="append", metavar="U64", help="disturbance seed (repeatable)")
    run.add_argument("--jobs", type=int, default=1, metavar="N", help="parallel worker processes")
    run.add_argument("--no-verdict", action="store_true", help="exit 0 even when a requirement fails")
    run.set_defaults(handler=run_command)

    # validate.
    validate = commands.add_parser("validate", parents=[scenario], help="check scenarios without running them")
    validate.set_defaults(handler=validate_command)

    # export.
    export = commands.add_parser("export", help="write a preset as a config file")
    export.add_argument("--preset", default="paper-s5", metavar="NAME")
    export.add_argument("--out", required=True, metavar="PATH")
    export.set_defaults(handler=export_command)

    return parser

# =---------------------------------------------------------------------------------------------------------------= #


# =-----------= #
# Main function #
# =-----------= #

def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Main function.

    :param argv: The command line arguments. By default, sys.argv[1:].
    :returns: The process exit code.
    :rtype: int
    """

    # Parse the command line and set the logger up.
    args: argparse.Namespace = build_parser().parse_args(argv)
    logger.init_logger(log_level(args))

    # Dispatch.
    exit_code: int = args.handler(args)
    logger.info(f"{args.command} finished with exit code {exit_code}")
    return exit_code

# =-------------------------------------------= #


#   Run the main function is
# this script is run directly.
if __name__ == '__main__':
    sys.exit(main())
