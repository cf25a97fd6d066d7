import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Tuple

from src.benchmarks.benchmark_exception import BenchmarkException
from src.benchmarks.benchmark_params import FAMILIES, BenchmarkParams
from src.benchmarks.explicit_format import emit_explicit, load_explicit
from src.benchmarks.generator import generate
from src.config.defaults import ORACLE_NODE_CAP, SIMULATION_RUNS, SIMULATION_STEP_BOUND
from src.graph.graph_exception import BudgetExceededException
from src.graph.oracle import maximal_winning_region
from src.jani.exporter import export_jani
from src.logger.logger import Logger
from src.pomdp.belief_support import BeliefSupport
from src.pomdp.pomdp import Pomdp
from src.pomdp.pomdp_exception import PomdpException
from src.pomdp.specification import Specification
from src.simulation.agents import UniformRandomAgent
from src.simulation.ascii_grid import render_grid
from src.simulation.simulation_exception import SimulationException
from src.simulation.simulator import simulate_many
from src.simulation.statistics import evaluate, save_simulation_report, summary_table
from src.simulation.trace import export_traces
from src.synthesis.driver import run
from src.synthesis.driver_config import DriverConfig, Goal, Mode
from src.synthesis.progress_log import ProgressLog
from src.synthesis.report import save_synthesis_report
from src.synthesis.synthesis_exception import SynthesisException
from src.winning.predicates import is_deadlock_free, is_productive
from src.winning.region_exception import RegionException
from src.winning.region_io import dump_region, read_region, save_region
from src.winning.region_report import region_report
from src.winning.shield import Shield

logger = Logger(__name__)

EXIT_OK = 0
EXIT_NOT_WINNING = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4


class CliException(Exception):
    def __init__(self, message):
        super().__init__(message)


def _add_instance_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("model", nargs="?", help="model file in the explicit format")
    parser.add_argument("--family", choices=FAMILIES, help="generate the instance instead of loading it")
    parser.add_argument("--N", type=int, help="grid size")
    parser.add_argument("--E", type=int, help="battery capacity (refuel)")
    parser.add_argument("--R", type=int, help="view radius (evade, intercept, avoid)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pomdp-shield", description="Winning regions and shields for almost-sure reach-avoid POMDPs."
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="log debug output")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="log warnings and errors only")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="generate a benchmark instance")
    gen.add_argument("--family", choices=FAMILIES, required=True)
    gen.add_argument("--N", type=int)
    gen.add_argument("--E", type=int)
    gen.add_argument("--R", type=int)
    gen.add_argument("-o", "--output", help="output file (stdout when omitted)")

    solve = commands.add_parser("solve", help="compute a winning region")
    _add_instance_arguments(solve)
    solve.add_argument("--mode", choices=[mode.value for mode in Mode], default=Mode.INCREMENTAL.value)
    solve.add_argument("--goal", choices=[goal.value for goal in Goal], default=Goal.FIXPOINT.value)
    defaults = DriverConfig()
    solve.add_argument("-m", "--memory", type=int, default=defaults.memory, help="memory cells (oneshot)")
    solve.add_argument("-k", "--rank-bound", type=int, default=defaults.rank_bound, help="rank bound (oneshot)")
    solve.add_argument("--refresh-period", type=int, default=defaults.refresh_period)
    solve.add_argument("--tombstone-ratio", type=float, default=defaults.tombstone_ratio)
    solve.add_argument("--timeout-ms", type=int, help="per-check solver timeout")
    solve.add_argument("--budget", type=float, default=defaults.budget_seconds, help="global budget in seconds")
    solve.add_argument("--max-iterations", type=int)
    solve.add_argument("--validate-models", action="store_true", help="re-check every solver model against the assertions")
    solve.add_argument("--no-invariant-checks", action="store_true", help="skip region checks after iterations")
    solve.add_argument("-o", "--output", help="region file to write")
    solve.add_argument("--progress", help="JSON-lines progress log to write")
    solve.add_argument("--report", help="Excel report to write")

    check = commands.add_parser("check-region", help="audit a region file")
    _add_instance_arguments(check)
    check.add_argument("--region", required=True, help="region file")
    check.add_argument("--cap", type=int, default=ORACLE_NODE_CAP, help="oracle node cap")

    sim = commands.add_parser("shield-simulate", help="simulate a shielded or unshielded agent")
    _add_instance_arguments(sim)
    sim.add_argument("--region", help="region file for the shield (computed when omitted)")
    sim.add_argument("--no-shield", action="store_true", help="offer all enabled actions")
    sim.add_argument("--safety-only", action="store_true", help="accept deadlock-free regions that are not productive")
    sim.add_argument("--runs", type=int, default=SIMULATION_RUNS)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--max-steps", type=int, default=SIMULATION_STEP_BOUND)
    sim.add_argument("--initial-state", help="name of the true initial state")
    sim.add_argument("--jobs", type=int, default=1)
    sim.add_argument("--traces", help="JSON-lines trace file to write")
    sim.add_argument("--report", help="Excel report to write")
    sim.add_argument("--ascii", action="store_true", help="print the grid of every step of the first trace")

    jani = commands.add_parser("export-jani", help="write the belief-support MDP as JANI")
    _add_instance_arguments(jani)
    jani.add_argument("-o", "--output", help="output file (stdout when omitted)")
    jani.add_argument("--pin-p", action="store_true", help="give the probability constant p the value 1/|observations|")

    oracle = commands.add_parser("oracle", help="explicit maximal winning region")
    _add_instance_arguments(oracle)
    oracle.add_argument("--cap", type=int, default=ORACLE_NODE_CAP, help="node cap")
    oracle.add_argument("--from-initial", action="store_true", help="explore from the initial support only")
    oracle.add_argument("-o", "--output", help="region file to write")
    return parser


def _params(args) -> BenchmarkParams:
    return BenchmarkParams(args.family, N=args.N, E=args.E, R=args.R)


def _load_instance(args) -> Tuple[Pomdp, Specification, str]:
    if args.family and args.model:
        raise CliException("Give either a model file or --family, not both.")
    if args.family:
        params = _params(args)
        pomdp, spec = generate(params)
        return pomdp, spec, params.label()
    if not args.model:
        raise CliException("A model file or --family is required.")
    pomdp, spec = load_explicit(args.model)
    return pomdp, spec, Path(args.model).stem


def _write(text: str, output: Optional[str]):
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _command_gen(args) -> int:
    pomdp, spec = generate(_params(args))
    _write(emit_explicit(pomdp, spec), args.output)
    return EXIT_OK


def _driver_config(args) -> DriverConfig:
    config = DriverConfig(
        mode=Mode(args.mode),
        goal=Goal(args.goal),
        memory=args.memory,
        rank_bound=args.rank_bound,
        refresh_period=args.refresh_period,
        tombstone_ratio=args.tombstone_ratio,
        check_timeout_ms=args.timeout_ms,
        budget_seconds=args.budget,
        max_iterations=args.max_iterations,
        validate_models=args.validate_models,
        check_invariants=not args.no_invariant_checks,
    )
    try:
        config.validate()
    except SynthesisException as e:
        raise CliException(str(e))
    return config


def _command_solve(args) -> int:
    config = _driver_config(args)
    pomdp, spec, instance = _load_instance(args)
    log = ProgressLog(args.progress)
    try:
        result = run(pomdp, spec, config, log)
    finally:
        log.close()

    if args.output:
        save_region(args.output, result.store, pomdp)
    if args.report:
        save_synthesis_report(args.report, result, log, config.mode.value, instance)

    size = result.store.region_size()
    print("winning" if result.winning else "not winning")
    print(f"maximal supports: {size.live_entries}, size estimate: {size.estimate}")
    if result.partial:
        print(f"partial result: {result.reason}")
        return EXIT_BUDGET
    decides_initial = config.goal is Goal.INITIAL or config.mode is Mode.ONESHOT
    if decides_initial and not result.winning:
        if config.mode is Mode.ONESHOT:
            print("not winning with these parameters")
        return EXIT_NOT_WINNING
    return EXIT_OK


def _command_check_region(args) -> int:
    pomdp, spec, _ = _load_instance(args)
    store = read_region(args.region, pomdp)
    report = region_report(store, pomdp, spec, cap=args.cap)
    print("\n".join(report.lines()))
    return EXIT_OK if report.ok else EXIT_NOT_WINNING


def _command_simulate(args) -> int:
    pomdp, spec, instance = _load_instance(args)
    shield = None
    if not args.no_shield:
        if args.region:
            store = read_region(args.region, pomdp)
        else:
            store = run(pomdp, spec, DriverConfig()).store
        if not is_deadlock_free(store, pomdp):
            raise CliException("Region is not deadlock-free; the shield would offer no action in some support.")
        if not args.safety_only and not is_productive(store, pomdp, spec):
            raise CliException("Region is not productive; use --safety-only to simulate anyway.")
        shield = Shield(store, pomdp)

    initial_state = pomdp.state_index(args.initial_state) if args.initial_state else None
    traces = simulate_many(
        pomdp,
        spec,
        args.runs,
        shield=shield,
        agent=UniformRandomAgent(),
        seed=args.seed,
        max_steps=args.max_steps,
        initial_state=initial_state,
        jobs=args.jobs,
    )
    statistics = evaluate(traces)
    logger.info(f"{instance}: {statistics.runs} runs, reach rate {statistics.reach_rate:.4f}")
    print(summary_table(statistics))

    if args.ascii and traces:
        for step in traces[0].steps:
            grid = render_grid(pomdp, step.state, step.support)
            if grid is None:
                logger.warning("State names carry no grid coordinates; skipping the ASCII dump.")
                break
            print(f"{pomdp.action_names[step.chosen]}:\n{grid}\n")
    if args.traces:
        export_traces(args.traces, traces, pomdp)
    if args.report:
        save_simulation_report(args.report, traces, statistics)
    if shield is not None and statistics.violations:
        return EXIT_NOT_WINNING
    return EXIT_OK


def _command_export_jani(args) -> int:
    pomdp, spec, _ = _load_instance(args)
    _write(export_jani(pomdp, spec, pin_p=args.pin_p).to_json(), args.output)
    return EXIT_OK


def _command_oracle(args) -> int:
    pomdp, spec, _ = _load_instance(args)
    store = maximal_winning_region(pomdp, spec, cap=args.cap, from_initial=args.from_initial)
    winning = store.is_winning(BeliefSupport.initial(pomdp))
    print("winning" if winning else "not winning")
    if args.output:
        save_region(args.output, store, pomdp)
    else:
        sys.stdout.write(dump_region(store, pomdp))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    if args.verbose:
        Logger.set_level(logging.DEBUG)
    elif args.quiet:
        Logger.set_level(logging.WARNING)

    if args.command == "gen":
        handler = _command_gen
    elif args.command == "solve":
        handler = _command_solve
    elif args.command == "check-region":
        handler = _command_check_region
    elif args.command == "shield-simulate":
        handler = _command_simulate
    elif args.command == "export-jani":
        handler = _command_export_jani
    else:
        handler = _command_oracle

    try:
        return handler(args)
    except (CliException, BenchmarkException, RegionException, PomdpException, SimulationException, OSError) as e:
        logger.error(f"Error: {e}")
        return EXIT_USAGE
    except BudgetExceededException as e:
        logger.error(f"Error: {e}")
        return EXIT_BUDGET
    except Exception as e:
        logger.exception(f"Internal error: {e}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
