from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

import pendulum

from src.encoding.decode import PolicyCandidate, decode
from src.encoding.incremental import encode_bounds, encode_fixed, encode_progress, encode_region
from src.encoding.oneshot import encode_oneshot, encode_policy, encode_real_rank
from src.encoding.transform import add_shortcut, lift_specification, original_part, unfold_memory
from src.encoding.variable_book import Family, VariableBook
from src.graph.preprocessing import graph_preprocessing
from src.logger.logger import Logger
from src.pomdp.belief_support import BeliefSupport
from src.pomdp.bits import iter_bits
from src.pomdp.pomdp import Pomdp
from src.pomdp.specification import Specification
from src.pomdp.validation import make_absorbing
from src.solver.solver_backend import CheckStatus
from src.solver.solver_session import CheckResult, SolverSession
from src.synthesis.driver_config import DriverConfig, Goal, Mode
from src.synthesis.progress_log import IterationRecord, ProgressLog
from src.synthesis.synthesis_exception import SynthesisException
from src.winning.predicates import is_deadlock_free, is_productive
from src.winning.region_store import WinningRegionStore

logger = Logger(__name__)


@dataclass
class SynthesisStats:
    iterations: int = 0
    solver_calls: int = 0
    solve_seconds: float = 0.0
    elapsed_seconds: float = 0.0
    refreshes: int = 0


@dataclass
class DriverResult:
    """
    Outcome of a driver run.

    winning tells whether the initial support is covered by the store at the
    end. partial is set when the run stopped on the budget, the iteration
    limit or an inconclusive solver answer; the store is sound either way.
    """

    store: WinningRegionStore
    partial: bool
    stats: SynthesisStats
    winning: bool = False
    policies: List[PolicyCandidate] = field(default_factory=list)
    reason: str = ""


class _Run:
    def __init__(self, pomdp: Pomdp, spec: Specification, config: DriverConfig, log: Optional[ProgressLog]):
        config.validate()
        self.pomdp = pomdp
        self.spec = spec
        self.config = config
        self.log = log
        self.stats = SynthesisStats()
        self.start = pendulum.now()
        self.partial = False
        self.reason = ""
        self.policies: List[PolicyCandidate] = []
        self.initial = BeliefSupport.initial(pomdp)

    def elapsed(self) -> float:
        return (pendulum.now() - self.start).total_seconds()

    def stop(self, reason: str):
        self.partial = True
        self.reason = reason
        logger.warning(f"Synthesis stopped early: {reason}")

    def out_of_budget(self) -> bool:
        limit = self.config.max_iterations
        if limit is not None and self.stats.iterations >= limit:
            self.stop(f"iteration limit of {limit} reached")
            return True
        budget = self.config.budget_seconds
        if budget is not None and self.elapsed() >= budget:
            self.stop(f"time budget of {budget:g} s used up")
            return True
        return False

    def session(self) -> SolverSession:
        return SolverSession(validate_models=self.config.validate_models)

    def check_timeout_ms(self) -> Optional[int]:
        """The configured per-check timeout, capped by what is left of the budget."""
        limits = []
        if self.config.check_timeout_ms is not None:
            limits.append(self.config.check_timeout_ms)
        if self.config.budget_seconds is not None:
            limits.append(max(1, int((self.config.budget_seconds - self.elapsed()) * 1000)))
        return min(limits) if limits else None

    def check(self, session: SolverSession) -> CheckResult:
        before = session.stats.solve_seconds
        result = session.check(timeout_ms=self.check_timeout_ms())
        self.stats.solver_calls += 1
        self.stats.solve_seconds += session.stats.solve_seconds - before
        if result.status is CheckStatus.UNKNOWN:
            logger.warning(f"Solver answered unknown: {result.reason}")
        return result

    def finish_iteration(self, store: WinningRegionStore, pomdp: Pomdp, spec: Specification):
        self.stats.iterations += 1
        size = store.region_size()
        elapsed = self.elapsed()
        logger.info(
            f"Iteration {self.stats.iterations}: {size.live_entries} maximal supports, "
            f"size estimate {size.estimate}, {self.stats.solver_calls} solver calls"
        )
        if self.log is not None:
            self.log.append(
                IterationRecord(
                    iteration=self.stats.iterations,
                    solver_calls=self.stats.solver_calls,
                    live_entries=size.live_entries,
                    size_estimate=size.estimate,
                    elapsed_ms=int(elapsed * 1000),
                )
            )
        if self.config.check_invariants:
            check_region_invariants(store, pomdp, spec)

    def result(self, store: WinningRegionStore) -> DriverResult:
        self.stats.elapsed_seconds = self.elapsed()
        winning = store.is_winning(self.initial)
        duration = pendulum.duration(seconds=self.stats.elapsed_seconds).in_words()
        logger.info(
            f"{self.config.mode.value} finished after {self.stats.iterations} iterations "
            f"({duration or 'under a second'}); initial support "
            f"{'winning' if winning else 'not shown winning'}"
        )
        return DriverResult(store, self.partial, self.stats, winning, self.policies, self.reason)


def check_region_invariants(store: WinningRegionStore, pomdp: Pomdp, spec: Specification):
    """
    Raises:
        SynthesisException: If the store is not deadlock-free or not productive.
    """
    if not is_deadlock_free(store, pomdp):
        raise SynthesisException("Winning region lost deadlock-freedom.")
    if not is_productive(store, pomdp, spec):
        raise SynthesisException("Winning region is not productive.")


def _insert_all(store: WinningRegionStore, supports, num_observations: int) -> int:
    added = 0
    for support in supports:
        if support.observation < num_observations and store.insert(support).added:
            added += 1
    return added


def run_naive_explicit(
    pomdp: Pomdp, spec: Specification, config: DriverConfig, log: Optional[ProgressLog] = None
) -> DriverResult:
    """
    Grows the region by extending the model with one shortcut action per found policy.

    Each iteration encodes a memoryless policy with real-valued ranking and
    progress on the shortcut-extended model in a fresh session.
    """
    run = _Run(pomdp, spec, config, log)
    store = WinningRegionStore.from_reach(pomdp, spec)
    current, current_spec = pomdp, spec
    original = range(pomdp.num_observations)

    while not _initial_done(run, store) and not run.out_of_budget():
        with run.session() as session:
            book = VariableBook(session, current, [Family.REAL_RANK, Family.PROGRESS])
            session.add(*encode_policy(current, current_spec, book))
            session.add(*encode_real_rank(current, current_spec, book))
            session.add(*encode_progress(current, book, store, observations=original))
            result = run.check(session)
        if result.status is CheckStatus.UNKNOWN:
            run.stop(f"solver returned unknown ({result.reason})")
            break
        if not result.is_sat:
            break
        policy, supports = decode(result.model, book)
        run.policies.append(policy)
        _insert_all(store, supports, pomdp.num_observations)
        current, current_spec = add_shortcut(
            current, current_spec, iter_bits(original_part(policy.reached, pomdp.num_states))
        )
        run.finish_iteration(store, pomdp, spec)
    return run.result(store)


def run_naive_incremental(
    pomdp: Pomdp, spec: Specification, config: DriverConfig, log: Optional[ProgressLog] = None
) -> DriverResult:
    """Shortcut encoding rebuilt from scratch in a fresh session every iteration."""
    run = _Run(pomdp, spec, config, log)
    store = WinningRegionStore.from_reach(pomdp, spec)
    while not _initial_done(run, store) and not run.out_of_budget():
        with run.session() as session:
            book = VariableBook(session, pomdp, [Family.REAL_RANK, Family.PROGRESS, Family.SHORTCUT])
            session.add(*encode_fixed(pomdp, spec, book, immediate=True))
            session.add(*encode_region(pomdp, book, store))
            session.add(*encode_bounds(pomdp, book, store))
            session.add(*encode_progress(pomdp, book, store))
            result = run.check(session)
        if result.status is CheckStatus.UNKNOWN:
            run.stop(f"solver returned unknown ({result.reason})")
            break
        if not result.is_sat:
            break
        policy, supports = decode(result.model, book)
        run.policies.append(policy)
        _insert_all(store, supports, pomdp.num_observations)
        run.finish_iteration(store, pomdp, spec)
    return run.result(store)


def _initial_done(run: _Run, store: WinningRegionStore) -> bool:
    return run.config.goal is Goal.INITIAL and store.is_winning(run.initial)


class _IncrementalSynthesis:
    """
    One session kept across iterations with the scope stack
    fixed constraints / region constraints / bounds and progress / pinned actions.
    """

    def __init__(self, run: _Run):
        self.run = run
        self.pomdp = run.pomdp
        self.spec = run.spec
        self.store = WinningRegionStore.from_reach(self.pomdp, self.spec)
        self.unsafe = self._preprocess().unsafe
        self.session: Optional[SolverSession] = None
        self.book: Optional[VariableBook] = None
        self.encoded: Dict[int, int] = {}

    def _preprocess(self):
        result = graph_preprocessing(self.pomdp, self.spec, self.store)
        if result.added:
            logger.debug(f"Graph preprocessing added {result.added} supports")
        return result

    def open_session(self):
        self.session = self.run.session()
        self.book = VariableBook(self.session, self.pomdp, [Family.REAL_RANK, Family.PROGRESS, Family.SHORTCUT])
        self.session.add(*encode_fixed(self.pomdp, self.spec, self.book, immediate=True, unsafe=self.unsafe))
        self.session.push()
        self.encoded = {}
        self.sync_region()

    def close_session(self):
        if self.session is not None:
            self.session.close()
            self.session = None

    def sync_region(self):
        """Back to the region scope, adding constraints for entries created since the last call."""
        if self.session.depth > 1:
            self.session.pop(self.session.depth - 1)
        self.session.add(*encode_region(self.pomdp, self.book, self.store, self.encoded))
        self.encoded = {
            observation: self.store.entry_count(observation) for observation in range(self.pomdp.num_observations)
        }

    def push_progress(self, pins: Set[Tuple[int, int]]):
        self.session.push()
        self.session.add(*encode_bounds(self.pomdp, self.book, self.store))
        self.session.add(*encode_progress(self.pomdp, self.book, self.store))
        if pins:
            self.session.push()
            self.session.add(*(self.book.A(observation, action) for observation, action in sorted(pins)))

    def absorb(self, result: CheckResult) -> PolicyCandidate:
        policy, supports = decode(result.model, self.book)
        self.run.policies.append(policy)
        added = _insert_all(self.store, supports, self.pomdp.num_observations)
        self._preprocess()
        logger.debug(f"Policy added {added} maximal supports")
        return policy

    def check_initial(self) -> bool:
        """Asks for a policy reaching every initial state, progress not required."""
        self.session.push()
        self.session.add(*encode_bounds(self.pomdp, self.book, self.store))
        self.session.add(*(self.book.C(state) for state in self.run.initial.states()))
        result = self.run.check(self.session)
        self.session.pop()
        if result.status is CheckStatus.UNKNOWN:
            self.run.stop(f"solver returned unknown ({result.reason})")
        elif result.is_sat:
            self.absorb(result)
            logger.debug("Initial support covered by the pinned check")
        return result.is_sat

    def refresh_due(self) -> bool:
        config = self.run.config
        return (
            self.run.stats.iterations % config.refresh_period == 0
            or self.store.tombstone_count > config.tombstone_ratio * max(self.store.live_count, 1)
        )

    def refresh(self):
        self.close_session()
        self.store = self.store.compacted()
        self.run.stats.refreshes += 1
        logger.debug(f"Encoding refreshed with {self.store.live_count} entries")
        self.open_session()

    def run_loop(self, initial_checks: bool) -> DriverResult:
        run = self.run
        self.open_session()
        try:
            while True:
                if initial_checks and self.store.is_winning(run.initial):
                    break
                if run.out_of_budget():
                    break
                if initial_checks and self.check_initial():
                    run.finish_iteration(self.store, self.pomdp, self.spec)
                    break
                if run.partial:
                    break
                self.push_progress(set())
                result = run.check(self.session)
                if result.status is CheckStatus.UNKNOWN:
                    run.stop(f"solver returned unknown ({result.reason})")
                    break
                if not result.is_sat:
                    break

                pins: Set[Tuple[int, int]] = set()
                while result.is_sat:
                    policy = self.absorb(result)
                    for observation, actions in policy.actions.items():
                        if result.model.get(self.book.name("U", observation)):
                            pins.update((observation, action) for action in actions)
                    self.sync_region()
                    if initial_checks and self.store.is_winning(run.initial):
                        break
                    if run.out_of_budget():
                        break
                    self.push_progress(pins)
                    result = run.check(self.session)
                    logger.debug(f"Pinned re-check: {result.status.value}")
                    if result.status is CheckStatus.UNKNOWN:
                        run.stop(f"solver returned unknown in a pinned re-check ({result.reason})")
                self.sync_region()
                run.finish_iteration(self.store, self.pomdp, self.spec)
                if run.partial:
                    break
                if self.refresh_due():
                    self.refresh()
        finally:
            self.close_session()
        return run.result(self.store)


def run_incremental(
    pomdp: Pomdp, spec: Specification, config: DriverConfig, log: Optional[ProgressLog] = None
) -> DriverResult:
    """
    Incremental construction with graph preprocessing, action pinning and periodic refresh.

    With goal initial, every outer iteration starts with a check whether a
    policy covering the initial support exists, and the run ends once it does.
    """
    run = _Run(pomdp, spec, config, log)
    return _IncrementalSynthesis(run).run_loop(initial_checks=config.goal is Goal.INITIAL)


def run_initial(
    pomdp: Pomdp, spec: Specification, config: DriverConfig, log: Optional[ProgressLog] = None
) -> DriverResult:
    """Decides whether the initial support is winning; the found policies are in the result."""
    run = _Run(pomdp, spec, config, log)
    return _IncrementalSynthesis(run).run_loop(initial_checks=True)


def run_oneshot(
    pomdp: Pomdp, spec: Specification, config: DriverConfig, log: Optional[ProgressLog] = None
) -> DriverResult:
    """
    Single check for a policy with config.memory memory cells from the initial support.

    The model is unfolded, preprocessed (unsafe states join AVOID, states of
    winning observations join REACH, and so do states that win under every
    policy when their observation holds no REACH state) and encoded with rank
    bound config.rank_bound.
    """
    run = _Run(pomdp, spec, config, log)
    memory = config.memory
    unfolded = unfold_memory(pomdp, memory)
    lifted = lift_specification(spec, memory)

    product_store = WinningRegionStore.from_reach(unfolded, lifted)
    preprocessing = graph_preprocessing(unfolded, lifted, product_store)
    reach = lifted.reach_mask
    for observation in range(unfolded.num_observations):
        states = unfolded.observation_states(observation)
        if observation in preprocessing.winning_observations:
            reach |= states
        elif not states & lifted.reach_mask:
            reach |= states & preprocessing.sure
    avoid = (lifted.avoid_mask | preprocessing.unsafe) & ~reach
    prepared_spec = Specification.of(iter_bits(reach), iter_bits(avoid))
    prepared = make_absorbing(unfolded, prepared_spec)

    store = WinningRegionStore.from_reach(pomdp, spec)
    _insert_all(store, _project(pomdp, product_store.maximal_supports(), memory), pomdp.num_observations)

    if not run.out_of_budget():
        with run.session() as session:
            book = VariableBook(session, prepared, [Family.BOUNDED_RANK], rank_bound=config.rank_bound)
            session.add(*encode_oneshot(prepared, prepared_spec, BeliefSupport.initial(prepared), book))
            result = run.check(session)
        if result.status is CheckStatus.UNKNOWN:
            run.stop(f"solver returned unknown ({result.reason})")
        elif result.is_sat:
            policy, supports = decode(result.model, book)
            run.policies.append(policy)
            _insert_all(store, _project(pomdp, supports, memory), pomdp.num_observations)
        run.finish_iteration(store, pomdp, spec)
    return run.result(store)


def _project(pomdp: Pomdp, supports, memory: int) -> List[BeliefSupport]:
    """Maps supports of the memory product back to the original model, one per memory cell."""
    if memory == 1:
        return list(supports)
    projected = []
    for support in supports:
        members = 0
        for state in support.states():
            members |= 1 << (state // memory)
        projected.append(BeliefSupport(support.observation // memory, members))
    return projected


def run(pomdp: Pomdp, spec: Specification, config: DriverConfig, log: Optional[ProgressLog] = None) -> DriverResult:
    if config.mode is Mode.NAIVE_EXPLICIT:
        return run_naive_explicit(pomdp, spec, config, log)
    elif config.mode is Mode.NAIVE_INCREMENTAL:
        return run_naive_incremental(pomdp, spec, config, log)
    elif config.mode is Mode.INCREMENTAL:
        return run_incremental(pomdp, spec, config, log)
    elif config.mode is Mode.ONESHOT:
        return run_oneshot(pomdp, spec, config, log)
    else:
        raise SynthesisException(f"Unsupported mode: {config.mode}")
