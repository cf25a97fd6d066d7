"""Default limits shared by the library and the command line."""

ORACLE_NODE_CAP: int = 2 ** 20

REFRESH_PERIOD: int = 50
TOMBSTONE_RATIO: float = 2.0
SYNTHESIS_BUDGET_SECONDS: float = 900.0

ONESHOT_MEMORY: int = 1
ONESHOT_RANK_BOUND: int = 30
MEMORY_STATE_LIMIT: int = 10 ** 6

SIMULATION_STEP_BOUND: int = 10 ** 4
SIMULATION_RUNS: int = 1000
