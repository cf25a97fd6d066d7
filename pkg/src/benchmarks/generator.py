from typing import Tuple

from src.benchmarks.avoid import AvoidGenerator
from src.benchmarks.benchmark_exception import BenchmarkException
from src.benchmarks.benchmark_params import BenchmarkParams
from src.benchmarks.cheese import CheeseGenerator
from src.benchmarks.evade import EvadeGenerator
from src.benchmarks.intercept import InterceptGenerator
from src.benchmarks.obstacle import ObstacleGenerator
from src.benchmarks.refuel import RefuelGenerator
from src.benchmarks.rocks import RocksGenerator
from src.logger.logger import Logger
from src.pomdp.pomdp import Pomdp
from src.pomdp.specification import Specification

logger = Logger(__name__)


def generate(params: BenchmarkParams) -> Tuple[Pomdp, Specification]:
    """
    Generates a benchmark instance; equal params give identical models.

    Raises:
        BenchmarkException: For unsupported families or parameter combinations.
    """
    params.validate()

    if params.family == "cheese":
        generator = CheeseGenerator()
    elif params.family == "obstacle":
        generator = ObstacleGenerator(params.N)
    elif params.family == "refuel":
        generator = RefuelGenerator(params.N, params.E)
    elif params.family == "rocks":
        generator = RocksGenerator(params.N)
    elif params.family == "evade":
        generator = EvadeGenerator(params.N, params.R)
    elif params.family == "intercept":
        generator = InterceptGenerator(params.N, params.R)
    elif params.family == "avoid":
        generator = AvoidGenerator(params.N, params.R)
    else:
        raise BenchmarkException(f"Unsupported benchmark family: {params.family}")

    pomdp, spec = generator.generate()
    logger.info(
        f"Generated {params.label()}: {pomdp.num_states} states, "
        f"{pomdp.transition_count} transitions, {pomdp.num_observations} observations"
    )
    return pomdp, spec
