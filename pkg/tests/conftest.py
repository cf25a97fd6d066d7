import pytest

from src.benchmarks.benchmark_params import BenchmarkParams
from src.benchmarks.generator import generate
from src.graph.oracle import maximal_winning_region
from tests.corpus import corpus_instance


@pytest.fixture(scope="session")
def cheese():
    return generate(BenchmarkParams("cheese"))


@pytest.fixture(scope="session")
def cheese_oracle(cheese):
    pomdp, spec = cheese
    return maximal_winning_region(pomdp, spec)


@pytest.fixture(scope="session")
def obstacle6():
    return generate(BenchmarkParams("obstacle", N=6))


@pytest.fixture(scope="session")
def corpus_oracle():
    """Maximal winning region of a corpus instance, computed once per seed."""
    cache = {}

    def lookup(seed: int):
        if seed not in cache:
            pomdp, spec = corpus_instance(seed)
            cache[seed] = maximal_winning_region(pomdp, spec)
        return cache[seed]

    return lookup
