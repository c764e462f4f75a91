import functools

import pytest

from fuchsode.oracles import ex1_operator, laguerre_operator
from fuchsode.solver import parse_problem, solve


@functools.lru_cache(maxsize=None)
def ex1_result(size, compute_bound_data=False):
    """Cached solve of the first example with N+1 = size."""
    obj = {"operator": ex1_operator().to_json(),
           "solver": {"N": size - 1, "compute_bound_data": compute_bound_data}}
    return solve(parse_problem(obj, "ex1_n%d" % size))


@functools.lru_cache(maxsize=None)
def laguerre_result(size):
    """Cached solve of the Laguerre-type problem with N+1 = size."""
    obj = {"operator": laguerre_operator().to_json(), "solver": {"N": size - 1}}
    return solve(parse_problem(obj, "laguerre_n%d" % size))


@pytest.fixture(scope="session")
def ex1():
    return ex1_result


@pytest.fixture(scope="session")
def laguerre():
    return laguerre_result
