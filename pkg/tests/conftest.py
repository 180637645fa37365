import random
from fractions import Fraction
from pathlib import Path

import pytest

from l0mult.enumerator import enumerate_sparsest
from l0mult.errors import NoSolutionWithinCap
from l0mult.linalg import Mat, vec
from l0mult.model import ProblemInstance, parse_instance

DATA = Path(__file__).parent / "data"

CORPUS_SIZE = 200
CORPUS_SEED = 20260809


@pytest.fixture(scope="session")
def example_text():
    return (DATA / "example.json").read_text()


@pytest.fixture(scope="session")
def example(example_text):
    return parse_instance(example_text)


@pytest.fixture(scope="session")
def example_enum(example):
    return enumerate_sparsest(example)


def rand_frac(rng, lim=10):
    return Fraction(rng.randint(-lim, lim), rng.randint(1, lim))


def random_instance(rng):
    m = rng.randint(1, 4)
    n = rng.randint(1, 6)
    l = rng.randint(0, 3)
    eps = rng.choice([Fraction(0), Fraction(1, 10), Fraction(1)])
    a = Mat.from_rows([[rand_frac(rng) for _ in range(n)] for _ in range(m)], cols=n)
    b_mat = Mat.from_rows([[rand_frac(rng) for _ in range(n)] for _ in range(l)], cols=n)
    y = vec(rand_frac(rng) for _ in range(m))
    b = vec(rand_frac(rng) for _ in range(l))
    return ProblemInstance(m=m, n=n, l=l, A=a, B=b_mat, y=y, b=b, epsilon=eps)


@pytest.fixture(scope="session")
def corpus():
    rng = random.Random(CORPUS_SEED)
    return [random_instance(rng) for _ in range(CORPUS_SIZE)]


@pytest.fixture(scope="session")
def corpus_enumerations(corpus):
    """Enumeration results for the feasible corpus instances, computed once."""
    results = []
    for inst in corpus:
        try:
            results.append((inst, enumerate_sparsest(inst)))
        except NoSolutionWithinCap:
            continue
    assert len(results) >= 50, "corpus seed yields too few feasible instances"
    return results
