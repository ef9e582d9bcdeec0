import itertools
import math

import numpy as np
import pytest

from procalloc.kvip import KvipInstance
from procalloc.models import (
    Constant,
    ConstantK,
    EvenSplit,
    ImpulseTrain,
    Job,
    LinearKTN,
    PiecewiseConstant,
    PowerLaw,
    StepToInfinity,
    Table,
    job_cost,
)

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_kvip(rng, max_items=4, max_versions=3, max_w=12, max_cap=12, integer=True):
    m = int(rng.integers(0, max_items + 1))
    items = []
    for _ in range(m):
        v = int(rng.integers(0, max_versions + 1))
        ws = rng.integers(0, max_w + 1, size=v)
        if integer:
            vals = rng.integers(-2, 20, size=v).astype(float)
        else:
            vals = rng.uniform(-1, 20, size=v)
        items.append(tuple(zip(ws.tolist(), vals.tolist())))
    return KvipInstance(int(rng.integers(0, max_cap + 1)), float(rng.integers(0, 30)), tuple(items))


def random_table(rng, length):
    """Strictly decreasing head, flat/rising tail, never beating linear speedup."""
    t1 = float(rng.uniform(5, 50))
    vals = [t1]
    s = int(rng.integers(1, length + 1))
    for n in range(2, length + 1):
        if n <= s:
            floor = t1 / n
            vals.append(floor + float(rng.uniform(0.05, 0.95)) * (vals[-1] - floor))
        else:
            vals.append(vals[-1] * float(rng.uniform(1.0, 1.1)))
    return Table(tuple(vals))


def random_rt(rng):
    kind = rng.integers(3)
    if kind == 0:
        return EvenSplit(float(rng.uniform(1, 100)))
    if kind == 1:
        t1 = float(rng.uniform(5, 100))
        return PowerLaw(t1, float(rng.uniform(0, 0.5 * t1)), float(rng.uniform(0.1, 1.0)))
    return random_table(rng, int(rng.integers(1, 10)))


def random_utility(rng):
    kind = rng.integers(4)
    if kind == 0:
        return Constant(float(rng.uniform(0, 20)))
    if kind == 1:
        return StepToInfinity(float(rng.uniform(0, 60)))
    if kind == 2:
        starts = np.sort(rng.choice(np.arange(0, 80), size=int(rng.integers(1, 4)), replace=False))
        return PiecewiseConstant(tuple((float(t), float(rng.uniform(0, 15))) for t in starts))
    locs = np.sort(rng.choice(np.arange(1, 80), size=int(rng.integers(1, 4)), replace=False))
    return ImpulseTrain(tuple((float(t), float(rng.uniform(0, 200))) for t in locs))


def random_coi(rng):
    if rng.random() < 0.7:
        return LinearKTN(float(rng.uniform(0.1, 3)))
    return ConstantK(float(rng.uniform(1, 50)))


def random_jobs(rng, max_jobs=3):
    return tuple(
        Job(f"j{i}", random_rt(rng), random_utility(rng))
        for i in range(int(rng.integers(1, max_jobs + 1)))
    )


def exhaustive_ap(jobs, coi, sets, budget):
    """Best revenue over every combination of optimal-set members (oracle)."""
    best = 0.0
    for combo in itertools.product(*[s.members for s in sets]):
        if sum(combo) > budget:
            continue
        costs = [job_cost(j, coi, n) for j, n in zip(jobs, combo)]
        if any(c == float("inf") for c in costs):
            continue
        best = max(best, sum(costs))
    return best


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def saturating_scenario(rounds=10, k_max=math.inf):
    """Every round brings more long-running work than the cluster can hold."""
    from procalloc.mediator import PricingController, Scenario

    arrivals = tuple(
        tuple(
            Job(f"r{r}j{i}", EvenSplit(float(30 + 7 * i)), Constant(50.0)) for i in range(10)
        )
        for r in range(rounds)
    )
    ctrl = PricingController(target_load=0.9, gain=0.5, k=1.0, k_min=0.5, k_max=k_max)
    return Scenario(8, rounds, ctrl, LinearKTN(1.0), arrivals)
