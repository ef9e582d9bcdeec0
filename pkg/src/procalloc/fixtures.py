"""Worked settings and seeded parameter generators.

The four settings pair a computed optimal set (incumbent recursion) with
the closed form it should reproduce.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import (
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
)
from .optimal import Ex4Params, OptimalSet, analytic_optimal_set, ex4_plateau, optimal_set


@dataclass(frozen=True)
class ExampleResult:
    name: str
    expected: OptimalSet
    computed: OptimalSet

    @property
    def passed(self) -> bool:
        return self.expected.members == self.computed.members


def ex1(n_cap=10) -> ExampleResult:
    job = Job("J1", EvenSplit(100.0), Constant(1.0))
    coi = LinearKTN(2.0)
    return ExampleResult(
        "ex1 even split, k*T*N",
        analytic_optimal_set("ex1", {"t1": 100.0, "k": 2.0}, n_cap),
        optimal_set(job, coi, n_cap),
    )


def ex2(n_cap=20) -> ExampleResult:
    p = {"k": 1.0, "t1": 100.0, "t_inf": 0.0, "alpha": 0.5, "K": 40.0}
    job = Job("J2", PowerLaw(100.0, 0.0, 0.5), StepToInfinity(40.0))
    return ExampleResult(
        "ex2 step utility at K=40",
        analytic_optimal_set("ex2", p, n_cap),
        optimal_set(job, LinearKTN(1.0), n_cap),
    )


EX3_TABLE = Table((10.0, 6.0, 5.0, 5.0))


def ex3_utilities():
    """Utilities whose mass above T(1)=10 covers the flat price 9, so N=1 beats N=0."""
    return [
        Constant(1.0),
        Constant(0.5),
        Constant(250.0),
        StepToInfinity(40.0),
        StepToInfinity(5.5),
        StepToInfinity(0.0),
        PiecewiseConstant(((0.0, 0.0), (6.0, 3.0), (20.0, 0.01))),
        PiecewiseConstant(((5.0, 2.0),)),
        ImpulseTrain(((5.5, 1.0), (12.0, 9.0))),
        ImpulseTrain(((10.0, 100.0),)),
    ]


def ex3(n_cap=10, utility=None) -> ExampleResult:
    job = Job("J3", EX3_TABLE, utility if utility is not None else Constant(1.0))
    return ExampleResult(
        "ex3 flat price, saturation S=3",
        analytic_optimal_set("ex3", {"K": 9.0, "rt": EX3_TABLE}, n_cap),
        optimal_set(job, ConstantK(9.0), n_cap),
    )


EX4 = Ex4Params(k=1.0, a=10.0, alpha=0.5, t1=100.0, t_inf=0.0)


def ex4(n_cap=20, p: Ex4Params = EX4) -> ExampleResult:
    job = Job("J4", p.rt, Constant(p.a))
    top = ex4_plateau(p)
    return ExampleResult(
        "ex4 constant utility a=10",
        OptimalSet(tuple(range(min(top, n_cap) + 1)), n_cap),
        optimal_set(job, LinearKTN(p.k), n_cap),
    )


def run_examples():
    return [ex1(), ex2(), ex3(), ex4()]


def random_ex2_params(rng: np.random.Generator) -> dict:
    t1 = float(rng.uniform(10, 1000))
    t_inf = 0.0 if rng.random() < 0.3 else float(rng.uniform(0, 0.5 * t1))
    alpha = float(rng.uniform(0.2, 0.95))
    lo = PowerLaw(t1, t_inf, alpha).time(150)
    return {
        "k": float(rng.uniform(0.1, 5)),
        "t1": t1,
        "t_inf": t_inf,
        "alpha": alpha,
        "K": float(rng.uniform(lo, 1.05 * t1)),
    }


def random_ex4_params(rng: np.random.Generator) -> Ex4Params:
    t1 = float(rng.uniform(10, 1000))
    return Ex4Params(
        k=float(rng.uniform(0.5, 5)),
        a=float(rng.uniform(0.1, 50)),
        alpha=float(rng.uniform(0.1, 0.8)),
        t1=t1,
        t_inf=0.0 if rng.random() < 0.4 else float(rng.uniform(0, 0.5 * t1)),
    )
