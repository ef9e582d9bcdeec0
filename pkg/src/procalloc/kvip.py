"""Knapsack with versioned items, and the allocation problem built on it.

Each item offers several (weight, value) versions of which at most one may
be packed. Weights are integer processor counts, values are real prices.
The allocation problem maps one item to each job, with one version per
nonzero member of the job's optimal set.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Hashable, Optional, Sequence

import numpy as np

from . import _kernels
from .models import (
    INF,
    CoIModel,
    DomainError,
    Grid,
    ImpulseTrain,
    Job,
    RunningTimeModel,
    Table,
    job_cost,
)
from .optimal import OptimalSet, optimal_set

log = logging.getLogger(__name__)

Version = tuple[int, float]

BRUTEFORCE_LIMIT = 10**7


@dataclass(frozen=True)
class KvipInstance:
    capacity: int
    target: float
    items: tuple[tuple[Version, ...], ...]

    def __post_init__(self):
        items = tuple(tuple((int(w), float(v)) for w, v in versions) for versions in self.items)
        object.__setattr__(self, "items", items)
        for i, versions in enumerate(items):
            for w, v in versions:
                if w < 0:
                    raise DomainError(f"item {i}: negative weight {w}")
                if not math.isfinite(v):
                    raise DomainError(f"item {i}: non-finite value {v}")

    def pruned(self) -> "KvipInstance":
        return KvipInstance(self.capacity, self.target, tuple(prune_dominated(v) for v in self.items))


@dataclass(frozen=True)
class Selection:
    """Chosen version index per item (0-based), ``None`` meaning skipped."""

    choices: tuple[Optional[int], ...]

    def weight(self, inst: KvipInstance) -> int:
        return sum(inst.items[i][j][0] for i, j in enumerate(self.choices) if j is not None)

    def value(self, inst: KvipInstance) -> float:
        # right fold, the same association the DP uses
        total = 0.0
        for i in range(len(self.choices) - 1, -1, -1):
            j = self.choices[i]
            if j is not None:
                total = inst.items[i][j][1] + total
        return total

    def describe(self) -> str:
        return " ".join(
            f"{i}:skip" if j is None else f"{i}:v{j + 1}" for i, j in enumerate(self.choices)
        )


def prune_dominated(versions: Sequence[Version]) -> list[Version]:
    """Drop every version matched or beaten by another of no greater weight."""
    out: list[Version] = []
    best = -INF
    for w, v in sorted(versions, key=lambda x: (x[0], -x[1])):
        if v > best:
            out.append((w, v))
            best = v
    return out


def _flatten(inst: KvipInstance):
    offsets = np.zeros(len(inst.items) + 1, dtype=np.int64)
    offsets[1:] = np.cumsum([len(v) for v in inst.items])
    weights = np.array([w for vs in inst.items for w, _ in vs], dtype=np.int64)
    values = np.array([v for vs in inst.items for _, v in vs], dtype=np.float64)
    return offsets, weights, values


def kvip_optimize(inst: KvipInstance) -> tuple[float, Selection]:
    """Best total value within capacity, with a witness selection.

    Ties go to the lower total weight, then to the lexicographically smallest
    choice vector (skip before version 1 before version 2 ...).
    """
    if inst.capacity < 0:
        raise DomainError(f"negative capacity {inst.capacity}")
    cap = inst.capacity
    g = _kernels.suffix_table(*_flatten(inst), cap)
    row = g[0]
    best = row.max()
    c = int(np.flatnonzero(row == best)[0])
    choices: list[Optional[int]] = []
    for i, versions in enumerate(inst.items):
        want = g[i, c]
        if g[i + 1, c] == want:
            choices.append(None)
            continue
        for j, (w, v) in enumerate(versions):
            if w <= c and v + g[i + 1, c - w] == want:
                choices.append(j)
                c -= w
                break
        else:  # pragma: no cover
            raise AssertionError("DP reconstruction lost its path")
    return float(best), Selection(tuple(choices))


def kvip_decision(inst: KvipInstance) -> bool:
    if inst.capacity < 0:
        return False
    if inst.target <= 0:
        return True
    return kvip_optimize(inst)[0] >= inst.target


def kvip_bruteforce(inst: KvipInstance) -> tuple[float, Selection]:
    """Exhaustive enumeration with the same tie-breaking as :func:`kvip_optimize`."""
    if inst.capacity < 0:
        raise DomainError(f"negative capacity {inst.capacity}")
    size = math.prod(len(v) + 1 for v in inst.items)
    if size > BRUTEFORCE_LIMIT:
        raise DomainError(f"{size} selections exceed the brute-force limit {BRUTEFORCE_LIMIT}")
    options = [[None, *range(len(v))] for v in inst.items]
    best_val, best_w, best_sel = -INF, None, None
    for combo in itertools.product(*options):
        sel = Selection(combo)
        w = sel.weight(inst)
        if w > inst.capacity:
            continue
        val = sel.value(inst)
        if val > best_val or (val == best_val and w < best_w):
            best_val, best_w, best_sel = val, w, sel
    return best_val, best_sel


# ---------------------------------------------------------------------------
# allocation problem


@dataclass(frozen=True)
class ApInstance:
    budget: int
    target: float
    jobs: tuple[Job, ...]
    coi: CoIModel
    n_cap: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "jobs", tuple(self.jobs))
        if self.budget < 0:
            raise DomainError(f"negative budget {self.budget}")
        ids = [j.id for j in self.jobs]
        if len(set(ids)) != len(ids):
            raise DomainError("job ids must be unique")

    @property
    def cap(self) -> int:
        # grants above the budget can never be used
        return self.n_cap if self.n_cap is not None else max(self.budget, 1)


@dataclass(frozen=True)
class ApTransform:
    instance: KvipInstance
    optimal_sets: tuple[OptimalSet, ...]
    members: tuple[tuple[int, ...], ...]  # processor count behind each version
    dropped: tuple[tuple[Hashable, int], ...] = ()

    def grants(self, jobs: Sequence[Job], sel: Selection) -> dict:
        return {
            job.id: 0 if j is None else self.members[i][j]
            for i, (job, j) in enumerate(zip(jobs, sel.choices))
        }


@dataclass(frozen=True)
class Allocation:
    grants: dict
    costs: dict
    revenue: float
    accepted: bool
    dropped: tuple = field(default=())

    @property
    def used(self) -> int:
        return sum(self.grants.values())


def ap_to_kvip(ap: ApInstance) -> ApTransform:
    sets, items, members, dropped = [], [], [], []
    for job in ap.jobs:
        nstar = optimal_set(job, ap.coi, ap.cap)
        versions, ns = [], []
        for n in nstar.members[1:]:
            c = job_cost(job, ap.coi, n)
            if c == INF:
                log.warning("job %r: cost at N=%d is infinite, member dropped", job.id, n)
                dropped.append((job.id, n))
                continue
            versions.append((n, c))
            ns.append(n)
        sets.append(nstar)
        items.append(tuple(versions))
        members.append(tuple(ns))
    inst = KvipInstance(ap.budget, ap.target, tuple(items))
    return ApTransform(inst, tuple(sets), tuple(members), tuple(dropped))


def solve_ap(ap: ApInstance) -> Allocation:
    tr = ap_to_kvip(ap)
    revenue, sel = kvip_optimize(tr.instance)
    grants = tr.grants(ap.jobs, sel)
    costs = {job.id: job_cost(job, ap.coi, grants[job.id]) for job in ap.jobs}
    return Allocation(grants, costs, revenue, revenue >= ap.target, tr.dropped)


# ---------------------------------------------------------------------------
# knapsack -> allocation instance generator


def _normalize_item(versions: Sequence[Version]) -> tuple[list[Version], float]:
    # a free version (weight 0) is always worth packing: fold its value into an offset
    free = max([v for w, v in versions if w == 0] + [0.0])
    shifted = [(w, v - free) for w, v in versions]
    kept = prune_dominated([(0, 0.0), *shifted])
    assert kept[0] == (0, 0.0)
    return kept[1:], free


def reduce_kvip_to_ap(inst: KvipInstance, t_base: RunningTimeModel) -> ApInstance:
    """Build an allocation instance answering the same yes/no question as ``inst``.

    Every job shares the saturation point ``S`` (the largest weight). Job
    running times are ``t_base`` nudged upward by less than the smallest gap
    between consecutive base times, cheaper jobs nudged less. The cost surface
    is a :class:`Grid` pricing each job's version points at the version value
    and its other points at ``inf``. Impulse utilities sit at the version
    running times, so each job's optimal set is 0 plus its version weights.
    """
    if inst.capacity < 0:
        raise DomainError("capacity must be >= 0")
    normalized = [_normalize_item(v) for v in inst.items]
    offset = sum(free for _, free in normalized)
    versions = [vs for vs, _ in normalized]
    m = len(versions)
    s = max([w for vs in versions for w, _ in vs] + [1])

    base = [t_base.time(n) for n in range(1, s + 1)]
    for n in range(2, s + 1):
        if not base[n - 1] < base[n - 2]:
            raise DomainError(f"base running time not decreasing at N={n}")
        if base[n - 1] * n < base[0] * (1 - 1e-12):
            raise DomainError(f"base running time beats linear speedup at N={n}")
    eps = min((base[n - 2] - base[n - 1] for n in range(2, s + 1)), default=base[0])

    cost = [[INF] * (s + 1) for _ in range(m)]
    for i, vs in enumerate(versions):
        for w, v in vs:
            cost[i][w] = v

    times = [[0.0] * s for _ in range(m)]
    for n in range(1, s + 1):
        order = sorted(range(m), key=lambda i: (cost[i][n], i))
        # N=1 offsets shrink by 1/M so no job beats linear speedup
        step = eps / (m + 1) / (max(m, 1) if n == 1 else 1)
        for rank, i in enumerate(order, start=1):
            times[i][n - 1] = base[n - 1] + rank * step

    samples = [(times[i][n - 1], n, cost[i][n]) for i in range(m) for n in range(1, s + 1)]
    grid = Grid(tuple(samples))

    jobs = []
    for i, vs in enumerate(versions):
        impulses = sorted((times[i][w - 1], v) for w, v in vs)
        jobs.append(Job(f"J{i + 1}", Table(tuple(times[i])), ImpulseTrain(tuple(impulses))))
    return ApInstance(
        budget=inst.capacity,
        target=inst.target - offset,
        jobs=tuple(jobs),
        coi=grid,
        n_cap=max(inst.capacity, 1),
    )
