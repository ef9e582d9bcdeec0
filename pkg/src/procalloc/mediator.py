"""Round-based mediation loop with a load-targeting price controller.

Each round the provider allocates the free processors among waiting jobs by
solving the allocation problem at the current price scale, commits the
grants until the jobs finish, then nudges the scale toward the target load:
up when the cluster is busier than the target, down when it is idler.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from typing import Hashable, Optional, Sequence

from .kvip import Allocation, ApInstance, solve_ap
from .models import CoIModel, DomainError, Job, job_cost

TRACE_COLUMNS = (
    "round",
    "job_id",
    "granted_n",
    "running_time",
    "cost",
    "load_factor",
    "k_before",
    "k_after",
)


@dataclass(frozen=True)
class Commitment:
    job_id: Hashable
    n: int
    release: int  # first round in which the processors are free again


@dataclass(frozen=True)
class ClusterState:
    total_processors: int
    commitments: tuple[Commitment, ...] = ()
    now: int = 0

    def __post_init__(self):
        if self.total_processors < 1:
            raise DomainError("total_processors must be >= 1")
        if self.committed > self.total_processors:
            raise DomainError("commitments exceed capacity")

    @property
    def committed(self) -> int:
        return sum(c.n for c in self.commitments)

    @property
    def available(self) -> int:
        return self.total_processors - self.committed

    @property
    def load(self) -> float:
        return self.committed / self.total_processors


@dataclass(frozen=True)
class PricingController:
    target_load: float
    gain: float
    k: float = 1.0
    k_min: float = 0.0
    k_max: float = math.inf

    def __post_init__(self):
        if not 0 < self.target_load <= 1:
            raise DomainError(f"target_load must lie in (0, 1], got {self.target_load}")
        if not self.gain >= 0:
            raise DomainError(f"gain must be >= 0, got {self.gain}")
        if not 0 <= self.k_min <= self.k <= self.k_max:
            raise DomainError("need 0 <= k_min <= k <= k_max")


def adjust_price(ctrl: PricingController, observed_load: float) -> float:
    """Multiplicative proportional update of the price scale, clamped to its bounds."""
    if not 0 <= observed_load <= 1:
        raise DomainError(f"load must lie in [0, 1], got {observed_load}")
    k = ctrl.k * (1 + ctrl.gain * (observed_load - ctrl.target_load))
    return min(max(k, ctrl.k_min), ctrl.k_max)


@dataclass(frozen=True)
class JobRecord:
    job_id: Hashable
    granted_n: int
    running_time: Optional[float]
    cost: float
    submitted_k: float


@dataclass(frozen=True)
class RoundTrace:
    round: int
    arrivals: tuple[Hashable, ...]
    records: tuple[JobRecord, ...]
    revenue: float
    load_factor: float
    k_before: float
    k_after: float
    committed: int

    @property
    def deferred(self) -> tuple[Hashable, ...]:
        return tuple(r.job_id for r in self.records if r.granted_n == 0)


def step(
    state: ClusterState,
    ctrl: PricingController,
    coi: CoIModel,
    arrivals: Sequence[Job],
    K: float = 0.0,
    submitted_k: Optional[dict] = None,
):
    """Run one round; returns ``(allocation, state, ctrl, trace)``.

    Jobs granted 0 processors are reported as deferred in the trace; the
    caller decides whether they come back next round.
    """
    submitted_k = submitted_k or {}
    live = tuple(c for c in state.commitments if c.release > state.now)
    state = replace(state, commitments=live)
    priced = coi.scaled(ctrl.k)
    alloc: Allocation = solve_ap(
        ApInstance(budget=state.available, target=K, jobs=tuple(arrivals), coi=priced)
    )

    new = list(live)
    records = []
    for job in arrivals:
        n = alloc.grants[job.id]
        sub_k = submitted_k.get(job.id, ctrl.k)
        if n == 0:
            records.append(JobRecord(job.id, 0, None, 0.0, sub_k))
            continue
        t = job.rt.time(n)
        new.append(Commitment(job.id, n, state.now + max(1, math.ceil(t))))
        records.append(JobRecord(job.id, n, t, job_cost(job, priced, n), sub_k))

    state = ClusterState(state.total_processors, tuple(new), state.now)
    load = state.load
    k_after = adjust_price(ctrl, load)
    trace = RoundTrace(
        round=state.now,
        arrivals=tuple(j.id for j in arrivals),
        records=tuple(records),
        revenue=alloc.revenue,
        load_factor=load,
        k_before=ctrl.k,
        k_after=k_after,
        committed=state.committed,
    )
    return alloc, replace(state, now=state.now + 1), replace(ctrl, k=k_after), trace


@dataclass(frozen=True)
class Scenario:
    total_processors: int
    rounds: int
    controller: PricingController
    coi: CoIModel
    arrivals: tuple[tuple[Job, ...], ...] = ()
    target: float = 0.0

    def __post_init__(self):
        if self.rounds < 0:
            raise DomainError("rounds must be >= 0")
        if len(self.arrivals) > self.rounds:
            raise DomainError(f"{len(self.arrivals)} arrival lists for {self.rounds} rounds")


def run_scenario(scenario: Scenario) -> list[RoundTrace]:
    state = ClusterState(scenario.total_processors)
    ctrl = scenario.controller
    waiting: list[Job] = []
    submitted_k: dict = {}
    traces = []
    for r in range(scenario.rounds):
        fresh = scenario.arrivals[r] if r < len(scenario.arrivals) else ()
        for job in fresh:
            submitted_k.setdefault(job.id, ctrl.k)
        batch = waiting + list(fresh)
        _, state, ctrl, trace = step(state, ctrl, scenario.coi, batch, scenario.target, submitted_k)
        deferred = set(trace.deferred)
        waiting = [j for j in batch if j.id in deferred]
        traces.append(trace)
    return traces


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".9g")
    return str(x)


def traces_to_csv(traces: Sequence[RoundTrace]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for tr in traces:
        rows = tr.records or (JobRecord("", 0, None, 0.0, tr.k_before),)
        for rec in rows:
            w.writerow(
                [
                    tr.round,
                    rec.job_id,
                    rec.granted_n,
                    _fmt(rec.running_time),
                    _fmt(rec.cost),
                    _fmt(tr.load_factor),
                    _fmt(tr.k_before),
                    _fmt(tr.k_after),
                ]
            )
    return buf.getvalue()
