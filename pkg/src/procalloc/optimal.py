"""Per-job optimal processor counts.

``optimal_n`` walks the incumbent recursion: starting from 0 processors, a
larger count ``m`` replaces the incumbent whenever it is preferable. The
optimal set collects every incumbent seen as the availability cap grows.
Closed forms for the four worked settings serve as independent checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import bisect

from .models import (
    INF,
    CoIModel,
    DomainError,
    Job,
    PowerLaw,
    RunningTimeModel,
    ThresholdUtility,
    prefers,
    usable_limit,
)


@dataclass(frozen=True)
class OptimalSet:
    members: tuple[int, ...]
    n_cap: int

    def __post_init__(self):
        m = tuple(sorted(set(self.members)))
        object.__setattr__(self, "members", m)
        if not m or m[0] != 0:
            raise DomainError("optimal set must contain 0")
        if m[-1] > self.n_cap:
            raise DomainError(f"member {m[-1]} exceeds cap {self.n_cap}")

    def __contains__(self, n):
        return n in self.members

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __str__(self):
        return format_members(self.members)


def format_members(members) -> str:
    """Compact set notation, contiguous runs written ``a..b``."""
    parts = []
    ms = sorted(members)
    i = 0
    while i < len(ms):
        j = i
        while j + 1 < len(ms) and ms[j + 1] == ms[j] + 1:
            j += 1
        if j - i >= 2:
            parts.append(f"{ms[i]}..{ms[j]}")
        else:
            parts.extend(str(x) for x in ms[i : j + 1])
        i = j + 1
    return "{" + ",".join(parts) + "}"


def _incumbents(job: Job, coi: CoIModel, n_max: int):
    # yields N_J(m) for m = 0..n_max; counts past saturation never win
    limit = usable_limit(job.rt, n_max)
    inc = 0
    yield inc
    for m in range(1, n_max + 1):
        if m <= limit and prefers(job, coi, inc, m):
            inc = m
        yield inc


def optimal_n(job: Job, coi: CoIModel, n_max: int) -> int:
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    for inc in _incumbents(job, coi, n_max):
        pass
    return inc


def optimal_set(job: Job, coi: CoIModel, n_cap: int) -> OptimalSet:
    if n_cap < 1:
        raise DomainError(f"n_cap must be >= 1, got {n_cap}")
    return OptimalSet(tuple(set(_incumbents(job, coi, n_cap))), n_cap)


# ---------------------------------------------------------------------------
# closed forms


def _require(cond, msg):
    if not cond:
        raise DomainError(msg)


def step_cutoff(k: float, t1: float, t_inf: float, alpha: float, K: float) -> float:
    """Least N whose power-law running time is not above ``K`` (``inf`` if none)."""
    rt = PowerLaw(t1, t_inf, alpha)
    if K <= t_inf:
        return INF
    if t1 <= K:
        return 1
    n = max(1, math.ceil(((t1 - t_inf) / (K - t_inf)) ** (1.0 / alpha)))
    # absorb rounding in the power
    while n > 1 and rt.time(n - 1) <= K:
        n -= 1
    while rt.time(n) > K:
        n += 1
    return n


def analytic_optimal_set(case: str, params: dict, n_cap: int) -> OptimalSet:
    """Closed-form optimal set for one of the worked settings ``ex1``, ``ex2``, ``ex3``.

    ``case`` is ``"ex1"`` (even split under ``k*T*N``), ``"ex2"`` (power law,
    step-to-infinity utility at ``K``, ``k*T*N``) or ``"ex3"`` (flat price ``K``
    with any running time ``rt``).
    """
    if case == "ex1":
        _require(params["t1"] > 0 and params["k"] > 0, "ex1 needs t1 > 0 and k > 0")
        top = n_cap
    elif case == "ex2":
        k, t1, t_inf, alpha = params["k"], params["t1"], params["t_inf"], params["alpha"]
        _require(k > 0, "ex2 needs k > 0")
        _require(0 < alpha <= 1 and t1 > t_inf >= 0, "ex2 needs a valid power law")
        _require(alpha < 1 or t_inf > 0, "ex2 excludes alpha = 1 with t_inf = 0")
        top = min(n_cap, step_cutoff(k, t1, t_inf, alpha, params["K"]))
    elif case == "ex3":
        _require(params["K"] > 0, "ex3 needs K > 0")
        rt: RunningTimeModel = params["rt"]
        top = usable_limit(rt, n_cap)
    else:
        raise DomainError(f"unknown case {case!r}")
    return OptimalSet(tuple(range(int(top) + 1)), n_cap)


@dataclass(frozen=True)
class Ex4Params:
    """Constant utility ``a`` with ``k*T*N`` pricing over a power law."""

    k: float
    a: float
    alpha: float
    t1: float
    t_inf: float

    def __post_init__(self):
        _require(self.k > 0 and self.a > 0, "need k > 0 and a > 0")
        _require(0 < self.alpha < 1, "need 0 < alpha < 1")
        _require(self.t1 > self.t_inf >= 0, "need t1 > t_inf >= 0")

    @property
    def rt(self) -> PowerLaw:
        return PowerLaw(self.t1, self.t_inf, self.alpha)

    def f(self, n: float) -> float:
        """``(k*N + a) * T(N)``; a larger N is accepted iff f does not grow."""
        rt = self.rt
        t = (rt.t1 - rt.t_inf) / n**rt.alpha + rt.t_inf
        return (self.k * n + self.a) * t

    def fprime(self, n: float) -> float:
        inner = self.k * n * (1.0 / self.alpha - 1.0) - self.a
        return self.k * self.t_inf - self.rt.derivative(n) * inner


def ex4_plateau(p: Ex4Params) -> int:
    """Largest member of the optimal set under constant utility.

    f' changes sign at most once on ``[1, (a/k) * alpha/(1-alpha)]``; its zero
    N0 comes from bisection, then the answer is ``N'`` or ``N'+1`` with
    ``N' = ceil(N0) - 1`` (clamped to 1).
    """
    hi = (p.a / p.k) * (p.alpha / (1.0 - p.alpha))
    n0 = 1.0
    if hi > 1.0 and p.fprime(1.0) < 0:
        # f'(hi) = k*t_inf >= 0; with t_inf = 0 the zero sits on the endpoint
        n0 = bisect(p.fprime, 1.0, hi, xtol=1e-9, maxiter=200) if p.fprime(hi) > 0 else hi
    n_prime = max(math.ceil(n0) - 1, 1)
    return n_prime + 1 if p.f(n_prime + 1) <= p.f(n_prime) else n_prime


def threshold_utility(k: float, alpha: float, t1: float, t_inf: float) -> ThresholdUtility:
    return ThresholdUtility(k=k, alpha=alpha, t1=t1, t_inf=t_inf)
