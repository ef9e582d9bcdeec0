"""Job models (running time and utility) and cost-of-infrastructure surfaces.

Money and durations are plain floats; ``math.inf`` stands for an unbounded
amount (step utilities integrate to infinity, cost surfaces may be infinite
outside their priced region).
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Hashable, Union

INF = math.inf


class DomainError(ValueError):
    """Argument outside the domain of a model or operation."""


# ---------------------------------------------------------------------------
# running time


@dataclass(frozen=True)
class EvenSplit:
    """Perfectly divisible workload, ``T(N) = t1 / N``."""

    t1: float

    def __post_init__(self):
        if not self.t1 > 0:
            raise DomainError(f"t1 must be positive, got {self.t1}")

    def time(self, n: int) -> float:
        _check_n(n)
        return self.t1 / n

    def work(self, n: int) -> float:
        """Processor-time product ``T(N) * N``."""
        _check_n(n)
        return float(self.t1)

    @property
    def max_n(self) -> float:
        return INF


@dataclass(frozen=True)
class PowerLaw:
    """``T(N) = (t1 - t_inf) / N**alpha + t_inf``, speedup at most ``N**alpha``."""

    t1: float
    t_inf: float
    alpha: float

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not self.t1 > self.t_inf >= 0:
            raise DomainError(f"need t1 > t_inf >= 0, got t1={self.t1}, t_inf={self.t_inf}")

    def time(self, n: int) -> float:
        _check_n(n)
        if n == 1:
            return float(self.t1)
        return (self.t1 - self.t_inf) / n**self.alpha + self.t_inf

    def work(self, n: int) -> float:
        _check_n(n)
        if n == 1:
            return float(self.t1)
        return (self.t1 - self.t_inf) * n ** (1 - self.alpha) + self.t_inf * n

    def derivative(self, n: float) -> float:
        """dT/dN, evaluated on the continuous extension."""
        return -self.alpha * (self.t1 - self.t_inf) * n ** (-self.alpha - 1)

    @property
    def max_n(self) -> float:
        return INF


@dataclass(frozen=True)
class Table:
    """Tabulated ``T(1), ..., T(n)``.

    The table must decrease strictly up to its saturation index and be
    nondecreasing after it. No entry may beat linear speedup.
    """

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise DomainError("running-time table is empty")
        if any(not (v > 0 and math.isfinite(v)) for v in vals):
            raise DomainError("running-time table entries must be finite and positive")
        s = _first_non_decrease(vals)
        if any(vals[i] > vals[i + 1] for i in range(s - 1, len(vals) - 1)):
            raise DomainError(
                f"running-time table rises at N={s} and falls again afterwards"
            )
        for n, v in enumerate(vals, start=1):
            if v * n < vals[0] * (1 - 1e-12):
                raise DomainError(f"T({n})={v} implies super-linear speedup")

    def time(self, n: int) -> float:
        _check_n(n)
        if n > len(self.values):
            raise DomainError(f"N={n} beyond running-time table of length {len(self.values)}")
        return self.values[n - 1]

    def work(self, n: int) -> float:
        return self.time(n) * n

    @property
    def max_n(self) -> float:
        return len(self.values)


RunningTimeModel = Union[EvenSplit, PowerLaw, Table]


def _check_n(n):
    if n < 1:
        raise DomainError(f"processor count must be >= 1, got {n}")


def _first_non_decrease(vals) -> int:
    # 1-based index S with T(S) <= T(S+1), or len(vals) when strictly decreasing
    for i in range(len(vals) - 1):
        if vals[i] <= vals[i + 1]:
            return i + 1
    return len(vals)


def eval_running_time(rt: RunningTimeModel, n: int) -> float:
    return rt.time(n)


def saturation_point(rt: RunningTimeModel, n_cap: int) -> float:
    """Smallest S with ``T(S) <= T(S+1)``, searched up to ``n_cap``; ``inf`` if none.

    The closed-form models are strictly decreasing and always give ``inf``.
    """
    if n_cap < 1:
        raise DomainError(f"n_cap must be >= 1, got {n_cap}")
    if not isinstance(rt, Table):
        return INF
    vals = rt.values
    for s in range(1, min(n_cap, len(vals) - 1) + 1):
        if vals[s - 1] <= vals[s]:
            return s
    return INF


def usable_limit(rt: RunningTimeModel, n_cap: int) -> int:
    """Largest processor count worth considering: capped by saturation and table domain."""
    if n_cap < 1:
        return 0
    return int(min(n_cap, saturation_point(rt, n_cap), rt.max_n))


# ---------------------------------------------------------------------------
# utility


@dataclass(frozen=True)
class Constant:
    a: float

    def __post_init__(self):
        if not self.a >= 0:
            raise DomainError(f"utility level must be >= 0, got {self.a}")

    def integral(self, lo: float, hi: float) -> float:
        if self.a == 0:
            return 0.0
        return self.a * (hi - lo)


@dataclass(frozen=True)
class StepToInfinity:
    """Zero up to ``K``, infinite beyond it."""

    K: float

    def integral(self, lo: float, hi: float) -> float:
        return INF if hi > self.K and hi > lo else 0.0


@dataclass(frozen=True)
class PiecewiseConstant:
    """Level ``level_i`` from ``t_start_i`` until the next breakpoint; zero before the first."""

    breakpoints: tuple[tuple[float, float], ...]

    def __post_init__(self):
        bps = tuple((float(t), float(lv)) for t, lv in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        starts = [t for t, _ in bps]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise DomainError("breakpoints must be strictly increasing")
        if any(not lv >= 0 for _, lv in bps):
            raise DomainError("utility levels must be >= 0")

    def __call__(self, t: float) -> float:
        i = bisect.bisect_right([s for s, _ in self.breakpoints], t) - 1
        return self.breakpoints[i][1] if i >= 0 else 0.0

    def integral(self, lo: float, hi: float) -> float:
        total = 0.0
        bps = self.breakpoints
        for i, (start, level) in enumerate(bps):
            end = bps[i + 1][0] if i + 1 < len(bps) else INF
            a, b = max(lo, start), min(hi, end)
            if b > a and level > 0:
                total += level * (b - a)
        return total


@dataclass(frozen=True)
class ImpulseTrain:
    """Sum of point masses; an impulse sitting on a bound counts (closed interval)."""

    impulses: tuple[tuple[float, float], ...]

    def __post_init__(self):
        imps = tuple((float(t), float(m)) for t, m in self.impulses)
        object.__setattr__(self, "impulses", imps)
        locs = [t for t, _ in imps]
        if any(b <= a for a, b in zip(locs, locs[1:])):
            raise DomainError("impulse locations must be strictly increasing")
        if any(not m >= 0 for _, m in imps):
            raise DomainError("impulse masses must be >= 0")

    def integral(self, lo: float, hi: float) -> float:
        return float(sum(m for t, m in self.impulses if lo <= t <= hi))

    def mass_at(self, t: float) -> float:
        return float(sum(m for loc, m in self.impulses if loc == t))


@dataclass(frozen=True)
class ThresholdUtility:
    """Indifference utility for ``CoI = k*T*N`` over a power-law running time.

    ``U(t) = -k * (N(t) + t * N'(t))`` where ``N(t)`` inverts the power law.
    With this utility every processor count is exactly as preferable as any other.
    """

    k: float
    alpha: float
    t1: float
    t_inf: float

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not self.t1 > self.t_inf >= 0:
            raise DomainError("need t1 > t_inf >= 0")

    def n_of_t(self, t: float) -> float:
        return ((t - self.t_inf) / (self.t1 - self.t_inf)) ** (-1.0 / self.alpha)

    def __call__(self, t: float) -> float:
        if not self.t_inf < t <= self.t1:
            raise DomainError(f"t={t} outside ({self.t_inf}, {self.t1}]")
        span = self.t1 - self.t_inf
        x = (t - self.t_inf) / span
        return (self.k / self.alpha) * x ** (-1.0 / self.alpha - 1) * (
            t * (1 - self.alpha) + self.alpha * self.t_inf
        ) / span

    def _antiderivative(self, t: float) -> float:
        if t == INF:
            # limit of -k t N(t): vanishes for alpha < 1
            return 0.0 if self.alpha < 1 else -self.k * (self.t1 - self.t_inf)
        return -self.k * t * self.n_of_t(t)

    def integral(self, lo: float, hi: float) -> float:
        # the closed form continues analytically past t1 so the N=0 baseline works
        if not lo > self.t_inf:
            raise DomainError(f"integral bound {lo} not above t_inf={self.t_inf}")
        if lo == hi:
            return 0.0
        return self._antiderivative(hi) - self._antiderivative(lo)

    def to_piecewise(self, t_lo: float, n_points: int = 1024) -> PiecewiseConstant:
        """Midpoint-sampled step approximation on ``[t_lo, t1]``, zero afterwards."""
        if not self.t_inf < t_lo < self.t1:
            raise DomainError(f"t_lo={t_lo} outside ({self.t_inf}, {self.t1})")
        width = (self.t1 - t_lo) / n_points
        bps = [(t_lo + i * width, self(t_lo + (i + 0.5) * width)) for i in range(n_points)]
        bps.append((self.t1, 0.0))
        return PiecewiseConstant(tuple(bps))


UtilityModel = Union[Constant, StepToInfinity, PiecewiseConstant, ImpulseTrain, ThresholdUtility]


def utility_integral(u: UtilityModel, a: float, b: float) -> float:
    if a > b:
        raise DomainError(f"integration bounds reversed: [{a}, {b}]")
    if a < 0:
        raise DomainError(f"negative lower bound {a}")
    return u.integral(a, b)


# ---------------------------------------------------------------------------
# cost of infrastructure


@dataclass(frozen=True)
class LinearKTN:
    """``CoI(T, N) = k*T*N``."""

    k: float

    def __post_init__(self):
        if not self.k > 0:
            raise DomainError(f"k must be positive, got {self.k}")

    def cost(self, t: float, n: int) -> float:
        return self.k * t * n

    def job_cost(self, rt, n: int) -> float:
        # k * (T*N) straight from the model: t1/N*N does not round-trip
        return self.k * rt.work(n)

    def scaled(self, factor: float) -> "LinearKTN":
        return LinearKTN(self.k * factor)


@dataclass(frozen=True)
class ConstantK:
    """Flat price ``K`` regardless of time and processors."""

    K: float

    def __post_init__(self):
        if not self.K >= 0:
            raise DomainError(f"K must be >= 0, got {self.K}")

    def cost(self, t: float, n: int) -> float:
        return float(self.K)

    def scaled(self, factor: float) -> "ConstantK":
        return ConstantK(self.K * factor)


@dataclass(frozen=True)
class Grid:
    """Cost surface given by sample points, extended as a step function.

    Evaluation at ``(T, N)``:

    1. a sample at exactly ``(T, N)`` returns its value;
    2. ``T`` strictly between two samples of column ``N`` takes the value of
       the nearest sample above it;
    3. otherwise 0 when some finite-valued sample has ``t >= T`` and ``n >= N``,
       and ``inf`` when none does.

    Sample values may be ``inf``. Construction rejects sample sets that break
    the domination property pairwise; :meth:`check_domination` probes the
    extended surface as well.
    """

    samples: tuple[tuple[float, int, float], ...]
    _columns: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        samples = tuple(sorted((float(t), int(n), float(v)) for t, n, v in self.samples))
        object.__setattr__(self, "samples", samples)
        cols: dict[int, tuple[list[float], list[float]]] = {}
        for t, n, v in samples:
            if not (t > 0 and n >= 1 and v >= 0):
                raise DomainError(f"bad grid sample ({t}, {n}, {v})")
            ts, vs = cols.setdefault(n, ([], []))
            if ts and ts[-1] == t:
                raise DomainError(f"duplicate grid sample at ({t}, {n})")
            ts.append(t)
            vs.append(v)
        object.__setattr__(self, "_columns", cols)
        bad = _first_violation(samples)
        if bad is not None:
            raise DomainError(f"grid samples violate domination: {bad[0]} vs {bad[1]}")

    def cost(self, t: float, n: int) -> float:
        col = self._columns.get(n)
        if col is not None:
            ts, vs = col
            i = bisect.bisect_left(ts, t)
            if i < len(ts) and ts[i] == t:
                return vs[i]
            if 0 < i < len(ts):
                return vs[i]
        for ts_, n_, v_ in self.samples:
            if ts_ >= t and n_ >= n and v_ < INF:
                return 0.0
        return INF

    def scaled(self, factor: float) -> "Grid":
        return Grid(tuple((t, n, v * factor if v < INF else v) for t, n, v in self.samples))

    def probe_points(self) -> list[tuple[float, int]]:
        """Lattice covering every region of the step extension."""
        ts = sorted({t for t, _, _ in self.samples})
        if not ts:
            return [(1.0, 1)]
        t_probe = [ts[0] / 2] + ts + [(a + b) / 2 for a, b in zip(ts, ts[1:])] + [ts[-1] * 2]
        n_max = max(n for _, n, _ in self.samples)
        return [(t, n) for t in sorted(t_probe) for n in range(1, n_max + 2)]

    def check_domination(self) -> bool:
        pts = [(t, n, self.cost(t, n)) for t, n in self.probe_points()]
        return _first_violation(pts) is None


CoIModel = Union[LinearKTN, ConstantK, Grid]


def _first_violation(points):
    for t1, n1, v1 in points:
        for t2, n2, v2 in points:
            if t1 <= t2 and n1 <= n2 and v1 > v2:
                return (t1, n1, v1), (t2, n2, v2)
    return None


def eval_coi(coi: CoIModel, t: float, n: int) -> float:
    if not t > 0:
        raise DomainError(f"running time must be positive, got {t}")
    _check_n(n)
    return coi.cost(t, n)


# ---------------------------------------------------------------------------
# jobs and preference


@dataclass(frozen=True)
class Job:
    id: Hashable
    rt: RunningTimeModel
    utility: UtilityModel


def job_time(job: Job, n: int) -> float:
    """Running time with the non-execution baseline ``T(0) = inf``."""
    return INF if n == 0 else job.rt.time(n)


def job_cost(job: Job, coi: CoIModel, n: int) -> float:
    """``C(N) = CoI(T(N), N)``, with ``C(0) = 0``."""
    if n == 0:
        return 0.0
    if isinstance(coi, LinearKTN):
        return coi.job_cost(job.rt, n)
    return eval_coi(coi, eval_running_time(job.rt, n), n)


def prefers(job: Job, coi: CoIModel, n1: int, n2: int) -> bool:
    """True when running on ``n2`` processors is preferable to ``n1`` (``n1 < n2``).

    The extra cost must not exceed the utility integrated over the time saved;
    equality counts as preferable.
    """
    if not 0 <= n1 < n2:
        raise DomainError(f"need 0 <= n1 < n2, got n1={n1}, n2={n2}")
    c1, c2 = job_cost(job, coi, n1), job_cost(job, coi, n2)
    if c1 == INF and c2 == INF:
        extra = 0.0
    else:
        extra = c2 - c1
    t1, t2 = job_time(job, n1), job_time(job, n2)
    lo, hi = min(t1, t2), max(t1, t2)
    gain = utility_integral(job.utility, lo, hi)
    if t2 > t1:
        # slower at more processors (past saturation): the "gain" is a loss
        gain = -gain
    return extra <= gain
