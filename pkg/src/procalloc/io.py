"""JSON file schemas.

Models are tagged objects, e.g. ``{"type": "power_law", "t1": 100, "t_inf": 10,
"alpha": 0.5}``. Money and utility fields accept the string ``"inf"``.

=============  ==============================================================
running time   ``even_split{t1}``, ``power_law{t1,t_inf,alpha}``, ``table{values}``
utility        ``constant{a}``, ``step{K}``, ``piecewise{breakpoints:[[t,level]]}``,
               ``impulses{impulses:[[t,mass]]}``, ``threshold{k,alpha,t1,t_inf}``
cost surface   ``linear{k}``, ``constant{K}``, ``grid{samples:[[t,n,value]]}``
job            ``{id, rt, utility}``
KVIP file      ``{W, Kprime, items:[[[w,v],...],...]}``
AP file        ``{MAXN, K, coi, jobs:[...], n_cap?}``
nstar file     ``{job, coi, cap?}``
scenario       ``{total_processors, rounds, controller:{target_load, gain, k0,
               k_min, k_max}, coi, target?, arrivals:[[job,...],...]}``
=============  ==============================================================
"""
from __future__ import annotations

import json
import math
from pathlib import Path

from .kvip import ApInstance, KvipInstance
from .mediator import PricingController, Scenario
from .models import (
    Constant,
    ConstantK,
    DomainError,
    EvenSplit,
    Grid,
    ImpulseTrain,
    Job,
    LinearKTN,
    PiecewiseConstant,
    PowerLaw,
    StepToInfinity,
    Table,
    ThresholdUtility,
)


class SchemaError(ValueError):
    """Malformed input file; ``path`` names the offending field."""

    def __init__(self, path: str, msg: str):
        super().__init__(f"{path}: {msg}")
        self.path = path


def _get(d, key, path):
    if not isinstance(d, dict):
        raise SchemaError(path, "expected an object")
    if key not in d:
        raise SchemaError(f"{path}.{key}", "missing field")
    return d[key]


def _num(d, key, path, allow_inf=False):
    x = _get(d, key, path)
    if allow_inf and x == "inf":
        return math.inf
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise SchemaError(f"{path}.{key}", f"expected a number, got {x!r}")
    return float(x)


def _int(d, key, path):
    x = _get(d, key, path)
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError(f"{path}.{key}", f"expected an integer, got {x!r}")
    return x


def _money(x, path):
    if x == "inf":
        return math.inf
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise SchemaError(path, f"expected a number, got {x!r}")
    return float(x)


def _enc(x: float):
    if x == math.inf:
        return "inf"
    return int(x) if float(x).is_integer() and abs(x) < 2**53 else x


def _build(cls, path, *args):
    try:
        return cls(*args)
    except DomainError as e:
        raise SchemaError(path, str(e)) from None


def _pairs(d, key, path):
    xs = _get(d, key, path)
    if not isinstance(xs, list):
        raise SchemaError(f"{path}.{key}", "expected a list")
    out = []
    for i, p in enumerate(xs):
        p_path = f"{path}.{key}[{i}]"
        if not isinstance(p, list) or len(p) != 2:
            raise SchemaError(p_path, "expected a [t, amount] pair")
        out.append((_money(p[0], p_path), _money(p[1], p_path)))
    return tuple(out)


def rt_from_dict(d, path="rt"):
    kind = _get(d, "type", path)
    if kind == "even_split":
        return _build(EvenSplit, path, _num(d, "t1", path))
    if kind == "power_law":
        return _build(
            PowerLaw, path, _num(d, "t1", path), _num(d, "t_inf", path), _num(d, "alpha", path)
        )
    if kind == "table":
        vals = _get(d, "values", path)
        if not isinstance(vals, list):
            raise SchemaError(f"{path}.values", "expected a list")
        return _build(Table, path, tuple(_money(v, f"{path}.values[{i}]") for i, v in enumerate(vals)))
    raise SchemaError(f"{path}.type", f"unknown running-time model {kind!r}")


def rt_to_dict(rt):
    if isinstance(rt, EvenSplit):
        return {"type": "even_split", "t1": _enc(rt.t1)}
    if isinstance(rt, PowerLaw):
        return {"type": "power_law", "t1": _enc(rt.t1), "t_inf": _enc(rt.t_inf), "alpha": _enc(rt.alpha)}
    return {"type": "table", "values": [_enc(v) for v in rt.values]}


def utility_from_dict(d, path="utility"):
    kind = _get(d, "type", path)
    if kind == "constant":
        return _build(Constant, path, _num(d, "a", path, allow_inf=True))
    if kind == "step":
        return _build(StepToInfinity, path, _num(d, "K", path, allow_inf=True))
    if kind == "piecewise":
        return _build(PiecewiseConstant, path, _pairs(d, "breakpoints", path))
    if kind == "impulses":
        return _build(ImpulseTrain, path, _pairs(d, "impulses", path))
    if kind == "threshold":
        args = [_num(d, key, path) for key in ("k", "alpha", "t1", "t_inf")]
        return _build(ThresholdUtility, path, *args)
    raise SchemaError(f"{path}.type", f"unknown utility model {kind!r}")


def utility_to_dict(u):
    if isinstance(u, Constant):
        return {"type": "constant", "a": _enc(u.a)}
    if isinstance(u, StepToInfinity):
        return {"type": "step", "K": _enc(u.K)}
    if isinstance(u, PiecewiseConstant):
        return {"type": "piecewise", "breakpoints": [[_enc(t), _enc(v)] for t, v in u.breakpoints]}
    if isinstance(u, ImpulseTrain):
        return {"type": "impulses", "impulses": [[_enc(t), _enc(m)] for t, m in u.impulses]}
    return {"type": "threshold", "k": u.k, "alpha": u.alpha, "t1": u.t1, "t_inf": u.t_inf}


def coi_from_dict(d, path="coi"):
    kind = _get(d, "type", path)
    if kind == "linear":
        return _build(LinearKTN, path, _num(d, "k", path))
    if kind == "constant":
        return _build(ConstantK, path, _num(d, "K", path, allow_inf=True))
    if kind == "grid":
        raw = _get(d, "samples", path)
        if not isinstance(raw, list):
            raise SchemaError(f"{path}.samples", "expected a list")
        samples = []
        for i, s in enumerate(raw):
            s_path = f"{path}.samples[{i}]"
            if not isinstance(s, list) or len(s) != 3 or not isinstance(s[1], int):
                raise SchemaError(s_path, "expected [t, n, value]")
            samples.append((_money(s[0], s_path), s[1], _money(s[2], s_path)))
        return _build(Grid, path, tuple(samples))
    raise SchemaError(f"{path}.type", f"unknown cost model {kind!r}")


def coi_to_dict(coi):
    if isinstance(coi, LinearKTN):
        return {"type": "linear", "k": _enc(coi.k)}
    if isinstance(coi, ConstantK):
        return {"type": "constant", "K": _enc(coi.K)}
    return {"type": "grid", "samples": [[_enc(t), n, _enc(v)] for t, n, v in coi.samples]}


def job_from_dict(d, path="job"):
    jid = _get(d, "id", path)
    if not isinstance(jid, (str, int)) or isinstance(jid, bool):
        raise SchemaError(f"{path}.id", "expected a string or integer id")
    return Job(
        jid,
        rt_from_dict(_get(d, "rt", path), f"{path}.rt"),
        utility_from_dict(_get(d, "utility", path), f"{path}.utility"),
    )


def job_to_dict(job):
    return {"id": job.id, "rt": rt_to_dict(job.rt), "utility": utility_to_dict(job.utility)}


def kvip_from_dict(d, path="kvip"):
    items = _get(d, "items", path)
    if not isinstance(items, list):
        raise SchemaError(f"{path}.items", "expected a list")
    parsed = []
    for i, versions in enumerate(items):
        i_path = f"{path}.items[{i}]"
        if not isinstance(versions, list):
            raise SchemaError(i_path, "expected a list of [w, v] versions")
        vs = []
        for j, wv in enumerate(versions):
            v_path = f"{i_path}[{j}]"
            if not isinstance(wv, list) or len(wv) != 2 or not isinstance(wv[0], int) or wv[0] < 0:
                raise SchemaError(v_path, "expected [nonnegative int weight, value]")
            vs.append((wv[0], _money(wv[1], v_path)))
        parsed.append(tuple(vs))
    return _build(KvipInstance, path, _int(d, "W", path), _num(d, "Kprime", path), tuple(parsed))


def kvip_to_dict(inst):
    return {
        "W": inst.capacity,
        "Kprime": _enc(inst.target),
        "items": [[[w, _enc(v)] for w, v in vs] for vs in inst.items],
    }


def _jobs(d, key, path):
    raw = _get(d, key, path)
    if not isinstance(raw, list):
        raise SchemaError(f"{path}.{key}", "expected a list")
    return tuple(job_from_dict(j, f"{path}.{key}[{i}]") for i, j in enumerate(raw))


def ap_from_dict(d, path="ap"):
    n_cap = _int(d, "n_cap", path) if isinstance(d, dict) and "n_cap" in d else None
    return _build(
        ApInstance,
        path,
        _int(d, "MAXN", path),
        _num(d, "K", path),
        _jobs(d, "jobs", path),
        coi_from_dict(_get(d, "coi", path), f"{path}.coi"),
        n_cap,
    )


def ap_to_dict(ap):
    d = {"MAXN": ap.budget, "K": _enc(ap.target), "coi": coi_to_dict(ap.coi)}
    d["jobs"] = [job_to_dict(j) for j in ap.jobs]
    if ap.n_cap is not None:
        d["n_cap"] = ap.n_cap
    return d


def controller_from_dict(d, path="controller"):
    args = dict(
        target_load=_num(d, "target_load", path),
        gain=_num(d, "gain", path),
        k=_num(d, "k0", path),
        k_min=_num(d, "k_min", path) if "k_min" in d else 0.0,
        k_max=_num(d, "k_max", path, allow_inf=True) if "k_max" in d else math.inf,
    )
    try:
        return PricingController(**args)
    except DomainError as e:
        raise SchemaError(path, str(e)) from None


def scenario_from_dict(d, path="scenario"):
    rounds = _int(d, "rounds", path)
    raw = d.get("arrivals", []) if isinstance(d, dict) else []
    if not isinstance(raw, list):
        raise SchemaError(f"{path}.arrivals", "expected a list of per-round job lists")
    arrivals = []
    seen = set()
    for r, batch in enumerate(raw):
        if not isinstance(batch, list):
            raise SchemaError(f"{path}.arrivals[{r}]", "expected a list of jobs")
        jobs = []
        for i, jd in enumerate(batch):
            job = job_from_dict(jd, f"{path}.arrivals[{r}][{i}]")
            if job.id in seen:
                raise SchemaError(f"{path}.arrivals[{r}][{i}].id", f"duplicate job id {job.id!r}")
            seen.add(job.id)
            jobs.append(job)
        arrivals.append(tuple(jobs))
    total = _int(d, "total_processors", path)
    ctrl = controller_from_dict(_get(d, "controller", path), f"{path}.controller")
    coi = coi_from_dict(_get(d, "coi", path), f"{path}.coi")
    target = _num(d, "target", path) if "target" in d else 0.0
    try:
        return Scenario(total, rounds, ctrl, coi, tuple(arrivals), target)
    except DomainError as e:
        raise SchemaError(path, str(e)) from None


def scenario_to_dict(sc):
    c = sc.controller
    return {
        "total_processors": sc.total_processors,
        "rounds": sc.rounds,
        "controller": {
            "target_load": c.target_load,
            "gain": c.gain,
            "k0": c.k,
            "k_min": c.k_min,
            "k_max": _enc(c.k_max),
        },
        "coi": coi_to_dict(sc.coi),
        "target": sc.target,
        "arrivals": [[job_to_dict(j) for j in batch] for batch in sc.arrivals],
    }


def load_json(path):
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise SchemaError(str(p), f"cannot read file ({e.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(str(p), f"invalid JSON at line {e.lineno}: {e.msg}") from None


def dumps(d) -> str:
    return json.dumps(d, indent=2, sort_keys=True)
