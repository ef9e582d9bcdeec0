"""Command-line front end.

Exit status: 0 on success, 1 when an input file fails validation, 2 on
usage errors (argparse's own convention).
"""
from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from . import fixtures, io
from .kvip import kvip_optimize, solve_ap
from .mediator import run_scenario, traces_to_csv
from .models import DomainError, Job, LinearKTN, PowerLaw, StepToInfinity
from .optimal import analytic_optimal_set, ex4_plateau, format_members, optimal_set


def _g(x) -> str:
    return format(x, ".9g") if isinstance(x, float) else str(x)


def _emit(rows, header, fmt, out):
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows([[_g(x) for x in r] for r in rows])
        return
    cells = [list(header)] + [[_g(x) for x in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    for r in cells:
        out.write("  ".join(c.rjust(wd) for c, wd in zip(r, widths)).rstrip() + "\n")


def cmd_nstar(args, out):
    d = io.load_json(args.file)
    job = io.job_from_dict(io._get(d, "job", "nstar"), "nstar.job")
    coi = io.coi_from_dict(io._get(d, "coi", "nstar"), "nstar.coi")
    cap = args.cap if args.cap is not None else d.get("cap", 64)
    nstar = optimal_set(job, coi, cap)
    out.write(f"{format_members(nstar.members)}\n")


def cmd_kvip(args, out):
    inst = io.kvip_from_dict(io.load_json(args.file), "kvip")
    value, sel = kvip_optimize(inst)
    verdict = "yes" if value >= inst.target or inst.target <= 0 else "no"
    out.write(f"value={_g(value)}\n")
    out.write(f"decision={verdict} (Kprime={_g(inst.target)})\n")
    rows = []
    for i, j in enumerate(sel.choices):
        w, v = inst.items[i][j] if j is not None else (0, 0.0)
        rows.append((i, "skip" if j is None else j + 1, w, v))
    _emit(rows, ("item", "version", "weight", "value"), args.output, out)


def cmd_solve(args, out):
    ap = io.ap_from_dict(io.load_json(args.file), "ap")
    alloc = solve_ap(ap)
    rows = [(job.id, alloc.grants[job.id], alloc.costs[job.id]) for job in ap.jobs]
    _emit(rows, ("job_id", "granted_n", "cost"), args.output, out)
    if args.output == "table":
        out.write(f"revenue={_g(alloc.revenue)} used={alloc.used}/{ap.budget} "
                  f"decision={'yes' if alloc.accepted else 'no'}\n")
        for jid, n in alloc.dropped:
            out.write(f"warning: job {jid} member N={n} has infinite cost, dropped\n")


def cmd_simulate(args, out):
    sc = io.scenario_from_dict(io.load_json(args.file), "scenario")
    traces = run_scenario(sc)
    if args.output == "csv":
        out.write(traces_to_csv(traces))
        return
    rows = [(t.round, len(t.arrivals), len(t.deferred), t.committed, t.revenue,
             t.load_factor, t.k_before, t.k_after) for t in traces]
    _emit(rows, ("round", "arrivals", "deferred", "committed", "revenue", "load",
                 "k_before", "k_after"), "table", out)


def cmd_examples(args, out):
    ok = True
    for r in fixtures.run_examples():
        status = "PASS" if r.passed else "FAIL"
        ok &= r.passed
        out.write(f"{status}  {r.name}: expected {r.expected} computed {r.computed}\n")

    rng = np.random.default_rng(args.seed)
    n_ex2 = sum(
        optimal_set(_ex2_job(p), _lin(p), 200).members
        == analytic_optimal_set("ex2", p, 200).members
        for p in (fixtures.random_ex2_params(rng) for _ in range(20))
    )
    n_ex4 = 0
    for _ in range(20):
        p = fixtures.random_ex4_params(rng)
        n_ex4 += fixtures.ex4(ex4_plateau(p) + 5, p).passed
    out.write(f"sweep seed={args.seed}: ex2 {n_ex2}/20 agree, ex4 {n_ex4}/20 agree\n")
    ok &= n_ex2 == 20 and n_ex4 == 20
    return 0 if ok else 1


def _ex2_job(p):
    return Job("J2", PowerLaw(p["t1"], p["t_inf"], p["alpha"]), StepToInfinity(p["K"]))


def _lin(p):
    return LinearKTN(p["k"])


def _common(default_output="table"):
    # a fresh parent per subcommand: argparse shares parent actions, so a
    # per-command default set on one would leak into the others
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("table", "csv"), default=default_output)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")
    return [common]


def build_parser():
    p = argparse.ArgumentParser(prog="procalloc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("nstar", parents=_common(), help="optimal set of one job")
    s.add_argument("--file", required=True)
    s.add_argument("--cap", type=int)
    s.set_defaults(func=cmd_nstar)

    s = sub.add_parser("kvip", parents=_common(), help="solve a versioned knapsack file")
    s.add_argument("--file", required=True)
    s.set_defaults(func=cmd_kvip)

    s = sub.add_parser("solve", parents=_common(), help="allocate processors to a job batch")
    s.add_argument("--file", required=True)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("simulate", parents=_common("csv"), help="run a pricing scenario")
    s.add_argument("--file", required=True)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("examples", parents=_common(), help="reproduce the worked settings")
    s.set_defaults(func=cmd_examples)
    return p


def main(argv=None, out=None) -> int:
    if out is None:
        sys.stdout.reconfigure(line_buffering=True)
        out = sys.stdout
    args = build_parser().parse_args(argv)
    try:
        rc = args.func(args, out)
    except (io.SchemaError, DomainError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
