"""Command line front end.

Exit codes: 0 success, 1 a property check failed, 2 bad input.
``SKEWASYM_THREADS`` sets the worker count for sweeps and suites.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import aberg, clocknet, verify
from .io import fmt, load_matrix, load_scenario, load_table, result_record, sweep_csv
from .monotone import builtin
from .qmat import DensityMatrix, Observable
from .skewinfo import skew_info, skew_value

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SKEWASYM_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    items = list(items)
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(n) as ex:
        return list(ex.map(fn, items))


def _monotone(args):
    if getattr(args, "table", None):
        return load_table(args.table)
    return builtin(args.f, args.alpha)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_skew(args) -> int:
    rho = DensityMatrix(load_matrix(args.state))
    h = Observable(load_matrix(args.observable))
    res = skew_info(rho, h, _monotone(args))
    record = {"value": float(fmt(res.value)), "f": res.f_id, "rank": res.rank,
              "largest_discarded": res.largest_discarded}
    print(fmt(res.value))
    text = json.dumps(record)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_fig1(args) -> int:
    if not 1 <= args.m_min <= args.m_max:
        raise InputError(f"need 1 <= m_min <= m_max, got {args.m_min}..{args.m_max}")
    f = _monotone(args)
    rows = _pmap(lambda M: aberg.fig1_sweep([M], f)[0], range(args.m_min, args.m_max + 1))
    _emit(sweep_csv(rows), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    if args.suite != "all" and args.suite not in verify.SUITES:
        raise InputError(f"unknown suite {args.suite!r}")
    results = dict(zip(names, _pmap(lambda n: verify.run_suite(n, args.seed, args.count), names)))
    report = {"seed": args.seed, "count": args.count, "suites": {}}
    ok = True
    for name, checks in results.items():
        entry = {c: chk.as_dict() for c, chk in checks.items()}
        passed = all(chk.passed for chk in checks.values())
        ok &= passed
        report["suites"][name] = {"passed": passed, "checks": entry}
    report["passed"] = ok
    _emit(json.dumps(report, indent=1) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_clock(args) -> int:
    scenario, rule = load_scenario(args.scenario)
    rule = args.rule or rule
    if rule not in clocknet.RULES:
        raise InputError(f"unknown rule {rule!r}")
    res = clocknet.evaluate_decision(scenario, rule, args.scale)
    _emit(json.dumps(result_record(res)) + "\n", args.out)
    return EXIT_OK


def cmd_aberg_run(args) -> int:
    cfg = aberg.AbergConfig(d=2, N=args.N, M=args.M, l=args.l)
    run = aberg.run_protocol(cfg)
    _, _, cat = aberg.catalytic_check(cfg)
    f = _monotone(args)
    h = np.diag([0.0, 1.0])
    marg = [m.matrix for m in run.marginals]
    record = {
        "M": args.M, "N": args.N, "l": args.l, "window": cfg.D,
        "norm": float(fmt(np.linalg.norm(run.joint_ket))),
        "catalytic_max_diff": cat,
        "marginals": [[[float(fmt(z.real)), float(fmt(z.imag))] for z in m.ravel()] for m in marg],
        "local_skew": [float(fmt(skew_value(m, h, f))) for m in run.marginals],
    }
    _emit(json.dumps(record) + "\n", args.out)
    return EXIT_OK


def cmd_multipartite(args) -> int:
    f = _monotone(args)
    res = aberg.multipartite_violation(args.M, f, N_max=args.n_max)
    glob = dict(res.global_curve)
    lines = ["N,local_sum,global,ratio_to_ancilla"]
    for N, ratio in res.ratio_curve:
        g = glob.get(N)
        lines.append(f"{N},{fmt(N * res.i_local)},{'' if g is None else fmt(g)},{fmt(ratio)}")
    header = {"M": res.M, "f": res.f_id, "i_ancilla": float(fmt(res.i_ancilla)),
              "i_local": float(fmt(res.i_local)), "n_star": res.n_star}
    sys.stderr.write(json.dumps(header) + "\n")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="skewasym", description="Skew informations and asymmetry resources")
    sub = p.add_subparsers(dest="command", required=True)

    def with_f(sp):
        sp.add_argument("--f", default="WY", help="monotone function id: WY, WYD, SLD (default WY)")
        sp.add_argument("--alpha", type=float, default=None, help="WYD parameter")
        sp.add_argument("--table", default=None, help="JSON table defining a custom monotone function")
        sp.add_argument("--out", default=None, help="write output here instead of stdout")

    sp = sub.add_parser("skew", help="skew information of a state file w.r.t. an observable file")
    sp.add_argument("state")
    sp.add_argument("observable")
    with_f(sp)
    sp.set_defaults(func=cmd_skew)

    sp = sub.add_parser("fig1", help="two-qubit superadditivity gap sweep over M (CSV)")
    sp.add_argument("--m-min", type=int, default=1)
    sp.add_argument("--m-max", type=int, default=50)
    with_f(sp)
    sp.set_defaults(func=cmd_fig1)

    sp = sub.add_parser("verify", help="run randomised property suites")
    sp.add_argument("suite", nargs="?", default="all",
                    help=f"one of {', '.join(verify.SUITES)} or all")
    sp.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    sp.add_argument("--count", type=int, default=verify.DEFAULT_COUNT)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("clock", help="evaluate a distributed-clock scenario file")
    sp.add_argument("scenario")
    sp.add_argument("--rule", choices=clocknet.RULES, default=None)
    sp.add_argument("--scale", type=float, default=None, help="constant c for the scaled rule")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_clock)

    sp = sub.add_parser("aberg-run", help="simulate the catalytic protocol on N qubits")
    sp.add_argument("--M", type=int, default=4)
    sp.add_argument("--N", type=int, default=2)
    sp.add_argument("--l", type=int, default=0)
    with_f(sp)
    sp.set_defaults(func=cmd_aberg_run)

    sp = sub.add_parser("multipartite", help="sum of local vs ancilla skew information against N")
    sp.add_argument("--M", type=int, default=8)
    sp.add_argument("--n-max", type=int, default=64)
    with_f(sp)
    sp.set_defaults(func=cmd_multipartite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
