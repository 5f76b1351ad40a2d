"""Command-line entry point.

Exit codes: 0 verified/valid, 1 mathematical violation or invalid
certificate, 2 usage or format error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__, _accel
from . import certificate as certfile
from .asymptotic import threshold
from .hall_matching import (
    ABORTED,
    DEFAULT_SUBSET_CAP,
    build_instance,
    check_hall_flow,
    check_hall_subsets,
    construct_certificate,
    verify_certificate,
)
from .weights import build_weight_table, fraction_str

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(obj, as_json: bool, lines: list[str]) -> None:
    if as_json:
        sys.stdout.write(json.dumps(obj, indent=1, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")


# -- one (d, q) --------------------------------------------------------------

def verify_point(d: int, q: int, method: str = "flow", certify: bool = False) -> dict:
    """Weights, Hall check(s) and optional certificate for one (d, q); JSON-ready."""
    table = build_weight_table(d, q)
    inst = build_instance(table)
    parts = table.partitions
    out = {
        "d": d,
        "q": q,
        "A": fraction_str(table.A),
        "sharp_constant_decimal": table.sharp_constant(),
        "N_size": len(table.N),
        "P_size": len(table.P),
        "results": {},
    }
    methods = ("flow", "subsets") if method == "both" else (method,)
    for m in methods:
        verdict = check_hall_flow(inst) if m == "flow" else check_hall_subsets(inst, DEFAULT_SUBSET_CAP)
        res = {"status": verdict.status}
        if verdict.violating is not None:
            res["violating_subset"] = [list(parts[n]) for n in verdict.violating]
            res["deficit"] = fraction_str(verdict.deficit)
        if verdict.max_flow is not None:
            res["max_flow"] = fraction_str(verdict.max_flow)
        out["results"][m] = res
    statuses = {r["status"] for r in out["results"].values() if r["status"] != ABORTED}
    out["methods_agree"] = len(statuses) <= 1
    out["holds"] = statuses == {"holds"}
    if certify and out["holds"]:
        cert = construct_certificate(inst, table)
        out["certificate_valid"] = verify_certificate(cert, table)
        top = 0  # canonical index of (d, 0, ..., 0)
        out["top_column_positive"] = any(p == top and t > 0 for _, p, t in cert.tau)
        out["_certificate"] = (cert, table)
    return out


def _sweep_worker(args):
    d, q, method = args
    res = verify_point(d, q, method, certify=True)
    res.pop("_certificate", None)
    return res


# -- commands ----------------------------------------------------------------

def cmd_verify(ns) -> int:
    if ns.d is None or ns.q is None:
        raise UsageError("verify needs --d and --q")
    _check_dq(ns.d, ns.q)
    res = verify_point(ns.d, ns.q, ns.method, certify=bool(ns.emit_cert))
    pair = res.pop("_certificate", None)
    if ns.emit_cert and pair is not None:
        certfile.write(ns.emit_cert, *pair)
        res["certificate_path"] = ns.emit_cert
    aborted = [m for m, r in res["results"].items() if r["status"] == ABORTED]
    lines = [
        f"d = {ns.d}, q = {ns.q}",
        f"A = {res['A']}  (sharp constant A^(1/{2 * ns.d}) ~ {res['sharp_constant_decimal']})",
        f"|N| = {res['N_size']}, |P| = {res['P_size']}",
    ]
    for m, r in res["results"].items():
        lines.append(f"{m}: {r['status']}")
        if "violating_subset" in r:
            lines.append(f"  violating U = {r['violating_subset']}, deficit = {r['deficit']}")
    if aborted:
        lines.append(f"subset enumeration aborted: |N| = {res['N_size']} > {DEFAULT_SUBSET_CAP}; use --method flow")
    if not res["methods_agree"]:
        lines.append("METHODS DISAGREE")
    if "certificate_path" in res:
        lines.append(f"certificate written to {res['certificate_path']}")
    _emit(res, ns.json, lines)
    if not res["methods_agree"] or any(r["status"] == "violated" for r in res["results"].values()):
        return EXIT_VIOLATION
    if aborted and not res["holds"]:
        return EXIT_USAGE
    return EXIT_OK


def cmd_sweep(ns) -> int:
    lo = ns.d_min if ns.d_min is not None else 2
    hi = ns.d_max if ns.d_max is not None else 20
    if not 2 <= lo <= hi:
        raise UsageError("need 2 <= d-min <= d-max")
    started = time.perf_counter()
    jobs, per_d = [], []
    for d in range(lo, hi + 1):
        rep = threshold(d)
        per_d.append({"d": d, "threshold": f"{rep.threshold:.6f}", "q_range": [d + 1, rep.q_search_max]})
        jobs.extend((d, q, ns.method) for q in rep.search_range)
    if ns.threads > 1:
        with ProcessPoolExecutor(max_workers=ns.threads) as pool:
            results = list(pool.map(_sweep_worker, jobs, chunksize=4))
    else:
        results = [_sweep_worker(j) for j in jobs]

    failures = []
    for entry in per_d:
        mine = [r for r in results if r["d"] == entry["d"]]
        ok = [
            r["holds"] and r["methods_agree"] and r.get("certificate_valid", False) and r.get("top_column_positive", False)
            for r in mine
        ]
        entry["checked"] = len(mine)
        entry["passed"] = sum(ok)
        entry["covered_by_threshold"] = not mine
        failures.extend(r for r, good in zip(mine, ok) if not good)
    summary = {
        "command": "sweep",
        "d_min": lo,
        "d_max": hi,
        "method": ns.method,
        "per_d": per_d,
        "failures": failures,
        "all_passed": not failures,
    }
    lines = [f"{'d':>3} {'q range':>12} {'checked':>8} {'passed':>7}"]
    for e in per_d:
        if e["covered_by_threshold"]:
            rng = "empty"
            note = "  (covered by the large-q threshold)"
        else:
            rng = f"{e['q_range'][0]}..{e['q_range'][1]}"
            note = ""
        lines.append(f"{e['d']:>3} {rng:>12} {e['checked']:>8} {e['passed']:>7}{note}")
    for f in failures:
        lines.append(f"FAILED d={f['d']} q={f['q']}: {json.dumps(f['results'])}")
    lines.append("all passed" if not failures else f"{len(failures)} failures")
    _emit(summary, ns.json, lines)
    if not ns.json:
        print(f"wall time {time.perf_counter() - started:.2f}s", file=sys.stderr)
    return EXIT_OK if not failures else EXIT_VIOLATION


def cmd_threshold(ns) -> int:
    if ns.d is not None:
        ds = [ns.d]
    else:
        lo = ns.d_min if ns.d_min is not None else 2
        hi = ns.d_max if ns.d_max is not None else lo
        ds = list(range(lo, hi + 1))
    if not ds or min(ds) < 2:
        raise UsageError("need d >= 2")
    rows = []
    for d in ds:
        rep = threshold(d)
        rows.append(
            {
                "d": d,
                "threshold": f"{rep.threshold:.6f}",
                "ceiling": rep.ceiling,
                "q_search_max": rep.q_search_max,
                "explicit_range": [d + 1, rep.q_search_max] if len(rep.search_range) else None,
            }
        )
    lines = []
    for r in rows:
        rng = r["explicit_range"]
        span = f"q in [{rng[0]}, {rng[1]}]" if rng else "empty (all q > d covered)"
        lines.append(f"d = {r['d']}: threshold {r['threshold']}, ceiling {r['ceiling']}, explicit range {span}")
    _emit({"command": "threshold", "rows": rows}, ns.json, lines)
    return EXIT_OK


def cmd_check_cert(ns) -> int:
    try:
        with open(ns.path, encoding="utf-8") as fh:
            doc = certfile.parse(fh.read())
    except (OSError, certfile.MalformedCertificate) as exc:
        _emit({"command": "check-cert", "valid": False, "error": str(exc), "malformed": True}, ns.json,
              [f"malformed certificate: {exc}"])
        return EXIT_USAGE
    problem = certfile.check_document(doc)
    if problem is None:
        _emit({"command": "check-cert", "valid": True, "d": doc["d"], "q": doc["q"]}, ns.json,
              [f"certificate valid for d = {doc['d']}, q = {doc['q']}"])
        return EXIT_OK
    _emit({"command": "check-cert", "valid": False, "error": problem, "malformed": False}, ns.json,
          [f"invalid certificate: {problem}"])
    return EXIT_VIOLATION


def cmd_oracle(ns) -> int:
    from . import ff_oracle

    if ns.d is None or ns.p is None:
        raise UsageError("oracle needs --d and --p")
    if not ff_oracle.is_prime(ns.p):
        raise UsageError(f"p = {ns.p} is not prime")
    if ns.p <= ns.d:
        raise UsageError(f"need p > d (got p = {ns.p}, d = {ns.d})")
    try:
        rep = ff_oracle.run_oracle(ns.d, ns.p, trials=ns.trials, seed=ns.seed, tol=ns.tol)
    except ff_oracle.BudgetExceeded as exc:
        raise UsageError(str(exc)) from None
    doc = rep.to_json()
    doc["command"] = "oracle"
    doc["seed"] = ns.seed
    doc["trials"] = ns.trials
    lines = [f"oracle d = {ns.d}, p = {ns.p}"]
    lines.append("W counts: " + ", ".join(f"{list(ell)}: {v['bruteforce']}" for ell, v in rep.W_counts.items()))
    for c in rep.checks:
        extra = ", ".join(f"{k}={v}" for k, v in c.items() if k not in ("name", "passed"))
        lines.append(f"[{'PASS' if c['passed'] else 'FAIL'}] {c['name']}" + (f" ({extra})" if extra else ""))
    _emit(doc, ns.json, lines)
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def cmd_selftest(ns) -> int:
    from . import ff_oracle
    from .symmetric_sums import master_inequality

    checks = []

    def record(name, fn):
        try:
            ok = bool(fn())
        except Exception as exc:  # a crash is a failed check here
            ok = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        checks.append({"name": name, "passed": ok})

    def d3_closed_form():
        for q in (5, 7, 9, 11, 13, 25):
            t = build_weight_table(3, q)
            qf = Fraction(q)
            want = [
                (5 * qf**2 - 9 * qf + 4) / qf,
                3 * (3 * qf**2 - 9 * qf + 4) * (qf - 1) / qf,
                (-9 * qf + 4) * (qf - 1) * (qf - 2) / qf,
            ]
            if t.A != 6 - 9 / qf + 4 / qf**2 or list(t.omegas) != want:
                return False
        return True

    def small_sweep():
        for d in range(2, 9):
            for q in threshold(d).search_range:
                r = verify_point(d, q, "both", certify=True)
                if not (r["holds"] and r["methods_agree"] and r["certificate_valid"]):
                    return False
        return True

    def master():
        t = build_weight_table(4, 6)
        cert = construct_certificate(build_instance(t), t)
        x = [Fraction(k, 3) for k in (1, 2, 0, 5, 1, 4)]
        return master_inequality(t, cert, x).holds and master_inequality(t, cert, [1] * 6).equality

    record("d=3 closed forms", d3_closed_form)
    record("sweep d<=8 with both methods and certificates", small_sweep)
    record("master inequality on d=4, q=6", master)
    record("oracle d=2, p=5", lambda: ff_oracle.run_oracle(2, 5, trials=50, seed=ns.seed).passed)
    record("oracle d=3, p=7", lambda: ff_oracle.run_oracle(3, 7, trials=50, seed=ns.seed).passed)
    lines = [f"[{'PASS' if c['passed'] else 'FAIL'}] {c['name']}" for c in checks]
    ok = all(c["passed"] for c in checks)
    _emit({"command": "selftest", "checks": checks, "passed": ok, "backend": _accel.backend()}, ns.json, lines)
    return EXIT_OK if ok else EXIT_VIOLATION


def _check_dq(d: int, q: int) -> None:
    if d < 2:
        raise UsageError(f"d must be >= 2 (got {d})")
    if q <= d:
        raise UsageError(f"q must exceed d (got d = {d}, q = {q})")


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--threads", type=int, default=1)

    parser = argparse.ArgumentParser(prog="momentsharp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check one (d, q)")
    p.add_argument("--d", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--method", choices=("flow", "subsets", "both"), default="flow")
    p.add_argument("--emit-cert", metavar="PATH")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common], help="check every q below the threshold for a range of d")
    p.add_argument("--d-min", type=int)
    p.add_argument("--d-max", type=int)
    p.add_argument("--method", choices=("flow", "subsets", "both"), default="flow")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("threshold", parents=[common], help="large-q threshold per d")
    p.add_argument("--d", type=int)
    p.add_argument("--d-min", type=int)
    p.add_argument("--d-max", type=int)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("check-cert", parents=[common], help="re-verify a certificate file")
    p.add_argument("path")
    p.set_defaults(func=cmd_check_cert)

    p = sub.add_parser("oracle", parents=[common], help="brute-force checks over F_p")
    p.add_argument("--d", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("selftest", parents=[common], help="quick internal consistency battery")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(ns, "threads", 1) < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return ns.func(ns)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
