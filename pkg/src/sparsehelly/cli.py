"""Command-line entry point.

    sparsehelly generate --kind tangent-halfspaces --dim 3 --n 30 --seed 7 --out inst.json
    sparsehelly select inst.json --mode swap
    sparsehelly helly inst.json --mc-samples 1000000
    sparsehelly john inst.json
    sparsehelly oracle inst.json --objective diam
    sparsehelly verify inst.json cert.json
    sparsehelly suite --kind random-symmetric-vpoly --dim 3 --count 50 --seed 1
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from . import core
from .generate import H_KINDS, KINDS, V_KINDS, generate, rng_for
from .helly import helly_subset, mc_volume
from .io import dump, hpolytope_from_json, load, vpolytope_from_json
from .john import to_john_position
from .oracle import Objective, best_subset_bruteforce, min_containment_factor
from .sparse_select import SelectionCertificate, sparse_approx, verify_certificate

RELATIVE_SLACK = 1e-3


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Optional[str] = None
    output: Optional[str] = None
    dim: Optional[int] = None
    count: int = 1
    seed: int = 0
    tol: float = core.EPS
    mode: str = "exhaustive"
    kind: Optional[str] = None
    n: Optional[int] = None
    jobs: int = 1


def _summary(rows: list[tuple[str, object]]) -> str:
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows) + "\n"


def cmd_generate(args) -> int:
    dump(generate(args.kind, args.dim, args.n, args.seed, args.index), args.out)
    return 0


def cmd_select(args) -> int:
    Q = vpolytope_from_json(load(args.input))
    cert = sparse_approx(Q, lam=args.lam, mode=args.mode)
    dump(cert.to_dict(), args.out)
    return 0


def cmd_verify(args) -> int:
    Q = vpolytope_from_json(load(args.input))
    cert = SelectionCertificate.from_dict(load(args.certificate))
    v = verify_certificate(Q, cert)
    dump({"ok": v.ok, "failed": v.failed, "detail": v.detail, "checks": v.checks}, args.out)
    return 0 if v.ok else 1


def cmd_john(args) -> int:
    H = hpolytope_from_json(load(args.input))
    res, _ = to_john_position(H)
    dump({
        "ellipsoid": {"center": res.ellipsoid.center, "shape": res.ellipsoid.shape},
        "transform": {"linear": res.transform.linear, "shift": res.transform.shift},
        "quality": res.quality,
        "outer_radius": res.outer_radius,
        "lambda_measured": res.lambda_measured,
    }, args.out)
    return 0


def cmd_helly(args) -> int:
    H = hpolytope_from_json(load(args.input))
    if H.dim < 2:
        raise core.GeometryError("helly needs dimension >= 2")
    rep = helly_subset(H, mode=args.mode)
    out = rep.to_dict()
    if args.mc_samples:
        rng = rng_for(args.seed)
        est, se = mc_volume(H, args.mc_samples, rng)
        est_s, se_s = mc_volume(H.subset(rep.sigma), args.mc_samples, rng)
        out["monte_carlo"] = {"samples": args.mc_samples, "vol_K": est, "se_K": se,
                              "vol_Ksigma": est_s, "se_Ksigma": se_s}
    dump(out, args.out)
    sys.stderr.write(_summary([
        ("d / n", f"{rep.dim} / {rep.n}"),
        ("sigma", list(rep.sigma)),
        ("diam ratio", f"{rep.diam_ratio:.6g}  (bound {2 * rep.dim ** 2})"),
        ("vol ratio", f"{rep.vol_ratio:.6g}  (bound {rep.vol_bound_explicit / rep.vol_K:.6g})"),
        ("lambda", f"{rep.lambda_measured:.6g}"),
        ("flags", ", ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in rep.flags.items())),
    ]))
    return 0 if rep.passed else 1


def cmd_oracle(args) -> int:
    doc = load(args.input)
    objective = Objective(args.objective)
    fam = vpolytope_from_json(doc) if objective is Objective.FACTOR else hpolytope_from_json(doc)
    k = 2 * fam.dim if args.k is None else args.k
    res = best_subset_bruteforce(fam, k, objective, budget=args.budget)
    dump({"best_sigma": res.best_sigma, "best_value": res.best_value,
          "evaluated": res.evaluated, "objective": res.objective.value, "k": k}, args.out)
    return 0


def _select_row(inst: dict, mode: str) -> dict:
    Q = vpolytope_from_json(inst)
    d = Q.dim
    cert = sparse_approx(Q, mode=mode)
    ok = bool(verify_certificate(Q, cert))
    mu = min_containment_factor(Q, Q.subset(cert.qprime_indices))
    return {
        "index": inst["index"], "n": len(Q), "selected": len(cert.qprime_indices),
        "lambda": cert.lambda_measured, "factor": cert.factor, "mu_star": mu,
        "verified": ok,
        "pass": ok and len(cert.qprime_indices) <= 2 * d and mu <= cert.factor * (1 + RELATIVE_SLACK),
    }


def _helly_row(inst: dict, mode: str) -> dict:
    H = hpolytope_from_json(inst)
    rep = helly_subset(H, mode=mode)
    return {
        "index": inst["index"], "n": rep.n, "sigma": list(rep.sigma), "lambda": rep.lambda_measured,
        "diam_ratio": rep.diam_ratio, "vol_ratio": rep.vol_ratio,
        "vol_bound": rep.vol_bound_explicit / rep.vol_K, "flags": rep.flags, "pass": rep.passed,
    }


def _row(task) -> dict:
    kind, d, n, seed, i, mode = task
    inst = generate(kind, d, n, seed, i)
    return _select_row(inst, mode) if kind in V_KINDS else _helly_row(inst, mode)


def run_suite(cfg: RunConfig) -> tuple[dict, int]:
    """Run a generated corpus; returns (report, exit code)."""
    if cfg.kind not in KINDS:
        raise ValueError(f"unknown kind {cfg.kind!r}")
    d = cfg.dim
    if cfg.kind in H_KINDS and d < 2:
        raise ValueError("halfspace suites need dimension >= 2")
    tasks = [(cfg.kind, d, cfg.n, cfg.seed, i, cfg.mode) for i in range(cfg.count)]
    if cfg.jobs > 1 and tasks:
        with ProcessPoolExecutor(cfg.jobs) as ex:
            rows = list(ex.map(_row, tasks))  # map keeps submission order
    else:
        rows = [_row(t) for t in tasks]
    agg: dict = {"instances": len(rows), "passed": sum(r["pass"] for r in rows)}
    if cfg.kind in V_KINDS:
        agg["max_factor"] = max((r["factor"] for r in rows), default=None)
        agg["max_mu_star"] = max((r["mu_star"] for r in rows), default=None)
        agg["max_mu_over_factor"] = max((r["mu_star"] / r["factor"] for r in rows), default=None)
        agg["max_selected"] = max((r["selected"] for r in rows), default=None)
    else:
        agg["max_diam_ratio"] = max((r["diam_ratio"] for r in rows), default=None)
        agg["diam_bound"] = 2 * d * d
        agg["max_vol_ratio"] = max((r["vol_ratio"] for r in rows), default=None)
        agg["max_sigma"] = max((len(r["sigma"]) for r in rows), default=None)
    report = {"config": {"kind": cfg.kind, "dim": d, "n": cfg.n, "count": cfg.count,
                         "seed": cfg.seed, "mode": cfg.mode},
              "aggregate": agg, "rows": rows}
    return report, 0 if agg["passed"] == len(rows) else 1


def cmd_suite(args) -> int:
    cfg = RunConfig("suite", output=args.out, dim=args.dim, count=args.count, seed=args.seed,
                    mode=args.mode, kind=args.kind, n=args.n, jobs=args.jobs)
    report, code = run_suite(cfg)
    dump(report, args.out)
    agg = report["aggregate"]
    sys.stderr.write(_summary([(k, v) for k, v in agg.items()] + [("exit", code)]))
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sparsehelly", description=__doc__.split("\n")[0])
    p.add_argument("--tol", type=float, default=None, help="override the global tolerance")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, input_=True):
        if input_:
            sp.add_argument("input", help="instance JSON file")
        sp.add_argument("--out", default=None, help="output path (default stdout)")

    g = sub.add_parser("generate", help="write a deterministic instance")
    g.add_argument("--kind", choices=KINDS, required=True)
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--n", type=int, default=None)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--index", type=int, default=0, help="stream index within the seed")
    common(g, input_=False)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("select", help="sparse vertex selection on a V-polytope")
    common(s)
    s.add_argument("--mode", choices=["exhaustive", "swap"], default="exhaustive")
    s.add_argument("--lambda", dest="lam", type=float, default=None)
    s.set_defaults(func=cmd_select)

    h = sub.add_parser("helly", help="select at most 2d halfspaces of a family")
    common(h)
    h.add_argument("--mode", choices=["exhaustive", "swap"], default="exhaustive")
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--mc-samples", type=int, default=0)
    h.set_defaults(func=cmd_helly)

    j = sub.add_parser("john", help="maximum-volume inscribed ellipsoid")
    common(j)
    j.set_defaults(func=cmd_john)

    o = sub.add_parser("oracle", help="brute-force best subset")
    common(o)
    o.add_argument("--objective", choices=[e.value for e in Objective], default="diam")
    o.add_argument("--budget", type=int, default=10**7)
    o.add_argument("--k", type=int, default=None, help="subset size cap (default 2d)")
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("verify", help="re-check a selection certificate")
    v.add_argument("input", help="V-polytope JSON")
    v.add_argument("certificate", help="certificate JSON")
    v.add_argument("--out", default=None)
    v.set_defaults(func=cmd_verify)

    su = sub.add_parser("suite", help="run a generated corpus and check every bound")
    su.add_argument("--kind", choices=KINDS, required=True)
    su.add_argument("--dim", type=int, required=True)
    su.add_argument("--n", type=int, default=None)
    su.add_argument("--count", type=int, default=50)
    su.add_argument("--seed", type=int, default=0)
    su.add_argument("--mode", choices=["exhaustive", "swap"], default="exhaustive")
    su.add_argument("--jobs", type=int, default=1)
    su.add_argument("--out", default=None)
    su.set_defaults(func=cmd_suite)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.tol is not None:
        core.set_tolerance(args.tol)
    try:
        return args.func(args)
    except core.GeometryError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
