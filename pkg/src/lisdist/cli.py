"""Command-line interface.

Every computation is exposed as a reproducible subcommand emitting CSV (with
a commented parameter header) or JSON (single document with a schema tag and
an exact parameter echo).  Exit codes: 0 success, 1 usage, 2 domain or
capacity, 3 numerical failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import asymptotics as asy
from . import combinat, montecarlo, painleve, toeplitz
from .errors import (AccuracyError, CapacityError, ConditioningError,
                     DomainError, SolverError, TruncationError, UsageError)
from .rng import SeededStream

SCHEMA = "lisdist/1"
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_NUMERICAL = 3
EXIT_VERIFY = 4
SOLVER_SCHEME_VERSION = 2  # bump when the discretization changes


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _round17(obj):
    """Round-trip every float through 17 significant digits."""
    if isinstance(obj, float):
        return float(f"{obj:.17g}")
    if isinstance(obj, dict):
        return {k: _round17(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round17(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_round17(float(v)) for v in obj]
    if isinstance(obj, (np.floating,)):
        return _round17(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def _emit(doc: dict, rows, header, args, out):
    """Write JSON (one document) or CSV (commented header + rows + footer)."""
    if getattr(args, "json", False):
        out.write(json.dumps(_round17(doc), indent=2, sort_keys=True))
        out.write("\n")
        return
    params = doc.get("params", {})
    out.write(f"# schema={SCHEMA} command={doc['command']}\n")
    out.write("# params=" + json.dumps(_round17(params), sort_keys=True) + "\n")
    if rows is not None:
        out.write(",".join(header) + "\n")
        for row in rows:
            out.write(",".join(f"{v:.17g}" if isinstance(v, float) else str(v)
                               for v in row) + "\n")
    footer = {k: v for k, v in doc.items() if k not in ("command", "params", "rows")}
    if footer:
        out.write("# footer=" + json.dumps(_round17(footer), sort_keys=True) + "\n")


def _open_out(args):
    if getattr(args, "output", None):
        return open(args.output, "w"), True
    return sys.stdout, False


# ---------------------------------------------------------------------------
# solver cache
# ---------------------------------------------------------------------------

def _cache_dir() -> Path:
    env = os.environ.get("LISDIST_CACHE")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "lisdist"


def _solve_cached(l_minus: float, l_plus: float, step: float, use_cache: bool):
    key = f"v{SOLVER_SCHEME_VERSION}:{l_minus!r}:{l_plus!r}:{step!r}"
    tag = hashlib.sha256(key.encode()).hexdigest()[:16]
    path = _cache_dir() / f"pii_{tag}.npz"
    if use_cache and path.exists():
        data = np.load(path)
        return painleve.PainleveSolution(
            mesh=data["mesh"], u=data["u"], u_prime=data["u_prime"],
            residual_bound=float(data["residual_bound"]),
            domain=(l_minus, l_plus), step=step, refined=bool(data["refined"]))
    sol = painleve.solve_hastings_mcleod(l_minus, l_plus, step)
    if use_cache:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savez(path, mesh=sol.mesh, u=sol.u, u_prime=sol.u_prime,
                 residual_bound=sol.residual_bound, refined=sol.refined)
    return sol


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_tw(args, out):
    sol = _solve_cached(args.l_minus, args.l_plus, args.mesh_step, not args.no_cache)
    npts = int(round((args.tmax - args.tmin) / args.step))
    grid = args.tmin + args.step * np.arange(npts + 1)
    table = painleve.tracy_widom_table(sol, grid)
    rows = [(float(t), float(f), float(d))
            for t, f, d in zip(table.t_grid, table.F, table.density)]
    doc = {
        "command": "tw", "schema": SCHEMA,
        "params": {"tmin": args.tmin, "tmax": args.tmax, "step": args.step,
                   "l_minus": args.l_minus, "l_plus": args.l_plus,
                   "mesh_step": args.mesh_step},
        "rows": [{"t": r[0], "F": r[1], "density": r[2]} for r in rows] if args.json else None,
        "mean": table.mean, "variance": table.variance,
        "residual_bound": sol.residual_bound,
        "route_disagreement": table.route_disagreement,
    }
    if not args.json:
        doc.pop("rows")
    _emit(doc, rows, ("t", "F", "density"), args, out)
    return 0


def cmd_exact(args, out):
    if args.n is None and not args.all_n:
        raise UsageError("provide --n or --all-n")
    if args.all_n:
        table = combinat.distribution_table(args.N, n_max=args.N, limit=args.limit)
        rows = [(n, str(table[n]), float(table[n])) for n in range(1, args.N + 1)]
    else:
        q = combinat.distribution_exact(args.N, args.n, limit=args.limit)
        rows = [(args.n, str(q), float(q))]
    doc = {"command": "exact", "schema": SCHEMA,
           "params": {"N": args.N, "n": args.n, "all_n": args.all_n},
           "rows": [{"n": r[0], "fraction": r[1], "value": r[2]} for r in rows]}
    if not args.json:
        doc.pop("rows")
    _emit(doc, rows, ("n", "fraction", "value"), args, out)
    return 0


def cmd_poisson(args, out):
    if args.sweep_n:
        lo, hi = (int(v) for v in args.sweep_n.split(":"))
        size = hi + 2
        lp = toeplitz.log_det_prefix(size, args.lam)
        kap, _ = toeplitz._logpivots(size, args.lam)
        rows = []
        for n in range(lo, hi + 1):
            logdet = float(lp[n - 1])
            rows.append((n, args.lam, math.exp(min(logdet - args.lam, 0.0)),
                         logdet, float(math.exp(-kap[n]))))
        doc = {"command": "poisson", "schema": SCHEMA,
               "params": {"lambda": args.lam, "sweep_n": args.sweep_n}}
        if args.json:
            doc["rows"] = [{"n": r[0], "lambda": r[1], "phi": r[2],
                            "log_det": r[3], "kappa_sq": r[4]} for r in rows]
        _emit(doc, rows, ("n", "lambda", "phi", "log_det", "kappa_sq"), args, out)
        return 0
    routes = {}
    if args.routes in ("all", "det"):
        routes["det"] = toeplitz.phi(args.n, args.lam).phi
    if args.routes in ("all", "kappa"):
        k_max = args.k_max or max(args.n + 8, int(8 * math.sqrt(args.lam)) + 40)
        rv = toeplitz.phi_via_kappa(args.n, args.lam, k_max)
        routes["kappa"] = rv.value
        routes["kappa_tail_bound"] = rv.tail_bound
    if args.routes in ("all", "series"):
        n_max = args.n_max or min(60, int(args.lam + 8 * math.sqrt(args.lam)) + 25)
        rv = toeplitz.phi_via_series(args.n, args.lam, n_max)
        routes["series"] = rv.value
        routes["series_tail_bound"] = rv.tail_bound
    vals = [v for k, v in routes.items() if not k.endswith("_bound")]
    deltas = {}
    names = [k for k in routes if not k.endswith("_bound")]
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            deltas[f"|{a}-{b}|"] = abs(routes[a] - routes[b])
    doc = {"command": "poisson", "schema": SCHEMA,
           "params": {"n": args.n, "lambda": args.lam, "routes": args.routes},
           "values": routes, "deltas": deltas}
    rows = [(k, float(v)) for k, v in {**routes, **deltas}.items()]
    _emit(doc, rows, ("quantity", "value"), args, out)
    return 0


def cmd_sample(args, out):
    stream = SeededStream(args.seed, args.stream)
    stats = montecarlo.sample_lis(args.N, args.samples, stream, shards=args.shards)
    if args.dump:
        shard_map = [size for _, size in
                     montecarlo._shard_ranges(args.samples, args.shards)]
        with open(args.dump, "w") as fh:
            fh.write(json.dumps({"schema": SCHEMA, "kind": "lis", "N": args.N,
                                 "seed": args.seed, "stream": args.stream,
                                 "shard_map": shard_map}) + "\n")
            for v in stats.samples:
                fh.write(f"{int(v)}\n")
    doc = {"command": "sample", "schema": SCHEMA,
           "params": {"N": args.N, "samples": args.samples, "seed": args.seed,
                      "stream": args.stream, "shards": args.shards},
           "mean": stats.mean, "variance": stats.variance,
           "min": float(stats.samples[0]), "max": float(stats.samples[-1]),
           "erdos_szekeres_floor": combinat.erdos_szekeres_floor(args.N)}
    _emit(doc, [(k, doc[k]) for k in ("mean", "variance", "min", "max")],
          ("quantity", "value"), args, out)
    return 0


def cmd_hammersley(args, out):
    stream = SeededStream(args.seed, args.stream)
    stats = montecarlo.sample_hammersley(args.lam, args.samples, stream,
                                         shards=args.shards)
    doc = {"command": "hammersley", "schema": SCHEMA,
           "params": {"lambda": args.lam, "samples": args.samples,
                      "seed": args.seed, "stream": args.stream,
                      "shards": args.shards},
           "mean": stats.mean, "variance": stats.variance,
           "min": float(stats.samples[0]), "max": float(stats.samples[-1])}
    _emit(doc, [(k, doc[k]) for k in ("mean", "variance", "min", "max")],
          ("quantity", "value"), args, out)
    return 0


def _rates_at(x: float) -> dict:
    vals = {}
    if 0.0 < x <= 2.0:
        vals["U"] = asy.rate_U(x)
        vals["H"] = asy.rate_H(x)
    if x >= 2.0:
        vals["I"] = asy.rate_I(x)
    return vals


def cmd_rates(args, out):
    if args.x_max is not None:
        xs = []
        x = args.x
        while x <= args.x_max + 1e-12:
            xs.append(x)
            x += args.x_step
        rows = []
        for x in xs:
            v = _rates_at(x)
            rows.append((float(x), v.get("U", math.nan), v.get("I", math.nan),
                         v.get("H", math.nan)))
        doc = {"command": "rates", "schema": SCHEMA,
               "params": {"x": args.x, "x_max": args.x_max, "x_step": args.x_step}}
        if args.json:
            doc["rows"] = [{"x": r[0], "U": r[1], "I": r[2], "H": r[3]} for r in rows]
        _emit(doc, rows, ("x", "U", "I", "H"), args, out)
        return 0
    vals = _rates_at(args.x)
    if not vals:
        raise DomainError(f"x={args.x} outside all rate-function domains")
    doc = {"command": "rates", "schema": SCHEMA, "params": {"x": args.x},
           "values": vals}
    _emit(doc, [(k, v) for k, v in vals.items()], ("rate", "value"), args, out)
    return 0


def cmd_regime(args, out):
    sol = _solve_cached(painleve.DEFAULT_L_MINUS, painleve.DEFAULT_L_PLUS,
                        painleve.DEFAULT_STEP, not args.no_cache)
    th = asy.RegimeThresholds(delta5=args.delta, delta6=args.delta,
                              delta7=args.delta, M5=args.window,
                              M6=args.window, M7=args.window)
    pa = asy.phi_asymptotic(args.n, args.lam, sol, th)
    cls = pa.classification
    doc = {"command": "regime", "schema": SCHEMA,
           "params": {"n": args.n, "lambda": args.lam, "delta": args.delta,
                      "window": args.window},
           "regime": cls.regime, "gamma_n": cls.gamma_n, "t_crit": cls.t_crit,
           "thresholds": {"delta5": th.delta5, "delta6": th.delta6,
                          "delta7": th.delta7, "M5": th.M5, "M6": th.M6,
                          "M7": th.M7},
           "log_phi_estimate": pa.log_phi_estimate,
           "bound_exponent": pa.bound_exponent,
           "caveat": pa.caveat}
    rows = [("regime", cls.regime), ("gamma_n", cls.gamma_n),
            ("t_crit", cls.t_crit)]
    _emit(doc, rows, ("quantity", "value"), args, out)
    return 0


def cmd_equilibrium(args, out):
    meas = asy.equilibrium_measure(args.gamma)
    angles = np.linspace(-math.pi, math.pi, args.angles)
    rows = [(float(t), meas.density(float(t))) for t in angles]
    doc = {"command": "equilibrium", "schema": SCHEMA,
           "params": {"gamma": args.gamma, "angles": args.angles},
           "full_circle": meas.full_circle, "theta_c": meas.theta_c,
           "lagrange_l": meas.lagrange_l, "normalization": meas.normalization()}
    if args.json:
        doc["rows"] = [{"theta": r[0], "density": r[1]} for r in rows]
    _emit(doc, rows, ("theta", "density"), args, out)
    return 0


def _verify_checks(quick: bool):
    """Yield (check id, measured value, tolerance, passed)."""
    checks = []

    def add(cid, value, tol, ok=None):
        ok = (value <= tol) if ok is None else ok
        checks.append({"check": cid, "value": float(value), "tolerance": float(tol),
                       "pass": bool(ok)})

    # exact combinatorics against brute force
    worst = 0.0
    for N in range(1, 7):
        bf = combinat.brute_force_distribution(N)
        for n in range(1, N + 1):
            d = abs(float(bf[n].as_fraction()
                          - combinat.distribution_exact(N, n).as_fraction()))
            worst = max(worst, d)
    add("exact-vs-bruteforce-N<=6", worst, 0.0, worst == 0.0)

    # tableau-count completeness
    ok = True
    for N in (10, 16, 20):
        tot = sum(combinat.hook_count(mu) ** 2
                  for mu in combinat.partitions_first_row_at_most(N, N))
        ok = ok and (tot == math.factorial(N))
    add("squared-counts-sum-to-N!", 0.0 if ok else 1.0, 0.0, ok)

    # route agreement for the Poissonized distribution
    worst_k = worst_s = 0.0
    lams = (0.25, 1.0, 4.0) if quick else (0.25, 1.0, 4.0, 16.0)
    for lam in lams:
        for n in range(1, 9):
            pd = toeplitz.phi(n, lam).phi
            pk = toeplitz.phi_via_kappa(n, lam, 64).value
            ps = toeplitz.phi_via_series(n, lam, 40)
            worst_k = max(worst_k, abs(pd - pk))
            worst_s = max(worst_s, abs(pd - ps.value) - ps.tail_bound)
    add("phi-route-det-vs-kappa", worst_k, 1e-9)
    add("phi-route-det-vs-series", worst_s, 1e-9)

    # Hankel/Toeplitz determinant identity
    worst = max(toeplitz.verify_hankel_toeplitz(r, lam)
                for r in range(1, 6) for lam in (0.5, 1.0, 2.0))
    add("hankel-toeplitz-identity", worst, 1e-9)

    # Painleve solver and the limit law
    sol = painleve.solve_hastings_mcleod()
    add("pii-residual", sol.residual_bound, 1e-8)
    from .airy import airy
    add("pii-right-tail", abs(sol.u_at(6.0) + airy(6.0).ai), 1e-6)
    add("pii-left-tail", abs(sol.u_at(-8.0) + 2.0) / 2.0, 2e-2)
    table = painleve.tracy_widom_table(sol, painleve.default_t_grid())
    add("tw-mean", abs(table.mean - (-1.7711)), 5e-3)
    add("tw-variance", abs(table.variance - 0.8132), 5e-3)

    # closed-form kappa^2 in the separated regime
    ke = asy.kappa_asymptotic(40, 2.0, sol)
    exact = toeplitz.kappa_sq(39, 1600.0)
    add("kappa-closed-form-gamma2", abs(ke.estimate - exact) / exact, 0.10)

    # monotonicity of the exact distribution in N
    ok = True
    for N in range(1, 10):
        ta = combinat.distribution_table(N, n_max=N)
        tb = combinat.distribution_table(N + 1, n_max=N)
        for n in range(1, N + 1):
            ok = ok and (tb[n].as_fraction() <= ta[n].as_fraction())
    add("q-monotone-in-N", 0.0 if ok else 1.0, 0.0, ok)

    # de-Poissonization bracket containment
    ok = True
    for N in (25, 36):
        table_n = combinat.distribution_table(N, n_max=10)
        for n in (6, 8, 10):
            sb = asy.depoisson_bounds(n, N, 1.0)
            q = float(table_n[n])
            ok = ok and (sb.lower <= q <= sb.upper)
    add("depoisson-bracket", 0.0 if ok else 1.0, 0.0, ok)
    return checks


def cmd_verify(args, out):
    checks = _verify_checks(args.quick)
    ok = all(c["pass"] for c in checks)
    doc = {"command": "verify", "schema": SCHEMA,
           "params": {"quick": args.quick},
           "checks": checks, "pass": ok}
    if args.json:
        _emit(doc, None, None, args, out)
    else:
        out.write(f"# schema={SCHEMA} command=verify\n")
        for c in checks:
            status = "PASS" if c["pass"] else "FAIL"
            out.write(f"{status} {c['check']}: value={c['value']:.3e} "
                      f"tolerance={c['tolerance']:.3e}\n")
        out.write(("PASS" if ok else "FAIL") + " overall\n")
    return 0 if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    p = _Parser(prog="lisdist",
                description="Longest-increasing-subsequence limit law toolkit")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="emit one JSON document")
        sp.add_argument("-o", "--output", help="write to file instead of stdout")

    sp = sub.add_parser("tw", help="tabulate the limit distribution")
    sp.add_argument("--tmin", type=float, default=-6.0)
    sp.add_argument("--tmax", type=float, default=4.0)
    sp.add_argument("--step", type=float, default=0.05)
    sp.add_argument("--l-minus", type=float, default=painleve.DEFAULT_L_MINUS)
    sp.add_argument("--l-plus", type=float, default=painleve.DEFAULT_L_PLUS)
    sp.add_argument("--mesh-step", type=float, default=painleve.DEFAULT_STEP)
    sp.add_argument("--no-cache", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_tw)

    sp = sub.add_parser("exact", help="exact finite-N distribution")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--all-n", action="store_true")
    sp.add_argument("--limit", type=int, default=combinat.DEFAULT_EXACT_LIMIT)
    common(sp)
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("poisson", help="Poissonized distribution, three routes")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--routes", choices=("all", "det", "kappa", "series"),
                    default="all")
    sp.add_argument("--k-max", type=int)
    sp.add_argument("--n-max", type=int)
    sp.add_argument("--sweep-n", help="emit an n-sweep table 'LO:HI' of "
                    "(n, lambda, phi, log_det, kappa_sq)")
    common(sp)
    sp.set_defaults(func=cmd_poisson)

    sp = sub.add_parser("sample", help="Monte Carlo LIS sampling")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--samples", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--stream", type=int, default=0)
    sp.add_argument("--shards", type=int, default=montecarlo.DEFAULT_SHARDS)
    sp.add_argument("--dump", help="write raw samples (JSON header + lines)")
    common(sp)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("hammersley", help="Poisson point-cloud chain sampling")
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--samples", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--stream", type=int, default=0)
    sp.add_argument("--shards", type=int, default=montecarlo.DEFAULT_SHARDS)
    common(sp)
    sp.set_defaults(func=cmd_hammersley)

    sp = sub.add_parser("rates", help="large-deviation rate functions")
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--x-max", type=float, help="sweep upper end (emits a table)")
    sp.add_argument("--x-step", type=float, default=0.1)
    common(sp)
    sp.set_defaults(func=cmd_rates)

    sp = sub.add_parser("regime", help="asymptotic regime verdict for (n, lambda)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--delta", type=float, default=0.1)
    sp.add_argument("--window", type=float, default=2.0)
    sp.add_argument("--no-cache", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_regime)

    sp = sub.add_parser("equilibrium", help="equilibrium measure on the circle")
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--angles", type=int, default=9)
    common(sp)
    sp.set_defaults(func=cmd_equilibrium)

    sp = sub.add_parser("verify", help="run cross-route and oracle checks")
    sp.add_argument("--quick", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out, close = _open_out(args)
    try:
        return args.func(args, out) or 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, CapacityError) as exc:
        print(f"domain/capacity error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConditioningError, AccuracyError, SolverError, TruncationError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    finally:
        if close:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
