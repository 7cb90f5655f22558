"""Command line front end: ``eps-tverberg <command> ...``.

Exit codes: 0 robust / success, 1 bad input, 2 violated, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import logging
import os
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import __version__
from . import io as rio
from .adversary_verifier import (
    check_certificate,
    greedy_adversary,
    monte_carlo_verify,
    size_threshold,
    verify_family,
)
from .colorful import (
    ColorfulParams,
    blocks_from_classes,
    construct_colorful_family,
    m_col_bound,
    verify_colorful_family,
)
from .errors import BudgetExceeded, RetryBudgetExhausted, SchemaError
from .geom_core import PointConfig
from .robust_constructor import (
    RobustParams,
    construct_family,
    epsilon_threshold,
    m_required,
    schedule,
    to_fraction,
)

log = logging.getLogger("robust_tverberg")

EXIT_OK, EXIT_INPUT, EXIT_VIOLATED, EXIT_BUDGET = 0, 1, 2, 3
SNAP_BITS = 16


def thread_cap() -> int:
    """Worker cap from ``EPS_TVERBERG_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("EPS_TVERBERG_THREADS", "1")))
    except ValueError:
        return 1


def manifest(command: str, args: argparse.Namespace, **paths) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "in_path", "out", "family", "verbose")}
    return {
        "command": command,
        "params": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in params.items()},
        "seed": getattr(args, "seed", None),
        "inputs": {k: v for k, v in paths.items() if v is not None},
        "output": getattr(args, "out", None),
        "version": __version__,
    }


def _float_list(text: str) -> list[str]:
    return [t for t in text.replace(" ", "").split(",") if t]


def cmd_formula(args) -> int:
    eps_list = [to_fraction(e) for e in _float_list(args.eps)]
    r_list = [int(x) for x in _float_list(args.r)]
    if any(not 0 < e <= 1 for e in eps_list) or any(r < 2 for r in r_list):
        raise SchemaError("need eps in (0, 1] and r >= 2")
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["eps", "r", "m_required", "threshold_m_minus_1", "threshold_m", "m_col_bound"])
    for e in eps_list:
        for r in r_list:
            m = m_required(e, r)
            mcol = m_col_bound(e, r) if e < 1 else "NA"
            w.writerow([str(e), r, m, str(epsilon_threshold(m - 1, r)), str(epsilon_threshold(m, r)), mcol])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def _emit(text: str, out: Optional[str]) -> None:
    if out and out != "-":
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _snap(x: float) -> Fraction:
    return Fraction(round(x * (1 << SNAP_BITS)), 1 << SNAP_BITS)


def generate_points(d: int, N: int, distribution: str, seed: Optional[int]) -> PointConfig:
    """Dyadic-rational point sets; the moment curve is in general position exactly."""
    if N < 1 or d < 1:
        raise SchemaError("need d >= 1 and N >= 1")
    rng = np.random.default_rng(seed)
    if distribution == "cube":
        rows = [[_snap(x) for x in rng.uniform(-1, 1, size=d)] for _ in range(N)]
    elif distribution == "sphere":
        rows = []
        for _ in range(N):
            v = rng.normal(size=d)
            v /= np.linalg.norm(v) or 1.0
            rows.append([_snap(x) for x in v])
    elif distribution == "moment-curve":
        grid = 1 << 8
        if N > 2 * grid + 1:
            raise SchemaError("moment curve grid has too few distinct parameters")
        ks = sorted(rng.choice(np.arange(-grid, grid + 1), size=N, replace=False).tolist())
        rows = [[Fraction(k, grid) ** e for e in range(1, d + 1)] for k in ks]
    else:
        raise SchemaError(f"unknown distribution {distribution!r}")
    return PointConfig(d, tuple(tuple(r) for r in rows))


def cmd_gen(args) -> int:
    cfg = generate_points(args.d, args.n_points, args.dist, args.seed)
    doc = rio.points_to_json(cfg)
    doc["manifest"] = manifest("gen", args)
    _emit(rio.dumps(doc), args.out)
    return EXIT_OK


def _load_points(path: str) -> PointConfig:
    return rio.points_from_json(rio.read_json(path))


def cmd_schedule(args) -> int:
    m = args.m if args.m is not None else m_required(args.eps, args.r)
    params = RobustParams(to_fraction(args.eps), args.r, m, args.n_points)
    sched = schedule(params, (args.d + 1) * (args.r - 1), args.lam)
    doc = {"m": m, "schedule": sched.as_dict(), "manifest": manifest("schedule", args)}
    _emit(rio.dumps(doc), args.out)
    return EXIT_OK


def cmd_construct(args) -> int:
    cfg = _load_points(args.in_path)
    m = args.m if args.m is not None else m_required(args.eps, args.r)
    params = RobustParams(to_fraction(args.eps), args.r, m, len(cfg))
    mode = args.mode or "oracle"
    if mode not in ("ledger", "oracle"):
        raise SchemaError("construct supports --mode ledger or oracle")
    res = construct_family(cfg, params, mode=mode, seed=args.seed, lam=args.lam, budget=args.budget)
    res.report["epsilon"] = str(params.epsilon)
    log.info("construct: %s", res.report)
    doc = rio.family_to_json(res.family, res.report, manifest("construct", args, points=args.in_path))
    _emit(rio.dumps(doc), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _load_points(args.in_path)
    fam = rio.family_from_json(rio.read_json(args.family), len(cfg))
    s0 = size_threshold(args.eps, len(cfg))
    mode = args.mode or "maximal"
    greedy = greedy_adversary(cfg, fam)
    doc: dict = {"manifest": manifest("verify", args, points=args.in_path, family=args.family)}
    if len(greedy) >= s0:
        # the adversary alone already defeats the family at this size
        assert check_certificate(cfg, fam, greedy)
        doc.update(
            verdict="violated", threshold=s0, max_bad_size=None, mode="greedy",
            certificate=rio.certificate_to_json(greedy),
        )
        code = EXIT_VIOLATED
    elif mode == "mc":
        rep = monte_carlo_verify(cfg, fam, args.eps, args.trials, args.seed)
        doc.update(
            verdict="violated" if rep.bad else "no violation found", threshold=s0, mode="mc",
            trials=rep.trials, bad=rep.bad, rate=rep.rate,
            certificate=None if rep.certificate is None else rio.certificate_to_json(rep.certificate),
        )
        code = EXIT_VIOLATED if rep.bad else EXIT_OK
    elif mode in ("maximal", "exhaustive", "oracle"):
        v = verify_family(cfg, fam, args.eps, mode="exhaustive" if mode == "exhaustive" else "maximal", budget=args.budget)
        doc.update(rio.verdict_to_json(v))
        code = EXIT_OK if v.robust else EXIT_VIOLATED
    else:
        raise SchemaError(f"verify does not support --mode {mode}")
    _emit(rio.dumps(doc), args.out)
    return code


def cmd_adversary(args) -> int:
    cfg = _load_points(args.in_path)
    fam = rio.family_from_json(rio.read_json(args.family), len(cfg))
    cert = greedy_adversary(cfg, fam)
    bound = len(cfg) * Fraction(fam.r - 1, fam.r) ** fam.m
    doc = {
        "certificate": rio.certificate_to_json(cert),
        "size": len(cert),
        "lower_bound": str(bound),
        "checked": check_certificate(cfg, fam, cert),
        "manifest": manifest("adversary", args, points=args.in_path, family=args.family),
    }
    code = EXIT_OK
    if args.eps is not None:
        s0 = size_threshold(args.eps, len(cfg))
        doc["threshold"] = s0
        code = EXIT_VIOLATED if len(cert) >= s0 else EXIT_OK
    _emit(rio.dumps(doc), args.out)
    return code


def cmd_colorful(args) -> int:
    dim, r, classes = rio.colored_from_json(rio.read_json(args.in_path))
    blocks = blocks_from_classes(classes, r)
    params = ColorfulParams.default(args.eps, r, args.m)
    mode = args.mode or "oracle"
    if mode not in ("ledger", "oracle"):
        raise SchemaError("colorful supports --mode ledger or oracle")
    res = construct_colorful_family(blocks, params, mode=mode, seed=args.seed, lam=args.lam, budget=args.budget)
    verdict = verify_colorful_family(blocks, res.family, params.epsilon)
    res.report["verified"] = verdict.robust
    res.report["max_bad_size"] = verdict.max_bad_size
    res.report["m_col_bound"] = m_col_bound(params.epsilon, r) if params.epsilon < 1 else None
    doc = rio.colorful_family_to_json(res.family, res.report, manifest("colorful", args, points=args.in_path))
    if verdict.certificate is not None:
        doc["certificate"] = rio.colorful_certificate_to_json(verdict.certificate)
    _emit(rio.dumps(doc), args.out)
    return EXIT_OK if verdict.robust else EXIT_VIOLATED


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors (1), not "violated" (2)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _sweep_uncolored(args, N: int, rng) -> dict:
    cfg = generate_points(args.d, N, args.dist, int(rng.integers(2**31)))
    params = RobustParams.default(args.eps, args.r, N)
    row = {"N": N, "m": params.m}
    try:
        res = construct_family(cfg, params, mode="oracle", seed=args.seed, budget=args.budget)
        row.update(verified=True, attempts=res.report["attempts"], max_bad_size=res.report["max_bad_size"])
    except RetryBudgetExhausted:
        row.update(verified=False, attempts=args.budget)
    return row


def _sweep_colorful(args, N: int, rng) -> dict:
    classes = [[[_snap(x) for x in rng.uniform(-1, 1, size=args.d)] for _ in range(args.r)] for _ in range(N)]
    blocks = blocks_from_classes(classes, args.r)
    bound = m_col_bound(args.eps, args.r)
    row: dict = {"N": N, "m_col_bound": bound, "verified": False}
    # smallest m that a random search certifies, up to the proven bound
    for m in range(1, bound + 1):
        try:
            res = construct_colorful_family(blocks, ColorfulParams.default(args.eps, args.r, m), mode="oracle", seed=args.seed, budget=args.budget)
        except RetryBudgetExhausted:
            continue
        row.update(verified=True, m=m, attempts=res.report["attempts"], single_transversal=m == 1)
        break
    return row


def cmd_sweep(args) -> int:
    """One NDJSON line per N; records where certification first succeeds."""
    if not 1 <= args.n_min <= args.n_points:
        raise SchemaError("need 1 <= --n-min <= --n-points")
    rng = np.random.default_rng(args.seed)
    lines = []
    for N in range(args.n_min, args.n_points + 1):
        row = _sweep_colorful(args, N, rng) if args.colorful else _sweep_uncolored(args, N, rng)
        row.update(d=args.d, r=args.r, eps=str(to_fraction(args.eps)), colorful=args.colorful)
        lines.append(json.dumps(row, sort_keys=True))
        log.info("sweep %s", lines[-1])
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    verbose = argparse.ArgumentParser(add_help=False)
    verbose.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    p = _Parser(prog="eps-tverberg", description=__doc__.splitlines()[0], parents=[verbose])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **kw: _add(*a, parents=[verbose], **kw)

    def common(sp, needs_in=True):
        if needs_in:
            sp.add_argument("--in", dest="in_path", required=True)
        sp.add_argument("--out", default=None)
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("formula", help="table of m_required, thresholds and m_col bounds")
    sp.add_argument("--eps", required=True, help="comma-separated epsilons")
    sp.add_argument("--r", required=True, help="comma-separated part counts")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_formula)

    sp = sub.add_parser("gen", help="generate a point set")
    common(sp, needs_in=False)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n-points", type=int, required=True)
    sp.add_argument("--dist", choices=["cube", "sphere", "moment-curve"], default="cube")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("schedule", help="A, lambda and N_k for given parameters")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n-points", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--lam", default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_schedule)

    sp = sub.add_parser("construct", help="build a partition family")
    common(sp)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--mode", choices=["ledger", "oracle"], default="oracle")
    sp.add_argument("--lam", default=None, help="ledger slack (default: the a-priori value)")
    sp.add_argument("--budget", type=int, default=10**4)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify", help="decide whether a family is eps-robust")
    common(sp)
    sp.add_argument("--family", required=True)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--mode", choices=["maximal", "oracle", "exhaustive", "mc"], default="maximal")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--budget", type=int, default=10**7)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("adversary", help="greedy bad subset for a family")
    common(sp)
    sp.add_argument("--family", required=True)
    sp.add_argument("--eps", default=None)
    sp.set_defaults(func=cmd_adversary)

    sp = sub.add_parser("colorful", help="build and verify a colorful transversal family")
    common(sp)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--mode", choices=["ledger", "oracle"], default="oracle")
    sp.add_argument("--lam", default=None)
    sp.add_argument("--budget", type=int, default=10**4)
    sp.set_defaults(func=cmd_colorful)

    sp = sub.add_parser("sweep", help="NDJSON log of oracle certification over a range of N")
    common(sp, needs_in=False)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--n-min", type=int, default=1)
    sp.add_argument("--n-points", type=int, required=True, help="largest N in the sweep")
    sp.add_argument("--dist", choices=["cube", "sphere", "moment-curve"], default="cube")
    sp.add_argument("--colorful", action="store_true", help="sweep colored classes and record the smallest m_col found")
    sp.add_argument("--budget", type=int, default=200)
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.verbose = getattr(args, "verbose", False)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    start = time.perf_counter()
    try:
        code = args.func(args)
    except (SchemaError, ValueError, KeyError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    log.info("%s finished in %.3fs (threads cap %d)", args.command, time.perf_counter() - start, thread_cap())
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
