"""Command line front end.

Reports are JSON lines, one object per line with a ``record`` field naming
its kind; solution lists can also go to CSV.  Exit codes: 0 clean, 1 usage
error, 2 computation failure, 3 a solution contradicting one of the
theorems was found.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import bounds, reduction, search
from .algebraics import CertificationError, dominant_root, g_value
from .cache import DiskCache
from .contfrac import CFCertificationError
from .kbonacci import closed_form, generate

log = logging.getLogger("kbpow")

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_FALSIFIED = 0, 1, 2, 3
ENV_PREFIX = "KBB_"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    k_min: int = search.DESK_K_RANGE[0]
    k_max: int = search.DESK_K_RANGE[1]
    n_max: int = search.DESK_N_MAX
    convergent_index: int = reduction.DEFAULT_ELL
    precision_bits: int | None = None
    worker_count: int = 1
    cache_dir: str | None = None
    output_path: str | None = None
    full_scale: bool = False
    gap_max: int = reduction.DEFAULT_GAP_MAX
    allow_k2: bool = False

    def validate(self) -> None:
        if self.k_min < 2:
            raise UsageError("--k-min must be >= 2")
        if self.k_max < self.k_min:
            raise UsageError("empty k range (k_max < k_min)")
        if self.k_min == 2 and not self.allow_k2:
            raise UsageError("k = 2 is excluded by default; pass --allow-k2")
        if self.n_max < 3:
            raise UsageError("--n-max must be >= 3")
        if self.convergent_index < 1:
            raise UsageError("--convergent-index must be >= 1")
        if self.precision_bits is not None and self.precision_bits < 64:
            raise UsageError("--precision-bits must be >= 64")
        if self.worker_count < 1:
            raise UsageError("--workers must be >= 1")
        if self.gap_max < 1:
            raise UsageError("--gap-max must be >= 1")


# flag dest -> RunConfig field
_FLAG_FIELDS = {
    "k_min": "k_min", "k_max": "k_max", "n_max": "n_max",
    "convergent_index": "convergent_index", "precision_bits": "precision_bits",
    "workers": "worker_count", "cache_dir": "cache_dir", "output": "output_path",
    "full": "full_scale", "gap_max": "gap_max", "allow_k2": "allow_k2",
}
_ENV_NAMES = {
    "k_min": "K_MIN", "k_max": "K_MAX", "n_max": "N_MAX", "convergent_index": "CONVERGENT_INDEX",
    "precision_bits": "PRECISION_BITS", "worker_count": "WORKERS", "cache_dir": "CACHE_DIR",
    "output_path": "OUTPUT", "full_scale": "FULL", "gap_max": "GAP_MAX", "allow_k2": "ALLOW_K2",
}
_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(name: str, raw):
    kind = _TYPES[name]
    if "bool" in kind:
        if isinstance(raw, bool):
            return raw
        return str(raw).strip().lower() in ("1", "true", "yes", "on")
    if "int" in kind:
        try:
            return int(raw)
        except (TypeError, ValueError):
            raise UsageError(f"{name} must be an integer, got {raw!r}") from None
    return str(raw)


def build_config(args: argparse.Namespace, environ=None) -> RunConfig:
    """Merge defaults < config file < ``KBB_*`` environment < command line flags."""
    environ = os.environ if environ is None else environ
    values: dict = {}
    cfg_path = getattr(args, "config", None) or environ.get(ENV_PREFIX + "CONFIG")
    if cfg_path:
        try:
            data = json.loads(Path(cfg_path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file {cfg_path}: {exc}") from None
        for key, raw in data.items():
            key = _FLAG_FIELDS.get(key, key)
            if key not in _TYPES:
                raise UsageError(f"unknown config key {key!r}")
            values[key] = _coerce(key, raw)
    for name, env in _ENV_NAMES.items():
        if ENV_PREFIX + env in environ:
            values[name] = _coerce(name, environ[ENV_PREFIX + env])
    for dest, name in _FLAG_FIELDS.items():
        v = getattr(args, dest, None)
        if v is not None and v is not False:
            values[name] = v
    if getattr(args, "k", None) is not None:
        values["k_min"] = values["k_max"] = args.k

    cfg = RunConfig(**values)
    if cfg.full_scale:
        if "k_min" not in values:
            cfg.k_min = search.FULL_K_RANGE[0]
        if "k_max" not in values:
            cfg.k_max = search.FULL_K_RANGE[1]
        if "n_max" not in values:
            cfg.n_max = search.FULL_N_MAX
    cfg.validate()
    return cfg


# -- output helpers ---------------------------------------------------------------


def sig(x: float, digits: int = 6) -> float:
    """Round to ``digits`` significant digits for stable, diffable reports."""
    if x is None or not math.isfinite(x):
        return x
    return float(f"{x:.{digits}g}")


class Emitter:
    def __init__(self, path: str | None):
        self._fh = open(path, "w") if path else sys.stdout
        self._own = bool(path)

    def record(self, kind: str, **fields) -> None:
        self._fh.write(json.dumps({"record": kind, **fields}) + "\n")

    def line(self, text: str) -> None:
        self._fh.write(text + "\n")

    def close(self) -> None:
        if self._own:
            self._fh.close()
        else:
            self._fh.flush()


def _cache(cfg: RunConfig) -> DiskCache | None:
    return DiskCache(Path(cfg.cache_dir)) if cfg.cache_dir else None


# -- commands -----------------------------------------------------------------------


def cmd_seq(args, cfg: RunConfig, out: Emitter) -> int:
    k = args.k if args.k is not None else cfg.k_min
    if k < 2:
        raise UsageError("k must be >= 2")
    n_max = args.n_max if args.n_max is not None else 20
    if n_max < 1:
        raise UsageError("--n-max must be >= 1")
    table = generate(k, n_max)
    for n, fn in table.items(start=1):
        cf = closed_form(k, n)
        mark = "" if cf is None else ("closed-form-ok" if cf == fn else "closed-form-MISMATCH")
        out.line(f"{n}\t{fn}\t{mark}".rstrip())
    return EXIT_OK


def cmd_root(args, cfg: RunConfig, out: Emitter) -> int:
    prec = cfg.precision_bits or 256
    cache = _cache(cfg)
    for k in range(cfg.k_min, cfg.k_max + 1):
        root = cache.root(k, prec) if cache else dominant_root(k, prec)
        g = g_value(root)
        out.record("root", k=k, precision_bits=prec, alpha=root.alpha.str(30),
                   g=g.str(30), radius_log2=math.floor(math.log2(float(root.alpha.radius)))
                   if float(root.alpha.radius) > 0 else None)
    return EXIT_OK


def cmd_cf(args, cfg: RunConfig, out: Emitter) -> int:
    ell = cfg.convergent_index
    cache = _cache(cfg)
    for k in range(max(cfg.k_min, 3), cfg.k_max + 1):
        c = reduction.k_context(k, ell, cfg.precision_bits, reduction.DEFAULT_ADVANCE, cache)
        conv = c.convs[ell]
        out.record("cf", k=k, ell=ell, precision_bits=c.precision_bits,
                   partial_quotients=_quotients(c.convs[: ell + 1]),
                   q_digits=len(str(conv.q)), q=f"{float(conv.q):.6e}")
    return EXIT_OK


def _quotients(convs) -> list[int]:
    # a_0 = p_0 and a_l = (q_l - q_{l-2}) / q_{l-1}
    out = [convs[0].p]
    qs = [0, 1] + [c.q for c in convs]
    for i in range(1, len(convs)):
        out.append((qs[i + 2] - qs[i]) // qs[i + 1])
    return out


def cmd_bounds(args, cfg: RunConfig, out: Emitter) -> int:
    for k in range(max(cfg.k_min, 3), cfg.k_max + 1):
        a = bounds.final_step_a(k)
        h1, h2 = bounds.height_bounds(k, 1)
        out.record("bounds", k=k, M_k=sig(bounds.absolute_n_bound(k)),
                   key_lemma_A=sig(a), key_lemma_bound=sig(bounds.key_lemma_bound(a)),
                   height_first=sig(h1), height_second_gap1=sig(h2),
                   below_2_pow_half_k=math.log(bounds.absolute_n_bound(k)) < k / 2 * math.log(2))
    out.record("bounds_summary", crossover_k=bounds.crossover_k())
    return EXIT_OK


def _q_str(q: int) -> str:
    return f"{float(q):.6g}"


def cmd_reduce(args, cfg: RunConfig, out: Emitter) -> int:
    ks = range(max(cfg.k_min, 3), cfg.k_max + 1)
    if not ks:
        raise UsageError("empty k range for the reduction (k starts at 3)")
    ell = cfg.convergent_index
    cache = _cache(cfg)
    status = EXIT_OK
    try:
        s1 = reduction.stage1_sweep(ks, ell, cfg.precision_bits, workers=cfg.worker_count, cache=cache)
    except (reduction.ReductionError, CertificationError, CFCertificationError) as exc:
        log.error("stage 1 failed: %s", exc)
        return EXIT_COMPUTE
    ok = []
    for k, r in s1:
        alpha = reduction.k_context(k, ell, cfg.precision_bits, reduction.DEFAULT_ADVANCE, cache).alpha
        out.record("stage1", k=k, ell=r.ell_used, status=r.status.value, advanced=r.advanced,
                   q_digits=len(str(r.q)), q=_q_str(r.q),
                   epsilon=sig(r.epsilon_lower) if r.epsilon is not None else None,
                   bound=sig(r.bound), alpha=float(alpha))
        if r.ok:
            ok.append((k, r, float(alpha)))
        else:
            status = EXIT_COMPUTE
    if not ok:
        return EXIT_COMPUTE
    kq_min = min(ok, key=lambda x: x[1].q)
    kq_max = max(ok, key=lambda x: x[1].q)
    ke = min(ok, key=lambda x: x[1].epsilon_lower)
    kb = max(ok, key=lambda x: x[1].bound)
    alpha_min = min(x[2] for x in ok)
    out.record(
        "stage1_summary", k_min=ks[0], k_max=ks[-1], ell=ell, ell_convention="0-based; index 0 is a_0",
        min_q=_q_str(kq_min[1].q), min_q_k=kq_min[0], max_q=_q_str(kq_max[1].q), max_q_k=kq_max[0],
        max_q_digits=len(str(kq_max[1].q)),
        min_epsilon=sig(ke[1].epsilon_lower), min_epsilon_k=ke[0],
        max_bound=sig(kb[1].bound), max_bound_k=kb[0], cutoff_n_minus_m=reduction.cutoff(
            [x[1].bound for x in ok]),
        range_wide_bound=sig(reduction.aggregate_bound(
            reduction.STAGE1_A, float(kq_max[1].q), ke[1].epsilon_lower, alpha_min)),
        failures=[k for k, r in s1 if not r.ok], advanced=[k for k, r in s1 if r.advanced])

    if args.no_stage2:
        return status
    try:
        s2 = reduction.stage2_sweep(ks, cfg.gap_max, ell, cfg.precision_bits,
                                    workers=cfg.worker_count, cache=cache)
    except (reduction.ReductionError, CertificationError, CFCertificationError) as exc:
        log.error("stage 2 failed: %s", exc)
        return EXIT_COMPUTE
    for s in s2:
        out.record("stage2", k=s.k, ell=s.ell_used, gap_max=s.gap_max, min_epsilon=sig(s.min_epsilon),
                   argmin_gap=s.argmin_gap, max_bound=sig(s.max_bound), argmax_gap=s.argmax_gap,
                   failures=list(s.failures), advanced=list(s.advanced))
        if s.failures:
            status = EXIT_COMPUTE
    se = min(s2, key=lambda s: s.min_epsilon)
    sb = max(s2, key=lambda s: s.max_bound)
    out.record(
        "stage2_summary", k_min=ks[0], k_max=ks[-1], gap_max=cfg.gap_max, ell=ell,
        A=float(reduction.STAGE2_A), B=float(reduction.STAGE2_B),
        normalization="linear form divided by log alpha; the (n-1) coefficient is 1, not log alpha",
        min_epsilon=sig(se.min_epsilon), min_epsilon_k=se.k, min_epsilon_gap=se.argmin_gap,
        max_bound=sig(sb.max_bound), max_bound_k=sb.k, max_bound_gap=sb.argmax_gap,
        cutoff_n=reduction.cutoff([s.max_bound for s in s2]),
        range_wide_bound=sig(reduction.aggregate_bound(
            reduction.STAGE2_A, float(kq_max[1].q), se.min_epsilon, float(reduction.STAGE2_B))))
    return status


def _write_csv(path: str, solutions) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "n", "m", "t"])
        for s in solutions:
            w.writerow([s.k, s.n, s.m, s.t])


def _emit_search(report: search.SearchReport, out: Emitter) -> None:
    for s in report.solutions:
        out.record("solution", k=s.k, n=s.n, m=s.m, t=s.t, n_is_t_plus_2=s.n_is_t_plus_2,
                   mixed_case_condition=search.mixed_case_condition(s.n, s.m, s.t, s.k),
                   in_mixed_block=search.in_mixed_block(s))
    out.record("search_summary", k_min=report.k_range[0], k_max=report.k_range[1], n_max=report.n_max,
               solutions=len(report.solutions), probes=report.pairs_scanned,
               violations=[list(v.as_tuple()) for v in report.violations])


def cmd_search(args, cfg: RunConfig, out: Emitter) -> int:
    report = search.search_range(cfg.k_min, cfg.k_max, cfg.n_max, cfg.worker_count)
    log.info("search took %.2fs", report.elapsed)
    _emit_search(report, out)
    if args.csv:
        _write_csv(args.csv, report.solutions)
    return EXIT_FALSIFIED if report.violations else EXIT_OK


def cmd_verify(args, cfg: RunConfig, out: Emitter) -> int:
    k_min = max(cfg.k_min, 3)
    report = search.verify_theorem1(k_min, cfg.k_max, cfg.n_max, cfg.worker_count)
    log.info("theorem 1 search took %.2fs", report.elapsed)
    falsified = bool(report.violations)
    out.record("theorem1", k_min=k_min, k_max=cfg.k_max, n_max=cfg.n_max,
               solutions=len(report.solutions), probes=report.pairs_scanned,
               violations=[list(v.as_tuple()) for v in report.violations],
               condition_failures=[list(v.as_tuple()) for v in report.condition_failures])
    bad = []
    for k in range(k_min, cfg.k_max + 1):
        r = search.verify_theorem2_cases(k)
        if not r.ok:
            bad.append(k)
            out.record("theorem2_case_failure", k=k,
                       low_block=[list(s.as_tuple()) for s in r.low_block],
                       high_block=[list(s.as_tuple()) for s in r.high_block],
                       printed_identity=r.printed_identity, derived_identity=r.derived_identity,
                       closed_forms_ok=r.closed_forms_ok)
    fam = search.family_members(args.s_max, cfg.k_max, k_min, cfg.n_max)
    found = set(report.solutions)
    missing = [list(s.as_tuple()) for s in fam if s not in found]
    out.record("theorem2", k_min=k_min, k_max=cfg.k_max, case_failures=bad,
               family_members=len(fam), family_missing_from_search=missing)
    falsified = falsified or bool(bad) or bool(missing)
    return EXIT_FALSIFIED if falsified else EXIT_OK


def cmd_family(args, cfg: RunConfig, out: Emitter) -> int:
    k_max = args.family_k_max if args.family_k_max is not None else cfg.k_max
    for sol in search.family_members(args.s_max, k_max, 2):
        s = next(s for s in range(1, args.s_max + 1) if sol.m == (1 << s) + s - 1)
        out.record("family", s=s, n=sol.n, m=sol.m, t=sol.t, k=sol.k, verified=True)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, help="single order k (sets both --k-min and --k-max)")
    p.add_argument("--k-min", type=int)
    p.add_argument("--k-max", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--precision-bits", type=int)
    p.add_argument("--convergent-index", type=int,
                   help="0-based convergent index (default 119, the 120th convergent)")
    p.add_argument("--workers", type=int)
    p.add_argument("--cache-dir")
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--config", help="JSON file with RunConfig keys")
    p.add_argument("--full", action="store_true", help="full scale: k in [3, 321], n <= 2265")
    p.add_argument("--allow-k2", action="store_true", help="permit k = 2 (classical Fibonacci)")
    p.add_argument("-v", "--verbose", action="store_true")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kbpow", description="F_n^(k) + F_m^(k) = 2^t pipeline")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("seq", help="print F_n^(k) with closed-form cross-checks")
    _common(p)
    p.set_defaults(func=cmd_seq)

    p = sub.add_parser("root", help="certified dominant root and g(alpha, k)")
    _common(p)
    p.set_defaults(func=cmd_root)

    p = sub.add_parser("cf", help="continued fraction of log 2 / log alpha")
    _common(p)
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser("bounds", help="Matveev chain: M_k, key lemma, height bounds")
    _common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("reduce", help="two-stage continued-fraction reduction")
    _common(p)
    p.add_argument("--gap-max", type=int, help="largest n - m for stage 2 (default 843)")
    p.add_argument("--no-stage2", action="store_true")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("search", help="exhaustive solution search")
    _common(p)
    p.add_argument("--csv", help="also write solutions as CSV rows k,n,m,t")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="check both theorems over a range")
    _common(p)
    p.add_argument("--s-max", type=int, default=4)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("family", help="list the infinite solution family")
    _common(p)
    p.add_argument("--s-max", type=int, default=3)
    p.add_argument("--family-k-max", type=int)
    p.set_defaults(func=cmd_family)
    return parser


# commands whose k range may legitimately start at 2 without --allow-k2
_K2_FREE = {"seq", "root", "family"}


def main(argv=None, environ=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        if args.command in _K2_FREE:
            args.allow_k2 = True
        cfg = build_config(args, environ)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"kbpow: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = Emitter(cfg.output_path)
    try:
        return args.func(args, cfg, out)
    except UsageError as exc:
        print(f"kbpow: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (reduction.ReductionError, CertificationError, CFCertificationError) as exc:
        log.error("computation failed: %s", exc)
        return EXIT_COMPUTE
    finally:
        out.close()


if __name__ == "__main__":
    sys.exit(main())
