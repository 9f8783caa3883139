"""Command-line harness: generate, learn, evaluate, bench.

Exit codes: 0 success, 2 invalid input, 3 tournament without a winner,
1 anything unexpected.
"""

import argparse
import csv
import logging
import math
import os
import sys
import time
from typing import Dict, List, Optional, Sequence

import numpy as np

from .candidates import GenerationBudget, generate_all
from .distributions import Mixture, kolmogorov_numeric, tv_bound_mixtures, tv_numeric
from .evaluation import best_candidate
from .learner import MAX_EPS, ValidationError, check_accuracy, learn
from .planted import planted_instance
from .selection import TournamentConfig, select
from .sources import ArraySource, MixtureSource, SampleShortfallError

log = logging.getLogger("gmmlearn")

EXIT_OK, EXIT_CRASH, EXIT_INVALID, EXIT_NO_WINNER = 0, 1, 2, 3

PARAM_KEYS = ("w", "mu1", "sigma1", "mu2", "sigma2")
BENCH_HEADER = ["engine", "N", "ops", "ms", "winner_tv"]
REPORT_HEADER = [
    "seed", "eps", "delta", "engine", "n_samples", "status",
    "w", "mu1", "sigma1", "mu2", "sigma2",
    "oracle_tv", "oracle_k", "best_candidate_tv", "candidates",
    "generate_s", "select_s",
]


class ParseError(ValidationError):
    """Malformed input file; the message names the line and field."""


# parameter files

def format_params(params: Sequence[float]) -> str:
    """``key = value`` lines; ``repr`` keeps every float bit-exact."""
    return "".join(f"{k} = {float(v)!r}\n" for k, v in zip(PARAM_KEYS, params))


def parse_params(text: str, name: str = "<params>") -> tuple:
    """Inverse of :func:`format_params`; ``#`` starts a comment.

    :raises ParseError: on unknown, repeated or missing keys, non-numeric
        values, a weight outside [0, 1] or a non-positive sigma.
    """
    found: Dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        if not sep:
            raise ParseError(f"{name}:{lineno}: expected 'key = value', got {raw!r}")
        if key not in PARAM_KEYS:
            raise ParseError(f"{name}:{lineno}: unknown key {key!r} (allowed: {', '.join(PARAM_KEYS)})")
        if key in found:
            raise ParseError(f"{name}:{lineno}: duplicate key {key!r}")
        try:
            v = float(value)
        except ValueError:
            raise ParseError(f"{name}:{lineno}: field {key!r} is not a number: {value!r}") from None
        if not math.isfinite(v):
            raise ParseError(f"{name}:{lineno}: field {key!r} must be finite")
        if key.startswith("sigma") and not v > 0:
            raise ParseError(f"{name}:{lineno}: field {key!r} must be > 0, got {v!r}")
        if key == "w" and not 0.0 <= v <= 1.0:
            raise ParseError(f"{name}:{lineno}: field 'w' must lie in [0, 1], got {v!r}")
        found[key] = v
    missing = [k for k in PARAM_KEYS if k not in found]
    if missing:
        raise ParseError(f"{name}: missing field(s) {', '.join(missing)}")
    return tuple(found[k] for k in PARAM_KEYS)


def read_params(path: str) -> tuple:
    with open(path) as fh:
        return parse_params(fh.read(), path)


def write_params(path: str, params: Sequence[float]):
    with open(path, "w") as fh:
        fh.write(format_params(params))


# sample files

def format_samples(xs: np.ndarray) -> str:
    return "".join(f"{float(x)!r}\n" for x in xs)


def parse_samples(text: str, name: str = "<samples>") -> np.ndarray:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        try:
            v = float(line)
        except ValueError:
            raise ParseError(f"{name}:{lineno}: not a number: {line!r}") from None
        if not math.isfinite(v):
            raise ParseError(f"{name}:{lineno}: sample must be finite")
        out.append(v)
    return np.array(out, dtype=float)


def read_samples(path: str) -> np.ndarray:
    with open(path) as fh:
        return parse_samples(fh.read(), path)


# commands

def cmd_generate(args) -> int:
    params = read_params(args.params)
    if args.n < 1:
        raise ValidationError("n must be >= 1")
    xs = Mixture.two(*params).sample(np.random.default_rng(args.seed), args.n)
    _write_text(args.out, format_samples(xs))
    return EXIT_OK


def _engine(args) -> TournamentConfig:
    try:
        return TournamentConfig.parse_engine(args.engine, eps=args.eps, delta=args.delta / 2.0, seed=args.seed)
    except ValueError as exc:
        raise ValidationError(f"--engine: {exc}") from None


def learn_row(source, truth: Optional[Mixture], seed: int, args) -> dict:
    """One report row; ``truth`` enables the oracle columns."""
    config = _engine(args)
    row = {"seed": seed, "eps": args.eps, "delta": args.delta, "engine": config.label}
    if args.candidates_only:
        t0 = time.perf_counter()
        cands = generate_all(source, GenerationBudget(args.eps, args.delta / 2.0))
        row.update(n_samples=source.drawn, status="candidates", candidates=len(cands),
                   generate_s=time.perf_counter() - t0)
    else:
        res = learn(source, args.eps, args.delta, config)
        cands = res.candidates
        row.update(n_samples=res.samples_used, status="no_winner" if res.failed else "ok",
                   candidates=res.candidate_count, generate_s=res.diagnostics["generate_s"],
                   select_s=res.diagnostics["select_s"])
        if not res.failed:
            row.update(zip(PARAM_KEYS, res.mixture.params))
            if truth is not None:
                learned = res.mixture.to_mixture()
                row["oracle_tv"] = tv_numeric(truth, learned).value
                row["oracle_k"] = kolmogorov_numeric(truth, learned).value
    if truth is not None:
        row["best_candidate_tv"] = best_candidate(truth, cands).tv
    return row


def cmd_learn(args) -> int:
    check_accuracy(args.eps, args.delta)
    if args.threads < 1:
        raise ValidationError("--threads must be >= 1")
    if (args.samples is None) == (args.params is None):
        raise ValidationError("give exactly one of --samples or --params")
    rows = []
    seeds = [args.seed + i for i in range(args.runs)]
    if args.samples is not None:
        if args.runs != 1:
            raise ValidationError("--runs needs generator mode (--params)")
        data = read_samples(args.samples)
        rows.append(learn_row(ArraySource(data), None, args.seed, args))
    else:
        truth = Mixture.two(*read_params(args.params))
        for s in seeds:
            rows.append(learn_row(MixtureSource(truth, seed=s), truth, s, args))
            log.info("seed %d: %s", s, rows[-1].get("status"))
    if args.report:
        write_report(args.report, rows)
    if args.out and rows[-1].get("status") == "ok":
        write_params(args.out, [rows[-1][k] for k in PARAM_KEYS])
    for r in rows:
        print(",".join(_cell(r.get(h)) for h in REPORT_HEADER) if args.quiet else _summary(r))
    return EXIT_NO_WINNER if any(r["status"] == "no_winner" for r in rows) else EXIT_OK


def _summary(r: dict) -> str:
    parts = [f"seed={r['seed']}", f"status={r['status']}", f"samples={r['n_samples']}", f"candidates={r['candidates']}"]
    if r.get("w") is not None:
        parts.append("params=(" + ", ".join(f"{r[k]:.6g}" for k in PARAM_KEYS) + ")")
    for k in ("oracle_tv", "oracle_k", "best_candidate_tv"):
        if r.get(k) is not None:
            parts.append(f"{k}={r[k]:.6g}")
    return " ".join(parts)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_report(path: str, rows: List[dict]):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REPORT_HEADER)
        for r in rows:
            w.writerow([_cell(r.get(h)) for h in REPORT_HEADER])


def cmd_evaluate(args) -> int:
    a, b = Mixture.two(*read_params(args.a)), Mixture.two(*read_params(args.b))
    tv = tv_numeric(a, b)
    dk = kolmogorov_numeric(a, b)
    swapped = Mixture.two(b.weights[1], b.components[1].mu, b.components[1].sigma, b.components[0].mu, b.components[0].sigma)
    bound = min(tv_bound_mixtures(a, b), tv_bound_mixtures(a, swapped))
    print(f"tv_numeric = {tv.value!r} +- {tv.abs_tolerance:g}")
    print(f"kolmogorov_numeric = {dk.value!r} +- {dk.abs_tolerance:g}")
    print(f"tv_bound = {bound!r}")
    return EXIT_OK


def bench_rows(engines: Sequence[str], sizes: Sequence[int], eps: float, delta: float, seed: int) -> List[dict]:
    """Tournaments on planted discrete instances; ``ops`` counts comparator queries."""
    rows = []
    for n in sizes:
        if n < 2:
            raise ValidationError(f"N must be >= 2, got {n}")
        inst = planted_instance(n, eps, seed=[seed, n])
        for name in engines:
            try:
                config = TournamentConfig.parse_engine(name, eps=eps, delta=delta, seed=[seed, n, 1])
            except ValueError as exc:
                raise ValidationError(f"engine {name!r}: {exc}") from None
            res = select(inst.source(seed=[seed, n, 2]), inst.pool, config)
            rows.append({
                "engine": config.label, "N": n, "ops": res.stats.ops,
                "ms": res.stats.seconds * 1000.0,
                "winner_tv": float("nan") if res.failed else float(inst.tv[res.index]),
            })
            log.info("bench %s N=%d ops=%d", name, n, res.stats.ops)
    return rows


def cmd_bench(args) -> int:
    if not 0 < args.delta < 1 or not args.eps > 0:
        raise ValidationError("need eps > 0 and delta in (0, 1)")
    rows = bench_rows(args.engines, args.sizes, args.eps, args.delta, args.seed)
    text = ",".join(BENCH_HEADER) + "\n" + "".join(
        f"{r['engine']},{r['N']},{r['ops']},{r['ms']:.3f},{r['winner_tv']!r}\n" for r in rows
    )
    _write_text(args.out, text)
    return EXIT_OK


def _write_text(path: Optional[str], text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _csv_list(kind):
    def parse(text):
        try:
            return [kind(t) for t in text.split(",") if t.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {text!r}") from None
    return parse


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gmmlearn", description="Learn mixtures of two Gaussians; run selection tournaments.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="draw samples from a parameter file")
    g.add_argument("params")
    g.add_argument("-n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="-")
    g.set_defaults(func=cmd_generate)

    l = sub.add_parser("learn", help="learn a mixture from a sample file or a generator")
    src = l.add_mutually_exclusive_group()
    src.add_argument("--samples", help="sample file, one float per line")
    src.add_argument("--params", help="parameter file of the generating mixture")
    l.add_argument("--eps", type=float, default=0.1, help=f"accuracy, at most {MAX_EPS}")
    l.add_argument("--delta", type=float, default=0.2)
    l.add_argument("--engine", default="fast", help="slow, fast, fast:GAMMA or recursive:GAMMA")
    l.add_argument("--seed", type=int, default=0)
    l.add_argument("--runs", type=int, default=1, help="seeds seed..seed+runs-1 (generator mode)")
    l.add_argument("--threads", type=int, default=1, help="worker bound; computation is vectorized in one thread")
    l.add_argument("--candidates-only", action="store_true", help="skip the tournament")
    l.add_argument("--out", help="learned parameter file (last run)")
    l.add_argument("--report", help="CSV report path")
    l.add_argument("--quiet", action="store_true", help="print CSV rows instead of summaries")
    l.set_defaults(func=cmd_learn)

    e = sub.add_parser("evaluate", help="distances between two parameter files")
    e.add_argument("a")
    e.add_argument("b")
    e.set_defaults(func=cmd_evaluate)

    b = sub.add_parser("bench", help="tournament scaling on planted discrete instances")
    b.add_argument("--engines", type=_csv_list(str), default=["slow", "fast", "recursive:0.5"])
    b.add_argument("--sizes", type=_csv_list(int), default=[64, 128, 256, 512, 1024, 2048, 4096])
    b.add_argument("--eps", type=float, default=0.05)
    b.add_argument("--delta", type=float, default=0.1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--threads", type=int, default=1)
    b.add_argument("--out", default="-")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    level = os.environ.get("GMM_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, SampleShortfallError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception:
        log.exception("unexpected failure")
        return EXIT_CRASH


if __name__ == "__main__":
    sys.exit(main())
