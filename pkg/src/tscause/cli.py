"""Command-line front end.

    tscause corr  --input data.csv
    tscause gc    --input data.csv --pairs x:y --order auto --alpha 0.05 --seed 7
    tscause te    --input data.csv --k 1 --l 1 --bins 4
    tscause ccc   --input data.csv --L 100 --w 15 --delta 50
    tscause ccm   --input data.csv --E 3 --tau 1 --lib-lengths 10,50,200,800
    tscause synth --system coupled_maps --n 3000 --seed 1 --output maps.csv --truth truth.csv
    tscause bench --system coupled_ar --trials 100 --seed 1 --format jsonl

Exit status: 0 success, 1 usage error, 2 data error, 3 some pair failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
import time
import warnings
from dataclasses import dataclass, field, fields

import numpy as np

from . import ccc as ccc_mod
from . import ccm as ccm_mod
from . import gc as gc_mod
from . import synth
from . import te as te_mod
from .core import TimeSeries, pearson_correlation, standardize
from .errors import CausalityError, DataError, EmptyFile, MalformedCsv
from .surrogate import SurrogateSpec, significance_test
from .symbolic import symbolize

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_PARTIAL = 0, 1, 2, 3

_NUMBER = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")


# ---------------------------------------------------------------- records

@dataclass
class ResultRecord:
    measure: str
    source: str
    target: str
    score: float
    p_value: float | None = None
    significant: bool | None = None
    params: dict = field(default_factory=dict)
    seed: int = 0
    warnings: list = field(default_factory=list)

    @classmethod
    def from_json(cls, line: str) -> "ResultRecord":
        d = json.loads(line)
        d["score"] = _load_float(d["score"])
        d["p_value"] = None if d["p_value"] is None else _load_float(d["p_value"])
        return cls(**d)


@dataclass
class BenchRow:
    measure: str
    system: str
    params: dict
    tpr: float | None
    fpr: float | None
    n_trials: int
    mean_runtime_s: float | None = None

    @classmethod
    def from_json(cls, line: str) -> "BenchRow":
        return cls(**json.loads(line))


def _fmt_float(v: float) -> str:
    if math.isfinite(v):
        return format(v, ".17g")
    return json.dumps("nan" if math.isnan(v) else ("inf" if v > 0 else "-inf"))


def _load_float(v):
    return float(v) if isinstance(v, str) else v


def _dumps(value) -> str:
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _fmt_float(float(value))
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_dumps(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_dumps(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def to_jsonl(record) -> str:
    """One JSON object with the dataclass fields in declaration order."""
    return "{" + ", ".join(f'"{f.name}": {_dumps(getattr(record, f.name))}'
                           for f in fields(record)) + "}"


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, list):
        return "; ".join(v) if v else ""
    if isinstance(v, dict):
        return ""
    return str(v)


def emit_report(records, fmt: str = "table", out=None) -> None:
    """Write records as a fixed-width table or as JSON lines."""
    if not records:
        raise ValueError("no records to report")
    out = out or sys.stdout
    if fmt == "jsonl":
        for r in records:
            out.write(to_jsonl(r) + "\n")
        return
    if fmt != "table":
        raise ValueError(f"unknown format {fmt!r}")
    names = [f.name for f in fields(records[0]) if f.name not in ("params",)]
    rows = [[_cell(getattr(r, n)) for n in names] for r in records]
    widths = [max(len(n), *(len(row[i]) for row in rows)) for i, n in enumerate(names)]
    out.write("  ".join(n.ljust(w) for n, w in zip(names, widths)).rstrip() + "\n")
    for row in rows:
        out.write("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n")


# ---------------------------------------------------------------- csv io

def parse_csv(path) -> list[TimeSeries]:
    """Read a header-plus-numbers CSV into one TimeSeries per column."""
    try:
        with open(path, newline="", encoding="utf-8-sig") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or not any(cell.strip() for cell in rows[0]):
        raise EmptyFile(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header):
        raise MalformedCsv("duplicate column name in header", line=1)
    if any(not h for h in header):
        raise MalformedCsv("empty column name in header", line=1)
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise MalformedCsv(f"expected {len(header)} fields, got {len(row)}", line=lineno)
        vals = []
        for cell in row:
            cell = cell.strip()
            if not _NUMBER.fullmatch(cell):
                raise MalformedCsv(f"not a decimal number: {cell!r}", line=lineno)
            vals.append(float(cell))
        data.append(vals)
    if not data:
        raise EmptyFile(f"{path} has a header but no data rows")
    arr = np.array(data)
    return [TimeSeries(name, arr[:, i]) for i, name in enumerate(header)]


def write_csv(series, out) -> None:
    out.write(",".join(s.name for s in series) + "\n")
    for row in zip(*(s.values for s in series)):
        out.write(",".join(format(float(v), ".17g") for v in row) + "\n")


def write_truth(dataset, out) -> None:
    out.write("source,target,strength\n")
    for e in dataset.truth:
        out.write(f"{e.source},{e.target},{format(float(e.strength), '.17g')}\n")


# ---------------------------------------------------------------- measures

def _pairs(series, spec: str | None):
    names = [s.name for s in series]
    if spec is None:
        return [(names[i], names[j]) for i in range(len(names)) for j in range(i + 1, len(names))]
    out = []
    for item in spec.split(","):
        parts = item.strip().split(":")
        if len(parts) != 2 or not all(parts) or parts[0] == parts[1]:
            raise DataError(f"bad pair spec {item!r}; use name:name")
        for p in parts:
            if p not in names:
                raise DataError(f"unknown column {p!r}")
        out.append((parts[0], parts[1]))
    return out


def _shared_params(args) -> dict:
    return dict(alpha=args.alpha, standardize=args.standardize)


def _surrogate_kind(args, default):
    return args.surrogate_kind or default


def _run_corr(args, data, a, b):
    x, y = data[a], data[b]
    if args.standardize:
        x, y = standardize(x), standardize(y)
    r = pearson_correlation(x, y)
    return [ResultRecord("corr", a, b, r.rho, params=dict(standardize=args.standardize, n=r.n),
                         seed=args.seed)]


def _gc_direction(args, data, src, tgt):
    x, y = data[src], data[tgt]
    if args.standardize:
        x, y = standardize(x), standardize(y)
    order = "auto" if args.order == "auto" else int(args.order)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        r = gc_mod.gc_test(y, x, p=order, alpha=args.alpha, p_max=args.order_max)
    notes = ["stationarity screen failed"] if r.stationarity_warning else []
    params = dict(_shared_params(args), order=args.order, order_max=args.order_max,
                  criterion="bic", order_used=r.order, n_eff=r.n_eff)
    return ResultRecord("gc", src, tgt, r.f_stat, r.p_value, r.significant, params,
                        args.seed, notes)


def _te_direction(args, data, src, tgt):
    cfg = te_mod.TeConfig(args.k, args.l, args.bins)
    kind = _surrogate_kind(args, "shuffle")

    def measure(s, t):
        return te_mod.te_series(t, s, cfg).te_bits

    params = dict(_shared_params(args), k=args.k, l=args.l, bins=args.bins,
                  surrogates=args.surrogates, surrogate_kind=kind)
    params["standardize"] = False
    return _with_surrogates("te", args, data, src, tgt, measure, kind, "right", params)


def _ccc_direction(args, data, src, tgt):
    p = ccc_mod.CccParams(args.L, args.w, args.delta, args.bins)
    kind = _surrogate_kind(args, "circular_shift")

    def measure(s, t):
        return ccc_mod.ccc_pair(s, t, p).ccc

    params = dict(_shared_params(args), L=p.L, w=p.w, delta=p.delta, bins=p.bins,
                  surrogates=args.surrogates, surrogate_kind=kind)
    params["standardize"] = False
    return _with_surrogates("ccc", args, data, src, tgt, measure, kind, "abs", params)


def _with_surrogates(name, args, data, src, tgt, measure, kind, tail, params):
    x, y = data[src], data[tgt]
    if args.surrogates == 0:
        return ResultRecord(name, src, tgt, measure(x, y), params=params, seed=args.seed)
    spec = SurrogateSpec(kind, args.surrogates, args.seed)
    r = significance_test(measure, x, y, spec, args.alpha, tail=tail)
    return ResultRecord(name, src, tgt, r.observed, r.p_value, r.significant, params, args.seed)


def _run_ccm(args, data, a, b):
    x, y = data[a], data[b]
    if args.standardize:
        x, y = standardize(x), standardize(y)
    lengths = [int(v) for v in args.lib_lengths.split(",")]
    r = ccm_mod.ccm_convergence(x, y, args.E, args.tau, lengths, args.subsamples,
                                args.conv_margin, args.seed)
    base = dict(standardize=args.standardize, E=args.E, tau=args.tau,
                lib_lengths=lengths, subsamples=args.subsamples, conv_margin=args.conv_margin)
    out = []
    for src, tgt, curve in ((a, b, r.x_to_y), (b, a, r.y_to_x)):
        params = dict(base, mean_skill=list(curve.mean_skill))
        out.append(ResultRecord("ccm", src, tgt, curve.mean_skill[-1], None, curve.converged,
                                params, args.seed))
    return out


def _directed(fn):
    def run(args, data, a, b):
        return [fn(args, data, a, b), fn(args, data, b, a)]
    return run


RUNNERS = {
    "corr": _run_corr,
    "gc": _directed(_gc_direction),
    "te": _directed(_te_direction),
    "ccc": _directed(_ccc_direction),
    "ccm": _run_ccm,
}


def run_analysis(args) -> tuple[list, int]:
    """Run one measure subcommand over every requested pair.

    Returns the records in canonical pair order and the exit status. A pair
    whose estimator fails yields records with a NaN score and the error in
    ``warnings``; the other pairs still run.
    """
    series = parse_csv(args.input)
    data = {s.name: s for s in series}
    records, status = [], EXIT_OK
    for a, b in _pairs(series, args.pairs):
        try:
            records.extend(RUNNERS[args.command](args, data, a, b))
        except (CausalityError, ValueError, np.linalg.LinAlgError) as exc:
            status = EXIT_PARTIAL
            msg = f"{type(exc).__name__}: {exc}"
            directions = [(a, b)] if args.command == "corr" else [(a, b), (b, a)]
            records.extend(ResultRecord(args.command, s, t, math.nan, params={}, seed=args.seed,
                                        warnings=[msg]) for s, t in directions)
    return records, status


# ---------------------------------------------------------------- synth / bench

def make_dataset(system: str, n: int | None, seed: int, coupling: float | None = None,
                 downsample: int = 1):
    if system in ("coupled_ar", "independent_ar"):
        c = 0.0 if system == "independent_ar" else (0.8 if coupling is None else coupling)
        return synth.gen_coupled_ar(n or 2000, c=c, seed=seed, downsample=downsample)
    if system in ("coupled_maps", "independent_maps"):
        c = 0.0 if system == "independent_maps" else (0.4 if coupling is None else coupling)
        return synth.gen_coupled_maps(n or 3000, c_xy=c, seed=seed, downsample=downsample)
    if system == "confounded":
        return synth.gen_confounded(n or 2000, noise_sd=0.1 if coupling is None else coupling,
                                    seed=seed, downsample=downsample)
    if system == "lagged_copy":
        return synth.gen_lagged_copy(n or 10000, seed=seed)
    raise DataError(f"unknown system {system!r}")


SYSTEMS = ("coupled_ar", "independent_ar", "coupled_maps", "independent_maps",
           "confounded", "lagged_copy")
BENCH_MEASURES = ("gc", "te", "ccc", "ccm")


def trial_seed(master: int, trial: int) -> int:
    return int(np.random.SeedSequence([int(master), int(trial)]).generate_state(1)[0])


def _bench_decisions(measure, args, ds, a, b, seed):
    """Significance decisions (a->b, b->a) for one measure on one dataset."""
    ns = argparse.Namespace(**vars(args))
    ns.seed = seed
    data = {s.name: s for s in ds.series}
    recs = RUNNERS[measure](ns, data, a, b)
    return [bool(r.significant) for r in recs]


def run_bench(args) -> list[BenchRow]:
    systems = SYSTEMS if args.system == "all" else [args.system]
    measures = args.measures.split(",")
    for m in measures:
        if m not in BENCH_MEASURES:
            raise DataError(f"unknown bench measure {m!r}")
    rows = []
    for system in systems:
        stats = {m: dict(tp=0, pos=0, fp=0, neg=0, t=0.0) for m in measures}
        for trial in range(args.trials):
            seed = trial_seed(args.seed, trial)
            ds = make_dataset(system, args.n, seed, args.coupling)
            a, b = ("j", "i") if system == "lagged_copy" else ("x", "y")
            for m in measures:
                start = time.perf_counter()
                decisions = _bench_decisions(m, args, ds, a, b, seed)
                stats[m]["t"] += time.perf_counter() - start
                for (src, tgt), hit in zip(((a, b), (b, a)), decisions):
                    if ds.has_edge(src, tgt):
                        stats[m]["pos"] += 1
                        stats[m]["tp"] += hit
                    else:
                        stats[m]["neg"] += 1
                        stats[m]["fp"] += hit
        for m in measures:
            s = stats[m]
            params = dict(n=args.n, coupling=args.coupling, alpha=args.alpha,
                          surrogates=args.surrogates, seed=args.seed,
                          **_measure_params(m, args))
            rows.append(BenchRow(
                m, system, params,
                s["tp"] / s["pos"] if s["pos"] else None,
                s["fp"] / s["neg"] if s["neg"] else None,
                args.trials,
                s["t"] / args.trials if args.timing else None,
            ))
    return rows


def _measure_params(m, args):
    if m == "gc":
        return dict(order=args.order, order_max=args.order_max)
    if m == "te":
        return dict(k=args.k, l=args.l, bins=args.bins)
    if m == "ccc":
        return dict(L=args.L, w=args.w, delta=args.delta, bins=args.bins)
    return dict(E=args.E, tau=args.tau, lib_lengths=args.lib_lengths, subsamples=args.subsamples)


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p, surrogates=99):
    p.add_argument("--output", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("table", "jsonl"), default="table")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--surrogates", type=int, default=surrogates,
                   help="surrogate count for te/ccc significance (0 disables, else >= 19)")
    p.add_argument("--surrogate-kind", choices=("shuffle", "circular_shift"), default=None)
    p.add_argument("--standardize", action=argparse.BooleanOptionalAction, default=True)


def _gc_flags(p):
    p.add_argument("--order", default="auto", help="lag order or 'auto' (BIC)")
    p.add_argument("--order-max", type=int, default=None)


def _te_flags(p, bins=True):
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--l", type=int, default=1)
    if bins:
        p.add_argument("--bins", type=int, default=4)


def _ccc_flags(p, bins=True):
    p.add_argument("--L", type=int, default=100)
    p.add_argument("--w", type=int, default=15)
    p.add_argument("--delta", type=int, default=50)
    if bins:
        p.add_argument("--bins", type=int, default=4)


def _ccm_flags(p):
    p.add_argument("--E", type=int, default=3)
    p.add_argument("--tau", type=int, default=1)
    p.add_argument("--lib-lengths", default=",".join(map(str, ccm_mod.DEFAULT_LENGTHS)))
    p.add_argument("--subsamples", type=int, default=5)
    p.add_argument("--conv-margin", type=float, default=0.1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tscause", description="Pairwise time-series causality measures.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, flags in (("corr", None), ("gc", _gc_flags), ("te", _te_flags),
                        ("ccc", _ccc_flags), ("ccm", _ccm_flags)):
        p = sub.add_parser(name)
        p.add_argument("--input", required=True)
        p.add_argument("--pairs", default=None, help="e.g. x:y,x:z (default: all column pairs)")
        _common(p)
        if flags:
            flags(p)

    p = sub.add_parser("synth", help="write a synthetic dataset as CSV")
    p.add_argument("--system", choices=SYSTEMS, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--coupling", type=float, default=None)
    p.add_argument("--downsample", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    p.add_argument("--truth", default=None, help="sidecar CSV of true edges")

    p = sub.add_parser("bench", help="score the directed measures on synthetic ground truth")
    p.add_argument("--system", choices=SYSTEMS + ("all",), default="all")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--coupling", type=float, default=None)
    p.add_argument("--measures", default=",".join(BENCH_MEASURES))
    p.add_argument("--timing", action="store_true",
                   help="add mean runtime per trial (makes output run-dependent)")
    _common(p, surrogates=19)
    _gc_flags(p)
    _te_flags(p, bins=False)
    _ccc_flags(p)
    _ccm_flags(p)
    return parser


def _open_out(path):
    return open(path, "w", encoding="utf-8", newline="\n") if path else sys.stdout


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "surrogates", 0) not in (0,) and getattr(args, "surrogates", 19) < 19:
        print("tscause: error: --surrogates must be 0 or >= 19", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "synth":
            ds = make_dataset(args.system, args.n, args.seed, args.coupling, args.downsample)
            out = _open_out(args.output)
            try:
                write_csv(ds.series, out)
            finally:
                if out is not sys.stdout:
                    out.close()
            if args.truth:
                with open(args.truth, "w", encoding="utf-8", newline="\n") as fh:
                    write_truth(ds, fh)
            return EXIT_OK
        if args.command == "bench":
            records, status = run_bench(args), EXIT_OK
        else:
            records, status = run_analysis(args)
    except DataError as exc:
        print(f"tscause: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    out = _open_out(args.output)
    try:
        emit_report(records, args.format, out)
    except OSError as exc:
        print(f"tscause: cannot write report: {exc}", file=sys.stderr)
        return EXIT_DATA
    finally:
        if out is not sys.stdout:
            out.close()
    return status


if __name__ == "__main__":
    sys.exit(main())
