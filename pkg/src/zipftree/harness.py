"""Experiment harness: run (algorithm x budget x noise x repeat) grids,
score simple regret against the objective's supremum, and read/write CSV
records.

Determinism contract: the per-run RNG seed is derived by hashing
(master_seed, algorithm label, n, b, repeat index), so any sub-grid of a
spec reproduces exactly the same records wherever it runs -- serially, in a
process pool, or in a later session.  Wall-clock times are the one column
exempt from reproducibility.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .objectives import NoiseModel, get_objective
from .optimizers import (RunConfig, doo_run, sequool_run, soo_run,
                         stroquool_run, uniform_run)
from .theory import BoundInputs, SmoothnessParams, sequool_bound, stroquool_bounds

__all__ = [
    "AlgoSpec", "ExperimentSpec", "RegretRecord", "derive_seed",
    "run_experiment", "summarize", "emit_bound_overlay",
    "write_records", "read_records",
]

CSV_FIELDS = ("algo", "objective", "n", "b", "seed", "regret",
              "openings", "evaluations", "wall_ms")

_KNOWN_ALGOS = {"sequool", "stroquool", "soo", "doo", "uniform"}
_DETERMINISTIC = {"sequool", "soo", "doo"}


@dataclass(frozen=True)
class AlgoSpec:
    name: str
    nu: float | None = None
    rho: float | None = None

    @property
    def label(self):
        if self.name == "doo":
            return f"doo:nu={self.nu:g}:rho={self.rho:g}"
        return self.name


def parse_algo(token) -> AlgoSpec:
    """"sequool" | "doo:1.0:0.5" | {"name": "doo", "nu": 1, "rho": 0.5}"""
    if isinstance(token, AlgoSpec):
        return token
    if isinstance(token, dict):
        name = token.get("name")
        spec = AlgoSpec(name, token.get("nu"), token.get("rho"))
    else:
        name, *rest = str(token).split(":")
        if name == "doo":
            if len(rest) != 2:
                raise ValueError(
                    f"algorithm token {token!r} invalid: doo needs nu and rho, "
                    "e.g. doo:1.0:0.5")
            spec = AlgoSpec("doo", float(rest[0]), float(rest[1]))
        else:
            if rest:
                raise ValueError(f"algorithm {name!r} takes no parameters")
            spec = AlgoSpec(name)
    if spec.name not in _KNOWN_ALGOS:
        raise ValueError(f"unknown algorithm {spec.name!r} "
                         f"(known: {', '.join(sorted(_KNOWN_ALGOS))})")
    if spec.name == "doo" and (spec.nu is None or spec.rho is None):
        raise ValueError("doo requires nu and rho")
    return spec


@dataclass
class ExperimentSpec:
    """One experimental grid.

    seeds is either an integer repeat count (repeat indices 0..count-1) or an
    explicit list of repeat indices (so a later spec can extend an earlier
    run without recomputing it).
    """

    algorithms: list
    objective: str
    budgets: list
    noise_b: list = None
    seeds: object = 20
    delta: float = 0.05
    branching: int = 3
    out: str | None = None
    master_seed: int = 0

    def __post_init__(self):
        if not self.algorithms:
            raise ValueError("algorithms must be nonempty")
        self.algorithms = [parse_algo(a) for a in self.algorithms]
        self.budgets = [int(n) for n in self.budgets]
        if not self.budgets:
            raise ValueError("budgets must be nonempty")
        if any(b >= a for a, b in zip(self.budgets[1:], self.budgets)):
            raise ValueError("budgets must be strictly increasing")
        self.noise_b = [float(b) for b in (self.noise_b or [0.0])]
        if not self.noise_b:
            raise ValueError("noise_b must be nonempty")
        if any(b < 0 for b in self.noise_b):
            raise ValueError("noise levels must be >= 0")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must be in (0, 1)")
        if self.branching < 2:
            raise ValueError("branching must be at least 2")

    @property
    def repeat_indices(self):
        if isinstance(self.seeds, int):
            return list(range(self.seeds))
        return [int(s) for s in self.seeds]

    @classmethod
    def from_json(cls, source):
        """Build from a dict or a path to a JSON document."""
        if isinstance(source, (str, bytes)):
            with open(source) as fh:
                source = json.load(fh)
        return cls(**source)


@dataclass
class RegretRecord:
    algo: str
    objective: str
    n: int
    b: float
    seed: int
    regret: float
    openings: int
    evaluations: int
    wall_ms: float


def derive_seed(master_seed, algo_label, n, b, rep):
    """Per-run seed: SHA-256 of the identifying tuple, top 8 bytes."""
    msg = f"{master_seed}|{algo_label}|{n}|{b!r}|{rep}".encode()
    return int.from_bytes(hashlib.sha256(msg).digest()[:8], "big")


def _run_one(task):
    (name, nu, rho, objective_name, n, b, rep, branching, master_seed) = task
    algo = AlgoSpec(name, nu, rho)
    obj = get_objective(objective_name)
    seed = derive_seed(master_seed, algo.label, n, b, rep)
    cfg = RunConfig(budget_n=n, seed=seed, branching=branching)
    if name in _DETERMINISTIC and b != 0.0:
        raise ValueError(f"{name} is a deterministic-feedback algorithm; "
                         f"run it with b=0 (got b={b})")
    noise = NoiseModel(b, seed=seed)
    t0 = time.perf_counter()
    if name == "sequool":
        res = sequool_run(obj, cfg)
    elif name == "stroquool":
        res = stroquool_run(obj, noise, cfg)
    elif name == "soo":
        res = soo_run(obj, cfg)
    elif name == "doo":
        res = doo_run(obj, cfg, nu, rho)
    elif name == "uniform":
        res = uniform_run(obj, noise, cfg)
    else:  # pragma: no cover - parse_algo screens names
        raise ValueError(f"unknown algorithm {name!r}")
    wall_ms = (time.perf_counter() - t0) * 1e3
    # regret is always scored on the true objective value at x(n)
    regret = obj.optimum_value - obj.eval(res.recommendation)
    return RegretRecord(algo.label, objective_name, n, b, seed, regret,
                        res.openings_used, res.evaluations_used, wall_ms)


def _tasks(spec: ExperimentSpec):
    return [(a.name, a.nu, a.rho, spec.objective, n, b, rep,
             spec.branching, spec.master_seed)
            for a in spec.algorithms
            for n in spec.budgets
            for b in spec.noise_b
            for rep in spec.repeat_indices]


def run_experiment(spec: ExperimentSpec, jobs: int = 1):
    """Execute the full grid; returns the records in grid order.

    Records are written incrementally to spec.out (CSV) as runs finish;
    jobs > 1 fans the runs over a process pool (results are merged back in
    grid order, so parallel output equals serial output).
    """
    obj = get_objective(spec.objective)
    if obj.optimum_value is None:
        raise ValueError(f"objective {spec.objective!r} has no optimum_value; "
                         "cannot score regret")
    tasks = _tasks(spec)
    writer_ctx = _RecordWriter(spec, obj) if spec.out else None
    records = []
    try:
        if jobs <= 1:
            produced = map(_run_one, tasks)
            for rec in produced:
                records.append(rec)
                if writer_ctx:
                    writer_ctx.write(rec)
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for rec in pool.map(_run_one, tasks, chunksize=8):
                    records.append(rec)
                    if writer_ctx:
                        writer_ctx.write(rec)
    finally:
        if writer_ctx:
            writer_ctx.close()
    return records


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def _fmt(value):
    if isinstance(value, float):
        return f"{value:.17g}"  # >= 12 significant digits, round-trip exact
    return str(value)


class _RecordWriter:
    def __init__(self, spec, obj):
        self.fh = open(spec.out, "w", newline="")
        self.fh.write("# zipftree regret records\n")
        self.fh.write(f"# objective={obj.name}\n")
        self.fh.write(f"# optimum_value={obj.optimum_value!r}\n")
        if obj.optimum_note:
            self.fh.write(f"# optimum_note={obj.optimum_note}\n")
        self.fh.write(f"# master_seed={spec.master_seed} "
                      f"branching={spec.branching} delta={spec.delta!r}\n")
        self.writer = csv.writer(self.fh)
        self.writer.writerow(CSV_FIELDS)
        self.fh.flush()

    def write(self, rec: RegretRecord):
        self.writer.writerow([rec.algo, rec.objective, rec.n, _fmt(rec.b),
                              rec.seed, _fmt(rec.regret), rec.openings,
                              rec.evaluations, _fmt(rec.wall_ms)])
        self.fh.flush()

    def close(self):
        self.fh.close()


def write_records(records, path, meta=None):
    """Plain CSV dump (same schema as run_experiment's incremental writer)."""
    with open(path, "w", newline="") as fh:
        fh.write("# zipftree regret records\n")
        for key, value in (meta or {}).items():
            fh.write(f"# {key}={value}\n")
        writer = csv.writer(fh)
        writer.writerow(CSV_FIELDS)
        for rec in records:
            writer.writerow([rec.algo, rec.objective, rec.n, _fmt(rec.b),
                             rec.seed, _fmt(rec.regret), rec.openings,
                             rec.evaluations, _fmt(rec.wall_ms)])


def read_records(path):
    """Parse a records CSV back (comment lines ignored)."""
    records = []
    with open(path, newline="") as fh:
        rows = csv.reader(line for line in fh if not line.startswith("#"))
        header = next(rows, None)
        if header is None:
            return records
        if tuple(header) != CSV_FIELDS:
            raise ValueError(f"unexpected header {header!r}")
        for row in rows:
            records.append(RegretRecord(
                row[0], row[1], int(row[2]), float(row[3]), int(row[4]),
                float(row[5]), int(row[6]), int(row[7]), float(row[8])))
    return records


# ---------------------------------------------------------------------------
# summaries
# ---------------------------------------------------------------------------

def summarize(records, fit_x="n"):
    """Group records by (algo, n, b) and fit log-regret trends.

    Returns {"groups": {(algo, n, b): {median, q10, q90, count}},
             "fits":   {(algo, b): {slope, slope_log2, r2, flat, points,
                                    dropped_nonpositive}}}.

    Fits regress log(median regret) on n (or sqrt(n) with fit_x="sqrt_n")
    per (algo, b).  Constant groups report flat=True with r2=None (the fit
    is degenerate: zero variance).  Nonpositive medians cannot be logged and
    are dropped (counted in dropped_nonpositive).
    """
    if not records:
        raise ValueError("no records")
    if fit_x not in ("n", "sqrt_n"):
        raise ValueError("fit_x must be 'n' or 'sqrt_n'")
    groups = {}
    for rec in records:
        groups.setdefault((rec.algo, rec.n, rec.b), []).append(rec.regret)
    gstats = {}
    for key, vals in groups.items():
        arr = np.asarray(vals, dtype=float)
        gstats[key] = {"median": float(np.median(arr)),
                       "q10": float(np.quantile(arr, 0.10)),
                       "q90": float(np.quantile(arr, 0.90)),
                       "count": len(vals)}

    fits = {}
    series = {}
    for (algo, n, b), stats in gstats.items():
        series.setdefault((algo, b), []).append((n, stats["median"]))
    for key, pts in series.items():
        pts.sort()
        xs = [n for n, r in pts if r > 0]
        ys = [math.log(r) for n, r in pts if r > 0]
        dropped = len(pts) - len(xs)
        if fit_x == "sqrt_n":
            xs = [math.sqrt(x) for x in xs]
        if len(xs) < 2:
            fits[key] = {"slope": None, "slope_log2": None, "r2": None,
                         "flat": None, "points": len(xs),
                         "dropped_nonpositive": dropped}
            continue
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if np.ptp(ys) == 0.0:
            # constant regret: slope 0, R^2 undefined -> flat
            fits[key] = {"slope": 0.0, "slope_log2": 0.0, "r2": None,
                         "flat": True, "points": len(xs),
                         "dropped_nonpositive": dropped}
            continue
        slope, intercept = np.polyfit(xs, ys, 1)
        pred = slope * xs + intercept
        ss_res = float(np.sum((ys - pred) ** 2))
        ss_tot = float(np.sum((ys - ys.mean()) ** 2))
        fits[key] = {"slope": float(slope),
                     "slope_log2": float(slope) / math.log(2.0),
                     "r2": 1.0 - ss_res / ss_tot,
                     "flat": False, "points": len(xs),
                     "dropped_nonpositive": dropped}
    return {"groups": gstats, "fits": fits}


def format_summary(summary):
    """Plain-text table of the per-(algo, n, b) medians."""
    lines = [f"{'algo':24} {'n':>7} {'b':>6} {'median':>13} {'q10':>13} "
             f"{'q90':>13} {'runs':>5}"]
    for (algo, n, b) in sorted(summary["groups"]):
        g = summary["groups"][(algo, n, b)]
        lines.append(f"{algo:24} {n:>7} {b:>6g} {g['median']:>13.6g} "
                     f"{g['q10']:>13.6g} {g['q90']:>13.6g} {g['count']:>5}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# bound overlays
# ---------------------------------------------------------------------------

def emit_bound_overlay(spec: ExperimentSpec, params: SmoothnessParams, out=None):
    """Theoretical-bound curve for each budget: the deterministic-feedback
    bound plus, per requested noise level, the noise-adaptive bound.  Writes
    CSV to `out` when given (empty field where a bound is undefined)."""
    rows = []
    for n in spec.budgets:
        row = {"n": n, "sequool": sequool_bound(n, params)["theorem"]}
        for b in spec.noise_b:
            try:
                value = stroquool_bounds(BoundInputs(n, b, spec.delta), params)["bound"]
            except ValueError:
                value = None  # budget too small for the noisy-regime display
            row[f"stroquool_b={b:g}"] = value
        rows.append(row)
    if out:
        fields = list(rows[0].keys())
        with open(out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(fields)
            for row in rows:
                writer.writerow(["" if row[f] is None else _fmt(row[f])
                                 for f in fields])
    return rows
