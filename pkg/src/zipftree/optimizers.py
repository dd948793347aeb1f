"""Budgeted tree-search optimizers over a K-ary box partition.

All five optimizers consume a budget of n openings and return the point
x(n) they recommend:

  sequool_run   -- deterministic feedback; harmonic depth budgets
                   (depth h gets floor(h_max / h) openings, h_max = floor(n / H(n)))
  stroquool_run -- noisy feedback; doubling evaluation counts within the
                   harmonic schedule and a cross-validation phase
  soo_run       -- sweep baseline: best cell per depth whose value matches
                   the best opened so far in the sweep
  doo_run       -- optimistic baseline that knows the smoothness (nu, rho)
  uniform_run   -- breadth-first openings in cell-id order

Budgets are counted in openings; StroquOOL charges an opening performed with
m evaluations per child as m budget units (see RunResult.budget_units_used).
Tie-breaking is everywhere by lowest CellId (depth-major, then index) so runs
are exactly reproducible.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass

from .objectives import EvaluationStream, NoiseModel, Objective
from .partition import CellId, PartitionTree, make_tree
from .theory import harmonic, stroquool_h_max

__all__ = [
    "RunConfig", "RunResult",
    "sequool_run", "stroquool_run", "soo_run", "doo_run", "uniform_run",
]


@dataclass
class RunConfig:
    """Shared optimizer knobs.

    budget_n            -- opening budget n (>= 1)
    seed                -- informational; the harness derives noise seeds from it
    branching           -- K children per opening
    rescale_depth_budget -- stretch SequOOL's depth budget to the largest real
                           H >= h_max whose quota sum still fits the budget
    cap_quota_by_cells  -- cap depth-h quotas at K^h (there are only K^h cells);
                           with the rescale option the freed budget deepens H
    record_trace        -- keep an event log on the RunResult
    """

    budget_n: int
    seed: int = 0
    branching: int = 3
    rescale_depth_budget: bool = False
    cap_quota_by_cells: bool = False
    record_trace: bool = False

    def __post_init__(self):
        if self.budget_n < 1:
            raise ValueError("budget_n must be >= 1")


@dataclass
class RunResult:
    recommendation: tuple
    recommendation_value_estimate: float
    openings_used: int
    evaluations_used: int       # raw objective calls
    deepest_depth: int          # deepest depth at which a cell was evaluated
    budget_units_used: int      # openings weighted by evaluations per child
    trace: list | None = None


class _Best:
    """Running argmax with lowest-CellId tie-breaking."""

    __slots__ = ("value", "cid", "point")

    def __init__(self):
        self.value = -math.inf
        self.cid = None
        self.point = None

    def update(self, value, cid, point):
        if value > self.value or (value == self.value and
                                  (self.cid is None or cid < self.cid)):
            self.value = value
            self.cid = cid
            self.point = point


# ---------------------------------------------------------------------------
# SequOOL
# ---------------------------------------------------------------------------

def _depth_budget_cost(H, K, cap):
    """1 (root) + sum over depths of the quota floor(H / h), while nonzero."""
    total = 1
    h = 1
    while True:
        q = int(H // h)
        if q < 1:
            break
        if cap:
            q = min(q, K ** h)
        total += q
        h += 1
    return total


def _rescaled_depth_budget(n, h_max, K, cap):
    """Largest real H >= h_max with 1 + sum_h quota(H, h) <= n + 1.

    The cost is a nondecreasing step function of H, so 100 bisection steps
    on [h_max, n + 1] pin the maximal feasible value.
    """
    lo, hi = float(h_max), float(n + 1)
    if _depth_budget_cost(hi, K, cap) <= n + 1:
        return hi
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if _depth_budget_cost(mid, K, cap) <= n + 1:
            lo = mid
        else:
            hi = mid
    return lo


def sequool_run(obj: Objective, cfg: RunConfig) -> RunResult:
    """Harmonic depth-budget search under deterministic feedback.

    Opens the root, then for h = 1, 2, ... opens the floor(H / h) best
    depth-h cells by value (all of them if fewer exist), where H = h_max =
    floor(n / H(n)) by default.  The recommendation is the best evaluated
    representative.  Total openings obey 1 + sum_h floor(h_max/h) <= n + 1.
    """
    n = cfg.budget_n
    K = cfg.branching
    tree = make_tree(obj.domain, K)
    stream = EvaluationStream(obj)
    trace = [] if cfg.record_trace else None

    h_max = int(n // harmonic(n))
    H = float(h_max)
    if cfg.rescale_depth_budget:
        H = _rescaled_depth_budget(n, h_max, K, cfg.cap_quota_by_cells)
    h_limit = int(H)

    best = _Best()
    deepest = 0

    def open_one(cell, nxt):
        nonlocal deepest
        if trace is not None:
            trace.append(("open", cell.id.depth, cell.id.index, 1))
        for cid, mean in tree.open_cell(cell.id, 1, stream):
            child = tree.cells[cid]
            nxt.append(child)
            best.update(mean, cid, child.representative)
            if cid.depth > deepest:
                deepest = cid.depth

    by_depth = {1: []}
    open_one(tree.root, by_depth[1])

    for h in range(1, h_limit + 1):
        cand = by_depth.pop(h, None)
        if not cand:
            break  # nothing materialized here, so nothing deeper either
        q = int(H // h)
        if cfg.cap_quota_by_cells:
            q = min(q, K ** h)
        cand.sort(key=lambda c: (-c.mean, c.id))
        nxt = by_depth.setdefault(h + 1, [])
        for cell in cand[:q]:
            open_one(cell, nxt)

    assert tree.opening_ledger <= n + 1, "harmonic budget identity violated"
    return RunResult(best.point, best.value, tree.opening_ledger,
                     stream.n_evals, deepest, tree.opening_ledger, trace)


# ---------------------------------------------------------------------------
# StroquOOL
# ---------------------------------------------------------------------------

def stroquool_run(obj: Objective, noise: NoiseModel | None, cfg: RunConfig) -> RunResult:
    """Noise-adaptive search: harmonic schedule over (depth, evaluation count).

    Phases: (1) open the root with h_max evaluations per child, h_max =
    max(1, floor(n / (2 (H(n)+1)^2))); (2) for each depth h and m = 1 ..
    floor(h_max/h), open the best unopened depth-h cell evaluated at least
    q = floor(h_max/(h m)) times, with q evaluations per child; (3) for each
    p = 0 .. floor(log2 h_max), nominate the best cell evaluated at least
    2^p times, then give each distinct candidate max(1, floor(h_max/2))
    fresh evaluations and recommend the candidate with the best fresh mean.

    The budget-unit ledger (init h_max + exploration quotas + validation
    evaluations) never exceeds n.
    """
    n = cfg.budget_n
    if n < 8:
        raise ValueError(f"budget n={n} too small: StroquOOL needs n >= 8")
    K = cfg.branching
    h_max = stroquool_h_max(n)
    p_max = h_max.bit_length() - 1  # floor(log2 h_max)
    tree = make_tree(obj.domain, K)
    stream = EvaluationStream(obj, noise)
    trace = [] if cfg.record_trace else None

    units = 0
    deepest = 0
    by_depth = {1: []}

    def open_with(cell, evals, nxt):
        nonlocal units, deepest
        units += evals
        if trace is not None:
            trace.append(("open", cell.id.depth, cell.id.index, evals))
        for cid, _mean in tree.open_cell(cell.id, evals, stream):
            nxt.append(tree.cells[cid])
            if cid.depth > deepest:
                deepest = cid.depth

    open_with(tree.root, h_max, by_depth[1])

    # exploration: each depth's statistics are final before its loop starts
    # (cells are created and evaluated by the openings one level up), so one
    # sort per depth suffices
    for h in range(1, h_max + 1):
        cells = by_depth.pop(h, None)
        if not cells:
            break
        cells.sort(key=lambda c: (-c.mean, c.id))
        nxt = by_depth.setdefault(h + 1, [])
        for m in range(1, h_max // h + 1):
            q = h_max // (h * m)  # >= 1 since m <= h_max // h
            pick = None
            for cell in cells:
                if not cell.opened and cell.eval_count >= q:
                    pick = cell
                    break
            if pick is not None:
                open_with(pick, q, nxt)

    # cross-validation: nominate per doubling threshold, then re-evaluate
    evaluated = [c for c in tree.cells.values() if c.eval_count > 0]
    candidates = []
    seen = set()
    for p in range(p_max + 1):
        thr = 1 << p
        pool = [c for c in evaluated if c.eval_count >= thr]
        if not pool:
            continue
        c = min(pool, key=lambda c: (-c.mean, c.id))
        if trace is not None:
            trace.append(("candidate", p, c.id.depth, c.id.index))
        if c.id not in seen:
            seen.add(c.id)
            candidates.append(c)

    v_evals = max(1, h_max // 2)
    fresh = {}
    for cell in sorted(candidates, key=lambda c: c.id):
        before = cell.reward_sum
        tree.add_evaluations(cell.id, v_evals, stream)
        fresh[cell.id] = (cell.reward_sum - before) / v_evals
        units += v_evals
        if trace is not None:
            trace.append(("validate", cell.id.depth, cell.id.index, v_evals))

    out = min(fresh, key=lambda cid: (-fresh[cid], cid))
    if trace is not None:
        trace.append(("recommend", out.depth, out.index))

    assert units <= n, "evaluation budget exceeded"
    return RunResult(tree.cells[out].representative, fresh[out],
                     tree.opening_ledger, stream.n_evals, deepest, units, trace)


# ---------------------------------------------------------------------------
# SOO baseline
# ---------------------------------------------------------------------------

def soo_run(obj: Objective, cfg: RunConfig, depth_limit_fn=None) -> RunResult:
    """Depth-sweep baseline under deterministic feedback.

    Repeatedly sweeps depths 0 .. min(deepest materialized, limit(t)); at
    each depth it opens the best unopened cell if its value is >= every
    value opened earlier in the sweep.  limit defaults to sqrt(t) with t the
    openings so far.  The budget can go unspent if the depth limit pins the
    frontier (the sweep then opens nothing and the run stops).
    """
    n = cfg.budget_n
    limit = depth_limit_fn or math.sqrt
    tree = make_tree(obj.domain, cfg.branching)
    stream = EvaluationStream(obj)
    trace = [] if cfg.record_trace else None

    heaps = {}  # depth -> [(-value, cid)]; entries are unopened leaves
    best = _Best()
    deepest = 0
    max_depth = 0
    t = 0

    def open_cell_at(cid):
        nonlocal t, deepest, max_depth
        t += 1
        if trace is not None:
            trace.append(("open", cid.depth, cid.index, 1))
        child_depth = cid.depth + 1
        heap = heaps.setdefault(child_depth, [])
        for ccid, mean in tree.open_cell(cid, 1, stream):
            child = tree.cells[ccid]
            heapq.heappush(heap, (-mean, ccid))
            best.update(mean, ccid, child.representative)
            if ccid.depth > deepest:
                deepest = ccid.depth
        max_depth = max(max_depth, child_depth)

    progressed = True
    while t < n and progressed:
        progressed = False
        vmax = -math.inf
        h = 0
        while t < n and h <= min(max_depth, int(limit(t))):
            if h == 0:
                if not tree.root.opened:
                    open_cell_at(tree.root.id)  # root has no value; vmax stays -inf
                    progressed = True
                h += 1
                continue
            heap = heaps.get(h)
            if heap:
                negv, cid = heap[0]
                if -negv >= vmax:
                    heapq.heappop(heap)
                    open_cell_at(cid)
                    vmax = -negv
                    progressed = True
            h += 1

    return RunResult(best.point, best.value, tree.opening_ledger,
                     stream.n_evals, deepest, tree.opening_ledger, trace)


# ---------------------------------------------------------------------------
# DOO baseline
# ---------------------------------------------------------------------------

def doo_run(obj: Objective, cfg: RunConfig, nu: float, rho: float) -> RunResult:
    """Optimistic baseline that knows the smoothness: always opens the leaf
    maximizing value + nu * rho^depth (ties by lowest CellId).  With a huge
    nu the depth term dominates and the order degenerates to breadth-first.
    """
    if not nu > 0:
        raise ValueError("nu must be > 0")
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must be in (0, 1)")
    n = cfg.budget_n
    tree = make_tree(obj.domain, cfg.branching)
    stream = EvaluationStream(obj)
    trace = [] if cfg.record_trace else None

    best = _Best()
    deepest = 0
    heap = []  # (-(value + nu rho^depth), cid)
    t = 0

    def open_cell_at(cid):
        nonlocal t, deepest
        t += 1
        if trace is not None:
            trace.append(("open", cid.depth, cid.index, 1))
        for ccid, mean in tree.open_cell(cid, 1, stream):
            child = tree.cells[ccid]
            heapq.heappush(heap, (-(mean + nu * rho ** ccid.depth), ccid))
            best.update(mean, ccid, child.representative)
            if ccid.depth > deepest:
                deepest = ccid.depth

    open_cell_at(tree.root.id)
    while t < n and heap:
        _key, cid = heapq.heappop(heap)
        open_cell_at(cid)

    return RunResult(best.point, best.value, tree.opening_ledger,
                     stream.n_evals, deepest, tree.opening_ledger, trace)


# ---------------------------------------------------------------------------
# uniform baseline
# ---------------------------------------------------------------------------

def uniform_run(obj: Objective, noise: NoiseModel | None, cfg: RunConfig) -> RunResult:
    """Breadth-first openings in CellId order; recommends the best observed
    mean.  The root's representative is observed once up front so depth 0
    participates (n openings cost K*n + 1 raw evaluations)."""
    n = cfg.budget_n
    tree = make_tree(obj.domain, cfg.branching)
    stream = EvaluationStream(obj, noise)
    trace = [] if cfg.record_trace else None

    tree.add_evaluations(tree.root.id, 1, stream)
    if trace is not None:
        trace.append(("evaluate", 0, 0, 1))
    deepest = 0
    queue = deque([tree.root.id])
    opened = 0
    while queue and opened < n:
        cid = queue.popleft()
        if trace is not None:
            trace.append(("open", cid.depth, cid.index, 1))
        for ccid, _mean in tree.open_cell(cid, 1, stream):
            queue.append(ccid)
            if ccid.depth > deepest:
                deepest = ccid.depth
        opened += 1

    rec = min((c for c in tree.cells.values() if c.eval_count > 0),
              key=lambda c: (-c.mean, c.id))
    return RunResult(rec.representative, rec.mean, tree.opening_ledger,
                     stream.n_evals, deepest, tree.opening_ledger, trace)
