"""Axis-aligned K-ary partitioning of a box domain, with the evaluated-tree
bookkeeping shared by every optimizer.

A cell is "opened" by splitting it into K equal-width children along one axis
(the axis cycles with depth by default) and evaluating each child's
representative point a requested number of times.  Budgets are counted in
openings; the tree keeps a ledger of how many cells have been opened.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple


class CellId(NamedTuple):
    """(depth, index) coordinate of a cell; orderable, depth-major.

    index is 0-based and lexicographic by split history: the children of
    (h, i) are (h+1, i*K + j) for j in 0..K-1.
    """

    depth: int
    index: int


class Box:
    """Axis-aligned box { x : lower[i] <= x[i] <= upper[i] }."""

    __slots__ = ("lower", "upper")

    def __init__(self, lower, upper):
        lower = tuple(float(v) for v in lower)
        upper = tuple(float(v) for v in upper)
        if len(lower) != len(upper):
            raise ValueError("lower and upper must have the same length")
        if len(lower) == 0:
            raise ValueError("domain must have at least one dimension")
        for i, (lo, hi) in enumerate(zip(lower, upper)):
            if not lo < hi:
                raise ValueError(f"inverted bounds at dimension {i}")
        self.lower = lower
        self.upper = upper

    @classmethod
    def _unchecked(cls, lower, upper):
        # internal: child boxes may degenerate to zero width at float
        # resolution deep in the tree; only the *domain* box is validated
        box = object.__new__(cls)
        box.lower = tuple(lower)
        box.upper = tuple(upper)
        return box

    @property
    def dim(self):
        return len(self.lower)

    @property
    def center(self):
        return tuple(0.5 * (lo + hi) for lo, hi in zip(self.lower, self.upper))

    @property
    def widths(self):
        return tuple(hi - lo for lo, hi in zip(self.lower, self.upper))

    def contains(self, point):
        if len(point) != self.dim:
            return False
        return all(lo <= x <= hi for x, lo, hi in zip(point, self.lower, self.upper))

    def __eq__(self, other):
        return isinstance(other, Box) and self.lower == other.lower and self.upper == other.upper

    def __hash__(self):
        return hash((self.lower, self.upper))

    def __repr__(self):
        return f"Box({list(self.lower)}, {list(self.upper)})"


class Cell:
    """One cell of the partition with its running evaluation statistics."""

    __slots__ = ("id", "box", "representative", "eval_count", "reward_sum", "opened")

    def __init__(self, cid, box, representative):
        self.id = cid
        self.box = box
        self.representative = representative
        self.eval_count = 0
        self.reward_sum = 0.0
        self.opened = False

    @property
    def mean(self):
        """Empirical mean of the observed values; only defined once evaluated."""
        if self.eval_count == 0:
            raise ValueError(f"cell {self.id} has no evaluations")
        return self.reward_sum / self.eval_count

    def __repr__(self):
        return (f"Cell(id={tuple(self.id)}, T={self.eval_count}, "
                f"opened={self.opened})")


def _observe_sum(evaluator, point, count):
    """Sum of `count` observations at `point`.

    Evaluators may expose an `observe_sum(point, count)` batch method (see
    objectives.EvaluationStream); plain callables are invoked count times.
    """
    batch = getattr(evaluator, "observe_sum", None)
    if batch is not None:
        return batch(point, count)
    return math.fsum(evaluator(point) for _ in range(count))


class PartitionTree:
    """The explored part of the infinite K-ary partition of `domain`.

    `cells` holds the root plus every child of an opened cell.  All mutation
    goes through open_cell / add_evaluations, so a tree's state is a
    deterministic function of (domain, K, split rule, evaluator stream,
    call sequence).  Single-writer; run one optimizer per tree.
    """

    def __init__(self, domain: Box, branching: int = 3,
                 split_axis_rule: Callable[[int, int], int] | None = None):
        if branching < 2:
            raise ValueError("branching must be at least 2")
        self.domain = domain
        self.branching = int(branching)
        # default: cycle the split axis with depth
        self.split_axis_rule = split_axis_rule or (lambda depth, dim: depth % dim)
        root = Cell(CellId(0, 0), domain, domain.center)
        self.root = root
        self.cells = {root.id: root}
        self.opening_ledger = 0

    # -- lookups ------------------------------------------------------------

    def cell(self, cid) -> Cell:
        try:
            return self.cells[cid]
        except KeyError:
            raise KeyError(f"unknown cell {cid!r}") from None

    def _split(self, parent: Cell):
        K = self.branching
        axis = self.split_axis_rule(parent.id.depth, parent.box.dim)
        lo = parent.box.lower[axis]
        hi = parent.box.upper[axis]
        w = hi - lo
        children = []
        for j in range(K):
            a = lo + j * w / K
            b = hi if j == K - 1 else lo + (j + 1) * w / K  # last edge snaps exactly
            lower = parent.box.lower[:axis] + (a,) + parent.box.lower[axis + 1:]
            upper = parent.box.upper[:axis] + (b,) + parent.box.upper[axis + 1:]
            box = Box._unchecked(lower, upper)
            cid = CellId(parent.id.depth + 1, parent.id.index * K + j)
            children.append(Cell(cid, box, box.center))
        return children

    def children_of(self, cid):
        """The K children of `cid` (fresh objects unless the parent is opened)."""
        parent = self.cell(cid)
        if parent.opened:
            K = self.branching
            base = parent.id.index * K
            return [self.cells[CellId(parent.id.depth + 1, base + j)] for j in range(K)]
        return self._split(parent)

    def open_cell(self, cid, evals_per_child, evaluator):
        """Open `cid`: materialize its K children and evaluate each child's
        representative `evals_per_child` times.  Returns [(child id, mean)].
        Counts as one opening on the ledger."""
        parent = self.cell(cid)
        if parent.opened:
            raise ValueError(f"cell already opened: {cid}")
        if evals_per_child < 1:
            raise ValueError("evals_per_child must be >= 1")
        children = self._split(parent)
        parent.opened = True
        self.opening_ledger += 1
        out = []
        for child in children:
            self.cells[child.id] = child
            child.reward_sum = _observe_sum(evaluator, child.representative,
                                            evals_per_child)
            child.eval_count = evals_per_child
            out.append((child.id, child.reward_sum / child.eval_count))
        return out

    def add_evaluations(self, cid, count, evaluator):
        """Evaluate an already-materialized cell `count` more times (no
        opening; the ledger is untouched).  Returns the updated mean."""
        cell = self.cell(cid)
        if count < 1:
            raise ValueError("count must be >= 1")
        cell.reward_sum += _observe_sum(evaluator, cell.representative, count)
        cell.eval_count += count
        return cell.reward_sum / cell.eval_count

    def cell_containing(self, point, depth):
        """CellId of the depth-`depth` cell containing `point`.

        Slabs are closed-left/open-right (the last slab is closed) so
        membership is a total function on the domain; works for any depth,
        materialized or not.
        """
        if not self.domain.contains(point):
            raise ValueError(f"point {point!r} outside the domain")
        K = self.branching
        lower = list(self.domain.lower)
        upper = list(self.domain.upper)
        index = 0
        for h in range(depth):
            axis = self.split_axis_rule(h, len(lower))
            lo, hi, x = lower[axis], upper[axis], point[axis]
            w = hi - lo
            if w > 0.0:
                j = min(K - 1, int((x - lo) / w * K))
            else:
                j = 0
            # settle boundary cases against the exact child-edge formula
            while j > 0 and x < lo + j * w / K:
                j -= 1
            while j < K - 1 and x >= lo + (j + 1) * w / K:
                j += 1
            lower[axis] = lo + j * w / K
            upper[axis] = hi if j == K - 1 else lo + (j + 1) * w / K
            index = index * K + j
        return CellId(depth, index)


# -- module-level operation aliases ----------------------------------------

def make_tree(domain: Box, branching: int = 3, split_axis_rule=None) -> PartitionTree:
    """Fresh tree over `domain`: a single unopened root whose representative
    is the domain center."""
    if not isinstance(domain, Box):
        domain = Box(*domain)
    return PartitionTree(domain, branching, split_axis_rule)


def children_of(tree: PartitionTree, cid: CellId):
    return tree.children_of(cid)


def open_cell(tree: PartitionTree, cid: CellId, evals_per_child: int, evaluator):
    return tree.open_cell(cid, evals_per_child, evaluator)


def add_evaluations(tree: PartitionTree, cid: CellId, count: int, evaluator):
    return tree.add_evaluations(cid, count, evaluator)
