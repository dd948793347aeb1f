# Tour of the partition layer: boxes, cell ids, openings, and the
# closed-left/open-right membership rule.

from zipftree import Box, CellId, garland_objective, make_tree
from zipftree.objectives import EvaluationStream

obj = garland_objective()
tree = make_tree(obj.domain, branching=3)
stream = EvaluationStream(obj)

print("root:", tree.root)
print("root box:", tree.root.box, "representative:", tree.root.representative)

# peek at the children without materializing anything
for kid in tree.children_of(CellId(0, 0)):
    print("would-be child", tuple(kid.id), "box", kid.box)
print("cells registered so far:", len(tree.cells))

# open the root: K children appear, each evaluated once at its midpoint
print("\nopening the root...")
for cid, mean in tree.open_cell(CellId(0, 0), 1, stream):
    print(f"  child {tuple(cid)}: center={tree.cell(cid).representative[0]:.6f} "
          f"value={mean:.6f}")
print("openings so far:", tree.opening_ledger, "evaluations:", stream.n_evals)

# follow the best child down a few levels
cur = max((c for c in tree.cells.values() if c.eval_count), key=lambda c: c.mean)
for _ in range(4):
    kids = tree.open_cell(cur.id, 1, stream)
    cid, mean = max(kids, key=lambda t: t[1])
    cur = tree.cell(cid)
    print(f"depth {cur.id.depth}: best child {tuple(cur.id)} "
          f"center={cur.representative[0]:.8f} value={mean:.8f}")

# membership: which depth-6 cell contains a point, without materializing it
for x in (0.0, 1 / 3, 0.523598, 1.0):
    print(f"x={x:.6f} lives in depth-6 cell", tuple(tree.cell_containing((x,), 6)))

# re-evaluating a cell is not an opening
before = tree.opening_ledger
tree.add_evaluations(cur.id, 5, stream)
print("\nafter 5 extra evaluations:", cur.eval_count, "samples,",
      "ledger still", tree.opening_ledger == before)
