"""
Limit measures on the metrized curve complex
============================================

The limiting Narasimhan-Simha and pluri-Bergman measures of a
degenerating family live on the metrized curve complex of its minimal
snc model.  This tour computes both for a dumbbell, pushes them to the
hybrid and fiber spaces, and takes the two large-m limits.
"""
from fractions import Fraction

from curvedegen import make_model, ns_limit_measure, pb_limit_measure
from curvedegen.limits import (dimension_summary,
                               large_m_limit_fixed_divisor,
                               large_m_limit_fixed_qdivisor,
                               pushforward_to_fiber, pushforward_to_hyb,
                               stable_curve_ns_measure)
from curvedegen.reduction import stable_dual_graph

# Two elliptic curves joined at a node, m = 2.
dumbbell = make_model(2, [("E1", 1), ("E2", 1)], [("n", "E1", "E2")])

summary = dimension_summary(dumbbell)
print(f"M = {summary.M} = {summary.skeleton_edges} edge(s) +",
      f"h0 {dict(summary.vertex_h0)}")

# The NS measure spreads unit mass uniformly over each skeleton edge;
# vertex parts of positive-genus components are left symbolic.
ns = ns_limit_measure(dumbbell)
print("ns edge masses:", {e: str(v) for e, v in ns.edges.items()})
print("ns vertex kinds:", {c: comp.kind for c, comp in ns.components.items()})

# The pluri-Bergman measure weights each component by its section count
# and still gives every edge total mass 1; the grand total is M.
pb = pb_limit_measure(dumbbell)
print("pb totals:", {c: str(comp.total) for c, comp in pb.components.items()})
print("pb total mass:", pb.total_mass())

# Pushforward to the hybrid space: component masses become vertex atoms.
hyb = pushforward_to_hyb(pb)
print("hybrid atoms:", {c: str(v) for c, v in hyb.vertex_atoms.items()})
print("supported on essential skeleton:", hyb.on_essential_skeleton)

# Pushforward to the limit fiber: edge masses become node atoms.
fib = pushforward_to_fiber(pb)
print("fiber node atoms:", {e: str(v) for e, v in fib.node_atoms.items()})

# Large-m limit at fixed divisor: atoms 2g(v) - 2 + val(v), total 2g - 2.
muB = large_m_limit_fixed_divisor(dumbbell)
print("fixed-B atoms:", {c: str(v) for c, v in muB.vertex_atoms.items()})
print("fixed-B total:", muB.total_mass())

# With marks, the fixed Q-divisor limit adds deg(B|_v)/m to each atom.
marked = make_model(4, [("E", 1)], [], marks=[("P", "E", 2), ("Q", "E", 3)])
muQB = large_m_limit_fixed_qdivisor(marked)
print("fixed-QB atom:", str(muQB.vertex_atoms["E"]),
      "= (2g - 2 + val) + deg(B)/m =", Fraction(0), "+", Fraction(5, 4))

# An unmarked stable curve carries a canonical NS limit measure with a
# unit atom per node chain.
graph = stable_dual_graph(dumbbell)
stable = stable_curve_ns_measure(graph)
print("stable-curve node atoms:",
      {e: str(v) for e, v in stable.node_atoms.items()})
