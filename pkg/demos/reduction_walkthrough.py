"""
Model reduction walkthrough
===========================

Parse a degenerating family from its dual-graph description, contract it
to the minimal snc model, and read off the stable dual graph and the
essential skeleton.
"""
from curvedegen import parse_model
from curvedegen.dotio import emit_dot
from curvedegen.dsl import emit_model
from curvedegen.reduction import (essential_skeleton, minimal_snc_model,
                                  stable_dual_graph)

# A chain of two rational curves hanging off a genus-2 component.  The
# marks sit on the far end of the chain, with total coefficient 3 < m,
# so both rational pieces are contractible.
TEXT = """
model {
  m = 4;
  vertex E1 { genus = 0 };
  vertex E2 { genus = 0 };
  vertex C  { genus = 2 };
  edge e1 E1 -- E2;
  edge e2 E2 -- C;
  mark P1 on E1 coeff 1;
  mark P2 on E1 coeff 1;
  mark P3 on E1 coeff 1
}
"""

doc = parse_model(TEXT)
model = doc.model
print("parsed", len(model.components), "components,", len(model.edges), "edges")

# Contract.  The domination map records every collapse step: E1 folds
# into E2 first, then the merged vertex folds into C.
reduced, dom = minimal_snc_model(model)
for step in dom.steps:
    print(f"collapse {step.component} -> {step.host} at {step.location}")
print("reduced model:")
print(emit_model(reduced))

# The marks were carried along; all three now sit at one point of C.
print("mark degree on C:", reduced.mark_degree("C"))

# Component and edge fates, as recorded by the domination map.
for cid in ("E1", "E2", "C"):
    print(f"fate of {cid}:", dom.component_fate(cid))

# A dumbbell with an inessential middle vertex: the stable dual graph
# merges the two edges into one chain of length 2.
mid = parse_model("""
model {
  m = 2;
  vertex E1 { genus = 1 };
  vertex F  { genus = 0 };
  vertex E2 { genus = 1 };
  edge a E1 -- F;
  edge b F -- E2
}
""").model
graph = stable_dual_graph(mid)
for ch in graph.chains:
    print(f"chain {ch.id}: {ch.endpoints[0]} -- {ch.endpoints[1]}",
          f"length={ch.length} via={ch.model_edges}")

skel = essential_skeleton(mid)
print("skeleton total length:", skel.total_length())

# DOT output for graphviz; inessential vertices are styled differently.
print(emit_dot(mid))
