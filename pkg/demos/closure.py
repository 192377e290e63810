"""Grow Y333 to its 8-gon closure and compare with the incidence graph of PG(2,2)."""

from coxdeflate import build_incidence_graph, build_y_diagram, closure, is_isomorphic

state = closure(build_y_diagram((3, 3, 3)), 8, 14)
d = state.diagram()
print(f"{len(d.labels)} node classes after {state.rounds} rounds")
for entry in state.round_log:
    print("  ", entry)
bij = is_isomorphic(d, build_incidence_graph(2))
print("isomorphic to incidence(2):", bij is not None)
print("relations recorded:", len(state.relations))
