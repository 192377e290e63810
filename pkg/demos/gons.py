"""Free n-gons in a few small diagrams."""

from coxdeflate import build_incidence_graph, build_named, free_ngons

for name, d, n in [
    ("heawood", build_incidence_graph(2), 8),
    ("petersen", build_named("petersen"), 6),
    ("cube", build_named("cube"), 6),
    ("cycle", build_named("cycle", 8), 8),
]:
    gons = free_ngons(d, n)
    print(f"{name:9s} {len(d.labels):2d} nodes, {len(gons):2d} free {n}-gons, first {gons[0]}")
