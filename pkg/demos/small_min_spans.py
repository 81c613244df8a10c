"""Exact minimum span of a few small graphs."""
from wlspan.generators import gen_nested_triangles, gen_stacked_cycles, gen_W
from wlspan.graph import graph_from_edges
from wlspan.solver import min_span_wlp

CASES = {
    "K2,4": graph_from_edges([(a, m) for a in (0, 1) for m in range(2, 6)]),
    "W(2,1)": gen_W(2, 1).graph,
    "prism": gen_nested_triangles(2),
    "stacked k=1": gen_stacked_cycles(1),
    "stacked k=2": gen_stacked_cycles(2),
    "stacked k=3": gen_stacked_cycles(3),
}

for name, g in CASES.items():
    res = min_span_wlp(g)
    print(f"{name:12s} n={g.n:2d} min span={res.optimum} leveling={dict(sorted(res.leveling.items()))}")
