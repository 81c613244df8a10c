"""Shrink a graph with the vertex-cover kernel, solve the kernel, and lift the drawing back."""
import argparse

from wlspan.drawing import check_geometric
from wlspan.graph import graph_from_edges
from wlspan.kernels import vc_kernelize, vc_reinsert
from wlspan.solver import decide_span


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--middles", type=int, default=40, help="common neighbours of the two hubs")
    ap.add_argument("--leaves", type=int, default=10, help="pendant leaves on each hub")
    ap.add_argument("--span", type=int, default=1)
    args = ap.parse_args()

    u, v = "u", "v"
    es = [(h, f"{h}{i}") for h in (u, v) for i in range(args.leaves)]
    es += [(h, f"m{i}") for h in (u, v) for i in range(args.middles)]
    g = graph_from_edges(es)
    ker, trace = vc_kernelize(g, {u, v}, args.span)
    print(f"input n={g.n}, kernel n={ker.n}, rule applications={len(trace)}")
    ok, w, _ = decide_span(ker, args.span, cap=ker.n, budget=10**9)
    print(f"span <= {args.span}: {ok}")
    if ok:
        d = vc_reinsert(w, trace)
        print(f"lifted drawing: n={len(d.positions)} span={d.span()} valid={bool(check_geometric(d))}")


if __name__ == "__main__":
    main()
