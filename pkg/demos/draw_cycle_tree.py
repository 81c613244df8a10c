"""Draw a cycle-tree, check the drawing and write it as SVG."""
import argparse

from wlspan.cycletree import draw_cycle_tree, general_span_bound
from wlspan.drawing import check_geometric, queue_layout
from wlspan.generators import gen_cycle_tree_lower, gen_random_cycle_tree
from wlspan.svg import render_svg


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=60)
    ap.add_argument("--seed", type=int, default=None, help="random instance instead of the lower-bound family")
    ap.add_argument("--svg", default="cycle_tree.svg")
    args = ap.parse_args()

    if args.seed is None:
        ct = gen_cycle_tree_lower(args.n)
    else:
        ct = gen_random_cycle_tree(args.n, three_connected=False, seed=args.seed)
    d = draw_cycle_tree(ct)
    verdict = check_geometric(d)
    print(f"n={ct.graph.n} span={d.span()} bound={general_span_bound(ct.graph.n)} "
          f"valid={bool(verdict)} queues={queue_layout(d).num_queues}")
    render_svg(d, args.svg)
    print(f"wrote {args.svg}")


if __name__ == "__main__":
    main()
