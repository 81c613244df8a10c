"""End-to-end acceptance checks. Each test records one pass/fail line, printed at session end."""
import random
import time
from contextlib import contextmanager
from functools import cache

import acceptance_log
from fuzz import mutate
from oracles import connected_graphs_up_to_iso, naive_decide, naive_min_span
from wlspan.cycletree import (
    draw_3conn_cycle_tree,
    draw_cycle_tree,
    general_span_bound,
    stretch_factor,
)
from wlspan.drawing import (
    check_geometric,
    check_via_normalized,
    nesting_violations,
    queue_layout,
    weak_to_strict,
)
from wlspan.generators import (
    gen_3conn_lower,
    gen_cycle_tree_lower,
    gen_random_cycle_tree,
    gen_random_planar,
    gen_stacked_cycles,
    gen_W,
    reduce_instance,
)
from wlspan.graph import graph_from_edges, is_planar, two_coloring
from wlspan.kernels import (
    modulator_greedy,
    modulator_kernelize,
    treedepth_greedy,
    treedepth_kernelize,
    vc_caps,
    vc_kernelize,
    vc_reinsert,
    vertex_cover_2approx,
)
from wlspan.solver import decide_span, feasible_levelings, min_span_wlp

SIZES = (50, 100, 200, 400, 800, 1600)


@contextmanager
def criterion(n, limit=None):
    """Record the outcome of criterion n; a run over `limit` seconds counts as a failure."""
    info = {"detail": ""}
    t0 = time.perf_counter()
    ok = False
    try:
        yield info
        ok = True
    finally:
        secs = time.perf_counter() - t0
        slow = limit is not None and secs >= limit
        detail = info["detail"]
        if slow:
            detail += f" (limit {limit}s)"
        acceptance_log.RESULTS[n] = (ok and not slow, secs, detail)
    assert not slow, f"criterion {n} took {secs:.1f}s, limit {limit}s"


# ------------------------------------------------------------------ shared drawings

@cache
def c4_drawings():
    out = []
    for seed in range(100):
        n = random.Random(seed).randint(4, 200)
        out.append(draw_3conn_cycle_tree(gen_random_cycle_tree(n, three_connected=True, seed=seed)))
    return out


@cache
def c5_drawing():
    return draw_3conn_cycle_tree(gen_3conn_lower(43))


@cache
def c6_drawings():
    out = []
    for n in SIZES:
        out.append((n, "lower", draw_cycle_tree(gen_cycle_tree_lower(n))))
        out.append((n, "random", draw_cycle_tree(gen_random_cycle_tree(n, three_connected=False, seed=n))))
    return out


def _small_instance(i, rng):
    if i % 3 == 0:
        return gen_random_planar(rng.randint(3, 9), seed=i)
    # hubs with pendant leaves and shared degree-2 neighbours, so the rules fire
    es = [(0, 1)] if rng.random() < 0.5 else []
    nxt = 2
    hubs = (0,) if i % 3 == 1 else (0, 1)
    for _ in range(rng.randint(4, 7) if i % 3 == 1 else rng.randint(0, 4)):
        es.append((rng.choice(hubs), nxt))
        nxt += 1
    for _ in range(rng.randint(0, 5)):
        if nxt >= 9:
            break
        es += [(0, nxt), (1, nxt)]
        nxt += 1
    return graph_from_edges(es or [(0, 1)])


@cache
def c8_runs():
    """(g, s, answer on g, [(kernel name, kernel, trace, answer, witness)])."""
    rng = random.Random(8)
    runs = []
    for i in range(60):
        g = _small_instance(i, rng)
        assert g.n <= 9 and is_planar(g)
        for s in (1, 2):
            base = decide_span(g, s)[0]
            cov = vertex_cover_2approx(g)
            kers = [("vc",) + vc_kernelize(g, cov, s),
                    ("modulator",) + modulator_kernelize(g, modulator_greedy(g, 2), s),
                    ("treedepth",) + treedepth_kernelize(g, treedepth_greedy(g), s)]
            answers = []
            for name, ker, tr in kers:
                ok, w, _ = decide_span(ker, s)
                answers.append((name, ker, tr, ok, w))
            runs.append((g, s, base, answers))
    return runs


# ------------------------------------------------------------------ criteria

K24 = graph_from_edges([(a, m) for a in (0, 1) for m in range(2, 6)])


def test_c01_k24_middles_between_poles():
    with criterion(1, limit=10) as info:
        assert min_span_wlp(K24).optimum == 1
        levs = feasible_levelings(K24, 1)
        assert levs
        for lev in levs:
            assert abs(lev[0] - lev[1]) == 2
            assert all(lev[m] == (lev[0] + lev[1]) // 2 for m in range(2, 6))
        info["detail"] = f"min span 1, {len(levs)} feasible levelings"


def test_c02_w21_pole_edge():
    with criterion(2, limit=300) as info:
        w = gen_W(2, 1)
        nu, sigma = w.marks["north-pole"], w.marks["south-pole"]
        ok, wit, lev = decide_span(w.graph, 2)
        assert ok and check_geometric(wit) and abs(lev[nu] - lev[sigma]) == 2
        assert not decide_span(w.graph, 1)[0]
        levs = feasible_levelings(w.graph, 2)
        assert levs and all(abs(lv[nu] - lv[sigma]) == 2 for lv in levs)
        info["detail"] = f"span 2 yes, span 1 no, {len(levs)} levelings all stretch the pole edge"


def test_c03_reduction_equivalence():
    with criterion(3, limit=600) as info:
        cases = 0
        for n in range(2, 6):
            for h in connected_graphs_up_to_iso(n):
                if two_coloring(h) is None or not is_planar(h):
                    continue
                want = naive_decide(h, 1, strict=True)
                for s in (1, 2):
                    ok, w, _ = decide_span(reduce_instance(h, s), s, cap=200, budget=10**9)
                    assert ok == want, (sorted(h.edges), s)
                    if ok:
                        assert check_geometric(w) and w.span() <= s
                    cases += 1
        info["detail"] = f"{cases} (H, s) cases agree"


def test_c04_3conn_cycle_trees_span_four():
    with criterion(4, limit=60) as info:
        ds = c4_drawings()
        bad = [i for i, d in enumerate(ds) if not (check_geometric(d) and d.span() <= 4)]
        assert not bad, bad
        info["detail"] = f"{len(ds)} drawings, max span {max(d.span() for d in ds)}"


def test_c05_lower_43_span_exactly_four():
    with criterion(5, limit=1) as info:
        d = c5_drawing()
        assert check_geometric(d) and d.span() == 4
        info["detail"] = "span 4"


def test_c06_general_cycle_trees_log_bound():
    with criterion(6, limit=300) as info:
        worst = {}
        for n, kind, d in c6_drawings():
            assert check_geometric(d), (n, kind)
            assert d.span() <= general_span_bound(n), (n, kind, d.span())
            worst[n] = max(worst.get(n, 0), d.span())
        lo, hi = SIZES[0], SIZES[-1]
        limit = 2 * worst[lo] + 9 * (stretch_factor(hi) - stretch_factor(lo) + 1)
        assert worst[hi] < limit, (worst, limit)
        info["detail"] = f"max spans {worst}, growth limit {limit}"


def test_c07_stacked_cycles_increasing():
    with criterion(7, limit=600) as info:
        spans = [naive_min_span(gen_stacked_cycles(k)) for k in (1, 2, 3)]
        info["detail"] = f"oracle min spans {spans} for k=1,2,3"
        assert spans[0] < spans[1] < spans[2], spans


def test_c08_kernel_equivalence():
    with criterion(8, limit=1800) as info:
        runs = c8_runs()
        shrunk = 0
        for g, s, base, answers in runs:
            for name, ker, tr, ok, _ in answers:
                assert ok == base, (name, sorted(g.edges), s)
                shrunk += ker.n < g.n
        assert len({id(r[0]) for r in runs}) >= 50
        info["detail"] = f"{len(runs) // 2} instances x s in (1,2), {shrunk} kernels smaller than input"


def test_c09_vc_kernel_size():
    with criterion(9, limit=60) as info:
        insts = []
        for seed in range(80):
            g = gen_random_planar(random.Random(seed).randint(5, 200), seed=seed)
            insts.append((g, vertex_cover_2approx(g).cover, seed % 5))
        for k in range(1, 6):
            for s in (0, 2, 7, 30):
                insts.append(_chain(k, 7, (200 - 8 * k) // max(1, k - 1) if k > 1 else 0) + (s,))
        for m in (10, 60, 198):
            insts.append((graph_from_edges([(0, i) for i in range(1, m + 1)]), {0}, 1))
            insts.append((graph_from_edges([(a, x) for a in (m, m + 1) for x in range(m)]), {m, m + 1}, 9))
        ratio = 0.0
        for g, cover, s in insts:
            assert g.n <= 200 and is_planar(g)
            ker, tr = vc_kernelize(g, cover, s)
            k = len(cover)
            cap1, cap2 = vc_caps(s, k)
            assert (cap1, cap2) == (3, min(4 * s + 5, 24 * k + 5))
            deg1, deg2 = _grouped(ker, cover)
            assert all(c <= cap1 for c in deg1.values())
            assert all(c <= cap2 for c in deg2.values())
            assert ker.n <= 50 * k * k, (ker.n, k)
            ratio = max(ratio, ker.n / (k * k))
        info["detail"] = f"{len(insts)} instances, max kernel size / k^2 = {ratio:.2f}"


def _chain(k, leaves, middles):
    es = [(i, i + 1) for i in range(k - 1)]
    nxt = k
    for c in range(k):
        for _ in range(leaves):
            es.append((c, nxt))
            nxt += 1
    for c in range(k - 1):
        for _ in range(middles):
            es += [(c, nxt), (c + 1, nxt)]
            nxt += 1
    return graph_from_edges(es), set(range(k))


def _grouped(g, cover):
    deg1, deg2 = {}, {}
    for v in g.vertices:
        if v in cover:
            continue
        ns = tuple(sorted(g.neighbors(v)))
        if len(ns) == 1:
            deg1[ns] = deg1.get(ns, 0) + 1
        elif len(ns) == 2:
            deg2[ns] = deg2.get(ns, 0) + 1
    return deg1, deg2


@cache
def c10_lifted():
    out = []
    for g, s, base, answers in c8_runs():
        name, ker, tr, ok, w = answers[0]
        if ok:
            out.append((g, w, vc_reinsert(w, tr)))
    return out


def test_c10_vc_reinsertion():
    with criterion(10) as info:
        lifted = c10_lifted()
        for g, w, d in lifted:
            assert d.graph == g
            assert check_geometric(d) and d.span() == w.span(), sorted(g.edges)
        info["detail"] = f"{len(lifted)} kernel witnesses lifted"


def test_c11_strictify_and_queues():
    with criterion(11) as info:
        ds = [(d, 5) for d in c4_drawings()] + [(c5_drawing(), 5)]
        ds += [(d, None) for _, _, d in c6_drawings()]
        most = 0
        for d, cap in ds:
            s, h = d.span(), d.height()
            q = weak_to_strict(d)
            assert check_geometric(q) and q.is_strict()
            assert q.span() <= 2 * s + 1 and q.height() <= 2 * h + 1
            ql = queue_layout(d)
            assert ql.num_queues <= s + 1 and not nesting_violations(ql)
            if cap is not None:
                assert ql.num_queues <= cap
            most = max(most, ql.num_queues)
        info["detail"] = f"{len(ds)} drawings, at most {most} queues"


def test_c12_checkers_agree():
    with criterion(12, limit=120) as info:
        small = list(c4_drawings()) + [c5_drawing()]
        small += [w for _, _, _, answers in c8_runs() for *_, ok, w in answers if ok]
        small += [d for _, _, d in c10_lifted()]
        pool = small + [d for _, _, d in c6_drawings()]
        for d in pool:
            assert bool(check_geometric(d)) == bool(check_via_normalized(d))
        rng = random.Random(12)
        invalid = 0
        for _ in range(1000):
            m = mutate(rng.choice(small), rng)
            for _ in range(rng.randrange(3)):
                m = mutate(m, rng)
            geo = bool(check_geometric(m))
            assert geo == bool(check_via_normalized(m))
            invalid += not geo
        info["detail"] = f"{len(pool)} drawings and 1000 mutants ({invalid} invalid) agree"
