"""Minor search engine, bidimensionality, canonical codes.

The engine is cross-checked against an independent oracle that enumerates
every assignment of host vertices to pattern vertices (or to "unused") and
tests the model invariants directly. That is exhaustive for small hosts, so
agreement on random instances checks both presence and absence answers.
"""

import itertools
import random

import pytest

from minorkit.errors import RootCountMismatch, SearchCapExceeded
from minorkit.graphs import AnnotatedGraph, Graph, RootedGraph
from minorkit.minors import (
    MinorModel,
    bidim,
    canonical_code,
    canonical_form,
    find_minor,
    find_red_minor,
    find_rooted_minor,
    isomorphic,
    verify_minor_model,
)


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves):
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def grid_graph(rows, cols):
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges)


def random_graph(n, p, rng):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph(n, edges)


def relabel(g, perm):
    return Graph(g.n, [(perm[u], perm[v]) for u, v in g.edges])


def _connected_subset(g, block):
    if not block:
        return False
    block = set(block)
    seen = {next(iter(block))}
    frontier = list(seen)
    while frontier:
        v = frontier.pop()
        for w in g.neighbors(v):
            if w in block and w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen == block


def oracle_minor(host, pattern, required=None, red=None):
    """Exhaustive minor test: every host-vertex labeling is examined."""
    p = pattern.n
    if p == 0:
        return True
    for labeling in itertools.product(range(p + 1), repeat=host.n):
        blocks = [set() for _ in range(p)]
        for v, lab in enumerate(labeling):
            if lab < p:
                blocks[lab].add(v)
        if any(not b for b in blocks):
            continue
        if required is not None and any(
            not req <= blocks[q] for q, req in enumerate(required)
        ):
            continue
        if red is not None and any(not (b & red) for b in blocks):
            continue
        if any(not _connected_subset(host, b) for b in blocks):
            continue
        ok = True
        for a, b in pattern.edges:
            if not any(host.has_edge(x, y) for x in blocks[a] for y in blocks[b]):
                ok = False
                break
        if ok:
            return True
    return False


# --- verify_minor_model -----------------------------------------------------


def test_verify_accepts_identity_model():
    g = cycle_graph(4)
    model = MinorModel(tuple(frozenset({v}) for v in range(4)))
    assert verify_minor_model(g, g, model)


def test_verify_rejects_bad_models():
    host = path_graph(4)
    pattern = path_graph(2)
    assert not verify_minor_model(host, pattern, MinorModel((frozenset({0, 2}), frozenset({3}))))
    assert not verify_minor_model(host, pattern, MinorModel((frozenset({0}), frozenset({0}))))
    assert not verify_minor_model(host, pattern, MinorModel((frozenset({0}), frozenset({2}))))
    assert not verify_minor_model(host, pattern, MinorModel((frozenset(), frozenset({1}))))
    assert not verify_minor_model(host, pattern, MinorModel((frozenset({0}),)))
    assert not verify_minor_model(host, pattern, MinorModel((frozenset({0}), frozenset({9}))))


# --- plain minors ------------------------------------------------------------


def test_c4_is_minor_of_k4():
    model = find_minor(complete_graph(4), cycle_graph(4))
    assert model is not None
    assert verify_minor_model(complete_graph(4), cycle_graph(4), model)


def test_k3_is_minor_of_c4_by_contraction():
    # contracting one cycle edge leaves a triangle; exhaustive oracle agrees
    model = find_minor(cycle_graph(4), complete_graph(3))
    assert model is not None
    assert verify_minor_model(cycle_graph(4), complete_graph(3), model)
    assert oracle_minor(cycle_graph(4), complete_graph(3))


def test_k3_is_not_minor_of_any_tree():
    assert find_minor(path_graph(4), complete_graph(3)) is None
    assert find_minor(star_graph(4), complete_graph(3)) is None


def test_k4_in_3x3_grid():
    host = grid_graph(3, 3)
    model = find_minor(host, complete_graph(4))
    assert model is not None and verify_minor_model(host, complete_graph(4), model)


def test_k5_not_in_4x4_grid():
    assert find_minor(grid_graph(4, 4), complete_graph(5)) is None


def test_pattern_cap_enforced():
    with pytest.raises(SearchCapExceeded):
        find_minor(complete_graph(13), complete_graph(13))


def test_empty_pattern_always_present():
    assert find_minor(Graph(0, []), Graph(0, [])) is not None
    assert find_minor(path_graph(3), Graph(0, [])) is not None


def test_plain_search_matches_oracle():
    rng = random.Random(7)
    for _ in range(60):
        host = random_graph(rng.randint(1, 6), rng.uniform(0.2, 0.8), rng)
        pattern = random_graph(rng.randint(1, 4), rng.uniform(0.3, 0.9), rng)
        model = find_minor(host, pattern)
        assert (model is not None) == oracle_minor(host, pattern)
        if model is not None:
            assert verify_minor_model(host, pattern, model)


# --- rooted minors -----------------------------------------------------------


def test_rooted_path_ends():
    host = RootedGraph.of(path_graph(3), (0, 2))
    pattern = RootedGraph.of(path_graph(2), (0, 1))
    model = find_rooted_minor(host, pattern)
    assert model is not None
    assert 0 in model.branch_sets[0] and 2 in model.branch_sets[1]


def test_rooted_absent_when_disconnected():
    host = RootedGraph.of(Graph(2, []), (0, 1))
    pattern = RootedGraph.of(path_graph(2), (0, 1))
    assert find_rooted_minor(host, pattern) is None


def test_rooted_root_count_mismatch():
    host = RootedGraph.of(path_graph(3), (0,))
    pattern = RootedGraph.of(path_graph(2), (0, 1))
    with pytest.raises(RootCountMismatch):
        find_rooted_minor(host, pattern)


def test_rooted_shared_host_root_on_distinct_pattern_roots():
    host = RootedGraph.of(path_graph(2), (0, 0))
    pattern = RootedGraph.of(path_graph(2), (0, 1))
    assert find_rooted_minor(host, pattern) is None


def test_rooted_repeated_pattern_root_forces_joint_branch_set():
    # both host roots must live in the single branch set of pattern vertex 0
    host = RootedGraph.of(path_graph(3), (0, 2))
    pattern = RootedGraph.of(Graph(1, []), (0, 0))
    model = find_rooted_minor(host, pattern)
    assert model is not None and model.branch_sets[0] == frozenset({0, 1, 2})


def test_rooted_search_matches_oracle():
    rng = random.Random(19)
    for _ in range(50):
        hn = rng.randint(2, 6)
        pn = rng.randint(1, 3)
        host = random_graph(hn, rng.uniform(0.2, 0.8), rng)
        pattern = random_graph(pn, rng.uniform(0.3, 0.9), rng)
        k = rng.randint(1, 2)
        hroots = tuple(rng.randrange(hn) for _ in range(k))
        proots = tuple(rng.randrange(pn) for _ in range(k))
        required = [set() for _ in range(pn)]
        legal = True
        for hr, pr in zip(hroots, proots):
            required[pr].add(hr)
        for q in range(pn):
            for q2 in range(q + 1, pn):
                if required[q] & required[q2]:
                    legal = False
        model = find_rooted_minor(
            RootedGraph.of(host, hroots), RootedGraph.of(pattern, proots)
        )
        expected = legal and oracle_minor(host, pattern, required=required)
        assert (model is not None) == expected
        if model is not None:
            assert verify_minor_model(host, pattern, model)
            for hr, pr in zip(hroots, proots):
                assert hr in model.branch_sets[pr]


# --- red minors and bidimensionality ----------------------------------------


def test_red_minor_in_star():
    host = AnnotatedGraph.of(star_graph(4), {1, 2, 3, 4})
    model = find_red_minor(host, path_graph(3))
    assert model is not None
    for bs in model.branch_sets:
        assert bs & {1, 2, 3, 4}
    assert find_red_minor(host, complete_graph(3)) is None


def test_red_minor_empty_annotation():
    host = AnnotatedGraph.of(path_graph(3), set())
    assert find_red_minor(host, path_graph(1)) is None
    assert find_red_minor(host, Graph(0, [])) is not None


def test_red_search_matches_oracle():
    rng = random.Random(23)
    for _ in range(50):
        hn = rng.randint(1, 6)
        host = random_graph(hn, rng.uniform(0.2, 0.8), rng)
        red = {v for v in range(hn) if rng.random() < 0.5}
        pattern = random_graph(rng.randint(1, 3), rng.uniform(0.3, 0.9), rng)
        model = find_red_minor(AnnotatedGraph.of(host, red), pattern)
        assert (model is not None) == oracle_minor(host, pattern, red=red)


def test_bidim_of_grids_fully_annotated():
    for n in range(1, 5):
        g = grid_graph(n, n)
        host = AnnotatedGraph.of(g, set(range(g.n)))
        assert bidim(host, cap=n) == n


def test_bidim_star_and_empty():
    host = AnnotatedGraph.of(star_graph(5), {1, 2, 3, 4, 5})
    assert bidim(host, cap=3) == 1
    assert bidim(AnnotatedGraph.of(star_graph(5), set()), cap=3) == 0


def test_bidim_squared_at_most_annotated_count():
    rng = random.Random(31)
    for _ in range(40):
        hn = rng.randint(1, 9)
        g = random_graph(hn, rng.uniform(0.2, 0.7), rng)
        red = {v for v in range(hn) if rng.random() < 0.6}
        b = bidim(AnnotatedGraph.of(g, red), cap=3)
        assert b * b <= max(len(red), 0) or b == 0
        if b > 0:
            assert b * b <= len(red)


def test_bidim_grows_slowly_under_added_red_vertices():
    rng = random.Random(37)
    for _ in range(30):
        hn = rng.randint(2, 8)
        g = random_graph(hn, rng.uniform(0.3, 0.8), rng)
        reds = [v for v in range(hn) if rng.random() < 0.4]
        extra = [v for v in range(hn) if v not in reds and rng.random() < 0.4]
        base = bidim(AnnotatedGraph.of(g, reds), cap=3)
        grown = bidim(AnnotatedGraph.of(g, set(reds) | set(extra)), cap=3)
        assert grown <= base + len(extra)
        assert grown >= base


# --- canonical codes ---------------------------------------------------------


def test_canonical_code_invariant_under_relabeling():
    rng = random.Random(41)
    for _ in range(40):
        n = rng.randint(1, 8)
        g = random_graph(n, rng.uniform(0.2, 0.8), rng)
        roots = tuple(rng.randrange(n) for _ in range(rng.randint(0, 3)))
        perm = list(range(n))
        rng.shuffle(perm)
        h = relabel(g, perm)
        hroots = tuple(perm[r] for r in roots)
        assert canonical_code(RootedGraph.of(g, roots)) == canonical_code(
            RootedGraph.of(h, hroots)
        )


def test_canonical_code_separates_nonisomorphic():
    # same vertex and edge counts, different structure
    p4 = path_graph(4)
    triangle_plus_isolated = Graph(4, [(0, 1), (1, 2), (0, 2)])
    assert canonical_code(RootedGraph.of(p4, ())) != canonical_code(
        RootedGraph.of(triangle_plus_isolated, ())
    )


def test_canonical_code_respects_root_positions():
    p3 = path_graph(3)
    end_then_center = canonical_code(RootedGraph.of(p3, (0, 1)))
    center_then_end = canonical_code(RootedGraph.of(p3, (1, 0)))
    assert end_then_center != center_then_end
    # but the two ends are exchangeable by a rooted isomorphism
    assert canonical_code(RootedGraph.of(p3, (0,))) == canonical_code(
        RootedGraph.of(p3, (2,))
    )


def test_canonical_form_is_a_fixed_point():
    rng = random.Random(43)
    for _ in range(20):
        n = rng.randint(1, 7)
        g = random_graph(n, 0.5, rng)
        roots = tuple(rng.randrange(n) for _ in range(rng.randint(0, 2)))
        form, sig = canonical_form(RootedGraph.of(g, roots))
        form2, sig2 = canonical_form(form)
        assert sig == sig2
        assert form.graph == form2.graph and form.roots == form2.roots


def test_canonical_cap():
    with pytest.raises(SearchCapExceeded):
        canonical_code(RootedGraph.of(Graph(21, []), ()))


def test_isomorphic_basic():
    c5 = cycle_graph(5)
    shifted = relabel(c5, [2, 3, 4, 0, 1])
    assert isomorphic(c5, shifted)
    assert not isomorphic(c5, path_graph(5))
    assert not isomorphic(c5, cycle_graph(6))
