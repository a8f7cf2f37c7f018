"""Tree decompositions: validation, exact width, certificates, nice form.

exact_treewidth is cross-checked against a brute-force oracle that tries
every elimination order, which is the definitional route at tiny sizes.
"""

import itertools
import random

import pytest

from minorkit.decomposition import (
    AboveBound,
    Bramble,
    TreeDecomposition,
    bramble_order,
    exact_treewidth,
    find_grid_subgraph,
    nice_form,
    nice_node_kind,
    parse_td,
    treewidth_certificates,
    validate_bramble,
    validate_td,
    write_td,
)
from minorkit.errors import CertificateNotFound, InvalidDecomposition, SearchCapExceeded
from minorkit.graphs import Graph


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


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
    return Graph(
        n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    )


def tw_oracle(g):
    """Minimum over all elimination orders of the maximum elimination degree."""
    best = None
    for order in itertools.permutations(range(g.n)):
        adj = {v: set(g.neighbors(v)) for v in range(g.n)}
        removed = set()
        width = -1
        for v in order:
            nb = adj[v] - removed
            width = max(width, len(nb))
            if best is not None and width >= best:
                break
            for a in nb:
                adj[a] |= nb - {a}
            removed.add(v)
        else:
            best = width if best is None else min(best, width)
    return best if best is not None else -1


def gamma2_like():
    # 3x3 grid with one extra edge joining the right column's top and bottom
    g = grid_graph(3, 3)
    return Graph(9, list(g.edges) + [(2, 8)])


# --- validate_td --------------------------------------------------------------


def test_single_bag_decomposition_valid():
    g = random_graph(5, 0.5, random.Random(1))
    td = TreeDecomposition(Graph(1, []), (frozenset(range(5)),))
    check = validate_td(g, td)
    assert check.valid and check.width == 4 and check.adhesion == 0


def test_grid_sweep_decomposition_valid():
    g = grid_graph(3, 3)
    _, td = exact_treewidth(g)
    check = validate_td(g, td)
    assert check.valid


def test_missing_edge_invalid():
    g = path_graph(3)
    td = TreeDecomposition(Graph(2, [(0, 1)]), (frozenset({0, 1}), frozenset({2})))
    assert not validate_td(g, td).valid


def test_broken_vertex_connectivity_invalid():
    g = path_graph(4)
    bags = (frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 3, 0}))
    td = TreeDecomposition(path_graph(3), bags)
    assert not validate_td(g, td).valid


def test_disconnected_tree_invalid():
    g = path_graph(2)
    td = TreeDecomposition(Graph(2, []), (frozenset({0, 1}), frozenset({0, 1})))
    assert not validate_td(g, td).valid


# --- exact treewidth ----------------------------------------------------------


def test_tree_has_width_one():
    g = Graph(6, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)])
    width, td = exact_treewidth(g)
    assert width == 1
    assert validate_td(g, td).valid and td.width() == 1


def test_edgeless_and_empty():
    width, td = exact_treewidth(Graph(3, []))
    assert width == 0 and validate_td(Graph(3, []), td).valid
    width, td = exact_treewidth(Graph(0, []))
    assert width == -1


def test_3x3_grid_width_three():
    width, td = exact_treewidth(grid_graph(3, 3))
    assert width == 3
    assert validate_td(grid_graph(3, 3), td).valid


def test_gamma2_like_width_three():
    g = gamma2_like()
    width, td = exact_treewidth(g)
    assert width == 3 and validate_td(g, td).valid


def test_complete_graph_width():
    for n in range(2, 7):
        width, _ = exact_treewidth(complete_graph(n))
        assert width == n - 1


def test_exact_matches_elimination_oracle():
    rng = random.Random(11)
    for _ in range(25):
        n = rng.randint(1, 6)
        g = random_graph(n, rng.uniform(0.2, 0.9), rng)
        width, td = exact_treewidth(g)
        assert width == tw_oracle(g)
        assert validate_td(g, td).valid and td.width() == width


def test_above_bound_and_cap():
    assert isinstance(exact_treewidth(complete_graph(4), upper=1), AboveBound)
    width, _ = exact_treewidth(complete_graph(4), upper=3)
    assert width == 3
    with pytest.raises(SearchCapExceeded):
        exact_treewidth(Graph(21, []))


def test_vertex_deletion_monotone():
    rng = random.Random(13)
    for _ in range(10):
        n = rng.randint(2, 8)
        g = random_graph(n, 0.5, rng)
        width, _ = exact_treewidth(g)
        v = rng.randrange(n)
        keep = [u for u in range(n) if u != v]
        relab = {u: i for i, u in enumerate(keep)}
        h = Graph(
            n - 1, [(relab[a], relab[b]) for a, b in g.edges if a != v and b != v]
        )
        wh, _ = exact_treewidth(h)
        assert wh <= width


# --- brambles and certificates --------------------------------------------------


def test_bramble_validation_and_order():
    g = cycle_graph(5)
    b = Bramble((frozenset({0, 1}), frozenset({2}), frozenset({3, 4})))
    assert validate_bramble(g, b)
    assert bramble_order(g, b) == 3
    not_touching = Bramble((frozenset({0}), frozenset({2})))
    assert not validate_bramble(g, not_touching)


def test_certificates_on_c5():
    g = cycle_graph(5)
    certs = treewidth_certificates(g, 2)
    assert certs.lower_bramble is not None
    assert bramble_order(g, certs.lower_bramble) == 3
    check = validate_td(g, certs.upper)
    assert check.valid and check.width == 2


def test_certificates_on_3x3_grid():
    g = grid_graph(3, 3)
    certs = treewidth_certificates(g, 3)
    assert certs.lower_grid is not None and certs.lower_grid.side == 3
    check = validate_td(g, certs.upper)
    assert check.valid and check.width == 3


def test_certificates_on_gamma2_like():
    g = gamma2_like()
    certs = treewidth_certificates(g, 3)
    assert certs.lower_grid is not None
    check = validate_td(g, certs.upper)
    assert check.valid and check.width == 3
    w, _ = exact_treewidth(g)
    assert w == certs.value


def test_certificates_not_found_on_tree():
    with pytest.raises(CertificateNotFound):
        treewidth_certificates(path_graph(6), 2)


def test_grid_subgraph_finder():
    g = grid_graph(4, 4)
    cert = find_grid_subgraph(g, 3)
    assert cert is not None
    placed = [v for row in cert.placement for v in row]
    assert len(set(placed)) == 9
    for r in range(3):
        for c in range(3):
            if c + 1 < 3:
                assert g.has_edge(cert.placement[r][c], cert.placement[r][c + 1])
            if r + 1 < 3:
                assert g.has_edge(cert.placement[r][c], cert.placement[r + 1][c])
    assert find_grid_subgraph(path_graph(9), 2) is None


# --- nice form -------------------------------------------------------------------


def _assert_nice(g, nice):
    assert validate_td(g, nice).valid
    # node 0 is an empty root; all nodes classify
    assert nice.bags[0] == frozenset()
    parent_of = {0: None}
    order = [0]
    qi = 0
    while qi < len(order):
        x = order[qi]
        qi += 1
        for y in nice.tree.neighbors(x):
            if y not in parent_of:
                parent_of[y] = x
                order.append(y)
    kinds = []
    for node in range(nice.tree.n):
        kinds.append(nice_node_kind(nice, node, parent_of)[0])
    leaves = [i for i, k in enumerate(kinds) if k == "leaf"]
    assert leaves and all(nice.bags[i] == frozenset() for i in leaves)
    return kinds


def test_nice_form_of_single_triangle_bag():
    g = complete_graph(3)
    td = TreeDecomposition(Graph(1, []), (frozenset({0, 1, 2}),))
    nice = nice_form(td)
    kinds = _assert_nice(g, nice)
    assert kinds.count("introduce") == 3
    assert nice.width() == td.width()


def test_nice_form_of_path_decomposition():
    g = path_graph(4)
    td = TreeDecomposition(
        path_graph(3),
        (frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 3})),
    )
    nice = nice_form(td)
    kinds = _assert_nice(g, nice)
    assert "introduce" in kinds and "forget" in kinds
    assert nice.width() == 1


def test_nice_form_rejects_broken_tree():
    td = TreeDecomposition(Graph(2, []), (frozenset({0}), frozenset({1})))
    with pytest.raises(InvalidDecomposition):
        nice_form(td)


def test_nice_form_preserves_width_on_random_inputs():
    rng = random.Random(17)
    for _ in range(50):
        n = rng.randint(1, 9)
        g = random_graph(n, rng.uniform(0.2, 0.8), rng)
        width, td = exact_treewidth(g)
        nice = nice_form(td)
        kinds = _assert_nice(g, nice)
        assert nice.width() == td.width()
        assert set(kinds) <= {"leaf", "introduce", "forget", "join"}


# --- text format -------------------------------------------------------------------


def test_td_format_round_trip():
    g = gamma2_like()
    width, td = exact_treewidth(g)
    text = write_td(td, g.n)
    back, n_host = parse_td(text)
    assert n_host == g.n
    assert back.bags == td.bags
    assert back.tree.edges == td.tree.edges
    assert validate_td(g, back).valid


def test_td_format_header_checks():
    with pytest.raises(InvalidDecomposition):
        parse_td("b 1 1 2\n")
    with pytest.raises(InvalidDecomposition):
        parse_td("s td 1 5 3\nb 1 1 2 3\n")
