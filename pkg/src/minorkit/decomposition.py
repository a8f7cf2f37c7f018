"""Tree decompositions, exact treewidth at small scale, certificates.

exact_treewidth runs a memoized elimination-order search, so it is reserved
for graphs of at most twenty vertices. Larger structured graphs go through
treewidth_certificates, which pins the width with a grid found as a subgraph
(lower bound) and a column-sweep path decomposition (upper bound), falling
back to a clique-minor bramble and an exact layout search when small.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

from .errors import (
    CertificateNotFound,
    InvalidDecomposition,
    SearchCapExceeded,
)
from .graphs import (
    Graph,
    mask_bits,
    mask_neighborhood,
    mask_of,
    mask_reach,
    neighbor_masks,
)
from .minors import find_minor

EXACT_VERTEX_CAP = 20
LAYOUT_VERTEX_CAP = 15


@dataclass(frozen=True)
class TreeDecomposition:
    tree: Graph
    bags: tuple  # frozenset of host vertices per tree node

    def width(self):
        return max((len(b) for b in self.bags), default=0) - 1

    def adhesion(self):
        return max(
            (len(self.bags[u] & self.bags[v]) for u, v in self.tree.edges), default=0
        )


@dataclass(frozen=True)
class Bramble:
    """Connected vertex sets, pairwise touching; order = min hitting set."""

    sets: tuple


@dataclass(frozen=True)
class TdCheck:
    valid: bool
    width: int
    adhesion: int


class AboveBound:
    """Sentinel: the graph's treewidth exceeds the caller's bound."""

    def __repr__(self):
        return "AboveBound()"


def _tree_ok(t):
    if t.n == 0 or t.m != t.n - 1:
        return False
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in t.neighbors(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == t.n


def validate_td(g, td):
    """Check the three decomposition conditions; always report width/adhesion."""
    width = td.width()
    adhesion = td.adhesion()
    if not _tree_ok(td.tree) or len(td.bags) != td.tree.n:
        return TdCheck(False, width, adhesion)
    union = set()
    for b in td.bags:
        if any(not (0 <= v < g.n) for v in b):
            return TdCheck(False, width, adhesion)
        union |= b
    if union != set(range(g.n)):
        return TdCheck(False, width, adhesion)
    for u, v in g.edges:
        if not any(u in b and v in b for b in td.bags):
            return TdCheck(False, width, adhesion)
    # nodes holding each vertex must induce a subtree
    holders = {}
    for i, b in enumerate(td.bags):
        for v in b:
            holders.setdefault(v, []).append(i)
    for v, nodes in holders.items():
        node_set = set(nodes)
        seen = {nodes[0]}
        stack = [nodes[0]]
        while stack:
            x = stack.pop()
            for y in td.tree.neighbors(x):
                if y in node_set and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != node_set:
            return TdCheck(False, width, adhesion)
    return TdCheck(True, width, adhesion)


# --- exact treewidth ----------------------------------------------------------


def _forest_decomposition(g):
    bags = []
    edges = []
    parent = {}
    seen = set()
    node_of = {}
    for r in range(g.n):
        if r in seen:
            continue
        seen.add(r)
        parent[r] = None
        order = [r]
        qi = 0
        while qi < len(order):
            v = order[qi]
            qi += 1
            for w in g.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    parent[w] = v
                    order.append(w)
        for v in order:
            if parent[v] is None:
                bags.append(frozenset({v}))
            else:
                bags.append(frozenset({v, parent[v]}))
            node_of[v] = len(bags) - 1
            if parent[v] is not None:
                edges.append((node_of[v], node_of[parent[v]]))
    # stitch tree components together so the decomposition tree is connected
    roots = [node_of[v] for v in parent if parent[v] is None]
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    if not bags:
        bags = [frozenset()]
    return TreeDecomposition(Graph(len(bags), edges), tuple(bags))


def _is_forest(g):
    return g.m == g.n - len(_components_count(g))


def _components_count(g):
    comps = []
    seen = set()
    for r in range(g.n):
        if r in seen:
            continue
        comp = {r}
        stack = [r]
        seen.add(r)
        while stack:
            v = stack.pop()
            for w in g.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def _elimination_width(g):
    """Minimum over elimination orders of the maximum elimination degree,
    with the order realizing it. Memoized over eliminated-vertex masks."""
    n = g.n
    masks = neighbor_masks(g)
    full = (1 << n) - 1
    memo = {}
    choice = {}

    def q_cost(done, v):
        reach = mask_reach(1 << v, done, masks)
        return (mask_neighborhood(reach, masks) & ~done & ~(1 << v)).bit_count()

    def f(done):
        if done == full:
            return -1
        if done in memo:
            return memo[done]
        rest = full & ~done
        # a vertex of remaining degree <= 1 is always safe to eliminate first
        forced = None
        m = rest
        while m:
            b = m & -m
            m ^= b
            v = b.bit_length() - 1
            if q_cost(done, v) <= 1:
                forced = v
                break
        cands = [forced] if forced is not None else list(mask_bits(rest))
        best = None
        best_v = None
        for v in cands:
            cost = max(q_cost(done, v), f(done | (1 << v)))
            if best is None or cost < best:
                best, best_v = cost, v
        memo[done] = best
        choice[done] = best_v
        return best

    width = f(0)
    order = []
    done = 0
    while done != full:
        v = choice[done]
        order.append(v)
        done |= 1 << v
    return width, order


def _decomposition_from_order(g, order):
    """Fill-in simulation; one bag per vertex, attached at its first
    later-eliminated fill neighbor."""
    later = {v: i for i, v in enumerate(order)}
    adj = {v: set(g.neighbors(v)) for v in range(g.n)}
    bag_of = {}
    for v in order:
        nb = {w for w in adj[v] if later[w] > later[v]}
        bag_of[v] = frozenset({v} | nb)
        for a in nb:
            for b in nb:
                if a != b:
                    adj[a].add(b)
    bags = []
    node_of = {}
    for v in order:
        node_of[v] = len(bags)
        bags.append(bag_of[v])
    edges = []
    for i, v in enumerate(order):
        rest = [w for w in bag_of[v] if w != v]
        if rest:
            first = min(rest, key=lambda w: later[w])
            edges.append((node_of[v], node_of[first]))
        elif i + 1 < len(order):
            edges.append((node_of[v], node_of[order[i + 1]]))
    if not bags:
        bags = [frozenset()]
    return TreeDecomposition(Graph(len(bags), edges), tuple(bags))


def exact_treewidth(g, upper=None):
    """(width, decomposition), or an AboveBound marker when a bound is given
    and exceeded. Exhaustive; capped at twenty vertices."""
    if g.n > EXACT_VERTEX_CAP:
        raise SearchCapExceeded(
            f"{g.n} vertices; exact treewidth is capped at {EXACT_VERTEX_CAP}"
        )
    if g.n == 0:
        td = TreeDecomposition(Graph(1, []), (frozenset(),))
        return (-1, td) if upper is None or upper >= -1 else AboveBound()
    if _is_forest(g):
        width = 1 if g.m else 0
        td = _forest_decomposition(g)
    else:
        width, order = _elimination_width(g)
        td = _decomposition_from_order(g, order)
    assert validate_td(g, td).valid and td.width() == width
    if upper is not None and width > upper:
        return AboveBound()
    return width, td


# --- brambles -----------------------------------------------------------------


def validate_bramble(g, bramble):
    masks = neighbor_masks(g)
    for s in bramble.sets:
        m = mask_of(s)
        if m == 0 or mask_reach(m & -m, m, masks) != m:
            return False
    for i, a in enumerate(bramble.sets):
        for b in bramble.sets[i + 1 :]:
            if a & b:
                continue
            if not (mask_neighborhood(mask_of(a), masks) & mask_of(b)):
                return False
    return True


def bramble_order(g, bramble):
    """Exact minimum hitting set size over the bramble's sets."""
    sets = [set(s) for s in bramble.sets]
    best = len(set().union(*sets)) if sets else 0

    def rec(remaining, chosen):
        nonlocal best
        if not remaining:
            best = min(best, chosen)
            return
        if chosen + 1 >= best:
            return
        target = min(remaining, key=len)
        for v in sorted(target):
            rec([s for s in remaining if v not in s], chosen + 1)

    rec(sets, 0)
    return best


# --- certificates ---------------------------------------------------------------


@dataclass(frozen=True)
class GridCertificate:
    """Row-major placement of an n-by-n grid subgraph."""

    side: int
    placement: tuple  # tuple of rows, each a tuple of host vertices


@dataclass(frozen=True)
class TreewidthCertificates:
    value: int
    lower_grid: GridCertificate | None
    lower_bramble: Bramble | None
    upper: TreeDecomposition


def find_grid_subgraph(g, side):
    """Rigid backtracking placement of a side-by-side grid as a subgraph."""
    if side * side > g.n:
        return None
    deg_need = [[0] * side for _ in range(side)]
    for r in range(side):
        for c in range(side):
            deg_need[r][c] = (0 < r) + (r < side - 1) + (0 < c) + (c < side - 1)
    place = [[-1] * side for _ in range(side)]
    used = [False] * g.n

    def rec(idx):
        if idx == side * side:
            return True
        r, c = divmod(idx, side)
        cands = None
        if c > 0:
            cands = set(g.neighbors(place[r][c - 1]))
        if r > 0:
            up = set(g.neighbors(place[r - 1][c]))
            cands = up if cands is None else cands & up
        if cands is None:
            cands = range(g.n)
        for v in sorted(cands):
            if used[v] or g.degree(v) < deg_need[r][c]:
                continue
            place[r][c] = v
            used[v] = True
            if rec(idx + 1):
                return True
            used[v] = False
            place[r][c] = -1
        return False

    if side >= 1 and rec(0):
        return GridCertificate(side, tuple(tuple(row) for row in place))
    return None


def _sweep_path_decomposition(g, cert):
    """Column sweep over a spanning grid placement. Endpoints of edges that
    jump columns are retained in every intermediate bag so the edge lands in
    a common bag without breaking per-vertex contiguity."""
    side = cert.side
    pos = {}
    for r in range(side):
        for c in range(side):
            pos[cert.placement[r][c]] = (r, c)
    if len(pos) != g.n:
        return None
    bag_index = {}
    bags = []
    for c in range(side - 1):
        for r in range(side):
            bag = {cert.placement[i][c] for i in range(r, side)}
            bag |= {cert.placement[i][c + 1] for i in range(r + 1)}
            bag_index[(c, r)] = len(bags)
            bags.append(set(bag))
    if side == 1:
        bags = [set(pos)]
        bag_index[(0, 0)] = 0
    grid_pairs = set()
    for r in range(side):
        for c in range(side):
            if c + 1 < side:
                grid_pairs.add(
                    frozenset({cert.placement[r][c], cert.placement[r][c + 1]})
                )
            if r + 1 < side:
                grid_pairs.add(
                    frozenset({cert.placement[r][c], cert.placement[r + 1][c]})
                )
    for u, v in sorted(g.edges):
        if frozenset({u, v}) in grid_pairs:
            continue
        (ru, cu), (rv, cv) = pos[u], pos[v]
        if cu > cv or (cu == cv and ru > rv):
            (u, v), (ru, cu), (rv, cv) = (v, u), (rv, cv), (ru, cu)
        if cu == cv:
            c_full = cu if cu < side - 1 else side - 2
            target = bag_index[(c_full, side - 1 if cu == side - 1 else 0)]
            if not ({u, v} <= bags[target]):
                last = max(i for i, b in enumerate(bags) if u in b)
                lo, hi = min(last, target), max(last, target)
                for i in range(lo, hi + 1):
                    bags[i].add(u)
            continue
        target = bag_index[(cv - 1, rv)]
        last_u = max(i for i, b in enumerate(bags) if u in b)
        for i in range(min(last_u, target), max(last_u, target) + 1):
            bags[i].add(u)
    edges = [(i, i + 1) for i in range(len(bags) - 1)]
    return TreeDecomposition(
        Graph(len(bags), edges), tuple(frozenset(b) for b in bags)
    )


def _exact_path_decomposition(g):
    """Optimal vertex layout by subset search, turned into a path of bags."""
    n = g.n
    if n == 0:
        return TreeDecomposition(Graph(1, []), (frozenset(),))
    masks = neighbor_masks(g)
    full = (1 << n) - 1
    memo = {}
    choice = {}

    def f(placed):
        if placed == full:
            return 0
        if placed in memo:
            return memo[placed]
        # the next bag is the new vertex plus the boundary of the prefix,
        # whichever vertex comes next
        size = 1
        p = placed
        while p:
            pb = p & -p
            p ^= pb
            if masks[pb.bit_length() - 1] & ~placed:
                size += 1
        best = None
        best_v = None
        m = placed ^ full
        while m:
            b = m & -m
            m ^= b
            v = b.bit_length() - 1
            cost = max(size, f(placed | b))
            if best is None or cost < best:
                best, best_v = cost, v
        memo[placed] = best
        choice[placed] = best_v
        return best

    f(0)
    order = []
    placed = 0
    while placed != full:
        v = choice[placed]
        order.append(v)
        placed |= 1 << v
    pos_of = {v: i for i, v in enumerate(order)}
    last_nbr = [
        max((pos_of[w] for w in g.neighbors(v)), default=pos_of[v]) for v in range(n)
    ]
    bags = []
    for i in range(n):
        bag = {order[i]}
        for j in range(i):
            if last_nbr[order[j]] >= i:
                bag.add(order[j])
        bags.append(frozenset(bag))
    edges = [(i, i + 1) for i in range(len(bags) - 1)]
    return TreeDecomposition(Graph(len(bags), edges), tuple(bags))


def treewidth_certificates(g, n):
    """Certificates pinning tw(g) = n without exhaustive search.

    Lower side: an n-by-n grid subgraph, else a clique minor giving a bramble
    of n+1 disjoint pairwise-touching sets. Upper side: a width-n path
    decomposition, by column sweep when the grid spans the graph, else by
    exact layout search on small graphs.
    """
    grid_cert = find_grid_subgraph(g, n) if n >= 2 else None
    bramble = None
    if grid_cert is None:
        model = None
        if n + 1 <= 12:
            clique = Graph(n + 1, [(i, j) for i in range(n + 1) for j in range(i + 1, n + 1)])
            model = find_minor(g, clique)
        if model is None:
            raise CertificateNotFound(f"no lower-bound certificate for width {n}")
        bramble = Bramble(tuple(model.branch_sets))
        assert validate_bramble(g, bramble)
        assert bramble_order(g, bramble) == n + 1
    upper = None
    if grid_cert is not None:
        upper = _sweep_path_decomposition(g, grid_cert)
        if upper is not None and (
            not validate_td(g, upper).valid or upper.width() != n
        ):
            upper = None
    if upper is None:
        if g.n > LAYOUT_VERTEX_CAP:
            raise CertificateNotFound(
                f"no upper-bound certificate for width {n}: graph too large for layout search"
            )
        upper = _exact_path_decomposition(g)
        if not validate_td(g, upper).valid or upper.width() != n:
            raise CertificateNotFound(
                f"no width-{n} path decomposition found (best {upper.width()})"
            )
    return TreewidthCertificates(
        value=n, lower_grid=grid_cert, lower_bramble=bramble, upper=upper
    )


# --- nice form ------------------------------------------------------------------


def nice_form(td):
    """Rooted normal form: node 0 is an empty root; every node is an empty
    leaf, an introduce (child bag plus one vertex), a forget (child bag minus
    one vertex), or a join of two children with identical bags."""
    if not _tree_ok(td.tree) or len(td.bags) != td.tree.n:
        raise InvalidDecomposition("input tree is not a connected tree")
    bags_out = []
    edges_out = []

    def new_node(bag):
        bags_out.append(frozenset(bag))
        return len(bags_out) - 1

    def chain_to(bag_from, node_from, bag_to):
        cur_bag = set(bag_from)
        cur = node_from
        for v in sorted(bag_from - bag_to, reverse=True):
            cur_bag.discard(v)
            nxt = new_node(cur_bag)
            edges_out.append((cur, nxt))
            cur = nxt
        for v in sorted(bag_to - cur_bag):
            cur_bag.add(v)
            nxt = new_node(cur_bag)
            edges_out.append((cur, nxt))
            cur = nxt
        return cur

    def introduce_chain(bag):
        cur = new_node(frozenset())
        cur_bag = set()
        for v in sorted(bag):
            cur_bag.add(v)
            nxt = new_node(cur_bag)
            edges_out.append((cur, nxt))
            cur = nxt
        return cur

    parent = {0: None}
    order = [0]
    qi = 0
    while qi < len(order):
        x = order[qi]
        qi += 1
        for y in td.tree.neighbors(x):
            if y not in parent:
                parent[y] = x
                order.append(y)

    def build(node):
        kids = [y for y in td.tree.neighbors(node) if parent.get(y) == node]
        bag = td.bags[node]
        if not kids:
            return introduce_chain(bag)
        branch_tops = []
        for y in kids:
            top = build(y)
            branch_tops.append(chain_to(td.bags[y], top, bag))
        acc = branch_tops[0]
        for other in branch_tops[1:]:
            join = new_node(bag)
            edges_out.append((acc, join))
            edges_out.append((other, join))
            acc = join
        return acc

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * td.tree.n + 100))
    try:
        top = build(0)
    finally:
        sys.setrecursionlimit(old_limit)
    root = chain_to(td.bags[0], top, frozenset())
    # renumber so the root is node 0, children increasing outward
    adj = {}
    for a, b in edges_out:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    rank = {root: 0}
    queue = [root]
    qi = 0
    while qi < len(queue):
        x = queue[qi]
        qi += 1
        for y in adj.get(x, []):
            if y not in rank:
                rank[y] = len(rank)
                queue.append(y)
    n_out = len(bags_out)
    bags_final = [frozenset()] * n_out
    for old, new in rank.items():
        bags_final[new] = bags_out[old]
    edges_final = [(rank[a], rank[b]) for a, b in edges_out]
    return TreeDecomposition(Graph(n_out, edges_final), tuple(bags_final))


def nice_node_kind(td, node, parent_of):
    """Classify a node of a nice decomposition: leaf / introduce / forget / join."""
    kids = [y for y in td.tree.neighbors(node) if parent_of.get(node) != y]
    if not kids:
        return ("leaf", None)
    if len(kids) == 2:
        return ("join", None)
    (child,) = kids
    cb, b = td.bags[child], td.bags[node]
    if len(b) == len(cb) + 1 and cb < b:
        (v,) = tuple(b - cb)
        return ("introduce", v)
    if len(b) == len(cb) - 1 and b < cb:
        (v,) = tuple(cb - b)
        return ("forget", v)
    raise InvalidDecomposition(f"node {node} is not in nice form")


# --- text format -----------------------------------------------------------------


def write_td(td, n_host):
    """The common .td text convention; ids and vertices are 1-based on disk."""
    lines = [f"s td {td.tree.n} {td.width() + 1} {n_host}"]
    for i, bag in enumerate(td.bags):
        parts = " ".join(str(v + 1) for v in sorted(bag))
        lines.append(f"b {i + 1} {parts}".rstrip())
    for u, v in sorted(td.tree.edges):
        lines.append(f"{u + 1} {v + 1}")
    return "\n".join(lines) + "\n"


def parse_td(text):
    """Inverse of write_td. Returns (decomposition, host vertex count)."""
    header = None
    bags = {}
    edges = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("s td"):
            parts = line.split()
            if len(parts) != 5:
                raise InvalidDecomposition(f"bad header: {line!r}")
            header = (int(parts[2]), int(parts[3]), int(parts[4]))
        elif line.startswith("b "):
            parts = line.split()
            bags[int(parts[1]) - 1] = frozenset(int(x) - 1 for x in parts[2:])
        else:
            a, b = line.split()
            edges.append((int(a) - 1, int(b) - 1))
    if header is None:
        raise InvalidDecomposition("missing s td header")
    n_bags, width_plus, n_host = header
    if set(bags) != set(range(n_bags)):
        raise InvalidDecomposition("bag ids do not cover 1..#bags")
    td = TreeDecomposition(Graph(n_bags, edges), tuple(bags[i] for i in range(n_bags)))
    if td.width() + 1 != width_plus:
        raise InvalidDecomposition(
            f"header claims width {width_plus - 1}, bags give {td.width()}"
        )
    return td, n_host
