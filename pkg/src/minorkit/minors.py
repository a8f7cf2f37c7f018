"""Minor models and their rooted and red variants, plus canonical codes.

One branch-set search engine drives all three minor tests. It grows branch
sets one host vertex at a time in a canonical order (each candidate set is
enumerated exactly once, seeded at its minimum vertex), finalizes pattern
vertices in a fixed placement order, and prunes on reachability, liveness of
future pattern edges, and red-vertex counting. Rooted and red searches are
the same engine with per-branch-set admissibility constraints.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import RootCountMismatch, SearchCapExceeded
from .graphs import (
    Graph,
    RootedGraph,
    mask_bits as _bits,
    mask_connected as _mask_connected,
    mask_neighborhood as _nbhood,
    mask_of as _mask_of,
    mask_reach as _reach_in,
    neighbor_masks,
)

DEFAULT_PATTERN_CAP = 12


@dataclass(frozen=True)
class MinorModel:
    """Branch sets indexed by pattern vertex."""

    branch_sets: tuple

    def as_dict(self):
        return dict(enumerate(self.branch_sets))


def verify_minor_model(host, pattern, model):
    """All three invariants: disjoint connected non-empty sets, edges covered."""
    bs = model.branch_sets
    if len(bs) != pattern.n:
        return False
    seen = set()
    for s in bs:
        if not s:
            return False
        for v in s:
            if not (0 <= v < host.n) or v in seen:
                return False
            seen.add(v)
    masks = neighbor_masks(host)
    for s in bs:
        if not _mask_connected(_mask_of(s), masks):
            return False
    for u, v in pattern.edges:
        if not any(host.has_edge(a, b) for a in bs[u] for b in bs[v]):
            return False
    return True


def _placement_order(pattern, required):
    """Required-first, then greedily attach to the chosen prefix."""
    n = pattern.n
    placed = [False] * n
    order = []
    for _ in range(n):
        best = None
        best_key = None
        for v in range(n):
            if placed[v]:
                continue
            attach = sum(1 for w in pattern.neighbors(v) if placed[w])
            key = (1 if required[v] else 0, attach, pattern.degree(v), -v)
            if best_key is None or key > best_key:
                best, best_key = v, key
        order.append(best)
        placed[best] = True
    return order


def _exists_constraint_auto(pattern, required, a, b):
    """Is there an automorphism of pattern with a -> b preserving `required`?"""
    n = pattern.n

    def compatible(v, w, img):
        if required[v] != required[w]:
            return False
        if pattern.degree(v) != pattern.degree(w):
            return False
        for u in range(n):
            if img[u] != -1 and pattern.has_edge(u, v) != pattern.has_edge(img[u], w):
                return False
        return True

    img = [-1] * n
    used = [False] * n
    if not compatible(a, b, img):
        return False
    img[a] = b
    used[b] = True
    rest = [v for v in range(n) if v != a]

    def rec(k):
        if k == len(rest):
            return True
        v = rest[k]
        for w in range(n):
            if used[w] or not compatible(v, w, img):
                continue
            img[v] = w
            used[w] = True
            if rec(k + 1):
                return True
            img[v] = -1
            used[w] = False
        return False

    return rec(0)


def _search_model(host, pattern, required=None, red_mask=None, pattern_cap=DEFAULT_PATTERN_CAP):
    """Core engine. `required[p]` is a host mask that branch set p must contain;
    `red_mask`, when not None, forces every branch set to intersect it.
    Returns a MinorModel or None."""
    hp = pattern.n
    if hp > pattern_cap:
        raise SearchCapExceeded(f"pattern has {hp} vertices, cap is {pattern_cap}")
    required = list(required) if required else [0] * hp
    if hp == 0:
        return MinorModel(())
    if host.n == 0:
        return None
    taken = 0
    for msk in required:
        if msk & taken:
            return None  # two pattern vertices demand the same host vertex
        taken |= msk

    masks = neighbor_masks(host)
    order = _placement_order(pattern, required)
    pos = {v: i for i, v in enumerate(order)}
    req_at = [required[order[i]] for i in range(hp)]
    earlier_nbrs = [
        [pos[w] for w in pattern.neighbors(order[i]) if pos[w] < i] for i in range(hp)
    ]
    nbr_pos = [sorted(pos[w] for w in pattern.neighbors(order[i])) for i in range(hp)]
    host_deg = [host.degree(v) for v in range(host.n)]
    # suffix union of still-unplaced required masks, for an O(1) feasibility check
    suffix_req = [0] * (hp + 1)
    for i in range(hp - 1, -1, -1):
        suffix_req[i] = suffix_req[i + 1] | req_at[i]

    # symmetry: the branch set of the first placed vertex takes the smallest
    # seed among its automorphism orbit
    orbit_rule = set()
    if req_at[0] == 0:
        v0 = order[0]
        for w in range(hp):
            if w != v0 and _exists_constraint_auto(pattern, required, v0, w):
                orbit_rule.add(pos[w])

    sets_ = [0] * hp
    nb_ = [0] * hp

    def place(i, free):
        if i == hp:
            return True
        if red_mask is not None and (hp - i) > (free & red_mask).bit_count():
            return False
        req = req_at[i]
        if req & ~free:
            return False
        if req:
            return extend(i, req, free & ~req, 0)
        floor = sets_[0] & -sets_[0] if i in orbit_rule else 0
        # a set is enumerated only from its minimum vertex (everything smaller
        # is banned inside that subtree), so seed trial order is free to be a
        # heuristic: prefer hosts whose degree can carry the pattern degree
        deg_i = pattern.degree(order[i])
        seeds = sorted(
            _bits(free), key=lambda v: (host_deg[v] < deg_i, -host_deg[v], v)
        )
        for v in seeds:
            b = 1 << v
            if b <= floor:
                continue
            if extend(i, b, free & ~b, b - 1):
                return True
        return False

    def extend(i, cur, rest, banned):
        usable = rest & ~banned
        pending = [j for j in earlier_nbrs[i] if not (nb_[j] & cur)]
        need_red = red_mask is not None and not (cur & red_mask)
        reach = _reach_in(cur & -cur, cur | usable, masks)
        if cur & ~reach:
            return False  # required seeds cannot all be connected up
        if need_red and not (reach & red_mask):
            return False
        for j in pending:
            if not (reach & nb_[j]):
                return False
        if not pending and not need_red and _mask_connected(cur, masks):
            if finalize(i, cur, rest):
                return True
        cand = _nbhood(cur, masks) & usable
        b_ban = banned
        while cand:
            b = cand & -cand
            cand ^= b
            if extend(i, cur | b, rest & ~b, b_ban):
                return True
            b_ban |= b
        return False

    def finalize(i, cur, rest):
        if suffix_req[i + 1] & ~rest:
            return False
        sets_[i] = cur
        nb_[i] = _nbhood(cur, masks)
        ok = True
        for j in range(i + 1):
            # every later pattern neighbor of j needs its own attachment
            # vertex in N(B_j), and those vertices are pairwise distinct
            need = sum(1 for p in nbr_pos[j] if p > i)
            if need and (nb_[j] & rest).bit_count() < need:
                ok = False
                break
        if ok and place(i + 1, rest):
            return True
        sets_[i] = 0
        nb_[i] = 0
        return False

    full = (1 << host.n) - 1
    if not place(0, full):
        return None
    model_sets = [frozenset()] * hp
    for i, v in enumerate(order):
        model_sets[v] = frozenset(_bits(sets_[i]))
    return MinorModel(tuple(model_sets))


def find_minor(host, pattern, pattern_cap=DEFAULT_PATTERN_CAP):
    """A minor model of pattern in host, or None. Exhaustive under the cap."""
    return _search_model(host, pattern, pattern_cap=pattern_cap)


def find_rooted_minor(host, pattern, pattern_cap=DEFAULT_PATTERN_CAP):
    """Rooted minor: host root i must land in the branch set of pattern root i."""
    if len(host.roots) != len(pattern.roots):
        raise RootCountMismatch(
            f"host has {len(host.roots)} roots, pattern {len(pattern.roots)}"
        )
    required = [0] * pattern.graph.n
    for hr, pr in zip(host.roots, pattern.roots):
        required[pr] |= 1 << hr
    return _search_model(
        host.graph, pattern.graph, required=required, pattern_cap=pattern_cap
    )


def find_red_minor(host, pattern, pattern_cap=DEFAULT_PATTERN_CAP):
    """Minor model in which every branch set meets the annotated set."""
    red_mask = _mask_of(host.annotated)
    return _search_model(
        host.graph, pattern, red_mask=red_mask, pattern_cap=pattern_cap
    )


def _square_grid(k):
    edges = []
    for r in range(k):
        for c in range(k):
            v = r * k + c
            if c + 1 < k:
                edges.append((v, v + 1))
            if r + 1 < k:
                edges.append((v, v + k))
    return Graph(k * k, edges)


def bidim(host, cap, pattern_cap=None):
    """Largest k <= cap such that the k-by-k grid is a red minor of host.

    Returns cap itself when the search still succeeds there; the caller then
    knows only a lower bound. The engine cap is raised to cap*cap so that the
    requested range is actually searchable.
    """
    red = host.annotated
    if not red:
        return 0
    best = 0
    for k in range(1, cap + 1):
        pc = pattern_cap if pattern_cap is not None else max(DEFAULT_PATTERN_CAP, k * k)
        if find_red_minor(host, _square_grid(k), pattern_cap=pc) is None:
            break
        best = k
    return best


# ---------------------------------------------------------------------------
# Canonical codes for rooted graphs.


def _refine(g, colors):
    n = g.n
    while True:
        keys = [
            (colors[v], tuple(sorted(colors[w] for w in g.neighbors(v))))
            for v in range(n)
        ]
        ranking = {k: i for i, k in enumerate(sorted(set(keys)))}
        fresh = [ranking[keys[v]] for v in range(n)]
        if fresh == colors:
            return colors
        colors = fresh


def canonical_form(rg, cap=20):
    """Canonical relabeling of a rooted graph.

    Returns (canonical RootedGraph, signature tuple). Two rooted graphs get
    the same signature exactly when a rooted isomorphism (roots fixed
    pointwise by position) exists between them. Individualization plus color
    refinement, exact, sized for folio members and gadget-scale graphs.
    """
    g = rg.graph
    if g.n > cap:
        raise SearchCapExceeded(f"{g.n} vertices, canonical cap is {cap}")
    position_sig = [
        tuple(i for i, r in enumerate(rg.roots) if r == v) for v in range(g.n)
    ]
    ranking = {k: i for i, k in enumerate(sorted(set(position_sig)))}
    colors0 = [ranking[position_sig[v]] for v in range(g.n)]
    best = None

    def leaf(colors):
        nonlocal best
        roots_img = tuple(colors[r] for r in rg.roots)
        edges_img = tuple(
            sorted(
                (min(colors[u], colors[v]), max(colors[u], colors[v]))
                for u, v in g.edges
            )
        )
        sig = (g.n, roots_img, edges_img)
        if best is None or sig < best:
            best = sig

    def rec(colors):
        colors = _refine(g, colors)
        cell = None
        for c in sorted(set(colors)):
            members = [v for v in range(g.n) if colors[v] == c]
            if len(members) > 1:
                cell = members
                break
        if cell is None:
            leaf(colors)
            return
        for v in cell:
            keyed = [(colors[u], 0 if u == v else 1) for u in range(g.n)]
            rk = {k: i for i, k in enumerate(sorted(set(keyed)))}
            rec([rk[keyed[u]] for u in range(g.n)])

    rec(colors0)
    n, roots_img, edges_img = best
    return RootedGraph(Graph(n, edges_img), roots_img), best


def canonical_code(rg, cap=20):
    """Byte string; equal exactly for rooted-isomorphic inputs."""
    _, sig = canonical_form(rg, cap=cap)
    return repr(sig).encode("ascii")


def isomorphic(g1, g2, cap=20):
    """Plain graph isomorphism at gadget scale, via canonical codes."""
    if g1.n != g2.n or g1.m != g2.m:
        return False
    if sorted(g1.degree(v) for v in g1.vertices()) != sorted(
        g2.degree(v) for v in g2.vertices()
    ):
        return False
    return canonical_code(RootedGraph(g1, ())) == canonical_code(
        RootedGraph(g2, ()), cap=cap
    )
