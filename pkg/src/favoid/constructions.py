"""Rooted-graph algebra: products, root-joins, the recursively built classes
of forced structures, dangerous colorings, and spanning-subgraph checking.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .densities import balancedness, m2, m2_bar
from .graphs import (
    Graph,
    RootedGraph,
    SizeExceededError,
    _count_embeddings_adj,
    _norm_edge,
    rooted_canonical_form,
    rooted_isomorphic,
)

MAX_CLASS_DEPTH = 4
MAX_REALIZED_VERTICES = 64
MAX_SPANNING_EDGES = 12


class SizeExplosionError(RuntimeError):
    """Construction grew past the vertex budget; carries the partial count."""

    def __init__(self, message: str, partial_count: int):
        super().__init__(message)
        self.partial_count = partial_count


@dataclass(frozen=True)
class FMinusHandle:
    """One designated copy of the pattern minus its root edge, addressed by
    its vertex images (pattern order) and edge images in the realized graph."""

    vertices: tuple[int, ...]
    edges: frozenset[tuple[int, int]]


@dataclass(frozen=True)
class ConstructionTree:
    """How a realized member of a forced class was built.

    kind is "leaf" (the rooted edge), "product" (a base pattern with one
    attachment per non-root edge) or "join" (branches glued at the roots).
    `designated` lists, for a class member at level k, the k-1 copies of the
    de-rooted pattern glued at the roots during construction.
    """

    kind: str
    level: int
    realized: RootedGraph
    base: RootedGraph | None = None
    attachments: tuple[tuple[tuple[int, int], "ConstructionTree"], ...] = ()
    branches: tuple["ConstructionTree", ...] = ()
    designated: tuple[FMinusHandle, ...] = ()


@dataclass(frozen=True)
class EdgeColoring:
    """Edge -> color map with colors drawn from 1..r."""

    colors: dict
    r: int

    def __post_init__(self):
        object.__setattr__(
            self, "colors", {_norm_edge(*e): c for e, c in self.colors.items()}
        )
        for e, c in self.colors.items():
            if not 1 <= c <= self.r:
                raise ValueError(f"color {c} of edge {e} outside 1..{self.r}")


def drop_root_edges(rg: RootedGraph) -> RootedGraph:
    """Remove every edge lying inside the root set."""
    return RootedGraph(
        Graph(rg.graph.vertex_count, rg.graph.edges - rg.root_internal_edges()),
        rg.roots,
    )


def _rooted_product_with_maps(rg: RootedGraph, attach: RootedGraph):
    if len(attach.roots) != 2:
        raise ValueError("attachment must have exactly two roots")
    g = rg.graph
    root_set = rg.root_set
    ag = attach.graph
    ar0, ar1 = attach.roots
    root_edge_kept = ag.has_edge(ar0, ar1)
    attach_others = [v for v in range(ag.vertex_count) if v not in (ar0, ar1)]

    edges = [e for e in g.edges if e[0] in root_set and e[1] in root_set]
    non_root_edges = sorted(
        e for e in g.edges if not (e[0] in root_set and e[1] in root_set)
    )
    next_id = g.vertex_count
    maps = []
    for u, w in non_root_edges:
        # lexicographic orientation: first attachment root to the smaller end
        vmap = {ar0: u, ar1: w}
        for o in attach_others:
            vmap[o] = next_id
            next_id += 1
        if root_edge_kept:
            edges.append((u, w))
        for x, y in ag.edges:
            if {x, y} == {ar0, ar1}:
                continue
            edges.append(_norm_edge(vmap[x], vmap[y]))
        maps.append(((u, w), vmap))
    return RootedGraph(Graph.of(next_id, edges), rg.roots), maps


def rooted_product(rg: RootedGraph, attach: RootedGraph) -> RootedGraph:
    """Attach a fresh copy of `attach` along every non-root edge of `rg`,
    keeping the replaced edge iff the attachment has its root edge."""
    return _rooted_product_with_maps(rg, attach)[0]


def _root_pattern(part: RootedGraph) -> frozenset[tuple[int, int]]:
    pos = {r: i for i, r in enumerate(part.roots)}
    return frozenset(
        _norm_edge(pos[u], pos[w]) for u, w in part.root_internal_edges()
    )


def _root_join_with_maps(parts):
    parts = list(parts)
    if not parts:
        raise ValueError("root_join needs at least one part")
    arity = len(parts[0].roots)
    pattern = _root_pattern(parts[0])
    for p in parts[1:]:
        if len(p.roots) != arity or _root_pattern(p) != pattern:
            raise ValueError("parts disagree on their root-induced graphs")
    edges = [(i, j) for i, j in pattern]
    next_id = arity
    maps = []
    for p in parts:
        vmap = {r: i for i, r in enumerate(p.roots)}
        for v in range(p.graph.vertex_count):
            if v not in vmap:
                vmap[v] = next_id
                next_id += 1
        internal = p.root_internal_edges()
        for e in p.graph.edges:
            if e in internal:
                continue
            edges.append(_norm_edge(vmap[e[0]], vmap[e[1]]))
        maps.append(vmap)
    return RootedGraph(Graph.of(next_id, edges), tuple(range(arity))), maps


def root_join(parts) -> RootedGraph:
    """Glue disjoint copies of the parts along their (agreeing) roots;
    root-internal edges are kept once."""
    return _root_join_with_maps(parts)[0]


def _validate_class_inputs(pattern: Graph, root_edge: tuple[int, int]):
    root_edge = _norm_edge(*root_edge)
    if root_edge not in pattern.edges:
        raise ValueError(f"{root_edge} is not an edge of the pattern")
    if pattern.is_forest():
        raise ValueError("pattern must contain a cycle")
    if not balancedness(pattern).two_balanced:
        raise ValueError("pattern must be 2-balanced")
    if not m2(pattern.remove_edge(*root_edge)).value <= m2_bar(pattern, 2).value:
        raise ValueError("chosen edge does not witness the density premise")
    return root_edge


def enumerate_Fk(
    pattern: Graph,
    root_edge: tuple[int, int],
    k: int,
    *,
    dedup: bool = True,
    max_vertices: int = MAX_REALIZED_VERTICES,
) -> list[ConstructionTree]:
    """All members of the k-th forced class for the pattern rooted at
    `root_edge`: level 1 is the single rooted edge, level k >= 2 joins k-1
    products of the rooted pattern with members of strictly lower levels.

    Members are deduplicated by root-preserving isomorphism of the realized
    graphs unless `dedup` is false (then every construction tree is returned).
    """
    root_edge = _validate_class_inputs(pattern, root_edge)
    if not 1 <= k <= MAX_CLASS_DEPTH:
        raise SizeExceededError(f"class level must be in 1..{MAX_CLASS_DEPTH}")
    base = RootedGraph(pattern, root_edge)

    leaf = ConstructionTree(
        kind="leaf",
        level=1,
        realized=RootedGraph(Graph.of(2, [(0, 1)]), (0, 1)),
    )
    classes: dict[int, list[ConstructionTree]] = {1: [leaf]}
    for level in range(2, k + 1):
        options = []
        for i in range(1, level):
            pool = []
            for j in range(1, i + 1):
                pool.extend(classes[j])
            options.append(pool)
        members = []
        for combo in itertools.product(*options):
            members.append(
                _build_member(base, combo, level, max_vertices, len(members))
            )
        classes[level] = _dedup_members(members) if dedup else members
    return classes[k]


def _build_member(base, combo, level, max_vertices, partial_count):
    branches = []
    for sub in combo:
        prod, _ = _rooted_product_with_maps(base, sub.realized)
        branches.append(
            ConstructionTree(
                kind="product",
                level=level,
                realized=prod,
                base=base,
                attachments=tuple(
                    (e, sub)
                    for e in sorted(
                        e
                        for e in base.graph.edges
                        if not (e[0] in base.root_set and e[1] in base.root_set)
                    )
                ),
            )
        )
    joined, maps = _root_join_with_maps([b.realized for b in branches])
    if joined.graph.vertex_count > max_vertices:
        raise SizeExplosionError(
            f"realized member exceeds {max_vertices} vertices "
            f"(after {partial_count} members)",
            partial_count,
        )
    root_edge_pair = tuple(sorted(base.roots))
    f_minus_edges = base.graph.edges - {root_edge_pair}
    designated = []
    for vmap in maps:
        designated.append(
            FMinusHandle(
                vertices=tuple(vmap[v] for v in range(base.graph.vertex_count)),
                edges=frozenset(
                    _norm_edge(vmap[u], vmap[w]) for u, w in f_minus_edges
                ),
            )
        )
    return ConstructionTree(
        kind="join",
        level=level,
        realized=joined,
        branches=tuple(branches),
        designated=tuple(designated),
    )


def _dedup_members(members):
    kept: list[ConstructionTree] = []
    small_labels: dict[bytes, int] = {}
    for t in members:
        g = t.realized.graph
        if g.vertex_count <= 16:
            label = rooted_canonical_form(t.realized)
            if label in small_labels:
                continue
            small_labels[label] = len(kept)
            kept.append(t)
        else:
            if any(
                rooted_isomorphic(t.realized, other.realized)
                for other in kept
                if other.realized.graph.vertex_count == g.vertex_count
            ):
                continue
            kept.append(t)
    kept.sort(key=lambda t: (t.realized.graph.vertex_count, t.realized.graph.edge_count))
    return kept


def densest_member(members) -> ConstructionTree:
    """Member with the most realized edges (class members share their
    2-density, so edges decide); ties broken by canonical label."""
    if not members:
        raise ValueError("no members")

    def key(t: ConstructionTree):
        g = t.realized.graph
        label = (
            rooted_canonical_form(t.realized)
            if g.vertex_count <= 16
            else bytes([255]) + bytes(str(sorted(g.edges)), "ascii")
        )
        return (-g.edge_count, label)

    return min(members, key=key)


def is_dangerous(tree: ConstructionTree, coloring: EdgeColoring) -> bool:
    """Whether the coloring of the realized member minus its root edges makes
    all designated de-rooted copies monochromatic in pairwise distinct colors.
    """
    realized = tree.realized
    minus_edges = realized.graph.edges - realized.root_internal_edges()
    if set(coloring.colors) != set(minus_edges):
        raise ValueError("coloring domain must be exactly the de-rooted edges")
    seen = []
    for handle in tree.designated:
        cs = {coloring.colors[e] for e in handle.edges}
        if len(cs) != 1:
            return False
        seen.append(cs.pop())
    return len(set(seen)) == len(seen)


def is_fstar_spanning(
    host: Graph,
    subgraph_edges,
    fstar: RootedGraph,
    *,
    max_candidates: int = 20000,
) -> bool:
    """Whether every edge of the chosen subgraph extends to its own copy of
    `fstar` rooted at the edge, copies pairwise edge-disjoint with all their
    non-root vertices outside the subgraph's vertex set.  Exact backtracking.
    """
    edges = sorted(_norm_edge(*e) for e in subgraph_edges)
    if len(edges) > MAX_SPANNING_EDGES:
        raise SizeExceededError(f"at most {MAX_SPANNING_EDGES} subgraph edges")
    for e in edges:
        if e not in host.edges:
            raise ValueError(f"subgraph edge {e} not in host")
    vsub = frozenset(v for e in edges for v in e)
    minus = drop_root_edges(fstar)
    pat = minus.graph
    pat_edges = sorted(pat.edges)
    adj = host.adjacency()
    n = host.vertex_count

    candidate_sets: list[list[frozenset]] = []
    for u, w in edges:
        found = set()

        def collect(mapping):
            found.add(
                frozenset(_norm_edge(mapping[a], mapping[b]) for a, b in pat_edges)
            )

        for anchor in ((u, w), (w, u)):
            cnt, _ = _count_embeddings_adj(
                adj,
                n,
                pat,
                pin={minus.roots[0]: anchor[0], minus.roots[1]: anchor[1]},
                forbidden=vsub,
                collector=collect,
                limit=max_candidates,
            )
            if cnt >= max_candidates:
                raise SizeExceededError("too many rooted copies per edge")
        if not found:
            return False
        candidate_sets.append(sorted(found, key=sorted))

    order = sorted(range(len(edges)), key=lambda i: len(candidate_sets[i]))
    used: set = set()

    def place(i: int) -> bool:
        if i == len(order):
            return True
        for cand in candidate_sets[order[i]]:
            if used & cand:
                continue
            used.update(cand)
            if place(i + 1):
                return True
            used.difference_update(cand)
        return False

    return place(0)
