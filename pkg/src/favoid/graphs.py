"""Small-graph machinery: graphs, rooted graphs, canonical labels, enumeration,
and exact subgraph/rooted-copy counting.

Graphs are immutable and hashable.  All counting here is exact; hosts may be
large (game boards) but then only local, anchored counts are ever requested.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

MAX_CANONICAL_VERTICES = 16
MAX_PATTERN_VERTICES = 10
MAX_ENUMERATION_VERTICES = 7


class SizeExceededError(ValueError):
    """Input exceeds the documented guard of an exact routine."""


def _norm_edge(u: int, w: int) -> tuple[int, int]:
    if u == w:
        raise ValueError(f"loop edge ({u},{w}) not allowed")
    return (u, w) if u < w else (w, u)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 0..vertex_count-1."""

    vertex_count: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be nonnegative")
        for u, w in self.edges:
            if not (0 <= u < w < self.vertex_count):
                raise ValueError(f"bad edge ({u},{w}) for n={self.vertex_count}")

    @staticmethod
    def of(vertex_count: int, pairs=()) -> "Graph":
        return Graph(vertex_count, frozenset(_norm_edge(u, w) for u, w in pairs))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, w: int) -> bool:
        return _norm_edge(u, w) in self.edges

    def add_edge(self, u: int, w: int) -> "Graph":
        return Graph(self.vertex_count, self.edges | {_norm_edge(u, w)})

    def remove_edge(self, u: int, w: int) -> "Graph":
        e = _norm_edge(u, w)
        if e not in self.edges:
            raise ValueError(f"edge {e} not present")
        return Graph(self.vertex_count, self.edges - {e})

    def adjacency(self) -> tuple[frozenset[int], ...]:
        return _adjacency(self)

    def adjacency_masks(self) -> tuple[int, ...]:
        return _adjacency_masks(self)

    def degree(self, v: int) -> int:
        return len(self.adjacency()[v])

    def degree_sequence(self) -> tuple[int, ...]:
        return tuple(sorted(len(a) for a in self.adjacency()))

    def induced(self, vertices) -> "Graph":
        """Induced subgraph, relabeled to 0..k-1 in sorted vertex order."""
        verts = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(verts)}
        edges = [(pos[u], pos[w]) for u, w in self.edges if u in pos and w in pos]
        return Graph.of(len(verts), edges)

    def relabeled(self, perm) -> "Graph":
        """Apply the permutation v -> perm[v] to vertex labels."""
        return Graph.of(self.vertex_count, [(perm[u], perm[w]) for u, w in self.edges])

    def is_connected(self) -> bool:
        n = self.vertex_count
        if n <= 1:
            return True
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == n

    def is_forest(self) -> bool:
        n = self.vertex_count
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, w in self.edges:
            ru, rw = find(u), find(w)
            if ru == rw:
                return False
            parent[ru] = rw
        return True


@lru_cache(maxsize=8192)
def _adjacency(g: Graph) -> tuple[frozenset[int], ...]:
    adj = [set() for _ in range(g.vertex_count)]
    for u, w in g.edges:
        adj[u].add(w)
        adj[w].add(u)
    return tuple(frozenset(a) for a in adj)


@lru_cache(maxsize=8192)
def _adjacency_masks(g: Graph) -> tuple[int, ...]:
    masks = [0] * g.vertex_count
    for u, w in g.edges:
        masks[u] |= 1 << w
        masks[w] |= 1 << u
    return tuple(masks)


@dataclass(frozen=True)
class RootedGraph:
    """Graph with an ordered list of distinguished root vertices."""

    graph: Graph
    roots: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(self.roots))
        if len(set(self.roots)) != len(self.roots):
            raise ValueError("roots must be distinct")
        for r in self.roots:
            if not 0 <= r < self.graph.vertex_count:
                raise ValueError(f"root {r} out of range")

    @property
    def root_set(self) -> frozenset[int]:
        return frozenset(self.roots)

    def root_internal_edges(self) -> frozenset[tuple[int, int]]:
        rs = self.root_set
        return frozenset(e for e in self.graph.edges if e[0] in rs and e[1] in rs)

    @property
    def non_root_vertex_count(self) -> int:
        return self.graph.vertex_count - len(self.roots)

    @property
    def non_root_edge_count(self) -> int:
        return self.graph.edge_count - len(self.root_internal_edges())


@dataclass(frozen=True)
class EmbeddingCount:
    """Copy count plus one witness embedding (pattern vertex -> host vertex)."""

    count: int
    sample: tuple[int, ...] | None = None

    def __post_init__(self):
        if (self.count == 0) != (self.sample is None):
            raise ValueError("sample must be present iff count > 0")


# ---------------------------------------------------------------------------
# named graphs and the text format
# ---------------------------------------------------------------------------


def complete_graph(n: int) -> Graph:
    return Graph.of(n, itertools.combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return Graph.of(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.of(n, [(i, i + 1) for i in range(n - 1)])


def _builtin_graphs() -> dict[str, Graph]:
    named = {}
    for n in range(2, 8):
        named[f"K{n}"] = complete_graph(n)
    for n in range(3, 10):
        named[f"C{n}"] = cycle_graph(n)
    for n in range(2, 9):
        named[f"P{n}"] = path_graph(n)
    named["bowtie"] = Graph.of(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
    named["diamond"] = Graph.of(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
    return named


BUILTIN_GRAPHS = _builtin_graphs()


def named_graph(name: str) -> Graph:
    try:
        return BUILTIN_GRAPHS[name]
    except KeyError:
        raise KeyError(f"unknown graph name {name!r}") from None


def parse_graph_text(text: str) -> Graph:
    """Parse the `v <n>` / `e <u> <w>` text format (0-indexed)."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "v" and len(parts) == 2:
            if n is not None:
                raise ValueError(f"line {lineno}: duplicate vertex-count line")
            n = int(parts[1])
        elif parts[0] == "e" and len(parts) == 3:
            edges.append((int(parts[1]), int(parts[2])))
        else:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}")
    if n is None:
        raise ValueError("missing `v <n>` line")
    return Graph.of(n, edges)


def graph_to_text(g: Graph) -> str:
    lines = [f"v {g.vertex_count}"]
    lines.extend(f"e {u} {w}" for u, w in sorted(g.edges))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# canonical labeling
# ---------------------------------------------------------------------------


def _refine(n: int, adj: tuple[frozenset[int], ...], colors: list[int]) -> list[int]:
    # Stable color refinement with canonically numbered classes: new ids are
    # assigned by sorted (old color, neighbor-color multiset) keys, which is
    # invariant under isomorphism.
    while True:
        keys = [
            (colors[v], tuple(sorted(colors[w] for w in adj[v]))) for v in range(n)
        ]
        rank = {k: i for i, k in enumerate(sorted(set(keys)))}
        new = [rank[k] for k in keys]
        if new == colors:
            return colors
        colors = new


def _canonical_rows(g: Graph, init_colors) -> tuple[tuple[int, int], ...]:
    n = g.vertex_count
    if n == 0:
        return ()
    adj = g.adjacency()
    masks = g.adjacency_masks()
    if init_colors is None:
        base = [0] * n
    else:
        order = {c: i for i, c in enumerate(sorted(set(init_colors)))}
        base = [order[c] for c in init_colors]

    best: list[tuple[int, int]] | None = None

    def rec(order_placed: list[int], rows: list[tuple[int, int]], colors: list[int], tight: bool):
        # `tight` means rows == best[:k]; it only enables pruning, the final
        # lexicographic comparison at the leaves is authoritative.
        nonlocal best
        k = len(order_placed)
        if k == n:
            if best is None or rows < best:
                best = list(rows)
            return
        placed = set(order_placed)
        remaining = [v for v in range(n) if v not in placed]
        target = min(colors[v] for v in remaining)
        cell = [v for v in remaining if colors[v] == target]

        # Homogeneous shortcut: if the cell covers all remaining vertices and
        # induces a clique or an independent set, every ordering of it yields
        # the same rows (cell members share their adjacency to placed
        # vertices, because placed vertices carry unique colors).
        if len(cell) == len(remaining) and len(cell) > 1:
            mask_cell = 0
            for v in cell:
                mask_cell |= 1 << v
            inner = [(masks[v] & mask_cell).bit_count() for v in cell]
            if all(d == len(cell) - 1 for d in inner) or all(d == 0 for d in inner):
                rows2 = list(rows)
                order2 = list(order_placed)
                for v in cell:
                    row = 0
                    for j, u in enumerate(order2):
                        if masks[v] >> u & 1:
                            row |= 1 << j
                    rows2.append((base[v], row))
                    order2.append(v)
                if best is None or rows2 < best:
                    best = rows2
                return

        for v in sorted(cell):
            row = 0
            for j, u in enumerate(order_placed):
                if masks[v] >> u & 1:
                    row |= 1 << j
            item = (base[v], row)
            new_tight = tight
            if best is not None and tight:
                if item > best[k]:
                    continue
                new_tight = item == best[k]
            colors2 = list(colors)
            colors2[v] = n + k  # individualize
            colors2 = _refine(n, adj, colors2)
            rec(order_placed + [v], rows + [item], colors2, new_tight)

    rec([], [], _refine(n, adj, list(base)), False)
    assert best is not None
    return tuple(best)


@lru_cache(maxsize=65536)
def _canonical_form_cached(g: Graph, init_colors: tuple[int, ...] | None) -> bytes:
    n = g.vertex_count
    if n > MAX_CANONICAL_VERTICES:
        raise SizeExceededError(
            f"canonical_form supports at most {MAX_CANONICAL_VERTICES} vertices, got {n}"
        )
    rows = _canonical_rows(g, init_colors)
    out = bytearray([n])
    for c, row in rows:
        out.append(c)
        out += row.to_bytes(2, "little")
    return bytes(out)


def canonical_form(g: Graph, colors=None) -> bytes:
    """Canonical label: equal labels iff isomorphic (color-preserving).

    Vertices at most MAX_CANONICAL_VERTICES.  Optional `colors` gives one
    integer per vertex; only color-preserving isomorphisms are considered.
    """
    return _canonical_form_cached(g, None if colors is None else tuple(colors))


def are_isomorphic(g: Graph, h: Graph) -> bool:
    if g.vertex_count != h.vertex_count or g.edge_count != h.edge_count:
        return False
    if g.degree_sequence() != h.degree_sequence():
        return False
    if g.vertex_count <= MAX_CANONICAL_VERTICES:
        return canonical_form(g) == canonical_form(h)
    return _isomorphic_backtrack(g, None, h, None)


def rooted_canonical_form(rg: RootedGraph) -> bytes:
    """Canonical label of a rooted graph, roots distinguished as a set."""
    colors = [1 if v in rg.root_set else 0 for v in range(rg.graph.vertex_count)]
    return canonical_form(rg.graph, colors)


def rooted_isomorphic(a: RootedGraph, b: RootedGraph) -> bool:
    """Root-set-preserving isomorphism (any size, backtracking beyond 16)."""
    if a.graph.vertex_count != b.graph.vertex_count:
        return False
    if a.graph.edge_count != b.graph.edge_count or len(a.roots) != len(b.roots):
        return False
    ca = [1 if v in a.root_set else 0 for v in range(a.graph.vertex_count)]
    cb = [1 if v in b.root_set else 0 for v in range(b.graph.vertex_count)]
    if a.graph.vertex_count <= MAX_CANONICAL_VERTICES:
        return canonical_form(a.graph, ca) == canonical_form(b.graph, cb)
    return _isomorphic_backtrack(a.graph, ca, b.graph, cb)


def _isomorphic_backtrack(g: Graph, cg, h: Graph, ch) -> bool:
    n = g.vertex_count
    cg = [0] * n if cg is None else list(cg)
    ch = [0] * n if ch is None else list(ch)
    rg = _refine(n, g.adjacency(), list(cg))
    rh = _refine(n, h.adjacency(), list(ch))
    if sorted(rg) != sorted(rh):
        return False
    adj_g = g.adjacency_masks()
    adj_h = h.adjacency_masks()
    order = sorted(range(n), key=lambda v: (rg.count(rg[v]), v))
    mapping = [-1] * n
    used = [False] * n

    def rec(i):
        if i == n:
            return True
        v = order[i]
        for x in range(n):
            if used[x] or rh[x] != rg[v]:
                continue
            ok = True
            for u in range(n):
                if mapping[u] >= 0:
                    if (adj_g[v] >> u & 1) != (adj_h[x] >> mapping[u] & 1):
                        ok = False
                        break
            if ok:
                mapping[v] = x
                used[x] = True
                if rec(i + 1):
                    return True
                mapping[v] = -1
                used[x] = False
        return False

    return rec(0)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def _enumerate_by_vertex_addition(v_max: int, connected_only: bool) -> list[Graph]:
    if v_max < 1:
        return []
    if v_max > MAX_ENUMERATION_VERTICES:
        raise SizeExceededError(
            f"enumeration supports at most {MAX_ENUMERATION_VERTICES} vertices"
        )
    levels: list[list[Graph]] = [[Graph.of(1)]]
    for n in range(2, v_max + 1):
        seen: dict[bytes, Graph] = {}
        lo = 1 if connected_only else 0
        for g in levels[-1]:
            for mask in range(lo, 1 << (n - 1)):
                extra = [(i, n - 1) for i in range(n - 1) if mask >> i & 1]
                h = Graph(n, g.edges | frozenset(extra))
                seen.setdefault(canonical_form(h), h)
        levels.append(sorted(seen.values(), key=lambda g: (g.edge_count, canonical_form(g))))
    out = []
    for lvl in levels:
        out.extend(lvl)
    return out


def enumerate_connected_graphs(v_max: int) -> list[Graph]:
    """One representative per isomorphism class of connected graphs on
    1..v_max vertices.  Every connected graph on n vertices arises from one on
    n-1 vertices by adding a vertex with a nonempty neighborhood (remove a
    non-cut vertex), so vertex addition plus canonical dedup is exhaustive.
    """
    return _enumerate_by_vertex_addition(v_max, connected_only=True)


def enumerate_graphs(v_max: int) -> list[Graph]:
    """All graphs (connected or not) on 1..v_max vertices, up to isomorphism."""
    return _enumerate_by_vertex_addition(v_max, connected_only=False)


# ---------------------------------------------------------------------------
# embedding counting
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _embedding_plan(pattern: Graph, pinned: tuple[int, ...]):
    """Vertex order for backtracking: pinned first, then most-constrained."""
    n = pattern.vertex_count
    adj = pattern.adjacency()
    order = list(pinned)
    placed = set(order)
    while len(order) < n:
        best_v, best_key = None, None
        for v in range(n):
            if v in placed:
                continue
            key = (len(adj[v] & placed), len(adj[v]))
            if best_key is None or key > best_key or (key == best_key and v < best_v):
                best_v, best_key = v, key
        order.append(best_v)
        placed.add(best_v)
    back_edges = []
    for i, v in enumerate(order):
        back_edges.append([order.index(w) for w in adj[v] if w in set(order[:i])])
    return order, back_edges


def _count_embeddings_adj(
    adj,
    host_n: int,
    pattern: Graph,
    pin: dict[int, int] | None = None,
    limit: int | None = None,
    want_sample: bool = False,
    forbidden=frozenset(),
    collector=None,
):
    """Count injective embeddings of `pattern` into the host given by
    adjacency sets `adj` (list/tuple of sets of ints).

    `pin` maps pattern vertices to fixed host vertices.  Non-pinned images
    must avoid `forbidden`.  Stops early once `limit` embeddings are found.
    `collector(mapping)` is invoked per embedding when given.
    """
    if pattern.vertex_count > MAX_PATTERN_VERTICES:
        raise SizeExceededError(
            f"pattern has {pattern.vertex_count} > {MAX_PATTERN_VERTICES} vertices"
        )
    pin = pin or {}
    pinned_vs = tuple(pin.keys())
    images = list(pin.values())
    if len(set(images)) != len(images):
        return 0, None
    order, back = _embedding_plan(pattern, pinned_vs)
    np = pattern.vertex_count
    mapping = [-1] * np
    used = set()
    for v, x in pin.items():
        if not 0 <= x < host_n:
            return 0, None
        mapping[v] = x
        used.add(x)
    # consistency of the pinned part
    for i in range(len(pinned_vs)):
        v = order[i]
        for j in back[i]:
            u = order[j]
            if mapping[u] not in adj[mapping[v]]:
                return 0, None

    count = 0
    sample = None

    def rec(i):
        nonlocal count, sample
        if i == np:
            count += 1
            if sample is None:
                sample = tuple(mapping)
            if collector is not None:
                collector(tuple(mapping))
            return limit is not None and count >= limit
        v = order[i]
        if back[i]:
            cands = adj[mapping[order[back[i][0]]]]
            for j in back[i][1:]:
                cands = cands & adj[mapping[order[j]]]
        else:
            cands = range(host_n)
        for x in cands:
            if x in used or x in forbidden:
                continue
            mapping[v] = x
            used.add(x)
            stop = rec(i + 1)
            used.discard(x)
            mapping[v] = -1
            if stop:
                return True
        return False

    rec(len(pinned_vs))
    return count, sample


def count_embeddings(host: Graph, pattern: Graph, pin=None, limit=None):
    c, s = _count_embeddings_adj(host.adjacency(), host.vertex_count, pattern, pin, limit)
    return c, s


@lru_cache(maxsize=4096)
def automorphism_count(g: Graph) -> int:
    c, _ = count_embeddings(g, g)
    return c


@lru_cache(maxsize=4096)
def _rooted_automorphism_count(pattern_minus: Graph, roots: tuple[int, ...]) -> int:
    pin = {r: r for r in roots}
    c, _ = count_embeddings(pattern_minus, pattern_minus, pin=pin)
    return c


@lru_cache(maxsize=1024)
def _directed_edge_reps(pattern: Graph) -> tuple[tuple[int, int], ...]:
    """One directed pattern edge per automorphism orbit."""
    maps = []
    _count_embeddings_adj(
        pattern.adjacency(),
        pattern.vertex_count,
        pattern,
        collector=lambda m: maps.append(m),
    )
    darts = []
    for u, w in pattern.edges:
        darts.append((u, w))
        darts.append((w, u))
    reps = []
    seen = set()
    for d in sorted(darts):
        if d in seen:
            continue
        reps.append(d)
        for m in maps:
            seen.add((m[d[0]], m[d[1]]))
    return tuple(reps)


def count_subgraph_copies(host: Graph, pattern: Graph) -> EmbeddingCount:
    """Number of unlabeled copies of `pattern` in `host` (embeddings / |Aut|)."""
    embeddings, sample = count_embeddings(host, pattern)
    aut = automorphism_count(pattern)
    assert embeddings % aut == 0
    return EmbeddingCount(embeddings // aut, sample)


def count_rooted_copies(host: Graph, anchor, pattern: RootedGraph) -> EmbeddingCount:
    """Copies of the pattern minus its root-internal edges whose root images
    equal `anchor` positionally.  Host edges inside the anchor are immaterial
    (the de-rooted pattern has none to match them)."""
    anchor = tuple(anchor)
    if len(anchor) != len(pattern.roots):
        raise ValueError(
            f"anchor arity {len(anchor)} != root arity {len(pattern.roots)}"
        )
    if len(set(anchor)) != len(anchor):
        raise ValueError("anchor vertices must be distinct")
    minus = Graph(
        pattern.graph.vertex_count,
        pattern.graph.edges - pattern.root_internal_edges(),
    )
    pin = dict(zip(pattern.roots, anchor))
    embeddings, sample = count_embeddings(host, minus, pin=pin)
    if embeddings == 0:
        return EmbeddingCount(0, None)
    aut = _rooted_automorphism_count(minus, pattern.roots)
    assert embeddings % aut == 0
    return EmbeddingCount(embeddings // aut, sample)


def count_copies_through_edge(host: Graph, e, pattern: Graph) -> int:
    """Unlabeled copies of `pattern` in `host` whose edge set contains `e`."""
    u, w = _norm_edge(*e)
    if (u, w) not in host.edges:
        raise ValueError(f"edge ({u},{w}) not in host")
    return _copies_through_edge_adj(host.adjacency(), host.vertex_count, u, w, pattern)


def _copies_through_edge_adj(adj, host_n: int, u: int, w: int, pattern: Graph) -> int:
    total = 0
    for a, b in _all_directed_edges(pattern):
        c, _ = _count_embeddings_adj(adj, host_n, pattern, pin={a: u, b: w})
        total += c
    aut = automorphism_count(pattern)
    assert total % aut == 0
    return total // aut


@lru_cache(maxsize=1024)
def _all_directed_edges(pattern: Graph) -> tuple[tuple[int, int], ...]:
    out = []
    for a, b in sorted(pattern.edges):
        out.append((a, b))
        out.append((b, a))
    return tuple(out)


def _exists_copy_through_edge_adj(adj, host_n: int, u: int, w: int, pattern: Graph) -> bool:
    """Existence version used on large hosts; tries one directed edge per
    automorphism orbit of the pattern."""
    for a, b in _directed_edge_reps(pattern):
        c, _ = _count_embeddings_adj(adj, host_n, pattern, pin={a: u, b: w}, limit=1)
        if c:
            return True
    return False


def _find_copy_through_edge_adj(adj, host_n: int, u: int, w: int, pattern: Graph):
    for a, b in _directed_edge_reps(pattern):
        c, sample = _count_embeddings_adj(adj, host_n, pattern, pin={a: u, b: w}, limit=1)
        if c:
            return sample
    return None
