import itertools

import pytest

from favoid.constructions import (
    ConstructionTree,
    EdgeColoring,
    SizeExplosionError,
    densest_member,
    drop_root_edges,
    enumerate_Fk,
    is_dangerous,
    is_fstar_spanning,
    root_join,
    rooted_product,
)
from favoid.densities import m2, rooted_m
from favoid.graphs import (
    Graph,
    RootedGraph,
    are_isomorphic,
    canonical_form,
    named_graph,
    rooted_canonical_form,
    rooted_isomorphic,
)
from favoid.rng import SplitMix64

K3, C4, K4, C5 = (named_graph(x) for x in ("K3", "C4", "K4", "C5"))
E_K3 = RootedGraph(K3, (0, 1))
ROOTED_EDGE = RootedGraph(Graph.of(2, [(0, 1)]), (0, 1))


class TestDropRootEdges:
    def test_triangle(self):
        got = drop_root_edges(E_K3)
        assert got.graph.edge_count == 2
        assert are_isomorphic(got.graph, named_graph("P3"))

    def test_single_edge(self):
        got = drop_root_edges(ROOTED_EDGE)
        assert got.graph.edge_count == 0 and got.graph.vertex_count == 2

    def test_all_rooted(self):
        got = drop_root_edges(RootedGraph(K3, (0, 1, 2)))
        assert got.graph.edge_count == 0 and got.graph.vertex_count == 3


class TestRootedProduct:
    def test_triangle_squared(self):
        got = rooted_product(E_K3, E_K3)
        assert (got.graph.vertex_count, got.graph.edge_count) == (5, 7)

    def test_edge_attachment_is_identity(self):
        got = rooted_product(E_K3, ROOTED_EDGE)
        assert got.graph == K3 and got.roots == (0, 1)

    def test_no_non_root_edges(self):
        got = rooted_product(RootedGraph(K3, (0, 1, 2)), E_K3)
        assert got.graph == K3

    def test_edge_dropped_when_attachment_lacks_root_edge(self):
        got = rooted_product(E_K3, drop_root_edges(E_K3))
        # two non-root edges each replaced by a de-rooted triangle copy
        assert (got.graph.vertex_count, got.graph.edge_count) == (5, 5)

    def test_arity_enforced(self):
        with pytest.raises(ValueError):
            rooted_product(E_K3, RootedGraph(K3, (0,)))

    def test_growth_bookkeeping(self):
        # attaching the rooted pattern grows v by v-2 and e by e-1 per edge
        for pattern in (K3, C4, K4, C5):
            base = RootedGraph(pattern, tuple(sorted(min(pattern.edges))))
            got = rooted_product(base, base)
            nb = pattern.edge_count - 1
            assert got.graph.vertex_count == pattern.vertex_count + nb * (
                pattern.vertex_count - 2
            )
            assert got.graph.edge_count == pattern.edge_count + nb * (
                pattern.edge_count - 1
            )


class TestRootJoin:
    def test_two_triangles_make_diamond(self):
        got = root_join([E_K3, E_K3])
        assert (got.graph.vertex_count, got.graph.edge_count) == (4, 5)
        assert are_isomorphic(got.graph, named_graph("diamond"))

    def test_identity(self):
        got = root_join([E_K3])
        assert are_isomorphic(got.graph, K3)

    def test_with_rooted_edge(self):
        got = root_join([E_K3, ROOTED_EDGE])
        assert are_isomorphic(got.graph, K3)

    def test_mismatch_rejected(self):
        with pytest.raises(ValueError):
            root_join([E_K3, RootedGraph(C4, (0, 2))])  # no root edge there

    def test_associative_commutative_up_to_iso(self):
        pool = [E_K3, RootedGraph(C4, (0, 1)), RootedGraph(K4, (0, 1)), ROOTED_EDGE]
        rng = SplitMix64(77)
        for _ in range(25):
            a, b, c = (pool[rng.randrange(len(pool))] for _ in range(3))
            abc = root_join([a, b, c])
            bca = root_join([b, c, a])
            nested = root_join([root_join([a, b]), c])
            assert rooted_canonical_form(abc) == rooted_canonical_form(bca)
            assert rooted_canonical_form(abc) == rooted_canonical_form(nested)

    def test_product_distributes_over_join(self):
        a, b = E_K3, RootedGraph(C4, (0, 1))
        c = E_K3
        lhs = rooted_product(root_join([a, b]), c)
        rhs = root_join([rooted_product(a, c), rooted_product(b, c)])
        assert rooted_canonical_form(lhs) == rooted_canonical_form(rhs)


class TestClassEnumeration:
    def test_level_one(self):
        members = enumerate_Fk(K3, (0, 1), 1)
        assert len(members) == 1 and members[0].kind == "leaf"
        assert members[0].realized.graph.edge_count == 1

    def test_triangle_level_two(self):
        members = enumerate_Fk(K3, (0, 1), 2)
        assert len(members) == 1
        assert are_isomorphic(members[0].realized.graph, K3)
        assert len(members[0].designated) == 1

    def test_triangle_level_three(self):
        members = enumerate_Fk(K3, (0, 1), 3)
        sizes = sorted(
            (t.realized.graph.vertex_count, t.realized.graph.edge_count)
            for t in members
        )
        assert sizes == [(4, 5), (6, 9)]
        for t in members:
            assert len(t.designated) == 2
            # every member is 2-balanced with the pattern's 2-density
            rep = m2(t.realized.graph)
            g = t.realized.graph
            assert rep.value == m2(K3).value == 2
            assert any(mx.vertex_count == g.vertex_count for mx in rep.maximizers)

    def test_triangle_level_four_tree_count(self):
        trees = enumerate_Fk(K3, (0, 1), 4, dedup=False)
        assert len(trees) == 8  # 1 * 2 * 4 branch choices
        deduped = enumerate_Fk(K3, (0, 1), 4)
        # oracle: pairwise root-preserving isomorphism over realized graphs
        reps = []
        for t in trees:
            if not any(rooted_isomorphic(t.realized, r.realized) for r in reps):
                reps.append(t)
        assert len(deduped) == len(reps)

    def test_members_two_balanced_all_patterns(self):
        for pattern in (K3, C4, K4, C5):
            root_edge = min(pattern.edges)
            want = m2(pattern).value
            for k in (2, 3):
                for t in enumerate_Fk(pattern, root_edge, k):
                    g = t.realized.graph
                    rep = m2(g)
                    assert rep.value == want
                    assert any(
                        mx.vertex_count == g.vertex_count for mx in rep.maximizers
                    ), (pattern, k)

    def test_premise_enforced(self):
        with pytest.raises(ValueError):
            enumerate_Fk(named_graph("bowtie"), (0, 1), 2)
        with pytest.raises(ValueError):
            enumerate_Fk(named_graph("P4"), (0, 1), 2)

    def test_size_explosion_reported(self):
        with pytest.raises(SizeExplosionError) as exc:
            enumerate_Fk(C5, (0, 1), 3, max_vertices=10)
        assert exc.value.partial_count >= 0

    def test_densest_selector(self):
        members = enumerate_Fk(K3, (0, 1), 3)
        assert densest_member(members).realized.graph.edge_count == 9


class TestDangerous:
    def test_level_two_monochromatic(self):
        member = enumerate_Fk(K3, (0, 1), 2)[0]
        edges = member.realized.graph.edges - member.realized.root_internal_edges()
        coloring = EdgeColoring({e: 1 for e in edges}, r=2)
        assert is_dangerous(member, coloring)

    def test_level_two_bichromatic(self):
        member = enumerate_Fk(K3, (0, 1), 2)[0]
        edges = sorted(member.realized.graph.edges - member.realized.root_internal_edges())
        coloring = EdgeColoring({edges[0]: 1, edges[1]: 2}, r=2)
        assert not is_dangerous(member, coloring)

    def test_level_three_needs_distinct_colors(self):
        member = next(
            t
            for t in enumerate_Fk(K3, (0, 1), 3)
            if t.realized.graph.vertex_count == 4  # the diamond member
        )
        edges = member.realized.graph.edges - member.realized.root_internal_edges()
        same = EdgeColoring({e: 1 for e in edges}, r=3)
        assert not is_dangerous(member, same)
        # color the two designated de-rooted copies differently
        h0, h1 = member.designated
        colors = {}
        for e in h0.edges:
            colors[e] = 1
        for e in h1.edges:
            colors[e] = 2
        for e in edges:
            colors.setdefault(e, 3)
        assert is_dangerous(member, EdgeColoring(colors, r=3))

    def test_domain_mismatch(self):
        member = enumerate_Fk(K3, (0, 1), 2)[0]
        with pytest.raises(ValueError):
            is_dangerous(member, EdgeColoring({(0, 1): 1}, r=2))


class TestSpanning:
    def test_rooted_edge_always_spans(self):
        leaf = enumerate_Fk(K3, (0, 1), 1)[0]
        host = Graph.of(4, [(0, 1), (2, 3)])
        assert is_fstar_spanning(host, [(0, 1), (2, 3)], leaf.realized)

    def test_no_outside_vertices(self):
        assert not is_fstar_spanning(K3, list(K3.edges), E_K3)

    def test_single_edge_with_free_apex(self):
        host = Graph.of(3, [(0, 1), (0, 2), (1, 2)])
        assert is_fstar_spanning(host, [(0, 1)], E_K3)

    def test_edge_disjointness_forces_failure(self):
        # two subgraph edges sharing the only available apex structure
        host = Graph.of(4, [(0, 1), (1, 2), (0, 3), (1, 3), (2, 3)])
        # edges (0,1) and (1,2) must both extend to triangles avoiding
        # {0,1,2}; only vertex 3 is outside, and the copies would share (1,3)
        assert not is_fstar_spanning(host, [(0, 1), (1, 2)], E_K3)
        host_ok = host.add_edge(0, 2)  # irrelevant: still only one apex
        assert not is_fstar_spanning(host_ok, [(0, 1), (1, 2)], E_K3)

    def test_disjoint_copies_found(self):
        # each subgraph edge has its own private apex
        host = Graph.of(6, [(0, 1), (2, 3), (0, 4), (1, 4), (2, 5), (3, 5)])
        assert is_fstar_spanning(host, [(0, 1), (2, 3)], E_K3)
