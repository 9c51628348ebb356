import itertools
import math
from fractions import Fraction

import pytest

from favoid.densities import rooted_m2
from favoid.graphs import Graph, RootedGraph, complete_graph, named_graph
from favoid.regularity import (
    FALSIFIED,
    UNFALSIFIED,
    VERIFIED,
    PartiteSystem,
    RootHypergraph,
    build_T,
    check_lower_regular,
    check_partite_class_membership,
    check_regular_pair,
    check_upper_extensible,
    check_upper_uniform,
    codegree_function,
    complete_partite_system,
    count_partite_copies,
    extension_hypergraph,
    pattern_minus_roots,
    random_partite_system,
    recheck_pair_certificate,
    recheck_uniform_certificate,
)
from favoid.rng import SplitMix64, derive_seed

K3 = named_graph("K3")


class TestRegularPair:
    def test_complete_pair_verified(self):
        edges = [(u, w) for u in range(6) for w in range(6)]
        for eps in (Fraction(1, 10), Fraction(1, 3)):
            v = check_regular_pair(6, 6, edges, eps, 1)
            assert v.status == VERIFIED

    def test_empty_pair_verified_for_all(self):
        for eps, p in ((Fraction(1, 10), Fraction(1, 2)), (Fraction(1, 3), 1)):
            assert check_regular_pair(8, 8, [], eps, p).status == VERIFIED

    def test_half_full_half_empty_falsified(self):
        edges = [(u, w) for u in range(5) for w in range(10)]
        d = Fraction(len(edges), 100)
        v = check_regular_pair(10, 10, edges, Fraction(2, 5), d)
        assert v.status == FALSIFIED
        assert recheck_pair_certificate(10, 10, edges, Fraction(2, 5), d, v.certificate)

    def test_exact_never_unfalsified_sampled_never_verified(self):
        edges = [(u, w) for u in range(5) for w in range(5)]
        exact = check_regular_pair(5, 5, edges, Fraction(1, 4), 1)
        assert exact.status in (VERIFIED, FALSIFIED)
        sampled = check_regular_pair(
            5, 5, edges, Fraction(1, 4), 1, mode="sampled", samples=25, seed=1
        )
        assert sampled.status in (UNFALSIFIED, FALSIFIED)
        assert sampled.status == UNFALSIFIED

    def test_sampled_falsifies_with_exact_certificate(self):
        edges = [(u, w) for u in range(5) for w in range(10)]
        d = Fraction(len(edges), 100)
        v = check_regular_pair(
            10, 10, edges, Fraction(2, 5), d, mode="sampled", samples=400, seed=7
        )
        assert v.status == FALSIFIED
        assert recheck_pair_certificate(10, 10, edges, Fraction(2, 5), d, v.certificate)

    def test_exact_guard(self):
        with pytest.raises(Exception):
            check_regular_pair(13, 5, [], Fraction(1, 2), 1)


class TestUpperUniform:
    def test_empty_verified(self):
        assert check_upper_uniform(Graph.of(9), Fraction(1, 5), Fraction(1, 2)).status == VERIFIED

    def test_complete_p_one_verified(self):
        assert check_upper_uniform(complete_graph(9), Fraction(1, 5), 1).status == VERIFIED

    def test_complete_p_half_falsified(self):
        v = check_upper_uniform(complete_graph(9), Fraction(1, 10), Fraction(1, 2))
        assert v.status == FALSIFIED
        assert recheck_uniform_certificate(
            complete_graph(9), Fraction(1, 10), Fraction(1, 2), v.certificate
        )

    def test_sampled_mode(self):
        v = check_upper_uniform(
            complete_graph(20),
            Fraction(1, 10),
            Fraction(1, 2),
            mode="sampled",
            samples=50,
            seed=2,
        )
        assert v.status == FALSIFIED


class TestPartiteCopies:
    def test_complete_tripartite_cubed(self):
        for n in (2, 4, 7):
            assert count_partite_copies(complete_partite_system(K3, n), K3) == n**3

    def test_empty_zero(self):
        sys0 = PartiteSystem(4, 3, {e: [] for e in K3.edges})
        assert count_partite_copies(sys0, K3) == 0

    def test_random_system_concentrates(self):
        n = 60
        m_edges = math.ceil(n**1.5)
        expect = (m_edges / n**2) ** 3 * n**3
        ok = 0
        for seed in range(20):
            sys_r = random_partite_system(K3, n, m_edges, derive_seed(4, seed))
            got = count_partite_copies(sys_r, K3)
            if expect / 2 <= got <= expect * 2:
                ok += 1
        assert ok >= 18

    def test_membership_checker(self):
        n, m_edges = 12, 40
        sys_r = random_partite_system(K3, n, m_edges, 11)
        v = check_partite_class_membership(
            sys_r, K3, m_edges, Fraction(1, 2), mode="sampled", samples=30, seed=0
        )
        assert v.status == UNFALSIFIED
        wrong = check_partite_class_membership(sys_r, K3, m_edges + 1, Fraction(1, 2))
        assert wrong.status == FALSIFIED

    def test_json_roundtrip(self):
        sys_r = random_partite_system(K3, 5, 7, 3)
        assert PartiteSystem.from_json_dict(sys_r.to_json_dict()) == sys_r


class TestBuildT:
    def test_complete_everything(self):
        n = 4
        sysc = complete_partite_system(K3, n)
        roots = RootHypergraph.complete(n, 2)
        T = build_T(sysc, K3, roots)
        minus = pattern_minus_roots(K3, 2)
        assert T.total_multiplicity == count_partite_copies(sysc, minus)
        assert T.support_size == n * n

    def test_empty_roots(self):
        sysc = complete_partite_system(K3, 3)
        T = build_T(sysc, K3, RootHypergraph(3, 2, frozenset()))
        assert T.total_multiplicity == 0 and not T.multiplicities

    def test_hand_built_two_by_two(self):
        # parts of size 2; pair (0,2) and (1,2) partial
        sys_h = PartiteSystem(
            2,
            3,
            {
                (0, 1): [(0, 0), (1, 1)],
                (0, 2): [(0, 0), (0, 1), (1, 0)],
                (1, 2): [(0, 0), (1, 0), (1, 1)],
            },
        )
        roots = RootHypergraph.complete(2, 2)
        T = build_T(sys_h, K3, roots)
        # hand enumeration of de-rooted copies (x in V0, y in V1, z in V2 with
        # (x,z) and (y,z) edges): (0,0,0), (0,1,0), (0,1,1)... check per tuple
        minus = pattern_minus_roots(K3, 2)
        by_hand = {}
        for x, y in itertools.product(range(2), repeat=2):
            c = sum(
                1
                for z in range(2)
                if (x, z) in sys_h.pairs[(0, 2)] and (y, z) in sys_h.pairs[(1, 2)]
            )
            if c:
                by_hand[(x, y)] = c
        assert T.multiplicities == by_hand
        assert T.total_multiplicity == count_partite_copies(sys_h, minus)

    def test_total_bounded_by_copies(self):
        sys_r = random_partite_system(K3, 6, 12, 5)
        roots = RootHypergraph(
            6, 2, frozenset((a, b) for a in range(6) for b in range(3))
        )
        T = build_T(sys_r, K3, roots)
        minus = pattern_minus_roots(K3, 2)
        assert T.total_multiplicity <= count_partite_copies(sys_r, minus)


class TestLowerRegular:
    def test_complete_verified(self):
        roots = RootHypergraph.complete(6, 2)
        assert check_lower_regular(roots, K3, Fraction(1, 2), Fraction(1, 3)).status == VERIFIED

    def test_empty_falsified(self):
        roots = RootHypergraph(6, 2, frozenset())
        v = check_lower_regular(roots, K3, Fraction(1, 2), Fraction(1, 3))
        assert v.status == FALSIFIED

    def test_random_overdense_usually_verified(self):
        # edges present with probability 2 * q^(root edges); q = 1/2 and one
        # root edge in the triangle, so probability 1 (complete): drop to a
        # still-comfortable 0.8 to keep it random
        n, q = 10, Fraction(1, 2)
        verified = 0
        for seed in range(10):
            rng = SplitMix64(derive_seed(21, seed))
            edges = frozenset(
                (a, b)
                for a in range(n)
                for b in range(n)
                if rng.randrange(10) < 8
            )
            roots = RootHypergraph(n, 2, edges)
            v = check_lower_regular(roots, K3, q, Fraction(1, 2))
            if v.status == VERIFIED:
                verified += 1
        assert verified >= 9

    def test_arity_three_exact(self):
        pattern = complete_graph(4)  # K4 rooted at a triangle
        roots = RootHypergraph.complete(5, 3)
        v = check_lower_regular(roots, pattern, Fraction(1, 2), Fraction(2, 5))
        assert v.status == VERIFIED
        sparse = RootHypergraph(5, 3, frozenset([(0, 0, 0)]))
        v2 = check_lower_regular(sparse, pattern, Fraction(1, 2), Fraction(2, 5))
        assert v2.status == FALSIFIED


class TestUpperExtensible:
    def test_trivial_true(self):
        roots = RootHypergraph(6, 2, frozenset([(0, 0), (1, 1), (2, 2)]))
        ok, worst = check_upper_extensible(roots, K3, Fraction(1, 2), 1)
        assert ok and worst is None

    def test_star_false_with_witness(self):
        roots = RootHypergraph(6, 2, frozenset((0, b) for b in range(6)))
        ok, worst = check_upper_extensible(roots, K3, Fraction(1, 100), 1)
        assert not ok
        assert worst["tuple"] == [0]

    def test_empty_true(self):
        ok, worst = check_upper_extensible(
            RootHypergraph(6, 2, frozenset()), K3, Fraction(1, 2), 1
        )
        assert ok


class TestCodegree:
    def test_edgeless_zero(self):
        assert codegree_function(7, [], 0.3).delta == 0.0

    def test_single_edge_hand_values(self):
        # r vertices, one edge, tau = 1: every delta_j is 1, so delta is
        # 2^(C(r,2)-1) * sum_j 2^(-C(j-1,2))
        rep2 = codegree_function(2, [(0, 1)], 1.0)
        assert rep2.delta == pytest.approx(1.0)
        rep3 = codegree_function(3, [(0, 1, 2)], 1.0)
        assert rep3.delta == pytest.approx(6.0)
        rep4 = codegree_function(4, [(0, 1, 2, 3)], 1.0)
        want = 2 ** (6 - 1) * (1 + 2 ** (-1) + 2 ** (-3))
        assert rep4.delta == pytest.approx(want)

    def test_recompute_invariant(self):
        edges = [(0, 1, 2), (0, 1, 3), (1, 2, 3), (0, 2, 4)]
        rep = codegree_function(5, edges, 0.4)
        assert rep.recompute_delta() == pytest.approx(rep.delta)

    def test_extension_hypergraph_edge_identity(self):
        for n in (2, 3, 4):
            roots = RootHypergraph.complete(n, 2)
            nv, edges, _ = extension_hypergraph(roots, K3)
            assert len(edges) == len(roots.edges) * n ** (K3.vertex_count - 2)
            assert nv == 2 * n * n  # two de-rooted pairs


def build_bounded_root_graph(n: int, q: Fraction, bound_factor: Fraction, seed: int):
    """Random bipartite root graph that is upper-extensible by construction:
    edges appear with probability about q/2 and degrees are capped at
    bound_factor * q * n."""
    rng = SplitMix64(seed)
    cap = int(bound_factor * q * n)
    deg_a = [0] * n
    deg_b = [0] * n
    edges = []
    threshold = int((q / 2) * 10**6)
    for a in range(n):
        for b in range(n):
            if rng.randrange(10**6) < threshold and deg_a[a] < cap and deg_b[b] < cap:
                edges.append((a, b))
                deg_a[a] += 1
                deg_b[b] += 1
    total_cap = int((bound_factor * q) * n * n)
    return RootHypergraph(n, 2, frozenset(edges[:total_cap]))


class TestCodegreeBound:
    def test_extension_hypergraph_bound_small_instances(self):
        """Numeric check of the co-degree bound: for upper-extensible root
        graphs at scale q = n^(-t), delta at tau = n^(-1/m2(R,F,t))/gamma
        stays below gamma * e * 2^(e^2) * n^|R| * (Aq)^(root edges) / |E|."""
        gamma = 0.5
        A = Fraction(2)
        t = Fraction(1, 2)
        rooted = RootedGraph(K3, (0, 1))
        m2t = rooted_m2(rooted, t)
        assert m2t == 2  # only the full triangle is admissible: 1/(1 - t)
        e_minus = 2  # the de-rooted triangle has two edges
        checked = 0
        for n in range(6, 13):
            q = Fraction(n ** (-float(t)))  # exact binary rational of n^(-1/2)
            tau = (1 / gamma) * n ** (-1 / float(m2t))
            for seed in (1, 2, 3):
                roots = build_bounded_root_graph(n, q, A, derive_seed(n, seed))
                assert roots.edges, "construction produced an empty root graph"
                ok, witness = check_upper_extensible(roots, K3, q, A)
                assert ok, witness
                nv, hedges, _ = extension_hypergraph(roots, K3)
                rep = codegree_function(nv, hedges, tau)
                bound = (
                    gamma
                    * e_minus
                    * 2 ** (e_minus**2)
                    * n**2
                    * float(A * q)
                    / len(roots.edges)
                )
                assert rep.delta <= bound * (1 + 1e-9), (n, seed, rep.delta, bound)
                checked += 1
        assert checked >= 20
