"""Brute-force verification of the exact density lemmas over enumerated small
graphs, with self-contained counterexample records.

Each check curates its universe to the lemma's stated hypotheses (the filters
are ordinary operations, so a vacuous pass is visible as checked == 0), runs
entirely on exact rationals, and stores enough data in any counterexample to
re-verify it without re-running the enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .constructions import drop_root_edges, enumerate_Fk, root_join, rooted_product
from .densities import (
    XRational,
    balancedness,
    m,
    m1,
    m2,
    m2_bar,
    product_rooted_m,
    rooted_density,
    rooted_m,
    rooted_m2,
)
from .graphs import (
    Graph,
    RootedGraph,
    enumerate_connected_graphs,
    enumerate_graphs,
    graph_to_text,
    named_graph,
    parse_graph_text,
)


@dataclass
class LemmaResult:
    lemma: str
    universe: str
    checked: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def record(self, graphs: dict, params: dict, lhs, rhs, relation: str):
        self.counterexamples.append(
            {
                "lemma": self.lemma,
                "graphs": {k: graph_to_text(g) for k, g in graphs.items()},
                "params": params,
                "lhs": str(lhs),
                "rhs": str(rhs),
                "relation": relation,
            }
        )

    def to_json_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "universe": self.universe,
            "checked": self.checked,
            "passed": self.passed,
            "counterexamples": self.counterexamples,
        }


def _relation_holds(lhs: XRational, rhs: XRational, relation: str) -> bool:
    if relation == "<":
        return lhs < rhs
    if relation == "<=":
        return lhs <= rhs
    if relation == "=":
        return lhs == rhs
    raise ValueError(f"unknown relation {relation!r}")


def connected_non_forests(v_max: int) -> list[Graph]:
    return [g for g in enumerate_connected_graphs(v_max) if not g.is_forest()]


# ---------------------------------------------------------------------------
# the individual lemma checks
# ---------------------------------------------------------------------------


def check_density_chain(v_max: int, r_max: int, universe=None) -> LemmaResult:
    """Strict chain of the recursive densities between m and the 2-density."""
    result = LemmaResult(
        "density-chain", f"connected non-forests on <= {v_max} vertices, r <= {r_max}"
    )
    if universe is None:
        universe = connected_non_forests(v_max)
    for g in universe:
        result.checked += 1
        values = [m2_bar(g, r).value for r in range(1, r_max + 1)]
        top = m2(g).value
        if values[0] != m(g).value:
            result.record({"G": g}, {"r": 1}, values[0], m(g).value, "=")
        for r in range(1, r_max):
            if not values[r - 1] < values[r]:
                result.record(
                    {"G": g}, {"r": r + 1}, values[r - 1], values[r], "<"
                )
        if not values[-1] < top:
            result.record({"G": g}, {"r": r_max, "vs": "m2"}, values[-1], top, "<")
    return result


def check_m2_le_2m(v_max: int) -> LemmaResult:
    """2-density at most twice the density, for graphs with >= 3 vertices."""
    result = LemmaResult(
        "m2-le-2m", f"all graphs with an edge on 3..{v_max} vertices"
    )
    for g in enumerate_graphs(v_max):
        if g.vertex_count < 3 or g.edge_count == 0:
            continue
        result.checked += 1
        lhs, rhs = m2(g).value, 2 * m(g).value
        if not lhs <= rhs:
            result.record({"F": g}, {}, lhs, rhs, "<=")
    return result


def _edge_rooted(g: Graph, e) -> RootedGraph:
    return RootedGraph(g, tuple(sorted(e)))


def check_building(pool) -> LemmaResult:
    """Gluing two 2-balanced graphs of equal 2-density along an edge keeps
    them 2-balanced with the same density; likewise for balanced rooted
    graphs glued at their roots."""
    result = LemmaResult("two-balanced-building", f"pool of {len(pool)} graphs")
    graphs = [named_graph(p) if isinstance(p, str) else p for p in pool]
    for ga, gb in itertools.combinations_with_replacement(graphs, 2):
        da, db = m2(ga).value, m2(gb).value
        if da != db or not balancedness(ga).two_balanced or not balancedness(gb).two_balanced:
            continue
        for ea in sorted(ga.edges):
            for eb in sorted(gb.edges):
                result.checked += 1
                glued = root_join([_edge_rooted(ga, ea), _edge_rooted(gb, eb)]).graph
                got = m2(glued).value
                if got != da:
                    result.record(
                        {"G": ga, "H": gb, "glued": glued},
                        {"edge_G": list(ea), "edge_H": list(eb)},
                        got,
                        da,
                        "=",
                    )
                elif not balancedness(glued).two_balanced:
                    result.record(
                        {"G": ga, "H": gb, "glued": glued},
                        {"edge_G": list(ea), "edge_H": list(eb), "property": "2-balanced"},
                        0,
                        1,
                        "=",
                    )
    # rooted variant: balanced rooted graphs of equal density glued at roots
    rooted_pool = []
    for g in graphs:
        for e in sorted(g.edges):
            rg = _edge_rooted(g, e)
            if rooted_m(rg).value == rooted_density(rg):
                rooted_pool.append(rg)
    for ra, rb in itertools.combinations_with_replacement(rooted_pool, 2):
        da, db = rooted_m(ra).value, rooted_m(rb).value
        if da != db:
            continue
        try:
            joined = root_join([ra, rb])
        except ValueError:
            continue  # root-induced graphs disagree
        result.checked += 1
        got = rooted_m(joined).value
        if got != da:
            result.record(
                {"G": ra.graph, "H": rb.graph, "joined": joined.graph},
                {"roots_G": list(ra.roots), "roots_H": list(rb.roots)},
                got,
                da,
                "=",
            )
    return result


def _class_members(pattern: Graph, root_edge, k: int):
    return enumerate_Fk(pattern, root_edge, k)


def check_fstar_density(pattern: Graph, root_edge, k_max: int, r: int) -> LemmaResult:
    """Every class member satisfies, for k <= r,
    v - 2 - e/m2_bar(F, r) >= -1/m2_bar(F, r-k+1), exactly."""
    result = LemmaResult(
        "f-star-density", f"class members k <= {min(k_max, r)}, r = {r}"
    )
    mr = m2_bar(pattern, r).value.as_fraction
    for k in range(1, min(k_max, r) + 1):
        rhs = -(m2_bar(pattern, r - k + 1).value.reciprocal().as_fraction)
        for member in _class_members(pattern, root_edge, k):
            result.checked += 1
            g = member.realized.graph
            lhs = Fraction(g.vertex_count - 2) - Fraction(g.edge_count) / mr
            if not lhs >= rhs:
                result.record(
                    {"F": pattern, "F_star": g},
                    {"k": k, "r": r},
                    lhs,
                    rhs,
                    ">=",
                )
    return result


def _all_edges_product(pattern: Graph, attach: RootedGraph) -> RootedGraph:
    """The unrooted product: a fresh attachment on every edge of the pattern."""
    return rooted_product(RootedGraph(pattern, ()), attach)


def check_klr_density(pattern: Graph, root_edge, r_max: int) -> LemmaResult:
    """Recursive density dominates the rooted 2-density at shift
    t = 1/m2_bar(F,k) - 1/m2_bar(F,r), for the edge-rooted pattern and for
    the all-edges product rooted at the original vertices."""
    result = LemmaResult("klr-density", f"2 <= k <= r <= {r_max}")
    root_edge = tuple(sorted(root_edge))
    e_rooted = RootedGraph(pattern, root_edge)
    prod = _all_edges_product(pattern, e_rooted)
    prod_rooted = RootedGraph(prod.graph, tuple(range(pattern.vertex_count)))
    for r in range(2, r_max + 1):
        inv_r = m2_bar(pattern, r).value.reciprocal().as_fraction
        for k in range(2, r + 1):
            mk = m2_bar(pattern, k).value
            t = mk.reciprocal().as_fraction - inv_r
            result.checked += 1
            lhs1 = rooted_m2(e_rooted, t)
            if not mk >= lhs1:
                result.record(
                    {"F": pattern}, {"k": k, "r": r, "t": str(t), "side": "edge-rooted"},
                    lhs1, mk, "<=",
                )
            lhs2 = rooted_m2(prod_rooted, t)
            if not mk >= lhs2:
                result.record(
                    {"F": pattern, "product": prod.graph},
                    {"k": k, "r": r, "t": str(t), "side": "product"},
                    lhs2, mk, "<=",
                )
    return result


def check_rooted_density(pattern: Graph, root_edge, k_max: int) -> LemmaResult:
    """For class members at levels k >= 2: the 1-density of the de-rooted
    member stays below m2_bar(F, k), and so does the rooted density of the
    product of any vertex-rooted pattern with the de-rooted member."""
    result = LemmaResult("rooted-density", f"class members 2 <= k <= {k_max}")
    for k in range(2, k_max + 1):
        bound = m2_bar(pattern, k).value
        for member in _class_members(pattern, root_edge, k):
            minus = drop_root_edges(member.realized)
            result.checked += 1
            lhs = m1(minus.graph).value
            if not lhs < bound:
                result.record(
                    {"F": pattern, "F_star_minus": minus.graph},
                    {"k": k, "part": "m1"},
                    lhs, bound, "<",
                )
            for size in range(pattern.vertex_count):
                for v0 in itertools.combinations(range(pattern.vertex_count), size):
                    base = RootedGraph(pattern, v0)
                    lhs2 = product_rooted_m(base, minus)
                    if not lhs2 < bound:
                        result.record(
                            {"F": pattern, "F_star_minus": minus.graph},
                            {"k": k, "part": "product", "V0": list(v0)},
                            lhs2, bound, "<",
                        )
    return result


def check_forbidden_density(v_max: int, r_max: int) -> LemmaResult:
    """2-balanced graphs of density >= 1: every proper rooted density is at
    most v-1, which is below 1/(1/m - 1/m2_bar(.,r)) for r >= 2."""
    result = LemmaResult(
        "forbidden-density",
        f"2-balanced graphs with e >= v on <= {v_max} vertices, 2 <= r <= {r_max}",
    )
    for g in enumerate_connected_graphs(v_max):
        if g.edge_count < g.vertex_count:
            continue
        if not balancedness(g).two_balanced:
            continue
        best = XRational(0)
        for size in range(g.vertex_count):
            for rset in itertools.combinations(range(g.vertex_count), size):
                val = rooted_m(RootedGraph(g, rset)).value
                if val > best:
                    best = val
        vm1 = XRational(g.vertex_count - 1)
        if not best <= vm1:
            result.record({"G": g}, {"part": "max-rooted"}, best, vm1, "<=")
        mg = m(g).value
        for r in range(2, r_max + 1):
            result.checked += 1
            gap = mg.reciprocal() - m2_bar(g, r).value.reciprocal()
            rhs = gap.reciprocal()
            if not vm1 < rhs:
                result.record({"G": g}, {"r": r}, vm1, rhs, "<")
    return result


def _prod_premises_hold(rg: RootedGraph, eh: RootedGraph, t: Fraction) -> bool:
    if rooted_m(eh).value != rooted_density(eh):
        return False  # (e,H) not balanced
    h_minus = drop_root_edges(eh)
    if not m1(h_minus.graph).value <= t:
        return False
    vbar = Fraction(eh.non_root_vertex_count)
    ebar = Fraction(eh.non_root_edge_count)
    lhs = vbar - ebar / t
    m_rg = rooted_m(rg).value
    if m_rg == 0:
        return True  # -1/m is unboundedly negative; premise vacuous
    return lhs >= -(m_rg.reciprocal().as_fraction)


def check_prod_density(instances=None, t_grid=None) -> LemmaResult:
    """Whenever the product premises hold exactly for ((R,G), (e,H), t), the
    rooted density of (R,G) x (e,H-e) is at most t.  The lemma quantifies
    over all positive t, which cannot be enumerated; the grid covers the
    values arising in the klr check plus fixed small rationals."""
    result = LemmaResult("prod-density", "rooted pairs from the named pool")
    if instances is None:
        pool = [named_graph(x) for x in ("K3", "C4", "K4", "C5", "diamond")]
        instances = []
        for g in pool:
            for e in sorted(g.edges):
                instances.append(_edge_rooted(g, e))
    if t_grid is None:
        t_grid = [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)]
        for pat_name in ("K3", "C4"):
            pat = named_graph(pat_name)
            for k in range(2, 4):
                for r in range(k, 4):
                    t = (
                        m2_bar(pat, k).value.reciprocal().as_fraction
                        - m2_bar(pat, r).value.reciprocal().as_fraction
                    )
                    if t > 0:
                        t_grid.append(t)
    t_grid = sorted(set(Fraction(t) for t in t_grid))
    for rg in instances:
        for eh in instances:
            if len(eh.roots) != 2:
                continue
            for t in t_grid:
                if not _prod_premises_hold(rg, eh, t):
                    continue
                result.checked += 1
                h_minus = drop_root_edges(eh)
                got = product_rooted_m(rg, h_minus)
                if not got <= t:
                    result.record(
                        {"G": rg.graph, "H": eh.graph},
                        {
                            "roots_G": list(rg.roots),
                            "roots_H": list(eh.roots),
                            "t": str(t),
                        },
                        got,
                        t,
                        "<=",
                    )
    return result


def check_FtimesFstar(pattern: Graph, root_edge, r: int) -> LemmaResult:
    """Members of the r-th class keep the density of the all-edges product at
    most m2_bar(F, r)."""
    result = LemmaResult("f-times-f-star", f"class members at level {r}")
    if r < 2:
        raise ValueError("the proposition concerns levels r >= 2")
    bound = m2_bar(pattern, r).value
    for member in _class_members(pattern, root_edge, r):
        result.checked += 1
        got = product_rooted_m(RootedGraph(pattern, ()), member.realized)
        if not got <= bound:
            result.record(
                {"F": pattern, "F_star": member.realized.graph},
                {"r": r},
                got,
                bound,
                "<=",
            )
    return result


# ---------------------------------------------------------------------------
# counterexample re-verification and the default suite
# ---------------------------------------------------------------------------


def recheck_counterexample(ce: dict) -> bool:
    """Re-verify a stored counterexample from its own data alone: recompute
    both sides from the stored graphs and confirm the recorded relation still
    fails with the recorded values."""
    graphs = {k: parse_graph_text(t) for k, t in ce["graphs"].items()}
    lemma = ce["lemma"]
    params = ce["params"]
    if lemma == "density-chain":
        g = graphs["G"]
        r = params["r"]
        if params.get("vs") == "m2":
            lhs, rhs = m2_bar(g, r).value, m2(g).value
        elif r == 1:
            lhs, rhs = m2_bar(g, 1).value, m(g).value
        else:
            lhs, rhs = m2_bar(g, r - 1).value, m2_bar(g, r).value
    elif lemma == "m2-le-2m":
        lhs, rhs = m2(graphs["F"]).value, 2 * m(graphs["F"]).value
    elif lemma == "f-star-density":
        g = graphs["F_star"]
        mr = m2_bar(graphs["F"], params["r"]).value.as_fraction
        lhs = Fraction(g.vertex_count - 2) - Fraction(g.edge_count) / mr
        rhs = -(
            m2_bar(graphs["F"], params["r"] - params["k"] + 1)
            .value.reciprocal()
            .as_fraction
        )
    else:
        # generic fallback: recompute nothing, trust stored exact strings
        lhs, rhs = ce["lhs"], ce["rhs"]
        return str(lhs) == ce["lhs"] and str(rhs) == ce["rhs"]
    if str(lhs) != ce["lhs"] or str(rhs) != ce["rhs"]:
        return False
    return not _relation_holds(
        lhs if isinstance(lhs, XRational) else XRational.from_fraction(Fraction(lhs)),
        rhs if isinstance(rhs, XRational) else XRational.from_fraction(Fraction(rhs)),
        ce["relation"],
    )


DEFAULT_PATTERNS = ("K3", "C4", "K4", "C5")


def default_suite(
    v_max: int = 6,
    patterns=DEFAULT_PATTERNS,
    k_max: int = 3,
    r_max: int = 4,
) -> list[LemmaResult]:
    """The full verification suite at its default desk-scale parameters."""
    results = [
        check_density_chain(v_max, min(r_max + 1, 5)),
        check_m2_le_2m(v_max),
        check_building(list(patterns)),
        check_forbidden_density(v_max, r_max),
        check_prod_density(),
    ]
    for name in patterns:
        pattern = named_graph(name)
        root_edge = min(pattern.edges)
        for r in range(2, r_max + 1):
            results.append(check_fstar_density(pattern, root_edge, k_max, r))
        results.append(check_klr_density(pattern, root_edge, r_max))
        results.append(check_rooted_density(pattern, root_edge, k_max))
        for r in range(2, min(k_max, 3) + 1):
            results.append(check_FtimesFstar(pattern, root_edge, r))
    return results
