"""Checkers for sparse-regularity definitions at desk scale: regular pairs,
upper-uniformity, partite systems, projected root multisets, lower-regularity,
upper-extensibility, and the hypergraph co-degree function.

Checking is co-NP-like, so every checker has an exact small-instance mode
(full subset enumeration, decided with exact rationals) and a sampled
falsifier for larger instances that can only produce certificates or
"unfalsified".  Exact mode never answers Unfalsified; sampled mode never
answers Verified.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .graphs import Graph, SizeExceededError, _norm_edge
from .rng import SplitMix64

MAX_EXACT_PAIR = 12
MAX_EXACT_UNIFORM = 14
MAX_EXACT_LOWER_PART = 10
MAX_EXACT_LOWER_ARITY = 3
MAX_PARTITE_PATTERN = 6
MAX_PARTITE_PART = 80
MAX_CODEGREE_EDGES = 10**6
MAX_CODEGREE_ARITY = 6

VERIFIED = "verified"
FALSIFIED = "falsified"
UNFALSIFIED = "unfalsified"


@dataclass(frozen=True)
class RegularityVerdict:
    status: str
    certificate: dict | None = None
    samples: int = 0

    def __post_init__(self):
        if self.status not in (VERIFIED, FALSIFIED, UNFALSIFIED):
            raise ValueError(f"bad status {self.status!r}")
        if (self.status == FALSIFIED) != (self.certificate is not None):
            raise ValueError("certificate present iff falsified")


def _threshold(eps: Fraction, size: int) -> int:
    """Cardinality floor for eps-large subsets; fractional values round up,
    and the empty subset is never admitted."""
    return max(1, math.ceil(eps * size))


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x)) if isinstance(x, str) else Fraction(x)


# ---------------------------------------------------------------------------
# (eps, p)-regular pairs
# ---------------------------------------------------------------------------


def _pair_masks(n_u: int, n_w: int, edges) -> list[int]:
    masks = [0] * n_u
    for u, w in edges:
        if not (0 <= u < n_u and 0 <= w < n_w):
            raise ValueError(f"edge ({u},{w}) out of range")
        masks[u] |= 1 << w
    return masks


def _pair_deviates(e_sub: int, su: int, sw: int, d: Fraction, epsp: Fraction) -> bool:
    return abs(Fraction(e_sub, su * sw) - d) > epsp


def check_regular_pair(
    n_u: int,
    n_w: int,
    edges,
    eps,
    p,
    mode: str = "exact",
    samples: int = 0,
    seed: int = 0,
) -> RegularityVerdict:
    """Regular-pair checker: for all U' and W' of cardinality at least an
    eps-fraction, the subpair density must deviate from the pair density by
    at most eps*p.  Exact mode enumerates every qualifying subset pair."""
    eps, p = _frac(eps), _frac(p)
    edges = sorted(set(map(tuple, edges)))
    masks = _pair_masks(n_u, n_w, edges)
    if n_u == 0 or n_w == 0:
        return RegularityVerdict(VERIFIED if mode == "exact" else UNFALSIFIED)
    d = Fraction(len(edges), n_u * n_w)
    epsp = eps * p
    thr_u = _threshold(eps, n_u)
    thr_w = _threshold(eps, n_w)

    if mode == "exact":
        if max(n_u, n_w) > MAX_EXACT_PAIR:
            raise SizeExceededError(
                f"exact pair mode supports sides up to {MAX_EXACT_PAIR}"
            )
        # Enumerate W' fully; for each W' and each |U'|, extremal densities
        # are reached by the top/bottom degree sums, so only those need tests.
        for wmask in range(1, 1 << n_w):
            sw = wmask.bit_count()
            if sw < thr_w:
                continue
            cnt = sorted(
                ((masks[u] & wmask).bit_count(), u) for u in range(n_u)
            )
            prefix = [0]
            for c, _ in cnt:
                prefix.append(prefix[-1] + c)
            total = prefix[-1]
            for su in range(thr_u, n_u + 1):
                bottom = prefix[su]
                top = total - prefix[n_u - su]
                for e_sub, pick in ((top, cnt[n_u - su:]), (bottom, cnt[:su])):
                    if _pair_deviates(e_sub, su, sw, d, epsp):
                        u_set = sorted(u for _, u in pick)
                        w_set = [w for w in range(n_w) if wmask >> w & 1]
                        return RegularityVerdict(
                            FALSIFIED,
                            certificate={
                                "U": u_set,
                                "W": w_set,
                                "edges_between": e_sub,
                                "subpair_density": str(Fraction(e_sub, su * sw)),
                                "pair_density": str(d),
                                "allowed_deviation": str(epsp),
                            },
                        )
        return RegularityVerdict(VERIFIED)

    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = SplitMix64(seed)
    for _ in range(samples):
        usel = _random_large_subset(rng, n_u, thr_u)
        wsel = _random_large_subset(rng, n_w, thr_w)
        wmask = 0
        for w in wsel:
            wmask |= 1 << w
        e_sub = sum((masks[u] & wmask).bit_count() for u in usel)
        if _pair_deviates(e_sub, len(usel), len(wsel), d, epsp):
            return RegularityVerdict(
                FALSIFIED,
                certificate={
                    "U": sorted(usel),
                    "W": sorted(wsel),
                    "edges_between": e_sub,
                    "subpair_density": str(Fraction(e_sub, len(usel) * len(wsel))),
                    "pair_density": str(d),
                    "allowed_deviation": str(epsp),
                },
                samples=samples,
            )
    return RegularityVerdict(UNFALSIFIED, samples=samples)


def recheck_pair_certificate(n_u, n_w, edges, eps, p, certificate) -> bool:
    """Re-verify a falsification certificate exactly from its stored subsets."""
    eps, p = _frac(eps), _frac(p)
    edges = set(map(tuple, edges))
    u_set, w_set = certificate["U"], certificate["W"]
    if len(u_set) < _threshold(eps, n_u) or len(w_set) < _threshold(eps, n_w):
        return False
    e_sub = sum(1 for u in u_set for w in w_set if (u, w) in edges)
    if e_sub != certificate["edges_between"]:
        return False
    d = Fraction(len(edges), n_u * n_w)
    return _pair_deviates(e_sub, len(u_set), len(w_set), d, eps * p)


def _random_large_subset(rng: SplitMix64, n: int, thr: int) -> list[int]:
    while True:
        sel = [i for i in range(n) if rng.next_u64() & 1]
        if len(sel) >= thr:
            return sel


# ---------------------------------------------------------------------------
# (eta, p)-upper-uniformity
# ---------------------------------------------------------------------------


def check_upper_uniform(
    g: Graph,
    eta,
    p,
    mode: str = "exact",
    samples: int = 0,
    seed: int = 0,
) -> RegularityVerdict:
    """No pair of disjoint eta-large vertex sets may carry more than
    (1+eta) * p * |U| * |W| edges."""
    eta, p = _frac(eta), _frac(p)
    n = g.vertex_count
    thr = _threshold(eta, n)
    masks = g.adjacency_masks()

    def bound(su: int, sw: int) -> Fraction:
        return (1 + eta) * p * su * sw

    def certificate(u_set, w_set, e_sub):
        return {
            "U": sorted(u_set),
            "W": sorted(w_set),
            "edges_between": e_sub,
            "bound": str(bound(len(u_set), len(w_set))),
        }

    if mode == "exact":
        if n > MAX_EXACT_UNIFORM:
            raise SizeExceededError(
                f"exact uniformity mode supports up to {MAX_EXACT_UNIFORM} vertices"
            )
        for umask in range(1, 1 << n):
            su = umask.bit_count()
            if su < thr:
                continue
            rest = [w for w in range(n) if not umask >> w & 1]
            if len(rest) < thr:
                continue
            cnt = sorted(
                ((masks[w] & umask).bit_count(), w) for w in rest
            )
            prefix = [0]
            for c, _ in cnt:
                prefix.append(prefix[-1] + c)
            total = prefix[-1]
            for sw in range(thr, len(rest) + 1):
                top = total - prefix[len(rest) - sw]
                if top > bound(su, sw):
                    u_set = [u for u in range(n) if umask >> u & 1]
                    w_set = sorted(w for _, w in cnt[len(rest) - sw:])
                    return RegularityVerdict(
                        FALSIFIED, certificate=certificate(u_set, w_set, top)
                    )
        return RegularityVerdict(VERIFIED)

    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = SplitMix64(seed)
    for _ in range(samples):
        while True:
            labels = [rng.randrange(3) for _ in range(n)]
            u_set = [v for v in range(n) if labels[v] == 0]
            w_set = [v for v in range(n) if labels[v] == 1]
            if len(u_set) >= thr and len(w_set) >= thr:
                break
        umask = 0
        for u in u_set:
            umask |= 1 << u
        e_sub = sum((masks[w] & umask).bit_count() for w in w_set)
        if e_sub > bound(len(u_set), len(w_set)):
            return RegularityVerdict(
                FALSIFIED,
                certificate=certificate(u_set, w_set, e_sub),
                samples=samples,
            )
    return RegularityVerdict(UNFALSIFIED, samples=samples)


def recheck_uniform_certificate(g: Graph, eta, p, certificate) -> bool:
    eta, p = _frac(eta), _frac(p)
    u_set, w_set = certificate["U"], certificate["W"]
    if set(u_set) & set(w_set):
        return False
    thr = _threshold(eta, g.vertex_count)
    if len(u_set) < thr or len(w_set) < thr:
        return False
    e_sub = sum(1 for u in u_set for w in w_set if g.has_edge(u, w))
    return e_sub > (1 + eta) * p * len(u_set) * len(w_set)


# ---------------------------------------------------------------------------
# partite systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartiteSystem:
    """Vertex-partitioned graph on equal parts indexed by pattern vertices;
    edges live only between parts that are pattern edges.  Vertices are local
    per-part indices 0..part_size-1."""

    part_size: int
    part_count: int
    pairs: dict

    def __post_init__(self):
        norm = {}
        for key, es in self.pairs.items():
            i, j = key
            if not 0 <= i < j < self.part_count:
                raise ValueError(f"bad part pair {key}")
            for a, b in es:
                if not (0 <= a < self.part_size and 0 <= b < self.part_size):
                    raise ValueError(f"edge ({a},{b}) outside parts")
            norm[(i, j)] = frozenset(map(tuple, es))
        object.__setattr__(self, "pairs", norm)

    def pair_edges(self, i: int, j: int) -> frozenset:
        if i < j:
            return self.pairs.get((i, j), frozenset())
        return frozenset((b, a) for a, b in self.pairs.get((j, i), frozenset()))

    def to_json_dict(self) -> dict:
        return {
            "parts": {"count": self.part_count, "size": self.part_size},
            "pairs": {
                f"{i}-{j}": sorted(map(list, es))
                for (i, j), es in sorted(self.pairs.items())
            },
        }

    @staticmethod
    def from_json_dict(data: dict) -> "PartiteSystem":
        pairs = {}
        for key, es in data["pairs"].items():
            i, j = key.split("-")
            pairs[(int(i), int(j))] = [tuple(e) for e in es]
        return PartiteSystem(
            part_size=data["parts"]["size"],
            part_count=data["parts"]["count"],
            pairs=pairs,
        )


@dataclass(frozen=True)
class RootHypergraph:
    """Partite |R|-uniform hypergraph on the first `arity` parts: each edge is
    a positional tuple with one vertex per root part."""

    part_size: int
    arity: int
    edges: frozenset

    def __post_init__(self):
        norm = set()
        for e in self.edges:
            e = tuple(e)
            if len(e) != self.arity:
                raise ValueError(f"edge {e} has wrong arity")
            if any(not 0 <= v < self.part_size for v in e):
                raise ValueError(f"edge {e} outside parts")
            norm.add(e)
        object.__setattr__(self, "edges", frozenset(norm))

    @staticmethod
    def complete(part_size: int, arity: int) -> "RootHypergraph":
        return RootHypergraph(
            part_size,
            arity,
            frozenset(itertools.product(range(part_size), repeat=arity)),
        )


def complete_partite_system(pattern: Graph, part_size: int) -> PartiteSystem:
    full = frozenset(itertools.product(range(part_size), repeat=2))
    return PartiteSystem(
        part_size,
        pattern.vertex_count,
        {e: full for e in sorted(pattern.edges)},
    )


def random_partite_system(
    pattern: Graph, part_size: int, edges_per_pair: int, seed: int
) -> PartiteSystem:
    """Uniform system with exactly `edges_per_pair` edges in each pattern-edge
    pair (the desk-scale stand-in for the random partite classes)."""
    if edges_per_pair > part_size * part_size:
        raise ValueError("too many edges per pair")
    rng = SplitMix64(seed)
    pairs = {}
    for e in sorted(pattern.edges):
        picks = rng.sample_indices(part_size * part_size, edges_per_pair)
        pairs[e] = [(idx // part_size, idx % part_size) for idx in picks]
    return PartiteSystem(part_size, pattern.vertex_count, pairs)


def _partite_order(pattern: Graph, pinned: int):
    n = pattern.vertex_count
    adj = pattern.adjacency()
    order = list(range(pinned))
    placed = set(order)
    while len(order) < n:
        best, best_key = None, None
        for v in range(n):
            if v in placed:
                continue
            key = (len(adj[v] & placed), len(adj[v]))
            if best_key is None or key > best_key:
                best, best_key = v, key
        order.append(best)
        placed.add(best)
    return order


def count_partite_copies(
    system: PartiteSystem, pattern: Graph, roots: tuple[int, ...] = ()
) -> int:
    """Exact number of partite copies of the pattern: one vertex per part with
    an edge wherever the pattern has one.  `roots` pins the first parts."""
    if pattern.vertex_count > MAX_PARTITE_PATTERN:
        raise SizeExceededError(f"pattern capped at {MAX_PARTITE_PATTERN} vertices")
    if system.part_size > MAX_PARTITE_PART:
        raise SizeExceededError(f"parts capped at {MAX_PARTITE_PART}")
    if system.part_count != pattern.vertex_count:
        raise ValueError("system parts must match pattern vertices")
    n = pattern.vertex_count
    adj_map = {}
    for i, j in pattern.edges:
        adj_map[(i, j)] = _neighbor_map(system.pair_edges(i, j))
        adj_map[(j, i)] = _neighbor_map(system.pair_edges(j, i))
    order = _partite_order(pattern, len(roots))
    pat_adj = pattern.adjacency()
    back = []
    for idx, v in enumerate(order):
        back.append([u for u in order[:idx] if u in pat_adj[v]])
    assignment = {}
    for i, r in enumerate(roots):
        assignment[order[i]] = r
    for idx in range(len(roots)):
        v = order[idx]
        for u in back[idx]:
            if assignment[v] not in adj_map[(u, v)].get(assignment[u], ()):
                return 0

    def rec(idx: int) -> int:
        if idx == n:
            return 1
        v = order[idx]
        if back[idx]:
            cands = adj_map[(back[idx][0], v)].get(assignment[back[idx][0]], set())
            for u in back[idx][1:]:
                cands = cands & adj_map[(u, v)].get(assignment[u], set())
        else:
            cands = range(system.part_size)
        total = 0
        for x in cands:
            assignment[v] = x
            total += rec(idx + 1)
        if v in assignment:
            del assignment[v]
        return total

    return rec(len(roots))


def _neighbor_map(edges) -> dict:
    out: dict[int, set] = {}
    for a, b in edges:
        out.setdefault(a, set()).add(b)
    return out


def pattern_minus_roots(pattern: Graph, arity: int) -> Graph:
    """The pattern with edges among its first `arity` vertices removed."""
    return Graph(
        pattern.vertex_count,
        frozenset(e for e in pattern.edges if not (e[0] < arity and e[1] < arity)),
    )


@dataclass(frozen=True)
class ProjectedMultiset:
    """Root tuples of a root hypergraph weighted by how many partite copies of
    the de-rooted pattern extend them."""

    multiplicities: dict
    total_multiplicity: int
    support_size: int


def build_T(
    system: PartiteSystem, pattern: Graph, roots: RootHypergraph
) -> ProjectedMultiset:
    """Project partite copies of the de-rooted pattern onto the root parts and
    accumulate multiplicity on tuples that are edges of the root hypergraph."""
    if roots.part_size != system.part_size:
        raise ValueError("root hypergraph and system sizes disagree")
    minus = pattern_minus_roots(pattern, roots.arity)
    mult = {}
    total = 0
    for e in sorted(roots.edges):
        c = count_partite_copies(system, minus, roots=e)
        if c:
            mult[e] = c
            total += c
    return ProjectedMultiset(mult, total, len(mult))


# ---------------------------------------------------------------------------
# lower-regularity and upper-extensibility of root hypergraphs
# ---------------------------------------------------------------------------


def _root_internal_edge_count(pattern: Graph, arity: int) -> int:
    return sum(1 for u, w in pattern.edges if u < arity and w < arity)


def check_lower_regular(
    roots: RootHypergraph,
    pattern: Graph,
    q,
    eps,
    mode: str = "exact",
    samples: int = 0,
    seed: int = 0,
) -> RegularityVerdict:
    """Every tuple of eps-large part subsets must induce at least
    q^(root-internal pattern edges) times the product of subset sizes edges."""
    q, eps = _frac(q), _frac(eps)
    n = roots.part_size
    e_fr = _root_internal_edge_count(pattern, roots.arity)
    qpow = q**e_fr
    thr = _threshold(eps, n)

    def bound(sizes) -> Fraction:
        out = qpow
        for s in sizes:
            out *= s
        return out

    def certificate(subsets, count):
        return {
            "subsets": [sorted(s) for s in subsets],
            "edges_induced": count,
            "bound": str(bound([len(s) for s in subsets])),
        }

    if mode == "exact":
        if roots.arity > MAX_EXACT_LOWER_ARITY or n > MAX_EXACT_LOWER_PART:
            raise SizeExceededError(
                "exact lower-regularity mode supports arity <= "
                f"{MAX_EXACT_LOWER_ARITY} and parts up to {MAX_EXACT_LOWER_PART}"
            )
        if roots.arity == 2:
            return _lower_regular_exact_2(roots, thr, bound, certificate)
        if roots.arity == 3:
            return _lower_regular_exact_3(roots, thr, bound, certificate)
        raise SizeExceededError("exact mode needs arity 2 or 3")

    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = SplitMix64(seed)
    for _ in range(samples):
        subsets = [
            set(_random_large_subset(rng, n, thr)) for _ in range(roots.arity)
        ]
        count = sum(
            1
            for e in roots.edges
            if all(v in subsets[i] for i, v in enumerate(e))
        )
        if count < bound([len(s) for s in subsets]):
            return RegularityVerdict(
                FALSIFIED,
                certificate=certificate(subsets, count),
                samples=samples,
            )
    return RegularityVerdict(UNFALSIFIED, samples=samples)


def _lower_regular_exact_2(roots, thr, bound, certificate):
    n = roots.part_size
    masks = [0] * n  # masks[a] over part 2
    for a, b in roots.edges:
        masks[a] |= 1 << b
    for amask in range(1, 1 << n):
        sa = amask.bit_count()
        if sa < thr:
            continue
        # degree of each b into the chosen A-subset
        deg = sorted(
            (sum(1 for a in range(n) if amask >> a & 1 and masks[a] >> b & 1), b)
            for b in range(n)
        )
        prefix = [0]
        for c, _ in deg:
            prefix.append(prefix[-1] + c)
        for sb in range(thr, n + 1):
            bottom = prefix[sb]
            if bottom < bound((sa, sb)):
                a_set = [a for a in range(n) if amask >> a & 1]
                b_set = sorted(b for _, b in deg[:sb])
                return RegularityVerdict(
                    FALSIFIED, certificate=certificate([a_set, b_set], bottom)
                )
    return RegularityVerdict(VERIFIED)


def _lower_regular_exact_3(roots, thr, bound, certificate):
    n = roots.part_size
    by_ab: dict[tuple[int, int], list[int]] = {}
    for a, b, c in roots.edges:
        by_ab.setdefault((a, b), []).append(c)
    for amask in range(1, 1 << n):
        sa = amask.bit_count()
        if sa < thr:
            continue
        # weight[b][c] = number of chosen a with (a,b,c) an edge
        weight = [[0] * n for _ in range(n)]
        for (a, b), cs in by_ab.items():
            if amask >> a & 1:
                row = weight[b]
                for c in cs:
                    row[c] += 1
        # incremental subset sums over the B side
        cnt_by_mask = {0: [0] * n}
        order = []
        for bmask in range(1, 1 << n):
            low = bmask & -bmask
            prev = cnt_by_mask[bmask ^ low]
            row = weight[low.bit_length() - 1]
            cur = [prev[i] + row[i] for i in range(n)]
            cnt_by_mask[bmask] = cur
            sb = bmask.bit_count()
            if sb < thr:
                continue
            csorted = sorted(cur)
            run = list(itertools.accumulate(csorted))
            for sc in range(thr, n + 1):
                bottom = run[sc - 1]
                if bottom < bound((sa, sb, sc)):
                    a_set = [a for a in range(n) if amask >> a & 1]
                    b_set = [b for b in range(n) if bmask >> b & 1]
                    paired = sorted(zip(cur, range(n)))
                    c_set = sorted(c for _, c in paired[:sc])
                    return RegularityVerdict(
                        FALSIFIED,
                        certificate=certificate([a_set, b_set, c_set], bottom),
                    )
    return RegularityVerdict(VERIFIED)


def check_upper_extensible(
    roots: RootHypergraph, pattern: Graph, q, bound_factor
) -> tuple[bool, dict | None]:
    """Degree bound for every induced subgraph of the pattern's root part:
    tuples over its parts may extend to at most
    (A*q)^(root edges - subgraph edges) * n^(arity - subgraph vertices) edges.
    Returns (ok, worst-violating witness or None)."""
    q = _frac(q)
    A = _frac(bound_factor)
    n = roots.part_size
    arity = roots.arity
    e_fr = _root_internal_edge_count(pattern, arity)
    worst = None
    ok = True
    for parts in itertools.chain.from_iterable(
        itertools.combinations(range(arity), k) for k in range(arity + 1)
    ):
        sub_edges = sum(
            1 for u, w in pattern.edges if u in parts and w in parts
        )
        limit = (A * q) ** (e_fr - sub_edges) * Fraction(n) ** (arity - len(parts))
        degrees: dict[tuple, int] = {}
        for e in roots.edges:
            key = tuple(e[i] for i in parts)
            degrees[key] = degrees.get(key, 0) + 1
        if not degrees:
            continue
        key, deg = max(degrees.items(), key=lambda kv: (kv[1], kv[0]))
        if deg > limit:
            ok = False
            excess = Fraction(deg) / limit if limit > 0 else None
            if worst is None or (excess is not None and excess > worst["excess"]):
                worst = {
                    "parts": list(parts),
                    "tuple": list(key),
                    "degree": deg,
                    "bound": str(limit),
                    "excess": excess,
                }
    if worst is not None:
        worst = dict(worst)
        worst["excess"] = str(worst["excess"])
    return ok, worst


# ---------------------------------------------------------------------------
# co-degree function
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CodegreeReport:
    """Weighted co-degree summary of an r-uniform hypergraph at scale tau."""

    tau: float
    arity: int
    vertex_count: int
    edge_count: int
    average_degree: float
    per_level: tuple[tuple[int, float, float], ...]  # (j, max d^(j), delta_j)
    delta: float

    def recompute_delta(self) -> float:
        r = self.arity
        total = sum(
            dj * 2.0 ** (-math.comb(j - 1, 2)) for j, _, dj in self.per_level
        )
        return 2.0 ** (math.comb(r, 2) - 1) * total


def codegree_function(vertex_count: int, edges, tau: float) -> CodegreeReport:
    """The container-method co-degree function: for each level j, the average
    over vertices of the maximum j-wise co-degree through the vertex,
    normalized by tau^(j-1) and the average degree, then combined with the
    standard binomial weights.  Zero average degree gives zero."""
    edges = [tuple(sorted(set(e))) for e in edges]
    if not edges:
        return CodegreeReport(tau, 0, vertex_count, 0, 0.0, (), 0.0)
    arity = len(edges[0])
    if any(len(e) != arity for e in edges):
        raise ValueError("edges must be uniform")
    if arity > MAX_CODEGREE_ARITY:
        raise SizeExceededError(f"arity capped at {MAX_CODEGREE_ARITY}")
    if len(edges) > MAX_CODEGREE_EDGES:
        raise SizeExceededError(f"at most {MAX_CODEGREE_EDGES} edges")
    if vertex_count <= 0:
        raise ValueError("need at least one vertex")
    d = arity * len(edges) / vertex_count
    if d == 0:
        return CodegreeReport(tau, arity, vertex_count, len(edges), 0.0, (), 0.0)
    per_level = []
    delta = 0.0
    for j in range(2, arity + 1):
        co: dict[tuple, int] = {}
        for e in edges:
            for sub in itertools.combinations(e, j):
                co[sub] = co.get(sub, 0) + 1
        best: dict[int, int] = {}
        for sub, c in co.items():
            for v in sub:
                if c > best.get(v, 0):
                    best[v] = c
        total = float(sum(best.values()))
        delta_j = total / (tau ** (j - 1) * vertex_count * d)
        max_dj = float(max(best.values(), default=0))
        per_level.append((j, max_dj, delta_j))
        delta += delta_j * 2.0 ** (-math.comb(j - 1, 2))
    delta *= 2.0 ** (math.comb(arity, 2) - 1)
    return CodegreeReport(
        tau, arity, vertex_count, len(edges), d, tuple(per_level), delta
    )


def extension_hypergraph(roots: RootHypergraph, pattern: Graph):
    """The hypergraph whose vertices are the potential partite edges of the
    de-rooted pattern and whose edges are partite copies rooted at an edge of
    the root hypergraph (the complete-host case, where every root tuple has
    all n^(v-|R|) extensions).

    Returns (vertex_count, list of hyperedges, pair index map)."""
    n = roots.part_size
    arity = roots.arity
    minus = pattern_minus_roots(pattern, arity)
    pairs = sorted(minus.edges)
    pair_index = {e: i for i, e in enumerate(pairs)}
    free = [v for v in range(pattern.vertex_count) if v >= arity]
    total_edges = len(roots.edges) * n ** len(free)
    if total_edges > MAX_CODEGREE_EDGES:
        raise SizeExceededError("extension hypergraph too large")

    def vertex_id(i, j, a, b):
        # oriented pair (i < j): a in part i, b in part j
        return pair_index[(i, j)] * n * n + a * n + b

    hyperedges = []
    for root in sorted(roots.edges):
        for assign in itertools.product(range(n), repeat=len(free)):
            placement = dict(zip(free, assign))
            placement.update({i: root[i] for i in range(arity)})
            hyperedges.append(
                tuple(
                    sorted(
                        vertex_id(i, j, placement[i], placement[j])
                        for i, j in pairs
                    )
                )
            )
    return len(pairs) * n * n, hyperedges, pair_index


def check_partite_class_membership(
    system: PartiteSystem,
    pattern: Graph,
    edges_per_pair: int,
    eps,
    mode: str = "exact",
    samples: int = 0,
    seed: int = 0,
) -> RegularityVerdict:
    """Membership in the class of pattern-partite systems with exactly m edges
    per pattern-edge pair, every pair regular at its own density."""
    if set(system.pairs) != set(pattern.edges):
        return RegularityVerdict(
            FALSIFIED,
            certificate={"reason": "pair support differs from pattern edges"},
        )
    for key in sorted(system.pairs):
        es = system.pairs[key]
        if len(es) != edges_per_pair:
            return RegularityVerdict(
                FALSIFIED,
                certificate={
                    "reason": "wrong pair size",
                    "pair": list(key),
                    "edges": len(es),
                    "expected": edges_per_pair,
                },
            )
        density = Fraction(len(es), system.part_size**2)
        verdict = check_regular_pair(
            system.part_size,
            system.part_size,
            sorted(es),
            eps,
            density,
            mode=mode,
            samples=samples,
            seed=seed,
        )
        if verdict.status != (VERIFIED if mode == "exact" else UNFALSIFIED):
            cert = dict(verdict.certificate or {})
            cert["pair"] = list(key)
            return RegularityVerdict(FALSIFIED, certificate=cert, samples=verdict.samples)
    return RegularityVerdict(
        VERIFIED if mode == "exact" else UNFALSIFIED,
        samples=samples if mode == "sampled" else 0,
    )
