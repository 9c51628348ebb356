"""Exact rational density calculus for graphs and rooted graphs.

Everything in this module is computed with exact integer/rational arithmetic;
floats are forbidden here because the lemma suites decide strict inequalities.
Densities use the 0/0 = 0 convention throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graphs import Graph, RootedGraph, SizeExceededError, canonical_form

MAX_DENSITY_VERTICES = 20
MAX_RECURSIVE_VERTICES = 10
MAX_ROOTED_VERTICES = 12
MAX_ROOTED2_VERTICES = 20
MAX_COLOR_DEPTH = 8


class XRational:
    """Exact rational with a distinguished +infinity, totally ordered."""

    __slots__ = ("_frac",)

    def __init__(self, numerator=0, denominator=1):
        self._frac = Fraction(numerator, denominator)

    @classmethod
    def infinity(cls) -> "XRational":
        obj = cls.__new__(cls)
        obj._frac = None
        return obj

    @classmethod
    def from_fraction(cls, f: Fraction) -> "XRational":
        obj = cls.__new__(cls)
        obj._frac = Fraction(f)
        return obj

    @classmethod
    def parse(cls, text: str) -> "XRational":
        text = text.strip()
        if text == "inf":
            return cls.infinity()
        return cls.from_fraction(Fraction(text))

    @property
    def is_infinite(self) -> bool:
        return self._frac is None

    @property
    def as_fraction(self) -> Fraction:
        if self._frac is None:
            raise ValueError("infinite value has no Fraction form")
        return self._frac

    @property
    def numerator(self) -> int:
        return self.as_fraction.numerator

    @property
    def denominator(self) -> int:
        return self.as_fraction.denominator

    @staticmethod
    def _coerce(other):
        if isinstance(other, XRational):
            return other
        if isinstance(other, (int, Fraction)):
            return XRational.from_fraction(Fraction(other))
        return NotImplemented

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._frac == o._frac

    def __hash__(self):
        return hash(("XRational", self._frac))

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self._frac is None:
            return False
        if o._frac is None:
            return True
        return self._frac < o._frac

    def __le__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self == o or self < o

    def __gt__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else o < self

    def __ge__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else o <= self

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self._frac is None or o._frac is None:
            return XRational.infinity()
        return XRational.from_fraction(self._frac + o._frac)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o._frac is None:
            raise ValueError("cannot subtract infinity")
        if self._frac is None:
            return XRational.infinity()
        return XRational.from_fraction(self._frac - o._frac)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self._frac is None or o._frac is None:
            if (self._frac is not None and self._frac <= 0) or (
                o._frac is not None and o._frac <= 0
            ):
                raise ValueError("infinity times nonpositive is undefined")
            return XRational.infinity()
        return XRational.from_fraction(self._frac * o._frac)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o._frac is None:
            if self._frac is None:
                raise ValueError("infinity / infinity is undefined")
            return XRational(0)
        if self._frac is None:
            if o._frac <= 0:
                raise ValueError("infinity over nonpositive is undefined")
            return XRational.infinity()
        return XRational.from_fraction(self._frac / o._frac)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def reciprocal(self) -> "XRational":
        if self._frac is None:
            return XRational(0)
        if self._frac == 0:
            return XRational.infinity()
        return XRational.from_fraction(1 / self._frac)

    def __str__(self):
        if self._frac is None:
            return "inf"
        return str(self._frac)

    def __repr__(self):
        return f"XRational({self})"

    def __float__(self):
        if self._frac is None:
            return float("inf")
        return float(self._frac)


INFINITY = XRational.infinity()


@dataclass(frozen=True)
class DensityReport:
    """Value of a density maximization plus the witnesses attaining it."""

    value: XRational
    maximizers: tuple[Graph, ...]
    strict: bool  # the whole graph is the unique maximizer


@dataclass(frozen=True)
class Balancedness:
    balanced: bool
    strictly_balanced: bool
    one_balanced: bool
    strictly_one_balanced: bool
    two_balanced: bool
    strictly_two_balanced: bool


@dataclass(frozen=True)
class PremiseReport:
    """Main-theorem premise: 2-balanced plus an edge whose removal keeps the
    2-density at most the second-level recursive density."""

    is_2_balanced: bool
    witnesses: tuple[tuple[int, int], ...]

    @property
    def satisfied(self) -> bool:
        return self.is_2_balanced and bool(self.witnesses)


def _induced_stats(masks):
    """Gray-code walk over all nonempty vertex subsets, yielding
    (mask, vertices, induced edge count) with O(1) updates."""
    n = len(masks)
    mask = v = e = 0
    for k in range(1, 1 << n):
        idx = (k & -k).bit_length() - 1
        bit = 1 << idx
        if mask & bit:
            mask ^= bit
            v -= 1
            e -= (masks[idx] & mask).bit_count()
        else:
            e += (masks[idx] & mask).bit_count()
            mask ^= bit
            v += 1
        yield mask, v, e


def _induced_graphs(g: Graph, masks_list) -> tuple[Graph, ...]:
    seen = {}
    for mask in masks_list:
        verts = [v for v in range(g.vertex_count) if mask >> v & 1]
        sub = g.induced(verts)
        if sub.vertex_count <= 16:
            seen.setdefault(canonical_form(sub), sub)
        else:
            seen[mask] = sub
    return tuple(seen.values())


def _scan_density(g: Graph, num_of, den_of, admissible) -> DensityReport:
    """Maximize num_of(v,e)/den_of(v,e) over induced subgraphs (edge deletion
    never increases these densities, so induced subgraphs suffice)."""
    masks = g.adjacency_masks()
    full = (1 << g.vertex_count) - 1
    best_n, best_d = 0, 1
    best_masks: list[int] = []
    for mask, v, e in _induced_stats(masks):
        if not admissible(v, e):
            continue
        num, den = num_of(v, e), den_of(v, e)
        if den == 0:
            if num != 0:
                raise ArithmeticError("positive/0 outside the 0/0 convention")
            num, den = 0, 1  # 0/0 = 0
        cmp = num * best_d - best_n * den
        if cmp > 0:
            best_n, best_d = num, den
            best_masks = [mask]
        elif cmp == 0:
            best_masks.append(mask)
    value = XRational(best_n, best_d)
    if value > 0:
        maximizers = _induced_graphs(g, best_masks)
        strict = best_masks == [full]
    else:
        maximizers = (g,) if g.vertex_count else ()
        strict = False
    return DensityReport(value, maximizers, strict)


def _guard(g: Graph, cap: int, what: str):
    if g.vertex_count > cap:
        raise SizeExceededError(f"{what} supports at most {cap} vertices")


def m(g: Graph) -> DensityReport:
    """max over H with v_H >= 1 of e_H / v_H."""
    _guard(g, MAX_DENSITY_VERTICES, "m")
    return _scan_density(g, lambda v, e: e, lambda v, e: v, lambda v, e: v >= 1)


def m1(g: Graph) -> DensityReport:
    """max over H with v_H >= 2 of e_H / (v_H - 1)."""
    _guard(g, MAX_DENSITY_VERTICES, "m1")
    return _scan_density(g, lambda v, e: e, lambda v, e: v - 1, lambda v, e: v >= 2)


def m2(g: Graph) -> DensityReport:
    """max over H with e_H >= 1 of (e_H - 1) / (v_H - 2), with 0/0 = 0."""
    _guard(g, MAX_DENSITY_VERTICES, "m2")
    return _scan_density(g, lambda v, e: e - 1, lambda v, e: v - 2, lambda v, e: e >= 1)


def m2_bar(g: Graph, r: int) -> DensityReport:
    """Recursive game density: r=1 is m(g); for r >= 2 it maximizes
    e_H / (v_H - 2 + 1/m2_bar(g, r-1)) over subgraphs with an edge."""
    _guard(g, MAX_RECURSIVE_VERTICES, "m2_bar")
    if not 1 <= r <= MAX_COLOR_DEPTH:
        raise ValueError(f"r must be in 1..{MAX_COLOR_DEPTH}")
    if g.edge_count == 0:
        raise ValueError("m2_bar requires at least one edge")
    report = m(g)
    for _ in range(r - 1):
        q = report.value.reciprocal().as_fraction
        a, b = q.numerator, q.denominator
        report = _scan_density(
            g,
            lambda v, e: e * b,
            lambda v, e: b * (v - 2) + a,
            lambda v, e: e >= 1,
        )
    return report


def threshold_exponent(g: Graph, r: int) -> XRational:
    """The game threshold exponent 2 - 1/m2_bar(g, r)."""
    return 2 - m2_bar(g, r).value.reciprocal()


def _rooted_stats(masks, root_mask):
    """Gray-code walk yielding (mask, v, e, roots_in, root_internal_edges)."""
    n = len(masks)
    mask = v = e = rin = er = 0
    for k in range(1, 1 << n):
        idx = (k & -k).bit_length() - 1
        bit = 1 << idx
        is_root = bool(root_mask & bit)
        if mask & bit:
            mask ^= bit
            v -= 1
            e -= (masks[idx] & mask).bit_count()
            if is_root:
                rin -= 1
                er -= (masks[idx] & mask & root_mask).bit_count()
        else:
            e += (masks[idx] & mask).bit_count()
            if is_root:
                rin += 1
                er += (masks[idx] & mask & root_mask).bit_count()
            mask ^= bit
            v += 1
        yield mask, v, e, rin, er


def rooted_m(rg: RootedGraph) -> DensityReport:
    """max over H of (e_H - e_H[R]) / (v_H - |R in H|); all-root subgraphs
    contribute 0 by the 0/0 convention."""
    _guard(rg.graph, MAX_ROOTED_VERTICES, "rooted_m")
    g = rg.graph
    masks = g.adjacency_masks()
    root_mask = 0
    for r in rg.roots:
        root_mask |= 1 << r
    full = (1 << g.vertex_count) - 1
    best_n, best_d = 0, 1
    best_masks: list[int] = []
    for mask, v, e, rin, er in _rooted_stats(masks, root_mask):
        vbar = v - rin
        ebar = e - er
        if vbar == 0:
            continue  # 0/0 = 0, never beats the baseline
        cmp = ebar * best_d - best_n * vbar
        if cmp > 0:
            best_n, best_d = ebar, vbar
            best_masks = [mask]
        elif cmp == 0:
            best_masks.append(mask)
    value = XRational(best_n, best_d)
    if value > 0:
        maximizers = _induced_graphs(g, best_masks)
        strict = best_masks == [full]
    else:
        maximizers = (g,)
        strict = False
    return DensityReport(value, maximizers, strict)


def rooted_density(rg: RootedGraph) -> XRational:
    """d(R,G) = (e_G - e_G[R]) / (v_G - |R|), with 0/0 = 0."""
    vbar = rg.non_root_vertex_count
    ebar = rg.non_root_edge_count
    if vbar == 0:
        if ebar != 0:
            raise ArithmeticError("edges outside roots but no non-root vertex")
        return XRational(0)
    return XRational(ebar, vbar)


def _coerce_t(t) -> Fraction:
    if isinstance(t, XRational):
        if t.is_infinite:
            raise ValueError("t must be finite")
        t = t.as_fraction
    t = Fraction(t)
    if t < 0:
        raise ValueError("t must be nonnegative")
    return t


def rooted_m2(rg: RootedGraph, t) -> XRational:
    """Generalized rooted 2-density: max over H with e_H - e_H[R] > 1 of
    (ebar_H - 1) / (v_H - 2 - t * e_H[R]), infinite when some admissible H
    has a nonpositive denominator; 0 when no H is admissible."""
    _guard(rg.graph, MAX_ROOTED2_VERTICES, "rooted_m2")
    t = _coerce_t(t)
    a, b = t.numerator, t.denominator
    g = rg.graph
    masks = g.adjacency_masks()
    root_mask = 0
    for r in rg.roots:
        root_mask |= 1 << r
    best = None  # (num, den) with den > 0
    for mask, v, e, rin, er in _rooted_stats(masks, root_mask):
        ebar = e - er
        if ebar < 2:
            continue
        den = b * (v - 2) - a * er  # denominator scaled by b
        if den <= 0:
            return INFINITY
        num = (ebar - 1) * b
        if best is None or num * best[1] > best[0] * den:
            best = (num, den)
    if best is None:
        return XRational(0)
    return XRational(best[0], best[1])


def _d_convention(num: int, den: int) -> XRational:
    if den == 0:
        if num != 0:
            raise ArithmeticError("positive/0 outside the 0/0 convention")
        return XRational(0)
    return XRational(num, den)


def balancedness(g: Graph) -> Balancedness:
    """Whether g itself attains (uniquely) the max of m, m1 and m2."""
    _guard(g, MAX_RECURSIVE_VERTICES, "balancedness")
    v, e = g.vertex_count, g.edge_count
    rm, rm1, rm2 = m(g), m1(g), m2(g)
    d = _d_convention(e, v) if v >= 1 else XRational(0)
    d1 = _d_convention(e, v - 1) if v >= 2 else XRational(0)
    d2 = _d_convention(e - 1, v - 2) if e >= 1 else XRational(0)
    return Balancedness(
        balanced=rm.value == d,
        strictly_balanced=rm.value == d and rm.strict,
        one_balanced=rm1.value == d1,
        strictly_one_balanced=rm1.value == d1 and rm1.strict,
        two_balanced=rm2.value == d2,
        strictly_two_balanced=rm2.value == d2 and rm2.strict,
    )


def premise_check(g: Graph) -> PremiseReport:
    """Main-theorem premise for g: 2-balancedness plus the single-edge-deleted
    subgraphs whose 2-density stays at most m2_bar(g, 2)."""
    _guard(g, MAX_RECURSIVE_VERTICES, "premise_check")
    if g.is_forest():
        raise ValueError("premise_check requires a non-forest")
    flags = balancedness(g)
    bound = m2_bar(g, 2).value
    witnesses = tuple(
        e for e in sorted(g.edges) if m2(g.remove_edge(*e)).value <= bound
    )
    return PremiseReport(flags.two_balanced, witnesses)


# ---------------------------------------------------------------------------
# exact densities of product-structured graphs
# ---------------------------------------------------------------------------

MAX_PRODUCT_BASE_VERTICES = 10
MAX_PRODUCT_ATTACH_VERTICES = 18


def _attachment_tables(attach: RootedGraph):
    """For each root-presence pattern (bit0 = first root kept, bit1 = second),
    the maximum attachment edge count per number of chosen non-root vertices.
    Counts include the attachment's own root edge when both roots are present.
    """
    g = attach.graph
    r0, r1 = attach.roots
    others = [v for v in range(g.vertex_count) if v not in (r0, r1)]
    k = len(others)
    if k > MAX_PRODUCT_ATTACH_VERTICES:
        raise SizeExceededError("attachment too large for the product evaluator")
    pos = {v: i for i, v in enumerate(others)}
    inner_masks = [0] * k
    m0 = m1_ = 0
    for u, w in g.edges:
        if u in pos and w in pos:
            inner_masks[pos[u]] |= 1 << pos[w]
            inner_masks[pos[w]] |= 1 << pos[u]
        elif u in pos or w in pos:
            o = pos[u] if u in pos else pos[w]
            root = w if u in pos else u
            if root == r0:
                m0 |= 1 << o
            else:
                m1_ |= 1 << o
    root_edge = 1 if g.has_edge(r0, r1) else 0
    tables = {bits: [-1] * (k + 1) for bits in range(4)}
    mask = size = inner = 0
    states = [(0, 0, 0)]
    for step in range(1, 1 << k):
        idx = (step & -step).bit_length() - 1
        bit = 1 << idx
        if mask & bit:
            mask ^= bit
            size -= 1
            inner -= (inner_masks[idx] & mask).bit_count()
        else:
            inner += (inner_masks[idx] & mask).bit_count()
            mask ^= bit
            size += 1
        states.append((mask, size, inner))
    for mask, size, inner in states:
        c0 = (m0 & mask).bit_count()
        c1 = (m1_ & mask).bit_count()
        for bits in range(4):
            e = inner
            if bits & 1:
                e += c0
            if bits & 2:
                e += c1
            if bits == 3:
                e += root_edge
            if e > tables[bits][size]:
                tables[bits][size] = e
    return tables


def product_rooted_m(base: RootedGraph, attach: RootedGraph) -> XRational:
    """Exact m(R, (R, base) x (e, attach)) without realizing the product.

    Works by Dinkelbach iteration on the linearized objective; per iteration
    the attachments decouple given the base vertex selection, so the realized
    product (which may be far beyond the direct-scan cap) is never scanned.
    """
    if len(attach.roots) != 2:
        raise ValueError("attachment must have exactly two roots")
    g = base.graph
    if g.vertex_count > MAX_PRODUCT_BASE_VERTICES:
        raise SizeExceededError("base too large for the product evaluator")
    tables = _attachment_tables(attach)
    kmax = attach.graph.vertex_count - 2
    root_set = base.root_set
    nb_edges = [
        e for e in sorted(g.edges) if not (e[0] in root_set and e[1] in root_set)
    ]
    n = g.vertex_count
    nonroot = [v for v in range(n) if v not in root_set]

    s = Fraction(0)
    while True:
        best_obj = Fraction(0)
        best_pair = (0, 0)  # (ebar, vbar) of an argmax
        for mask in range(1 << n):
            vbase = sum(1 for v in nonroot if mask >> v & 1)
            obj = -s * vbase
            tot_e, tot_v = 0, vbase
            for u, w in nb_edges:
                bits = (1 if mask >> u & 1 else 0) | (2 if mask >> w & 1 else 0)
                tab = tables[bits]
                bg, be, bk = None, 0, 0
                for kk in range(kmax + 1):
                    gain = tab[kk] - s * kk
                    if bg is None or gain > bg:
                        bg, be, bk = gain, tab[kk], kk
                obj += bg
                tot_e += be
                tot_v += bk
            if obj > best_obj:
                best_obj = obj
                best_pair = (tot_e, tot_v)
        if best_obj <= 0:
            return XRational.from_fraction(s)
        s = Fraction(best_pair[0], best_pair[1])
