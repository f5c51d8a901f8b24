"""Derived hypergraphs: general Kneser hypergraphs, categorical products
(minimal-edge and implicit forms), the H(n,k,a) family, and the induced
equitable-defect hypergraph used by the composite-modulus reduction.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product as iproduct

from .bits import bits_of
from .hypergraph import (
    MAX_VERTICES,
    CapExceededError,
    Coloring,
    Hypergraph,
)

# 2^n enumeration of induced subhypergraphs is only attempted up to here.
T_ENUM_CAP = 16


def complete_uniform(n: int, k: int) -> Hypergraph:
    """The complete k-uniform hypergraph on [n] (all k-subsets)."""
    if k < 1:
        raise ValueError(f"edge size must be >= 1, got {k}")
    if k > n:
        raise ValueError(f"edge size {k} exceeds vertex count {n}")
    return Hypergraph(n, combinations(range(1, n + 1), k))


def hnka(n: int, k: int, a: int) -> Hypergraph:
    """k-subsets of [n] that are not contained in [a]."""
    if a >= n:
        raise ValueError(f"excluded prefix a={a} must be smaller than n={n}")
    if a < 0 or k < 1:
        raise ValueError("need a >= 0 and k >= 1")
    edges = [e for e in combinations(range(1, n + 1), k) if e[-1] > a]
    return Hypergraph(n, edges)


def star(n: int) -> Hypergraph:
    """All 2-edges from vertex n to the others (center = n); needs n >= 2."""
    if n < 2:
        raise ValueError("star needs at least 2 vertices")
    return Hypergraph(n, [(i, n) for i in range(1, n)])


def cycle(n: int) -> Hypergraph:
    """The n-cycle graph; needs n >= 3."""
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    edges = [(i, i + 1) for i in range(1, n)] + [(1, n)]
    return Hypergraph(n, edges)


def edgeless(n: int) -> Hypergraph:
    return Hypergraph(n, [])


def kneser(H: Hypergraph, r: int) -> Hypergraph:
    """General Kneser hypergraph: one vertex per edge of ``H`` (in canonical
    edge order), hyperedges = r-sets of pairwise disjoint edges of ``H``."""
    if r < 2:
        raise ValueError(f"Kneser construction needs r >= 2, got {r}")
    masks = H.edge_masks
    m = len(masks)
    if m > MAX_VERTICES:
        raise CapExceededError(f"{m} edges exceed vertex cap {MAX_VERTICES}")
    hyperedges: list[tuple[int, ...]] = []

    def extend(start: int, chosen: list[int], union: int) -> None:
        if len(chosen) == r:
            hyperedges.append(tuple(chosen))
            return
        # not enough edges left to complete an r-set
        if m - start < r - len(chosen):
            return
        for i in range(start, m):
            if masks[i] & union == 0:
                chosen.append(i + 1)
                extend(i + 1, chosen, union | masks[i])
                chosen.pop()

    extend(0, [], 0)
    return Hypergraph(m, hyperedges)


@lru_cache(maxsize=None)
def minimal_covers(r1: int, r2: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """All inclusion-minimal subsets of the [r1] x [r2] grid whose row and
    column projections are both full, ordered by size then lexicographically.

    A minimal cover is a forest (otherwise a cycle edge could be dropped),
    so its size is at most r1 + r2 - 1; that bounds the enumeration.
    """
    if r1 < 1 or r2 < 1:
        raise ValueError("grid dimensions must be >= 1")
    cells = [(i, j) for i in range(1, r1 + 1) for j in range(1, r2 + 1)]
    found: list[tuple[tuple[int, int], ...]] = []
    for size in range(1, r1 + r2):
        for combo in combinations(cells, size):
            rows = [0] * (r1 + 1)
            cols = [0] * (r2 + 1)
            for i, j in combo:
                rows[i] += 1
                cols[j] += 1
            if 0 in rows[1:] or 0 in cols[1:]:
                continue
            # minimal iff every cell is the last of its row or column
            if all(rows[i] == 1 or cols[j] == 1 for i, j in combo):
                found.append(combo)
    return tuple(found)


@lru_cache(maxsize=None)
def _full_covers(r1: int, r2: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """All subsets of the [r1] x [r2] grid with full projections (oracle-grade
    enumeration; used to materialize full categorical products)."""
    if r1 * r2 > 16:
        raise CapExceededError("full cover enumeration capped at 16 grid cells")
    cells = [(i, j) for i in range(1, r1 + 1) for j in range(1, r2 + 1)]
    out = []
    for size in range(1, r1 * r2 + 1):
        for combo in combinations(cells, size):
            if len({i for i, _ in combo}) == r1 and len({j for _, j in combo}) == r2:
                out.append(combo)
    return tuple(out)


@dataclass(frozen=True)
class ProductSpace:
    """Row-major tuple <-> integer bijection for a product vertex space."""

    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.dims:
            raise ValueError("product needs at least one factor")
        if any(d < 0 for d in self.dims):
            raise ValueError("dimensions must be nonnegative")

    @classmethod
    def for_factors(cls, factors: Sequence[Hypergraph]) -> ProductSpace:
        return cls(tuple(H.n for H in factors))

    @property
    def size(self) -> int:
        out = 1
        for d in self.dims:
            out *= d
        return out

    def index_of(self, tup: Sequence[int]) -> int:
        if len(tup) != len(self.dims):
            raise ValueError("tuple arity mismatch")
        idx = 0
        for v, d in zip(tup, self.dims):
            if not 1 <= v <= d:
                raise ValueError(f"coordinate {v} outside [1..{d}]")
            idx = idx * d + (v - 1)
        return idx + 1

    def tuple_of(self, index: int) -> tuple[int, ...]:
        if not 1 <= index <= self.size:
            raise ValueError(f"index {index} outside [1..{self.size}]")
        rem = index - 1
        out = []
        for d in reversed(self.dims):
            out.append(rem % d + 1)
            rem //= d
        return tuple(reversed(out))


def _product2_minimal(H1: Hypergraph, H2: Hypergraph) -> Hypergraph:
    space = ProductSpace((H1.n, H2.n))
    if space.size > MAX_VERTICES:
        raise CapExceededError(
            f"product on {space.size} vertices exceeds cap {MAX_VERTICES}; "
            "use the implicit checker (product_is_proper / product_chromatic)"
        )
    candidates: set[int] = set()
    for e1 in H1.edges:
        for e2 in H2.edges:
            for cover in minimal_covers(len(e1), len(e2)):
                mask = 0
                for i, j in cover:
                    mask |= 1 << (space.index_of((e1[i - 1], e2[j - 1])) - 1)
                candidates.add(mask)
    # nested factor edges can make a cover of one box contain a smaller
    # product edge from another box, so filter to inclusion-minimal masks
    kept: list[int] = []
    for mask in sorted(candidates, key=lambda m: (m.bit_count(), m)):
        if not any(k & ~mask == 0 for k in kept):
            kept.append(mask)
    kept.sort(key=lambda m: (m.bit_count(), tuple(bits_of(m))))
    return Hypergraph(space.size, [tuple(bits_of(m)) for m in kept])


def product_minimal(factors: Sequence[Hypergraph]) -> Hypergraph:
    """Minimal-edge form of the categorical product, folded pairwise
    left-to-right; it has the same chromatic number as the full product."""
    if not factors:
        raise ValueError("product needs at least one factor")
    out = factors[0]
    for H in factors[1:]:
        out = _product2_minimal(out, H)
    return out


def _product2_full(H1: Hypergraph, H2: Hypergraph) -> Hypergraph:
    space = ProductSpace((H1.n, H2.n))
    if space.size > MAX_VERTICES:
        raise CapExceededError("full product exceeds the vertex cap")
    edges: list[tuple[int, ...]] = []
    for e1 in H1.edges:
        for e2 in H2.edges:
            for cover in _full_covers(len(e1), len(e2)):
                edges.append(
                    tuple(space.index_of((e1[i - 1], e2[j - 1])) for i, j in cover)
                )
    return Hypergraph(space.size, edges)


def product_full(factors: Sequence[Hypergraph]) -> Hypergraph:
    """The categorical product with every hyperedge materialized.

    Exponential in edge sizes; intended as a desk-scale oracle for the
    minimal-edge form and for validating witnesses.
    """
    if not factors:
        raise ValueError("product needs at least one factor")
    out = factors[0]
    for H in factors[1:]:
        out = _product2_full(out, H)
    return out


def product_is_proper(factors: Sequence[Hypergraph], coloring: Coloring) -> bool:
    """Proper-coloring test on the categorical product without materializing
    its edges.

    The coloring is improper iff some color class, intersected with a box
    e_1 x ... x e_t of factor edges, projects onto all of every e_j: that
    intersection is then itself a monochromatic product edge.
    """
    space = ProductSpace.for_factors(factors)
    if coloring.n != space.size:
        raise ValueError("coloring is not total on the product vertex space")
    t = len(factors)
    by_color: dict[int, list[tuple[int, ...]]] = {}
    for idx, c in enumerate(coloring.colors, start=1):
        by_color.setdefault(c, []).append(space.tuple_of(idx))
    for tuples in by_color.values():
        for box in iproduct(*(H.edges for H in factors)):
            box_sets = [set(e) for e in box]
            covered: list[set[int]] = [set() for _ in range(t)]
            for tup in tuples:
                if all(tup[j] in box_sets[j] for j in range(t)):
                    for j in range(t):
                        covered[j].add(tup[j])
            if all(covered[j] == box_sets[j] for j in range(t)):
                return False
    return True


def t_hypergraph(H: Hypergraph, C: int, s: int, ecd_fn=None) -> Hypergraph:
    """Hypergraph on V(H) whose edges are the vertex subsets A with
    ecd^s(H[A]) > (s-1)*C.

    All qualifying subsets are kept, not only the inclusion-minimal ones;
    proper-coloring semantics are unaffected because supersets of
    monochromatic sets are monochromatic.
    """
    if s < 2:
        raise ValueError("reduction modulus s must be >= 2")
    if C < 0:
        raise ValueError("color budget C must be >= 0")
    if H.n > T_ENUM_CAP:
        raise CapExceededError(
            f"2^{H.n} subset enumeration exceeds cap 2^{T_ENUM_CAP}"
        )
    if ecd_fn is None:
        from .invariants import ecd as ecd_fn  # late import avoids a cycle
    from .hypergraph import induced_mask

    threshold = (s - 1) * C
    edges = []
    for amask in range(1, 1 << H.n):
        if ecd_fn(induced_mask(H, amask), s) > threshold:
            edges.append(tuple(bits_of(amask)))
    return Hypergraph(H.n, edges)
