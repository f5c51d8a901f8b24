"""Exact chromatic numbers (explicit and implicit-product solvers), the
closed-form Kneser formulas, and lower-bound comparison reports.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from itertools import product as iproduct

from .constructions import ProductSpace, kneser
from .hypergraph import (
    CapExceededError,
    ChromaticValue,
    Coloring,
    Hypergraph,
)
from .invariants import ALT_EXACT_MAX_N, alt_min, cd, ecd

# Implicit product instances beyond this many tuple vertices are not solved
# exactly by bound_report (the solver itself has no hard cap).
PRODUCT_SOLVE_CAP = 20000


class OutOfProvenRangeError(ValueError):
    """Parameters fall in the range where the closed form is not known."""


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


# --- exact solver over explicit edges ----------------------------------------


def _k_colorable(H: Hypergraph, k: int) -> tuple[int, ...] | None:
    """First (lexicographically least) proper k-coloring, or None.

    Backtracking in vertex order with two standard reductions: vertex v may
    only use colors up to one above the maximum used so far (color-order
    symmetry breaking), and an edge with a single uncolored vertex whose
    colored part is monochromatic forbids that color on the open vertex.
    """
    n = H.n
    if H.has_singleton_edge():
        return None
    if n == 0:
        return ()
    if k < 1:
        return None
    edges = H.edges
    at: list[list[int]] = [[] for _ in range(n + 1)]
    for ei, e in enumerate(edges):
        for v in e:
            at[v].append(ei)
    colors = [0] * (n + 1)
    forbid = [[0] * (k + 1) for _ in range(n + 1)]

    def assign(v: int, c: int) -> list[int] | None:
        colors[v] = c
        trail: list[int] = []
        for ei in at[v]:
            open_vertex = 0
            open_count = 0
            mono = True
            for u in edges[ei]:
                cu = colors[u]
                if cu == 0:
                    open_count += 1
                    if open_count > 1:
                        break
                    open_vertex = u
                elif cu != c:
                    mono = False
                    break
            if not mono:
                continue
            if open_count == 0:
                for w in trail:
                    forbid[w][c] -= 1
                colors[v] = 0
                return None
            if open_count == 1:
                forbid[open_vertex][c] += 1
                trail.append(open_vertex)
        return trail

    def dfs(v: int, maxc: int) -> bool:
        if v > n:
            return True
        for c in range(1, min(k, maxc + 1) + 1):
            if forbid[v][c]:
                continue
            trail = assign(v, c)
            if trail is not None:
                if dfs(v + 1, max(maxc, c)):
                    return True
                for w in trail:
                    forbid[w][c] -= 1
                colors[v] = 0
        return False

    if dfs(1, 0):
        return tuple(colors[1:])
    return None


def solve_chromatic(
    H: Hypergraph, limit: int | None = None
) -> tuple[ChromaticValue, Coloring | None]:
    """Exact chromatic number by iterative deepening, with the optimal
    coloring certificate (the lexicographically least color vector)."""
    if H.has_singleton_edge():
        return ChromaticValue.infinite(), None
    k = 1
    while True:
        if limit is not None and k > limit:
            return ChromaticValue.exceeds(limit), None
        sol = _k_colorable(H, k)
        if sol is not None:
            return ChromaticValue.finite(k), Coloring(sol, k)
        k += 1


def chromatic_number(H: Hypergraph, limit: int | None = None) -> ChromaticValue:
    return solve_chromatic(H, limit)[0]


# --- exact solver over implicit categorical products --------------------------


class _ProductSearch:
    """Shared state for coloring a categorical product implicitly.

    Boxes (one per combination of factor edges) are precompiled into flat
    arrays: cell vertex indices plus, per cell, one position bit per factor.
    A color class covering every position of every factor of a box is a
    monochromatic product edge; a box one cell short of that forbids the
    color on each completing cell.
    """

    def __init__(self, factors: Sequence[Hypergraph], k: int) -> None:
        space = ProductSpace.for_factors(factors)
        self.N = space.size
        self.k = k
        self.t = t = len(factors)
        self.boxes: list[tuple[list[int], list[tuple[int, ...]], tuple[int, ...]]] = []
        self.boxes_of: list[list[int]] = [[] for _ in range(self.N + 1)]
        for box in iproduct(*(H.edges for H in factors)):
            cells: list[int] = []
            positions: list[tuple[int, ...]] = []
            for cell in iproduct(*box):
                cells.append(space.index_of(cell))
                positions.append(
                    tuple(1 << box[j].index(cell[j]) for j in range(t))
                )
            fulls = tuple((1 << len(box[j])) - 1 for j in range(t))
            bid = len(self.boxes)
            self.boxes.append((cells, positions, fulls))
            for idx in cells:
                self.boxes_of[idx].append(bid)
        self.colors = [0] * (self.N + 1)
        self.forbid = [[0] * (k + 1) for _ in range(self.N + 1)]

    def assign(self, idx: int, c: int) -> list[int] | None:
        """Color ``idx`` with ``c``; returns the forbid trail, or None (with
        no state change) if a monochromatic product edge would complete."""
        colors = self.colors
        forbid = self.forbid
        colors[idx] = c
        trail: list[int] = []
        t = self.t
        for bid in self.boxes_of[idx]:
            cells, positions, fulls = self.boxes[bid]
            covered = [0] * t
            open_cells: list[int] = []
            for i, ci in enumerate(cells):
                col = colors[ci]
                if col == c:
                    pos = positions[i]
                    for j in range(t):
                        covered[j] |= pos[j]
                elif col == 0:
                    open_cells.append(i)
            complete = True
            one_away = True
            for j in range(t):
                miss = (fulls[j] ^ covered[j]).bit_count()
                if miss:
                    complete = False
                    if miss > 1:
                        one_away = False
                        break
            if complete:
                for w in trail:
                    forbid[w][c] -= 1
                colors[idx] = 0
                return None
            if one_away:
                for i in open_cells:
                    pos = positions[i]
                    if all(covered[j] | pos[j] == fulls[j] for j in range(t)):
                        ci = cells[i]
                        forbid[ci][c] += 1
                        trail.append(ci)
        return trail

    def undo(self, idx: int, c: int, trail: list[int]) -> None:
        for w in trail:
            self.forbid[w][c] -= 1
        self.colors[idx] = 0

    def decide(self) -> bool:
        """Satisfiability only, choosing the most constrained vertex next so
        forbid chains are followed promptly."""
        N, k = self.N, self.k
        colors, forbid = self.colors, self.forbid
        unassigned = set(range(1, N + 1))

        def dfs(maxc: int) -> bool:
            if not unassigned:
                return True
            cap = min(k, maxc + 1)
            v = max(
                unassigned,
                key=lambda u: (sum(1 for c in range(1, cap + 1) if forbid[u][c]), -u),
            )
            unassigned.discard(v)
            for c in range(1, cap + 1):
                if forbid[v][c]:
                    continue
                trail = self.assign(v, c)
                if trail is not None:
                    if dfs(max(maxc, c)):
                        return True
                    self.undo(v, c, trail)
            unassigned.add(v)
            return False

        return dfs(0)

    def lex_solve(self) -> tuple[int, ...] | None:
        """First proper coloring in vertex order with ascending colors: the
        lexicographically least color vector."""
        N, k = self.N, self.k
        forbid = self.forbid

        def dfs(idx: int, maxc: int) -> bool:
            if idx > N:
                return True
            for c in range(1, min(k, maxc + 1) + 1):
                if forbid[idx][c]:
                    continue
                trail = self.assign(idx, c)
                if trail is not None:
                    if dfs(idx + 1, max(maxc, c)):
                        return True
                    self.undo(idx, c, trail)
            return False

        if dfs(1, 0):
            return tuple(self.colors[1:])
        return None


def _k_colorable_product(
    factors: Sequence[Hypergraph], k: int
) -> tuple[int, ...] | None:
    """Lexicographically least proper k-coloring of the categorical product
    (or None), via the box-coverage violation test; product edges are never
    materialized. Satisfiability is decided with a dynamic vertex order
    before the canonical coloring is extracted in static order."""
    if any(H.edge_count == 0 for H in factors):
        # edgeless factor: the product has no edges at all
        space = ProductSpace.for_factors(factors)
        return tuple([1] * space.size) if k >= 1 or space.size == 0 else None
    if k < 1:
        return None
    if not _ProductSearch(factors, k).decide():
        return None
    return _ProductSearch(factors, k).lex_solve()


def solve_product_chromatic(
    factors: Sequence[Hypergraph], limit: int | None = None
) -> tuple[ChromaticValue, Coloring | None]:
    """Exact chromatic number of the categorical product of the factors,
    never materializing product edges."""
    if not factors:
        raise ValueError("product needs at least one factor")
    if len(factors) == 1:
        return solve_chromatic(factors[0], limit)
    if all(H.has_singleton_edge() for H in factors):
        # a box of singleton edges is a singleton product edge
        return ChromaticValue.infinite(), None
    k = 1
    while True:
        if limit is not None and k > limit:
            return ChromaticValue.exceeds(limit), None
        sol = _k_colorable_product(factors, k)
        if sol is not None:
            return ChromaticValue.finite(k), Coloring(sol, k)
        k += 1


def product_chromatic(
    factors: Sequence[Hypergraph], limit: int | None = None
) -> ChromaticValue:
    return solve_product_chromatic(factors, limit)[0]


def projection_coloring(
    factors: Sequence[Hypergraph], which: int, coloring: Coloring
) -> Coloring:
    """Color the product by projecting to factor ``which`` (0-based)."""
    space = ProductSpace.for_factors(factors)
    if coloring.n != factors[which].n:
        raise ValueError("coloring does not fit the chosen factor")
    cols = tuple(
        coloring.color_of(space.tuple_of(i)[which]) for i in range(1, space.size + 1)
    )
    return Coloring(cols, coloring.color_count)


# --- closed forms -------------------------------------------------------------


def formula_kneser(n: int, k: int, r: int) -> int:
    """ceil((n - (k-1) r) / (r-1)), valid for n >= rk, r >= 2."""
    if r < 2:
        raise ValueError("need r >= 2")
    if k < 1:
        raise ValueError("need k >= 1")
    if n < r * k:
        raise ValueError(f"formula needs n >= rk (got n={n}, rk={r * k})")
    return ceil_div(n - (k - 1) * r, r - 1)


def formula_hnka(n: int, k: int, a: int, r: int) -> int:
    """ceil((n - max(a, k-1)) / (r-1)) on the proven parameter range
    (a <= 2k-1 or a >= rk-1); the middle range raises."""
    if r < 2:
        raise ValueError("need r >= 2")
    if n < r * k:
        raise ValueError(f"need n >= rk (got n={n}, rk={r * k})")
    if a >= n or a < 0:
        raise ValueError("need 0 <= a < n")
    if 2 * k <= a <= r * k - 2:
        raise OutOfProvenRangeError(
            f"a={a} lies in the open range [2k, rk-2] = [{2 * k}, {r * k - 2}]"
        )
    return ceil_div(n - max(a, k - 1), r - 1)


@dataclass(frozen=True)
class HnkaFormulaCheck:
    formula_value: int
    exact: ChromaticValue | None
    status: str  # OK | DISCREPANCY | UNCHECKED


def formula_hnka_checked(
    n: int, k: int, a: int, r: int, limit: int | None = None
) -> HnkaFormulaCheck:
    """Evaluate the closed form and cross-check it against the exact solver
    whenever the instance fits; on conflict report both values rather than
    trusting either."""
    from .constructions import hnka

    value = formula_hnka(n, k, a, r)
    try:
        exact, _ = solve_chromatic(kneser(hnka(n, k, a), r), limit)
    except CapExceededError:
        return HnkaFormulaCheck(value, None, "UNCHECKED")
    if not exact.is_finite:
        return HnkaFormulaCheck(value, exact, "UNCHECKED")
    status = "OK" if exact.as_int() == value else "DISCREPANCY"
    return HnkaFormulaCheck(value, exact, status)


# --- bound reports ------------------------------------------------------------


@dataclass(frozen=True)
class FactorBounds:
    """Per-factor invariants and the single-factor lower bounds for
    chi(KG^r(H)): cd_bound = ceil(cd/(r-1)), alt_bound = ceil((n-alt)/(r-1)),
    ecd_bound = ceil(ecd/(r-1))."""

    n: int
    cd: int
    ecd: int
    n_minus_alt: int
    alt_exact: bool
    cd_bound: int
    alt_bound: int
    ecd_bound: int
    kg_chi: ChromaticValue | None

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "cd": self.cd,
            "ecd": self.ecd,
            "n_minus_alt": self.n_minus_alt,
            "alt_exact": self.alt_exact,
            "cd_bound": self.cd_bound,
            "alt_bound": self.alt_bound,
            "ecd_bound": self.ecd_bound,
            "kg_chi": self.kg_chi.to_json() if self.kg_chi else None,
        }


@dataclass(frozen=True)
class BoundReport:
    """Lower bounds for the chromatic number of KG^r(H_1) x ... x KG^r(H_t):
    product_alt_bound uses the smallest n_i - alt_i, product_ecd_bound the
    smallest ecd_i. zhu_status records whether the exact product chromatic
    number equals the smallest factor chromatic number."""

    r: int
    factors: tuple[FactorBounds, ...]
    product_alt_bound: int
    product_ecd_bound: int
    exact_chi: ChromaticValue | None
    zhu_status: str  # VERIFIED | BOUND_ONLY | FAILED

    def check(self) -> list[str]:
        """Internal consistency: every recorded bound must stay at or below
        every exact chromatic number it bounds."""
        problems = []
        for i, f in enumerate(self.factors):
            if f.kg_chi is not None and f.kg_chi.is_finite:
                chi = f.kg_chi.as_int()
                for name, val in (
                    ("cd_bound", f.cd_bound),
                    ("alt_bound", f.alt_bound),
                    ("ecd_bound", f.ecd_bound),
                ):
                    if val > chi:
                        problems.append(f"factor {i + 1}: {name}={val} > chi={chi}")
        if self.exact_chi is not None and self.exact_chi.is_finite:
            chi = self.exact_chi.as_int()
            if self.product_alt_bound > chi:
                problems.append(f"product_alt_bound={self.product_alt_bound} > chi={chi}")
            if self.product_ecd_bound > chi:
                problems.append(f"product_ecd_bound={self.product_ecd_bound} > chi={chi}")
        if self.zhu_status == "FAILED":
            problems.append("zhu_status FAILED")
        return problems

    def to_json_dict(self) -> dict:
        return {
            "r": self.r,
            "factors": [f.to_json_dict() for f in self.factors],
            "product_alt_bound": self.product_alt_bound,
            "product_ecd_bound": self.product_ecd_bound,
            "exact_chi": self.exact_chi.to_json() if self.exact_chi else None,
            "zhu_status": self.zhu_status,
        }


def bound_report(
    factors: Sequence[Hypergraph],
    r: int,
    compute_exact: bool = True,
    limit: int | None = None,
) -> BoundReport:
    """Compute every defect bound for the product of the KG^r of the factors,
    plus exact chromatic numbers when requested and within the solve cap."""
    if r < 2:
        raise ValueError("need r >= 2")
    rows: list[FactorBounds] = []
    kgs: list[Hypergraph] = []
    for H in factors:
        cd_v = cd(H, r)
        ecd_v = ecd(H, r)
        if H.n <= ALT_EXACT_MAX_N:
            alt_res = alt_min(H, r, "exact")
        else:
            alt_res = alt_min(H, r, "heuristic")
        n_minus_alt = H.n - alt_res.value
        kg = kneser(H, r)
        kgs.append(kg)
        kg_chi = chromatic_number(kg, limit) if compute_exact else None
        rows.append(
            FactorBounds(
                n=H.n,
                cd=cd_v,
                ecd=ecd_v,
                n_minus_alt=n_minus_alt,
                alt_exact=alt_res.exact,
                cd_bound=ceil_div(cd_v, r - 1),
                alt_bound=ceil_div(n_minus_alt, r - 1),
                ecd_bound=ceil_div(ecd_v, r - 1),
                kg_chi=kg_chi,
            )
        )
    product_alt_bound = ceil_div(min(f.n_minus_alt for f in rows), r - 1)
    product_ecd_bound = ceil_div(min(f.ecd for f in rows), r - 1)
    exact_chi: ChromaticValue | None = None
    if compute_exact:
        space_size = 1
        for kg in kgs:
            space_size *= kg.n
        if space_size <= PRODUCT_SOLVE_CAP:
            exact_chi = product_chromatic(kgs, limit)
    zhu = "BOUND_ONLY"
    if (
        exact_chi is not None
        and exact_chi.is_finite
        and all(f.kg_chi is not None and f.kg_chi.is_finite for f in rows)
    ):
        min_factor = min(f.kg_chi.as_int() for f in rows)  # type: ignore[union-attr]
        zhu = "VERIFIED" if exact_chi.as_int() == min_factor else "FAILED"
    return BoundReport(
        r=r,
        factors=tuple(rows),
        product_alt_bound=product_alt_bound,
        product_ecd_bound=product_ecd_bound,
        exact_chi=exact_chi,
        zhu_status=zhu,
    )
