"""Combinatorial verification lab for the colorful-witness machinery.

Everything here works on sign vectors over Z_p u {0} split into per-factor
blocks. A vector is *saturated* when every sign class of every block spans
an edge of its factor (else *deficient*). Two cyclic-equivariant labelings
are built, one per kind; their consistency on the face order is checked
exhaustively, and the saturated-side search extracts colorful balanced
complete p-partite witnesses from proper colorings of products of general
Kneser hypergraphs.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from itertools import product as iproduct

from .bits import submasks
from .constructions import ProductSpace
from .hypergraph import CapExceededError, Coloring, Hypergraph
from .invariants import (
    ALT_EXACT_MAX_N,
    SignVector,
    act_sign,
    alt_min,
    alt_of,
    ecd,
)

# Exhaustive labeling sweeps enumerate (p+1)^n vectors and (2p+1)^n face
# pairs; keep them loudly bounded.
LEMMA_ENUM_CAP = 2_000_000


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


# --- simplices of sign/color pairs --------------------------------------------


@dataclass(frozen=True)
class Simplex:
    """A set of (sign, color) cells with every color column missing at least
    one sign (so no color can be realized by all p signs)."""

    p: int
    color_count: int
    cells: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        for s, c in self.cells:
            if not 1 <= s <= self.p:
                raise ValueError(f"sign {s} outside [1..{self.p}]")
            if not 1 <= c <= self.color_count:
                raise ValueError(f"color {c} outside [1..{self.color_count}]")

    def row(self, sign: int) -> frozenset[int]:
        return frozenset(c for s, c in self.cells if s == sign)

    def row_sizes(self) -> tuple[int, ...]:
        counts = [0] * (self.p + 1)
        for s, _ in self.cells:
            counts[s] += 1
        return tuple(counts[1:])

    def min_class_size(self) -> int:
        return min(self.row_sizes())

    def balanced_size(self) -> int:
        """p*h + #rows above h: the size of the largest sub-simplex whose row
        sizes differ by at most one while keeping every minimum row."""
        sizes = self.row_sizes()
        h = min(sizes)
        return self.p * h + sum(1 for s in sizes if s > h)

    def core(self) -> Simplex:
        """Sub-simplex formed by the minimum-size sign rows (all its nonempty
        rows share one size, so it is a valid uniform-row key)."""
        h = self.min_class_size()
        sizes = self.row_sizes()
        keep = frozenset((s, c) for s, c in self.cells if sizes[s - 1] == h)
        return Simplex(self.p, self.color_count, keep)

    def act(self, g: int) -> Simplex:
        return Simplex(
            self.p,
            self.color_count,
            frozenset((act_sign(g, s, self.p), c) for s, c in self.cells),
        )

    def is_join_simplex(self) -> bool:
        per_color: dict[int, int] = {}
        for _, c in self.cells:
            per_color[c] = per_color.get(c, 0) + 1
        return all(v <= self.p - 1 for v in per_color.values())

    def key(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.cells))


# --- split vectors -------------------------------------------------------------


@dataclass(frozen=True)
class SplitVector:
    """A sign vector split into per-factor blocks, with each block's set of
    edge-spanning signs precomputed. Construct through :func:`split`."""

    vector: SignVector
    block_lengths: tuple[int, ...]
    hypergraphs: tuple[Hypergraph, ...]
    blocks: tuple[SignVector, ...]
    edge_signs: tuple[frozenset[int], ...]

    @property
    def p(self) -> int:
        return self.vector.modulus

    @property
    def is_saturated(self) -> bool:
        """Every sign class of every block contains an edge of its factor."""
        full = frozenset(range(1, self.p + 1))
        return all(a == full for a in self.edge_signs)

    @property
    def is_deficient(self) -> bool:
        return not self.is_saturated

    def act(self, g: int) -> SplitVector:
        return split(self.vector.act(g), self.block_lengths, self.hypergraphs)


def split(
    X: SignVector,
    block_lengths: Sequence[int],
    hypergraphs: Sequence[Hypergraph],
) -> SplitVector:
    """Cut ``X`` into consecutive blocks of the given lengths and classify
    which signs of each block span an edge of the matching hypergraph."""
    lengths = tuple(block_lengths)
    hgs = tuple(hypergraphs)
    if sum(lengths) != len(X):
        raise ValueError("block lengths do not add up to the vector length")
    if len(lengths) != len(hgs):
        raise ValueError("one hypergraph per block is required")
    for ln, H in zip(lengths, hgs):
        if H.n != ln:
            raise ValueError("block length must equal its hypergraph order")
    p = X.modulus
    blocks: list[SignVector] = []
    signs: list[frozenset[int]] = []
    offset = 0
    for ln, H in zip(lengths, hgs):
        blk = SignVector(p, X.entries[offset : offset + ln])
        offset += ln
        blocks.append(blk)
        present = frozenset(
            s for s in range(1, p + 1) if H.contains_edge_within(blk.class_mask(s))
        )
        signs.append(present)
    return SplitVector(X, lengths, hgs, tuple(blocks), tuple(signs))


# --- equivariant sign tables ----------------------------------------------------


def _act_signature(g: int, sig: tuple, p: int) -> tuple:
    out = []
    for kind, payload in sig:
        if kind == "vec":
            out.append(
                ("vec", tuple(act_sign(g, x, p) if x else 0 for x in payload))
            )
        else:
            out.append(("set", tuple(sorted(act_sign(g, s, p) for s in payload))))
    return tuple(out)


def _act_signsets(g: int, key: tuple, p: int) -> tuple:
    return tuple(tuple(sorted(act_sign(g, s, p) for s in comp)) for comp in key)


def _act_cells(g: int, key: tuple, p: int) -> tuple:
    return tuple(sorted((act_sign(g, s, p), c) for s, c in key))


class SignMapTables:
    """Lazily built equivariant sign assignments on the three domains the
    labelings query: block signatures, tuples of sign sets, and uniform-row
    simplices.

    Values are fixed by sending the lexicographically least orbit element to
    sign 1 and extending along the action. Passing table names in
    ``corrupt`` replaces that table by a constant map, which is not
    equivariant; this is the negative control for the consistency checks.
    For non-prime moduli some orbits are not free, in which case no
    equivariant choice exists and ``non_free_seen`` is set.
    """

    TABLE_NAMES = ("blocks", "signsets", "simplex")

    def __init__(self, p: int, corrupt: Sequence[str] = ()) -> None:
        self.p = p
        self.corrupt = frozenset(corrupt)
        unknown = self.corrupt - set(self.TABLE_NAMES)
        if unknown:
            raise ValueError(f"unknown table names: {sorted(unknown)}")
        self._reps: dict[str, dict[tuple, int]] = {n: {} for n in self.TABLE_NAMES}
        self.non_free_seen = False

    def _lookup(self, name: str, key: tuple, act) -> int:
        if name in self.corrupt:
            return 1
        p = self.p
        orbit = [act(g, key, p) for g in range(1, p + 1)]
        if len(set(orbit)) < p:
            self.non_free_seen = True
        rep = min(orbit)
        table = self._reps[name]
        if rep not in table:
            table[rep] = 1
        g = next(g for g in range(1, p + 1) if act(g, rep, p) == key)
        return act_sign(g, table[rep], p)

    def sign_for_blocks(self, signature: tuple) -> int:
        return self._lookup("blocks", signature, _act_signature)

    def sign_for_signsets(self, key: tuple) -> int:
        return self._lookup("signsets", key, _act_signsets)

    def sign_for_simplex(self, simplex: Simplex) -> int:
        return self._lookup("simplex", simplex.key(), _act_cells)


def block_signature(S: SplitVector) -> tuple | None:
    """Per-block keys for the block-signature sign table; None when some
    block has a proper nonempty set of edge-spanning signs (the sign-set
    table handles that case instead)."""
    p = S.p
    full = frozenset(range(1, p + 1))
    comps: list[tuple] = []
    for blk, present in zip(S.blocks, S.edge_signs):
        if present == full:
            comps.append(("vec", blk.entries))
        elif not present:
            sizes = blk.class_sizes()
            if min(sizes) == 0:
                comps.append(
                    ("set", tuple(s for s in range(1, p + 1) if sizes[s - 1] > 0))
                )
            else:
                h = min(sizes)
                kept = tuple(
                    x if x and sizes[x - 1] == h else 0 for x in blk.entries
                )
                comps.append(("vec", kept))
        else:
            return None
    return tuple(comps)


# --- the deficient-side labeling -----------------------------------------------


def _alt_order(H: Hypergraph, p: int) -> tuple[int, ...]:
    """The alternation-optimal vertex ordering of a factor. The alternation
    variant of the labeling must score sign vectors in this order: scored in
    an arbitrary order the index can overshoot its cap, since alternation
    (unlike the balanced class size) depends on coordinate order."""
    return alt_min(H, p, "exact").sigma.sigma


def nu(S: SplitVector, variant: str = "balanced") -> int:
    """Index of a vector under the deficient-side labeling: blocks whose
    every sign spans an edge count their full support; other blocks count
    their edge-spanning signs plus the best score of an edge-free
    sub-vector. The score is the balanced class size by default, or the
    alternation number (read in the factor's alternation-optimal vertex
    order) in the "alternation" variant.

    Edge-free sub-vectors are enumerated outright; the score is not
    monotone under restriction, so no pruning by dominance is attempted.
    """
    if variant not in ("balanced", "alternation"):
        raise ValueError(f"unknown variant {variant!r}")
    p = S.p
    full = frozenset(range(1, p + 1))
    total = 0
    for blk, present, H in zip(S.blocks, S.edge_signs, S.hypergraphs):
        if present == full:
            total += blk.support_size
            continue
        order = _alt_order(H, p) if variant == "alternation" else None
        support = [i for i, x in enumerate(blk.entries) if x]
        support_bits = (1 << len(support)) - 1
        best = 0
        for keep in submasks(support_bits):
            entries = list(blk.entries)
            for bit, pos in enumerate(support):
                if not keep >> bit & 1:
                    entries[pos] = 0
            sub = SignVector(p, tuple(entries))
            if any(
                H.contains_edge_within(sub.class_mask(s)) for s in range(1, p + 1)
            ):
                continue
            if order is None:
                score = sub.balanced_size()
            else:
                score = alt_of(SignVector(p, tuple(entries[v - 1] for v in order)))
            best = max(best, score)
        total += len(present) + best
    return total


def index_cap(
    factors: Sequence[Hypergraph], p: int, variant: str = "balanced"
) -> int:
    """Upper end of the deficient-side index range: total order minus the
    relevant defect quantity plus p - 1."""
    n = sum(H.n for H in factors)
    if variant == "balanced":
        quantity = min(ecd(H, p) for H in factors)
    elif variant == "alternation":
        quantity = min(H.n - alt_min(H, p, "exact").value for H in factors)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return n - quantity + p - 1


def lambda1(
    S: SplitVector,
    tables: SignMapTables,
    alpha: int | None = None,
    variant: str = "balanced",
) -> tuple[int, int]:
    """Equivariant label (sign, index) of a deficient vector."""
    if not S.is_deficient:
        raise ValueError("lambda1 is only defined on deficient vectors")
    index = nu(S, variant)
    sig = block_signature(S)
    if sig is not None:
        if variant == "alternation":
            # first nonzero entry, reading each block in its
            # alternation-optimal vertex order
            sign = next(
                blk.entries[v - 1]
                for blk, H in zip(S.blocks, S.hypergraphs)
                for v in _alt_order(H, S.p)
                if blk.entries[v - 1]
            )
        else:
            sign = tables.sign_for_blocks(sig)
    else:
        key = tuple(tuple(sorted(a)) for a in S.edge_signs)
        sign = tables.sign_for_signsets(key)
    if alpha is not None and not 1 <= index <= alpha:
        raise ValueError(f"index {index} outside [1..{alpha}]")
    return sign, index


# --- the saturated-side labeling -------------------------------------------------


def _contained_edges(H: Hypergraph, mask: int) -> list[int]:
    return [i + 1 for i, em in enumerate(H.edge_masks) if em & ~mask == 0]


def tau_of(S: SplitVector, coloring: Coloring) -> Simplex:
    """The simplex of (sign, color) pairs realized by product vertices whose
    factor edges all sit inside the corresponding sign class.

    Every sign row is nonempty for a saturated vector, and a proper coloring
    keeps every color column at p-1 signs or fewer.
    """
    if not S.is_saturated:
        raise ValueError("tau_of is only defined on saturated vectors")
    p = S.p
    dims = tuple(H.edge_count for H in S.hypergraphs)
    space = ProductSpace(dims)
    if coloring.n != space.size:
        raise ValueError("coloring is not total on the product vertex space")
    cells: set[tuple[int, int]] = set()
    for sign in range(1, p + 1):
        lists = [
            _contained_edges(H, blk.class_mask(sign))
            for H, blk in zip(S.hypergraphs, S.blocks)
        ]
        assert all(lists), "saturated vector must have edges in every class"
        for combo in iproduct(*lists):
            cells.add((sign, coloring.color_of(space.index_of(combo))))
    simplex = Simplex(p, coloring.color_count, frozenset(cells))
    if not simplex.is_join_simplex():
        raise ValueError(
            "some color is realized by all signs: the coloring is not proper"
        )
    return simplex


def lambda2(
    S: SplitVector, coloring: Coloring, tables: SignMapTables, alpha: int
) -> tuple[int, int]:
    """Equivariant label (sign, index) of a saturated vector; the index is
    always above ``alpha``."""
    simplex = tau_of(S, coloring)
    sign = tables.sign_for_simplex(simplex.core())
    return sign, alpha - S.p + 1 + simplex.balanced_size()


# --- exhaustive consistency checks ------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str  # equivariance | chain | range
    x: tuple[int, ...]
    y: tuple[int, ...] | None
    detail: str

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "x": list(self.x),
            "y": list(self.y) if self.y is not None else None,
            "detail": self.detail,
        }


def _guard_enum(p: int, n: int) -> None:
    if (2 * p + 1) ** n > LEMMA_ENUM_CAP:
        raise CapExceededError(
            f"exhaustive sweep over (Z_{p} u 0)^{n} faces is beyond the cap"
        )


def _sub_entries(entries: tuple[int, ...], support: list[int], keep: int) -> tuple[int, ...]:
    out = list(entries)
    for bit, pos in enumerate(support):
        if not keep >> bit & 1:
            out[pos] = 0
    return tuple(out)


def check_lemma1(
    factors: Sequence[Hypergraph],
    p: int,
    tables: SignMapTables | None = None,
    variant: str = "balanced",
) -> list[Violation]:
    """Exhaustively verify the deficient-side labeling: it must be
    equivariant, stay within [1..cap], and never give face-comparable
    vectors the same index with different signs. Returns all violations
    (expected empty; corrupted tables are the negative control)."""
    lengths = tuple(H.n for H in factors)
    n = sum(lengths)
    _guard_enum(p, n)
    if tables is None:
        tables = SignMapTables(p)
    cap = index_cap(factors, p, variant)
    labels: dict[tuple[int, ...], tuple[int, int]] = {}
    for entries in iproduct(range(p + 1), repeat=n):
        if not any(entries):
            continue
        S = split(SignVector(p, entries), lengths, factors)
        if S.is_deficient:
            labels[entries] = lambda1(S, tables, variant=variant)
    violations: list[Violation] = []
    for entries, (sign, index) in labels.items():
        if not 1 <= index <= cap:
            violations.append(
                Violation("range", entries, None, f"index {index} outside [1..{cap}]")
            )
        for g in range(1, p):
            acted = tuple(act_sign(g, x, p) if x else 0 for x in entries)
            got = labels.get(acted)
            want = (act_sign(g, sign, p), index)
            if got != want:
                violations.append(
                    Violation(
                        "equivariance",
                        entries,
                        acted,
                        f"label{got} != expected {want} under g={g}",
                    )
                )
    for y_entries, (y_sign, y_index) in labels.items():
        support = [i for i, x in enumerate(y_entries) if x]
        support_bits = (1 << len(support)) - 1
        for keep in submasks(support_bits):
            if keep in (support_bits, 0):
                continue
            x_entries = _sub_entries(y_entries, support, keep)
            x_label = labels.get(x_entries)
            if x_label is None:
                continue  # deficiency is inherited, so this cannot happen
            x_sign, x_index = x_label
            if x_index == y_index and x_sign != y_sign:
                violations.append(
                    Violation(
                        "chain",
                        x_entries,
                        y_entries,
                        f"equal index {x_index} but signs {x_sign} != {y_sign}",
                    )
                )
    return violations


def check_lemma2(
    factors: Sequence[Hypergraph],
    p: int,
    coloring: Coloring,
    tables: SignMapTables | None = None,
    variant: str = "balanced",
) -> list[Violation]:
    """Exhaustively verify the saturated-side labeling against a proper
    coloring of the product of the KG^p of the factors: equivariance, index
    above the cap, and no face-comparable pair with equal index and
    different signs."""
    lengths = tuple(H.n for H in factors)
    n = sum(lengths)
    _guard_enum(p, n)
    if tables is None:
        tables = SignMapTables(p)
    cap = index_cap(factors, p, variant)
    labels: dict[tuple[int, ...], tuple[int, int]] = {}
    for entries in iproduct(range(p + 1), repeat=n):
        if not any(entries):
            continue
        S = split(SignVector(p, entries), lengths, factors)
        if S.is_saturated:
            labels[entries] = lambda2(S, coloring, tables, cap)
    violations: list[Violation] = []
    for entries, (sign, index) in labels.items():
        if index <= cap:
            violations.append(
                Violation("range", entries, None, f"index {index} not above {cap}")
            )
        for g in range(1, p):
            acted = tuple(act_sign(g, x, p) if x else 0 for x in entries)
            got = labels.get(acted)
            want = (act_sign(g, sign, p), index)
            if got != want:
                violations.append(
                    Violation(
                        "equivariance",
                        entries,
                        acted,
                        f"label{got} != expected {want} under g={g}",
                    )
                )
    for y_entries, (y_sign, y_index) in labels.items():
        support = [i for i, x in enumerate(y_entries) if x]
        support_bits = (1 << len(support)) - 1
        for keep in submasks(support_bits):
            if keep in (support_bits, 0):
                continue
            x_entries = _sub_entries(y_entries, support, keep)
            x_label = labels.get(x_entries)
            if x_label is None:
                continue  # the sub-vector dropped out of the saturated side
            x_sign, x_index = x_label
            if x_index == y_index and x_sign != y_sign:
                violations.append(
                    Violation(
                        "chain",
                        x_entries,
                        y_entries,
                        f"equal index {x_index} but signs {x_sign} != {y_sign}",
                    )
                )
    return violations


# --- saturated-side scan and witness extraction -----------------------------------


@dataclass(frozen=True)
class ScanResult:
    max_ell: int
    argmax: SignVector | None
    saturated_count: int


def sigma2_scan(
    factors: Sequence[Hypergraph], p: int, coloring: Coloring
) -> ScanResult:
    """Exhaustive scan of the saturated vectors maximizing the balanced size
    of their color simplex; the reported argmax is the first maximizer in
    lexicographic vector order."""
    dims = tuple(H.edge_count for H in factors)
    space = ProductSpace(dims)
    if coloring.n != space.size:
        raise ValueError("coloring is not total on the product vertex space")
    per_factor_blocks: list[list[tuple[tuple[int, ...], tuple[int, ...]]]] = []
    contained: list[list[list[int]]] = []
    for H in factors:
        table = [_contained_edges(H, mask) for mask in range(1 << H.n)]
        contained.append(table)
        blocks = []
        for entries in iproduct(range(p + 1), repeat=H.n):
            masks = [0] * (p + 1)
            for i, x in enumerate(entries):
                if x:
                    masks[x] |= 1 << i
            if all(table[masks[s]] for s in range(1, p + 1)):
                blocks.append((entries, tuple(masks[1:])))
        per_factor_blocks.append(blocks)
    row_colors: dict[tuple[int, ...], frozenset[int]] = {}

    def colors_for(class_masks: tuple[int, ...]) -> frozenset[int]:
        got = row_colors.get(class_masks)
        if got is None:
            lists = [contained[j][m] for j, m in enumerate(class_masks)]
            got = frozenset(
                coloring.color_of(space.index_of(combo)) for combo in iproduct(*lists)
            )
            row_colors[class_masks] = got
        return got

    best = -1
    best_entries: tuple[int, ...] | None = None
    count = 0
    for combo in iproduct(*per_factor_blocks):
        count += 1
        sizes = []
        for s in range(p):
            class_masks = tuple(blk[1][s] for blk in combo)
            sizes.append(len(colors_for(class_masks)))
        h = min(sizes)
        ell = p * h + sum(1 for s in sizes if s > h)
        if ell > best:
            best = ell
            best_entries = tuple(x for blk in combo for x in blk[0])
    if best_entries is None:
        return ScanResult(0, None, 0)
    return ScanResult(best, SignVector(p, best_entries), count)


@dataclass(frozen=True)
class PartiteWitness:
    """A colorful balanced complete p-partite subhypergraph of a product of
    general Kneser hypergraphs: one part per sign, vertices given as tuples
    of 1-based factor edge indices, with their colors."""

    p: int
    parts: tuple[tuple[tuple[int, ...], ...], ...]
    colors: tuple[tuple[int, ...], ...]
    experimental: bool = False

    @property
    def size(self) -> int:
        return sum(len(part) for part in self.parts)

    def problems(self, factors: Sequence[Hypergraph], coloring: Coloring) -> list[str]:
        """All ways this witness fails to be colorful, balanced, and complete
        (empty list = valid). Completeness is checked transversal by
        transversal and is vacuous if some part is empty."""
        out: list[str] = []
        if len(self.parts) != self.p or len(self.colors) != self.p:
            return ["wrong number of parts"]
        dims = tuple(H.edge_count for H in factors)
        space = ProductSpace(dims)
        sizes = [len(part) for part in self.parts]
        if self.size and max(sizes) - min(sizes) > 1:
            out.append(f"unbalanced part sizes {sizes}")
        seen_vertices: set[tuple[int, ...]] = set()
        color_uses: dict[int, int] = {}
        for part, cols in zip(self.parts, self.colors):
            if len(part) != len(cols):
                return ["colors do not match part sizes"]
            if len(set(cols)) != len(cols):
                out.append(f"part with repeated colors {cols}")
            for vertex, c in zip(part, cols):
                if vertex in seen_vertices:
                    out.append(f"repeated vertex {vertex}")
                seen_vertices.add(vertex)
                color_uses[c] = color_uses.get(c, 0) + 1
                if coloring.color_of(space.index_of(vertex)) != c:
                    out.append(f"vertex {vertex} is not colored {c}")
        for c, uses in color_uses.items():
            if uses > self.p - 1:
                out.append(f"color {c} appears {uses} > p-1 times")
        if all(sizes):
            for transversal in iproduct(*self.parts):
                for j, H in enumerate(factors):
                    union = 0
                    total = 0
                    for vertex in transversal:
                        em = H.edge_masks[vertex[j] - 1]
                        union |= em
                        total += em.bit_count()
                    if union.bit_count() != total:
                        out.append(
                            f"transversal {transversal} not disjoint in factor {j + 1}"
                        )
        return out

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "experimental": self.experimental,
            "parts": [
                {"vertices": [list(v) for v in part], "colors": list(cols)}
                for part, cols in zip(self.parts, self.colors)
            ],
        }


def extract_witness(S: SplitVector, coloring: Coloring, q: int) -> PartiteWitness:
    """Build a q-vertex witness from a saturated vector whose color simplex
    has balanced size at least q: keep a balanced sub-simplex of q cells and
    realize each cell by the first product vertex of its sign class with the
    required color."""
    p = S.p
    if q < 0:
        raise ValueError("witness size must be nonnegative")
    if q == 0:
        return PartiteWitness(p, ((),) * p, ((),) * p)
    simplex = tau_of(S, coloring)
    ell = simplex.balanced_size()
    if q > ell:
        raise ValueError(f"requested {q} vertices but balanced size is {ell}")
    base, extra = divmod(q, p)
    h = simplex.min_class_size()
    sizes = simplex.row_sizes()
    if base < h:
        eligible = list(range(1, p + 1))
    else:
        eligible = [s for s in range(1, p + 1) if sizes[s - 1] > h]
    bumped = set(eligible[:extra])
    dims = tuple(H.edge_count for H in S.hypergraphs)
    space = ProductSpace(dims)
    lists = {
        sign: [
            _contained_edges(H, blk.class_mask(sign))
            for H, blk in zip(S.hypergraphs, S.blocks)
        ]
        for sign in range(1, p + 1)
    }
    parts: list[tuple[tuple[int, ...], ...]] = []
    part_colors: list[tuple[int, ...]] = []
    for sign in range(1, p + 1):
        want = base + (1 if sign in bumped else 0)
        chosen_colors = sorted(simplex.row(sign))[:want]
        vertices = []
        for color in chosen_colors:
            found = None
            for combo in iproduct(*lists[sign]):
                if coloring.color_of(space.index_of(combo)) == color:
                    found = combo
                    break
            assert found is not None, "color present in the simplex row"
            vertices.append(found)
        parts.append(tuple(vertices))
        part_colors.append(tuple(chosen_colors))
    return PartiteWitness(p, tuple(parts), tuple(part_colors))


def witness_target(factors: Sequence[Hypergraph], p: int) -> int:
    """The guaranteed witness size: the larger of the smallest equitable
    defect and the smallest order-minus-alternation over the factors."""
    min_ecd = min(ecd(H, p) for H in factors)
    for H in factors:
        if H.n > ALT_EXACT_MAX_N:
            return min_ecd  # alternation side needs exact values
    min_alt_side = min(H.n - alt_min(H, p, "exact").value for H in factors)
    return max(min_ecd, min_alt_side)


def find_witness(
    factors: Sequence[Hypergraph],
    p: int,
    coloring: Coloring,
    target: int | None = None,
    force: bool = False,
) -> PartiteWitness | None:
    """Search the saturated vectors of a proper coloring of the product of
    the KG^p of the factors and extract a witness with ``target`` vertices.

    Returns None when no saturated vector reaches the target, which for a
    prime p and a target within the guarantee indicates a bug. Non-prime
    moduli are outside the guarantee and need ``force``; the witness is then
    flagged experimental.
    """
    experimental = not is_prime(p)
    if experimental and not force:
        raise ValueError(f"p={p} is not prime; pass force=True to experiment")
    if target is None:
        target = witness_target(factors, p)
    if target == 0:
        return PartiteWitness(p, ((),) * p, ((),) * p, experimental=experimental)
    scan = sigma2_scan(factors, p, coloring)
    if scan.argmax is None or scan.max_ell < target:
        return None
    S = split(scan.argmax, tuple(H.n for H in factors), factors)
    witness = extract_witness(S, coloring, target)
    if experimental:
        witness = PartiteWitness(
            witness.p, witness.parts, witness.colors, experimental=True
        )
    return witness


@dataclass(frozen=True)
class DoldReport:
    """Exhaustive check of the counting consequence behind the witness
    guarantees: with saturated vectors present, the best saturated balanced
    size must reach both defect quantities; with none, the whole labeling
    lands below the index cap and the consequence degenerates to the defect
    quantities being at most p - 1."""

    p: int
    max_ell: int
    min_ecd: int
    min_n_minus_alt: int
    saturated_count: int

    @property
    def ok(self) -> bool:
        target = max(self.min_ecd, self.min_n_minus_alt)
        if self.saturated_count:
            return self.max_ell >= target
        return target <= self.p - 1

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "max_ell": self.max_ell,
            "min_ecd": self.min_ecd,
            "min_n_minus_alt": self.min_n_minus_alt,
            "saturated_count": self.saturated_count,
            "ok": self.ok,
        }


def dold_consequence(
    factors: Sequence[Hypergraph], p: int, coloring: Coloring
) -> DoldReport:
    scan = sigma2_scan(factors, p, coloring)
    min_ecd = min(ecd(H, p) for H in factors)
    min_alt_side = min(H.n - alt_min(H, p, "exact").value for H in factors)
    return DoldReport(p, scan.max_ell, min_ecd, min_alt_side, scan.saturated_count)
