"""Exact colorability defects and alternation numbers.

The main entry points (cd, ecd, alt_sigma, alt_min) use pruned searches on
the "maximal disjoint edge-free classes" reformulation; the *_naive
functions are deliberately dumb reference implementations kept as
independent oracles.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache

from .bits import bits_of, mask_of
from .hypergraph import Hypergraph, induced

# alt_min in exact mode enumerates n! orderings.
ALT_EXACT_MAX_N = 9


@dataclass(frozen=True)
class SignVector:
    """An element of (Z_m u {0})^n: entry 0 is "unsigned", entries 1..m
    encode the m cyclic signs (m is the identity sign)."""

    modulus: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        for x in self.entries:
            if not 0 <= x <= self.modulus:
                raise ValueError(f"entry {x} outside [0..{self.modulus}]")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def support_size(self) -> int:
        return sum(1 for x in self.entries if x)

    @property
    def is_zero(self) -> bool:
        return not any(self.entries)

    def class_positions(self, sign: int) -> tuple[int, ...]:
        return tuple(i + 1 for i, x in enumerate(self.entries) if x == sign)

    def class_mask(self, sign: int) -> int:
        m = 0
        for i, x in enumerate(self.entries):
            if x == sign:
                m |= 1 << i
        return m

    def class_sizes(self) -> tuple[int, ...]:
        counts = [0] * (self.modulus + 1)
        for x in self.entries:
            counts[x] += 1
        return tuple(counts[1:])

    def min_class_size(self) -> int:
        return min(self.class_sizes())

    def balanced_size(self) -> int:
        """m*h + #classes above h, where h is the smallest sign-class size:
        the size of the largest balanced subfamily of the sign classes."""
        sizes = self.class_sizes()
        h = min(sizes)
        return self.modulus * h + sum(1 for s in sizes if s > h)

    def act(self, g: int) -> SignVector:
        """Multiply every nonzero entry by the group element ``g``."""
        m = self.modulus
        return SignVector(
            m, tuple(act_sign(g, x, m) if x else 0 for x in self.entries)
        )

    def face_le(self, other: SignVector) -> bool:
        """Face order: every nonzero entry of self equals the one in other."""
        if self.modulus != other.modulus or len(self) != len(other):
            return False
        return all(x == 0 or x == y for x, y in zip(self.entries, other.entries))


def act_sign(g: int, s: int, m: int) -> int:
    """Cyclic group action on signs 1..m (sign m is the identity)."""
    return (g + s - 1) % m + 1


@dataclass(frozen=True)
class Permutation:
    """A bijection of [n] given as the image tuple (position i -> sigma[i-1])."""

    sigma: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.sigma)
        if sorted(self.sigma) != list(range(1, n + 1)):
            raise ValueError("not a bijection of [1..n]")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    def __len__(self) -> int:
        return len(self.sigma)

    def apply(self, position: int) -> int:
        return self.sigma[position - 1]


def alt_of(X: SignVector) -> int:
    """Length of the longest alternating subsequence, computed as the number
    of maximal runs after dropping zeros (the all-zero vector gives 0)."""
    runs = 0
    last = 0
    for x in X.entries:
        if x and x != last:
            runs += 1
            last = x
    return runs


def alt_naive(X: SignVector) -> int:
    """Oracle: longest alternating subsequence by dynamic programming."""
    vals = [x for x in X.entries if x]
    best = [0] * len(vals)
    for i, x in enumerate(vals):
        prev = max((best[j] for j in range(i) if vals[j] != x), default=0)
        best[i] = prev + 1
    return max(best, default=0)


# --- colorability defects ----------------------------------------------------


def _edges_at(H: Hypergraph) -> list[list[int]]:
    at: list[list[int]] = [[] for _ in range(H.n + 1)]
    for em in H.edge_masks:
        for v in bits_of(em):
            at[v].append(em)
    return at


@lru_cache(maxsize=None)
def cd(H: Hypergraph, r: int) -> int:
    """r-colorability defect: fewest vertex removals so the rest splits into
    r disjoint edge-free classes.

    Branch and bound over vertices in canonical order: each vertex joins a
    class (kept edge-free) or is removed; prune once removals reach the
    incumbent.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    n = H.n
    edges_at = _edges_at(H)
    best = n
    classes = [0] * r

    def rec(v: int, removed: int, used: int) -> None:
        nonlocal best
        if removed >= best:
            return
        if v > n:
            best = removed
            return
        bit = 1 << (v - 1)
        for i in range(min(used + 1, r)):
            new = classes[i] | bit
            if not any(em & ~new == 0 for em in edges_at[v]):
                classes[i] = new
                rec(v + 1, removed, max(used, i + 1))
                classes[i] ^= bit
        rec(v + 1, removed + 1, used)

    rec(1, 0, 0)
    return best


@lru_cache(maxsize=None)
def ecd(H: Hypergraph, r: int) -> int:
    """Equitable r-colorability defect: like cd, but the r class sizes
    (including empty classes) must differ by at most one on the kept
    vertices, which forces the exact size multiset for each kept count."""
    if r < 1:
        raise ValueError("r must be >= 1")
    n = H.n
    edges_at = _edges_at(H)

    def feasible(m: int) -> bool:
        q, rem = divmod(m, r)
        caps = [q + 1] * rem + [q] * (r - rem)
        counts = [0] * r
        classes = [0] * r

        def rec(v: int, placed: int) -> bool:
            if placed + (n - v + 1) < m:
                return False
            if v > n:
                return placed == m
            bit = 1 << (v - 1)
            seen_fresh: set[int] = set()
            for i in range(r):
                if counts[i] >= caps[i]:
                    continue
                if counts[i] == 0:
                    # empty classes of equal capacity are interchangeable
                    if caps[i] in seen_fresh:
                        continue
                    seen_fresh.add(caps[i])
                new = classes[i] | bit
                if any(em & ~new == 0 for em in edges_at[v]):
                    continue
                classes[i] = new
                counts[i] += 1
                if rec(v + 1, placed + 1):
                    return True
                classes[i] ^= bit
                counts[i] -= 1
            return rec(v + 1, placed)

        return rec(1, 0)

    for m in range(n, -1, -1):
        if feasible(m):
            return n - m
    return n


def cd_naive(H: Hypergraph, r: int) -> int:
    """Oracle: enumerate removal sets by size and check r-colorability of the
    induced hypergraph by enumerating all colorings."""
    n = H.n
    for removed_size in range(n + 1):
        for removed in itertools.combinations(range(1, n + 1), removed_size):
            kept = [v for v in range(1, n + 1) if v not in removed]
            sub = induced(H, kept)
            if _has_proper_r_coloring(sub, r, equitable=False):
                return removed_size
    return n


def ecd_naive(H: Hypergraph, r: int) -> int:
    n = H.n
    for removed_size in range(n + 1):
        for removed in itertools.combinations(range(1, n + 1), removed_size):
            kept = [v for v in range(1, n + 1) if v not in removed]
            sub = induced(H, kept)
            if _has_proper_r_coloring(sub, r, equitable=True):
                return removed_size
    return n


def _has_proper_r_coloring(H: Hypergraph, r: int, equitable: bool) -> bool:
    if H.n == 0:
        return True
    for assignment in itertools.product(range(r), repeat=H.n):
        masks = [0] * r
        for v, cls in enumerate(assignment, start=1):
            masks[cls] |= 1 << (v - 1)
        if any(H.contains_edge_within(m) for m in masks):
            continue
        if equitable:
            sizes = [m.bit_count() for m in masks]
            if max(sizes) - min(sizes) > 1:
                continue
        return True
    return False


# --- alternation numbers -----------------------------------------------------


class _Found(Exception):
    pass


def _alt_search(H: Hypergraph, m: int, order: Sequence[int], cutoff: int | None) -> int:
    """Max alt(X) over X in (Z_m u {0})^n whose sign classes (mapped through
    the vertex order) span no edge. With ``cutoff``, raises _Found as soon
    as a vector with alt >= cutoff exists."""
    n = H.n
    edges_at = _edges_at(H)
    best = 0
    class_masks = [0] * (m + 1)

    def rec(i: int, last: int, cur: int) -> None:
        nonlocal best
        if cur > best:
            best = cur
            if cutoff is not None and best >= cutoff:
                raise _Found
        if i > n or cur + (n - i + 1) <= best:
            return
        v = order[i - 1]
        bit = 1 << (v - 1)
        for s in range(1, m + 1):
            new = class_masks[s] | bit
            if not any(em & ~new == 0 for em in edges_at[v]):
                class_masks[s] = new
                rec(i + 1, s, cur + (1 if s != last else 0))
                class_masks[s] ^= bit
        rec(i + 1, last, cur)

    rec(1, 0, 0)
    return best


def alt_sigma(H: Hypergraph, r: int, sigma: Permutation) -> int:
    """Largest alternation over sign vectors whose classes, read through the
    ordering ``sigma``, are all edge-free."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if len(sigma) != H.n:
        raise ValueError("permutation length mismatch")
    return _alt_search(H, r, sigma.sigma, cutoff=None)


def alt_sigma_naive(H: Hypergraph, r: int, sigma: Permutation) -> int:
    best = 0
    for entries in itertools.product(range(r + 1), repeat=H.n):
        X = SignVector(r, entries)
        ok = True
        for s in range(1, r + 1):
            vmask = mask_of(sigma.apply(i) for i in X.class_positions(s))
            if H.contains_edge_within(vmask):
                ok = False
                break
        if ok:
            best = max(best, alt_naive(X))
    return best


@dataclass(frozen=True)
class AltResult:
    """alt value with its certificate ordering; ``exact=False`` marks a
    heuristic UPPER_BOUND."""

    value: int
    sigma: Permutation
    exact: bool

    @property
    def status(self) -> str:
        return "EXACT" if self.exact else "UPPER_BOUND"


@lru_cache(maxsize=None)
def alt_min(H: Hypergraph, r: int, mode: str = "exact", seed: int = 0) -> AltResult:
    """Minimum of alt_sigma over all vertex orderings.

    Exact mode enumerates all n! orderings (n <= 9) with an early exit once
    an ordering is known not to beat the incumbent; the reported certificate
    is the lexicographically smallest optimal ordering. Heuristic mode does
    seeded random restarts with adjacent-transposition descent and returns
    an upper bound.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if mode not in ("exact", "heuristic"):
        raise ValueError(f"unknown mode {mode!r}")
    n = H.n
    if mode == "exact":
        if n > ALT_EXACT_MAX_N:
            raise ValueError(
                f"exact mode enumerates {n}! orderings; use mode='heuristic'"
            )
        best: int | None = None
        cert: tuple[int, ...] = tuple(range(1, n + 1))
        for order in itertools.permutations(range(1, n + 1)):
            if best is None:
                best = _alt_search(H, r, order, cutoff=None)
                cert = order
            else:
                try:
                    val = _alt_search(H, r, order, cutoff=best)
                except _Found:
                    continue
                if val < best:
                    best, cert = val, order
        return AltResult(best if best is not None else 0, Permutation(cert), True)

    rng = random.Random(seed)
    base = list(range(1, n + 1))
    best_val: int | None = None
    best_order = tuple(base)

    def evaluate(order: tuple[int, ...], bound: int | None) -> int | None:
        if bound is None:
            return _alt_search(H, r, order, cutoff=None)
        try:
            return _alt_search(H, r, order, cutoff=bound)
        except _Found:
            return None

    for restart in range(8):
        order = list(base)
        if restart:
            rng.shuffle(order)
        cur = _alt_search(H, r, tuple(order), cutoff=None)
        improved = True
        while improved:
            improved = False
            for i in range(n - 1):
                cand = list(order)
                cand[i], cand[i + 1] = cand[i + 1], cand[i]
                val = evaluate(tuple(cand), cur)
                if val is not None and val < cur:
                    order, cur = cand, val
                    improved = True
                    break
        if best_val is None or cur < best_val:
            best_val, best_order = cur, tuple(order)
    return AltResult(best_val if best_val is not None else 0, Permutation(best_order), False)


def alt_min_naive(H: Hypergraph, r: int) -> int:
    """Oracle: plain minimum over all orderings of the exhaustive per-sigma
    maximum."""
    vectors = [SignVector(r, e) for e in itertools.product(range(r + 1), repeat=H.n)]
    scored = [(alt_naive(X), [X.class_positions(s) for s in range(1, r + 1)]) for X in vectors]
    best = None
    for perm in itertools.permutations(range(1, H.n + 1)):
        local = 0
        for val, classes in scored:
            if val <= local:
                continue
            ok = True
            for positions in classes:
                vmask = mask_of(perm[i - 1] for i in positions)
                if H.contains_edge_within(vmask):
                    ok = False
                    break
            if ok:
                local = val
        if best is None or local < best:
            best = local
    return best if best is not None else 0
