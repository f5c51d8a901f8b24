"""Core model: canonical form, induced/section, properness, and the
colorful-balanced-complete predicate."""

from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from kneserlab import (
    Coloring,
    Hypergraph,
    complete_uniform,
    hnka,
    induced,
    is_colorful_balanced_complete,
    is_proper,
    kneser,
    load_hypergraph,
    section,
    store_hypergraph,
)
from conftest import min_element_coloring_petersen


@st.composite
def hypergraphs(draw, max_n: int = 6, max_edges: int = 8):
    n = draw(st.integers(min_value=1, max_value=max_n))
    edges = draw(
        st.lists(
            st.frozensets(st.integers(1, n), min_size=1, max_size=min(n, 3)),
            max_size=max_edges,
        )
    )
    return Hypergraph(n, set(edges))


class TestHypergraphModel:
    def test_canonical_edge_order(self):
        H = Hypergraph(4, [(3, 4), (1, 2, 3), (1, 2)])
        assert H.edges == ((1, 2), (3, 4), (1, 2, 3))

    def test_structural_equality_ignores_labels(self):
        H = Hypergraph(3, [(1, 2)])
        G = Hypergraph(3, [(1, 2)], labels=(4, 5, 6))
        assert H == G and hash(H) == hash(G)

    def test_rejects_bad_edges(self):
        with pytest.raises(ValueError):
            Hypergraph(3, [()])
        with pytest.raises(ValueError):
            Hypergraph(3, [(4,)])
        with pytest.raises(ValueError):
            Hypergraph(3, [(1, 2), (2, 1)])

    def test_immutable(self):
        H = Hypergraph(2, [(1, 2)])
        with pytest.raises(AttributeError):
            H.n = 5


class TestInduced:
    def test_complete_pair_within(self):
        H = complete_uniform(5, 2)
        sub = induced(H, {1, 2})
        assert sub == Hypergraph(2, [(1, 2)])

    def test_single_vertex(self):
        H = complete_uniform(5, 2)
        assert induced(H, {1}) == Hypergraph(1, [])

    def test_hnka_excluded_prefix(self):
        # every edge of H(7,2,3) leaves [3], so the induced hypergraph on
        # {1,2,3} has no edges; confirm by re-deriving from the edge list
        H = hnka(7, 2, 3)
        expected = [e for e in H.edges if set(e) <= {1, 2, 3}]
        assert expected == []
        assert induced(H, {1, 2, 3}) == Hypergraph(3, [])

    def test_full_induced_is_identity(self):
        H = complete_uniform(4, 2)
        assert induced(H, range(1, 5)) == H

    def test_labels_compose(self):
        H = complete_uniform(5, 2)
        sub = induced(H, {2, 4, 5})
        assert sub.labels == (2, 4, 5)
        subsub = induced(sub, {1, 3})
        assert subsub.labels == (2, 5)

    @given(hypergraphs(), st.data())
    @settings(max_examples=50, deadline=None)
    def test_nested_induced_is_intersection(self, H, data):
        A = data.draw(st.frozensets(st.integers(1, H.n)))
        inner = induced(H, A)
        B = data.draw(st.frozensets(st.integers(1, max(inner.n, 1))))
        B = {b for b in B if b <= inner.n}
        translated = {sorted(A)[b - 1] for b in B}
        assert induced(inner, B) == induced(H, translated)


class TestSection:
    def test_each_part_met_once(self):
        F = Hypergraph(4, [(1, 3), (1, 4), (2, 3)])
        got = section(F, [{1, 2}, {3, 4}])
        assert got == Hypergraph(4, [(1, 3), (1, 4), (2, 3)])

    def test_no_edge_inside_parts(self):
        F = Hypergraph(4, [(1, 3), (1, 4), (2, 3)])
        assert section(F, [{1}, {2}]).edge_count == 0

    def test_oversized_edge_excluded(self):
        F = Hypergraph(4, [(1, 2, 3)])
        assert section(F, [{1, 2}, {3, 4}]).edge_count == 0
        assert section(F, [{1, 3}, {2, 4}]).edge_count == 0

    def test_overlapping_parts_rejected(self):
        F = complete_uniform(4, 2)
        with pytest.raises(ValueError):
            section(F, [{1, 2}, {2, 3}])

    def test_single_part_keeps_singletons_only(self):
        F = Hypergraph(3, [(1,), (1, 2)])
        got = section(F, [{1, 2}])
        assert got == Hypergraph(2, [(1,)])


class TestIsProper:
    def test_petersen_min_element_coloring(self):
        # classical 3-coloring: classes share their minimum element (colors
        # 1,2) or live inside {3,4,5} (color 3), hence pairwise intersect
        P = kneser(complete_uniform(5, 2), 2)
        coloring = min_element_coloring_petersen()
        ground = complete_uniform(5, 2)
        for color in (1, 2, 3):
            members = [
                set(ground.edges[v - 1])
                for v in range(1, 11)
                if coloring.color_of(v) == color
            ]
            for i, a in enumerate(members):
                for b in members[i + 1 :]:
                    assert a & b, "classes must be pairwise intersecting"
        assert is_proper(P, coloring)

    def test_singleton_edge_never_proper(self):
        H = Hypergraph(3, [(2,)])
        assert not is_proper(H, Coloring.of([1, 2, 3]))

    def test_two_colors_on_edge(self):
        H = Hypergraph(3, [(1, 2, 3)])
        assert is_proper(H, Coloring.of([1, 1, 2]))

    def test_partial_coloring_rejected(self):
        H = complete_uniform(3, 2)
        with pytest.raises(ValueError):
            is_proper(H, Coloring.of([1, 2]))

    @given(hypergraphs(max_n=5), st.data())
    @settings(max_examples=50, deadline=None)
    def test_monotone_under_edge_removal(self, H, data):
        colors = data.draw(
            st.lists(st.integers(1, 3), min_size=H.n, max_size=H.n)
        )
        c = Coloring.of(colors, 3)
        if is_proper(H, c):
            keep = data.draw(st.frozensets(st.integers(0, max(H.edge_count - 1, 0))))
            sub = Hypergraph(H.n, [e for i, e in enumerate(H.edges) if i in keep])
            assert is_proper(sub, c)


class TestColorfulBalancedComplete:
    def test_petersen_bipartite_witness(self):
        # v({2,3}) with {v({1,4}), v({1,5})}: all cross pairs disjoint
        ground = complete_uniform(5, 2)
        P = kneser(ground, 2)
        idx = {e: i + 1 for i, e in enumerate(ground.edges)}
        parts = [[idx[(2, 3)]], [idx[(1, 4)], idx[(1, 5)]]]
        colors = [2] * 10
        colors[idx[(2, 3)] - 1] = 1
        colors[idx[(1, 5)] - 1] = 3
        assert is_colorful_balanced_complete(P, parts, Coloring.of(colors, 3))

    def test_unbalanced_fails(self):
        F = complete_uniform(4, 2)
        c = Coloring.of([1, 2, 3, 4])
        assert not is_colorful_balanced_complete(F, [[1, 2, 3], [4]], c)

    def test_repeated_color_in_part_fails(self):
        F = complete_uniform(4, 2)
        c = Coloring.of([1, 1, 2, 3])
        assert not is_colorful_balanced_complete(F, [[1, 2], [3, 4]], c)

    def test_missing_edge_fails_completeness(self):
        F = Hypergraph(4, [(1, 3), (1, 4), (2, 3)])
        c = Coloring.of([1, 2, 3, 4])
        assert not is_colorful_balanced_complete(F, [[1, 2], [3, 4]], c)

    def test_empty_part_rejected(self):
        F = complete_uniform(3, 2)
        with pytest.raises(ValueError):
            is_colorful_balanced_complete(F, [[1], []], Coloring.of([1, 2, 3]))


class TestColoringModel:
    def test_color_range_validated(self):
        with pytest.raises(ValueError):
            Coloring((1, 4), 3)
        with pytest.raises(ValueError):
            Coloring((0, 1), 2)

    def test_of_infers_color_count(self):
        c = Coloring.of([2, 1, 2])
        assert c.color_count == 2
        assert c.class_vertices(2) == (1, 3)

    def test_chromatic_value_kinds(self):
        from kneserlab import ChromaticValue

        assert ChromaticValue.finite(3).as_int() == 3
        assert str(ChromaticValue.infinite()) == "INFINITE"
        assert str(ChromaticValue.exceeds(6)) == "EXCEEDS(6)"
        with pytest.raises(ValueError):
            ChromaticValue.finite(0)
        with pytest.raises(ValueError):
            ChromaticValue.infinite().as_int()


class TestJson:
    def test_round_trip_byte_stable(self):
        H = kneser(complete_uniform(5, 2), 2)
        text = store_hypergraph(H)
        again = store_hypergraph(load_hypergraph(text))
        assert text == again
        assert load_hypergraph(text) == H

    @given(hypergraphs())
    @settings(max_examples=40, deadline=None)
    def test_round_trip_everything(self, H):
        assert load_hypergraph(store_hypergraph(H)) == H

    def test_coloring_round_trip(self):
        from kneserlab import load_coloring, store_coloring

        c = Coloring.of([1, 3, 2, 3], 3)
        text = store_coloring(c)
        assert load_coloring(text) == c
        assert store_coloring(load_coloring(text)) == text
