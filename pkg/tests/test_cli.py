"""CLI, recipes, experiment runner, cache behavior."""

from __future__ import annotations

import json

import pytest

from kneserlab import (
    ExperimentSpec,
    compare_bounds,
    complete_uniform,
    default_compare_pool,
    hnka,
    kneser,
    parse_recipe,
    reduction_check,
    run,
    star,
)
from kneserlab.cache import ResultCache, canonical_json, cached_value, hypergraph_digest
from kneserlab.cli import main
from kneserlab.experiments import RecipeError


class TestRecipes:
    def test_basic_constructions(self):
        assert parse_recipe("complete:5,2") == complete_uniform(5, 2)
        assert parse_recipe("hnka:7,2,3") == hnka(7, 2, 3)
        assert parse_recipe("star:4") == star(4)
        assert parse_recipe("edgeless:3").edge_count == 0

    def test_nested_kneser(self):
        assert parse_recipe("kneser:2:complete:5,2") == kneser(complete_uniform(5, 2), 2)

    def test_t_reduction_recipe(self):
        T = parse_recipe("t:0,2:complete:5,2")
        assert T.n == 5 and T.edge_count == 16

    def test_file_round_trip(self, tmp_path):
        from kneserlab import store_hypergraph

        H = complete_uniform(4, 2)
        path = tmp_path / "h.json"
        path.write_text(store_hypergraph(H))
        assert parse_recipe(f"file:{path}") == H

    def test_bad_recipe(self):
        with pytest.raises(RecipeError):
            parse_recipe("nonsense:1")
        with pytest.raises(RecipeError):
            parse_recipe("complete:5")


class TestRun:
    def test_empty_tasks_rejected(self):
        spec = ExperimentSpec(recipes=("complete:5,2",), tasks=())
        with pytest.raises(ValueError):
            run(spec)

    def test_missing_r_rejected(self):
        spec = ExperimentSpec(recipes=("complete:5,2",), tasks=("bounds",))
        with pytest.raises(ValueError):
            run(spec)

    def test_bounds_task_spec_example(self, tmp_path):
        spec = ExperimentSpec(
            recipes=("hnka:7,2,3",),
            tasks=("bounds", "chromatic"),
            r=2,
            cache_path=str(tmp_path / "cache.jsonl"),
        )
        result = run(spec)
        assert result.exit_code() == 0
        bounds = result.results[0].payload
        assert bounds["factors"][0]["ecd"] == 4
        assert bounds["product_ecd_bound"] == 4
        assert bounds["exact_chi"] == 4
        assert bounds["zhu_status"] == "VERIFIED"
        chrom = result.results[1].payload
        assert chrom["chi"] == 4

    def test_witness_task(self):
        spec = ExperimentSpec(recipes=("complete:5,2",), tasks=("witness",), p=2)
        result = run(spec)
        assert result.exit_code() == 0
        payload = result.results[0].payload
        assert payload["status"] == "FOUND"
        assert payload["target"] == 3
        assert sum(len(part["vertices"]) for part in payload["witness"]["parts"]) == 3

    def test_witness_task_two_factors(self):
        spec = ExperimentSpec(
            recipes=("complete:5,2", "complete:5,2"), tasks=("witness",), p=2
        )
        result = run(spec)
        assert result.exit_code() == 0
        payload = result.results[0].payload
        assert payload["status"] == "FOUND" and payload["chi"] == 3
        assert sum(len(part["vertices"]) for part in payload["witness"]["parts"]) == 3
        for part in payload["witness"]["parts"]:
            for vertex in part["vertices"]:
                assert len(vertex) == 2  # one edge index per factor

    def test_prooflab_task_clean(self):
        spec = ExperimentSpec(recipes=("complete:3,2",), tasks=("prooflab",), p=2)
        result = run(spec)
        assert result.exit_code() == 0
        payload = result.results[0].payload
        assert payload["lemma1_violations"] == []
        assert payload["lemma2_violations"] == []
        assert payload["dold"]["ok"]

    def test_prooflab_negative_control_fails_run(self):
        spec = ExperimentSpec(
            recipes=("complete:3,2",),
            tasks=("prooflab",),
            p=2,
            negative_control=True,
        )
        result = run(spec)
        assert result.exit_code() == 1
        assert result.results[0].payload["lemma1_violations"]

    def test_parallel_matches_sequential(self, tmp_path):
        base = dict(recipes=("complete:5,2",), tasks=("invariants", "chromatic"), r=2)
        seq = run(ExperimentSpec(**base))
        par = run(
            ExperimentSpec(
                **base, parallel=True, cache_path=str(tmp_path / "c.jsonl")
            )
        )
        assert [r.payload for r in seq.results] == [r.payload for r in par.results]

    def test_run_idempotent(self):
        spec = ExperimentSpec(recipes=("star:4",), tasks=("invariants",), r=2)
        first = run(spec).results[0].payload
        second = run(spec).results[0].payload
        assert canonical_json(first) == canonical_json(second)

    def test_exceeds_exit_code_strict(self):
        base = dict(recipes=("complete:7,2",), tasks=("chromatic",), r=2, limit=2)
        assert run(ExperimentSpec(**base)).exit_code() == 0
        assert run(ExperimentSpec(**base, strict=True)).exit_code() == 1


class TestReduction:
    def test_spec_example(self):
        rep = reduction_check(complete_uniform(5, 2), 2, 2, 1)
        assert rep.lhs == 1
        assert rep.ecd_t == 0 and rep.rhs == 2
        assert rep.holds

    def test_large_budget_trivial(self):
        rep = reduction_check(complete_uniform(5, 2), 2, 2, 5)
        assert rep.t_edge_count == 0
        assert rep.holds

    def test_edgeless(self):
        from kneserlab import Hypergraph

        rep = reduction_check(Hypergraph(4, []), 2, 2, 0)
        assert rep.lhs == 0 and rep.holds


class TestCompare:
    def test_star_row(self):
        pool = [ExperimentSpec(recipes=("star:4",), tasks=("compare",), r=2)]
        report = compare_bounds(pool)
        row = report.rows[0]
        assert (row.cd, row.ecd, row.n_minus_alt) == (0, 1, 1)

    def test_complete_row(self):
        pool = [ExperimentSpec(recipes=("complete:5,2",), tasks=("compare",), r=2)]
        row = compare_bounds(pool).rows[0]
        assert row.cd == row.ecd == row.n_minus_alt == 3

    def test_edgeless_row_zero(self):
        pool = [ExperimentSpec(recipes=("edgeless:4",), tasks=("compare",), r=2)]
        row = compare_bounds(pool).rows[0]
        assert row.cd == row.ecd == row.n_minus_alt == 0

    def test_default_pool_has_both_directions(self):
        report = compare_bounds(default_compare_pool())
        for label in report.ecd_side_wins:
            row = next(r for r in report.rows if f"{r.recipe} (r={r.r})" == label)
            assert row.ecd_bound > row.alt_bound
        for label in report.alt_side_wins:
            row = next(r for r in report.rows if f"{r.recipe} (r={r.r})" == label)
            assert row.alt_bound > row.ecd_bound
        assert report.ecd_side_wins, "pool should exhibit an equitable-side win"
        assert report.alt_side_wins, "pool should exhibit an alternation-side win"

    def test_empty_pool_rejected(self):
        with pytest.raises(ValueError):
            compare_bounds([])


class TestCache:
    def test_persist_and_reload(self, tmp_path):
        path = tmp_path / "cache.jsonl"
        H = complete_uniform(5, 2)
        cache = ResultCache(path)
        calls = []

        def compute():
            calls.append(1)
            return {"value": 3}

        key_args = (H, "cd", [2])
        assert cached_value(cache, *key_args, compute) == {"value": 3}
        assert cached_value(cache, *key_args, compute) == {"value": 3}
        assert len(calls) == 1
        fresh = ResultCache(path)
        assert cached_value(fresh, *key_args, compute) == {"value": 3}
        assert len(calls) == 1

    def test_self_check_detects_drift(self, tmp_path):
        from kneserlab.cache import CacheMismatchError

        path = tmp_path / "cache.jsonl"
        H = complete_uniform(4, 2)
        cache = ResultCache(path)
        cached_value(cache, H, "op", [], lambda: 1)
        with pytest.raises(CacheMismatchError):
            cached_value(cache, H, "op", [], lambda: 2, self_check=True)

    def test_corrupt_lines_dropped(self, tmp_path):
        path = tmp_path / "cache.jsonl"
        path.write_text('not json\n{"key": {"digest": "d", "op": "cd", "params": [2]}, "value": 7}\n')
        cache = ResultCache(path)
        assert cache.get({"digest": "d", "op": "cd", "params": [2]}) == 7

    def test_digest_is_structural(self):
        assert hypergraph_digest(complete_uniform(4, 2)) == hypergraph_digest(
            complete_uniform(4, 2)
        )

    def test_bounds_values_traceable_to_cache(self, tmp_path):
        path = tmp_path / "cache.jsonl"
        spec = ExperimentSpec(
            recipes=("hnka:7,2,3",), tasks=("bounds",), r=2, cache_path=str(path)
        )
        run(spec)
        ops = {
            json.loads(line)["key"]["op"] for line in path.read_text().splitlines()
        }
        assert {"cd", "ecd", "alt_min", "kg_chi", "product_kg_chi"} <= ops


class TestMainEntry:
    def test_bounds_command(self, capsys, tmp_path):
        code = main(
            [
                "bounds",
                "--r",
                "2",
                "hnka:7,2,3",
                "--out",
                str(tmp_path),
                "--cache",
                str(tmp_path / "cache.jsonl"),
            ]
        )
        out = capsys.readouterr().out
        assert code == 0
        assert "VERIFIED" in out
        written = list(tmp_path.glob("bounds-*.json"))
        assert written
        report = json.loads(written[0].read_text())
        assert report["results"][0]["payload"]["exact_chi"] == 4

    def test_compare_command(self, capsys):
        code = main(["compare"])
        out = capsys.readouterr().out
        assert code == 0
        assert "star:4" in out and "cycle:5" in out

    def test_reduce_command(self, capsys):
        code = main(["reduce", "--r", "2", "--s", "2", "--C", "1", "complete:5,2"])
        assert code == 0
        assert "True" in capsys.readouterr().out

    def test_usage_error_on_missing_param(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["bounds", "complete:5,2"])
        assert exc.value.code == 2

    def test_build_command(self, capsys):
        code = main(["build", "kneser:2:complete:5,2"])
        out = capsys.readouterr().out
        assert code == 0
        assert '"n": 10' in out

    def test_build_writes_loadable_files(self, capsys, tmp_path):
        code = main(["build", "kneser:2:complete:5,2", "--out", str(tmp_path)])
        capsys.readouterr()
        assert code == 0
        files = list(tmp_path.glob("hypergraph-*.json"))
        assert len(files) == 1
        assert parse_recipe(f"file:{files[0]}") == kneser(complete_uniform(5, 2), 2)

    def test_witness_command_writes_file(self, capsys, tmp_path):
        code = main(["witness", "--p", "2", "complete:5,2", "--out", str(tmp_path)])
        capsys.readouterr()
        assert code == 0
        files = list(tmp_path.glob("witness-*.json"))
        assert len(files) == 1
        data = json.loads(files[0].read_text())
        assert sum(len(part["vertices"]) for part in data["parts"]) == 3
