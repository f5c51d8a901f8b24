"""Experiment orchestration: factor recipes, task execution, reduction and
bound-comparison reports. The CLI is a thin wrapper around `run`.
"""

from __future__ import annotations

import time
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from .cache import CODE_VERSION, ResultCache, cached_value
from .chromatic import (
    bound_report,
    ceil_div,
    chromatic_number,
    solve_product_chromatic,
)
from .constructions import (
    complete_uniform,
    cycle,
    edgeless,
    hnka,
    kneser,
    star,
    t_hypergraph,
)
from .hypergraph import (
    ChromaticValue,
    Coloring,
    Hypergraph,
    load_coloring,
    load_hypergraph,
)
from .invariants import ALT_EXACT_MAX_N, alt_min, cd, ecd
from .prooflab import (
    SignMapTables,
    check_lemma1,
    check_lemma2,
    dold_consequence,
    find_witness,
    is_prime,
    sigma2_scan,
    witness_target,
)

KNOWN_TASKS = (
    "build",
    "invariants",
    "chromatic",
    "bounds",
    "witness",
    "prooflab",
    "reduce",
    "compare",
)


# --- recipes -------------------------------------------------------------------


class RecipeError(ValueError):
    """A factor recipe string cannot be resolved to a construction."""


def parse_recipe(text: str) -> Hypergraph:
    """Build a hypergraph from a compact recipe string.

    Grammar: ``complete:N,K`` | ``hnka:N,K,A`` | ``star:N`` | ``cycle:N`` |
    ``edgeless:N`` | ``file:PATH`` | ``kneser:R:<recipe>`` | ``t:C,S:<recipe>``.
    """
    head, _, rest = text.partition(":")
    try:
        if head == "complete":
            n, k = (int(x) for x in rest.split(","))
            return complete_uniform(n, k)
        if head == "hnka":
            n, k, a = (int(x) for x in rest.split(","))
            return hnka(n, k, a)
        if head == "star":
            return star(int(rest))
        if head == "cycle":
            return cycle(int(rest))
        if head == "edgeless":
            return edgeless(int(rest))
        if head == "file":
            return load_hypergraph(Path(rest).read_text())
        if head == "kneser":
            r_text, _, inner = rest.partition(":")
            return kneser(parse_recipe(inner), int(r_text))
        if head == "t":
            params, _, inner = rest.partition(":")
            c_text, s_text = params.split(",")
            return t_hypergraph(parse_recipe(inner), int(c_text), int(s_text))
    except RecipeError:
        raise
    except (ValueError, OSError, KeyError) as exc:
        raise RecipeError(f"bad recipe {text!r}: {exc}") from exc
    raise RecipeError(f"unknown recipe head {head!r} in {text!r}")


# --- experiment specs ------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentSpec:
    """A batch of tasks over one list of factor recipes."""

    recipes: tuple[str, ...]
    tasks: tuple[str, ...]
    r: int | None = None
    p: int | None = None
    limit: int | None = None
    mode: str = "exact"
    s: int | None = None
    C: int | None = None
    eta: int | None = None
    coloring_path: str | None = None
    force: bool = False
    strict: bool = False
    parallel: bool = False
    negative_control: bool = False
    self_check: bool = False
    ground: bool = False
    cache_path: str | None = None
    out_dir: str | None = None

    def validate(self) -> None:
        if not self.tasks:
            raise ValueError("task list is empty")
        for t in self.tasks:
            if t not in KNOWN_TASKS:
                raise ValueError(f"unknown task {t!r}")
        if not self.recipes and set(self.tasks) != {"compare"}:
            raise ValueError("no factor recipes given")
        needs_r = {"invariants", "chromatic", "bounds", "reduce"} & set(self.tasks)
        if needs_r and self.r is None:
            raise ValueError(f"tasks {sorted(needs_r)} need --r")
        needs_p = {"witness", "prooflab"} & set(self.tasks)
        if needs_p and self.p is None:
            raise ValueError(f"tasks {sorted(needs_p)} need --p")
        if "reduce" in self.tasks and (self.s is None or self.C is None):
            raise ValueError("reduce needs --s and --C")
        if self.mode not in ("exact", "heuristic"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class TaskResult:
    name: str
    status: str  # ok | exceeds | violation | failed
    payload: dict
    wall_time: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "task": self.name,
            "status": self.status,
            "wall_time_s": round(self.wall_time, 3),
            "payload": self.payload,
        }


@dataclass
class RunResult:
    spec: ExperimentSpec
    results: list[TaskResult] = field(default_factory=list)

    def exit_code(self) -> int:
        for res in self.results:
            if res.status in ("failed", "violation"):
                return 1
            if res.status == "exceeds" and self.spec.strict:
                return 1
        return 0


# --- invariant helpers with caching ------------------------------------------------


def _alt_value(
    H: Hypergraph, r: int, mode: str, cache: ResultCache | None, self_check: bool
) -> tuple[int, str]:
    effective = mode
    if mode == "exact" and H.n > ALT_EXACT_MAX_N:
        effective = "heuristic"

    def compute():
        res = alt_min(H, r, effective)
        return {"alt": res.value, "status": res.status, "sigma": list(res.sigma.sigma)}

    value = cached_value(cache, H, "alt_min", [r, effective], compute, self_check)
    return value["alt"], value["status"]


def _cached_int(
    H: Hypergraph, op: str, r: int, fn, cache: ResultCache | None, self_check: bool
) -> int:
    return cached_value(cache, H, op, [r], lambda: fn(H, r), self_check)


def invariant_rows(
    factors: Sequence[Hypergraph],
    recipes: Sequence[str],
    r: int,
    mode: str,
    cache: ResultCache | None,
    self_check: bool = False,
) -> list[dict]:
    rows = []
    for H, recipe in zip(factors, recipes):
        cd_v = _cached_int(H, "cd", r, cd, cache, self_check)
        ecd_v = _cached_int(H, "ecd", r, ecd, cache, self_check)
        alt_v, alt_status = _alt_value(H, r, mode, cache, self_check)
        rows.append(
            {
                "recipe": recipe,
                "n": H.n,
                "edges": H.edge_count,
                "cd": cd_v,
                "ecd": ecd_v,
                "alt": alt_v,
                "n_minus_alt": H.n - alt_v,
                "alt_status": alt_status,
            }
        )
    return rows


# --- reduction and comparison reports ----------------------------------------------


@dataclass(frozen=True)
class ReductionReport:
    """Both sides of the composite-modulus defect reduction
    ecd^{rs}(H) <= r (s-1) C + ecd^r(T) for the induced-defect hypergraph T."""

    r: int
    s: int
    C: int
    lhs: int
    rhs: int
    ecd_t: int
    t_edge_count: int

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    def to_json_dict(self) -> dict:
        return {
            "r": self.r,
            "s": self.s,
            "C": self.C,
            "lhs_ecd_rs": self.lhs,
            "rhs": self.rhs,
            "ecd_t": self.ecd_t,
            "t_edge_count": self.t_edge_count,
            "holds": self.holds,
        }


def reduction_check(H: Hypergraph, r: int, s: int, C: int) -> ReductionReport:
    lhs = ecd(H, r * s)
    T = t_hypergraph(H, C, s)
    ecd_t = ecd(T, r)
    rhs = r * (s - 1) * C + ecd_t
    return ReductionReport(r, s, C, lhs, rhs, ecd_t, T.edge_count)


@dataclass(frozen=True)
class CompareRow:
    recipe: str
    r: int
    n: int
    cd: int
    ecd: int
    n_minus_alt: int
    cd_bound: int
    ecd_bound: int
    alt_bound: int
    chi: ChromaticValue | None

    def to_json_dict(self) -> dict:
        return {
            "recipe": self.recipe,
            "r": self.r,
            "n": self.n,
            "cd": self.cd,
            "ecd": self.ecd,
            "n_minus_alt": self.n_minus_alt,
            "cd_bound": self.cd_bound,
            "ecd_bound": self.ecd_bound,
            "alt_bound": self.alt_bound,
            "chi": self.chi.to_json() if self.chi else None,
            "ecd_gap": self.ecd - self.n_minus_alt,
        }


@dataclass
class CompareReport:
    rows: list[CompareRow]
    ecd_side_wins: list[str]  # recipes where ecd_bound > alt_bound
    alt_side_wins: list[str]  # recipes where alt_bound > ecd_bound
    notes: list[str]

    def to_json_dict(self) -> dict:
        return {
            "rows": [row.to_json_dict() for row in self.rows],
            "ecd_side_wins": self.ecd_side_wins,
            "alt_side_wins": self.alt_side_wins,
            "notes": self.notes,
        }


def default_compare_pool() -> list[ExperimentSpec]:
    """The shipped pool: instances where each defect bound is known to win
    somewhere (the star with r=3 for the equitable side, the 5-cycle for the
    alternation side), plus reference rows."""
    entries = [
        ("star:4", 2),
        ("star:6", 3),
        ("cycle:5", 2),
        ("complete:5,2", 2),
        ("complete:6,2", 2),
        ("hnka:7,2,3", 2),
        ("complete:7,2", 3),
        ("edgeless:4", 2),
    ]
    return [
        ExperimentSpec(recipes=(recipe,), tasks=("compare",), r=r)
        for recipe, r in entries
    ]


def compare_bounds(
    pool: Sequence[ExperimentSpec],
    cache: ResultCache | None = None,
    limit: int | None = 6,
) -> CompareReport:
    """One row per pool hypergraph with every defect quantity, both
    aggregate bounds, and exact chi of its general Kneser hypergraph when
    the solver finishes under the limit; records in which direction each
    bound wins strictly."""
    if not pool:
        raise ValueError("empty comparison pool")
    rows: list[CompareRow] = []
    for spec in pool:
        r = spec.r if spec.r is not None else 2
        for recipe in spec.recipes:
            H = parse_recipe(recipe)
            cd_v = _cached_int(H, "cd", r, cd, cache, False)
            ecd_v = _cached_int(H, "ecd", r, ecd, cache, False)
            alt_v, _ = _alt_value(H, r, "exact", cache, False)
            chi: ChromaticValue | None
            try:
                chi = chromatic_number(kneser(H, r), limit)
            except ValueError:
                chi = None
            if chi is not None and cache is not None:
                cached_value(cache, H, "kg_chi", [r, limit], lambda: chi.to_json())
            rows.append(
                CompareRow(
                    recipe=recipe,
                    r=r,
                    n=H.n,
                    cd=cd_v,
                    ecd=ecd_v,
                    n_minus_alt=H.n - alt_v,
                    cd_bound=ceil_div(cd_v, r - 1),
                    ecd_bound=ceil_div(ecd_v, r - 1),
                    alt_bound=ceil_div(H.n - alt_v, r - 1),
                    chi=chi,
                )
            )
    ecd_side = [f"{row.recipe} (r={row.r})" for row in rows if row.ecd_bound > row.alt_bound]
    alt_side = [f"{row.recipe} (r={row.r})" for row in rows if row.alt_bound > row.ecd_bound]
    notes = []
    if not ecd_side:
        notes.append("no pool instance has ecd_bound > alt_bound")
    if not alt_side:
        notes.append("no pool instance has alt_bound > ecd_bound")
    return CompareReport(rows, ecd_side, alt_side, notes)


# --- task execution ----------------------------------------------------------------


def _coloring_for(
    spec: ExperimentSpec, kgs: list[Hypergraph]
) -> tuple[Coloring | None, ChromaticValue | None]:
    if spec.coloring_path is not None:
        return load_coloring(Path(spec.coloring_path).read_text()), None
    value, coloring = solve_product_chromatic(kgs, spec.limit)
    return coloring, value


def _run_task(spec: ExperimentSpec, task: str, cache: ResultCache | None) -> TaskResult:
    start = time.perf_counter()
    try:
        result = _dispatch_task(spec, task, cache)
    except Exception as exc:  # failure is a first-class outcome
        result = TaskResult(task, "failed", {"error": f"{type(exc).__name__}: {exc}"})
    result.wall_time = time.perf_counter() - start
    return result


def _dispatch_task(
    spec: ExperimentSpec, task: str, cache: ResultCache | None
) -> TaskResult:
    factors = [parse_recipe(recipe) for recipe in spec.recipes]

    if task == "build":
        payload = {
            "hypergraphs": [
                {
                    "recipe": recipe,
                    "hypergraph": H.to_json_dict(),
                    "meta": {"recipe": recipe, "version": CODE_VERSION},
                }
                for recipe, H in zip(spec.recipes, factors)
            ]
        }
        return TaskResult(task, "ok", payload)

    if task == "invariants":
        rows = invariant_rows(
            factors, spec.recipes, spec.r, spec.mode, cache, spec.self_check
        )
        return TaskResult(task, "ok", {"r": spec.r, "factors": rows})

    if task == "chromatic":
        targets = factors if spec.ground else [kneser(H, spec.r) for H in factors]
        value, coloring = solve_product_chromatic(targets, spec.limit)
        payload = {
            "r": spec.r,
            "ground": spec.ground,
            "chi": value.to_json(),
            "coloring": list(coloring.colors) if coloring else None,
            "color_count": coloring.color_count if coloring else None,
        }
        status = "exceeds" if value.kind == "exceeds" else "ok"
        return TaskResult(task, status, payload)

    if task == "bounds":
        report = bound_report(factors, spec.r, compute_exact=True, limit=spec.limit)
        if cache is not None:
            # every table value must be traceable to a cache entry
            invariant_rows(factors, spec.recipes, spec.r, "exact", cache, spec.self_check)
            for H, row in zip(factors, report.factors):
                if row.kg_chi is not None:
                    cached_value(
                        cache,
                        H,
                        "kg_chi",
                        [spec.r, spec.limit],
                        lambda value=row.kg_chi: value.to_json(),
                        spec.self_check,
                    )
            if report.exact_chi is not None:
                cached_value(
                    cache,
                    factors[0],
                    "product_kg_chi",
                    [spec.r, spec.limit, list(spec.recipes)],
                    lambda: report.exact_chi.to_json(),
                    spec.self_check,
                )
        problems = report.check()
        payload = report.to_json_dict()
        payload["recipes"] = list(spec.recipes)
        if problems:
            payload["violations"] = problems
            return TaskResult(task, "violation", payload)
        status = (
            "exceeds"
            if report.exact_chi is not None and report.exact_chi.kind == "exceeds"
            else "ok"
        )
        return TaskResult(task, status, payload)

    if task == "witness":
        p = spec.p
        kgs = [kneser(H, p) for H in factors]
        coloring, chi = _coloring_for(spec, kgs)
        if coloring is None:
            return TaskResult(
                task,
                "exceeds",
                {"p": p, "chi": chi.to_json() if chi else None, "witness": None},
            )
        target = spec.eta if spec.eta is not None else witness_target(factors, p)
        witness = find_witness(factors, p, coloring, target, force=spec.force)
        scan = sigma2_scan(factors, p, coloring)
        payload = {
            "p": p,
            "chi": chi.to_json() if chi else None,
            "target": target,
            "max_ell": scan.max_ell,
            "witness": witness.to_json_dict() if witness else None,
        }
        if witness is None:
            # within the guarantee this is a bug, except on degenerate
            # instances with an empty saturated side and a target below p
            # (the guaranteed witness there is the empty-part one)
            guaranteed = (
                is_prime(p)
                and target <= witness_target(factors, p)
                and not (scan.saturated_count == 0 and target < p)
            )
            payload["status"] = "NOT_FOUND"
            return TaskResult(task, "violation" if guaranteed else "ok", payload)
        problems = witness.problems(factors, coloring)
        if problems:
            payload["violations"] = problems
            return TaskResult(task, "violation", payload)
        payload["status"] = "EXPERIMENTAL" if witness.experimental else "FOUND"
        return TaskResult(task, "ok", payload)

    if task == "prooflab":
        p = spec.p
        corrupt = ("signsets", "simplex") if spec.negative_control else ()
        tables = SignMapTables(p, corrupt=corrupt)
        lemma1 = check_lemma1(factors, p, tables)
        kgs = [kneser(H, p) for H in factors]
        coloring, _ = _coloring_for(spec, kgs)
        lemma2 = None
        dold = None
        if coloring is not None:
            lemma2 = check_lemma2(factors, p, coloring, tables)
            dold = dold_consequence(factors, p, coloring)
        payload = {
            "p": p,
            "negative_control": spec.negative_control,
            "lemma1_violations": [v.to_json_dict() for v in lemma1],
            "lemma2_violations": [v.to_json_dict() for v in lemma2]
            if lemma2 is not None
            else None,
            "dold": dold.to_json_dict() if dold is not None else None,
        }
        bad = bool(lemma1) or bool(lemma2) or (dold is not None and not dold.ok)
        return TaskResult(task, "violation" if bad else "ok", payload)

    if task == "reduce":
        reports = [reduction_check(H, spec.r, spec.s, spec.C) for H in factors]
        payload = {
            "reports": [
                dict(recipe=recipe, **rep.to_json_dict())
                for recipe, rep in zip(spec.recipes, reports)
            ]
        }
        bad = any(not rep.holds for rep in reports)
        return TaskResult(task, "violation" if bad else "ok", payload)

    if task == "compare":
        if spec.recipes:
            pool = [replace(spec, tasks=("compare",))]
        else:
            pool = default_compare_pool()
        report = compare_bounds(pool, cache, spec.limit if spec.limit else 6)
        return TaskResult(task, "ok", report.to_json_dict())

    raise ValueError(f"unknown task {task!r}")


def _run_task_in_worker(spec: ExperimentSpec, task: str, shard_path: str | None):
    cache = ResultCache(shard_path) if shard_path else None
    return _run_task(spec, task, cache)


def run(spec: ExperimentSpec) -> RunResult:
    """Execute every task of the spec (sequentially, or concurrently with
    per-task cache shards merged afterwards) and collect the results."""
    spec.validate()
    cache = ResultCache(spec.cache_path) if spec.cache_path else None
    out = RunResult(spec)
    if spec.parallel and len(spec.tasks) > 1:
        shard_paths = [
            f"{spec.cache_path}.shard{i}" if spec.cache_path else None
            for i in range(len(spec.tasks))
        ]
        with ProcessPoolExecutor() as pool:
            futures = [
                pool.submit(_run_task_in_worker, spec, task, shard)
                for task, shard in zip(spec.tasks, shard_paths)
            ]
            out.results = [f.result() for f in futures]
        if cache is not None:
            for shard in shard_paths:
                if shard and Path(shard).exists():
                    cache.merge_from(ResultCache(shard))
                    Path(shard).unlink()
    else:
        for task in spec.tasks:
            out.results.append(_run_task(spec, task, cache))
    return out


# --- text tables ---------------------------------------------------------------------


def format_table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    cells = [[str(x) for x in row] for row in rows]
    widths = [
        max(len(h), *(len(row[i]) for row in cells)) if cells else len(h)
        for i, h in enumerate(headers)
    ]
    def fmt(row):
        return "  ".join(s.ljust(w) for s, w in zip(row, widths)).rstrip()
    lines = [fmt(headers), fmt(["-" * w for w in widths])]
    lines.extend(fmt(row) for row in cells)
    return "\n".join(lines)
