"""kneserlab: an exact desk-scale laboratory for general Kneser hypergraphs,
colorability defects, chromatic lower bounds, and colorful witnesses."""

from .hypergraph import (
    MAX_VERTICES,
    CapExceededError,
    ChromaticValue,
    Coloring,
    Hypergraph,
    induced,
    is_colorful_balanced_complete,
    is_proper,
    load_coloring,
    load_hypergraph,
    section,
    store_coloring,
    store_hypergraph,
)
from .constructions import (
    ProductSpace,
    complete_uniform,
    cycle,
    edgeless,
    hnka,
    kneser,
    minimal_covers,
    product_full,
    product_is_proper,
    product_minimal,
    star,
    t_hypergraph,
)
from .invariants import (
    AltResult,
    Permutation,
    SignVector,
    alt_min,
    alt_of,
    alt_sigma,
    cd,
    ecd,
)
from .chromatic import (
    BoundReport,
    FactorBounds,
    OutOfProvenRangeError,
    bound_report,
    chromatic_number,
    formula_hnka,
    formula_hnka_checked,
    formula_kneser,
    product_chromatic,
    projection_coloring,
    solve_chromatic,
    solve_product_chromatic,
)
from .prooflab import (
    PartiteWitness,
    ScanResult,
    Simplex,
    SignMapTables,
    SplitVector,
    Violation,
    check_lemma1,
    check_lemma2,
    dold_consequence,
    extract_witness,
    find_witness,
    index_cap,
    lambda1,
    lambda2,
    nu,
    sigma2_scan,
    split,
    tau_of,
    witness_target,
)
from .experiments import (
    CompareReport,
    ExperimentSpec,
    ReductionReport,
    compare_bounds,
    default_compare_pool,
    parse_recipe,
    reduction_check,
    run,
)

__version__ = "0.1.0"

__all__ = [
    "AltResult",
    "BoundReport",
    "CapExceededError",
    "ChromaticValue",
    "Coloring",
    "CompareReport",
    "ExperimentSpec",
    "FactorBounds",
    "Hypergraph",
    "MAX_VERTICES",
    "OutOfProvenRangeError",
    "PartiteWitness",
    "Permutation",
    "ProductSpace",
    "ReductionReport",
    "ScanResult",
    "SignMapTables",
    "SignVector",
    "Simplex",
    "SplitVector",
    "Violation",
    "alt_min",
    "alt_of",
    "alt_sigma",
    "bound_report",
    "cd",
    "check_lemma1",
    "check_lemma2",
    "chromatic_number",
    "compare_bounds",
    "complete_uniform",
    "cycle",
    "default_compare_pool",
    "dold_consequence",
    "ecd",
    "edgeless",
    "extract_witness",
    "find_witness",
    "formula_hnka",
    "formula_hnka_checked",
    "formula_kneser",
    "hnka",
    "index_cap",
    "induced",
    "is_colorful_balanced_complete",
    "is_proper",
    "kneser",
    "lambda1",
    "lambda2",
    "load_coloring",
    "load_hypergraph",
    "minimal_covers",
    "nu",
    "parse_recipe",
    "product_chromatic",
    "product_full",
    "product_is_proper",
    "product_minimal",
    "projection_coloring",
    "reduction_check",
    "run",
    "section",
    "sigma2_scan",
    "solve_chromatic",
    "solve_product_chromatic",
    "split",
    "star",
    "store_coloring",
    "store_hypergraph",
    "t_hypergraph",
    "tau_of",
    "witness_target",
]
