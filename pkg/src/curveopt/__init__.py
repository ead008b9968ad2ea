"""Global minimization of Lipschitz functions over boxes via curve reduction.

The package reduces an N-dimensional box to the unit interval with a
space-filling curve, runs information-statistical interval methods (with
optional local tuning and batched parallel trials) on the reduced
problem, and ships a seeded trigonometric test class plus a benchmark
harness, an HTTP service, and a CLI around them.
"""

__version__ = "0.1.0"

from .bench import (
    BenchConfig,
    BenchReport,
    BenchRow,
    CrossFamilyRow,
    emit_report,
    is_success,
    parse_report,
    run_bench,
    run_single,
)
from .curve import MAX_INDEX_BITS, CurveSpec, cell_of, map_to_domain, map_unit
from .executor import BatchExecutor, BatchRequest, BatchResult, EvaluationError
from .objective import (
    GrishaginFunction,
    Objective,
    OracleResult,
    Trial,
    generate_grishagin,
    grid_oracle,
    grishagin_objective,
    load_function,
    load_oracle,
    save_function,
    save_oracle,
)
from .solver import (
    CharacteristicForm,
    ConfigError,
    ConvergenceWitness,
    MethodConfig,
    RunReport,
    SolverError,
    SolverState,
    TrialBudgetExceeded,
    Variant,
    convergence_witness,
    solve,
)

__all__ = [
    "__version__",
    "BatchExecutor",
    "BatchRequest",
    "BatchResult",
    "BenchConfig",
    "BenchReport",
    "BenchRow",
    "CharacteristicForm",
    "ConfigError",
    "ConvergenceWitness",
    "CrossFamilyRow",
    "CurveSpec",
    "EvaluationError",
    "GrishaginFunction",
    "MAX_INDEX_BITS",
    "MethodConfig",
    "Objective",
    "OracleResult",
    "RunReport",
    "SolverError",
    "SolverState",
    "Trial",
    "TrialBudgetExceeded",
    "Variant",
    "cell_of",
    "convergence_witness",
    "emit_report",
    "generate_grishagin",
    "grid_oracle",
    "grishagin_objective",
    "is_success",
    "load_function",
    "load_oracle",
    "map_to_domain",
    "map_unit",
    "parse_report",
    "run_bench",
    "run_single",
    "save_function",
    "save_oracle",
    "solve",
]
