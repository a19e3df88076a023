"""Recover even-length analytic signals from FROG intensity measurements.

The library covers the forward map (measurement synthesis in the time and
frequency domains), the measurement ambiguity group, closed-form circle
solvers, a deterministic measurement-index planner, and the staged recovery
pipeline, plus an acceptance self-test and a small CLI (``frogpr``).
"""

from .ambiguity import (
    EquivalenceReport,
    GroupElement,
    apply_element,
    equivalent_up_to_group,
    group_elements,
    reflect,
    rotate,
    translate,
)
from .analytic import (
    AnalyticityReport,
    is_analytic,
    make_analytic,
    random_analytic_signal,
)
from .circles import (
    Circle,
    circles_common_point,
    solve_three_circles,
    solve_two_circles_real,
    solve_two_circles_scaled,
)
from .errors import (
    DegenerateSignalError,
    FrogprError,
    InconsistentMeasurementsError,
    NoSolutionError,
    SingularConfigurationError,
)
from .frog import (
    ConstraintChecks,
    FrogMeasurements,
    FrogParams,
    MeasurementIndexPlan,
    constraint_checks,
    frog_grid_freq,
    frog_grid_time,
    frog_measurements_freq,
    frog_measurements_time,
    plan_indices,
)
from .jsonio import (
    load_measurements,
    load_signal,
    save_measurements,
    save_signal,
)
from .recovery import (
    RecoveryConfig,
    RecoveryResult,
    even_l_infeasibility_probe,
    recover,
    recover_tail,
    recover_z0,
    verify_solution,
)
from .spectral import as_signal, dft, idft, root_of_unity

__version__ = "0.1.0"

__all__ = [
    "AnalyticityReport",
    "Circle",
    "ConstraintChecks",
    "DegenerateSignalError",
    "EquivalenceReport",
    "FrogMeasurements",
    "FrogParams",
    "FrogprError",
    "GroupElement",
    "InconsistentMeasurementsError",
    "MeasurementIndexPlan",
    "NoSolutionError",
    "RecoveryConfig",
    "RecoveryResult",
    "SingularConfigurationError",
    "apply_element",
    "as_signal",
    "circles_common_point",
    "constraint_checks",
    "dft",
    "equivalent_up_to_group",
    "even_l_infeasibility_probe",
    "frog_grid_freq",
    "frog_grid_time",
    "frog_measurements_freq",
    "frog_measurements_time",
    "group_elements",
    "idft",
    "is_analytic",
    "load_measurements",
    "load_signal",
    "make_analytic",
    "plan_indices",
    "random_analytic_signal",
    "recover",
    "recover_tail",
    "recover_z0",
    "reflect",
    "root_of_unity",
    "rotate",
    "save_measurements",
    "save_signal",
    "solve_three_circles",
    "solve_two_circles_real",
    "solve_two_circles_scaled",
    "translate",
    "verify_solution",
    "__version__",
]
