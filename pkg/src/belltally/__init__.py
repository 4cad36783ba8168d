"""Detection-aware Bell/CHSH statistics for two-qubit experiments.

The package separates registered-trials (conditional) statistics, which
reproduce quantum predictions and can violate the standard CHSH bound, from
all-trials (absolute) statistics, where each probability carries its
detection factor and a weighted CHSH bound of 2 holds for local models.
"""

from .chsh import (
    ChshReport,
    ChshSetting,
    angle_scan,
    conditional_expectations,
    detection_bound,
    min_detection_bound,
    modified_chsh_lhs,
    modified_lhs_grid_max,
    optimize_chsh_angles,
    standard_chsh_lhs,
    standard_lhs_grid_max,
)
from .detection import (
    DetectionModel,
    GeneralizedExpectation,
    GeneralizedObservable,
    OutcomeDistribution,
    detection_products_within_symmetric_limit,
    generalized_correlation,
    generalized_expectation,
    joint_detection_probability,
    outcome_distribution,
    sequential_distribution_factored,
    sequential_distribution_general,
)
from .errors import (
    BelltallyError,
    ConfigurationError,
    InputValidationError,
    ZeroProbabilityError,
)
from .lhv import (
    ChshSimulation,
    FairSamplingResult,
    HiddenVariable,
    MicrostateEnsemble,
    MicrostateModel,
    MixtureProbabilities,
    SimulationSummary,
    chsh_pairs,
    constant_model,
    estimate_micro_correlation,
    fair_sampling_check,
    gisin_gisin_model,
    micro_chsh,
    micro_observable_expectation,
    mixture_probabilities,
    random_microstate_model,
    run_experiment,
    sample_hidden_uniform,
    sign_model,
    simulate_chsh,
    summary_chsh,
)
from .quantum import (
    X_AXIS,
    Y_AXIS,
    Z_AXIS,
    DensityState,
    Direction,
    ProjectiveObservable,
    acting_subsystem,
    born_joint_probability,
    born_probability,
    luders_update,
    observables_commute,
    quantum_expectation_product,
    singlet_state,
    spin_label,
    spin_observable,
)

__version__ = "0.1.0"
