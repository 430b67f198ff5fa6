"""Finite-alphabet information measures and the tunable-leakage family.

Core objects: `Pmf`, `Channel`, `Joint` over named alphabets.  On top of them:
the Renyi divergence family and Sibson mutual information (`renyi`), maximal
expected guessing gains (`guessing`), variational witnesses for the
order-infinity divergence (`variational`), and the three leakage measures
(`leakage`).  Everything is immutable and pure; all logarithms are base 2.
"""

from .errors import (
    AlphabetMismatchError,
    AlphaleakError,
    CostGuardError,
    DomainError,
    InputValidationError,
    OptimizerError,
    RefusedComputationError,
)
from .guessing import (
    Envelope,
    GainSpec,
    GainValue,
    builtin_gains,
    concave_envelope,
    gain_from_selector,
    identity_gain,
    indicator_gain,
    log_gain,
    max_expected_gain,
    power_gain,
    square_gain,
)
from .leakage import (
    CheckResult,
    LeakageQuery,
    LeakageReport,
    alpha_sweep,
    definitional_cross_check,
    evaluate_leakage,
    maximal_alpha_leakage,
    opportunistic_leakage,
    opportunistic_leakage_posterior_form,
    realizable_leakage,
    realizable_leakage_ratio_form,
)
from .optimize import (
    OptimizerConfig,
    OptReport,
    SimplexObjective,
    grid_oracle,
    maximize_on_simplex,
    maximize_over_channel,
)
from .prob import (
    Alphabet,
    Channel,
    Joint,
    Pmf,
    flatten_joint,
    forward_channel,
    joint_from_prior_channel,
    marginals,
    posterior_channel,
    product,
    pushforward,
    support,
)
from .renyi import (
    Order,
    kl_divergence,
    limit_check_alpha_to_infinity,
    mutual_information,
    renyi_divergence,
    shannon_entropy,
    sibson_mi,
)
from .variational import (
    LogGainReport,
    ShatteredChannelSpec,
    VariationalReport,
    Witness,
    alpha_norm_ratio_objective,
    dedicated_pivot_spec,
    expectation_ratio_objective,
    gain_ratio_objective,
    indicator_witness,
    pivot_symbol,
    point_mass_witness,
    relative_entropy_gap,
    shattered_channel,
    shattered_mass,
    split_pivot_spec,
    verify_guessing_characterization,
    verify_log_gain_ratio,
)

__version__ = "0.1.0"
