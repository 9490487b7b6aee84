"""Density matrices, projective measurements and the CHSH inequality, numerically."""

from .chsh import (
    TSIRELSON,
    ChshConfig,
    ChshReport,
    canonical_config,
    check_bound,
    chsh_expect,
    chsh_op,
    chsh_square,
    commutator,
    expect_abs_bound,
)
from .errors import *  # noqa: F401,F403
from .game import GameResult, QuantumStrategy, exact_expectations, play_game
from .lhv import (
    ChshLhvModel,
    DeterministicStrategy,
    DiscreteProbabilitySpace,
    LhvModel,
    MixedStrategy,
    classical_max,
    classical_strategy_table,
    lhv_check,
    lhv_product_expect,
    qt_expect,
    score_from_expectations,
)
from .measurement import (
    JointOutcomeDistribution,
    MeasOutcome,
    ProjectiveMeasurement,
    collapse,
    expect_value,
    is_proj_measurement,
    joint_distribution,
    make_pm,
    outcome_prob,
    sample_outcome,
)
from .spectral import (
    Spectrum,
    SpectralDecomposition,
    is_hermitian,
    is_positive_semidefinite,
    is_unitary,
    l2_op_norm,
    real_diag_decomp,
    singular_values,
    spectrum,
)
from .states import (
    DensityMatrix,
    Ensemble,
    SeparableDecomposition,
    bell_states,
    density_from_ensemble,
    density_from_matrix,
    density_from_separable,
    evolve,
    is_pure,
    max_mixed,
    standard_kets,
)

__version__ = "0.1.0"
