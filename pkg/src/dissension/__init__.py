"""Tripartite quantum dissension, residual correlation and state-merging costs."""

from ._kernels import BACKEND
from .correlation import (
    CorrelationReport,
    EntropyPanel,
    conditional_entropy_one,
    conditional_entropy_two,
    correlation_report,
    dissension_d1c,
    dissension_d2c,
    dissension_drc,
    entropy_panel,
    minimize_over_theta,
    minimized_dissension,
    mutual_info_i0,
    mutual_info_i1,
    mutual_info_i2,
    residual_correlation,
    theta_profile,
    verify_lemma1,
    von_neumann_entropy,
)
from .linalg import hermitian_eigen, partial_trace, tensor
from .measurement import measure, one_particle_basis, post_measurement_state, two_particle_basis
from .merging import (
    MergingReport,
    conditional_entropy,
    merging_cost_total,
    merging_report,
    verify_corollary,
    verify_lemma2,
)
from .states import (
    DensityMatrix,
    PureState,
    basis_state,
    ghz_state,
    maximally_mixed,
    purity,
    random_density,
    random_pure_state,
    read_density,
    to_density,
    w_state,
    write_density,
)

__version__ = "0.1.0"
