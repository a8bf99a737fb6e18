"""Delayed-choice entanglement swapping: simulation and information analysis.

A small dense-state engine (:mod:`swaplab.qstate`), the protocol's states
and generalized Bell bases (:mod:`swaplab.swapkit`), information measures
and their complementarity (:mod:`swaplab.infometrics`), CHSH maximization
(:mod:`swaplab.chsh`), a timestamped delayed-choice record harness
(:mod:`swaplab.delayed`), classical-teleportation fidelity
(:mod:`swaplab.estimator`), and a CLI (``swaplab``).
"""

from .chsh import ChshResult, Settings, chsh_max, chsh_value, i_corr_from_s
from .delayed import (
    ChshEstimate,
    CorrelationEstimate,
    EventRecord,
    ExperimentConfig,
    InsufficientDataError,
    RunLog,
    TimingModel,
    conditional_correlation,
    delayed_chsh,
    order_independence_check,
    run_experiment,
    sort_by_victor,
)
from .estimator import (
    EffectiveElement,
    FidelityResult,
    analytic_fidelity,
    average_fidelity,
    effective_elements,
    estimate_state,
    fidelity_bound_from_chsh,
)
from .infometrics import (
    ComplementarityResult,
    CorrelationProbs,
    IndividualInfo,
    InfoMeasures,
    complementarity,
    correlation_probs,
    correlation_tensor,
    i_corr,
    i_ind,
    info_chain,
    info_measure,
)
from .qstate import (
    DensityMatrix,
    ImpossibleOutcomeError,
    LabelError,
    Observable1Q,
    ProjectiveBasis,
    PureState,
    StateError,
    born_distribution,
    condition_on,
    expectation,
    haar_random_qubit,
    haar_random_state,
    inner,
    ket,
    project,
    reduced_density,
    reorder,
    states_equal,
    tensor,
)
from .rng import stream
from .swapkit import (
    OUTCOME_NAMES,
    PHI_MINUS,
    PHI_PLUS,
    PSI_MINUS,
    PSI_PLUS,
    AlphaBellBasis,
    conditional_state,
    make_alpha_basis,
    make_singlet,
    make_total_state,
    swap_decomposition,
)

__version__ = "0.1.0"
