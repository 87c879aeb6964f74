"""Process matrices with indefinite causal order and the bipartite causal game."""

from .channels import (
    CjOperator,
    Instrument,
    apply_cj,
    choi_from_kraus,
    instrument_valid,
    is_cp,
    is_tp,
)
from .game import (
    AliceStrategy,
    BobStrategy,
    StrategyPair,
    alice_cj,
    analytic_probabilities,
    bob_cj,
    correlated_alice,
    correlated_bob,
    joint_distribution,
    joint_probability,
    load_strategy_pair,
    measure_reprepare_alice,
    measure_reprepare_bob,
    process_coefficients,
    saturating_strategies,
    save_strategy_pair,
    strategy_pair_from_dict,
    strategy_pair_to_dict,
    success_probability,
)
from .linalg import (
    CANONICAL_LABELS,
    HsTerm,
    SpaceLayout,
    embed,
    hermitian_eigensystem,
    hs_compose,
    hs_decompose,
    is_psd,
    kron,
    partial_trace,
    psd_sqrt,
)
from .optimize import (
    CAUSAL_BOUND,
    QUANTUM_BOUND,
    CertReport,
    OptimizationResult,
    OptimizerConfig,
    ProofGeometry,
    certify_quantum_bound,
    maximize_success,
    proof_vectors,
)
from .processes import (
    ALLOWED_TERM_TYPES,
    ProcessMatrix,
    ValidityReport,
    WernerParams,
    geometric_distance_werner,
    is_causally_separable_werner,
    load_process,
    make_causal_channel,
    make_noise,
    make_ocb,
    make_werner,
    process_from_dict,
    process_to_dict,
    random_valid_process,
    save_process,
    validate_process,
)
from .scan import ScanRow, werner_scan

__version__ = "0.1.0"

__all__ = [
    "ALLOWED_TERM_TYPES",
    "AliceStrategy",
    "BobStrategy",
    "CANONICAL_LABELS",
    "CAUSAL_BOUND",
    "CertReport",
    "CjOperator",
    "HsTerm",
    "Instrument",
    "OptimizationResult",
    "OptimizerConfig",
    "ProcessMatrix",
    "ProofGeometry",
    "QUANTUM_BOUND",
    "ScanRow",
    "SpaceLayout",
    "StrategyPair",
    "ValidityReport",
    "WernerParams",
    "alice_cj",
    "analytic_probabilities",
    "apply_cj",
    "bob_cj",
    "certify_quantum_bound",
    "choi_from_kraus",
    "correlated_alice",
    "correlated_bob",
    "embed",
    "geometric_distance_werner",
    "hermitian_eigensystem",
    "hs_compose",
    "hs_decompose",
    "instrument_valid",
    "is_causally_separable_werner",
    "is_cp",
    "is_psd",
    "is_tp",
    "joint_distribution",
    "joint_probability",
    "kron",
    "load_process",
    "load_strategy_pair",
    "make_causal_channel",
    "make_noise",
    "make_ocb",
    "make_werner",
    "maximize_success",
    "measure_reprepare_alice",
    "measure_reprepare_bob",
    "partial_trace",
    "process_coefficients",
    "process_from_dict",
    "process_to_dict",
    "proof_vectors",
    "psd_sqrt",
    "random_valid_process",
    "saturating_strategies",
    "save_process",
    "save_strategy_pair",
    "strategy_pair_from_dict",
    "strategy_pair_to_dict",
    "success_probability",
    "validate_process",
    "werner_scan",
]
