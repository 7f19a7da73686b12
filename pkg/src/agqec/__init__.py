"""Evaluation codes on y^q + y = x^m, derived qudit stabilizer codes, and a
two-stage greedy + Q-network syndrome decoder with a Monte Carlo harness."""

from .gf import FieldSpec, Felt, build_field, arith, conj_q
from .curve import CurveSpec, affine_points, genus, monomial_basis, rr_dimension
from .agcode import (
    LinearCode,
    build_one_point_code,
    claimed_parameters,
    dual_code,
    hermitian_so_sweep,
    is_hermitian_self_orthogonal,
    load_code,
    max_so_degree,
    min_distance_exact,
    save_code,
)
from .stabilizer import (
    ConstructionError,
    DistanceBound,
    StabilizerCode,
    distance_lower_bound,
    load_stabilizer,
    pauli_weight,
    save_stabilizer,
    single_qudit_pauli,
    symplectic_product,
)
from .channel import NoiseModel, sample_error
from .greedy import GreedyDecoder, GreedyResult, action_set, greedy_decode
from .dqn import (
    QNetwork,
    RLResult,
    TrainConfig,
    Transition,
    encode_state,
    decode_state,
    load_model,
    rl_decode,
    save_model,
    step_env,
    td_update,
    train,
)
from .simharness import (
    PairedStats,
    SweepRow,
    TrialOutcome,
    estimate_failure_rate,
    paired_eval,
    run_trial,
    sweep,
    wilson_interval,
)

__version__ = "0.1.0"
