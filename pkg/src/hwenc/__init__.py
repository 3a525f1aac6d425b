"""Amplitude encoders for fixed-weight, sparse and dense binary data.

Builds quantum circuits preparing states whose amplitudes carry a data
vector, either over the fixed-Hamming-weight basis, an arbitrary sparse set
of basis states, or the full computational basis.  Includes compilation of
every gate down to CNOTs plus single-qubit rotations, analytic CNOT budgets,
a sparse statevector simulator with synthetic two-qubit noise, and
Clifford-substitution regression for error mitigation.
"""

from hwenc.bitstrings import (
    BitString,
    EhrlichState,
    GateParams,
    SequenceExhausted,
    ehrlich_sequence,
    gate_params,
    next_state,
    walk_states,
)
from hwenc.compiler import (
    LoweringResult,
    axis_angle,
    lower,
    lower_gate,
    phase_distance,
)
from hwenc.coordinates import (
    angles_from_complex,
    angles_from_real,
    complex_from_angles,
    real_from_angles,
)
from hwenc.counting import (
    BudgetRow,
    CnotBudget,
    closed_form_dense,
    count_binary,
    count_dense,
    count_sparse,
    gate_cnot_bound,
    grbs_bound,
    mcry_bound,
    rbs_bound,
)
from hwenc.encoders import (
    EncoderReport,
    EncodingError,
    EncodingVerificationError,
    encode_binary,
    encode_binary_complex,
    encode_dense_complex,
    encode_dense_real,
    encode_sparse,
)
from hwenc.ir import (
    Circuit,
    Gate,
    SerializationError,
    anti_phase,
    circuit_unitary,
    cnot,
    complex_rbs,
    deserialize,
    emit_qasm,
    gate_unitary,
    grbs,
    rbs,
    rw,
    ry,
    rz,
    serialize,
    x_gate,
)
from hwenc.mitigation import (
    CdrConfig,
    MitigationReport,
    RegressionFit,
    bootstrap_bands,
    build_training_set,
    fit_and_mitigate,
    fit_pairs,
    mean_relative_error,
    mitigate_circuit,
    near_clifford_ensemble,
    rotation_positions,
    single_qubit_cliffords,
)
from hwenc.qgaussian import (
    DemoReport,
    DemoRow,
    DiscretizedTarget,
    QGaussianSpec,
    discretize_qgaussian,
    q_exponential,
    run_demo,
)
from hwenc.simulator import (
    NoiseModel,
    SparseState,
    dense_run,
    run,
    run_noisy,
    sample,
)

__all__ = [
    "BitString",
    "BudgetRow",
    "CdrConfig",
    "Circuit",
    "CnotBudget",
    "DemoReport",
    "DemoRow",
    "DiscretizedTarget",
    "EhrlichState",
    "EncoderReport",
    "EncodingError",
    "EncodingVerificationError",
    "Gate",
    "GateParams",
    "LoweringResult",
    "MitigationReport",
    "NoiseModel",
    "QGaussianSpec",
    "RegressionFit",
    "SequenceExhausted",
    "SerializationError",
    "SparseState",
    "angles_from_complex",
    "angles_from_real",
    "anti_phase",
    "axis_angle",
    "bootstrap_bands",
    "build_training_set",
    "circuit_unitary",
    "closed_form_dense",
    "cnot",
    "complex_from_angles",
    "complex_rbs",
    "count_binary",
    "count_dense",
    "count_sparse",
    "dense_run",
    "deserialize",
    "discretize_qgaussian",
    "ehrlich_sequence",
    "emit_qasm",
    "encode_binary",
    "encode_binary_complex",
    "encode_dense_complex",
    "encode_dense_real",
    "encode_sparse",
    "fit_and_mitigate",
    "fit_pairs",
    "gate_cnot_bound",
    "gate_params",
    "gate_unitary",
    "grbs",
    "grbs_bound",
    "lower",
    "lower_gate",
    "mcry_bound",
    "mean_relative_error",
    "mitigate_circuit",
    "near_clifford_ensemble",
    "next_state",
    "phase_distance",
    "q_exponential",
    "rbs",
    "rbs_bound",
    "real_from_angles",
    "rotation_positions",
    "run",
    "run_demo",
    "run_noisy",
    "rw",
    "ry",
    "rz",
    "sample",
    "serialize",
    "single_qubit_cliffords",
    "walk_states",
    "x_gate",
]
