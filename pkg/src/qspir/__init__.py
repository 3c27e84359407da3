"""Exact simulation and brute-force verification of (N-1)-private quantum
symmetric PIR built from teleportation and two-sum transmission."""

from .estimator import QSPIRRetriever
from .exceptions import CapacityError, InvariantViolation
from .frame import BellLink, FrameState, frame_swap_update
from .pauli import LABELS, IDENTITY, LabelVector, SignedWeyl, WeylLabel, adjoint, bell_transfer, commutation_sign, compose, matrix
from .protocols import (
    ProtocolConfig,
    ProtocolTranscript,
    QuerySet,
    make_queries,
    run_classical_baseline,
    run_qspir,
    run_qspir_three_server,
    server_answer,
    teleport_with_operation,
    two_sum_transmit,
)
from .secrecy import (
    ProtocolFamily,
    SecurityReport,
    error_measure,
    lemma1_check,
    prop4_check,
    server_secrecy,
    user_secrecy,
)
from .state import (
    DensityMatrix,
    QuantumRegister,
    apply_weyl,
    bell_pvm_outcomes,
    holevo_information,
    make_bell_pair,
    partial_trace,
    sample_bell_pvm,
    von_neumann_entropy,
)

__version__ = "0.1.0"
