"""Entangled field states in two cavities prepared by three atoms: coherent-state algebra,
preparation circuit, entanglement measures and phase-space diagnostics."""

from .coherent import SuperState, coherent_overlap, fidelity, inner_product, normalize
from .entanglement import entropy_2x2, entropy_gram, state_entropy
from .protocol import OUTCOMES, ProtocolConfig, conditional_states, reference_state, run_protocol

__all__ = [
    "OUTCOMES",
    "ProtocolConfig",
    "SuperState",
    "coherent_overlap",
    "conditional_states",
    "entropy_2x2",
    "entropy_gram",
    "fidelity",
    "inner_product",
    "normalize",
    "reference_state",
    "run_protocol",
    "state_entropy",
]
