"""Amplitude parametrizations of code and AME states."""

from .encoding import Encoding, decode_input, encode_input
from .networks import (
    ACTIVATIONS,
    DBMParams,
    FFParams,
    RBMParams,
    dbm_amplitude,
    ff_amplitude,
    rbm_amplitude,
)
from .spec import (
    ANSATZ_KINDS,
    AnsatzSpec,
    amplitude_vector,
    assemble_state,
    basis_inputs,
    flatten,
    param_bounds,
    param_count,
    unflatten,
)

__all__ = [
    "ACTIVATIONS",
    "ANSATZ_KINDS",
    "AnsatzSpec",
    "DBMParams",
    "Encoding",
    "FFParams",
    "RBMParams",
    "amplitude_vector",
    "assemble_state",
    "basis_inputs",
    "dbm_amplitude",
    "decode_input",
    "encode_input",
    "ff_amplitude",
    "flatten",
    "param_bounds",
    "param_count",
    "rbm_amplitude",
    "unflatten",
]
