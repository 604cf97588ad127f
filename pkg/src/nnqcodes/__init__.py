"""Neural-network ansätze for quantum codes: coherent information, benchmarks and searches."""

from .channels import KrausChannel, apply_joint, channel_from_dict, dephrasure, depolarizing, gadc
from .cohinfo import CodeEvaluation, coherent_information, evaluate_table_code, load_table_codes
from .linalg import DegenerateStateError, DensityMatrix, StateVector

__version__ = "0.1.0"

__all__ = [
    "CodeEvaluation",
    "DegenerateStateError",
    "DensityMatrix",
    "KrausChannel",
    "StateVector",
    "apply_joint",
    "channel_from_dict",
    "coherent_information",
    "dephrasure",
    "depolarizing",
    "evaluate_table_code",
    "gadc",
    "load_table_codes",
]
