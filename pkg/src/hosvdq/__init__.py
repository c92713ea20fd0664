"""HOSVD core tensors of multi-qubit states and their special forms."""

from .classifier import ClassificationRecord, classify, polytope_coordinates, sample_family
from .enumerator import (
    EnumerationResult,
    FamilyRecord,
    SymbolicStatePattern,
    build_aocs,
    detect_ccv,
    enumerate_special_states,
)
from .hosvd import HosvdResult, aoc_report, hosvd, is_core_tensor, n_mode_singular_values
from .statefile import ParseError, parse_state, read_state, write_state
from .tensor_core import ComplexTensor, fold, rdm_complement, rdm_one_body, unfold

__version__ = "0.1.0"
