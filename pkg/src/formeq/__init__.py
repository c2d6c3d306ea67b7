"""Formulation-equivalence checking for linear and mixed-integer programs."""

__version__ = "0.1.0"

from .checkers import EQUIVALENT, NOT_EQUIVALENT, UNDECIDED, Verdict, canonical_check, equivamap_check, execution_check, wl_check
from .graph import build_bipartite, wl_equivalent
from .instantiate import ConcreteModel, InstanceData, instantiate, load_instance
from .mapping import Mapping, apply_mapping, brute_force_finder, heuristic_finder, parse_mapping_json
from .model import Formulation, load_formulation, serialize_formulation
from .solver import SolveOutcome, check_solution, solve, solve_lp, solve_milp
from .transform import DatasetRecord, TransformKind, build_dataset, generate_dataset, load_dataset, obfuscate, transform
from .verify import PairContext

__all__ = [
    "__version__",
    "EQUIVALENT",
    "NOT_EQUIVALENT",
    "UNDECIDED",
    "Verdict",
    "canonical_check",
    "execution_check",
    "wl_check",
    "equivamap_check",
    "build_bipartite",
    "wl_equivalent",
    "ConcreteModel",
    "InstanceData",
    "instantiate",
    "load_instance",
    "Mapping",
    "apply_mapping",
    "brute_force_finder",
    "heuristic_finder",
    "parse_mapping_json",
    "Formulation",
    "load_formulation",
    "serialize_formulation",
    "SolveOutcome",
    "check_solution",
    "solve",
    "solve_lp",
    "solve_milp",
    "DatasetRecord",
    "TransformKind",
    "build_dataset",
    "generate_dataset",
    "load_dataset",
    "obfuscate",
    "transform",
    "PairContext",
]
