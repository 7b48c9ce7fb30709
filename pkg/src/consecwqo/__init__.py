"""Well-quasi-order and atomicity decisions for consecutive avoidance sets."""

from .core import Structure, avoids, canonicalize, consecutive_leq, decode, encode, is_isomorphic, make_structure, overlap_amounts, restrict
from .decide import Verdict, antichain_witness, decide_atomicity, decide_wqo, extension_condition
from .doubleascent import DoubleAscentProblem, decide_atomicity_da, decide_wqo_da
from .errors import ConsecWQOError, InputError, LimitError
from .factorgraph import FactorGraph, Problem, build, path_of, structures_of_path
from .kinds import Kind, combine_all, enumerate_structures, is_member

__all__ = [
    "ConsecWQOError", "DoubleAscentProblem", "FactorGraph", "InputError", "Kind", "LimitError", "Problem",
    "Structure", "Verdict", "antichain_witness", "avoids", "build", "canonicalize", "combine_all",
    "consecutive_leq", "decide_atomicity", "decide_atomicity_da", "decide_wqo", "decide_wqo_da", "decode",
    "encode", "enumerate_structures", "extension_condition", "is_isomorphic", "is_member", "make_structure",
    "overlap_amounts", "path_of", "restrict", "structures_of_path",
]
