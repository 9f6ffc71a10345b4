"""Classification and certified solving of LCL problems on regular trees."""
__version__ = "0.1.0"

from .problem import (InvalidArityError, Label, LabelMultiset, RootedConfig, RootedProblem,
                      UnrootedProblem, canonicalize, validate_problem)
from .parser import (ParseError, load_problem, parse_labeling, parse_problem, parse_tree,
                     serialize_labeling, serialize_problem, serialize_tree)
from .labeling import IncompleteLabelingError, Labeling
from .trimming import TrimTrace, trim_rooted, trim_unrooted
from .automaton import (FlexAutomaton, FlexibilityError, build_rooted_automaton,
                        build_unrooted_automaton, flexibility_index, is_flexible, scc_report)
from .classifier import (INFINITE, DepthResult, GoodSequence, compute_depth,
                         enumerate_good_sequences, explain)
from .trees import Tree, TreeError, complete_tree, hairy_path, random_regular_tree
from .decomposition import Decomposition, choose_parameters, decompose_rooted, decompose_unrooted
from .solver import (BudgetExceeded, Violation, brute_force_solve, solve_with_certificate,
                     validate_labeling)

__all__ = [
    "InvalidArityError", "Label", "LabelMultiset", "RootedConfig", "RootedProblem",
    "UnrootedProblem", "canonicalize", "validate_problem", "ParseError", "load_problem",
    "parse_labeling", "parse_problem", "parse_tree", "serialize_labeling", "serialize_problem",
    "serialize_tree", "IncompleteLabelingError", "Labeling", "TrimTrace", "trim_rooted",
    "trim_unrooted", "FlexAutomaton", "FlexibilityError", "build_rooted_automaton",
    "build_unrooted_automaton", "flexibility_index", "is_flexible", "scc_report", "INFINITE",
    "DepthResult", "GoodSequence", "compute_depth", "enumerate_good_sequences", "explain",
    "Tree", "TreeError", "complete_tree", "hairy_path", "random_regular_tree", "Decomposition",
    "choose_parameters", "decompose_rooted", "decompose_unrooted", "BudgetExceeded",
    "Violation", "brute_force_solve", "solve_with_certificate", "validate_labeling",
]
