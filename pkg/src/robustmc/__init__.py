"""Model checking for robust CTL and CTL* over finite Kripke structures.

Formulas take values in a five-element chain of bit vectors
(0000 < 0001 < 0011 < 0111 < 1111) that grade how robustly a temporal
property holds.  ``check`` decides the fixpoint-based fragment in polynomial
time; ``check_star`` handles full path formulas through Büchi automata.
"""
from .truth import TruthValue, FALSE, TRUE, V0001, V0011, V0111, VALUES
from .formula import parse, to_text, FragmentTag, ParseError, FragmentError
from .kripke import KripkeStructure, parse_model, load_model, dump_model, random_structure, validate
from .checker_rctl import compute_sat, check, state_value, SatTable, Verdict
from .checker_rctlstar import compute_sat_star, check_star, translate_tk

__all__ = [
    "TruthValue", "FALSE", "TRUE", "V0001", "V0011", "V0111", "VALUES",
    "parse", "to_text", "FragmentTag", "ParseError", "FragmentError",
    "KripkeStructure", "parse_model", "load_model", "dump_model", "random_structure", "validate",
    "compute_sat", "check", "state_value", "SatTable", "Verdict",
    "compute_sat_star", "check_star", "translate_tk",
]
