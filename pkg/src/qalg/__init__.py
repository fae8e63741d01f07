"""Finite atom structures, qualitative constraint networks and their representations.

The modules build on each other in this order: :mod:`qalg.algebra`
(atom structures and complex-algebra elements), :mod:`qalg.networks`,
:mod:`qalg.representations`, :mod:`qalg.solver`, :mod:`qalg.equations`
and :mod:`qalg.reductions`.  :mod:`qalg.catalog` holds the worked
examples and :mod:`qalg.cli` the command-line tool.
"""

from __future__ import annotations

from .algebra import (AlgebraError, AtomStructure, Element, ValidationReport, is_associative,
                      is_integral, is_semi_associative, is_weakly_associative,
                      validate_atom_structure)
from .networks import Network, check_consistent, is_path_consistent, refine_path_consistent
from .representations import (Representation, check_star, embed_network, quotient, verify,
                              verify_feeble, verify_qualitative, verify_strong)
from .solver import SearchBudget, decide_qual_sat, find_feeble_rep, find_qualitative_rep

__all__ = [
    "AlgebraError", "AtomStructure", "Element", "ValidationReport", "validate_atom_structure",
    "is_associative", "is_semi_associative", "is_weakly_associative", "is_integral",
    "Network", "check_consistent", "is_path_consistent", "refine_path_consistent",
    "Representation", "verify", "verify_feeble", "verify_qualitative", "verify_strong",
    "check_star", "embed_network", "quotient",
    "SearchBudget", "find_qualitative_rep", "find_feeble_rep", "decide_qual_sat",
]
