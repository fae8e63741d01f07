"""Walk through the catalog: validity, associativity and representability.

Run with ``python demos/algebra_tour.py``.
"""

from __future__ import annotations

from qalg import catalog
from qalg.algebra import (identity_is_atom, is_associative, is_integral, is_semi_associative,
                          is_weakly_associative, validate_atom_structure)
from qalg.solver import SearchBudget, find_feeble_rep, find_qualitative_rep


def show_witness(s, w):
    return "-" if w is None else "(" + ", ".join(s.atoms[i] for i in w) + ")"


def main() -> None:
    for e in catalog.entries():
        s = e.structure
        print(f"== {e.key}: {len(s.atoms)} atoms {list(s.atoms)}")
        print(f"   valid atom structure: {validate_atom_structure(s).ok}")
        assoc = is_associative(s)
        print(f"   associative: {assoc.holds}  witness {show_witness(s, assoc.witness)}")
        print(f"   semi-associative: {is_semi_associative(s).holds}, "
              f"weakly associative: {is_weakly_associative(s).holds}")
        print(f"   integral: {is_integral(s).holds}, identity is an atom: {identity_is_atom(s)}")
        q = find_qualitative_rep(s, SearchBudget(time_limit=30))
        size = len(q.representation) if q.representation else "-"
        print(f"   qualitative representation: {q.status} (base {size}) {q.detail}")
        f = find_feeble_rep(s, SearchBudget(time_limit=30))
        size = len(f.representation) if f.representation else "-"
        print(f"   feeble representation: {f.status} (base {size})")


if __name__ == "__main__":
    main()
