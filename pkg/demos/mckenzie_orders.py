"""McKenzie's algebra represented by partial orders of width two.

Its atoms are identity, a (below), a^ (above) and b (incomparable).  Any
width-two order in which every consistent triple is realised is a
qualitative representation.  Condition (*) asks that two concrete
compositions of atoms are disjoint exactly when the abstract ones are.
Three stored orders are compared here.

Run with ``python demos/mckenzie_orders.py``.
"""

from __future__ import annotations

from qalg import catalog
from qalg.algebra import is_associative
from qalg.representations import check_star, star_violations, verify_qualitative


def main() -> None:
    entry = catalog.get("mckenzie")
    s = entry.structure
    print(f"associative: {is_associative(s).holds}")
    labels = ["pentagon N5", "8-point double chain", "6-point order"]
    for label, rep in zip(labels, entry.representations("qualitative")):
        ok = verify_qualitative(s, rep).ok
        res = check_star(s, rep)
        bad = list(star_violations(s, rep))
        print(f"\n{label}: {len(rep)} points, qualitative {ok}")
        for row in rep.matrix_names():
            print("   " + " ".join(f"{x:>3}" for x in row))
        if res.holds:
            print("   (*) holds")
        else:
            first = ", ".join(s.atoms[i] for i in res.witness)
            print(f"   (*) fails on {len(bad)} quadruples, first ({first})")


if __name__ == "__main__":
    main()
