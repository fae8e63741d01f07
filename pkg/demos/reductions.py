"""From graph colouring to representability.

A graph is turned into an atom structure that has a qualitative
representation exactly when the graph is 3-colourable.  A colouring gives a
witness; a representation found by the solver gives back a colouring.

Run with ``python demos/reductions.py``.
"""

from __future__ import annotations

from itertools import combinations

from qalg.reductions import (SimpleGraph, colouring_to_witness, extract_colouring,
                             find_vertex_colouring, monk_obstruction, reduce_three_colouring)
from qalg.representations import Representation, verify_qualitative
from qalg.solver import SearchBudget, find_qualitative_rep


def run(name: str, g: SimpleGraph) -> None:
    inst = reduce_three_colouring(g)
    s = inst.structure
    print(f"== {name}: {len(g.vertices)} vertices, padded to {len(inst.padded.vertices)}, "
          f"{len(s.atoms)} atoms")
    colouring = find_vertex_colouring(g)
    if colouring:
        rep = Representation.from_network(colouring_to_witness(inst, colouring))
        print(f"   colouring {colouring} gives a {len(rep)}-point witness, "
              f"qualitative: {verify_qualitative(s, rep).ok}")
    out = find_qualitative_rep(s, SearchBudget(time_limit=60))
    print(f"   solver: {out.status}")
    if out.representation is not None:
        print(f"   colouring read back: {extract_colouring(inst, out.representation)}")


def main() -> None:
    vs = ["0", "1", "2", "3"]
    run("triangle", SimpleGraph.build(vs[:3], list(combinations(vs[:3], 2))))
    run("K4", SimpleGraph.build(vs, list(combinations(vs, 2))))
    cert = monk_obstruction(2)
    print(f"\nMonk algebra n=2: every one of {cert.labellings_checked} labellings of "
          f"K{cert.points_needed} has a forbidden triangle: {cert.holds}")


if __name__ == "__main__":
    main()
