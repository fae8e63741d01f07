"""Constraint networks over the point algebra, then equations checked over herds.

Run with ``python demos/networks_and_equations.py``.
"""

from __future__ import annotations

from qalg import catalog
from qalg.equations import check_validity
from qalg.networks import Network, atomic_refinements, refine_path_consistent
from qalg.representations import embed_network
from qalg.solver import decide_qual_sat


def main() -> None:
    point = catalog.get("point").structure
    net = Network.from_edges(point, "abcd", {
        ("c", "a"): "<", ("a", "b"): ["<", ">"], ("c", "b"): ["<", "="],
        ("c", "d"): "<", ("d", "b"): "<", ("a", "d"): ["<", ">"],
    })
    print("network edges:")
    for x, y, lab in net.edges():
        print(f"   {x} -> {y}: {'+'.join(lab.names)}")
    ref = refine_path_consistent(net).network
    print("after path-consistent refinement:")
    for x, y, lab in ref.edges():
        print(f"   {x} -> {y}: {'+'.join(lab.names)}")
    print(f"atomic refinements: {sum(1 for _ in atomic_refinements(net))}")
    out = decide_qual_sat(point, net)
    print(f"satisfiable: {out.status}, embedding {out.embedding}")
    chain = catalog.chain_representation(point, 4)
    print(f"embedding into the 4-chain: {embed_network(chain, net)}")

    print("\nequations over herds on up to 3 points:")
    for text in ["1';x = x", "(1;x);1 = 1;(x;1)", "x;(1;1) = (x;1);1", "x;y = y;x"]:
        res = check_validity(text, max_base=3)
        if res.valid:
            print(f"   {text:22} valid up to {res.bound}")
        else:
            env = {v: sorted(res.herd.pairs_of(m)) for v, m in res.herd.assignment.items()}
            print(f"   {text:22} fails on base {list(res.herd.base)} with {env}")
            print(f"   {'':22} lhs {sorted(res.lhs)} vs rhs {sorted(res.rhs)}")


if __name__ == "__main__":
    main()
