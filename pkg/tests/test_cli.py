from __future__ import annotations

import io
import json
import os
import subprocess
import sys

import pytest

from qalg import catalog, formats
from qalg.cli import main
from qalg.representations import verify_qualitative

DATA = os.path.join(os.path.dirname(__file__), os.pardir, "data")


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run("--json", *argv)
    return code, json.loads(text)


def data(name):
    return os.path.join(DATA, name)


def test_solve_qrep_ex4_is_obstructed():
    code, text = run("solve", "qrep", "ex4")
    assert code == 1
    assert text.startswith("verdict: OBSTRUCTED((a,a,a))")


def test_rep_verify_rcc5_regions():
    code, text = run("rep", "verify", "--kind", "qualitative", data("rcc5_regions.rep"))
    assert code == 0 and "verdict: VALID" in text


def test_eq_check_unit_law():
    code, text = run("eq", "check", "1';x = x")
    assert code == 0
    assert "VALID_UP_TO(3)" in text


def test_eq_counterexample_certificate_reverifies():
    code, doc = run_json("eq", "check", "x;(1;1) = (x;1);1")
    assert code == 1 and doc["verdict"] == "COUNTEREXAMPLE"
    cert = doc["certificate"]
    assert cert["lhs"] != cert["rhs"]


def test_solve_qrep_certificate_parses_and_verifies():
    code, doc = run_json("--deterministic", "solve", "qrep", "mckenzie")
    assert code == 0 and doc["verdict"] == "FOUND"
    rep = formats.loads_representation(doc["certificate"])
    assert len(rep) == 5
    assert verify_qualitative(catalog.get("mckenzie").structure, rep).ok
    assert "seconds" not in doc["stats"]


def test_solve_net_point_network():
    code, doc = run_json("solve", "net", "point", data("point_network.net"))
    assert code == 0 and doc["verdict"] == "SAT"
    assert set(doc["certificate"]["embedding"]) == set("abcd")


def test_budget_exhaustion_exit_code():
    code, text = run("solve", "qrep", "ra2565", "--max-base", "2")
    assert code == 2 and "NONE_WITHIN_BUDGET" in text


def test_global_flags_before_or_after_subcommand():
    a = run("--json", "--deterministic", "solve", "frep", "ra2565")
    b = run("solve", "frep", "ra2565", "--json", "--deterministic")
    assert a == b
    assert json.loads(a[1])["verdict"] == "FOUND"


def test_deterministic_reports_are_identical():
    args = ("--json", "--deterministic", "solve", "qrep", "rcc5")
    assert run(*args) == run(*args)


def test_net_commands():
    assert run("net", "check", data("point_network.net"))[0] == 0
    assert run("net", "pc", data("point_network.net"))[0] == 1
    code, doc = run_json("net", "refine", data("point_network.net"))
    assert code == 0
    refined = formats.loads_network(doc["certificate"])
    assert refined.label("c", "b").names == ["<"]


def test_rep_star_and_embed():
    assert run("rep", "verify", "--kind", "star", data("mckenzie_5.rep"))[0] == 1
    assert run("rep", "verify", "--kind", "star", data("mckenzie_6.rep"))[0] == 0
    code, doc = run_json("rep", "embed", data("point_chain4.rep"), data("point_network.net"))
    assert code == 0 and doc["verdict"] == "EMBEDS"


def test_alg_check_reports_properties():
    code, doc = run_json("alg", "check", "ex1")
    assert code == 0
    assert doc["stats"]["associative"] is False
    assert doc["stats"]["associative_witness"][:3] == ["e", "e'", "a"]


def test_alg_check_invalid_file(tmp_path):
    p = tmp_path / "bad.alg"
    p.write_text("qalg-format 1\nkind: algebra\natoms: e a\nidentity: e\ntable:\n  e e : e\n  e a : a\nend\n")
    code, doc = run_json("alg", "check", str(p))
    assert code == 1
    assert {d["rule"] for d in doc["diagnostics"]} >= {"peircean-closure"}
    code, doc = run_json("alg", "check", "--close", str(p))
    assert doc["certificate"].startswith("qalg-format 1")


def test_catalog_commands():
    code, text = run("catalog", "list")
    assert code == 0 and all(k in text for k in catalog.KEYS)
    code, text = run("catalog", "export", "ex2")
    assert formats.loads_structure(text.split("\n", 1)[1]) == catalog.get("ex2").structure


def test_gen_commands():
    code, doc = run_json("gen", "3col", data("k3.graph"))
    assert code == 0 and doc["stats"]["atoms"] == 29
    assert formats.loads_structure(doc["certificate"]).atoms[0] == "1'"
    code, doc = run_json("gen", "monk", "2", "--k", "3")
    assert doc["stats"]["atoms"] == 5


@pytest.mark.parametrize("argv", [
    ("net", "check", "does-not-exist.net"),
    ("eq", "check", "x;;y = x"),
    ("catalog", "export", "nope"),
    ("solve", "qrep", "nope"),
    ("frobnicate",),
])
def test_input_errors_exit_3(argv):
    code, _ = run(*argv)
    assert code == 3


def test_format_error_has_location(tmp_path):
    p = tmp_path / "bad.net"
    p.write_text("qalg-format 1\nkind: network\nalgebra: point\nnodes: a b\nedges:\n  a b : zz\nend\n")
    code, doc = run_json("net", "check", str(p))
    assert code == 3
    d = doc["diagnostics"][0]
    assert (d["line"], d["column"]) == (6, 9)


def test_installed_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qalg.cli", "solve", "qrep", "ex4"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert "OBSTRUCTED((a,a,a))" in proc.stdout
