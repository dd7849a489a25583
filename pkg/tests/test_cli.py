import json
from fractions import Fraction
import subprocess
import sys

import pytest

from torsionkit.cli import EXIT_BOUND, EXIT_FALSE, EXIT_TRUE, EXIT_USAGE, main
from torsionkit.cosets import CosetTable
from torsionkit.km_sim import HaltCertificate, KNormalForm
from torsionkit.modmach import RunTrace
from torsionkit.presentations import FinitePresentation
from torsionkit.smallcancel import OrderVerdict, PieceReport


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {
        "ptk12.grp": "gens: x t\nrel: (x t)^12\nrel: t^12\n",
        "c9.grp": "gens: x y z\nrel: x\nrel: y^3\nrel: x y z^-3\n",
        "triv.grp": "gens: x\nrel: x\n",
        "z2.grp": "gens: x y\nrel: x y x^-1 y^-1\n",
        "bad.grp": "gens: x y\nrel: x y x y\nrel: x y x y^-1\n",
        "one.mm": "modulus 2\nrule 1 0 0 R\n",
        "fix.mm": "modulus 3\nrule 1 0 2 R\nrule 0 1 5 L\n",
        "loop.mm": "modulus 2\nrule 0 1 1 L\n",
    }.items():
        p = tmp_path / name
        p.write_text(text)
        paths[name] = str(p)
    paths["dir"] = tmp_path
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, "--json", *argv)
    return code, json.loads(out)


def test_check_sc(capsys, files):
    code, out = run(capsys, "check-sc", files["ptk12.grp"], "--lambda", "1/6")
    assert code == EXIT_TRUE and "global_max_ratio 1/12" in out
    code, d = run_json(capsys, "check-sc", files["bad.grp"])
    assert code == EXIT_FALSE and d["type"] == "PieceReport" and not d["holds"]
    assert PieceReport.from_dict(d["report"]).global_max_ratio == Fraction(3, 4)


def test_dehn(capsys, files):
    code, out = run(capsys, "dehn", files["ptk12.grp"], "t^13")
    assert code == EXIT_TRUE and out.split("\n")[:2] == ["residue t", "verdict nontrivial"]
    code, d = run_json(capsys, "dehn", files["ptk12.grp"], "(x t)^12")
    assert d["verdict"] == "trivial" and d["residue"] == "1"
    assert run(capsys, "dehn", files["bad.grp"], "x")[0] == EXIT_USAGE


def test_order(capsys, files):
    code, d = run_json(capsys, "order", files["ptk12.grp"], "x t")
    assert code == EXIT_TRUE and d["order"] == 12
    assert OrderVerdict.from_dict(d).order == 12
    assert run_json(capsys, "order", files["ptk12.grp"], "x")[1]["order"] == "infinite"


def test_ptk_and_quotient(capsys, files):
    out_path = files["dir"] / "lvl.grp"
    assert run(capsys, "ptk", files["c9.grp"], "-k", 12, "-o", out_path)[0] == EXIT_TRUE
    Q = FinitePresentation.load(out_path)
    assert Q.generators == ("x", "y", "z", "t")
    code, d = run_json(capsys, "tor-quotient", out_path)
    assert code in (EXIT_TRUE, EXIT_BOUND)
    assert FinitePresentation.from_dict(d) == FinitePresentation.load(files["c9.grp"])
    code, out = run(capsys, "tor-quotient", out_path, "-k", 11)
    assert code == EXIT_USAGE


def test_ladder(capsys, files):
    code, out = run(capsys, "ladder", files["triv.grp"], "-n", 2, "--verify", "--output-dir", files["dir"] / "lad")
    assert code == EXIT_TRUE
    assert "claimed torsion length 2" in out
    assert (files["dir"] / "lad" / "level2.grp").exists()


def test_mm_run(capsys, files):
    code, d = run_json(capsys, "mm", "run", files["one.mm"], 1, 0)
    assert code == EXIT_TRUE and d["status"] == "halted"
    assert RunTrace.from_dict(d).halted
    assert run(capsys, "mm", "run", files["one.mm"], 3, 0)[0] == EXIT_FALSE
    assert run(capsys, "mm", "run", files["loop.mm"], 0, 1, "--max-steps", 5)[0] == EXIT_BOUND


def test_mm_halting_and_encoding(capsys, files):
    code, d = run_json(capsys, "mm", "halting", files["one.mm"], "--box", 4, "--max-steps", 4)
    assert [0, 0] in d["configs"] and [1, 0] in d["configs"] and [3, 0] not in d["configs"]
    assert run(capsys, "mm", "encode", "c1 c2", "-n", 2, "-m", 5) == (EXIT_TRUE, "7\n")
    assert run(capsys, "mm", "decode", 7, "-n", 2, "-m", 5) == (EXIT_TRUE, "c1 c2\n")
    assert run(capsys, "mm", "decode", 15, "-n", 2, "-m", 5)[0] == EXIT_FALSE
    assert run(capsys, "mm", "encode", "c1", "-n", 2, "-m", 4)[0] == EXIT_USAGE


def test_mm_to_group(capsys, files):
    code, d = run_json(capsys, "mm", "to-group", files["fix.mm"], "--gm")
    assert code == EXIT_TRUE and d["generators"][-1] == "q"
    assert len(FinitePresentation.from_dict(d).relators) == 10
    code, out = run(capsys, "mm", "to-group", files["fix.mm"])
    assert FinitePresentation.parse(out).generators == ("x", "y", "t", "r1", "l2")


def test_km_commands(capsys, files):
    code, d = run_json(capsys, "km", "normalize", files["fix.mm"], "t x x^-1 t")
    assert KNormalForm.from_dict(d) == KNormalForm(((0, 0), (0, 0)), (2,))
    code, out = run(capsys, "km", "reduce", files["fix.mm"], "r1^-1 x^-1 t x r1 x^-2 t^-1 x^2")
    assert code == EXIT_TRUE and "verdict trivial" in out
    assert run(capsys, "km", "member", files["fix.mm"], "1", "0", "3", "3", "x^-1 t x^4")[0] == EXIT_TRUE
    assert run(capsys, "km", "member", files["fix.mm"], "1", "0", "3", "3", "x^2")[0] == EXIT_FALSE
    assert run(capsys, "km", "member", files["fix.mm"], "3", "0", "3", "3", "x")[0] == EXIT_USAGE


def test_km_certify(capsys, files):
    code, d = run_json(capsys, "km", "certify", files["one.mm"], 1, 0)
    assert code == EXIT_TRUE
    cert = HaltCertificate.from_dict(d["certificate"])
    assert str(cert.stable_word) == "r1"
    assert run(capsys, "km", "certify", files["one.mm"], 3, 0, "--max-steps", 5)[0] == EXIT_BOUND


def test_higman_emit(capsys, files):
    out_path = files["dir"] / "h3.grp"
    code, out = run(capsys, "higman", "emit", files["fix.mm"], "-n", 1, "--alpha-max", 20,
                    "--stage", 3, "--max-steps", 20, "-o", out_path)
    assert code == EXIT_TRUE
    P = FinitePresentation.load(out_path)
    man = json.loads((files["dir"] / "h3.grp.manifest.json").read_text())
    assert man["counts"] == {"generators": len(P.generators), "relators": len(P.relators)}
    assert man["final_stable_letter"] == "kk"
    assert run(capsys, "higman", "emit", files["one.mm"], "-n", 1, "--stage", 1)[0] == EXIT_USAGE


def test_tc(capsys, files):
    assert run(capsys, "tc", "enumerate", files["c9.grp"], "--max-cosets", 100) == (EXIT_TRUE, "order 9\n")
    code, d = run_json(capsys, "tc", "enumerate", files["c9.grp"])
    assert CosetTable.from_dict(d).order == 9
    assert run(capsys, "tc", "enumerate", files["z2.grp"], "--max-cosets", 50)[0] == EXIT_BOUND
    code, out = run(capsys, "tc", "torlen", files["c9.grp"])
    assert code == EXIT_TRUE and out.startswith("torsion length 1")


def test_json_flag_position(capsys, files):
    a = run(capsys, "--json", "order", files["ptk12.grp"], "t")
    b = run(capsys, "order", files["ptk12.grp"], "t", "--json")
    assert a == b


def test_missing_file(capsys, files):
    assert run(capsys, "order", files["dir"] / "nope.grp", "t")[0] == EXIT_USAGE


def test_deterministic_output(capsys, files):
    args = ("higman", "emit", files["fix.mm"], "-n", 1, "--alpha-max", 15, "--stage", 2, "--max-steps", 20)
    assert run(capsys, *args) == run(capsys, *args)


def test_module_entry_point(files):
    res = subprocess.run([sys.executable, "-m", "torsionkit", "tc", "enumerate", files["c9.grp"]],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "order 9"
