import json
import sys

import pytest
from gmpy2 import mpq

from hypdecide.cli import main
from hypdecide.config import Budgets, RunConfig
from hypdecide.fixtures import load_fixture
from hypdecide.geom import MatrixSL2, diag
from hypdecide.orchestrator import (HYPERBOLIC, INCONCLUSIVE, NOT_HYPERBOLIC, add_candidate, decide,
                                    emit, ingest, report, run)
from hypdecide.poincare import Certificate
from hypdecide.repfind import Representation

TRIVIAL = "gens: g\nrel: g\n"
Z2 = "gens: a b\nrel: a b A B\n"


# config ---------------------------------------------------------------------------

def test_config_round_trip(tmp_path):
    cfg = RunConfig.from_dict({"max_rounds": 7, "assume_irreducible": False})
    assert cfg.budgets.max_rounds == 7 and not cfg.assume_irreducible
    p = tmp_path / "c.json"
    p.write_text(json.dumps(cfg.to_dict()))
    assert RunConfig.load(p).to_dict() == cfg.to_dict()
    with pytest.raises(ValueError):
        RunConfig.from_dict({"max_round": 7})
    assert Budgets().eps == mpq(1, 2 ** 20)


# pipeline -------------------------------------------------------------------------

def test_trivial_group_is_not_hyperbolic():
    st = decide(TRIVIAL)
    assert st.verdict.kind == NOT_HYPERBOLIC
    assert "candidate list complete: yes" in report(st)


def test_z2_is_honestly_inconclusive():
    st = decide(Z2, "abelian")
    assert st.verdict.kind == INCONCLUSIVE
    assert st.verdict.reason == "candidate_incompleteness"
    text = report(st)
    assert "positive_dimensional" in text and "complete: no" in text


def test_ingest_from_path(tmp_path):
    p = tmp_path / "g.pres"
    p.write_text(TRIVIAL)
    assert ingest(str(p)).presentation.gens == ["g"]


def test_rounds_budget_gives_inconclusive():
    st = ingest(Z2, "free", RunConfig.from_dict({"max_rounds": 2}))
    st.enumerated = True
    A = diag(3)
    B = MatrixSL2(2, 1, 1, 1) * diag(3) * MatrixSL2(1, -1, -1, 2)
    add_candidate(st, Representation([A, B]))
    run(st)
    assert st.verdict.kind == INCONCLUSIVE and st.verdict.reason == "budget: rounds"
    assert st.rounds == 2


def test_injected_fixture_is_hyperbolic(tmp_path):
    pres, rep = load_fixture("seifert_weber")
    st = ingest(pres, "linear:seifert_weber", RunConfig.from_dict({"accept_batch": 12}))
    st.enumerated = True
    add_candidate(st, rep)
    run(st)
    assert st.verdict.kind == HYPERBOLIC
    paths = emit(st, tmp_path)
    assert set(paths) == {"verdict", "report", "certificate", "off"}
    cert = Certificate.loads(paths["certificate"].read_text())
    assert cert.verify().ok
    assert json.loads(paths["verdict"].read_text())["verdict"] == HYPERBOLIC
    assert paths["off"].read_text().startswith("OFF\n20 12 30\n")


def test_oracle_failure_is_inconclusive(tmp_path):
    script = tmp_path / "bad.py"
    script.write_text("import sys\nfor line in sys.stdin:\n    print('dunno', flush=True)\n")
    st = ingest(Z2, f"exec:{sys.executable} {script}")
    st.enumerated = True
    add_candidate(st, Representation([diag(2), diag(2)]), check_reducible=False)
    run(st)
    assert st.verdict.kind == INCONCLUSIVE and st.verdict.reason.startswith("oracle_error")
    st.oracle.close()


# command line ------------------------------------------------------------------------

def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["decide", write(tmp_path, "t.pres", TRIVIAL)]) == 1
    assert main(["decide", write(tmp_path, "z.pres", Z2), "--oracle", "abelian"]) == 2
    assert main(["decide", write(tmp_path, "bad.pres", "gens: a\nrel: q\n")]) == 2
    err = capsys.readouterr().err
    assert "line 2, column 6" in err
    assert main(["decide", write(tmp_path, "t2.pres", TRIVIAL), "--oracle", "/dev/null"]) == 2
    assert main(["decide"]) == 2


def test_cli_fixture_decide_and_verify(tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["decide", "--fixture", "seifert_weber", "--oracle", "linear:seifert_weber",
                 "--accept-batch", "12", "--out-dir", str(out)])
    assert code == 0
    assert "verdict: hyperbolic" in capsys.readouterr().out
    assert main(["verify", str(out / "certificate.json")]) == 0
    assert main(["verify", str(out / "certificate.json"), "--oracle", "free"]) == 1


def test_cli_candidates_and_reject(tmp_path, capsys):
    pres = write(tmp_path, "tri.pres", "gens: a b\nrel: a a a\nrel: b b b\nrel: a b a b a b\n")
    out = tmp_path / "cands.json"
    assert main(["candidates", pres, "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["complete"] and doc["candidates"]
    # the triangle group has torsion, so every candidate is rejected
    assert main(["reject", pres, "--rep", str(out), "--index", "0", "--steps", "5"]) == 1
    assert "rejected" in capsys.readouterr().out


def test_cli_config_file(tmp_path, capsys):
    cfg = write(tmp_path, "c.json", json.dumps({"max_rounds": 1}))
    pres = write(tmp_path, "t.pres", TRIVIAL)
    assert main(["decide", pres, "--config", cfg]) == 1
    bad = write(tmp_path, "bad.json", json.dumps({"nope": 1}))
    assert main(["decide", pres, "--config", bad]) == 2
