import csv
import io
import json

import pytest

from upslopes import cli
from upslopes.corpus import MATRIX_NAMES, fixture_path, fixtures, load_fixture_matrix
from upslopes.io import dumps, load_json, matrix_from_json, matrix_to_json, write_matrix
from upslopes.padic import CMatrix, CycloElt, PadicContext
from upslopes.scenarios import Scenario, builtin_scenarios, load_scenario, run_scenario
from upslopes.upmat import FIXTURE_DIR, UpRecipe, example53_recipe, load_recipe


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


# -- corpus and io ------------------------------------------------------------------

def test_fixture_first_entries():
    c = fixtures()
    assert c.m3[0, 0] == CycloElt.zeta(c.m3.ctx)
    assert c.m4[0, 0] == CycloElt.zeta(c.m4.ctx, 19)
    assert c.m3.ctx.cyclo_order == 9 and c.m4.ctx.cyclo_order == 27


def test_m4_sparsity():
    M = load_fixture_matrix("m4")
    for i in range(9):
        assert sum(not M[i, j].is_zero() for j in range(9)) == 3


def test_corpus_tables():
    c = fixtures()
    assert len(c.units) == 24
    assert c.recipe == example53_recipe()
    assert set(c.to_json()) == {"m3", "m4", "recipe", "units"}


@pytest.mark.parametrize("name", MATRIX_NAMES)
def test_fixture_round_trip(name, tmp_path):
    M = load_fixture_matrix(name)
    data = matrix_to_json(M, name)
    assert matrix_from_json(json.loads(json.dumps(data))) == M
    path = tmp_path / "m.json"
    write_matrix(path, M, name)
    assert matrix_from_json(load_json(path)) == M
    # the shipped literals parse back to themselves
    raw = load_json(fixture_path(name))
    ctx = PadicContext.from_json(raw["context"])
    for row in raw["rows"]:
        for lit in row:
            x = CycloElt.parse(ctx, lit)
            assert CycloElt.parse(ctx, x.literal()) == x


def test_recipe_fixture_round_trip():
    r = load_recipe(FIXTURE_DIR / "example5_recipe.json")
    assert UpRecipe.from_json(r.to_json()) == r


def test_dumps_is_sorted_and_stable():
    assert dumps({"b": 1, "a": [1, 2]}) == dumps({"a": [1, 2], "b": 1})


# -- scenarios ------------------------------------------------------------------------

def test_empty_scenario():
    rep = run_scenario(builtin_scenarios()["empty"])
    assert rep.status == "pass" and rep.results == []


def test_scenario_reports_are_deterministic():
    s = load_scenario("fixtures-6x")
    a = dumps(run_scenario(s).to_json())
    b = dumps(run_scenario(s, jobs=2).to_json())
    assert a == b


def test_unresolved_source_rejected():
    s = Scenario("bad", [{"kind": "newton", "source": "missing.json"}])
    with pytest.raises(ValueError):
        run_scenario(s)


def test_unknown_check_rejected():
    with pytest.raises(ValueError):
        run_scenario(Scenario("bad", [{"kind": "nope", "source": "m3"}]))


def test_scenario_file(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"name": "m3-only", "checks": [
        {"kind": "newton", "source": "m3", "expect": ["1/6", "1/2", "5/6"]},
        {"kind": "hodge", "source": "m3", "expect": ["0", "1/2", "1/2"]}]}))
    rep = run_scenario(load_scenario(str(path)))
    assert [r.status for r in rep.results] == ["pass", "fail"]
    assert rep.exit_code() == 1


def test_uncertified_status():
    s = Scenario("low", [{"kind": "newton", "source": "example-5", "N": 12, "count": 6}], prec=3)
    rep = run_scenario(s)
    assert rep.status == "uncertified"
    assert rep.exit_code(strict=True) == 3
    assert rep.exit_code(strict=False) == 0


# -- command line ------------------------------------------------------------------

def test_cli_run_example(capsys):
    code, out = run(capsys, "run", "example-5")
    assert code == 0
    data = json.loads(out)
    assert data["checks"][0]["data"]["slopes"] == ["1/2", "3/2", "5/2", "7/2", "9/2", "11/2"]
    assert "seconds" not in data["checks"][0]


def test_cli_run_byte_identical(capsys):
    _, a = run(capsys, "run", "fixtures-6x", "--seed", "5")
    _, b = run(capsys, "run", "fixtures-6x", "--seed", "5")
    assert a == b


def test_cli_timings_flag(capsys):
    _, out = run(capsys, "run", "fixtures-6x", "--timings")
    assert "seconds" in json.loads(out)["checks"][0]


def test_cli_csv(capsys):
    code, out = run(capsys, "spectral", "newton", "--matrix", "m3", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows == [["name", "index", "slope"], ["newton", "0", "1/6"],
                    ["newton", "1", "1/2"], ["newton", "2", "5/6"]]


def test_cli_input_error(capsys):
    assert cli.main(["run", "no-such-scenario"]) == 2
    assert cli.main(["spectral", "newton", "--matrix", "missing.json"]) == 2


def test_cli_quat(capsys):
    _, out = run(capsys, "quat", "units")
    assert len(json.loads(out)) == 24
    _, out = run(capsys, "quat", "norm-elements", "--n", "3")
    assert len(json.loads(out)) == 96
    _, out = run(capsys, "quat", "deltas")
    assert {d["delta"] for d in json.loads(out)} == {"-1+i-j", "1/2(1+i+3j+k)", "1/2(1-3i-j-k)"}


def test_cli_act(capsys):
    code, out = run(capsys, "act", "--gamma", "1,2,0,1", "--N", "3", "--weight", "classical", "1")
    assert code == 0
    assert json.loads(out)["matrix"]["rows"] == [["1", "2", "4"], ["0", "1", "4"], ["0", "0", "1"]]


def test_cli_upmat(capsys):
    code, out = run(capsys, "upmat", "assemble", "--recipe", "example-5", "--N", "6", "--slopes")
    assert code == 0
    assert json.loads(out)["slopes"][:3] == ["1/2", "3/2", "5/2"]


def test_cli_spectral_checks(capsys, tmp_path):
    assert cli.main(["spectral", "verify-A", "--matrix", "m3", "--t", "3"]) == 0
    assert cli.main(["spectral", "verify-A", "--matrix", "m3", "--t", "1"]) == 1
    capsys.readouterr()
    code, out = run(capsys, "spectral", "progression", "--matrix", "m4")
    assert json.loads(out)["s0"] == 5
    code, out = run(capsys, "spectral", "hodge", "--matrix", "m3")
    assert json.loads(out)["slopes"] == ["0/1", "1/2", "1/1"]
    code, out = run(capsys, "spectral", "charpoly", "--matrix", "m3")
    assert len(json.loads(out)["coefficients"]) == 4


def test_cli_verify_sharp(capsys, tmp_path):
    ctx = PadicContext(3, prec=20)
    path = tmp_path / "d.json"
    write_matrix(path, CMatrix.diag(ctx, [1, 3, 3, 9]))
    code, out = run(capsys, "spectral", "verify-sharp", "--matrix", str(path), "--t", "2",
                    "--alphas", "0,1", "--kmax", "2")
    assert code == 0 and json.loads(out)["passed"]


def test_cli_duality(capsys, tmp_path):
    code, out = run(capsys, "duality", "verify-pairing", "--matrix", "m3")
    assert code == 0 and json.loads(out)["adjunction"]
    ctx = PadicContext(3, prec=20)
    m, h, e = tmp_path / "m.json", tmp_path / "h.json", tmp_path / "e.json"
    write_matrix(m, CMatrix.block_diag([CMatrix.from_ints(ctx, [[3, 1], [0, 9]]),
                                        CMatrix.from_ints(ctx, [[1]])]))
    write_matrix(h, CMatrix.diag(ctx, [1, 1, 0]))
    e.write_text(json.dumps({"projectors": [
        {"label": "a", "conditions": [{"hecke": 0, "a": 1, "others": [0]}]},
        {"label": "b", "conditions": [{"hecke": 0, "a": 0, "others": [1]}]}]}))
    code, out = run(capsys, "duality", "project", "--matrix", str(m), "--hecke", str(h),
                    "--eigen", str(e))
    data = json.loads(out)
    assert code == 0 and data["ranks"] == [2, 1] and data["product_ok"]
    assert data["slopes"] == [["1/1", "2/1"], ["0/1"]]
