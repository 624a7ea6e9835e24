import json

import numpy as np
import pytest

from jbstar.algebra import expi
from jbstar.cli import main
from jbstar.isometry import random_structured_isometry
from jbstar.models import ModelDescriptor as D, build_model, element_from_json, element_to_json, random_selfadjoint
from jbstar.unitary import UChainFactorization

FULL2 = json.dumps(D.full(2).to_dict())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--model", FULL2, "--seed", "7", "--samples", "30")
    rep = json.loads(out)
    assert code == 0 and rep["passed"]
    assert all(c["max_residual"] <= 1e-9 for c in rep["checks"])
    assert {c["name"] for c in rep["checks"]} >= {"jordan_identity", "fundamental_identity", "jb_star_axiom"}


def test_verify_is_deterministic(capsys):
    a = run(capsys, "verify", "--model", FULL2, "--seed", "3", "--samples", "5")[1]
    b = run(capsys, "verify", "--model", FULL2, "--seed", "3", "--samples", "5")[1]
    assert a == b


def test_verify_model_from_file(tmp_path, capsys):
    path = write(tmp_path, "model.json", D.circle(D.full(1), 16).to_dict())
    code, out, _ = run(capsys, "verify", "--model", path, "--samples", "3", "--format", "md")
    assert code == 0 and "| jordan_identity |" in out and "**PASS**" in out


@pytest.mark.parametrize("argv", [
    ["verify", "--model", FULL2, "--samples", "0"],
    ["verify", "--model", FULL2, "--tol", "-1"],
    ["verify", "--model", '{"kind": "full_matrix", "n": 0}'],
    ["verify"],
    ["factor", "--in", "/nonexistent/file.json"],
    ["decompose"],
])
def test_config_errors_exit_2(argv, capsys):
    assert run(capsys, *argv)[0] == 2


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_corrupted_involution_is_flagged(capsys):
    code, out, _ = run(capsys, "verify", "--model", FULL2, "--samples", "5", "--inject-fault", "involution")
    rep = json.loads(out)
    assert code == 1 and not rep["passed"]
    failed = [c for c in rep["checks"] if not c["passed"]]
    assert failed and all(c["max_residual"] > c["tol"] for c in failed)
    assert any(c["name"] == "jb_star_axiom" for c in failed)


def test_factor_exponential_gives_half_log(tmp_path, capsys):
    m = build_model(D.full(2))
    h = random_selfadjoint(m, 1, 2.0)
    path = write(tmp_path, "u.json", element_to_json(expi(h)))
    code, out, _ = run(capsys, "factor", "--in", path)
    rep = json.loads(out)
    assert code == 0 and rep["length"] == 1 and rep["reconstruction_error"] <= 1e-8
    chain = UChainFactorization.from_json(rep["chain"])
    assert chain.hs[0].allclose(h * 0.5, 1e-12)


def test_factor_unit_gives_empty_chain(tmp_path, capsys):
    path = write(tmp_path, "one.json", element_to_json(build_model(D.full(3)).one()))
    code, out, _ = run(capsys, "factor", "--in", path)
    rep = json.loads(out)
    assert code == 0 and rep["length"] == 0 and rep["chain"]["hs"] == []


def test_factor_refuses_lambda(tmp_path, capsys):
    m = build_model(D.circle(D.full(1)))
    path = write(tmp_path, "lam.json", element_to_json(m.from_function(lambda z: z)))
    code, out, _ = run(capsys, "factor", "--in", path)
    rep = json.loads(out)
    assert code == 1 and rep["status"] == "certified_false" and rep["windings"] == [1]


def test_factor_path(tmp_path, capsys):
    m = build_model(D.symmetric(3))
    rng = np.random.default_rng(2)
    hs = [random_selfadjoint(m, rng, 0.4) for _ in range(4)]
    pts = [UChainFactorization(hs[:k]).evaluate(m) for k in range(5)]
    path = write(tmp_path, "path.json", {"path": [element_to_json(p) for p in pts]})
    code, out, _ = run(capsys, "factor", "--in", path, "--out", str(tmp_path / "chain.json"))
    assert code == 0
    rep = json.loads((tmp_path / "chain.json").read_text())
    assert UChainFactorization.from_json(rep["chain"]).evaluate().allclose(pts[-1], 1e-8)


def test_factor_path_too_far(tmp_path, capsys):
    m = build_model(D.full(1))
    pts = [m.one(), m.scalar(-1.0)]
    path = write(tmp_path, "path.json", [element_to_json(p) for p in pts])
    code, out, _ = run(capsys, "factor", "--in", path)
    assert code == 1 and json.loads(out)["error"] == "DistanceTooLarge"


def test_classify_w(tmp_path, capsys):
    m = build_model(D.circle(D.symmetric(2)))
    path = write(tmp_path, "w.json", element_to_json(m.from_function(lambda z: np.diag([z, 1.0]))))
    code, out, _ = run(capsys, "classify", "--in", path)
    rep = json.loads(out)
    assert code == 0 and rep["winding"] == 1 and rep["principal"] is False


def test_classify_principal(tmp_path, capsys):
    m = build_model(D.circle(D.symmetric(2), 64))
    u = expi(random_selfadjoint(m, 4, 2.0))
    path = write(tmp_path, "u.json", element_to_json(u))
    code, out, _ = run(capsys, "classify", "--in", path)
    rep = json.loads(out)
    assert code == 0 and rep["principal"] is True and rep["winding"] == 0
    assert UChainFactorization.from_json(rep["certificate"]).evaluate().allclose(u, 1e-8)


def test_decompose_identity(capsys):
    code, out, _ = run(capsys, "decompose", "--isometry", "identity", "--model", FULL2)
    rep = json.loads(out)
    assert code == 0
    assert element_from_json(rep["isometry"]["p"]).allclose(build_model(D.full(2)).one(), 1e-12)
    assert np.allclose(rep["isometry"]["phi"], np.eye(8), atol=1e-9)
    assert all(r["residual"] < 1e-12 for r in rep["residuals"])


def test_decompose_random_from_file(tmp_path, capsys):
    m = build_model(D.direct_sum(D.full(2), D.symmetric(2)))
    path = write(tmp_path, "iso.json", random_structured_isometry(m, 11).to_json())
    code, out, _ = run(capsys, "decompose", "--in", path, "--samples", "20", "--format", "md")
    assert code == 0 and "round trip" in out and "**PASS**" in out
