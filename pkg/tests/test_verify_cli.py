"""Verification procedures, reports, basis export, and the CLI."""

import json

import pytest

from divdivfem.cli import main as cli_main
from divdivfem.export import export_basis, import_basis, verify_duality
from divdivfem.mesh.complex import build_box_mesh, single_tet_mesh, two_tet_mesh
from divdivfem.verify.checks import (
    check_exactness_global,
    check_identity_suite,
    check_kernel_characterization,
    check_polynomial_derham,
    check_polynomial_divdiv,
)
from divdivfem.verify.surjectivity import check_divdiv_surjectivity_constructive


def test_polynomial_derham_k3_values():
    rep = check_polynomial_derham(3)
    assert rep.passed
    assert rep.ranks["grad"] == 26  # dim Q2 minus the constants
    assert rep.ranks["curl"] == 28
    assert rep.ranks["div"] == 8
    assert rep.millis >= 0
    d = rep.to_dict()
    json.dumps(d)


def test_polynomial_derham_componentwise_degrees():
    for degs in ((1, 1, 1), (2, 1, 0)):
        rep = check_polynomial_derham(degrees=degs)
        assert rep.passed, rep.witnesses


def test_polynomial_divdiv_k3():
    rep = check_polynomial_divdiv(3)
    assert rep.passed, rep.witnesses
    assert rep.ranks["sym_curl"] == 94
    assert rep.ranks["div_div"] == 8
    assert rep.dims == {"V": 108, "U": 198, "Sigma": 102, "Q": 8}


def test_exactness_single_cube():
    rep = check_exactness_global(build_box_mesh(1, 1, 1), 3, "1x1x1")
    assert rep.passed, rep.witnesses
    assert rep.ranks == {"dev_grad": 104, "sym_curl": 94, "div_div": 8}


def test_kernel_characterization_box():
    rep = check_kernel_characterization(build_box_mesh(1, 1, 1), 3, samples=2)
    assert rep.passed, rep.witnesses
    assert rep.dims["kernel"] == 104


def test_identity_suite_small():
    rep = check_identity_suite(count=10, seed=99)
    assert rep.passed and rep.dims["checked"] == 10


def test_surjectivity_single_tet_k3():
    rep = check_divdiv_surjectivity_constructive(single_tet_mesh(), 3, "single")
    assert rep.passed, rep.witnesses
    assert rep.dims["q_basis"] == 4


def test_export_import_duality_roundtrip(tmp_path):
    path = str(tmp_path / "basis.json")
    data = export_basis("sigma", 3, "box", path=path)
    assert data["dim"] == 102
    fields = import_basis(path)
    assert len(fields) == 102
    assert verify_duality("sigma", 3, "box", fields)
    # verify re-import gives the identical coefficient tables
    again = export_basis("sigma", 3, "box")
    assert again["fields"] == data["fields"]


def test_export_tet_nodal_basis(tmp_path):
    path = str(tmp_path / "vtet.json")
    data = export_basis("v", 4, "tet", path=path)
    assert data["dim"] == 252
    fields = import_basis(path)
    assert len(fields) == 252
    # sampled duality re-check (each sampled field against every functional)
    assert verify_duality("v", 4, "tet", fields, sample=10)


def test_cli_dims_and_exit_codes(tmp_path, capsys):
    rc = cli_main(["dims", "--grid", "tet", "--k", "4"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0 and out["all_pass"]
    d = out["reports"][0]["dims"]
    assert (d["Sigma"], d["U"], d["V"], d["Q"]) == (210, 448, 252, 10)
    outfile = tmp_path / "rep.json"
    rc = cli_main(["dims", "--grid", "box", "--k", "3", "--out", str(outfile)])
    assert rc == 0
    saved = json.loads(outfile.read_text())
    assert saved["reports"][0]["dims"]["Sigma"] == 102


def test_cli_unisolvence(capsys):
    rc = cli_main(["unisolvence", "--grid", "box", "--family", "sigma", "--k", "3"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0 and out["all_pass"]
    assert out["reports"][0]["dims"] == {"dofs": 102, "dim": 102}


def test_cli_poly_complex(capsys):
    rc = cli_main(["poly-complex", "--k", "3", "--which", "derham"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0 and len(out["reports"]) == 1


def test_cli_green(capsys):
    rc = cli_main(["green-identities", "--count", "5", "--seed", "7"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0 and out["reports"][0]["dims"]["checked"] == 5


def test_cli_usage_error_exit2():
    with pytest.raises(SystemExit) as exc:
        cli_main(["unisolvence", "--grid", "box", "--family", "sigma"])
    assert exc.value.code == 2


def test_cli_threads_env_deterministic(capsys, monkeypatch):
    monkeypatch.setenv("DIVDIVFEM_THREADS", "4")
    rc = cli_main(["poly-complex", "--k", "3"])
    out1 = capsys.readouterr().out
    monkeypatch.setenv("DIVDIVFEM_THREADS", "1")
    rc2 = cli_main(["poly-complex", "--k", "3"])
    out2 = capsys.readouterr().out
    assert rc == rc2 == 0
    r1 = json.loads(out1)
    r2 = json.loads(out2)
    for a, b in zip(r1["reports"], r2["reports"]):
        a.pop("millis")
        b.pop("millis")
    assert r1 == r2


def test_failing_check_reports_witness():
    # a non-contractible check input: break the euler precondition by lying
    # about the claim level; instead exercise the fail path via a mesh whose
    # exactness is tested at an unsupported degree
    with pytest.raises(ValueError):
        check_divdiv_surjectivity_constructive(build_box_mesh(1, 1, 1), 4)


def test_cli_global_complex_smoke(capsys):
    rc = cli_main(["global-complex", "--grid", "box", "--k", "3", "--mesh", "single"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0 and out["all_pass"]
    rep = out["reports"][0]
    assert rep["ranks"] == {"dev_grad": 104, "sym_curl": 94, "div_div": 8}


def test_mesh_spec_parsing():
    from divdivfem.cli import _mesh_from_spec

    m, label = _mesh_from_spec("box", "2x1x1")
    assert m.n_cells == 2 and label == "2x1x1"
    m, _ = _mesh_from_spec("tet", "single")
    assert m.n_cells == 1
    m, _ = _mesh_from_spec("tet", "1x1x1")
    assert m.n_cells == 6
