"""Command-line interface: config handling, outputs, exit codes."""

import json

import numpy as np
import pytest

from helmtx import cli, direct


def run(argv):
    return cli.main(argv)


def read_config_header(path):
    with open(path) as f:
        first = f.readline()
    assert first.startswith("# config ")
    return json.loads(first[len("# config "):])


def test_defaults_and_unknown_keys(tmp_path):
    cfg = cli.load_config(None, {})
    assert cfg["curve"] == {"type": "circle", "radius": 1.0}
    assert cfg["n"] == 400 and cfg["omega"] == 1.0 and cfg["eps1"] == 2.0
    assert cfg["beta"] is None  # i/k0 default
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"unknown-key": 1}))
    with pytest.raises(cli.ConfigError):
        cli.load_config(str(bad), {})


def test_validation_errors():
    with pytest.raises(cli.ConfigError):
        cli.load_config(None, {"beta": "1.0,0.0"})  # real beta
    with pytest.raises(cli.ConfigError):
        cli.load_config(None, {"n": 401})  # odd N
    with pytest.raises(cli.ConfigError):
        cli.load_config(None, {"eps1": -1.0})
    with pytest.raises(cli.ConfigError):
        cli.load_config(None, {"quadrature-order": 7})


def test_config_error_exit_code(tmp_path):
    out = tmp_path / "x.csv"
    code = run(["solve", "--n", "401", "--out", str(out)])
    assert code == cli.EXIT_CONFIG


def test_solve_writes_csv_with_header(tmp_path):
    out = tmp_path / "sol.csv"
    code = run(["solve", "--n", "64", "--out", str(out)])
    assert code == cli.EXIT_OK
    cfg = read_config_header(out)
    assert cfg["schema-version"] == cli.SCHEMA_VERSION
    assert cfg["n"] == 64
    rows = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert rows[0] == "t,re_u,im_u,re_q,im_q"
    assert len(rows) == 65


def test_roundtrip_bitwise_identical(tmp_path):
    out1 = tmp_path / "a.csv"
    assert run(["solve", "--n", "64", "--out", str(out1)]) == cli.EXIT_OK
    emitted = read_config_header(out1)
    emitted.pop("schema-version")
    cfg_file = tmp_path / "replay.json"
    cfg_file.write_text(json.dumps(emitted))
    out2 = tmp_path / "b.csv"
    assert run(["solve", "--config", str(cfg_file), "--out", str(out2)]) == cli.EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()


def test_dump_operators(tmp_path):
    out = tmp_path / "sol.csv"
    dump = tmp_path / "ops"
    code = run(["solve", "--n", "32", "--out", str(out), "--dump-operators", str(dump)])
    assert code == cli.EXIT_OK
    manifest = json.loads((dump / "manifest.json").read_text())
    assert manifest["n"] == 32
    names = set(manifest["files"])
    assert {"S_k0.bin", "D_k0.bin", "Dstar_k0.bin", "N_k0.bin", "S_k1.bin"} <= names
    raw = np.fromfile(dump / "S_k0.bin", dtype="<c16")
    assert raw.shape == (32 * 32,)
    assert np.all(np.isfinite(raw.view(float)))


def test_solve_fast_subcommand(tmp_path):
    out = tmp_path / "fast.csv"
    code = run(["solve-fast", "--n", "512", "--leaf-size", "64",
                "--initial-skeletons", "24", "--out", str(out)])
    assert code == cli.EXIT_OK
    stats = json.loads((tmp_path / "fast.csv.stats.json").read_text())
    assert stats["stats"]["n"] == 512


def test_mie_reference(tmp_path):
    out = tmp_path / "mie.csv"
    code = run(["mie-reference", "--n", "64", "--out", str(out)])
    assert code == cli.EXIT_OK
    coeffs = (tmp_path / "mie.csv.coeffs.csv").read_text().splitlines()
    header_rows = [l for l in coeffs if not l.startswith("#")]
    assert header_rows[0] == "n,re_a,im_a,re_b,im_b"


def test_convergence_single_n_degenerates(tmp_path):
    out = tmp_path / "conv.csv"
    code = run(["convergence", "--n-sweep", "128", "--out", str(out)])
    assert code == cli.EXIT_OK
    rows = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert len(rows) == 3  # header, one data row, slope footer


def test_convergence_assert_mode(tmp_path):
    out = tmp_path / "conv.csv"
    code = run(["convergence", "--n-sweep", "100,200,400", "--out", str(out), "--assert"])
    assert code == cli.EXIT_OK
    rows = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    slope = float(rows[-1].split(",")[-1])
    assert abs(slope + 1.0) <= 0.35


def test_benchmark_output(tmp_path):
    out = tmp_path / "bench.csv"
    code = run(["benchmark", "--n-sweep", "64,128", "--out", str(out)])
    assert code == cli.EXIT_OK
    rows = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert rows[0].startswith("formulation,N,omega,eps1,flops_counted")
    ratio_rows = [r for r in rows if r.startswith("ratio-ordinary-over-mixed")]
    assert len(ratio_rows) == 2
    flop_ratio = float(ratio_rows[-1].split(",")[4])
    assert 1.0 < flop_ratio < 1.3


def test_numerical_failure_exit_code(monkeypatch, tmp_path):
    def boom(*args, **kwargs):
        raise direct.ResonanceError("synthetic resonance", omega=1.0)

    monkeypatch.setattr(cli.direct, "factor_mixed", boom)
    out = tmp_path / "x.csv"
    code = run(["solve", "--n", "64", "--out", str(out)])
    assert code == cli.EXIT_NUMERICAL


def test_eig_subcommand_json(tmp_path):
    out = tmp_path / "eig.json"
    code = run(["eig", "--n", "128", "--quadrature-order", "31",
                "--config", str(_eig_config(tmp_path)), "--out", str(out)])
    assert code == cli.EXIT_OK
    payload = json.loads(out.read_text())
    assert "eigenvalues" in payload and "config" in payload
    for item in payload["eigenvalues"]:
        assert set(item) == {"re", "im", "residual"}


def _eig_config(tmp_path):
    path = tmp_path / "eig.json.cfg"
    path.write_text(json.dumps({
        "curve": {"type": "circle", "radius": 0.5},
        "eps0": 1.0, "eps1": 4.0,
        "ssm-center": [0.43, -1.28],
        "ssm-points-per-side": 12,
        "ssm-block-size": 2,
        "threads": 2,
    }))
    return path
