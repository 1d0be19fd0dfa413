"""Tests for the batch front door: exit codes, outputs, determinism."""
import json
import math

import numpy as np
import pytest

from helioq import hydrogenic, units
from helioq.cli import main

BASE_DEVICE = {
    "d_um": 0.5,
    "sites": [[0, 0], [1, 0]],
    "B_T": 1.5,
    "T_K": 0.01,
    "voltages_mV": [0.0, 0.0],
}


def write_config(tmp_path, payload, name="config.json"):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return str(p)


def test_spectrum_endpoints_match_module(tmp_path):
    cfg = write_config(tmp_path, {
        "output_dir": str(tmp_path / "out"),
        "device": dict(BASE_DEVICE),
        "spectrum": {"e_perp_min": 0.0, "e_perp_max": 50.0, "points": 3,
                     "max_state": 3},
    })
    assert main(["spectrum", "--config", cfg]) == 0
    csvs = list((tmp_path / "out").glob("spectrum_*.csv"))
    assert len(csvs) == 1
    lines = csvs[0].read_text().splitlines()
    assert lines[0].startswith("# config_hash=")
    assert lines[1] == "E_perp_V_per_cm,m,E_m_K,nu_1m_GHz"
    rows = [line.split(",") for line in lines[2:]]
    assert len(rows) == 3 * 3
    # pass-through: the CSV endpoint values equal the module's exactly
    basis = hydrogenic.HydrogenicBasisSpec(lam=units.image_strength(1.057))
    for e_perp in (0.0, 50.0):
        sol = hydrogenic.solve(basis, e_perp)
        for m in (1, 2, 3):
            row = next(
                r for r in rows
                if float(r[0]) == e_perp and int(r[1]) == m
            )
            assert float(r := row[2]) == sol.energies[m - 1]
            assert float(row[3]) == sol.transition_GHz(m)


def test_demo_swap_full_transfer(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "output_dir": str(tmp_path / "out"),
        "device": dict(BASE_DEVICE),
        "swap": {"pair": [0, 1], "alpha": math.pi / 2},
    })
    assert main(["demo-swap", "--config", cfg]) == 0
    report = json.loads(
        next((tmp_path / "out").glob("demo-swap_*.json")).read_text()
    )
    assert report["fidelity_vs_exchange_oracle"] > 1 - 1e-4
    assert report["achieved_amplitudes"]["target"] == pytest.approx(1.0, abs=1e-6)
    out = capsys.readouterr().out
    assert "fidelity=" in out


def test_decoherence_budget_output(tmp_path):
    cfg = write_config(tmp_path, {
        "output_dir": str(tmp_path / "out"),
        "device": dict(BASE_DEVICE),
        "noise": {"s_v": 1e-10, "tuning_ghz_per_mv": 1.0},
    })
    assert main(["decoherence", "--config", cfg]) == 0
    doc = json.loads(
        next((tmp_path / "out").glob("decoherence_*.json")).read_text()
    )
    t2 = doc["budget"]["t2_s"]
    assert 1e-4 / 3 < t2 < 3e-4
    # every intermediate quantity is present for audit
    for key in ("delta_T_cm", "magnetic_length_cm", "omega_zb_K", "omega_l_K"):
        assert key in doc["intermediates"]
    assert doc["artifact_version"]


def test_build_writes_matrices(tmp_path):
    cfg = write_config(tmp_path, {
        "output_dir": str(tmp_path / "out"),
        "device": dict(BASE_DEVICE),
    })
    assert main(["build", "--config", cfg]) == 0
    doc = json.loads(next((tmp_path / "out").glob("build_*.json")).read_text())
    ham = doc["hamiltonian"]
    assert ham["n_qubits"] == 2
    assert ham["a_K"][0][1] == pytest.approx(0.15795561, rel=1e-6)
    assert ham["b_K"][0][1] == pytest.approx(4.8696744e-3, rel=1e-6)


def test_calibrate_and_evolve_roundtrip(tmp_path):
    out = str(tmp_path / "out")
    cfg = write_config(tmp_path, {
        "output_dir": out,
        "device": dict(BASE_DEVICE),
        "swap": {"pair": [0, 1], "alpha": math.pi / 2},
    })
    assert main(["calibrate", "--config", cfg]) == 0
    dwell = json.loads(
        next((tmp_path / "out").glob("calibrate_*.json")).read_text()
    )["dwell_s"]
    assert dwell == pytest.approx(4.9276837e-9, rel=1e-6)

    cfg2 = write_config(tmp_path, {
        "output_dir": out,
        "device": dict(BASE_DEVICE),
        "schedule": {"duration_s": dwell},
        "initial": {"bits": "ud"},
        "evolution": {"sample_count": 5},
    }, name="evolve.json")
    assert main(["evolve", "--config", cfg2]) == 0
    csv = next((tmp_path / "out").glob("evolve_*.csv")).read_text().splitlines()
    assert csv[1] == "t,pop_dd,pop_ud,pop_du,pop_uu,trace"
    final = csv[-1].split(",")
    assert float(final[3]) == pytest.approx(1.0, abs=1e-6)  # pop_du after swap


def test_readout_pipeline(tmp_path):
    cfg = write_config(tmp_path, {
        "output_dir": str(tmp_path / "out"),
        "seed": 11,
        "device": dict(BASE_DEVICE),
        "readout": {"wait_s": 1e-6, "selectivity": 1e6, "pixel_um": 1.0,
                    "shots": 400, "initial_bits": "ud"},
    })
    assert main(["readout", "--config", cfg]) == 0
    img = next((tmp_path / "out").glob("readout_*.image.csv")).read_text()
    log = json.loads(next((tmp_path / "out").glob("readout_*.json")).read_text())
    assert log["plan"]["e_plus_V_per_cm"] == pytest.approx(4.2139556, rel=1e-6)
    # the ground state effectively never leaves (astronomical or unbounded)
    t_1 = log["plan"]["t_1_s"]
    assert t_1 is None or t_1 > 1e20
    assert log["rng"].startswith("philox")
    assert len(log["shots"]) == 400
    # both sites land in the same micron pixel
    assert img.splitlines()[1] == "pixel_x,pixel_y,counts"
    assert img.splitlines()[2].startswith("0,0,")


def test_evolve_with_tunneling_block(tmp_path):
    wait = 1e-6
    cfg = write_config(tmp_path, {
        "output_dir": str(tmp_path / "out"),
        "device": {"d_um": 0.5, "sites": [[0, 0]], "B_T": 1.5, "T_K": 0.01},
        "schedule": {"duration_s": wait},
        "initial": {"bits": "u", "mode": "density-matrix"},
        "evolution": {"sample_count": 6,
                      "tunneling": {"t_f_s": 0.0, "t_up_s": 2e-7}},
    })
    assert main(["evolve", "--config", cfg]) == 0
    csv = next((tmp_path / "out").glob("evolve_*.csv")).read_text().splitlines()
    last = csv[-1].split(",")
    # trace column records the escape: exp(-wait/t_up) = exp(-5)
    assert float(last[-1]) == pytest.approx(math.exp(-5.0), rel=1e-7)


def test_medium_outputs(tmp_path):
    cfg = write_config(tmp_path, {
        "output_dir": str(tmp_path / "out"),
        "medium": {
            "density_cm2": 1e8, "temperature_K": 0.1, "b_field_T": 1.5,
            "k_min": 1e2, "k_max": 1e3, "points": 5,
            "boundary": {"n_min": 1e7, "n_max": 1e9, "points": 4,
                         "gamma_melt": 137},
        },
    })
    assert main(["medium", "--config", cfg]) == 0
    disp_path = next(
        p for p in (tmp_path / "out").glob("medium_*.csv")
        if "boundary" not in p.name
    )
    disp = disp_path.read_text().splitlines()
    assert disp[1] == "branch,k_per_cm,omega_per_s,omega_K"
    branches = {line.split(",")[0] for line in disp[2:]}
    assert branches == {"ripplon", "longitudinal", "magnetoplasma-low",
                        "magnetoplasma-high"}
    bound = next(
        (tmp_path / "out").glob("medium_*.boundary.csv")
    ).read_text().splitlines()
    n, t = bound[2].split(",")
    from helioq import medium as med

    assert float(t) == med.melting_temperature(float(n), 137.0)


def test_byte_identical_reruns(tmp_path):
    cfg = write_config(tmp_path, {
        "output_dir": str(tmp_path / "out"),
        "seed": 3,
        "device": dict(BASE_DEVICE),
        "readout": {"wait_s": 1e-6, "selectivity": 1e6, "shots": 50},
    })
    assert main(["readout", "--config", cfg]) == 0
    files = sorted((tmp_path / "out").iterdir())
    first = {f.name: f.read_bytes() for f in files}
    assert main(["readout", "--config", cfg]) == 0
    for f in sorted((tmp_path / "out").iterdir()):
        assert f.read_bytes() == first[f.name]


def test_overrides_change_hash_and_echo(tmp_path):
    cfg = write_config(tmp_path, {
        "output_dir": str(tmp_path / "out"),
        "device": dict(BASE_DEVICE),
        "noise": {"s_v": 0.0},
    })
    assert main(["decoherence", "--config", cfg]) == 0
    assert main(["decoherence", "--config", cfg, "--set", "device.B_T=3.0"]) == 0
    docs = [
        json.loads(p.read_text())
        for p in sorted((tmp_path / "out").glob("decoherence_*.json"))
    ]
    assert len(docs) == 2  # different hashes -> different files
    overridden = next(d for d in docs if d["overrides"])
    assert overridden["overrides"] == ["device.B_T=3.0"]
    assert overridden["budget"]["b_field"] == 3.0


def test_unknown_key_rejected(tmp_path):
    cfg = write_config(tmp_path, {
        "output_dir": str(tmp_path / "out"),
        "device": dict(BASE_DEVICE, typo_key=1),
    })
    assert main(["spectrum", "--config", cfg]) == 2


def test_missing_block_rejected(tmp_path):
    cfg = write_config(tmp_path, {"output_dir": str(tmp_path / "out")})
    assert main(["spectrum", "--config", cfg]) == 2
    assert main(["demo-swap", "--config", cfg]) == 2


def test_missing_config_file(tmp_path):
    assert main(["spectrum", "--config", str(tmp_path / "nope.json")]) == 2


def test_numerical_failure_exit_code(tmp_path):
    # a sweep far beyond the basis' validity trips the convergence guard
    cfg = write_config(tmp_path, {
        "output_dir": str(tmp_path / "out"),
        "device": dict(BASE_DEVICE),
        "spectrum": {"e_perp_min": 0.0, "e_perp_max": 1e5, "points": 3},
    })
    assert main(["spectrum", "--config", cfg]) == 3


def test_floats_serialized_at_full_precision(tmp_path):
    cfg = write_config(tmp_path, {
        "output_dir": str(tmp_path / "out"),
        "device": dict(BASE_DEVICE),
        "noise": {"s_v": 1e-10, "tuning_ghz_per_mv": 1.0},
    })
    assert main(["decoherence", "--config", cfg]) == 0
    doc = json.loads(next((tmp_path / "out").glob("*.json")).read_text())
    # 17 significant digits round-trip float64 exactly
    from helioq import decoherence as dec

    lam = units.image_strength(1.057)
    assert doc["budget"]["t2_s"] == dec.t2_confined(0.01, 1.5, 0.5e-4, lam)
