"""Command-line tests, run in-process through main()."""

import json
import math

import numpy as np
import pytest

from hwenc.cli import main
from hwenc.ir import deserialize
from hwenc.simulator import run


def run_cli(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def demo_csv(tmp_path):
    xs = np.linspace(-2, 2, 15)
    dens = (1 + xs**2) ** -2
    amps = np.sqrt(dens / dens.sum())
    path = tmp_path / "amps.csv"
    path.write_text("# amplitudes\n" + "".join(f"{a}\n" for a in amps))
    return str(path), dens / dens.sum()


class TestEncode:
    def test_json_output_round_trips(self, capsys, demo_csv, tmp_path):
        path, target = demo_csv
        code, out, err = run_cli(
            capsys, "encode", "--n", "6", "--k", "2", "--input", path,
            "--level", "cnot",
        )
        assert code == 0 and err == ""
        payload = json.loads(out)
        assert payload["param_count"] == 14
        assert payload["cnot_count"] == 68
        assert payload["ordering"][0] == "110000"
        circuit = deserialize(json.dumps(payload["circuit"]))
        state = run(circuit)
        for bits, want in zip(payload["ordering"], target):
            assert abs(abs(state.amplitude(bits)) ** 2 - want) < 1e-9

    def test_qasm_output(self, capsys, demo_csv):
        path, _ = demo_csv
        code, out, err = run_cli(
            capsys, "encode", "--n", "6", "--k", "2", "--input", path,
            "--level", "cnot", "--format", "qasm",
        )
        assert code == 0
        assert out.startswith("OPENQASM 2.0;")
        assert "// ordering: 110000" in out

    def test_qasm_requires_cnot_level(self, capsys, demo_csv):
        path, _ = demo_csv
        code, out, err = run_cli(
            capsys, "encode", "--n", "6", "--k", "2", "--input", path,
            "--format", "qasm",
        )
        assert code == 1
        assert "needs --level cnot" in err

    def test_complex_csv(self, capsys, tmp_path):
        path = tmp_path / "cplx.csv"
        rng = np.random.default_rng(3)
        rows = rng.normal(size=(6, 2))
        path.write_text("".join(f"{re},{im}\n" for re, im in rows))
        code, out, _ = run_cli(
            capsys, "encode", "--n", "4", "--k", "2", "--input", str(path),
            "--complex",
        )
        assert code == 0
        assert json.loads(out)["param_count"] == 11

    def test_wrong_length_fails_cleanly(self, capsys, demo_csv):
        path, _ = demo_csv
        code, out, err = run_cli(
            capsys, "encode", "--n", "4", "--k", "1", "--input", path,
        )
        assert code == 1 and err.startswith("error:")

    def test_empty_input(self, capsys, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("# nothing\n")
        code, _, err = run_cli(
            capsys, "encode", "--n", "4", "--k", "1", "--input", str(path),
        )
        assert code == 1 and "no amplitudes" in err


class TestSparse:
    def write(self, tmp_path, entries):
        path = tmp_path / "tuples.json"
        path.write_text(json.dumps(entries))
        return str(path)

    def test_sorted_input(self, capsys, tmp_path):
        path = self.write(tmp_path, [
            {"bits": "000111", "re": 0.3}, {"bits": "001011", "re": -0.4},
            {"bits": "110001", "re": 0.5},
        ])
        code, out, _ = run_cli(capsys, "sparse", "--n", "6", "--input", path)
        assert code == 0
        assert json.loads(out)["param_count"] == 2

    def test_unsorted_needs_flag(self, capsys, tmp_path):
        path = self.write(tmp_path, [
            {"bits": "0111", "re": 0.3}, {"bits": "0011", "re": 0.4},
        ])
        code, _, err = run_cli(capsys, "sparse", "--n", "4", "--input", path)
        assert code == 1 and "out of order" in err
        code, out, _ = run_cli(
            capsys, "sparse", "--n", "4", "--input", path, "--sort-by-weight",
        )
        assert code == 0
        assert json.loads(out)["ordering"] == ["0011", "0111"]

    def test_missing_bits_field(self, capsys, tmp_path):
        path = self.write(tmp_path, [{"re": 0.3}])
        code, _, err = run_cli(capsys, "sparse", "--n", "4", "--input", path)
        assert code == 1 and "entry 0" in err

    def test_non_list_input(self, capsys, tmp_path):
        path = self.write(tmp_path, {"bits": "0011"})
        code, _, err = run_cli(capsys, "sparse", "--n", "4", "--input", path)
        assert code == 1 and "JSON list" in err


class TestBinary:
    def test_round_trip(self, capsys, tmp_path):
        rng = np.random.default_rng(5)
        x = rng.normal(size=8)
        path = tmp_path / "bin.csv"
        path.write_text("".join(f"{v}\n" for v in x))
        code, out, _ = run_cli(
            capsys, "binary", "--n", "3", "--input", str(path),
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["param_count"] == 7
        state = run(deserialize(json.dumps(payload["circuit"])))
        want = x / np.linalg.norm(x)
        for bits, w in zip(payload["ordering"], want):
            got = state.amplitude(bits)
            assert abs(got.real - w) < 1e-9 and abs(got.imag) < 1e-12


class TestCount:
    def test_analytic_table(self, capsys):
        code, out, _ = run_cli(capsys, "count", "--n", "6", "--k", "2")
        payload = json.loads(out)
        assert code == 0
        assert payload["total"] == 68
        assert [r["gates"] for r in payload["rows"]] == [4, 10]

    def test_closed_form(self, capsys):
        code, out, _ = run_cli(
            capsys, "count", "--n", "6", "--k", "2", "--mode", "closed-form",
        )
        assert json.loads(out)["total"] == 68

    def test_actual_prints_seed(self, capsys):
        code, out, _ = run_cli(
            capsys, "count", "--n", "5", "--k", "2", "--mode", "actual",
            "--seed", "3",
        )
        payload = json.loads(out)
        assert payload["seed"] == 3
        assert payload["actual_cnots"] <= payload["budget"]

    def test_binary_budget(self, capsys):
        code, out, _ = run_cli(capsys, "count", "--n", "6", "--binary")
        payload = json.loads(out)
        assert payload["total"] == 1048
        assert payload["analytic_total"] == 1120

    def test_size_bound_check(self, capsys):
        code, out, _ = run_cli(capsys, "count", "--n", "2", "--check-8n2n", "10")
        payload = json.loads(out)
        assert payload["ok"] and len(payload["check_8n2n"]) == 10

    def test_missing_k(self, capsys):
        code, _, err = run_cli(capsys, "count", "--n", "6")
        assert code == 1 and "--k" in err


class TestSimulate:
    @pytest.fixture
    def circuit_file(self, capsys, demo_csv, tmp_path):
        path, target = demo_csv
        code, out, _ = run_cli(
            capsys, "encode", "--n", "6", "--k", "2", "--input", path,
            "--level", "cnot",
        )
        payload = json.loads(out)
        circ = tmp_path / "circ.json"
        circ.write_text(json.dumps(payload["circuit"]))
        return str(circ), payload["ordering"], target

    def test_accepts_wrapped_encode_output(self, capsys, demo_csv, tmp_path):
        path, target = demo_csv
        code, out, _ = run_cli(
            capsys, "encode", "--n", "6", "--k", "2", "--input", path,
        )
        wrapped = tmp_path / "wrapped.json"
        wrapped.write_text(out)
        code, out, _ = run_cli(capsys, "simulate", str(wrapped))
        assert code == 0
        probs = json.loads(out)["probabilities"]
        assert abs(sum(probs.values()) - 1.0) < 1e-9

    def test_exact_probabilities(self, capsys, circuit_file):
        circ, ordering, target = circuit_file
        code, out, _ = run_cli(capsys, "simulate", circ)
        probs = json.loads(out)["probabilities"]
        for bits, want in zip(ordering, target):
            assert abs(probs[bits] - want) < 1e-9

    def test_sampled_counts_deterministic(self, capsys, circuit_file):
        circ, _, _ = circuit_file
        code, out1, _ = run_cli(
            capsys, "simulate", circ, "--shots", "200", "--seed", "7",
        )
        code, out2, _ = run_cli(
            capsys, "simulate", circ, "--shots", "200", "--seed", "7",
        )
        assert json.loads(out1) == json.loads(out2)
        payload = json.loads(out1)
        assert payload["seed"] == 7
        assert sum(payload["counts"].values()) == 200

    def test_noisy_counts(self, capsys, circuit_file):
        circ, _, _ = circuit_file
        code, out, _ = run_cli(
            capsys, "simulate", circ, "--shots", "300", "--noise",
            "depol:0.02", "--seed", "1",
        )
        payload = json.loads(out)
        assert payload["p2"] == 0.02
        assert sum(payload["counts"].values()) == 300

    def test_noise_needs_shots(self, capsys, circuit_file):
        circ, _, _ = circuit_file
        code, _, err = run_cli(capsys, "simulate", circ, "--noise", "depol:0.02")
        assert code == 1 and "--shots" in err

    def test_bad_noise_spec(self, capsys, circuit_file):
        circ, _, _ = circuit_file
        code, _, err = run_cli(
            capsys, "simulate", circ, "--shots", "10", "--noise", "flip:0.1",
        )
        assert code == 1 and "depol:P" in err

    def test_env_seed_fallback(self, capsys, circuit_file, monkeypatch):
        circ, _, _ = circuit_file
        monkeypatch.setenv("HWENC_SEED", "55")
        code, out, _ = run_cli(capsys, "simulate", circ, "--shots", "20")
        assert json.loads(out)["seed"] == 55
        code, out, _ = run_cli(
            capsys, "simulate", circ, "--shots", "20", "--seed", "4",
        )
        assert json.loads(out)["seed"] == 4

    def test_missing_file(self, capsys):
        code, _, err = run_cli(capsys, "simulate", "/no/such/file.json")
        assert code == 1 and err.startswith("error:")


class TestDemo:
    def test_noiseless_csv(self, capsys):
        code, out, _ = run_cli(
            capsys, "demo", "qgaussian", "--shots", "2000", "--seed", "9",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("# seed=9 ")
        header = lines[1].split(",")
        assert header == [
            "bitstring", "target", "raw", "mitigated", "band_low",
            "band_high", "rel_err_raw", "rel_err_mitigated",
        ]
        rows = [line.split(",") for line in lines[2:-1]]
        assert len(rows) == 15
        # no mitigation: those cells stay empty
        assert all(r[3] == "" and r[7] == "" for r in rows)
        assert lines[-1].startswith("# mean_rel_err_raw=")

    def test_mitigated_csv(self, capsys):
        code, out, _ = run_cli(
            capsys, "demo", "qgaussian", "--shots", "800", "--noise",
            "depol:0.02", "--mitigate", "cdr", "--rates", "1.0",
            "--circuits-per-rate", "3", "--bootstrap", "20", "--seed", "9",
        )
        assert code == 0
        lines = out.strip().splitlines()
        rows = [line.split(",") for line in lines[2:-1]]
        assert len(rows) == 15
        for r in rows:
            assert r[3] != "" and float(r[4]) <= float(r[5])
        assert "mean_rel_err_mitigated=" in lines[-1]
        total = sum(float(r[3]) for r in rows)
        assert abs(total - 1.0) < 1e-9

    def test_deterministic_output(self, capsys):
        args = ("demo", "qgaussian", "--shots", "500", "--noise",
                "depol:0.01", "--seed", "3")
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        assert out1 == out2

    def test_bad_rate_rejected(self, capsys):
        code, _, err = run_cli(
            capsys, "demo", "qgaussian", "--shots", "100", "--mitigate",
            "cdr", "--rates", "0.5,1.5", "--circuits-per-rate", "2",
        )
        assert code == 1 and "outside" in err

    def test_custom_grid(self, capsys):
        code, out, _ = run_cli(
            capsys, "demo", "qgaussian", "--points", "6", "--n", "4", "--k",
            "2", "--shots", "1000", "--seed", "2",
        )
        lines = out.strip().splitlines()
        assert len(lines) == 2 + 6 + 1


class TestParser:
    def test_unknown_command(self, capsys):
        assert run_cli(capsys, "nonsense")[0] == 2

    def test_help_exits_zero(self, capsys):
        assert run_cli(capsys, "--help")[0] == 0

    def test_no_command(self, capsys):
        assert run_cli(capsys)[0] == 2
