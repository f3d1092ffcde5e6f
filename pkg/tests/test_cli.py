import json

import numpy as np
import pytest

from strongfactor import cli
from strongfactor.operators import cesaro_matrix, matrix_to_csv


def run(args, capsys=None):
    code = cli.main(args)
    return code


def read_cert(path):
    return json.loads(path.read_text())


class TestCheckCesaro:
    def test_round_trip_exits_zero(self, tmp_path, capsys):
        out = tmp_path / "cert.json"
        code = run(["check-cesaro", "--gen", "rank-one", "--g", "harmonic",
                    "--h", "ones", "--N", "64", "--p", "2", "--q", "2",
                    "--r", "2", "--out", str(out)])
        assert code == 0
        doc = read_cert(out)
        assert doc["verdict"] == "FACTORS"
        g = np.asarray(doc["g"]["coeffs"])
        assert np.abs(g - 1.0 / np.arange(1, 65)).max() < 1e-12
        assert "timestamp" in doc

    def test_identity_refutation_exits_one(self, tmp_path):
        out = tmp_path / "cert.json"
        code = run(["check-cesaro", "--gen", "identity", "--h", "ones",
                    "--N", "8", "--p", "2", "--q", "2", "--r", "2",
                    "--out", str(out)])
        assert code == 1
        doc = read_cert(out)
        assert doc["verdict"] == "DOES_NOT_FACTOR"
        assert (doc["witness"]["i"], doc["witness"]["j"]) == (2, 2)

    def test_matrix_csv_ingestion(self, tmp_path):
        path = tmp_path / "identity.csv"
        with open(path, "w") as fh:
            fh.write("N=3\n1.0,0.0,0.0\n0.0,1.0,0.0\n0.0,0.0,1.0\n")
        code = run(["check-cesaro", "--matrix", str(path), "--h", "ones",
                    "--N", "3", "--p", "2", "--q", "2", "--r", "2",
                    "--out", str(tmp_path / "c.json")])
        assert code == 1

    def test_perturbed_instance_flips(self, tmp_path):
        base = ["check-cesaro", "--gen", "rank-one", "--g", "harmonic",
                "--h", "ones", "--N", "16", "--p", "2", "--q", "2", "--r", "2",
                "--tol", "1e-6", "--out", str(tmp_path / "c.json")]
        assert run(base) == 0
        assert run(base + ["--perturb", "1,5,1e-3"]) == 1

    def test_missing_exponent_is_usage_error(self, tmp_path):
        code = run(["check-cesaro", "--gen", "identity", "--h", "ones",
                    "--N", "4", "--p", "2", "--q", "2"])
        assert code == 64

    def test_malformed_csv_is_parse_error(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("not-a-header\n")
        code = run(["check-cesaro", "--matrix", str(path), "--h", "ones",
                    "--N", "2", "--p", "2", "--q", "2", "--r", "2"])
        assert code == 65
        assert "bad.csv" in capsys.readouterr().err

    def test_shifted_variant(self, tmp_path):
        out = tmp_path / "cert.json"
        code = run(["check-cesaro-j0", "--gen", "rank-one", "--g", "ones",
                    "--h", "shift1:ones", "--N", "12", "--p", "2", "--q", "2",
                    "--r", "2", "--out", str(out)])
        assert code == 0
        doc = read_cert(out)
        assert doc["alpha"] is not None
        assert any("j0=2" in note for note in doc["notes"])


class TestCheckFourier:
    def test_diagonal_matrix(self, tmp_path):
        out = tmp_path / "cert.json"
        code = run(["check-fourier", "--gen", "diag", "--g", "invsq",
                    "--N", "8", "--r", "2", "--p", "2", "--q", "2",
                    "--out", str(out)])
        assert code == 0
        doc = read_cert(out)
        assert doc["g_norm"]["value"] == pytest.approx(1.0)
        assert doc["g_norm"]["exponent"] == "inf"

    def test_exponent_out_of_hypotheses(self):
        code = run(["check-fourier", "--gen", "diag", "--g", "invsq",
                    "--N", "4", "--r", "3", "--p", "3", "--q", "2"])
        assert code == 64


class TestCheckMatrix:
    def test_through_cesaro(self, tmp_path):
        code = run(["check-matrix", "--gen", "rank-one", "--g", "harmonic",
                    "--h", "ones", "--N", "12", "--through", "cesaro",
                    "--out", str(tmp_path / "c.json")])
        assert code == 0

    def test_through_file(self, tmp_path):
        bpath = tmp_path / "b.csv"
        matrix_to_csv(cesaro_matrix(6), bpath)
        code = run(["check-matrix", "--gen", "rank-one", "--g", "ones",
                    "--h", "ones", "--N", "6", "--through", str(bpath),
                    "--out", str(tmp_path / "c.json")])
        assert code == 0


class TestCertify:
    def test_bounded_evidence_is_inconclusive(self, tmp_path):
        out = tmp_path / "cert.json"
        code = run(["certify", "--form", "cesaro", "--gen", "rank-one",
                    "--g", "harmonic", "--h", "ones", "--N", "4",
                    "--r", "2", "--q", "2", "--patterns", "8",
                    "--out", str(out)])
        assert code == 2
        doc = read_cert(out)
        assert doc["verdict"] == "INCONCLUSIVE"
        assert doc["certifier"]["refuted"] is False
        assert doc["certifier"]["c_hat"] <= 1.0 + 1e-9  # |harmonic|_inf = 1

    def test_identity_refutation(self, tmp_path):
        out = tmp_path / "cert.json"
        code = run(["certify", "--form", "cesaro", "--gen", "identity",
                    "--h", "ones", "--N", "4", "--r", "2", "--q", "2",
                    "--out", str(out)])
        assert code == 1
        doc = read_cert(out)
        assert doc["certifier"]["refuted"] is True
        assert doc["certifier"]["c_hat"] == "inf"

    def test_fourier_form(self, tmp_path):
        out = tmp_path / "cert.json"
        code = run(["certify", "--form", "fourier", "--gen", "diag",
                    "--g", "invsq", "--N", "4", "--r", "4/3", "--q", "2",
                    "--out", str(out)])
        assert code == 2


class TestVerifyRepresenting:
    def test_chebyshev_construction(self, tmp_path):
        out = tmp_path / "cert.json"
        code = run(["verify-representing", "--family", "chebyshev1",
                    "--N", "16", "--samples", "10", "--out", str(out)])
        assert code == 0
        assert read_cert(out)["verdict"] == "FACTORS"

    def test_permuted_variant_fails(self, tmp_path):
        code = run(["verify-representing", "--family", "chebyshev1",
                    "--N", "16", "--samples", "10", "--permute",
                    "--out", str(tmp_path / "c.json")])
        assert code == 1

    def test_unknown_family(self):
        assert run(["verify-representing", "--family", "hermite"]) == 64


class TestDeterminism:
    def test_byte_identical_output(self, tmp_path):
        args = ["check-cesaro", "--gen", "rank-one", "--g", "harmonic",
                "--h", "ones", "--N", "32", "--p", "2", "--q", "2", "--r", "2",
                "--seed", "11", "--no-timestamp"]
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run(args + ["--out", str(a)]) == 0
        assert run(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_timestamp_present_by_default(self, tmp_path):
        out = tmp_path / "c.json"
        run(["check-cesaro", "--gen", "cesaro", "--h", "ones", "--N", "4",
             "--p", "2", "--q", "2", "--r", "2", "--out", str(out)])
        assert "timestamp" in read_cert(out)

    def test_certifier_deterministic_via_cli(self, tmp_path):
        args = ["certify", "--form", "cesaro", "--gen", "random-lower",
                "--h", "ones", "--N", "6", "--r", "2", "--q", "4/3",
                "--patterns", "8", "--seed", "3", "--no-timestamp"]
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(args + ["--out", str(a)])
        run(args + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestSuiteCommand:
    def test_hardy_suite_passes(self, capsys):
        assert run(["suite", "--name", "hardy"]) == 0
        assert "PASS hardy" in capsys.readouterr().out

    def test_unknown_suite(self):
        assert run(["suite", "--name", "nope"]) == 64

    def test_unknown_command_is_usage_error(self):
        assert run(["frobnicate"]) == 64


class TestSequenceSpecs:
    def test_csv_sequence(self, tmp_path):
        seq = tmp_path / "h.csv"
        seq.write_text("".join(f"{v}\n" for v in np.ones(8)))
        code = run(["check-cesaro", "--gen", "rank-one", "--g", "harmonic",
                    "--h", str(seq), "--N", "8", "--p", "2", "--q", "2",
                    "--r", "2", "--out", str(tmp_path / "c.json")])
        assert code == 0

    def test_unknown_sequence_name(self):
        code = run(["check-cesaro", "--gen", "rank-one", "--g", "harmonic",
                    "--h", "nonesuch", "--N", "8", "--p", "2", "--q", "2",
                    "--r", "2"])
        assert code == 64

    def test_stdout_json_when_no_out(self, capsys):
        code = run(["check-cesaro", "--gen", "cesaro", "--h", "ones",
                    "--N", "4", "--p", "2", "--q", "2", "--r", "2",
                    "--no-timestamp"])
        assert code == 0
        out = capsys.readouterr().out
        payload = out[out.index("{"):]
        assert json.loads(payload)["verdict"] == "FACTORS"
