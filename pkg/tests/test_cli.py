"""End-to-end tests of the command-line interface (in-process)."""

import json
import os

import pytest

from singletlab import (
    PureState,
    SystemShape,
    build_singlet_basis,
    save_basis,
    save_state,
)
from singletlab import fixtures
from singletlab.cli import main

from conftest import DATA_DIR

RING6 = os.path.join(DATA_DIR, "graph_state_ring6.json")


@pytest.fixture(scope="module")
def bell_file(tmp_path_factory):
    path = str(tmp_path_factory.mktemp("states") / "bell.json")
    fixtures.export("bell_singlet", path)
    return path


@pytest.fixture(scope="module")
def product_file(tmp_path_factory):
    path = str(tmp_path_factory.mktemp("states") / "product.json")
    save_state(PureState(SystemShape(4, 2), {(0, 0, 1, 1): 1.0}), path)
    return path


@pytest.fixture(scope="module")
def basis42_file(tmp_path_factory):
    path = str(tmp_path_factory.mktemp("bases") / "basis42.json")
    save_basis(build_singlet_basis(SystemShape(4, 2)), path)
    return path


class TestSubspace:
    def test_builds_and_reports_dimension(self, capsys, tmp_path):
        out = str(tmp_path / "basis.json")
        assert main(["subspace", "--n", "4", "--d", "2", "--out", out]) == 0
        assert "dimension: 2" in capsys.readouterr().out
        payload = json.loads(open(out).read())
        assert payload["dimension"] == 2
        assert len(payload["states"]) == 2

    def test_non_divisible_shape_reports_zero(self, capsys):
        assert main(["subspace", "--n", "3", "--d", "2"]) == 0
        assert "dimension: 0" in capsys.readouterr().out

    def test_artifact_is_reproducible(self, tmp_path):
        a = str(tmp_path / "a.json")
        b = str(tmp_path / "b.json")
        assert main(["subspace", "--n", "6", "--d", "2", "--out", a]) == 0
        assert main(["subspace", "--n", "6", "--d", "2", "--out", b]) == 0
        assert open(a, "rb").read() == open(b, "rb").read()


class TestCheckInvariance:
    def test_singlet_passes(self, bell_file, capsys):
        assert main(["check-invariance", "--state", bell_file]) == 0
        assert "invariant: yes" in capsys.readouterr().out

    def test_product_state_fails(self, product_file, capsys):
        assert main(["check-invariance", "--state", product_file]) == 1
        assert "invariant: no" in capsys.readouterr().out

    def test_artifact_written(self, bell_file, tmp_path):
        out = str(tmp_path / "inv.json")
        assert main(["check-invariance", "--state", bell_file, "--out", out]) == 0
        payload = json.loads(open(out).read())
        assert payload["invariant"] is True
        assert payload["residual"] < 1e-12


class TestUniformity:
    def test_ring_state_is_two_uniform(self, capsys):
        assert main(["uniformity", "--state", RING6, "--k", "2"]) == 0
        assert "uniform: yes" in capsys.readouterr().out

    def test_ring_state_is_not_three_uniform(self, capsys):
        assert main(["uniformity", "--state", RING6, "--k", "3"]) == 1
        assert "uniform: no" in capsys.readouterr().out

    def test_invalid_k_is_usage_error(self, bell_file):
        assert main(["uniformity", "--state", bell_file, "--k", "5"]) == 2


class TestVerifyLemmas:
    def test_basis_passes(self, basis42_file, capsys):
        assert main(["verify-lemmas", "--basis", basis42_file]) == 0
        out = capsys.readouterr().out
        assert "all lemma checks: pass" in out

    def test_single_state_file_accepted(self, bell_file):
        assert main(["verify-lemmas", "--basis", bell_file]) == 0

    def test_product_state_fails(self, product_file):
        assert main(["verify-lemmas", "--basis", product_file]) == 1


class TestCertify:
    def test_prints_exact_fractions(self, capsys):
        assert main(["certify", "--n", "6", "--d", "2"]) == 0
        out = capsys.readouterr().out
        assert "required diagonal mass: 15/2" in out
        assert "deficit floor: 3/40" in out

    def test_artifact(self, tmp_path):
        out = str(tmp_path / "cert.json")
        assert main(["certify", "--n", "6", "--d", "3", "--out", out]) == 0
        payload = json.loads(open(out).read())
        assert payload["deficit_floor"] == {"num": 4, "den": 45}


class TestVerify:
    def test_genuine_basis_passes(self, basis42_file, capsys):
        assert main(["verify", "--basis", basis42_file, "--trials", "10"]) == 0
        assert "certificate holds" in capsys.readouterr().out

    def test_corrupted_basis_fails(self, tmp_path, basis42_file):
        payload = json.loads(open(basis42_file).read())
        # zero out one amplitude: the file still parses but the member is no
        # longer invariant
        payload["states"][0]["amplitudes"][0]["re"] = 0.9
        bad = str(tmp_path / "tampered.json")
        with open(bad, "w") as handle:
            json.dump(payload, handle)
        assert main(["verify", "--basis", bad, "--trials", "5"]) == 1


class TestOptimize:
    def test_reports_floor_and_deficit(self, basis42_file, tmp_path, capsys):
        out = str(tmp_path / "opt.json")
        code = main(
            ["optimize", "--basis", basis42_file, "--restarts", "4", "--out", out]
        )
        assert code == 0
        text = capsys.readouterr().out
        assert "best deficit" in text
        payload = json.loads(open(out).read())
        assert payload["deficit"] == pytest.approx(0.5, abs=1e-6)
        assert payload["deficit"] >= payload["floor_decimal"]

    def test_seeded_runs_identical(self, basis42_file, tmp_path):
        a = str(tmp_path / "a.json")
        b = str(tmp_path / "b.json")
        args = ["optimize", "--basis", basis42_file, "--restarts", "2", "--seed", "4"]
        assert main(args + ["--out", a]) == 0
        assert main(args + ["--out", b]) == 0
        assert open(a, "rb").read() == open(b, "rb").read()


class TestErrorHandling:
    def test_missing_file(self):
        assert main(["check-invariance", "--state", "/no/such/file.json"]) == 2

    def test_malformed_json(self, tmp_path):
        bad = str(tmp_path / "bad.json")
        open(bad, "w").write("{ not json")
        assert main(["uniformity", "--state", bad, "--k", "1"]) == 2

    def test_wrong_schema(self, tmp_path):
        bad = str(tmp_path / "schema.json")
        open(bad, "w").write('{"hello": 1}')
        assert main(["check-invariance", "--state", bad]) == 2

    def test_unwritable_output(self):
        code = main(["certify", "--n", "4", "--d", "2", "--out", "/nonexistent-dir/x.json"])
        assert code == 2
