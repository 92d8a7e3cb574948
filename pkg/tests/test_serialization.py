"""Round-trip tests for JSON artifacts: states, bases, reports."""

import json
import os
import struct

import numpy as np
import pytest

from singletlab import (
    SystemShape,
    basis_from_dict,
    basis_to_dict,
    load_basis,
    load_state,
    save_basis,
    save_state,
    state_from_dict,
    state_to_dict,
)
from singletlab import _json

from conftest import random_dense_state


class TestJsonWriter:
    def test_floats_print_with_full_precision(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            x = float(rng.standard_normal() * 10.0 ** rng.integers(-300, 300))
            rendered = _json.dumps({"x": x})
            back = json.loads(rendered)["x"]
            assert struct.pack("<d", back) == struct.pack("<d", x)

    def test_small_integral_floats_round_trip(self):
        for x in [0.0, -0.0, 1.0, -1.0, 0.5, 1e-308, 1.7976931348623157e308]:
            back = json.loads(_json.dumps({"x": x}))["x"]
            assert struct.pack("<d", back) == struct.pack("<d", x)

    def test_rejects_non_finite(self):
        for bad in [float("nan"), float("inf"), float("-inf")]:
            with pytest.raises(ValueError):
                _json.dumps({"x": bad})

    def test_rejects_non_string_keys(self):
        with pytest.raises(TypeError):
            _json.dumps({3: "x"})

    def test_output_is_stable_and_newline_terminated(self):
        payload = {"b": [1, 2], "a": {"nested": True, "other": None}}
        first = _json.dumps(payload)
        second = _json.dumps(payload)
        assert first == second
        assert first.endswith("\n")
        assert json.loads(first) == payload


class TestStateFiles:
    def test_round_trip_is_exact(self, tmp_path):
        rng = np.random.default_rng(5)
        for shape in [SystemShape(2, 2), SystemShape(4, 2), SystemShape(3, 3)]:
            state = random_dense_state(shape, rng)
            path = os.path.join(tmp_path, "state.json")
            save_state(state, path)
            back = load_state(path)
            assert back.shape == state.shape
            assert back == state  # bit-exact amplitudes

    def test_schema_fields(self, bell):
        payload = state_to_dict(bell)
        assert payload["n"] == 2 and payload["d"] == 2
        entries = payload["amplitudes"]
        assert [tuple(e["index"]) for e in entries] == [(0, 1), (1, 0)]
        assert {"index", "re", "im"} <= set(entries[0].keys())

    def test_indices_sorted_lexicographically(self, tmp_path):
        rng = np.random.default_rng(9)
        state = random_dense_state(SystemShape(3, 2), rng)
        path = os.path.join(tmp_path, "state.json")
        save_state(state, path)
        raw = json.loads(open(path).read())
        indices = [tuple(e["index"]) for e in raw["amplitudes"]]
        assert indices == sorted(indices)

    def test_from_dict_does_not_rephase_by_default(self, bell):
        rotated = bell.scaled(np.exp(0.3j))
        back = state_from_dict(state_to_dict(rotated))
        assert back == rotated

    def test_rejects_malformed_payload(self):
        with pytest.raises((KeyError, ValueError, TypeError)):
            state_from_dict({"n": 2, "d": 2})
        with pytest.raises((KeyError, ValueError, TypeError)):
            state_from_dict({"n": 2, "d": 2, "amplitudes": [{"index": [0, 5], "re": 1.0, "im": 0.0}]})

    def test_identical_files_for_identical_states(self, tmp_path, four_qubit):
        path_a = os.path.join(tmp_path, "a.json")
        path_b = os.path.join(tmp_path, "b.json")
        save_state(four_qubit, path_a)
        save_state(four_qubit, path_b)
        assert open(path_a, "rb").read() == open(path_b, "rb").read()


class TestBasisFiles:
    def test_round_trip(self, tmp_path, basis_cache):
        basis = basis_cache(4, 2)
        path = os.path.join(tmp_path, "basis.json")
        save_basis(basis, path)
        back = load_basis(path)
        assert back.shape == basis.shape
        assert back.dimension == basis.dimension
        for original, loaded in zip(basis, back):
            assert original.distance(loaded) < 1e-15

    def test_metadata_keys(self, basis_cache):
        payload = basis_to_dict(basis_cache(6, 2))
        assert payload["n"] == 6
        assert payload["d"] == 2
        assert payload["K"] == 3
        assert payload["dimension"] == 5
        assert payload["permutation_phase"] == "signum"
        assert payload["tolerance"] == pytest.approx(1e-9)
        assert "seed" in payload
        assert len(payload["states"]) == 5

    def test_dict_round_trip_without_files(self, basis_cache):
        basis = basis_cache(3, 3)
        back = basis_from_dict(basis_to_dict(basis))
        assert back.dimension == 1
        assert back.states[0].distance(basis.states[0]) < 1e-15
