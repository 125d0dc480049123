"""Wire-format round-trips and report determinism."""

import json

import numpy as np

from algpaths.algebraic import random_element, spectral_resolution, validate_roots
from algpaths.components import ComponentSignature, distance_scan, line_direction
from algpaths.serialize import (
    SCAN_CSV_HEADER,
    canonical_dumps,
    line_witness_to_json,
    matrix_from_json,
    matrix_to_json,
    partition_to_json,
    scan_csv_row,
    scan_report_to_json,
    signature_from_json,
    signature_to_json,
)
from algpaths.seeding import rng_from

R01 = validate_roots([0, 1])


def test_matrix_roundtrip_is_exact():
    rng = rng_from(0)
    a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    back = matrix_from_json(json.loads(json.dumps(matrix_to_json(a))))
    assert np.max(np.abs(back - a)) <= 1e-15  # json floats round-trip exactly
    np.testing.assert_array_equal(back, a)


def test_matrix_json_layout():
    obj = matrix_to_json(np.array([[1, 2j], [3, 4]], dtype=complex))
    assert obj["dim"] == 2
    assert obj["entries"] == [[1.0, 0.0], [0.0, 2.0], [3.0, 0.0], [4.0, 0.0]]  # row-major


def test_signature_roundtrip():
    sig = ComponentSignature((1, 2, 0), 3)
    assert signature_from_json(signature_to_json(sig)) == sig


def test_partition_and_witness_serialize():
    el = random_element((1, 2), R01, seed=3)
    part = spectral_resolution(el)
    obj = partition_to_json(part)
    assert len(obj["members"]) == 2
    w = line_direction(el)
    obj = line_witness_to_json(w)
    assert obj["certificate"] <= 1e-9


def test_scan_report_json_and_csv():
    rep = distance_scan(
        ComponentSignature((1, 1), 2), ComponentSignature((0, 2), 2), R01, budget=5, seed=2
    )
    obj = scan_report_to_json(rep)
    assert obj["restarts"] == 5 and obj["seed"] == 2
    row = scan_csv_row(rep)
    assert SCAN_CSV_HEADER.count(",") == row.count(",")
    assert row.startswith("1:1,0:2,0.0:1.0,2,2,5,")


def test_canonical_dumps_is_deterministic():
    a = canonical_dumps({"b": 1, "a": [1.5, {"z": 2, "y": 3}]})
    b = canonical_dumps({"a": [1.5, {"y": 3, "z": 2}], "b": 1})
    assert a == b
    assert a.endswith("\n")
