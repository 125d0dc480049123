"""Component signatures, isolation, line witnesses, distance scans."""

import numpy as np
import pytest

from algpaths.algebraic import certify, random_element, spectral_resolution, validate_roots
from algpaths.components import (
    ComponentSignature,
    distance_scan,
    is_isolated,
    line_direction,
    same_component,
    signature,
)
from algpaths.errors import BadSignature, CentralElement, DimMismatch, RootMismatch
from algpaths.matkernel import operator_norm
from algpaths.seeding import rng_from

R01 = validate_roots([0, 1])
UPPER = np.array([[0, 1], [0, 1]], dtype=complex)


def test_signature_diagonal():
    el = certify(np.diag([0.0, 1.0, 1.0]), R01)
    assert signature(el).ranks == (1, 2)


def test_signature_scalar():
    roots = validate_roots([4.0, 7.0])
    el = certify(7.0 * np.eye(3), roots)
    assert signature(el).ranks == (0, 3)


def test_signature_non_hermitian_idempotent():
    # ranks of 1 - a and a: both 1 by hand
    el = certify(UPPER, R01)
    assert signature(el).ranks == (1, 1)


def test_component_signature_validates():
    with pytest.raises(BadSignature):
        ComponentSignature((1, 1), 3)


def test_same_component_equal_signatures():
    x = certify(np.diag([1.0, 0.0]), R01)
    y = certify(UPPER, R01)
    assert same_component(x, y)


def test_same_component_rank_differs():
    x = certify(np.diag([1.0, 0.0]), R01)
    y = certify(np.diag([1.0, 1.0]), R01)
    assert not same_component(x, y)


def test_same_component_scalars():
    roots = validate_roots([2.0, 3.0])
    x = certify(2.0 * np.eye(2), roots)
    y = certify(2.0 * np.eye(2), roots)
    assert same_component(x, y)


def test_same_component_preconditions():
    x = certify(np.diag([1.0, 0.0]), R01)
    y = certify(np.diag([1.0, 0.0, 0.0]), R01)
    with pytest.raises(DimMismatch):
        same_component(x, y)
    z = certify(np.diag([2.0, 0.0]), validate_roots([0, 2]))
    with pytest.raises(RootMismatch):
        same_component(x, z)


def test_same_component_is_equivalence_relation():
    roots = validate_roots([0, 1, 2])
    els = [
        random_element(sig, roots, seed=s)
        for s, sig in enumerate([(1, 1, 1), (1, 1, 1), (0, 2, 1), (0, 2, 1), (1, 2, 0)])
    ]
    for x in els:
        assert same_component(x, x)
    for x in els:
        for y in els:
            assert same_component(x, y) == same_component(y, x)
            for z in els:
                if same_component(x, y) and same_component(y, z):
                    assert same_component(x, z)


def _commutes_with_all_matrix_units(a, tol):
    m = a.shape[0]
    for k in range(m):
        for l in range(m):
            e = np.zeros((m, m), dtype=complex)
            e[k, l] = 1.0
            if operator_norm(a @ e - e @ a) > tol:
                return False
    return True


def test_isolation_of_scalars():
    roots = validate_roots([0.0, 1.5, -2.0])
    el = certify(1.5 * np.eye(3), roots)
    assert is_isolated(el)


def test_non_isolation_of_projections():
    el = certify(np.diag([0.0, 1.0]), R01)
    assert not is_isolated(el)


def test_isolation_signature_centrality_agreement():
    # three characterizations must agree: a full rank in the signature,
    # commutation with every matrix unit, and the scalar form itself
    roots = validate_roots([0, 1, 2])
    cases = [(4, 0, 0), (0, 4, 0), (1, 3, 0), (2, 1, 1)]
    for s, ranks in enumerate(cases):
        el = random_element(ranks, roots, seed=(100, s))
        tol = 1e-9 * (1.0 + operator_norm(el.a))
        by_signature = any(r == el.dim for r in signature(el).ranks)
        by_centrality = _commutes_with_all_matrix_units(el.a, tol)
        assert is_isolated(el) == by_signature == by_centrality


def test_line_direction_frozen_witness():
    # a0 = diag(0,1): the first nonzero candidate is E_12, and
    # (a0 + t E12)^2 = a0 + t E12 identically (hand expansion)
    el = certify(np.diag([0.0, 1.0]), R01)
    w = line_direction(el)
    np.testing.assert_allclose(w.direction, np.array([[0, 1], [0, 0]]), atol=0)
    assert w.certificate <= 1e-15


def test_line_direction_rejects_scalars():
    roots = validate_roots([2.0, 3.0])
    el = certify(2.0 * np.eye(2), roots)
    with pytest.raises(CentralElement):
        line_direction(el)


def test_line_direction_random_elements_certify_and_are_unbounded():
    roots = validate_roots([0, 1, 2])
    for s in range(10):
        rng = rng_from(s, 6)
        m = int(rng.integers(3, 5))
        ranks = (1, m - 2, 1)
        el = random_element(ranks, roots, seed=(s, 7))
        w = line_direction(el)
        assert w.certificate <= 1e-9
        nb = operator_norm(w.direction)
        na = operator_norm(el.a)
        assert nb > 0
        for lam in (1e3, 1e6):
            certify(el.a + lam * w.direction, roots)  # membership far out
            assert operator_norm(el.a + lam * w.direction) >= lam * nb - na


def test_spectral_floor_from_scalars():
    roots = validate_roots([0, 1, 2])
    for s in range(8):
        el = random_element((1, 2, 1), roots, seed=(s, 8))
        ranks = signature(el).ranks
        for i, li in enumerate(roots.roots):
            floor = min(
                abs(lj - li) for j, lj in enumerate(roots.roots) if j != i and ranks[j] > 0
            )
            assert operator_norm(el.a - li * np.eye(el.dim)) >= floor - 1e-9


# -- distance scans ------------------------------------------------------------


def test_distance_scan_two_root_floor():
    sig1 = ComponentSignature((1, 2), 3)
    sig2 = ComponentSignature((2, 1), 3)
    rep = distance_scan(sig1, sig2, R01, budget=60, seed=0, self_adjoint=True)
    assert rep.best_distance >= 1.0 - 1e-6
    assert rep.conjecture_bound == 1.0
    for w, sig in zip(rep.witness, (sig1, sig2)):
        assert signature(w) == sig


def test_distance_scan_central_pair():
    rep = distance_scan(
        ComponentSignature((2, 0), 2), ComponentSignature((0, 2), 2), R01, budget=5, seed=0
    )
    assert abs(rep.best_distance - 1.0) <= 1e-12


def test_distance_scan_explicit_pair_distance_is_exactly_one():
    assert operator_norm(np.diag([1.0, 0.0, 0.0]) - np.diag([1.0, 1.0, 0.0])) == 1.0


def test_distance_scan_monotone_in_budget():
    sig1 = ComponentSignature((1, 2), 3)
    sig2 = ComponentSignature((2, 1), 3)
    small = distance_scan(sig1, sig2, R01, budget=20, seed=5)
    large = distance_scan(sig1, sig2, R01, budget=40, seed=5)
    assert large.best_distance <= small.best_distance


def test_distance_scan_deterministic():
    sig1 = ComponentSignature((1, 1), 2)
    sig2 = ComponentSignature((0, 2), 2)
    r1 = distance_scan(sig1, sig2, R01, budget=15, seed=3)
    r2 = distance_scan(sig1, sig2, R01, budget=15, seed=3)
    assert r1.best_distance == r2.best_distance
    np.testing.assert_array_equal(r1.witness[0].a, r2.witness[0].a)


def test_distance_scan_parallel_matches_serial():
    sig1 = ComponentSignature((1, 1), 2)
    sig2 = ComponentSignature((0, 2), 2)
    serial = distance_scan(sig1, sig2, R01, budget=12, seed=3)
    parallel = distance_scan(sig1, sig2, R01, budget=12, seed=3, workers=2)
    assert serial.best_distance == parallel.best_distance
    np.testing.assert_array_equal(serial.witness[1].a, parallel.witness[1].a)


def test_distance_scan_preconditions():
    sig = ComponentSignature((1, 2), 3)
    with pytest.raises(BadSignature):
        distance_scan(sig, sig, R01, budget=5, seed=0)
    with pytest.raises(BadSignature):
        distance_scan(sig, ComponentSignature((2, 2), 4), R01, budget=5, seed=0)


def test_three_root_scan_runs_and_logs():
    roots = validate_roots([0, 1, 2])
    rep = distance_scan(
        ComponentSignature((1, 1, 1), 3),
        ComponentSignature((0, 2, 1), 3),
        roots,
        budget=25,
        seed=1,
    )
    assert rep.best_distance >= 0.0  # logged, never asserted against the gap
