import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sun_euler import algebra
from sun_euler.algebra import build_basis, classify, commutator, epsilon, verify_identities
from sun_euler.errors import CapacityError, DomainError, ShapeError

from oracles import gell_mann_direct

PAULI = [
    np.array([[0, 1], [1, 0]], complex),
    np.array([[0, -1j], [1j, 0]], complex),
    np.array([[1, 0], [0, -1]], complex),
]


def test_pauli_matrices_exact():
    b = build_basis(2)
    for i, p in enumerate(PAULI, start=1):
        assert np.array_equal(b[i], p)


def test_lambda8_entries():
    b = build_basis(3)
    assert np.allclose(b[8], np.diag([1, 1, -2]) / math.sqrt(3), atol=1e-15)


@pytest.mark.parametrize("n", range(2, 9))
def test_generators_match_direct_construction(n):
    b = build_basis(n)
    ref = gell_mann_direct(n)
    assert len(b) == n * n - 1
    for i, m in enumerate(ref, start=1):
        assert np.max(np.abs(b[i] - m)) <= 1e-15


@pytest.mark.parametrize("n", range(2, 9))
def test_trace_orthonormality(n):
    g = build_basis(n).generators
    gram = np.einsum("aij,bji->ab", g, g)
    assert np.max(np.abs(gram - 2 * np.eye(n * n - 1))) <= 1e-12


def test_epsilon_values():
    assert epsilon(2) == pytest.approx(1.0)
    assert epsilon(3) == pytest.approx(1 / math.sqrt(3))
    assert epsilon(4) == pytest.approx(1 / math.sqrt(6))
    with pytest.raises(DomainError):
        epsilon(1)


@pytest.mark.parametrize("N", range(1, 12))
def test_epsilon_sum_rule(N):
    s = sum(epsilon(a) ** 2 for a in range(2, N + 1)) + (N + 1) ** 2 * epsilon(N + 1) ** 2
    assert s == pytest.approx(4.0, abs=1e-13)


def test_classify_indices():
    assert classify(3) == ("diag", 2)
    assert classify(8) == ("diag", 3)
    assert classify(4)[0] == "sym"
    assert classify(5)[0] == "asym"
    with pytest.raises(DomainError):
        classify(0)


def test_basis_index_bounds():
    b = build_basis(3)
    with pytest.raises(DomainError):
        b[0]
    with pytest.raises(DomainError):
        b[9]


def test_basis_is_read_only_and_cached():
    b = build_basis(4)
    assert build_basis(4) is b
    with pytest.raises(ValueError):
        b.generators[0, 0, 0] = 5


def test_capacity_limit():
    with pytest.raises(CapacityError):
        build_basis(algebra.MAX_N + 1)
    with pytest.raises(DomainError):
        build_basis(1)


def test_commutator_shape_mismatch():
    with pytest.raises(ShapeError):
        commutator(np.eye(2), np.eye(3))


def test_pauli_commutator():
    b = build_basis(2)
    assert np.allclose(commutator(b[1], b[2]), 2j * b[3])


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.data())
def test_components_roundtrip(n, data):
    b = build_basis(n)
    c = np.array(data.draw(st.lists(st.floats(-5, 5), min_size=n * n - 1, max_size=n * n - 1)))
    m = np.einsum("a,aij->ij", c, b.generators)
    assert np.allclose(b.components(m), c, atol=1e-12)


@pytest.mark.parametrize("n", range(3, 9))
def test_identities_hold(n):
    results = verify_identities(n)
    assert len(results) >= 16
    worst = max(results, key=lambda r: r[1])
    assert worst[1] <= 1e-12, worst


def test_to_json_shape():
    d = build_basis(2).to_json()
    assert d["n"] == 2
    assert len(d["generators"]) == 3
