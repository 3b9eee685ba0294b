"""Representation construction, invariant forms, weights, stabilizers."""

import numpy as np
import pytest

from momentstab.groups import (
    AlgebraElement,
    GroupDescriptor,
    StructuralError,
    algebra_basis,
    random_algebra_element,
    random_unitary,
    exp_group,
)
from momentstab.reps import (
    act_algebra,
    act_group,
    algebra_action_matrix,
    build_representation,
    group_action_matrix,
    build_representation as build,
    stabilizer_check,
)

A1 = GroupDescriptor(("A1",))
A2 = GroupDescriptor(("A2",))
A1A1 = GroupDescriptor(("A1", "A1"))


def weight_multiset(rep):
    return sorted(w.flatten() for w in rep.weights)


def test_standard_a2_weights():
    rep = build(A2, ("standard", 0))
    assert weight_multiset(rep) == [(-1, 1), (0, -1), (1, 0)]


def test_dual_negates_weights():
    rep = build(A2, ("dual", ("standard", 0)))
    assert weight_multiset(rep) == sorted([(-1, 0), (1, -1), (0, 1)])


def test_adjoint_a1_weights():
    rep = build(A1, ("adjoint", 0))
    assert weight_multiset(rep) == [(-2,), (0,), (2,)]


def test_tensor_weights_pairwise_sums_with_zero_multiplicity():
    rep = build(A2, ("tensor", ("standard", 0), ("dual", ("standard", 0))))
    ws = weight_multiset(rep)
    assert len(ws) == 9
    assert ws.count((0, 0)) == 3


def test_sym2_a1_weights():
    rep = build(A1, ("sym", 2, ("standard", 0)))
    assert rep.dim == 3
    assert weight_multiset(rep) == [(-2,), (0,), (2,)]


def test_direct_sum_and_scale_form():
    rep = build(A1A1, ("scale_form", 0.5,
                       ("direct_sum", ("standard", 0), ("standard", 1))))
    assert rep.dim == 4
    assert np.allclose(rep.H, 0.5 * np.eye(4))
    base = build(A1A1, ("direct_sum", ("standard", 0), ("standard", 1)))
    for m, m0 in zip(rep.mats, base.mats):
        assert np.array_equal(m, m0)


def test_form_invariance_property():
    rng = np.random.default_rng(3)
    trees = [
        (A2, ("standard", 0)),
        (A2, ("adjoint", 0)),
        (A2, ("tensor", ("standard", 0), ("standard", 0))),
        (A1, ("sym", 3, ("standard", 0))),
        (A1A1, ("scale_form", 2.0, ("tensor", ("standard", 0), ("dual", ("standard", 1))))),
    ]
    for group, tree in trees:
        rep = build(group, tree)
        for _ in range(20):
            xi = random_algebra_element(group, rng)
            m = algebra_action_matrix(rep, xi)
            assert np.max(np.abs(m.conj().T @ rep.H + rep.H @ m)) < 1e-10


def test_weight_vectors_are_simultaneous_eigenvectors():
    rep = build(A2, ("tensor", ("standard", 0), ("standard", 0)))
    from momentstab.groups import cartan_basis
    carts = cartan_basis(A2)
    for j, w in enumerate(rep.weights):
        v = rep.weight_vectors[:, j]
        for c, coord in zip(carts, w.flatten()):
            m = algebra_action_matrix(rep, c)
            assert np.linalg.norm(m @ v - 1j * coord * v) < 1e-8


def test_group_action_homomorphism():
    rng = np.random.default_rng(4)
    rep = build(A2, ("tensor", ("standard", 0), ("dual", ("standard", 0))))
    for _ in range(20):
        g1 = random_unitary(A2, rng)
        g2 = random_unitary(A2, rng)
        v = rng.standard_normal(rep.dim) + 1j * rng.standard_normal(rep.dim)
        lhs = act_group(rep, g1, act_group(rep, g2, v))
        rhs = act_group(rep, g1 @ g2, v)
        assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_group_action_preserves_form():
    rng = np.random.default_rng(5)
    rep = build(A1, ("sym", 2, ("standard", 0)))
    for _ in range(10):
        k = random_unitary(A1, rng)
        g = group_action_matrix(rep, k)
        assert np.max(np.abs(g.conj().T @ rep.H @ g - rep.H)) < 1e-10


def test_act_group_matches_exp_series():
    rng = np.random.default_rng(6)
    rep = build(A1, ("standard", 0))
    xi = random_algebra_element(A1, rng)
    v = np.array([1.0, 2.0 - 1.0j])
    g = exp_group(xi)
    series = np.zeros(2, dtype=complex)
    term = v.copy()
    m = algebra_action_matrix(rep, xi)
    for k in range(40):
        series += term
        term = m @ term / (k + 1)
    assert np.max(np.abs(act_group(rep, g, v) - series)) < 1e-10


def test_stabilizer_check_product_nilpotents():
    # v = ((1,0),(1,0)) killed by both factorwise raising operators
    rep = build(A1A1, ("scale_form", 0.5,
                       ("direct_sum", ("standard", 0), ("standard", 1))))
    z = np.zeros((2, 2), dtype=complex)
    e = np.array([[0, 1], [0, 0]], dtype=complex)
    n1 = AlgebraElement(A1A1, (e, z), compact=False)
    n2 = AlgebraElement(A1A1, (z, e), compact=False)
    v = np.array([1, 0, 1, 0], dtype=complex)
    assert stabilizer_check(rep, v, [n1, n2]) < 1e-12


def test_stabilizer_check_a2_highest_weight_line():
    rep = build(A2, ("standard", 0))
    nils = []
    for (i, j) in [(0, 1), (0, 2), (1, 2)]:
        m = np.zeros((3, 3), dtype=complex)
        m[i, j] = 1.0
        nils.append(AlgebraElement(A2, (m,), compact=False))
    v = np.array([1, 0, 0], dtype=complex)
    assert stabilizer_check(rep, v, nils) < 1e-12


def test_stabilizer_check_detects_motion():
    rep = build(A1, ("standard", 0))
    low = AlgebraElement(A1, (np.array([[0, 0], [1, 0]], dtype=complex),),
                         compact=False)
    v = np.array([1, 0], dtype=complex)
    assert stabilizer_check(rep, v, [low]) > 0.5


def test_rejects_bad_trees():
    with pytest.raises(StructuralError):
        build(A1, ("standard", 3))
    with pytest.raises(StructuralError):
        build(A1, ("scale_form", -1.0, ("standard", 0)))
    with pytest.raises(StructuralError):
        build(A1, ("mystery",))
