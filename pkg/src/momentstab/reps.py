"""Finite-dimensional representations built from a small construction tree.

A representation stores, for every compact-algebra basis element, its action
matrix, together with an invariant positive-definite Hermitian form H and the
weight decomposition.  Trees are nested tuples:

    ("standard", factor)
    ("dual", tree)
    ("adjoint", factor)
    ("sym", k, tree)
    ("tensor", tree, tree)
    ("direct_sum", tree, tree, ...)
    ("scale_form", c, tree)

There is deliberately no general highest-weight module constructor; scenarios
that would need one carry their weights as exact cone data instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations

import numpy as np
import scipy.linalg

from .groups import (
    AlgebraElement,
    GroupDescriptor,
    GroupElement,
    StructuralError,
    Weight,
    algebra_basis,
    cartan_basis,
    exp_group,
)

_INVARIANCE_TOL = 1e-10
_EIGEN_TOL = 1e-8


@dataclass(frozen=True)
class Representation:
    group: GroupDescriptor
    tree: tuple
    dim: int
    mats: tuple[np.ndarray, ...]        # one per algebra_basis(group) element
    hermitian_form: np.ndarray
    weights: tuple[Weight, ...]
    weight_vectors: np.ndarray          # columns, H-orthonormal

    @property
    def H(self) -> np.ndarray:
        return self.hermitian_form


@dataclass(frozen=True)
class VectorPoint:
    rep: Representation
    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=complex).reshape(-1)
        if c.shape[0] != self.rep.dim:
            raise StructuralError("vector length does not match representation")
        object.__setattr__(self, "coords", c)


@dataclass(frozen=True)
class ProjectivePoint:
    rep: Representation
    coords: np.ndarray   # homogeneous, nonzero

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=complex).reshape(-1)
        if c.shape[0] != self.rep.dim:
            raise StructuralError("homogeneous length does not match representation")
        if np.linalg.norm(c) == 0.0:
            raise StructuralError("projective point needs a nonzero representative")
        object.__setattr__(self, "coords", c)

    def unit_representative(self) -> np.ndarray:
        """Representative with unit H-norm."""
        H = self.rep.H
        s = np.sqrt((self.coords.conj() @ H @ self.coords).real)
        return self.coords / s


def projective_distance(u: np.ndarray, w: np.ndarray) -> float:
    """Chordal distance between lines (sine of the angle), 0 iff equal.

    Computed from the orthogonal residual rather than sqrt(1 - cos^2),
    which loses half the significant digits near zero.
    """
    u = np.asarray(u, dtype=complex).reshape(-1)
    w = np.asarray(w, dtype=complex).reshape(-1)
    u = u / np.linalg.norm(u)
    w = w / np.linalg.norm(w)
    resid = w - u * np.vdot(u, w)
    return float(min(1.0, np.linalg.norm(resid)))


# ---------------------------------------------------------------------------
# construction

def _sl_basis(n: int) -> list[np.ndarray]:
    out = []
    for i in range(n):
        for j in range(n):
            if i != j:
                E = np.zeros((n, n), dtype=complex)
                E[i, j] = 1.0
                out.append(E)
    for l in range(n - 1):
        h = np.zeros((n, n), dtype=complex)
        h[l, l], h[l + 1, l + 1] = 1.0, -1.0
        out.append(h)
    return out


def _adjoint_data(n: int):
    basis = _sl_basis(n)
    d = len(basis)
    flat = np.stack([b.reshape(-1) for b in basis], axis=1)
    pinv = np.linalg.pinv(flat)

    def ad_matrix(x: np.ndarray) -> np.ndarray:
        cols = [(x @ b - b @ x).reshape(-1) for b in basis]
        return pinv @ np.stack(cols, axis=1)

    H = np.empty((d, d), dtype=complex)
    for l in range(d):
        for m in range(d):
            H[l, m] = np.trace(basis[m] @ basis[l].conj().T)
    return basis, ad_matrix, H


def _sym_embedding(dim: int, k: int) -> np.ndarray:
    """Columns: unnormalized symmetrized tensors, one per multiset."""
    multisets = list(combinations_with_replacement(range(dim), k))
    E = np.zeros((dim ** k, len(multisets)))
    for col, I in enumerate(multisets):
        for p in set(permutations(I)):
            idx = 0
            for j in p:
                idx = idx * dim + j
            E[idx, col] += 1.0
    return E


def _build(group: GroupDescriptor, tree: tuple, basis: list[AlgebraElement]):
    """Return (mats per basis element, H, group-action closure)."""
    op = tree[0]
    sizes = group.block_sizes

    if op == "standard":
        fi = tree[1]
        if not (0 <= fi < len(sizes)):
            raise StructuralError(f"no factor {fi}")
        mats = [xi.blocks[fi] for xi in basis]
        H = np.eye(sizes[fi], dtype=complex)
        return mats, H, lambda g: g.blocks[fi]

    if op == "dual":
        mats0, H0, act0 = _build(group, tree[1], basis)
        mats = [-m.T for m in mats0]
        H = np.linalg.inv(H0).conj()
        return mats, H, lambda g: np.linalg.inv(act0(g)).T

    if op == "adjoint":
        fi = tree[1]
        sl_basis, ad_matrix, H = _adjoint_data(sizes[fi])
        mats = [ad_matrix(xi.blocks[fi]) for xi in basis]
        flat = np.stack([b.reshape(-1) for b in sl_basis], axis=1)
        pinv = np.linalg.pinv(flat)

        def act(g: GroupElement) -> np.ndarray:
            gb = g.blocks[fi]
            gbinv = np.linalg.inv(gb)
            cols = [(gb @ b @ gbinv).reshape(-1) for b in sl_basis]
            return pinv @ np.stack(cols, axis=1)

        return mats, H, act

    if op == "sym":
        k, sub = tree[1], tree[2]
        if not (isinstance(k, int) and k >= 1):
            raise StructuralError("symmetric power needs integer k >= 1")
        mats0, H0, act0 = _build(group, sub, basis)
        d0 = H0.shape[0]
        E = _sym_embedding(d0, k)
        Epinv = np.linalg.pinv(E)

        def lift_alg(m):
            total = np.zeros((d0 ** k, d0 ** k), dtype=complex)
            for pos in range(k):
                term = np.eye(1, dtype=complex)
                for q in range(k):
                    term = np.kron(term, m if q == pos else np.eye(d0, dtype=complex))
                total += term
            return total

        def lift_grp(m):
            out = np.eye(1, dtype=complex)
            for _ in range(k):
                out = np.kron(out, m)
            return out

        Hk = np.eye(1, dtype=complex)
        for _ in range(k):
            Hk = np.kron(Hk, H0)
        mats = [Epinv @ lift_alg(m) @ E for m in mats0]
        H = E.conj().T @ Hk @ E
        return mats, H, lambda g: Epinv @ lift_grp(act0(g)) @ E

    if op == "tensor":
        mats_a, Ha, act_a = _build(group, tree[1], basis)
        mats_b, Hb, act_b = _build(group, tree[2], basis)
        da, db = Ha.shape[0], Hb.shape[0]
        Ia, Ib = np.eye(da, dtype=complex), np.eye(db, dtype=complex)
        mats = [np.kron(ma, Ib) + np.kron(Ia, mb)
                for ma, mb in zip(mats_a, mats_b)]
        return mats, np.kron(Ha, Hb), lambda g: np.kron(act_a(g), act_b(g))

    if op == "direct_sum":
        parts = [_build(group, sub, basis) for sub in tree[1:]]
        if not parts:
            raise StructuralError("direct sum needs at least one part")
        mats = [scipy.linalg.block_diag(*[p[0][i] for p in parts])
                for i in range(len(basis))]
        H = scipy.linalg.block_diag(*[p[1] for p in parts])
        return mats, H, lambda g: scipy.linalg.block_diag(*[p[2](g) for p in parts])

    if op == "scale_form":
        c, sub = tree[1], tree[2]
        if not (np.isreal(c) and float(c) > 0):
            raise StructuralError("form scale must be a positive real")
        mats0, H0, act0 = _build(group, sub, basis)
        return mats0, float(c) * H0, act0

    raise StructuralError(f"unknown construction op {op!r}")


def _weight_decomposition(group: GroupDescriptor, mats_by_basis, H,
                          basis: list[AlgebraElement]):
    """Simultaneous eigen-decomposition of the Cartan generators."""
    cart = cartan_basis(group)
    # locate each Cartan generator in the full basis to reuse its matrix
    idx = []
    for c in cart:
        for i, b in enumerate(basis):
            if all(np.array_equal(x, y) for x, y in zip(c.blocks, b.blocks)):
                idx.append(i)
                break
        else:
            raise StructuralError("cartan generator missing from basis")
    A = [H @ (-1j * mats_by_basis[i]) for i in idx]   # Hermitian w.r.t. H
    # rationally independent mixing separates distinct integer tuples
    primes = [2.0, 3.0, 5.0, 7.0]
    mix = sum(np.sqrt(p) * a for p, a in zip(primes, A))
    _, vecs = scipy.linalg.eigh(mix, H)
    coords = []
    for j in range(vecs.shape[1]):
        v = vecs[:, j]
        vals = [float((v.conj() @ a @ v).real) for a in A]
        ints = [round(x) for x in vals]
        if any(abs(x - i) > _EIGEN_TOL for x, i in zip(vals, ints)):
            raise StructuralError(f"non-integral weight coordinates {vals}")
        coords.append(ints)
    # residual check: each vector is a simultaneous eigenvector
    for j, cs in enumerate(coords):
        v = vecs[:, j]
        for a, c in zip(A, cs):
            r = np.linalg.norm(a @ v - c * (H @ v))
            if r > _EIGEN_TOL:
                raise StructuralError("weight vector residual too large")
    ranks = group.ranks
    weights = []
    for cs in coords:
        per, pos = [], 0
        for r in ranks:
            per.append(tuple(cs[pos:pos + r]))
            pos += r
        weights.append(Weight(group, tuple(per)))
    return tuple(weights), vecs


def build_representation(group: GroupDescriptor, tree: tuple) -> Representation:
    basis = algebra_basis(group)
    mats, H, _ = _build(group, tuple_tree(tree), basis)
    H = np.asarray(H, dtype=complex)
    if np.max(np.abs(H - H.conj().T)) > _INVARIANCE_TOL:
        raise StructuralError("form is not Hermitian")
    if np.min(scipy.linalg.eigvalsh(H)) <= 0:
        raise StructuralError("form is not positive definite")
    for m in mats:
        r = np.max(np.abs(m.conj().T @ H + H @ m))
        if r > _INVARIANCE_TOL:
            raise StructuralError(f"action does not preserve the form ({r:.2e})")
    weights, vecs = _weight_decomposition(group, mats, H, basis)
    return Representation(group=group, tree=tuple_tree(tree), dim=H.shape[0],
                          mats=tuple(np.asarray(m, dtype=complex) for m in mats),
                          hermitian_form=H, weights=weights, weight_vectors=vecs)


def tuple_tree(tree) -> tuple:
    """Normalize a construction tree to nested tuples (lists allowed on input)."""
    if isinstance(tree, (list, tuple)):
        return tuple(tuple_tree(t) if isinstance(t, (list, tuple)) else t
                     for t in tree)
    raise StructuralError("construction tree must be a sequence")


# ---------------------------------------------------------------------------
# actions

_DECOMP_CACHE: dict[GroupDescriptor, tuple] = {}


def _algebra_decomposer(group: GroupDescriptor):
    """Pseudo-inverse mapping block matrices to complexified basis coefficients."""
    if group not in _DECOMP_CACHE:
        basis = algebra_basis(group)
        flat = np.stack(
            [np.concatenate([b.reshape(-1) for b in e.blocks]) for e in basis],
            axis=1)
        _DECOMP_CACHE[group] = (basis, flat, np.linalg.pinv(flat))
    return _DECOMP_CACHE[group]


def algebra_coefficients(xi: AlgebraElement) -> np.ndarray:
    """Complex coefficients of xi over the compact basis."""
    _, flat, pinv = _algebra_decomposer(xi.group)
    vec = np.concatenate([b.reshape(-1) for b in xi.blocks])
    coeffs = pinv @ vec
    if np.max(np.abs(flat @ coeffs - vec)) > 1e-9:
        raise StructuralError("element does not lie in the complexified algebra")
    return coeffs


def algebra_action_matrix(rep: Representation, xi: AlgebraElement) -> np.ndarray:
    coeffs = algebra_coefficients(xi)
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    for c, m in zip(coeffs, rep.mats):
        out += c * m
    return out


def act_algebra(rep: Representation, xi: AlgebraElement, v: np.ndarray) -> np.ndarray:
    return algebra_action_matrix(rep, xi) @ np.asarray(v, dtype=complex)


_ACTION_CACHE: dict[int, tuple[Representation, object]] = {}


def _group_actor(rep: Representation):
    hit = _ACTION_CACHE.get(id(rep))
    if hit is not None and hit[0] is rep:
        return hit[1]
    basis = algebra_basis(rep.group)
    _, _, act = _build(rep.group, rep.tree, basis)
    _ACTION_CACHE[id(rep)] = (rep, act)
    return act


def group_action_matrix(rep: Representation, g: GroupElement) -> np.ndarray:
    return _group_actor(rep)(g)


def act_group(rep: Representation, g: GroupElement, v: np.ndarray,
              projective: bool = False) -> np.ndarray:
    out = group_action_matrix(rep, g) @ np.asarray(v, dtype=complex)
    if projective:
        out = out / np.linalg.norm(out)
    return out


def stabilizer_check(rep: Representation, v: np.ndarray,
                     n_basis: list[AlgebraElement],
                     times: tuple[float, ...] = (0.5, 1.0, 2.0)) -> float:
    """Largest residual certifying that v is fixed by the given nilpotents.

    Checks the infinitesimal action and, for each t in `times`, the action of
    exp(t xi) (projectively scale-free: compares against v itself since the
    nilpotent orbit map is affine in t for a fixed vector).
    """
    v = np.asarray(v, dtype=complex)
    worst = 0.0
    for xi in n_basis:
        m = algebra_action_matrix(rep, xi)
        worst = max(worst, float(np.linalg.norm(m @ v)))
        for t in times:
            g = exp_group(xi.scale(t))
            gv = act_group(rep, g, v)
            worst = max(worst, float(np.linalg.norm(gv - v)))
    return worst
