"""Compact groups of type A1/A2, their algebras, coadjoint vectors and weights.

Everything is stored blockwise: a group with factors ("A1", "A2") acts through
SU(2) x SU(3) blocks of sizes 2 and 3.  The compact algebra consists of
anti-Hermitian traceless blocks; coadjoint vectors are realized as Hermitian
traceless blocks paired with the algebra by

    trace_pairing(xi, beta) = sum_b Re tr(beta_b @ (-1j * xi_b)).

Weights live in fundamental-weight coordinates, one integer tuple per factor
(length 1 for A1, length 2 for A2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np
import scipy.linalg

ATOL_STRUCT = 1e-12   # structural validation (traceless, anti-Hermitian)
ATOL_NUM = 1e-10      # numerical identities (det 1, Ad-invariance, ...)

_FACTOR_SIZES = {"A1": 2, "A2": 3}
_FACTOR_RANKS = {"A1": 1, "A2": 2}


class StructuralError(ValueError):
    """Input violates a structural contract (shape, flag, integrality)."""


class DomainError(ValueError):
    """Input is structurally fine but outside an operation's domain."""


@dataclass(frozen=True)
class GroupDescriptor:
    """An ordered product of A1/A2 factors."""

    factors: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.factors:
            raise StructuralError("group needs at least one factor")
        for f in self.factors:
            if f not in _FACTOR_SIZES:
                raise StructuralError(f"unknown factor type {f!r}")

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(_FACTOR_SIZES[f] for f in self.factors)

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(_FACTOR_RANKS[f] for f in self.factors)

    @property
    def rank(self) -> int:
        return sum(self.ranks)

    @property
    def dim_compact(self) -> int:
        return sum(n * n - 1 for n in self.block_sizes)


def _check_blocks(group: GroupDescriptor, blocks) -> tuple[np.ndarray, ...]:
    sizes = group.block_sizes
    if len(blocks) != len(sizes):
        raise StructuralError(
            f"expected {len(sizes)} blocks, got {len(blocks)}")
    out = []
    for b, n in zip(blocks, sizes):
        arr = np.asarray(b, dtype=complex)
        if arr.shape != (n, n):
            raise StructuralError(f"block shape {arr.shape} != ({n}, {n})")
        out.append(arr)
    return tuple(out)


@dataclass(frozen=True)
class AlgebraElement:
    """Blockwise traceless matrix; flag 'compact' means anti-Hermitian blocks."""

    group: GroupDescriptor
    blocks: tuple[np.ndarray, ...]
    compact: bool = True

    def __post_init__(self) -> None:
        blocks = _check_blocks(self.group, self.blocks)
        object.__setattr__(self, "blocks", blocks)
        for b in blocks:
            if abs(np.trace(b)) > ATOL_STRUCT:
                raise StructuralError("algebra block is not traceless")
            if self.compact and np.max(np.abs(b + b.conj().T)) > ATOL_STRUCT:
                raise StructuralError("compact-flagged block is not anti-Hermitian")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        _same_group(self.group, other.group)
        return AlgebraElement(
            self.group,
            tuple(a + b for a, b in zip(self.blocks, other.blocks)),
            compact=self.compact and other.compact,
        )

    def scale(self, c: complex) -> "AlgebraElement":
        keep = self.compact and (np.imag(c) == 0)
        return AlgebraElement(self.group, tuple(c * b for b in self.blocks),
                              compact=keep)

    def norm(self) -> float:
        return float(np.sqrt(sum(
            np.sum(np.abs(b) ** 2) for b in self.blocks) / 2.0))


@dataclass(frozen=True)
class CoadjointVector:
    """Blockwise Hermitian traceless matrix, paired with the algebra by trace."""

    group: GroupDescriptor
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        blocks = _check_blocks(self.group, self.blocks)
        object.__setattr__(self, "blocks", blocks)
        for b in blocks:
            if abs(np.trace(b)) > 1e-10:
                raise StructuralError("coadjoint block is not traceless")
            if np.max(np.abs(b - b.conj().T)) > 1e-10:
                raise StructuralError("coadjoint block is not Hermitian")

    def __add__(self, other: "CoadjointVector") -> "CoadjointVector":
        _same_group(self.group, other.group)
        return CoadjointVector(
            self.group,
            tuple(_hermitize(a + b) for a, b in zip(self.blocks, other.blocks)))

    def scale(self, c: float) -> "CoadjointVector":
        return CoadjointVector(self.group, tuple(float(c) * b for b in self.blocks))

    def norm(self) -> float:
        """Trace-form norm scaled so that ||diag(a, -a)|| = |a|."""
        return float(np.sqrt(sum(
            np.sum(np.abs(b) ** 2).real for b in self.blocks) / 2.0))

    def max_entry(self) -> float:
        return float(max(np.max(np.abs(b)) for b in self.blocks))


@dataclass(frozen=True)
class GroupElement:
    """Blockwise determinant-one matrix."""

    group: GroupDescriptor
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        blocks = _check_blocks(self.group, self.blocks)
        object.__setattr__(self, "blocks", blocks)
        for b in blocks:
            if abs(np.linalg.det(b) - 1.0) > ATOL_NUM:
                raise StructuralError("group block determinant is not 1")

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        _same_group(self.group, other.group)
        return GroupElement(self.group, tuple(
            a @ b for a, b in zip(self.blocks, other.blocks)))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.group, tuple(
            np.linalg.inv(b) for b in self.blocks))

    def is_unitary(self, atol: float = 1e-8) -> bool:
        return all(
            np.max(np.abs(b @ b.conj().T - np.eye(b.shape[0]))) <= atol
            for b in self.blocks)


def identity_element(group: GroupDescriptor) -> GroupElement:
    return GroupElement(group, tuple(np.eye(n, dtype=complex)
                                     for n in group.block_sizes))


@dataclass(frozen=True)
class Weight:
    """Fundamental-weight coordinates, one integer tuple per factor."""

    group: GroupDescriptor
    coords: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        ranks = self.group.ranks
        if len(self.coords) != len(ranks):
            raise StructuralError("one coordinate tuple per factor required")
        coords = []
        for c, r in zip(self.coords, ranks):
            c = tuple(c)
            if len(c) != r:
                raise StructuralError(f"factor coordinate length {len(c)} != rank {r}")
            for x in c:
                if not isinstance(x, (int, np.integer)):
                    raise StructuralError("weight coordinates must be integers")
            coords.append(tuple(int(x) for x in c))
        object.__setattr__(self, "coords", tuple(coords))

    def flatten(self) -> tuple[int, ...]:
        return tuple(x for c in self.coords for x in c)

    def is_dominant(self) -> bool:
        return all(x >= 0 for x in self.flatten())

    def negate(self) -> "Weight":
        return Weight(self.group, tuple(tuple(-x for x in c) for c in self.coords))


def _same_group(a: GroupDescriptor, b: GroupDescriptor) -> None:
    if a != b:
        raise StructuralError("group descriptors do not match")


def _hermitize(b: np.ndarray) -> np.ndarray:
    # kill roundoff drift so repeated sums stay valid CoadjointVectors
    b = 0.5 * (b + b.conj().T)
    n = b.shape[0]
    return b - (np.trace(b).real / n) * np.eye(n)


# ---------------------------------------------------------------------------
# bases

def _su_basis(n: int) -> list[np.ndarray]:
    """Anti-Hermitian traceless basis of su(n): rotations, boosts*i, coroots."""
    out = []
    for j in range(n):
        for k in range(j + 1, n):
            a = np.zeros((n, n), dtype=complex)
            a[j, k], a[k, j] = 1.0, -1.0
            out.append(a)
            b = np.zeros((n, n), dtype=complex)
            b[j, k] = b[k, j] = 1.0j
            out.append(b)
    for l in range(n - 1):
        h = np.zeros((n, n), dtype=complex)
        h[l, l], h[l + 1, l + 1] = 1.0j, -1.0j
        out.append(h)
    return out


def _hermitian_on_basis(n: int) -> list[np.ndarray]:
    """Trace-orthonormal basis of Hermitian traceless n x n matrices."""
    out = []
    s = 1.0 / np.sqrt(2.0)
    for j in range(n):
        for k in range(j + 1, n):
            a = np.zeros((n, n), dtype=complex)
            a[j, k] = a[k, j] = s
            out.append(a)
            b = np.zeros((n, n), dtype=complex)
            b[j, k], b[k, j] = -1.0j * s, 1.0j * s
            out.append(b)
    for l in range(1, n):
        d = np.zeros(n)
        d[:l] = 1.0
        d[l] = -float(l)
        d /= np.linalg.norm(d)
        out.append(np.diag(d).astype(complex))
    return out


def algebra_basis(group: GroupDescriptor) -> list[AlgebraElement]:
    """Basis of the compact algebra, factor blocks embedded at their slot."""
    out = []
    for fi, n in enumerate(group.block_sizes):
        for gen in _su_basis(n):
            blocks = [np.zeros((m, m), dtype=complex) for m in group.block_sizes]
            blocks[fi] = gen
            out.append(AlgebraElement(group, tuple(blocks)))
    return out


def cartan_basis(group: GroupDescriptor) -> list[AlgebraElement]:
    """Coroot generators i*diag(..,1,-1,..), one per simple root, all factors."""
    out = []
    for fi, n in enumerate(group.block_sizes):
        for l in range(n - 1):
            blocks = [np.zeros((m, m), dtype=complex) for m in group.block_sizes]
            h = np.zeros((n, n), dtype=complex)
            h[l, l], h[l + 1, l + 1] = 1.0j, -1.0j
            blocks[fi] = h
            out.append(AlgebraElement(group, tuple(blocks)))
    return out


def hermitian_on_bases(group: GroupDescriptor) -> list[list[np.ndarray]]:
    return [_hermitian_on_basis(n) for n in group.block_sizes]


# ---------------------------------------------------------------------------
# core operations

def trace_pairing(xi: AlgebraElement, beta: CoadjointVector) -> float:
    """<beta, xi> = sum over blocks of Re tr(beta_b @ (-i xi_b))."""
    _same_group(xi.group, beta.group)
    total = 0.0
    for xb, bb in zip(xi.blocks, beta.blocks):
        total += float(np.trace(bb @ (-1j * xb)).real)
    return total


def exp_group(xi: AlgebraElement) -> GroupElement:
    """Blockwise matrix exponential; traceless input gives determinant one."""
    return GroupElement(xi.group, tuple(scipy.linalg.expm(b) for b in xi.blocks))


def coadjoint_action(k: GroupElement, beta: CoadjointVector) -> CoadjointVector:
    """Ad*(k) beta = k beta k*.  Requires a unitary group element."""
    _same_group(k.group, beta.group)
    if not k.is_unitary():
        raise StructuralError("coadjoint action needs a unitary group element")
    return CoadjointVector(k.group, tuple(
        _hermitize(kb @ bb @ kb.conj().T) for kb, bb in zip(k.blocks, beta.blocks)))


def coadjoint_from_functional(group: GroupDescriptor, func) -> CoadjointVector:
    """Assemble the Hermitian block matrix of a linear functional on the algebra.

    `func` maps an AlgebraElement to a real number; reconstruction runs over a
    trace-orthonormal Hermitian basis F via beta = sum func(iF) F.
    """
    blocks = []
    sizes = group.block_sizes
    for fi, basis in enumerate(hermitian_on_bases(group)):
        acc = np.zeros((sizes[fi], sizes[fi]), dtype=complex)
        for F in basis:
            emb = [np.zeros((m, m), dtype=complex) for m in sizes]
            emb[fi] = 1.0j * F
            acc += func(AlgebraElement(group, tuple(emb))) * F
        blocks.append(acc)
    return CoadjointVector(group, tuple(blocks))


# ---------------------------------------------------------------------------
# Weyl chamber utilities

def _a2_to_epsilon(a, b):
    # lambda = a w1 + b w2 in the sum-zero hyperplane of Q^3
    return (Fraction(2 * a + b, 3), Fraction(b - a, 3), Fraction(-a - 2 * b, 3))


def _a2_from_epsilon(e):
    return (e[0] - e[1], e[1] - e[2])


def _factor_orbit(factor: str, coords) -> list[tuple]:
    if factor == "A1":
        (m,) = coords
        return [(m,), (-m,)]
    eps = _a2_to_epsilon(*coords)
    return [_a2_from_epsilon(p) for p in permutations(eps)]


def _factor_dominant(factor: str, coords) -> tuple:
    if factor == "A1":
        (m,) = coords
        return (abs(m),)
    eps = sorted(_a2_to_epsilon(*coords), reverse=True)
    return _a2_from_epsilon(eps)


def weyl_orbit(w: Weight) -> set[tuple[tuple[int, ...], ...]]:
    """All Weyl images of a weight (product over factors; 2 or 6 per factor)."""
    per_factor = [
        [tuple(int(x) for x in img) for img in _factor_orbit(f, c)]
        for f, c in zip(w.group.factors, w.coords)
    ]
    orbit: set[tuple[tuple[int, ...], ...]] = set()

    def rec(i, acc):
        if i == len(per_factor):
            orbit.add(tuple(acc))
            return
        for img in per_factor[i]:
            rec(i + 1, acc + [img])

    rec(0, [])
    return orbit


def dominant_representative(value):
    """Weyl-dominant representative; accepts Weight, rational coordinate
    tuples (one tuple per factor, paired with a group), or a CoadjointVector
    with diagonal blocks.  Returns the same type as the input."""
    if isinstance(value, Weight):
        coords = tuple(
            tuple(int(x) for x in _factor_dominant(f, c))
            for f, c in zip(value.group.factors, value.coords))
        return Weight(value.group, coords)
    if isinstance(value, CoadjointVector):
        blocks = []
        for b in value.blocks:
            off = b - np.diag(np.diag(b))
            if np.max(np.abs(off)) > ATOL_STRUCT:
                raise StructuralError(
                    "dominant representative of a coadjoint vector needs diagonal blocks")
            d = np.sort(np.diag(b).real)[::-1]
            blocks.append(np.diag(d).astype(complex))
        return CoadjointVector(value.group, tuple(blocks))
    raise StructuralError(f"unsupported input {type(value).__name__}")


def dominant_coords(group: GroupDescriptor, coords) -> tuple[tuple, ...]:
    """Dominant representative for exact rational per-factor coordinates."""
    return tuple(
        tuple(Fraction(x) for x in _factor_dominant(f, tuple(Fraction(x) for x in c)))
        for f, c in zip(group.factors, coords))


def is_chamber_interior(value) -> bool:
    """Strictly inside the dominant chamber: every coordinate > 0 (exact)."""
    if isinstance(value, Weight):
        return all(x > 0 for x in value.flatten())
    return all(Fraction(x) > 0 for c in value for x in c)


# ---------------------------------------------------------------------------
# sampling helpers (seeded use only)

def random_algebra_element(group: GroupDescriptor, rng: np.random.Generator,
                           norm: float = 1.0, compact: bool = True) -> AlgebraElement:
    basis = algebra_basis(group)
    if compact:
        coeffs = rng.standard_normal(len(basis))
    else:
        coeffs = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))
    blocks = [np.zeros((n, n), dtype=complex) for n in group.block_sizes]
    for c, e in zip(coeffs, basis):
        for i, b in enumerate(e.blocks):
            blocks[i] = blocks[i] + c * b
    elem = AlgebraElement(group, tuple(blocks), compact=compact)
    cur = elem.norm()
    if cur == 0.0:
        return elem
    return elem.scale(norm / cur)


def random_unitary(group: GroupDescriptor, rng: np.random.Generator,
                   scale: float = 1.0) -> GroupElement:
    return exp_group(random_algebra_element(group, rng, norm=scale, compact=True))
