"""Exact rational cones in flattened fundamental-weight coordinates.

Vectors live in the flattened coordinate space of a product group: one
rational coordinate per fundamental weight of each factor, factors in
order.  Everything here runs over ``fractions.Fraction`` with no floating
point anywhere, so membership answers and separation certificates can be
rechecked by exact arithmetic alone.  Certificates are ray-level: they are
unchanged under positive rescaling of the query point.
"""

from __future__ import annotations

import itertools
import numbers
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .groups import (
    DomainError,
    GroupDescriptor,
    StructuralError,
    Weight,
    dominant_representative,
)
from .reps import Representation

# products only; larger ambient ranks are out of scope
MAX_CONE_RANK = 4


class UnsupportedScenarioError(StructuralError):
    """A precondition the caller must assert was not asserted."""


# ---------------------------------------------------------------------------
# exact scalars and vectors

def _fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, numbers.Rational):
        return Fraction(x.numerator, x.denominator)
    raise StructuralError(
        f"cone arithmetic is exact; got {type(x).__name__} instead of a rational")


def _vector(value, rank: Optional[int] = None) -> tuple[Fraction, ...]:
    if isinstance(value, Weight):
        vec = tuple(Fraction(x) for x in value.flatten())
    else:
        vec = tuple(_fraction(x) for x in value)
    if rank is not None and len(vec) != rank:
        raise StructuralError(f"vector length {len(vec)} != cone rank {rank}")
    return vec


def _dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def _primitive(vec: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Rescale by a positive rational to the smallest integer vector."""
    den = 1
    for x in vec:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(Fraction(v) for v in ints)


# ---------------------------------------------------------------------------
# exact linear algebra (Gauss-Jordan over Fraction)

def _row_reduce(rows):
    mat = [list(r) for r in rows]
    pivots: list[int] = []
    ncols = len(mat[0]) if mat else 0
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        pv = mat[r][c]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def _rank_of(vectors) -> int:
    vectors = [v for v in vectors]
    if not vectors:
        return 0
    _, pivots = _row_reduce(vectors)
    return len(pivots)


def _solve_exact(cols, target):
    """x with sum_j x_j cols[j] = target, or None if inconsistent.

    cols must be linearly independent, so a solution is unique.
    """
    k = len(cols)
    aug = [[cols[j][i] for j in range(k)] + [target[i]]
           for i in range(len(target))]
    rref, pivots = _row_reduce(aug)
    if k in pivots:
        return None
    x = [Fraction(0)] * k
    for r, c in enumerate(pivots):
        x[c] = rref[r][k]
    return tuple(x)


def _kernel_vector(rows, dim: int):
    """Some nonzero solution c of rows @ c = 0, or None if only c = 0."""
    if not rows:
        return tuple(Fraction(1 if i == 0 else 0) for i in range(dim))
    rref, pivots = _row_reduce(rows)
    free = [c for c in range(dim) if c not in pivots]
    if not free:
        return None
    f = free[0]
    c = [Fraction(0)] * dim
    c[f] = Fraction(1)
    for r, p in enumerate(pivots):
        c[p] = -rref[r][f]
    return tuple(c)


def _independent_subset(vectors, d: int):
    picked: list = []
    for v in vectors:
        if len(picked) == d:
            break
        if _rank_of(picked + [v]) > len(picked):
            picked.append(v)
    return picked


def _project_onto_span(basis, w):
    """Orthogonal projection of w onto span(basis), exactly."""
    if not basis:
        return tuple(Fraction(0) for _ in w)
    gram_cols = [tuple(_dot(basis[i], basis[j]) for i in range(len(basis)))
                 for j in range(len(basis))]
    rhs = tuple(_dot(b, w) for b in basis)
    c = _solve_exact(gram_cols, rhs)
    return tuple(sum((cj * bj[i] for cj, bj in zip(c, basis)), Fraction(0))
                 for i in range(len(w)))


# ---------------------------------------------------------------------------
# cone types

@dataclass(frozen=True)
class RationalCone:
    """Convex cone spanned by finitely many nonzero rational generators."""

    generators: tuple
    rank: Optional[int] = None

    def __post_init__(self) -> None:
        gens = tuple(_vector(g) for g in self.generators)
        rank = self.rank
        if rank is None:
            if not gens:
                raise StructuralError("a cone without generators needs an explicit rank")
            rank = len(gens[0])
        if not isinstance(rank, numbers.Integral) or not 1 <= int(rank) <= MAX_CONE_RANK:
            raise StructuralError(f"cone rank must be in 1..{MAX_CONE_RANK}, got {rank}")
        rank = int(rank)
        for g in gens:
            if len(g) != rank:
                raise StructuralError("generators must all have the cone's rank")
            if all(x == 0 for x in g):
                raise StructuralError("cone generators must be nonzero")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "rank", rank)

    def span_rank(self) -> int:
        return _rank_of(self.generators)


@dataclass(frozen=True)
class ConeMembership:
    """Decision plus its exact certificate.

    Membership carries coefficients aligned with the cone's generators whose
    combination reconstructs the point exactly.  Non-membership carries a
    rational covector f with f.g >= 0 for every generator and f.point < 0.
    """

    contains: bool
    coefficients: Optional[tuple]
    separator: Optional[tuple]
    point: tuple

    def __bool__(self) -> bool:
        return self.contains

    def reconstruct(self, cone: "RationalCone") -> tuple:
        if self.coefficients is None:
            raise StructuralError("no coefficients on a non-membership result")
        return tuple(
            sum((a * g[i] for a, g in zip(self.coefficients, cone.generators)),
                Fraction(0))
            for i in range(cone.rank))


@dataclass(frozen=True)
class ObstructionCertificate:
    """Exact record of how candidate target rays relate to a weight cone.

    verdict "disjoint": no positive multiple of any target lies in the cone,
    and ``separators`` holds one Farkas covector per target.  verdict
    "intersecting": ``witness`` is (target index, generator coefficients)
    for one target that does lie in the cone.
    """

    cone: RationalCone
    target_points: tuple
    verdict: str
    separators: tuple = ()
    witness: Optional[tuple] = None

    def __post_init__(self) -> None:
        if self.verdict not in ("disjoint", "intersecting"):
            raise StructuralError(f"unknown verdict {self.verdict!r}")
        targets = tuple(_vector(t, self.cone.rank) for t in self.target_points)
        object.__setattr__(self, "target_points", targets)
        if self.verdict == "disjoint":
            seps = tuple(_vector(s, self.cone.rank) for s in self.separators)
            if len(seps) != len(targets):
                raise StructuralError("one separator per target required")
            object.__setattr__(self, "separators", seps)
        elif self.witness is None:
            raise StructuralError("intersecting verdict needs a witness")

    def verify(self) -> bool:
        """Recheck the stored certificate and the verdict, exactly."""
        if self.verdict == "disjoint":
            for t, f in zip(self.target_points, self.separators):
                if any(_dot(f, g) < 0 for g in self.cone.generators):
                    return False
                if _dot(f, t) >= 0:
                    return False
            return all(not cone_contains(self.cone, t).contains
                       for t in self.target_points)
        i, coeffs = self.witness
        if any(a < 0 for a in coeffs) or len(coeffs) != len(self.cone.generators):
            return False
        target = self.target_points[i]
        combo = tuple(
            sum((a * g[j] for a, g in zip(coeffs, self.cone.generators)), Fraction(0))
            for j in range(self.cone.rank))
        return combo == target


# ---------------------------------------------------------------------------
# membership and separation

def cone_contains(cone: RationalCone, point) -> ConeMembership:
    """Exact membership of point in cone, with certificate either way."""
    w = _vector(point, cone.rank)
    gens = cone.generators
    if all(x == 0 for x in w):
        return ConeMembership(True, tuple(Fraction(0) for _ in gens), None, w)
    d = cone.span_rank()
    # Caratheodory: a member is a nonnegative combination of some linearly
    # independent subset of generators, so scanning those subsets is complete.
    for size in range(1, d + 1):
        for sub in itertools.combinations(range(len(gens)), size):
            cols = [gens[i] for i in sub]
            if _rank_of(cols) != size:
                continue
            x = _solve_exact(cols, w)
            if x is None or any(a < 0 for a in x):
                continue
            coeffs = [Fraction(0)] * len(gens)
            for i, a in zip(sub, x):
                coeffs[i] = a
            return ConeMembership(True, tuple(coeffs), None, w)
    return ConeMembership(False, None, _separator(gens, d, w), w)


def _separator(gens, d: int, w):
    # outside the linear span of the generators the orthogonal residual
    # separates: it kills every generator and pairs negatively with w
    if _rank_of(list(gens) + [w]) > d:
        basis = _independent_subset(gens, d)
        proj = _project_onto_span(basis, w)
        return _primitive(tuple(p - x for p, x in zip(proj, w)))
    # inside the span, a non-member must violate some facet inequality
    basis = _independent_subset(gens, d)
    for sub in itertools.combinations(range(len(gens)), d - 1):
        cols = [gens[i] for i in sub]
        if _rank_of(cols) != d - 1:
            continue
        rows = [[_dot(t, b) for b in basis] for t in cols]
        c = _kernel_vector(rows, d)
        if c is None:
            continue
        f = tuple(sum((cj * bj[i] for cj, bj in zip(c, basis)), Fraction(0))
                  for i in range(len(w)))
        dots = [_dot(f, g) for g in gens]
        if all(x <= 0 for x in dots):
            f = tuple(-x for x in f)
            dots = [-x for x in dots]
        if any(x < 0 for x in dots):
            continue
        if _dot(f, w) < 0:
            return _primitive(f)
    # unreachable for cones generated inside the dominant chamber
    raise RuntimeError("membership failed but no separating facet was found")


# ---------------------------------------------------------------------------
# constructors

def cone_from_highest_weights(lams, group: Optional[GroupDescriptor] = None) -> RationalCone:
    """Cone spanned by dominant weights, in flattened coordinates.

    The empty list gives the zero cone, which then needs the group passed
    explicitly to fix the ambient rank.  A non-dominant weight is a domain
    error, not something to be silently reflected into the chamber.
    """
    lams = list(lams)
    for lam in lams:
        if not isinstance(lam, Weight):
            raise StructuralError("highest weights must be Weight instances")
    if group is None:
        if not lams:
            raise StructuralError("an empty weight list needs an explicit group")
        group = lams[0].group
    for lam in lams:
        if lam.group != group:
            raise StructuralError("highest weights from different groups")
        if not lam.is_dominant():
            raise DomainError(f"non-dominant highest weight {lam.coords}")
    rank = sum(group.ranks)
    # the zero weight spans nothing; dropping it leaves the same cone
    gens = tuple(lam.flatten() for lam in lams if any(lam.flatten()))
    return RationalCone(gens, rank)


def grosshans_chamber_cone(group: GroupDescriptor) -> RationalCone:
    """Cone of the full dominant chamber: all fundamental weights."""
    rank = sum(group.ranks)
    gens = tuple(
        tuple(Fraction(1 if i == j else 0) for i in range(rank))
        for j in range(rank))
    return RationalCone(gens, rank)


def projective_dominant_targets(rep: Representation, *,
                                transitive: bool = False) -> tuple:
    """Dominant representatives of the negated weights of rep, deduplicated.

    These are the rays the projective moment image can reach when the
    compact group acts transitively on the whole projective space; that
    transitivity cannot be checked cheaply here, so the caller must assert
    it.  Coordinates are exact fundamental-weight coordinates; on a weight
    line the projective moment value is exactly the weight's matrix, so no
    rescaling is involved.
    """
    if not transitive:
        raise UnsupportedScenarioError(
            "pass transitive=True to assert the compact group is transitive "
            "on the projective space; without that the target list is meaningless")
    seen: list[tuple[Fraction, ...]] = []
    for w in rep.weights:
        dom = dominant_representative(w.negate()).flatten()
        vec = tuple(Fraction(x) for x in dom)
        if vec not in seen:
            seen.append(vec)
    return tuple(sorted(seen))


def zero_fiber_obstruction(cone_v, targets) -> Optional[ObstructionCertificate]:
    """Certificate that no target ray meets the cone, or None.

    Membership of a ray is membership of any representative point, because
    cones are stable under positive scaling; so each target is tested
    directly and the per-target Farkas separators are kept as the
    certificate's evidence.  An empty target list obstructs nothing.
    """
    targets = [_vector(t, cone_v.rank) for t in targets]
    if not targets:
        return None
    seps = []
    for t in targets:
        m = cone_contains(cone_v, t)
        if m.contains:
            return None
        seps.append(m.separator)
    return ObstructionCertificate(cone_v, tuple(targets), "disjoint", tuple(seps))


__all__ = [
    "MAX_CONE_RANK",
    "UnsupportedScenarioError",
    "RationalCone",
    "ConeMembership",
    "ObstructionCertificate",
    "cone_contains",
    "cone_from_highest_weights",
    "grosshans_chamber_cone",
    "projective_dominant_targets",
    "zero_fiber_obstruction",
]
