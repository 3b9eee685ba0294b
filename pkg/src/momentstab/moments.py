"""Moment maps for flat, radial, Fubini-Study, and product Kahler models.

Conventions fixed once and used everywhere:

* Hermitian pairing <u,w>_H = w^dag H u, complex-linear in the first slot.
* One-parameter subgroups act by (t, z) -> exp(-t xi).z, so the induced
  vector field on a linear domain is xi_Z(v) = -M(xi) v.
* A moment value is stored as the Hermitian block matrix B representing the
  functional xi -> trace_pairing(xi, B).  The potential of each model relates
  to it by trace_pairing(xi, B) = MOMENT_POTENTIAL_SCALE * d(potential)(J xi_Z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .groups import (
    ATOL_NUM,
    AlgebraElement,
    CoadjointVector,
    DomainError,
    GroupDescriptor,
    GroupElement,
    StructuralError,
    algebra_basis,
    hermitian_on_bases,
    trace_pairing,
)
from .reps import (
    ProjectivePoint,
    Representation,
    VectorPoint,
    algebra_action_matrix,
    group_action_matrix,
)

# Single global normalization constant between potential derivatives and the
# matrix form of the moment map.  Fixed by the projective anchor values; see
# moment_from_potential.
MOMENT_POTENTIAL_SCALE = 0.5


# ---------------------------------------------------------------------------
# radial profiles

@dataclass(frozen=True)
class PowerProfile:
    """phi(s) = s, the flat potential."""

    def value(self, s: float) -> float:
        return float(s)

    def deriv(self, s: float) -> float:
        return 1.0

    def second(self, s: float) -> float:
        return 0.0


@dataclass(frozen=True)
class LogProfile:
    """phi(s) = c log(1 + s), c > 0."""

    c: float

    def __post_init__(self) -> None:
        c = float(self.c)
        if not (math.isfinite(c) and c > 0.0):
            raise StructuralError("log profile needs c > 0")
        object.__setattr__(self, "c", c)

    def value(self, s: float) -> float:
        return self.c * math.log1p(s)

    def deriv(self, s: float) -> float:
        return self.c / (1.0 + s)

    def second(self, s: float) -> float:
        return -self.c / (1.0 + s) ** 2


def _fd_scalar_deriv(f: Callable[[float], float]) -> Callable[[float], float]:
    # one-sided near 0 so profiles defined only on [0, inf) stay usable
    def d(s: float) -> float:
        h = 1e-6 * max(1.0, abs(s))
        if s - h >= 0.0:
            return (f(s + h) - f(s - h)) / (2.0 * h)
        return (f(s + h) - f(s)) / h

    return d


@dataclass(frozen=True)
class CustomProfile:
    """User-supplied phi; phi' must stay positive (plurisubharmonicity proxy)."""

    phi: Callable[[float], float]
    phi_prime: Callable[[float], float]
    phi_second: Optional[Callable[[float], float]] = None

    def __post_init__(self) -> None:
        for s in np.logspace(-4.0, 4.0, 100):
            d = float(self.phi_prime(float(s)))
            if not (math.isfinite(d) and d > 0.0):
                raise StructuralError(
                    "custom profile needs phi' > 0 on (0, inf)")

    def value(self, s: float) -> float:
        return float(self.phi(float(s)))

    def deriv(self, s: float) -> float:
        return float(self.phi_prime(float(s)))

    def second(self, s: float) -> float:
        if self.phi_second is not None:
            return float(self.phi_second(float(s)))
        return _fd_scalar_deriv(self.phi_prime)(float(s))


def _check_profile(profile) -> None:
    if not (hasattr(profile, "value") and hasattr(profile, "deriv")):
        raise StructuralError("profile needs value() and deriv()")


# ---------------------------------------------------------------------------
# models

def _check_form(rep: Representation, H) -> np.ndarray:
    H = np.asarray(H, dtype=complex)
    if H.shape != (rep.dim, rep.dim):
        raise StructuralError("form size does not match the representation")
    if np.max(np.abs(H - H.conj().T)) > ATOL_NUM:
        raise StructuralError("form must be Hermitian")
    if np.min(np.linalg.eigvalsh(H)) <= 0.0:
        raise StructuralError("form must be positive definite")
    worst = max(np.max(np.abs(m.conj().T @ H + H @ m)) for m in rep.mats)
    if worst > ATOL_NUM:
        raise StructuralError("form is not invariant under the compact group")
    return H


@dataclass(frozen=True)
class Flat:
    """Linear space with potential <v,v>_H."""

    rep: Representation
    form: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        H = self.rep.H if self.form is None else _check_form(self.rep, self.form)
        object.__setattr__(self, "form", H)

    @property
    def group(self) -> GroupDescriptor:
        return self.rep.group


@dataclass(frozen=True)
class RadialPotential:
    """Linear space with potential phi(<v,v>_H)."""

    rep: Representation
    profile: object
    form: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        _check_profile(self.profile)
        H = self.rep.H if self.form is None else _check_form(self.rep, self.form)
        object.__setattr__(self, "form", H)

    @property
    def group(self) -> GroupDescriptor:
        return self.rep.group


@dataclass(frozen=True)
class FubiniStudy:
    """Projective space of the representation, potential log <x,x>_H upstairs."""

    rep: Representation
    form: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        H = self.rep.H if self.form is None else _check_form(self.rep, self.form)
        object.__setattr__(self, "form", H)

    @property
    def group(self) -> GroupDescriptor:
        return self.rep.group


@dataclass(frozen=True)
class ProductSum:
    """Product of models for one group; the moment map is the blockwise sum."""

    parts: tuple

    def __post_init__(self) -> None:
        parts = tuple(self.parts)
        if not parts:
            raise StructuralError("product model needs at least one part")
        for part in parts:
            if not isinstance(part, (Flat, RadialPotential, FubiniStudy,
                                     ProductSum)):
                raise StructuralError("product part is not a Kahler model")
            if part.group != parts[0].group:
                raise StructuralError("product parts must share one group")
        object.__setattr__(self, "parts", parts)

    @property
    def group(self) -> GroupDescriptor:
        return self.parts[0].group


KahlerModel = Union[Flat, RadialPotential, FubiniStudy, ProductSum]


# ---------------------------------------------------------------------------
# points: canonical form is an ndarray per single-rep model, nested tuples
# for products; wrapped VectorPoint / ProjectivePoint inputs are unwrapped.

def canonical_point(model: KahlerModel, point):
    if isinstance(model, ProductSum):
        if not isinstance(point, (tuple, list)) or len(point) != len(model.parts):
            raise StructuralError("product point needs one entry per part")
        return tuple(canonical_point(m, p)
                     for m, p in zip(model.parts, point))
    if isinstance(point, (VectorPoint, ProjectivePoint)):
        coords = point.coords
    else:
        coords = np.asarray(point, dtype=complex).reshape(-1)
    if coords.shape[0] != model.rep.dim:
        raise StructuralError("point length does not match the representation")
    if isinstance(model, FubiniStudy) and not np.any(coords):
        raise DomainError("projective evaluation needs a nonzero vector")
    return coords


def _canonical_tangent(model: KahlerModel, w):
    # like canonical_point but zero vectors are fine everywhere
    if isinstance(model, ProductSum):
        if not isinstance(w, (tuple, list)) or len(w) != len(model.parts):
            raise StructuralError("product tangent needs one entry per part")
        return tuple(_canonical_tangent(m, t) for m, t in zip(model.parts, w))
    t = np.asarray(w, dtype=complex).reshape(-1)
    if t.shape[0] != model.rep.dim:
        raise StructuralError("tangent length does not match the representation")
    return t


def _axpy(p, c: float, w):
    if isinstance(p, tuple):
        return tuple(_axpy(a, c, b) for a, b in zip(p, w))
    return p + c * w


def _rotate(w):
    if isinstance(w, tuple):
        return tuple(_rotate(t) for t in w)
    return 1j * w


def sample_point(model: KahlerModel, rng: np.random.Generator,
                 scale: float = 1.0):
    """Random point of the model's domain in canonical form."""
    if isinstance(model, ProductSum):
        return tuple(sample_point(m, rng, scale) for m in model.parts)
    n = model.rep.dim
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    while isinstance(model, FubiniStudy) and not np.any(v):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return scale * v


# ---------------------------------------------------------------------------
# moment evaluation

# Per (rep, form) cache: for each Hermitian basis element F of each factor,
# the matrix A with functional value Re(v^dag A v), so one moment evaluation
# is a handful of quadratic forms.
_FLAT_OPS_CACHE: dict = {}


def _flat_ops(rep: Representation, H: np.ndarray):
    key = (id(rep), id(H))
    hit = _FLAT_OPS_CACHE.get(key)
    if hit is not None and hit[0] is rep and hit[1] is H:
        return hit[2]
    group = rep.group
    sizes = group.block_sizes
    ops = []
    for fi, basis in enumerate(hermitian_on_bases(group)):
        for F in basis:
            emb = [np.zeros((m, m), dtype=complex) for m in sizes]
            emb[fi] = 1.0j * F
            m = algebra_action_matrix(rep, AlgebraElement(group, tuple(emb)))
            # f(iF) = Re(-i v^dag H M v) = Re(v^dag A v)
            ops.append((fi, F, -1.0j * (H @ m)))
    _FLAT_OPS_CACHE[key] = (rep, H, ops)
    return ops


def _flat_matrix(rep: Representation, H: np.ndarray,
                 v: np.ndarray) -> CoadjointVector:
    group = rep.group
    sizes = group.block_sizes
    blocks = [np.zeros((n, n), dtype=complex) for n in sizes]
    vc = v.conj()
    for fi, F, A in _flat_ops(rep, H):
        blocks[fi] = blocks[fi] + float((vc @ (A @ v)).real) * F
    return CoadjointVector(group, tuple(blocks))


def _radial_scale(profile, s: float) -> float:
    try:
        d = float(profile.deriv(s))
    except (ArithmeticError, ValueError) as exc:
        raise DomainError(f"radial derivative undefined at s={s}") from exc
    if not math.isfinite(d):
        raise DomainError(f"radial derivative unbounded at s={s}")
    return d


def _norm_sq(H: np.ndarray, v: np.ndarray) -> float:
    return float((v.conj() @ H @ v).real)


def _moment(model: KahlerModel, cpt) -> CoadjointVector:
    if isinstance(model, ProductSum):
        total = _moment(model.parts[0], cpt[0])
        for m, p in zip(model.parts[1:], cpt[1:]):
            total = total + _moment(m, p)
        return total
    if isinstance(model, Flat):
        return _flat_matrix(model.rep, model.form, cpt)
    if isinstance(model, RadialPotential):
        s = _norm_sq(model.form, cpt)
        return _flat_matrix(model.rep, model.form, cpt).scale(
            _radial_scale(model.profile, s))
    s = _norm_sq(model.form, cpt)
    if s <= 0.0:
        raise DomainError("projective evaluation needs a nonzero vector")
    return _flat_matrix(model.rep, model.form, cpt).scale(1.0 / s)


def _potential(model: KahlerModel, cpt) -> float:
    if isinstance(model, ProductSum):
        return sum(_potential(m, p) for m, p in zip(model.parts, cpt))
    s = _norm_sq(model.form, cpt)
    if isinstance(model, Flat):
        return s
    if isinstance(model, RadialPotential):
        return float(model.profile.value(s))
    if s <= 0.0:
        raise DomainError("projective potential needs a nonzero vector")
    return math.log(s)


def _field(model: KahlerModel, xi: AlgebraElement, cpt):
    # xi_Z(p) = -M(xi) p, per slot
    if isinstance(model, ProductSum):
        return tuple(_field(m, xi, p) for m, p in zip(model.parts, cpt))
    return -(algebra_action_matrix(model.rep, xi) @ cpt)


def _translate(model: KahlerModel, g: GroupElement, cpt):
    if isinstance(model, ProductSum):
        return tuple(_translate(m, g, p) for m, p in zip(model.parts, cpt))
    return group_action_matrix(model.rep, g) @ cpt


def _energy(model: KahlerModel, xi: AlgebraElement, cpt) -> float:
    # squared metric length of xi_Z at the point, omega(xi_Z, J xi_Z)
    if isinstance(model, ProductSum):
        return sum(_energy(m, xi, p) for m, p in zip(model.parts, cpt))
    H = model.form
    u = algebra_action_matrix(model.rep, xi) @ cpt
    uu = _norm_sq(H, u)
    if isinstance(model, Flat):
        return 2.0 * uu
    if isinstance(model, RadialPotential):
        s = _norm_sq(H, cpt)
        uv = complex(cpt.conj() @ H @ u)
        d = _radial_scale(model.profile, s)
        dd = float(model.profile.second(s)) if hasattr(model.profile, "second") \
            else _fd_scalar_deriv(model.profile.deriv)(s)
        return 2.0 * d * uu + 2.0 * dd * abs(uv) ** 2
    s = _norm_sq(H, cpt)
    if s <= 0.0:
        raise DomainError("projective evaluation needs a nonzero vector")
    ux = complex(cpt.conj() @ H @ u)
    return 2.0 * (uu * s - abs(ux) ** 2) / s ** 2


def compact_dual(beta: CoadjointVector) -> AlgebraElement:
    """The compact algebra element i*beta, cleaned to exact structure."""
    blocks = []
    for b in beta.blocks:
        h = (b + b.conj().T) / 2.0
        n = h.shape[0]
        h = h - (np.trace(h).real / n) * np.eye(n)
        blocks.append(1.0j * h)
    return AlgebraElement(beta.group, tuple(blocks), compact=True)


def hermitian_direction(beta: CoadjointVector) -> AlgebraElement:
    """beta itself as a (non-compact) algebra element, cleaned the same way."""
    blocks = []
    for b in beta.blocks:
        h = (b + b.conj().T) / 2.0
        n = h.shape[0]
        blocks.append(h - (np.trace(h).real / n) * np.eye(n))
    return AlgebraElement(beta.group, tuple(blocks), compact=False)


@dataclass(frozen=True)
class MomentEvaluator:
    """Immutable moment-map evaluator for one Kahler model."""

    model: KahlerModel

    @property
    def group(self) -> GroupDescriptor:
        return self.model.group

    def moment(self, point) -> CoadjointVector:
        return _moment(self.model, canonical_point(self.model, point))

    def residual(self, point) -> float:
        return self.moment(point).norm()

    def potential(self, point) -> float:
        return _potential(self.model, canonical_point(self.model, point))

    def translate(self, g: GroupElement, point):
        if g.group != self.group:
            raise StructuralError("group element does not match the model")
        return _translate(self.model, g, canonical_point(self.model, point))

    def vector_field(self, xi: AlgebraElement, point):
        if xi.group != self.group:
            raise StructuralError("algebra element does not match the model")
        return _field(self.model, xi, canonical_point(self.model, point))

    def descent_energy(self, point, beta: CoadjointVector) -> float:
        """omega(xi_Z, J xi_Z) at the point for xi = i*beta.

        This is minus the initial slope of ||mu||^2 along exp(-t beta).point,
        nonnegative, and zero exactly when xi fixes the point.
        """
        if beta.group != self.group:
            raise StructuralError("moment value does not match the model")
        return _energy(self.model, compact_dual(beta),
                       canonical_point(self.model, point))


# ---------------------------------------------------------------------------
# named operations

def moment_flat(rep: Representation, H, v) -> CoadjointVector:
    """Moment matrix of the flat model at a vector."""
    model = Flat(rep, H)
    return _moment(model, canonical_point(model, v))


def moment_radial(rep: Representation, H, profile, v) -> CoadjointVector:
    """Moment matrix phi'(<v,v>_H) * moment_flat(v)."""
    model = RadialPotential(rep, profile, H)
    return _moment(model, canonical_point(model, v))


def moment_fubini_study(rep: Representation, H, p) -> CoadjointVector:
    """Projective moment matrix; scale-invariant in homogeneous coordinates."""
    model = FubiniStudy(rep, H)
    return _moment(model, canonical_point(model, p))


def moment_sum(parts) -> CoadjointVector:
    """Sum of (evaluator, point) evaluations over a shared group."""
    parts = list(parts)
    if not parts:
        raise StructuralError("moment sum needs at least one part")
    total = parts[0][0].moment(parts[0][1])
    for ev, pt in parts[1:]:
        total = total + ev.moment(pt)
    return total


def moment_from_potential(rho, xi: AlgebraElement, v) -> float:
    """Directional derivative d(rho)(J xi_Z) at v, computed in closed form.

    `rho` is a radial profile, or a Flat / RadialPotential model whose
    potential is used.  The matrix moment satisfies
    trace_pairing(xi, matrix) = MOMENT_POTENTIAL_SCALE * this value.
    """
    if isinstance(rho, Flat):
        profile, rep, H = PowerProfile(), rho.rep, rho.form
    elif isinstance(rho, RadialPotential):
        profile, rep, H = rho.profile, rho.rep, rho.form
    else:
        _check_profile(rho)
        if not isinstance(v, VectorPoint):
            raise StructuralError(
                "a bare profile needs a VectorPoint to supply rep and form")
        profile, rep, H = rho, v.rep, v.rep.H
    coords = v.coords if isinstance(v, (VectorPoint, ProjectivePoint)) \
        else np.asarray(v, dtype=complex).reshape(-1)
    if coords.shape[0] != rep.dim:
        raise StructuralError("point length does not match the representation")
    s = _norm_sq(H, coords)
    d = _radial_scale(profile, s)
    m = algebra_action_matrix(rep, xi)
    return 2.0 * d * float((coords.conj() @ H @ (m @ coords)).imag)


def shift_moment(base: MomentEvaluator, phi) -> MomentEvaluator:
    """Evaluator of base plus the moment of the extra radial potential phi.

    `phi` is a radial profile object or a plain scalar callable (derivative
    then taken by finite differences).  The combined potential must remain
    strictly increasing; the constructor rejects shifts that break that.
    """
    model = base.model
    if not isinstance(model, (Flat, RadialPotential)):
        raise StructuralError("radial shifts need a linear-domain model")
    if hasattr(phi, "value") and hasattr(phi, "deriv"):
        s_val, s_der = phi.value, phi.deriv
        s_sec = getattr(phi, "second", None)
    elif callable(phi):
        s_val, s_der, s_sec = phi, _fd_scalar_deriv(phi), None
    else:
        raise StructuralError("shift must be a profile or a scalar callable")
    if isinstance(model, Flat):
        b_val, b_der = PowerProfile().value, PowerProfile().deriv
        b_sec = PowerProfile().second
    else:
        b_val, b_der = model.profile.value, model.profile.deriv
        b_sec = getattr(model.profile, "second", None)
    second = None
    if b_sec is not None and s_sec is not None:
        second = lambda s: b_sec(s) + s_sec(s)  # noqa: E731
    combined = CustomProfile(
        phi=lambda s: b_val(s) + s_val(s),
        phi_prime=lambda s: b_der(s) + s_der(s),
        phi_second=second)
    return MomentEvaluator(RadialPotential(model.rep, combined, model.form))


def verify_moment_condition(model: KahlerModel, p, xi: AlgebraElement,
                            w, h: float) -> float:
    """Residual |d mu^xi(w) - omega(xi_Z, w)| by finite differences.

    The paired moment is differenced directly; omega comes from the model
    potential P via omega = -(1/2) d(dP o J), nested central differences.
    Both sides are O(h^2) accurate, so the residual shrinks like h^2.
    """
    h = float(h)
    if not (math.isfinite(h) and h > 1e-12):
        raise DomainError("finite-difference step is degenerate")
    cpt = canonical_point(model, p)
    tw = _canonical_tangent(model, w)

    def mu_xi(q) -> float:
        return trace_pairing(xi, _moment(model, q))

    d_mu = (mu_xi(_axpy(cpt, h, tw)) - mu_xi(_axpy(cpt, -h, tw))) / (2.0 * h)
    u = _field(model, xi, cpt)

    def dc(q, t) -> float:
        jt = _rotate(t)
        return (_potential(model, _axpy(q, h, jt))
                - _potential(model, _axpy(q, -h, jt))) / (2.0 * h)

    term_u = (dc(_axpy(cpt, h, u), tw) - dc(_axpy(cpt, -h, u), tw)) / (2.0 * h)
    term_w = (dc(_axpy(cpt, h, tw), u) - dc(_axpy(cpt, -h, tw), u)) / (2.0 * h)
    omega = -0.5 * (term_u - term_w)
    return abs(d_mu - omega)


# ---------------------------------------------------------------------------
# rank of the moment differential versus orbit dimension

def _project_slot(model, cpt, t):
    # quotient tangent for projective slots: remove the complex line through x
    if isinstance(model, FubiniStudy):
        x = cpt
        return t - x * (np.vdot(x, t) / np.vdot(x, x))
    return t


def _tangent_real(model: KahlerModel, cpt, t) -> np.ndarray:
    if isinstance(model, ProductSum):
        return np.concatenate([
            _tangent_real(m, p, s)
            for m, p, s in zip(model.parts, cpt, t)])
    s = _project_slot(model, cpt, t)
    return np.concatenate([s.real, s.imag])


def _rank(cols, tol_abs: float, tol_rel: float) -> int:
    A = np.column_stack(cols)
    if A.size == 0:
        return 0
    sv = np.linalg.svd(A, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > max(tol_abs, tol_rel * sv[0])))


def orbit_dimension(model: KahlerModel, point) -> int:
    """Real dimension of the compact-group orbit through the point."""
    cpt = canonical_point(model, point)
    cols = [_tangent_real(model, cpt, _field(model, xi, cpt))
            for xi in algebra_basis(model.group)]
    return _rank(cols, 1e-10, 1e-8)


def _zero_like(cpt):
    if isinstance(cpt, tuple):
        return tuple(_zero_like(p) for p in cpt)
    return np.zeros_like(cpt)


def _unit_tangents(model: KahlerModel, cpt):
    if isinstance(model, ProductSum):
        for idx, (m, p) in enumerate(zip(model.parts, cpt)):
            for t in _unit_tangents(m, p):
                slot = list(_zero_like(cpt))
                slot[idx] = t
                yield tuple(slot)
        return
    n = cpt.shape[0]
    for k in range(n):
        e = np.zeros(n, dtype=complex)
        e[k] = 1.0
        yield e
        e = np.zeros(n, dtype=complex)
        e[k] = 1.0j
        yield e


def _coad_real(beta: CoadjointVector) -> np.ndarray:
    return np.concatenate([
        np.concatenate([b.real.ravel(), b.imag.ravel()]) for b in beta.blocks])


def moment_rank(model: KahlerModel, point, h: float = 1e-4) -> int:
    """Numerical rank of the moment differential at the point.

    Matches orbit_dimension at points with discrete stabilizer in the
    direction transverse to the moment fibers; used for the rank-law checks.
    """
    cpt = canonical_point(model, point)
    cols = []
    for t in _unit_tangents(model, cpt):
        plus = _moment(model, _axpy(cpt, h, t))
        minus = _moment(model, _axpy(cpt, -h, t))
        cols.append((_coad_real(plus) - _coad_real(minus)) / (2.0 * h))
    return _rank(cols, 1e-5, 1e-5)


__all__ = [
    "MOMENT_POTENTIAL_SCALE",
    "DomainError",
    "PowerProfile",
    "LogProfile",
    "CustomProfile",
    "Flat",
    "RadialPotential",
    "FubiniStudy",
    "ProductSum",
    "KahlerModel",
    "MomentEvaluator",
    "canonical_point",
    "sample_point",
    "compact_dual",
    "hermitian_direction",
    "moment_flat",
    "moment_radial",
    "moment_fubini_study",
    "moment_sum",
    "moment_from_potential",
    "shift_moment",
    "verify_moment_condition",
    "orbit_dimension",
    "moment_rank",
]
