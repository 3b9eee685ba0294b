"""Assembly, validation, and classification of unipotent semistability setups.

A scenario fixes everything needed to decide whether a point of a space X
with a unipotent group action is semistable: the ambient reductive group,
a basis of the nilpotent algebra, an optional linear orbit factor standing
in for G/N, a projective extension space, and the coordinate map carrying
X into that extension.  Classification then runs on the product moment
map at the composite point, with cone and slice certificates short-cutting
the flow whenever the scenario carries the data for them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.linalg import expm

from .cones import cone_from_highest_weights, projective_dominant_targets, \
    zero_fiber_obstruction
from .flow import FlowConfig, Verdict, classify_point, slice_infimum
from .groups import (
    AlgebraElement,
    DomainError,
    GroupDescriptor,
    GroupElement,
    StructuralError,
    Weight,
    exp_group,
)
from .moments import Flat, FubiniStudy, LogProfile, MomentEvaluator, \
    ProductSum, RadialPotential
from .reps import (
    ProjectivePoint,
    Representation,
    VectorPoint,
    act_group,
    build_representation,
    group_action_matrix,
    projective_distance,
    stabilizer_check,
)

BUILTIN_TAGS = ("naive_p1_z1", "naive_p1_z3", "sl2_log_c", "sl2xsl2_p2",
                "sl3_grosshans_cone")

# residual gates for a usable scenario
STABILIZER_TOL = 1e-10
EQUIVARIANCE_TOL = 1e-8


# ---------------------------------------------------------------------------
# embedding and domain descriptions

@dataclass(frozen=True)
class EmbedMap:
    """Coordinate map from C^m into the extension's projective slots.

    Each slot is either ("linear", matrix) applied to the domain vector or
    ("constant", vector) ignoring it; index maps like
    [z0:z1:z2] -> [z0:z2:z1:z2] are 0/1 linear matrices.
    """

    domain_dim: int
    slots: tuple

    def __post_init__(self) -> None:
        if not isinstance(self.domain_dim, int) or self.domain_dim < 1:
            raise StructuralError("embedding needs a positive domain dimension")
        if not self.slots:
            raise StructuralError("embedding needs at least one slot")
        slots = []
        for spec in self.slots:
            kind, payload = spec
            if kind == "linear":
                m = np.asarray(payload, dtype=complex)
                if m.ndim != 2 or m.shape[1] != self.domain_dim:
                    raise StructuralError(
                        f"linear slot must be (k, {self.domain_dim}), got {m.shape}")
            elif kind == "constant":
                m = np.asarray(payload, dtype=complex).reshape(-1)
                if np.linalg.norm(m) == 0:
                    raise StructuralError("constant slot must be nonzero")
            else:
                raise StructuralError(f"unknown embed slot kind {kind!r}")
            m.setflags(write=False)
            slots.append((kind, m))
        object.__setattr__(self, "slots", tuple(slots))

    def slot_dims(self) -> tuple:
        return tuple(m.shape[0] if kind == "linear" else m.shape[0]
                     for kind, m in self.slots)

    def apply(self, x: np.ndarray) -> tuple:
        x = np.asarray(x, dtype=complex).reshape(-1)
        if x.shape[0] != self.domain_dim:
            raise StructuralError(
                f"domain vector has length {x.shape[0]}, expected {self.domain_dim}")
        out = []
        for kind, m in self.slots:
            w = m @ x if kind == "linear" else m.copy()
            if np.linalg.norm(w) == 0:
                raise DomainError("point maps to zero in an extension slot")
            out.append(w)
        return tuple(out)


@dataclass(frozen=True)
class PointDomain:
    """Which domain lines belong to X: all of them, a subspace, or a list."""

    kind: str = "full"
    data: tuple = ()

    def __post_init__(self) -> None:
        if self.kind not in ("full", "subspace", "points"):
            raise StructuralError(f"unknown domain kind {self.kind!r}")
        if self.kind != "full" and not self.data:
            raise StructuralError(f"{self.kind} domain needs data vectors")
        data = tuple(np.asarray(v, dtype=complex).reshape(-1) for v in self.data)
        for v in data:
            v.setflags(write=False)
        object.__setattr__(self, "data", data)

    def contains(self, x: np.ndarray, tol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=complex).reshape(-1)
        nx = np.linalg.norm(x)
        if nx == 0 or not np.all(np.isfinite(x)):
            return False
        if self.kind == "full":
            return True
        if self.kind == "subspace":
            basis = np.stack(self.data, axis=1)
            coef, *_ = np.linalg.lstsq(basis, x, rcond=None)
            return float(np.linalg.norm(basis @ coef - x)) <= tol * nx
        return any(projective_distance(x, v) <= tol for v in self.data)


def _fs_leaves(model):
    if isinstance(model, FubiniStudy):
        return [model]
    if isinstance(model, ProductSum):
        out = []
        for part in model.parts:
            out.extend(_fs_leaves(part))
        return out
    raise StructuralError("extension model must be projective slots only")


# ---------------------------------------------------------------------------
# the scenario

@dataclass(frozen=True, eq=False)
class UnipotentScenario:
    """Complete data of one unipotent semistability problem.

    The orbit triple (orbit_rep, v_base, gn_model) is optional: scenarios
    whose analysis happens entirely inside the projective extension leave
    it out and classify against the extension moment alone.
    """

    tag: str
    group: GroupDescriptor
    n_basis: tuple
    embed: EmbedMap
    domain_action: tuple
    x_domain: PointDomain
    extension_model: object
    orbit_rep: Optional[Representation] = None
    v_base: Optional[np.ndarray] = None
    gn_model: Optional[object] = None
    cone_metadata: Optional[tuple] = None
    extension_transitive: bool = False
    slice_c: Optional[float] = None
    grid_includes_pole: bool = True

    def __post_init__(self) -> None:
        n_basis = tuple(self.n_basis)
        if not n_basis:
            raise StructuralError("scenario needs at least one nilpotent element")
        for xi in n_basis:
            if not isinstance(xi, AlgebraElement) or xi.group != self.group:
                raise StructuralError("n_basis must be algebra elements of the group")
        object.__setattr__(self, "n_basis", n_basis)

        m = self.embed.domain_dim
        action = tuple(np.asarray(a, dtype=complex) for a in self.domain_action)
        if len(action) != len(n_basis):
            raise StructuralError("one domain action matrix per nilpotent element")
        for a in action:
            if a.shape != (m, m):
                raise StructuralError(f"domain action must be {m}x{m}, got {a.shape}")
            a.setflags(write=False)
        object.__setattr__(self, "domain_action", action)

        leaves = _fs_leaves(self.extension_model)
        if len(leaves) != len(self.embed.slots):
            raise StructuralError("one embed slot per projective factor required")
        for leaf, dim in zip(leaves, self.embed.slot_dims()):
            if leaf.group != self.group:
                raise StructuralError("extension factors must share the scenario group")
            if leaf.rep.dim != dim:
                raise StructuralError(
                    f"embed slot produces dim {dim}, factor expects {leaf.rep.dim}")

        orbit_bits = (self.orbit_rep, self.v_base, self.gn_model)
        if any(b is not None for b in orbit_bits) and not all(
                b is not None for b in orbit_bits):
            raise StructuralError(
                "orbit_rep, v_base and gn_model come together or not at all")
        if self.gn_model is not None:
            if not isinstance(self.gn_model, (Flat, RadialPotential)):
                raise StructuralError("orbit factor must be a linear-space model")
            if self.gn_model.rep is not self.orbit_rep:
                raise StructuralError("orbit model must be built over orbit_rep")
            v = np.asarray(self.v_base, dtype=complex).reshape(-1)
            if v.shape[0] != self.orbit_rep.dim or np.linalg.norm(v) == 0:
                raise StructuralError("v_base must be a nonzero vector of orbit_rep")
            v.setflags(write=False)
            object.__setattr__(self, "v_base", v)

        if self.cone_metadata is not None:
            meta = tuple(self.cone_metadata)
            for lam in meta:
                if not isinstance(lam, Weight) or lam.group != self.group:
                    raise StructuralError("cone metadata must be weights of the group")
            if len(leaves) != 1:
                raise StructuralError(
                    "cone certificates need a single projective factor")
            object.__setattr__(self, "cone_metadata", meta)

        object.__setattr__(self, "_cache", {})

    # ---- derived structure, cached on the instance ----

    @property
    def reductive_only(self) -> bool:
        return self.gn_model is None

    @property
    def domain_dim(self) -> int:
        return self.embed.domain_dim

    @property
    def model(self):
        got = self._cache.get("model")
        if got is None:
            if self.reductive_only:
                got = self.extension_model
            else:
                got = ProductSum((self.gn_model, self.extension_model))
            self._cache["model"] = got
        return got

    @property
    def evaluator(self) -> MomentEvaluator:
        got = self._cache.get("evaluator")
        if got is None:
            got = MomentEvaluator(self.model)
            self._cache["evaluator"] = got
        return got


# ---------------------------------------------------------------------------
# points and unipotent elements

def _domain_vector(s: UnipotentScenario, x) -> np.ndarray:
    if isinstance(x, (ProjectivePoint, VectorPoint)):
        x = x.coords
    x = np.asarray(x, dtype=complex).reshape(-1)
    if x.shape[0] != s.domain_dim:
        raise StructuralError(
            f"point has length {x.shape[0]}, domain is C^{s.domain_dim}")
    if np.linalg.norm(x) == 0 or not np.all(np.isfinite(x)):
        raise DomainError("domain points are nonzero finite vectors")
    return x


def unipotent_pair(s: UnipotentScenario, coeffs):
    """exp of a nilpotent combination, on the group and on the domain.

    Returns (group element, m x m matrix acting on domain coordinates) for
    xi = sum coeffs[i] * n_basis[i]; the two act compatibly through the
    embedding whenever the scenario validates.
    """
    coeffs = tuple(coeffs)
    if len(coeffs) != len(s.n_basis):
        raise StructuralError("one coefficient per nilpotent basis element")
    blocks = [np.zeros_like(b) for b in s.n_basis[0].blocks]
    for c, xi in zip(coeffs, s.n_basis):
        for i, b in enumerate(xi.blocks):
            blocks[i] = blocks[i] + complex(c) * b
    xi = AlgebraElement(s.group, tuple(blocks), compact=False)
    dom = sum((complex(c) * a for c, a in zip(coeffs, s.domain_action)),
              np.zeros((s.domain_dim, s.domain_dim), dtype=complex))
    return exp_group(xi), expm(dom)


def build_extension_point(s: UnipotentScenario, x):
    """Composite point at which semistability of x is decided.

    Full scenarios pair the orbit base vector with the embedded image of x;
    reductive-only scenarios return the embedded image alone.
    """
    x = _domain_vector(s, x)
    if not s.x_domain.contains(x):
        raise DomainError("point lies outside the scenario's domain")
    slots = s.embed.apply(x)
    ext = slots if isinstance(s.extension_model, ProductSum) else slots[0]
    if s.reductive_only:
        return ext
    return (s.v_base.copy(), ext)


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class ScenarioReport:
    tag: str
    stabilizer_residual: Optional[float]
    equivariance_residual: float
    model_compatible: bool
    messages: tuple
    passed: bool


def _equivariance_residual(s: UnipotentScenario, samples: int = 20) -> float:
    """Largest projective mismatch between embed-then-act and act-then-embed."""
    rng = np.random.default_rng(1234)
    leaves = _fs_leaves(s.extension_model)
    xis = [tuple(1.0 if i == j else 0.0 for i in range(len(s.n_basis)))
           for j in range(len(s.n_basis))]
    for _ in range(3):
        xis.append(tuple(rng.standard_normal() + 1j * rng.standard_normal()
                         for _ in s.n_basis))
    worst = 0.0
    for _ in range(samples):
        x = rng.standard_normal(s.domain_dim) + 1j * rng.standard_normal(s.domain_dim)
        if not s.x_domain.contains(x):
            continue
        for coeffs in xis:
            for t in (0.3, 1.0):
                n, dom = unipotent_pair(s, tuple(t * c for c in coeffs))
                moved = s.embed.apply(dom @ x)
                for leaf, w, w_moved in zip(leaves, s.embed.apply(x), moved):
                    acted = act_group(leaf.rep, n, w)
                    worst = max(worst, projective_distance(w_moved, acted))
    return worst


def validate_scenario(s: UnipotentScenario) -> ScenarioReport:
    """Report-only check that the scenario's pieces fit together."""
    got = s._cache.get("report")
    if got is not None:
        return got
    messages = []

    if s.reductive_only:
        stab = None
        messages.append("no orbit factor: stabilizer check skipped")
    else:
        stab = float(stabilizer_check(s.orbit_rep, s.v_base, list(s.n_basis)))
        messages.append(f"stabilizer residual {stab:.3e} "
                        f"({'ok' if stab < STABILIZER_TOL else 'FAIL'})")

    equiv = float(_equivariance_residual(s))
    messages.append(f"embedding equivariance residual {equiv:.3e} "
                    f"({'ok' if equiv < EQUIVARIANCE_TOL else 'FAIL'})")

    compatible = True
    groups = {leaf.group for leaf in _fs_leaves(s.extension_model)}
    if s.gn_model is not None:
        groups.add(s.gn_model.group)
    if groups != {s.group}:
        compatible = False
    messages.append("model factors share the group descriptor"
                    if compatible else "model factors disagree on the group")

    passed = compatible and equiv < EQUIVARIANCE_TOL \
        and (stab is None or stab < STABILIZER_TOL)
    report = ScenarioReport(s.tag, stab, equiv, compatible,
                            tuple(messages), passed)
    s._cache["report"] = report
    return report


def _require_valid(s: UnipotentScenario) -> None:
    report = validate_scenario(s)
    if not report.passed:
        raise StructuralError(
            "scenario failed validation: " + "; ".join(report.messages))


# ---------------------------------------------------------------------------
# classification

def _cone_data(s: UnipotentScenario) -> Optional[dict]:
    if s.cone_metadata is None:
        return None
    if "cone" not in s._cache:
        cone = cone_from_highest_weights(list(s.cone_metadata))
        leaf = _fs_leaves(s.extension_model)[0]
        targets = projective_dominant_targets(
            leaf.rep, transitive=s.extension_transitive)
        cert = zero_fiber_obstruction(cone, targets)
        s._cache["cone"] = None if cert is None else {"certificate": cert}
    return s._cache["cone"]


def _slice_data(s: UnipotentScenario):
    if s.slice_c is None:
        return None
    if "slice" not in s._cache:
        s._cache["slice"] = slice_infimum(s.evaluator, float(s.slice_c))
    return s._cache["slice"]


def classify_N_semistable(s: UnipotentScenario, x,
                          cfg: FlowConfig = FlowConfig(), *,
                          rng: Optional[np.random.Generator] = None) -> Verdict:
    """Semistability verdict for x through the scenario's extension.

    The composite point is classified under the product moment map; cone
    metadata and the radial slice value, when the scenario carries them,
    certify instability before any flow is attempted.
    """
    _require_valid(s)
    p = build_extension_point(s, x)
    return classify_point(s.evaluator, p, cfg,
                          cone_data=_cone_data(s),
                          slice_result=_slice_data(s),
                          rng=rng)


@dataclass(frozen=True)
class SweepRow:
    point: tuple
    verdict: Verdict


def default_sample(s: UnipotentScenario, count: int, seed: int = 0) -> list:
    """Deterministic point sample covering the scenario's domain.

    On a projective line the sample is a fixed modulus/angle spiral with
    the distinguished point [1:0] included exactly once when the scenario
    wants it in grids; higher-dimensional domains fall back to seeded
    complex Gaussians filtered through the domain test.
    """
    if count <= 0:
        return []
    if s.x_domain.kind == "points":
        reps = list(s.x_domain.data)
        return [reps[i % len(reps)].copy() for i in range(min(count, len(reps)))]
    if s.domain_dim == 2 and s.x_domain.kind == "full":
        pts = []
        if s.grid_includes_pole:
            pts.append(np.array([1.0, 0.0], dtype=complex))
        k = 1
        golden = 0.6180339887498949
        while len(pts) < count:
            u = k / (count + 1)
            r = u / (1.0 - u)
            theta = 2.0 * np.pi * golden * k
            pts.append(np.array([1.0, r * np.exp(1j * theta)], dtype=complex))
            k += 1
        return pts
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < count:
        x = rng.standard_normal(s.domain_dim) + 1j * rng.standard_normal(s.domain_dim)
        if s.x_domain.contains(x):
            pts.append(x)
    return pts


def sweep_semistable_set(s: UnipotentScenario, sample,
                         cfg: FlowConfig = FlowConfig(), *,
                         seed: int = 0) -> tuple:
    """Per-point classification table; deterministic for a given seed."""
    _require_valid(s)
    if isinstance(sample, int):
        sample = default_sample(s, sample, seed)
    elif isinstance(sample, dict):
        sample = default_sample(s, int(sample["count"]),
                                int(sample.get("seed", seed)))
    rows = []
    for x in sample:
        x = _domain_vector(s, x)
        verdict = classify_N_semistable(s, x, cfg,
                                        rng=np.random.default_rng(seed))
        rows.append(SweepRow(tuple(complex(z) for z in x), verdict))
    return tuple(rows)


# ---------------------------------------------------------------------------
# the borel twist action on torus x space products

def _twist_checks(t: GroupElement, u: GroupElement, s_elem: GroupElement) -> None:
    for g in (t, u, s_elem):
        if g.group.factors != ("A1",):
            raise StructuralError("twist action lives on one rank-one factor")
    for name, g in (("t", t), ("s", s_elem)):
        b = g.blocks[0]
        if abs(b[0, 1]) > 1e-12 or abs(b[1, 0]) > 1e-12:
            raise StructuralError(f"{name} must be diagonal")
    b = u.blocks[0]
    if abs(b[0, 0] - 1) > 1e-12 or abs(b[1, 1] - 1) > 1e-12 \
            or abs(b[1, 0]) > 1e-12:
        raise StructuralError("u must be strictly upper unipotent")


def group_twist_action(t: GroupElement, u: GroupElement,
                       s_elem: GroupElement, x):
    """(t u) . (s, x) = (t s, (s^-1 u s) . x) on a torus-times-space product.

    The unipotent part never touches the torus coordinate; it reaches the
    space only after conjugation by the torus coordinate it passed over.
    """
    _twist_checks(t, u, s_elem)
    conj = s_elem.inverse() @ u @ s_elem
    if isinstance(x, VectorPoint):
        moved = VectorPoint(x.rep, act_group(x.rep, conj, x.coords))
    elif isinstance(x, ProjectivePoint):
        moved = ProjectivePoint(x.rep, act_group(x.rep, conj, x.coords))
    else:
        raise StructuralError("x must be a vector or projective point")
    return t @ s_elem, moved


# ---------------------------------------------------------------------------
# built-in scenarios

def _nilpotent(group: GroupDescriptor, factor: int, entry: tuple) -> AlgebraElement:
    blocks = [np.zeros((n, n), dtype=complex) for n in group.block_sizes]
    i, j = entry
    blocks[factor][i, j] = 1.0
    return AlgebraElement(group, tuple(blocks), compact=False)


def _builtin_naive_p1_z1() -> UnipotentScenario:
    g = GroupDescriptor(("A1",))
    std = build_representation(g, ("standard", 0))
    return UnipotentScenario(
        tag="naive_p1_z1",
        group=g,
        n_basis=(_nilpotent(g, 0, (0, 1)),),
        embed=EmbedMap(2, (("linear", np.eye(2)),)),
        domain_action=(np.array([[0, 1], [0, 0]], dtype=complex),),
        x_domain=PointDomain("full"),
        extension_model=FubiniStudy(std),
    )


def _builtin_naive_p1_z3() -> UnipotentScenario:
    g = GroupDescriptor(("A1",))
    std = build_representation(g, ("standard", 0))
    fs = FubiniStudy(std)
    return UnipotentScenario(
        tag="naive_p1_z3",
        group=g,
        n_basis=(_nilpotent(g, 0, (0, 1)),),
        embed=EmbedMap(2, (("constant", np.array([1.0, 0.0])),
                           ("linear", np.eye(2)))),
        domain_action=(np.array([[0, 1], [0, 0]], dtype=complex),),
        x_domain=PointDomain("full"),
        extension_model=ProductSum((fs, fs)),
    )


def _builtin_sl2_log_c(c: float) -> UnipotentScenario:
    if c is None:
        raise StructuralError("sl2_log_c needs its parameter c")
    g = GroupDescriptor(("A1",))
    std = build_representation(g, ("standard", 0))
    return UnipotentScenario(
        tag=f"sl2_log_c({c:g})",
        group=g,
        n_basis=(_nilpotent(g, 0, (0, 1)),),
        embed=EmbedMap(2, (("linear", np.eye(2)),)),
        domain_action=(np.array([[0, 1], [0, 0]], dtype=complex),),
        x_domain=PointDomain("full"),
        extension_model=FubiniStudy(std),
        orbit_rep=std,
        v_base=np.array([1.0, 0.0], dtype=complex),
        gn_model=RadialPotential(std, LogProfile(float(c))),
        slice_c=float(c),
        grid_includes_pole=False,
    )


def _builtin_sl2xsl2_p2() -> UnipotentScenario:
    g = GroupDescriptor(("A1", "A1"))
    v_rep = build_representation(
        g, ("scale_form", 0.5, ("direct_sum", ("standard", 0), ("standard", 1))))
    w_rep = build_representation(
        g, ("direct_sum", ("standard", 0), ("standard", 1)))
    embed = np.array([[1, 0, 0],
                      [0, 0, 1],
                      [0, 1, 0],
                      [0, 0, 1]], dtype=complex)
    d1 = np.zeros((3, 3), dtype=complex)
    d1[0, 2] = 1.0
    d2 = np.zeros((3, 3), dtype=complex)
    d2[1, 2] = 1.0
    return UnipotentScenario(
        tag="sl2xsl2_p2",
        group=g,
        n_basis=(_nilpotent(g, 0, (0, 1)), _nilpotent(g, 1, (0, 1))),
        embed=EmbedMap(3, (("linear", embed),)),
        domain_action=(d1, d2),
        x_domain=PointDomain("full"),
        extension_model=FubiniStudy(w_rep),
        orbit_rep=v_rep,
        v_base=np.array([1.0, 0.0, 1.0, 0.0], dtype=complex),
        gn_model=Flat(v_rep),
    )


def _builtin_sl3_grosshans_cone() -> UnipotentScenario:
    g = GroupDescriptor(("A2",))
    std = build_representation(g, ("standard", 0))
    return UnipotentScenario(
        tag="sl3_grosshans_cone",
        group=g,
        n_basis=(_nilpotent(g, 0, (0, 1)), _nilpotent(g, 0, (0, 2)),
                 _nilpotent(g, 0, (1, 2))),
        embed=EmbedMap(3, (("linear", np.eye(3)),)),
        domain_action=(np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]], dtype=complex),
                       np.array([[0, 0, 1], [0, 0, 0], [0, 0, 0]], dtype=complex),
                       np.array([[0, 0, 0], [0, 0, 1], [0, 0, 0]], dtype=complex)),
        x_domain=PointDomain("full"),
        extension_model=FubiniStudy(std),
        cone_metadata=(Weight(g, ((1, 1),)), Weight(g, ((2, 1),))),
        extension_transitive=True,
    )


def builtin_scenario(tag: str, c: Optional[float] = None) -> UnipotentScenario:
    """One of the named example scenarios; sl2_log_c takes its parameter
    either as the keyword c or inline as "sl2_log_c(0.5)"."""
    name = tag.strip()
    if name.startswith("sl2_log_c(") and name.endswith(")"):
        if c is not None:
            raise StructuralError("parameter given twice")
        c = float(name[len("sl2_log_c("):-1])
        name = "sl2_log_c"
    builders = {
        "naive_p1_z1": _builtin_naive_p1_z1,
        "naive_p1_z3": _builtin_naive_p1_z3,
        "sl2xsl2_p2": _builtin_sl2xsl2_p2,
        "sl3_grosshans_cone": _builtin_sl3_grosshans_cone,
    }
    if name == "sl2_log_c":
        return _builtin_sl2_log_c(c)
    if name not in builders:
        raise StructuralError(f"unknown builtin tag {tag!r}")
    if c is not None:
        raise StructuralError(f"{name} takes no parameter")
    return builders[name]()


@dataclass(frozen=True)
class BuiltinScenario:
    """Named example plus its parameter, materialized on demand."""

    tag: str
    c: Optional[float] = None

    def materialize(self) -> UnipotentScenario:
        return builtin_scenario(self.tag, self.c)


__all__ = [
    "BUILTIN_TAGS",
    "EQUIVARIANCE_TOL",
    "STABILIZER_TOL",
    "BuiltinScenario",
    "EmbedMap",
    "PointDomain",
    "ScenarioReport",
    "SweepRow",
    "UnipotentScenario",
    "build_extension_point",
    "builtin_scenario",
    "classify_N_semistable",
    "default_sample",
    "group_twist_action",
    "sweep_semistable_set",
    "unipotent_pair",
    "validate_scenario",
]
