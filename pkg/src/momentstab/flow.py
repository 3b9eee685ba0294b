"""Gradient descent on the moment-map norm, verdicts, and the slice oracle.

The flow retracts along exact group elements: p <- exp(-eta * beta).p with
beta the Hermitian matrix form of mu(p).  The initial slope of ||mu||^2 along
that path is -omega(xi_Z, J xi_Z) for xi = i*beta, which the evaluator
provides in closed form, so Armijo backtracking has a true directional
derivative to test against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
import scipy.optimize

from .groups import (
    AlgebraElement,
    StructuralError,
    exp_group,
    random_algebra_element,
)
from .moments import (
    FubiniStudy,
    LogProfile,
    MomentEvaluator,
    ProductSum,
    RadialPotential,
    canonical_point,
    hermitian_direction,
)

# A slice certificate needs the grid infimum comfortably above the flow
# tolerance; values at or below this floor fall through to the flow.
SLICE_CERTIFICATE_FLOOR = 0.01


class FlowError(RuntimeError):
    """Numerical breakdown of the flow; carries the trace gathered so far."""

    def __init__(self, message: str, trace: Optional["FlowTrace"] = None):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class FlowConfig:
    max_iters: int = 10000
    tol: float = 1e-8
    initial_step: float = 0.1
    armijo_shrink: float = 0.5
    armijo_decrease: float = 1e-4
    stall_window: int = 200
    stall_rtol: float = 1e-12

    def __post_init__(self) -> None:
        if self.max_iters < 1:
            raise StructuralError("max_iters must be at least 1")
        if not (math.isfinite(self.tol) and self.tol > 0.0):
            raise StructuralError("tol must be positive")
        if not (0.0 < self.armijo_shrink < 1.0):
            raise StructuralError("shrink factor must lie in (0, 1)")
        if not (math.isfinite(self.initial_step) and self.initial_step > 0.0):
            raise StructuralError("initial step must be positive")
        if not (0.0 < self.armijo_decrease < 1.0):
            raise StructuralError("sufficient-decrease constant must lie in (0, 1)")
        if self.stall_window < 1:
            raise StructuralError("stall window must be at least 1")


@dataclass(frozen=True)
class FlowTrace:
    steps: tuple          # (iteration, ||mu||^2, accepted step size)
    final_point: object
    final_residual: float


@dataclass(frozen=True)
class SemistableWitness:
    point: object
    residual: float
    iterations: int


@dataclass(frozen=True)
class UnstableCertificate:
    kind: str             # constant_norm | cone_obstruction | slice_infimum
    data: dict


@dataclass(frozen=True)
class Undetermined:
    best_residual: float
    summary: dict


Verdict = Union[SemistableWitness, UnstableCertificate, Undetermined]


# ---------------------------------------------------------------------------
# helpers

def _finite(cpt) -> bool:
    if isinstance(cpt, tuple):
        return all(_finite(p) for p in cpt)
    return bool(np.all(np.isfinite(cpt)))


def _renormalize(model, cpt):
    # keep projective representatives at unit length; linear slots untouched
    if isinstance(model, ProductSum):
        return tuple(_renormalize(m, p) for m, p in zip(model.parts, cpt))
    if isinstance(model, FubiniStudy):
        return cpt / np.linalg.norm(cpt)
    return cpt


def descent_direction(setup: MomentEvaluator, p) -> AlgebraElement:
    """Hermitian algebra element whose negative exponential descends ||mu||^2.

    Zero exactly when the moment vanishes at p; the first-order decrease of
    ||mu||^2 along exp(-t * direction).p is the evaluator's descent energy.
    """
    return hermitian_direction(setup.moment(p))


# ---------------------------------------------------------------------------
# the flow

def flow_minimize(setup: MomentEvaluator, p0,
                  cfg: FlowConfig = FlowConfig()):
    """Minimize ||mu||^2 from p0.  Returns (FlowTrace, Verdict)."""
    model = setup.model
    p = _renormalize(model, canonical_point(model, p0))
    if not _finite(p):
        raise FlowError("start point is not finite", None)
    try:
        beta = setup.moment(p)
        nsq = beta.norm() ** 2
        if not math.isfinite(nsq):
            raise FlowError("moment overflow at the start point")
    except (StructuralError, FloatingPointError) as exc:
        raise FlowError("moment overflow at the start point", None) from exc
    steps = [(0, nsq, 0.0)]
    best = nsq
    last_progress = 0
    eta = cfg.initial_step

    def trace(q, n):
        return FlowTrace(tuple(steps), q, math.sqrt(max(n, 0.0)))

    if math.sqrt(nsq) <= cfg.tol:
        return trace(p, nsq), SemistableWitness(p, math.sqrt(nsq), 0)

    stop = None
    it = 0
    for it in range(1, cfg.max_iters + 1):
        energy = setup.descent_energy(p, beta)
        if energy <= 1e-12 * nsq:
            stop = "stationary"
            break
        direction = hermitian_direction(beta)
        accepted = False
        failures = 0
        trials = 0
        eta_try = eta
        while eta_try >= 1e-16:
            trials += 1
            try:
                g = exp_group(direction.scale(-eta_try))
                q = _renormalize(model, setup.translate(g, p))
                if not _finite(q):
                    raise FlowError("overflowed iterate")
                beta_q = setup.moment(q)
                nsq_q = beta_q.norm() ** 2
                if not math.isfinite(nsq_q):
                    raise FlowError("overflowed residual")
            except (StructuralError, FlowError, FloatingPointError):
                failures += 1
                eta_try *= cfg.armijo_shrink
                continue
            if nsq_q <= nsq - cfg.armijo_decrease * eta_try * energy:
                accepted = True
                break
            eta_try *= cfg.armijo_shrink
        if not accepted:
            if failures == trials and trials > 0:
                raise FlowError("matrix exponential overflowed at every "
                                "backtracking step", trace(p, nsq))
            stop = "no_decreasing_step"
            break
        if nsq_q > nsq:
            raise FlowError("monotonicity violated", trace(p, nsq))
        p, beta, nsq = q, beta_q, nsq_q
        steps.append((it, nsq, eta_try))
        if nsq <= best * (1.0 - cfg.stall_rtol):
            last_progress = it
        best = min(best, nsq)
        eta = min(eta_try * 2.0, 1e3)
        if math.sqrt(nsq) <= cfg.tol:
            return trace(p, nsq), SemistableWitness(p, math.sqrt(nsq), it)
        if it - last_progress >= cfg.stall_window:
            stop = "stalled"
            break

    summary = {
        "iterations": it,
        "reason": stop if stop is not None else "max_iters",
        "final_step": steps[-1][2] if len(steps) > 1 else 0.0,
    }
    return trace(p, nsq), Undetermined(math.sqrt(best), summary)


# ---------------------------------------------------------------------------
# classification with certificate pre-checks

def constant_norm_check(setup: MomentEvaluator, p, tol: float,
                        rng: Optional[np.random.Generator] = None,
                        translates: int = 100):
    """Residual spread over random full-group translates of p.

    Compact translates cannot move the norm (equivariance), so the probes
    draw from the whole complexified group.  Returns (value, spread).
    """
    rng = np.random.default_rng(0) if rng is None else rng
    values = [setup.residual(p)]
    for _ in range(translates):
        xi = random_algebra_element(setup.group, rng,
                                    norm=float(rng.uniform(0.1, 1.0)),
                                    compact=False)
        values.append(setup.residual(setup.translate(exp_group(xi), p)))
    return float(min(values)), float(max(values) - min(values))


def classify_point(setup: MomentEvaluator, p,
                   cfg: FlowConfig = FlowConfig(), *,
                   cone_data: Optional[dict] = None,
                   slice_result: Optional["SliceInfimum"] = None,
                   rng: Optional[np.random.Generator] = None) -> Verdict:
    """Certificate pre-checks, then the flow.

    Order: an exact zero at the start wins; a cone obstruction or a positive
    slice infimum certifies instability for the whole scenario; a constant
    residual across random group translates certifies an orbit that cannot
    approach the zero fiber; otherwise the flow decides or stays undetermined.
    """
    r0 = setup.residual(p)
    if r0 <= cfg.tol:
        return SemistableWitness(_renormalize(setup.model,
                                              canonical_point(setup.model, p)),
                                 r0, 0)
    if cone_data is not None:
        return UnstableCertificate("cone_obstruction", dict(cone_data))
    if slice_result is not None and not slice_result.boundary \
            and slice_result.value > SLICE_CERTIFICATE_FLOOR:
        return UnstableCertificate("slice_infimum", {
            "value": slice_result.value,
            "at": slice_result.at,
        })
    value, spread = constant_norm_check(setup, p, cfg.tol, rng)
    if value > cfg.tol and spread < 1e-10 * max(1.0, value):
        return UnstableCertificate("constant_norm", {
            "value": value,
            "spread": spread,
        })
    _, verdict = flow_minimize(setup, p, cfg)
    return verdict


# ---------------------------------------------------------------------------
# slice infimum for the rank-one radial family

@dataclass(frozen=True)
class SliceInfimum:
    value: float
    boundary: bool        # argmin escapes: values keep falling with radius
    at: tuple             # ((z, r), projective representative)


def _slice_parts(model) -> tuple:
    if not (isinstance(model, ProductSum) and len(model.parts) == 2):
        raise StructuralError("slice oracle needs a radial x projective product")
    vpart, zpart = model.parts
    if not (isinstance(vpart, RadialPotential) and isinstance(zpart, FubiniStudy)):
        raise StructuralError("slice oracle needs a radial x projective product")
    if vpart.rep.dim != 2 or zpart.rep.dim != 2 \
            or vpart.group.factors != ("A1",):
        raise StructuralError("slice oracle needs the rank-one setup on C^2 x P1")
    for part in (vpart, zpart):
        if np.max(np.abs(part.form - np.eye(2))) > 1e-12:
            raise StructuralError("slice oracle needs the standard pairing")
    return vpart, zpart


def slice_infimum(setup, c: float) -> SliceInfimum:
    """Grid-plus-refinement infimum of ||mu|| over the 3-parameter slice.

    The slice fixes the projective factor at [0:1] and sweeps v = (z, r),
    z complex, r >= 0; every orbit of the compact group meets it.  The
    residual depends on z only through |z| (conjugating by a diagonal
    unitary rotates the phases), so the coarse grid walks (|z|, r) and the
    local refinement keeps all three real parameters.
    """
    model = setup.model if isinstance(setup, MomentEvaluator) else setup
    vpart, zpart = _slice_parts(model)
    ev = MomentEvaluator(ProductSum((
        RadialPotential(vpart.rep, LogProfile(float(c))), zpart)))
    x = np.array([0.0, 1.0], dtype=complex)

    def nsq(z: complex, r: float) -> float:
        if z == 0.0 and r == 0.0:
            return math.inf          # origin is not a point of the domain
        return ev.residual((np.array([z, r], dtype=complex), x)) ** 2

    radius = 8.0
    rho_grid = np.linspace(0.0, radius, 81)
    r_grid = np.linspace(0.0, radius, 41)
    best_val = math.inf
    best_rho = best_r = 0.0
    for rho in rho_grid:
        for r in r_grid:
            val = nsq(complex(rho), float(r))
            if val < best_val:
                best_val, best_rho, best_r = val, float(rho), float(r)

    # refinement stays inside the searched ball; escaping minima are the
    # shell probes' business, otherwise a c <= 1 tail would be chased forever
    res = scipy.optimize.minimize(
        lambda u: nsq(complex(u[0], u[1]), u[2]),
        np.array([best_rho, 0.0, best_r]),
        method="Nelder-Mead",
        bounds=[(-radius, radius)] * 2 + [(0.0, radius)],
        options={"xatol": 1e-10, "fatol": 1e-20, "maxiter": 4000})
    if res.fun < best_val:
        best_val = float(res.fun)
        best_rho = math.hypot(res.x[0], res.x[1])
        best_r = abs(float(res.x[2]))
    inner = math.sqrt(max(best_val, 0.0))

    # probe outward shells: a tail still falling by half signals an infimum
    # reached only at infinity
    def shell_min(rho: float) -> float:
        vals = [nsq(complex(rho), float(r)) for r in np.linspace(0.0, radius, 41)]
        return math.sqrt(max(min(vals), 0.0))

    t2 = shell_min(2.0 * radius)
    t4 = shell_min(4.0 * radius)
    boundary = t4 < 0.5 * inner and t4 < t2 < inner
    value = min(inner, t2, t4)
    if value == inner:
        at = ((complex(best_rho), best_r), (0.0 + 0.0j, 1.0 + 0.0j))
    else:
        rho_at = 2.0 * radius if value == t2 else 4.0 * radius
        at = ((complex(rho_at), 0.0), (0.0 + 0.0j, 1.0 + 0.0j))
    return SliceInfimum(float(value), bool(boundary), at)


__all__ = [
    "SLICE_CERTIFICATE_FLOOR",
    "FlowError",
    "FlowConfig",
    "FlowTrace",
    "SemistableWitness",
    "UnstableCertificate",
    "Undetermined",
    "Verdict",
    "descent_direction",
    "flow_minimize",
    "constant_norm_check",
    "classify_point",
    "SliceInfimum",
    "slice_infimum",
]
