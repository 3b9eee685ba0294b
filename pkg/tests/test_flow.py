"""Flow behavior on the worked models: witnesses, certificates, slice oracle."""

import math

import numpy as np
import pytest

from momentstab.groups import (
    GroupDescriptor,
    StructuralError,
    exp_group,
    random_algebra_element,
)
from momentstab.reps import build_representation
from momentstab.moments import (
    Flat,
    FubiniStudy,
    LogProfile,
    MomentEvaluator,
    ProductSum,
    RadialPotential,
    sample_point,
)
from momentstab.flow import (
    SLICE_CERTIFICATE_FLOOR,
    FlowConfig,
    FlowError,
    SemistableWitness,
    SliceInfimum,
    Undetermined,
    UnstableCertificate,
    classify_point,
    constant_norm_check,
    descent_direction,
    flow_minimize,
    slice_infimum,
)

A1 = GroupDescriptor(("A1",))
A1A1 = GroupDescriptor(("A1", "A1"))
REP2 = build_representation(A1, ("standard", 0))
REP4_HALF = build_representation(
    A1A1, ("scale_form", 0.5, ("direct_sum", ("standard", 0), ("standard", 1))))
REP4_STD = build_representation(
    A1A1, ("direct_sum", ("standard", 0), ("standard", 1)))

P1 = MomentEvaluator(FubiniStudy(REP2))
Z3 = MomentEvaluator(ProductSum((FubiniStudy(REP2), FubiniStudy(REP2))))
C4_PAIR = MomentEvaluator(ProductSum((Flat(REP4_HALF), FubiniStudy(REP4_STD))))


def log_evaluator(c):
    return MomentEvaluator(
        ProductSum((RadialPotential(REP2, LogProfile(c)), FubiniStudy(REP2))))


# ---------------------------------------------------------------------------
# configuration and direction

def test_config_validation():
    with pytest.raises(StructuralError):
        FlowConfig(max_iters=0)
    with pytest.raises(StructuralError):
        FlowConfig(tol=0.0)
    with pytest.raises(StructuralError):
        FlowConfig(armijo_shrink=1.0)
    with pytest.raises(StructuralError):
        FlowConfig(initial_step=-0.1)


def test_descent_direction_zero_at_zero():
    d = descent_direction(C4_PAIR, ([1, 0, 1, 0], [0, 1, 0, 1]))
    assert d.norm() == 0.0


def test_descent_direction_matrix_form():
    # at [1:0] the projective moment is diag(1/2,-1/2); the direction is that
    # Hermitian matrix viewed inside the complexified algebra
    d = descent_direction(P1, [1, 0])
    assert np.max(np.abs(d.blocks[0] - np.diag([0.5, -0.5]))) < 1e-14
    assert not d.compact


def test_descent_direction_vanishes_iff_moment_does():
    rng = np.random.default_rng(0)
    ev = log_evaluator(1.5)
    for _ in range(20):
        p = sample_point(ev.model, rng)
        assert (descent_direction(ev, p).norm() <= 1e-14) == \
            (ev.residual(p) <= 1e-14)


def test_descent_slope_nonpositive():
    rng = np.random.default_rng(1)
    ev = log_evaluator(2.0)
    h = 1e-5
    for _ in range(50):
        p = sample_point(ev.model, rng)
        d = descent_direction(ev, p)
        if d.norm() < 1e-12:
            continue

        def nsq(t):
            return ev.residual(ev.translate(exp_group(d.scale(-t)), p)) ** 2

        slope = (nsq(h) - nsq(-h)) / (2 * h)
        assert slope <= 1e-8


# ---------------------------------------------------------------------------
# flow_minimize

def test_flow_starts_at_zero():
    trace, verdict = flow_minimize(C4_PAIR, ([1, 0, 1, 0], [0, 1, 0, 1]))
    assert isinstance(verdict, SemistableWitness)
    assert verdict.iterations == 0
    assert verdict.residual < 1e-12
    assert len(trace.steps) == 1


def test_flow_log2_converges():
    trace, verdict = flow_minimize(
        log_evaluator(2.0), (np.array([3.0, 0.2]), np.array([0.0, 1.0])))
    assert isinstance(verdict, SemistableWitness)
    assert verdict.residual < 1e-8


def test_flow_trace_monotone():
    rng = np.random.default_rng(2)
    ev = log_evaluator(1.3)
    for _ in range(5):
        trace, _ = flow_minimize(ev, sample_point(ev.model, rng))
        values = [s[1] for s in trace.steps]
        assert all(b <= a + 1e-15 for a, b in zip(values, values[1:]))


def test_flow_pair_of_lines_examples():
    trace, verdict = flow_minimize(Z3, ([1, 0], [1, 1]))
    assert isinstance(verdict, SemistableWitness)
    assert verdict.residual < 1e-8
    trace, verdict = flow_minimize(Z3, ([1, 0], [1, 0]))
    assert isinstance(verdict, Undetermined)
    assert verdict.best_residual >= 0.9


def test_flow_projective_line_residual_is_half():
    trace, verdict = flow_minimize(P1, [1.0, 0.3 + 0.2j])
    assert isinstance(verdict, Undetermined)
    assert abs(verdict.best_residual - 0.5) < 1e-12


def test_flow_verdict_orbit_invariance():
    rng = np.random.default_rng(3)
    cases = [
        (log_evaluator(2.0), (np.array([3.0, 0.2]), np.array([0.0, 1.0])),
         SemistableWitness),
        (P1, np.array([1.0, 0.3 + 0.2j]), Undetermined),
        (Z3, (np.array([1.0, 0.0]), np.array([1.0, 1.0])), SemistableWitness),
    ]
    for ev, p0, want in cases:
        for _ in range(10):
            xi = random_algebra_element(ev.group, rng,
                                        norm=float(rng.uniform(0.1, 1.0)),
                                        compact=False)
            moved = ev.translate(exp_group(xi), p0)
            _, verdict = flow_minimize(ev, moved)
            assert isinstance(verdict, want)


def test_flow_scale_invariant_projective_start():
    _, a = flow_minimize(Z3, ([1e6, 0], [1e-6, 1e-6]))
    assert isinstance(a, SemistableWitness)


def test_flow_overflow_raises():
    ev = MomentEvaluator(Flat(REP2))
    with np.errstate(over="ignore", invalid="ignore"):
        with pytest.raises(FlowError):
            flow_minimize(ev, [1e200, 0.0])


# ---------------------------------------------------------------------------
# classification

def test_classify_constant_norm_on_projective_line():
    verdict = classify_point(P1, [1.0, 2.0j])
    assert isinstance(verdict, UnstableCertificate)
    assert verdict.kind == "constant_norm"
    assert abs(verdict.data["value"] - 0.5) < 1e-10


def test_classify_constant_norm_on_diagonal():
    verdict = classify_point(Z3, ([1, 0], [1, 0]))
    assert isinstance(verdict, UnstableCertificate)
    assert verdict.kind == "constant_norm"
    assert verdict.data["value"] >= 0.9


def test_classify_exact_zero_short_circuits():
    verdict = classify_point(C4_PAIR, ([1, 0, 1, 0], [0, 1, 0, 1]))
    assert isinstance(verdict, SemistableWitness)
    assert verdict.iterations == 0
    assert verdict.residual < 1e-12


def test_classify_generic_point_flows_to_witness():
    verdict = classify_point(Z3, ([1, 0], [2, 1 + 1j]))
    assert isinstance(verdict, SemistableWitness)


def test_classify_cone_data_wins():
    verdict = classify_point(P1, [1.0, 2.0], cone_data={"separator": (1, 2)})
    assert isinstance(verdict, UnstableCertificate)
    assert verdict.kind == "cone_obstruction"
    assert verdict.data["separator"] == (1, 2)


def test_classify_slice_certificate_respects_boundary_flag():
    ev = log_evaluator(0.5)
    p = (np.array([3.0, 0.2]), np.array([0.0, 1.0]))
    good = SliceInfimum(0.25, False, ((3.0 + 0j, 0.0), (0j, 1 + 0j)))
    verdict = classify_point(ev, p, slice_result=good)
    assert isinstance(verdict, UnstableCertificate)
    assert verdict.kind == "slice_infimum"
    flagged = SliceInfimum(0.25, True, ((3.0 + 0j, 0.0), (0j, 1 + 0j)))
    verdict = classify_point(log_evaluator(1.0), p, slice_result=flagged,
                             cfg=FlowConfig(max_iters=50, stall_window=20))
    assert not isinstance(verdict, UnstableCertificate)


def test_constant_norm_check_varies_on_flat_model():
    ev = MomentEvaluator(Flat(REP2))
    value, spread = constant_norm_check(ev, [1.0, 0.0], 1e-8,
                                        np.random.default_rng(4))
    assert spread > 1e-3


# ---------------------------------------------------------------------------
# slice infimum

def test_slice_rejects_wrong_shape():
    with pytest.raises(StructuralError):
        slice_infimum(P1, 2.0)
    with pytest.raises(StructuralError):
        slice_infimum(MomentEvaluator(ProductSum(
            (FubiniStudy(REP2), FubiniStudy(REP2)))), 2.0)


def test_slice_zero_for_c_two():
    s = slice_infimum(log_evaluator(2.0), 2.0)
    assert s.value < 1e-8
    assert not s.boundary
    (z, r), _ = s.at
    assert abs(abs(z) - 1.0) < 1e-3
    assert abs(r) < 1e-3


def test_slice_boundary_flag_at_c_one():
    s = slice_infimum(log_evaluator(2.0), 1.0)
    assert s.boundary
    assert s.value > 0.0


def test_slice_half_value():
    s = slice_infimum(log_evaluator(2.0), 0.5)
    assert not s.boundary
    assert abs(s.value - 0.25) < 5e-3


def test_slice_threshold_family():
    ev = log_evaluator(2.0)
    for c in (0.25, 0.5, 0.9):
        s = slice_infimum(ev, c)
        assert s.value > SLICE_CERTIFICATE_FLOOR and not s.boundary
    for c in (1.1, 1.5, 2.0, 4.0):
        s = slice_infimum(ev, c)
        assert s.value < 1e-6
    assert slice_infimum(ev, 1.0).boundary
