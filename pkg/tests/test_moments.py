"""Moment evaluation: frozen anchor values, the defining condition, rank law."""

import math

import numpy as np
import pytest

from momentstab.groups import (
    AlgebraElement,
    GroupDescriptor,
    StructuralError,
    coadjoint_action,
    exp_group,
    random_algebra_element,
    random_unitary,
    trace_pairing,
)
from momentstab.reps import build_representation, VectorPoint
from momentstab.moments import (
    MOMENT_POTENTIAL_SCALE,
    CustomProfile,
    DomainError,
    Flat,
    FubiniStudy,
    LogProfile,
    MomentEvaluator,
    PowerProfile,
    ProductSum,
    RadialPotential,
    hermitian_direction,
    moment_flat,
    moment_from_potential,
    moment_fubini_study,
    moment_radial,
    moment_rank,
    moment_sum,
    orbit_dimension,
    sample_point,
    shift_moment,
    verify_moment_condition,
)

A1 = GroupDescriptor(("A1",))
A2 = GroupDescriptor(("A2",))
A1A1 = GroupDescriptor(("A1", "A1"))

REP2 = build_representation(A1, ("standard", 0))
REP3 = build_representation(A2, ("standard", 0))
REP4_HALF = build_representation(
    A1A1, ("scale_form", 0.5, ("direct_sum", ("standard", 0), ("standard", 1))))
REP4_STD = build_representation(
    A1A1, ("direct_sum", ("standard", 0), ("standard", 1)))


# ---------------------------------------------------------------------------
# flat model

def test_flat_zero_vector():
    assert moment_flat(REP2, None, [0, 0]).max_entry() == 0.0


def test_flat_half_form_anchor():
    # H = I/2 on C^2 + C^2 at ((1,0),(1,0))
    B = moment_flat(REP4_HALF, None, [1, 0, 1, 0])
    want = np.diag([0.25, -0.25])
    for b in B.blocks:
        assert np.max(np.abs(b - want)) < 1e-14


def test_flat_quadratic_scaling():
    rng = np.random.default_rng(1)
    for _ in range(10):
        v = sample_point(Flat(REP3), rng)
        t = float(rng.uniform(0.2, 3.0))
        a = moment_flat(REP3, None, t * v)
        b = moment_flat(REP3, None, v).scale(t * t)
        assert max(np.max(np.abs(x - y)) for x, y in zip(a.blocks, b.blocks)) < 1e-12


# ---------------------------------------------------------------------------
# radial model

def test_radial_log_anchor():
    B = moment_radial(REP2, None, LogProfile(2.0), [1, 0])
    assert np.max(np.abs(B.blocks[0] - np.diag([0.5, -0.5]))) < 1e-14


def test_radial_power_equals_flat():
    rng = np.random.default_rng(2)
    for _ in range(100):
        v = sample_point(Flat(REP3), rng, scale=float(rng.uniform(0.1, 3.0)))
        a = moment_radial(REP3, None, PowerProfile(), v)
        b = moment_flat(REP3, None, v)
        assert max(np.max(np.abs(x - y)) for x, y in zip(a.blocks, b.blocks)) < 1e-12


def test_radial_singular_profile_at_origin():
    prof = CustomProfile(phi=lambda s: math.sqrt(s),
                         phi_prime=lambda s: 0.5 / math.sqrt(s))
    with pytest.raises(DomainError):
        moment_radial(REP2, None, prof, [0, 0])


def test_log_profile_requires_positive_c():
    with pytest.raises(StructuralError):
        LogProfile(0.0)
    with pytest.raises(StructuralError):
        LogProfile(-1.0)


def test_custom_profile_rejects_decreasing_phi():
    with pytest.raises(StructuralError):
        CustomProfile(phi=lambda s: -s, phi_prime=lambda s: -1.0)


# ---------------------------------------------------------------------------
# projective model

def test_fubini_study_p1_anchor():
    B = moment_fubini_study(REP2, None, [0, 1])
    assert np.max(np.abs(B.blocks[0] - np.diag([-0.5, 0.5]))) < 1e-14


def test_fubini_study_p3_anchor():
    B = moment_fubini_study(REP4_STD, None, [0, 1, 0, 1])
    want = np.diag([-0.25, 0.25])
    for b in B.blocks:
        assert np.max(np.abs(b - want)) < 1e-14


def test_fubini_study_scale_invariance():
    rng = np.random.default_rng(3)
    for _ in range(20):
        x = sample_point(FubiniStudy(REP3), rng)
        lam = complex(rng.standard_normal(), rng.standard_normal())
        if abs(lam) < 1e-3:
            continue
        a = moment_fubini_study(REP3, None, x)
        b = moment_fubini_study(REP3, None, lam * x)
        assert max(np.max(np.abs(p - q)) for p, q in zip(a.blocks, b.blocks)) < 1e-12


def test_fubini_study_constant_norm_on_p1():
    rng = np.random.default_rng(4)
    for _ in range(50):
        x = sample_point(FubiniStudy(REP2), rng)
        assert abs(moment_fubini_study(REP2, None, x).norm() - 0.5) < 1e-12


def test_fubini_study_rejects_zero():
    with pytest.raises(DomainError):
        moment_fubini_study(REP2, None, [0, 0])


# ---------------------------------------------------------------------------
# sums

def test_moment_sum_single_part_identity():
    ev = MomentEvaluator(Flat(REP2))
    v = [1.0, 2.0j]
    a = moment_sum([(ev, v)])
    b = ev.moment(v)
    assert max(np.max(np.abs(x - y)) for x, y in zip(a.blocks, b.blocks)) == 0.0


def test_moment_sum_exact_cancellation():
    parts = [(MomentEvaluator(Flat(REP4_HALF)), [1, 0, 1, 0]),
             (MomentEvaluator(FubiniStudy(REP4_STD)), [0, 1, 0, 1])]
    assert moment_sum(parts).max_entry() == 0.0


def test_moment_sum_slice_cancellation():
    # radial Log{2} at (z,0) with |z| = 1 against the projective value at [0:1]
    parts = [(MomentEvaluator(RadialPotential(REP2, LogProfile(2.0))),
              [np.exp(0.7j), 0]),
             (MomentEvaluator(FubiniStudy(REP2)), [0, 1])]
    assert moment_sum(parts).max_entry() < 1e-15


def test_moment_sum_group_mismatch():
    with pytest.raises(StructuralError):
        moment_sum([(MomentEvaluator(Flat(REP2)), [1, 0]),
                    (MomentEvaluator(Flat(REP3)), [1, 0, 0])])


def test_moment_sum_triangle_inequality():
    rng = np.random.default_rng(5)
    ev1 = MomentEvaluator(Flat(REP2))
    ev2 = MomentEvaluator(FubiniStudy(REP2))
    for _ in range(10):
        v = sample_point(ev1.model, rng)
        x = sample_point(ev2.model, rng)
        total = moment_sum([(ev1, v), (ev2, x)])
        assert total.norm() <= ev1.residual(v) + ev2.residual(x) + 1e-12


def test_product_model_matches_moment_sum():
    model = ProductSum((Flat(REP4_HALF), FubiniStudy(REP4_STD)))
    ev = MomentEvaluator(model)
    B = ev.moment(([1, 0, 1, 0], [0, 1, 0, 1]))
    assert B.max_entry() == 0.0
    assert ev.residual(([1, 0, 1, 0], [0, 1, 0, 1])) == 0.0


def test_product_model_rejects_mixed_groups():
    with pytest.raises(StructuralError):
        ProductSum((Flat(REP2), Flat(REP3)))


# ---------------------------------------------------------------------------
# potential derivative and shifts

def test_moment_from_potential_zero_direction():
    zero = AlgebraElement(A1, (np.zeros((2, 2), dtype=complex),))
    assert moment_from_potential(PowerProfile(), zero,
                                 VectorPoint(REP2, [1, 0])) == 0.0


def test_moment_from_potential_flat_anchor():
    xi = AlgebraElement(A1, (np.diag([1j, -1j]),))
    v = VectorPoint(REP2, [1, 0])
    raw = moment_from_potential(PowerProfile(), xi, v)
    paired = trace_pairing(xi, moment_flat(REP2, None, [1, 0]))
    assert abs(raw - 2.0) < 1e-14
    assert abs(paired - MOMENT_POTENTIAL_SCALE * raw) < 1e-12


def test_moment_from_potential_matches_finite_differences():
    rng = np.random.default_rng(6)
    model = RadialPotential(REP3, LogProfile(1.5))
    for _ in range(50):
        v = sample_point(model, rng)
        xi = random_algebra_element(A2, rng)
        analytic = moment_from_potential(model, xi, v)
        field = MomentEvaluator(model).vector_field(xi, v)
        h = 1e-5

        def pot(c):
            return MomentEvaluator(model).potential(v + c * 1j * field)

        fd = (pot(h) - pot(-h)) / (2 * h)
        assert abs(analytic - fd) < 1e-6


def test_shift_by_constant_is_identity():
    base = MomentEvaluator(Flat(REP2))
    shifted = shift_moment(base, lambda s: 3.0)
    rng = np.random.default_rng(7)
    for _ in range(10):
        v = sample_point(base.model, rng)
        a, b = base.moment(v), shifted.moment(v)
        assert max(np.max(np.abs(x - y)) for x, y in zip(a.blocks, b.blocks)) == 0.0


def test_shift_flat_by_log_matches_combined_profile():
    base = MomentEvaluator(Flat(REP2))
    shifted = shift_moment(base, LogProfile(2.0))
    combined = MomentEvaluator(RadialPotential(REP2, CustomProfile(
        phi=lambda s: s + 2.0 * math.log1p(s),
        phi_prime=lambda s: 1.0 + 2.0 / (1.0 + s))))
    rng = np.random.default_rng(8)
    for _ in range(20):
        v = sample_point(base.model, rng)
        a, b = shifted.moment(v), combined.moment(v)
        assert max(np.max(np.abs(x - y)) for x, y in zip(a.blocks, b.blocks)) < 1e-12


def test_shifted_evaluator_satisfies_moment_condition():
    base = MomentEvaluator(Flat(REP2))
    shifted = shift_moment(base, LogProfile(0.7))
    rng = np.random.default_rng(9)
    for _ in range(10):
        p = sample_point(shifted.model, rng)
        w = sample_point(shifted.model, rng)
        xi = random_algebra_element(A1, rng)
        assert verify_moment_condition(shifted.model, p, xi, w, 1e-4) < 1e-5


def test_shift_rejects_projective_base():
    with pytest.raises(StructuralError):
        shift_moment(MomentEvaluator(FubiniStudy(REP2)), lambda s: s)


# ---------------------------------------------------------------------------
# the defining condition, by finite differences of the potential

def _condition_samples(model, group, seed, n=50):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        p = sample_point(model, rng)
        w = sample_point(model, rng)
        xi = random_algebra_element(group, rng)
        out.append((p, xi, w))
    return out


def test_moment_condition_flat():
    model = Flat(REP3)
    for p, xi, w in _condition_samples(model, A2, 10):
        assert verify_moment_condition(model, p, xi, w, 1e-4) < 1e-6


def test_moment_condition_log():
    model = RadialPotential(REP2, LogProfile(2.0))
    for p, xi, w in _condition_samples(model, A1, 11):
        assert verify_moment_condition(model, p, xi, w, 1e-4) < 1e-5


def test_moment_condition_fubini_study():
    model = FubiniStudy(REP3)
    for p, xi, w in _condition_samples(model, A2, 12):
        assert verify_moment_condition(model, p, xi, w, 1e-4) < 1e-5


def test_moment_condition_product():
    model = ProductSum((RadialPotential(REP2, LogProfile(1.2)),
                        FubiniStudy(REP2)))
    rng = np.random.default_rng(13)
    for _ in range(20):
        p = sample_point(model, rng)
        w = sample_point(model, rng)
        xi = random_algebra_element(A1, rng)
        assert verify_moment_condition(model, p, xi, w, 1e-4) < 1e-5


def test_moment_condition_second_order():
    model = RadialPotential(REP2, LogProfile(2.0))
    ratios = []
    for p, xi, w in _condition_samples(model, A1, 14, n=50):
        coarse = verify_moment_condition(model, p, xi, w, 1e-3)
        fine = verify_moment_condition(model, p, xi, w, 1e-4)
        if fine > 1e-12:
            ratios.append(coarse / fine)
    assert 50.0 < float(np.median(ratios)) < 200.0


def test_moment_condition_rejects_degenerate_step():
    model = Flat(REP2)
    xi = AlgebraElement(A1, (np.diag([1j, -1j]),))
    with pytest.raises(DomainError):
        verify_moment_condition(model, [1, 0], xi, [0, 1], 0.0)
    with pytest.raises(DomainError):
        verify_moment_condition(model, [1, 0], xi, [0, 1], -1e-3)


# ---------------------------------------------------------------------------
# equivariance, energies, ranks

MODELS = [
    (Flat(REP3), A2),
    (RadialPotential(REP2, LogProfile(2.0)), A1),
    (FubiniStudy(REP3), A2),
    (ProductSum((Flat(REP4_HALF), FubiniStudy(REP4_STD))), A1A1),
]


@pytest.mark.parametrize("model,group", MODELS,
                         ids=[type(m).__name__ + "_" + "x".join(g.factors)
                              for m, g in MODELS])
def test_equivariance(model, group):
    ev = MomentEvaluator(model)
    rng = np.random.default_rng(15)
    for _ in range(100):
        p = sample_point(model, rng)
        k = random_unitary(group, rng)
        lhs = ev.moment(ev.translate(k, p))
        rhs = coadjoint_action(k, ev.moment(p))
        assert max(np.max(np.abs(a - b))
                   for a, b in zip(lhs.blocks, rhs.blocks)) < 1e-10


@pytest.mark.parametrize("model,group", MODELS,
                         ids=[type(m).__name__ + "_" + "x".join(g.factors)
                              for m, g in MODELS])
def test_descent_energy_matches_norm_slope(model, group):
    ev = MomentEvaluator(model)
    rng = np.random.default_rng(16)
    checked = 0
    for _ in range(20):
        p = sample_point(model, rng)
        beta = ev.moment(p)
        if beta.norm() < 1e-8:
            continue
        energy = ev.descent_energy(p, beta)
        assert energy >= -1e-12
        h = 1e-6

        def norm_sq(t):
            g = exp_group(hermitian_direction(beta).scale(-t))
            return ev.moment(ev.translate(g, p)).norm() ** 2

        slope = (norm_sq(h) - norm_sq(-h)) / (2 * h)
        assert abs(slope + energy) < 1e-5 * max(1.0, energy)
        checked += 1
    assert checked >= 10


def test_orbit_dimension_examples():
    # SU(2) on P^1 is transitive; a nonzero vector in C^2 has trivial stabilizer
    assert orbit_dimension(FubiniStudy(REP2), [1, 2 + 1j]) == 2
    assert orbit_dimension(Flat(REP2), [1, 0]) == 3
    assert orbit_dimension(Flat(REP2), [0, 0]) == 0


def test_rank_law_matches_orbit_dimension():
    rng = np.random.default_rng(17)
    for model, group in MODELS:
        for _ in range(5):
            p = sample_point(model, rng)
            assert moment_rank(model, p) == orbit_dimension(model, p)


def test_moment_outputs_are_structurally_valid():
    # CoadjointVector construction enforces Hermitian traceless blocks
    rng = np.random.default_rng(18)
    for model, _ in MODELS:
        for _ in range(5):
            B = MomentEvaluator(model).moment(sample_point(model, rng))
            for b in B.blocks:
                assert abs(np.trace(b)) < 1e-10
                assert np.max(np.abs(b - b.conj().T)) < 1e-10
