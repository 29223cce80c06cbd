//! Property tests for the geometric and rate invariants.

mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use relclock::rates::{geoid_rescale, rate_exact, GeoidConstant, KinematicState};
use relclock::schwarzschild::{potential, space_length_sq, GravBody};
use relclock::units::{from_geometric, to_geometric, QuantityKind, UnitSystem};
use relclock::vector::SpaceVector;

fn finite_vector() -> impl Strategy<Value = SpaceVector> {
    (
        -1.0e9..1.0e9_f64,
        -1.0e9..1.0e9_f64,
        -1.0e9..1.0e9_f64,
    )
        .prop_map(|(x, y, z)| SpaceVector::new(x, y, z))
}

proptest! {
    #[test]
    fn outward_normal_is_unit_and_scale_invariant(
        v in finite_vector().prop_filter("nonzero", |v| v.norm() > 1e-6),
        alpha in 1e-3..1e3_f64,
    ) {
        let n = v.outward_normal().unwrap();
        prop_assert!((n.norm() - 1.0).abs() <= 1e-15);
        let scaled = (v * alpha).outward_normal().unwrap();
        prop_assert!((scaled - n).norm() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn unit_roundtrip_within_two_ulp(
        value in -1e12..1e12_f64,
        kind_index in 0usize..5,
    ) {
        let kind = [
            QuantityKind::Length,
            QuantityKind::Time,
            QuantityKind::Mass,
            QuantityKind::Speed,
            QuantityKind::Potential,
        ][kind_index];
        let u = UnitSystem::codata();
        let geo = to_geometric(value, kind, &u).unwrap();
        let back = from_geometric(&geo, &u).unwrap();
        prop_assert!((back - value).abs() <= 2.0 * value.abs() * f64::EPSILON,
            "{kind:?}: {value} -> {back}");
    }

    #[test]
    fn inner_product_symmetric_and_bilinear(
        a in finite_vector(),
        b in finite_vector(),
        c in finite_vector(),
        s in -1e3..1e3_f64,
    ) {
        prop_assert_eq!(a.dot(&b), b.dot(&a));
        prop_assert_eq!(a.norm_sq(), a.dot(&a));
        // bilinearity up to rounding
        let lhs = (a * s + b).dot(&c);
        let rhs = s * a.dot(&c) + b.dot(&c);
        let scale = s.abs() * a.norm() * c.norm() + b.norm() * c.norm();
        prop_assert!((lhs - rhs).abs() <= 1e-14 * scale.max(1e-300));
    }

    #[test]
    fn potential_is_negative_and_monotone_in_radius(
        m in 1e-6..1e3_f64,
        r1 in 1e3..1e9_f64,
        factor in 1.001..1e3_f64,
    ) {
        let body = GravBody::new(m).unwrap();
        let v1 = potential(&body, &SpaceVector::new(r1, 0.0, 0.0)).unwrap();
        let v2 = potential(&body, &SpaceVector::new(r1 * factor, 0.0, 0.0)).unwrap();
        prop_assert!(v1 < 0.0 && v2 < 0.0);
        prop_assert!(v2 > v1, "potential must increase toward zero outward");
    }

    #[test]
    fn geoid_rescale_is_linear(
        phi0 in -9.9e-9..9.9e-9_f64,
        a in -1e6..1e6_f64,
        b in -1e6..1e6_f64,
    ) {
        let g = GeoidConstant::new(phi0).unwrap();
        let whole = geoid_rescale(&g, a + b).unwrap();
        let parts = geoid_rescale(&g, a).unwrap() + geoid_rescale(&g, b).unwrap();
        let scale = (a.abs() + b.abs()).max(1e-300);
        prop_assert!((whole - parts).abs() <= 2.0 * f64::EPSILON * scale);
    }
}

// The rate and metric invariants need correlated geometry (exterior radii,
// timelike speeds), which is easier to steer with a seeded RNG loop.

#[test]
fn space_length_positive_definite() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..2_000 {
        let (body, state) = random_exterior_state(&mut rng, 0.5);
        let q = random_unit(&mut rng) * 10f64.powf(rand::Rng::gen_range(&mut rng, -3.0..3.0));
        let len = space_length_sq(&body, &state.x, &q).unwrap();
        assert!(len > 0.0, "spatial metric not positive definite");
        assert!(len >= q.norm_sq() * (1.0 - 1e-12), "below Euclidean");
    }
}

#[test]
fn space_length_rotation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..2_000 {
        let (body, state) = random_exterior_state(&mut rng, 0.5);
        let q = random_unit(&mut rng) * 10f64.powf(rand::Rng::gen_range(&mut rng, -2.0..2.0));
        let rot = random_rotation(&mut rng);
        let original = space_length_sq(&body, &state.x, &q).unwrap();
        let rotated = space_length_sq(&body, &rotate(&rot, &state.x), &rotate(&rot, &q)).unwrap();
        assert!(
            ((original - rotated) / original).abs() <= 1e-12,
            "rotation changed the length-square: {original} vs {rotated}"
        );
    }
}

#[test]
fn minkowski_limit_matches_flat_forms() {
    // As m -> 0 all outputs converge to the flat-space values.
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let body = GravBody::new(1e-30).unwrap();
    for _ in 0..2_000 {
        let x = random_unit(&mut rng) * 1.0e7;
        let q = random_unit(&mut rng) * 3.0;
        let len = space_length_sq(&body, &x, &q).unwrap();
        assert!((len - q.norm_sq()).abs() <= 1e-15 * q.norm_sq().max(1.0));

        let v = random_unit(&mut rng) * 0.5;
        let state = KinematicState::new(0.0, x, v);
        let rate = rate_exact(&body, &state).unwrap().rate;
        let flat = (1.0 - v.norm_sq()).sqrt();
        assert!((rate - flat).abs() <= 1e-15);
    }
}

#[test]
fn rate_bounded_by_static_limit() {
    // 0 < rate <= sqrt(1+2V) < 1, equality only at v = 0.
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..5_000 {
        let (body, state) = random_exterior_state(&mut rng, 0.9);
        let rate = rate_exact(&body, &state).unwrap().rate;
        let v_pot = potential(&body, &state.x).unwrap();
        let static_limit = (1.0 + 2.0 * v_pot).sqrt();
        assert!(rate > 0.0 && rate < 1.0);
        assert!(rate <= static_limit * (1.0 + 4.0 * f64::EPSILON));
        // strictness is only resolvable once |v|^2/2 clears the ulp of the
        // rate itself
        if state.v.norm_sq() > 1e-13 {
            assert!(rate < static_limit);
        }
    }

    // equality at rest
    let body = GravBody::new(1.0).unwrap();
    let state = KinematicState::new(0.0, SpaceVector::new(5.0, 0.0, 0.0), SpaceVector::ZERO);
    let rate = rate_exact(&body, &state).unwrap().rate;
    assert!((rate - 0.6f64.sqrt()).abs() <= f64::EPSILON);
}

#[test]
fn rate_strictly_decreasing_in_speed() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for _ in 0..1_000 {
        let (body, state) = random_exterior_state(&mut rng, 0.4);
        if state.v.norm_sq() < 1e-13 {
            continue;
        }
        let slow = rate_exact(&body, &state).unwrap().rate;
        let faster = KinematicState::new(state.t, state.x, state.v * 1.5);
        let fast = rate_exact(&body, &faster).unwrap().rate;
        assert!(fast < slow, "rate must drop as |v| grows");
    }
}

#[test]
fn rate_depends_only_on_speed_and_radial_projection() {
    // Rotating v about the normal keeps |v| and n.v fixed, so the rate
    // must not move beyond rounding.
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for _ in 0..2_000 {
        let (body, state) = random_exterior_state(&mut rng, 0.7);
        let n = state.x.outward_normal().unwrap();
        let radial = n.dot(&state.v);
        let tangential = state.v - radial * n;
        let t_norm = tangential.norm();
        if t_norm < 1e-15 {
            continue;
        }
        let t_hat = tangential / t_norm;
        let b_hat = n.cross(&t_hat);
        let angle: f64 = rand::Rng::gen_range(&mut rng, 0.0..std::f64::consts::TAU);
        let rotated_v = radial * n + t_norm * (angle.cos() * t_hat + angle.sin() * b_hat);
        let rotated = KinematicState::new(state.t, state.x, rotated_v);
        let r0 = rate_exact(&body, &state).unwrap().rate;
        let r1 = rate_exact(&body, &rotated).unwrap().rate;
        assert!((r0 - r1).abs() <= 1e-15, "rate moved under rotation about n");
    }
}

#[test]
fn offset_composition_consistent() {
    // |(1 + offset) - rate| <= 1 ulp of rate for every result.
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for _ in 0..5_000 {
        let (body, state) = random_exterior_state(&mut rng, 0.9);
        let result = rate_exact(&body, &state).unwrap();
        let recomposed = 1.0 + result.offset;
        assert!((recomposed - result.rate).abs() <= result.rate.abs() * f64::EPSILON);
    }
}
