//! Shared test support: extended-precision oracles (double-double via
//! `twofloat`), random state generators, and a brute-force quadrature.
//!
//! Everything here is independent of the library's computation paths: the
//! oracles re-derive the formulas in ~31-digit arithmetic directly from the
//! inputs, and the brute-force integrator is a plain composite-midpoint sum.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use twofloat::TwoFloat;

use relclock::orbits::Trajectory;
use relclock::rates::{rate_exact, KinematicState};
use relclock::schwarzschild::GravBody;
use relclock::vector::SpaceVector;

pub fn dd(x: f64) -> TwoFloat {
    TwoFloat::from(x)
}

pub fn dd_norm(v: &SpaceVector) -> TwoFloat {
    let (x, y, z) = (dd(v.x), dd(v.y), dd(v.z));
    (x * x + y * y + z * z).sqrt()
}

pub fn dd_dot(a: &SpaceVector, b: &SpaceVector) -> TwoFloat {
    dd(a.x) * dd(b.x) + dd(a.y) * dd(b.y) + dd(a.z) * dd(b.z)
}

/// Exact-rate offset `sqrt(1 + 2V - |v|^2_Sch) - 1` evaluated in
/// double-double arithmetic from the f64 inputs, assembling the
/// Schwarzschild speed-square explicitly.
pub fn dd_offset_exact(body: &GravBody, x: &SpaceVector, v: &SpaceVector) -> TwoFloat {
    let one = dd(1.0);
    let r = dd_norm(x);
    let pot = -dd(body.m_geo()) / r;
    let two_v = dd(2.0) * pot;
    let radial = dd_dot(x, v) / r;
    let speed_sch_sq = dd_dot(v, v) - (two_v / (one + two_v)) * radial * radial;
    let eps = two_v - speed_sch_sq;
    (one + eps).sqrt() - one
}

/// Circular-orbit offset for a body of gravitational parameter `gm_si`
/// (m^3/s^2) and orbit radius `a` (m), all in double-double:
/// `sqrt(1 - 3 m/a) - 1` with `m = GM/c^2`.
pub fn dd_circular_offset(gm_si: f64, c_si: f64, a: f64) -> TwoFloat {
    let one = dd(1.0);
    let m_geo = dd(gm_si) / (dd(c_si) * dd(c_si));
    let v_over_r = m_geo / dd(a);
    (one - dd(3.0) * v_over_r).sqrt() - one
}

/// Seconds per day times the satellite-vs-geoid rate difference,
/// `(1 + offset)(1 - phi0) - 1`, in double-double.
pub fn dd_sat_vs_geoid_per_day(offset: TwoFloat, phi0: f64) -> TwoFloat {
    let one = dd(1.0);
    ((one + offset) * (one - dd(phi0)) - one) * dd(86_400.0)
}

pub fn random_unit(rng: &mut ChaCha8Rng) -> SpaceVector {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).sqrt();
    SpaceVector::new(s * phi.cos(), s * phi.sin(), z)
}

/// Random exterior state: radius log-uniform in `[1.1, 1e12] r_s`, local
/// speed a uniform fraction (up to `speed_cap`) of the local escape speed
/// `sqrt(2m/r)`, then converted from the static observer's orthonormal
/// frame to coordinate velocity.
pub fn random_exterior_state(
    rng: &mut ChaCha8Rng,
    speed_cap: f64,
) -> (GravBody, KinematicState) {
    let m = 10f64.powf(rng.gen_range(-3.0..3.0));
    let body = GravBody::new(m).unwrap();
    let r = body.schwarzschild_radius() * 10f64.powf(rng.gen_range(1.1f64.log10()..12.0));
    let normal = random_unit(rng);
    let x = r * normal;

    let pot = -m / r;
    let one_plus_2v = 1.0 + 2.0 * pot;
    let local_escape = (-2.0 * pot).sqrt();
    let v_loc = rng.gen_range(0.0..speed_cap) * local_escape;
    let direction = random_unit(rng);
    let radial_part = direction.dot(&normal);
    let tangential = direction - radial_part * normal;
    // radial coordinate velocity scales with (1+2V), tangential with its root
    let v = (v_loc * radial_part * one_plus_2v) * normal
        + (v_loc * one_plus_2v.sqrt()) * tangential;
    (body, KinematicState::new(0.0, x, v))
}

/// Random exterior state with exactly tangential velocity (Gram-Schmidt
/// leaves `n.v` at rounding level, ~1e-16 |v|).
pub fn random_circular_state(rng: &mut ChaCha8Rng) -> (GravBody, KinematicState) {
    let m = 10f64.powf(rng.gen_range(-3.0..3.0));
    let body = GravBody::new(m).unwrap();
    let r = body.schwarzschild_radius() * 10f64.powf(rng.gen_range(1.1f64.log10()..12.0));
    let normal = random_unit(rng);
    let x = r * normal;

    let pot = -m / r;
    let one_plus_2v = 1.0 + 2.0 * pot;
    let v_loc: f64 = rng.gen_range(1e-6..0.9);
    let raw = random_unit(rng);
    let tangential = (raw - raw.dot(&normal) * normal).outward_normal().unwrap();
    let v = (v_loc * one_plus_2v.sqrt()) * tangential;
    (body, KinematicState::new(0.0, x, v))
}

/// Rotation matrix from a uniformly random unit quaternion.
pub fn random_rotation(rng: &mut ChaCha8Rng) -> [[f64; 3]; 3] {
    let u1: f64 = rng.gen_range(0.0..1.0);
    let (u2, u3): (f64, f64) = (
        rng.gen_range(0.0..std::f64::consts::TAU),
        rng.gen_range(0.0..std::f64::consts::TAU),
    );
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    let (qx, qy) = (a * u2.sin(), a * u2.cos());
    let (qz, qw) = (b * u3.sin(), b * u3.cos());
    [
        [
            1.0 - 2.0 * (qy * qy + qz * qz),
            2.0 * (qx * qy - qz * qw),
            2.0 * (qx * qz + qy * qw),
        ],
        [
            2.0 * (qx * qy + qz * qw),
            1.0 - 2.0 * (qx * qx + qz * qz),
            2.0 * (qy * qz - qx * qw),
        ],
        [
            2.0 * (qx * qz - qy * qw),
            2.0 * (qy * qz + qx * qw),
            1.0 - 2.0 * (qx * qx + qy * qy),
        ],
    ]
}

pub fn rotate(m: &[[f64; 3]; 3], v: &SpaceVector) -> SpaceVector {
    SpaceVector::new(
        m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
        m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
        m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
    )
}

/// Composite-midpoint integral of the exact rate offset with Kahan
/// summation; the brute-force counterpart of the adaptive quadrature.
pub fn midpoint_offset_integral(
    body: &GravBody,
    traj: &Trajectory,
    t0: f64,
    t1: f64,
    steps: usize,
) -> f64 {
    let h = (t1 - t0) / steps as f64;
    let mut sum = 0.0;
    let mut carry = 0.0;
    for k in 0..steps {
        let t = t0 + (k as f64 + 0.5) * h;
        let state = traj.state_at(body, t).unwrap();
        let offset = rate_exact(body, &state).unwrap().offset;
        let y = offset - carry;
        let tmp = sum + y;
        carry = (tmp - sum) - y;
        sum = tmp;
    }
    sum * h
}

/// Proper time by the brute-force route: `(t1 - t0) + midpoint offsets`.
pub fn midpoint_proper_time(
    body: &GravBody,
    traj: &Trajectory,
    t0: f64,
    t1: f64,
    steps: usize,
) -> f64 {
    (t1 - t0) + midpoint_offset_integral(body, traj, t0, t1, steps)
}

pub fn rel_err(got: f64, expected: f64) -> f64 {
    if expected == 0.0 {
        got.abs()
    } else {
        ((got - expected) / expected).abs()
    }
}

pub fn dd_rel_err(got: f64, expected: TwoFloat) -> f64 {
    let diff: TwoFloat = dd(got) - expected;
    f64::from(diff / expected).abs()
}
