//! Test-only oracles, kept independent of the library code paths they check.
#![allow(dead_code)]

use dephaselab_core::qmat::{kron2, CMat2, CMat4, C64};
use dephaselab_core::DensityMatrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// `G G^dagger / Tr(G G^dagger)` with `G` complex Ginibre.
pub fn random_state(rng: &mut impl Rng) -> DensityMatrix {
    let mut g = CMat4::zero();
    for i in 0..4 {
        for j in 0..4 {
            g.0[i][j] = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
    }
    let m = g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(1.0 / tr).hermitian_part()).unwrap()
}

/// Random Hermitian matrix with Gaussian entries of the given scale.
pub fn random_hermitian(rng: &mut impl Rng, scale: f64) -> CMat4 {
    let mut g = CMat4::zero();
    for i in 0..4 {
        for j in 0..4 {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            g.0[i][j] = C64::new(re * scale, im * scale);
        }
    }
    g.hermitian_part()
}

/// Characteristic polynomial coefficients `[c0, c1, c2, c3]` of
/// `det(x I - A) = x^4 + c3 x^3 + c2 x^2 + c1 x + c0` by Faddeev-LeVerrier.
pub fn char_poly(a: &CMat4) -> [C64; 4] {
    let mut c = [C64::new(0.0, 0.0); 5];
    c[4] = C64::new(1.0, 0.0);
    let mut m = CMat4::zero();
    for k in 1..=4 {
        m = *a * m + CMat4::identity().scale_c(c[5 - k]);
        c[4 - k] = -(*a * m).trace() / k as f64;
    }
    [c[0], c[1], c[2], c[3]]
}

fn horner(c: &[C64; 4], x: C64) -> C64 {
    (((x + c[3]) * x + c[2]) * x + c[1]) * x + c[0]
}

/// All four roots of the monic quartic, by Durand-Kerner iteration.
pub fn quartic_roots(c: &[C64; 4]) -> [C64; 4] {
    let seed = C64::new(0.4, 0.9);
    let mut z = [C64::new(1.0, 0.0), seed, seed * seed, seed * seed * seed];
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..4 {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..4 {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = horner(c, z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-17 {
            break;
        }
    }
    z
}

/// Concurrence from the eigenvalues of the non-Hermitian product `rho rho~`.
pub fn concurrence_nonhermitian(rho: &DensityMatrix) -> f64 {
    let yy = kron2(&CMat2::sigma_y(), &CMat2::sigma_y());
    let r = *rho.matrix() * yy * rho.matrix().conj() * yy;
    let roots = quartic_roots(&char_poly(&r));
    let mut l: Vec<f64> = roots.iter().map(|z| z.re.max(0.0).sqrt()).collect();
    l.sort_by(|a, b| b.total_cmp(a));
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

fn unit(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

fn spin(n: [f64; 3]) -> CMat2 {
    CMat2::sigma_x().scale(n[0]) + CMat2::sigma_y().scale(n[1]) + CMat2::sigma_z().scale(n[2])
}

/// `<B>` for `B = a.s (x) (b + b').s + a'.s (x) (b - b').s`, built as an operator.
pub fn chsh_expectation(rho: &DensityMatrix, angles: &[f64; 8]) -> f64 {
    let a = unit(angles[0], angles[1]);
    let a2 = unit(angles[2], angles[3]);
    let b = unit(angles[4], angles[5]);
    let b2 = unit(angles[6], angles[7]);
    let sum = [b[0] + b2[0], b[1] + b2[1], b[2] + b2[2]];
    let diff = [b[0] - b2[0], b[1] - b2[1], b[2] - b2[2]];
    let op = kron2(&spin(a), &spin(sum)) + kron2(&spin(a2), &spin(diff));
    (*rho.matrix() * op).trace().re
}

/// Brute-force `max |<B>|` over measurement directions: random multistart
/// followed by compass-search hill climbing in the eight angles.
pub fn chsh_brute_force(rho: &DensityMatrix, rng: &mut impl Rng, starts: usize) -> f64 {
    let mut best = 0.0f64;
    for _ in 0..starts {
        let mut x: [f64; 8] = core::array::from_fn(|i| {
            if i % 2 == 0 {
                rng.random_range(0.0..std::f64::consts::PI)
            } else {
                rng.random_range(0.0..std::f64::consts::TAU)
            }
        });
        let mut fx = chsh_expectation(rho, &x);
        let mut h = 0.5;
        while h > 1e-9 {
            let mut improved = false;
            for i in 0..8 {
                for s in [h, -h] {
                    let mut y = x;
                    y[i] += s;
                    let fy = chsh_expectation(rho, &y);
                    if fy > fx {
                        x = y;
                        fx = fy;
                        improved = true;
                    }
                }
            }
            if !improved {
                h *= 0.5;
            }
        }
        // The sign of a, a' is free, so maximizing <B> covers |<B>|.
        best = best.max(fx);
    }
    best
}
