#![allow(dead_code)]

use qlat::geometry::{BasisVector, GeometricSpec};
use qlat::QuadraticNumber as Q;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const FIELDS: [u64; 3] = [2, 3, 5];

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// `(a + b√D)/c` with small random integers.
pub fn random_q(rng: &mut ChaCha8Rng, d: u64) -> Q {
    let a: i64 = rng.gen_range(-20..=20);
    let b: i64 = rng.gen_range(-6..=6);
    let c: i64 = rng.gen_range(1..=9);
    Q::new(a, b, c, d).unwrap()
}

fn positive(rng: &mut ChaCha8Rng, d: u64, irrational: bool) -> Q {
    loop {
        let x = random_q(rng, d);
        if x.is_positive() && (!irrational || !x.is_rational()) {
            return x;
        }
    }
}

/// A random positive basis over `Q(√D)` with a random offset that keeps
/// the line away from lattice points.
pub fn random_spec(rng: &mut ChaCha8Rng, d: u64) -> GeometricSpec {
    loop {
        let p1 = positive(rng, d, false);
        let p2 = positive(rng, d, false);
        if p1 == p2 {
            continue;
        }
        let s1 = positive(rng, d, false);
        let s2 = positive(rng, d, false);
        if (&s1 / &s2).is_rational() {
            continue;
        }
        let (perp1, perp2) = if rng.gen_bool(0.5) { (s1, -s2) } else { (-s1, s2) };
        let spec = GeometricSpec::new(
            BasisVector::new(p1, perp1),
            BasisVector::new(p2, perp2),
            random_q(rng, d),
            random_q(rng, d),
        );
        if spec.validate_positive_basis().is_ok() && !spec.is_singular() {
            return spec;
        }
    }
}
