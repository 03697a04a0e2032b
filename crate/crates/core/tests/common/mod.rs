#![allow(dead_code)]

use qsa_core::acceptance::random_family;
use qsa_core::rational::rat;
use qsa_core::{MeasureFamily, QsRandomVariable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn family(r: &mut ChaCha8Rng, atoms: usize, members: usize) -> MeasureFamily {
    random_family(r, atoms, members, 16)
}

/// Values `k/den` with `lo ≤ k/den ≤ hi`.
pub fn rv(r: &mut ChaCha8Rng, f: &MeasureFamily, lo: i64, hi: i64, den: i64) -> QsRandomVariable {
    let values = (0..f.space().len())
        .map(|_| rat(r.gen_range(lo * den..=hi * den), den))
        .collect();
    QsRandomVariable::new(f.space().clone(), values).unwrap()
}

/// Same as `x` on charged atoms, arbitrary on polar atoms.
pub fn scramble_polar(r: &mut ChaCha8Rng, f: &MeasureFamily, x: &QsRandomVariable) -> QsRandomVariable {
    let noise: Vec<_> = (0..x.values().len()).map(|_| rat(r.gen_range(-40..=40), 4)).collect();
    x.map(|i, v| if f.is_polar_atom(i) { noise[i].clone() } else { v.clone() })
}
