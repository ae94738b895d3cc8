//! Seeded random parameters for tests, the self-test and benchmarks.
//!
//! Everything draws from `ChaCha8Rng` so that a seed reproduces the same values
//! on every platform.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldCtx, FieldElem, FieldKind};
use crate::matrix::Mat;

pub const DEFAULT_SEED: u64 = 0x5eed_2013;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rational(rng: &mut impl Rng) -> BigRational {
    BigRational::new(rng.gen_range(-4i64..=4).into(), rng.gen_range(1i64..=3).into())
}

/// Uniform residue over `F_p`; small rational coefficients over `Q(ζ_l)`.
pub fn random_elem(ctx: &FieldCtx, rng: &mut impl Rng) -> FieldElem {
    match ctx.kind() {
        FieldKind::Prime => ctx.from_residue(rng.gen_range(0..ctx.characteristic())),
        FieldKind::Cyclotomic => ctx.from_coeffs((0..ctx.degree()).map(|_| small_rational(rng)).collect()),
    }
}

pub fn random_nonzero(ctx: &FieldCtx, rng: &mut impl Rng) -> FieldElem {
    loop {
        let e = random_elem(ctx, rng);
        if !e.is_zero() {
            return e;
        }
    }
}

pub fn random_vec(ctx: &FieldCtx, len: usize, rng: &mut impl Rng) -> Vec<FieldElem> {
    (0..len).map(|_| random_elem(ctx, rng)).collect()
}

pub fn random_nonzero_vec(ctx: &FieldCtx, len: usize, rng: &mut impl Rng) -> Vec<FieldElem> {
    (0..len).map(|_| random_nonzero(ctx, rng)).collect()
}

/// A nonzero `λ` whose `γ`-orbit the eigenvalue search can find: any nonzero
/// residue over `F_p`, `r·γ^k` with `r` rational over `Q(ζ_l)`.
pub fn random_split_lambda(ctx: &FieldCtx, rng: &mut impl Rng) -> FieldElem {
    match ctx.kind() {
        FieldKind::Prime => random_nonzero(ctx, rng),
        FieldKind::Cyclotomic => loop {
            let r = small_rational(rng);
            if r != BigRational::from_integer(0.into()) {
                let k = rng.gen_range(0..ctx.order() as i64);
                return &ctx.from_rational(&r).expect("rational embeds") * &ctx.gamma_pow(k);
            }
        },
    }
}

/// Random invertible matrix; small integer entries over `Q(ζ_l)` keep the
/// coefficient growth of conjugation modest.
pub fn random_invertible(ctx: &FieldCtx, n: usize, rng: &mut impl Rng) -> Mat {
    loop {
        let g = Mat::from_fn(ctx, n, n, |_, _| match ctx.kind() {
            FieldKind::Prime => ctx.from_residue(rng.gen_range(0..ctx.characteristic())),
            FieldKind::Cyclotomic => ctx.from_int(rng.gen_range(-2i64..=2)),
        });
        if !g.det().expect("square").is_zero() {
            return g;
        }
    }
}
