//! Seeded generation of test corpora: graded groups, objects and
//! well-formed K-theory morphisms. Everything is driven by an explicit
//! ChaCha stream so runs with the same seed reproduce exactly.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graded::{Degree, GradedGroup};
use crate::groups::{FGGroup, GroupExpr};
use crate::linalg::IntMatrix;
use crate::object::{
    generator_count, injective_object, realize_labeled, residue_object, unit, BootObject,
    HomPartMorphism,
};
use crate::spectrum::SpecPoint;

const ATOM_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

#[derive(Clone, Debug)]
pub struct CorpusConfig {
    pub seed: u64,
    pub size: usize,
    pub max_rank: usize,
    pub max_factors: usize,
    pub max_entry: u64,
    pub max_atoms: usize,
    pub compact_only: bool,
}

impl CorpusConfig {
    pub fn new(seed: u64, size: usize) -> Self {
        CorpusConfig {
            seed,
            size,
            max_rank: 3,
            max_factors: 4,
            max_entry: 64,
            max_atoms: 2,
            compact_only: false,
        }
    }

    pub fn compact(seed: u64, size: usize) -> Self {
        CorpusConfig {
            compact_only: true,
            ..CorpusConfig::new(seed, size)
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_part(rng: &mut ChaCha8Rng, cfg: &CorpusConfig) -> GroupExpr {
    let rank = if rng.random_bool(0.5) {
        0
    } else {
        rng.random_range(1..=cfg.max_rank)
    };
    let nfac = rng.random_range(0..=cfg.max_factors);
    let orders: Vec<BigUint> = (0..nfac)
        .map(|_| BigUint::from(rng.random_range(2..=cfg.max_entry)))
        .collect();
    let fg = FGGroup::from_orders(rank, &orders);
    if cfg.compact_only {
        return GroupExpr::from(fg);
    }
    let mut q = 0usize;
    let mut prufer = Vec::new();
    for _ in 0..rng.random_range(0..=cfg.max_atoms) {
        if rng.random_bool(0.4) {
            q += 1;
        } else {
            prufer.push(ATOM_PRIMES[rng.random_range(0..ATOM_PRIMES.len())]);
        }
    }
    GroupExpr::new(fg, q, prufer)
}

pub fn random_graded(rng: &mut ChaCha8Rng, cfg: &CorpusConfig) -> GradedGroup {
    GradedGroup::new(random_part(rng, cfg), random_part(rng, cfg))
}

/// A corpus of objects of the configured size. A handful of canonical
/// objects (unit, residues, injectives) is seeded at the front so the
/// structural checks always see them.
pub fn objects(cfg: &CorpusConfig) -> Vec<BootObject> {
    let mut rng = rng(cfg.seed);
    let mut out: Vec<BootObject> = Vec::with_capacity(cfg.size);
    let mut canonical = vec![
        realize_labeled(GradedGroup::zero(), "0"),
        unit(),
        unit().suspend(),
        residue_object(SpecPoint::prime(2)),
        residue_object(SpecPoint::prime(3)),
    ];
    if !cfg.compact_only {
        canonical.push(residue_object(SpecPoint::Zero));
        canonical.push(injective_object(SpecPoint::prime(2)));
        canonical.push(injective_object(SpecPoint::prime(5)));
    }
    canonical.truncate(cfg.size);
    out.extend(canonical);
    while out.len() < cfg.size {
        let g = random_graded(&mut rng, cfg);
        let label = format!("corpus[{}]", out.len());
        out.push(realize_labeled(g, label));
    }
    out
}

/// Pairs of finite groups with order at most `max_order`.
pub fn finite_pairs(seed: u64, count: usize, max_order: u64) -> Vec<(FGGroup, FGGroup)> {
    let mut rng = rng(seed);
    let single = |rng: &mut ChaCha8Rng| {
        let mut orders: Vec<BigUint> = Vec::new();
        let mut total = 1u64;
        for _ in 0..rng.random_range(0..=3) {
            let d = rng.random_range(2..=max_order);
            if total.saturating_mul(d) > max_order {
                continue;
            }
            total *= d;
            orders.push(BigUint::from(d));
        }
        FGGroup::from_orders(0, &orders)
    };
    (0..count)
        .map(|_| (single(&mut rng), single(&mut rng)))
        .collect()
}

/// A random well-formed morphism between two objects with finitely
/// generated K-theory: free source generators map anywhere, a torsion
/// generator of order d maps into the d-torsion of the target.
pub fn random_morphism(
    rng: &mut ChaCha8Rng,
    source: &BootObject,
    target: &BootObject,
) -> Option<HomPartMorphism> {
    if !source.ktheory().is_fg() || !target.ktheory().is_fg() {
        return None;
    }
    let matrix_for = |rng: &mut ChaCha8Rng, src: &GroupExpr, tgt: &GroupExpr| {
        let rows = generator_count(tgt);
        let cols = generator_count(src);
        let mut m = IntMatrix::zero(rows, cols);
        let src_rank = src.fg().rank();
        let tgt_rank = tgt.fg().rank();
        let src_factors = src.fg().factors_u64();
        let tgt_factors = tgt.fg().factors_u64();
        for j in 0..cols {
            if j < src_rank {
                for i in 0..rows {
                    *m.at_mut(i, j) = BigInt::from(rng.random_range(-3i64..=3));
                }
            } else {
                let d = src_factors[j - src_rank];
                for (i, &e) in tgt_factors.iter().enumerate() {
                    let g = d.gcd(&e);
                    let step = e / g;
                    let c = rng.random_range(0..g.min(7)) as i64;
                    *m.at_mut(tgt_rank + i, j) = BigInt::from(step as i64 * c);
                }
            }
        }
        m
    };
    let f0 = matrix_for(
        rng,
        source.ktheory().part(Degree::Zero),
        target.ktheory().part(Degree::Zero),
    );
    let f1 = matrix_for(
        rng,
        source.ktheory().part(Degree::One),
        target.ktheory().part(Degree::One),
    );
    Some(
        HomPartMorphism::new(source.clone(), target.clone(), f0, f1)
            .expect("constructed morphism respects relations"),
    )
}
