//! Seeded randomness for the integration suites: everything here is
//! deterministic per seed, so failures reproduce.

use chm_core::equivalence::EquivalenceOp;
use chm_core::RationalPhase;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_phase(rng: &mut ChaCha8Rng) -> RationalPhase {
    let den = rng.gen_range(1..=12i64);
    let num = rng.gen_range(0..den);
    RationalPhase::new(num, den).unwrap()
}

/// Random permutations on both sides plus random diagonal phases.
pub fn random_op(rng: &mut ChaCha8Rng, n: usize) -> EquivalenceOp {
    let mut row_perm: Vec<usize> = (0..n).collect();
    row_perm.shuffle(rng);
    let mut col_perm: Vec<usize> = (0..n).collect();
    col_perm.shuffle(rng);
    EquivalenceOp {
        row_perm,
        col_perm,
        left: (0..n).map(|_| random_phase(rng)).collect(),
        right: (0..n).map(|_| random_phase(rng)).collect(),
    }
}

/// Ids of every catalogue entry that is a plain matrix.
pub fn catalogue_matrix_ids() -> Vec<String> {
    chm_core::catalogue::list()
        .into_iter()
        .map(|(id, _)| id)
        .filter(|id| {
            matches!(
                chm_core::catalogue::get(id).unwrap().object,
                chm_core::catalogue::CatalogueObject::Matrix(_)
            )
        })
        .collect()
}

/// Ids of every catalogue entry that is a parametric family.
pub fn catalogue_family_ids() -> Vec<String> {
    chm_core::catalogue::list()
        .into_iter()
        .map(|(id, _)| id)
        .filter(|id| {
            matches!(
                chm_core::catalogue::get(id).unwrap().object,
                chm_core::catalogue::CatalogueObject::Family(_)
            )
        })
        .collect()
}

pub fn matrix(id: &str) -> chm_core::HadamardMatrix {
    chm_core::catalogue::get(id)
        .unwrap()
        .object
        .as_matrix()
        .unwrap()
        .clone()
}

pub fn family(id: &str) -> chm_core::AffinePhaseMatrix {
    chm_core::catalogue::get(id)
        .unwrap()
        .object
        .as_family()
        .unwrap()
        .clone()
}
