//! Seeded random sampling of test objects. Every sampler is deterministic in
//! its seed (ChaCha8 stream).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{CMatrix, Dims, OperatorTuple};
use crate::error::{Error, Result};
use crate::C64;

/// Rejection threshold on the condition number of random invertible factors.
pub const MAX_CONDITION: f64 = 50.0;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Entries i.i.d. standard complex Gaussian (`E|z|² = 1`).
pub fn random_complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let data = (0..rows * cols).map(|_| gaussian(rng)).collect();
    CMatrix::new(rows, cols, data).expect("gaussian entries are finite")
}

/// Unit vector drawn uniformly from the sphere in `C^dim`.
pub fn random_pure_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Haar-distributed `d × d` unitary: QR of a Ginibre matrix with the phases
/// of `R`'s diagonal pushed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let z = random_complex_gaussian(d, d, rng).to_nalgebra();
    let qr = z.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = CMatrix::from_nalgebra(&q);
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// One Haar unitary per subsystem.
pub fn random_local_unitary(dims: &Dims, seed: u64) -> Vec<CMatrix> {
    let mut rng = seeded_rng(seed);
    dims.as_slice().iter().map(|&d| haar_unitary(d, &mut rng)).collect()
}

/// One Gaussian invertible matrix per subsystem, each resampled until its
/// condition number is at most [`MAX_CONDITION`].
pub fn random_invertible_local(dims: &Dims, seed: u64) -> Vec<CMatrix> {
    let mut rng = seeded_rng(seed);
    dims.as_slice()
        .iter()
        .map(|&d| loop {
            let g = random_complex_gaussian(d, d, &mut rng);
            if g.condition_number() <= MAX_CONDITION {
                break g;
            }
        })
        .collect()
}

/// Random density operator of the given rank: `G G† / Tr(G G†)` for a
/// Gaussian `D × rank` factor `G`.
pub fn random_density(dims: &Dims, rank: usize, seed: u64) -> Result<CMatrix> {
    let d = dims.total();
    if rank == 0 || rank > d {
        return Err(Error::arg(format!("rank must be in 1..={d}, got {rank}")));
    }
    let mut rng = seeded_rng(seed);
    let g = random_complex_gaussian(d, rank, &mut rng);
    let mut rho = &g * &g.adjoint();
    let tr = rho.trace().re;
    rho = rho.scale(C64::new(1.0 / tr, 0.0));
    // exact Hermitian symmetrisation
    let mut out = rho.clone();
    for i in 0..d {
        for j in 0..d {
            out[(i, j)] = (rho[(i, j)] + rho[(j, i)].conj()) * 0.5;
        }
    }
    Ok(out)
}

/// Tuple of `m` unstructured Gaussian operators.
pub fn random_operator_tuple(dims: &Dims, m: usize, seed: u64) -> Result<OperatorTuple> {
    let mut rng = seeded_rng(seed);
    let d = dims.total();
    OperatorTuple::new(dims.clone(), (0..m).map(|_| random_complex_gaussian(d, d, &mut rng)).collect())
}
