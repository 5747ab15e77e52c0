//! Reference evaluator through the permutation action of `S_ℓ^n` on
//! `V^{⊗ℓ}`.

use super::check_compatible;
use crate::error::{Error, Result};
use crate::permnet::{PermTuple, TraceMonomial};
use crate::tensor_core::OperatorTuple;
use crate::C64;

/// Largest `D^ℓ` handled by [`eval_reference`].
pub const REFERENCE_MAX_SIZE: usize = 4096;

/// Basis permutation of `ρ(τ)` on `V^{⊗ℓ}`: entry `x` is the index of
/// `ρ(τ) e_x`. Subsystem `i` of tensor slot `j` in the image is taken from
/// slot `τ_i^{-1}(j)` of the source.
fn rho_table(tau: &PermTuple, dims: &[usize], l: usize) -> Vec<usize> {
    let d: usize = dims.iter().product();
    let size = d.pow(l as u32);
    let n = dims.len();
    let inv: Vec<_> = tau.rows().iter().map(|p| p.inverse()).collect();
    let mut digits = vec![vec![0usize; n]; l];
    let mut image = vec![vec![0usize; n]; l];
    (0..size)
        .map(|x| {
            let mut rest = x;
            for j in (0..l).rev() {
                let mut c = rest % d;
                rest /= d;
                for i in (0..n).rev() {
                    digits[j][i] = c % dims[i];
                    c /= dims[i];
                }
            }
            for j in 0..l {
                for i in 0..n {
                    image[j][i] = digits[inv[i].apply(j)][i];
                }
            }
            image.iter().fold(0, |acc, slot| acc * d + slot.iter().zip(dims).fold(0, |a, (&v, &di)| a * di + v))
        })
        .collect()
}

/// Evaluates `Tr^P_σ` as `Tr(ρ(σ^{-1}) · M_{p_1} ⊗ … ⊗ M_{p_ℓ})`, summing only
/// the nonzero entries of the permutation operator.
pub fn eval_reference(mon: &TraceMonomial, ops: &OperatorTuple) -> Result<C64> {
    check_compatible(mon, ops)?;
    let l = mon.degree();
    let d = ops.dims().total();
    let size = d
        .checked_pow(l as u32)
        .filter(|&s| s <= REFERENCE_MAX_SIZE)
        .ok_or_else(|| Error::unsupported(format!("D^l = {d}^{l} exceeds the reference limit {REFERENCE_MAX_SIZE}")))?;
    let table = rho_table(&mon.sigma().inverse(), ops.dims().as_slice(), l);
    debug_assert_eq!(table.len(), size);
    let mats: Vec<_> = mon.labels().iter().map(|&p| ops.get(p)).collect();

    // Π[table[y], y] = 1, hence Tr(Π K) = Σ_y K[y, table[y]].
    let mut total = C64::new(0.0, 0.0);
    for (y, &x) in table.iter().enumerate() {
        let (mut a, mut b) = (y, x);
        let mut prod = C64::new(1.0, 0.0);
        for j in (0..l).rev() {
            prod *= mats[j][(a % d, b % d)];
            a /= d;
            b /= d;
        }
        total += prod;
    }
    Ok(total)
}
