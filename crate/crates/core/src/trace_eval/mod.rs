//! Evaluation of trace monomials on operator tuples.
//!
//! Two engines are provided and cross-checked against each other:
//! [`eval_contract`] contracts a tensor network built from the boxes, and
//! [`eval_reference`] sums `Tr(ρ(σ^{-1}) · M_{p_1} ⊗ … ⊗ M_{p_ℓ})` over the
//! explicit permutation of basis vectors of `V^{⊗ℓ}`.

mod factorize;
mod network;
mod reference;

pub use factorize::{factorize, FactorWitness, FactorizationResult, RowSplit, WitnessKind};
pub use network::{contract_network, LabeledTensor};
pub use reference::{eval_reference, REFERENCE_MAX_SIZE};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::permnet::{TraceMonomial, MAX_BOXES};
use crate::tensor_core::OperatorTuple;
use crate::C64;

/// Largest total dimension accepted by [`eval_contract`].
pub const CONTRACT_MAX_DIM: usize = 64;

/// Shared argument checks: row count and label range.
pub(crate) fn check_compatible(mon: &TraceMonomial, ops: &OperatorTuple) -> Result<()> {
    if mon.n() != ops.dims().n() {
        return Err(Error::arg(format!(
            "monomial has {} rows but operators act on {} subsystems",
            mon.n(),
            ops.dims().n()
        )));
    }
    if mon.min_operators() > ops.len() {
        return Err(Error::arg(format!(
            "monomial uses operator {} but only {} were given",
            mon.min_operators(),
            ops.len()
        )));
    }
    Ok(())
}

/// Evaluates `Tr^P_σ` by tensor-network contraction. In row `i` the input
/// index of box `j` is joined to the output index of box `σ_i(j)`, so a cycle
/// `(r_1 … r_k)` reads `Tr(M_{r_1} ⋯ M_{r_k})` on that factor.
pub fn eval_contract(mon: &TraceMonomial, ops: &OperatorTuple) -> Result<C64> {
    check_compatible(mon, ops)?;
    let l = mon.degree();
    if l > MAX_BOXES {
        return Err(Error::unsupported(format!("{l} boxes exceeds the limit of {MAX_BOXES}")));
    }
    let dims = ops.dims();
    if dims.total() > CONTRACT_MAX_DIM {
        return Err(Error::unsupported(format!(
            "total dimension {} exceeds the limit of {CONTRACT_MAX_DIM}",
            dims.total()
        )));
    }
    let n = dims.n();
    let edge = |i: usize, j: usize| (i * l + j) as u32;
    let inverses: Vec<_> = mon.sigma().rows().iter().map(|p| p.inverse()).collect();
    let mut shape = dims.as_slice().to_vec();
    shape.extend_from_slice(dims.as_slice());

    let tensors = (0..l)
        .map(|j| {
            let mut labels = Vec::with_capacity(2 * n);
            // out_i of box j receives the in_i of the box wired into it
            labels.extend((0..n).map(|i| edge(i, inverses[i].apply(j))));
            labels.extend((0..n).map(|i| edge(i, j)));
            let data = ops.get(mon.labels()[j]).data().to_vec();
            LabeledTensor::new(labels, shape.clone(), data)
        })
        .collect();
    Ok(contract_network(tensors))
}

/// Evaluates a list of monomials on one tuple in parallel; results keep the
/// input order.
pub fn eval_many(monomials: &[TraceMonomial], ops: &OperatorTuple) -> Result<Vec<C64>> {
    monomials.par_iter().map(|m| eval_contract(m, ops)).collect()
}
