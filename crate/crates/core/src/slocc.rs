//! SLOCC invariants of n-qubit pure states.
//!
//! A vector `v ∈ (C²)^{⊗n}` is sent to the rank-one operator
//! `N = v vᵀ (T^{⊗n})ᵀ`, `T = [[0, 1], [−1, 0]]`. Since `T g T^{-1} = (g^{-1})ᵀ`
//! for `det g = 1`, the map intertwines `v ↦ (⊗ g_i) v` with local
//! conjugation, so every trace monomial evaluated on embedded states is an
//! SLOCC invariant.

use rand::Rng;

use crate::error::{Error, Result};
use crate::permnet::TraceMonomial;
use crate::tensor_core::{kron, random_complex_gaussian, seeded_rng, CMatrix, Dims, OperatorTuple, MAX_CONDITION};
use crate::trace_eval::eval_contract;
use crate::C64;

/// Unnormalised state vector on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(n: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::arg("a state needs at least one qubit"));
        }
        if amplitudes.len() != 1 << n {
            return Err(Error::arg(format!("{} amplitudes for {n} qubits", amplitudes.len())));
        }
        if amplitudes.iter().any(|z| !z.is_finite()) {
            return Err(Error::arg("amplitudes must be finite"));
        }
        Ok(PureState { n, amplitudes })
    }

    /// `|b_1 … b_n⟩` for a bit string such as `"010"`.
    pub fn basis(bits: &str) -> Result<Self> {
        let n = bits.len();
        let idx = usize::from_str_radix(bits, 2).map_err(|_| Error::arg(format!("not a bit string: {bits:?}")))?;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[idx] = C64::new(1.0, 0.0);
        PureState::new(n, amps)
    }

    pub fn ghz(n: usize) -> Result<Self> {
        let s = 0.5f64.sqrt();
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[0] = C64::new(s, 0.0);
        amps[(1 << n) - 1] = C64::new(s, 0.0);
        PureState::new(n, amps)
    }

    pub fn w(n: usize) -> Result<Self> {
        let s = 1.0 / (n as f64).sqrt();
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        for k in 0..n {
            amps[1 << k] = C64::new(s, 0.0);
        }
        PureState::new(n, amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn scale(&self, z: C64) -> Self {
        PureState { n: self.n, amplitudes: self.amplitudes.iter().map(|a| a * z).collect() }
    }

    pub fn dims(&self) -> Dims {
        Dims::uniform(self.n, 2).expect("n ≥ 1")
    }
}

/// `T = [[0, 1], [−1, 0]]` and `S = T^{⊗n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfDualMap {
    pub t: CMatrix,
    pub s: CMatrix,
}

impl SelfDualMap {
    pub fn new(n: usize) -> Self {
        let t = CMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]).expect("2x2");
        let s = kron(&vec![t.clone(); n.max(1)]).expect("nonempty");
        SelfDualMap { t, s }
    }
}

/// `v vᵀ (T^{⊗n})ᵀ`.
pub fn embed(v: &PureState) -> CMatrix {
    let a = v.amplitudes();
    let d = a.len();
    let mut outer = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            outer[(i, j)] = a[i] * a[j];
        }
    }
    &outer * &SelfDualMap::new(v.n()).s.transpose()
}

/// `Tr^P_σ` on the embedded states; label `k` of the monomial refers to
/// `states[k]`.
pub fn eval_slocc(mon: &TraceMonomial, states: &[PureState]) -> Result<C64> {
    let Some(first) = states.first() else {
        return Err(Error::arg("no states given"));
    };
    if let Some(s) = states.iter().find(|s| s.n() != first.n()) {
        return Err(Error::arg(format!("states on {} and {} qubits", first.n(), s.n())));
    }
    if mon.n() != first.n() {
        return Err(Error::arg(format!("monomial has {} rows, states have {} qubits", mon.n(), first.n())));
    }
    let ops = OperatorTuple::new(first.dims(), states.iter().map(embed).collect())?;
    eval_contract(mon, &ops)
}

/// `n` random 2×2 matrices of determinant one with condition number at most
/// [`MAX_CONDITION`].
pub fn random_sl2_tuple(n: usize, seed: u64) -> Vec<CMatrix> {
    let mut rng = seeded_rng(seed);
    (0..n).map(|_| sample_sl2(&mut rng)).collect()
}

fn sample_sl2<R: Rng>(rng: &mut R) -> CMatrix {
    loop {
        let g = random_complex_gaussian(2, 2, rng);
        let det = g.determinant();
        if det.norm() < 1e-6 {
            continue;
        }
        let g = g.scale(det.sqrt().inv());
        if g.condition_number() <= MAX_CONDITION {
            return g;
        }
    }
}

/// `(⊗ g_i) v`.
pub fn apply_local(v: &PureState, g: &[CMatrix]) -> Result<PureState> {
    if g.len() != v.n() {
        return Err(Error::arg(format!("{} local factors for {} qubits", g.len(), v.n())));
    }
    if g.iter().any(|x| x.rows() != 2 || x.cols() != 2) {
        return Err(Error::arg("local factors must be 2x2"));
    }
    PureState::new(v.n(), kron(g)?.apply(v.amplitudes()))
}
