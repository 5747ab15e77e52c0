//! Degree bounds, invariant fingerprints, the local-equivalence decision and
//! Rényi entropies.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::permnet::{enumerate_monomials, girth_bound, Girth, Perm, PermTuple, TraceMonomial};
use crate::tensor_core::{is_normal, partial_trace, CMatrix, Dims, OperatorTuple};
use crate::trace_eval::eval_contract;
use crate::C64;

fn ceil_div(num: BigUint, den: u32) -> BigUint {
    (num + BigUint::from(den - 1)) / BigUint::from(den)
}

fn at_least_two(x: BigUint) -> BigUint {
    x.max(BigUint::from(2u32))
}

/// Degree up to which the trace monomials (of girth within
/// `girth_bound(dims)`) separate local-unitary orbits of `m`-tuples of
/// density operators:
/// `max{2, ⌈3/8 · max d_i · m² · D⁴ · (2n)^{2δ}⌉}` with `D = Π d_i` and
/// `δ = Σ_i (d_i − 1)`.
pub fn lu_degree_bound(dims: &Dims, m: usize) -> BigUint {
    let n = dims.n() as u32;
    let delta: usize = dims.as_slice().iter().map(|d| d - 1).sum();
    let num = BigUint::from(3u32)
        * BigUint::from(dims.max_local())
        * BigUint::from(m).pow(2)
        * BigUint::from(dims.total()).pow(4)
        * BigUint::from(2 * n).pow(2 * delta as u32);
    at_least_two(ceil_div(num, 8))
}

/// Generating degree for SLOCC invariants of `m`-tuples of `n`-qubit
/// vectors: `max{2, ⌈3/2 · m² · 4ⁿ · n^{6n}⌉}`.
pub fn slocc_degree_bound(n: usize, m: usize) -> BigUint {
    let num = BigUint::from(3u32)
        * BigUint::from(m).pow(2)
        * BigUint::from(4u32).pow(n as u32)
        * BigUint::from(n).pow(6 * n as u32);
    at_least_two(ceil_div(num, 2))
}

fn girth_cap(dims: &Dims, max_degree: usize, filter: bool) -> Girth {
    if filter {
        girth_bound(dims)
    } else {
        Girth::unrestricted(dims.n(), max_degree)
    }
}

/// Values of every connected canonical monomial up to `max_degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct Fingerprint {
    pub entries: Vec<(TraceMonomial, C64)>,
    pub max_degree: usize,
    pub dims: Dims,
    pub m: usize,
}

impl Fingerprint {
    pub fn values(&self) -> Vec<C64> {
        self.entries.iter().map(|e| e.1).collect()
    }
}

/// Evaluates the connected canonical monomials with at most `max_degree`
/// boxes on `ops`. Disconnected monomials are products of these and are
/// left out. With `girth_filter`, rows are capped by [`girth_bound`].
pub fn fingerprint(ops: &OperatorTuple, max_degree: usize, girth_filter: bool) -> Result<Fingerprint> {
    let dims = ops.dims();
    let cap = girth_cap(dims, max_degree, girth_filter);
    let monomials = enumerate_monomials(dims.n(), ops.len(), max_degree, &cap, true)?;
    let values: Vec<C64> = monomials.par_iter().map(|m| eval_contract(m, ops)).collect::<Result<_>>()?;
    Ok(Fingerprint {
        entries: monomials.into_iter().zip(values).collect(),
        max_degree,
        dims: dims.clone(),
        m: ops.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum VerdictKind {
    /// `witness` takes the two `values` on the first and second tuple.
    Separated { witness: TraceMonomial, values: (C64, C64) },
    /// No monomial with at most `degree` boxes tells the tuples apart.
    IndistinguishableUpTo { degree: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub tol: f64,
    /// Some input matrix is not normal, so equal invariants need not mean
    /// equal orbits.
    pub non_normal: bool,
}

impl Verdict {
    pub fn is_separated(&self) -> bool {
        matches!(self.kind, VerdictKind::Separated { .. })
    }
}

/// `|a − b| > tol·(1 + max(|a|, |b|))`.
pub fn differs(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() > tol * (1.0 + a.norm().max(b.norm()))
}

/// Compares two tuples on the connected canonical monomials (girth within
/// [`girth_bound`]) in enumeration order and reports the first one that
/// tells them apart.
pub fn decide_lu_equiv(a: &OperatorTuple, b: &OperatorTuple, max_degree: usize, tol: f64) -> Result<Verdict> {
    if a.dims() != b.dims() {
        return Err(Error::arg(format!("dims differ: {:?} vs {:?}", a.dims().as_slice(), b.dims().as_slice())));
    }
    if a.len() != b.len() {
        return Err(Error::arg(format!("tuple lengths differ: {} vs {}", a.len(), b.len())));
    }
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::arg(format!("tolerance must be finite and nonnegative, got {tol}")));
    }
    let non_normal =
        a.matrices().iter().chain(b.matrices()).any(|x| !is_normal(x, 1e-10 * (1.0 + x.max_abs().powi(2))));
    let dims = a.dims();
    let cap = girth_bound(dims);
    let monomials = enumerate_monomials(dims.n(), a.len(), max_degree, &cap, true)?;

    let mut start = 0;
    while start < monomials.len() {
        // one degree at a time, so low-degree separations stop early
        let deg = monomials[start].degree();
        let end = start + monomials[start..].iter().take_while(|m| m.degree() == deg).count();
        let block = &monomials[start..end];
        let pairs: Vec<(C64, C64)> =
            block.par_iter().map(|m| Ok((eval_contract(m, a)?, eval_contract(m, b)?))).collect::<Result<_>>()?;
        if let Some(k) = pairs.iter().position(|&(x, y)| differs(x, y, tol)) {
            return Ok(Verdict {
                kind: VerdictKind::Separated { witness: block[k].clone(), values: pairs[k] },
                tol,
                non_normal,
            });
        }
        start = end;
    }
    Ok(Verdict { kind: VerdictKind::IndistinguishableUpTo { degree: max_degree }, tol, non_normal })
}

/// Tolerance for accepting a matrix as a density operator.
pub const DENSITY_TOL: f64 = 1e-9;

/// Checks Hermitian, unit trace and positive semidefinite within `tol`.
pub fn check_density(rho: &CMatrix, dims: &Dims, tol: f64) -> Result<()> {
    let d = dims.total();
    if rho.rows() != d || rho.cols() != d {
        return Err(Error::arg(format!("expected a {d}x{d} matrix, got {}x{}", rho.rows(), rho.cols())));
    }
    if !rho.is_hermitian(tol) {
        return Err(Error::arg("density operator is not Hermitian"));
    }
    let tr = rho.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > tol {
        return Err(Error::arg(format!("density operator has trace {tr}")));
    }
    let low = rho.hermitian_eigenvalues()[0];
    if low < -tol {
        return Err(Error::arg(format!("density operator has eigenvalue {low}")));
    }
    Ok(())
}

fn check_traced(dims: &Dims, traced: &[usize]) -> Result<Vec<usize>> {
    let mut a = traced.to_vec();
    a.sort_unstable();
    a.dedup();
    if a.is_empty() || a.len() >= dims.n() || a.iter().any(|&i| i >= dims.n()) {
        return Err(Error::arg(format!(
            "traced subsystems {traced:?} must be a proper nonempty subset of 0..{}",
            dims.n()
        )));
    }
    Ok(a)
}

/// The monomial computing `Tr((Tr_A ρ)^q)`: a `q`-cycle on the kept rows,
/// the identity on the traced rows `A`.
pub fn renyi_monomial(n: usize, traced: &[usize], q: usize) -> Result<TraceMonomial> {
    if q == 0 {
        return Err(Error::arg("q must be positive"));
    }
    let cycle = Perm::from_cycles(q, &[(0..q).collect()])?;
    let rows = (0..n).map(|i| if traced.contains(&i) { Perm::identity(q) } else { cycle.clone() }).collect();
    TraceMonomial::new(vec![0; q], PermTuple::new(rows)?)
}

/// `H_q = ln Tr((Tr_A ρ)^q) / (1 − q)` for the subsystems `traced` (0-based).
pub fn renyi_entropy(rho: &CMatrix, dims: &Dims, traced: &[usize], q: usize) -> Result<f64> {
    if q < 2 {
        return Err(Error::arg(format!("Rényi order must be at least 2, got {q}")));
    }
    check_density(rho, dims, DENSITY_TOL)?;
    let a = check_traced(dims, traced)?;
    let keep: Vec<usize> = (0..dims.n()).filter(|i| !a.contains(i)).collect();
    let red = partial_trace(rho, dims, &keep)?;
    let mut power = red.clone();
    for _ in 1..q {
        power = &power * &red;
    }
    Ok(power.trace().re.ln() / (1.0 - q as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor_core::{
        kron, random_density, random_local_unitary, random_operator_tuple, random_pure_vector, seeded_rng,
    };

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn dims(d: &[usize]) -> Dims {
        Dims::new(d.to_vec()).unwrap()
    }

    fn big(s: &str) -> BigUint {
        s.parse().unwrap()
    }

    /// Same formulas with rational arithmetic written out on u128.
    fn lu_oracle(d: &[usize], m: u128) -> u128 {
        let n = d.len() as u128;
        let dmax = *d.iter().max().unwrap() as u128;
        let total: u128 = d.iter().map(|&x| x as u128).product();
        let delta: u32 = d.iter().map(|&x| x as u32 - 1).sum();
        let num = 3 * dmax * m * m * total.pow(4) * (2 * n).pow(2 * delta);
        num.div_ceil(8).max(2)
    }

    #[test]
    fn lu_bound_values() {
        assert_eq!(lu_degree_bound(&dims(&[2]), 1), big("48"));
        assert_eq!(lu_degree_bound(&dims(&[1]), 1), big("2"));
        // 3/8 · 2 · 4⁴ · 4⁴
        assert_eq!(lu_degree_bound(&dims(&[2, 2]), 1), big("49152"));
        for d in [vec![2], vec![3], vec![2, 3], vec![3, 3], vec![2, 2, 2], vec![1, 2]] {
            for m in 1..=3 {
                assert_eq!(lu_degree_bound(&dims(&d), m), BigUint::from(lu_oracle(&d, m as u128)));
            }
        }
    }

    #[test]
    fn slocc_bound_table() {
        let three = BigUint::from(3u32);
        let four = BigUint::from(4u32);
        assert_eq!(slocc_degree_bound(1, 1), BigUint::from(6u32));
        assert_eq!(slocc_degree_bound(2, 1), BigUint::from(24u32 << 12));
        assert_eq!(slocc_degree_bound(3, 1), BigUint::from(96u32) * three.pow(18));
        assert_eq!(slocc_degree_bound(4, 1), BigUint::from(384u32) * four.pow(24));
    }

    #[test]
    fn bounds_are_monotone() {
        let mut grid = Vec::new();
        for n in 1..=3 {
            let mut d = vec![1; n];
            loop {
                grid.push(d.clone());
                let Some(k) = d.iter().position(|&x| x < 3) else { break };
                d[k] += 1;
                for x in &mut d[..k] {
                    *x = 1;
                }
            }
        }
        for d in &grid {
            for m in 1..=3 {
                let here = lu_degree_bound(&dims(d), m);
                assert!(lu_degree_bound(&dims(d), m + 1) >= here);
                for k in 0..d.len() {
                    let mut e = d.clone();
                    e[k] += 1;
                    assert!(lu_degree_bound(&dims(&e), m) >= here, "{d:?} -> {e:?}");
                }
            }
        }
        for n in 1..=4 {
            for m in 1..=3 {
                assert!(slocc_degree_bound(n, m + 1) >= slocc_degree_bound(n, m));
                assert!(slocc_degree_bound(n + 1, m) >= slocc_degree_bound(n, m));
            }
        }
    }

    fn bell() -> CMatrix {
        let s = 0.5f64.sqrt();
        let v = [c(s), c(0.0), c(0.0), c(s)];
        CMatrix::outer(&v, &v)
    }

    #[test]
    fn bell_fingerprint() {
        let ops = OperatorTuple::single(dims(&[2, 2]), bell()).unwrap();
        let fp = fingerprint(&ops, 2, true).unwrap();
        let shown: Vec<String> = fp.entries.iter().map(|e| e.0.to_string()).collect();
        assert_eq!(shown, ["1 ();()", "1,1 ();(1 2)", "1,1 (1 2);()", "1,1 (1 2);(1 2)"]);
        let expect = [1.0, 0.5, 0.5, 1.0];
        for (v, e) in fp.values().iter().zip(expect) {
            assert!((v - c(e)).norm() < 1e-14);
        }
    }

    #[test]
    fn maximally_mixed_fingerprint() {
        let d = dims(&[2, 2]);
        let ops = OperatorTuple::single(d, CMatrix::identity(4).scale(c(0.25))).unwrap();
        let fp = fingerprint(&ops, 3, true).unwrap();
        assert_eq!(fp.entries[0].1, c(1.0));
        // each row with k cycles contributes 2^k; total 4^{-ℓ}·Π 2^{k_i}
        for (m, v) in &fp.entries {
            let cycles: usize = m.sigma().rows().iter().map(|p| p.cycles().len()).sum();
            let expect = 2f64.powi(cycles as i32) / 4f64.powi(m.degree() as i32);
            assert!((v - c(expect)).norm() < 1e-14);
        }
    }

    #[test]
    fn fingerprint_is_deterministic_invariant_and_homogeneous() {
        let d = dims(&[2, 2]);
        let ops =
            OperatorTuple::new(d.clone(), vec![random_density(&d, 2, 1).unwrap(), random_density(&d, 3, 2).unwrap()])
                .unwrap();
        let fp = fingerprint(&ops, 3, true).unwrap();
        assert_eq!(fp, fingerprint(&ops, 3, true).unwrap());

        let moved = ops.conjugate_local(&random_local_unitary(&d, 3)).unwrap();
        for (x, y) in fp.values().iter().zip(fingerprint(&moved, 3, true).unwrap().values()) {
            assert!(!differs(*x, y, 1e-9));
        }

        let lambda = C64::new(1.3, -0.4);
        let scaled = ops.map(|x| x.scale(lambda)).unwrap();
        for ((m, x), y) in fp.entries.iter().zip(fingerprint(&scaled, 3, true).unwrap().values()) {
            assert!(!differs(*x * lambda.powi(m.degree() as i32), y, 1e-12));
        }
    }

    #[test]
    fn girth_filter_drops_long_cycles() {
        let ops = random_operator_tuple(&dims(&[2]), 1, 5).unwrap();
        let with = fingerprint(&ops, 4, true).unwrap();
        let without = fingerprint(&ops, 4, false).unwrap();
        assert!(with.entries.len() < without.entries.len());
        assert!(with.entries.iter().all(|(m, _)| m.sigma().row(0).max_cycle_len() <= 3));
    }

    fn classical_pair() -> (OperatorTuple, OperatorTuple) {
        let d = dims(&[2, 2]);
        let a = CMatrix::diag(&[c(0.5), c(0.0), c(0.0), c(0.5)]);
        let b = kron(&[CMatrix::diag(&[c(1.0), c(0.0)]), CMatrix::identity(2).scale(c(0.5))]).unwrap();
        (OperatorTuple::single(d.clone(), a).unwrap(), OperatorTuple::single(d, b).unwrap())
    }

    #[test]
    fn separates_equal_spectra() {
        let (a, b) = classical_pair();
        let v = decide_lu_equiv(&a, &b, 4, 1e-10).unwrap();
        let VerdictKind::Separated { witness, values } = v.kind else { panic!("not separated") };
        assert_eq!(witness.to_string(), "1,1 (1 2);()");
        assert!((values.0 - c(0.5)).norm() < 1e-12);
        assert!((values.1 - c(1.0)).norm() < 1e-12);
        assert!(!v.non_normal);
        // swapping the inputs finds the same monomial
        let w = decide_lu_equiv(&b, &a, 4, 1e-10).unwrap();
        assert!(matches!(w.kind, VerdictKind::Separated { witness: ref x, .. } if *x == witness));
    }

    #[test]
    fn same_orbit_is_never_separated() {
        let d = dims(&[2, 2]);
        for seed in 0..10 {
            let rho = random_density(&d, 1 + (seed as usize % 4), seed).unwrap();
            let a = OperatorTuple::single(d.clone(), rho).unwrap();
            let b = a.conjugate_local(&random_local_unitary(&d, 100 + seed)).unwrap();
            let v = decide_lu_equiv(&a, &b, 4, 1e-8).unwrap();
            assert_eq!(v.kind, VerdictKind::IndistinguishableUpTo { degree: 4 });
            assert_eq!(decide_lu_equiv(&a, &a, 3, 0.0).unwrap().kind, VerdictKind::IndistinguishableUpTo { degree: 3 });
        }
    }

    #[test]
    fn decide_flags_and_errors() {
        let ops = random_operator_tuple(&dims(&[2, 2]), 1, 9).unwrap();
        assert!(decide_lu_equiv(&ops, &ops, 2, 1e-10).unwrap().non_normal);
        let other = random_operator_tuple(&dims(&[4]), 1, 9).unwrap();
        assert!(matches!(decide_lu_equiv(&ops, &other, 2, 1e-10), Err(Error::Argument(_))));
        let two = random_operator_tuple(&dims(&[2, 2]), 2, 9).unwrap();
        assert!(matches!(decide_lu_equiv(&ops, &two, 2, 1e-10), Err(Error::Argument(_))));
    }

    #[test]
    fn renyi_values() {
        let d = dims(&[2, 2]);
        let h = renyi_entropy(&bell(), &d, &[0], 2).unwrap();
        assert!((h - 2f64.ln()).abs() < 1e-12);
        let mixed = CMatrix::identity(4).scale(c(0.25));
        assert!((renyi_entropy(&mixed, &d, &[0], 3).unwrap() - 2f64.ln()).abs() < 1e-12);

        let mut rng = seeded_rng(4);
        let u = random_pure_vector(2, &mut rng);
        let v = random_pure_vector(2, &mut rng);
        let w = kron(&[CMatrix::outer(&u, &u), CMatrix::outer(&v, &v)]).unwrap();
        assert!(renyi_entropy(&w, &d, &[1], 2).unwrap().abs() < 1e-12);
    }

    #[test]
    fn renyi_matches_monomial() {
        let d = dims(&[2, 2]);
        for seed in 0..20 {
            let rho = random_density(&d, 2, seed).unwrap();
            for q in [2, 3] {
                for traced in [[0], [1]] {
                    let h = renyi_entropy(&rho, &d, &traced, q).unwrap();
                    let mon = renyi_monomial(2, &traced, q).unwrap();
                    let t = eval_contract(&mon, &OperatorTuple::single(d.clone(), rho.clone()).unwrap()).unwrap();
                    assert!(t.im.abs() < 1e-12);
                    assert!((t.re - ((1.0 - q as f64) * h).exp()).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn renyi_rejects_bad_input() {
        let d = dims(&[2, 2]);
        let rho = random_density(&d, 2, 1).unwrap();
        assert!(renyi_entropy(&rho, &d, &[0, 1], 2).is_err());
        assert!(renyi_entropy(&rho, &d, &[], 2).is_err());
        assert!(renyi_entropy(&rho, &d, &[2], 2).is_err());
        assert!(renyi_entropy(&rho, &d, &[0], 1).is_err());
        assert!(renyi_entropy(&rho.scale(c(2.0)), &d, &[0], 2).is_err());
        let not_psd = CMatrix::diag(&[c(1.5), c(-0.5), c(0.0), c(0.0)]);
        assert!(renyi_entropy(&not_psd, &d, &[0], 2).is_err());
        let not_herm = random_operator_tuple(&d, 1, 2).unwrap().get(0).clone();
        assert!(renyi_entropy(&not_herm, &d, &[0], 2).is_err());
    }
}
