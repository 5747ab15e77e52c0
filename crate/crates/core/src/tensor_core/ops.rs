use super::{CMatrix, Dims};
use crate::error::{Error, Result};

/// Relative determinant floor below which a local factor counts as singular.
const SINGULAR_DET: f64 = 1e-12;

/// Kronecker product of the factors, in list order.
pub fn kron(factors: &[CMatrix]) -> Result<CMatrix> {
    let (first, rest) = factors.split_first().ok_or_else(|| Error::arg("kron of an empty factor list"))?;
    Ok(rest.iter().fold(first.clone(), |acc, f| kron2(&acc, f)))
}

fn kron2(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (br, bc) = (b.rows(), b.cols());
    let mut out = CMatrix::zeros(a.rows() * br, a.cols() * bc);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let x = a[(i, j)];
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = x * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Reduced operator on the subsystems listed in `keep` (0-based, any order;
/// the result keeps them in increasing order). Everything else is traced out.
pub fn partial_trace(m: &CMatrix, dims: &Dims, keep: &[usize]) -> Result<CMatrix> {
    let d = dims.total();
    if m.rows() != d || m.cols() != d {
        return Err(Error::arg(format!(
            "partial trace of a {}x{} matrix over dims {:?}",
            m.rows(),
            m.cols(),
            dims.as_slice()
        )));
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.is_empty() {
        return Err(Error::arg("partial trace must keep at least one subsystem"));
    }
    if let Some(&bad) = kept.iter().find(|&&i| i >= dims.n()) {
        return Err(Error::arg(format!("subsystem {bad} out of range for {} subsystems", dims.n())));
    }
    let is_kept: Vec<bool> = (0..dims.n()).map(|i| kept.contains(&i)).collect();
    let kept_dims = Dims::new(kept.iter().map(|&i| dims.local(i)).collect())?;
    let dk = kept_dims.total();
    let mut out = CMatrix::zeros(dk, dk);
    let mut row_k = Vec::with_capacity(kept.len());
    let mut col_k = Vec::with_capacity(kept.len());
    for r in 0..d {
        let rd = dims.split_index(r);
        for c in 0..d {
            let cd = dims.split_index(c);
            // traced digits must agree
            if (0..dims.n()).any(|i| !is_kept[i] && rd[i] != cd[i]) {
                continue;
            }
            row_k.clear();
            col_k.clear();
            for &i in &kept {
                row_k.push(rd[i]);
                col_k.push(cd[i]);
            }
            out[(kept_dims.join_index(&row_k), kept_dims.join_index(&col_k))] += m[(r, c)];
        }
    }
    Ok(out)
}

/// `(⊗ g_i) M (⊗ g_i)^{-1}`.
pub fn conjugate_local(m: &CMatrix, g: &[CMatrix], dims: &Dims) -> Result<CMatrix> {
    if g.len() != dims.n() {
        return Err(Error::arg(format!("expected {} local factors, got {}", dims.n(), g.len())));
    }
    let d = dims.total();
    if m.rows() != d || m.cols() != d {
        return Err(Error::arg("operator does not match dims"));
    }
    let mut inverses = Vec::with_capacity(g.len());
    for (i, gi) in g.iter().enumerate() {
        let di = dims.local(i);
        if gi.rows() != di || gi.cols() != di {
            return Err(Error::arg(format!("local factor {} must be {di}x{di}", i + 1)));
        }
        let scale = gi.max_abs().powi(di as i32);
        if gi.determinant().norm() <= SINGULAR_DET * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::arg(format!("local factor {} is singular", i + 1)));
        }
        inverses.push(gi.inverse().ok_or_else(|| Error::arg(format!("local factor {} is singular", i + 1)))?);
    }
    let big = kron(g)?;
    let big_inv = kron(&inverses)?;
    Ok(&(&big * m) * &big_inv)
}

/// Normality certificate: `‖M M† − M† M‖_max ≤ tol`.
///
/// Tuples of normal matrices have closed orbits under local conjugation, so
/// invariant comparison is conclusive for them.
pub fn is_normal(m: &CMatrix, tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let adj = m.adjoint();
    (&(m * &adj) - &(&adj * m)).max_abs() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor_core::{random_complex_gaussian, random_invertible_local, random_local_unitary, seeded_rng};
    use crate::C64;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn dims(d: &[usize]) -> Dims {
        Dims::new(d.to_vec()).unwrap()
    }

    #[test]
    fn kron_identities() {
        let k = kron(&[CMatrix::identity(2), CMatrix::identity(2)]).unwrap();
        assert_eq!(k, CMatrix::identity(4));
        let k = kron(&[CMatrix::diag(&[c(1.0), c(2.0)]), CMatrix::identity(2)]).unwrap();
        assert_eq!(k, CMatrix::diag(&[c(1.0), c(1.0), c(2.0), c(2.0)]));
        assert!(kron(&[]).is_err());
    }

    #[test]
    fn kron_index_formula() {
        let mut rng = seeded_rng(11);
        let a = random_complex_gaussian(2, 2, &mut rng);
        let b = random_complex_gaussian(2, 2, &mut rng);
        let k = kron(&[a.clone(), b.clone()]).unwrap();
        for i in 0..2 {
            for kk in 0..2 {
                for j in 0..2 {
                    for l in 0..2 {
                        assert_eq!(k[(2 * i + kk, 2 * j + l)], a[(i, j)] * b[(kk, l)]);
                    }
                }
            }
        }
    }

    #[test]
    fn kron_is_associative() {
        // Gaussian-integer entries keep every product exact, so reassociation
        // must agree bit for bit.
        let int = |r: usize, cc: usize, k: i32| {
            let data: Vec<C64> = (0..r * cc)
                .map(|i| C64::new(((i as i32 * 7 + k) % 5 - 2) as f64, ((i as i32 * 3 + k) % 4 - 1) as f64))
                .collect();
            CMatrix::new(r, cc, data).unwrap()
        };
        let (a, b, cc) = (int(2, 3, 1), int(3, 2, 2), int(2, 2, 3));
        let left = kron(&[a.clone(), kron(&[b.clone(), cc.clone()]).unwrap()]).unwrap();
        let right = kron(&[kron(&[a, b]).unwrap(), cc]).unwrap();
        assert_eq!(left, right);

        let mut rng = seeded_rng(5);
        let a = random_complex_gaussian(2, 3, &mut rng);
        let b = random_complex_gaussian(3, 2, &mut rng);
        let cc = random_complex_gaussian(2, 2, &mut rng);
        let left = kron(&[a.clone(), kron(&[b.clone(), cc.clone()]).unwrap()]).unwrap();
        let right = kron(&[kron(&[a, b]).unwrap(), cc]).unwrap();
        assert!(left.max_abs_diff(&right) <= 1e-15 * left.max_abs());
    }

    #[test]
    fn partial_trace_of_product() {
        let mut rng = seeded_rng(2);
        let rho = random_complex_gaussian(2, 2, &mut rng);
        let tau = random_complex_gaussian(2, 2, &mut rng);
        let m = kron(&[rho.clone(), tau.clone()]).unwrap();
        let red = partial_trace(&m, &dims(&[2, 2]), &[0]).unwrap();
        assert!(red.max_abs_diff(&rho.scale(tau.trace())) < 1e-14);
        let red = partial_trace(&m, &dims(&[2, 2]), &[1]).unwrap();
        assert!(red.max_abs_diff(&tau.scale(rho.trace())) < 1e-14);
    }

    #[test]
    fn partial_trace_bell_by_index_sum() {
        // |Φ+><Φ+| has entries 1/2 at (00,00),(00,11),(11,00),(11,11)
        let mut bell = CMatrix::zeros(4, 4);
        for &(r, cc) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            bell[(r, cc)] = c(0.5);
        }
        // brute force: (Tr_2 ρ)[a,b] = Σ_k ρ[(a,k),(b,k)]
        let mut expect = CMatrix::zeros(2, 2);
        for a in 0..2 {
            for b in 0..2 {
                for k in 0..2 {
                    expect[(a, b)] += bell[(2 * a + k, 2 * b + k)];
                }
            }
        }
        assert!(expect.max_abs_diff(&CMatrix::identity(2).scale(c(0.5))) < 1e-15);
        let red = partial_trace(&bell, &dims(&[2, 2]), &[0]).unwrap();
        assert!(red.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn partial_trace_keep_all_and_errors() {
        let mut rng = seeded_rng(9);
        let m = random_complex_gaussian(4, 4, &mut rng);
        let d = dims(&[2, 2]);
        assert_eq!(partial_trace(&m, &d, &[0, 1]).unwrap(), m);
        assert!(partial_trace(&m, &dims(&[2, 3]), &[0]).is_err());
        assert!(partial_trace(&m, &d, &[]).is_err());
        assert!(partial_trace(&m, &d, &[2]).is_err());
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let d = dims(&[2, 3, 2]);
        let mut rng = seeded_rng(4);
        let m = random_complex_gaussian(12, 12, &mut rng);
        for keep in [vec![0], vec![1], vec![2], vec![0, 2], vec![1, 2]] {
            let red = partial_trace(&m, &d, &keep).unwrap();
            assert!((red.trace() - m.trace()).norm() < 1e-12);
        }
    }

    #[test]
    fn conjugation_by_identities_is_noop() {
        let mut rng = seeded_rng(1);
        let m = random_complex_gaussian(4, 4, &mut rng);
        let id = vec![CMatrix::identity(2), CMatrix::identity(2)];
        assert!(conjugate_local(&m, &id, &dims(&[2, 2])).unwrap().max_abs_diff(&m) < 1e-15);
    }

    #[test]
    fn conjugation_factorizes_on_simple_tensors() {
        let mut rng = seeded_rng(8);
        let a = random_complex_gaussian(2, 2, &mut rng);
        let b = random_complex_gaussian(2, 2, &mut rng);
        let g = random_invertible_local(&dims(&[2, 2]), 77);
        let lhs = conjugate_local(&kron(&[a.clone(), b.clone()]).unwrap(), &g, &dims(&[2, 2])).unwrap();
        let ga = &(&g[0] * &a) * &g[0].inverse().unwrap();
        let gb = &(&g[1] * &b) * &g[1].inverse().unwrap();
        let rhs = kron(&[ga, gb]).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-10);
        assert!((lhs.trace() - kron(&[a, b]).unwrap().trace()).norm() < 1e-10);
    }

    #[test]
    fn conjugation_round_trip() {
        let d = dims(&[2, 3]);
        for seed in 0..10 {
            let mut rng = seeded_rng(100 + seed);
            let m = random_complex_gaussian(6, 6, &mut rng);
            let g = random_invertible_local(&d, seed);
            let ginv: Vec<CMatrix> = g.iter().map(|x| x.inverse().unwrap()).collect();
            let back = conjugate_local(&conjugate_local(&m, &g, &d).unwrap(), &ginv, &d).unwrap();
            assert!(back.max_abs_diff(&m) < 1e-10);
        }
    }

    #[test]
    fn conjugation_rejects_singular_factor() {
        let m = CMatrix::identity(4);
        let sing = CMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
        let err = conjugate_local(&m, &[CMatrix::identity(2), sing], &dims(&[2, 2]));
        assert!(matches!(err, Err(Error::Argument(_))));
    }

    #[test]
    fn normality_certificates() {
        let jordan = CMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(!is_normal(&jordan, 1e-10));
        let u = &random_local_unitary(&dims(&[3]), 4)[0];
        assert!(is_normal(u, 1e-10));
        let rho = crate::tensor_core::random_density(&dims(&[2, 2]), 3, 6).unwrap();
        assert!(is_normal(&rho, 1e-10));
    }
}
