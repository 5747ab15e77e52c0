//! Dense complex linear and multilinear algebra over `V = V_1 ⊗ … ⊗ V_n`.
//!
//! All multi-indices are row-major with subsystem 1 most significant, so the
//! composite index of `(a_1, …, a_n)` is `((a_1·d_2 + a_2)·d_3 + …)`. A
//! [`NetTensor`] with index order `(out_1 … out_n, in_1 … in_n)` therefore
//! shares its flat buffer with the `D × D` matrix it reshapes.

mod matrix;
mod ops;
mod sampling;

pub use matrix::CMatrix;
pub use ops::{conjugate_local, is_normal, kron, partial_trace};
pub use sampling::{
    haar_unitary, random_complex_gaussian, random_density, random_invertible_local, random_local_unitary,
    random_operator_tuple, random_pure_vector, seeded_rng, MAX_CONDITION,
};

use crate::error::{Error, Result};

/// Default absolute tolerance for numerical certificates.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Local dimensions `(d_1, …, d_n)` of a multipartite space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dims(Vec<usize>);

impl Dims {
    pub fn new(d: Vec<usize>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::arg("dims must contain at least one subsystem"));
        }
        if d.contains(&0) {
            return Err(Error::arg(format!("local dimensions must be positive, got {d:?}")));
        }
        Ok(Dims(d))
    }

    /// `n` copies of the same local dimension.
    pub fn uniform(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    /// Number of subsystems.
    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// Total dimension `D = Π d_i`.
    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn local(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn max_local(&self) -> usize {
        *self.0.iter().max().expect("dims are nonempty")
    }

    /// Splits a composite index into per-subsystem digits.
    pub fn split_index(&self, mut idx: usize) -> Vec<usize> {
        let mut digits = vec![0; self.n()];
        for i in (0..self.n()).rev() {
            digits[i] = idx % self.0[i];
            idx /= self.0[i];
        }
        digits
    }

    pub fn join_index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.0).fold(0, |acc, (&a, &d)| acc * d + a)
    }
}

/// An `m`-tuple of `D × D` operators on a common multipartite space.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorTuple {
    dims: Dims,
    matrices: Vec<CMatrix>,
}

impl OperatorTuple {
    pub fn new(dims: Dims, matrices: Vec<CMatrix>) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::arg("operator tuple must contain at least one matrix"));
        }
        let d = dims.total();
        for (k, m) in matrices.iter().enumerate() {
            if m.rows() != d || m.cols() != d {
                return Err(Error::arg(format!(
                    "matrix {} is {}x{}, expected {d}x{d} for dims {:?}",
                    k + 1,
                    m.rows(),
                    m.cols(),
                    dims.as_slice()
                )));
            }
        }
        Ok(OperatorTuple { dims, matrices })
    }

    pub fn single(dims: Dims, m: CMatrix) -> Result<Self> {
        Self::new(dims, vec![m])
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    /// Number of operators `m`.
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn get(&self, k: usize) -> &CMatrix {
        &self.matrices[k]
    }

    /// Applies the same local conjugation to every member.
    pub fn conjugate_local(&self, g: &[CMatrix]) -> Result<Self> {
        let matrices = self.matrices.iter().map(|m| conjugate_local(m, g, &self.dims)).collect::<Result<Vec<_>>>()?;
        Ok(OperatorTuple { dims: self.dims.clone(), matrices })
    }

    pub fn map(&self, f: impl Fn(&CMatrix) -> CMatrix) -> Result<Self> {
        Self::new(self.dims.clone(), self.matrices.iter().map(f).collect())
    }
}

/// A `D × D` operator viewed as a tensor with `2n` indices: the `n` output
/// (row) indices followed by the `n` input (column) indices.
#[derive(Debug, Clone, PartialEq)]
pub struct NetTensor {
    dims: Dims,
    data: Vec<crate::C64>,
}

impl NetTensor {
    pub fn from_matrix(m: &CMatrix, dims: &Dims) -> Result<Self> {
        let d = dims.total();
        if m.rows() != d || m.cols() != d {
            return Err(Error::arg(format!(
                "cannot view a {}x{} matrix as a tensor over dims {:?}",
                m.rows(),
                m.cols(),
                dims.as_slice()
            )));
        }
        Ok(NetTensor { dims: dims.clone(), data: m.data().to_vec() })
    }

    pub fn to_matrix(&self) -> CMatrix {
        let d = self.dims.total();
        CMatrix::new(d, d, self.data.clone()).expect("tensor buffer has matrix shape")
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    /// Index extents in `(out_1 … out_n, in_1 … in_n)` order.
    pub fn shape(&self) -> Vec<usize> {
        let mut s = self.dims.as_slice().to_vec();
        s.extend_from_slice(self.dims.as_slice());
        s
    }

    pub fn data(&self) -> &[crate::C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<crate::C64> {
        self.data
    }

    pub fn get(&self, out: &[usize], inp: &[usize]) -> crate::C64 {
        let d = self.dims.total();
        self.data[self.dims.join_index(out) * d + self.dims.join_index(inp)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_validation() {
        assert!(Dims::new(vec![]).is_err());
        assert!(Dims::new(vec![2, 0]).is_err());
        let d = Dims::new(vec![2, 3]).unwrap();
        assert_eq!(d.total(), 6);
        assert_eq!(d.split_index(5), vec![1, 2]);
        assert_eq!(d.join_index(&[1, 2]), 5);
    }

    #[test]
    fn operator_tuple_rejects_wrong_shape() {
        let dims = Dims::new(vec![2, 2]).unwrap();
        assert!(OperatorTuple::new(dims.clone(), vec![]).is_err());
        assert!(OperatorTuple::new(dims, vec![CMatrix::identity(2)]).is_err());
    }

    #[test]
    fn net_tensor_indexing_matches_matrix() {
        let dims = Dims::new(vec![2, 3]).unwrap();
        let mut rng = seeded_rng(3);
        let m = random_complex_gaussian(6, 6, &mut rng);
        let t = NetTensor::from_matrix(&m, &dims).unwrap();
        assert_eq!(t.shape(), vec![2, 3, 2, 3]);
        for r in 0..6 {
            for c in 0..6 {
                let out = dims.split_index(r);
                let inp = dims.split_index(c);
                assert_eq!(t.get(&out, &inp), m[(r, c)]);
            }
        }
        assert_eq!(t.to_matrix(), m);
    }
}
