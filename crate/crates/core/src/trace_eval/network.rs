//! Small dense tensor-network engine: labeled tensors, pairwise contraction
//! and a greedy contraction order.

use crate::C64;

/// Dense tensor whose axes carry integer labels. A label shared by two axes
/// (in one tensor or across two tensors) is summed over.
#[derive(Debug, Clone)]
pub struct LabeledTensor {
    labels: Vec<u32>,
    shape: Vec<usize>,
    data: Vec<C64>,
}

impl LabeledTensor {
    pub fn new(labels: Vec<u32>, shape: Vec<usize>, data: Vec<C64>) -> Self {
        assert_eq!(labels.len(), shape.len(), "one label per axis");
        assert_eq!(shape.iter().product::<usize>(), data.len(), "buffer does not match shape");
        LabeledTensor { labels, shape, data }
    }

    pub fn scalar(z: C64) -> Self {
        LabeledTensor { labels: vec![], shape: vec![], data: vec![z] }
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn size(&self) -> usize {
        self.data.len()
    }

    pub fn as_scalar(&self) -> Option<C64> {
        self.labels.is_empty().then(|| self.data[0])
    }

    fn strides(shape: &[usize]) -> Vec<usize> {
        let mut s = vec![1; shape.len()];
        for k in (0..shape.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * shape[k + 1];
        }
        s
    }

    /// Sums over every label that occurs twice on this tensor.
    pub fn trace_repeated(self) -> Self {
        let rank = self.labels.len();
        let mut pairs = Vec::new();
        let mut keep = Vec::new();
        for a in 0..rank {
            match (0..rank).find(|&b| b != a && self.labels[b] == self.labels[a]) {
                Some(b) if b > a => pairs.push((a, b)),
                Some(_) => {}
                None => keep.push(a),
            }
        }
        if pairs.is_empty() {
            return self;
        }
        let strides = Self::strides(&self.shape);
        let out_shape: Vec<usize> = keep.iter().map(|&a| self.shape[a]).collect();
        let out_labels: Vec<u32> = keep.iter().map(|&a| self.labels[a]).collect();
        let out_size: usize = out_shape.iter().product();
        let trace_shape: Vec<usize> = pairs.iter().map(|&(a, _)| self.shape[a]).collect();
        let trace_size: usize = trace_shape.iter().product();
        let mut data = vec![C64::new(0.0, 0.0); out_size];
        let mut out_idx = vec![0usize; keep.len()];
        for (o, slot) in data.iter_mut().enumerate() {
            unravel(o, &out_shape, &mut out_idx);
            let base: usize = keep.iter().zip(&out_idx).map(|(&a, &x)| x * strides[a]).sum();
            let mut t_idx = vec![0usize; pairs.len()];
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..trace_size {
                unravel(t, &trace_shape, &mut t_idx);
                let off: usize = pairs.iter().zip(&t_idx).map(|(&(a, b), &x)| x * (strides[a] + strides[b])).sum();
                acc += self.data[base + off];
            }
            *slot = acc;
        }
        LabeledTensor { labels: out_labels, shape: out_shape, data }
    }

    /// Contracts all labels shared with `other`; the result carries this
    /// tensor's free axes followed by `other`'s.
    pub fn contract(&self, other: &LabeledTensor) -> LabeledTensor {
        let shared: Vec<u32> = self.labels.iter().copied().filter(|l| other.labels.contains(l)).collect();
        let free_a: Vec<usize> = (0..self.labels.len()).filter(|&k| !shared.contains(&self.labels[k])).collect();
        let free_b: Vec<usize> = (0..other.labels.len()).filter(|&k| !shared.contains(&other.labels[k])).collect();
        let sh_a: Vec<usize> = shared.iter().map(|l| self.labels.iter().position(|x| x == l).unwrap()).collect();
        let sh_b: Vec<usize> = shared.iter().map(|l| other.labels.iter().position(|x| x == l).unwrap()).collect();

        // A as (free_a × shared), B as (shared × free_b)
        let a = self.permuted(&[free_a.clone(), sh_a.clone()].concat());
        let b = other.permuted(&[sh_b.clone(), free_b.clone()].concat());
        let m: usize = free_a.iter().map(|&k| self.shape[k]).product();
        let k: usize = sh_a.iter().map(|&x| self.shape[x]).product();
        let n: usize = free_b.iter().map(|&x| other.shape[x]).product();
        let mut data = vec![C64::new(0.0, 0.0); m * n];
        for i in 0..m {
            let row = &a[i * k..(i + 1) * k];
            let out = &mut data[i * n..(i + 1) * n];
            for (s, &x) in row.iter().enumerate() {
                if x == C64::new(0.0, 0.0) {
                    continue;
                }
                let brow = &b[s * n..(s + 1) * n];
                for (o, &y) in out.iter_mut().zip(brow) {
                    *o += x * y;
                }
            }
        }
        let mut labels: Vec<u32> = free_a.iter().map(|&x| self.labels[x]).collect();
        labels.extend(free_b.iter().map(|&x| other.labels[x]));
        let mut shape: Vec<usize> = free_a.iter().map(|&x| self.shape[x]).collect();
        shape.extend(free_b.iter().map(|&x| other.shape[x]));
        LabeledTensor { labels, shape, data }
    }

    /// Data reordered so that axis `order[0]` is slowest.
    fn permuted(&self, order: &[usize]) -> Vec<C64> {
        if order.iter().enumerate().all(|(i, &o)| i == o) {
            return self.data.clone();
        }
        let strides = Self::strides(&self.shape);
        let new_shape: Vec<usize> = order.iter().map(|&o| self.shape[o]).collect();
        let mut idx = vec![0usize; order.len()];
        (0..self.data.len())
            .map(|flat| {
                unravel(flat, &new_shape, &mut idx);
                let src: usize = order.iter().zip(&idx).map(|(&o, &x)| x * strides[o]).sum();
                self.data[src]
            })
            .collect()
    }

    /// Size of the tensor `contract` would produce.
    fn contracted_size(&self, other: &LabeledTensor) -> usize {
        let a: usize = (0..self.labels.len())
            .filter(|&k| !other.labels.contains(&self.labels[k]))
            .map(|k| self.shape[k])
            .product();
        let b: usize = (0..other.labels.len())
            .filter(|&k| !self.labels.contains(&other.labels[k]))
            .map(|k| other.shape[k])
            .product();
        a * b
    }

    fn shares_label(&self, other: &LabeledTensor) -> bool {
        self.labels.iter().any(|l| other.labels.contains(l))
    }
}

fn unravel(mut flat: usize, shape: &[usize], out: &mut [usize]) {
    for k in (0..shape.len()).rev() {
        out[k] = flat % shape[k];
        flat /= shape[k];
    }
}

/// Contracts a closed network (every label appears exactly twice) to a
/// scalar. At each step the pair of connected tensors with the smallest
/// result is merged; ties go to the lowest index pair.
pub fn contract_network(tensors: Vec<LabeledTensor>) -> C64 {
    let mut live: Vec<LabeledTensor> = tensors.into_iter().map(LabeledTensor::trace_repeated).collect();
    let mut product = C64::new(1.0, 0.0);
    loop {
        // fold finished scalars
        live.retain(|t| match t.as_scalar() {
            Some(z) => {
                product *= z;
                false
            }
            None => true,
        });
        if live.is_empty() {
            return product;
        }
        let mut best: Option<(usize, usize, usize)> = None;
        for i in 0..live.len() {
            for j in i + 1..live.len() {
                if !live[i].shares_label(&live[j]) {
                    continue;
                }
                let size = live[i].contracted_size(&live[j]);
                if best.is_none_or(|(s, _, _)| size < s) {
                    best = Some((size, i, j));
                }
            }
        }
        let (_, i, j) = best.expect("open labels left in a closed network");
        let b = live.swap_remove(j);
        let a = live.swap_remove(i);
        live.push(a.contract(&b).trace_repeated());
    }
}
