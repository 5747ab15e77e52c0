//! Deciding whether a trace monomial splits as a product of two smaller ones.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::permnet::{network_graph, Perm, PermTuple, TraceMonomial, MAX_BOXES};

/// How a factorization was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// The wiring graph has several components. The product identity holds
    /// for every operator tuple.
    Disconnected,
    /// Each row's cycles were split into two groups with matching label
    /// content and moved onto two common blocks of boxes. Cycle content is
    /// all a row contributes when every operator is a simple tensor
    /// `⊗_i A_i`, so the identity holds on simple tensors; on general
    /// operators the rows interact and it can fail.
    Relocated,
}

/// Cycles of one row, in original box positions, assigned to each factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSplit {
    pub left: Vec<Vec<usize>>,
    pub right: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorWitness {
    pub kind: WitnessKind,
    /// Box partition. For [`WitnessKind::Disconnected`] these are positions
    /// of the input monomial; for [`WitnessKind::Relocated`] they index the
    /// relocated layout, whose first block carries `left`.
    pub blocks: (Vec<usize>, Vec<usize>),
    pub rows: Vec<RowSplit>,
    pub left: TraceMonomial,
    pub right: TraceMonomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorizationResult {
    Irreducible,
    Factors(FactorWitness),
}

impl FactorizationResult {
    pub fn is_factors(&self) -> bool {
        matches!(self, FactorizationResult::Factors(_))
    }

    pub fn witness(&self) -> Option<&FactorWitness> {
        match self {
            FactorizationResult::Factors(w) => Some(w),
            FactorizationResult::Irreducible => None,
        }
    }
}

/// Looks for a splitting of `mon`, first by disconnection of the wiring
/// graph, then by relocating whole cycles: row `i` contributes a subset
/// `A_i` of its cycles to the first factor, and the label content of `A_i`
/// must be the same nonempty proper part for every row. With a single
/// operator label this is the condition that the cycle lengths in `A_i`
/// have a common sum.
///
/// `Irreducible` means neither test applies; for mixed labels it is not a
/// proof that no other splitting exists.
pub fn factorize(mon: &TraceMonomial) -> Result<FactorizationResult> {
    let l = mon.degree();
    if l > MAX_BOXES {
        return Err(Error::unsupported(format!("{l} boxes exceeds the limit of {MAX_BOXES}")));
    }
    let components = network_graph(mon).components();
    if components.len() > 1 {
        return disconnected(mon, &components[0]).map(FactorizationResult::Factors);
    }
    Ok(match relocated(mon)? {
        Some(w) => FactorizationResult::Factors(w),
        None => FactorizationResult::Irreducible,
    })
}

fn disconnected(mon: &TraceMonomial, first: &[usize]) -> Result<FactorWitness> {
    let rest: Vec<usize> = (0..mon.degree()).filter(|p| !first.contains(p)).collect();
    let rows = mon
        .sigma()
        .rows()
        .iter()
        .map(|perm| {
            let (left, right) = perm.cycles().into_iter().partition(|c| first.contains(&c[0]));
            RowSplit { left, right }
        })
        .collect();
    Ok(FactorWitness {
        kind: WitnessKind::Disconnected,
        left: mon.restrict(first)?,
        right: mon.restrict(&rest)?,
        blocks: (first.to_vec(), rest),
        rows,
    })
}

fn label_content(mon: &TraceMonomial, boxes: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut c = vec![0; mon.min_operators()];
    for p in boxes {
        c[mon.labels()[p]] += 1;
    }
    c
}

fn relocated(mon: &TraceMonomial) -> Result<Option<FactorWitness>> {
    let total = label_content(mon, 0..mon.degree());
    let zero = vec![0; total.len()];
    let row_cycles: Vec<Vec<Vec<usize>>> = mon.sigma().rows().iter().map(Perm::cycles).collect();

    // per row: label content → first subset of cycles realising it
    let reachable: Vec<BTreeMap<Vec<usize>, u32>> = row_cycles
        .iter()
        .map(|cycles| {
            let mut seen = BTreeMap::new();
            for mask in 0u32..(1 << cycles.len()) {
                let boxes = (0..cycles.len()).filter(|k| mask >> k & 1 == 1).flat_map(|k| cycles[k].iter().copied());
                seen.entry(label_content(mon, boxes)).or_insert(mask);
            }
            seen
        })
        .collect();

    let target = reachable[0]
        .keys()
        .filter(|c| **c != zero && **c != total)
        .filter(|c| reachable[1..].iter().all(|r| r.contains_key(*c)))
        .min_by_key(|c| (c.iter().sum::<usize>(), (*c).clone()));
    let Some(target) = target.cloned() else {
        return Ok(None);
    };
    let rest: Vec<usize> = total.iter().zip(&target).map(|(t, a)| t - a).collect();

    let rows: Vec<RowSplit> = row_cycles
        .iter()
        .zip(&reachable)
        .map(|(cycles, seen)| {
            let mask = seen[&target];
            let (left, right) =
                (0..cycles.len()).map(|k| (k, cycles[k].clone())).partition::<Vec<_>, _>(|(k, _)| mask >> k & 1 == 1);
            RowSplit { left: left.into_iter().map(|x| x.1).collect(), right: right.into_iter().map(|x| x.1).collect() }
        })
        .collect();

    let left = assemble(mon, &target, rows.iter().map(|r| &r.left[..]))?;
    let right = assemble(mon, &rest, rows.iter().map(|r| &r.right[..]))?;
    let s = left.degree();
    Ok(Some(FactorWitness {
        kind: WitnessKind::Relocated,
        blocks: ((0..s).collect(), (s..mon.degree()).collect()),
        rows,
        left,
        right,
    }))
}

/// Builds a monomial with sorted labels of the given content, placing each
/// row's cycles on boxes of matching labels in order of appearance.
fn assemble<'a>(
    mon: &TraceMonomial,
    content: &[usize],
    rows: impl Iterator<Item = &'a [Vec<usize>]>,
) -> Result<TraceMonomial> {
    let labels: Vec<usize> = content.iter().enumerate().flat_map(|(a, &c)| std::iter::repeat_n(a, c)).collect();
    let starts: Vec<usize> = content
        .iter()
        .scan(0, |acc, &c| {
            let s = *acc;
            *acc += c;
            Some(s)
        })
        .collect();
    let mut perms = Vec::new();
    for cycles in rows {
        let mut next = starts.clone();
        let mut images = vec![0; labels.len()];
        for cycle in cycles {
            let placed: Vec<usize> = cycle
                .iter()
                .map(|&p| {
                    let a = mon.labels()[p];
                    next[a] += 1;
                    next[a] - 1
                })
                .collect();
            for k in 0..placed.len() {
                images[placed[k]] = placed[(k + 1) % placed.len()];
            }
        }
        perms.push(Perm::new(images)?);
    }
    TraceMonomial::new(labels, PermTuple::new(perms)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor_core::{kron, random_complex_gaussian, random_operator_tuple, seeded_rng, Dims, OperatorTuple};
    use crate::trace_eval::eval_contract;

    fn mon(labels: Vec<usize>, rows: &[&[Vec<usize>]]) -> TraceMonomial {
        let l = labels.len();
        let perms = rows.iter().map(|c| Perm::from_cycles(l, c).unwrap()).collect();
        TraceMonomial::new(labels, PermTuple::new(perms).unwrap()).unwrap()
    }

    fn product_gap(w: &FactorWitness, mon: &TraceMonomial, ops: &OperatorTuple) -> f64 {
        let whole = eval_contract(mon, ops).unwrap();
        let prod = eval_contract(&w.left, ops).unwrap() * eval_contract(&w.right, ops).unwrap();
        (whole - prod).norm() / (1.0 + whole.norm())
    }

    fn simple_tuple(n: usize, m: usize, seed: u64) -> OperatorTuple {
        let mut rng = seeded_rng(seed);
        let mats = (0..m)
            .map(|_| kron(&(0..n).map(|_| random_complex_gaussian(2, 2, &mut rng)).collect::<Vec<_>>()).unwrap())
            .collect();
        OperatorTuple::new(Dims::uniform(n, 2).unwrap(), mats).unwrap()
    }

    #[test]
    fn two_two_splits_relocated() {
        let m = mon(vec![0; 4], &[&[vec![0, 1], vec![2, 3]], &[vec![0, 2], vec![1, 3]]]);
        let FactorizationResult::Factors(w) = factorize(&m).unwrap() else { panic!("expected factors") };
        assert_eq!(w.kind, WitnessKind::Relocated);
        assert_eq!(w.left.degree(), 2);
        assert_eq!(w.right.degree(), 2);
        for r in &w.rows {
            assert_eq!(r.left.iter().map(Vec::len).sum::<usize>(), 2);
        }
        for seed in 0..20 {
            assert!(product_gap(&w, &m, &simple_tuple(2, 1, seed)) < 1e-10);
        }
        // the identity is specific to simple tensors
        let general = random_operator_tuple(&Dims::uniform(2, 2).unwrap(), 1, 7).unwrap();
        assert!(product_gap(&w, &m, &general) > 1e-3);
    }

    #[test]
    fn three_one_against_two_two_is_irreducible() {
        let m = mon(vec![0; 4], &[&[vec![0, 1, 2]], &[vec![0, 1], vec![2, 3]]]);
        assert_eq!(factorize(&m).unwrap(), FactorizationResult::Irreducible);
    }

    #[test]
    fn disconnected_identities() {
        let m = mon(vec![0, 1], &[&[], &[]]);
        let w = factorize(&m).unwrap().witness().cloned().unwrap();
        assert_eq!(w.kind, WitnessKind::Disconnected);
        assert_eq!(w.blocks, (vec![0], vec![1]));
        assert_eq!(w.left.labels(), &[0]);
        assert_eq!(w.right.labels(), &[1]);
        let ops = random_operator_tuple(&Dims::uniform(2, 2).unwrap(), 2, 3).unwrap();
        assert!(product_gap(&w, &m, &ops) < 1e-12);
    }

    #[test]
    fn disconnected_witness_holds_on_general_tuples() {
        let m = mon(vec![0, 1, 0, 1], &[&[vec![0, 1], vec![2, 3]], &[vec![0, 1], vec![2, 3]]]);
        let w = factorize(&m).unwrap().witness().cloned().unwrap();
        assert_eq!(w.kind, WitnessKind::Disconnected);
        for seed in 0..20 {
            let ops = random_operator_tuple(&Dims::uniform(2, 2).unwrap(), 2, seed).unwrap();
            assert!(product_gap(&w, &m, &ops) < 1e-9);
        }
    }

    #[test]
    fn single_box_and_full_cycle_are_irreducible() {
        assert!(!factorize(&mon(vec![0], &[&[]])).unwrap().is_factors());
        assert!(!factorize(&mon(vec![0; 3], &[&[vec![0, 1, 2]]])).unwrap().is_factors());
    }

    #[test]
    fn labels_must_balance_across_rows() {
        // row 1 pairs equal labels, row 2 pairs different ones
        let m = mon(vec![0, 0, 1, 1], &[&[vec![0, 1], vec![2, 3]], &[vec![0, 2], vec![1, 3]]]);
        assert!(!factorize(&m).unwrap().is_factors());
        let m = mon(vec![0, 1, 0, 1], &[&[vec![0, 1], vec![2, 3]], &[vec![0, 3], vec![1, 2]]]);
        let w = factorize(&m).unwrap().witness().cloned().unwrap();
        assert_eq!(w.kind, WitnessKind::Relocated);
        assert_eq!(w.left.labels(), &[0, 1]);
        for seed in 0..10 {
            assert!(product_gap(&w, &m, &simple_tuple(2, 2, seed)) < 1e-10);
        }
    }

    #[test]
    fn too_many_boxes() {
        let m = TraceMonomial::uniform(PermTuple::identity(1, 9));
        assert!(matches!(factorize(&m), Err(Error::Unsupported(_))));
    }
}
