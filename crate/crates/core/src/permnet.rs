//! Permutation tuples, trace monomials and their enumeration.
//!
//! Positions ("boxes") and operator labels are 0-based in the API; the
//! textual cycle notation produced by [`Display`](std::fmt::Display) is
//! 1-based, matching the usual mathematical convention.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tensor_core::Dims;

/// Largest box count accepted by brute-force canonicalisation.
pub const MAX_BOXES: usize = 8;
/// Largest degree accepted by [`enumerate_monomials`].
pub const MAX_ENUM_DEGREE: usize = 6;
/// Upper limit on the number of raw `(P, σ)` candidates an enumeration may visit.
pub const MAX_CANDIDATES: u64 = 10_000_000;

/// A permutation of `{0, …, ℓ-1}` stored by its images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let l = images.len();
        let mut seen = vec![false; l];
        for &x in &images {
            if x >= l || seen[x] {
                return Err(Error::arg(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(l: usize) -> Self {
        Perm { images: (0..l).collect() }
    }

    /// Builds a permutation from disjoint cycles; positions not mentioned are
    /// fixed. Each cycle `(r_1 … r_k)` maps `r_j ↦ r_{j+1}` and `r_k ↦ r_1`.
    pub fn from_cycles(l: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..l).collect();
        let mut used = vec![false; l];
        for cycle in cycles {
            for (k, &r) in cycle.iter().enumerate() {
                if r >= l {
                    return Err(Error::arg(format!("position {} exceeds {l} boxes", r + 1)));
                }
                if used[r] {
                    return Err(Error::arg(format!("position {} appears in more than one cycle", r + 1)));
                }
                used[r] = true;
                images[r] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Perm { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, j: usize) -> usize {
        self.images[j]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (j, &x) in self.images.iter().enumerate() {
            inv[x] = j;
        }
        Perm { images: inv }
    }

    /// `self ∘ other`, i.e. `j ↦ self(other(j))`.
    pub fn compose(&self, other: &Perm) -> Self {
        assert_eq!(self.len(), other.len(), "composing permutations of different size");
        Perm { images: other.images.iter().map(|&j| self.images[j]).collect() }
    }

    /// `τ ∘ self ∘ τ^{-1}`.
    pub fn conjugate_by(&self, tau: &Perm) -> Self {
        tau.compose(self).compose(&tau.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(j, &x)| j == x)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        cycle_decomposition(self)
    }

    /// Cycle lengths, largest first.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn max_cycle_len(&self) -> usize {
        self.cycles().iter().map(Vec::len).max().unwrap_or(0)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

/// Disjoint cycles of `p`, fixed points included. Each cycle starts at its
/// smallest element and cycles are ordered by that element.
pub fn cycle_decomposition(p: &Perm) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut j = p.apply(start);
        while j != start {
            seen[j] = true;
            cycle.push(j);
            j = p.apply(j);
        }
        out.push(cycle);
    }
    out
}

/// One permutation per subsystem row, all acting on the same `ℓ` boxes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermTuple {
    perms: Vec<Perm>,
}

impl PermTuple {
    pub fn new(perms: Vec<Perm>) -> Result<Self> {
        let first = perms.first().ok_or_else(|| Error::arg("permutation tuple needs at least one row"))?;
        if perms.iter().any(|p| p.len() != first.len()) {
            return Err(Error::arg("all rows of a permutation tuple must act on the same number of boxes"));
        }
        Ok(PermTuple { perms })
    }

    pub fn identity(n: usize, l: usize) -> Self {
        PermTuple { perms: vec![Perm::identity(l); n] }
    }

    /// Number of rows `n`.
    pub fn n(&self) -> usize {
        self.perms.len()
    }

    /// Number of boxes `ℓ`.
    pub fn len(&self) -> usize {
        self.perms[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rows(&self) -> &[Perm] {
        &self.perms
    }

    pub fn row(&self, i: usize) -> &Perm {
        &self.perms[i]
    }

    pub fn inverse(&self) -> Self {
        PermTuple { perms: self.perms.iter().map(Perm::inverse).collect() }
    }

    pub fn conjugate_by(&self, tau: &Perm) -> Self {
        PermTuple { perms: self.perms.iter().map(|p| p.conjugate_by(tau)).collect() }
    }
}

impl fmt::Display for PermTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.perms.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// The invariant `Tr^P_σ`: box `j` holds operator `labels[j]`, and row `i`
/// wires the boxes along the cycles of `sigma.row(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TraceMonomial {
    labels: Vec<usize>,
    sigma: PermTuple,
}

impl TraceMonomial {
    pub fn new(labels: Vec<usize>, sigma: PermTuple) -> Result<Self> {
        if labels.len() != sigma.len() {
            return Err(Error::arg(format!("{} labels for {} boxes", labels.len(), sigma.len())));
        }
        if labels.is_empty() {
            return Err(Error::arg("a trace monomial needs at least one box"));
        }
        Ok(TraceMonomial { labels, sigma })
    }

    /// `Tr(M^ℓ)`-style monomial with a single operator label.
    pub fn uniform(sigma: PermTuple) -> Self {
        TraceMonomial { labels: vec![0; sigma.len()], sigma }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn sigma(&self) -> &PermTuple {
        &self.sigma
    }

    /// Number of subsystem rows.
    pub fn n(&self) -> usize {
        self.sigma.n()
    }

    /// `|P|`, the polynomial degree in the matrix entries.
    pub fn degree(&self) -> usize {
        self.labels.len()
    }

    /// Smallest tuple length `m` this monomial can be evaluated on.
    pub fn min_operators(&self) -> usize {
        self.labels.iter().max().map_or(0, |&x| x + 1)
    }

    /// Lexicographic comparison key: labels, then the images of each row.
    pub fn key(&self) -> Vec<usize> {
        let mut k = self.labels.clone();
        for p in self.sigma.rows() {
            k.extend_from_slice(p.images());
        }
        k
    }

    /// Moves box `j` to position `τ(j)`: `P ↦ P∘τ^{-1}`, `σ_i ↦ τσ_iτ^{-1}`.
    pub fn relabel(&self, tau: &Perm) -> Self {
        let inv = tau.inverse();
        let labels = (0..self.degree()).map(|k| self.labels[inv.apply(k)]).collect();
        TraceMonomial { labels, sigma: self.sigma.conjugate_by(tau) }
    }

    /// The monomial with every row inverted.
    pub fn inverse(&self) -> Self {
        TraceMonomial { labels: self.labels.clone(), sigma: self.sigma.inverse() }
    }

    /// Restriction to a set of boxes closed under every row. Boxes keep their
    /// relative order.
    pub fn restrict(&self, positions: &[usize]) -> Result<Self> {
        let mut pos = positions.to_vec();
        pos.sort_unstable();
        pos.dedup();
        let mut new_index = vec![usize::MAX; self.degree()];
        for (k, &p) in pos.iter().enumerate() {
            if p >= self.degree() {
                return Err(Error::arg(format!("box {} out of range", p + 1)));
            }
            new_index[p] = k;
        }
        let mut rows = Vec::with_capacity(self.n());
        for perm in self.sigma.rows() {
            let mut images = Vec::with_capacity(pos.len());
            for &p in &pos {
                let q = new_index[perm.apply(p)];
                if q == usize::MAX {
                    return Err(Error::arg("box subset is not closed under the wiring"));
                }
                images.push(q);
            }
            rows.push(Perm::new(images)?);
        }
        TraceMonomial::new(pos.iter().map(|&p| self.labels[p]).collect(), PermTuple::new(rows)?)
    }
}

impl Ord for TraceMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then(self.n().cmp(&other.n())).then_with(|| self.key().cmp(&other.key()))
    }
}

impl PartialOrd for TraceMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TraceMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "{} {}", labels.join(","), self.sigma)
    }
}

/// Per-row largest cycle length.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Girth(pub Vec<usize>);

impl Girth {
    /// No restriction for monomials of up to `l` boxes.
    pub fn unrestricted(n: usize, l: usize) -> Self {
        Girth(vec![l; n])
    }

    /// Componentwise `self ≤ cap`.
    pub fn within(&self, cap: &Girth) -> bool {
        self.0.len() == cap.0.len() && self.0.iter().zip(&cap.0).all(|(a, b)| a <= b)
    }
}

pub fn girth_of(m: &TraceMonomial) -> Girth {
    Girth(m.sigma().rows().iter().map(Perm::max_cycle_len).collect())
}

/// Girth bound for generators under local conjugation: `binom(d_i+1, 2)` when
/// `d_i ≤ 3`, otherwise `d_i²`.
pub fn girth_bound(dims: &Dims) -> Girth {
    Girth(dims.as_slice().iter().map(|&d| if d <= 3 { d * (d + 1) / 2 } else { d * d }).collect())
}

/// Undirected graph on box positions with an edge `{j, σ_i(j)}` for every
/// non-fixed point of every row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkGraph {
    vertices: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl NetworkGraph {
    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut root_slot = vec![usize::MAX; self.vertices];
        for v in 0..self.vertices {
            let r = find(&mut parent, v);
            if root_slot[r] == usize::MAX {
                root_slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[root_slot[r]].push(v);
        }
        groups
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

pub fn network_graph(m: &TraceMonomial) -> NetworkGraph {
    let mut edges = BTreeSet::new();
    for p in m.sigma().rows() {
        for j in 0..p.len() {
            let k = p.apply(j);
            if k != j {
                edges.insert((j.min(k), j.max(k)));
            }
        }
    }
    NetworkGraph { vertices: m.degree(), edges }
}

/// All permutations of `{0, …, l-1}` in lexicographic order of their images.
pub fn all_perms(l: usize) -> Vec<Perm> {
    let mut cur: Vec<usize> = (0..l).collect();
    let mut out = vec![Perm { images: cur.clone() }];
    while next_permutation(&mut cur) {
        out.push(Perm { images: cur.clone() });
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Lexicographically smallest relabeling of `m` (see [`TraceMonomial::relabel`]).
/// Equal canonical forms imply equal polynomials.
pub fn canonical_form(m: &TraceMonomial) -> Result<TraceMonomial> {
    if m.degree() > MAX_BOXES {
        return Err(Error::unsupported(format!("canonical form needs at most {MAX_BOXES} boxes, got {}", m.degree())));
    }
    Ok(all_perms(m.degree())
        .iter()
        .map(|tau| m.relabel(tau))
        .min_by(|a, b| a.key().cmp(&b.key()))
        .expect("S_l is nonempty"))
}

/// Precomputed relabelings `(τ, τ^{-1})` for one box count.
struct Relabelings {
    pairs: Vec<(Vec<usize>, Vec<usize>)>,
}

impl Relabelings {
    fn new(l: usize) -> Self {
        let pairs = all_perms(l)
            .into_iter()
            .filter(|p| !p.is_identity())
            .map(|p| {
                let inv = p.inverse().images;
                (p.images, inv)
            })
            .collect();
        Relabelings { pairs }
    }

    /// True when no relabeling yields a strictly smaller key.
    fn is_minimal(&self, labels: &[usize], rows: &[&[usize]]) -> bool {
        let l = labels.len();
        'tau: for (tau, inv) in &self.pairs {
            for k in 0..l {
                match labels[inv[k]].cmp(&labels[k]) {
                    Ordering::Less => return false,
                    Ordering::Greater => continue 'tau,
                    Ordering::Equal => {}
                }
            }
            for row in rows {
                for k in 0..l {
                    match tau[row[inv[k]]].cmp(&row[k]) {
                        Ordering::Less => return false,
                        Ordering::Greater => continue 'tau,
                        Ordering::Equal => {}
                    }
                }
            }
        }
        true
    }
}

fn connected(l: usize, rows: &[&[usize]]) -> bool {
    let mut parent: Vec<usize> = (0..l).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut parts = l;
    for row in rows {
        for (j, &k) in row.iter().enumerate() {
            let (a, b) = (find(&mut parent, j), find(&mut parent, k));
            if a != b {
                parent[a] = b;
                parts -= 1;
            }
        }
    }
    parts <= 1
}

fn label_vectors(m: usize, l: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..l {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..m).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Rows admitted by the girth cap, per subsystem.
fn allowed_rows(l: usize, cap: &Girth) -> Vec<Vec<Perm>> {
    let perms = all_perms(l);
    cap.0.iter().map(|&c| perms.iter().filter(|p| p.max_cycle_len() <= c).cloned().collect()).collect()
}

fn check_request(n: usize, m: usize, max_degree: usize, cap: &Girth) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(Error::arg("enumeration needs n ≥ 1 and m ≥ 1"));
    }
    if cap.0.len() != n {
        return Err(Error::arg(format!("girth cap has {} entries, expected {n}", cap.0.len())));
    }
    if max_degree > MAX_ENUM_DEGREE {
        return Err(Error::unsupported(format!(
            "enumeration is limited to degree {MAX_ENUM_DEGREE}, requested {max_degree}"
        )));
    }
    let mut total: u64 = 0;
    for l in 1..=max_degree {
        let rows: u64 = allowed_rows(l, cap).iter().map(|r| r.len() as u64).product();
        total = total.saturating_add((m as u64).saturating_pow(l as u32).saturating_mul(rows));
    }
    if total > MAX_CANDIDATES {
        return Err(Error::unsupported(format!("enumeration would visit {total} candidates (limit {MAX_CANDIDATES})")));
    }
    Ok(())
}

/// Calls `visit` on every row combination for one label vector, in lexicographic key order within each label vector.
fn for_each_candidate<F>(labels: &[usize], rows: &[Vec<Perm>], mut visit: F)
where
    F: FnMut(&[usize], &[&[usize]]),
{
    let n = rows.len();
    let mut idx = vec![0usize; n];
    if rows.iter().any(Vec::is_empty) {
        return;
    }
    loop {
        let chosen: Vec<&[usize]> = (0..n).map(|i| rows[i][idx[i]].images()).collect();
        visit(labels, &chosen);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < rows[i].len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

fn build(labels: &[usize], rows: &[&[usize]]) -> TraceMonomial {
    TraceMonomial {
        labels: labels.to_vec(),
        sigma: PermTuple { perms: rows.iter().map(|r| Perm { images: r.to_vec() }).collect() },
    }
}

/// One representative (the canonical form) per relabeling class of
/// monomials with `1 ≤ |P| ≤ max_degree`, girth within `girth_cap` and, if
/// requested, a connected network. Sorted by degree, then key.
pub fn enumerate_monomials(
    n: usize,
    m: usize,
    max_degree: usize,
    girth_cap: &Girth,
    connected_only: bool,
) -> Result<Vec<TraceMonomial>> {
    check_request(n, m, max_degree, girth_cap)?;
    let mut out = Vec::new();
    for l in 1..=max_degree {
        let rows = allowed_rows(l, girth_cap);
        let relabelings = Relabelings::new(l);
        let mut found: Vec<TraceMonomial> = label_vectors(m, l)
            .par_iter()
            .flat_map_iter(|labels| {
                let mut local = Vec::new();
                for_each_candidate(labels, &rows, |p, sigma| {
                    if connected_only && !connected(l, sigma) {
                        return;
                    }
                    if relabelings.is_minimal(p, sigma) {
                        local.push(build(p, sigma));
                    }
                });
                local
            })
            .collect();
        found.sort();
        out.extend(found);
    }
    Ok(out)
}

/// Every candidate `(P, σ)` without deduplication, in the same order and
/// under the same filters as [`enumerate_monomials`].
pub fn enumerate_raw(
    n: usize,
    m: usize,
    max_degree: usize,
    girth_cap: &Girth,
    connected_only: bool,
) -> Result<Vec<TraceMonomial>> {
    check_request(n, m, max_degree, girth_cap)?;
    let mut out = Vec::new();
    for l in 1..=max_degree {
        let rows = allowed_rows(l, girth_cap);
        for labels in label_vectors(m, l) {
            for_each_candidate(&labels, &rows, |p, sigma| {
                if !connected_only || connected(l, sigma) {
                    out.push(build(p, sigma));
                }
            });
        }
    }
    Ok(out)
}
