//! Exact integer linear algebra on intersection matrices: discriminants,
//! definiteness, inertia and Smith invariants.
//!
//! Nothing here touches floating point. Determinants use fraction-free
//! (Bareiss) elimination, so every intermediate value is an integer minor.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{SubDivisor, VertexId};

/// Dense square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![BigInt::zero(); n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn neg(&self) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Leading `k x k` block.
    pub fn leading(&self, k: usize) -> Self {
        let mut m = Self::zeros(k);
        for i in 0..k {
            for j in 0..k {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.n + j]
    }
}

/// The intersection matrix `[D_i . D_j]` of the selection, rows in canonical
/// vertex order.
pub fn intersection_matrix(s: &SubDivisor<'_>) -> IntMatrix {
    let verts = s.vertices();
    let mut m = IntMatrix::zeros(verts.len());
    for (i, &v) in verts.iter().enumerate() {
        m[(i, i)] = BigInt::from(s.weight(v));
    }
    for (u, v, c) in s.edges() {
        let i = verts.iter().position(|&x| x == u).expect("selected");
        let j = verts.iter().position(|&x| x == v).expect("selected");
        m[(i, j)] = BigInt::from(c);
        m[(j, i)] = BigInt::from(c);
    }
    m
}

/// Determinant by fraction-free Gaussian elimination with row pivoting.
pub fn bareiss_determinant(m: &IntMatrix) -> BigInt {
    let n = m.dim();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.rows();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

/// All leading principal minors, from `1 x 1` up to the full matrix.
pub fn leading_principal_minors(m: &IntMatrix) -> Vec<BigInt> {
    let n = m.dim();
    let mut out = Vec::with_capacity(n);
    // Without pivoting, the k-th Bareiss pivot is the k-th leading minor.
    let mut a = m.rows();
    let mut prev = BigInt::one();
    let mut k = 0;
    while k < n {
        if k > 0 {
            for i in k..n {
                for j in k..n {
                    let t = &a[i][j] * &a[k - 1][k - 1] - &a[i][k - 1] * &a[k - 1][j];
                    a[i][j] = t / &prev;
                }
            }
            prev = a[k - 1][k - 1].clone();
        }
        if a[k][k].is_zero() {
            break;
        }
        out.push(a[k][k].clone());
        k += 1;
    }
    for k in out.len()..n {
        out.push(bareiss_determinant(&m.leading(k + 1)));
    }
    out
}

/// `-Q` as machine integers, with vertex positions.
fn negated_small_matrix(s: &SubDivisor<'_>) -> Vec<Vec<i64>> {
    let verts = s.vertices();
    let mut m = vec![vec![0i64; verts.len()]; verts.len()];
    for (i, &v) in verts.iter().enumerate() {
        m[i][i] = -s.weight(v);
    }
    for (u, v, c) in s.edges() {
        let i = verts.iter().position(|&x| x == u).expect("selected");
        let j = verts.iter().position(|&x| x == v).expect("selected");
        m[i][j] = -(c as i64);
        m[j][i] = -(c as i64);
    }
    m
}

/// Bareiss in machine integers. Every intermediate value is a minor, so the
/// Hadamard bound of the matrix bounds them all.
fn small_bareiss(mut a: Vec<Vec<i64>>) -> Option<i64> {
    let n = a.len();
    if n == 0 {
        return Some(1);
    }
    let log_bound: f64 = a
        .iter()
        .map(|row| {
            0.5 * (row.iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>())
                .max(1.0)
                .log2()
        })
        .sum();
    if log_bound >= 60.0 {
        return None;
    }
    let mut negate = false;
    let mut prev: i128 = 1;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j] as i128 * a[k][k] as i128 - a[i][k] as i128 * a[k][j] as i128;
                a[i][j] = (t / prev) as i64;
            }
        }
        prev = a[k][k] as i128;
    }
    let det = a[n - 1][n - 1];
    Some(if negate { -det } else { det })
}

/// `d(D) = det(-[D_i . D_j])`; `d(0) = 1`.
pub fn discriminant(s: &SubDivisor<'_>) -> BigInt {
    match small_bareiss(negated_small_matrix(s)) {
        Some(d) => BigInt::from(d),
        None => bareiss_determinant(&intersection_matrix(s).neg()),
    }
}

/// Fails when the induced subgraph has a cycle or a multiple edge.
pub(crate) fn require_forest(s: &SubDivisor<'_>) -> Result<()> {
    let edges = s.edges();
    if edges.iter().any(|&(_, _, c)| c > 1) {
        return Err(Error::NotAForest);
    }
    if edges.len() + s.components().len() != s.len() {
        return Err(Error::NotAForest);
    }
    Ok(())
}

/// Discriminant of a forest by splitting at edges:
/// `d(T1 + T2) = d(T1) d(T2) - d(T1 - C1) d(T2 - C2)` where `C1`, `C2` are
/// the endpoints of the removed edge.
///
/// Each tree is rooted and the rule is applied at every edge toward a
/// child, bottom up. For the subtree `T_v` this keeps the pair
/// `(d(T_v), d(T_v - v))`, so the work is linear in the number of vertices.
pub fn discriminant_by_splitting(s: &SubDivisor<'_>) -> Result<BigInt> {
    let verts = s.vertices();
    let mut index: Vec<(VertexId, usize)> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    index.sort_unstable();
    let pos = |v: VertexId| index[index.binary_search_by_key(&v, |&(x, _)| x).expect("selected")].1;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); verts.len()];
    let mut forest = UnionFind::new(verts.len());
    for (u, v, c) in s.edges() {
        let (i, j) = (pos(u), pos(v));
        if c > 1 || !forest.union(i, j) {
            return Err(Error::NotAForest);
        }
        adj[i].push(j);
        adj[j].push(i);
    }
    let order = child_order(&adj);
    let diag: Vec<i64> = verts.iter().map(|&v| -s.weight(v)).collect();
    Ok(match fold_small(&diag, &order) {
        Some(d) => BigInt::from(d),
        None => fold_big(&diag, &order),
    })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// False when both are already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
        ra != rb
    }
}

/// Breadth-first `(vertex, parent)` pairs of every tree, roots with
/// `usize::MAX`. Descendants come after their ancestors.
fn child_order(adj: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut visited = vec![false; adj.len()];
    let mut order = Vec::with_capacity(adj.len());
    for root in 0..adj.len() {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let start = order.len();
        order.push((root, usize::MAX));
        let mut i = start;
        while i < order.len() {
            let v = order[i].0;
            for &u in &adj[v] {
                if !visited[u] {
                    visited[u] = true;
                    order.push((u, v));
                }
            }
            i += 1;
        }
    }
    order
}

fn fold_small(diag: &[i64], order: &[(usize, usize)]) -> Option<i128> {
    // with[v] = d(T_v), without[v] = d(T_v - v), over the part merged so far
    let mut with: Vec<i128> = diag.iter().map(|&a| a as i128).collect();
    let mut without = vec![1i128; diag.len()];
    let mut total = 1i128;
    for &(v, parent) in order.iter().rev() {
        if parent == usize::MAX {
            total = total.checked_mul(with[v])?;
            continue;
        }
        let w = with[parent]
            .checked_mul(with[v])?
            .checked_sub(without[parent].checked_mul(without[v])?)?;
        without[parent] = without[parent].checked_mul(with[v])?;
        with[parent] = w;
    }
    Some(total)
}

fn fold_big(diag: &[i64], order: &[(usize, usize)]) -> BigInt {
    let mut with: Vec<BigInt> = diag.iter().map(|&a| BigInt::from(a)).collect();
    let mut without = vec![BigInt::one(); diag.len()];
    let mut total = BigInt::one();
    for &(v, parent) in order.iter().rev() {
        if parent == usize::MAX {
            total *= &with[v];
            continue;
        }
        let w = &with[parent] * &with[v] - &without[parent] * &without[v];
        without[parent] = &without[parent] * &with[v];
        with[parent] = w;
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Definiteness {
    NegativeDefinite,
    NegativeSemidefinite,
    /// Neither negative definite nor negative semidefinite.
    Indefinite,
    Empty,
}

/// Numbers of positive, negative and zero eigenvalues of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Inertia by symmetric congruence over the rationals.
pub fn inertia(m: &IntMatrix) -> Inertia {
    let n = m.dim();
    let mut a: Vec<Vec<BigRational>> = m
        .rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut inertia = Inertia {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    while !alive.is_empty() {
        let pivot = match alive.iter().position(|&i| !a[i][i].is_zero()) {
            Some(p) => alive[p],
            None => {
                let off = alive
                    .iter()
                    .enumerate()
                    .find_map(|(p, &i)| alive[p + 1..].iter().find(|&&j| !a[i][j].is_zero()).map(|&j| (i, j)));
                match off {
                    Some((i, j)) => {
                        // e_i -> e_i + e_j makes the (i, i) entry 2 a_ij.
                        for k in 0..n {
                            let t = a[j][k].clone();
                            a[i][k] += t;
                        }
                        for k in 0..n {
                            let t = a[k][j].clone();
                            a[k][i] += t;
                        }
                        i
                    }
                    None => {
                        inertia.zero += alive.len();
                        break;
                    }
                }
            }
        };
        let p = a[pivot][pivot].clone();
        if p.is_positive() {
            inertia.positive += 1;
        } else {
            inertia.negative += 1;
        }
        alive.retain(|&i| i != pivot);
        for &i in &alive {
            let f = &a[i][pivot] / &p;
            if f.is_zero() {
                continue;
            }
            for &j in &alive {
                let t = &f * &a[pivot][j];
                a[i][j] -= t;
            }
        }
        for &i in &alive {
            a[i][pivot] = BigRational::zero();
            a[pivot][i] = BigRational::zero();
        }
    }
    inertia
}

/// Sylvester's criterion on `-Q` for definiteness; semidefiniteness from the
/// exact inertia.
pub fn definiteness(s: &SubDivisor<'_>) -> Definiteness {
    if s.is_empty() {
        return Definiteness::Empty;
    }
    let neg_q = intersection_matrix(s).neg();
    if leading_principal_minors(&neg_q).iter().all(|x| x.is_positive()) {
        return Definiteness::NegativeDefinite;
    }
    if inertia(&neg_q).negative == 0 {
        Definiteness::NegativeSemidefinite
    } else {
        Definiteness::Indefinite
    }
}

/// Diagonal of the Smith normal form (absolute values, zeros last).
pub fn smith_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    let n = m.dim();
    let mut a = m.rows();
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        loop {
            // Smallest nonzero entry of the remaining block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                diag.extend(std::iter::repeat_n(BigInt::zero(), n - t));
                return diag;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..n {
                let q = a[i][t].div_floor(&p);
                if !q.is_zero() {
                    for j in t..n {
                        let s = &q * &a[t][j];
                        a[i][j] -= s;
                    }
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = a[t][j].div_floor(&p);
                if !q.is_zero() {
                    for i in t..n {
                        let s = &q * &a[i][t];
                        a[i][j] -= s;
                    }
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // The pivot must divide the whole remaining block.
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| !(&a[i][j] % &p).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..n {
                        let s = a[i][j].clone();
                        a[t][j] += s;
                    }
                }
                None => {
                    diag.push(p.abs());
                    break;
                }
            }
        }
    }
    diag
}

/// Lattice data of a selection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeInvariants {
    #[serde(with = "crate::decimal")]
    pub discriminant: BigInt,
    #[serde(with = "crate::decimal::vec")]
    pub invariant_factors: Vec<BigInt>,
    pub definiteness: Definiteness,
}

impl LatticeInvariants {
    /// Order of the torsion group: product of the nonzero invariant factors.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().filter(|x| !x.is_zero()).product()
    }
}

pub fn smith_invariants(s: &SubDivisor<'_>) -> LatticeInvariants {
    let q = intersection_matrix(s);
    LatticeInvariants {
        discriminant: bareiss_determinant(&q.neg()),
        invariant_factors: smith_diagonal(&q),
        definiteness: definiteness(s),
    }
}
