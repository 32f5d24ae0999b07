//! Beck–Fiala style rounding of a fractional split, and recursive halving
//! into a power-of-two number of balanced parts.
//!
//! The walk keeps the active constraint rows (rows with floating mass above
//! one) as an integer matrix and maintains the adjugate of a square basis of
//! it together with its determinant. Column exchanges, row deletions and row
//! insertions are all Bareiss-style rank-one updates with exact division, so
//! null-space directions are integer vectors and no fractions appear outside
//! the variable values themselves.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{common_denominator, from_usize, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiscrepancyError {
    #[error("vector {index} has l1-norm {norm} > 1")]
    NormExceeded { index: usize, norm: Rational },
    #[error("vector {index} has length {got}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, got: usize },
    #[error("split fraction {0} is outside [0, 1]")]
    FractionOutOfRange(Rational),
    #[error("part count {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),
    #[error("maintained equality broken on coordinate {coordinate} in phase {phase}")]
    InvariantViolated { phase: usize, coordinate: usize },
}

/// Vectors of equal dimension with l1-norm at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorFamily {
    dim: usize,
    vectors: Vec<Vec<Rational>>,
}

impl VectorFamily {
    pub fn new(dim: usize, vectors: Vec<Vec<Rational>>) -> Result<Self, DiscrepancyError> {
        let one = from_usize(1);
        for (index, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(DiscrepancyError::DimensionMismatch { index, expected: dim, got: v.len() });
            }
            let norm: Rational = v.iter().map(|x| x.abs()).sum();
            if norm > one {
                return Err(DiscrepancyError::NormExceeded { index, norm });
            }
        }
        Ok(VectorFamily { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    fn subfamily(&self, indices: &[usize]) -> VectorFamily {
        VectorFamily { dim: self.dim, vectors: indices.iter().map(|&i| self.vectors[i].clone()).collect() }
    }
}

/// A partition of `0..t` into blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    pub parts: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HalveOptions {
    /// Re-check the maintained equalities exactly after every phase.
    pub check_invariants: bool,
}

/// Statistics of one rounding run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HalveTrace {
    pub phases: usize,
    pub selected: Vec<usize>,
}

/// Largest coordinate deviation `|sum_{i in set} v_i - q * sum_i v_i|`.
pub fn deviation(family: &VectorFamily, set: &[usize], q: &Rational) -> Rational {
    (0..family.dim)
        .map(|j| {
            let total: Rational = family.vectors.iter().map(|v| &v[j]).sum();
            let part: Rational = set.iter().map(|&i| &family.vectors[i][j]).sum();
            (part - q * total).abs()
        })
        .max()
        .unwrap_or_else(Rational::zero)
}

/// `sum_{i < k} 2^{-i}`.
pub fn pow2_bound(k: u32) -> Rational {
    (0..k).map(|i| Rational::new(BigInt::one(), BigInt::one() << i)).sum()
}

/// Picks `I` with `|sum_{i in I} v_ij - q sum_i v_ij| < 1` for every `j`.
pub fn halve(family: &VectorFamily, q: &Rational) -> Result<Vec<usize>, DiscrepancyError> {
    halve_with(family, q, HalveOptions::default()).map(|t| t.selected)
}

pub fn halve_with(family: &VectorFamily, q: &Rational, opts: HalveOptions) -> Result<HalveTrace, DiscrepancyError> {
    if q.is_negative() || *q > from_usize(1) {
        return Err(DiscrepancyError::FractionOutOfRange(q.clone()));
    }
    let t = family.len();
    if t == 0 {
        return Ok(HalveTrace::default());
    }
    if family.vectors.iter().all(|v| v.iter().all(Zero::is_zero)) {
        let take = (q * from_usize(t)).floor().to_integer();
        let take = usize::try_from(take).unwrap_or(0);
        return Ok(HalveTrace { phases: 0, selected: (0..take).collect() });
    }
    let mut walk = Walk::new(family, q);
    walk.run(family, q, opts)?;
    let one = Rational::one();
    Ok(HalveTrace { phases: walk.phases, selected: (0..t).filter(|&i| walk.x[i] == one).collect() })
}

/// Splits the family into `m = 2^k` parts, each within `sum_{i<k} 2^{-i}` of
/// the uniform share `(1/m) sum_i v_i` in every coordinate.
pub fn partition_pow2(family: &VectorFamily, m: usize) -> Result<SplitResult, DiscrepancyError> {
    if m < 2 || !m.is_power_of_two() {
        return Err(DiscrepancyError::NotPowerOfTwo(m));
    }
    let all: Vec<usize> = (0..family.len()).collect();
    let mut parts = Vec::with_capacity(m);
    split_rec(family, &all, m, &mut parts)?;
    Ok(SplitResult { parts })
}

fn split_rec(family: &VectorFamily, indices: &[usize], m: usize, out: &mut Vec<Vec<usize>>) -> Result<(), DiscrepancyError> {
    if m == 1 {
        out.push(indices.to_vec());
        return Ok(());
    }
    let sub = family.subfamily(indices);
    let chosen = halve(&sub, &Rational::new(BigInt::one(), BigInt::from(2)))?;
    let mut in_first = vec![false; indices.len()];
    for &c in &chosen {
        in_first[c] = true;
    }
    let first: Vec<usize> = (0..indices.len()).filter(|&i| in_first[i]).map(|i| indices[i]).collect();
    let second: Vec<usize> = (0..indices.len()).filter(|&i| !in_first[i]).map(|i| indices[i]).collect();
    split_rec(family, &first, m / 2, out)?;
    split_rec(family, &second, m / 2, out)
}

struct Walk {
    t: usize,
    /// Integer-scaled coordinate rows: `a[j][i] = v_ij * scale[j]`.
    a: Vec<Vec<BigInt>>,
    scale: Vec<BigInt>,
    /// `sum` over floating `i` of `|a[j][i]|`.
    mass: Vec<BigInt>,
    x: Vec<Rational>,
    floating: Vec<bool>,
    floating_count: usize,
    /// Row ids currently in the square system, by row position.
    rows: Vec<usize>,
    /// Basic variable per basis position.
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    in_system: Vec<bool>,
    /// Active rows known to be implied by the system.
    pending: Vec<usize>,
    det: BigInt,
    /// `adj[p][q]`: basis position `p`, row position `q`; the basis inverse
    /// is `adj / det`.
    adj: Vec<Vec<BigInt>>,
    phases: usize,
}

impl Walk {
    fn new(family: &VectorFamily, q: &Rational) -> Self {
        let t = family.len();
        let mut a = Vec::new();
        let mut scale = Vec::new();
        let mut mass = Vec::new();
        for j in 0..family.dim {
            let column = family.vectors.iter().map(|v| &v[j]);
            let l = common_denominator(column.clone());
            let row: Vec<BigInt> = column.map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
            mass.push(row.iter().map(|x| x.abs()).sum());
            a.push(row);
            scale.push(l);
        }
        let boundary = q.is_zero() || q.is_one();
        Walk {
            t,
            a,
            scale,
            mass,
            x: vec![q.clone(); t],
            floating: vec![!boundary; t],
            floating_count: if boundary { 0 } else { t },
            rows: Vec::new(),
            basis: Vec::new(),
            is_basic: vec![false; t],
            in_system: vec![false; family.dim],
            pending: Vec::new(),
            det: BigInt::one(),
            adj: Vec::new(),
            phases: 0,
        }
    }

    fn active(&self, j: usize) -> bool {
        self.mass[j] > self.scale[j]
    }

    fn column(&self, c: usize) -> Vec<BigInt> {
        self.rows.iter().map(|&j| self.a[j][c].clone()).collect()
    }

    fn adj_times(&self, col: &[BigInt]) -> Vec<BigInt> {
        self.adj
            .iter()
            .map(|row| {
                row.iter().zip(col).filter(|(_, c)| !c.is_zero()).map(|(x, c)| x * c).sum()
            })
            .collect()
    }

    fn adj_row_dot(&self, p: usize, c: usize) -> BigInt {
        self.adj[p]
            .iter()
            .zip(&self.rows)
            .filter(|(_, &j)| !self.a[j][c].is_zero())
            .map(|(x, &j)| x * &self.a[j][c])
            .sum()
    }

    /// Floating variables outside the basis, highest index first.
    fn free_columns(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.t).rev().filter(move |&i| self.floating[i] && !self.is_basic[i])
    }

    /// Appends row `j` with a new basic column. Returns false when row `j`
    /// restricted to the floating columns is spanned by the system.
    fn border(&mut self, j: usize) -> bool {
        let r = self.rows.len();
        let mut u = vec![BigInt::zero(); r];
        for p in 0..r {
            let coef = &self.a[j][self.basis[p]];
            if coef.is_zero() {
                continue;
            }
            for q in 0..r {
                u[q] += coef * &self.adj[p][q];
            }
        }
        let mut choice = None;
        for c in self.free_columns() {
            let mut sigma = &self.a[j][c] * &self.det;
            for q in 0..r {
                let entry = &self.a[self.rows[q]][c];
                if !entry.is_zero() && !u[q].is_zero() {
                    sigma -= &u[q] * entry;
                }
            }
            if !sigma.is_zero() {
                choice = Some((c, sigma));
                break;
            }
        }
        let Some((c, sigma)) = choice else { return false };
        let w = self.adj_times(&self.column(c));
        let mut next = Vec::with_capacity(r + 1);
        for p in 0..r {
            let mut row = Vec::with_capacity(r + 1);
            for q in 0..r {
                row.push(exact_div(&sigma * &self.adj[p][q] + &w[p] * &u[q], &self.det));
            }
            row.push(-&w[p]);
            next.push(row);
        }
        let mut last: Vec<BigInt> = u.into_iter().map(|x| -x).collect();
        last.push(self.det.clone());
        next.push(last);
        self.adj = next;
        self.det = sigma;
        self.rows.push(j);
        self.basis.push(c);
        self.is_basic[c] = true;
        self.in_system[j] = true;
        true
    }

    /// Replaces the basic variable at position `l` by column `c`, where
    /// `w = adj * a_c` and `w[l] != 0`.
    fn exchange(&mut self, l: usize, c: usize, w: &[BigInt]) {
        let wl = w[l].clone();
        let pivot_row = self.adj[l].clone();
        for p in 0..self.adj.len() {
            if p == l || (w[p].is_zero() && wl == self.det) {
                continue;
            }
            for q in 0..pivot_row.len() {
                let v = &wl * &self.adj[p][q] - &w[p] * &pivot_row[q];
                self.adj[p][q] = exact_div(v, &self.det);
            }
        }
        self.det = wl;
        self.is_basic[self.basis[l]] = false;
        self.basis[l] = c;
        self.is_basic[c] = true;
    }

    /// Removes the row at position `q0` together with the basis position
    /// `p0`; requires `adj[p0][q0] != 0`.
    fn delete(&mut self, q0: usize, p0: usize) {
        let delta = self.adj[p0][q0].clone();
        let r = self.rows.len();
        let mut next = Vec::with_capacity(r - 1);
        for p in (0..r).filter(|&p| p != p0) {
            let mut row = Vec::with_capacity(r - 1);
            for q in (0..r).filter(|&q| q != q0) {
                let v = &delta * &self.adj[p][q] - &self.adj[p][q0] * &self.adj[p0][q];
                row.push(exact_div(v, &self.det));
            }
            next.push(row);
        }
        self.adj = next;
        self.det = delta;
        self.in_system[self.rows[q0]] = false;
        self.rows.remove(q0);
        self.is_basic[self.basis[p0]] = false;
        self.basis.remove(p0);
    }

    fn fix(&mut self, i: usize) {
        self.floating[i] = false;
        self.floating_count -= 1;
        for j in 0..self.a.len() {
            let v = self.a[j][i].abs();
            if !v.is_zero() {
                self.mass[j] -= v;
            }
        }
    }

    /// Brings the system in line with the current floating set: drops
    /// inactive rows, removes fixed variables from the basis, and tries to
    /// add active rows not yet represented.
    fn restore(&mut self) {
        let mut shrunk = self.phases == 0;
        // Inactive rows leave, preferably taking a fixed basic variable along.
        let mut q = 0;
        while q < self.rows.len() {
            if self.active(self.rows[q]) {
                q += 1;
                continue;
            }
            let r = self.rows.len();
            let p0 = (0..r)
                .filter(|&p| !self.adj[p][q].is_zero())
                .min_by_key(|&p| self.floating[self.basis[p]])
                .expect("adjugate of an invertible matrix has no zero column");
            self.delete(q, p0);
            shrunk = true;
        }
        // Fixed basic variables are exchanged for free columns, or the row
        // combination that pins them is dropped.
        let mut l = 0;
        while l < self.basis.len() {
            if self.floating[self.basis[l]] {
                l += 1;
                continue;
            }
            let entering = self.free_columns().find(|&c| !self.adj_row_dot(l, c).is_zero());
            match entering {
                Some(c) => {
                    let w = self.adj_times(&self.column(c));
                    self.exchange(l, c, &w);
                    l += 1;
                }
                None => {
                    let q0 = (0..self.rows.len()).find(|&q| !self.adj[l][q].is_zero()).expect("nonzero adjugate row");
                    self.pending.push(self.rows[q0]);
                    self.delete(q0, l);
                    shrunk = true;
                }
            }
        }
        if self.phases == 0 {
            self.pending = (0..self.a.len()).filter(|&j| self.active(j)).collect();
        }
        if shrunk {
            let candidates = core::mem::take(&mut self.pending);
            for j in candidates {
                if self.in_system[j] || !self.active(j) {
                    continue;
                }
                if !self.border(j) {
                    self.pending.push(j);
                }
            }
        }
        let pending = core::mem::take(&mut self.pending);
        self.pending = pending.into_iter().filter(|&j| self.active(j) && !self.in_system[j]).collect();
    }

    fn run(&mut self, family: &VectorFamily, q: &Rational, opts: HalveOptions) -> Result<(), DiscrepancyError> {
        let targets: Vec<Rational> = if opts.check_invariants {
            (0..family.dim).map(|j| q * family.vectors.iter().map(|v| &v[j]).sum::<Rational>()).collect()
        } else {
            Vec::new()
        };
        while self.floating_count > 0 {
            self.restore();
            let f = self.free_columns().next().expect("fewer active rows than floating variables");
            let w = self.adj_times(&self.column(f));
            let mut dir: Vec<(usize, BigInt)> = Vec::with_capacity(w.len() + 1);
            dir.push((f, self.det.clone()));
            for (p, wp) in w.into_iter().enumerate() {
                if !wp.is_zero() {
                    dir.push((self.basis[p], -wp));
                }
            }
            self.step(&dir);
            self.phases += 1;
            if opts.check_invariants {
                self.check(family, &targets)?;
            }
        }
        Ok(())
    }

    /// Moves along `dir` to the nearest boundary and fixes every variable
    /// that reaches 0 or 1.
    fn step(&mut self, dir: &[(usize, BigInt)]) {
        let one = Rational::one();
        let mut up: Option<Rational> = None;
        let mut down: Option<Rational> = None;
        for (i, d) in dir {
            let x = &self.x[*i];
            let dr = Rational::from_integer(d.clone());
            let (lim_up, lim_down) = if d.is_positive() {
                ((&one - x) / &dr, x / &dr)
            } else {
                (x / -&dr, (&one - x) / -&dr)
            };
            if up.as_ref().is_none_or(|u| lim_up < *u) {
                up = Some(lim_up);
            }
            if down.as_ref().is_none_or(|u| lim_down < *u) {
                down = Some(lim_down);
            }
        }
        let (up, down) = (up.expect("nonempty direction"), down.expect("nonempty direction"));
        let alpha = if up <= down { up } else { -down };
        let mut hit = Vec::new();
        for (i, d) in dir {
            let next = &self.x[*i] + &alpha * Rational::from_integer(d.clone());
            if next.is_zero() || next.is_one() {
                hit.push(*i);
            }
            self.x[*i] = next;
        }
        debug_assert!(!hit.is_empty());
        for i in hit {
            self.fix(i);
        }
    }

    fn check(&self, family: &VectorFamily, targets: &[Rational]) -> Result<(), DiscrepancyError> {
        for j in (0..family.dim).filter(|&j| self.active(j)) {
            let sum: Rational = family.vectors.iter().zip(&self.x).map(|(v, x)| &v[j] * x).sum();
            if sum != targets[j] {
                return Err(DiscrepancyError::InvariantViolated { phase: self.phases, coordinate: j });
            }
        }
        Ok(())
    }
}

fn exact_div(num: BigInt, den: &BigInt) -> BigInt {
    debug_assert!((&num % den).is_zero(), "inexact division in adjugate update");
    num / den
}
