//! Exact reduced row echelon forms of sparse rational matrices, computed
//! modulo word-sized primes and lifted by rational reconstruction.
//!
//! A lifted basis is accepted only after every input row reduces to zero
//! against it over the rationals. Since the rank modulo a prime never exceeds
//! the rational rank, containment plus equal size proves the two spans agree.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};

pub type SparseRow = Vec<(usize, Rational)>;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Descending sequence of primes below 2^62.
pub fn primes() -> impl Iterator<Item = u64> {
    let mut next = (1u64 << 62) - 1;
    std::iter::from_fn(move || {
        while !is_prime_u64(next) {
            next -= 2;
        }
        let p = next;
        next -= 2;
        Some(p)
    })
}

fn reduce_bigint(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

/// Image of a rational modulo `p`, or `None` if `p` divides the denominator.
pub fn rational_mod(q: &Rational, p: u64) -> Option<u64> {
    let d = reduce_bigint(q.denom(), p);
    if d == 0 {
        return None;
    }
    Some(mul_mod(reduce_bigint(q.numer(), p), inv_mod(d, p), p))
}

/// Incrementally maintained reduced echelon form over `Z/p`.
///
/// Rows are dense; the pivot of a row is its first nonzero column.
#[derive(Clone, Debug)]
pub struct ModRref {
    p: u64,
    ncols: usize,
    rows: Vec<Vec<u64>>,
    pivot_cols: Vec<usize>,
    row_of_col: Vec<Option<usize>>,
    free: Vec<usize>,
}

impl ModRref {
    pub fn new(p: u64, ncols: usize) -> Self {
        ModRref { p, ncols, rows: Vec::new(), pivot_cols: Vec::new(), row_of_col: vec![None; ncols], free: (0..ncols).collect() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` in place; leaves the remainder on free columns.
    fn reduce(&self, row: &mut [u64]) {
        let p = self.p;
        let hits: Vec<(usize, u64)> = self
            .pivot_cols
            .iter()
            .filter(|&&c| row[c] != 0)
            .map(|&c| (self.row_of_col[c].unwrap(), row[c]))
            .collect();
        for (i, f) in hits {
            let r = &self.rows[i];
            row[self.pivot_cols[i]] = 0;
            let neg = p - f;
            for &c in &self.free {
                if r[c] != 0 {
                    row[c] = ((row[c] as u128 + r[c] as u128 * neg as u128) % p as u128) as u64;
                }
            }
        }
    }

    /// Adds a row; returns whether it was independent of the previous ones.
    pub fn insert(&mut self, mut row: Vec<u64>) -> bool {
        debug_assert_eq!(row.len(), self.ncols);
        self.reduce(&mut row);
        let Some(pos) = self.free.iter().position(|&c| row[c] != 0) else { return false };
        let c = self.free[pos];
        let p = self.p;
        let inv = inv_mod(row[c], p);
        for &j in &self.free {
            if row[j] != 0 {
                row[j] = mul_mod(row[j], inv, p);
            }
        }
        self.free.remove(pos);
        for r in self.rows.iter_mut() {
            let f = r[c];
            if f == 0 {
                continue;
            }
            r[c] = 0;
            let neg = p - f;
            for &j in &self.free {
                if row[j] != 0 {
                    r[j] = ((r[j] as u128 + row[j] as u128 * neg as u128) % p as u128) as u64;
                }
            }
        }
        self.row_of_col[c] = Some(self.rows.len());
        self.rows.push(row);
        self.pivot_cols.push(c);
        true
    }

    /// Pivot columns in increasing order with their rows.
    fn sorted(&self) -> Vec<(usize, &Vec<u64>)> {
        let mut out: Vec<(usize, &Vec<u64>)> = self.pivot_cols.iter().copied().zip(self.rows.iter()).collect();
        out.sort_by_key(|(c, _)| *c);
        out
    }
}

/// Wang's rational reconstruction of `a` modulo `m`.
pub fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let a = a.mod_floor(m);
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

/// A reduced row echelon basis over the rationals.
///
/// Row `i` is `e_{pivots[i]} + sum_j rows[i][j]`, with every `j` a free column.
#[derive(Clone, Debug, Default)]
pub struct ExactRref {
    ncols: usize,
    pivots: Vec<usize>,
    rows: Vec<SparseRow>,
    row_of_col: BTreeMap<usize, usize>,
}

/// Result of reducing a vector against an [`ExactRref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    /// Remainder, supported on free columns.
    pub remainder: BTreeMap<usize, Rational>,
    /// `(pivot column, multiple of that basis row)` subtracted.
    pub combination: Vec<(usize, Rational)>,
}

impl ExactRref {
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.row_of_col.contains_key(&col)
    }

    /// The full basis row with pivot `col`.
    pub fn row(&self, col: usize) -> Option<SparseRow> {
        let i = *self.row_of_col.get(&col)?;
        let mut out = vec![(col, Rational::one())];
        out.extend(self.rows[i].iter().cloned());
        out.sort_by_key(|(c, _)| *c);
        Some(out)
    }

    pub fn reduce(&self, x: &BTreeMap<usize, Rational>) -> Reduction {
        let mut remainder = BTreeMap::new();
        let mut combination = Vec::new();
        let mut pending: Vec<(usize, &Rational)> = Vec::new();
        for (c, v) in x {
            if self.row_of_col.contains_key(c) {
                pending.push((*c, v));
            } else {
                remainder.insert(*c, v.clone());
            }
        }
        for (c, v) in pending {
            let i = self.row_of_col[&c];
            for (j, r) in &self.rows[i] {
                let e = remainder.entry(*j).or_insert_with(Rational::zero);
                *e -= v * r;
            }
            combination.push((c, v.clone()));
        }
        remainder.retain(|_, v| !v.is_zero());
        Reduction { remainder, combination }
    }

    /// Multi-modular construction; `rows` may be dependent.
    pub fn from_rows(rows: &[SparseRow], ncols: usize) -> Result<Self> {
        let mut best: Option<Vec<usize>> = None;
        let mut crt_vals: Vec<Vec<BigInt>> = Vec::new();
        let mut modulus = BigInt::one();
        let mut previous: Option<Vec<Vec<Rational>>> = None;
        let mut primes_used = 0usize;
        let mut free_cols: Vec<usize> = Vec::new();
        for p in primes() {
            primes_used += 1;
            if primes_used > 4096 {
                return Err(Error::Invariant("rational reconstruction did not converge".into()));
            }
            let Some(mr) = Self::mod_rref(rows, ncols, p) else { continue };
            let sorted = mr.sorted();
            let pivots: Vec<usize> = sorted.iter().map(|(c, _)| *c).collect();
            let dense: Vec<Vec<u64>> = sorted.iter().map(|(_, r)| (*r).clone()).collect();
            match &best {
                Some(bp) if *bp == pivots => {}
                Some(bp) if !pivot_set_better(&pivots, bp) => continue,
                _ => {
                    // First prime, or a prime revealing a larger pivot set.
                    let pset: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
                    free_cols = (0..ncols).filter(|c| !pset.contains(c)).collect();
                    crt_vals = dense.iter().map(|r| free_cols.iter().map(|&c| BigInt::from(r[c])).collect()).collect();
                    modulus = BigInt::from(p);
                    previous = None;
                    best = Some(pivots);
                    continue;
                }
            }
            // Chinese remaindering of the free-column entries.
            let pb = BigInt::from(p);
            let m_inv = BigInt::from(inv_mod(reduce_bigint(&modulus, p), p));
            for (i, r) in dense.iter().enumerate() {
                for (k, &c) in free_cols.iter().enumerate() {
                    let cur = &crt_vals[i][k];
                    let diff = (BigInt::from(r[c]) - cur).mod_floor(&pb);
                    let t = (diff * &m_inv).mod_floor(&pb);
                    crt_vals[i][k] = cur + &modulus * t;
                }
            }
            modulus *= &pb;
            let recon: Option<Vec<Vec<Rational>>> = crt_vals
                .iter()
                .map(|row| row.iter().map(|a| rational_reconstruction(a, &modulus)).collect())
                .collect();
            let Some(recon) = recon else {
                previous = None;
                continue;
            };
            if previous.as_ref() == Some(&recon) {
                let pivots = best.clone().unwrap();
                let candidate = Self::assemble(ncols, pivots, &free_cols, recon.clone());
                if candidate.spans_all(rows) {
                    return Ok(candidate);
                }
            }
            previous = Some(recon);
        }
        unreachable!("prime iterator is infinite")
    }

    fn assemble(ncols: usize, pivots: Vec<usize>, free_cols: &[usize], vals: Vec<Vec<Rational>>) -> Self {
        let mut rows = Vec::with_capacity(pivots.len());
        let mut row_of_col = BTreeMap::new();
        for (i, (c, vs)) in pivots.iter().zip(vals).enumerate() {
            let row: SparseRow = free_cols.iter().copied().zip(vs).filter(|(_, v)| !v.is_zero()).collect();
            rows.push(row);
            row_of_col.insert(*c, i);
        }
        ExactRref { ncols, pivots, rows, row_of_col }
    }

    fn spans_all(&self, rows: &[SparseRow]) -> bool {
        rows.iter().all(|r| {
            let x: BTreeMap<usize, Rational> = r.iter().cloned().collect();
            self.reduce(&x).remainder.is_empty()
        })
    }

    fn mod_rref(rows: &[SparseRow], ncols: usize, p: u64) -> Option<ModRref> {
        let mut mr = ModRref::new(p, ncols);
        for r in rows {
            let mut dense = vec![0u64; ncols];
            for (c, v) in r {
                dense[*c] = rational_mod(v, p)?;
            }
            mr.insert(dense);
        }
        Some(mr)
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<SparseRow> {
        (0..self.ncols)
            .filter(|c| !self.is_pivot(*c))
            .map(|f| {
                let mut v = vec![(f, Rational::one())];
                for (p, row) in self.pivots.iter().zip(&self.rows) {
                    if let Some((_, r)) = row.iter().find(|(j, _)| *j == f) {
                        v.push((*p, -r));
                    }
                }
                v.sort_by_key(|(c, _)| *c);
                v
            })
            .collect()
    }

    /// Exact elimination without modular lifting, for small inputs and tests.
    pub fn from_rows_direct(rows: &[SparseRow], ncols: usize) -> Self {
        let mut basis: Vec<BTreeMap<usize, Rational>> = Vec::new();
        for r in rows {
            let mut x: BTreeMap<usize, Rational> = r.iter().filter(|(_, v)| !v.is_zero()).cloned().collect();
            for b in &basis {
                let (&pc, _) = b.iter().next().unwrap();
                if let Some(f) = x.get(&pc).cloned() {
                    for (c, v) in b {
                        let e = x.entry(*c).or_insert_with(Rational::zero);
                        *e -= &f * v;
                    }
                    x.retain(|_, v| !v.is_zero());
                }
            }
            let Some((&pc, lead)) = x.iter().next() else { continue };
            let inv = lead.recip();
            for v in x.values_mut() {
                *v *= &inv;
            }
            for b in basis.iter_mut() {
                if let Some(f) = b.get(&pc).cloned() {
                    for (c, v) in &x {
                        let e = b.entry(*c).or_insert_with(Rational::zero);
                        *e -= &f * v;
                    }
                    b.retain(|_, v| !v.is_zero());
                }
            }
            basis.push(x);
        }
        basis.sort_by_key(|b| *b.keys().next().unwrap());
        let pivots: Vec<usize> = basis.iter().map(|b| *b.keys().next().unwrap()).collect();
        let mut row_of_col = BTreeMap::new();
        let rows = basis
            .into_iter()
            .enumerate()
            .map(|(i, b)| {
                let pc = *b.keys().next().unwrap();
                row_of_col.insert(pc, i);
                b.into_iter().filter(|(c, _)| *c != pc).collect()
            })
            .collect();
        ExactRref { ncols, pivots, rows, row_of_col }
    }
}

/// Incrementally grown echelon basis of inserted vectors that can express
/// members of their span in terms of the inserted vectors.
#[derive(Clone, Debug, Default)]
pub struct SpanBasis {
    rows: Vec<(BTreeMap<usize, Rational>, BTreeMap<usize, Rational>)>,
}

impl SpanBasis {
    pub fn new() -> Self {
        SpanBasis::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v`, returning the remainder and the combination subtracted.
    fn reduce(&self, v: &BTreeMap<usize, Rational>) -> (BTreeMap<usize, Rational>, BTreeMap<usize, Rational>) {
        let mut x = v.clone();
        x.retain(|_, c| !c.is_zero());
        let mut comb: BTreeMap<usize, Rational> = BTreeMap::new();
        for (row, rc) in &self.rows {
            let (&p, _) = row.iter().next().unwrap();
            let Some(f) = x.get(&p).cloned() else { continue };
            for (c, r) in row {
                *x.entry(*c).or_insert_with(Rational::zero) -= &f * r;
            }
            x.retain(|_, c| !c.is_zero());
            for (i, r) in rc {
                *comb.entry(*i).or_insert_with(Rational::zero) += &f * r;
            }
        }
        comb.retain(|_, c| !c.is_zero());
        (x, comb)
    }

    /// Inserts `v` as the next vector if it is independent of the previous
    /// accepted ones; returns whether it was accepted.
    pub fn insert(&mut self, v: &BTreeMap<usize, Rational>) -> bool {
        let index = self.rows.len();
        let (x, comb) = self.reduce(v);
        let Some((_, lead)) = x.iter().next() else { return false };
        let inv = lead.recip();
        let row: BTreeMap<usize, Rational> = x.iter().map(|(c, r)| (*c, r * &inv)).collect();
        let mut rc: BTreeMap<usize, Rational> = comb.into_iter().map(|(i, r)| (i, -r * &inv)).collect();
        rc.insert(index, inv);
        self.rows.push((row, rc));
        true
    }

    /// Coefficients of `v` over the accepted vectors, if `v` is in their span.
    pub fn solve(&self, v: &BTreeMap<usize, Rational>) -> Option<Vec<Rational>> {
        let (x, comb) = self.reduce(v);
        if !x.is_empty() {
            return None;
        }
        let mut out = vec![Rational::zero(); self.rows.len()];
        for (i, c) in comb {
            out[i] = c;
        }
        Some(out)
    }

    pub fn contains(&self, v: &BTreeMap<usize, Rational>) -> bool {
        self.reduce(v).0.is_empty()
    }
}

/// Whether `a` is the pivot set of a larger-rank (or lexicographically
/// earlier) echelon form than `b`; the rational pivot set dominates every
/// modular one.
fn pivot_set_better(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return a.len() > b.len();
    }
    a < b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};
    use proptest::prelude::*;

    #[test]
    fn primes_are_prime() {
        let ps: Vec<u64> = primes().take(3).collect();
        assert_eq!(ps[0], 4611686018427387847);
        assert!(ps.iter().all(|&p| is_prime_u64(p)));
        assert!(!is_prime_u64(4611686018427387903));
        assert!(is_prime_u64(2305843009213693951));
    }

    #[test]
    fn reconstruction_recovers_fractions() {
        let m = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64);
        for (a, b) in [(3i64, 7i64), (-22, 9), (0, 1), (12345, 678)] {
            let q = ratio(a, b);
            let residue = {
                // a * b^{-1} mod m via extended gcd
                let e = BigInt::from(b).extended_gcd(&m);
                (BigInt::from(a) * e.x).mod_floor(&m)
            };
            assert_eq!(rational_reconstruction(&residue, &m), Some(q));
        }
    }

    fn rows_strategy() -> impl Strategy<Value = Vec<SparseRow>> {
        prop::collection::vec(prop::collection::vec((0usize..8, -5i64..6, 1i64..4), 0..5), 0..9).prop_map(|rs| {
            rs.into_iter()
                .map(|r| {
                    let mut m: BTreeMap<usize, Rational> = BTreeMap::new();
                    for (c, a, b) in r {
                        *m.entry(c).or_insert_with(Rational::zero) += ratio(a, b);
                    }
                    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn modular_and_direct_agree(rows in rows_strategy()) {
            let a = ExactRref::from_rows(&rows, 8).unwrap();
            let b = ExactRref::from_rows_direct(&rows, 8);
            prop_assert_eq!(a.pivots(), b.pivots());
            for &c in a.pivots() {
                prop_assert_eq!(a.row(c), b.row(c));
            }
            for r in &rows {
                let x: BTreeMap<usize, Rational> = r.iter().cloned().collect();
                prop_assert!(a.reduce(&x).remainder.is_empty());
            }
        }

        #[test]
        fn kernel_is_annihilated(rows in rows_strategy()) {
            let e = ExactRref::from_rows_direct(&rows, 8);
            let ker = e.kernel_basis();
            prop_assert_eq!(ker.len() + e.rank(), 8);
            for k in &ker {
                let v: BTreeMap<usize, Rational> = k.iter().cloned().collect();
                for r in &rows {
                    let dot: Rational = r.iter().filter_map(|(c, x)| v.get(c).map(|y| x * y)).sum();
                    prop_assert!(dot.is_zero());
                }
            }
        }
    }

    #[test]
    fn span_basis_solves() {
        let mut b = SpanBasis::new();
        let v = |xs: &[(usize, i64)]| -> BTreeMap<usize, Rational> { xs.iter().map(|(c, x)| (*c, rat(*x))).collect() };
        assert!(b.insert(&v(&[(0, 2), (1, 1)])));
        assert!(!b.insert(&v(&[(0, 4), (1, 2)])));
        assert!(b.insert(&v(&[(1, 1), (2, 3)])));
        let target = v(&[(0, 2), (1, 3), (2, 6)]);
        assert_eq!(b.solve(&target), Some(vec![rat(1), rat(2)]));
        assert_eq!(b.solve(&v(&[(2, 1)])), None);
        assert!(b.contains(&BTreeMap::new()));
    }

    #[test]
    fn reduction_example() {
        let rows = vec![vec![(0, rat(1)), (2, rat(1))], vec![(1, rat(2)), (2, rat(4))]];
        let e = ExactRref::from_rows(&rows, 3).unwrap();
        assert_eq!(e.pivots(), &[0, 1]);
        let x: BTreeMap<usize, Rational> = [(0, rat(1)), (1, rat(1)), (2, rat(5))].into_iter().collect();
        let red = e.reduce(&x);
        assert_eq!(red.remainder, [(2, rat(2))].into_iter().collect());
    }
}
