//! The products `u o_n v` and `u *_n v`, the span of `O_n(V)` inside a weight
//! window, truncated quotient algebras, and the checks run on them.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{binomial, sign, Rational};
use crate::error::{Error, Result};
use crate::laurent::one_plus_z_over_z;
use crate::linalg::{ExactRref, SparseRow};
use crate::report::{CheckRecord, Tally};
use crate::vector::SparseVec;
use crate::voa::{components, State, StateVector, Voa};

/// `sum_k f_k u_k v` for `f = sum_k f_k z^k`, i.e. `Res_z Y(u,z) v f(z)`.
pub fn res_y(voa: &Voa, u: &StateVector, v: &StateVector, coeffs: &[(i64, Rational)]) -> StateVector {
    let mut out = SparseVec::zero();
    for (k, c) in coeffs {
        if !c.is_zero() {
            out.add_scaled(&voa.mode_apply(u, *k, v), c);
        }
    }
    out
}

pub fn circle_n(voa: &Voa, u: &StateVector, v: &StateVector, n: u32) -> StateVector {
    let n = n as i64;
    let mut out = SparseVec::zero();
    for (wt, comp) in components(u) {
        let top = wt as i64 + n;
        for i in 0..=top {
            out.add_scaled(&voa.mode_apply(&comp, i - 2 * n - 2, v), &binomial(top, i));
        }
    }
    out
}

pub fn star_n(voa: &Voa, u: &StateVector, v: &StateVector, n: u32) -> StateVector {
    let n = n as i64;
    let mut out = SparseVec::zero();
    for (wt, comp) in components(u) {
        let top = wt as i64 + n;
        for m in 0..=n {
            let outer = sign(m) * binomial(m + n, n);
            for i in 0..=top {
                out.add_scaled(&voa.mode_apply(&comp, i - m - n - 1, v), &(&outer * binomial(top, i)));
            }
        }
    }
    out
}

/// `(L(-1) + L(0)) u`.
pub fn l_term(voa: &Voa, u: &StateVector) -> StateVector {
    &voa.l_op(-1, u) + &voa.l_op(0, u)
}

/// Generators of `O_n(V)` supported in weight at most `cap`.
pub fn generators(voa: &Voa, n: u32, cap: u32, with_l_terms: bool) -> Vec<StateVector> {
    let basis = voa.basis(cap);
    let mut out = Vec::new();
    for u in &basis {
        for v in &basis {
            if u.weight() + v.weight() + 2 * n + 1 <= cap {
                out.push(circle_n(voa, &SparseVec::unit(u.clone()), &SparseVec::unit(v.clone()), n));
            }
        }
    }
    if with_l_terms {
        for u in &basis {
            if u.weight() < cap {
                let g = l_term(voa, &SparseVec::unit(u.clone()));
                if !g.is_zero() {
                    out.push(g);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// Multiples of spanning rows, keyed by their pivot states.
    pub terms: Vec<(State, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Certified(Certificate),
    NotFound { remainder: StateVector },
}

impl Membership {
    pub fn is_certified(&self) -> bool {
        matches!(self, Membership::Certified(_))
    }
}

/// Canonical representative of `x + O_n(V)` at a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetRep {
    pub element: StateVector,
    /// False when reduction leaves a component above the window cap.
    pub resolved: bool,
    pub window: (u32, u32, u32),
}

/// Exact reduced spanning set of `O_n(V)` in `V` up to weight `W + S`.
///
/// Columns are ordered with weights above `W` first (descending), then the
/// weights up to `W` ascending; the pivot of a row is its first nonzero column.
#[derive(Debug)]
pub struct OnSpan {
    n: u32,
    window_cap: u32,
    slack: u32,
    columns: Vec<State>,
    index: HashMap<State, usize>,
    generator_count: usize,
    rref: ExactRref,
}

impl OnSpan {
    pub fn build(voa: &Voa, n: u32, window_cap: u32, slack: u32) -> Result<Self> {
        Self::build_with(voa, n, window_cap, slack, true)
    }

    /// As [`OnSpan::build`], optionally leaving out the `(L(-1)+L(0))u` generators.
    pub fn build_with(voa: &Voa, n: u32, window_cap: u32, slack: u32, with_l_terms: bool) -> Result<Self> {
        let cap = window_cap + slack;
        let mut columns = Vec::new();
        for w in (window_cap + 1..=cap).rev() {
            columns.extend(voa.weight_basis(w));
        }
        for w in 0..=window_cap {
            columns.extend(voa.weight_basis(w));
        }
        let index: HashMap<State, usize> = columns.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let gens = generators(voa, n, cap, with_l_terms);
        let rows: Vec<SparseRow> = gens.iter().map(|g| g.iter().map(|(s, c)| (index[s], c.clone())).collect()).collect();
        let rref = ExactRref::from_rows(&rows, columns.len())?;
        Ok(OnSpan { n, window_cap, slack, columns, index, generator_count: gens.len(), rref })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn window(&self) -> (u32, u32, u32) {
        (self.n, self.window_cap, self.slack)
    }

    pub fn cap(&self) -> u32 {
        self.window_cap + self.slack
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn rank(&self) -> usize {
        self.rref.rank()
    }

    fn to_row(&self, x: &StateVector) -> Result<BTreeMap<usize, Rational>> {
        let mut row = BTreeMap::new();
        for (s, c) in x.iter() {
            let i = self.index.get(s).ok_or(Error::OutsideWindow { weight: s.weight(), cap: self.cap() })?;
            row.insert(*i, c.clone());
        }
        Ok(row)
    }

    fn from_row(&self, row: &BTreeMap<usize, Rational>) -> StateVector {
        row.iter().map(|(i, c)| (self.columns[*i].clone(), c.clone())).collect()
    }

    pub fn membership(&self, x: &StateVector) -> Result<Membership> {
        let red = self.rref.reduce(&self.to_row(x)?);
        if red.remainder.is_empty() {
            let terms = red.combination.into_iter().map(|(c, v)| (self.columns[c].clone(), v)).collect();
            Ok(Membership::Certified(Certificate { terms }))
        } else {
            Ok(Membership::NotFound { remainder: self.from_row(&red.remainder) })
        }
    }

    /// Whether `x` is certified; `false` also when `x` leaves the window.
    pub fn certifies(&self, x: &StateVector) -> bool {
        matches!(self.membership(x), Ok(Membership::Certified(_)))
    }

    /// The spanning row with the given pivot, itself a member of the span.
    pub fn spanning_row(&self, pivot: &State) -> Option<StateVector> {
        let c = *self.index.get(pivot)?;
        let row = self.rref.row(c)?;
        Some(row.into_iter().map(|(i, v)| (self.columns[i].clone(), v)).collect())
    }

    /// Re-expands a certificate; equals the certified vector.
    pub fn expand(&self, cert: &Certificate) -> StateVector {
        let mut out = SparseVec::zero();
        for (s, c) in &cert.terms {
            out.add_scaled(&self.spanning_row(s).expect("certificate pivot"), c);
        }
        out
    }

    pub fn coset(&self, x: &StateVector) -> Result<CosetRep> {
        let red = self.rref.reduce(&self.to_row(x)?);
        let element = self.from_row(&red.remainder);
        let resolved = element.keys().all(|s| s.weight() <= self.window_cap);
        Ok(CosetRep { element, resolved, window: self.window() })
    }

    /// Coset representatives spanning the quotient at the window, in state order.
    pub fn quotient_basis(&self) -> Vec<State> {
        let mut out: Vec<State> = self
            .columns
            .iter()
            .enumerate()
            .filter(|(i, s)| s.weight() <= self.window_cap && !self.rref.is_pivot(*i))
            .map(|(_, s)| s.clone())
            .collect();
        out.sort();
        out
    }

    pub fn quotient_dims(&self) -> Vec<usize> {
        let mut dims = vec![0; self.window_cap as usize + 1];
        for s in self.quotient_basis() {
            dims[s.weight() as usize] += 1;
        }
        dims
    }
}

/// The product table of the quotient at a window.
#[derive(Clone, Debug)]
pub struct QuotientTable {
    pub n: u32,
    pub window_cap: u32,
    pub slack: u32,
    pub basis: Vec<State>,
    /// `products[i][j]` is the reduced `basis[i] *_n basis[j]`, or `None`
    /// when the window cannot resolve it.
    pub products: Vec<Vec<Option<StateVector>>>,
    pub dims_per_weight: Vec<usize>,
}

impl QuotientTable {
    pub fn index_of(&self, s: &State) -> Option<usize> {
        self.basis.iter().position(|b| b == s)
    }
}

pub fn quotient_build(voa: &Voa, n: u32, window_cap: u32, slack: u32) -> Result<QuotientTable> {
    let span = OnSpan::build(voa, n, window_cap, slack)?;
    quotient_table(voa, &span)
}

pub fn quotient_table(voa: &Voa, span: &OnSpan) -> Result<QuotientTable> {
    let basis = span.quotient_basis();
    let mut products = Vec::with_capacity(basis.len());
    for a in &basis {
        let mut row = Vec::with_capacity(basis.len());
        for b in &basis {
            let p = star_n(voa, &SparseVec::unit(a.clone()), &SparseVec::unit(b.clone()), span.n());
            row.push(match span.coset(&p) {
                Ok(rep) if rep.resolved => Some(rep.element),
                Ok(_) | Err(Error::OutsideWindow { .. }) => None,
                Err(e) => return Err(e),
            });
        }
        products.push(row);
    }
    Ok(QuotientTable { n: span.n(), window_cap: span.window_cap, slack: span.slack, dims_per_weight: span.quotient_dims(), basis, products })
}

fn certify(t: &mut Tally, voa: &Voa, span: &OnSpan, x: &StateVector, what: impl FnOnce() -> String) {
    match span.membership(x) {
        Ok(Membership::Certified(_)) => t.pass(),
        Ok(Membership::NotFound { remainder }) => t.unresolved(|| format!("{}: remainder {}", what(), voa.render(&remainder))),
        Err(e) => t.unresolved(|| format!("{}: {e}", what())),
    }
}

fn units(voa: &Voa, cap: u32) -> Vec<StateVector> {
    voa.basis(cap).into_iter().map(SparseVec::unit).collect()
}

fn tally(name: &str, anchor: &str, span: &OnSpan, cap: u32) -> Tally {
    let (n, w, s) = span.window();
    Tally::new(name, anchor).param("n", n).param("window_cap", w).param("slack", s).param("basis_cap", cap)
}

pub fn associativity_check(voa: &Voa, span: &OnSpan, cap: u32) -> CheckRecord {
    let n = span.n();
    let mut t = tally("associativity", "A_n(V) is associative", span, cap);
    let b = units(voa, cap);
    for u in &b {
        for v in &b {
            let uv = star_n(voa, u, v, n);
            for w in &b {
                let x = &star_n(voa, &uv, w, n) - &star_n(voa, u, &star_n(voa, v, w, n), n);
                certify(&mut t, voa, span, &x, || format!("({}, {}, {})", voa.render(u), voa.render(v), voa.render(w)));
            }
        }
    }
    t.finish()
}

/// Generators of `O_n(V)` built from basis states up to weight `cap`.
pub fn small_generators(voa: &Voa, n: u32, cap: u32) -> Vec<StateVector> {
    let b = units(voa, cap);
    let mut out = Vec::new();
    for u in &b {
        for v in &b {
            out.push(circle_n(voa, u, v, n));
        }
    }
    for u in &b {
        let g = l_term(voa, u);
        if !g.is_zero() {
            out.push(g);
        }
    }
    out
}

pub fn ideal_check(voa: &Voa, span: &OnSpan, cap: u32) -> CheckRecord {
    let n = span.n();
    let mut t = tally("two_sided_ideal", "O_n(V) is a two-sided ideal", span, cap);
    let b = units(voa, cap);
    for g in small_generators(voa, n, cap) {
        for u in &b {
            certify(&mut t, voa, span, &star_n(voa, &g, u, n), || format!("g*u, g = {}, u = {}", voa.render(&g), voa.render(u)));
            certify(&mut t, voa, span, &star_n(voa, u, &g, n), || format!("u*g, g = {}, u = {}", voa.render(&g), voa.render(u)));
        }
    }
    t.finish()
}

/// `u *_n v - v *_n u - Res_z Y(u,z) v (1+z)^{wt u - 1}` lies in `O_n(V)`.
pub fn skew_check(voa: &Voa, span: &OnSpan, cap: u32) -> CheckRecord {
    let n = span.n();
    let mut t = tally("commutator_residue", "u*v - v*u = Res Y(u,z)v (1+z)^{wt u-1} mod O_n", span, cap);
    let b = voa.basis(cap);
    for us in &b {
        for vs in &b {
            let (u, v) = (SparseVec::unit(us.clone()), SparseVec::unit(vs.clone()));
            let mut x = &star_n(voa, &u, &v, n) - &star_n(voa, &v, &u, n);
            let top = (us.weight() + vs.weight()) as i64;
            for i in 0..=top {
                x.add_scaled(&voa.mode_apply(&u, i, &v), &-binomial(us.weight() as i64 - 1, i));
            }
            certify(&mut t, voa, span, &x, || format!("({}, {})", voa.render(&u), voa.render(&v)));
        }
    }
    t.finish()
}

/// `u *_n v` agrees modulo `O_n(V)` with the product written through `v`'s modes on `u`.
pub fn opposite_form_check(voa: &Voa, span: &OnSpan, cap: u32) -> CheckRecord {
    let n = span.n() as i64;
    let mut t = tally("opposite_product_form", "u*_n v via modes of v on u", span, cap);
    let b = voa.basis(cap);
    for us in &b {
        for vs in &b {
            let (u, v) = (SparseVec::unit(us.clone()), SparseVec::unit(vs.clone()));
            let mut x = star_n(voa, &u, &v, n as u32);
            for m in 0..=n {
                let outer = binomial(m + n, n) * sign(n);
                let top = (us.weight() + vs.weight()) as i64 + m + n;
                for i in 0..=top {
                    let c = binomial(vs.weight() as i64 + m - 1, i);
                    if c.is_zero() {
                        continue;
                    }
                    x.add_scaled(&voa.mode_apply(&v, i - 1 - m - n, &u), &-(&outer * c));
                }
            }
            certify(&mut t, voa, span, &x, || format!("({}, {})", voa.render(&u), voa.render(&v)));
        }
    }
    t.finish()
}

pub fn centrality_check(voa: &Voa, span: &OnSpan, cap: u32) -> CheckRecord {
    let n = span.n();
    let mut t = tally("omega_central", "omega + O_n(V) is central", span, cap);
    let w = voa.conformal_vector();
    for u in units(voa, cap) {
        let x = &star_n(voa, &w, &u, n) - &star_n(voa, &u, &w, n);
        certify(&mut t, voa, span, &x, || voa.render(&u));
    }
    t.finish()
}

/// `omega *_n u - u *_n omega - (L(-1)+L(0))u` lies in `O_n(V)`.
pub fn omega_commutator_check(voa: &Voa, span: &OnSpan, cap: u32) -> CheckRecord {
    let n = span.n();
    let mut t = tally("omega_commutator", "omega*u - u*omega = (L(-1)+L(0))u", span, cap);
    let w = voa.conformal_vector();
    for u in units(voa, cap) {
        let x = &(&star_n(voa, &w, &u, n) - &star_n(voa, &u, &w, n)) - &l_term(voa, &u);
        certify(&mut t, voa, span, &x, || voa.render(&u));
    }
    t.finish()
}

/// At `n = 0`, `u *_0 v` equals `Res_z Y(u,z) v (1+z)^{wt u}/z` term by term.
pub fn zhu_coincidence_check(voa: &Voa, cap: u32) -> CheckRecord {
    let mut t = Tally::new("zhu_product_coincidence", "*_0 is the Zhu product").param("basis_cap", cap);
    let b = voa.basis(cap);
    for us in &b {
        let f = one_plus_z_over_z(us.weight(), 1);
        let coeffs: Vec<(i64, Rational)> = f.terms().map(|(e, c)| (e[0], c.clone())).collect();
        for vs in &b {
            let (u, v) = (SparseVec::unit(us.clone()), SparseVec::unit(vs.clone()));
            let lhs = star_n(voa, &u, &v, 0);
            let rhs = res_y(voa, &u, &v, &coeffs);
            t.check(lhs == rhs, || format!("({}, {}): {} vs {}", voa.render(&u), voa.render(&v), voa.render(&lhs), voa.render(&rhs)));
        }
    }
    t.finish()
}

/// The vacuum coset is a two-sided identity in the table.
pub fn identity_check(voa: &Voa, table: &QuotientTable) -> CheckRecord {
    let mut t = Tally::new("vacuum_identity", "1 + O_n(V) is the identity")
        .param("n", table.n)
        .param("window_cap", table.window_cap)
        .param("slack", table.slack);
    let Some(one) = table.index_of(&State::vacuum()) else {
        t.fail(|| "vacuum is not a coset representative".into());
        return t.finish();
    };
    for (j, b) in table.basis.iter().enumerate() {
        let unit = SparseVec::unit(b.clone());
        for entry in [&table.products[one][j], &table.products[j][one]] {
            match entry {
                Some(x) => t.check(*x == unit, || format!("{} gave {}", voa.render(&unit), voa.render(x))),
                None => t.unresolved(|| format!("{} unresolved at window", voa.render(&unit))),
            }
        }
    }
    t.finish()
}

/// `A_n(V) -> A_{n-1}(V)`: generators of `O_n` and `*_n - *_{n-1}` land in `O_{n-1}`.
pub fn surjection_check(voa: &Voa, lower: &OnSpan, n: u32, cap: u32) -> Vec<CheckRecord> {
    let mut gens = tally("surjection_generators", "O_n(V) lies in O_{n-1}(V)", lower, cap).param("n", n);
    for g in small_generators(voa, n, cap) {
        certify(&mut gens, voa, lower, &g, || voa.render(&g));
    }
    let mut prods = tally("surjection_products", "*_n = *_{n-1} mod O_{n-1}(V)", lower, cap).param("n", n);
    let b = units(voa, cap);
    for u in &b {
        for v in &b {
            let x = &star_n(voa, u, v, n) - &star_n(voa, u, v, n - 1);
            certify(&mut prods, voa, lower, &x, || format!("({}, {})", voa.render(u), voa.render(v)));
        }
    }
    vec![gens.finish(), prods.finish()]
}

pub fn anti_involution_check(voa: &Voa, span: &OnSpan, cap: u32, square_cap: u32) -> Vec<CheckRecord> {
    let n = span.n();
    let mut sq = Tally::new("phi_squared", "phi^2 = id").param("weight_cap", square_cap);
    for s in voa.basis(square_cap) {
        let x = SparseVec::unit(s);
        let back = voa.phi(&voa.phi(&x));
        sq.check(back == x, || voa.render(&x));
    }
    let mut anti = tally("phi_anti_homomorphism", "phi(u*v) = phi(v)*phi(u) mod O_n", span, cap);
    let b = units(voa, cap);
    for u in &b {
        for v in &b {
            let x = &voa.phi(&star_n(voa, u, v, n)) - &star_n(voa, &voa.phi(v), &voa.phi(u), n);
            certify(&mut anti, voa, span, &x, || format!("({}, {})", voa.render(u), voa.render(v)));
        }
    }
    vec![sq.finish(), anti.finish()]
}

/// Searches whether each `(L(-1)+L(0))u` already lies in the span of the
/// circle products alone.
pub fn l_term_search(voa: &Voa, n: u32, window_cap: u32, slack: u32, cap: u32) -> Result<CheckRecord> {
    let span = OnSpan::build_with(voa, n, window_cap, slack, false)?;
    let mut t = Tally::new("l_term_in_circle_span", "(L(-1)+L(0))u as circle products")
        .param("n", n)
        .param("window_cap", window_cap)
        .param("slack", slack)
        .param("basis_cap", cap);
    let mut found = Vec::new();
    let mut missing = Vec::new();
    for u in units(voa, cap) {
        let g = l_term(voa, &u);
        if span.certifies(&g) {
            found.push(voa.render(&u));
        } else {
            missing.push(voa.render(&u));
        }
        t.pass();
    }
    t.note(format!("expressible: [{}]; not found: [{}]", found.join(", "), missing.join(", ")));
    Ok(t.finish())
}

/// Everything `algebra` reports for one `n`.
#[derive(Clone, Debug, Serialize)]
pub struct AlgebraReport {
    pub backend: String,
    pub n: u32,
    pub window_cap: u32,
    pub slack: u32,
    pub generator_count: usize,
    pub rank: usize,
    pub quotient_dims_per_weight: Vec<usize>,
    pub check_window_cap: u32,
    pub checks: Vec<CheckRecord>,
}

/// Window cap used to certify products of basis states up to weight `cap`.
pub fn check_window(n: u32, cap: u32) -> u32 {
    3 * cap + 2 * n + 2
}

pub fn algebra_suite(voa: &Voa, n: u32, cap: u32, slack: u32) -> Result<AlgebraReport> {
    let quotient = OnSpan::build(voa, n, cap, slack)?;
    let table = quotient_table(voa, &quotient)?;
    let span = OnSpan::build(voa, n, check_window(n, cap), slack)?;
    let mut checks = vec![
        identity_check(voa, &table),
        associativity_check(voa, &span, cap),
        ideal_check(voa, &span, cap),
        skew_check(voa, &span, cap),
        opposite_form_check(voa, &span, cap),
        centrality_check(voa, &span, cap),
        omega_commutator_check(voa, &span, cap),
    ];
    if n == 0 {
        checks.insert(0, zhu_coincidence_check(voa, cap));
    }
    Ok(AlgebraReport {
        backend: voa.backend().name().into(),
        n,
        window_cap: cap,
        slack,
        generator_count: quotient.generator_count(),
        rank: quotient.rank(),
        quotient_dims_per_weight: quotient.quotient_dims(),
        check_window_cap: check_window(n, cap),
        checks,
    })
}

/// The vacuum coset as a one-term vector, for callers building tables.
pub fn vacuum_rep() -> StateVector {
    SparseVec::single(State::vacuum(), Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn st(parts: &[u32]) -> StateVector {
        SparseVec::unit(State::new(parts.to_vec()).unwrap())
    }

    #[test]
    fn circle_examples() {
        let v = Voa::heisenberg();
        let a = st(&[1]);
        assert_eq!(circle_n(&v, &a, &a, 0), &st(&[2, 1]) + &st(&[1, 1]));
        for n in 0..3 {
            for s in v.basis(3) {
                assert!(circle_n(&v, &v.vacuum(), &SparseVec::unit(s), n).is_zero());
            }
        }
        assert_eq!(circle_n(&v, &a, &v.vacuum(), 0), l_term(&v, &a));
        assert_eq!(l_term(&v, &a), &st(&[2]) + &st(&[1]));
    }

    #[test]
    fn star_examples() {
        let v = Voa::heisenberg();
        let a = st(&[1]);
        assert_eq!(star_n(&v, &a, &a, 0), st(&[1, 1]));
        assert_eq!(star_n(&v, &a, &a, 0), v.conformal_vector().scaled(&rat(2)));
        for n in 0..3 {
            for s in v.basis(3) {
                let u = SparseVec::unit(s);
                assert_eq!(star_n(&v, &v.vacuum(), &u, n), u);
            }
        }
    }

    #[test]
    fn generator_counts_match_enumeration() {
        let v = Voa::heisenberg();
        let span = OnSpan::build(&v, 0, 2, 2).unwrap();
        // pairs with wt u + wt v <= 3, plus L-terms for 0 < wt u <= 3
        let p = [1usize, 1, 2, 3];
        let mut pairs = 0;
        for a in 0..4 {
            for b in 0..4 {
                if a + b <= 3 {
                    pairs += p[a] * p[b];
                }
            }
        }
        assert_eq!(span.generator_count(), pairs + 1 + 2 + 3);
        let empty = OnSpan::build(&v, 0, 0, 0).unwrap();
        assert_eq!(empty.rank(), 0);
        assert_eq!(empty.generator_count(), 0);
    }

    #[test]
    fn membership_examples() {
        let v = Voa::heisenberg();
        let span = OnSpan::build(&v, 0, 2, 2).unwrap();
        assert!(span.certifies(&SparseVec::zero()));
        let g = l_term(&v, &st(&[1]));
        match span.membership(&g).unwrap() {
            Membership::Certified(c) => assert_eq!(span.expand(&c), g),
            other => panic!("{other:?}"),
        }
        assert!(!span.certifies(&v.vacuum()));
        assert!(matches!(span.membership(&st(&[5])), Err(Error::OutsideWindow { .. })));
    }

    #[test]
    fn quotient_examples() {
        let v = Voa::heisenberg();
        let span = OnSpan::build(&v, 0, 4, 4).unwrap();
        let aa = span.coset(&star_n(&v, &st(&[1]), &st(&[1]), 0)).unwrap();
        let w2 = span.coset(&v.conformal_vector().scaled(&rat(2))).unwrap();
        assert_eq!(aa, w2);
        let table = quotient_table(&v, &span).unwrap();
        assert!(identity_check(&v, &table).passed());

        let vir = Voa::virasoro(ratio(1, 2));
        let span = OnSpan::build(&vir, 0, 6, 4).unwrap();
        let w = vir.conformal_vector();
        let reps: Vec<StateVector> = [vir.vacuum(), w.clone(), star_n(&vir, &w, &w, 0)]
            .iter()
            .map(|x| span.coset(x).unwrap().element)
            .collect();
        let rows: Vec<SparseRow> = reps
            .iter()
            .map(|x| x.iter().map(|(s, c)| (vir.basis(6).iter().position(|b| b == s).unwrap(), c.clone())).collect())
            .collect();
        assert_eq!(ExactRref::from_rows_direct(&rows, vir.basis(6).len()).rank(), 3);
    }

    #[test]
    fn phi_examples() {
        let v = Voa::heisenberg();
        let span = OnSpan::build(&v, 0, 6, 4).unwrap();
        let recs = anti_involution_check(&v, &span, 2, 4);
        assert!(recs.iter().all(|r| r.passed()), "{recs:?}");
    }

    #[test]
    fn small_suite_heisenberg() {
        let v = Voa::heisenberg();
        let rep = algebra_suite(&v, 1, 1, 4).unwrap();
        for c in &rep.checks {
            assert!(c.passed(), "{c:?}");
        }
        let lower = OnSpan::build(&v, 0, 7, 4).unwrap();
        for c in surjection_check(&v, &lower, 1, 2) {
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn omega_commutator_examples() {
        let v = Voa::heisenberg();
        for n in 0..3 {
            let span = OnSpan::build(&v, n, 2 * n + 5, 4).unwrap();
            assert!(omega_commutator_check(&v, &span, 1).passed());
        }
    }

    #[test]
    fn l_term_search_at_n0() {
        let v = Voa::heisenberg();
        let rec = l_term_search(&v, 0, 4, 2, 2).unwrap();
        assert!(rec.detail.unwrap().starts_with("expressible"));
    }

    #[test]
    fn virasoro_suite() {
        let v = Voa::virasoro(ratio(1, 2));
        let rep = algebra_suite(&v, 0, 2, 4).unwrap();
        for c in &rep.checks {
            assert!(c.passed(), "{c:?}");
        }
    }
}
