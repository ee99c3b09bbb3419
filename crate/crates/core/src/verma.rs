//! Modules induced from a representation `U` of `A_n(V)` placed in degree `n`,
//! the pairing with `U*`, its radical `J`, and the quotient `L_n(U)`.
//!
//! The induced module is modelled on the generator Lie algebra: PBW words in
//! `x(l)` with `l <= n`, `l != 0`, on a basis of `U`, where `x(l)` for `l > n`
//! kills `U` and `x(0)` acts through `U`. Vertex modes of composite states act
//! through normal ordering. The pairing is evaluated by folding the leftmost two
//! modes of a word with the reassociation coefficients until a zero mode on `U`
//! remains.

use std::collections::BTreeMap;

use dashmap::DashMap;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{binomial, format_rational, partitions, Rational};
use crate::error::{Error, Result};
use crate::linalg::{ExactRref, SparseRow, SpanBasis};
use crate::omega::{o, reassociate, reassociation_element};
use crate::report::{CheckRecord, Tally};
use crate::vector::SparseVec;
use crate::voa::{act, act_generator, vertex_mode, Backend, FockSpace, ModeTarget, State, StateVector, Voa};
use crate::zhu::{small_generators, star_n, OnSpan};

/// `m[i][j]` is the coefficient of basis vector `i` in the image of basis vector `j`.
pub type Matrix = Vec<Vec<Rational>>;

fn mat_zero(d: usize) -> Matrix {
    vec![vec![Rational::zero(); d]; d]
}

fn mat_identity(d: usize) -> Matrix {
    let mut m = mat_zero(d);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let d = a.len();
    let mut out = mat_zero(d);
    for i in 0..d {
        for k in 0..d {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..d {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

fn mat_add_scaled(a: &mut Matrix, b: &Matrix, c: &Rational) {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (x, y) in ra.iter_mut().zip(rb) {
            *x += y * c;
        }
    }
}

fn mat_is_zero(a: &Matrix) -> bool {
    a.iter().flatten().all(Zero::is_zero)
}

pub fn render_matrix(m: &Matrix) -> String {
    let rows: Vec<String> =
        m.iter().map(|r| format!("[{}]", r.iter().map(format_rational).collect::<Vec<_>>().join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

enum UAction {
    /// `U` is a sum of graded pieces of a Fock or Verma module, acted on by zero modes.
    Fock { module: FockSpace, basis: Vec<State> },
    /// Matrices for a basis of the quotient at a window; other elements are reduced first.
    Table { span: OnSpan, matrices: BTreeMap<State, Matrix> },
}

/// A finite-dimensional `A_n(V)`-module given by its action.
pub struct AnModule {
    pub n: u32,
    pub dim: usize,
    pub label: String,
    action: UAction,
}

impl AnModule {
    /// `U = M(l_1) + ... ` for the listed degrees of the module with lowest weight `h`.
    pub fn fock_levels(backend: Backend, h: Rational, n: u32, levels: &[u32]) -> Result<Self> {
        if levels.iter().any(|&l| l > n) {
            return Err(Error::ModuleInput(format!("levels {levels:?} exceed n = {n}")));
        }
        let module = FockSpace::highest_weight(backend, h);
        let mut levels = levels.to_vec();
        levels.sort_unstable();
        levels.dedup();
        let basis: Vec<State> = levels.iter().flat_map(|&l| module.degree_basis(l)).collect();
        if basis.is_empty() {
            return Err(Error::ModuleInput("empty module".into()));
        }
        let label = format!(
            "{} {} levels {:?}",
            module.backend().name(),
            module.ket(),
            levels
        );
        Ok(AnModule { n, dim: basis.len(), label, action: UAction::Fock { module, basis } })
    }

    /// A module given by matrices for every quotient basis state of `span`.
    pub fn table(label: &str, span: OnSpan, dim: usize, matrices: BTreeMap<State, Matrix>) -> Result<Self> {
        for s in span.quotient_basis() {
            let m = matrices.get(&s).ok_or_else(|| Error::ModuleInput(format!("no matrix for {s:?}")))?;
            if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                return Err(Error::ModuleInput(format!("matrix for {s:?} is not {dim}x{dim}")));
            }
        }
        if let Some(s) = matrices.keys().find(|s| s.weight() > span.cap()) {
            return Err(Error::ModuleInput(format!("matrix given above the window for {s:?}")));
        }
        Ok(AnModule { n: span.n(), dim, label: label.into(), action: UAction::Table { span, matrices } })
    }

    /// The same module described by its table on the quotient basis of `span`.
    pub fn to_table(&self, span: OnSpan) -> Result<Self> {
        if span.n() != self.n {
            return Err(Error::ModuleInput(format!("span is for n = {}, module for n = {}", span.n(), self.n)));
        }
        let mut matrices = BTreeMap::new();
        for s in span.quotient_basis() {
            matrices.insert(s.clone(), self.rho(&SparseVec::unit(s))?);
        }
        AnModule::table(&format!("{} (table)", self.label), span, self.dim, matrices)
    }

    /// `o(w)` on `U`.
    pub fn rho(&self, w: &StateVector) -> Result<Matrix> {
        match &self.action {
            UAction::Fock { module, basis } => {
                let mut out = mat_zero(self.dim);
                for (j, b) in basis.iter().enumerate() {
                    let img = o(module, w, &SparseVec::unit(b.clone()));
                    for (s, c) in img.iter() {
                        let i = basis
                            .iter()
                            .position(|x| x == s)
                            .ok_or_else(|| Error::Invariant(format!("zero mode leaves U at {s:?}")))?;
                        out[i][j] = c.clone();
                    }
                }
                Ok(out)
            }
            UAction::Table { span, matrices } => {
                let rep = span.coset(w)?;
                if !rep.resolved {
                    return Err(Error::ModuleInput("element does not reduce into the table window".into()));
                }
                let mut out = mat_zero(self.dim);
                for (s, c) in rep.element.iter() {
                    mat_add_scaled(&mut out, &matrices[s], c);
                }
                Ok(out)
            }
        }
    }

    /// The products and relations of `A_n(V)` hold on `U` for basis states up to `cap`.
    pub fn axiom_check(&self, voa: &Voa, cap: u32) -> Result<CheckRecord> {
        let mut t = Tally::new("an_module_axioms", "o(u *_n v) = o(u) o(v) and o(O_n(V)) = 0 on U")
            .param("module", self.label.clone())
            .param("n", self.n)
            .param("cap", cap);
        let basis: Vec<StateVector> = voa.basis(cap).into_iter().map(SparseVec::unit).collect();
        for u in &basis {
            for v in &basis {
                let lhs = self.rho(&star_n(voa, u, v, self.n))?;
                let rhs = mat_mul(&self.rho(u)?, &self.rho(v)?);
                t.check(lhs == rhs, || format!("u={} v={}", voa.render(u), voa.render(v)));
            }
        }
        for g in small_generators(voa, self.n, cap) {
            let r = self.rho(&g)?;
            t.check(mat_is_zero(&r), || format!("g={} acts as {}", voa.render(&g), render_matrix(&r)));
        }
        Ok(t.finish())
    }

    /// Some element of `O_{n-1}(V)` acts nonzero, so `U` is not an `A_{n-1}(V)`-module.
    pub fn non_factoring_check(&self, voa: &Voa, cap: u32) -> Result<CheckRecord> {
        let mut t = Tally::new("non_factoring", "O_{n-1}(V) does not annihilate U")
            .param("module", self.label.clone())
            .param("n", self.n)
            .param("cap", cap);
        if self.n == 0 {
            t.pass();
            t.note("n = 0: every nonzero module qualifies".into());
            return Ok(t.finish());
        }
        let mut witness = None;
        for g in small_generators(voa, self.n - 1, cap) {
            if !mat_is_zero(&self.rho(&g)?) {
                witness = Some(voa.render(&g));
                break;
            }
        }
        match witness {
            Some(w) => {
                t.pass();
                t.note(format!("witness {w}"));
            }
            None => t.fail(|| format!("every generator of O_{} up to weight {cap} acts as zero", self.n - 1)),
        }
        Ok(t.finish())
    }
}

/// A PBW word `x(l_1) ... x(l_r) u_j` with `l_1 <= ... <= l_r`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Word {
    pub labels: Vec<i64>,
    pub u: usize,
}

impl Word {
    pub fn new(labels: Vec<i64>, u: usize) -> Self {
        Word { labels, u }
    }
}

/// Nonzero-part partitions of `total`, as labels `-p` in ascending order.
fn raising_labels(total: i64) -> Vec<Vec<i64>> {
    if total < 0 {
        return Vec::new();
    }
    partitions(total as u32, 1).into_iter().map(|p| p.parts().iter().map(|&x| -(x as i64)).collect()).collect()
}

/// Partitions of `total` with parts at most `max`, as positive labels ascending.
fn lowering_labels(total: i64, max: i64) -> Vec<Vec<i64>> {
    if total < 0 {
        return Vec::new();
    }
    partitions(total as u32, 1)
        .into_iter()
        .filter(|p| p.parts().iter().all(|&x| x as i64 <= max))
        .map(|p| p.parts().iter().rev().map(|&x| x as i64).collect())
        .collect()
}

/// Default cap on the weight of states produced by the pairing fold.
pub const DEFAULT_FOLD_WEIGHT: u32 = 36;

pub struct InducedModule<'a> {
    voa: &'a Voa,
    input: &'a AnModule,
    n: i64,
    zero: Matrix,
    gen_memo: DashMap<(i64, Word), SparseVec<Word>>,
    vertex_memo: DashMap<(State, i64, Word), SparseVec<Word>>,
    fold_memo: DashMap<Vec<i64>, StateVector>,
    pair_memo: DashMap<Vec<i64>, Matrix>,
    max_fold_weight: u32,
}

impl<'a> InducedModule<'a> {
    pub fn new(voa: &'a Voa, input: &'a AnModule) -> Result<Self> {
        let zero = input.rho(&voa.generator())?;
        Ok(InducedModule {
            voa,
            input,
            n: input.n as i64,
            zero,
            gen_memo: DashMap::new(),
            vertex_memo: DashMap::new(),
            fold_memo: DashMap::new(),
            pair_memo: DashMap::new(),
            max_fold_weight: DEFAULT_FOLD_WEIGHT,
        })
    }

    /// Caps the weight of the intermediate states of the pairing fold.
    pub fn with_fold_weight(mut self, cap: u32) -> Self {
        self.max_fold_weight = cap;
        self
    }

    /// Upper bound for the weights met while folding `p`.
    pub fn fold_weight(&self, ps: &[i64]) -> u32 {
        let wg = self.voa.backend().generator_weight() as i64;
        let mut wt = wg;
        let mut i = ps[0];
        for &j in &ps[1..] {
            wt += wg + i + j + 2 * self.n;
            i += j;
        }
        wt.max(0) as u32
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn input(&self) -> &AnModule {
        self.input
    }

    pub fn degree(&self, w: &Word) -> i64 {
        self.n - w.labels.iter().sum::<i64>()
    }

    pub fn u_word(&self, j: usize) -> SparseVec<Word> {
        SparseVec::unit(Word::new(Vec::new(), j))
    }

    pub fn render_word(&self, w: &Word) -> String {
        let x = self.voa.backend().letter();
        let body: String = w.labels.iter().map(|l| format!("{x}({l})")).collect();
        format!("{body}u{}", w.u)
    }

    pub fn render(&self, v: &SparseVec<Word>) -> String {
        crate::voa::render_vector(v, |w| self.render_word(w))
    }

    /// Words of degree `k` of the form `x(-lambda) x(rho) u` with `|rho| <= n`,
    /// the parts of `rho` at most `n`.
    pub fn raising_words(&self, k: i64) -> Vec<Word> {
        let mut out = Vec::new();
        for r in 0..=self.n {
            for rho in lowering_labels(r, self.n) {
                for lambda in raising_labels(k - self.n + r) {
                    let labels: Vec<i64> = lambda.iter().chain(&rho).copied().collect();
                    for u in 0..self.input.dim {
                        out.push(Word::new(labels.clone(), u));
                    }
                }
            }
        }
        out
    }

    /// Label sequences `x(-mu) x(nu)` taking degree `k` to degree `n`, with
    /// `x(nu)` dropping at most `extra` below degree zero.
    pub fn lowering_words(&self, k: i64, extra: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for s in (k - self.n).max(0)..=k.max(0) + extra {
            for nu in lowering_labels(s, s) {
                for mu in raising_labels(self.n - k + s) {
                    out.push(mu.iter().chain(&nu).copied().collect());
                }
            }
        }
        out
    }

    pub fn apply_labels(&self, labels: &[i64], v: &SparseVec<Word>) -> SparseVec<Word> {
        labels.iter().rev().fold(v.clone(), |acc, &l| act_generator(self, l, &acc))
    }

    pub fn fold_state(&self, labels: &[i64]) -> Result<StateVector> {
        let ps: Vec<i64> = labels.iter().map(|l| -l).collect();
        self.fold(&ps)
    }

    /// The state `w` with `o_{p_1}(x) ... o_{p_r}(x) = o_{p_1 + ... + p_r}(w)`
    /// under the left fold, for `p = -labels`.
    fn fold(&self, ps: &[i64]) -> Result<StateVector> {
        if ps.len() == 1 {
            return Ok(self.voa.generator());
        }
        if let Some(hit) = self.fold_memo.get(ps) {
            return Ok(hit.clone());
        }
        let (head, last) = ps.split_at(ps.len() - 1);
        let w = self.fold(head)?;
        let i: i64 = head.iter().sum();
        let r = reassociate(i, last[0], self.n)?;
        let out = reassociation_element(self.voa, &w, &self.voa.generator(), &r);
        self.fold_memo.insert(ps.to_vec(), out.clone());
        Ok(out)
    }

    /// The pairing of a word with `U*`, as a matrix over the `U` index of the word.
    pub fn pairing(&self, labels: &[i64]) -> Result<Matrix> {
        let d = self.input.dim;
        if labels.iter().sum::<i64>() != 0 {
            return Ok(mat_zero(d));
        }
        if labels.is_empty() {
            return Ok(mat_identity(d));
        }
        if let Some(hit) = self.pair_memo.get(labels) {
            return Ok(hit.clone());
        }
        let ps: Vec<i64> = labels.iter().map(|l| -l).collect();
        let weight = self.fold_weight(&ps);
        if weight > self.max_fold_weight {
            return Err(Error::OutsideWindow { weight, cap: self.max_fold_weight });
        }
        let w = self.fold(&ps)?;
        let out = self.input.rho(&w)?;
        self.pair_memo.insert(labels.to_vec(), out.clone());
        Ok(out)
    }

    /// The `U`-valued functional extending `<u', .>` on degree `n`.
    pub fn project(&self, v: &SparseVec<Word>) -> Result<Vec<Rational>> {
        let mut out = vec![Rational::zero(); self.input.dim];
        for (w, c) in v.iter() {
            let m = self.pairing(&w.labels)?;
            for (i, x) in out.iter_mut().enumerate() {
                if !m[i][w.u].is_zero() {
                    *x += &m[i][w.u] * c;
                }
            }
        }
        Ok(out)
    }

    /// `(<u'_i, y v>)` over the given lowering sequences `y`.
    pub fn signature(&self, v: &SparseVec<Word>, lowering: &[Vec<i64>]) -> Result<BTreeMap<usize, Rational>> {
        let d = self.input.dim;
        let mut out = BTreeMap::new();
        for (xi, x) in lowering.iter().enumerate() {
            let p = self.project(&self.apply_labels(x, v))?;
            for (i, c) in p.into_iter().enumerate() {
                if !c.is_zero() {
                    out.insert(xi * d + i, c);
                }
            }
        }
        Ok(out)
    }
}

impl ModeTarget for InducedModule<'_> {
    type Key = Word;

    fn backend(&self) -> &Backend {
        self.voa.backend()
    }

    fn generator_mode(&self, label: i64, key: &Word) -> SparseVec<Word> {
        let cache = (label, key.clone());
        if let Some(hit) = self.gen_memo.get(&cache) {
            return hit.clone();
        }
        let out = match key.labels.first() {
            None => {
                if label > self.n {
                    SparseVec::zero()
                } else if label == 0 {
                    let mut out = SparseVec::zero();
                    for (i, row) in self.zero.iter().enumerate() {
                        if !row[key.u].is_zero() {
                            out.add_term(Word::new(Vec::new(), i), row[key.u].clone());
                        }
                    }
                    out
                } else {
                    SparseVec::unit(Word::new(vec![label], key.u))
                }
            }
            Some(&k1) => {
                if label != 0 && label <= k1 {
                    let mut labels = Vec::with_capacity(key.labels.len() + 1);
                    labels.push(label);
                    labels.extend_from_slice(&key.labels);
                    SparseVec::unit(Word::new(labels, key.u))
                } else {
                    let rest = Word::new(key.labels[1..].to_vec(), key.u);
                    let inner = self.generator_mode(label, &rest);
                    let mut out = inner.apply(|t| self.generator_mode(k1, t));
                    for (lbl, c) in self.voa.backend().bracket(label, k1) {
                        match lbl {
                            None => out.add_term(rest.clone(), c),
                            Some(l) => out.add_scaled(&self.generator_mode(l, &rest), &c),
                        }
                    }
                    out
                }
            }
        };
        self.gen_memo.insert(cache, out.clone());
        out
    }

    fn generator_bound(&self, key: &Word) -> i64 {
        self.n + key.labels.iter().filter(|&&l| l < 0).map(|l| -l).sum::<i64>()
    }

    fn vertex_memo(&self) -> &DashMap<(State, i64, Word), SparseVec<Word>> {
        &self.vertex_memo
    }
}

/// A graded piece of `L_n(U)`: spanning words of `M_n(U)(k)` and the subset
/// whose pairings are independent.
pub struct Piece {
    pub degree: i64,
    pub words: Vec<Word>,
    pub lowering: Vec<Vec<i64>>,
    pub basis: Vec<usize>,
    solver: SpanBasis,
}

impl Piece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Dimension of the radical inside the spanning window.
    pub fn radical_dim(&self) -> usize {
        self.words.len() - self.basis.len()
    }
}

/// Windowed `L_n(U) = M_n(U) / J` for degrees `low..=high`.
pub struct Quotient {
    pub n: i64,
    pub extra: i64,
    pub pieces: BTreeMap<i64, Piece>,
}

impl Quotient {
    pub fn build(m: &InducedModule, low: i64, high: i64, extra: i64) -> Result<Self> {
        let mut pieces = BTreeMap::new();
        for k in low..=high {
            let words = m.raising_words(k);
            let lowering = m.lowering_words(k, extra);
            let mut solver = SpanBasis::new();
            let mut basis = Vec::new();
            for (i, w) in words.iter().enumerate() {
                if solver.insert(&m.signature(&SparseVec::unit(w.clone()), &lowering)?) {
                    basis.push(i);
                }
            }
            pieces.insert(k, Piece { degree: k, words, lowering, basis, solver });
        }
        Ok(Quotient { n: m.n, extra, pieces })
    }

    pub fn piece(&self, k: i64) -> Result<&Piece> {
        self.pieces.get(&k).ok_or_else(|| Error::InvalidArgument(format!("degree {k} outside the built window")))
    }

    pub fn dims(&self, low: i64, high: i64) -> Vec<usize> {
        (low..=high).map(|k| self.pieces.get(&k).map_or(0, Piece::dim)).collect()
    }

    /// Whether `v` (homogeneous of degree `k`) is zero in `L_n(U)`.
    pub fn vanishes(&self, m: &InducedModule, v: &SparseVec<Word>, k: i64) -> Result<bool> {
        Ok(m.signature(v, &self.piece(k)?.lowering)?.is_empty())
    }

    /// Coordinates of `v` over the basis of the degree-`k` piece.
    pub fn coords(&self, m: &InducedModule, v: &SparseVec<Word>, k: i64) -> Result<Option<Vec<Rational>>> {
        let p = self.piece(k)?;
        Ok(p.solver.solve(&m.signature(v, &p.lowering)?))
    }

    /// `Omega_level(L)(d)` in coordinates over the basis of degree `d`, using
    /// states up to `state_cap` as annihilation conditions.
    pub fn omega_piece(&self, m: &InducedModule, voa: &Voa, level: i64, d: i64, state_cap: u32) -> Result<Vec<SparseRow>> {
        let p = self.piece(d)?;
        let states: Vec<State> = voa.basis(state_cap).into_iter().filter(|s| !s.is_vacuum()).collect();
        let mut rows: BTreeMap<(usize, usize), SparseRow> = BTreeMap::new();
        for (col, &bi) in p.basis.iter().enumerate() {
            let w = &p.words[bi];
            let mut cond = 0;
            for a in &states {
                for k in (level + 1)..=d {
                    let img = vertex_mode(m, a, a.weight() as i64 - 1 + k, w);
                    let target = self.piece(d - k)?;
                    for (c, x) in m.signature(&img, &target.lowering)? {
                        rows.entry((cond, c)).or_default().push((col, x));
                    }
                    cond += 1;
                }
            }
        }
        let rows: Vec<SparseRow> = rows.into_values().collect();
        Ok(ExactRref::from_rows_direct(&rows, p.basis.len()).kernel_basis())
    }
}

/// Graded dimensions of `M_n(U)` on the spanning window.
pub fn induced_dims(m: &InducedModule, high: i64) -> Vec<usize> {
    (0..=high).map(|k| m.raising_words(k).len()).collect()
}

/// One coefficient of `(z0+z2)^{wt a+n} Y(a,z0+z2)Y(b,z2)u - (z2+z0)^{wt a+n} Y(Y(a,z0)b,z2)u`.
#[derive(Clone, Debug)]
pub struct WRelation {
    pub a: State,
    pub b: State,
    pub u: usize,
    pub z0: i64,
    pub z2: i64,
    pub degree: i64,
    pub vector: SparseVec<Word>,
}

/// Coefficient of `z0^{e0} z2^{e2}` in the weak associativity difference on `u`.
pub fn w_coefficient(m: &InducedModule, a: &State, b: &State, u: usize, e0: i64, e2: i64) -> SparseVec<Word> {
    let voa = m.voa;
    let big_n = a.weight() as i64 + m.n;
    let uw = m.u_word(u);
    let (av, bv) = (SparseVec::unit(a.clone()), SparseVec::unit(b.clone()));
    let q_max = m.mode_bound(b.weight() as i64, b.len(), &Word::new(Vec::new(), u));
    let mut out = SparseVec::zero();
    for i in 0..=(q_max + 1 + e2).max(-1) {
        let c = binomial(e0 + i, i);
        if c.is_zero() {
            continue;
        }
        let inner = act(m, &bv, i - 1 - e2, &uw);
        if inner.is_zero() {
            continue;
        }
        out.add_scaled(&act(m, &av, big_n - 1 - i - e0, &inner), &c);
    }
    for k in 0..=big_n {
        let ab = voa.mode_apply(&av, k - 1 - e0, &bv);
        if ab.is_zero() {
            continue;
        }
        out.add_scaled(&act(m, &ab, big_n - k - 1 - e2, &uw), &-binomial(big_n, k));
    }
    out
}

/// All coefficients of degree `0..=degree_cap` for nonvacuum `a`, `b` up to
/// `weight_cap`, with the `z0` exponent between `-(wt a + wt b + 1)` and `degree_cap + 1`.
pub fn w_relations(m: &InducedModule, voa: &Voa, weight_cap: u32, degree_cap: i64) -> Vec<WRelation> {
    let states: Vec<State> = voa.basis(weight_cap).into_iter().filter(|s| !s.is_vacuum()).collect();
    let mut out = Vec::new();
    for a in &states {
        for b in &states {
            let lo = -((a.weight() + b.weight()) as i64 + 1);
            for degree in 0..=degree_cap {
                for e0 in lo..=degree_cap + 1 {
                    let e2 = degree - b.weight() as i64 - e0;
                    for u in 0..m.input.dim {
                        let vector = w_coefficient(m, a, b, u, e0, e2);
                        out.push(WRelation { a: a.clone(), b: b.clone(), u, z0: e0, z2: e2, degree, vector });
                    }
                }
            }
        }
    }
    out
}

/// Windowed `M_n(U) / U(V-hat) W`: the relations and their images under
/// `x(-lambda) x(nu)` (never dropping below degree zero) that stay inside the
/// spanning words. Returns the graded dimensions and whether `U` survives.
pub fn mbar_window(m: &InducedModule, rels: &[WRelation], high: i64) -> (Vec<usize>, bool) {
    let mut per_degree: BTreeMap<i64, Vec<SparseVec<Word>>> = BTreeMap::new();
    for r in rels.iter().filter(|r| !r.vector.is_zero()) {
        for s in 0..=r.degree {
            for nu in lowering_labels(s, s) {
                for t in 0..=(high - r.degree + s) {
                    for lambda in raising_labels(t) {
                        let labels: Vec<i64> = lambda.iter().chain(&nu).copied().collect();
                        let v = m.apply_labels(&labels, &r.vector);
                        if !v.is_zero() {
                            per_degree.entry(r.degree - s + t).or_default().push(v);
                        }
                    }
                }
            }
        }
    }
    let mut dims = Vec::new();
    let mut u_survives = true;
    for k in 0..=high {
        let words = m.raising_words(k);
        let index: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut span = SpanBasis::new();
        for v in per_degree.get(&k).into_iter().flatten() {
            let row: Option<BTreeMap<usize, Rational>> =
                v.iter().map(|(w, c)| index.get(w).map(|&i| (i, c.clone()))).collect();
            if let Some(row) = row {
                span.insert(&row);
            }
        }
        dims.push(words.len() - span.rank());
        if k == m.n {
            for u in 0..m.input.dim {
                let i = index[&Word::new(Vec::new(), u)];
                if !span.insert(&BTreeMap::from([(i, Rational::one())])) {
                    u_survives = false;
                }
            }
        }
    }
    (dims, u_survives)
}

/// Coefficient of `z0^{e0}` (the `z2` power is forced by degree) of
/// `<u', (z0+z2)^e Y(a,z0+z2)Y(b,z2)u>` and of `<u', (z2+z0)^e Y(Y(a,z0)b,z2)u>`,
/// as vectors of `U`, for `a` homogeneous of weight `wa`.
pub fn paired_sides(
    m: &InducedModule,
    a: &StateVector,
    wa: u32,
    b: &State,
    e: i64,
    e0: i64,
    u: usize,
) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let voa = m.voa;
    let bv = SparseVec::unit(b.clone());
    let s = (wa + b.weight()) as i64 - 2;
    let q_max = m.mode_bound(b.weight() as i64, b.len(), &Word::new(Vec::new(), u));
    let uw = m.u_word(u);
    let mut lhs = SparseVec::zero();
    for p in (s - q_max)..=(e - 1 - e0) {
        let c = binomial(e - p - 1, e - p - 1 - e0);
        if c.is_zero() {
            continue;
        }
        lhs.add_scaled(&act(m, a, p, &act(m, &bv, s - p, &uw)), &c);
    }
    let lhs = m.project(&lhs)?;
    let mut rhs = vec![Rational::zero(); m.input.dim];
    for k in 0..=e {
        let ab = voa.mode_apply(a, k - 1 - e0, &bv);
        if ab.is_zero() {
            continue;
        }
        let r = m.input.rho(&ab)?;
        let c = binomial(e, k);
        for (i, x) in rhs.iter_mut().enumerate() {
            *x += &r[i][u] * &c;
        }
    }
    Ok((lhs, rhs))
}

/// [`paired_sides`] with exponent `wt a + n + j`.
pub fn paired_associativity(
    m: &InducedModule,
    a: &State,
    b: &State,
    j: i64,
    e0: i64,
    u: usize,
) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let e = a.weight() as i64 + m.n + j;
    paired_sides(m, &SparseVec::unit(a.clone()), a.weight(), b, e, e0, u)
}

/// Window sizes for the induced-module computations.
#[derive(Clone, Debug, Serialize)]
pub struct VermaWindow {
    pub degree_cap: i64,
    /// How far below degree zero lowering words may pass.
    pub extra: i64,
    /// Negative degrees checked to vanish in the quotient.
    pub negative_depth: i64,
    pub relation_weight_cap: u32,
    pub state_cap: u32,
    pub test_cap: u32,
}

impl VermaWindow {
    pub fn for_degree(degree_cap: i64) -> Self {
        VermaWindow {
            degree_cap,
            extra: 0,
            negative_depth: 1,
            relation_weight_cap: 2,
            state_cap: degree_cap as u32 + 1,
            test_cap: 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VermaReport {
    pub module: String,
    pub n: i64,
    pub window: VermaWindow,
    pub induced_dims: Vec<usize>,
    pub mbar_dims: Vec<usize>,
    pub quotient_dims: Vec<usize>,
    pub radical_dims: Vec<usize>,
    pub relation_count: usize,
    pub nonzero_relations: usize,
    pub checks: Vec<CheckRecord>,
}

/// Records a case that needs a pairing beyond the fold cap as inconclusive.
fn guarded<T>(t: &mut Tally, r: Result<T>, what: impl FnOnce() -> String) -> Result<Option<T>> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(Error::OutsideWindow { weight, cap }) => {
            t.unresolved(|| format!("{}: pairing needs fold weight {weight} > {cap}", what()));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn tally(name: &str, anchor: &str, m: &InducedModule, w: &VermaWindow) -> Tally {
    Tally::new(name, anchor)
        .param("module", m.input.label.clone())
        .param("n", m.n)
        .param("degree_cap", w.degree_cap)
}

/// `J` meets `U` trivially and the negative degrees of `L_n(U)` vanish.
pub fn radical_checks(m: &InducedModule, q: &Quotient, w: &VermaWindow) -> Result<Vec<CheckRecord>> {
    let mut cap = tally("radical_meets_u_trivially", "J intersect U = 0", m, w);
    let top = q.piece(m.n)?;
    let lowering = &top.lowering;
    let mut span = SpanBasis::new();
    for u in 0..m.input.dim {
        let ok = span.insert(&m.signature(&m.u_word(u), lowering)?);
        cap.check(ok, || format!("u{u} lies in J modulo the other basis vectors"));
    }
    let mut neg = tally("quotient_negative_degrees", "L_n(U)(k) = 0 for k < 0", m, w);
    for k in 1..=w.negative_depth {
        let p = q.piece(-k)?;
        neg.check(p.dim() == 0, || format!("degree {}: dimension {}", -k, p.dim()));
    }
    let mut bottom = tally("quotient_degree_zero", "L_n(U)(0) != 0", m, w);
    let d0 = q.piece(0)?.dim();
    bottom.check(d0 > 0, || "degree 0 vanishes".into());
    Ok(vec![cap.finish(), neg.finish(), bottom.finish()])
}

/// Every relation vector pairs to zero with `U*`.
pub fn relations_in_radical_check(m: &InducedModule, q: &Quotient, rels: &[WRelation], w: &VermaWindow) -> Result<CheckRecord> {
    let mut t = tally("relations_in_radical", "U(V-hat) W is contained in J", m, w)
        .param("relation_weight_cap", w.relation_weight_cap);
    for r in rels.iter().filter(|r| !r.vector.is_zero()) {
        let what = || format!("a={:?} b={:?} u{} z0^{} z2^{}", r.a, r.b, r.u, r.z0, r.z2);
        let Some(ok) = guarded(&mut t, q.vanishes(m, &r.vector, r.degree), what)? else { continue };
        t.check(ok, || format!("a={:?} b={:?} u{} z0^{} z2^{}: {}", r.a, r.b, r.u, r.z0, r.z2, m.render(&r.vector)));
    }
    Ok(t.finish())
}

/// `Omega_n / Omega_{n-1}` of `L_n(U)` in degree `n` is `U` with its original action.
pub fn omega_recovery_check(m: &InducedModule, q: &Quotient, voa: &Voa, w: &VermaWindow) -> Result<CheckRecord> {
    let mut t = tally("omega_recovery", "Omega_n/Omega_{n-1}(L_n(U)) = U as A_n(V)-modules", m, w)
        .param("state_cap", w.state_cap)
        .param("test_cap", w.test_cap);
    let n = m.n;
    let top = q.piece(n)?;
    let dim_top = top.dim();
    let lower = if n == 0 { Vec::new() } else { q.omega_piece(m, voa, n - 1, n, w.state_cap)? };
    let mut k_span = SpanBasis::new();
    for v in &lower {
        k_span.insert(&v.iter().cloned().collect());
    }
    let q_dim = dim_top - k_span.rank();
    t.check(q_dim == m.input.dim, || {
        format!(
            "degree {n}: dim L = {dim_top}, dim Omega_{} = {}, quotient {q_dim} but U has dimension {}",
            n - 1,
            k_span.rank(),
            m.input.dim
        )
    });
    let mut u_coords = Vec::new();
    for u in 0..m.input.dim {
        let c = q.coords(m, &m.u_word(u), n)?.ok_or_else(|| Error::Invariant("U outside its own piece".into()))?;
        u_coords.push(c);
    }
    let mut joint = k_span.clone();
    for (u, c) in u_coords.iter().enumerate() {
        let row: BTreeMap<usize, Rational> = c.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
        let fresh = joint.insert(&row);
        t.check(fresh, || format!("u{u} falls into Omega_{} + span of the other basis vectors", n - 1));
    }
    for s in voa.basis(w.test_cap) {
        let sv = SparseVec::unit(s.clone());
        let r = m.input.rho(&sv)?;
        for j in 0..m.input.dim {
            let mut diff = o(m, &sv, &m.u_word(j));
            for i in 0..m.input.dim {
                if !r[i][j].is_zero() {
                    diff.add_term(Word::new(Vec::new(), i), -r[i][j].clone());
                }
            }
            let what = || format!("o({}) u{j}", voa.render(&sv));
            let Some(coords) = guarded(&mut t, q.coords(m, &diff, n), what)? else { continue };
            match coords {
                None => t.unresolved(|| format!("o({}) u{j} leaves the spanning window", voa.render(&sv))),
                Some(c) => {
                    let row: BTreeMap<usize, Rational> =
                        c.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
                    t.check(k_span.contains(&row), || format!("o({}) u{j} differs from the table", voa.render(&sv)));
                }
            }
        }
    }
    t.note(format!("degree {n}: dim L = {dim_top}, dim Omega_{} = {}, quotient {q_dim}", n - 1, k_span.rank()));
    Ok(t.finish())
}

/// The paired associativity coefficients for `z0^{e0}` in `e0_range`.
pub fn paired_associativity_check(
    m: &InducedModule,
    voa: &Voa,
    name: &str,
    anchor: &str,
    e0_range: &[i64],
    w: &VermaWindow,
) -> Result<CheckRecord> {
    let mut t = tally(name, anchor, m, w).param("weight_cap", 2).param("z0_exponents", format!("{e0_range:?}"));
    for a in voa.basis(2) {
        for b in voa.basis(2) {
            for j in 0..=1 {
                for &e0 in e0_range {
                    for u in 0..m.input.dim {
                        let what = || format!("a={} b={} j={j} z0^{e0} u{u}", voa.render_state(&a), voa.render_state(&b));
                        let r = paired_associativity(m, &a, &b, j, e0, u);
                        let Some((lhs, rhs)) = guarded(&mut t, r, what)? else { continue };
                        t.check(lhs == rhs, || {
                            format!("a={} b={} j={j} z0^{e0} u{u}: {lhs:?} vs {rhs:?}", voa.render_state(&a), voa.render_state(&b))
                        });
                    }
                }
            }
        }
    }
    Ok(t.finish())
}

fn combine(x: &[Rational], cx: &Rational, y: &[Rational], cy: &Rational) -> Vec<Rational> {
    x.iter().zip(y).map(|(p, q)| p * cx + q * cy).collect()
}

/// Both sides of the paired associativity obey
/// `F(L(-1)a, e, k-1) = k F(a, e, k) - e F(a, e-1, k-1)` for the `z0^{k-1}`
/// coefficient, from `Res f' g = -Res f g'` and `Y(L(-1)a, z) = d/dz Y(a, z)`.
pub fn derivative_step_check(m: &InducedModule, voa: &Voa, w: &VermaWindow) -> Result<CheckRecord> {
    let mut t = tally("derivative_step", "Res_z0 z0^{-k} (z0+z2)^e <Y(L(-1)a,z0+z2)Y(b,z2)u> from the a-terms, both sides", m, w)
        .param("weight_cap", 2)
        .param("k", "1..=2");
    for a in voa.basis(2).into_iter().filter(|s| !s.is_vacuum()) {
        let av = SparseVec::unit(a.clone());
        let da = voa.l_op(-1, &av);
        for b in voa.basis(2) {
            for j in 0..=1 {
                let e = a.weight() as i64 + 1 + m.n + j;
                for k in 1..=2 {
                    for u in 0..m.input.dim {
                        let what = || format!("a={} b={} j={j} k={k} u{u}", voa.render_state(&a), voa.render_state(&b));
                        let r = paired_sides(m, &da, a.weight() + 1, &b, e, k - 1, u).and_then(|d| {
                            Ok((d, paired_sides(m, &av, a.weight(), &b, e, k, u)?, paired_sides(m, &av, a.weight(), &b, e - 1, k - 1, u)?))
                        });
                        let Some(((dl, dr), (l1, r1), (l2, r2))) = guarded(&mut t, r, what)? else { continue };
                        let (kk, ee) = (Rational::from_integer(k.into()), Rational::from_integer((-e).into()));
                        let ok = dl == combine(&l1, &kk, &l2, &ee) && dr == combine(&r1, &kk, &r2, &ee) && dl == dr;
                        t.check(ok, || format!("a={} b={} j={j} k={k} u{u}", voa.render_state(&a), voa.render_state(&b)));
                    }
                }
            }
        }
    }
    Ok(t.finish())
}

/// Enlarging the lowering window by one degree leaves the quotient dimensions unchanged.
pub fn window_stability_check(m: &InducedModule, q: &Quotient, w: &VermaWindow) -> Result<CheckRecord> {
    let mut t = tally("window_stability", "enlarging the pairing window can only shrink J", m, w).param("extra", q.extra + 1);
    for k in 0..=w.degree_cap {
        let wider = match Quotient::build(m, k, k, q.extra + 1) {
            Ok(x) => x,
            Err(Error::OutsideWindow { weight, cap }) => {
                t.unresolved(|| format!("degree {k}: the wider window needs fold weight {weight} > {cap}"));
                continue;
            }
            Err(e) => return Err(e),
        };
        let (a, b) = (q.piece(k)?.dim(), wider.piece(k)?.dim());
        if b < a {
            t.fail(|| format!("degree {k}: dimension dropped from {a} to {b}"));
        } else if b > a {
            t.unresolved(|| format!("degree {k}: dimension grew from {a} to {b}; window insufficient"));
        } else {
            t.pass();
        }
    }
    Ok(t.finish())
}

/// The whole construction for one module.
pub fn verma_suite(voa: &Voa, input: &AnModule, w: &VermaWindow) -> Result<VermaReport> {
    let m = InducedModule::new(voa, input)?;
    let mut checks = vec![input.axiom_check(voa, 2)?, input.non_factoring_check(voa, 2)?];
    let q = Quotient::build(&m, -w.negative_depth, w.degree_cap, w.extra)?;
    checks.extend(radical_checks(&m, &q, w)?);
    let rels = w_relations(&m, voa, w.relation_weight_cap, w.degree_cap);
    let nonzero = rels.iter().filter(|r| !r.vector.is_zero()).count();
    checks.push(relations_in_radical_check(&m, &q, &rels, w)?);
    let (mbar_dims, u_survives) = mbar_window(&m, &rels, w.degree_cap);
    let mut inj = tally("u_embeds_in_mbar", "U embeds in the quotient by U(V-hat) W", &m, w);
    inj.check(u_survives, || "a relation combination lands in U".into());
    checks.push(inj.finish());
    checks.push(window_stability_check(&m, &q, w)?);
    checks.push(omega_recovery_check(&m, &q, voa, w)?);
    checks.push(paired_associativity_check(
        &m,
        voa,
        "paired_associativity",
        "<u', (z0+z2)^{wt a+n+j} Y(a,z0+z2)Y(b,z2)u> = <u', (z2+z0)^{wt a+n+j} Y(Y(a,z0)b,z2)u>",
        &[-2, -1, 0, 1, 2],
        w,
    )?);
    checks.push(paired_associativity_check(
        &m,
        voa,
        "paired_residue",
        "Res_z0 z0^{i-1} of both sides of the paired associativity, i = 0, 1, 2",
        &[0, -1, -2],
        w,
    )?);
    checks.push(derivative_step_check(&m, voa, w)?);
    Ok(VermaReport {
        module: input.label.clone(),
        n: m.n,
        window: w.clone(),
        induced_dims: induced_dims(&m, w.degree_cap),
        mbar_dims,
        quotient_dims: q.dims(0, w.degree_cap),
        radical_dims: (0..=w.degree_cap).map(|k| q.pieces[&k].radical_dim()).collect(),
        relation_count: rels.len(),
        nonzero_relations: nonzero,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn heis(h: Rational, n: u32, levels: &[u32]) -> (Voa, AnModule) {
        (Voa::heisenberg(), AnModule::fock_levels(Backend::Heisenberg, h, n, levels).unwrap())
    }

    #[test]
    fn words_normal_order() {
        let (v, u) = heis(ratio(2, 3), 1, &[0, 1]);
        let m = InducedModule::new(&v, &u).unwrap();
        let w = m.apply_labels(&[1, -1], &m.u_word(0));
        let expected = SparseVec::from_terms([(Word::new(vec![-1, 1], 0), rat(1)), (Word::new(vec![], 0), rat(1))]);
        assert_eq!(w, expected);
        assert!(m.apply_labels(&[2], &m.u_word(1)).is_zero());
        assert_eq!(m.apply_labels(&[0], &m.u_word(1)), m.u_word(1).scaled(&ratio(2, 3)));
        assert_eq!(m.degree(&Word::new(vec![-2, 1, 1], 0)), 1);
    }

    #[test]
    fn level_zero_is_fock() {
        let (v, u) = heis(ratio(2, 3), 0, &[0]);
        let m = InducedModule::new(&v, &u).unwrap();
        assert_eq!(induced_dims(&m, 4), vec![1, 1, 2, 3, 5]);
        let q = Quotient::build(&m, -1, 4, 0).unwrap();
        assert_eq!(q.dims(0, 4), vec![1, 1, 2, 3, 5]);
        assert_eq!(q.dims(-1, -1), vec![0]);
        let rels = w_relations(&m, &v, 2, 3);
        assert!(rels.iter().all(|r| r.vector.is_zero()));
    }

    #[test]
    fn pairing_matches_fock_on_short_words() {
        let (v, u) = heis(ratio(2, 3), 1, &[0, 1]);
        let m = InducedModule::new(&v, &u).unwrap();
        let fock = FockSpace::highest_weight(Backend::Heisenberg, ratio(2, 3));
        let basis = [State::vacuum(), State::new(vec![1]).unwrap()];
        for labels in [vec![-1, 1], vec![-2, 1, 1], vec![-1, -1, 1, 1]] {
            let p = m.pairing(&labels).unwrap();
            for (j, b) in basis.iter().enumerate() {
                let actual = labels.iter().rev().fold(SparseVec::unit(b.clone()), |acc, &l| act_generator(&fock, l, &acc));
                for (i, s) in basis.iter().enumerate() {
                    assert_eq!(p[i][j], actual.coeff(s), "{labels:?} {i} {j}");
                }
            }
        }
    }

    #[test]
    fn level_one_quotient() {
        let (v, u) = heis(ratio(2, 3), 1, &[0, 1]);
        let m = InducedModule::new(&v, &u).unwrap();
        let q = Quotient::build(&m, -1, 2, 0).unwrap();
        assert_eq!(q.dims(-1, 2), vec![0, 1, 2, 3]);
        let w = VermaWindow::for_degree(2);
        let r = omega_recovery_check(&m, &q, &v, &w).unwrap();
        assert!(!r.passed());
        let (v1, u1) = heis(ratio(2, 3), 1, &[1]);
        let m1 = InducedModule::new(&v1, &u1).unwrap();
        let q1 = Quotient::build(&m1, -1, 2, 0).unwrap();
        assert_eq!(q1.dims(0, 2), vec![1, 1, 2]);
        assert!(omega_recovery_check(&m1, &q1, &v1, &w).unwrap().passed());
    }

    #[test]
    fn table_input_agrees() {
        let v = Voa::heisenberg();
        let f = AnModule::fock_levels(Backend::Heisenberg, ratio(2, 3), 0, &[0]).unwrap();
        let span = OnSpan::build(&v, 0, 6, 4).unwrap();
        let t = f.to_table(span).unwrap();
        assert!(t.axiom_check(&v, 2).unwrap().passed());
        let w = v.conformal_vector();
        assert_eq!(t.rho(&w).unwrap(), vec![vec![ratio(2, 9)]]);
        let m = InducedModule::new(&v, &t).unwrap();
        let q = Quotient::build(&m, 0, 3, 0).unwrap();
        assert_eq!(q.dims(0, 3), vec![1, 1, 2, 3]);
    }

    #[test]
    fn vacuum_relations_vanish() {
        let (v, u) = heis(ratio(2, 3), 1, &[0, 1]);
        let m = InducedModule::new(&v, &u).unwrap();
        let a = State::new(vec![1]).unwrap();
        for e0 in -3..3 {
            for deg in 0..3 {
                assert!(w_coefficient(&m, &State::vacuum(), &a, 0, e0, deg - 1 - e0).is_zero());
            }
        }
        let nonzero = w_relations(&m, &v, 2, 1).iter().filter(|r| !r.vector.is_zero()).count();
        assert!(nonzero > 0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(AnModule::fock_levels(Backend::Heisenberg, rat(1), 0, &[1]).is_err());
        let v = Voa::heisenberg();
        let span = OnSpan::build(&v, 0, 2, 2).unwrap();
        assert!(AnModule::table("x", span, 1, BTreeMap::new()).is_err());
    }
}
