//! Desk-scale vertex operator algebras: the rank-one Heisenberg algebra and
//! the universal Virasoro algebra, their highest-weight modules, and the
//! recursive mode calculus `u_m v`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;

use dashmap::DashMap;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, factorial, format_rational, parse_rational, rat, ratio, sign, Rational};
use crate::error::{Error, Result};
use crate::vector::SparseVec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Backend {
    Heisenberg,
    Virasoro {
        #[serde(with = "crate::report::rational_text")]
        c: Rational,
    },
}

impl Backend {
    pub fn generator_weight(&self) -> u32 {
        match self {
            Backend::Heisenberg => 1,
            Backend::Virasoro { .. } => 2,
        }
    }

    pub fn letter(&self) -> &'static str {
        match self {
            Backend::Heisenberg => "a",
            Backend::Virasoro { .. } => "L",
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Backend::Heisenberg => "heisenberg",
            Backend::Virasoro { .. } => "virasoro",
        }
    }

    fn vacuum_min_part(&self) -> u32 {
        self.generator_weight()
    }

    /// `[x(m), x(k)]` as a list of `(label, coefficient)`; `None` is the identity.
    pub fn bracket(&self, m: i64, k: i64) -> Vec<(Option<i64>, Rational)> {
        match self {
            Backend::Heisenberg => {
                if m + k == 0 && m != 0 {
                    vec![(None, rat(m))]
                } else {
                    vec![]
                }
            }
            Backend::Virasoro { c } => {
                let mut out = Vec::new();
                if m != k {
                    out.push((Some(m + k), rat(m - k)));
                }
                if m + k == 0 {
                    let central = c * rat(m * m * m - m) / rat(12);
                    if !central.is_zero() {
                        out.push((None, central));
                    }
                }
                out
            }
        }
    }
}

/// A PBW monomial `x(-k_1) ... x(-k_r)` on a highest-weight vector, with
/// `k_1 >= ... >= k_r`.
///
/// Ordered by weight ascending, then lexicographically decreasing parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct State {
    parts: Vec<u32>,
}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight().cmp(&other.weight()).then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl State {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument("mode depths must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(State { parts })
    }

    pub fn vacuum() -> Self {
        State { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_vacuum(&self) -> bool {
        self.parts.is_empty()
    }

    fn tail(&self) -> State {
        State { parts: self.parts[1..].to_vec() }
    }

    fn prepend(&self, k: u32) -> State {
        let mut parts = Vec::with_capacity(self.parts.len() + 1);
        parts.push(k);
        parts.extend_from_slice(&self.parts);
        State { parts }
    }

    pub fn render(&self, letter: &str, ket: &str) -> String {
        let mut s: String = self.parts.iter().map(|k| format!("{letter}(-{k})")).collect();
        s.push_str(ket);
        s
    }
}

pub type StateVector = SparseVec<State>;

/// A space on which generator modes `x(label)` act, hence every vertex mode.
pub trait ModeTarget: Sync {
    type Key: Clone + Ord + Hash + Eq + Send + Sync + fmt::Debug;

    fn backend(&self) -> &Backend;

    /// `x(label)` applied to a basis vector, in normal form.
    fn generator_mode(&self, label: i64, key: &Self::Key) -> SparseVec<Self::Key>;

    /// Every `x(label)` with `label` above this kills `key`.
    fn generator_bound(&self, key: &Self::Key) -> i64;

    /// Every `u_p` with `p` above this kills `key`, for `u` of weight `wt`
    /// built from `letters` generator modes.
    fn mode_bound(&self, wt: i64, letters: usize, key: &Self::Key) -> i64 {
        let r = letters as i64;
        let slack = self.backend().generator_weight() as i64 - 1;
        wt - 1 + r * (self.generator_bound(key).max(0) + r * slack)
    }

    fn vertex_memo(&self) -> &DashMap<(State, i64, Self::Key), SparseVec<Self::Key>>;
}

/// `u_m v` for a basis state `u` of the algebra and a basis vector `v` of the target.
pub fn vertex_mode<T: ModeTarget>(t: &T, u: &State, m: i64, v: &T::Key) -> SparseVec<T::Key> {
    if u.is_vacuum() {
        return if m == -1 { SparseVec::unit(v.clone()) } else { SparseVec::zero() };
    }
    let wg = t.backend().generator_weight() as i64;
    let k = u.parts[0] as i64;
    if u.len() == 1 && k == wg {
        return t.generator_mode(m - wg + 1, v);
    }
    if m > t.mode_bound(u.weight() as i64, u.len(), v) {
        return SparseVec::zero();
    }
    let memo_key = (u.clone(), m, v.clone());
    if let Some(hit) = t.vertex_memo().get(&memo_key) {
        return hit.clone();
    }
    let rest = u.tail();
    let n0 = wg - 1 - k;
    let wt_rest = u.weight() as i64 - k;
    let jmax = (t.mode_bound(wt_rest, rest.len(), v) - m).max(wg - 1 + t.generator_bound(v));
    let mut out = SparseVec::zero();
    let sign_n0 = sign(n0);
    for j in 0..=jmax.max(-1) {
        let c = sign(j) * binomial(n0, j);
        if c.is_zero() {
            continue;
        }
        let w1 = vertex_mode(t, &rest, m + j, v);
        if !w1.is_zero() {
            out.add_scaled(&w1.apply(|key| t.generator_mode(-k - j, key)), &c);
        }
        let w2 = t.generator_mode(j - wg + 1, v);
        if !w2.is_zero() {
            let c2 = -&c * &sign_n0;
            out.add_scaled(&w2.apply(|key| vertex_mode(t, &rest, n0 + m - j, key)), &c2);
        }
    }
    t.vertex_memo().insert(memo_key, out.clone());
    out
}

/// Linear extension of [`vertex_mode`] in both arguments.
pub fn act<T: ModeTarget>(t: &T, u: &StateVector, m: i64, v: &SparseVec<T::Key>) -> SparseVec<T::Key> {
    let mut out = SparseVec::zero();
    for (s, c) in u.iter() {
        out.add_scaled(&v.apply(|key| vertex_mode(t, s, m, key)), c);
    }
    out
}

/// `x(label)` extended linearly.
pub fn act_generator<T: ModeTarget>(t: &T, label: i64, v: &SparseVec<T::Key>) -> SparseVec<T::Key> {
    v.apply(|key| t.generator_mode(label, key))
}

/// A highest-weight module spanned by PBW monomials: the vacuum module of the
/// algebra itself, a Heisenberg Fock module, or a Virasoro Verma module.
#[derive(Debug)]
pub struct FockSpace {
    backend: Backend,
    h: Rational,
    min_part: u32,
    ket: String,
    gen_memo: DashMap<(i64, State), StateVector>,
    vertex_memo: DashMap<(State, i64, State), StateVector>,
}

impl FockSpace {
    pub fn vacuum_module(backend: Backend) -> Self {
        let min_part = backend.vacuum_min_part();
        FockSpace::build(backend, Rational::zero(), min_part, "|0>".into())
    }

    /// Fock module `M(h)` (Heisenberg) or Verma module `M(c, h)` (Virasoro).
    pub fn highest_weight(backend: Backend, h: Rational) -> Self {
        let ket = format!("|{}>", format_rational(&h));
        FockSpace::build(backend, h, 1, ket)
    }

    fn build(backend: Backend, h: Rational, min_part: u32, ket: String) -> Self {
        FockSpace { backend, h, min_part, ket, gen_memo: DashMap::new(), vertex_memo: DashMap::new() }
    }

    pub fn highest_weight_value(&self) -> &Rational {
        &self.h
    }

    pub fn ket(&self) -> &str {
        &self.ket
    }

    /// Basis of the degree-`k` piece.
    pub fn degree_basis(&self, k: u32) -> Vec<State> {
        let mut out: Vec<State> = crate::arith::partitions(k, self.min_part)
            .into_iter()
            .map(|p| State { parts: p.into_parts() })
            .collect();
        out.sort();
        out
    }

    /// Basis of all degrees up to `cap`, in state order.
    pub fn basis(&self, cap: u32) -> Vec<State> {
        (0..=cap).flat_map(|k| self.degree_basis(k)).collect()
    }

    pub fn render(&self, v: &StateVector) -> String {
        render_vector(v, |s| s.render(self.backend.letter(), &self.ket))
    }
}

impl ModeTarget for FockSpace {
    type Key = State;

    fn backend(&self) -> &Backend {
        &self.backend
    }

    fn generator_mode(&self, label: i64, s: &State) -> StateVector {
        if label > s.weight() as i64 {
            return SparseVec::zero();
        }
        let key = (label, s.clone());
        if let Some(hit) = self.gen_memo.get(&key) {
            return hit.clone();
        }
        let out = match s.parts.first() {
            None => {
                if label > 0 {
                    SparseVec::zero()
                } else if label == 0 {
                    SparseVec::single(s.clone(), self.h.clone())
                } else if ((-label) as u32) < self.min_part {
                    SparseVec::zero()
                } else {
                    SparseVec::unit(State { parts: vec![(-label) as u32] })
                }
            }
            Some(&k1) => {
                if label < 0 && (-label) as u32 >= k1 {
                    SparseVec::unit(s.prepend((-label) as u32))
                } else {
                    let rest = s.tail();
                    let inner = self.generator_mode(label, &rest);
                    let mut out = inner.apply(|t| self.generator_mode(-(k1 as i64), t));
                    for (lbl, c) in self.backend.bracket(label, -(k1 as i64)) {
                        match lbl {
                            None => out.add_term(rest.clone(), c),
                            Some(l) => out.add_scaled(&self.generator_mode(l, &rest), &c),
                        }
                    }
                    out
                }
            }
        };
        self.gen_memo.insert(key, out.clone());
        out
    }

    fn generator_bound(&self, s: &State) -> i64 {
        s.weight() as i64
    }

    fn mode_bound(&self, wt: i64, _letters: usize, s: &State) -> i64 {
        wt - 1 + s.weight() as i64
    }

    fn vertex_memo(&self) -> &DashMap<(State, i64, State), StateVector> {
        &self.vertex_memo
    }
}

/// A vertex operator algebra together with its vacuum module.
#[derive(Debug)]
pub struct Voa {
    space: FockSpace,
}

impl Voa {
    pub fn new(backend: Backend) -> Self {
        Voa { space: FockSpace::vacuum_module(backend) }
    }

    pub fn heisenberg() -> Self {
        Voa::new(Backend::Heisenberg)
    }

    pub fn virasoro(c: Rational) -> Self {
        Voa::new(Backend::Virasoro { c })
    }

    pub fn backend(&self) -> &Backend {
        &self.space.backend
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn vacuum(&self) -> StateVector {
        SparseVec::unit(State::vacuum())
    }

    /// The single-letter state `x(-wt x) 1`, i.e. `a` or `omega`.
    pub fn generator(&self) -> StateVector {
        SparseVec::unit(State { parts: vec![self.backend().generator_weight()] })
    }

    pub fn conformal_vector(&self) -> StateVector {
        match self.backend() {
            Backend::Heisenberg => SparseVec::single(State { parts: vec![1, 1] }, ratio(1, 2)),
            Backend::Virasoro { .. } => SparseVec::unit(State { parts: vec![2] }),
        }
    }

    pub fn mode_apply(&self, u: &StateVector, m: i64, v: &StateVector) -> StateVector {
        act(&self.space, u, m, v)
    }

    /// `L(i) v`.
    pub fn l_op(&self, i: i64, v: &StateVector) -> StateVector {
        match self.backend() {
            Backend::Virasoro { .. } => act_generator(&self.space, i, v),
            Backend::Heisenberg => self.mode_apply(&self.conformal_vector(), i + 1, v),
        }
    }

    pub fn sl2_ops(&self, v: &StateVector) -> [StateVector; 3] {
        [self.l_op(-1, v), self.l_op(0, v), self.l_op(1, v)]
    }

    /// `sum_k L(1)^k / k!`, finite since `L(1)` lowers weight.
    pub fn exp_l1(&self, v: &StateVector) -> StateVector {
        let mut out = v.clone();
        let mut term = v.clone();
        let mut k = 1u32;
        loop {
            term = self.l_op(1, &term);
            if term.is_zero() {
                break;
            }
            let inv = Rational::new(One::one(), factorial(k));
            out.add_scaled(&term, &inv);
            k += 1;
        }
        out
    }

    pub fn sign_l0(&self, v: &StateVector) -> StateVector {
        v.iter().map(|(s, c)| (s.clone(), c * sign(s.weight() as i64))).collect()
    }

    /// `e^{L(1)} (-1)^{L(0)} v`.
    pub fn phi(&self, v: &StateVector) -> StateVector {
        self.exp_l1(&self.sign_l0(v))
    }

    pub fn basis(&self, cap: u32) -> Vec<State> {
        self.space.basis(cap)
    }

    pub fn weight_basis(&self, w: u32) -> Vec<State> {
        self.space.degree_basis(w)
    }

    pub fn render(&self, v: &StateVector) -> String {
        self.space.render(v)
    }

    pub fn render_state(&self, s: &State) -> String {
        s.render(self.backend().letter(), "|0>")
    }

    /// Parses text such as `1/2*a(-1)a(-1)|0> + a(-2)|0>`.
    pub fn parse(&self, text: &str) -> Result<StateVector> {
        parse_vector(text, self.backend().letter(), self.backend().vacuum_min_part())
    }
}

/// Weight-homogeneous components of `v`, by weight.
pub fn components(v: &StateVector) -> Vec<(u32, StateVector)> {
    let mut out: Vec<(u32, StateVector)> = Vec::new();
    for (s, c) in v.iter() {
        let w = s.weight();
        match out.last_mut() {
            Some((lw, comp)) if *lw == w => comp.add_term(s.clone(), c.clone()),
            _ => out.push((w, SparseVec::single(s.clone(), c.clone()))),
        }
    }
    out
}

pub fn render_vector<K: Ord + Clone>(v: &SparseVec<K>, key: impl Fn(&K) -> String) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (k, c)) in v.iter().enumerate() {
        let neg = *c < Rational::zero();
        let mag = if neg { -c } else { c.clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            out.push_str(&format_rational(&mag));
            out.push('*');
        }
        out.push_str(&key(k));
    }
    out
}

fn parse_vector(text: &str, letter: &str, min_part: u32) -> Result<StateVector> {
    let bad = |why: &str| Error::Parse(format!("{why} in {text:?}"));
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact == "0" {
        return Ok(SparseVec::zero());
    }
    let mut out = SparseVec::zero();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let mut c = Rational::one();
        if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            c = -c;
            rest = r;
        }
        let end = rest.find("|0>").ok_or_else(|| bad("missing |0>"))?;
        let term = &rest[..end];
        rest = &rest[end + 3..];
        let (coeff, word) = match term.split_once('*') {
            Some((q, w)) => (parse_rational(q)?, w),
            None => (Rational::one(), term),
        };
        let mut parts = Vec::new();
        let mut w = word;
        while !w.is_empty() {
            let body = w.strip_prefix(letter).and_then(|x| x.strip_prefix('(')).ok_or_else(|| bad("expected mode"))?;
            let close = body.find(')').ok_or_else(|| bad("unclosed mode"))?;
            let m: i64 = body[..close].parse().map_err(|_| bad("bad mode index"))?;
            if m >= 0 || ((-m) as u32) < min_part {
                return Err(bad("mode is not a creation mode"));
            }
            parts.push((-m) as u32);
            w = &body[close + 1..];
        }
        out.add_term(State::new(parts)?, c * coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(parts: &[u32]) -> StateVector {
        SparseVec::unit(State::new(parts.to_vec()).unwrap())
    }

    #[test]
    fn heisenberg_examples() {
        let v = Voa::heisenberg();
        let a = st(&[1]);
        assert_eq!(v.mode_apply(&a, 1, &a), v.vacuum());
        let w = v.conformal_vector();
        assert_eq!(v.mode_apply(&w, 1, &a), a);
        assert_eq!(v.mode_apply(&w, 0, &a), st(&[2]));
        assert_eq!(v.l_op(-1, &v.vacuum()), SparseVec::zero());
        assert_eq!(v.exp_l1(&a), a);
        assert_eq!(v.sign_l0(&w), w);
        assert_eq!(v.phi(&a), -&a);
        assert_eq!(v.phi(&w), w);
        assert_eq!(v.phi(&v.vacuum()), v.vacuum());
    }

    #[test]
    fn conformal_vector_grades_by_weight() {
        let v = Voa::heisenberg();
        for s in v.basis(5) {
            let x = SparseVec::unit(s.clone());
            assert_eq!(v.l_op(0, &x), x.scaled(&rat(s.weight() as i64)));
        }
        let vir = Voa::virasoro(ratio(1, 2));
        for s in vir.basis(6) {
            let x = SparseVec::unit(s.clone());
            assert_eq!(vir.mode_apply(&vir.conformal_vector(), 1, &x), x.scaled(&rat(s.weight() as i64)));
        }
    }

    #[test]
    fn virasoro_phi_fixes_omega() {
        let v = Voa::virasoro(ratio(1, 2));
        assert!(v.l_op(1, &v.conformal_vector()).is_zero());
        assert_eq!(v.phi(&v.conformal_vector()), v.conformal_vector());
        // L(2) L(-2)|0> = c/2 |0>
        assert_eq!(v.l_op(2, &v.conformal_vector()), v.vacuum().scaled(&ratio(1, 4)));
    }

    #[test]
    fn basis_examples() {
        let v = Voa::heisenberg();
        let b = v.basis(2);
        assert_eq!(b, vec![State::vacuum(), State::new(vec![1]).unwrap(), State::new(vec![2]).unwrap(), State::new(vec![1, 1]).unwrap()]);
        let vir = Voa::virasoro(ratio(1, 2));
        let dims: Vec<usize> = (0..=4).map(|w| vir.weight_basis(w).len()).collect();
        assert_eq!(dims, vec![1, 0, 1, 1, 2]);
        assert_eq!(v.basis(0), vec![State::vacuum()]);
    }

    #[test]
    fn text_round_trip() {
        let v = Voa::heisenberg();
        let x = v.parse("1/2*a(-1)a(-1)|0> + a(-2)|0> - 3*|0>").unwrap();
        assert_eq!(v.render(&x), "-3*|0> + a(-2)|0> + 1/2*a(-1)a(-1)|0>");
        assert_eq!(v.parse(&v.render(&x)).unwrap(), x);
        assert!(v.parse("a(1)|0>").is_err());
        let vir = Voa::virasoro(rat(1));
        assert!(vir.parse("L(-1)|0>").is_err());
        assert_eq!(vir.render(&vir.parse("L(-2)L(-2)|0>").unwrap()), "L(-2)L(-2)|0>");
    }

    fn commutator_check(v: &Voa, cap: u32) {
        let basis = v.basis(cap);
        for a in &basis {
            for b in &basis {
                let av = SparseVec::unit(a.clone());
                let bv = SparseVec::unit(b.clone());
                for p in -3..=3i64 {
                    for q in -3..=3i64 {
                        let mut rhs_state: Vec<(i64, StateVector)> = Vec::new();
                        for i in 0..=(a.weight() + b.weight()) as i64 {
                            let c = binomial(p, i);
                            if c.is_zero() {
                                continue;
                            }
                            rhs_state.push((i, v.mode_apply(&av, i, &bv).scaled(&c)));
                        }
                        for w in &basis {
                            let wv = SparseVec::unit(w.clone());
                            let lhs = &v.mode_apply(&av, p, &v.mode_apply(&bv, q, &wv)) - &v.mode_apply(&bv, q, &v.mode_apply(&av, p, &wv));
                            let mut rhs = SparseVec::zero();
                            for (i, x) in &rhs_state {
                                rhs = &rhs + &v.mode_apply(x, p + q - i, &wv);
                            }
                            assert_eq!(lhs, rhs, "a={a:?} b={b:?} p={p} q={q} w={w:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn commutator_formula_heisenberg() {
        commutator_check(&Voa::heisenberg(), 3);
    }

    #[test]
    fn commutator_formula_virasoro() {
        commutator_check(&Voa::virasoro(ratio(1, 2)), 4);
    }

    #[test]
    fn grading_and_vacuum_axioms() {
        let v = Voa::heisenberg();
        let one = v.vacuum();
        for s in v.basis(4) {
            let u = SparseVec::unit(s.clone());
            assert_eq!(v.mode_apply(&u, -1, &one), u);
            for m in 0..4 {
                assert!(v.mode_apply(&u, m, &one).is_zero());
            }
            for t in v.basis(3) {
                let w = SparseVec::unit(t.clone());
                for m in -4..5i64 {
                    for (x, _) in v.mode_apply(&u, m, &w).iter() {
                        assert_eq!(x.weight() as i64, s.weight() as i64 + t.weight() as i64 - m - 1);
                    }
                }
            }
        }
    }

    #[test]
    fn skew_symmetry() {
        for v in [Voa::heisenberg(), Voa::virasoro(ratio(3, 5))] {
            let basis = v.basis(3);
            for a in &basis {
                for b in &basis {
                    let (av, bv) = (SparseVec::unit(a.clone()), SparseVec::unit(b.clone()));
                    for m in -3..=3i64 {
                        let lhs = v.mode_apply(&av, m, &bv);
                        let mut rhs = SparseVec::zero();
                        let top = (a.weight() + b.weight()) as i64 + 2;
                        for i in 0..=top {
                            let mut x = v.mode_apply(&bv, m + i, &av);
                            for _ in 0..i {
                                x = v.l_op(-1, &x);
                            }
                            let c = sign(m + 1 + i) / Rational::from_integer(factorial(i as u32));
                            rhs.add_scaled(&x, &c);
                        }
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn sl2_relations() {
        for v in [Voa::heisenberg(), Voa::virasoro(ratio(1, 2))] {
            for s in v.basis(4) {
                let x = SparseVec::unit(s);
                let lhs = &v.l_op(1, &v.l_op(-1, &x)) - &v.l_op(-1, &v.l_op(1, &x));
                assert_eq!(lhs, v.l_op(0, &x).scaled(&rat(2)));
            }
        }
    }

    #[test]
    fn fock_module_actions() {
        let h = ratio(2, 3);
        let m = FockSpace::highest_weight(Backend::Heisenberg, h.clone());
        let top = SparseVec::unit(State::vacuum());
        let a = st(&[1]);
        assert_eq!(act(&m, &a, 0, &top), top.scaled(&h));
        let voa = Voa::heisenberg();
        assert_eq!(act(&m, &voa.conformal_vector(), 1, &top), top.scaled(&(&h * &h / rat(2))));
        let verma = FockSpace::highest_weight(Backend::Virasoro { c: ratio(1, 2) }, ratio(1, 16));
        let vir = Voa::virasoro(ratio(1, 2));
        for s in verma.basis(4) {
            let x = SparseVec::unit(s.clone());
            assert_eq!(act(&verma, &vir.conformal_vector(), 1, &x), x.scaled(&(ratio(1, 16) + rat(s.weight() as i64))));
        }
    }
}
