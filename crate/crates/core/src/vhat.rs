//! The graded Lie algebra of formal modes `a(m)`, its bracket, and the map of
//! its degree-zero part into the Zhu algebras.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arith::{binomial, factorial, rat, sign, Rational};
use crate::error::{Error, Result};
use crate::vector::SparseVec;
use crate::voa::{act, Backend, ModeTarget, State, StateVector, Voa};
use crate::zhu::{CosetRep, OnSpan};

/// Formal sum of modes `c * a(m)`.
pub type VhatElement = SparseVec<(State, i64)>;

/// Degree `wt a - m - 1` of `a(m)`.
pub fn degree(a: &State, m: i64) -> i64 {
    a.weight() as i64 - m - 1
}

/// `a(m)` in canonical form.
pub fn mode(backend: &Backend, a: &State, m: i64) -> VhatElement {
    canonical_term(backend, a, m, &Rational::one())
}

/// `v(m)` for a combination of states.
pub fn from_vector(backend: &Backend, v: &StateVector, m: i64) -> VhatElement {
    let mut out = SparseVec::zero();
    for (s, c) in v.iter() {
        out.add_scaled(&canonical_term(backend, s, m, c), &Rational::one());
    }
    out
}

/// Applies `1(m) = 0` for `m != -1` and `(L(-1)^j g)(m) = (-1)^j m(m-1)...(m-j+1) g(m-j)`
/// on single-letter states; other terms are kept as they are.
fn canonical_term(backend: &Backend, a: &State, m: i64, c: &Rational) -> VhatElement {
    if c.is_zero() {
        return SparseVec::zero();
    }
    if a.is_vacuum() {
        return if m == -1 { SparseVec::single((a.clone(), m), c.clone()) } else { SparseVec::zero() };
    }
    let wg = backend.generator_weight();
    if a.len() == 1 && a.parts()[0] > wg {
        let j = (a.parts()[0] - wg) as i64;
        let falling: Rational = (0..j).map(|t| rat(m - t)).product();
        let coeff = c * sign(j) * falling / Rational::from_integer(factorial(j as u32));
        let g = State::new(vec![wg]).unwrap();
        return SparseVec::single((g, m - j), coeff);
    }
    SparseVec::single((a.clone(), m), c.clone())
}

pub fn canonicalize(backend: &Backend, x: &VhatElement) -> VhatElement {
    let mut out = SparseVec::zero();
    for ((a, m), c) in x.iter() {
        out.add_scaled(&canonical_term(backend, a, *m, c), &Rational::one());
    }
    out
}

/// Degree-homogeneous components.
pub fn components(x: &VhatElement) -> BTreeMap<i64, VhatElement> {
    let mut out: BTreeMap<i64, VhatElement> = BTreeMap::new();
    for ((a, m), c) in x.iter() {
        out.entry(degree(a, *m)).or_default().add_term((a.clone(), *m), c.clone());
    }
    out
}

/// `[a(p), b(q)] = sum_i C(p, i) (a_i b)(p + q - i)`, extended bilinearly.
pub fn bracket(voa: &Voa, x: &VhatElement, y: &VhatElement) -> VhatElement {
    let mut out = SparseVec::zero();
    for ((a, p), ca) in x.iter() {
        let av = SparseVec::unit(a.clone());
        for ((b, q), cb) in y.iter() {
            let bv = SparseVec::unit(b.clone());
            let coeff = ca * cb;
            let top = (a.weight() + b.weight()) as i64;
            for i in 0..=top {
                let c = binomial(*p, i);
                if c.is_zero() {
                    continue;
                }
                let ab = voa.mode_apply(&av, i, &bv);
                if !ab.is_zero() {
                    out.add_scaled(&from_vector(voa.backend(), &ab, p + q - i), &(&coeff * c));
                }
            }
        }
    }
    out
}

/// Action of `x` on a module through `a(m) -> a_m`.
pub fn act_on<T: ModeTarget>(t: &T, x: &VhatElement, v: &SparseVec<T::Key>) -> SparseVec<T::Key> {
    let mut out = SparseVec::zero();
    for ((a, m), c) in x.iter() {
        out.add_scaled(&act(t, &SparseVec::unit(a.clone()), *m, v), c);
    }
    out
}

/// The state `sum c a` for a degree-zero `x = sum c a(wt a - 1)`.
pub fn zero_mode_state(x: &VhatElement) -> Result<StateVector> {
    let mut out = SparseVec::zero();
    for ((a, m), c) in x.iter() {
        let d = degree(a, *m);
        if d != 0 {
            return Err(Error::NonzeroDegree(d));
        }
        out.add_term(a.clone(), c.clone());
    }
    Ok(out)
}

/// Image of a degree-zero element in `A_n(V)` at the span's window.
pub fn to_an(x: &VhatElement, span: &OnSpan) -> Result<CosetRep> {
    span.coset(&zero_mode_state(x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use crate::voa::{FockSpace, ModeTarget};
    use crate::zhu::star_n;
    use proptest::prelude::*;

    fn st(parts: &[u32]) -> State {
        State::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let v = Voa::heisenberg();
        let b = v.backend().clone();
        let a = st(&[1]);
        let x = bracket(&v, &mode(&b, &a, 1), &mode(&b, &a, -1));
        assert_eq!(x, mode(&b, &State::vacuum(), -1));
        let z = mode(&b, &a, 0);
        assert!(bracket(&v, &z, &z).is_zero());
        let w = mode(&b, &st(&[1, 1]), 1);
        for m in -3..3 {
            let y = mode(&b, &a, m);
            for (d, _) in components(&bracket(&v, &w, &y)) {
                assert_eq!(d, degree(&a, m));
            }
        }
    }

    #[test]
    fn derivative_rewrite() {
        let b = Backend::Heisenberg;
        let x = mode(&b, &st(&[2]), 3);
        assert_eq!(x, SparseVec::single((st(&[1]), 2), rat(-3)));
        assert!(mode(&b, &State::vacuum(), 0).is_zero());
    }

    #[test]
    fn to_an_examples() {
        let v = Voa::heisenberg();
        let b = v.backend().clone();
        let span = OnSpan::build(&v, 0, 6, 4).unwrap();
        let w = mode(&b, &st(&[1, 1]), 1).scaled(&ratio(1, 2));
        assert_eq!(to_an(&w, &span).unwrap(), span.coset(&v.conformal_vector()).unwrap());
        assert_eq!(to_an(&mode(&b, &State::vacuum(), -1), &span).unwrap(), span.coset(&v.vacuum()).unwrap());
        assert!(matches!(to_an(&mode(&b, &st(&[1]), 3), &span), Err(Error::NonzeroDegree(-3))));

        let x = mode(&b, &st(&[1]), 0);
        let y = mode(&b, &st(&[1, 1]), 1);
        let lhs = to_an(&bracket(&v, &x, &y), &span).unwrap();
        let (xs, ys) = (zero_mode_state(&x).unwrap(), zero_mode_state(&y).unwrap());
        let rhs = span.coset(&(&star_n(&v, &xs, &ys, 0) - &star_n(&v, &ys, &xs, 0))).unwrap();
        assert_eq!(lhs, rhs);
    }

    fn homomorphism_pairs(v: &Voa, n: u32, cap: u32) {
        let b = v.backend().clone();
        let span = OnSpan::build(v, n, 2 * cap + 2 * n + 2, 4).unwrap();
        for a in v.basis(cap) {
            for c in v.basis(cap) {
                let x = mode(&b, &a, a.weight() as i64 - 1);
                let y = mode(&b, &c, c.weight() as i64 - 1);
                let (av, cv) = (SparseVec::unit(a.clone()), SparseVec::unit(c.clone()));
                let lhs = to_an(&bracket(v, &x, &y), &span).unwrap();
                let rhs = span.coset(&(&star_n(v, &av, &cv, n) - &star_n(v, &cv, &av, n))).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn lie_homomorphism_into_zhu_algebras() {
        let v = Voa::heisenberg();
        for n in 0..2 {
            homomorphism_pairs(&v, n, 2);
        }
    }

    fn window_vectors<T: ModeTarget<Key = State>>(m: &T, basis: &[State]) -> Vec<SparseVec<State>> {
        let _ = m;
        basis.iter().cloned().map(SparseVec::unit).collect()
    }

    fn single_term() -> impl Strategy<Value = (Vec<u32>, i64)> {
        (prop::sample::select(vec![vec![], vec![1], vec![2], vec![1, 1], vec![3], vec![2, 1], vec![1, 1, 1]]), -3i64..4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn jacobi_acts_as_zero(x in single_term(), y in single_term(), z in single_term()) {
            let v = Voa::heisenberg();
            let b = v.backend().clone();
            let xs = mode(&b, &State::new(x.0).unwrap(), x.1);
            let ys = mode(&b, &State::new(y.0).unwrap(), y.1);
            let zs = mode(&b, &State::new(z.0).unwrap(), z.1);
            let j = &(&bracket(&v, &xs, &bracket(&v, &ys, &zs)) + &bracket(&v, &ys, &bracket(&v, &zs, &xs))) + &bracket(&v, &zs, &bracket(&v, &xs, &ys));
            let fock = FockSpace::highest_weight(Backend::Heisenberg, ratio(2, 3));
            for w in window_vectors(&fock, &fock.basis(3)) {
                prop_assert!(act_on(&fock, &j, &w).is_zero());
            }
            for w in window_vectors(v.space(), &v.basis(3)) {
                prop_assert!(act_on(v.space(), &j, &w).is_zero());
            }
        }

        #[test]
        fn bracket_acts_as_commutator(x in single_term(), y in single_term()) {
            let v = Voa::heisenberg();
            let b = v.backend().clone();
            let xs = mode(&b, &State::new(x.0.clone()).unwrap(), x.1);
            let ys = mode(&b, &State::new(y.0.clone()).unwrap(), y.1);
            let br = bracket(&v, &xs, &ys);
            let fock = FockSpace::highest_weight(Backend::Heisenberg, ratio(2, 3));
            for w in window_vectors(&fock, &fock.basis(3)) {
                let lhs = act_on(&fock, &br, &w);
                let rhs = &act_on(&fock, &xs, &act_on(&fock, &ys, &w)) - &act_on(&fock, &ys, &act_on(&fock, &xs, &w));
                prop_assert_eq!(lhs, rhs);
            }
            let expected = degree(&State::new(x.0.clone()).unwrap(), x.1) + degree(&State::new(y.0.clone()).unwrap(), y.1);
            for d in components(&br).keys() {
                prop_assert_eq!(*d, expected);
            }
        }
    }

    #[test]
    fn virasoro_bracket_matches_commutator() {
        let v = Voa::virasoro(ratio(1, 2));
        let b = v.backend().clone();
        let verma = FockSpace::highest_weight(b.clone(), ratio(1, 16));
        for a in v.basis(4) {
            for c in v.basis(4) {
                for (p, q) in [(0, 1), (2, -1), (-1, 3), (1, 1)] {
                    let x = mode(&b, &a, p);
                    let y = mode(&b, &c, q);
                    let br = bracket(&v, &x, &y);
                    for w in verma.basis(2) {
                        let w = SparseVec::unit(w);
                        let lhs = act_on(&verma, &br, &w);
                        let rhs = &act_on(&verma, &x, &act_on(&verma, &y, &w)) - &act_on(&verma, &y, &act_on(&verma, &x, &w));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}
