//! Exact checks of the binomial and Laurent identities behind the Zhu algebra
//! constructions.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{binomial, rat, sign, Rational};
use crate::laurent::{one_plus_z_over_z, LaurentPoly};
use crate::report::{CheckRecord, Tally};

const Z: &[&str] = &["z"];
const WZ: &[&str] = &["w", "z"];

/// One instance of an identity: `computed` must equal `expected`.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCase {
    pub name: String,
    pub parameters: BTreeMap<String, i64>,
    #[serde(serialize_with = "as_text")]
    pub computed: LaurentPoly,
    #[serde(serialize_with = "as_text")]
    pub expected: LaurentPoly,
}

fn as_text<S: serde::Serializer>(p: &LaurentPoly, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(p)
}

impl IdentityCase {
    fn new(name: &str, params: &[(&str, i64)], computed: LaurentPoly, expected: LaurentPoly) -> Self {
        IdentityCase {
            name: name.into(),
            parameters: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            computed,
            expected,
        }
    }

    pub fn passed(&self) -> bool {
        self.computed == self.expected
    }
}

/// `c (1+z)^a / z^b`.
fn term(c: Rational, a: i64, b: i64) -> LaurentPoly {
    assert!(a >= 0);
    one_plus_z_over_z(a as u32, b).scale(&c)
}

fn sum(terms: impl IntoIterator<Item = LaurentPoly>, vars: &[&str]) -> LaurentPoly {
    terms.into_iter().fold(LaurentPoly::zero(vars), |acc, t| &acc + &t)
}

fn constant(c: Rational) -> LaurentPoly {
    LaurentPoly::constant(Z, c)
}

fn one() -> LaurentPoly {
    LaurentPoly::one(Z)
}

/// `A_n(z)` from its defining double sum.
pub fn a_poly(n: i64) -> LaurentPoly {
    let first = (0..=n).flat_map(|k| {
        (0..=n - k).map(move |m| term(sign(m) * binomial(m + n + k, m), n, m + n + k))
    });
    let second = (1..=n).flat_map(|k| {
        (0..=n - k).map(move |m| term(binomial(m + n + k, m) * sign(n + k), m + k - 1, m + n + k))
    });
    &sum(first, Z) + &sum(second, Z)
}

/// `A_n(z)` after summing over `m` by the alternating binomial sum.
pub fn a_poly_regrouped(n: i64) -> LaurentPoly {
    let first = (0..=n).flat_map(|k| (0..=k).map(move |m| term(sign(m) * binomial(n + k, m), n, n + k)));
    let second =
        (1..=n).flat_map(|k| (0..k).map(move |m| term(binomial(n + k, m) * sign(n + k + m), k - 1, n + k)));
    &sum(first, Z) + &sum(second, Z)
}

pub fn b_poly(n: i64) -> LaurentPoly {
    sum((0..=n).map(|k| term(sign(k) * binomial(n + k - 1, k), n, n + k)), Z)
}

pub fn c_poly(n: i64) -> LaurentPoly {
    sum((1..=n).map(|k| term(binomial(n + k - 1, k - 1), k - 1, n + k)), Z)
}

pub fn d_poly(n: i64) -> LaurentPoly {
    sum((0..=n).map(|m| term(binomial(m + n, n) * sign(m), n + 1, n + m + 1)), Z)
}

/// `sum_m C(m+n, n) (1+z)^m / z^{n+m+1}`.
pub fn e_poly(n: i64) -> LaurentPoly {
    sum((0..=n).map(|m| term(binomial(m + n, n), m, n + m + 1)), Z)
}

pub fn f_poly(n: i64) -> LaurentPoly {
    sum(
        (0..=n).map(|m| {
            let c = binomial(m + n, n);
            &term(&c * sign(m), n + 1, n + m + 1) - &term(c * sign(n), m, n + m + 1)
        }),
        Z,
    )
}

/// `sum_m (-1)^m C(m+n, n) z^{-m} (S_m(w, z) - 1)` with `S_m` the truncated
/// double sum; `positive` selects the form with `C(m+n+i, i)` in place of
/// `(-1)^i C(-m-n-1, i)`.
pub fn a_two_var(n: i64, positive: bool) -> LaurentPoly {
    let mut out = LaurentPoly::zero(WZ);
    for m in 0..=n {
        let outer = sign(m) * binomial(m + n, n);
        for i in 0..=n - m {
            let ci = if positive { binomial(m + n + i, i) } else { binomial(-m - n - 1, i) * sign(i) };
            for j in 0..=m {
                let c = &outer * &ci * binomial(m, j);
                out = &out + &LaurentPoly::monomial(WZ, &[i + j, -(i + m)], c);
            }
        }
        out = &out - &LaurentPoly::monomial(WZ, &[0, -m], outer);
    }
    out
}

/// `c_n(p, q) = sum_m (-1)^m C(m+n, n) C(n+p, n+m) C(m, q)`.
pub fn c_coeff(n: i64, p: i64, q: i64) -> Rational {
    (0..=p).map(|m| sign(m) * binomial(m + n, n) * binomial(n + p, n + m) * binomial(m, q)).sum()
}

pub fn check_ap1(n: i64) -> Vec<IdentityCase> {
    let p = [("n", n)];
    let mut out = vec![
        IdentityCase::new("A_n = 1", &p, a_poly(n), one()),
        IdentityCase::new("A_n regrouped = 1", &p, a_poly_regrouped(n), one()),
        IdentityCase::new("B_n - (-1)^n C_n = 1", &p, &b_poly(n) - &c_poly(n).scale(&sign(n)), one()),
    ];
    if n >= 1 {
        let b_step = sum(
            [
                b_poly(n - 1),
                term(sign(n - 1) * binomial(2 * n - 2, n - 1), n - 1, 2 * n - 1),
                term(sign(n) * binomial(2 * n - 1, n), n, 2 * n),
            ],
            Z,
        );
        out.push(IdentityCase::new("B_n recursion", &p, b_poly(n), b_step));
        let c_step = sum(
            [
                c_poly(n - 1).scale(&sign(n)),
                term(sign(n) * binomial(2 * n - 2, n - 1), n - 1, 2 * n - 1),
                term(sign(n - 1) * binomial(2 * n - 1, n - 1), n, 2 * n),
            ],
            Z,
        );
        out.push(IdentityCase::new("C_n recursion", &p, c_poly(n).scale(&sign(n + 1)), c_step));
    }
    out
}

pub fn check_ap2(n: i64) -> Vec<IdentityCase> {
    let p = [("n", n)];
    let mid = binomial(2 * n, n);
    vec![
        IdentityCase::new("F_n = 1", &p, f_poly(n), one()),
        IdentityCase::new("D_n + (-1)^{n+1} E_n = 1", &p, &d_poly(n) + &e_poly(n).scale(&sign(n + 1)), one()),
        IdentityCase::new(
            "D_n via B_{n+1}",
            &p,
            d_poly(n),
            &b_poly(n + 1) + &term(sign(n) * binomial(2 * n + 1, n), n + 1, 2 * n + 2),
        ),
        IdentityCase::new("D_n via B_n", &p, d_poly(n), &b_poly(n) + &term(sign(n) * &mid, n, 2 * n + 1)),
        IdentityCase::new("E_n via C_n", &p, e_poly(n), &c_poly(n) + &term(mid, n, 2 * n + 1)),
    ]
}

pub fn check_ap3(n: i64) -> Vec<IdentityCase> {
    let p = [("n", n)];
    let zero = LaurentPoly::zero(WZ);
    vec![
        IdentityCase::new("a_n(w,z) = 0", &p, a_two_var(n, false), zero.clone()),
        IdentityCase::new("a_n(w,z) positive form = 0", &p, a_two_var(n, true), zero),
    ]
}

/// Recursion `c_n(p,q) = c_{n-1}(p,q) - c_n(p-1,q-1)` and, when `q < p <= n`,
/// vanishing of `c_n(p,q)`.
pub fn check_c(p: i64, q: i64, n: i64) -> Vec<IdentityCase> {
    let params = [("n", n), ("p", p), ("q", q)];
    let mut out = Vec::new();
    if n >= 1 && p >= 1 {
        let rhs = c_coeff(n - 1, p, q) - if q >= 1 { c_coeff(n, p - 1, q - 1) } else { Rational::zero() };
        out.push(IdentityCase::new("c_n recursion", &params, constant(c_coeff(n, p, q)), constant(rhs)));
    }
    if q < p && p <= n {
        out.push(IdentityCase::new("c_n(p,q) = 0", &params, constant(c_coeff(n, p, q)), constant(Rational::zero())));
    }
    out
}

/// Identities used inside the proofs: the weight-shift kernel, the binomial
/// collapse, the telescoping between consecutive levels and the key identity
/// in both its reduced and weight-dependent forms.
pub fn check_proof_identities(n: i64, wt_cap: i64) -> Vec<IdentityCase> {
    let p = [("n", n)];
    let mut out = Vec::new();
    let z = LaurentPoly::var(Z, "z").unwrap();

    let kernel = sum(
        (0..=n).map(|m| {
            let c = binomial(m + n, n) * sign(m);
            let lin = &z.scale(&rat(m)) + &constant(rat(n + m + 1));
            &lin * &term(c, 0, n + m + 2)
        }),
        Z,
    );
    let split = sum(
        (0..=n).flat_map(|m| {
            [
                term(binomial(m + n, n) * sign(m) * rat(m), 0, n + m + 1),
                term(binomial(m + n + 1, n) * sign(m) * rat(m + 1), 0, n + m + 2),
            ]
        }),
        Z,
    );
    let target = term(sign(n) * binomial(2 * n, n) * rat(2 * n + 1), 0, 2 * n + 2);
    out.push(IdentityCase::new("weight shift kernel", &p, kernel.clone(), target));
    out.push(IdentityCase::new("weight shift kernel split", &p, kernel, split));

    for k in 1..=n {
        for i in 1..=k {
            let s: Rational =
                (0..=i).map(|m| binomial(2 * n + m - k, m) * binomial(-m - 2 * n - 1 + k, i - m)).sum();
            out.push(IdentityCase::new(
                "binomial collapse",
                &[("n", n), ("k", k), ("i", i)],
                constant(s),
                constant(Rational::zero()),
            ));
        }
    }

    if n >= 1 {
        for m in 1..n {
            let lhs = sign(m) * binomial(m + n, n) + sign(m + 1) * binomial(m + n - 1, n);
            out.push(IdentityCase::new(
                "telescoping",
                &[("n", n), ("m", m)],
                constant(lhs),
                constant(sign(m) * binomial(m + n - 1, n - 1)),
            ));
        }
        // Kernels of *_n and *_{n-1} with (1+z)^{wt u + n - 1} factored out
        // differ only in poles of order at least 2n.
        let upper = sum((0..=n).map(|m| term(binomial(m + n, n) * sign(m), 1, n + m + 1)), Z);
        let lower = sum((0..n).map(|m| term(binomial(m + n - 1, n - 1) * sign(m), 0, n + m)), Z);
        let diff = &upper - &lower;
        let low: LaurentPoly = sum(
            diff.terms().filter(|(e, _)| e[0] > -2 * n).map(|(e, c)| LaurentPoly::monomial(Z, e, c.clone())),
            Z,
        );
        out.push(IdentityCase::new("level kernels agree below pole order 2n", &p, low, LaurentPoly::zero(Z)));
    }

    out.push(IdentityCase::new("key identity reduced", &p, a_poly(n), one()));
    for wt in 1..=wt_cap {
        let params = [("n", n), ("wt", wt)];
        let first = (0..=n).flat_map(|k| {
            (0..=n - k).map(move |m| term(sign(m) * binomial(m + n + k, m), wt + n, m + n + 1 + k))
        });
        let second = (1..=n).flat_map(|k| {
            (0..=n - k).map(move |m| term(binomial(m + n + k, m) * sign(n + k), wt + m + k - 1, 1 + m + n + k))
        });
        let third = (1..=n).map(|k| term(Rational::one(), wt - 1 + k, 0));
        let lhs = &(&sum(first, Z) + &sum(second, Z)) + &sum(third, Z);
        out.push(IdentityCase::new("key identity", &params, lhs.clone(), term(Rational::one(), wt + n, 1)));
        // Dividing by (1+z)^wt / z leaves the reduced identity plus a geometric sum.
        let reduced = &a_poly(n) + &sum((1..=n).map(|k| term(Rational::one(), k - 1, -1)), Z);
        let scaled = &reduced * &term(Rational::one(), wt, 1);
        out.push(IdentityCase::new("key identity from reduced form", &params, lhs, scaled));
    }
    out
}

/// Default ranges for the full suite.
#[derive(Clone, Copy, Debug, Serialize, serde::Deserialize, PartialEq, Eq)]
pub struct IdentityRanges {
    pub max_n: i64,
    pub max_n_two_var: i64,
    pub max_wt: i64,
}

impl Default for IdentityRanges {
    fn default() -> Self {
        IdentityRanges { max_n: 8, max_n_two_var: 6, max_wt: 4 }
    }
}

fn record(name: &str, anchor: &str, max_n: i64, cases: Vec<IdentityCase>) -> CheckRecord {
    let mut t = Tally::new(name, anchor).param("max_n", max_n);
    for c in &cases {
        t.check(c.passed(), || format!("{} {:?}: {} != {}", c.name, c.parameters, c.computed, c.expected));
    }
    t.finish()
}

pub fn identity_suite(r: &IdentityRanges) -> Vec<CheckRecord> {
    let ns = 0..=r.max_n;
    let mut c_cases = Vec::new();
    for n in ns.clone() {
        for p in 0..=n {
            for q in 0..=p {
                c_cases.extend(check_c(p, q, n));
            }
        }
    }
    vec![
        record("A_n", "A_n(z) = 1", r.max_n, ns.clone().flat_map(check_ap1).collect()),
        record("F_n", "F_n(z) = 1", r.max_n, ns.clone().flat_map(check_ap2).collect()),
        record("a_n", "a_n(w,z) = 0", r.max_n_two_var, (0..=r.max_n_two_var).flat_map(check_ap3).collect()),
        record("c_n", "c_n(p,q) = c_{n-1}(p,q) - c_n(p-1,q-1), zero for q < p <= n", r.max_n, c_cases),
        record(
            "proof_identities",
            "kernel, collapse, telescoping and key identities",
            r.max_n,
            ns.flat_map(|n| check_proof_identities(n, r.max_wt)).collect(),
        ),
    ]
}
