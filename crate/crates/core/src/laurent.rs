//! Finitely supported multivariate Laurent polynomials over the rationals,
//! with residues and regional binomial expansions.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Pow, Zero};

use crate::arith::{binomial, format_rational, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<i64>, Rational>,
}

/// Where an infinite binomial expansion converges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegionTag {
    /// Only nonnegative exponents are allowed.
    Finite,
    /// Expand in nonnegative powers of the named variable.
    PosPowersOf(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionRegion {
    pub tag: RegionTag,
    pub order_cap: u32,
}

impl ExpansionRegion {
    pub fn finite() -> Self {
        ExpansionRegion { tag: RegionTag::Finite, order_cap: 0 }
    }

    pub fn small(var: &str, order_cap: u32) -> Self {
        ExpansionRegion { tag: RegionTag::PosPowersOf(var.to_string()), order_cap }
    }
}

impl LaurentPoly {
    pub fn zero(vars: &[&str]) -> Self {
        LaurentPoly { vars: vars.iter().map(|v| v.to_string()).collect(), terms: BTreeMap::new() }
    }

    fn zero_like(&self) -> Self {
        LaurentPoly { vars: self.vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[&str], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn one(vars: &[&str]) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn monomial(vars: &[&str], exponents: &[i64], c: Rational) -> Self {
        assert_eq!(vars.len(), exponents.len(), "exponent vector length");
        let mut p = Self::zero(vars);
        p.add_term(exponents.to_vec(), c);
        p
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(vars: &[&str], name: &str) -> Result<Self> {
        let idx = vars.iter().position(|v| *v == name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        Ok(Self::monomial(vars, &e, Rational::one()))
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn var_index(&self, name: &str) -> Result<usize> {
        self.vars.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    fn add_term(&mut self, exps: Vec<i64>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VariableMismatch(self.vars.clone(), other.vars.clone()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-Rational::one()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.zero_like();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = self.zero_like();
        if c.is_zero() {
            return out;
        }
        for (e, x) in &self.terms {
            out.terms.insert(e.clone(), x * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = LaurentPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        acc.add_term(vec![0; self.vars.len()], Rational::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficient at `exponents`, zero when absent.
    pub fn coefficient(&self, exponents: &[i64]) -> Rational {
        assert_eq!(exponents.len(), self.vars.len(), "exponent vector length");
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `var^{-1}`, as a polynomial in the remaining variables.
    pub fn residue(&self, var: &str) -> Result<Self> {
        self.coefficient_in(var, -1)
    }

    /// Coefficient of `var^power`, as a polynomial in the remaining variables.
    pub fn coefficient_in(&self, var: &str, power: i64) -> Result<Self> {
        let idx = self.var_index(var)?;
        let vars: Vec<String> = self.vars.iter().enumerate().filter(|(i, _)| *i != idx).map(|(_, v)| v.clone()).collect();
        let mut out = LaurentPoly { vars, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            if e[idx] == power {
                let rest: Vec<i64> = e.iter().enumerate().filter(|(i, _)| *i != idx).map(|(_, x)| *x).collect();
                out.add_term(rest, c.clone());
            }
        }
        Ok(out)
    }

    pub fn derivative(&self, var: &str) -> Result<Self> {
        let idx = self.var_index(var)?;
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            if e[idx] != 0 {
                let mut e2 = e.clone();
                e2[idx] -= 1;
                out.add_term(e2, c * Rational::from_integer(e[idx].into()));
            }
        }
        Ok(out)
    }

    /// Multiply by a monomial `var^power`.
    pub fn shift(&self, var: &str, power: i64) -> Result<Self> {
        let idx = self.var_index(var)?;
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[idx] += power;
            out.terms.insert(e2, c.clone());
        }
        Ok(out)
    }

    /// Minimum and maximum exponent of `var` among stored terms.
    pub fn degree_range(&self, var: &str) -> Result<Option<(i64, i64)>> {
        let idx = self.var_index(var)?;
        let mut it = self.terms.keys().map(|e| e[idx]);
        let Some(first) = it.next() else { return Ok(None) };
        Ok(Some(it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x)))))
    }

    fn single_term(&self) -> Option<(&Vec<i64>, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Integer power of a monomial, negative powers allowed.
    fn monomial_power(&self, k: i64) -> Self {
        let (e, c) = self.single_term().expect("monomial_power on a non-monomial");
        let mut out = self.zero_like();
        let coeff = if k >= 0 { Pow::pow(c, k as u32) } else { Pow::pow(c.recip(), (-k) as u32) };
        out.add_term(e.iter().map(|x| x * k).collect(), coeff);
        out
    }

    /// Expansion of `base^exponent` where `base` has exactly two terms.
    ///
    /// Nonnegative exponents give the exact finite expansion in every region.
    /// Negative exponents give `sum_{i=0}^{cap} C(exponent, i) L^{exponent-i} S^i`,
    /// where `S` is the term carrying the region's small variable.
    pub fn binomial_power(base: &Self, exponent: i64, region: &ExpansionRegion) -> Result<Self> {
        if base.terms.len() != 2 {
            return Err(Error::InvalidArgument(format!("binomial base must have two terms, found {}", base.terms.len())));
        }
        let mut it = base.terms.iter();
        let (e1, c1) = it.next().unwrap();
        let (e2, c2) = it.next().unwrap();
        let t1 = LaurentPoly { vars: base.vars.clone(), terms: BTreeMap::from([(e1.clone(), c1.clone())]) };
        let t2 = LaurentPoly { vars: base.vars.clone(), terms: BTreeMap::from([(e2.clone(), c2.clone())]) };
        let (large, small, cap) = match &region.tag {
            RegionTag::Finite => {
                if exponent < 0 {
                    return Err(Error::NegativeExponentFinite(exponent));
                }
                (t1, t2, exponent as u32)
            }
            RegionTag::PosPowersOf(v) => {
                let idx = base.var_index(v)?;
                let (large, small) = if e1[idx] > e2[idx] { (t2, t1) } else { (t1, t2) };
                if exponent >= 0 {
                    (large, small, exponent as u32)
                } else {
                    (large, small, region.order_cap)
                }
            }
        };
        let mut out = base.zero_like();
        for i in 0..=cap as i64 {
            let c = binomial(exponent, i);
            if c.is_zero() {
                continue;
            }
            let term = &large.monomial_power(exponent - i) * &small.monomial_power(i);
            out = &out + &term.scale(&c);
        }
        Ok(out)
    }
}

impl fmt::Display for LaurentPoly {
    /// Canonical `c * x^a y^b` form, terms in lexicographic exponent order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", format_rational(c))?;
            let factors: Vec<String> = self
                .vars
                .iter()
                .zip(e)
                .filter(|(_, x)| **x != 0)
                .map(|(v, x)| format!("{v}^{x}"))
                .collect();
            if !factors.is_empty() {
                write!(f, " * {}", factors.join(" "))?;
            }
        }
        Ok(())
    }
}

// Operator forms panic on variable-list mismatch; the `try_*` forms report it.

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("variable mismatch")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_sub(rhs).expect("variable mismatch")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_mul(rhs).expect("variable mismatch")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-Rational::one())
    }
}

/// One-variable helper: `(1+z)^a / z^b` in the variable `z`.
pub fn one_plus_z_over_z(a: u32, b: i64) -> LaurentPoly {
    let z = LaurentPoly::var(&["z"], "z").unwrap();
    let base = &LaurentPoly::one(&["z"]) + &z;
    base.pow(a).shift("z", -b).unwrap()
}
