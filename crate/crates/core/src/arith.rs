//! Exact scalars and the integer combinatorics shared by every other module.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Coefficient field for everything in this crate.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"-p/q"` or a plain integer.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    match text.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(Rational::new(num, den))
        }
        None => {
            let num: BigInt = text.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(num))
        }
    }
}

/// Canonical `p/q` (or `p`) text form; the only way rationals leave the crate.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn binomial_int(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    // n (n-1) ... (n-k+1) / k! is an integer for every integer n.
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= BigInt::from(n - j);
        acc /= BigInt::from(j + 1);
    }
    acc
}

/// Generalized binomial coefficient C(n, k) for any integer `n`; zero when `k < 0`.
pub fn binomial(n: i64, k: i64) -> Rational {
    Rational::from_integer(binomial_int(n, k))
}

/// `(-1)^k` as a rational.
pub fn sign(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

pub fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

/// A weakly decreasing list of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidArgument("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn into_parts(self) -> Vec<u32> {
        self.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "[{}]", body.join(","))
    }
}

/// All partitions of `total` with every part at least `min_part`, in
/// lexicographically decreasing order.
pub fn partitions(total: u32, min_part: u32) -> Vec<Partition> {
    let min_part = min_part.max(1);
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill_partitions(total, total, min_part, &mut current, &mut out);
    out
}

fn fill_partitions(rest: u32, max_part: u32, min_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { parts: current.clone() });
        return;
    }
    let top = rest.min(max_part);
    for part in (min_part..=top).rev() {
        current.push(part);
        fill_partitions(rest - part, part, min_part, current, out);
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 2), rat(10));
        assert_eq!(binomial(-3, 2), rat(6));
        assert_eq!(binomial(4, -1), rat(0));
        assert_eq!(binomial(0, 0), rat(1));
        assert_eq!(binomial(3, 5), rat(0));
    }

    #[test]
    fn negative_upper_index_matches_sign_rule() {
        for p in 1..12i64 {
            for k in 0..12i64 {
                assert_eq!(binomial(-p, k), sign(k) * binomial(p + k - 1, k));
            }
        }
    }

    #[test]
    fn pascal_rule_on_integer_grid() {
        for l in -15..=15i64 {
            for k in 0..=15i64 {
                assert_eq!(binomial(l, k), binomial(l - 1, k) + binomial(l - 1, k - 1), "l={l} k={k}");
            }
        }
    }

    #[test]
    fn vandermonde() {
        for m in 0..=30i64 {
            for n in 0..=(30 - m) {
                for k in 0..=(m + n) {
                    let lhs: Rational = (0..=k).map(|j| binomial(m, j) * binomial(n, k - j)).sum();
                    assert_eq!(lhs, binomial(m + n, k));
                }
            }
        }
    }

    #[test]
    fn partition_examples() {
        let p4: Vec<Vec<u32>> = partitions(4, 1).into_iter().map(Partition::into_parts).collect();
        assert_eq!(p4, vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        assert_eq!(partitions(0, 1), vec![Partition::empty()]);
        let p42: Vec<Vec<u32>> = partitions(4, 2).into_iter().map(Partition::into_parts).collect();
        assert_eq!(p42, vec![vec![4], vec![2, 2]]);
    }

    /// Counts partitions with parts >= min by brute force over all compositions.
    fn brute_force_count(total: u32, min_part: u32) -> usize {
        fn go(rest: u32, max: u32, min: u32) -> usize {
            if rest == 0 {
                return 1;
            }
            (min..=rest.min(max)).map(|p| go(rest - p, p, min)).sum()
        }
        go(total, total, min_part)
    }

    #[test]
    fn partition_counts_match_recurrence() {
        // Euler's pentagonal recurrence as an independent oracle.
        let mut p = vec![1i64];
        for t in 1..=30i64 {
            let mut acc = 0i64;
            let mut k = 1i64;
            loop {
                let g1 = k * (3 * k - 1) / 2;
                if g1 > t {
                    break;
                }
                let s = if k % 2 == 1 { 1 } else { -1 };
                acc += s * p[(t - g1) as usize];
                let g2 = k * (3 * k + 1) / 2;
                if g2 <= t {
                    acc += s * p[(t - g2) as usize];
                }
                k += 1;
            }
            p.push(acc);
        }
        for t in 0..=30u32 {
            assert_eq!(partitions(t, 1).len() as i64, p[t as usize], "t={t}");
        }
        for t in 0..=12u32 {
            assert_eq!(partitions(t, 2).len(), brute_force_count(t, 2));
        }
    }

    #[test]
    fn partitions_are_strictly_decreasing_lexicographically() {
        let ps = partitions(9, 1);
        for w in ps.windows(2) {
            assert!(w[0].parts() > w[1].parts());
        }
    }

    #[test]
    fn rational_text_round_trip() {
        let q = parse_rational("-6/4").unwrap();
        assert_eq!(format_rational(&q), "-3/2");
        assert_eq!(format_rational(&parse_rational("7").unwrap()), "7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    proptest::proptest! {
        #[test]
        fn rational_text_is_canonical(n in -10_000i64..10_000, d in 1i64..10_000) {
            let q = ratio(n, d);
            let text = format_rational(&q);
            proptest::prop_assert_eq!(parse_rational(&text).unwrap(), q.clone());
            proptest::prop_assert_eq!(format_rational(&parse_rational(&format!("{}/{}", n * 3, d * 3)).unwrap()), text);
        }

        #[test]
        fn pascal_rule(l in -40i64..40, k in 0i64..20) {
            proptest::prop_assert_eq!(binomial(l, k), binomial(l - 1, k) + binomial(l - 1, k - 1));
        }
    }
}
