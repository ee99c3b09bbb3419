//! Graded modules, the subspaces `Omega_n(M)`, zero-mode operators and the
//! reassociation of products `o_i(u) o_j(v)`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{binomial, sign, Rational};
use crate::error::{Error, Result};
use crate::laurent::{ExpansionRegion, LaurentPoly};
use crate::linalg::{ExactRref, SparseRow};
use crate::report::{CheckRecord, Tally};
use crate::vector::SparseVec;
use crate::voa::{act, components, FockSpace, ModeTarget, State, StateVector, Voa};
use crate::zhu::{small_generators, star_n};

/// A `Z_+`-graded module with a basis adapted to the grading.
pub trait GradedModule: ModeTarget {
    fn degree_basis(&self, k: u32) -> Vec<Self::Key>;
    fn degree_of(&self, key: &Self::Key) -> u32;
    fn render_key(&self, key: &Self::Key) -> String;
    fn describe(&self) -> String;
}

impl GradedModule for FockSpace {
    fn degree_basis(&self, k: u32) -> Vec<State> {
        FockSpace::degree_basis(self, k)
    }

    fn degree_of(&self, key: &State) -> u32 {
        key.weight()
    }

    fn render_key(&self, key: &State) -> String {
        key.render(self.backend().letter(), self.ket())
    }

    fn describe(&self) -> String {
        format!("{} {}", self.backend().name(), self.ket())
    }
}

pub fn render_module_vector<M: GradedModule>(m: &M, v: &SparseVec<M::Key>) -> String {
    crate::voa::render_vector(v, |k| m.render_key(k))
}

/// `o_j(a) = a_{wt a - 1 - j}`, extended linearly over weight components.
pub fn o_j<T: ModeTarget>(t: &T, a: &StateVector, j: i64, w: &SparseVec<T::Key>) -> SparseVec<T::Key> {
    let mut out = SparseVec::zero();
    for (wt, comp) in components(a) {
        out.add_scaled(&act(t, &comp, wt as i64 - 1 - j, w), &Rational::one());
    }
    out
}

pub fn o<T: ModeTarget>(t: &T, a: &StateVector, w: &SparseVec<T::Key>) -> SparseVec<T::Key> {
    o_j(t, a, 0, w)
}

/// `Res_z Y(u,z) v (1+z)^{wt u + a} / z^b`, over the weight components of `u`.
pub fn res_kernel(voa: &Voa, u: &StateVector, v: &StateVector, a: i64, b: i64) -> StateVector {
    let mut out = SparseVec::zero();
    for (wt, comp) in components(u) {
        let top = wt as i64 + a;
        assert!(top >= 0, "negative power of (1+z)");
        for i in 0..=top {
            out.add_scaled(&voa.mode_apply(&comp, i - b, v), &binomial(top, i));
        }
    }
    out
}

/// Windowed `Omega_n(M)`: vectors of degree at most `depth` killed by every
/// `a(m)` of degree below `-n` with `a` a basis state of weight at most
/// `state_cap`.
#[derive(Clone, Debug)]
pub struct OmegaSubspace<K: Ord> {
    pub n: u32,
    pub depth: u32,
    pub state_cap: u32,
    pub pieces: Vec<Vec<SparseVec<K>>>,
}

impl<K: Ord + Clone> OmegaSubspace<K> {
    pub fn dims(&self) -> Vec<usize> {
        self.pieces.iter().map(|p| p.len()).collect()
    }

    pub fn vectors(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.pieces.iter().flatten()
    }
}

/// Kernel of a family of linear maps on the span of `basis`.
pub fn common_kernel<K: Ord + Clone>(
    basis: &[K],
    images: impl Fn(&K) -> Vec<SparseVec<K>>,
) -> Vec<SparseVec<K>> {
    let per_column: Vec<Vec<SparseVec<K>>> = basis.iter().map(images).collect();
    let mut rows: BTreeMap<(usize, K), SparseRow> = BTreeMap::new();
    for (col, imgs) in per_column.iter().enumerate() {
        for (cond, img) in imgs.iter().enumerate() {
            for (key, c) in img.iter() {
                rows.entry((cond, key.clone())).or_default().push((col, c.clone()));
            }
        }
    }
    let rows: Vec<SparseRow> = rows.into_values().collect();
    ExactRref::from_rows_direct(&rows, basis.len())
        .kernel_basis()
        .into_iter()
        .map(|v| SparseVec::from_terms(v.into_iter().map(|(c, x)| (basis[c].clone(), x))))
        .collect()
}

pub fn omega_n<M: GradedModule>(voa: &Voa, m: &M, n: u32, depth: u32, state_cap: u32) -> OmegaSubspace<M::Key> {
    let states: Vec<State> = voa.basis(state_cap).into_iter().filter(|s| !s.is_vacuum()).collect();
    let mut pieces = Vec::new();
    for d in 0..=depth {
        let basis = m.degree_basis(d);
        let piece = common_kernel(&basis, |b| {
            let mut imgs = Vec::new();
            for a in &states {
                for k in (n + 1)..=d {
                    let mode = a.weight() as i64 - 1 + k as i64;
                    imgs.push(crate::voa::vertex_mode(m, a, mode, b));
                }
            }
            imgs
        });
        pieces.push(piece);
    }
    OmegaSubspace { n, depth, state_cap, pieces }
}

/// Default number of extra weights of states used as annihilation conditions.
pub fn default_state_cap(voa: &Voa, depth: u32) -> u32 {
    depth + voa.backend().generator_weight()
}

fn tally<M: GradedModule>(name: &str, anchor: &str, m: &M, omega: &OmegaSubspace<M::Key>, cap: u32) -> Tally {
    Tally::new(name, anchor)
        .param("module", m.describe())
        .param("n", omega.n)
        .param("depth", omega.depth)
        .param("basis_cap", cap)
}

/// `Omega_n(M)` contains `M(0) + ... + M(n)`; for simple `M` it equals it.
pub fn omega_window_check<M: GradedModule>(m: &M, omega: &OmegaSubspace<M::Key>) -> CheckRecord {
    let mut t = tally("omega_window", "Omega_n(M) = M(0) + ... + M(n)", m, omega, 0);
    for (d, piece) in omega.pieces.iter().enumerate() {
        let full = m.degree_basis(d as u32).len();
        let expected = if d as u32 <= omega.n { full } else { 0 };
        t.check(piece.len() == expected, || format!("degree {d}: dim {} expected {expected}", piece.len()));
    }
    t.note(format!("dims {:?}", omega.dims()));
    t.finish()
}

/// Left side of the mode product identity for `0 <= k <= n`.
pub fn mode_product_lhs<T: ModeTarget>(
    voa: &Voa,
    t: &T,
    u: &StateVector,
    v: &StateVector,
    n: i64,
    k: i64,
    w: &SparseVec<T::Key>,
) -> SparseVec<T::Key> {
    let mut out = SparseVec::zero();
    for m in 0..=k {
        let c = sign(m) * binomial(2 * n + m - k, m);
        let r = res_kernel(voa, u, v, n, 2 * n + 1 - k + m);
        out.add_scaled(&o(t, &r, w), &c);
    }
    out
}

pub fn an_action_check<M: GradedModule>(voa: &Voa, m: &M, omega: &OmegaSubspace<M::Key>, cap: u32) -> Vec<CheckRecord> {
    let n = omega.n;
    let basis: Vec<StateVector> = voa.basis(cap).into_iter().map(SparseVec::unit).collect();
    let ws: Vec<&SparseVec<M::Key>> = omega.vectors().collect();

    let mut prod = tally("o_star_product", "o(u *_n v) = o(u) o(v) on Omega_n", m, omega, cap);
    let mut au = tally(
        "mode_product_identity",
        "sum_m (-1)^m C(2n+m-k,m) o(Res Y(u,z)v (1+z)^{wt u+n} z^{-2n-1+k-m}) = u_{wt u-n+k-1} v_{wt v+n-k-1}",
        m,
        omega,
        cap,
    );
    for u in &basis {
        for v in &basis {
            let uv = star_n(voa, u, v, n);
            for w in &ws {
                let lhs = o(m, &uv, w);
                let rhs = o(m, u, &o(m, v, w));
                prod.check(lhs == rhs, || format!("u={} v={} w={}", voa.render(u), voa.render(v), render_module_vector(m, w)));
                let (wu, wv) = (components(u)[0].0 as i64, components(v)[0].0 as i64);
                for k in 0..=n as i64 {
                    let lhs = mode_product_lhs(voa, m, u, v, n as i64, k, w);
                    let inner = act(m, v, wv + n as i64 - k - 1, w);
                    let rhs = act(m, u, wu - n as i64 + k - 1, &inner);
                    au.check(lhs == rhs, || {
                        format!("k={k} u={} v={} w={}", voa.render(u), voa.render(v), render_module_vector(m, w))
                    });
                }
            }
        }
    }

    let mut kill = tally("o_kills_o_n", "o(O_n(V)) = 0 on Omega_n", m, omega, cap);
    for g in small_generators(voa, n, cap) {
        for w in &ws {
            kill.check(o(m, &g, w).is_zero(), || format!("g={} w={}", voa.render(&g), render_module_vector(m, w)));
        }
    }
    vec![prod.finish(), au.finish(), kill.finish()]
}

/// `o_j(a)` maps `M(d)` into `M(d + j)`.
pub fn grading_check<M: GradedModule>(voa: &Voa, m: &M, depth: u32, cap: u32) -> CheckRecord {
    let mut t = Tally::new("o_j_grading", "o_j shifts degree by j").param("module", m.describe()).param("depth", depth);
    for a in voa.basis(cap) {
        let av = SparseVec::unit(a);
        for d in 0..=depth {
            for b in m.degree_basis(d) {
                for j in -(d as i64)..=2 {
                    let img = o_j(m, &av, j, &SparseVec::unit(b.clone()));
                    let ok = img.keys().all(|k| m.degree_of(k) as i64 == d as i64 + j);
                    t.check(ok, || format!("a={} j={j} on {}", voa.render(&av), m.render_key(&b)));
                }
            }
        }
    }
    t.finish()
}

/// `o(omega)` is the scalar `h_0 + p` on `M(p)`; distinct degrees give distinct
/// eigenvalues.
pub fn eigenvalue_check<M: GradedModule>(voa: &Voa, m: &M, depth: u32) -> CheckRecord {
    let mut t = Tally::new("omega_eigenvalues", "o(omega) = h + p on M(p), distinct for distinct p")
        .param("module", m.describe())
        .param("depth", depth);
    let omega = voa.conformal_vector();
    let mut values: Vec<Rational> = Vec::new();
    for p in 0..=depth {
        let mut lambda: Option<Rational> = None;
        for b in m.degree_basis(p) {
            let bv = SparseVec::unit(b.clone());
            let img = o(m, &omega, &bv);
            let c = img.coeff(&b);
            let scalar = img == bv.scaled(&c);
            let same = lambda.as_ref().is_none_or(|l| *l == c);
            t.check(scalar && same, || format!("o(omega) not scalar on degree {p} at {}", m.render_key(&b)));
            lambda.get_or_insert(c);
        }
        if let Some(l) = lambda {
            values.push(l);
        }
    }
    for (p, lp) in values.iter().enumerate() {
        for (q, lq) in values.iter().enumerate().skip(p + 1) {
            t.check(lq - lp == Rational::from_integer((q - p).into()), || format!("degrees {p},{q}: {lp} vs {lq}"));
        }
    }
    t.note(format!("eigenvalues {}", values.iter().map(crate::arith::format_rational).collect::<Vec<_>>().join(", ")));
    t.finish()
}

/// Coefficients `c_{a,b}` with `o_i(u) o_j(v) = o_{i+j}(sum c_{a,b} Res Y(u,z)v (1+z)^{wt u+a} z^{-b})`
/// on `Omega_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reassociation {
    pub n: i64,
    pub i: i64,
    pub j: i64,
    #[serde(serialize_with = "table_text")]
    pub coeffs: BTreeMap<(i64, i64), Rational>,
}

fn table_text<S: serde::Serializer>(t: &BTreeMap<(i64, i64), Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let m: BTreeMap<String, String> =
        t.iter().map(|((a, b), c)| (format!("{a},{b}"), crate::arith::format_rational(c))).collect();
    serde::Serialize::serialize(&m, s)
}

/// Solves for `w^{i,j}` from the Borcherds identity with `r = wt u + n`,
/// `s = -1-i-n`, `t = wt v - 1 - j`. On `Omega_n` it reads
/// `o_{i+j}(Res Y(u,z)v (1+z)^{wt u+n} z^s) = sum_l c_l o_{i+l}(u) o_{j-l}(v)`
/// with `c_l` the coefficient of `z1^{s-l} z2^l` in `(z1 - z2)^s`, and the
/// sum stops once `o_{j-l}(v)` kills `Omega_n`.
pub fn reassociate(i: i64, j: i64, n: i64) -> Result<Reassociation> {
    if n < 0 || i < j || i + j < 0 || j < -n {
        return Err(Error::InvalidArgument(format!("reassociate needs i >= j, i + j >= 0, j >= -n, n >= 0 (got i={i}, j={j}, n={n})")));
    }
    let mut memo: HashMap<(i64, i64), BTreeMap<i64, Rational>> = HashMap::new();
    let solved = solve_pair(i, j, n, &mut memo)?;
    let coeffs = solved.into_iter().filter(|(_, c)| !c.is_zero()).map(|(ip, c)| ((n, 1 + ip + n), c)).collect();
    Ok(Reassociation { n, i, j, coeffs })
}

/// `o_{i}(u) o_{j}(v)` as a combination of the kernels indexed by `i'`.
fn solve_pair(
    i: i64,
    j: i64,
    n: i64,
    memo: &mut HashMap<(i64, i64), BTreeMap<i64, Rational>>,
) -> Result<BTreeMap<i64, Rational>> {
    if j < -n {
        return Ok(BTreeMap::new());
    }
    if let Some(hit) = memo.get(&(i, j)) {
        return Ok(hit.clone());
    }
    let s = -1 - i - n;
    let vars = ["z1", "z2"];
    let base = &LaurentPoly::var(&vars, "z1")? - &LaurentPoly::var(&vars, "z2")?;
    let top = (n + j) as u32;
    let expansion = LaurentPoly::binomial_power(&base, s, &ExpansionRegion::small("z2", top))?;
    let mut out: BTreeMap<i64, Rational> = BTreeMap::from([(i, Rational::one())]);
    for l in 1..=(n + j) {
        let c = expansion.coefficient(&[s - l, l]);
        if c.is_zero() {
            continue;
        }
        for (ip, x) in solve_pair(i + l, j - l, n, memo)? {
            *out.entry(ip).or_insert_with(Rational::zero) -= &c * x;
        }
    }
    out.retain(|_, c| !c.is_zero());
    memo.insert((i, j), out.clone());
    Ok(out)
}

/// The closed form for `j = -i`.
pub fn reassociate_closed_form(i: i64, n: i64) -> BTreeMap<(i64, i64), Rational> {
    (0..=n - i).map(|m| ((n, n + 1 + i + m), sign(m) * binomial(n + m + i, m))).collect()
}

pub fn reassociation_element(voa: &Voa, u: &StateVector, v: &StateVector, r: &Reassociation) -> StateVector {
    let mut out = SparseVec::zero();
    for ((a, b), c) in &r.coeffs {
        out.add_scaled(&res_kernel(voa, u, v, *a, *b), c);
    }
    out
}

pub fn reassociate_table_check(max_n: i64) -> Result<CheckRecord> {
    let mut t = Tally::new("reassociate_closed_form", "w^{i,-i} = sum_m (-1)^m C(n+m+i,m) Res Y(u,z)v (1+z)^{wt u+n} z^{-n-1-i-m}")
        .param("max_n", max_n);
    for n in 0..=max_n {
        for i in 0..=n {
            let r = reassociate(i, -i, n)?;
            let expected = reassociate_closed_form(i, n);
            t.check(r.coeffs == expected, || format!("n={n} i={i}: {:?}", r.coeffs));
        }
        let zero = reassociate(0, 0, n)?;
        let star: BTreeMap<(i64, i64), Rational> =
            (0..=n).map(|m| ((n, m + n + 1), sign(m) * binomial(m + n, n))).collect();
        t.check(zero.coeffs == star, || format!("n={n}: (0,0) is not the *_n kernel"));
    }
    Ok(t.finish())
}

/// `o_i(u) o_j(v) w = o_{i+j}(w^{i,j}) w` for every window vector `w`.
pub fn reassociate_behavior_check<M: GradedModule>(
    voa: &Voa,
    m: &M,
    omega: &OmegaSubspace<M::Key>,
    cap: u32,
    i_cap: i64,
) -> Result<CheckRecord> {
    let n = omega.n as i64;
    let mut t = tally("reassociate_behavior", "o_i(u) o_j(v) = o_{i+j}(w^{i,j}) on Omega_n", m, omega, cap)
        .param("i_cap", i_cap);
    let basis: Vec<StateVector> = voa.basis(cap).into_iter().map(SparseVec::unit).collect();
    let ws: Vec<&SparseVec<M::Key>> = omega.vectors().collect();
    for i in 0..=i_cap {
        for j in (-n).max(-i)..=i {
            let r = reassociate(i, j, n)?;
            for u in &basis {
                for v in &basis {
                    let wuv = reassociation_element(voa, u, v, &r);
                    for w in &ws {
                        let lhs = o_j(m, u, i, &o_j(m, v, j, w));
                        let rhs = o_j(m, &wuv, i + j, w);
                        t.check(lhs == rhs, || {
                            format!("i={i} j={j} u={} v={} w={}", voa.render(u), voa.render(v), render_module_vector(m, w))
                        });
                    }
                }
            }
        }
    }
    Ok(t.finish())
}
