//! Exact arithmetic in the group ring Z[Z^d] and the power-series image under
//! γ_i ↦ 1 + T_i, the valency/voltage matrices of a tower, their determinant,
//! and the (μ, λ) invariants of the resulting characteristic element.
//!
//! Everything here is exact: voltages are integer vectors, so determinants are
//! Laurent polynomials and no p-adic or T-adic truncation enters.

use crate::tower::{canonical_rank1_generator, TowerSpec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CharError {
    #[error("dimension mismatch between Laurent elements")]
    DimensionMismatch,
    #[error("matrix is not square")]
    NonSquare,
    #[error("determinant of D - B vanishes: Picard module is not torsion")]
    NonTorsion,
    #[error("the zero element has no (mu, lambda)")]
    ZeroElement,
    #[error("characteristic element is not divisible by T (d = 1)")]
    NotDivisibleByT,
}

/// Element of Z[Z^d]: finite integer combination of monomials γ^a, a ∈ Z^d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentElement {
    d: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentElement {
    pub fn zero(d: usize) -> Self {
        LaurentElement { d, terms: BTreeMap::new() }
    }

    pub fn one(d: usize) -> Self {
        Self::constant(d, BigInt::one())
    }

    pub fn constant(d: usize, c: BigInt) -> Self {
        Self::monomial(d, &vec![0; d], c)
    }

    pub fn monomial(d: usize, exps: &[i64], c: BigInt) -> Self {
        assert_eq!(exps.len(), d);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps.to_vec(), c);
        }
        LaurentElement { d, terms }
    }

    /// γ^σ − 1 for a group element σ.
    pub fn gamma_minus_one(d: usize, sigma: &[i64]) -> Self {
        Self::monomial(d, sigma, BigInt::one()).sub(&Self::one(d))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.d, rhs.d);
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let entry = terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        LaurentElement { d: self.d, terms }
    }

    pub fn neg(&self) -> Self {
        LaurentElement {
            d: self.d,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.d, rhs.d);
        let mut terms: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = terms.entry(e).or_insert_with(BigInt::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        LaurentElement { d: self.d, terms }
    }

    /// Evaluation at γ_i = 1 (the augmentation map).
    pub fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Per-variable minimum exponent over the support; None when zero.
    fn min_exponents(&self) -> Option<Vec<i64>> {
        if self.terms.is_empty() {
            return None;
        }
        let mut mins = vec![i64::MAX; self.d];
        for e in self.terms.keys() {
            for i in 0..self.d {
                mins[i] = mins[i].min(e[i]);
            }
        }
        Some(mins)
    }

    /// Exact division in Z[Z^d]; None when rhs does not divide self.
    pub fn div_exact(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.d, rhs.d);
        if self.is_zero() {
            return Some(Self::zero(self.d));
        }
        if rhs.is_zero() {
            return None;
        }
        let min_a = self.min_exponents().unwrap();
        let min_b = rhs.min_exponents().unwrap();
        // Shift both to ordinary polynomials; per-variable valuations are
        // additive over products, so the quotient is a polynomial too.
        let mut rem: BTreeMap<Vec<i64>, BigInt> = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(&min_a).map(|(x, m)| x - m).collect(), c.clone()))
            .collect();
        let div: BTreeMap<Vec<i64>, BigInt> = rhs
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(&min_b).map(|(x, m)| x - m).collect(), c.clone()))
            .collect();
        let (lead_e, lead_c) = div.iter().next_back().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut quot: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
        while let Some((re, rc)) = rem.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let qe: Vec<i64> = re.iter().zip(&lead_e).map(|(x, y)| x - y).collect();
            if qe.iter().any(|&x| x < 0) {
                return None;
            }
            let (qc, r) = num_integer::Integer::div_rem(&rc, &lead_c);
            if !r.is_zero() {
                return None;
            }
            quot.insert(qe.clone(), qc.clone());
            for (de, dc) in &div {
                let te: Vec<i64> = de.iter().zip(&qe).map(|(x, y)| x + y).collect();
                let entry = rem.entry(te).or_insert_with(BigInt::zero);
                *entry -= &qc * dc;
            }
            rem.retain(|_, c| !c.is_zero());
        }
        let shift: Vec<i64> = min_a.iter().zip(&min_b).map(|(a, b)| a - b).collect();
        let terms = quot
            .into_iter()
            .map(|(e, c)| (e.iter().zip(&shift).map(|(x, s)| x + s).collect(), c))
            .collect();
        Some(LaurentElement { d: self.d, terms })
    }
}

impl fmt::Display for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = e.iter().all(|&x| x == 0);
            if is_const {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                let joined =
                    e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                write!(f, "g^({joined})")?;
            }
        }
        Ok(())
    }
}

/// Polynomial in Z[T_1..T_d]; the image of a Laurent element under
/// γ_i ↦ 1 + T_i after clearing denominators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IwasawaPoly {
    d: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IwasawaPoly {
    pub fn zero(d: usize) -> Self {
        IwasawaPoly { d, terms: BTreeMap::new() }
    }

    pub fn constant(d: usize, c: BigInt) -> Self {
        Self::monomial(d, &vec![0; d], c)
    }

    pub fn monomial(d: usize, exps: &[u32], c: BigInt) -> Self {
        assert_eq!(exps.len(), d);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps.to_vec(), c);
        }
        IwasawaPoly { d, terms }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    /// Terms sorted by (total degree, exponent vector): the canonical order
    /// used for serialization.
    pub fn terms_graded_lex(&self) -> Vec<(Vec<u32>, BigInt)> {
        let mut v: Vec<(Vec<u32>, BigInt)> =
            self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        v.sort_by_key(|(e, _)| (e.iter().map(|&x| x as u64).sum::<u64>(), e.clone()));
        v
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.d, rhs.d);
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let entry = terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        IwasawaPoly { d: self.d, terms }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.d, rhs.d);
        let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = terms.entry(e).or_insert_with(BigInt::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        IwasawaPoly { d: self.d, terms }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.d);
        }
        IwasawaPoly {
            d: self.d,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    /// Total degree of the largest monomial; zero polynomial gives 0.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Exact division by p^k.
    fn div_p_power(&self, p: u64, k: u32) -> Self {
        let q = BigInt::from(p).pow(k);
        IwasawaPoly {
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let (d, r) = num_integer::Integer::div_rem(c, &q);
                    assert!(r.is_zero(), "p-power division must be exact");
                    (e.clone(), d)
                })
                .collect(),
        }
    }

    /// Substitute T_i ← γ_i − 1; test helper for the round trip.
    pub fn to_laurent(&self) -> LaurentElement {
        let mut acc = LaurentElement::zero(self.d);
        for (e, c) in &self.terms {
            let mut term = LaurentElement::constant(self.d, c.clone());
            for (i, &k) in e.iter().enumerate() {
                let mut sigma = vec![0i64; self.d];
                sigma[i] = 1;
                let t_i = LaurentElement::gamma_minus_one(self.d, &sigma);
                for _ in 0..k {
                    term = term.mul(&t_i);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }
}

impl fmt::Display for IwasawaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms_graded_lex().iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = e.iter().all(|&x| x == 0);
            if is_const {
                write!(f, "{mag}")?;
                continue;
            }
            let mut parts = Vec::new();
            if !mag.is_one() {
                parts.push(mag.to_string());
            }
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let var = if self.d == 1 { "T".to_string() } else { format!("T{}", i + 1) };
                parts.push(if k == 1 { var } else { format!("{var}^{k}") });
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Vertex order used by the matrices: unramified first, then ramified, each
/// block in base input order.
pub fn ordered_vertices(spec: &TowerSpec) -> Vec<usize> {
    let n = spec.base().vertex_count();
    let mut order: Vec<usize> = (0..n).filter(|&v| !spec.is_ramified(v)).collect();
    order.extend((0..n).filter(|&v| spec.is_ramified(v)));
    order
}

pub type LaurentMatrix = Vec<Vec<LaurentElement>>;

/// Valency matrix D: diagonal degree at unramified vertices, 0 at ramified.
pub fn matrix_d(spec: &TowerSpec) -> LaurentMatrix {
    let order = ordered_vertices(spec);
    let d = spec.group().d();
    let s = order.len();
    let mut m = vec![vec![LaurentElement::zero(d); s]; s];
    for (i, &v) in order.iter().enumerate() {
        if !spec.is_ramified(v) {
            let deg = spec.base().degree(v).unwrap();
            m[i][i] = LaurentElement::constant(d, BigInt::from(deg));
        }
    }
    m
}

/// Voltage matrix B. Unramified column j collects Σ γ^{α(e)} over darts
/// e: v_j → v_i; a ramified diagonal entry is −(γ^{σ_v} − 1) when the inertia
/// has rank 1 (σ_v the canonical topological generator) and −1 otherwise.
pub fn matrix_b(spec: &TowerSpec) -> LaurentMatrix {
    let order = ordered_vertices(spec);
    let d = spec.group().d();
    let s = order.len();
    let pos: BTreeMap<usize, usize> =
        order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut m = vec![vec![LaurentElement::zero(d); s]; s];
    for (j, &vj) in order.iter().enumerate() {
        if spec.is_ramified(vj) {
            let rank = spec.inertia_rank_at(vj);
            let t_tilde = if rank == 1 {
                let sigma = canonical_rank1_generator(spec.group().p(), spec.inertia_generators(vj))
                    .expect("rank-1 inertia has a generator");
                LaurentElement::gamma_minus_one(d, &sigma)
            } else {
                LaurentElement::one(d)
            };
            m[j][j] = t_tilde.neg();
        } else {
            for &dart in spec.base().out_darts(vj) {
                let target = spec.base().dart(dart).terminus;
                let i = pos[&target];
                let mono = LaurentElement::monomial(d, spec.voltage(dart), BigInt::one());
                m[i][j] = m[i][j].add(&mono);
            }
        }
    }
    m
}

pub fn matrix_d_minus_b(spec: &TowerSpec) -> LaurentMatrix {
    let d = matrix_d(spec);
    let b = matrix_b(spec);
    d.into_iter()
        .zip(b)
        .map(|(dr, br)| dr.into_iter().zip(br).map(|(x, y)| x.sub(&y)).collect())
        .collect()
}

/// Exact determinant over Z[Z^d]: cofactor expansion up to 6x6, fraction-free
/// elimination above.
pub fn det_laurent(m: &LaurentMatrix) -> Result<LaurentElement, CharError> {
    let s = m.len();
    if m.iter().any(|row| row.len() != s) {
        return Err(CharError::NonSquare);
    }
    if s == 0 {
        return Ok(LaurentElement::one(0));
    }
    if s <= 6 {
        Ok(det_cofactor(m))
    } else {
        Ok(det_bareiss(m))
    }
}

/// Cofactor expansion along the first column.
pub fn det_cofactor(m: &LaurentMatrix) -> LaurentElement {
    let s = m.len();
    let d = m[0][0].d();
    if s == 1 {
        return m[0][0].clone();
    }
    let mut acc = LaurentElement::zero(d);
    for i in 0..s {
        if m[i][0].is_zero() {
            continue;
        }
        let sub: LaurentMatrix = m
            .iter()
            .enumerate()
            .filter(|(r, _)| *r != i)
            .map(|(_, row)| row[1..].to_vec())
            .collect();
        let term = m[i][0].mul(&det_cofactor(&sub));
        acc = if i % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// Bareiss elimination with exact ring division.
pub fn det_bareiss(m: &LaurentMatrix) -> LaurentElement {
    let s = m.len();
    let d = m[0][0].d();
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = LaurentElement::one(d);
    for k in 0..(s - 1) {
        if a[k][k].is_zero() {
            let Some(swap) = ((k + 1)..s).find(|&i| !a[i][k].is_zero()) else {
                return LaurentElement::zero(d);
            };
            a.swap(k, swap);
            negate = !negate;
        }
        for i in (k + 1)..s {
            for j in (k + 1)..s {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss division is exact over an integral domain");
            }
            a[i][k] = LaurentElement::zero(d);
        }
        prev = a[k][k].clone();
    }
    let det = a[s - 1][s - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

/// Clears negative exponents by the minimal monomial γ^k (a Λ-unit), applies
/// γ_i ↦ 1 + T_i and expands exactly over Z. Returns the polynomial and the
/// clearing exponent k.
pub fn to_poly(x: &LaurentElement) -> (IwasawaPoly, Vec<u32>) {
    let d = x.d();
    let Some(mins) = x.min_exponents() else {
        return (IwasawaPoly::zero(d), vec![0; d]);
    };
    let clearing: Vec<u32> =
        mins.iter().map(|&m| if m < 0 { (-m) as u32 } else { 0 }).collect();
    let mut acc = IwasawaPoly::zero(d);
    for (e, c) in x.terms() {
        // Shifted exponent is nonnegative.
        let mut term = IwasawaPoly::constant(d, c.clone());
        for i in 0..d {
            let k = (e[i] + clearing[i] as i64) as u32;
            term = term.mul(&one_plus_t_power(d, i, k));
        }
        acc = acc.add(&term);
    }
    (acc, clearing)
}

/// (1 + T_i)^k expanded by binomials.
fn one_plus_t_power(d: usize, var: usize, k: u32) -> IwasawaPoly {
    let mut terms = BTreeMap::new();
    let mut coeff = BigInt::one();
    for j in 0..=k {
        let mut e = vec![0u32; d];
        e[var] = j;
        terms.insert(e, coeff.clone());
        // binomial(k, j+1) from binomial(k, j)
        coeff = coeff * BigInt::from(k - j) / BigInt::from(j + 1);
    }
    IwasawaPoly { d, terms }
}

fn ord_p_bigint(p: u64, x: &BigInt) -> u32 {
    assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut v = x.clone();
    let mut k = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&v, &p);
        if !r.is_zero() {
            return k;
        }
        v = q;
        k += 1;
    }
}

/// μ = min_c ord_p(c); λ = least total degree of a monomial of f / p^μ whose
/// coefficient is a p-adic unit.
pub fn mu_lambda(f: &IwasawaPoly, p: u64) -> Result<(u32, u32), CharError> {
    if f.is_zero() {
        return Err(CharError::ZeroElement);
    }
    let mu = f.terms().map(|(_, c)| ord_p_bigint(p, c)).min().unwrap();
    let lambda = f
        .terms()
        .filter(|(_, c)| ord_p_bigint(p, c) == mu)
        .map(|(e, _)| e.iter().sum::<u32>())
        .min()
        .unwrap();
    Ok((mu, lambda))
}

/// The characteristic element det(D − B) brought to polynomial form, with its
/// (μ, λ) attached. Well-defined up to a Λ-unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharElement {
    pub poly: IwasawaPoly,
    pub clearing: Vec<u32>,
    pub mu: u32,
    pub lambda: u32,
}

pub fn char_element(spec: &TowerSpec) -> Result<CharElement, CharError> {
    let det = det_laurent(&matrix_d_minus_b(spec))?;
    if det.is_zero() {
        return Err(CharError::NonTorsion);
    }
    let (poly, clearing) = to_poly(&det);
    let (mu, lambda) = mu_lambda(&poly, spec.group().p())?;
    Ok(CharElement { poly, clearing, mu, lambda })
}

/// char(Jac) from char(Pic): divide by T when d = 1, unchanged for d ≥ 2.
pub fn char_of_jacobian(c: &CharElement, d: usize, p: u64) -> Result<CharElement, CharError> {
    if d != 1 {
        return Ok(c.clone());
    }
    if c.poly.terms().any(|(e, _)| e[0] == 0) {
        return Err(CharError::NotDivisibleByT);
    }
    let poly = IwasawaPoly {
        d: 1,
        terms: c.poly.terms().map(|(e, k)| (vec![e[0] - 1], k.clone())).collect(),
    };
    let (mu, lambda) = mu_lambda(&poly, p)?;
    Ok(CharElement { poly, clearing: c.clearing.clone(), mu, lambda })
}

type RatTerms = BTreeMap<Vec<u32>, BigRational>;

/// Exact division over Q[T_1..T_d]; None when not divisible.
fn rational_div_exact(a: &IwasawaPoly, b: &IwasawaPoly) -> Option<RatTerms> {
    if a.is_zero() {
        return Some(BTreeMap::new());
    }
    if b.is_zero() {
        return None;
    }
    let mut rem: RatTerms = a
        .terms()
        .map(|(e, c)| (e.clone(), BigRational::from_integer(c.clone())))
        .collect();
    let div: Vec<(Vec<u32>, BigRational)> = b
        .terms()
        .map(|(e, c)| (e.clone(), BigRational::from_integer(c.clone())))
        .collect();
    let (lead_e, lead_c) = div.last().cloned()?;
    let mut quot: RatTerms = BTreeMap::new();
    while let Some((re, rc)) = rem.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
        if re.iter().zip(&lead_e).any(|(x, y)| x < y) {
            return None;
        }
        let qe: Vec<u32> = re.iter().zip(&lead_e).map(|(x, y)| x - y).collect();
        let qc = rc / &lead_c;
        quot.insert(qe.clone(), qc.clone());
        for (de, dc) in &div {
            let te: Vec<u32> = de.iter().zip(&qe).map(|(x, y)| x + y).collect();
            let entry = rem.entry(te).or_insert_with(BigRational::zero);
            *entry -= &qc * dc;
        }
        rem.retain(|_, c| !c.is_zero());
    }
    Some(quot)
}

/// Is the rational polynomial a unit of Z_p[[T_1..T_d]]: p-integral
/// coefficients and a constant term that is a p-adic unit?
fn is_lambda_unit(q: &RatTerms, p: u64, d: usize) -> bool {
    let p = BigInt::from(p);
    let mut has_unit_constant = false;
    for (e, c) in q {
        if (c.denom() % &p).is_zero() {
            return false;
        }
        if e == &vec![0u32; d] {
            has_unit_constant = !(c.numer() % &p).is_zero();
        }
    }
    has_unit_constant
}

/// Divide out every (1 + T_i) factor; these are Λ-units.
fn strip_one_plus_t(f: &IwasawaPoly) -> IwasawaPoly {
    let mut cur = f.clone();
    for i in 0..f.d() {
        let unit = one_plus_t_power(f.d(), i, 1);
        loop {
            match rational_div_exact(&cur, &unit) {
                Some(q) if q.values().all(|c| c.denom().is_one()) => {
                    cur = IwasawaPoly {
                        d: f.d(),
                        terms: q
                            .into_iter()
                            .map(|(e, c)| (e, c.numer().clone()))
                            .filter(|(_, c)| !c.is_zero())
                            .collect(),
                    };
                    if cur.is_zero() {
                        return cur;
                    }
                }
                _ => break,
            }
        }
    }
    cur
}

/// Equality up to a Λ-unit, decided conservatively: equal (μ, λ), then exact
/// divisibility one way or the other with a quotient that is a unit power
/// series. Sufficient for characteristic-ideal comparisons of polynomial
/// elements; a genuinely infinite unit cofactor would be missed.
pub fn chars_equal_up_to_unit(a: &CharElement, b: &CharElement, p: u64) -> bool {
    if a.poly.is_zero() || b.poly.is_zero() {
        return false;
    }
    let d = a.poly.d();
    if d != b.poly.d() {
        return false;
    }
    let fa = strip_one_plus_t(&a.poly);
    let fb = strip_one_plus_t(&b.poly);
    let (mu_a, la) = mu_lambda(&fa, p).expect("nonzero");
    let (mu_b, lb) = mu_lambda(&fb, p).expect("nonzero");
    if (mu_a, la) != (mu_b, lb) {
        return false;
    }
    let fa = fa.div_p_power(p, mu_a);
    let fb = fb.div_p_power(p, mu_b);
    for (x, y) in [(&fa, &fb), (&fb, &fa)] {
        if let Some(q) = rational_div_exact(x, y) {
            if is_lambda_unit(&q, p, d) {
                return true;
            }
        }
    }
    false
}

/// Builds a CharElement from explicit (exponent, coefficient) data; used by
/// golden tests and the verification harness.
pub fn char_from_terms(d: usize, p: u64, terms: &[(&[u32], i64)]) -> CharElement {
    let mut poly = IwasawaPoly::zero(d);
    for (e, c) in terms {
        poly = poly.add(&IwasawaPoly::monomial(d, e, BigInt::from(*c)));
    }
    let (mu, lambda) = mu_lambda(&poly, p).expect("nonzero golden element");
    CharElement { poly, clearing: vec![0; d], mu, lambda }
}
