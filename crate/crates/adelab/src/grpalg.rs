//! The group algebra of a lattice: finite sums Σ c_λ e^λ with exact rational
//! coefficients. Exponents are kept in doubled-weight coordinates so that
//! half-weights e^{ϖ/2} and half-roots e^{−α/2} are ordinary integer vectors.
//!
//! Alongside the ring operations this module provides Weyl-group actions on
//! exponents, evaluation at torus points (multiplicative or abstract), exact
//! Laurent division, and a round-tripping text format.

use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, RootSystem};
use crate::{rat, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// An element of the group algebra Q[M] for a lattice M of fixed rank.
/// The `lattice_tag` names M; operations insist both operands share it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupAlgebraElement {
    /// doubled-weight exponent → coefficient, zero coefficients never stored
    pub terms: BTreeMap<Vec<i64>, Rat>,
    pub lattice_tag: String,
    pub rank: usize,
}

impl GroupAlgebraElement {
    pub fn zero(tag: &str, rank: usize) -> Self {
        GroupAlgebraElement { terms: BTreeMap::new(), lattice_tag: tag.to_string(), rank }
    }

    pub fn one(tag: &str, rank: usize) -> Self {
        Self::monomial(tag, vec![0; rank], Rat::one())
    }

    pub fn monomial(tag: &str, exponent: Vec<i64>, coeff: Rat) -> Self {
        let rank = exponent.len();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponent, coeff);
        }
        GroupAlgebraElement { terms, lattice_tag: tag.to_string(), rank }
    }

    /// e^λ for a doubled-weight vector.
    pub fn exp(tag: &str, v: &LatticeVector) -> Self {
        Self::monomial(tag, v.coords.clone(), Rat::one())
    }

    pub fn scalar(tag: &str, rank: usize, c: Rat) -> Self {
        Self::monomial(tag, vec![0; rank], c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, exponent: Vec<i64>, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponent).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            // re-fetch the key to remove; entry API already consumed it
            let key: Vec<Vec<i64>> = self
                .terms
                .iter()
                .filter(|(_, c)| c.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(&self.lattice_tag, self.rank);
        }
        GroupAlgebraElement {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
            lattice_tag: self.lattice_tag.clone(),
            rank: self.rank,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&rat(-1))
    }

    /// Coefficient of e^λ (zero if absent).
    pub fn coeff(&self, exponent: &[i64]) -> Rat {
        self.terms.get(exponent).cloned().unwrap_or_else(Rat::zero)
    }

    /// Constant term (coefficient of e^0).
    pub fn constant_term(&self) -> Rat {
        self.coeff(&vec![0; self.rank])
    }

    /// Multiply by e^shift (translate all exponents).
    pub fn translate(&self, shift: &[i64]) -> Self {
        GroupAlgebraElement {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| {
                    (k.iter().zip(shift).map(|(a, b)| a + b).collect(), v.clone())
                })
                .collect(),
            lattice_tag: self.lattice_tag.clone(),
            rank: self.rank,
        }
    }

    /// e^λ ↦ e^{−λ} (the Chevalley involution on exponents).
    pub fn invert_exponents(&self) -> Self {
        GroupAlgebraElement {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.iter().map(|c| -c).collect(), v.clone()))
                .collect(),
            lattice_tag: self.lattice_tag.clone(),
            rank: self.rank,
        }
    }
}

fn check_tags(f: &GroupAlgebraElement, g: &GroupAlgebraElement) -> Result<()> {
    if f.lattice_tag != g.lattice_tag || f.rank != g.rank {
        return Err(Error::LatticeMismatch {
            left: format!("{} (rank {})", f.lattice_tag, f.rank),
            right: format!("{} (rank {})", g.lattice_tag, g.rank),
        });
    }
    Ok(())
}

pub fn ga_add(f: &GroupAlgebraElement, g: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
    check_tags(f, g)?;
    let mut out = f.clone();
    for (k, v) in &g.terms {
        let entry = out.terms.entry(k.clone()).or_insert_with(Rat::zero);
        *entry += v;
    }
    out.terms.retain(|_, v| !v.is_zero());
    Ok(out)
}

pub fn ga_sub(f: &GroupAlgebraElement, g: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
    ga_add(f, &g.neg())
}

pub fn ga_mul(f: &GroupAlgebraElement, g: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
    check_tags(f, g)?;
    let mut out = GroupAlgebraElement::zero(&f.lattice_tag, f.rank);
    // iterate over the smaller operand's terms in the outer loop
    let (small, big) = if f.terms.len() <= g.terms.len() { (f, g) } else { (g, f) };
    for (ka, ca) in &small.terms {
        for (kb, cb) in &big.terms {
            let k: Vec<i64> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
            let entry = out.terms.entry(k).or_insert_with(Rat::zero);
            *entry += ca * cb;
        }
    }
    out.terms.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Apply a word in the simple reflections to every exponent. The word acts
/// left-to-right on the vector: w = s_{i1} s_{i2} … applied as
/// s_{i1}(s_{i2}(…v)). Coefficients are untouched; the sign ε(w) is the
/// caller's business.
pub fn ga_weyl_apply(
    rs: &RootSystem,
    word: &[usize],
    f: &GroupAlgebraElement,
) -> GroupAlgebraElement {
    let mut out = GroupAlgebraElement::zero(&f.lattice_tag, f.rank);
    for (k, c) in &f.terms {
        let mut v = k.clone();
        for &i in word.iter().rev() {
            v = rs.reflect(&v, i);
        }
        let entry = out.terms.entry(v).or_insert_with(Rat::zero);
        *entry += c;
    }
    out.terms.retain(|x, v| {
        let _ = x;
        !v.is_zero()
    });
    out
}

/// An element of ℚ/ℤ ⊕ ℤ^r, the value group for abstract torus points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbstractValue {
    /// fractional part, always reduced to [0, 1)
    pub frac: Rat,
    pub free: Vec<BigInt>,
}

impl AbstractValue {
    pub fn zero(r: usize) -> Self {
        AbstractValue { frac: Rat::zero(), free: vec![BigInt::zero(); r] }
    }

    pub fn is_zero(&self) -> bool {
        self.frac.is_zero() && self.free.iter().all(|x| x.is_zero())
    }

    fn reduce(mut self) -> Self {
        self.frac = &self.frac - self.frac.floor();
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        AbstractValue {
            frac: &self.frac + &other.frac,
            free: self.free.iter().zip(&other.free).map(|(a, b)| a + b).collect(),
        }
        .reduce()
    }

    pub fn scale(&self, n: &BigInt) -> Self {
        AbstractValue {
            frac: &self.frac * Rat::from_integer(n.clone()),
            free: self.free.iter().map(|x| x * n).collect(),
        }
        .reduce()
    }
}

/// A homomorphism from (a finite-index sublattice of) the half-weight
/// lattice to either ℚ^× (multiplicative mode) or ℚ/ℤ ⊕ ℤ^r (abstract mode).
///
/// The domain is spanned by `basis` (doubled-weight coordinates); evaluation
/// on a vector outside the ℤ-span is an error.
#[derive(Debug, Clone)]
pub struct TorusPoint {
    pub basis: Vec<Vec<i64>>,
    pub mode: TorusValues,
    /// exact inverse of the basis matrix, cached for repeated evaluation
    inv: Vec<Vec<Rat>>,
}

#[derive(Debug, Clone)]
pub enum TorusValues {
    Multiplicative(Vec<Rat>),
    Abstract(Vec<AbstractValue>),
}

impl TorusPoint {
    pub fn multiplicative(basis: Vec<Vec<i64>>, values: Vec<Rat>) -> Result<Self> {
        for v in &values {
            if v.is_zero() {
                return Err(Error::InvalidArgument(
                    "torus point values must be nonzero".into(),
                ));
            }
        }
        let inv = invert_basis(&basis)?;
        Ok(TorusPoint { basis, mode: TorusValues::Multiplicative(values), inv })
    }

    pub fn abstract_mode(basis: Vec<Vec<i64>>, values: Vec<AbstractValue>) -> Result<Self> {
        let inv = invert_basis(&basis)?;
        Ok(TorusPoint { basis, mode: TorusValues::Abstract(values), inv })
    }

    /// The standard point on the unit doubled-weight basis: coordinate j of
    /// the exponent is the exponent of `values[j]`. This is the common case
    /// where values are assigned to the half fundamental weights ϖ_j/2.
    pub fn on_unit_basis(values: Vec<Rat>) -> Result<Self> {
        let n = values.len();
        let basis: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        Self::multiplicative(basis, values)
    }

    /// Integer coordinates of a doubled-weight vector in the basis, if any.
    pub fn coordinates(&self, exponent: &[i64]) -> Result<Vec<BigInt>> {
        let n = self.basis.len();
        if exponent.len() != self.basis.first().map_or(0, |b| b.len()) {
            return Err(Error::TorusPointIncomplete(format!("{exponent:?}")));
        }
        // x = exponent · inv  (row vector times matrix)
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let mut s = Rat::zero();
            for (i, &e) in exponent.iter().enumerate() {
                if e != 0 {
                    s += rat(e) * &self.inv[i][j];
                }
            }
            if !s.is_integer() {
                return Err(Error::TorusPointIncomplete(format!("{exponent:?}")));
            }
            out.push(s.to_integer());
        }
        Ok(out)
    }

    /// Multiplicative value on one exponent vector.
    pub fn value(&self, exponent: &[i64]) -> Result<Rat> {
        let coords = self.coordinates(exponent)?;
        let TorusValues::Multiplicative(vals) = &self.mode else {
            return Err(Error::InvalidArgument(
                "abstract torus point has no multiplicative value".into(),
            ));
        };
        let mut out = Rat::one();
        for (c, v) in coords.iter().zip(vals) {
            out *= pow_rat(v, c);
        }
        Ok(out)
    }

    /// Abstract value on one exponent vector.
    pub fn abstract_value(&self, exponent: &[i64]) -> Result<AbstractValue> {
        let coords = self.coordinates(exponent)?;
        let TorusValues::Abstract(vals) = &self.mode else {
            return Err(Error::InvalidArgument(
                "multiplicative torus point has no abstract value".into(),
            ));
        };
        let r = vals.first().map_or(0, |v| v.free.len());
        let mut out = AbstractValue::zero(r);
        for (c, v) in coords.iter().zip(vals) {
            out = out.add(&v.scale(c));
        }
        Ok(out)
    }

    /// In abstract mode: does the point kill this exponent? Exact.
    pub fn vanishes_on(&self, exponent: &[i64]) -> Result<bool> {
        Ok(self.abstract_value(exponent)?.is_zero())
    }
}

fn pow_rat(v: &Rat, e: &BigInt) -> Rat {
    if e.is_zero() {
        return Rat::one();
    }
    let mut base = if e.is_negative() { v.recip() } else { v.clone() };
    let mut e = e.abs();
    let mut out = Rat::one();
    let two = BigInt::from(2);
    while !e.is_zero() {
        if num_integer::Integer::is_odd(&e) {
            out *= &base;
        }
        base = &base * &base;
        e /= &two;
    }
    out
}

fn invert_basis(basis: &[Vec<i64>]) -> Result<Vec<Vec<Rat>>> {
    let n = basis.len();
    if n == 0 || basis.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("torus point basis must be square".into()));
    }
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        rat(basis[i][j])
                    } else if j - n == i {
                        Rat::one()
                    } else {
                        Rat::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::InvalidArgument("torus point basis is singular".into()))?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= p.clone();
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..2 * n {
                    let sub = &f * &a[col][j];
                    a[r][j] -= sub;
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn ga_evaluate(f: &GroupAlgebraElement, t: &TorusPoint) -> Result<Rat> {
    let mut out = Rat::zero();
    for (k, c) in &f.terms {
        out += c * t.value(k)?;
    }
    Ok(out)
}

/// Monomial order for division: graded by the pairing with ρ (as an integer,
/// four times the actual pairing), ties broken lexicographically.
fn order_key(rs: &RootSystem, rho_root_coords: &[i64], v: &[i64]) -> (i64, Vec<i64>) {
    let _ = rs;
    let grade: i64 = v.iter().zip(rho_root_coords).map(|(a, b)| a * b).sum();
    (grade, v.to_vec())
}

/// Exact Laurent division: returns q with q·den = num, or an error if no
/// such q exists. Deterministic via the ρ-graded lex order.
pub fn ga_exact_divide(
    rs: &RootSystem,
    num: &GroupAlgebraElement,
    den: &GroupAlgebraElement,
) -> Result<GroupAlgebraElement> {
    check_tags(num, den)?;
    if den.is_zero() {
        return Err(Error::InvalidArgument("division by zero".into()));
    }
    if num.is_zero() {
        return Ok(GroupAlgebraElement::zero(&num.lattice_tag, num.rank));
    }
    // integer root coordinates of 2ρ give an integral grading
    let two_rho = LatticeVector::doubled(vec![4; rs.rank]);
    let rho_rc = rs.integer_root_coords(&two_rho)?;

    let leading = |f: &GroupAlgebraElement| -> (Vec<i64>, Rat) {
        let (k, c) = f
            .terms
            .iter()
            .max_by_key(|(k, _)| order_key(rs, &rho_rc, k))
            .expect("nonzero");
        (k.clone(), c.clone())
    };
    let trailing_key = |f: &GroupAlgebraElement| -> (i64, Vec<i64>) {
        f.terms.keys().map(|k| order_key(rs, &rho_rc, k)).min().expect("nonzero")
    };

    let (lt_den, lc_den) = leading(den);
    let floor_key = {
        // trailing(q) = trailing(num) − trailing(den) if the quotient exists
        let (gn, _) = trailing_key(num);
        let (gd, _) = trailing_key(den);
        gn - gd
    };

    let mut rem = num.clone();
    let mut q = GroupAlgebraElement::zero(&num.lattice_tag, num.rank);
    // With an exact quotient, every extracted term is a term of the quotient
    // so the loop runs |support(q)| times. The cap only fires on bad input.
    let mut budget: u64 = 2_000_000;
    while !rem.is_zero() {
        budget -= 1;
        if budget == 0 {
            return Err(Error::NotDivisible("division did not terminate".into()));
        }
        let (lt_rem, lc_rem) = leading(&rem);
        let mono: Vec<i64> = lt_rem.iter().zip(&lt_den).map(|(a, b)| a - b).collect();
        let mono_grade: i64 = mono.iter().zip(&rho_rc).map(|(a, b)| a * b).sum();
        if mono_grade < floor_key {
            return Err(Error::NotDivisible(format!(
                "remainder with {} terms cannot be cleared",
                rem.num_terms()
            )));
        }
        let coeff = lc_rem / &lc_den;
        let term = GroupAlgebraElement::monomial(&num.lattice_tag, mono, coeff);
        q = ga_add(&q, &term)?;
        let sub = ga_mul(&term, den)?;
        rem = ga_sub(&rem, &sub)?;
    }
    Ok(q)
}

impl fmt::Display for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            write!(f, "{} * e[", a)?;
            for (i, x) in k.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// Parse the text format produced by `Display`: a sum of `c * e[k1,...,kn]`
/// with doubled-weight integer exponents.
pub fn ga_parse(tag: &str, rank: usize, s: &str) -> Result<GroupAlgebraElement> {
    let s = s.trim();
    if s == "0" {
        return Ok(GroupAlgebraElement::zero(tag, rank));
    }
    let mut out = GroupAlgebraElement::zero(tag, rank);
    let bad = |msg: &str| Error::ShapeParse(format!("group algebra element: {msg}"));
    // split on top-level + and - (no parentheses in the format)
    let mut chunks: Vec<(i64, String)> = Vec::new();
    let mut sign = 1i64;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '+' | '-' if !cur.trim().is_empty() && cur.trim().ends_with(']') => {
                chunks.push((sign, cur.trim().to_string()));
                sign = if ch == '-' { -1 } else { 1 };
                cur = String::new();
            }
            '-' if cur.trim().is_empty() => {
                sign = -sign;
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        chunks.push((sign, cur.trim().to_string()));
    }
    for (sgn, chunk) in chunks {
        let (coeff_str, exps) = match chunk.split_once('*') {
            Some((c, e)) => (c.trim().to_string(), e.trim().to_string()),
            None => ("1".to_string(), chunk.clone()),
        };
        let coeff: Rat = coeff_str
            .parse::<Rat>()
            .map_err(|_| bad(&format!("bad coefficient {coeff_str:?}")))?;
        let inner = exps
            .strip_prefix("e[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| bad(&format!("bad exponent {exps:?}")))?;
        let k: Vec<i64> = if inner.trim().is_empty() {
            vec![]
        } else {
            inner
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad(&format!("bad exponent list {inner:?}")))?
        };
        if k.len() != rank {
            return Err(bad(&format!("exponent length {} != rank {rank}", k.len())));
        }
        out.add_term(k, coeff * rat(sgn));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_root_system, RootKind};
    use proptest::prelude::*;

    fn a1() -> RootSystem {
        build_root_system(RootKind::A, 1).unwrap()
    }

    fn e(tag: &str, k: Vec<i64>) -> GroupAlgebraElement {
        GroupAlgebraElement::monomial(tag, k, Rat::one())
    }

    #[test]
    fn monomials_multiply_by_adding_exponents() {
        let f = e("A2", vec![1, 0]);
        let g = e("A2", vec![0, 3]);
        let fg = ga_mul(&f, &g).unwrap();
        assert_eq!(fg, e("A2", vec![1, 3]));
    }

    #[test]
    fn half_root_square_expands() {
        // (e^{α/2} − e^{−α/2})² = e^α − 2 + e^{−α}; for A_1, α/2 has
        // doubled-weight coordinate 2.
        let tag = "A1";
        let f = ga_sub(&e(tag, vec![2]), &e(tag, vec![-2])).unwrap();
        let sq = ga_mul(&f, &f).unwrap();
        let mut expect = e(tag, vec![4]);
        expect.add_term(vec![0], rat(-2));
        expect.add_term(vec![-4], Rat::one());
        assert_eq!(sq, expect);
    }

    #[test]
    fn difference_of_squares() {
        // (1 − e^{−α})(1 + e^{−α}) = 1 − e^{−2α}; α doubled = 4 for A_1.
        let tag = "A1";
        let one = GroupAlgebraElement::one(tag, 1);
        let a = e(tag, vec![-4]);
        let l = ga_sub(&one, &a).unwrap();
        let r = ga_add(&one, &a).unwrap();
        let p = ga_mul(&l, &r).unwrap();
        let expect = ga_sub(&one, &e(tag, vec![-8])).unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn lattice_mismatch_is_an_error() {
        let f = e("A1", vec![1]);
        let g = e("D4", vec![1]);
        assert!(ga_mul(&f, &g).is_err());
        assert!(ga_add(&f, &g).is_err());
    }

    #[test]
    fn weyl_apply_a1() {
        let rs = a1();
        // s_α(e^ρ) = e^{−ρ}; ρ doubled = (2)
        let f = e("A1", vec![2]);
        let g = ga_weyl_apply(&rs, &[0], &f);
        assert_eq!(g, e("A1", vec![-2]));
        // identity word
        assert_eq!(ga_weyl_apply(&rs, &[], &f), f);
    }

    #[test]
    fn evaluate_basics() {
        // A_1 with t(α) = 4, so t(α/2) = 2. The basis vector is α/2, which
        // has doubled-weight coordinate (2).
        let t = TorusPoint::multiplicative(vec![vec![2]], vec![rat(2)]).unwrap();
        let f = ga_add(&e("A1", vec![2]), &e("A1", vec![-2])).unwrap();
        assert_eq!(ga_evaluate(&f, &t).unwrap(), crate::ratio(5, 2));
        let one = GroupAlgebraElement::one("A1", 1);
        assert_eq!(ga_evaluate(&one, &t).unwrap(), Rat::one());
        // exponent outside the span errors
        assert!(ga_evaluate(&e("A1", vec![1]), &t).is_err());
        let _ = t;
    }

    #[test]
    fn abstract_mode_vanishing() {
        // t(basis vector) = 1/2 in Q/Z: doubling kills it.
        let v = AbstractValue { frac: crate::ratio(1, 2), free: vec![] };
        let t = TorusPoint::abstract_mode(vec![vec![1]], vec![v]).unwrap();
        assert!(!t.vanishes_on(&[1]).unwrap());
        assert!(t.vanishes_on(&[2]).unwrap());
        assert!(t.vanishes_on(&[0]).unwrap());
    }

    #[test]
    fn exact_divide_basics() {
        let rs = a1();
        let tag = "A1";
        // (e^α − e^{−α})/(e^{α/2} − e^{−α/2}) = e^{α/2} + e^{−α/2}
        let num = ga_sub(&e(tag, vec![4]), &e(tag, vec![-4])).unwrap();
        let den = ga_sub(&e(tag, vec![2]), &e(tag, vec![-2])).unwrap();
        let q = ga_exact_divide(&rs, &num, &den).unwrap();
        assert_eq!(q, ga_add(&e(tag, vec![2]), &e(tag, vec![-2])).unwrap());
        // f / f = 1
        let q = ga_exact_divide(&rs, &num, &num).unwrap();
        assert_eq!(q, GroupAlgebraElement::one(tag, 1));
        // non-divisible input errors
        let bad = ga_add(&e(tag, vec![4]), &GroupAlgebraElement::one(tag, 1)).unwrap();
        assert!(ga_exact_divide(&rs, &bad, &den).is_err());
    }

    #[test]
    fn a2_weyl_quotient() {
        // Weyl numerator over denominator for λ = ϖ_1 in A_2 gives the
        // 3-term character e^{ϖ_1} + e^{ϖ_2−ϖ_1... }: orbit of ϖ_1.
        let rs = build_root_system(RootKind::A, 2).unwrap();
        let tag = "A2";
        let alt_sum = |v: &[i64]| -> GroupAlgebraElement {
            // Σ ε(w) e^{w v} over the orbit, via dominant reduction
            let orbit = rs.weyl_orbit(&LatticeVector::doubled(v.to_vec())).unwrap();
            let mut out = GroupAlgebraElement::zero(tag, 2);
            for p in orbit {
                let (_, steps) = rs.dominant_representative(&p.coords);
                out.add_term(p.coords, rat(if steps % 2 == 0 { 1 } else { -1 }));
            }
            out
        };
        let rho = [2, 2];
        let lam_rho = [4, 2]; // ϖ_1 + ρ, doubled
        let num = alt_sum(&lam_rho);
        let den = alt_sum(&rho);
        let chi = ga_exact_divide(&rs, &num, &den).unwrap();
        assert_eq!(chi.num_terms(), 3);
        assert_eq!(chi.coeff(&[2, 0]), Rat::one());
        // W-invariance of the quotient
        for i in 0..2 {
            assert_eq!(ga_weyl_apply(&rs, &[i], &chi), chi);
        }
    }

    #[test]
    fn text_round_trip_handwritten() {
        let tag = "D4";
        let mut f = GroupAlgebraElement::zero(tag, 4);
        f.add_term(vec![1, -2, 0, 3], crate::ratio(-7, 3));
        f.add_term(vec![0, 0, 0, 0], rat(5));
        let s = f.to_string();
        let g = ga_parse(tag, 4, &s).unwrap();
        assert_eq!(f, g);
        assert_eq!(ga_parse(tag, 4, "0").unwrap(), GroupAlgebraElement::zero(tag, 4));
    }

    fn arb_elt(tag: &'static str, rank: usize) -> impl Strategy<Value = GroupAlgebraElement> {
        prop::collection::vec(
            (prop::collection::vec(-4i64..5, rank), -9i64..10),
            0..5,
        )
        .prop_map(move |terms| {
            let mut f = GroupAlgebraElement::zero(tag, rank);
            for (k, c) in terms {
                f.add_term(k, rat(c));
            }
            f
        })
    }

    proptest! {
        #[test]
        fn ring_laws(f in arb_elt("A2", 2), g in arb_elt("A2", 2), h in arb_elt("A2", 2)) {
            let fg = ga_mul(&f, &g).unwrap();
            let gf = ga_mul(&g, &f).unwrap();
            prop_assert_eq!(&fg, &gf);
            let lhs = ga_mul(&fg, &h).unwrap();
            let rhs = ga_mul(&f, &ga_mul(&g, &h).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            // distributivity
            let l = ga_mul(&f, &ga_add(&g, &h).unwrap()).unwrap();
            let r = ga_add(&ga_mul(&f, &g).unwrap(), &ga_mul(&f, &h).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn eval_is_a_homomorphism(f in arb_elt("A2", 2), g in arb_elt("A2", 2),
                                  a in 1i64..7, b in 1i64..7) {
            let t = TorusPoint::on_unit_basis(vec![crate::ratio(a, 3), crate::ratio(b, 5)]).unwrap();
            let ef = ga_evaluate(&f, &t).unwrap();
            let eg = ga_evaluate(&g, &t).unwrap();
            let efg = ga_evaluate(&ga_mul(&f, &g).unwrap(), &t).unwrap();
            prop_assert_eq!(efg, ef * eg);
        }

        #[test]
        fn divide_undoes_multiply(f in arb_elt("A2", 2), g in arb_elt("A2", 2)) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let rs = build_root_system(RootKind::A, 2).unwrap();
            let fg = ga_mul(&f, &g).unwrap();
            let q = ga_exact_divide(&rs, &fg, &g).unwrap();
            prop_assert_eq!(q, f);
        }

        #[test]
        fn text_round_trip(f in arb_elt("E6", 6)) {
            let s = f.to_string();
            let g = ga_parse("E6", 6, &s).unwrap();
            prop_assert_eq!(f, g);
        }
    }
}
