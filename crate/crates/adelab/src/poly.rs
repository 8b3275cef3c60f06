//! Polynomial machinery used by the discriminant and family checks: dense
//! univariate polynomials over Q, bivariate polynomials as y-polynomials
//! with univariate coefficients, sparse multivariate Laurent polynomials,
//! exact determinants, and rational-function reconstruction from samples.

use crate::error::{Error, Result};
use crate::{rat, Rat};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Dense univariate polynomial over Q. No trailing zero coefficients;
/// the zero polynomial has an empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly {
    pub coeffs: Vec<Rat>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        UPoly { coeffs: vec![Rat::one()] }
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        UPoly { coeffs: vec![Rat::zero(), Rat::one()] }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial gets -1 for convenience.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        UPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut out = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        out
    }

    /// Division with remainder over the field Q.
    pub fn divrem(&self, den: &Self) -> (Self, Self) {
        assert!(!den.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut q = vec![Rat::zero(); (self.degree() - den.degree()).max(0) as usize + 1];
        let dlc = den.lc();
        while !rem.is_zero() && rem.degree() >= den.degree() {
            let shift = (rem.degree() - den.degree()) as usize;
            let c = rem.lc() / &dlc;
            q[shift] = c.clone();
            // rem -= c x^shift den
            let mut coeffs = rem.coeffs;
            for (j, d) in den.coeffs.iter().enumerate() {
                coeffs[j + shift] -= &c * d;
            }
            rem = Self::new(coeffs);
        }
        (Self::new(q), rem)
    }

    pub fn rem(&self, den: &Self) -> Self {
        self.divrem(den).1
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn exact_div(&self, den: &Self) -> Result<Self> {
        let (q, r) = self.divrem(den);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotDivisible("univariate exact division left a remainder".into()))
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let lc = a.lc();
            a.scale(&lc.recip())
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * rat(i as i64 + 1))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut out = Rat::zero();
        for c in self.coeffs.iter().rev() {
            out = out * x + c;
        }
        out
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() <= 0
    }

    /// Monic product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() <= 0 {
            let lc = self.lc();
            return self.scale(&lc.recip());
        }
        let p = self.exact_div(&g).expect("gcd divides");
        let lc = p.lc();
        p.scale(&lc.recip())
    }

    /// Resultant over Q via the Euclidean remainder sequence.
    pub fn resultant(&self, other: &Self) -> Rat {
        let mut a = self.clone();
        let mut b = other.clone();
        if a.is_zero() || b.is_zero() {
            return Rat::zero();
        }
        let mut acc = Rat::one();
        loop {
            if b.degree() == 0 {
                return acc * pow_rat(&b.lc(), a.degree() as u32);
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return Rat::zero();
            }
            // res(a,b) = (-1)^{deg a · deg b} lc(b)^{deg a − deg r} res(b, r)
            let sign = if (a.degree() * b.degree()) % 2 == 1 { rat(-1) } else { rat(1) };
            acc *= sign * pow_rat(&b.lc(), (a.degree() - r.degree()) as u32);
            a = b;
            b = r;
        }
    }

    /// Discriminant: (−1)^{d(d−1)/2} Res(f, f′)/lc(f).
    pub fn discriminant(&self) -> Rat {
        let d = self.degree();
        if d <= 0 {
            return Rat::one();
        }
        let res = self.resultant(&self.derivative());
        let sign = if (d * (d - 1) / 2) % 2 == 1 { rat(-1) } else { rat(1) };
        sign * res / self.lc()
    }
}

fn pow_rat(v: &Rat, e: u32) -> Rat {
    let mut out = Rat::one();
    for _ in 0..e {
        out *= v;
    }
    out
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
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
            match i {
                0 => write!(f, "{a}")?,
                1 if a.is_one() => write!(f, "x")?,
                1 => write!(f, "{a}*x")?,
                _ if a.is_one() => write!(f, "x^{i}")?,
                _ => write!(f, "{a}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Minimal ring interface so the determinant code works over Q, Q[x], and
/// the sparse multivariate ring alike.
pub trait Ring: Clone {
    fn ring_zero() -> Self;
    fn ring_is_zero(&self) -> bool;
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
    fn ring_neg(&self) -> Self;
}

impl Ring for Rat {
    fn ring_zero() -> Self {
        Rat::zero()
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_neg(&self) -> Self {
        -self
    }
}

impl Ring for UPoly {
    fn ring_zero() -> Self {
        UPoly::zero()
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn ring_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
}

/// Exact determinant over any commutative ring via Laplace expansion with
/// dynamic programming on column subsets: O(2^n · n) ring multiplications,
/// no division needed. Fine for the n ≤ 12 matrices that show up here.
pub fn determinant<T: Ring>(mat: &[Vec<T>]) -> T {
    let n = mat.len();
    assert!(n > 0, "empty determinant not supported");
    assert!(mat.iter().all(|r| r.len() == n), "square matrix required");
    assert!(n <= 20, "subset DP determinant limited to small matrices");
    // minors[S] = det of rows 0..|S| on column set S
    let mut cur: BTreeMap<u32, T> = BTreeMap::new();
    for (j, entry) in mat[0].iter().enumerate() {
        if !entry.ring_is_zero() {
            cur.insert(1u32 << j, entry.clone());
        }
    }
    for row in mat.iter().take(n).skip(1) {
        let mut next: BTreeMap<u32, T> = BTreeMap::new();
        for (s, minor) in &cur {
            for (j, entry) in row.iter().enumerate() {
                if entry.ring_is_zero() || s & (1 << j) != 0 {
                    continue;
                }
                // each already-chosen column right of j is an inversion
                let above = (s >> (j + 1)).count_ones();
                let mut term = minor.ring_mul(entry);
                if above % 2 == 1 {
                    term = term.ring_neg();
                }
                let ns = s | (1 << j);
                match next.get_mut(&ns) {
                    Some(acc) => *acc = acc.ring_add(&term),
                    None => {
                        next.insert(ns, term);
                    }
                }
            }
        }
        next.retain(|_, v| !v.ring_is_zero());
        cur = next;
    }
    let full = (1u32 << n) - 1;
    cur.remove(&full).unwrap_or_else(T::ring_zero)
}

/// Sylvester resultant of two polynomials given by coefficient slices
/// (index = degree) over any ring.
pub fn resultant_ring<T: Ring>(f: &[T], g: &[T]) -> T {
    let df = f.len() - 1;
    let dg = g.len() - 1;
    assert!(df > 0 || dg > 0, "resultant of two constants");
    let n = df + dg;
    let mut mat = vec![vec![T::ring_zero(); n]; n];
    for i in 0..dg {
        for (k, c) in f.iter().enumerate() {
            mat[i][i + df - k] = c.clone();
        }
    }
    for i in 0..df {
        for (k, c) in g.iter().enumerate() {
            mat[dg + i][i + dg - k] = c.clone();
        }
    }
    determinant(&mat)
}

/// Sparse multivariate Laurent polynomial over Q with a fixed variable
/// count. Exponents may be negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<i32>, Rat>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        MPoly { nvars, terms }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::var_pow(nvars, i, 1)
    }

    pub fn var_pow(nvars: usize, i: usize, e: i32) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = e;
        let mut terms = BTreeMap::new();
        terms.insert(exps, Rat::one());
        MPoly { nvars, terms }
    }

    pub fn monomial(nvars: usize, exps: Vec<i32>, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MPoly { nvars, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (k, v) in &other.terms {
            let e = out.terms.entry(k.clone()).or_insert_with(Rat::zero);
            *e += v;
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MPoly::zero(self.nvars);
        let (small, big) =
            if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        for (ka, ca) in &small.terms {
            for (kb, cb) in &big.terms {
                let k: Vec<i32> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                let e = out.terms.entry(k).or_insert_with(Rat::zero);
                *e += ca * cb;
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut out = Self::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        out
    }

    /// Evaluate at a rational point; values must be nonzero wherever a
    /// negative exponent occurs.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        let mut out = Rat::zero();
        for (k, c) in &self.terms {
            let mut term = c.clone();
            for (e, v) in k.iter().zip(point) {
                match e.cmp(&0) {
                    std::cmp::Ordering::Equal => {}
                    std::cmp::Ordering::Greater => {
                        for _ in 0..*e {
                            term *= v;
                        }
                    }
                    std::cmp::Ordering::Less => {
                        let inv = v.recip();
                        for _ in 0..e.unsigned_abs() {
                            term *= &inv;
                        }
                    }
                }
            }
            out += term;
        }
        out
    }

    /// Substitute each variable by the given polynomial (negative exponents
    /// only allowed when the substitute is a single monomial).
    pub fn substitute(&self, subs: &[MPoly]) -> MPoly {
        assert_eq!(subs.len(), self.nvars);
        let nv = subs.first().map_or(0, |s| s.nvars);
        let mut out = MPoly::zero(nv);
        for (k, c) in &self.terms {
            let mut term = MPoly::constant(nv, c.clone());
            for (e, s) in k.iter().zip(subs) {
                match e.cmp(&0) {
                    std::cmp::Ordering::Equal => {}
                    std::cmp::Ordering::Greater => term = term.mul(&s.pow(*e as u32)),
                    std::cmp::Ordering::Less => {
                        assert_eq!(s.num_terms(), 1, "negative power of a non-monomial");
                        let (mk, mc) = s.terms.iter().next().unwrap();
                        let inv = MPoly::monomial(
                            nv,
                            mk.iter().map(|x| -x).collect(),
                            mc.recip(),
                        );
                        term = term.mul(&inv.pow(e.unsigned_abs()));
                    }
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// View as a univariate polynomial in variable `i` (which must have
    /// nonnegative exponents); returns coefficients in the other variables.
    pub fn coeffs_in_var(&self, i: usize) -> Vec<MPoly> {
        let deg = self.terms.keys().map(|k| k[i]).max().unwrap_or(0);
        assert!(self.terms.keys().all(|k| k[i] >= 0), "Laurent in main variable");
        let mut out = vec![MPoly::zero(self.nvars); deg as usize + 1];
        for (k, c) in &self.terms {
            let mut kk = k.clone();
            let d = kk[i] as usize;
            kk[i] = 0;
            let e = out[d].terms.entry(kk).or_insert_with(Rat::zero);
            *e += c;
        }
        for p in &mut out {
            p.terms.retain(|_, v| !v.is_zero());
        }
        out
    }
}

impl Ring for MPoly {
    fn ring_zero() -> Self {
        // nvars is recovered on first add/mul; a 0-var zero acts as absorbing
        MPoly::zero(0)
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn ring_add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        self.add(other)
    }
    fn ring_mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero(self.nvars.max(other.nvars));
        }
        self.mul(other)
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
}

/// Cauchy interpolation: recover a rational function n(x)/d(x) with
/// deg n ≤ num_bound, deg d ≤ den_bound from samples (x_i, y_i) at distinct
/// points. Needs at least num_bound + den_bound + 1 samples; extra samples
/// act as checks (mismatch → error).
///
/// The interpolation runs modulo a sequence of word-size primes (the
/// extended Euclidean scheme over Q suffers from catastrophic coefficient
/// growth); the coefficients are then recovered by Chinese remaindering
/// and rational number reconstruction, and the result is verified against
/// every sample exactly.
pub fn rational_reconstruct(
    samples: &[(Rat, Rat)],
    num_bound: usize,
    den_bound: usize,
) -> Result<(UPoly, UPoly)> {
    let need = num_bound + den_bound + 1;
    if samples.len() < need {
        return Err(Error::InvalidArgument(format!(
            "need {need} samples, got {}",
            samples.len()
        )));
    }
    let pts = &samples[..need];
    let mut acc: Option<ModularAccumulator> = None;
    let mut prime = 1u64 << 62;
    for _ in 0..2000 {
        prime = modp::prev_prime(prime);
        let Some((num_p, den_p)) = cauchy_mod_p(pts, num_bound, den_bound, prime) else {
            continue;
        };
        let sig = (num_p.len(), den_p.len());
        match &mut acc {
            Some(a) if sig == a.sig => a.push(prime, &num_p, &den_p),
            Some(a) if sig < a.sig => continue, // degree drop: bad prime
            _ => acc = Some(ModularAccumulator::new(sig, prime, &num_p, &den_p)),
        }
        let a = acc.as_ref().expect("accumulator exists");
        if a.modulus.bits() < 64 {
            continue; // give the residues at least two primes
        }
        let Some((num, den)) = a.lift() else { continue };
        // exact verification against every sample, including spares
        let ok = samples.iter().all(|(x, y)| {
            let dv = den.eval(x);
            !dv.is_zero() && num.eval(x) / dv == *y
        });
        if ok {
            return Ok((num, den));
        }
    }
    Err(Error::InvalidArgument("rational reconstruction failed".into()))
}

/// CRT accumulator for the coefficient vectors of the modular images,
/// keyed by the (deg+1) signature of the reduced fraction.
struct ModularAccumulator {
    sig: (usize, usize),
    modulus: num_bigint::BigInt,
    num: Vec<num_bigint::BigInt>,
    den: Vec<num_bigint::BigInt>,
}

impl ModularAccumulator {
    fn new(sig: (usize, usize), p: u64, num_p: &[u64], den_p: &[u64]) -> Self {
        let big = |v: &[u64]| v.iter().map(|&c| num_bigint::BigInt::from(c)).collect();
        ModularAccumulator {
            sig,
            modulus: num_bigint::BigInt::from(p),
            num: big(num_p),
            den: big(den_p),
        }
    }

    fn push(&mut self, p: u64, num_p: &[u64], den_p: &[u64]) {
        let pb = num_bigint::BigInt::from(p);
        // inverse of the old modulus mod p
        let m_mod_p = modp::bigint_mod(&self.modulus, p);
        let Some(inv) = modp::inv(m_mod_p, p) else { return };
        let merge = |acc: &mut Vec<num_bigint::BigInt>, img: &[u64]| {
            for (a, &b) in acc.iter_mut().zip(img) {
                // a + m * ((b - a) * m^{-1} mod p)
                let a_mod_p = modp::bigint_mod(&*a, p);
                let diff = modp::mul(modp::sub(b, a_mod_p, p), inv, p);
                *a += &self.modulus * num_bigint::BigInt::from(diff);
            }
        };
        merge(&mut self.num, num_p);
        merge(&mut self.den, den_p);
        self.modulus *= pb;
    }

    /// rational number reconstruction of every coefficient
    fn lift(&self) -> Option<(UPoly, UPoly)> {
        let lift_vec = |v: &[num_bigint::BigInt]| -> Option<Vec<Rat>> {
            v.iter().map(|c| modp::rat_from_residue(c, &self.modulus)).collect()
        };
        let num = UPoly::new(lift_vec(&self.num)?);
        let den = UPoly::new(lift_vec(&self.den)?);
        if den.is_zero() {
            return None;
        }
        Some((num, den))
    }
}

/// Cauchy interpolation over Z/p: returns the coefficient vectors of the
/// reduced fraction with a monic denominator, or None for a bad prime.
fn cauchy_mod_p(
    pts: &[(Rat, Rat)],
    num_bound: usize,
    den_bound: usize,
    p: u64,
) -> Option<(Vec<u64>, Vec<u64>)> {
    let n = pts.len();
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for (x, y) in pts {
        xs.push(modp::rat_mod(x, p)?);
        ys.push(modp::rat_mod(y, p)?);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if xs[i] == xs[j] {
                return None; // sample points collide mod p
            }
        }
    }
    // modulus M = prod (x - x_i)
    let mut m = vec![0u64; n + 1];
    m[0] = 1;
    for (k, &xi) in xs.iter().enumerate() {
        let neg = modp::sub(0, xi, p);
        m[k + 1] = m[k];
        for d in (1..=k).rev() {
            m[d] = modp::add(modp::mul(m[d], neg, p), m[d - 1], p);
        }
        m[0] = modp::mul(m[0], neg, p);
    }
    // Lagrange interpolant I with I(x_i) = y_i
    let mut interp = vec![0u64; n];
    let mut li = vec![0u64; n]; // scratch for prod_{j != i} (x - x_j)
    for i in 0..n {
        li.iter_mut().for_each(|c| *c = 0);
        li[0] = 1;
        let mut deg = 0usize;
        let mut denom = 1u64;
        for j in 0..n {
            if i == j {
                continue;
            }
            let neg = modp::sub(0, xs[j], p);
            li[deg + 1] = li[deg];
            for d in (1..=deg).rev() {
                li[d] = modp::add(modp::mul(li[d], neg, p), li[d - 1], p);
            }
            li[0] = modp::mul(li[0], neg, p);
            deg += 1;
            denom = modp::mul(denom, modp::sub(xs[i], xs[j], p), p);
        }
        let scale = modp::mul(ys[i], modp::inv(denom, p)?, p);
        for d in 0..n {
            interp[d] = modp::add(interp[d], modp::mul(li[d], scale, p), p);
        }
    }
    // extended Euclid on (M, I) until the remainder degree drops to the bound
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    let mut r0 = m;
    let mut r1 = interp;
    trim(&mut r0);
    trim(&mut r1);
    let mut t0: Vec<u64> = vec![];
    let mut t1: Vec<u64> = vec![1];
    while r1.len() > num_bound + 1 {
        // divide r0 by r1
        let mut rem = r0.clone();
        let mut q = vec![0u64; rem.len().saturating_sub(r1.len()) + 1];
        let lead_inv = modp::inv(*r1.last()?, p)?;
        while rem.len() >= r1.len() && !rem.is_empty() {
            let shift = rem.len() - r1.len();
            let coef = modp::mul(*rem.last()?, lead_inv, p);
            q[shift] = coef;
            for (d, &c) in r1.iter().enumerate() {
                rem[shift + d] = modp::sub(rem[shift + d], modp::mul(coef, c, p), p);
            }
            trim(&mut rem);
        }
        // t = t0 - q * t1
        let mut t = t0.clone();
        t.resize(t.len().max(q.len() + t1.len()), 0);
        for (dq, &cq) in q.iter().enumerate() {
            if cq == 0 {
                continue;
            }
            for (dt, &ct) in t1.iter().enumerate() {
                t[dq + dt] = modp::sub(t[dq + dt], modp::mul(cq, ct, p), p);
            }
        }
        trim(&mut t);
        r0 = std::mem::replace(&mut r1, rem);
        t0 = std::mem::replace(&mut t1, t);
        if r1.is_empty() {
            break;
        }
    }
    let _ = r0;
    let _ = t0;
    if t1.is_empty() || t1.len() > den_bound + 1 {
        return None;
    }
    // monic denominator
    let inv = modp::inv(*t1.last()?, p)?;
    let num: Vec<u64> = r1.iter().map(|&c| modp::mul(c, inv, p)).collect();
    let den: Vec<u64> = t1.iter().map(|&c| modp::mul(c, inv, p)).collect();
    Some((num, den))
}

/// word-size modular arithmetic helpers
mod modp {
    use crate::Rat;
    use num_traits::{Signed, ToPrimitive, Zero};

    pub fn add(a: u64, b: u64, p: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % p as u128) as u64
    }

    pub fn sub(a: u64, b: u64, p: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + (p - b)
        }
    }

    pub fn mul(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    pub fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut out = 1u64;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                out = mul(out, a, p);
            }
            a = mul(a, a, p);
            e >>= 1;
        }
        out
    }

    pub fn inv(a: u64, p: u64) -> Option<u64> {
        if a % p == 0 {
            None
        } else {
            Some(powm(a, p - 2, p))
        }
    }

    pub fn bigint_mod(v: &num_bigint::BigInt, p: u64) -> u64 {
        use num_integer::Integer;
        v.mod_floor(&num_bigint::BigInt::from(p))
            .to_u64()
            .expect("residue fits in u64")
    }

    /// image of a rational number mod p; None when the denominator vanishes
    pub fn rat_mod(r: &Rat, p: u64) -> Option<u64> {
        let den = bigint_mod(r.denom(), p);
        let num = bigint_mod(r.numer(), p);
        Some(mul(num, inv(den, p)?, p))
    }

    /// rational number reconstruction: find u/v with a ≡ u v^{-1} (mod m)
    /// and |u|, v below sqrt(m/2), via the half-extended Euclid algorithm
    pub fn rat_from_residue(a: &num_bigint::BigInt, m: &num_bigint::BigInt) -> Option<Rat> {
        use num_bigint::BigInt;
        let bound: BigInt = (m >> 1u32).sqrt();
        let mut r0 = m.clone();
        let mut r1 = a.clone();
        let mut t0 = BigInt::from(0);
        let mut t1 = BigInt::from(1);
        while r1 > bound {
            let q = &r0 / &r1;
            let r = &r0 - &q * &r1;
            let t = &t0 - &q * &t1;
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t);
        }
        if t1.is_zero() || t1.abs() > bound {
            return None;
        }
        if t1.is_negative() {
            r1 = -r1;
            t1 = -t1;
        }
        Some(Rat::new(r1, t1))
    }

    /// largest prime strictly below n (Miller-Rabin, deterministic for u64)
    pub fn prev_prime(mut n: u64) -> u64 {
        loop {
            n -= 1;
            if is_prime(n) {
                return n;
            }
        }
    }

    fn is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            if n % q == 0 {
                return n == q;
            }
        }
        let d = n - 1;
        let s = d.trailing_zeros();
        let d = d >> s;
        'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            let mut x = powm(a, d, n);
            if x == 1 || x == n - 1 {
                continue;
            }
            for _ in 1..s {
                x = mul(x, x, n);
                if x == n - 1 {
                    continue 'witness;
                }
            }
            return false;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    #[test]
    fn divrem_and_gcd() {
        // (x²−1) = (x−1)(x+1)
        let f = UPoly::from_i64(&[-1, 0, 1]);
        let g = UPoly::from_i64(&[-1, 1]);
        let (q, r) = f.divrem(&g);
        assert!(r.is_zero());
        assert_eq!(q, UPoly::from_i64(&[1, 1]));
        let h = UPoly::from_i64(&[1, 1]);
        assert_eq!(f.gcd(&h), h);
        assert_eq!(f.gcd(&UPoly::from_i64(&[1, 0, 1])).degree(), 0);
    }

    #[test]
    fn resultant_and_discriminant() {
        // Res(x²−1, x−2) = value of x²−1 at 2, = 3... with sign conventions:
        // Res(f,g) = lc(g)^{deg f} ∏ f(roots of g) up to symmetry; check via
        // the standard identity Res(f,g)=lc(f)^{dg}∏g(α_i).
        let f = UPoly::from_i64(&[-1, 0, 1]);
        let g = UPoly::from_i64(&[-2, 1]);
        // roots of f: ±1; Res = lc(f)^1 · g(1)·g(−1) = (−1)(−3) = 3
        assert_eq!(f.resultant(&g), rat(3));
        // discriminant of x²+bx+c is b²−4c
        let f = UPoly::new(vec![rat(5), rat(3), rat(1)]);
        assert_eq!(f.discriminant(), rat(9 - 20));
        // (x−1)²(x−2): not squarefree
        let f = UPoly::from_i64(&[-2, 5, -4, 1]);
        assert!(!f.is_squarefree());
        assert_eq!(f.squarefree_part(), UPoly::from_i64(&[2, -3, 1]));
        assert_eq!(f.discriminant(), rat(0));
    }

    #[test]
    fn sylvester_matches_prs_resultant() {
        let f = UPoly::from_i64(&[2, 0, -3, 1]);
        let g = UPoly::from_i64(&[-1, 4, 1]);
        let sylv = resultant_ring::<Rat>(&f.coeffs, &g.coeffs);
        assert_eq!(sylv, f.resultant(&g));
    }

    #[test]
    fn determinant_small() {
        let m = vec![vec![rat(1), rat(2)], vec![rat(3), rat(4)]];
        assert_eq!(determinant(&m), rat(-2));
        let m = vec![
            vec![rat(2), rat(0), rat(1)],
            vec![rat(1), rat(1), rat(0)],
            vec![rat(0), rat(3), rat(1)],
        ];
        assert_eq!(determinant(&m), rat(5));
    }

    #[test]
    fn upoly_entries_determinant() {
        // det [[x, 1], [1, x]] = x² − 1
        let x = UPoly::x();
        let one = UPoly::one();
        let m = vec![vec![x.clone(), one.clone()], vec![one, x]];
        assert_eq!(determinant(&m), UPoly::from_i64(&[-1, 0, 1]));
    }

    #[test]
    fn mpoly_product_of_differences() {
        // Discr of ∏(x+t_i) should be ∏_{i<j}(t_i − t_j)², via the Sylvester
        // resultant over Q[t_1,t_2,t_3].
        let nv = 3;
        let x_coeffs = {
            // c(x) = ∏(x + t_i): coefficients are elementary symmetric polys
            let mut c = vec![MPoly::one(nv)];
            for i in 0..nv {
                let t = MPoly::var(nv, i);
                // multiply by (x + t_i)
                let mut next = vec![MPoly::zero(nv); c.len() + 1];
                for (d, coef) in c.iter().enumerate() {
                    next[d + 1] = next[d + 1].add(coef);
                    next[d] = next[d].add(&coef.mul(&t));
                }
                c = next;
            }
            c
        };
        let deriv: Vec<MPoly> = x_coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(d, c)| c.scale(&rat(d as i64)))
            .collect();
        let res = resultant_ring::<MPoly>(&x_coeffs, &deriv);
        // disc = ±res/lc; degree 3 → sign (−1)^{3·2/2}=−1
        let disc = res.neg();
        let mut expect = MPoly::one(nv);
        for i in 0..nv {
            for j in i + 1..nv {
                let d = MPoly::var(nv, i).sub(&MPoly::var(nv, j));
                expect = expect.mul(&d.mul(&d));
            }
        }
        assert_eq!(disc, expect);
    }

    #[test]
    fn mpoly_eval_and_subst() {
        let nv = 2;
        // f = t0² t1^{-1} + 3
        let f = MPoly::monomial(nv, vec![2, -1], rat(1)).add(&MPoly::constant(nv, rat(3)));
        assert_eq!(f.eval(&[rat(4), rat(2)]), rat(8 + 3));
        // substitute t0 = s², t1 = s (one variable s)
        let subs = vec![MPoly::var_pow(1, 0, 2), MPoly::var(1, 0)];
        let g = f.substitute(&subs);
        assert_eq!(g, MPoly::var_pow(1, 0, 3).add(&MPoly::constant(1, rat(3))));
    }

    #[test]
    fn reconstruct_rational_function() {
        // target: (x² + 1)/(x − 3)
        let num = UPoly::from_i64(&[1, 0, 1]);
        let den = UPoly::from_i64(&[-3, 1]);
        let samples: Vec<(Rat, Rat)> = (4..12)
            .map(|i| {
                let x = rat(i);
                let y = num.eval(&x) / den.eval(&x);
                (x, y)
            })
            .collect();
        let (n, d) = rational_reconstruct(&samples, 2, 1).unwrap();
        assert_eq!(n, num);
        assert_eq!(d, den);
        // polynomial case
        let samples: Vec<(Rat, Rat)> =
            (0..7).map(|i| (rat(i), num.eval(&rat(i)))).collect();
        let (n, d) = rational_reconstruct(&samples, 2, 1).unwrap();
        assert_eq!(n, num);
        assert_eq!(d, UPoly::one());
        let _ = ratio(1, 2);
    }
}
