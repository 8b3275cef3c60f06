//! Families of branch curves over the character torus: the naive families
//! with fundamental-character coefficients, the canonical coefficient systems
//! for the A, D and E series (generating function for D, explicit tables for
//! E), central fibers at t = 1, degeneration restriction with priming rules,
//! the compactified-relation checker, and the independent nodal-cubic
//! pipeline that recomputes the E-series coefficients from scratch.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::characters::{
    character_value, evaluate_at_unit_values, normalize_character, weyl_dimension, CharCache,
};
use crate::error::{Error, Result};
use crate::grpalg::{ga_add, GroupAlgebraElement, TorusPoint};
use crate::lattice::{build_root_system, LatticeVector, NodeLabel, RootKind, RootSystem};
use crate::poly::{MPoly, UPoly};
use crate::shapes::{node_positions, print_shape, LatticePolytope, Shape};
use crate::{rat, ratio, Rat};

mod restrict;
mod relations;
mod tjurina;

pub use relations::{check_compactified_relations, w0_involution_check, RelationReport};
pub use restrict::{
    apply_priming_rules, degeneration_row, restrict_family, ComponentFamily, SidePrime,
};
pub use tjurina::{tjurina_pipeline, tjurina_pipeline_e6, tjurina_pipeline_e7, TjurinaOutput};

// ---------------------------------------------------------------------------
// coefficient expressions
// ---------------------------------------------------------------------------

/// A ℤ-linear combination of irreducible characters of a fixed root system,
/// stored by the doubled coordinates of the dominant highest weight. The
/// zero weight stands for the constant function 1. Keeping coefficients
/// symbolic (instead of expanding each character into its weights) is what
/// makes the E7 and E8 tables usable: the expressions stay tiny while the
/// characters they denote have millions of weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffExpr {
    pub rank: usize,
    pub terms: BTreeMap<Vec<i64>, Rat>,
}

impl CoeffExpr {
    pub fn zero(rank: usize) -> Self {
        CoeffExpr { rank, terms: BTreeMap::new() }
    }

    pub fn constant(rank: usize, c: Rat) -> Self {
        let mut e = CoeffExpr::zero(rank);
        e.add_term(vec![0; rank], c);
        e
    }

    /// A single character χ(λ), λ in doubled coordinates.
    pub fn chi(weight: Vec<i64>) -> Self {
        let rank = weight.len();
        let mut e = CoeffExpr::zero(rank);
        e.add_term(weight, Rat::one());
        e
    }

    pub fn add_term(&mut self, weight: Vec<i64>, c: Rat) {
        assert_eq!(weight.len(), self.rank);
        let entry = self.terms.entry(weight).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            // re-borrow to remove; cheap since weights are small
            let k: Vec<i64> = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .unwrap();
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return CoeffExpr::zero(self.rank);
        }
        CoeffExpr {
            rank: self.rank,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at t = 1: characters become Weyl dimensions.
    pub fn dimension(&self, rs: &RootSystem) -> Result<Rat> {
        let mut s = Rat::zero();
        for (w, c) in &self.terms {
            let d = weyl_dimension(rs, &LatticeVector::doubled(w.clone()))?;
            s += c * Rat::from_integer(d);
        }
        Ok(s)
    }

    /// Exact value at a torus point, via the Weyl character formula.
    pub fn value_at(&self, rs: &RootSystem, t: &TorusPoint) -> Result<Rat> {
        let mut s = Rat::zero();
        for (w, c) in &self.terms {
            let v = character_value(rs, &LatticeVector::doubled(w.clone()), t)?;
            s += c * v;
        }
        Ok(s)
    }

    /// Value from cached symbolic character expansions, at a point given by
    /// its values on the unit doubled-weight basis. Fast when the same
    /// characters get evaluated at many points.
    pub fn value_cached(
        &self,
        rs: &RootSystem,
        cache: &mut CharCache,
        unit_values: &[Rat],
    ) -> Result<Rat> {
        let mut s = Rat::zero();
        for (w, c) in &self.terms {
            let chi = cache.get(rs, &LatticeVector::doubled(w.clone()))?;
            s += c * evaluate_at_unit_values(&chi.expansion, unit_values);
        }
        Ok(s)
    }

    /// Full symbolic expansion as an element of ℤ[Λ*]. Feasible through
    /// rank 7; rank 8 is refused upstream by the character builder.
    pub fn symbolic(&self, rs: &RootSystem, cache: &mut CharCache) -> Result<GroupAlgebraElement> {
        let mut out = GroupAlgebraElement::zero(&rs.name(), self.rank);
        for (w, c) in &self.terms {
            let chi = cache.get(rs, &LatticeVector::doubled(w.clone()))?;
            out = ga_add(&out, &chi.expansion.scale(c))?;
        }
        Ok(out)
    }

    /// Normalized expansion in the variables a_i = e^{−α_i}, relative to the
    /// given normalizing weight ϖ (doubled): e^{−ϖ}·Σ m_λ χ(λ) written with
    /// nonnegative a-exponents. Requires every term to satisfy λ ≤ ϖ.
    pub fn normalized(
        &self,
        rs: &RootSystem,
        cache: &mut CharCache,
        norm: &[i64],
    ) -> Result<BTreeMap<Vec<i64>, Rat>> {
        let mut out: BTreeMap<Vec<i64>, Rat> = BTreeMap::new();
        for (w, c) in &self.terms {
            let chi = cache.get(rs, &LatticeVector::doubled(w.clone()))?.clone();
            let nc = normalize_character(rs, &chi);
            let shift = LatticeVector::doubled(
                norm.iter().zip(w).map(|(a, b)| a - b).collect(),
            );
            let n0 = rs.integer_root_coords(&shift)?;
            if n0.iter().any(|&x| x < 0) {
                return Err(Error::InvalidArgument(format!(
                    "term {:?} is not below the normalizing weight {:?}",
                    w, norm
                )));
            }
            for (k, v) in nc.terms {
                let key: Vec<i64> = k.iter().zip(&n0).map(|(a, b)| a + b).collect();
                let entry = out.entry(key).or_insert_with(Rat::zero);
                *entry += c * v;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    /// Degeneration a_β → 0 of the coefficient normalized by ϖ (doubled
    /// coordinates). A term m·χ(λ) survives iff the α_β-coordinate of ϖ−λ
    /// vanishes; it then contributes m·χ(λ restricted) on the diagram with
    /// node β removed (the grading piece of a_β-degree zero is the
    /// irreducible module of the smaller diagram with the projected highest
    /// weight).
    pub fn restrict(&self, rs: &RootSystem, beta: usize, norm: &[i64]) -> Result<CoeffExpr> {
        let mut out = CoeffExpr::zero(self.rank - 1);
        for (w, c) in &self.terms {
            let diff =
                LatticeVector::doubled(norm.iter().zip(w).map(|(a, b)| a - b).collect());
            let n = rs.integer_root_coords(&diff)?;
            if n.iter().any(|&x| x < 0) {
                return Err(Error::InvalidArgument(format!(
                    "term {:?} not below normalizing weight {:?}",
                    w, norm
                )));
            }
            if n[beta] != 0 {
                continue;
            }
            let mut ww = w.clone();
            ww.remove(beta);
            out.add_term(ww, c.clone());
        }
        Ok(out)
    }

    /// Human-readable form like `x(w''+w3) - 6 x(w0)` with `x` for χ.
    pub fn pretty(&self, rs: &RootSystem) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (w, c) in self.terms.iter().rev() {
            let term = if w.iter().all(|&x| x == 0) {
                "1".to_string()
            } else {
                let mut parts = Vec::new();
                for (i, &x) in w.iter().enumerate() {
                    if x != 0 {
                        let m = x / 2;
                        let name = format!("w{}", rs.node_labels[i]);
                        if m == 1 {
                            parts.push(name);
                        } else {
                            parts.push(format!("{m}{name}"));
                        }
                    }
                }
                format!("x({})", parts.join("+"))
            };
            let first = s.is_empty();
            if c == &Rat::one() && term != "1" {
                let _ = write!(s, "{}{}", if first { "" } else { " + " }, term);
            } else if c == &-Rat::one() && term != "1" {
                let _ = write!(s, "{}{}", if first { "-" } else { " - " }, term);
            } else {
                let sign = if c < &Rat::zero() && !first { " - " } else if first { "" } else { " + " };
                let mag = if c < &Rat::zero() && !first { -c.clone() } else { c.clone() };
                if term == "1" {
                    let _ = write!(s, "{sign}{mag}");
                } else {
                    let _ = write!(s, "{sign}{mag} {term}");
                }
            }
        }
        s
    }
}

// ---------------------------------------------------------------------------
// family equations
// ---------------------------------------------------------------------------

/// The equation f of the branch divisor for a toric shape, in the normal
/// form of the A / ′A / D / E series. Monomials live at the lattice points
/// of the shape's polytope: p_star carries the square term −(v_*/2)²,
/// p_l and p_r the two monic boundary monomials, and each Dynkin node its
/// coefficient. For corner shapes the internal node sits inside the square:
/// v_* = (corner monomial) − c_int.
#[derive(Debug, Clone)]
pub struct FamilyEquation {
    pub shape: Shape,
    pub rs: RootSystem,
    /// node positions, in the root system's node order
    pub positions: Vec<[i64; 2]>,
    pub p_l: [i64; 2],
    pub p_r: [i64; 2],
    pub p_star: [i64; 2],
    /// index (into positions / node_labels) of the internal corner node
    pub internal: Option<usize>,
    pub coefficient_map: BTreeMap<NodeLabel, CoeffExpr>,
}

impl FamilyEquation {
    /// The set of lattice points carrying monomials of f.
    pub fn support(&self) -> BTreeSet<[i64; 2]> {
        let mut s: BTreeSet<[i64; 2]> = self.positions.iter().cloned().collect();
        s.insert(self.p_l);
        s.insert(self.p_r);
        s.insert(self.p_star);
        if let Some(i) = self.internal {
            let q = self.positions[i];
            s.insert([2 * q[0] - self.p_star[0], 2 * q[1] - self.p_star[1]]);
        }
        s
    }

    /// Assemble f with explicit rational values for the node coefficients.
    /// Returns the monomial map (position ↦ coefficient).
    pub fn assemble(&self, values: &BTreeMap<NodeLabel, Rat>) -> Result<BTreeMap<[i64; 2], Rat>> {
        let mut f: BTreeMap<[i64; 2], Rat> = BTreeMap::new();
        let mut add = |p: [i64; 2], c: Rat| {
            let e = f.entry(p).or_insert_with(Rat::zero);
            *e += c;
        };
        add(self.p_star, ratio(-1, 4));
        add(self.p_l, Rat::one());
        add(self.p_r, Rat::one());
        for (i, label) in self.rs.node_labels.iter().enumerate() {
            let c = values
                .get(label)
                .ok_or_else(|| Error::InvalidArgument(format!("missing value for node {label}")))?
                .clone();
            if self.internal == Some(i) {
                let q = self.positions[i];
                let q2 = [2 * q[0] - self.p_star[0], 2 * q[1] - self.p_star[1]];
                add(q, c.clone() / rat(2));
                add(q2, -(c.clone() * c) / rat(4));
            } else {
                add(self.positions[i], c);
            }
        }
        f.retain(|_, v| !v.is_zero());
        Ok(f)
    }

    /// Node coefficient values at a torus point.
    pub fn values_at(&self, t: &TorusPoint) -> Result<BTreeMap<NodeLabel, Rat>> {
        let mut out = BTreeMap::new();
        for (label, expr) in &self.coefficient_map {
            out.insert(*label, expr.value_at(&self.rs, t)?);
        }
        Ok(out)
    }

    /// Node coefficient values at t = 1 (Weyl dimensions).
    pub fn values_at_one(&self) -> Result<BTreeMap<NodeLabel, Rat>> {
        let mut out = BTreeMap::new();
        for (label, expr) in &self.coefficient_map {
            out.insert(*label, expr.dimension(&self.rs)?);
        }
        Ok(out)
    }
}

/// Convert a monomial map to an MPoly in (x, y), translating x so all
/// exponents are nonnegative. Returns the poly and the applied x-shift.
pub fn monomials_to_mpoly(f: &BTreeMap<[i64; 2], Rat>) -> (MPoly, i64) {
    let shift = f.keys().map(|p| p[0]).min().unwrap_or(0).min(0);
    let mut out = MPoly::zero(2);
    for (p, c) in f {
        out = out.add(&MPoly::monomial(
            2,
            vec![(p[0] - shift) as i32, p[1] as i32],
            c.clone(),
        ));
    }
    (out, shift)
}

fn shape_root_system(shape: &Shape) -> Result<RootSystem> {
    let (kind, rank) = shape.kind_rank();
    if rank == 0 {
        return Err(Error::FamilyUnavailable(format!(
            "{} has no moduli (rank 0)",
            print_shape(shape)
        )));
    }
    build_root_system(kind, rank)
}

/// Detect the internal corner node: for p_star = (0,2)-type shapes there is
/// none (the square term is −(y/2)²); for (2,2)-corner shapes it is the
/// unique node q with p_star − q = (±1, 1), preferring the left corner.
fn detect_internal(positions: &[[i64; 2]], p_star: [i64; 2]) -> Option<usize> {
    for want in [[p_star[0] - 1, p_star[1] - 1], [p_star[0] + 1, p_star[1] - 1]] {
        if let Some(i) = positions.iter().position(|&p| p == want) {
            return Some(i);
        }
    }
    None
}

/// The naive family of a toric shape: node coefficients are the fundamental
/// characters c = χ(ϖ) under the node-to-lattice-point correspondence.
pub fn naive_family(shape: &Shape) -> Result<FamilyEquation> {
    let rs = shape_root_system(shape)?;
    let (positions, p_l, p_r, p_star) = node_positions(shape)?;
    let internal = detect_internal(&positions, p_star);
    let mut coefficient_map = BTreeMap::new();
    for (i, label) in rs.node_labels.iter().enumerate() {
        let w = rs.fundamental_weight(i);
        coefficient_map.insert(*label, CoeffExpr::chi(w.coords));
        let _ = i;
    }
    Ok(FamilyEquation { shape: shape.clone(), rs, positions, p_l, p_r, p_star, internal, coefficient_map })
}

// ---------------------------------------------------------------------------
// Fibonacci polynomials and the D-series generating function
// ---------------------------------------------------------------------------

/// f_0 = 1, f_1 = x, f_{k+2} = x f_{k+1} − f_k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibonacciPolynomial {
    pub k: usize,
    pub coeffs: Vec<i64>,
}

impl FibonacciPolynomial {
    pub fn poly(&self) -> UPoly {
        UPoly::from_i64(&self.coeffs)
    }
}

pub fn fibonacci_polynomial(k: usize) -> FibonacciPolynomial {
    let mut a: Vec<i64> = vec![1];
    let mut b: Vec<i64> = vec![0, 1];
    if k == 0 {
        return FibonacciPolynomial { k, coeffs: a };
    }
    for _ in 1..k {
        // next = x·b − a
        let mut next = vec![0i64; b.len() + 1];
        for (i, &c) in b.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, &c) in a.iter().enumerate() {
            next[i] -= c;
        }
        a = b;
        b = next;
    }
    FibonacciPolynomial { k, coeffs: b }
}

/// The polynomials p_j(x): the coefficient of χ^j in the D-series
/// generating function 1/((1−χ²)(1−xχ+χ²)), for j = 0..=jmax.
fn d_series_pj(jmax: usize) -> Vec<UPoly> {
    // 1/(1−xχ+χ²) has χ-coefficients T_j with T_0=1, T_1=x,
    // T_j = x·T_{j−1} − T_{j−2}; multiplying by 1/(1−χ²) partial-sums
    // every other term.
    let mut t: Vec<UPoly> = Vec::with_capacity(jmax + 1);
    for j in 0..=jmax {
        let next = match j {
            0 => UPoly::one(),
            1 => UPoly::x(),
            _ => UPoly::x().mul(&t[j - 1]).sub(&t[j - 2]),
        };
        t.push(next);
    }
    (0..=jmax)
        .map(|j| {
            let mut s = UPoly::zero();
            let mut jj = j as i64;
            while jj >= 0 {
                s = s.add(&t[jj as usize]);
                jj -= 2;
            }
            s
        })
        .collect()
}

/// Same p_j via the Fibonacci closed form p_{2k} = f_k², p_{2k+1} = f_k f_{k+1}.
fn d_series_pj_fibonacci(jmax: usize) -> Vec<UPoly> {
    (0..=jmax)
        .map(|j| {
            let k = j / 2;
            let fk = fibonacci_polynomial(k).poly();
            if j % 2 == 0 {
                fk.mul(&fk)
            } else {
                fk.mul(&fibonacci_polynomial(k + 1).poly())
            }
        })
        .collect()
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Same p_j via the binomial formula for the entries c_{ij}: zero when j−i
/// is odd or i > j, and c_{i,i+2k} = Σ_{p=0}^{k} (−1)^p C(i+p, i).
fn d_series_pj_binomial(jmax: usize) -> Vec<UPoly> {
    (0..=jmax)
        .map(|j| {
            let mut coeffs = vec![Rat::zero(); j + 1];
            for i in (j % 2..=j).step_by(2) {
                let k = ((j - i) / 2) as i64;
                let mut s = 0i64;
                for p in 0..=k {
                    let b = binomial(i as i64 + p, i as i64);
                    s += if p % 2 == 0 { b } else { -b };
                }
                coeffs[i] = rat(s);
            }
            UPoly::new(coeffs)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DSeriesRep {
    GeneratingFunction,
    Fibonacci,
    Binomial,
}

/// Canonical D_n coefficients from one of the three equivalent
/// representations: substitute χ_j for χ^j in Σ_j p_j(x) χ^j, then set
/// χ_{n−2} = 1 and χ_j = 0 for j > n−2.
pub fn canonical_d_coeffs(n: usize, rep: DSeriesRep) -> Result<BTreeMap<NodeLabel, CoeffExpr>> {
    let rs = build_root_system(RootKind::D, n)?;
    let jmax = n - 2;
    let pj = match rep {
        DSeriesRep::GeneratingFunction => d_series_pj(jmax),
        DSeriesRep::Fibonacci => d_series_pj_fibonacci(jmax),
        DSeriesRep::Binomial => d_series_pj_binomial(jmax),
    };
    let mut map = BTreeMap::new();
    map.insert(NodeLabel::Ppp, CoeffExpr::chi(rs.fundamental_weight(0).coords));
    map.insert(NodeLabel::Pp(1), CoeffExpr::chi(rs.fundamental_weight(1).coords));
    // bottom chain: nodes P(0)..P(n−3) hold the coefficients of c(x) below
    // the monic x^{n−2}
    for i in 0..=(n - 3) {
        let mut expr = CoeffExpr::zero(n);
        for (j, p) in pj.iter().enumerate() {
            let coef = p.coeff(i);
            if coef.is_zero() {
                continue;
            }
            if j == jmax {
                expr.add_term(vec![0; n], coef);
            } else {
                let node = rs
                    .node_index(NodeLabel::P(j as i32))
                    .expect("bottom node exists");
                expr.add_term(rs.fundamental_weight(node).coords, coef);
            }
        }
        map.insert(NodeLabel::P(i as i32), expr);
    }
    Ok(map)
}

// ---------------------------------------------------------------------------
// E-series tables
// ---------------------------------------------------------------------------

fn weight_of(rs: &RootSystem, parts: &[(NodeLabel, i64)]) -> Vec<i64> {
    let mut w = vec![0i64; rs.rank];
    for (label, m) in parts {
        let i = rs.node_index(*label).expect("node exists");
        for (k, c) in rs.fundamental_weight(i).coords.iter().enumerate() {
            w[k] += m * c;
        }
    }
    w
}

fn e_table(rs: &RootSystem, rows: &[(NodeLabel, &[(i64, &[(NodeLabel, i64)])])]) -> BTreeMap<NodeLabel, CoeffExpr> {
    let mut map = BTreeMap::new();
    for (node, terms) in rows {
        let mut expr = CoeffExpr::zero(rs.rank);
        for (c, parts) in *terms {
            expr.add_term(weight_of(rs, parts), rat(*c));
        }
        map.insert(*node, expr);
    }
    map
}

fn canonical_e_coeffs(n: usize) -> Result<BTreeMap<NodeLabel, CoeffExpr>> {
    use NodeLabel::{Ppp, P, Pp};
    let rs = build_root_system(RootKind::E, n)?;
    let map = match n {
        6 => e_table(
            &rs,
            &[
                (Ppp, &[(1, &[(Ppp, 1)]), (-6, &[])]),
                (Pp(2), &[(1, &[(Pp(2), 1)])]),
                (Pp(1), &[(1, &[(Pp(1), 1)]), (-1, &[(P(2), 1)])]),
                (P(0), &[(1, &[(P(0), 1)]), (-3, &[(Ppp, 1)]), (9, &[])]),
                (P(1), &[(1, &[(P(1), 1)]), (-1, &[(Pp(2), 1)])]),
                (P(2), &[(1, &[(P(2), 1)])]),
            ],
        ),
        7 => e_table(
            &rs,
            &[
                (Ppp, &[(1, &[(Ppp, 1)]), (-6, &[(P(3), 1)])]),
                (Pp(2), &[(1, &[(Pp(2), 1)]), (-25, &[])]),
                (
                    Pp(1),
                    &[
                        (1, &[(Pp(1), 1)]),
                        (-1, &[(P(2), 1)]),
                        (-16, &[(Pp(2), 1)]),
                        (206, &[]),
                    ],
                ),
                (
                    P(0),
                    &[
                        (1, &[(P(0), 1)]),
                        (-3, &[(Ppp, 1), (P(3), 1)]),
                        (1, &[(Pp(2), 2)]),
                        (-12, &[(Pp(1), 1)]),
                        (9, &[(P(3), 2)]),
                        (16, &[(P(2), 1)]),
                        (69, &[(Pp(2), 1)]),
                        (-548, &[]),
                    ],
                ),
                (
                    P(1),
                    &[
                        (1, &[(P(1), 1)]),
                        (-1, &[(Pp(2), 1), (P(3), 1)]),
                        (-6, &[(Ppp, 1)]),
                        (28, &[(P(3), 1)]),
                    ],
                ),
                (P(2), &[(1, &[(P(2), 1)]), (-2, &[(Pp(2), 1)]), (23, &[])]),
                (P(3), &[(1, &[(P(3), 1)])]),
            ],
        ),
        8 => e_table(
            &rs,
            &[
                (
                    Ppp,
                    &[
                        (1, &[(Ppp, 1)]),
                        (-6, &[(P(3), 1)]),
                        (-35, &[(Pp(2), 1)]),
                        (920, &[(P(4), 1)]),
                        (-57505, &[]),
                    ],
                ),
                (
                    Pp(2),
                    &[(1, &[(Pp(2), 1)]), (-25, &[(P(4), 1)]), (2325, &[])],
                ),
                (
                    Pp(1),
                    &[
                        (1, &[(Pp(1), 1)]),
                        (-1, &[(P(2), 1)]),
                        (-16, &[(Pp(2), 1), (P(4), 1)]),
                        (-44, &[(Ppp, 1)]),
                        (206, &[(P(4), 2)]),
                        (360, &[(P(3), 1)]),
                        (2196, &[(Pp(2), 1)]),
                        (-51246, &[(P(4), 1)]),
                        (2401900, &[]),
                    ],
                ),
                (
                    P(0),
                    &[
                        (1, &[(P(0), 1)]),
                        (-3, &[(Ppp, 1), (P(3), 1)]),
                        (1, &[(Pp(2), 2), (P(4), 1)]),
                        (-12, &[(Pp(1), 1), (P(4), 1)]),
                        (-28, &[(Pp(2), 1), (Ppp, 1)]),
                        (9, &[(P(3), 2)]),
                        (16, &[(P(2), 1), (P(4), 1)]),
                        (-68, &[(P(1), 1)]),
                        (69, &[(Pp(2), 1), (P(4), 2)]),
                        (212, &[(Pp(2), 1), (P(3), 1)]),
                        (1024, &[(Ppp, 1), (P(4), 1)]),
                        (236, &[(Pp(2), 2)]),
                        (2453, &[(Pp(1), 1)]),
                        (-548, &[(P(4), 3)]),
                        (-5228, &[(P(3), 1), (P(4), 1)]),
                        (-1507, &[(P(2), 1)]),
                        (-42656, &[(Pp(2), 1), (P(4), 1)]),
                        (-107636, &[(Ppp, 1)]),
                        (488553, &[(P(4), 2)]),
                        (640064, &[(P(3), 1)]),
                        (2988404, &[(Pp(2), 1)]),
                        (-52027360, &[(P(4), 1)]),
                        (1484779780, &[]),
                    ],
                ),
                (
                    P(1),
                    &[
                        (1, &[(P(1), 1)]),
                        (-1, &[(Pp(2), 1), (P(3), 1)]),
                        (-6, &[(Ppp, 1), (P(4), 1)]),
                        (2, &[(Pp(2), 2)]),
                        (-17, &[(Pp(1), 1)]),
                        (28, &[(P(3), 1), (P(4), 1)]),
                        (-79, &[(P(2), 1)]),
                        (383, &[(Pp(2), 1), (P(4), 1)]),
                        (1429, &[(Ppp, 1)]),
                        (-4414, &[(P(4), 2)]),
                        (84, &[(P(3), 1)]),
                        (-49768, &[(Pp(2), 1)]),
                        (271934, &[(P(4), 1)]),
                        (4528192, &[]),
                    ],
                ),
                (
                    P(2),
                    &[
                        (1, &[(P(2), 1)]),
                        (-2, &[(Pp(2), 1), (P(4), 1)]),
                        (-9, &[(Ppp, 1)]),
                        (23, &[(P(4), 2)]),
                        (-114, &[(P(3), 1)]),
                        (601, &[(Pp(2), 1)]),
                        (7673, &[(P(4), 1)]),
                        (-955955, &[]),
                    ],
                ),
                (
                    P(3),
                    &[
                        (1, &[(P(3), 1)]),
                        (-3, &[(Pp(2), 1)]),
                        (-170, &[(P(4), 1)]),
                        (23405, &[]),
                    ],
                ),
                (P(4), &[(1, &[(P(4), 1)]), (-248, &[])]),
            ],
        ),
        _ => return Err(Error::UnsupportedRootSystem { kind: 'E', rank: n }),
    };
    Ok(map)
}

/// Canonical coefficient system of a pure shape: A-series coefficients are
/// the fundamental characters; D-series come from the generating function;
/// E-series from the explicit tables.
pub fn canonical_coeffs(shape: &Shape) -> Result<BTreeMap<NodeLabel, CoeffExpr>> {
    if shape.total_primes() > 0 || shape.affine {
        return Err(Error::FamilyUnavailable(format!(
            "canonical coefficients are defined for pure shapes, not {}",
            print_shape(shape)
        )));
    }
    let (kind, rank) = shape.kind_rank();
    match kind {
        RootKind::A => {
            let rs = build_root_system(kind, rank)?;
            Ok(rs
                .node_labels
                .iter()
                .enumerate()
                .map(|(i, l)| (*l, CoeffExpr::chi(rs.fundamental_weight(i).coords)))
                .collect())
        }
        RootKind::D => canonical_d_coeffs(rank, DSeriesRep::GeneratingFunction),
        RootKind::E => canonical_e_coeffs(rank),
    }
}

/// The naive-family structure with the canonical coefficient system.
pub fn canonical_family(shape: &Shape) -> Result<FamilyEquation> {
    let mut fam = naive_family(shape)?;
    fam.coefficient_map = canonical_coeffs(shape)?;
    Ok(fam)
}

// ---------------------------------------------------------------------------
// central fibers
// ---------------------------------------------------------------------------

/// The fiber of the canonical family at t = 1, with every character
/// evaluated to its Weyl dimension. For corner shapes the double-cover form
/// xyz = z² + c″z + (y-part) + c(x) is also reported.
#[derive(Debug, Clone)]
pub struct CentralFiber {
    pub shape: Shape,
    pub values: BTreeMap<NodeLabel, Rat>,
    /// the branch curve f with rational coefficients
    pub f: BTreeMap<[i64; 2], Rat>,
    /// right-hand side of xyz = Σ c_{k,l} y^k z^l … encoded as
    /// (z-exponent, y-exponent, x-exponent) ↦ coefficient; None for A shapes
    pub xyz_rhs: Option<BTreeMap<[usize; 3], Rat>>,
}

pub fn central_fiber(shape: &Shape) -> Result<CentralFiber> {
    let fam = canonical_family(shape)?;
    let values = fam.values_at_one()?;
    let f = fam.assemble(&values)?;
    let xyz_rhs = if fam.internal.is_some() {
        // xyz = z² + c″ z + Σ_k (y-side coefficients) y^k + c(x)
        let mut rhs: BTreeMap<[usize; 3], Rat> = BTreeMap::new();
        rhs.insert([2, 0, 0], Rat::one());
        for (i, label) in fam.rs.node_labels.iter().enumerate() {
            let v = values[label].clone();
            let p = fam.positions[i];
            if fam.internal == Some(i) {
                rhs.insert([1, 0, 0], v);
            } else if p[0] == 0 {
                rhs.insert([0, p[1] as usize, 0], v);
            } else if p[1] == 0 {
                rhs.insert([0, 0, p[0] as usize], v);
            } else {
                return Err(Error::FamilyUnavailable(format!(
                    "no xyz form for node position {:?} of {}",
                    p,
                    print_shape(shape)
                )));
            }
        }
        // monic boundary monomials y^{top} and x^{top}
        rhs.insert([0, fam.p_l[1] as usize, 0], Rat::one());
        rhs.insert([0, 0, fam.p_r[0] as usize], Rat::one());
        Some(rhs)
    } else {
        None
    };
    Ok(CentralFiber { shape: shape.clone(), values, f, xyz_rhs })
}

impl CentralFiber {
    /// Evaluate F = xyz − rhs and its three partials at a point.
    pub fn xyz_at(&self, p: &[Rat; 3]) -> Option<[Rat; 4]> {
        let rhs = self.xyz_rhs.as_ref()?;
        let (x, y, z) = (&p[0], &p[1], &p[2]);
        let pow = |b: &Rat, e: usize| -> Rat {
            let mut r = Rat::one();
            for _ in 0..e {
                r *= b;
            }
            r
        };
        let mut val = x * y * z;
        let mut dx = y * z;
        let mut dy = x * z;
        let mut dz = x * y;
        for ([ze, ye, xe], c) in rhs {
            let term = c * pow(z, *ze) * pow(y, *ye) * pow(x, *xe);
            val -= &term;
            if *xe > 0 {
                dx -= c * rat(*xe as i64) * pow(x, xe - 1) * pow(y, *ye) * pow(z, *ze);
            }
            if *ye > 0 {
                dy -= c * rat(*ye as i64) * pow(y, ye - 1) * pow(x, *xe) * pow(z, *ze);
            }
            if *ze > 0 {
                dz -= c * rat(*ze as i64) * pow(z, ze - 1) * pow(x, *xe) * pow(y, *ye);
            }
        }
        Some([val, dx, dy, dz])
    }
}

// ---------------------------------------------------------------------------
// helpers shared with the submodules
// ---------------------------------------------------------------------------

/// All lattice points of a convex lattice polygon (boundary included).
#[cfg(test)]
pub(crate) fn lattice_points(poly: &LatticePolytope) -> Vec<[i64; 2]> {
    let v = &poly.vertices;
    let xs: Vec<i64> = v.iter().map(|p| p[0]).collect();
    let ys: Vec<i64> = v.iter().map(|p| p[1]).collect();
    let (x0, x1) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
    let (y0, y1) = (*ys.iter().min().unwrap(), *ys.iter().max().unwrap());
    let mut out = Vec::new();
    for x in x0..=x1 {
        for y in y0..=y1 {
            // inside iff every edge (ccw) has the point on its left or on it
            let inside = (0..v.len()).all(|i| {
                let a = v[i];
                let b = v[(i + 1) % v.len()];
                (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]) >= 0
            });
            if inside {
                out.push([x, y]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::parse_shape;

    fn sh(s: &str) -> Shape {
        parse_shape(s).unwrap()
    }

    #[test]
    fn fibonacci_polynomials() {
        assert_eq!(fibonacci_polynomial(0).coeffs, vec![1]);
        assert_eq!(fibonacci_polynomial(1).coeffs, vec![0, 1]);
        assert_eq!(fibonacci_polynomial(2).coeffs, vec![-1, 0, 1]);
        assert_eq!(fibonacci_polynomial(3).coeffs, vec![0, -2, 0, 1]);
    }

    #[test]
    fn d_series_representations_agree() {
        for n in 4..=9usize {
            let a = canonical_d_coeffs(n, DSeriesRep::GeneratingFunction).unwrap();
            let b = canonical_d_coeffs(n, DSeriesRep::Fibonacci).unwrap();
            let c = canonical_d_coeffs(n, DSeriesRep::Binomial).unwrap();
            assert_eq!(a, b, "generating function vs Fibonacci at n={n}");
            assert_eq!(a, c, "generating function vs binomial at n={n}");
        }
    }

    #[test]
    fn d7_canonical_example() {
        // c(x) = (χ0+χ4) + (χ1−χ3+2)x + (χ2−2χ4)x² + (χ3−3)x³ + χ4x⁴ + x⁵
        let rs = build_root_system(RootKind::D, 7).unwrap();
        let map = canonical_d_coeffs(7, DSeriesRep::GeneratingFunction).unwrap();
        let w = |i: i32| rs.fundamental_weight(rs.node_index(NodeLabel::P(i)).unwrap()).coords;
        let mut c0 = CoeffExpr::chi(w(0));
        c0.add_term(w(4), rat(1));
        assert_eq!(map[&NodeLabel::P(0)], c0);
        let mut c1 = CoeffExpr::chi(w(1));
        c1.add_term(w(3), rat(-1));
        c1.add_term(vec![0; 7], rat(2));
        assert_eq!(map[&NodeLabel::P(1)], c1);
        let mut c2 = CoeffExpr::chi(w(2));
        c2.add_term(w(4), rat(-2));
        assert_eq!(map[&NodeLabel::P(2)], c2);
        let mut c3 = CoeffExpr::chi(w(3));
        c3.add_term(vec![0; 7], rat(-3));
        assert_eq!(map[&NodeLabel::P(3)], c3);
        assert_eq!(map[&NodeLabel::P(4)], CoeffExpr::chi(w(4)));
    }

    #[test]
    fn d4_canonical_equals_naive() {
        let shape = sh("D4");
        let naive = naive_family(&shape).unwrap();
        let canonical = canonical_coeffs(&shape).unwrap();
        assert_eq!(naive.coefficient_map, canonical);
    }

    #[test]
    fn a1_naive_and_central_fiber() {
        let shape = sh("A1");
        let fam = naive_family(&shape).unwrap();
        let support = fam.support();
        let expected: BTreeSet<[i64; 2]> =
            [[0, 2], [0, 0], [1, 0], [2, 0]].into_iter().collect();
        assert_eq!(support, expected);
        let cf = central_fiber(&shape).unwrap();
        // f = −(y/2)² + 1 + 2x + x² = −(y/2)² + (x+1)², node at (−1, 0)
        assert_eq!(cf.f[&[1, 0]], rat(2));
        let fx = |x: Rat, y: Rat| -> Rat {
            let mut s = Rat::zero();
            for (p, c) in &cf.f {
                let mut t = c.clone();
                for _ in 0..p[0].unsigned_abs() {
                    t *= &x;
                }
                for _ in 0..p[1].unsigned_abs() {
                    t *= &y;
                }
                s += t;
            }
            s
        };
        assert!(fx(rat(-1), rat(0)).is_zero());
        // ∂f/∂x = 2x + 2 vanishes at x = −1; ∂f/∂y = −y/2 vanishes at 0
        assert!(fx(rat(-1) + ratio(1, 7), rat(0)) == ratio(1, 49));
    }

    #[test]
    fn naive_support_lies_in_polytope() {
        for sym in ["A1", "A2-", "-A2", "A3", "A4-", "-A5-", "D4", "D6", "D5-", "-E6-", "-E7", "-E8-", "'A3", "'A5'", "D6'"] {
            let shape = sh(sym);
            let fam = naive_family(&shape).unwrap();
            let poly = crate::shapes::polytope(&shape).unwrap();
            let pts: BTreeSet<[i64; 2]> = lattice_points(&poly).into_iter().collect();
            for p in fam.support() {
                assert!(pts.contains(&p), "{sym}: support point {p:?} outside polytope");
            }
            // the three boundary monomials sit at vertices of the polytope
            for q in [fam.p_l, fam.p_r, fam.p_star] {
                assert!(
                    poly.vertices.contains(&q),
                    "{sym}: boundary monomial {q:?} is not a vertex"
                );
            }
        }
    }

    #[test]
    fn e6_central_fiber_matches() {
        let cf = central_fiber(&sh("-E6-")).unwrap();
        let rhs = cf.xyz_rhs.as_ref().unwrap();
        // xyz = z² + 72z + y³ + 27y² + 324y + 2700 + 324x + 27x² + x³
        let expect: BTreeMap<[usize; 3], i64> = [
            ([2, 0, 0], 1),
            ([1, 0, 0], 72),
            ([0, 3, 0], 1),
            ([0, 2, 0], 27),
            ([0, 1, 0], 324),
            ([0, 0, 0], 2700),
            ([0, 0, 1], 324),
            ([0, 0, 2], 27),
            ([0, 0, 3], 1),
        ]
        .into_iter()
        .collect();
        let got: BTreeMap<[usize; 3], Rat> = rhs.clone();
        assert_eq!(got.len(), expect.len());
        for (k, v) in expect {
            assert_eq!(got[&k], rat(v), "coefficient at {k:?}");
        }
        // singular point (−6, −6, −18)
        let vals = cf.xyz_at(&[rat(-6), rat(-6), rat(-18)]).unwrap();
        assert!(vals.iter().all(|v| v.is_zero()), "{vals:?}");
    }

    #[test]
    fn e7_central_fiber_matches() {
        let cf = central_fiber(&sh("-E7")).unwrap();
        let rhs = cf.xyz_rhs.clone().unwrap();
        // xyz = z² + 576z + y³ + 108y² + 5184y + 193536 + 17280x + 1296x² + 56x³ + x⁴
        let expect: BTreeMap<[usize; 3], i64> = [
            ([2, 0, 0], 1),
            ([1, 0, 0], 576),
            ([0, 3, 0], 1),
            ([0, 2, 0], 108),
            ([0, 1, 0], 5184),
            ([0, 0, 0], 193536),
            ([0, 0, 1], 17280),
            ([0, 0, 2], 1296),
            ([0, 0, 3], 56),
            ([0, 0, 4], 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(rhs.len(), expect.len());
        for (k, v) in expect {
            assert_eq!(rhs[&k], rat(v), "coefficient at {k:?}");
        }
        let vals = cf.xyz_at(&[rat(-12), rat(-24), rat(-144)]).unwrap();
        assert!(vals.iter().all(|v| v.is_zero()), "{vals:?}");
    }

    #[test]
    fn e8_central_fiber_matches() {
        let cf = central_fiber(&sh("-E8-")).unwrap();
        let rhs = cf.xyz_rhs.clone().unwrap();
        // xyz = z² + y³ + x⁵: every dressed coefficient vanishes at t = 1
        let expect: BTreeMap<[usize; 3], i64> =
            [([2, 0, 0], 1), ([0, 3, 0], 1), ([0, 0, 5], 1)].into_iter().collect();
        let nonzero: BTreeMap<[usize; 3], Rat> =
            rhs.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        assert_eq!(nonzero.len(), expect.len());
        for (k, v) in expect {
            assert_eq!(nonzero[&k], rat(v), "coefficient at {k:?}");
        }
        let vals = cf.xyz_at(&[rat(0), rat(0), rat(0)]).unwrap();
        assert!(vals.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn d_central_fibers_singular_at_stated_point() {
        for n in [4i64, 5, 6, 7] {
            let sym = if n % 2 == 0 { format!("D{n}") } else { format!("D{n}-") };
            let cf = central_fiber(&sh(&sym)).unwrap();
            let p2 = rat(-(1i64 << (n - 3)));
            let vals = cf.xyz_at(&[rat(-2), p2.clone(), p2]).unwrap();
            assert!(vals.iter().all(|v| v.is_zero()), "D{n}: {vals:?}");
        }
    }
}
