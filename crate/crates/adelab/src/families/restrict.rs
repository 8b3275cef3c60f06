//! Degenerations of the toric families. Setting a node coefficient to zero
//! either cuts the polytope along the ray from p_star to that node, or — for
//! the corner node itself — straightens the corner, turning the shape into an
//! A-type shape of one smaller index. The pieces are identified against the
//! toric catalogue as marked polytopes, and the priming rules translate rows
//! of degenerations of a pure shape into rows for its primed shapes.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::lattice::{build_root_system, LatticeVector, NodeLabel, RootKind, RootSystem};
use crate::shapes::{
    node_positions, polytope, prime, print_shape, validate, Decor, LatticePolytope, Shape, SideRef,
};

use super::{detect_internal, naive_family, CoeffExpr, FamilyEquation};

// ---------------------------------------------------------------------------
// public types
// ---------------------------------------------------------------------------

/// Priming marks carried by the ambient shape, to be applied to the outer
/// sides of the end components of a degeneration row, one prime at a time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SidePrime {
    pub left: u8,
    pub right: u8,
}

/// One irreducible component of a degenerate fiber, together with the
/// restricted coefficient system it inherits from the ambient family.
///
/// The coefficients stay expressed on the ambient diagram with the zeroed
/// nodes removed: `ambient_labels` lists the surviving ambient nodes in the
/// ambient node order, which is the coordinate order of the `CoeffExpr`s.
/// When the degeneration straightens a corner first, "ambient" refers to the
/// surviving chain of the original diagram (in chain order).
#[derive(Debug, Clone)]
pub struct ComponentFamily {
    pub shape: Shape,
    /// component node label -> ambient node label
    pub node_map: BTreeMap<NodeLabel, NodeLabel>,
    /// surviving ambient nodes, in the coordinate order of `coefficients`
    pub ambient_labels: Vec<NodeLabel>,
    /// restricted coefficients, keyed by the component's node labels
    pub coefficients: BTreeMap<NodeLabel, CoeffExpr>,
    /// ambient nodes lying on the open cut segments bounding this piece;
    /// they become gluing parameters between neighboring components
    pub gluing: Vec<NodeLabel>,
}

impl ComponentFamily {
    /// Re-express the coefficients in the component's own node coordinates.
    /// Fails if some coefficient involves a surviving ambient node outside
    /// this component (a gluing or cross-component parameter).
    pub fn project(&self) -> Result<BTreeMap<NodeLabel, CoeffExpr>> {
        let (kind, rank) = self.shape.kind_rank();
        if rank == 0 {
            return Ok(BTreeMap::new());
        }
        let rs = build_root_system(kind, rank)?;
        let mut cols: Vec<usize> = Vec::with_capacity(rank);
        for l in &rs.node_labels {
            let amb = self.node_map.get(l).ok_or_else(|| {
                Error::InvalidArgument(format!("component node {l} has no ambient image"))
            })?;
            let k = self
                .ambient_labels
                .iter()
                .position(|x| x == amb)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!("{amb} is not a surviving ambient node"))
                })?;
            cols.push(k);
        }
        let mut out = BTreeMap::new();
        for (l, e) in &self.coefficients {
            let mut ne = CoeffExpr::zero(rank);
            for (w, c) in &e.terms {
                for (k, &x) in w.iter().enumerate() {
                    if x != 0 && !cols.contains(&k) {
                        return Err(Error::InvalidArgument(format!(
                            "coefficient of {l} involves the outside node {}",
                            self.ambient_labels[k]
                        )));
                    }
                }
                ne.add_term(cols.iter().map(|&k| w[k]).collect(), c.clone());
            }
            out.insert(*l, ne);
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// geometry helpers
// ---------------------------------------------------------------------------

fn sub(a: [i64; 2], b: [i64; 2]) -> [i64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: [i64; 2], b: [i64; 2]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Primitive direction and lattice length of a nonzero vector.
fn primitive(v: [i64; 2]) -> ([i64; 2], i64) {
    let g = num_integer::gcd(v[0].abs(), v[1].abs());
    ([v[0] / g, v[1] / g], g)
}

fn on_open_segment(a: [i64; 2], b: [i64; 2], p: [i64; 2]) -> bool {
    if p == a || p == b {
        return false;
    }
    cross(sub(b, a), sub(p, a)) == 0
        && (p[0] - a[0]) * (p[0] - b[0]) + (p[1] - a[1]) * (p[1] - b[1]) < 0
}

fn contains_closed(verts: &[[i64; 2]], p: [i64; 2]) -> bool {
    (0..verts.len()).all(|i| {
        let a = verts[i];
        let b = verts[(i + 1) % verts.len()];
        cross(sub(b, a), sub(p, a)) >= 0
    })
}

fn signed_area2(verts: &[[i64; 2]]) -> i64 {
    let mut s = 0;
    for i in 0..verts.len() {
        let a = verts[i];
        let b = verts[(i + 1) % verts.len()];
        s += a[0] * b[1] - b[0] * a[1];
    }
    s
}

/// Boundary lattice points counterclockwise, starting at p_star.
fn boundary_chain(poly: &LatticePolytope) -> Result<Vec<[i64; 2]>> {
    let v = &poly.vertices;
    let start = v
        .iter()
        .position(|&p| p == poly.p_star)
        .ok_or_else(|| Error::InvalidArgument("p_star is not a vertex".into()))?;
    let mut pts = Vec::new();
    for k in 0..v.len() {
        let a = v[(start + k) % v.len()];
        let b = v[(start + k + 1) % v.len()];
        let (d, g) = primitive(sub(b, a));
        for t in 0..g {
            pts.push([a[0] + d[0] * t, a[1] + d[1] * t]);
        }
    }
    Ok(pts)
}

// ---------------------------------------------------------------------------
// cutting the polytope
// ---------------------------------------------------------------------------

struct RawPiece {
    /// counterclockwise vertices, starting with the ambient p_star
    verts: Vec<[i64; 2]>,
    /// ambient node indices belonging to this piece
    nodes: Vec<usize>,
    /// ambient node indices on the open cut segments bounding the piece
    gluing: Vec<usize>,
}

fn cut_pieces(
    poly: &LatticePolytope,
    positions: &[[i64; 2]],
    zero: &BTreeSet<usize>,
) -> Result<Vec<RawPiece>> {
    let ps = poly.p_star;
    let chain = boundary_chain(poly)?;
    let l = chain.len();
    let mut cuts: Vec<(usize, usize)> = Vec::new();
    for &i in zero {
        let q = positions[i];
        let pos = chain.iter().position(|&p| p == q).ok_or_else(|| {
            Error::InvalidArgument(format!("node at {q:?} is not on the boundary"))
        })?;
        cuts.push((pos, i));
    }
    cuts.sort_unstable();
    let vertex_set: BTreeSet<[i64; 2]> = poly.vertices.iter().cloned().collect();
    let mut bounds = vec![0usize];
    bounds.extend(cuts.iter().map(|c| c.0));
    bounds.push(l);
    let mut pieces: Vec<RawPiece> = Vec::new();
    for w in bounds.windows(2) {
        let (s, e) = (w[0], w[1]);
        let mut verts = vec![ps];
        if s != 0 {
            verts.push(chain[s]);
        }
        for pt in chain.iter().take(e.min(l)).skip(s + 1) {
            if vertex_set.contains(pt) {
                verts.push(*pt);
            }
        }
        if e != l {
            verts.push(chain[e]);
        }
        // drop collinear fake corners
        loop {
            let n = verts.len();
            let mut removed = false;
            for i in 0..n {
                let a = verts[(i + n - 1) % n];
                let b = verts[i];
                let c = verts[(i + 1) % n];
                if cross(sub(b, a), sub(c, b)) == 0 {
                    verts.remove(i);
                    removed = true;
                    break;
                }
            }
            if !removed {
                break;
            }
        }
        if verts.len() < 3 || signed_area2(&verts) <= 0 {
            return Err(Error::InvalidArgument(
                "degenerate piece in the polytope subdivision".into(),
            ));
        }
        pieces.push(RawPiece { verts, nodes: vec![], gluing: vec![] });
    }
    // assign the surviving nodes to pieces, or to cut segments (gluing)
    for (j, &p) in positions.iter().enumerate() {
        if zero.contains(&j) {
            continue;
        }
        let mut glued = false;
        for (t, &(_, i)) in cuts.iter().enumerate() {
            if on_open_segment(ps, positions[i], p) {
                // the cut with bounds index t+1 separates pieces t and t+1
                pieces[t].gluing.push(j);
                pieces[t + 1].gluing.push(j);
                glued = true;
            }
        }
        if glued {
            continue;
        }
        let owner = pieces.iter().position(|piece| contains_closed(&piece.verts, p));
        match owner {
            Some(t) => pieces[t].nodes.push(j),
            None => {
                return Err(Error::InvalidArgument(format!(
                    "node at {p:?} falls outside every piece"
                )))
            }
        }
    }
    Ok(pieces)
}

// ---------------------------------------------------------------------------
// classification of marked pieces
// ---------------------------------------------------------------------------

/// All type III shapes with a toric model, up to the given index.
fn toric_candidates(n_max: i64) -> Vec<Shape> {
    let sides = [(Decor::None, 0u8), (Decor::None, 1), (Decor::Minus, 0)];
    let mut out = Vec::new();
    for series in [RootKind::A, RootKind::D, RootKind::E] {
        for index in 0..=n_max {
            for (ld, lp) in sides {
                for (rd, rp) in sides {
                    let s = Shape {
                        affine: false,
                        series,
                        index,
                        left_decor: ld,
                        right_decor: rd,
                        left_primes: lp,
                        right_primes: rp,
                        fold_left: false,
                        fold_right: false,
                    };
                    if validate(&s).is_ok() && polytope(&s).is_ok() && node_positions(&s).is_ok() {
                        out.push(s);
                    }
                }
            }
        }
    }
    out
}

struct Classified {
    shape: Shape,
    /// candidate node label -> ambient node index
    node_map: BTreeMap<NodeLabel, usize>,
}

fn candidate_labels(shape: &Shape) -> Result<Vec<NodeLabel>> {
    let (kind, rank) = shape.kind_rank();
    if rank == 0 {
        return Ok(vec![]);
    }
    Ok(build_root_system(kind, rank)?.node_labels.clone())
}

/// Match a piece against the toric catalogue: find a unimodular map M and a
/// translation taking the piece onto a candidate polytope, with p_star going
/// to p_star and nodes onto nodes. Orientation-preserving matches are
/// preferred, so the two mirror variants of an A shape stay distinct; D and E
/// shapes have a single chirality in the catalogue and may need det = -1.
fn classify_piece(
    piece: &RawPiece,
    positions: &[[i64; 2]],
    ps: [i64; 2],
    candidates: &[Shape],
) -> Result<Classified> {
    let verts = &piece.verts;
    let n = verts.len();
    let (u1, l1) = primitive(sub(verts[1], ps));
    let (u2, l2) = primitive(sub(verts[n - 1], ps));
    let area2 = signed_area2(verts);
    for det_plus in [true, false] {
        'cand: for cand in candidates {
            if cand.index != piece.nodes.len() as i64 {
                continue;
            }
            let cpoly = polytope(cand).expect("candidates are toric");
            if cpoly.vertices.len() != n || signed_area2(&cpoly.vertices) != area2 {
                continue;
            }
            let ci = cpoly
                .vertices
                .iter()
                .position(|&p| p == cpoly.p_star)
                .expect("p_star is a vertex");
            let (v1, m1) = primitive(sub(cpoly.vertices[(ci + 1) % n], cpoly.p_star));
            let (v2, m2) = primitive(sub(cpoly.vertices[(ci + n - 1) % n], cpoly.p_star));
            let (t1, t2) = if det_plus {
                if l1 != m1 || l2 != m2 {
                    continue;
                }
                (v1, v2)
            } else {
                if l1 != m2 || l2 != m1 {
                    continue;
                }
                (v2, v1)
            };
            // solve M u1 = t1, M u2 = t2 over the integers
            let d = cross(u1, u2);
            if d == 0 {
                continue;
            }
            let raw = [
                t1[0] * u2[1] - t2[0] * u1[1],
                -t1[0] * u2[0] + t2[0] * u1[0],
                t1[1] * u2[1] - t2[1] * u1[1],
                -t1[1] * u2[0] + t2[1] * u1[0],
            ];
            if raw.iter().any(|x| x % d != 0) {
                continue;
            }
            let m = [[raw[0] / d, raw[1] / d], [raw[2] / d, raw[3] / d]];
            if m[0][0] * m[1][1] - m[0][1] * m[1][0] != if det_plus { 1 } else { -1 } {
                continue;
            }
            let t = [
                cpoly.p_star[0] - m[0][0] * ps[0] - m[0][1] * ps[1],
                cpoly.p_star[1] - m[1][0] * ps[0] - m[1][1] * ps[1],
            ];
            let apply = |p: [i64; 2]| {
                [
                    m[0][0] * p[0] + m[0][1] * p[1] + t[0],
                    m[1][0] * p[0] + m[1][1] * p[1] + t[1],
                ]
            };
            let mapped: BTreeSet<[i64; 2]> = verts.iter().map(|&p| apply(p)).collect();
            let cverts: BTreeSet<[i64; 2]> = cpoly.vertices.iter().cloned().collect();
            if mapped != cverts {
                continue;
            }
            let labels = candidate_labels(cand)?;
            let (cpos, _, _, _) = node_positions(cand).expect("candidates are toric");
            let mut node_map = BTreeMap::new();
            for &j in &piece.nodes {
                let img = apply(positions[j]);
                match cpos.iter().position(|&p| p == img) {
                    Some(k) => {
                        node_map.insert(labels[k], j);
                    }
                    None => continue 'cand,
                }
            }
            if node_map.len() != piece.nodes.len() {
                continue;
            }
            return Ok(Classified { shape: cand.clone(), node_map });
        }
    }
    Err(Error::NoToricModel(format!(
        "no toric shape matches the piece with vertices {verts:?}"
    )))
}

// ---------------------------------------------------------------------------
// corner straightening
// ---------------------------------------------------------------------------

/// The shape obtained by removing the corner node, and the surviving nodes
/// of the original diagram in chain order (the order of the new A-type
/// nodes). The left side keeps its lattice length: D keeps a long side,
/// E and left-primed A shapes leave a short side behind.
fn straightened_shape(shape: &Shape) -> Result<(Shape, Vec<NodeLabel>)> {
    let m = shape.index;
    let mk = |ld: Decor, lp: u8, rd: Decor, rp: u8| -> Result<Shape> {
        let s = Shape {
            affine: false,
            series: RootKind::A,
            index: m - 1,
            left_decor: ld,
            right_decor: rd,
            left_primes: lp,
            right_primes: rp,
            fold_left: shape.fold_left,
            fold_right: shape.fold_right,
        };
        validate(&s)?;
        Ok(s)
    };
    match shape.series {
        RootKind::D => {
            let mut chain = vec![NodeLabel::Pp(1), NodeLabel::P(0)];
            chain.extend((1..=m - 3).map(|i| NodeLabel::P(i as i32)));
            Ok((mk(Decor::None, 0, shape.right_decor, shape.right_primes)?, chain))
        }
        RootKind::E => {
            let mut chain = vec![NodeLabel::Pp(2), NodeLabel::Pp(1), NodeLabel::P(0)];
            chain.extend((1..=m - 4).map(|i| NodeLabel::P(i as i32)));
            Ok((mk(Decor::Minus, 0, shape.right_decor, shape.right_primes)?, chain))
        }
        RootKind::A => {
            if shape.left_decor == Decor::None && shape.left_primes == 1 {
                let chain = (2..=m).map(|i| NodeLabel::P(i as i32)).collect();
                Ok((mk(Decor::Minus, 0, shape.right_decor, shape.right_primes)?, chain))
            } else if shape.right_decor == Decor::None && shape.right_primes == 1 {
                let chain = (1..=m - 1).map(|i| NodeLabel::P(i as i32)).collect();
                Ok((mk(shape.left_decor, shape.left_primes, Decor::Minus, 0)?, chain))
            } else {
                Err(Error::InvalidArgument(format!(
                    "{} has no corner to straighten",
                    print_shape(shape)
                )))
            }
        }
    }
}

/// Restrict a coefficient at several zeroed nodes jointly: a term survives
/// iff the root coordinates of (norm - weight) vanish at every zeroed node.
fn restrict_expr(
    rs: &RootSystem,
    expr: &CoeffExpr,
    betas: &BTreeSet<usize>,
    norm: &[i64],
) -> Result<CoeffExpr> {
    let mut out = CoeffExpr::zero(expr.rank - betas.len());
    for (w, c) in &expr.terms {
        let diff = LatticeVector::doubled(norm.iter().zip(w).map(|(a, b)| a - b).collect());
        let n = rs.integer_root_coords(&diff)?;
        if n.iter().any(|&x| x < 0) {
            return Err(Error::InvalidArgument(format!(
                "term {w:?} is not below the normalizing weight {norm:?}"
            )));
        }
        if betas.iter().any(|&b| n[b] != 0) {
            continue;
        }
        let ww: Vec<i64> = w
            .iter()
            .enumerate()
            .filter(|(i, _)| !betas.contains(i))
            .map(|(_, x)| *x)
            .collect();
        out.add_term(ww, c.clone());
    }
    Ok(out)
}

/// Straighten the corner of a family: remove the corner node, restrict every
/// surviving coefficient, and re-express it on the new A-type chain.
fn straighten_family(
    fam: &FamilyEquation,
) -> Result<(FamilyEquation, BTreeMap<NodeLabel, NodeLabel>)> {
    let i0 = fam.internal.ok_or_else(|| {
        Error::InvalidArgument(format!("{} has no corner node", print_shape(&fam.shape)))
    })?;
    let (new_shape, chain) = straightened_shape(&fam.shape)?;
    let rs = &fam.rs;
    let remaining: Vec<usize> = (0..rs.rank).filter(|&i| i != i0).collect();
    let betas: BTreeSet<usize> = [i0].into_iter().collect();
    let mut fam2 = naive_family(&new_shape)?;
    let mut cmap = BTreeMap::new();
    let mut node_map = BTreeMap::new();
    for (j, old_label) in chain.iter().enumerate() {
        let old_idx = rs.node_index(*old_label).expect("chain node exists");
        let norm = rs.fundamental_weight(old_idx).coords;
        let r = restrict_expr(rs, &fam.coefficient_map[old_label], &betas, &norm)?;
        // permute coordinates from "ambient order minus corner" to chain order
        let perm: Vec<usize> = chain
            .iter()
            .map(|l| {
                let idx = rs.node_index(*l).unwrap();
                remaining.iter().position(|&k| k == idx).unwrap()
            })
            .collect();
        let mut e = CoeffExpr::zero(chain.len());
        for (w, c) in &r.terms {
            e.add_term(perm.iter().map(|&k| w[k]).collect(), c.clone());
        }
        let new_label = NodeLabel::P((j + 1) as i32);
        cmap.insert(new_label, e);
        node_map.insert(new_label, *old_label);
    }
    fam2.coefficient_map = cmap;
    Ok((fam2, node_map))
}

// ---------------------------------------------------------------------------
// family-level restriction
// ---------------------------------------------------------------------------

/// Degenerate a toric family by sending the coefficients of the given nodes
/// to the boundary. Returns the irreducible components of the limit fiber,
/// left to right, with their restricted coefficient systems.
pub fn restrict_family(
    fam: &FamilyEquation,
    zeroed: &[NodeLabel],
) -> Result<Vec<ComponentFamily>> {
    let rs = &fam.rs;
    let mut zero_idx = BTreeSet::new();
    for l in zeroed {
        let i = rs.node_index(*l).ok_or_else(|| {
            Error::InvalidArgument(format!("no node {l} in {}", print_shape(&fam.shape)))
        })?;
        zero_idx.insert(i);
    }
    if zero_idx.is_empty() {
        return Err(Error::InvalidArgument("empty degeneration set".into()));
    }
    if let Some(i0) = fam.internal {
        if zero_idx.contains(&i0) {
            let (fam2, node_map) = straighten_family(fam)?;
            if zero_idx.len() == 1 {
                let ambient_labels: Vec<NodeLabel> = node_map.values().cloned().collect();
                return Ok(vec![ComponentFamily {
                    shape: fam2.shape.clone(),
                    coefficients: fam2.coefficient_map.clone(),
                    node_map,
                    ambient_labels,
                    gluing: vec![],
                }]);
            }
            // translate the remaining zeroed nodes to the new chain labels
            let inverse: BTreeMap<NodeLabel, NodeLabel> =
                node_map.iter().map(|(new, old)| (*old, *new)).collect();
            let remaining: Vec<NodeLabel> = zero_idx
                .iter()
                .filter(|&&i| i != i0)
                .map(|&i| inverse[&rs.node_labels[i]])
                .collect();
            return restrict_family(&fam2, &remaining);
        }
    }
    let poly = polytope(&fam.shape)?;
    let pieces = cut_pieces(&poly, &fam.positions, &zero_idx)?;
    let candidates = toric_candidates(fam.shape.index);
    let mut restricted: BTreeMap<usize, CoeffExpr> = BTreeMap::new();
    for i in 0..rs.rank {
        if zero_idx.contains(&i) {
            continue;
        }
        let norm = rs.fundamental_weight(i).coords;
        let expr = &fam.coefficient_map[&rs.node_labels[i]];
        restricted.insert(i, restrict_expr(rs, expr, &zero_idx, &norm)?);
    }
    let ambient_labels: Vec<NodeLabel> = (0..rs.rank)
        .filter(|i| !zero_idx.contains(i))
        .map(|i| rs.node_labels[i])
        .collect();
    let mut out = Vec::new();
    for piece in &pieces {
        let cls = classify_piece(piece, &fam.positions, poly.p_star, &candidates)?;
        let mut coefficients = BTreeMap::new();
        let mut node_map = BTreeMap::new();
        for (clabel, pidx) in &cls.node_map {
            node_map.insert(*clabel, rs.node_labels[*pidx]);
            coefficients.insert(*clabel, restricted[pidx].clone());
        }
        out.push(ComponentFamily {
            shape: cls.shape,
            node_map,
            ambient_labels: ambient_labels.clone(),
            coefficients,
            gluing: piece.gluing.iter().map(|&i| rs.node_labels[i]).collect(),
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// shape-level degenerations and the priming rules
// ---------------------------------------------------------------------------

/// Strip all priming marks, returning the underlying pure shape and the
/// number of marks on each side.
fn strip_primes(shape: &Shape) -> (Shape, SidePrime) {
    let mut base = shape.clone();
    let mut primes = SidePrime::default();
    match base.left_decor {
        Decor::None => {
            primes.left = base.left_primes;
            base.left_primes = 0;
        }
        Decor::Plus => {
            primes.left = 1;
            base.left_decor = Decor::Minus;
        }
        _ => {}
    }
    match base.right_decor {
        Decor::None => {
            primes.right = base.right_primes;
            base.right_primes = 0;
        }
        Decor::Plus => {
            primes.right = 1;
            base.right_decor = Decor::Minus;
        }
        _ => {}
    }
    (base, primes)
}

/// Apply one prime to the outer side of the end component of a row,
/// following the Priming Rules: priming A_1 turns it into a decorated A_0;
/// priming the long side of an A_0 shape drops its volume to zero and
/// deletes it; priming the short side of an A_0 shape deletes it and folds
/// the adjacent side of its neighbor.
fn apply_one_prime(row: &mut Vec<Shape>, side: SideRef) -> Result<()> {
    if row.is_empty() {
        return Err(Error::PrimingNotAllowed(
            "no component left to prime".into(),
        ));
    }
    let idx = match side {
        SideRef::Left => 0,
        SideRef::Right => row.len() - 1,
    };
    let comp = row[idx].clone();
    let plain_a = comp.series == RootKind::A && !comp.affine;
    if plain_a
        && comp.index == 1
        && comp.left_decor == Decor::None
        && comp.right_decor == Decor::None
        && comp.left_primes == 0
        && comp.right_primes == 0
    {
        let mut next = comp;
        next.index = 0;
        match side {
            SideRef::Left => next.left_decor = Decor::Minus,
            SideRef::Right => next.right_decor = Decor::Minus,
        }
        validate(&next)?;
        row[idx] = next;
        return Ok(());
    }
    if plain_a && comp.index == 0 {
        let decor = match side {
            SideRef::Left => comp.left_decor,
            SideRef::Right => comp.right_decor,
        };
        row.remove(idx);
        if decor == Decor::Minus && !row.is_empty() {
            // A_0^+ folds the adjacent side of the neighboring surface
            let nidx = match side {
                SideRef::Left => 0,
                SideRef::Right => row.len() - 1,
            };
            match side {
                SideRef::Left => row[nidx].fold_left = true,
                SideRef::Right => row[nidx].fold_right = true,
            }
        }
        return Ok(());
    }
    match prime(&comp, side, 1) {
        Ok(next) => {
            row[idx] = next;
            Ok(())
        }
        Err(Error::PrimingNotAllowed(msg)) if msg.contains("volume") => {
            row.remove(idx);
            Ok(())
        }
        Err(e) => Err(e),
    }
}

/// Apply the ambient priming marks to a row of pure degenerations, one
/// prime at a time, left marks to the left end and right marks to the
/// right end.
pub fn apply_priming_rules(row: &[Shape], primes: SidePrime) -> Result<Vec<Shape>> {
    let mut row = row.to_vec();
    for _ in 0..primes.left {
        apply_one_prime(&mut row, SideRef::Left)?;
    }
    for _ in 0..primes.right {
        apply_one_prime(&mut row, SideRef::Right)?;
    }
    Ok(row)
}

fn pure_degeneration_row(shape: &Shape, zero_idx: &BTreeSet<usize>) -> Result<Vec<Shape>> {
    let (positions, _, _, p_star) = node_positions(shape)?;
    let internal = detect_internal(&positions, p_star);
    if let Some(i0) = internal {
        if zero_idx.contains(&i0) {
            let (next, chain) = straightened_shape(shape)?;
            if zero_idx.len() == 1 {
                return Ok(vec![next]);
            }
            let (kind, rank) = shape.kind_rank();
            let rs = build_root_system(kind, rank)?;
            let translated: BTreeSet<usize> = zero_idx
                .iter()
                .filter(|&&i| i != i0)
                .map(|&i| {
                    chain
                        .iter()
                        .position(|l| rs.node_index(*l) == Some(i))
                        .expect("zeroed node survives the straightening")
                })
                .collect();
            return pure_degeneration_row(&next, &translated);
        }
    }
    let poly = polytope(shape)?;
    let pieces = cut_pieces(&poly, &positions, zero_idx)?;
    let candidates = toric_candidates(shape.index);
    pieces
        .iter()
        .map(|p| Ok(classify_piece(p, &positions, poly.p_star, &candidates)?.shape))
        .collect()
}

/// The row of component shapes of the degenerate fiber obtained by sending
/// the given nodes to the boundary: cut or straighten the underlying pure
/// shape, then apply the ambient priming marks one prime at a time.
pub fn degeneration_row(shape: &Shape, zeroed: &[NodeLabel]) -> Result<Vec<Shape>> {
    validate(shape)?;
    if shape.affine {
        return Err(Error::FamilyUnavailable(format!(
            "degeneration rows are defined for type III shapes, not {}",
            print_shape(shape)
        )));
    }
    let (base, primes) = strip_primes(shape);
    let (kind, rank) = base.kind_rank();
    let rs = build_root_system(kind, rank)?;
    let mut zero_idx = BTreeSet::new();
    for l in zeroed {
        let i = rs.node_index(*l).ok_or_else(|| {
            Error::InvalidArgument(format!("no node {l} in {}", print_shape(shape)))
        })?;
        zero_idx.insert(i);
    }
    if zero_idx.is_empty() {
        return Err(Error::InvalidArgument("empty degeneration set".into()));
    }
    let row = pure_degeneration_row(&base, &zero_idx)?;
    apply_priming_rules(&row, primes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{canonical_d_coeffs, canonical_family, DSeriesRep};
    use crate::shapes::parse_shape;
    use NodeLabel::{P, Pp, Ppp};

    fn sh(s: &str) -> Shape {
        parse_shape(s).unwrap()
    }

    fn row(sym: &str, zeroed: &[NodeLabel]) -> Vec<String> {
        degeneration_row(&sh(sym), zeroed)
            .unwrap()
            .iter()
            .map(print_shape)
            .collect()
    }

    #[test]
    fn d4_single_node_rows() {
        assert_eq!(row("D4", &[Pp(1)]), ["A0-", "'A3"]);
        assert_eq!(row("D4", &[P(0)]), ["A1", "A1"]);
        assert_eq!(row("D4", &[P(1)]), ["A3'", "-A0"]);
        assert_eq!(row("D4", &[Ppp]), ["A3"]);
    }

    #[test]
    fn a_series_priming_rows() {
        // pure A2- and its three primed variants, over the three boundary sets
        let cases: [(&str, [&[NodeLabel]; 3], [&[&str]; 3]); 4] = [
            (
                "A2-",
                [&[P(1)], &[P(2)], &[P(1), P(2)]],
                [&["A0-", "-A1-"], &["A1", "A0-"], &["A0-", "-A0", "A0-"]],
            ),
            (
                "'A2-",
                [&[P(1)], &[P(2)], &[P(1), P(2)]],
                [&["-A1-"], &["-A0", "A0-"], &["-A0", "A0-"]],
            ),
            (
                "''A2-",
                [&[P(1)], &[P(2)], &[P(1), P(2)]],
                [&["+A1-"], &["A0-!fL"], &["A0-!fL"]],
            ),
            (
                "A2+",
                [&[P(1)], &[P(2)], &[P(1), P(2)]],
                [&["A0-", "-A1+"], &["A1!fR"], &["A0-", "-A0!fR"]],
            ),
        ];
        for (sym, zeros, expected) in cases {
            for (z, e) in zeros.iter().zip(expected) {
                assert_eq!(row(sym, z), *e, "{sym} at {z:?}");
            }
        }
    }

    #[test]
    fn e_series_cut_rows() {
        assert_eq!(row("-E7", &[P(3)]), ["-E6-", "-A0"]);
        assert_eq!(row("-E8-", &[P(3)]), ["-E6-", "-A1-"]);
        assert_eq!(row("-E8-", &[Pp(2)]), ["-A0", "D7-"]);
        assert_eq!(row("-E6-", &[Pp(1)]), ["-A1-", "'A4-"]);
        assert_eq!(row("-E6-", &[P(0)]), ["-A2", "A2-"]);
        assert_eq!(row("-E6-", &[P(1)]), ["-A4'", "-A1-"]);
    }

    #[test]
    fn corner_straightening_rows() {
        assert_eq!(row("D5-", &[Ppp]), ["A4-"]);
        assert_eq!(row("D6", &[Ppp]), ["A5"]);
        assert_eq!(row("-E6-", &[Ppp]), ["-A5-"]);
        assert_eq!(row("-E7", &[Ppp]), ["-A6"]);
        assert_eq!(row("'A3", &[P(1)]), ["-A2"]);
        assert_eq!(row("A3'", &[P(3)]), ["A2-"]);
        // mixed: straighten first, then cut the resulting chain; the cut
        // side of the left piece has lattice length one, hence the minus
        assert_eq!(row("D6", &[Ppp, P(3)]), ["A4-", "-A0"]);
    }

    #[test]
    fn d4_gluing_node() {
        let fam = canonical_family(&sh("D4")).unwrap();
        let comps = restrict_family(&fam, &[P(0)]).unwrap();
        assert_eq!(comps.len(), 2);
        for c in &comps {
            assert_eq!(print_shape(&c.shape), "A1");
            assert_eq!(c.gluing, vec![Ppp]);
        }
        // left piece holds P'1, right piece holds P1
        assert_eq!(comps[0].node_map[&P(1)], Pp(1));
        assert_eq!(comps[1].node_map[&P(1)], P(1));
    }

    #[test]
    fn e8_restricts_to_canonical_d7() {
        let fam = canonical_family(&sh("-E8-")).unwrap();
        let comps = restrict_family(&fam, &[Pp(2)]).unwrap();
        assert_eq!(comps.len(), 2);
        assert_eq!(print_shape(&comps[0].shape), "-A0");
        assert_eq!(print_shape(&comps[1].shape), "D7-");
        // identity marking: the D7 piece keeps the ambient node labels
        for (k, v) in &comps[1].node_map {
            assert_eq!(k, v);
        }
        let got = comps[1].project().unwrap();
        let want = canonical_d_coeffs(7, DSeriesRep::GeneratingFunction).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn e6_restricts_to_canonical_d5() {
        let fam = canonical_family(&sh("-E6-")).unwrap();
        // right cut: the D5 piece appears mirrored
        let comps = restrict_family(&fam, &[P(2)]).unwrap();
        assert_eq!(comps.len(), 2);
        assert_eq!(print_shape(&comps[0].shape), "D5-");
        assert_eq!(print_shape(&comps[1].shape), "A0-");
        let want = canonical_d_coeffs(5, DSeriesRep::GeneratingFunction).unwrap();
        assert_eq!(comps[0].project().unwrap(), want);
        let map = &comps[0].node_map;
        assert_eq!(map[&Ppp], Ppp);
        assert_eq!(map[&Pp(1)], P(1));
        assert_eq!(map[&P(0)], P(0));
        assert_eq!(map[&P(1)], Pp(1));
        assert_eq!(map[&P(2)], Pp(2));
        // left cut: the D5 piece keeps the ambient labels
        let comps = restrict_family(&fam, &[Pp(2)]).unwrap();
        assert_eq!(print_shape(&comps[0].shape), "-A0");
        assert_eq!(print_shape(&comps[1].shape), "D5-");
        for (k, v) in &comps[1].node_map {
            assert_eq!(k, v);
        }
        assert_eq!(comps[1].project().unwrap(), want);
    }

    #[test]
    fn a4_restriction_law() {
        // cutting the naive A family gives the naive families of the pieces
        let fam = canonical_family(&sh("A4-")).unwrap();
        for i in 1..=4 {
            let comps = restrict_family(&fam, &[P(i)]).unwrap();
            assert_eq!(comps.len(), 2, "a_{i} = 0");
            for c in &comps {
                let got = c.project().unwrap();
                if c.shape.index == 0 {
                    assert!(got.is_empty());
                    continue;
                }
                let want = naive_family(&c.shape).unwrap().coefficient_map;
                assert_eq!(got, want, "a_{i} = 0, piece {}", print_shape(&c.shape));
            }
        }
    }

    #[test]
    fn d5_restriction_law() {
        let fam = canonical_family(&sh("D5-")).unwrap();
        for label in [Ppp, Pp(1), P(0), P(1), P(2)] {
            let comps = restrict_family(&fam, &[label]).unwrap();
            for c in &comps {
                if c.shape.index == 0 {
                    continue;
                }
                let got = c.project().unwrap();
                let want = if c.shape.series == RootKind::D {
                    canonical_d_coeffs(c.shape.index as usize, DSeriesRep::GeneratingFunction)
                        .unwrap()
                } else {
                    naive_family(&c.shape).unwrap().coefficient_map
                };
                assert_eq!(got, want, "zero {label}, piece {}", print_shape(&c.shape));
            }
        }
    }

    #[test]
    fn e6_restriction_law() {
        let fam = canonical_family(&sh("-E6-")).unwrap();
        for label in [Ppp, Pp(1), Pp(2), P(0), P(1), P(2)] {
            let comps = restrict_family(&fam, &[label]).unwrap();
            for c in &comps {
                if c.shape.index == 0 {
                    continue;
                }
                let got = c.project().unwrap();
                let want = if c.shape.series == RootKind::D {
                    canonical_d_coeffs(c.shape.index as usize, DSeriesRep::GeneratingFunction)
                        .unwrap()
                } else {
                    naive_family(&c.shape).unwrap().coefficient_map
                };
                assert_eq!(got, want, "zero {label}, piece {}", print_shape(&c.shape));
            }
        }
    }

    #[test]
    fn d6_straightening_gives_fundamental_characters() {
        // removing the corner node of the canonical D6 family leaves the
        // naive A5 family: every dressed coefficient loses exactly its
        // non-leading terms
        let fam = canonical_family(&sh("D6")).unwrap();
        let comps = restrict_family(&fam, &[Ppp]).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(print_shape(&comps[0].shape), "A5");
        let got = comps[0].project().unwrap();
        let want = naive_family(&comps[0].shape).unwrap().coefficient_map;
        assert_eq!(got, want);
    }
}
