//! The shape catalogue: decorated Dynkin symbols, numerical invariants,
//! lattice polytopes, decorated diagrams, the priming operation, precursor
//! data, and the two-dimensional projection maps.
//!
//! A shape is a decorated Dynkin symbol such as `A3`, `'D6`, `-E7''` or
//! `wE8+'`. The two boundary sides of a type III surface are `left` and
//! `right`; a side is long (lattice length 2) or short (length 1), and can
//! be primed. Short sides carry a `-` which priming turns into a `+`; long
//! sides take up to two apostrophes. Affine (type II, `w`-prefixed) shapes
//! keep all decorations on the right by convention and allow up to four
//! primes on their single side.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{
    build_root_system, quotient_group, smith_normal_form, FiniteAbelianGroup, RootKind, Snf,
};

/// Decoration on one end of a symbol. `Star` only occurs on `wA1*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Decor {
    None,
    Minus,
    Plus,
    Star,
}

/// Which side of a type III shape an operation applies to. Affine shapes
/// have a single side; by convention it is addressed as `Right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SideRef {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Shape {
    pub affine: bool,
    pub series: RootKind,
    pub index: i64,
    pub left_decor: Decor,
    pub right_decor: Decor,
    pub left_primes: u8,
    pub right_primes: u8,
    pub fold_left: bool,
    pub fold_right: bool,
}

/// Internal view of one side of a type III shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SideState {
    /// Long side with 0..=2 primes.
    Long(u8),
    /// Short side; `true` once it has been primed (`-` became `+`).
    Short(bool),
}

impl SideState {
    fn marks(self) -> i64 {
        match self {
            SideState::Long(k) => k as i64,
            SideState::Short(p) => p as i64,
        }
    }
    fn length(self) -> i64 {
        match self {
            SideState::Long(k) => 2 - k as i64,
            SideState::Short(p) => 1 - p as i64,
        }
    }
}

impl Shape {
    pub fn pure(series: RootKind, index: i64) -> Result<Shape> {
        // "Pure" here means the highlighted table rows: for even A, E6, E8
        // and odd D the undecorated surface does not exist, so the minus
        // decorations are part of the pure shape.
        let (left_decor, right_decor) = match series {
            RootKind::A if index % 2 == 0 => (Decor::None, Decor::Minus),
            RootKind::A => (Decor::None, Decor::None),
            RootKind::D => {
                if index % 2 == 0 {
                    (Decor::None, Decor::None)
                } else {
                    (Decor::None, Decor::Minus)
                }
            }
            RootKind::E => match index {
                6 | 8 => (Decor::Minus, Decor::Minus),
                7 => (Decor::Minus, Decor::None),
                _ => return Err(Error::NoSuchShape(format!("E{index}"))),
            },
        };
        let shape = Shape {
            affine: false,
            series,
            index,
            left_decor,
            right_decor,
            left_primes: 0,
            right_primes: 0,
            fold_left: false,
            fold_right: false,
        };
        validate(&shape)?;
        Ok(shape)
    }

    pub fn symbol(&self) -> String {
        print_shape(self)
    }

    fn left_state(&self) -> SideState {
        match self.left_decor {
            Decor::None => SideState::Long(self.left_primes),
            Decor::Minus => SideState::Short(false),
            Decor::Plus => SideState::Short(true),
            Decor::Star => SideState::Long(0),
        }
    }

    fn right_state(&self) -> SideState {
        match self.right_decor {
            Decor::None => SideState::Long(self.right_primes),
            Decor::Minus => SideState::Short(false),
            Decor::Plus => SideState::Short(true),
            Decor::Star => SideState::Long(0),
        }
    }

    /// Total number of priming marks (a `+` counts as one prime).
    pub fn total_primes(&self) -> i64 {
        if self.affine {
            self.right_primes as i64 + if self.right_decor == Decor::Plus { 1 } else { 0 }
        } else {
            self.left_state().marks() + self.right_state().marks()
        }
    }

    pub fn is_pure(&self) -> bool {
        self.total_primes() == 0
    }

    /// The finite root system attached to the shape's weight lattice.
    pub fn kind_rank(&self) -> (RootKind, usize) {
        (self.series, self.index as usize)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_shape(self))
    }
}

// ---------------------------------------------------------------------------
// parsing and printing
// ---------------------------------------------------------------------------

pub fn print_shape(shape: &Shape) -> String {
    let mut s = String::new();
    match shape.left_decor {
        Decor::Minus => s.push('-'),
        Decor::Plus => s.push('+'),
        _ => {}
    }
    for _ in 0..shape.left_primes {
        s.push('\'');
    }
    if shape.affine {
        s.push('w');
    }
    s.push(match shape.series {
        RootKind::A => 'A',
        RootKind::D => 'D',
        RootKind::E => 'E',
    });
    s.push_str(&shape.index.to_string());
    match shape.right_decor {
        Decor::Minus => s.push('-'),
        Decor::Plus => s.push('+'),
        Decor::Star => s.push('*'),
        Decor::None => {}
    }
    for _ in 0..shape.right_primes {
        s.push('\'');
    }
    if shape.fold_left {
        s.push_str("!fL");
    }
    if shape.fold_right {
        s.push_str("!fR");
    }
    s
}

pub fn parse_shape(symbol: &str) -> Result<Shape> {
    let bad = |msg: &str| Error::ShapeParse(format!("{symbol}: {msg}"));
    let mut rest = symbol;
    let mut left_decor = Decor::None;
    if let Some(r) = rest.strip_prefix('-') {
        left_decor = Decor::Minus;
        rest = r;
    } else if let Some(r) = rest.strip_prefix('+') {
        left_decor = Decor::Plus;
        rest = r;
    }
    let mut left_primes = 0u8;
    while let Some(r) = rest.strip_prefix('\'') {
        left_primes += 1;
        rest = r;
        if left_primes > 2 {
            return Err(bad("at most two primes per side"));
        }
    }
    if left_decor != Decor::None && left_primes > 0 {
        return Err(bad("a short side takes - or +, not primes"));
    }
    let mut affine = false;
    if let Some(r) = rest.strip_prefix('w') {
        affine = true;
        rest = r;
    }
    let series = match rest.chars().next() {
        Some('A') => RootKind::A,
        Some('D') => RootKind::D,
        Some('E') => RootKind::E,
        _ => return Err(bad("expected series letter A, D or E")),
    };
    rest = &rest[1..];
    let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
    if digits.is_empty() {
        return Err(bad("expected an index"));
    }
    let index: i64 = digits.parse().map_err(|_| bad("index out of range"))?;
    rest = &rest[digits.len()..];
    let mut right_decor = Decor::None;
    match rest.chars().next() {
        Some('-') => {
            right_decor = Decor::Minus;
            rest = &rest[1..];
        }
        Some('+') => {
            right_decor = Decor::Plus;
            rest = &rest[1..];
        }
        Some('*') => {
            right_decor = Decor::Star;
            rest = &rest[1..];
        }
        _ => {}
    }
    let mut right_primes = 0u8;
    while let Some(r) = rest.strip_prefix('\'') {
        right_primes += 1;
        rest = r;
        if right_primes > 4 {
            return Err(bad("at most four primes"));
        }
    }
    let mut fold_left = false;
    let mut fold_right = false;
    loop {
        if let Some(r) = rest.strip_prefix("!fL") {
            fold_left = true;
            rest = r;
        } else if let Some(r) = rest.strip_prefix("!fR") {
            fold_right = true;
            rest = r;
        } else {
            break;
        }
    }
    if !rest.is_empty() {
        return Err(bad("trailing characters"));
    }
    let shape = Shape {
        affine,
        series,
        index,
        left_decor,
        right_decor,
        left_primes,
        right_primes,
        fold_left,
        fold_right,
    };
    validate(&shape)?;
    Ok(shape)
}

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

pub fn validate(shape: &Shape) -> Result<()> {
    let sym = print_shape(shape);
    let bad = |msg: &str| Err(Error::ShapeParse(format!("{sym}: {msg}")));
    if shape.affine {
        if shape.left_decor != Decor::None || shape.left_primes > 0 {
            return bad("affine shapes keep all decorations on the right");
        }
        if shape.fold_left || shape.fold_right {
            return bad("folds only apply to type III shapes");
        }
        match shape.series {
            RootKind::A => match (shape.index, shape.right_decor, shape.right_primes) {
                (m, Decor::None, 0) if m >= 1 && m % 2 == 1 => Ok(()),
                (1, Decor::Star, 0) => Ok(()),
                (0, Decor::Minus, 0) => Ok(()),
                (1, Decor::Star, _) => Err(Error::PrimingNotAllowed(
                    "primings of wA1* are not allowed".into(),
                )),
                (m, Decor::None, _) if m % 2 == 1 => Err(Error::PrimingNotAllowed(
                    "wA shapes of odd index have no boundary to prime".into(),
                )),
                (0, Decor::Minus, _) => Err(Error::PrimingNotAllowed(
                    "priming wA0- would drop the volume to 0".into(),
                )),
                _ => Err(Error::NoSuchShape(sym.clone())),
            },
            RootKind::D => {
                if shape.index < 4 || shape.index % 2 != 0 {
                    return Err(Error::NoSuchShape(sym.clone()));
                }
                if shape.right_decor != Decor::None {
                    return bad("wD takes primes only");
                }
                if shape.right_primes > 4 {
                    return Err(Error::PrimingNotAllowed(
                        "an affine long side takes at most 4 primes".into(),
                    ));
                }
                if shape.index - shape.right_primes as i64 <= 0 {
                    return Err(Error::PrimingNotAllowed(
                        "priming would drop the volume to 0".into(),
                    ));
                }
                Ok(())
            }
            RootKind::E => match shape.index {
                6 => Err(Error::NoSuchShape("no wE6 shape exists".into())),
                7 => {
                    if shape.right_decor != Decor::None {
                        return bad("wE7 takes primes only");
                    }
                    if shape.right_primes > 4 {
                        return Err(Error::PrimingNotAllowed(
                            "an affine long side takes at most 4 primes".into(),
                        ));
                    }
                    Ok(())
                }
                8 => match (shape.right_decor, shape.right_primes) {
                    (Decor::Minus, 0) => Ok(()),
                    (Decor::Plus, 0..=2) => Ok(()),
                    (Decor::Minus, _) => bad("prime wE8- by turning - into + first"),
                    _ => Err(Error::PrimingNotAllowed(
                        "wE8 takes at most 3 primes".into(),
                    )),
                },
                _ => Err(Error::NoSuchShape(sym.clone())),
            },
        }
    } else {
        if shape.left_decor == Decor::Star || shape.right_decor == Decor::Star {
            return bad("star decorations only occur on wA1*");
        }
        let l = shape.left_state();
        let r = shape.right_state();
        let short_l = matches!(l, SideState::Short(_));
        let short_r = matches!(r, SideState::Short(_));
        // primes were already capped at 2 by the parser; short sides must
        // not carry apostrophes on top of their +.
        if (short_l && shape.left_primes > 0) || (short_r && shape.right_primes > 0) {
            return bad("a short side takes - or +, not primes");
        }
        match shape.series {
            RootKind::A => {
                if shape.index < 0 {
                    return bad("negative index");
                }
                let odd = shape.index % 2 == 1;
                if odd && short_l != short_r {
                    return bad("odd A shapes have both sides long or both short");
                }
                if !odd && short_l == short_r {
                    return bad("even A shapes have exactly one short side");
                }
                if shape.index == 1 && !short_l && shape.total_primes() > 0 {
                    return Err(Error::PrimingNotAllowed(
                        "primings of A1 are not allowed".into(),
                    ));
                }
            }
            RootKind::D => {
                if shape.index < 4 {
                    return Err(Error::NoSuchShape(sym.clone()));
                }
                if short_l {
                    return bad("the left side of a D shape is long");
                }
                let odd = shape.index % 2 == 1;
                if odd && !short_r {
                    return bad("odd D shapes have a short right side (use a - or +)");
                }
                if !odd && short_r {
                    return bad("even D shapes have two long sides");
                }
                if odd && shape.index < 5 {
                    return Err(Error::NoSuchShape(sym.clone()));
                }
            }
            RootKind::E => match shape.index {
                6 | 8 => {
                    if !short_l || !short_r {
                        return bad("E6 and E8 shapes have two short sides");
                    }
                }
                7 => {
                    if !short_l || short_r {
                        return bad("E7 shapes have a short left and a long right side");
                    }
                }
                _ => return Err(Error::NoSuchShape(sym.clone())),
            },
        }
        let v = pure_volume(shape) - shape.total_primes();
        if v <= 0 {
            return Err(Error::PrimingNotAllowed(format!(
                "{sym}: priming would drop the volume to {v}"
            )));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// invariants
// ---------------------------------------------------------------------------

/// Singularity notation: cyclic chains `(n_1,...,n_k)`, chains with a fork
/// of two 2s on one or both ends, the affine four-legged fork `(n;2^4)`,
/// a plain Du Val `A_1`, and the elliptic marker. The degenerate encodings
/// are kept distinct: `A_1` is not the chain `(2)`, and `(n;2^2)` is not
/// rewritten as `(2,n,2)` even though they name the same singularity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SingularitySymbol {
    A1,
    Cyclic(Vec<i64>),
    ForkLeft(Vec<i64>),
    ForkRight(Vec<i64>),
    ForkBoth(Vec<i64>),
    QuadFork(i64),
    Elliptic,
}

impl fmt::Display for SingularitySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |c: &[i64]| c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            SingularitySymbol::A1 => write!(f, "A1"),
            SingularitySymbol::Cyclic(c) => write!(f, "({})", join(c)),
            SingularitySymbol::ForkLeft(c) => write!(f, "(2^2;{})", join(c)),
            SingularitySymbol::ForkRight(c) => write!(f, "({};2^2)", join(c)),
            SingularitySymbol::ForkBoth(c) => write!(f, "(2^2;{};2^2)", join(c)),
            SingularitySymbol::QuadFork(n) => write!(f, "({n};2^4)"),
            SingularitySymbol::Elliptic => write!(f, "elliptic"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeInvariants {
    /// v = L^2/2.
    pub volume: i64,
    pub genus: i64,
    /// L.C_s for the surviving sides, left to right; contracted sides
    /// (length 0) are dropped.
    pub side_lengths: Vec<i64>,
    pub nonklt_singularities: Vec<SingularitySymbol>,
}

impl ShapeInvariants {
    /// Coefficients (constant first) of the Hilbert polynomial
    /// chi(Y, xL) = v x^2 + (v+1-g) x + 1.
    pub fn hilbert_coeffs(&self) -> [i64; 3] {
        [1, self.volume + 1 - self.genus, self.volume]
    }
}

fn pure_volume(shape: &Shape) -> i64 {
    if shape.affine {
        match (shape.series, shape.index, shape.right_decor) {
            (RootKind::A, 1, Decor::Star) => 2,
            (RootKind::A, 0, _) => 1,
            (RootKind::A, m, _) => m + 1,
            (RootKind::D, m, _) => m,
            (RootKind::E, 7, _) => 8,
            (RootKind::E, _, _) => 9,
        }
    } else {
        match shape.series {
            RootKind::A => shape.index + 1,
            RootKind::D | RootKind::E => shape.index,
        }
    }
}

fn genus_of(shape: &Shape) -> i64 {
    let m = shape.index;
    if shape.affine {
        match (shape.series, m, shape.right_decor) {
            (RootKind::A, 1, Decor::Star) => 0,
            (RootKind::A, 0, _) => 0,
            (RootKind::A, _, _) => (m + 3) / 2,
            (RootKind::D, _, _) => (m - 2) / 2,
            (RootKind::E, 7, _) => 3,
            (RootKind::E, _, _) => 4,
        }
    } else {
        match shape.series {
            RootKind::A => {
                let short_l = matches!(shape.left_state(), SideState::Short(_));
                let short_r = matches!(shape.right_state(), SideState::Short(_));
                match (short_l, short_r) {
                    (false, false) => (m - 1) / 2,
                    (true, true) => (m + 1) / 2,
                    _ => m / 2,
                }
            }
            RootKind::D => {
                if m % 2 == 0 {
                    (m - 2) / 2
                } else {
                    (m - 1) / 2
                }
            }
            RootKind::E => {
                if m == 8 {
                    4
                } else {
                    3
                }
            }
        }
    }
}

/// The central chain entry `n` used in the singularity tables.
fn table_n(shape: &Shape) -> i64 {
    let m = shape.index;
    match shape.series {
        RootKind::A => {
            let short_l = matches!(shape.left_state(), SideState::Short(_));
            let short_r = matches!(shape.right_state(), SideState::Short(_));
            match (short_l, short_r) {
                (false, false) => (m + 1) / 2,
                (true, true) => (m + 3) / 2,
                _ => (m + 2) / 2,
            }
        }
        RootKind::D => (m + 1) / 2,
        RootKind::E => 3,
    }
}

fn sing_symbol(chain: Vec<i64>, fork_l: bool, fork_r: bool) -> SingularitySymbol {
    match (fork_l, fork_r) {
        (false, false) => SingularitySymbol::Cyclic(chain),
        (true, false) => SingularitySymbol::ForkLeft(chain),
        (false, true) => SingularitySymbol::ForkRight(chain),
        (true, true) => SingularitySymbol::ForkBoth(chain),
    }
}

fn nonklt_singularities(shape: &Shape) -> Vec<SingularitySymbol> {
    use SingularitySymbol as S;
    if shape.affine {
        let k = shape.total_primes();
        return match (shape.series, shape.index, shape.right_decor) {
            (RootKind::A, 1, Decor::Star) => vec![],
            (RootKind::A, 0, _) => vec![S::A1],
            (RootKind::A, _, _) => vec![S::Elliptic],
            (RootKind::D, m, _) => {
                if k == 4 {
                    vec![S::QuadFork(m / 2)]
                } else {
                    vec![S::A1; k as usize]
                }
            }
            (RootKind::E, 7, _) => {
                if k == 4 {
                    vec![S::QuadFork(3)]
                } else {
                    vec![S::A1; k as usize]
                }
            }
            (RootKind::E, _, _) => {
                if k == 3 {
                    vec![S::QuadFork(3)]
                } else {
                    vec![S::A1; (k + 1) as usize]
                }
            }
        };
    }
    let n = table_n(shape);
    let l = shape.left_state();
    let r = shape.right_state();
    match shape.series {
        RootKind::A => {
            let mut chain = vec![n];
            let mut fork_l = false;
            let mut fork_r = false;
            let mut left_a1 = false;
            let mut right_a1 = false;
            match l {
                SideState::Long(0) => {}
                SideState::Long(1) => left_a1 = true,
                SideState::Long(_) => {
                    chain.insert(0, 2);
                    fork_l = true;
                }
                SideState::Short(false) => {
                    chain.insert(0, 2);
                    left_a1 = true;
                }
                SideState::Short(true) => {
                    chain.insert(0, 2);
                    chain.insert(0, 2);
                    fork_l = true;
                }
            }
            match r {
                SideState::Long(0) => {}
                SideState::Long(1) => right_a1 = true,
                SideState::Long(_) => {
                    chain.push(2);
                    fork_r = true;
                }
                SideState::Short(false) => {
                    chain.push(2);
                    right_a1 = true;
                }
                SideState::Short(true) => {
                    chain.push(2);
                    chain.push(2);
                    fork_r = true;
                }
            }
            let mut out = vec![];
            if left_a1 {
                out.push(S::A1);
            }
            out.push(sing_symbol(chain, fork_l, fork_r));
            if right_a1 {
                out.push(S::A1);
            }
            out
        }
        RootKind::D => {
            let mut chain = vec![];
            let mut fork_l = false;
            let mut fork_r = false;
            let mut left_a1 = false;
            let mut right_a1 = false;
            match l {
                SideState::Long(0) => {}
                SideState::Long(1) => left_a1 = true,
                SideState::Long(_) => {
                    chain.push(if shape.index % 2 == 0 { shape.index / 2 } else { n });
                    fork_l = true;
                }
                SideState::Short(_) => unreachable!("left side of D is long"),
            }
            match r {
                SideState::Long(0) => {}
                SideState::Long(1) => right_a1 = true,
                SideState::Long(_) => {
                    chain.push(2);
                    fork_r = true;
                }
                SideState::Short(false) => {
                    chain.push(2);
                    right_a1 = true;
                }
                SideState::Short(true) => {
                    chain.push(2);
                    chain.push(2);
                    fork_r = true;
                }
            }
            let mut out = vec![];
            if left_a1 {
                out.push(S::A1);
            }
            if !chain.is_empty() || fork_l || fork_r {
                out.push(sing_symbol(chain, fork_l, fork_r));
            }
            if right_a1 {
                out.push(S::A1);
            }
            out
        }
        RootKind::E => {
            let lp = matches!(l, SideState::Short(true));
            match shape.index {
                6 => match (lp, matches!(r, SideState::Short(true))) {
                    (false, false) => vec![S::A1, S::Cyclic(vec![3]), S::A1],
                    (false, true) => vec![S::A1, S::ForkRight(vec![3, 2])],
                    (true, false) => vec![S::ForkLeft(vec![2, 3]), S::A1],
                    (true, true) => vec![S::ForkBoth(vec![2, 3, 2])],
                },
                7 => {
                    let rp = match r {
                        SideState::Long(k) => k,
                        SideState::Short(_) => unreachable!("right side of E7 is long"),
                    };
                    match (lp, rp) {
                        (false, 0) => vec![S::A1],
                        (false, 1) => vec![S::A1, S::A1],
                        (false, _) => vec![S::A1, S::Cyclic(vec![2, 3, 2])],
                        (true, 0) => vec![S::ForkLeft(vec![2])],
                        (true, 1) => vec![S::ForkLeft(vec![2]), S::A1],
                        (true, _) => vec![S::ForkBoth(vec![2, 3])],
                    }
                }
                _ => match (lp, matches!(r, SideState::Short(true))) {
                    (false, false) => vec![S::A1, S::A1],
                    (false, true) => vec![S::A1, S::ForkRight(vec![3])],
                    (true, false) => vec![S::ForkLeft(vec![2]), S::A1],
                    (true, true) => vec![S::ForkBoth(vec![2, 3])],
                },
            }
        }
    }
}

pub fn invariants(shape: &Shape) -> Result<ShapeInvariants> {
    validate(shape)?;
    let volume = pure_volume(shape) - shape.total_primes();
    let genus = genus_of(shape);
    let side_lengths: Vec<i64> = if shape.affine {
        let base = match (shape.series, shape.index, shape.right_decor) {
            (RootKind::A, 1, Decor::Star) => 4,
            (RootKind::A, 0, _) => 3,
            (RootKind::A, _, _) => 0,
            (RootKind::D, _, _) => 4,
            (RootKind::E, 7, _) => 4,
            (RootKind::E, _, _) => 3,
        };
        let len = base - shape.total_primes();
        if base == 0 || len == 0 {
            vec![]
        } else {
            vec![len]
        }
    } else {
        [self::Shape::left_state(shape).length(), shape.right_state().length()]
            .into_iter()
            .filter(|&x| x > 0)
            .collect()
    };
    Ok(ShapeInvariants {
        volume,
        genus,
        side_lengths,
        nonklt_singularities: nonklt_singularities(shape),
    })
}

// ---------------------------------------------------------------------------
// the catalogue
// ---------------------------------------------------------------------------

/// One n-parameterized catalogue row; `index = index_coeff * n + index_offset`.
/// Rows with `index_coeff == 0` describe a single shape (the E series).
#[derive(Debug, Clone, Serialize)]
pub struct ShapeFamily {
    pub pattern: &'static str,
    pub affine: bool,
    pub series: RootKind,
    pub index_coeff: i64,
    pub index_offset: i64,
    pub min_n: i64,
    pub left_decor: Decor,
    pub right_decor: Decor,
    pub left_primes: u8,
    pub right_primes: u8,
}

impl ShapeFamily {
    pub fn instantiate(&self, n: i64) -> Result<(Shape, ShapeInvariants)> {
        if n < self.min_n {
            return Err(Error::InvalidArgument(format!(
                "{}: n = {n} is below the minimum {}",
                self.pattern, self.min_n
            )));
        }
        let shape = Shape {
            affine: self.affine,
            series: self.series,
            index: self.index_coeff * n + self.index_offset,
            left_decor: self.left_decor,
            right_decor: self.right_decor,
            left_primes: self.left_primes,
            right_primes: self.right_primes,
            fold_left: false,
            fold_right: false,
        };
        let inv = invariants(&shape)?;
        Ok((shape, inv))
    }
}

pub fn catalogue_families() -> Vec<ShapeFamily> {
    use Decor::{Minus, None as N, Plus, Star};
    use RootKind::{A, D, E};
    let fam = |pattern,
               affine,
               series,
               index_coeff,
               index_offset,
               min_n,
               left_decor,
               left_primes,
               right_decor,
               right_primes| ShapeFamily {
        pattern,
        affine,
        series,
        index_coeff,
        index_offset,
        min_n,
        left_decor,
        right_decor,
        left_primes,
        right_primes,
    };
    vec![
        // A series, both sides long
        fam("A_{2n-1}", false, A, 2, -1, 1, N, 0, N, 0),
        fam("A'_{2n-1}", false, A, 2, -1, 2, N, 0, N, 1),
        fam("'A'_{2n-1}", false, A, 2, -1, 2, N, 1, N, 1),
        fam("A''_{2n-1}", false, A, 2, -1, 2, N, 0, N, 2),
        fam("'A''_{2n-1}", false, A, 2, -1, 2, N, 1, N, 2),
        fam("''A''_{2n-1}", false, A, 2, -1, 3, N, 2, N, 2),
        // A series, right side short
        fam("A-_{2n-2}", false, A, 2, -2, 1, N, 0, Minus, 0),
        fam("'A-_{2n-2}", false, A, 2, -2, 2, N, 1, Minus, 0),
        fam("A+_{2n-2}", false, A, 2, -2, 2, N, 0, Plus, 0),
        fam("'A+_{2n-2}", false, A, 2, -2, 2, N, 1, Plus, 0),
        fam("''A-_{2n-2}", false, A, 2, -2, 2, N, 2, Minus, 0),
        fam("''A+_{2n-2}", false, A, 2, -2, 3, N, 2, Plus, 0),
        // A series, both sides short
        fam("-A-_{2n-3}", false, A, 2, -3, 2, Minus, 0, Minus, 0),
        fam("-A+_{2n-3}", false, A, 2, -3, 2, Minus, 0, Plus, 0),
        fam("+A+_{2n-3}", false, A, 2, -3, 3, Plus, 0, Plus, 0),
        // D series, even index
        fam("D_{2n}", false, D, 2, 0, 2, N, 0, N, 0),
        fam("D'_{2n}", false, D, 2, 0, 2, N, 0, N, 1),
        fam("'D_{2n}", false, D, 2, 0, 2, N, 1, N, 0),
        fam("'D'_{2n}", false, D, 2, 0, 2, N, 1, N, 1),
        fam("D''_{2n}", false, D, 2, 0, 2, N, 0, N, 2),
        fam("''D_{2n}", false, D, 2, 0, 2, N, 2, N, 0),
        fam("'D''_{2n}", false, D, 2, 0, 2, N, 1, N, 2),
        fam("''D'_{2n}", false, D, 2, 0, 2, N, 2, N, 1),
        fam("''D''_{2n}", false, D, 2, 0, 3, N, 2, N, 2),
        // D series, odd index
        fam("D-_{2n-1}", false, D, 2, -1, 3, N, 0, Minus, 0),
        fam("'D-_{2n-1}", false, D, 2, -1, 3, N, 1, Minus, 0),
        fam("D+_{2n-1}", false, D, 2, -1, 3, N, 0, Plus, 0),
        fam("'D+_{2n-1}", false, D, 2, -1, 3, N, 1, Plus, 0),
        fam("''D-_{2n-1}", false, D, 2, -1, 3, N, 2, Minus, 0),
        fam("''D+_{2n-1}", false, D, 2, -1, 3, N, 2, Plus, 0),
        // E series
        fam("-E6-", false, E, 0, 6, 1, Minus, 0, Minus, 0),
        fam("-E6+", false, E, 0, 6, 1, Minus, 0, Plus, 0),
        fam("+E6+", false, E, 0, 6, 1, Plus, 0, Plus, 0),
        fam("-E7", false, E, 0, 7, 1, Minus, 0, N, 0),
        fam("-E7'", false, E, 0, 7, 1, Minus, 0, N, 1),
        fam("+E7", false, E, 0, 7, 1, Plus, 0, N, 0),
        fam("+E7'", false, E, 0, 7, 1, Plus, 0, N, 1),
        fam("-E7''", false, E, 0, 7, 1, Minus, 0, N, 2),
        fam("+E7''", false, E, 0, 7, 1, Plus, 0, N, 2),
        fam("-E8-", false, E, 0, 8, 1, Minus, 0, Minus, 0),
        fam("-E8+", false, E, 0, 8, 1, Minus, 0, Plus, 0),
        fam("+E8-", false, E, 0, 8, 1, Plus, 0, Minus, 0),
        fam("+E8+", false, E, 0, 8, 1, Plus, 0, Plus, 0),
        // affine shapes
        fam("wA_{2n-1}", true, A, 2, -1, 1, N, 0, N, 0),
        fam("wA1*", true, A, 0, 1, 1, N, 0, Star, 0),
        fam("wA0-", true, A, 0, 0, 1, N, 0, Minus, 0),
        fam("wD_{2n}", true, D, 2, 0, 2, N, 0, N, 0),
        fam("wD'_{2n}", true, D, 2, 0, 2, N, 0, N, 1),
        fam("wD''_{2n}", true, D, 2, 0, 2, N, 0, N, 2),
        fam("wD'''_{2n}", true, D, 2, 0, 2, N, 0, N, 3),
        fam("wD''''_{2n}", true, D, 2, 0, 3, N, 0, N, 4),
        fam("wE7", true, E, 0, 7, 1, N, 0, N, 0),
        fam("wE7'", true, E, 0, 7, 1, N, 0, N, 1),
        fam("wE7''", true, E, 0, 7, 1, N, 0, N, 2),
        fam("wE7'''", true, E, 0, 7, 1, N, 0, N, 3),
        fam("wE7''''", true, E, 0, 7, 1, N, 0, N, 4),
        fam("wE8-", true, E, 0, 8, 1, N, 0, Minus, 0),
        fam("wE8+", true, E, 0, 8, 1, N, 0, Plus, 0),
        fam("wE8+'", true, E, 0, 8, 1, N, 0, Plus, 1),
        fam("wE8+''", true, E, 0, 8, 1, N, 0, Plus, 2),
    ]
}

/// All catalogue rows instantiated for n up to `n_max` (fixed-index rows
/// appear once).
pub fn catalogue(n_max: i64) -> Vec<(Shape, ShapeInvariants)> {
    let mut out = vec![];
    for f in catalogue_families() {
        if f.index_coeff == 0 {
            if let Ok(row) = f.instantiate(f.min_n) {
                out.push(row);
            }
        } else {
            for n in f.min_n..=n_max {
                if let Ok(row) = f.instantiate(n) {
                    out.push(row);
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// priming
// ---------------------------------------------------------------------------

pub fn prime(shape: &Shape, side: SideRef, k: u8) -> Result<Shape> {
    let mut cur = shape.clone();
    for _ in 0..k {
        cur = prime_once(&cur, side)?;
    }
    Ok(cur)
}

fn prime_once(shape: &Shape, side: SideRef) -> Result<Shape> {
    let mut next = shape.clone();
    if shape.affine {
        // single side: accept either side reference
        match (shape.series, shape.index, shape.right_decor) {
            (RootKind::A, 1, Decor::Star) => {
                return Err(Error::PrimingNotAllowed(
                    "primings of wA1* are not allowed".into(),
                ))
            }
            (RootKind::A, 0, _) => {
                return Err(Error::PrimingNotAllowed(
                    "priming wA0- would drop the volume to 0".into(),
                ))
            }
            (RootKind::A, _, _) => {
                return Err(Error::PrimingNotAllowed(
                    "wA shapes of odd index have no boundary to prime".into(),
                ))
            }
            (RootKind::E, 8, Decor::Minus) => next.right_decor = Decor::Plus,
            _ => next.right_primes += 1,
        }
    } else {
        if shape.series == RootKind::A
            && shape.index == 1
            && shape.left_decor == Decor::None
            && shape.right_decor == Decor::None
        {
            return Err(Error::PrimingNotAllowed(
                "primings of A1 are not allowed".into(),
            ));
        }
        let (decor, primes) = match side {
            SideRef::Left => (&mut next.left_decor, &mut next.left_primes),
            SideRef::Right => (&mut next.right_decor, &mut next.right_primes),
        };
        match decor {
            Decor::None => {
                if *primes >= 2 {
                    return Err(Error::PrimingNotAllowed(
                        "a long side takes at most two primes".into(),
                    ));
                }
                *primes += 1;
            }
            Decor::Minus => *decor = Decor::Plus,
            Decor::Plus => {
                return Err(Error::PrimingNotAllowed(
                    "this short side is already primed".into(),
                ))
            }
            Decor::Star => {
                return Err(Error::PrimingNotAllowed(
                    "primings of wA1* are not allowed".into(),
                ))
            }
        }
    }
    validate(&next)?;
    Ok(next)
}

// ---------------------------------------------------------------------------
// polytopes
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticePolytope {
    /// Vertices in counterclockwise order.
    pub vertices: Vec<[i64; 2]>,
    pub p_star: [i64; 2],
}

impl LatticePolytope {
    fn normalize(mut self) -> Self {
        // drop repeated vertices (degenerate instances of the formulas)
        self.vertices.dedup();
        if self.vertices.len() > 1 && self.vertices.first() == self.vertices.last() {
            self.vertices.pop();
        }
        if self.signed_area2() < 0 {
            self.vertices.reverse();
        }
        self
    }

    fn signed_area2(&self) -> i64 {
        let v = &self.vertices;
        let mut s = 0;
        for i in 0..v.len() {
            let a = v[i];
            let b = v[(i + 1) % v.len()];
            s += a[0] * b[1] - b[0] * a[1];
        }
        s
    }

    /// Euclidean area; equals the volume v = L^2/2 of the shape.
    pub fn area(&self) -> i64 {
        let s2 = self.signed_area2().abs();
        debug_assert!(s2 % 2 == 0, "polytope areas here are integers");
        s2 / 2
    }

    pub fn contains_interior(&self, p: [i64; 2]) -> bool {
        let v = &self.vertices;
        for i in 0..v.len() {
            let a = v[i];
            let b = v[(i + 1) % v.len()];
            let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
            if cross <= 0 {
                return false;
            }
        }
        true
    }

    /// Interior lattice points; their count is the genus of the shape.
    pub fn interior_lattice_points(&self) -> Vec<[i64; 2]> {
        let xs: Vec<i64> = self.vertices.iter().map(|v| v[0]).collect();
        let ys: Vec<i64> = self.vertices.iter().map(|v| v[1]).collect();
        let (x0, x1) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
        let (y0, y1) = (*ys.iter().min().unwrap(), *ys.iter().max().unwrap());
        let mut out = vec![];
        for x in x0..=x1 {
            for y in y0..=y1 {
                if self.contains_interior([x, y]) {
                    out.push([x, y]);
                }
            }
        }
        out
    }

    /// Lattice lengths of the boundary sides through `p_star`: the two
    /// incident edges when `p_star` is a vertex (left side first), or the
    /// single edge containing it otherwise.
    pub fn side_lengths(&self) -> Vec<i64> {
        let v = &self.vertices;
        let glen = |a: [i64; 2], b: [i64; 2]| -> i64 {
            num_integer::gcd((b[0] - a[0]).abs(), (b[1] - a[1]).abs())
        };
        if let Some(i) = v.iter().position(|&p| p == self.p_star) {
            let prev = v[(i + v.len() - 1) % v.len()];
            let next = v[(i + 1) % v.len()];
            // counterclockwise orientation with p_star on top: the next
            // vertex is the left-side endpoint, the previous the right one
            vec![glen(self.p_star, next), glen(self.p_star, prev)]
        } else {
            for i in 0..v.len() {
                let a = v[i];
                let b = v[(i + 1) % v.len()];
                let cross = (b[0] - a[0]) * (self.p_star[1] - a[1])
                    - (b[1] - a[1]) * (self.p_star[0] - a[0]);
                let between = (self.p_star[0] - a[0]) * (self.p_star[0] - b[0])
                    + (self.p_star[1] - a[1]) * (self.p_star[1] - b[1])
                    <= 0;
                if cross == 0 && between {
                    return vec![glen(a, b)];
                }
            }
            vec![]
        }
    }
}

/// Mirror a polytope left-to-right (x -> c - x), keeping ccw orientation.
pub(crate) fn mirror(p: LatticePolytope) -> LatticePolytope {
    let c = p.vertices.iter().map(|v| v[0]).max().unwrap();
    LatticePolytope {
        vertices: p.vertices.into_iter().map(|v| [c - v[0], v[1]]).collect(),
        p_star: [c - p.p_star[0], p.p_star[1]],
    }
    .normalize()
}

pub fn polytope(shape: &Shape) -> Result<LatticePolytope> {
    validate(shape)?;
    let m = shape.index;
    let not_toric = || Err(Error::NoToricModel(print_shape(shape)));
    let poly = |vertices: Vec<[i64; 2]>, p_star: [i64; 2]| {
        Ok(LatticePolytope { vertices, p_star }.normalize())
    };
    if shape.affine {
        if shape.total_primes() > 0 {
            return not_toric();
        }
        return match (shape.series, m, shape.right_decor) {
            (RootKind::D, _, _) => poly(vec![[0, 2], [0, 0], [m - 4, 0], [4, 2]], [2, 2]),
            (RootKind::E, 7, _) => poly(vec![[0, 4], [0, 0], [4, 0]], [2, 2]),
            (RootKind::E, 8, Decor::Minus) => poly(vec![[0, 3], [0, 0], [6, 0]], [2, 2]),
            _ => not_toric(), // the wA shapes are not toric
        };
    }
    let l = shape.left_state();
    let r = shape.right_state();
    match (shape.series, l, r) {
        // pure A rows (a single short side shares the vertex formula)
        (RootKind::A, SideState::Long(0), SideState::Long(0))
        | (RootKind::A, SideState::Long(0), SideState::Short(false)) => {
            poly(vec![[0, 2], [0, 0], [m + 1, 0]], [0, 2])
        }
        (RootKind::A, SideState::Short(false), SideState::Long(0)) => Ok(mirror(polytope(
            &Shape { left_decor: Decor::None, right_decor: Decor::Minus, ..shape.clone() },
        )?)),
        (RootKind::A, SideState::Short(false), SideState::Short(false)) => {
            poly(vec![[0, 2], [1, 0], [m + 2, 0]], [0, 2])
        }
        // primed toric A rows
        (RootKind::A, SideState::Long(1), SideState::Long(0))
        | (RootKind::A, SideState::Long(1), SideState::Short(false)) => {
            poly(vec![[2, 2], [0, 1], [0, 0], [m - 1, 0]], [2, 2])
        }
        (RootKind::A, SideState::Long(0), SideState::Long(1))
        | (RootKind::A, SideState::Short(false), SideState::Long(1)) => {
            let mirrored = Shape {
                left_decor: shape.right_decor,
                right_decor: shape.left_decor,
                left_primes: shape.right_primes,
                right_primes: shape.left_primes,
                ..shape.clone()
            };
            Ok(mirror(polytope(&mirrored)?))
        }
        (RootKind::A, SideState::Long(1), SideState::Long(1)) => poly(
            vec![[2, 2], [0, 1], [0, 0], [m - 3, 0], [(m + 1) / 2, 1]],
            [2, 2],
        ),
        // pure D and E rows
        (RootKind::D, SideState::Long(0), SideState::Long(0))
        | (RootKind::D, SideState::Long(0), SideState::Short(false)) => {
            poly(vec![[2, 2], [0, 2], [0, 0], [m - 2, 0]], [2, 2])
        }
        (RootKind::D, SideState::Long(0), SideState::Long(1)) => poly(
            vec![[2, 2], [0, 2], [0, 0], [m - 4, 0], [m / 2, 1]],
            [2, 2],
        ),
        (RootKind::E, SideState::Short(false), _) if shape.right_state().marks() == 0 => {
            poly(vec![[2, 2], [0, 3], [0, 0], [m - 3, 0]], [2, 2])
        }
        _ => not_toric(),
    }
}

// ---------------------------------------------------------------------------
// decorated diagrams
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum NodeColor {
    White,
    Black,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramNode {
    pub label: String,
    pub color: NodeColor,
    pub circled: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DynkinDiagram {
    pub nodes: Vec<DiagramNode>,
    pub edges: Vec<(usize, usize)>,
}

impl DynkinDiagram {
    pub fn circled_labels(&self) -> Vec<String> {
        self.nodes.iter().filter(|n| n.circled).map(|n| n.label.clone()).collect()
    }

    pub fn circled_white_labels(&self) -> Vec<String> {
        self.nodes
            .iter()
            .filter(|n| n.circled && n.color == NodeColor::White)
            .map(|n| n.label.clone())
            .collect()
    }

    /// Structure key ignoring node labels, for the documented diagram
    /// ambiguities (e.g. the doubly-primed A3 shapes).
    pub fn structure_key(&self) -> (Vec<(NodeColor, bool, usize)>, usize) {
        let mut deg = vec![0usize; self.nodes.len()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        let mut key: Vec<(NodeColor, bool, usize)> = self
            .nodes
            .iter()
            .zip(&deg)
            .map(|(n, &d)| (n.color, n.circled, d))
            .collect();
        let reversed: Vec<_> = key.iter().rev().cloned().collect();
        if reversed < key {
            key = reversed;
        }
        (key, self.edges.len())
    }
}

fn node(label: &str, color: NodeColor) -> DiagramNode {
    DiagramNode { label: label.to_string(), color, circled: false }
}

pub fn decorated_diagram(shape: &Shape) -> Result<DynkinDiagram> {
    validate(shape)?;
    use NodeColor::{Black, White};
    let m = shape.index as usize;
    if shape.affine {
        let mut nodes: Vec<DiagramNode>;
        let mut edges: Vec<(usize, usize)> = vec![];
        match (shape.series, shape.index, shape.right_decor) {
            (RootKind::A, 0, _) => {
                nodes = vec![node("q1", Black)];
                edges.push((0, 0));
            }
            (RootKind::A, 1, Decor::Star) => {
                // the one non-bipartite diagram
                nodes = vec![node("q1", White), node("q2", White)];
                edges.push((0, 1));
                edges.push((0, 1));
            }
            (RootKind::A, _, _) => {
                let cnt = m + 1;
                nodes = (0..cnt)
                    .map(|i| {
                        node(&format!("q{}", i + 1), if i % 2 == 0 { White } else { Black })
                    })
                    .collect();
                for i in 0..cnt {
                    edges.push((i, (i + 1) % cnt));
                }
            }
            (RootKind::D, _, _) => {
                // p''_l, p'_l, p_0 .. p_{m-4}, p'_r, p''_r
                nodes = vec![node("p''l", White), node("p'l", White)];
                let chain = m - 3; // bottom nodes p_0 .. p_{m-4}
                for i in 0..chain {
                    nodes.push(node(&format!("p{i}"), if i % 2 == 0 { Black } else { White }));
                }
                nodes.push(node("p'r", White));
                nodes.push(node("p''r", White));
                nodes[0].circled = true;
                let last = nodes.len() - 1;
                nodes[last].circled = true;
                edges.push((0, 2));
                edges.push((1, 2));
                for i in 0..chain - 1 {
                    edges.push((2 + i, 3 + i));
                }
                edges.push((1 + chain, 2 + chain));
                edges.push((1 + chain, 3 + chain));
            }
            (RootKind::E, 7, _) => {
                nodes = vec![
                    node("p'3", White),
                    node("p'2", Black),
                    node("p'1", White),
                    node("p0", Black),
                    node("p1", White),
                    node("p2", Black),
                    node("p3", White),
                    node("p''", White),
                ];
                nodes[7].circled = true;
                for i in 0..6 {
                    edges.push((i, i + 1));
                }
                edges.push((3, 7));
            }
            (RootKind::E, _, _) => {
                nodes = vec![
                    node("p'2", Black),
                    node("p'1", White),
                    node("p0", Black),
                    node("p1", White),
                    node("p2", Black),
                    node("p3", White),
                    node("p4", Black),
                    node("p5", White),
                    node("p''", White),
                ];
                nodes[8].circled = true;
                for i in 0..7 {
                    edges.push((i, i + 1));
                }
                edges.push((2, 8));
            }
        }
        // affine circling rule: first black end nodes, then white end
        // nodes, then black nodes connected to circled white ones
        let mut deg = vec![0usize; nodes.len()];
        for &(a, b) in &edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        for _ in 0..shape.total_primes() {
            let pick = nodes
                .iter()
                .enumerate()
                .position(|(i, n)| !n.circled && n.color == Black && deg[i] == 1)
                .or_else(|| {
                    nodes
                        .iter()
                        .enumerate()
                        .position(|(i, n)| !n.circled && n.color == White && deg[i] == 1)
                })
                .or_else(|| {
                    nodes.iter().enumerate().position(|(i, n)| {
                        !n.circled
                            && n.color == Black
                            && edges.iter().any(|&(a, b)| {
                                (a == i && nodes[b].circled && nodes[b].color == White)
                                    || (b == i && nodes[a].circled && nodes[a].color == White)
                            })
                    })
                });
            match pick {
                Some(i) => nodes[i].circled = true,
                None => {
                    return Err(Error::PrimingNotAllowed(format!(
                        "{}: no node available for another circle",
                        print_shape(shape)
                    )))
                }
            }
        }
        return Ok(DynkinDiagram { nodes, edges });
    }

    // type III diagrams, nodes in the same order as the root system basis
    let mut nodes: Vec<DiagramNode>;
    let mut edges: Vec<(usize, usize)> = vec![];
    // chain of nodes left-to-right, plus the positions (in `nodes`) of the
    // leftmost/rightmost chain node for the circling rules
    let (left_end, right_end): (usize, usize);
    let left_is_long = matches!(shape.left_state(), SideState::Long(_));
    match shape.series {
        RootKind::A => {
            let start = if left_is_long { White } else { Black };
            nodes = (0..m)
                .map(|i| {
                    let color = if i % 2 == 0 { start } else if start == White { Black } else { White };
                    node(&format!("p{}", i + 1), color)
                })
                .collect();
            for i in 0..m.saturating_sub(1) {
                edges.push((i, i + 1));
            }
            left_end = 0;
            right_end = m - 1;
        }
        RootKind::D => {
            nodes = vec![node("p''", White), node("p'1", White), node("p0", Black)];
            for i in 1..=m - 3 {
                nodes.push(node(&format!("p{i}"), if i % 2 == 1 { White } else { Black }));
            }
            nodes[0].circled = true;
            edges.push((0, 2));
            edges.push((1, 2));
            for i in 0..m - 3 {
                edges.push((2 + i, 3 + i));
            }
            left_end = 1;
            right_end = m - 1;
        }
        RootKind::E => {
            nodes = vec![
                node("p''", White),
                node("p'1", White),
                node("p'2", Black),
                node("p0", Black),
            ];
            for i in 1..=m - 4 {
                nodes.push(node(&format!("p{i}"), if i % 2 == 1 { White } else { Black }));
            }
            nodes[0].circled = true;
            edges.push((0, 3)); // p'' - p0
            edges.push((1, 3)); // p'1 - p0
            edges.push((2, 1)); // p'2 - p'1
            for i in 0..m - 4 {
                edges.push((3 + i, 4 + i));
            }
            left_end = 2;
            right_end = m - 1;
        }
    }
    // neighbor of an end node along the chain, preferring the chain
    // continuation over the internal node (which is circled up front)
    let neighbor = |idx: usize, nodes: &[DiagramNode]| -> usize {
        let mut best = None;
        for &(a, b) in &edges {
            let other = if a == idx { Some(b) } else if b == idx { Some(a) } else { None };
            if let Some(o) = other {
                if best.is_none() || !nodes[o].circled {
                    best = Some(o);
                }
            }
        }
        best.expect("end nodes have neighbors")
    };
    let left_nb = neighbor(left_end, &nodes);
    let right_nb = neighbor(right_end, &nodes);
    match shape.left_state() {
        SideState::Long(k) => {
            if k >= 1 {
                nodes[left_end].circled = true;
            }
            if k >= 2 {
                nodes[left_nb].circled = true;
            }
        }
        SideState::Short(true) => nodes[left_end].circled = true,
        SideState::Short(false) => {}
    }
    match shape.right_state() {
        SideState::Long(k) => {
            if k >= 1 {
                nodes[right_end].circled = true;
            }
            if k >= 2 {
                nodes[right_nb].circled = true;
            }
        }
        SideState::Short(true) => nodes[right_end].circled = true,
        SideState::Short(false) => {}
    }
    Ok(DynkinDiagram { nodes, edges })
}

// ---------------------------------------------------------------------------
// precursor data
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrecursorData {
    /// Generators of Lambda'/Lambda as fundamental-weight labels.
    pub lambda_prime_generators: Vec<String>,
    pub lambda_prime_quotient: FiniteAbelianGroup,
    /// ADE type of the extra Weyl group W_0 ("0" when trivial).
    pub w0_type: String,
    pub w0_order: u64,
    /// Set when a subgroup of W_0 acts trivially on the moduli points.
    pub w00_trivially_acting: bool,
}

pub fn precursor_data(shape: &Shape) -> Result<PrecursorData> {
    validate(shape)?;
    let m = shape.index;
    let mut gens: Vec<String> = vec![];
    if !shape.affine {
        // a long side primed exactly once contributes a generator; double
        // primes and short-side plusses contribute nothing
        let single_l = shape.left_state() == SideState::Long(1);
        let single_r = shape.right_state() == SideState::Long(1);
        match shape.series {
            RootKind::A => {
                if single_l && single_r {
                    gens.push(format!("p{}", (m + 1) / 2));
                }
            }
            RootKind::D => {
                // node order p'', p'1, p0, p1, ..: the vertical side is the
                // left one, the horizontal chain ends at p_{m-3}
                if single_l {
                    gens.push(format!("p{}", m - 3));
                }
                if single_r && m % 2 == 0 {
                    gens.push(if (m / 2) % 2 == 0 { "p'1".into() } else { "p''".into() });
                }
            }
            RootKind::E => {
                if m == 7 && single_r {
                    gens.push("p3".into());
                }
            }
        }
    }
    let quot = FiniteAbelianGroup {
        invariant_factors: vec![BigInt::from(2); gens.len()],
        free_rank: 0,
    };

    // W_0: trivial except the left-primed D series and the genus-1 cases
    let lp = shape.left_state().marks();
    let rp = shape.right_state().marks();
    let (w0, order, w00): (String, u64, bool) = if shape.affine {
        if shape.series == RootKind::D && m == 4 {
            match shape.total_primes() {
                0 => ("A1".into(), 2, true),
                1 => ("A2".into(), 6, true),
                2 => ("A3".into(), 24, true),
                _ => ("D4".into(), 192, true),
            }
        } else if shape.series == RootKind::D && m >= 6 && shape.total_primes() > 0 {
            let k = shape.total_primes() as u32;
            (format!("{k}A1"), 2u64.pow(k), true)
        } else if shape.series == RootKind::D {
            ("0".into(), 1, true)
        } else {
            ("0".into(), 1, false)
        }
    } else if shape.series == RootKind::D && m == 4 {
        // symmetric genus-1 exceptions; D_4 does not tell left from right
        let (a, b) = (lp.min(rp), lp.max(rp));
        match (a, b) {
            (0, 0) => ("0".into(), 1, false),
            (0, 1) => ("A1".into(), 2, false),
            (0, 2) => ("2A1".into(), 4, false),
            (1, 1) => ("A2".into(), 6, false),
            (1, 2) => ("A3".into(), 24, true),
            _ => ("0".into(), 1, false),
        }
    } else if shape.series == RootKind::D && m >= 5 && lp > 0 {
        (format!("{lp}A1"), 2u64.pow(lp as u32), false)
    } else if shape.series == RootKind::A && m == 3 {
        let (a, b) = (lp.min(rp), lp.max(rp));
        match (a, b) {
            (1, 1) => ("A1".into(), 2, false),
            (1, 2) => ("2A1".into(), 4, false),
            _ => ("0".into(), 1, false),
        }
    } else {
        ("0".into(), 1, false)
    };
    Ok(PrecursorData {
        lambda_prime_generators: gens,
        lambda_prime_quotient: quot,
        w0_type: w0,
        w0_order: order,
        w00_trivially_acting: w00,
    })
}

// ---------------------------------------------------------------------------
// two-dimensional projections
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct TwoDimProjection {
    /// Images of the fundamental weights (in root-system node order),
    /// then of the extra generators for the left and right sides.
    pub images: Vec<[i64; 2]>,
    /// Kernel basis in domain coordinates (rank + 2 entries each).
    pub kernel_basis: Vec<Vec<i64>>,
    /// The kernel projected to the weight lattice via the first factor.
    pub kernel_weight_coords: Vec<Vec<i64>>,
    /// What the kernel should be, and whether it is.
    pub expected_kernel: String,
    pub kernel_is_expected: bool,
    pub cokernel: FiniteAbelianGroup,
}

/// Is `x` in the row span of the matrix with the given Smith data?
fn in_row_span(snf: &Snf, x: &[BigInt]) -> bool {
    let cols = snf.v.len();
    let mut y = vec![BigInt::zero(); cols];
    for (j, yj) in y.iter_mut().enumerate() {
        for (i, xi) in x.iter().enumerate() {
            *yj += xi * &snf.v[i][j];
        }
    }
    for (j, yj) in y.iter().enumerate() {
        let d = if j < snf.d.len() && j < snf.d[0].len() {
            snf.d[j][j].clone()
        } else {
            BigInt::zero()
        };
        if d.is_zero() {
            if !yj.is_zero() {
                return false;
            }
        } else if !(yj % &d).is_zero() {
            return false;
        }
    }
    true
}

fn same_lattice(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> bool {
    if a.is_empty() || b.is_empty() {
        return a.is_empty() && b.is_empty();
    }
    let sa = smith_normal_form(a);
    let sb = smith_normal_form(b);
    a.iter().all(|r| in_row_span(&sb, r)) && b.iter().all(|r| in_row_span(&sa, r))
}

/// Node and side-endpoint positions for the toric shapes, in the root
/// system's node order. Returns (node positions, p_left, p_right, p_star).
pub(crate) fn node_positions(
    shape: &Shape,
) -> Result<(Vec<[i64; 2]>, [i64; 2], [i64; 2], [i64; 2])> {
    let m = shape.index;
    let l = shape.left_state();
    let r = shape.right_state();
    let chain = |from: i64, count: i64| -> Vec<[i64; 2]> {
        (0..count).map(|i| [from + i, 0]).collect()
    };
    let flip = |(pos, pl, pr, ps): (Vec<[i64; 2]>, [i64; 2], [i64; 2], [i64; 2])| {
        // mirror x -> c - x with the same c the polytope mirror uses (the
        // maximal x-coordinate), so positions stay in the polytope's frame;
        // the chain order reverses
        let c = pos
            .iter()
            .chain([&pl, &pr, &ps])
            .map(|p| p[0])
            .max()
            .unwrap();
        let mut pos: Vec<[i64; 2]> = pos.into_iter().map(|p| [c - p[0], p[1]]).collect();
        pos.reverse();
        (pos, [c - pr[0], pr[1]], [c - pl[0], pl[1]], [c - ps[0], ps[1]])
    };
    match (shape.series, l, r) {
        (RootKind::A, SideState::Long(0), SideState::Long(0))
        | (RootKind::A, SideState::Long(0), SideState::Short(false)) => {
            Ok((chain(1, m), [0, 0], [m + 1, 0], [0, 2]))
        }
        (RootKind::A, SideState::Short(false), SideState::Long(0)) => {
            let base = node_positions(&Shape {
                left_decor: Decor::None,
                right_decor: Decor::Minus,
                ..shape.clone()
            })?;
            Ok(flip(base))
        }
        (RootKind::A, SideState::Short(false), SideState::Short(false)) => {
            Ok((chain(2, m), [1, 0], [m + 2, 0], [0, 2]))
        }
        (RootKind::A, SideState::Long(1), SideState::Long(0))
        | (RootKind::A, SideState::Long(1), SideState::Short(false)) => {
            let mut pos = vec![[1, 1], [0, 0]];
            pos.extend(chain(1, m - 2));
            Ok((pos, [0, 1], [m - 1, 0], [2, 2]))
        }
        (RootKind::A, SideState::Long(0), SideState::Long(1))
        | (RootKind::A, SideState::Short(false), SideState::Long(1)) => {
            let base = node_positions(&Shape {
                left_decor: shape.right_decor,
                right_decor: shape.left_decor,
                left_primes: shape.right_primes,
                right_primes: shape.left_primes,
                ..shape.clone()
            })?;
            Ok(flip(base))
        }
        (RootKind::A, SideState::Long(1), SideState::Long(1)) => {
            let mut pos = vec![[1, 1], [0, 0]];
            pos.extend(chain(1, m - 3));
            pos.push([(m - 1) / 2, 1]);
            Ok((pos, [0, 1], [(m + 1) / 2, 1], [2, 2]))
        }
        (RootKind::D, SideState::Long(0), SideState::Long(0))
        | (RootKind::D, SideState::Long(0), SideState::Short(false)) => {
            let mut pos = vec![[1, 1], [0, 1], [0, 0]];
            pos.extend(chain(1, m - 3));
            Ok((pos, [0, 2], [m - 2, 0], [2, 2]))
        }
        (RootKind::D, SideState::Long(0), SideState::Long(1)) => {
            let mut pos = vec![[1, 1], [0, 1], [0, 0]];
            pos.extend(chain(1, m - 4));
            pos.push([m / 2 - 1, 1]);
            Ok((pos, [0, 2], [m / 2, 1], [2, 2]))
        }
        (RootKind::E, SideState::Short(false), rr) if rr.marks() == 0 => {
            let mut pos = vec![[1, 1], [0, 1], [0, 2], [0, 0]];
            pos.extend(chain(1, m - 4));
            Ok((pos, [0, 3], [m - 3, 0], [2, 2]))
        }
        _ => Err(Error::NoToricModel(print_shape(shape))),
    }
}

pub fn two_dim_projection(shape: &Shape) -> Result<TwoDimProjection> {
    validate(shape)?;
    if shape.affine {
        return Err(Error::NoToricModel(print_shape(shape)));
    }
    let (pos, pl, pr, ps) = node_positions(shape)?;
    let rank = shape.index as usize;
    let mut images: Vec<[i64; 2]> = pos.iter().map(|p| [p[0] - ps[0], p[1] - ps[1]]).collect();
    images.push([pl[0] - ps[0], pl[1] - ps[1]]);
    images.push([pr[0] - ps[0], pr[1] - ps[1]]);

    // kernel of the 2 x (rank+2) matrix via Smith normal form
    let cols = rank + 2;
    let mat: Vec<Vec<BigInt>> = (0..2)
        .map(|row| images.iter().map(|im| BigInt::from(im[row])).collect())
        .collect();
    let snf = smith_normal_form(&mat);
    let nonzero = snf.diagonal().len();
    let mut kernel_basis: Vec<Vec<i64>> = vec![];
    for j in nonzero..cols {
        let col: Vec<i64> = (0..cols)
            .map(|i| {
                let v: &BigInt = &snf.v[i][j];
                i64::try_from(v).expect("kernel entries are small")
            })
            .collect();
        kernel_basis.push(col);
    }
    let kernel_weight_coords: Vec<Vec<i64>> =
        kernel_basis.iter().map(|v| v[..rank].to_vec()).collect();

    // expected: the root lattice, possibly extended by one fundamental weight
    let rs = build_root_system(shape.series, rank)?;
    let mut expected_rows: Vec<Vec<BigInt>> = rs
        .cartan
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut expected = String::from("Lambda");
    let single_l = shape.left_state() == SideState::Long(1);
    let single_r = shape.right_state() == SideState::Long(1);
    let mut extend = |idx: usize, label: &str, expected: &mut String| {
        let mut row = vec![BigInt::zero(); rank];
        row[idx] = BigInt::from(1);
        expected_rows.push(row);
        expected.push_str(&format!(" + Z*{label}"));
    };
    match shape.series {
        RootKind::A => {
            if single_l && single_r {
                let nmid = ((shape.index + 1) / 2) as usize;
                extend(nmid - 1, &format!("p{nmid}"), &mut expected);
            }
        }
        RootKind::D => {
            if single_r {
                let half = shape.index / 2;
                if half % 2 == 0 {
                    extend(1, "p'1", &mut expected);
                } else {
                    extend(0, "p''", &mut expected);
                }
            }
        }
        RootKind::E => {}
    }
    let actual_rows: Vec<Vec<BigInt>> = kernel_weight_coords
        .iter()
        .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let kernel_is_expected = same_lattice(&actual_rows, &expected_rows);

    let image_rows: Vec<Vec<BigInt>> = images
        .iter()
        .map(|im| vec![BigInt::from(im[0]), BigInt::from(im[1])])
        .collect();
    let cokernel = quotient_group(2, &image_rows);
    Ok(TwoDimProjection {
        images,
        kernel_basis,
        kernel_weight_coords,
        expected_kernel: expected,
        kernel_is_expected,
        cokernel,
    })
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(s: &str) -> Shape {
        parse_shape(s).unwrap()
    }

    #[test]
    fn catalogue_counts() {
        let fams = catalogue_families();
        assert_eq!(fams.iter().filter(|f| !f.affine).count(), 43);
        assert_eq!(fams.iter().filter(|f| f.affine).count(), 17);
    }

    #[test]
    fn catalogue_instantiates_at_minimum() {
        for f in catalogue_families() {
            assert!(
                f.instantiate(f.min_n).is_ok(),
                "{} fails at its own minimum n",
                f.pattern
            );
            if f.index_coeff != 0 && f.min_n > 1 {
                assert!(
                    f.instantiate(f.min_n - 1).is_err(),
                    "{} should fail below min n",
                    f.pattern
                );
            }
        }
    }

    #[test]
    fn parse_print_round_trip() {
        for (s, _) in catalogue(8) {
            let text = print_shape(&s);
            let back = parse_shape(&text).unwrap();
            assert_eq!(s, back, "round trip failed for {text}");
        }
        // folds
        let s = shape("A3!fL!fR");
        assert!(s.fold_left && s.fold_right);
        assert_eq!(print_shape(&s), "A3!fL!fR");
    }

    #[test]
    fn specific_invariants() {
        let inv = invariants(&shape("A3")).unwrap();
        assert_eq!(inv.volume, 4);
        assert_eq!(inv.genus, 1);
        assert_eq!(inv.side_lengths, vec![2, 2]);
        assert_eq!(inv.nonklt_singularities, vec![SingularitySymbol::Cyclic(vec![2])]);

        let inv = invariants(&shape("wE8-")).unwrap();
        assert_eq!(inv.volume, 9);
        assert_eq!(inv.genus, 4);
        assert_eq!(inv.side_lengths, vec![3]);
        assert_eq!(inv.nonklt_singularities, vec![SingularitySymbol::A1]);

        // fully primed odd-A row at n = 4
        let inv = invariants(&shape("''A7''")).unwrap();
        assert_eq!(inv.volume, 4);
        assert_eq!(
            inv.nonklt_singularities,
            vec![SingularitySymbol::ForkBoth(vec![2, 4, 2])]
        );

        let inv = invariants(&shape("-E7''")).unwrap();
        assert_eq!(inv.volume, 5);
        assert_eq!(
            inv.nonklt_singularities,
            vec![SingularitySymbol::A1, SingularitySymbol::Cyclic(vec![2, 3, 2])]
        );
    }

    #[test]
    fn rejects_illegal_symbols() {
        assert!(matches!(parse_shape("wE6"), Err(Error::NoSuchShape(_))));
        assert!(matches!(parse_shape("A1'"), Err(Error::PrimingNotAllowed(_))));
        assert!(matches!(parse_shape("wA1*'"), Err(Error::PrimingNotAllowed(_))));
        // wrong parity: an odd A cannot have exactly one short side
        assert!(parse_shape("''A3-").is_err());
        assert!(parse_shape("D3").is_err());
        assert!(parse_shape("D6-").is_err());
        assert!(parse_shape("X5").is_err());
        // volume would drop to zero
        assert!(parse_shape("''A3''").is_err());
        assert!(parse_shape("wD4''''").is_err());
    }

    #[test]
    fn priming_operation() {
        let d6 = shape("D6");
        let p = prime(&d6, SideRef::Left, 1).unwrap();
        assert_eq!(print_shape(&p), "'D6");
        assert_eq!(invariants(&p).unwrap().volume, 5);

        let a3 = shape("A3");
        let p = prime(&a3, SideRef::Right, 2).unwrap();
        assert_eq!(print_shape(&p), "A3''");
        let inv = invariants(&p).unwrap();
        assert_eq!(inv.volume, 2);
        assert_eq!(inv.side_lengths, vec![2]);

        let we7 = shape("wE7");
        let p = prime(&we7, SideRef::Right, 4).unwrap();
        assert_eq!(invariants(&p).unwrap().volume, 4);
        assert_eq!(
            invariants(&p).unwrap().nonklt_singularities,
            vec![SingularitySymbol::QuadFork(3)]
        );
        assert!(prime(&p, SideRef::Right, 1).is_err());

        let we8 = shape("wE8-");
        let p = prime(&we8, SideRef::Right, 3).unwrap();
        assert_eq!(print_shape(&p), "wE8+''");
        assert!(prime(&p, SideRef::Right, 1).is_err());

        // a short side can be primed exactly once
        let e6 = shape("-E6-");
        let p = prime(&e6, SideRef::Left, 1).unwrap();
        assert_eq!(print_shape(&p), "+E6-");
        assert!(prime(&p, SideRef::Left, 1).is_err());
    }

    #[test]
    fn every_priming_lands_on_a_catalogue_row() {
        // closure of the pure shapes under single primes stays legal and
        // the invariants follow the priming deltas
        let pures: Vec<Shape> = catalogue(6)
            .into_iter()
            .map(|(s, _)| s)
            .filter(|s| s.is_pure())
            .collect();
        let mut stack = pures;
        while let Some(s) = stack.pop() {
            let inv = invariants(&s).unwrap();
            for side in [SideRef::Left, SideRef::Right] {
                match prime(&s, side, 1) {
                    Ok(p) => {
                        let pinv = invariants(&p).unwrap();
                        assert_eq!(pinv.volume, inv.volume - 1);
                        assert_eq!(pinv.genus, inv.genus);
                        if !s.affine {
                            stack.push(p);
                        }
                    }
                    Err(Error::PrimingNotAllowed(_)) => {}
                    Err(e) => panic!("unexpected error priming {s}: {e}"),
                }
            }
        }
    }

    #[test]
    fn polytopes_reproduce_invariants() {
        for (s, inv) in catalogue(8) {
            match polytope(&s) {
                Ok(p) => {
                    assert_eq!(p.area(), inv.volume, "area mismatch for {s}");
                    assert_eq!(
                        p.interior_lattice_points().len() as i64,
                        inv.genus,
                        "genus mismatch for {s}"
                    );
                    let mut sides = p.side_lengths();
                    sides.retain(|&x| x > 0);
                    assert_eq!(sides, inv.side_lengths, "side lengths for {s}");
                }
                Err(Error::NoToricModel(_)) => {}
                Err(e) => panic!("unexpected polytope error for {s}: {e}"),
            }
        }
        // mirrored shapes carry mirrored polytopes
        for sym in ["-A4", "-A4'", "A5'"] {
            let s = shape(sym);
            let p = polytope(&s).unwrap();
            let inv = invariants(&s).unwrap();
            assert_eq!(p.area(), inv.volume);
            assert_eq!(p.interior_lattice_points().len() as i64, inv.genus);
        }
    }

    #[test]
    fn expected_toric_shapes_have_models() {
        for sym in ["A3", "A4-", "-A3-", "D6", "D5-", "-E6-", "-E7", "-E8-", "'A5", "'A4-", "'A5'", "D6'", "wD8", "wE7", "wE8-"] {
            assert!(polytope(&shape(sym)).is_ok(), "{sym} should be toric");
        }
        for sym in ["'D6", "A3''", "+E6-", "wE8+", "wA3", "wA1*"] {
            assert!(
                matches!(polytope(&shape(sym)), Err(Error::NoToricModel(_))),
                "{sym} should have no toric model"
            );
        }
    }

    #[test]
    fn diagrams_match_the_figures() {
        let d = decorated_diagram(&shape("A3")).unwrap();
        assert_eq!(d.nodes.len(), 3);
        assert_eq!(d.nodes[0].color, NodeColor::White);
        assert_eq!(d.nodes[2].color, NodeColor::White);
        assert!(d.circled_labels().is_empty());

        let d = decorated_diagram(&shape("D4")).unwrap();
        assert_eq!(d.nodes.len(), 4);
        assert_eq!(d.circled_labels(), vec!["p''".to_string()]);

        // left/right diagram ambiguities
        let a = decorated_diagram(&shape("''A3'")).unwrap();
        let b = decorated_diagram(&shape("'A3''")).unwrap();
        assert_eq!(a.structure_key(), b.structure_key());
        let a = decorated_diagram(&shape("'A2+")).unwrap();
        let b = decorated_diagram(&shape("''A2-")).unwrap();
        assert_eq!(a.structure_key(), b.structure_key());

        // the irrelevant sets used by the fan module
        let d = decorated_diagram(&shape("D6'")).unwrap();
        assert_eq!(d.circled_white_labels().len(), 2);
        let d = decorated_diagram(&shape("wE8-")).unwrap();
        assert_eq!(d.nodes.len(), 9);
    }

    #[test]
    fn precursor_table() {
        let p = precursor_data(&shape("'D6")).unwrap();
        assert_eq!(p.lambda_prime_generators, vec!["p3".to_string()]);
        assert_eq!(p.w0_type, "1A1");
        assert_eq!(p.w0_order, 2);

        let p = precursor_data(&shape("A5")).unwrap();
        assert!(p.lambda_prime_generators.is_empty());
        assert_eq!(p.w0_order, 1);

        let p = precursor_data(&shape("'D4''")).unwrap();
        assert_eq!(p.w0_type, "A3");
        assert_eq!(p.w0_order, 24);
        assert!(p.w00_trivially_acting);

        let p = precursor_data(&shape("'A5'")).unwrap();
        assert_eq!(p.lambda_prime_generators, vec!["p3".to_string()]);

        let p = precursor_data(&shape("-E7'")).unwrap();
        assert_eq!(p.lambda_prime_generators, vec!["p3".to_string()]);

        let p = precursor_data(&shape("wD4'''")).unwrap();
        assert_eq!(p.w0_type, "D4");
        assert_eq!(p.w0_order, 192);
    }

    #[test]
    fn projections_have_expected_kernels() {
        for sym in ["A2-", "A3", "A4-", "-A3-", "A5", "D4", "D6", "D5-", "-E6-", "-E7", "-E8-"] {
            let p = two_dim_projection(&shape(sym)).unwrap();
            assert!(p.kernel_is_expected, "kernel mismatch for {sym}");
            assert_eq!(p.expected_kernel, "Lambda");
            let s = shape(sym);
            if s.series == RootKind::A {
                assert_eq!(
                    p.cokernel.invariant_factors,
                    vec![BigInt::from(2)],
                    "coker for {sym}"
                );
            } else {
                assert!(p.cokernel.invariant_factors.is_empty(), "coker for {sym}");
                assert_eq!(p.cokernel.free_rank, 0);
            }
        }
        for sym in ["'A5", "'A4-", "-A4'", "A5'"] {
            let p = two_dim_projection(&shape(sym)).unwrap();
            assert!(p.kernel_is_expected, "kernel mismatch for {sym}");
            assert_eq!(p.expected_kernel, "Lambda");
        }
        let p = two_dim_projection(&shape("'A5'")).unwrap();
        assert_eq!(p.expected_kernel, "Lambda + Z*p3");
        assert!(p.kernel_is_expected);
        for sym in ["D6'", "D8'"] {
            let p = two_dim_projection(&shape(sym)).unwrap();
            assert!(p.kernel_is_expected, "kernel mismatch for {sym}");
            assert!(p.expected_kernel.contains("Z*p'"), "{}", p.expected_kernel);
        }
    }

    #[test]
    fn hilbert_polynomial_consistency() {
        for (_, inv) in catalogue(8) {
            let [c0, c1, c2] = inv.hilbert_coeffs();
            assert_eq!(c0, 1);
            assert_eq!(c2, inv.volume);
            assert_eq!(c1, inv.volume + 1 - inv.genus);
            assert!(inv.genus >= 0);
            assert!(inv.volume > 0);
        }
    }
}
