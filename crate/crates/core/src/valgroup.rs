//! Ordered value groups `ℚⁿ`, their convex subgroups, and the finitely
//! described cuts ("positions") used as ball radii.
//!
//! Every group order is stored as an ordering matrix: a list of rows with
//! entries in ℚ(√d), and `g < h` iff the first nonzero entry of
//! `rows · (h − g)` is positive. Lexicographic order is the identity matrix,
//! a weighted order is a single row of ℚ-linearly independent weights.
//! Writing `K_k` for the common kernel of the first `k` rows, the convex
//! subgroups are exactly `K_0 = Γ ⊋ K_1 ⊋ … ⊋ K_m = {0}`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::quad::Quad;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElem(Vec<BigRational>);

impl GroupElem {
    pub fn new(coords: Vec<BigRational>) -> Self {
        GroupElem(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        GroupElem(
            coords
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn zero(n: usize) -> Self {
        GroupElem(vec![BigRational::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![BigRational::zero(); n];
        v[i] = BigRational::one();
        GroupElem(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &GroupElem) -> GroupElem {
        assert_eq!(self.dim(), other.dim(), "group element dimension mismatch");
        GroupElem(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &GroupElem) -> GroupElem {
        assert_eq!(self.dim(), other.dim(), "group element dimension mismatch");
        GroupElem(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> GroupElem {
        GroupElem(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, q: &BigRational) -> GroupElem {
        GroupElem(self.0.iter().map(|a| a * q).collect())
    }

    /// Zero-pad to dimension `n` (embedding into an extended group).
    pub fn padded(&self, n: usize) -> GroupElem {
        assert!(n >= self.dim());
        let mut v = self.0.clone();
        v.resize(n, BigRational::zero());
        GroupElem(v)
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if c.is_integer() {
                write!(f, "{}", c.numer())?;
            } else {
                write!(f, "{}/{}", c.numer(), c.denom())?;
            }
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lexicographic,
    Weighted,
    /// Produced by adjoining a positioned coordinate to another group.
    Extended,
}

#[derive(Clone, Debug)]
pub struct ValueGroup {
    rank: usize,
    kind: OrderKind,
    rows: Vec<Vec<Quad>>,
    parent: Option<Arc<ValueGroup>>,
}

impl PartialEq for ValueGroup {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.rows == other.rows
    }
}

impl Eq for ValueGroup {}

/// A subgroup spanned by a set of coordinate axes (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    coords: Vec<usize>,
}

impl Subgroup {
    pub fn new(mut coords: Vec<usize>) -> Self {
        coords.sort_unstable();
        coords.dedup();
        Subgroup { coords }
    }

    pub fn full(n: usize) -> Self {
        Subgroup {
            coords: (0..n).collect(),
        }
    }

    pub fn trivial() -> Self {
        Subgroup { coords: Vec::new() }
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn contains(&self, g: &GroupElem) -> bool {
        g.coords()
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || self.coords.contains(&i))
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.coords.iter().all(|c| other.coords.contains(c))
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c + 1)?;
        }
        write!(f, "}}")
    }
}

/// The convex subgroup `K_level` (kernel of the first `level` order rows).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConvexSubgroup {
    pub level: usize,
}

impl fmt::Display for ConvexSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H_{}", self.level)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Lower => Side::Upper,
            Side::Upper => Side::Lower,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Lower => write!(f, "lower"),
            Side::Upper => write!(f, "upper"),
        }
    }
}

/// A position in the group. The elements "below" the position form an
/// initial segment, the ones "above" it a final segment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupCut {
    MinusInf,
    PlusInf,
    /// Just above γ: γ itself is below.
    Above(GroupElem),
    /// Just below γ: γ itself is above.
    Below(GroupElem),
    /// Edge of the coset `at + K_level`.
    CosetEdge {
        at: GroupElem,
        level: usize,
        side: Side,
    },
}

impl fmt::Display for GroupCut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupCut::MinusInf => write!(f, "all"),
            GroupCut::PlusInf => write!(f, "empty"),
            GroupCut::Above(g) => write!(f, "above {g}"),
            GroupCut::Below(g) => write!(f, "from {g}"),
            GroupCut::CosetEdge { at, level, side } => match side {
                Side::Upper => write!(f, "above coset {at}+H_{level}"),
                Side::Lower => write!(f, "from coset {at}+H_{level}"),
            },
        }
    }
}

/// `S = {δ : δ above boundary}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinalSegment {
    pub boundary: GroupCut,
}

/// `I = {δ : δ below boundary}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialSegment {
    pub boundary: GroupCut,
}

impl FinalSegment {
    pub fn new(boundary: GroupCut) -> Self {
        FinalSegment { boundary }
    }

    pub fn contains(&self, group: &ValueGroup, g: &GroupElem) -> bool {
        !group.is_below(&self.boundary, g)
    }

    pub fn complement(&self) -> InitialSegment {
        InitialSegment {
            boundary: self.boundary.clone(),
        }
    }
}

impl InitialSegment {
    pub fn new(boundary: GroupCut) -> Self {
        InitialSegment { boundary }
    }

    pub fn contains(&self, group: &ValueGroup, g: &GroupElem) -> bool {
        group.is_below(&self.boundary, g)
    }

    pub fn complement(&self) -> FinalSegment {
        FinalSegment {
            boundary: self.boundary.clone(),
        }
    }
}

fn quad_dot(row: &[Quad], g: &GroupElem) -> Quad {
    let mut acc = Quad::zero();
    for (w, c) in row.iter().zip(g.coords()) {
        if !c.is_zero() && !w.is_zero() {
            acc = acc + w * &Quad::from_rational(c.clone());
        }
    }
    acc
}

impl ValueGroup {
    /// `ℚⁿ` with the lexicographic order.
    pub fn lex(n: usize) -> Arc<ValueGroup> {
        assert!(n >= 1, "value group rank must be positive");
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Quad::one() } else { Quad::zero() })
                    .collect()
            })
            .collect();
        Arc::new(ValueGroup {
            rank: n,
            kind: OrderKind::Lexicographic,
            rows,
            parent: None,
        })
    }

    /// `ℚⁿ` ordered by `g ↦ Σ gᵢ·wᵢ ∈ ℝ`; weights must be positive and
    /// ℚ-linearly independent.
    pub fn weighted(weights: Vec<Quad>) -> Result<Arc<ValueGroup>> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("no weights given".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::InvalidWeights(format!("weight {w} is not positive")));
        }
        let mut radicand = None;
        for w in &weights {
            if let Some(d) = w.radicand() {
                match radicand {
                    Some(r) if r != d => {
                        return Err(Error::InvalidWeights(
                            "weights from different quadratic fields".into(),
                        ))
                    }
                    _ => radicand = Some(d),
                }
            }
        }
        // independence: the (rational, irrational) part vectors have full rank
        let cols: Vec<Vec<BigRational>> = vec![
            weights.iter().map(|w| w.rational_part().clone()).collect(),
            weights.iter().map(|w| w.irrational_part().clone()).collect(),
        ];
        if linalg::rank(&cols) < weights.len() {
            return Err(Error::InvalidWeights(
                "weights are not linearly independent over Q".into(),
            ));
        }
        Ok(Arc::new(ValueGroup {
            rank: weights.len(),
            kind: OrderKind::Weighted,
            rows: vec![weights],
            parent: None,
        }))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    /// Number of order rows (= number of nontrivial convex subgroups).
    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Quad>] {
        &self.rows
    }

    pub fn parent(&self) -> Option<&Arc<ValueGroup>> {
        self.parent.as_ref()
    }

    /// True when `self` equals `other` or was obtained from it by a chain of
    /// adjunctions, so that elements of `other` embed by zero padding.
    pub fn extends(&self, other: &ValueGroup) -> bool {
        if self == other {
            return true;
        }
        let mut cur = self.parent.as_deref();
        while let Some(g) = cur {
            if g == other {
                return true;
            }
            cur = g.parent.as_deref();
        }
        false
    }

    pub fn check_dim(&self, g: &GroupElem) -> Result<()> {
        if g.dim() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: g.dim(),
            });
        }
        Ok(())
    }

    pub fn zero(&self) -> GroupElem {
        GroupElem::zero(self.rank)
    }

    pub fn row_value(&self, row: usize, g: &GroupElem) -> Quad {
        quad_dot(&self.rows[row], g)
    }

    /// Sign of `g` judged by the first `k` rows only.
    pub fn sign_upto(&self, g: &GroupElem, k: usize) -> Ordering {
        if self.kind == OrderKind::Lexicographic {
            for c in g.coords().iter().take(k) {
                match c.cmp(&BigRational::zero()) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            return Ordering::Equal;
        }
        for row in self.rows.iter().take(k) {
            match quad_dot(row, g).signum() {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    pub fn signum(&self, g: &GroupElem) -> Ordering {
        self.sign_upto(g, self.rows.len())
    }

    /// Total order on elements. Panics on dimension mismatch; see [`Self::compare`].
    pub fn cmp_elems(&self, a: &GroupElem, b: &GroupElem) -> Ordering {
        assert_eq!(a.dim(), self.rank, "group element dimension mismatch");
        assert_eq!(b.dim(), self.rank, "group element dimension mismatch");
        if self.kind == OrderKind::Lexicographic {
            return a.coords().cmp(b.coords());
        }
        self.signum(&a.sub(b))
    }

    pub fn compare(&self, a: &GroupElem, b: &GroupElem) -> Result<Ordering> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        Ok(self.cmp_elems(a, b))
    }

    pub fn min_of<'a>(&self, a: &'a GroupElem, b: &'a GroupElem) -> &'a GroupElem {
        if self.cmp_elems(a, b) == Ordering::Greater {
            b
        } else {
            a
        }
    }

    /// Rational matrix whose kernel (on the given columns) is the kernel of
    /// the first `k` rows, with the matching right-hand side for `g`.
    fn split_system(&self, k: usize, cols: &[usize], g: &GroupElem) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
        let mut m = Vec::new();
        let mut rhs = Vec::new();
        for row in self.rows.iter().take(k) {
            m.push(cols.iter().map(|&c| row[c].rational_part().clone()).collect());
            let val = quad_dot(row, g);
            rhs.push(val.rational_part().clone());
            if row.iter().any(|w| !w.is_rational()) {
                m.push(cols.iter().map(|&c| row[c].irrational_part().clone()).collect());
                rhs.push(val.irrational_part().clone());
            }
        }
        (m, rhs)
    }

    /// dim(Δ ∩ K_k).
    pub fn sub_kernel_dim(&self, sub: &Subgroup, k: usize) -> usize {
        let (m, _) = self.split_system(k, sub.coords(), &self.zero());
        sub.coords().len() - linalg::rank(&m)
    }

    /// A basis of Δ ∩ K_k, written in full coordinates.
    pub fn sub_kernel_basis(&self, sub: &Subgroup, k: usize) -> Vec<GroupElem> {
        let (m, _) = self.split_system(k, sub.coords(), &self.zero());
        linalg::nullspace(&m, sub.coords().len())
            .into_iter()
            .map(|v| {
                let mut full = vec![BigRational::zero(); self.rank];
                for (x, &c) in v.into_iter().zip(sub.coords()) {
                    full[c] = x;
                }
                GroupElem(full)
            })
            .collect()
    }

    /// Row indices `p` (1-based) such that some δ ∈ Δ has its first nonzero
    /// row value at `p`; these index the convex subgroups of Δ itself.
    pub fn levels(&self, sub: &Subgroup) -> Vec<usize> {
        let mut out = Vec::new();
        let mut prev = sub.coords().len();
        for p in 1..=self.rows.len() {
            let d = self.sub_kernel_dim(sub, p);
            if d < prev {
                out.push(p);
            }
            prev = d;
        }
        out
    }

    pub fn full(&self) -> Subgroup {
        Subgroup::full(self.rank)
    }

    /// Convexity of a coordinate subgroup: Δ is convex iff it equals some `K_k`.
    pub fn is_convex(&self, sub: &Subgroup) -> bool {
        self.convexity_witness(sub).is_none()
    }

    /// For a non-convex Δ, returns `(α, γ, β)` with α, β ∈ Δ, γ ∉ Δ and
    /// α < γ < β.
    pub fn convexity_witness(&self, sub: &Subgroup) -> Option<(GroupElem, GroupElem, GroupElem)> {
        let levels = self.levels(sub);
        let &j = levels.first()?;
        let outer = self.sub_kernel_basis(&self.full(), j - 1);
        if outer.len() == sub.coords().len() {
            return None;
        }
        let gamma = outer.into_iter().find(|b| !sub.contains(b))?;
        let &i = sub
            .coords()
            .iter()
            .find(|&&i| !self.rows[j - 1][i].is_zero())?;
        let mut delta = GroupElem::unit(self.rank, i);
        if self.row_value(j - 1, &delta).is_negative() {
            delta = delta.neg();
        }
        let lg = self.row_value(j - 1, &gamma);
        let ld = self.row_value(j - 1, &delta);
        let ratio = lg / ld;
        let q = if ratio.is_rational() {
            ratio.rational_part().clone()
        } else {
            BigRational::from_integer(ratio.floor())
        };
        let mut g = gamma.sub(&delta.scale(&q));
        if self.signum(&g) == Ordering::Less {
            g = g.neg();
        }
        Some((self.zero(), g, delta))
    }

    /// No element of Γ exceeds all of Δ.
    pub fn is_cofinal(&self, sub: &Subgroup) -> bool {
        self.levels(sub).first() == Some(&1)
    }

    /// `(center, level, side)` form of a position; ±∞ sit at level 0.
    pub fn edge_form(&self, c: &GroupCut) -> (GroupElem, usize, Side) {
        let m = self.rows.len();
        match c {
            GroupCut::MinusInf => (self.zero(), 0, Side::Lower),
            GroupCut::PlusInf => (self.zero(), 0, Side::Upper),
            GroupCut::Above(g) => (g.clone(), m, Side::Upper),
            GroupCut::Below(g) => (g.clone(), m, Side::Lower),
            GroupCut::CosetEdge { at, level, side } => (at.clone(), (*level).min(m), *side),
        }
    }

    fn from_edge(&self, at: GroupElem, level: usize, side: Side) -> GroupCut {
        let m = self.rows.len();
        match (level, side) {
            (0, Side::Lower) => GroupCut::MinusInf,
            (0, Side::Upper) => GroupCut::PlusInf,
            (l, Side::Upper) if l >= m => GroupCut::Above(at),
            (l, Side::Lower) if l >= m => GroupCut::Below(at),
            (level, side) => GroupCut::CosetEdge { at, level, side },
        }
    }

    pub fn canonical(&self, c: &GroupCut) -> GroupCut {
        let (at, level, side) = self.edge_form(c);
        self.from_edge(at, level, side)
    }

    pub fn check_cut(&self, c: &GroupCut) -> Result<()> {
        match c {
            GroupCut::Above(g) | GroupCut::Below(g) => self.check_dim(g),
            GroupCut::CosetEdge { at, level, .. } => {
                self.check_dim(at)?;
                if *level > self.rows.len() {
                    return Err(Error::InvalidCut(format!(
                        "coset level {level} exceeds group height {}",
                        self.rows.len()
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Whether `g` lies in the initial segment cut off by `c`.
    pub fn is_below(&self, c: &GroupCut, g: &GroupElem) -> bool {
        let (at, level, side) = self.edge_form(c);
        match self.sign_upto(&g.sub(&at), level) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => side == Side::Upper,
        }
    }

    /// Order of positions in Γ: `c1 < c2` iff the initial segment below
    /// `c1` is strictly contained in the one below `c2`.
    pub fn cmp_cuts(&self, c1: &GroupCut, c2: &GroupCut) -> Ordering {
        let (g1, k1, s1) = self.edge_form(c1);
        let (g2, k2, s2) = self.edge_form(c2);
        let k0 = k1.min(k2);
        match self.sign_upto(&g1.sub(&g2), k0) {
            Ordering::Equal => {}
            o => return o,
        }
        let side_ord = |s: Side| match s {
            Side::Lower => Ordering::Less,
            Side::Upper => Ordering::Greater,
        };
        match k1.cmp(&k2) {
            Ordering::Equal => side_ord(s1).cmp(&side_ord(s2)),
            Ordering::Less => side_ord(s1),
            Ordering::Greater => side_ord(s2).reverse(),
        }
    }

    fn canon_level(&self, levels: &[usize], k: usize) -> usize {
        levels.iter().copied().filter(|&p| p <= k).max().unwrap_or(0)
    }

    fn from_sub_edge(&self, levels: &[usize], at: GroupElem, level: usize, side: Side) -> GroupCut {
        let top = levels.last().copied().unwrap_or(0);
        match (level, side) {
            (0, Side::Lower) => GroupCut::MinusInf,
            (0, Side::Upper) => GroupCut::PlusInf,
            (l, Side::Upper) if l >= top => GroupCut::Above(at),
            (l, Side::Lower) if l >= top => GroupCut::Below(at),
            (level, side) => GroupCut::CosetEdge { at, level, side },
        }
    }

    /// The trace of the position `c` on the subgroup Δ, written canonically
    /// (center in Δ, level a level of Δ). Equal traces give equal results.
    pub fn restrict_cut(&self, sub: &Subgroup, c: &GroupCut) -> Result<GroupCut> {
        let levels = self.levels(sub);
        let (gamma, k, side) = self.edge_form(c);
        if k == 0 {
            return Ok(self.from_edge(gamma, 0, side));
        }
        // deepest p ≤ k such that Δ meets γ + K_p
        let mut found = None;
        for p in (0..=k).rev() {
            let (m, rhs) = self.split_system(p, sub.coords(), &gamma);
            if let Some(x) = linalg::solve(&m, &rhs, sub.coords().len()) {
                let mut full = vec![BigRational::zero(); self.rank];
                for (v, &col) in x.into_iter().zip(sub.coords()) {
                    full[col] = v;
                }
                found = Some((p, GroupElem(full)));
                break;
            }
        }
        let (p, delta) = found.expect("p = 0 is always solvable");
        if p == k {
            let lvl = self.canon_level(&levels, k);
            return Ok(self.from_sub_edge(&levels, delta, lvl, side));
        }
        let basis = self.sub_kernel_basis(sub, p);
        if basis.iter().any(|b| !self.row_value(p, b).is_zero()) {
            return Err(Error::NonDefinableSegment(format!(
                "{c} meets the subgroup {sub} at an irrational position"
            )));
        }
        let lvl = self.canon_level(&levels, p);
        let diff = self.row_value(p, &delta.sub(&gamma));
        let side = if diff.is_positive() { Side::Lower } else { Side::Upper };
        Ok(self.from_sub_edge(&levels, delta, lvl, side))
    }

    /// Compare two positions by their traces on Δ.
    pub fn cmp_cuts_on(&self, sub: &Subgroup, c1: &GroupCut, c2: &GroupCut) -> Result<Ordering> {
        let r1 = self.restrict_cut(sub, c1)?;
        let r2 = self.restrict_cut(sub, c2)?;
        Ok(self.cmp_cuts(&r1, &r2))
    }

    /// Largest final segment of Γ lying above every element of Δ that is
    /// below `c` (i.e. disjoint from the initial segment `c` cuts from Δ).
    pub fn segment_above(&self, sub: &Subgroup, c: &GroupCut) -> Result<GroupCut> {
        let levels = self.levels(sub);
        let r = self.restrict_cut(sub, c)?;
        let (at, k, side) = self.edge_form(&r);
        let k = if matches!(r, GroupCut::Above(_) | GroupCut::Below(_)) {
            self.rows.len()
        } else {
            k
        };
        let out = match side {
            Side::Upper => match levels.iter().find(|&&p| p > k) {
                Some(&j) => self.from_edge(at, j - 1, Side::Upper),
                None => GroupCut::Above(at),
            },
            Side::Lower => match levels.iter().rev().find(|&&p| p <= k) {
                Some(&p) => self.from_edge(at, p, Side::Lower),
                None => GroupCut::MinusInf,
            },
        };
        Ok(out)
    }

    /// Upward closure in Γ of the final segment `c` cuts from Δ.
    pub fn upward_closure(&self, sub: &Subgroup, c: &GroupCut) -> Result<GroupCut> {
        let levels = self.levels(sub);
        let r = self.restrict_cut(sub, c)?;
        let (at, k, side) = self.edge_form(&r);
        let k = if matches!(r, GroupCut::Above(_) | GroupCut::Below(_)) {
            self.rows.len()
        } else {
            k
        };
        let out = match side {
            Side::Upper => match levels.iter().rev().find(|&&p| p <= k) {
                Some(&p) => self.from_edge(at, p, Side::Upper),
                None => GroupCut::PlusInf,
            },
            Side::Lower => match levels.iter().find(|&&p| p > k) {
                Some(&j) => self.from_edge(at, j - 1, Side::Lower),
                None => GroupCut::Below(at),
            },
        };
        Ok(out)
    }

    /// `Γ ⊕ ℚ` with the new unit vector placed exactly at position `at`.
    pub fn adjoin(self: &Arc<Self>, at: &GroupCut) -> Result<Arc<ValueGroup>> {
        self.check_cut(at)?;
        let (gamma, k, side) = self.edge_form(at);
        let n = self.rank + 1;
        let mut rows = Vec::with_capacity(self.rows.len() + 1);
        let extend = |row: &Vec<Quad>| {
            let mut r = row.clone();
            r.push(quad_dot(row, &gamma));
            r
        };
        for row in self.rows.iter().take(k) {
            rows.push(extend(row));
        }
        let mut new_row = vec![Quad::zero(); n];
        new_row[n - 1] = match side {
            Side::Upper => Quad::one(),
            Side::Lower => -Quad::one(),
        };
        rows.push(new_row);
        for row in self.rows.iter().skip(k) {
            rows.push(extend(row));
        }
        Ok(Arc::new(ValueGroup {
            rank: n,
            kind: OrderKind::Extended,
            rows,
            parent: Some(Arc::clone(self)),
        }))
    }

    /// Rewrite a position of the subgroup Δ of `from` as a position of
    /// `self` that cuts Δ the same way. One of the two groups must be
    /// obtained from the other by adjunctions, and Δ must lie in both.
    pub fn transport_cut(&self, from: &ValueGroup, sub: &Subgroup, c: &GroupCut) -> Result<GroupCut> {
        if self == from {
            return self.restrict_cut(sub, c);
        }
        if !self.extends(from) && !from.extends(self) {
            return Err(Error::FieldMismatch(format!("{self} and {from} are unrelated")));
        }
        let n = self.rank;
        let resize = |g: GroupElem| {
            let mut v = g.0;
            v.resize(n, BigRational::zero());
            GroupElem(v)
        };
        let r = from.restrict_cut(sub, c)?;
        let out = match r {
            GroupCut::MinusInf | GroupCut::PlusInf => r,
            GroupCut::Above(g) => GroupCut::Above(resize(g)),
            GroupCut::Below(g) => GroupCut::Below(resize(g)),
            GroupCut::CosetEdge { at, level, side } => {
                let target = from.sub_kernel_dim(sub, level);
                let level = (0..=self.height())
                    .rev()
                    .find(|&p| self.sub_kernel_dim(sub, p) == target)
                    .expect("kernel dimensions interpolate");
                GroupCut::CosetEdge {
                    at: resize(at),
                    level,
                    side,
                }
            }
        };
        self.restrict_cut(sub, &out)
    }

    /// Elements used by the sampling tests: small rational coordinates.
    pub fn sample_elements(&self, span: i64, den: i64) -> Vec<GroupElem> {
        let mut out = vec![Vec::new()];
        for _ in 0..self.rank {
            let mut next = Vec::new();
            for prefix in &out {
                for num in -span..=span {
                    let mut v: Vec<BigRational> = prefix.clone();
                    v.push(BigRational::new(BigInt::from(num), BigInt::from(den)));
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter().map(GroupElem).collect()
    }
}

impl fmt::Display for ValueGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            OrderKind::Lexicographic => write!(f, "lex({})", self.rank),
            OrderKind::Weighted => {
                write!(f, "weighted(")?;
                for (i, w) in self.rows[0].iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{w}")?;
                }
                write!(f, ")")
            }
            OrderKind::Extended => write!(f, "extended(rank {})", self.rank),
        }
    }
}

/// `|q|` helper shared by samplers.
pub fn abs_rat(q: &BigRational) -> BigRational {
    q.abs()
}
