//! Cuts `(D, E)` of ordered fields: ±∞, edges of balls, and cuts induced
//! by elements of an extension field ("fillers").
//!
//! Comparison works on a normal form: every filler cut is first analysed
//! relative to its field (see [`classify`]) and rewritten as a ball edge
//! whenever possible, so that distinct normal forms are distinct cuts.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::balls::{between_ball, segment_above_in, upward_closure_in, Ball, CutComplementSpec};
use crate::error::{Error, Result};
use crate::ordfield::{Field, FieldElement, HahnSum, DEFAULT_MAX_STEPS};
use crate::quad::Quad;
use crate::valgroup::{GroupCut, GroupElem, Side};

/// Denominator used for the rational bounds in non-ball certificates.
const CERT_DENOMINATOR: u64 = 1000;

#[derive(Clone, Debug)]
pub enum CutKind {
    MinusInf,
    PlusInf,
    BallEdge { ball: Ball, side: Side },
    /// `D = {r : r < g}` for `g` in an extension field, `g` not in the field.
    Filler { g: FieldElement, side: Side },
}

#[derive(Clone, Debug)]
pub struct Cut {
    field: Arc<Field>,
    kind: CutKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Position {
    Below,
    Above,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Position::Below => write!(f, "below"),
            Position::Above => write!(f, "above"),
        }
    }
}

impl Cut {
    pub fn minus_inf(field: &Arc<Field>) -> Cut {
        Cut {
            field: Arc::clone(field),
            kind: CutKind::MinusInf,
        }
    }

    pub fn plus_inf(field: &Arc<Field>) -> Cut {
        Cut {
            field: Arc::clone(field),
            kind: CutKind::PlusInf,
        }
    }

    pub fn edge(ball: Ball, side: Side) -> Cut {
        Cut {
            field: Arc::clone(ball.field()),
            kind: CutKind::BallEdge { ball, side },
        }
    }

    /// `a⁺` or `a⁻`.
    pub fn principal(a: &FieldElement, side: Side) -> Cut {
        Cut::edge(Ball::singleton(a), side)
    }

    pub fn filler(field: &Arc<Field>, g: &FieldElement, side: Side) -> Result<Cut> {
        if !g.field().contains_field(field) {
            return Err(Error::FieldMismatch(format!(
                "{} is not an extension of {field}",
                g.field()
            )));
        }
        if g.in_subfield(field) == Some(true) {
            return Err(Error::NotAFiller(format!("{g} already lies in {field}")));
        }
        Ok(Cut {
            field: Arc::clone(field),
            kind: CutKind::Filler { g: g.clone(), side },
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn kind(&self) -> &CutKind {
        &self.kind
    }

    /// Whether `x` lies in the lower part `D` or the upper part `E`.
    pub fn side_of(&self, x: &FieldElement) -> Result<Position> {
        let x = x.lift(&self.field)?;
        let below = |b: bool| if b { Position::Below } else { Position::Above };
        Ok(match &self.kind {
            CutKind::MinusInf => Position::Above,
            CutKind::PlusInf => Position::Below,
            CutKind::BallEdge { ball, side } => {
                if ball.contains(&x)? {
                    below(*side == Side::Upper)
                } else {
                    below(x.cmp_field(ball.center()) == Ordering::Less)
                }
            }
            CutKind::Filler { g, .. } => below(x.try_cmp(g)? == Ordering::Less),
        })
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            CutKind::MinusInf => write!(f, "-inf"),
            CutKind::PlusInf => write!(f, "+inf"),
            CutKind::BallEdge { ball, side } if ball.is_singleton() => {
                let c = ball.center().to_string();
                let mark = if *side == Side::Upper { '+' } else { '-' };
                if c[1..].contains(['+', '-', '/']) {
                    write!(f, "({c}){mark}")
                } else {
                    write!(f, "{c}{mark}")
                }
            }
            CutKind::BallEdge { ball, side } => write!(f, "edge({ball}, {side})"),
            CutKind::Filler { g, side } => write!(f, "filler({g}, {side})"),
        }
    }
}

/// Best approximation of `g` by the subfield `R`.
#[derive(Clone, Debug)]
pub enum Approx {
    InSubfield(FieldElement),
    /// `g − r0` has leading term `coeff·t^exponent` with either
    /// `exponent ∉ vR` or `coeff` outside the coefficients of `R`.
    Obstruction {
        r0: FieldElement,
        exponent: GroupElem,
        coeff: Quad,
        in_value_group: bool,
    },
    Unknown {
        reached: Option<GroupElem>,
    },
}

fn project(sum: Vec<(GroupElem, Quad)>, r: &Field) -> HahnSum {
    let n = r.rank();
    HahnSum::from_terms(
        sum.into_iter()
            .map(|(e, c)| (GroupElem::new(e.coords()[..n].to_vec()), c))
            .collect(),
        r.group(),
    )
}

pub fn approximate(
    g: &FieldElement,
    r: &Arc<Field>,
    cutoff: Option<&GroupElem>,
    max_steps: usize,
) -> Result<Approx> {
    let f = g.field();
    if !f.contains_field(r) {
        return Err(Error::FieldMismatch(format!("{r} is not a subfield of {f}")));
    }
    let rr = r.rank();
    let exp_in = |e: &GroupElem| {
        e.coords()[rr..].iter().all(Zero::is_zero)
            && r.support().contains(&GroupElem::new(e.coords()[..rr].to_vec()))
    };
    // (part in R, remainder) of a single term
    let split = |e: &GroupElem, c: &Quad| -> (Option<Quad>, Option<Quad>) {
        if !exp_in(e) {
            (None, Some(c.clone()))
        } else if r.coeff_contains(c) {
            (Some(c.clone()), None)
        } else {
            let d = c.radicand().expect("irrational coefficient");
            let rat = Quad::from_rational(c.rational_part().clone());
            let irr = Quad::new(BigRational::zero(), c.irrational_part().clone(), d);
            (Some(rat), Some(irr))
        }
    };
    let (num, den) = if r.coeff().is_none() {
        g.rationalized()
    } else {
        (g.num().clone(), g.den().clone())
    };
    let den_in = den.terms().iter().all(|(e, c)| exp_in(e) && r.coeff_contains(c));
    if den_in {
        let mut nr = Vec::new();
        let mut nx = Vec::new();
        for (e, c) in num.terms() {
            let (a, b) = split(e, c);
            if let Some(a) = a {
                nr.push((e.clone(), a));
            }
            if let Some(b) = b {
                nx.push((e.clone(), b));
            }
        }
        let r0 = r.from_sums(project(nr, r), project(den.terms().to_vec(), r))?;
        let Some((e, c)) = nx.into_iter().next() else {
            return Ok(Approx::InSubfield(r0));
        };
        let (de, dc) = den.lead().expect("nonzero denominator");
        let e = e.sub(de);
        let c = c / dc.clone();
        let in_value_group = exp_in(&e);
        return Ok(Approx::Obstruction {
            r0,
            exponent: e,
            coeff: c,
            in_value_group,
        });
    }
    let group = f.group();
    let (de, dc) = den.lead().expect("nonzero denominator").clone();
    let inv = dc.inv().expect("nonzero lead");
    let mut rem = num.clone();
    let mut acc = Vec::new();
    let mut steps = 0;
    loop {
        let Some((re, rc)) = rem.lead().cloned() else {
            let r0 = r.from_sums(project(acc, r), HahnSum::one(rr))?;
            return Ok(Approx::InSubfield(r0));
        };
        let e = re.sub(&de);
        if let Some(cut) = cutoff {
            if group.cmp_elems(&e, cut) == Ordering::Greater {
                return Ok(Approx::Unknown { reached: Some(e) });
            }
        }
        steps += 1;
        if steps > max_steps {
            return Ok(Approx::Unknown { reached: Some(e) });
        }
        let c = &rc * &inv;
        let (a, b) = split(&e, &c);
        if let Some(a) = a.clone() {
            acc.push((e.clone(), a));
        }
        if let Some(b) = b {
            let r0 = r.from_sums(project(acc, r), HahnSum::one(rr))?;
            let in_value_group = exp_in(&e);
            return Ok(Approx::Obstruction {
                r0,
                exponent: e,
                coeff: b,
                in_value_group,
            });
        }
        rem = rem.sub(&den.mul_term(&e, &c), group);
    }
}

/// Evidence that the cut of `g` over `R` is not the edge of any ball.
///
/// `g = r0 + coeff·t^γ₀ + (higher terms)` with `coeff` irrational, so
/// every element of `R` stays at distance `≤ γ₀` from `g`. The rational
/// bounds `r_below < g < r_above` differ at exponent γ₀, which rules out
/// every radius containing γ₀; radii inside `{δ > γ₀}` are ruled out by
/// the irrationality of `coeff`.
#[derive(Clone, Debug)]
pub struct NonBallCertificate {
    pub g: FieldElement,
    pub gamma0: GroupElem,
    pub coeff: Quad,
    pub r0: FieldElement,
    /// `r0 + coeff·t^γ₀`, a canonical element realizing the same cut.
    pub rep: FieldElement,
    pub r_below: FieldElement,
    pub r_above: FieldElement,
}

impl NonBallCertificate {
    /// Re-check every claim of the certificate exactly.
    pub fn verify(&self) -> bool {
        let g = &self.g;
        let below = self.r_below.try_cmp(g).map(|o| o == Ordering::Less);
        let above = self.r_above.try_cmp(g).map(|o| o == Ordering::Greater);
        let gap = (&self.r_above - &self.r_below).valuation() == Some(self.gamma0.clone());
        let rep_ok = match FieldElement::unify(g, &self.rep) {
            Ok((a, b)) => match (&a - &b).valuation() {
                None => true,
                Some(v) => {
                    let gg = a.field().group();
                    gg.cmp_elems(&v, &self.gamma0.padded(gg.rank())) == Ordering::Greater
                }
            },
            Err(_) => false,
        };
        below == Ok(true) && above == Ok(true) && gap && rep_ok && !self.coeff.is_rational()
    }
}

#[derive(Clone, Debug)]
pub enum Classification {
    /// `MinusInf` (lower) or `PlusInf` (upper).
    Infinite(Side),
    Principal { center: FieldElement, side: Side },
    BallCut { ball: Ball, side: Side },
    NonBall(Box<NonBallCertificate>),
    Unknown {
        g: FieldElement,
        reached: Option<GroupElem>,
    },
}

impl Classification {
    pub fn describe(&self) -> String {
        match self {
            Classification::Infinite(Side::Lower) => "-inf".into(),
            Classification::Infinite(Side::Upper) => "+inf".into(),
            Classification::Principal { center, side } => {
                format!("principal {}", Cut::principal(center, *side))
            }
            Classification::BallCut { ball, side } => format!("ball edge({ball}, {side})"),
            Classification::NonBall(c) => format!("non-ball at {} near {}", c.gamma0, c.r0),
            Classification::Unknown { .. } => "unknown".into(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Classification::Infinite(_) => "infinite",
            Classification::Principal { .. } => "principal",
            Classification::BallCut { .. } => "ball",
            Classification::NonBall(_) => "non-ball",
            Classification::Unknown { .. } => "unknown",
        }
    }

    fn edge(&self) -> Option<(Ball, Side)> {
        match self {
            Classification::Principal { center, side } => Some((Ball::singleton(center), *side)),
            Classification::BallCut { ball, side } => Some((ball.clone(), *side)),
            _ => None,
        }
    }

    /// An element realizing the cut, with its separation exponent when known.
    fn element(&self) -> Option<(FieldElement, Option<GroupElem>)> {
        match self {
            Classification::NonBall(c) => Some((c.rep.clone(), Some(c.gamma0.clone()))),
            Classification::Unknown { g, .. } => Some((g.clone(), None)),
            _ => None,
        }
    }
}

fn edge_classification(ball: Ball, side: Side) -> Classification {
    if ball.is_whole() {
        Classification::Infinite(side)
    } else if ball.is_singleton() {
        Classification::Principal {
            center: ball.center().clone(),
            side,
        }
    } else {
        Classification::BallCut { ball, side }
    }
}

pub fn classify(cut: &Cut) -> Result<Classification> {
    classify_with(cut, None, DEFAULT_MAX_STEPS)
}

/// Normal form of a cut. Filler cuts are analysed by expanding the filler
/// up to `cutoff` (or `max_steps` terms).
pub fn classify_with(cut: &Cut, cutoff: Option<&GroupElem>, max_steps: usize) -> Result<Classification> {
    let r = cut.field();
    match cut.kind() {
        CutKind::MinusInf => Ok(Classification::Infinite(Side::Lower)),
        CutKind::PlusInf => Ok(Classification::Infinite(Side::Upper)),
        CutKind::BallEdge { ball, side } => Ok(edge_classification(ball.clone(), *side)),
        CutKind::Filler { g, .. } => match approximate(g, r, cutoff, max_steps)? {
            Approx::InSubfield(_) => Err(Error::NotAFiller(format!("{g} lies in {r}"))),
            Approx::Unknown { reached } => Ok(Classification::Unknown {
                g: g.clone(),
                reached,
            }),
            Approx::Obstruction {
                r0,
                exponent,
                coeff,
                in_value_group: false,
            } => {
                let radius = r
                    .group()
                    .transport_cut(g.field().group(), r.support(), &GroupCut::Above(exponent))?;
                let ball = Ball::new(r, &r0, &radius)?;
                let side = if coeff.is_positive() { Side::Upper } else { Side::Lower };
                Ok(edge_classification(ball, side))
            }
            Approx::Obstruction {
                r0,
                exponent,
                coeff,
                in_value_group: true,
            } => {
                let gamma0 = GroupElem::new(exponent.coords()[..r.rank()].to_vec());
                let d = coeff.radicand().expect("irrational coefficient");
                let rd = r.with_coeff(d)?;
                let rep = &r0.lift(&rd)? + &rd.monomial(coeff.clone(), gamma0.clone())?;
                let lo = coeff.rational_below(CERT_DENOMINATOR);
                let hi = &lo + BigRational::new(BigInt::one(), BigInt::from(CERT_DENOMINATOR));
                let r_below = &r0 + &r.monomial(Quad::from_rational(lo), gamma0.clone())?;
                let r_above = &r0 + &r.monomial(Quad::from_rational(hi), gamma0.clone())?;
                Ok(Classification::NonBall(Box::new(NonBallCertificate {
                    g: g.clone(),
                    gamma0,
                    coeff,
                    r0,
                    rep,
                    r_below,
                    r_above,
                })))
            }
        },
    }
}

/// Order of an edge `B^side` relative to the cut of an element `g` of an
/// extension field.
fn cmp_edge_elem(ball: &Ball, side: Side, g: &FieldElement) -> Result<Ordering> {
    let r = ball.field();
    let (a, g) = FieldElement::unify(ball.center(), g)?;
    let f = g.field();
    let Some(v) = (&g - &a).valuation() else {
        return Err(Error::NotAFiller(format!("{g} lies in {r}")));
    };
    let group = f.group();
    let hull = upward_closure_in(f, r, ball.radius())?;
    if !group.is_below(&hull, &v) {
        // g lies between two elements of the ball
        return Ok(match side {
            Side::Upper => Ordering::Greater,
            Side::Lower => Ordering::Less,
        });
    }
    let adjacent = !group.is_below(&segment_above_in(f, r, ball.radius())?, &v);
    Ok(if g.cmp_field(&a) == Ordering::Greater {
        match (adjacent, side) {
            (true, Side::Upper) => Ordering::Equal,
            _ => Ordering::Less,
        }
    } else {
        match (adjacent, side) {
            (true, Side::Lower) => Ordering::Equal,
            _ => Ordering::Greater,
        }
    })
}

fn cmp_elements(
    h1: &FieldElement,
    gap1: Option<&GroupElem>,
    h2: &FieldElement,
    gap2: Option<&GroupElem>,
) -> Result<Ordering> {
    let (a, b) = FieldElement::unify(h1, h2)
        .map_err(|e| Error::Incomparable(format!("fillers from unrelated fields: {e}")))?;
    let d = &b - &a;
    let Some(v) = d.valuation() else {
        return Ok(Ordering::Equal);
    };
    let group = a.field().group();
    if let Some(gap) = gap1.or(gap2) {
        if group.cmp_elems(&v, &gap.padded(group.rank())) == Ordering::Greater {
            return Ok(Ordering::Equal);
        }
        return Ok(if d.is_positive() { Ordering::Less } else { Ordering::Greater });
    }
    Err(Error::Incomparable(format!(
        "cannot decide whether {h1} and {h2} induce the same cut"
    )))
}

fn cmp_classified(c1: &Classification, c2: &Classification) -> Result<Ordering> {
    use Classification::*;
    match (c1, c2) {
        (Infinite(s1), Infinite(s2)) => Ok(side_rank(*s1).cmp(&side_rank(*s2))),
        (Infinite(Side::Lower), _) => Ok(Ordering::Less),
        (Infinite(Side::Upper), _) => Ok(Ordering::Greater),
        (_, Infinite(Side::Lower)) => Ok(Ordering::Greater),
        (_, Infinite(Side::Upper)) => Ok(Ordering::Less),
        _ => match (c1.edge(), c2.edge()) {
            (Some((b1, s1)), Some((b2, s2))) => Ok(cmp_edges(&b1, s1, &b2, s2)),
            (Some((b1, s1)), None) => {
                let (g, _) = c2.element().expect("element form");
                cmp_edge_elem(&b1, s1, &g)
            }
            (None, Some((b2, s2))) => {
                let (g, _) = c1.element().expect("element form");
                Ok(cmp_edge_elem(&b2, s2, &g)?.reverse())
            }
            (None, None) => {
                let (h1, gap1) = c1.element().expect("element form");
                let (h2, gap2) = c2.element().expect("element form");
                cmp_elements(&h1, gap1.as_ref(), &h2, gap2.as_ref())
            }
        },
    }
}

fn side_rank(s: Side) -> u8 {
    match s {
        Side::Lower => 0,
        Side::Upper => 1,
    }
}

fn cmp_edges(b1: &Ball, s1: Side, b2: &Ball, s2: Side) -> Ordering {
    if b1.ball_eq(b2) {
        return side_rank(s1).cmp(&side_rank(s2));
    }
    if b1.is_subset(b2) {
        // B2⁻ < B1⁻ < B1⁺ < B2⁺
        return match s2 {
            Side::Lower => Ordering::Greater,
            Side::Upper => Ordering::Less,
        };
    }
    if b2.is_subset(b1) {
        return match s1 {
            Side::Lower => Ordering::Less,
            Side::Upper => Ordering::Greater,
        };
    }
    b1.center().cmp_field(b2.center())
}

/// `C1 < C2` iff the lower part of `C1` is strictly contained in that of `C2`.
pub fn cut_cmp(c1: &Cut, c2: &Cut) -> Result<Ordering> {
    if *c1.field() != *c2.field() {
        return Err(Error::FieldMismatch(format!(
            "cuts of {} and {}",
            c1.field(),
            c2.field()
        )));
    }
    cmp_classified(&classify(c1)?, &classify(c2)?)
}

/// Equal, or the two edges of one ball.
pub fn equivalent(c1: &Cut, c2: &Cut) -> Result<bool> {
    if *c1.field() != *c2.field() {
        return Err(Error::FieldMismatch("cuts of different fields".into()));
    }
    let k1 = classify(c1)?;
    let k2 = classify(c2)?;
    if let (Some((b1, _)), Some((b2, _))) = (k1.edge(), k2.edge()) {
        if b1.ball_eq(&b2) {
            return Ok(true);
        }
    }
    Ok(cmp_classified(&k1, &k2)? == Ordering::Equal)
}

/// Rewrite a cut in normal form (filler cuts that are ball edges become
/// ball edges).
pub fn canonical(cut: &Cut) -> Result<Cut> {
    let field = cut.field();
    Ok(match classify(cut)? {
        Classification::Infinite(Side::Lower) => Cut::minus_inf(field),
        Classification::Infinite(Side::Upper) => Cut::plus_inf(field),
        Classification::Principal { center, side } => Cut::principal(&center, side),
        Classification::BallCut { ball, side } => Cut::edge(ball, side),
        Classification::NonBall(_) | Classification::Unknown { .. } => cut.clone(),
    })
}

/// `(D ∩ R, E ∩ R)` for a subfield `R` of the cut's field.
pub fn restrict(cut: &Cut, r: &Arc<Field>) -> Result<Cut> {
    let f = cut.field();
    if !f.contains_field(r) {
        return Err(Error::FieldMismatch(format!("{r} is not a subfield of {f}")));
    }
    let out = match cut.kind() {
        CutKind::MinusInf => Cut::minus_inf(r),
        CutKind::PlusInf => Cut::plus_inf(r),
        CutKind::Filler { g, side } => Cut::filler(r, g, *side)?,
        CutKind::BallEdge { ball, side } => {
            let a = ball.center();
            let trace = |center: &FieldElement| -> Result<Cut> {
                let radius = r.group().transport_cut(f.group(), r.support(), ball.radius())?;
                Ok(Cut::edge(Ball::new(r, center, &radius)?, *side))
            };
            match approximate(a, r, None, DEFAULT_MAX_STEPS)? {
                Approx::InSubfield(c) => trace(&c)?,
                Approx::Obstruction { r0, exponent, .. } => {
                    if ball.in_radius(&exponent) {
                        trace(&r0)?
                    } else {
                        Cut::filler(r, a, *side)?
                    }
                }
                Approx::Unknown { .. } => {
                    return Err(Error::Incomparable(format!(
                        "could not locate {a} relative to {r}"
                    )))
                }
            }
        }
    };
    canonical(&out)
}

/// The closed interval of cuts of `F` restricting to `C`.
#[derive(Clone, Debug)]
pub struct Fiber {
    pub lower: Cut,
    pub upper: Cut,
    pub singleton: bool,
}

pub fn fiber(cut: &Cut, f: &Arc<Field>) -> Result<Fiber> {
    let r = cut.field();
    if !f.contains_field(r) {
        return Err(Error::FieldMismatch(format!("{r} is not a subfield of {f}")));
    }
    let (lower, upper) = match classify(cut)? {
        Classification::Infinite(side) => {
            let hull = upward_closure_in(f, r, &GroupCut::MinusInf)?;
            let b = Ball::new(f, &f.zero(), &hull)?;
            match side {
                Side::Upper => (Cut::edge(b, Side::Upper), Cut::plus_inf(f)),
                Side::Lower => (Cut::minus_inf(f), Cut::edge(b, Side::Lower)),
            }
        }
        Classification::Principal { .. } | Classification::BallCut { .. } => {
            let k = classify(cut)?;
            let (b0, side) = k.edge().expect("edge form");
            let hull = Ball::new(f, b0.center(), &upward_closure_in(f, r, b0.radius())?)?;
            let between = Ball::new(f, b0.center(), &segment_above_in(f, r, b0.radius())?)?;
            match side {
                Side::Upper => (Cut::edge(hull, Side::Upper), Cut::edge(between, Side::Upper)),
                Side::Lower => (Cut::edge(between, Side::Lower), Cut::edge(hull, Side::Lower)),
            }
        }
        Classification::NonBall(cert) => {
            let filler = if f.contains_field(cert.rep.field()) {
                Some(cert.rep.lift(f)?)
            } else if f.contains_field(cert.g.field()) {
                Some(cert.g.lift(f)?)
            } else {
                None
            };
            match filler {
                Some(a) => {
                    let comp = CutComplementSpec::NonBallWithFiller(cut.clone(), a.clone());
                    let b = between_ball(&comp, f, &a)?;
                    (Cut::edge(b.clone(), Side::Lower), Cut::edge(b, Side::Upper))
                }
                None => {
                    let d = cert.coeff.radicand().expect("irrational coefficient");
                    let fd = f.with_coeff(d)?;
                    let c = Cut::filler(f, &cert.rep.lift(&fd)?, Side::Lower)?;
                    (c.clone(), c)
                }
            }
        }
        Classification::Unknown { g, .. } => {
            return Err(Error::Incomparable(format!("could not classify the cut of {g}")))
        }
    };
    let singleton = cut_cmp(&lower, &upper)? == Ordering::Equal;
    Ok(Fiber {
        lower,
        upper,
        singleton,
    })
}

fn anchor(k: &Classification) -> Option<FieldElement> {
    match k {
        Classification::Principal { center, .. } => Some(center.clone()),
        Classification::BallCut { ball, .. } => Some(ball.center().clone()),
        Classification::NonBall(c) => Some(c.r0.clone()),
        _ => None,
    }
}

fn radius_exponents(k: &Classification, rank: usize) -> Vec<GroupElem> {
    let at = match k {
        Classification::BallCut { ball, .. } => match ball.radius() {
            GroupCut::Above(g) | GroupCut::Below(g) => Some(g.clone()),
            GroupCut::CosetEdge { at, .. } => Some(at.clone()),
            _ => None,
        },
        Classification::NonBall(c) => Some(c.gamma0.clone()),
        _ => None,
    };
    let base = at.unwrap_or_else(|| GroupElem::zero(rank));
    let mut out = vec![base.clone()];
    for i in 0..rank {
        for s in [1, -1, 2, -2] {
            out.push(base.add(&GroupElem::unit(rank, i).scale(&BigRational::from_integer(s.into()))));
        }
    }
    out
}

/// An element `a` with `C1 ≤ a⁻ < a⁺ ≤ C2`, for `C1 < C2`.
pub fn find_between(c1: &Cut, c2: &Cut) -> Result<FieldElement> {
    if cut_cmp(c1, c2)? != Ordering::Less {
        return Err(Error::InvalidCut(format!("{c1} is not below {c2}")));
    }
    let r = c1.field();
    let k1 = classify(c1)?;
    let k2 = classify(c2)?;
    let ok = |x: &FieldElement| -> Result<bool> {
        Ok(c1.side_of(x)? == Position::Above && c2.side_of(x)? == Position::Below)
    };
    let one = r.one();
    let a1 = anchor(&k1);
    let a2 = anchor(&k2);
    let first = match (&a1, &a2) {
        (Some(x), Some(y)) => (x + y).checked_div(&r.int(2))?,
        (None, Some(y)) => y - &one,
        (Some(x), None) => x + &one,
        (None, None) => r.zero(),
    };
    if ok(&first)? {
        return Ok(first);
    }
    let rank = r.rank();
    let mut exps = radius_exponents(&k1, rank);
    exps.extend(radius_exponents(&k2, rank));
    exps.retain(|e| r.value_elem(e));
    let coeffs = [
        (1, 1),
        (-1, 1),
        (1, 2),
        (-1, 2),
        (1, 1000),
        (-1, 1000),
        (1000, 1),
        (-1000, 1),
    ];
    let mut centers: Vec<FieldElement> = [a1, a2].into_iter().flatten().collect();
    if let Classification::NonBall(c) = &k1 {
        centers.push(c.r_above.clone());
    }
    if let Classification::NonBall(c) = &k2 {
        centers.push(c.r_below.clone());
    }
    if centers.is_empty() {
        centers.push(r.zero());
    }
    for a in &centers {
        if ok(a)? {
            return Ok(a.clone());
        }
        for e in &exps {
            for (n, d) in coeffs {
                let x = a + &r.monomial(Quad::from_ratio(n, d), e.clone())?;
                if ok(&x)? {
                    return Ok(x);
                }
            }
        }
    }
    Err(Error::Unsupported(format!(
        "no element between {c1} and {c2} found in the search range"
    )))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BallRelation {
    Disjoint,
    Inside,
    Contains,
    Equal,
}

impl fmt::Display for BallRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BallRelation::Disjoint => "disjoint",
            BallRelation::Inside => "inside",
            BallRelation::Contains => "containing",
            BallRelation::Equal => "equal",
        };
        write!(f, "{s}")
    }
}

/// One row of the case analysis showing that `[B⁻, B⁺]` and `(B⁻, B⁺)`
/// never separate the two edges of another ball.
#[derive(Clone, Debug)]
pub struct FullnessCase {
    pub other: Ball,
    pub relation: BallRelation,
    pub edges_in_closed: (bool, bool),
    pub edges_in_open: (bool, bool),
    pub holds: bool,
}

pub fn is_full_ball_interval(b: &Ball, samples: &[Ball]) -> Result<Vec<FullnessCase>> {
    let lo = b.lower_edge();
    let hi = b.upper_edge();
    let mut rows = Vec::with_capacity(samples.len());
    for b1 in samples {
        let relation = if b1.ball_eq(b) {
            BallRelation::Equal
        } else if b1.is_subset(b) {
            BallRelation::Inside
        } else if b.is_subset(b1) {
            BallRelation::Contains
        } else {
            BallRelation::Disjoint
        };
        let place = |c: &Cut| -> Result<(bool, bool)> {
            let l = cut_cmp(&lo, c)?;
            let h = cut_cmp(c, &hi)?;
            Ok((
                l != Ordering::Greater && h != Ordering::Greater,
                l == Ordering::Less && h == Ordering::Less,
            ))
        };
        let (cl, ol) = place(&b1.lower_edge())?;
        let (ch, oh) = place(&b1.upper_edge())?;
        let holds = match relation {
            BallRelation::Disjoint | BallRelation::Contains => !cl && !ch,
            BallRelation::Inside => ol && oh,
            BallRelation::Equal => cl && ch && !ol && !oh,
        };
        rows.push(FullnessCase {
            other: b1.clone(),
            relation,
            edges_in_closed: (cl, ch),
            edges_in_open: (ol, oh),
            holds,
        });
    }
    Ok(rows)
}
