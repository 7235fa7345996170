//! Ultrametric balls `B_S(a,F) = {b : v(a−b) ∈ S ∪ {∞}}` for final segments
//! `S` of the value group of `F`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::cuts::{classify, Classification, Cut, CutKind};
use crate::error::{Error, Result};
use crate::ordfield::{Field, FieldElement};
use crate::valgroup::{FinalSegment, GroupCut, GroupElem, InitialSegment};

#[derive(Clone, Debug)]
pub struct Ball {
    field: Arc<Field>,
    center: FieldElement,
    /// Boundary of `S`, canonical for the value group of `field`.
    radius: GroupCut,
}

impl Ball {
    /// `B_S(center, field)` with `S` the final segment above `radius`
    /// (intersected with the value group of the field).
    pub fn new(field: &Arc<Field>, center: &FieldElement, radius: &GroupCut) -> Result<Ball> {
        let center = center.lift(field)?;
        field.group().check_cut(radius)?;
        let radius = field.group().restrict_cut(field.support(), radius)?;
        Ok(Ball {
            field: Arc::clone(field),
            center,
            radius,
        })
    }

    /// `B_∅(a) = {a}`.
    pub fn singleton(center: &FieldElement) -> Ball {
        Ball {
            field: Arc::clone(center.field()),
            center: center.clone(),
            radius: GroupCut::PlusInf,
        }
    }

    pub fn whole(field: &Arc<Field>) -> Ball {
        Ball {
            field: Arc::clone(field),
            center: field.zero(),
            radius: GroupCut::MinusInf,
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn center(&self) -> &FieldElement {
        &self.center
    }

    pub fn radius(&self) -> &GroupCut {
        &self.radius
    }

    pub fn radius_segment(&self) -> FinalSegment {
        FinalSegment::new(self.radius.clone())
    }

    pub fn is_whole(&self) -> bool {
        self.radius == GroupCut::MinusInf
    }

    pub fn is_singleton(&self) -> bool {
        self.radius == GroupCut::PlusInf
    }

    pub fn with_center(&self, center: &FieldElement) -> Result<Ball> {
        Ball::new(&self.field, center, &self.radius)
    }

    /// `γ ∈ S`.
    pub fn in_radius(&self, g: &GroupElem) -> bool {
        !self.field.group().is_below(&self.radius, g)
    }

    pub fn contains(&self, x: &FieldElement) -> Result<bool> {
        let x = x.lift(&self.field)?;
        match (&x - &self.center).valuation() {
            None => Ok(true),
            Some(v) => Ok(self.in_radius(&v)),
        }
    }

    /// Same set of elements.
    pub fn ball_eq(&self, other: &Ball) -> bool {
        *self.field == *other.field
            && self.radius == other.radius
            && self.contains(&other.center).unwrap_or(false)
    }

    pub fn is_subset(&self, other: &Ball) -> bool {
        *self.field == *other.field
            && self.field.group().cmp_cuts(&other.radius, &self.radius) != Ordering::Greater
            && other.contains(&self.center).unwrap_or(false)
    }

    pub fn is_disjoint(&self, other: &Ball) -> bool {
        !self.is_subset(other) && !other.is_subset(self)
    }

    /// The common value set `v(E−D) = v(E−B) = v(B−D)` of the complement
    /// `(D, E)`, namely `vF ∖ S`.
    pub fn distance_sets(&self) -> Result<InitialSegment> {
        if self.is_whole() {
            return Err(Error::InvalidBall(
                "the whole field has no complement".into(),
            ));
        }
        Ok(self.radius_segment().complement())
    }

    pub fn upper_edge(&self) -> Cut {
        Cut::edge(self.clone(), crate::valgroup::Side::Upper)
    }

    pub fn lower_edge(&self) -> Cut {
        Cut::edge(self.clone(), crate::valgroup::Side::Lower)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ball({}; {})", self.center, self.radius)
    }
}

/// A cut `(D, E)` of a subfield `R` given by what generates it.
#[derive(Clone, Debug)]
pub enum CutComplementSpec {
    /// `D < B < E` for a ball `B` of `R`.
    BallComplement(Ball),
    /// A non-ball cut of `R` together with an element of the ambient field
    /// filling it.
    NonBallWithFiller(Cut, FieldElement),
}

/// `Betw_F(D, E)`: the ball of `F` of all elements filling the cut, given
/// one filler `a`.
pub fn between_ball(comp: &CutComplementSpec, field: &Arc<Field>, filler: &FieldElement) -> Result<Ball> {
    let a = filler.lift(field)?;
    let group = field.group();
    match comp {
        CutComplementSpec::BallComplement(b0) => {
            let r = b0.field();
            if !field.contains_field(r) {
                return Err(Error::FieldMismatch(format!("{r} is not a subfield of {field}")));
            }
            let s = segment_above_in(field, r, b0.radius())?;
            let hull = Ball::new(field, b0.center(), &s)?;
            if !hull.contains(&a)? {
                return Err(Error::NotAFiller(format!(
                    "{a} does not lie between the two sides of {b0}"
                )));
            }
            hull.with_center(&a)
        }
        CutComplementSpec::NonBallWithFiller(cut, _) => {
            let r = cut.field();
            let CutKind::Filler { .. } = cut.kind() else {
                return Err(Error::InvalidCut("expected a filler cut".into()));
            };
            let cert = match classify(cut)? {
                Classification::NonBall(c) => c,
                other => {
                    return Err(Error::InvalidCut(format!(
                        "{} is not a non-ball cut",
                        other.describe()
                    )))
                }
            };
            // v(E−D) = {δ ∈ vR : δ ≤ γ₀}
            let bound = GroupCut::Above(cert.gamma0.clone());
            let s = segment_above_in(field, r, &bound)?;
            let rep = cert.rep.clone();
            let (a2, rep) = FieldElement::unify(&a, &rep)?;
            let d = &a2 - &rep;
            let fills = match d.valuation() {
                None => true,
                Some(v) => {
                    let g2 = a2.field().group();
                    let s2 = g2.transport_cut(group, field.support(), &s)?;
                    !g2.is_below(&s2, &v)
                }
            };
            if !fills {
                return Err(Error::NotAFiller(format!("{a} does not fill {cut}")));
            }
            Ball::new(field, &a, &s)
        }
    }
}

/// `segment_above` of the initial segment `vR ∖ S₀` (with `S₀` given by
/// its boundary in the group of `R`), computed in the group of `F`.
pub fn segment_above_in(f: &Field, r: &Field, boundary: &GroupCut) -> Result<GroupCut> {
    let b = f.group().transport_cut(r.group(), r.support(), boundary)?;
    f.group().segment_above(r.support(), &b)
}

/// Upward closure of `S₀ ⊆ vR` in the group of `F`.
pub fn upward_closure_in(f: &Field, r: &Field, boundary: &GroupCut) -> Result<GroupCut> {
    let b = f.group().transport_cut(r.group(), r.support(), boundary)?;
    f.group().upward_closure(r.support(), &b)
}
