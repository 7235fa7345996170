//! ℝ-places of rational function fields `R(x₁,…,xₙ)`.
//!
//! A place is given by a realization: each generator is sent to an element
//! of an extension field of `R` that carries its own adjoined infinitesimal,
//! and the value of `f` is the residue of `f` evaluated there. Because the
//! realized generators are never algebraic over `R`, evaluation never meets
//! `0/0`; a pole shows up as a negative valuation.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::cuts::{classify, cut_cmp, find_between, Classification, Cut, CutKind};
use crate::error::{Error, Result};
use crate::ordfield::{Field, FieldElement, HahnSum, Residue};
use crate::quad::Quad;
use crate::ratfun::{EvalResult, Poly, RatFun};
use crate::valgroup::{GroupCut, GroupElem, Side, Subgroup, ValueGroup};

#[derive(Clone, Debug)]
pub enum PlaceValue {
    Finite(Quad),
    Infinite,
    /// Value of a Gauss place: a rational function over the residue field.
    Function(RatFun),
}

impl PlaceValue {
    pub fn is_positive(&self) -> bool {
        match self {
            PlaceValue::Finite(q) => q.is_positive(),
            _ => false,
        }
    }
}

impl PartialEq for PlaceValue {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (PlaceValue::Finite(a), PlaceValue::Finite(b)) => a == b,
            (PlaceValue::Infinite, PlaceValue::Infinite) => true,
            (PlaceValue::Function(f), PlaceValue::Function(g)) => {
                f.vars() == g.vars() && f.same_function(g).unwrap_or(false)
            }
            _ => false,
        }
    }
}

impl From<Residue> for PlaceValue {
    fn from(r: Residue) -> Self {
        match r {
            Residue::Finite(q) => PlaceValue::Finite(q),
            Residue::Infinite => PlaceValue::Infinite,
        }
    }
}

impl fmt::Display for PlaceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceValue::Finite(q) => write!(f, "{q}"),
            PlaceValue::Infinite => write!(f, "inf"),
            PlaceValue::Function(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Realization {
    Point {
        field: Arc<Field>,
        values: Vec<FieldElement>,
    },
    /// Coefficientwise residue on `F(y)` (trivial on the residue field).
    Gauss,
    /// `ζ ∘ ξ_y` for a place `ζ` of `R(y)` with `R` inside the residue field.
    ConstantExt { inner: Box<RPlace> },
}

#[derive(Clone, Debug)]
pub enum Provenance {
    FromCut(String),
    Stacked(Vec<String>),
    Independent(Vec<Quad>),
    Composed(Vec<FieldElement>),
    Gauss,
    ConstantExt,
    Embedded(String),
    Explicit,
    Canonical,
    Restricted,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::FromCut(c) => write!(f, "from-cut {c}"),
            Provenance::Stacked(order) => write!(f, "stacked order {}", order.join(",")),
            Provenance::Independent(w) => {
                let ws: Vec<String> = w.iter().map(|q| q.to_string()).collect();
                write!(f, "independent weights {}", ws.join(","))
            }
            Provenance::Composed(a) => {
                let xs: Vec<String> = a.iter().map(|q| q.to_string()).collect();
                write!(f, "composed at ({})", xs.join(","))
            }
            Provenance::Gauss => write!(f, "gauss"),
            Provenance::ConstantExt => write!(f, "constant extension"),
            Provenance::Embedded(c) => write!(f, "embedded from {c}"),
            Provenance::Explicit => write!(f, "explicit"),
            Provenance::Canonical => write!(f, "canonical"),
            Provenance::Restricted => write!(f, "restricted"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RPlace {
    base: Arc<Field>,
    vars: Vec<String>,
    realization: Realization,
    provenance: Provenance,
}

/// Value of a place together with the valuation of the realized element.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: PlaceValue,
    pub valuation: Option<GroupElem>,
}

impl RPlace {
    pub fn base(&self) -> &Arc<Field> {
        &self.base
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn realization(&self) -> &Realization {
        &self.realization
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Realized generator of variable `name`, for point realizations.
    pub fn generator(&self, name: &str) -> Option<&FieldElement> {
        match &self.realization {
            Realization::Point { values, .. } => {
                let i = self.vars.iter().position(|v| v == name)?;
                values.get(i)
            }
            _ => None,
        }
    }

    pub fn with_provenance(mut self, p: Provenance) -> RPlace {
        self.provenance = p;
        self
    }

    pub fn describe(&self) -> String {
        match &self.realization {
            Realization::Point { field, values } => {
                let parts: Vec<String> = self
                    .vars
                    .iter()
                    .zip(values)
                    .map(|(v, x)| format!("{v}={x}"))
                    .collect();
                format!("{} in {}", parts.join(", "), field)
            }
            Realization::Gauss => format!("gauss extension over {}", self.base),
            Realization::ConstantExt { inner } => format!("({}) after gauss", inner.describe()),
        }
    }

    /// `f` rewritten in this place's variables with coefficients in `base`.
    fn adapt(&self, f: &RatFun) -> Result<RatFun> {
        let f = if f.vars() == self.vars.as_slice() {
            f.clone()
        } else {
            f.with_vars(&self.vars)?
        };
        if **f.field() == *self.base {
            return Ok(f);
        }
        f.lift(&self.base)
    }
}

/// The canonical residue place of `K` (no variables).
pub fn canonical_place(k: &Arc<Field>) -> RPlace {
    RPlace {
        base: Arc::clone(k),
        vars: Vec::new(),
        realization: Realization::Point {
            field: Arc::clone(k),
            values: Vec::new(),
        },
        provenance: Provenance::Canonical,
    }
}

/// A place given directly by the images of the generators.
pub fn realized_place(base: &Arc<Field>, vars: &[String], values: &[FieldElement]) -> Result<RPlace> {
    if vars.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: vars.len(),
            found: values.len(),
        });
    }
    let field = match values.first() {
        Some(x) => Arc::clone(x.field()),
        None => Arc::clone(base),
    };
    if !field.contains_field(base) {
        return Err(Error::FieldMismatch(format!("{field} does not contain {base}")));
    }
    let values = values.iter().map(|x| x.lift(&field)).collect::<Result<Vec<_>>>()?;
    Ok(RPlace {
        base: Arc::clone(base),
        vars: vars.to_vec(),
        realization: Realization::Point { field, values },
        provenance: Provenance::Explicit,
    })
}

/// The place of `R(y)` attached to a cut of `R`.
pub fn place_from_cut(cut: &Cut, var: &str) -> Result<RPlace> {
    let r = cut.field();
    let (field, y) = match classify(cut)? {
        Classification::Infinite(side) => {
            let (f, eps) = r.adjoin_infinitesimal(&GroupCut::PlusInf, side == Side::Upper)?;
            (Arc::clone(&f), eps.inv()?)
        }
        Classification::Principal { center, side } => {
            let (f, eps) = r.adjoin_infinitesimal(&GroupCut::PlusInf, side == Side::Upper)?;
            (Arc::clone(&f), &center.lift(&f)? + &eps)
        }
        Classification::BallCut { ball, side } => {
            let (f, eps) = r.adjoin_infinitesimal(ball.radius(), side == Side::Upper)?;
            (Arc::clone(&f), &ball.center().lift(&f)? + &eps)
        }
        Classification::NonBall(_) | Classification::Unknown { .. } => {
            let CutKind::Filler { g, side } = cut.kind() else {
                return Err(Error::InvalidCut(format!("{cut} has no filler")));
            };
            let (f, eps) = g.field().adjoin_infinitesimal(&GroupCut::PlusInf, *side == Side::Upper)?;
            (Arc::clone(&f), &g.lift(&f)? + &eps)
        }
    };
    Ok(RPlace {
        base: Arc::clone(r),
        vars: vec![var.to_string()],
        realization: Realization::Point { field, values: vec![y] },
        provenance: Provenance::FromCut(cut.to_string()),
    })
}

pub fn eval_place(place: &RPlace, f: &RatFun) -> Result<Evaluation> {
    let f = place.adapt(f)?;
    match &place.realization {
        Realization::Point { values, field } => {
            let w = if values.is_empty() {
                // no variables: the function is a constant of the base field
                let n = f.num().eval(&[])?.lift(field)?;
                let d = f.den().eval(&[])?.lift(field)?;
                n.checked_div(&d)?
            } else {
                match f.eval_at(values)? {
                    EvalResult::Value(w) => w,
                    EvalResult::Pole => return Err(Error::DivisionByZero),
                }
            };
            Ok(Evaluation {
                valuation: w.valuation(),
                value: w.residue().into(),
            })
        }
        Realization::Gauss => Ok(Evaluation {
            value: gauss_residue(&f)?,
            valuation: None,
        }),
        Realization::ConstantExt { inner } => {
            let value = match gauss_residue(&f)? {
                PlaceValue::Function(g) => {
                    let r = inner.base().clone();
                    let g = RatFun::new(
                        g.num().map_coeffs(&r, |c| constant_in(&r, c))?,
                        g.den().map_coeffs(&r, |c| constant_in(&r, c))?,
                    )?;
                    eval_place(inner, &g.with_vars(inner.vars())?)?.value
                }
                other => other,
            };
            Ok(Evaluation {
                value,
                valuation: None,
            })
        }
    }
}

fn constant_in(r: &Arc<Field>, c: &FieldElement) -> Result<FieldElement> {
    let q = c
        .as_constant()
        .ok_or_else(|| Error::InvalidPlace(format!("{c} is not a constant")))?;
    if !r.coeff_contains(&q) {
        return Err(Error::FieldMismatch(format!("{q} is not in {r}")));
    }
    Ok(r.constant(q))
}

/// `H′(f)` membership: finite and positive value.
pub fn harrison(place: &RPlace, f: &RatFun) -> Result<bool> {
    Ok(eval_place(place, f)?.value.is_positive())
}

fn min_valuation(p: &Poly) -> Option<GroupElem> {
    let g = p.field().group().clone();
    p.terms()
        .values()
        .filter_map(|c| c.valuation())
        .min_by(|a, b| g.cmp_elems(a, b))
}

/// Coefficientwise residue of a polynomial divided by `t^m`.
fn reduce(p: &Poly, m: &GroupElem, k: &Arc<Field>) -> Result<Poly> {
    let f = p.field();
    let shift = f.t(m.neg())?;
    p.map_coeffs(k, |c| match (c * &shift).residue() {
        Residue::Finite(q) => Ok(k.constant(q)),
        Residue::Infinite => unreachable!("coefficient below the minimum valuation"),
    })
}

/// The Gauss extension `ξ_y` of the canonical place of `F`.
pub fn gauss_residue(f: &RatFun) -> Result<PlaceValue> {
    let field = f.field();
    let Some(mn) = min_valuation(f.num()) else {
        return Ok(PlaceValue::Finite(Quad::zero()));
    };
    let md = min_valuation(f.den()).expect("nonzero denominator");
    match field.group().cmp_elems(&mn, &md) {
        Ordering::Less => Ok(PlaceValue::Infinite),
        Ordering::Greater => Ok(PlaceValue::Finite(Quad::zero())),
        Ordering::Equal => {
            let k = residue_field(field)?;
            let g = RatFun::new(reduce(f.num(), &mn, &k)?, reduce(f.den(), &md, &k)?)?;
            Ok(PlaceValue::Function(g))
        }
    }
}

/// The coefficient field of `F` as a field of constants.
pub fn residue_field(f: &Arc<Field>) -> Result<Arc<Field>> {
    f.subfield(f.coeff(), Subgroup::trivial())
}

pub fn gauss_extension(f: &Arc<Field>, var: &str) -> RPlace {
    RPlace {
        base: Arc::clone(f),
        vars: vec![var.to_string()],
        realization: Realization::Gauss,
        provenance: Provenance::Gauss,
    }
}

/// `ι(ζ) = ζ ∘ ξ_y` on `F(y)` for a place `ζ` of `R(y)`, `R` a field of
/// constants inside the residue field of `F`.
pub fn constant_ext_embed(zeta: &RPlace, f: &Arc<Field>) -> Result<RPlace> {
    if zeta.vars.len() != 1 {
        return Err(Error::InvalidPlace("expected a place of R(y)".into()));
    }
    if !zeta.base.support().coords().is_empty() {
        return Err(Error::InvalidPlace(format!(
            "{} is not contained in the residue field of {f}",
            zeta.base
        )));
    }
    if zeta.base.coeff().is_some() && zeta.base.coeff() != f.coeff() {
        return Err(Error::FieldMismatch("coefficient fields differ".into()));
    }
    Ok(RPlace {
        base: Arc::clone(f),
        vars: zeta.vars.clone(),
        realization: Realization::ConstantExt {
            inner: Box::new(zeta.clone()),
        },
        provenance: Provenance::ConstantExt,
    })
}

/// Base field of the stacked/independent constructions: constants with
/// coefficients in ℚ or ℚ(√d).
fn coeff_radicand(values: &[Quad]) -> Result<Option<u64>> {
    let mut d = None;
    for v in values {
        if let Some(r) = v.radicand() {
            match d {
                Some(e) if e != r => {
                    return Err(Error::Unsupported("values from different quadratic fields".into()))
                }
                _ => d = Some(r),
            }
        }
    }
    Ok(d)
}

/// `x̂ᵢ = aᵢ + εᵢ` over `ℚⁿ` lex; the first variable of `order` receives
/// the deepest infinitesimal `v = (1,0,…,0)`.
pub fn stacked_place(vars: &[String], values: &[Quad], order: &[String]) -> Result<RPlace> {
    let n = vars.len();
    if values.len() != n || order.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: values.len().min(order.len()),
        });
    }
    let mut seen = order.to_vec();
    seen.sort();
    let mut want = vars.to_vec();
    want.sort();
    if seen != want {
        return Err(Error::InvalidPlace("order must list every variable once".into()));
    }
    let d = coeff_radicand(values)?;
    let f = Field::hahn(d, ValueGroup::lex(n));
    let base = f.subfield(d, Subgroup::trivial())?;
    let mut gens = Vec::with_capacity(n);
    for (v, a) in vars.iter().zip(values) {
        let j = order.iter().position(|o| o == v).expect("checked above");
        gens.push(&f.constant(a.clone()) + &f.t(GroupElem::unit(n, j))?);
    }
    Ok(RPlace {
        base,
        vars: vars.to_vec(),
        realization: Realization::Point { field: f, values: gens },
        provenance: Provenance::Stacked(order.to_vec()),
    })
}

/// `x̂ᵢ = aᵢ + t^{eᵢ}` with `v(eᵢ) = rᵢ` for ℚ-independent real weights.
pub fn independent_place(vars: &[String], values: &[Quad], weights: &[Quad]) -> Result<RPlace> {
    let n = vars.len();
    if values.len() != n || weights.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: values.len().min(weights.len()),
        });
    }
    let group = ValueGroup::weighted(weights.to_vec())?;
    let d = coeff_radicand(values)?;
    let f = Field::hahn(d, group);
    let base = f.subfield(d, Subgroup::trivial())?;
    let gens = values
        .iter()
        .enumerate()
        .map(|(i, a)| Ok(&f.constant(a.clone()) + &f.t(GroupElem::unit(n, i))?))
        .collect::<Result<Vec<_>>>()?;
    Ok(RPlace {
        base,
        vars: vars.to_vec(),
        realization: Realization::Point { field: f, values: gens },
        provenance: Provenance::Independent(weights.to_vec()),
    })
}

/// `ζ ∘ ξ` for the `K`-rational place `ξ: xᵢ ↦ aᵢ` of `K(x⃗)` and a place
/// `ζ` of `K` given by a field realization (no variables).
pub fn rational_place_compose(vars: &[String], images: &[FieldElement], zeta: &RPlace) -> Result<RPlace> {
    if !zeta.vars.is_empty() {
        return Err(Error::InvalidPlace("ζ must be a place of the constant field".into()));
    }
    let Realization::Point { field, .. } = &zeta.realization else {
        return Err(Error::InvalidPlace("ζ must be given by a realization".into()));
    };
    if images.len() != vars.len() {
        return Err(Error::DimensionMismatch {
            expected: vars.len(),
            found: images.len(),
        });
    }
    let k = &zeta.base;
    let images = images.iter().map(|a| a.lift(k)).collect::<Result<Vec<_>>>()?;
    let mut cur = Arc::clone(field);
    let mut eps = Vec::new();
    for _ in vars {
        let (next, e) = cur.adjoin_infinitesimal(&GroupCut::PlusInf, true)?;
        eps.push(e);
        cur = next;
    }
    let values = images
        .iter()
        .zip(&eps)
        .map(|(a, e)| Ok(&a.lift(&cur)? + &e.lift(&cur)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(RPlace {
        base: Arc::clone(k),
        vars: vars.to_vec(),
        realization: Realization::Point { field: cur, values },
        provenance: Provenance::Composed(images),
    })
}

/// `ξ(f) ∈ K ∪ {∞}` for a composed place; `None` stands for ∞.
pub fn rational_image(place: &RPlace, f: &RatFun) -> Result<Option<FieldElement>> {
    let Provenance::Composed(images) = &place.provenance else {
        return Err(Error::InvalidPlace("not a composed place".into()));
    };
    let f = place.adapt(f)?;
    if let EvalResult::Value(w) = f.eval_at(images)? {
        return Ok(Some(w));
    }
    // 0/0 at the point: read off the leading part in the adjoined infinitesimals
    let Realization::Point { values, .. } = &place.realization else {
        unreachable!("composed places are point realizations");
    };
    let k = &place.base;
    let n = f.num().eval(values)?;
    let d = f.den().eval(values)?;
    let kr = k.rank();
    let outer = |s: &HahnSum| -> Option<GroupElem> {
        s.lead().map(|(e, _)| GroupElem::new(e.coords()[kr..].to_vec()))
    };
    let lead_part = |x: &FieldElement| -> Result<(GroupElem, FieldElement)> {
        let (num, den) = (x.num(), x.den());
        let on = outer(num).expect("nonzero");
        let od = outer(den).expect("nonzero");
        let keep = |s: &HahnSum, o: &GroupElem| -> Vec<(GroupElem, Quad)> {
            s.terms()
                .iter()
                .filter(|(e, _)| GroupElem::new(e.coords()[kr..].to_vec()) == *o)
                .map(|(e, c)| (GroupElem::new(e.coords()[..kr].to_vec()), c.clone()))
                .collect()
        };
        let kn = HahnSum::from_terms(keep(num, &on), k.group());
        let kd = HahnSum::from_terms(keep(den, &od), k.group());
        Ok((on.sub(&od), k.from_sums(kn, kd)?))
    };
    if n.is_zero() {
        return Ok(Some(k.zero()));
    }
    let (en, kn) = lead_part(&n)?;
    let (ed, kd) = lead_part(&d)?;
    let diff = en.sub(&ed);
    // the adjoined coordinates are ordered lexicographically, latest first
    let sign = diff
        .coords()
        .iter()
        .rev()
        .map(|c| c.cmp(&BigRational::zero()))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal);
    match sign {
        Ordering::Less => Ok(None),
        Ordering::Greater => Ok(Some(k.zero())),
        Ordering::Equal => Ok(Some(kn.checked_div(&kd)?)),
    }
}

/// Case analysis producing `f` with `ξ ∈ H′(f)` for a place with
/// `ξ(x) = ξ(y) = 0`. Returns the case number, `f`, and `ξ(f)`.
pub fn three_case_witness(place: &RPlace, x: &str, y: &str) -> Result<(u8, RatFun, PlaceValue)> {
    let k = place.base().clone();
    let vars = place.vars().to_vec();
    let idx = |n: &str| {
        vars.iter()
            .position(|v| v == n)
            .ok_or_else(|| Error::UnknownName(n.to_string()))
    };
    let xv = RatFun::var(&k, &vars, idx(x)?);
    let yv = RatFun::var(&k, &vars, idx(y)?);
    for v in [&xv, &yv] {
        if eval_place(place, v)?.value != PlaceValue::Finite(Quad::zero()) {
            return Err(Error::InvalidPlace(format!("{v} does not vanish at the place")));
        }
    }
    let one = RatFun::constant(&k.one(), &vars);
    let zero = PlaceValue::Finite(Quad::zero());
    let x_over_y = xv.div(&yv)?;
    let y_over_x = yv.div(&xv)?;
    let (case, f) = if eval_place(place, &x_over_y)?.value == zero {
        (1, one.add(&x_over_y)?)
    } else if eval_place(place, &y_over_x)?.value == zero {
        (2, one.add(&y_over_x)?)
    } else {
        (3, yv.pow(2)?.div(&xv.pow(2)?)?)
    };
    let value = eval_place(place, &f)?.value;
    if !value.is_positive() {
        return Err(Error::InvalidPlace(format!(
            "case {case} gave the non-positive value {value}"
        )));
    }
    Ok((case, f, value))
}

/// Restriction to the subfield generated over the base by `keep`.
/// For a single remaining variable the induced cut of the base is returned.
pub fn place_restrict(place: &RPlace, keep: &[String]) -> Result<(RPlace, Option<Cut>)> {
    let Realization::Point { field, values } = &place.realization else {
        if keep == place.vars.as_slice() {
            return Ok((place.clone(), None));
        }
        return Err(Error::Unsupported(
            "only point realizations restrict to fewer variables".into(),
        ));
    };
    let mut sub = Vec::with_capacity(keep.len());
    for v in keep {
        let i = place
            .vars
            .iter()
            .position(|w| w == v)
            .ok_or_else(|| Error::UnknownName(v.clone()))?;
        sub.push(values[i].clone());
    }
    let restricted = RPlace {
        base: place.base.clone(),
        vars: keep.to_vec(),
        realization: Realization::Point {
            field: Arc::clone(field),
            values: sub.clone(),
        },
        provenance: Provenance::Restricted,
    };
    let cut = if sub.len() == 1 {
        Some(crate::cuts::canonical(&Cut::filler(&place.base, &sub[0], Side::Lower)?)?)
    } else {
        None
    };
    Ok((restricted, cut))
}

/// The same place viewed on `R(x⃗)` for a subfield `R` of the base.
pub fn restrict_base(place: &RPlace, r: &Arc<Field>) -> Result<RPlace> {
    if !place.base.contains_field(r) {
        return Err(Error::FieldMismatch(format!("{r} is not inside {}", place.base)));
    }
    let mut out = place.clone();
    out.base = Arc::clone(r);
    out.provenance = Provenance::Restricted;
    if let Realization::Gauss = place.realization {
        // coefficients of R(y) must still be read in the original base
        out.base = place.base.clone();
    }
    Ok(out)
}

/// Search `(y−c)/d` and `d/(y−c)` over anchors of two cuts for a function
/// on which the attached places disagree.
pub fn separating_function(c1: &Cut, c2: &Cut, var: &str) -> Result<Option<RatFun>> {
    let r = c1.field();
    let p1 = place_from_cut(c1, var)?;
    let p2 = place_from_cut(c2, var)?;
    let vars = vec![var.to_string()];
    let mut centers = Vec::new();
    let (lo, hi) = match cut_cmp(c1, c2)? {
        Ordering::Less => (c1, c2),
        Ordering::Greater => (c2, c1),
        Ordering::Equal => return Ok(None),
    };
    centers.push(find_between(lo, hi)?);
    let mut exps = vec![GroupElem::zero(r.rank())];
    for c in [c1, c2] {
        match classify(c)? {
            Classification::Principal { center, .. } => centers.push(center),
            Classification::BallCut { ball, .. } => {
                centers.push(ball.center().clone());
                if let GroupCut::Above(g) | GroupCut::Below(g) = ball.radius() {
                    exps.push(g.clone());
                }
                if let GroupCut::CosetEdge { at, .. } = ball.radius() {
                    exps.push(at.clone());
                }
            }
            Classification::NonBall(cert) => {
                centers.push(cert.r0.clone());
                exps.push(cert.gamma0.clone());
            }
            _ => {}
        }
    }
    for a in centers.clone() {
        for b in centers.clone() {
            if let Some(v) = (&a - &b).valuation() {
                exps.push(v);
            }
        }
    }
    // radii strictly between two anchors
    let half = BigRational::new(1.into(), 2.into());
    let mut uniq: Vec<GroupElem> = Vec::new();
    for e in exps {
        if !uniq.contains(&e) {
            uniq.push(e);
        }
    }
    let mut exps = uniq;
    let n = exps.len();
    for i in 0..n {
        for j in i + 1..n {
            exps.push(exps[i].add(&exps[j]).scale(&half));
        }
    }
    let y = RatFun::var(r, &vars, 0);
    for c in &centers {
        let lin = y.sub(&RatFun::constant(c, &vars))?;
        for e in &exps {
            if !r.value_elem(e) {
                continue;
            }
            let d = RatFun::constant(&r.t(e.clone())?, &vars);
            for f in [lin.div(&d)?, d.div(&lin)?] {
                if eval_place(&p1, &f)?.value != eval_place(&p2, &f)?.value {
                    return Ok(Some(f));
                }
            }
        }
    }
    Ok(None)
}
