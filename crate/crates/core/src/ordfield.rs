//! Ordered fields of fractions of finite Hahn sums.
//!
//! An element is `num/den` where both are finite sums `Σ c·t^γ` with `c` in
//! ℚ or ℚ(√d) and `γ` in a value group. The order is the one making `t`
//! a positive infinitesimal: the sign of a sum is the sign of its
//! coefficient at the smallest exponent.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::quad::Quad;
use crate::valgroup::{GroupCut, GroupElem, Subgroup, ValueGroup};

/// Default bound on term extractions in long division.
pub const DEFAULT_MAX_STEPS: usize = 64;

/// `H(k; Δ)`: coefficients in `k` (ℚ when `coeff` is `None`), exponents in
/// the coordinate subgroup `support` of an ambient ordered group.
#[derive(Clone, Debug)]
pub struct Field {
    coeff: Option<u64>,
    group: Arc<ValueGroup>,
    support: Subgroup,
    parent: Option<Arc<Field>>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.coeff == other.coeff && self.support == other.support && self.group == other.group
    }
}

impl Eq for Field {}

impl Field {
    pub fn hahn(coeff: Option<u64>, group: Arc<ValueGroup>) -> Arc<Field> {
        let support = group.full();
        Arc::new(Field {
            coeff,
            group,
            support,
            parent: None,
        })
    }

    /// The subfield with smaller coefficients and/or exponents in a
    /// coordinate subgroup of the same ambient group.
    pub fn subfield(self: &Arc<Self>, coeff: Option<u64>, support: Subgroup) -> Result<Arc<Field>> {
        if coeff.is_some() && coeff != self.coeff {
            return Err(Error::FieldMismatch(
                "subfield coefficients must lie in the parent's coefficients".into(),
            ));
        }
        if !support.is_subset(&self.support) {
            return Err(Error::FieldMismatch(format!(
                "support {support} is not inside {}",
                self.support
            )));
        }
        Ok(Arc::new(Field {
            coeff,
            group: Arc::clone(&self.group),
            support,
            parent: Some(Arc::clone(self)),
        }))
    }

    /// Same exponents, coefficients enlarged to ℚ(√d).
    pub fn with_coeff(self: &Arc<Self>, d: u64) -> Result<Arc<Field>> {
        if !crate::quad::is_squarefree(d) {
            return Err(Error::Unsupported(format!("sqrt({d}) is not a squarefree radicand")));
        }
        if let Some(e) = self.coeff {
            if e != d {
                return Err(Error::Unsupported(
                    "only one quadratic coefficient extension is supported".into(),
                ));
            }
        }
        Ok(Arc::new(Field {
            coeff: Some(d),
            group: Arc::clone(&self.group),
            support: self.support.clone(),
            parent: Some(Arc::clone(self)),
        }))
    }

    pub fn coeff(&self) -> Option<u64> {
        self.coeff
    }

    pub fn group(&self) -> &Arc<ValueGroup> {
        &self.group
    }

    pub fn support(&self) -> &Subgroup {
        &self.support
    }

    pub fn parent(&self) -> Option<&Arc<Field>> {
        self.parent.as_ref()
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    /// Whether `other` is a subfield of `self` (elements lift by padding).
    pub fn contains_field(&self, other: &Field) -> bool {
        let coeff_ok = match (other.coeff, self.coeff) {
            (None, _) => true,
            (Some(a), Some(b)) => a == b,
            (Some(_), None) => false,
        };
        coeff_ok && self.group.extends(&other.group) && other.support.is_subset(&self.support)
    }

    pub fn coeff_contains(&self, c: &Quad) -> bool {
        match c.radicand() {
            None => true,
            Some(d) => self.coeff == Some(d),
        }
    }

    fn exponent_ok(&self, e: &GroupElem) -> bool {
        e.dim() == self.rank() && self.support.contains(e)
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement {
            field: Arc::clone(self),
            num: HahnSum::zero(),
            den: HahnSum::one(self.rank()),
        }
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.constant(Quad::one())
    }

    pub fn constant(self: &Arc<Self>, c: Quad) -> FieldElement {
        assert!(self.coeff_contains(&c), "coefficient {c} is not in the field");
        FieldElement {
            field: Arc::clone(self),
            num: HahnSum::monomial(GroupElem::zero(self.rank()), c),
            den: HahnSum::one(self.rank()),
        }
    }

    pub fn int(self: &Arc<Self>, n: i64) -> FieldElement {
        self.constant(Quad::from_int(n))
    }

    pub fn monomial(self: &Arc<Self>, c: Quad, e: GroupElem) -> Result<FieldElement> {
        self.group.check_dim(&e)?;
        if !self.exponent_ok(&e) {
            return Err(Error::FieldMismatch(format!(
                "exponent {e} is outside the value group {}",
                self.support
            )));
        }
        if !self.coeff_contains(&c) {
            return Err(Error::FieldMismatch(format!("coefficient {c} is not in the field")));
        }
        Ok(FieldElement {
            field: Arc::clone(self),
            num: HahnSum::monomial(e, c),
            den: HahnSum::one(self.rank()),
        })
    }

    /// `t^e`.
    pub fn t(self: &Arc<Self>, e: GroupElem) -> Result<FieldElement> {
        self.monomial(Quad::one(), e)
    }

    pub fn from_sums(self: &Arc<Self>, num: HahnSum, den: HahnSum) -> Result<FieldElement> {
        for (e, c) in num.terms().iter().chain(den.terms()) {
            if !self.exponent_ok(e) || !self.coeff_contains(c) {
                return Err(Error::FieldMismatch(format!("term {c}*t^{e} is not in the field")));
            }
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElement::make(Arc::clone(self), num, den))
    }

    /// `F⟨ε⟩` where `v(ε)` is a new group coordinate placed exactly at
    /// `at`; returns the extension and `±ε`.
    pub fn adjoin_infinitesimal(
        self: &Arc<Self>,
        at: &GroupCut,
        positive: bool,
    ) -> Result<(Arc<Field>, FieldElement)> {
        let group = self.group.adjoin(at)?;
        let n = group.rank();
        let mut coords = self.support.coords().to_vec();
        coords.push(n - 1);
        let ext = Arc::new(Field {
            coeff: self.coeff,
            group,
            support: Subgroup::new(coords),
            parent: Some(Arc::clone(self)),
        });
        let c = if positive { Quad::one() } else { -Quad::one() };
        let eps = ext.monomial(c, GroupElem::unit(n, n - 1))?;
        Ok((ext, eps))
    }

    /// Elements `±t^γ` for γ in the value group of this field.
    pub fn value_elem(&self, e: &GroupElem) -> bool {
        self.exponent_ok(e)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coeff {
            None => write!(f, "H(Q; {}", self.group)?,
            Some(d) => write!(f, "H(Q(sqrt({d})); {}", self.group)?,
        }
        if self.support != self.group.full() {
            write!(f, " | {}", self.support)?;
        }
        write!(f, ")")
    }
}

/// A finite sum `Σ c·t^γ`, terms sorted by increasing exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HahnSum {
    terms: Vec<(GroupElem, Quad)>,
}

impl HahnSum {
    pub fn zero() -> Self {
        HahnSum { terms: Vec::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(GroupElem::zero(rank), Quad::one())
    }

    pub fn monomial(e: GroupElem, c: Quad) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        HahnSum { terms: vec![(e, c)] }
    }

    pub fn from_terms(mut terms: Vec<(GroupElem, Quad)>, g: &ValueGroup) -> Self {
        terms.sort_by(|a, b| g.cmp_elems(&a.0, &b.0));
        let mut out: Vec<(GroupElem, Quad)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc = &*lc + &c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        HahnSum { terms: out }
    }

    pub fn terms(&self) -> &[(GroupElem, Quad)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Term with the smallest exponent.
    pub fn lead(&self) -> Option<&(GroupElem, Quad)> {
        self.terms.first()
    }

    pub fn last(&self) -> Option<&(GroupElem, Quad)> {
        self.terms.last()
    }

    pub fn add(&self, other: &HahnSum, g: &ValueGroup) -> HahnSum {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.len() && j < other.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match g.cmp_elems(&a.0, &b.0) {
                Ordering::Less => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a.1 + &b.1;
                    if !c.is_zero() {
                        out.push((a.0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        HahnSum { terms: out }
    }

    pub fn neg(&self) -> HahnSum {
        HahnSum {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &HahnSum, g: &ValueGroup) -> HahnSum {
        self.add(&other.neg(), g)
    }

    pub fn mul(&self, other: &HahnSum, g: &ValueGroup) -> HahnSum {
        if self.is_zero() || other.is_zero() {
            return HahnSum::zero();
        }
        if other.len() == 1 {
            let (e, c) = &other.terms[0];
            return self.mul_term(e, c);
        }
        if self.len() == 1 {
            let (e, c) = &self.terms[0];
            return other.mul_term(e, c);
        }
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                terms.push((e1.add(e2), c1 * c2));
            }
        }
        HahnSum::from_terms(terms, g)
    }

    /// Multiply by `c·t^e` (order of terms is preserved).
    pub fn mul_term(&self, e: &GroupElem, c: &Quad) -> HahnSum {
        if c.is_zero() {
            return HahnSum::zero();
        }
        HahnSum {
            terms: self.terms.iter().map(|(x, y)| (x.add(e), y * c)).collect(),
        }
    }

    /// Galois conjugate of every coefficient.
    pub fn conj(&self) -> HahnSum {
        HahnSum {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.conj())).collect(),
        }
    }

    pub fn has_irrational_coeffs(&self) -> bool {
        self.terms.iter().any(|(_, c)| !c.is_rational())
    }

    pub fn pad(&self, n: usize) -> HahnSum {
        HahnSum {
            terms: self.terms.iter().map(|(e, c)| (e.padded(n), c.clone())).collect(),
        }
    }

    /// `self / d` when the quotient is again a finite sum.
    pub fn div_exact(&self, d: &HahnSum, g: &ValueGroup, max_steps: usize) -> Option<HahnSum> {
        let (de, dc) = d.lead()?;
        if self.is_zero() {
            return Some(HahnSum::zero());
        }
        if d.len() == 1 {
            let inv = dc.inv()?;
            return Some(self.mul_term(&de.neg(), &inv));
        }
        // quotient exponents are bounded by max(self) - max(d)
        let bound = self.last()?.0.sub(&d.last()?.0);
        let inv = dc.inv()?;
        let mut r = self.clone();
        let mut q = Vec::new();
        for _ in 0..max_steps {
            let Some((re, rc)) = r.lead().cloned() else {
                return Some(HahnSum { terms: q });
            };
            let e = re.sub(de);
            if g.cmp_elems(&e, &bound) == Ordering::Greater {
                return None;
            }
            let c = &rc * &inv;
            r = r.sub(&d.mul_term(&e, &c), g);
            q.push((e, c));
        }
        if r.is_zero() {
            Some(HahnSum { terms: q })
        } else {
            None
        }
    }
}

fn fmt_exponent(e: &GroupElem) -> String {
    if e.dim() == 1 {
        e.to_string()
    } else {
        format!("({e})")
    }
}

fn fmt_term(e: &GroupElem, c: &Quad) -> String {
    if e.is_zero() {
        return c.to_string();
    }
    let mono = format!("t^{}", fmt_exponent(e));
    if *c == Quad::one() {
        mono
    } else if *c == -Quad::one() {
        format!("-{mono}")
    } else if c.is_rational() || c.rational_part().is_zero() {
        format!("{c}*{mono}")
    } else {
        format!("({c})*{mono}")
    }
}

impl fmt::Display for HahnSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let s = fmt_term(e, c);
            if i > 0 && !s.starts_with('-') {
                write!(f, "+")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Residue {
    Finite(Quad),
    Infinite,
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residue::Finite(q) => write!(f, "{q}"),
            Residue::Infinite => write!(f, "inf"),
        }
    }
}

/// `num/den` with `den` normalized to leading term `1·t^0`.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Arc<Field>,
    num: HahnSum,
    den: HahnSum,
}

impl FieldElement {
    fn make(field: Arc<Field>, num: HahnSum, den: HahnSum) -> FieldElement {
        let n = field.rank();
        if num.is_zero() {
            return FieldElement {
                field,
                num,
                den: HahnSum::one(n),
            };
        }
        let (e0, c0) = den.lead().cloned().expect("zero denominator");
        let inv = c0.inv().expect("nonzero lead");
        let shift = e0.neg();
        let mut num = num.mul_term(&shift, &inv);
        let mut den = den.mul_term(&shift, &inv);
        if den.len() > 1 {
            if let Some(q) = num.div_exact(&den, field.group(), DEFAULT_MAX_STEPS) {
                num = q;
                den = HahnSum::one(n);
            }
        }
        FieldElement { field, num, den }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn num(&self) -> &HahnSum {
        &self.num
    }

    pub fn den(&self) -> &HahnSum {
        &self.den
    }

    pub fn group(&self) -> &ValueGroup {
        self.field.group()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// View this element inside a field containing its own.
    pub fn lift(&self, target: &Arc<Field>) -> Result<FieldElement> {
        if Arc::ptr_eq(&self.field, target) || *self.field == **target {
            return Ok(FieldElement {
                field: Arc::clone(target),
                num: self.num.clone(),
                den: self.den.clone(),
            });
        }
        if self.field.support.coords().is_empty() {
            // constants embed wherever their coefficients do
            if let Some(c) = self.as_constant().filter(|c| target.coeff_contains(c)) {
                return Ok(target.constant(c));
            }
        }
        if !target.contains_field(&self.field) {
            return Err(Error::FieldMismatch(format!(
                "{} does not embed into {}",
                self.field, target
            )));
        }
        let n = target.rank();
        Ok(FieldElement {
            field: Arc::clone(target),
            num: self.num.pad(n),
            den: self.den.pad(n),
        })
    }

    /// Bring two elements into a common field (the larger of the two).
    pub fn unify(a: &FieldElement, b: &FieldElement) -> Result<(FieldElement, FieldElement)> {
        if Arc::ptr_eq(&a.field, &b.field) || *a.field == *b.field {
            return Ok((a.clone(), b.clone()));
        }
        if a.field.contains_field(&b.field) {
            return Ok((a.clone(), b.lift(&a.field)?));
        }
        if b.field.contains_field(&a.field) {
            return Ok((a.lift(&b.field)?, b.clone()));
        }
        Err(Error::FieldMismatch(format!(
            "{} and {} have no common field",
            a.field, b.field
        )))
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement> {
        let (a, b) = Self::unify(self, other)?;
        let g = a.field.group().as_ref();
        if a.den == b.den {
            return Ok(Self::make(a.field.clone(), a.num.add(&b.num, g), a.den.clone()));
        }
        let num = a.num.mul(&b.den, g).add(&b.num.mul(&a.den, g), g);
        let den = a.den.mul(&b.den, g);
        Ok(Self::make(a.field.clone(), num, den))
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        let (a, b) = Self::unify(self, other)?;
        let g = a.field.group().as_ref();
        Ok(Self::make(
            a.field.clone(),
            a.num.mul(&b.num, g),
            a.den.mul(&b.den, g),
        ))
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement> {
        let inv = other.inv()?;
        self.try_mul(&inv)
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::make(self.field.clone(), self.den.clone(), self.num.clone()))
    }

    fn neg_ref(&self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: i32) -> Result<FieldElement> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = self.field.one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn signum(&self) -> Ordering {
        match self.num.lead() {
            None => Ordering::Equal,
            Some((_, c)) => c.signum(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn try_cmp(&self, other: &FieldElement) -> Result<Ordering> {
        Ok(self.try_sub(other)?.signum())
    }

    /// Order comparison; panics for elements of unrelated fields.
    pub fn cmp_field(&self, other: &FieldElement) -> Ordering {
        self.try_cmp(other).expect("comparison across unrelated fields")
    }

    pub fn abs(&self) -> FieldElement {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// `None` stands for `v(0) = ∞`.
    pub fn valuation(&self) -> Option<GroupElem> {
        let (e, _) = self.num.lead()?;
        Some(e.sub(&self.den.lead().expect("nonzero denominator").0))
    }

    pub fn residue(&self) -> Residue {
        let Some(v) = self.valuation() else {
            return Residue::Finite(Quad::zero());
        };
        match self.group().signum(&v) {
            Ordering::Less => Residue::Infinite,
            Ordering::Greater => Residue::Finite(Quad::zero()),
            Ordering::Equal => {
                let c = &self.num.lead().unwrap().1;
                let d = &self.den.lead().unwrap().1;
                Residue::Finite(c.clone() / d.clone())
            }
        }
    }

    /// Terms of the series expansion with exponent at most `cutoff`, and
    /// whether anything remains beyond it.
    pub fn expand(&self, cutoff: &GroupElem, max_steps: usize) -> Result<(HahnSum, bool)> {
        self.group().check_dim(cutoff)?;
        let g = self.group();
        let (de, dc) = self.den.lead().expect("nonzero denominator").clone();
        let inv = dc.inv().expect("nonzero lead");
        let mut r = self.num.clone();
        let mut q = Vec::new();
        let mut steps = 0;
        loop {
            let Some((re, rc)) = r.lead().cloned() else {
                return Ok((HahnSum { terms: q }, false));
            };
            let e = re.sub(&de);
            if g.cmp_elems(&e, cutoff) == Ordering::Greater {
                return Ok((HahnSum { terms: q }, true));
            }
            steps += 1;
            if steps > max_steps {
                return Err(Error::StepLimit { max: max_steps });
            }
            let c = &rc * &inv;
            r = r.sub(&self.den.mul_term(&e, &c), g);
            q.push((e, c));
        }
    }

    /// First `n` terms of the expansion (fewer if it terminates).
    pub fn leading_terms(&self, n: usize) -> Vec<(GroupElem, Quad)> {
        let g = self.group();
        let (de, dc) = self.den.lead().expect("nonzero denominator").clone();
        let inv = dc.inv().expect("nonzero lead");
        let mut r = self.num.clone();
        let mut q = Vec::new();
        while q.len() < n {
            let Some((re, rc)) = r.lead().cloned() else {
                break;
            };
            let e = re.sub(&de);
            let c = &rc * &inv;
            r = r.sub(&self.den.mul_term(&e, &c), g);
            q.push((e, c));
        }
        q
    }

    /// Multiply numerator and denominator by the conjugate denominator so
    /// that the denominator has rational coefficients.
    pub fn rationalized(&self) -> (HahnSum, HahnSum) {
        if !self.den.has_irrational_coeffs() {
            return (self.num.clone(), self.den.clone());
        }
        let g = self.group();
        let c = self.den.conj();
        (self.num.mul(&c, g), self.den.mul(&c, g))
    }

    /// Whether this element lies in the subfield `sub`; `None` when the
    /// representation does not decide it.
    pub fn in_subfield(&self, sub: &Field) -> Option<bool> {
        if !self.field.contains_field(sub) {
            return Some(false);
        }
        let r = sub.rank();
        let term_in = |(e, c): &(GroupElem, Quad)| {
            e.coords()[r..].iter().all(Zero::is_zero)
                && sub.support().contains(&GroupElem::new(e.coords()[..r].to_vec()))
                && sub.coeff_contains(c)
        };
        let (num, den) = if sub.coeff().is_none() {
            self.rationalized()
        } else {
            (self.num.clone(), self.den.clone())
        };
        if den.terms().iter().all(term_in) {
            return Some(num.terms().iter().all(term_in));
        }
        None
    }

    /// The same element, as an element of the subfield `sub`.
    pub fn restrict_to(&self, sub: &Arc<Field>) -> Option<FieldElement> {
        if self.in_subfield(sub) != Some(true) {
            return None;
        }
        let r = sub.rank();
        let (num, den) = if sub.coeff().is_none() {
            self.rationalized()
        } else {
            (self.num.clone(), self.den.clone())
        };
        let cut = |s: &HahnSum| {
            HahnSum::from_terms(
                s.terms()
                    .iter()
                    .map(|(e, c)| (GroupElem::new(e.coords()[..r].to_vec()), c.clone()))
                    .collect(),
                sub.group(),
            )
        };
        Some(Self::make(Arc::clone(sub), cut(&num), cut(&den)))
    }

    /// Exact coefficient of `t^e` if the expansion reaches `e` in bounded
    /// steps.
    pub fn coefficient_at(&self, e: &GroupElem, max_steps: usize) -> Result<Quad> {
        let (sum, _) = self.expand(e, max_steps)?;
        Ok(sum
            .terms()
            .iter()
            .find(|(x, _)| x == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Quad::zero))
    }

    /// Rational number as a field constant, if the element is one.
    pub fn as_constant(&self) -> Option<Quad> {
        if self.is_zero() {
            return Some(Quad::zero());
        }
        if self.den.len() == 1 && self.num.len() == 1 && self.num.terms()[0].0.is_zero() {
            return Some(self.num.terms()[0].1.clone());
        }
        None
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        match Self::unify(self, other) {
            Ok((a, b)) => {
                if a.den == b.den {
                    return a.num == b.num;
                }
                let g = a.field.group().as_ref();
                a.num.mul(&b.den, g) == b.num.mul(&a.den, g)
            }
            Err(_) => false,
        }
    }
}

impl Eq for FieldElement {}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.len() == 1 && self.den.terms()[0].0.is_zero() && self.den.terms()[0].1 == Quad::one() {
            return write!(f, "{}", self.num);
        }
        let n = if self.num.len() > 1 || self.num.to_string().starts_with('-') {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        write!(f, "{n}/({})", self.den)
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.try_add(rhs).expect("field mismatch")
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.try_sub(rhs).expect("field mismatch")
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.try_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

/// `c·t^γ` as a rational-coefficient convenience.
pub fn rat_monomial(field: &Arc<Field>, c: BigRational, e: GroupElem) -> Result<FieldElement> {
    field.monomial(Quad::from_rational(c), e)
}
