//! Sparse polynomials and rational functions in named variables with
//! coefficients in an ordered field, and substitution into extensions.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ordfield::{Field, FieldElement};

#[derive(Clone, Debug)]
pub struct Poly {
    field: Arc<Field>,
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

impl Poly {
    pub fn zero(field: &Arc<Field>, vars: &[String]) -> Poly {
        Poly {
            field: Arc::clone(field),
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: &FieldElement, vars: &[String]) -> Poly {
        let mut p = Poly::zero(c.field(), vars);
        p.add_term(vec![0; vars.len()], c.clone());
        p
    }

    /// The variable `vars[i]`.
    pub fn var(field: &Arc<Field>, vars: &[String], i: usize) -> Poly {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = Poly::zero(field, vars);
        p.add_term(e, field.one());
        p
    }

    pub fn from_terms(field: &Arc<Field>, vars: &[String], terms: Vec<(Vec<u32>, FieldElement)>) -> Result<Poly> {
        let mut p = Poly::zero(field, vars);
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(Error::DimensionMismatch {
                    expected: vars.len(),
                    found: e.len(),
                });
            }
            p.add_term(e, c.lift(field)?);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<u32>, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&e) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(e, sum);
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, FieldElement> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Term with the lexicographically largest exponent tuple.
    pub fn leading(&self) -> Option<(&Vec<u32>, &FieldElement)> {
        self.terms.iter().next_back()
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::FieldMismatch(format!(
                "variables {:?} and {:?}",
                self.vars, other.vars
            )));
        }
        if *self.field != *other.field {
            return Err(Error::FieldMismatch(format!(
                "coefficients in {} and {}",
                self.field, other.field
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        Ok(p)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut p = Poly::zero(&self.field, &self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        Ok(p)
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        let mut p = Poly::zero(&self.field, &self.vars);
        for (e, x) in &self.terms {
            p.add_term(e.clone(), x * c);
        }
        p
    }

    /// Value at a point of some field containing the coefficients.
    pub fn eval(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.vars.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vars.len(),
                found: point.len(),
            });
        }
        let target = match point.first() {
            Some(x) => Arc::clone(x.field()),
            None => Arc::clone(&self.field),
        };
        let point: Vec<FieldElement> = point.iter().map(|x| x.lift(&target)).collect::<Result<_>>()?;
        let mut powers: Vec<Vec<FieldElement>> = vec![vec![target.one()]; point.len()];
        let mut acc = target.zero();
        for (e, c) in &self.terms {
            let mut m = c.lift(&target)?;
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap() * &point[i];
                    powers[i].push(next);
                }
                m = &m * &powers[i][k as usize];
            }
            acc = &acc + &m;
        }
        Ok(acc)
    }

    /// Apply `f` to every coefficient (dropping those sent to zero).
    pub fn map_coeffs(
        &self,
        field: &Arc<Field>,
        mut f: impl FnMut(&FieldElement) -> Result<FieldElement>,
    ) -> Result<Poly> {
        let mut p = Poly::zero(field, &self.vars);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), f(c)?);
        }
        Ok(p)
    }

    pub fn with_vars(&self, vars: &[String]) -> Result<Poly> {
        let mut p = Poly::zero(&self.field, vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; vars.len()];
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let j = vars
                    .iter()
                    .position(|v| *v == self.vars[i])
                    .ok_or_else(|| Error::UnknownName(self.vars[i].clone()))?;
                ne[j] = k;
            }
            p.add_term(ne, c.clone());
        }
        Ok(p)
    }
}

fn needs_parens(s: &str) -> bool {
    s[1..].contains(['+', '-', '/'])
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mut mono = Vec::new();
            for (v, &k) in self.vars.iter().zip(e) {
                match k {
                    0 => {}
                    1 => mono.push(v.clone()),
                    k => mono.push(format!("{v}^{k}")),
                }
            }
            let cs = c.to_string();
            let term = if mono.is_empty() {
                if needs_parens(&cs) {
                    format!("({cs})")
                } else {
                    cs
                }
            } else {
                let m = mono.join("*");
                if cs == "1" {
                    m
                } else if cs == "-1" {
                    format!("-{m}")
                } else if needs_parens(&cs) {
                    format!("({cs})*{m}")
                } else {
                    format!("{cs}*{m}")
                }
            };
            if i > 0 && !term.starts_with('-') {
                write!(f, "+")?;
            }
            write!(f, "{term}")?;
        }
        Ok(())
    }
}

/// Result of substituting a point into a rational function.
#[derive(Clone, Debug)]
pub enum EvalResult {
    Value(FieldElement),
    Pole,
}

#[derive(Clone, Debug)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<RatFun> {
        num.check(&den)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (_, lc) = den.leading().expect("nonzero denominator");
        let inv = lc.inv()?;
        Ok(RatFun {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn from_poly(p: Poly) -> RatFun {
        let den = Poly::constant(&p.field.one(), &p.vars);
        RatFun { num: p, den }
    }

    pub fn constant(c: &FieldElement, vars: &[String]) -> RatFun {
        RatFun::from_poly(Poly::constant(c, vars))
    }

    pub fn var(field: &Arc<Field>, vars: &[String], i: usize) -> RatFun {
        RatFun::from_poly(Poly::var(field, vars, i))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> &Arc<Field> {
        self.num.field()
    }

    pub fn vars(&self) -> &[String] {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RatFun) -> Result<RatFun> {
        if self.den.terms == other.den.terms {
            return RatFun::new(self.num.add(&other.num)?, self.den.clone());
        }
        let num = self.num.mul(&other.den)?.add(&other.num.mul(&self.den)?)?;
        RatFun::new(num, self.den.mul(&other.den)?)
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFun) -> Result<RatFun> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFun) -> Result<RatFun> {
        RatFun::new(self.num.mul(&other.num)?, self.den.mul(&other.den)?)
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFun::new(self.num.mul(&other.den)?, self.den.mul(&other.num)?)
    }

    pub fn pow(&self, k: i32) -> Result<RatFun> {
        let base = if k < 0 {
            RatFun::from_poly(Poly::constant(&self.field().one(), self.vars())).div(self)?
        } else {
            self.clone()
        };
        let mut acc = RatFun::constant(&self.field().one(), self.vars());
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// Equality as elements of the function field (cross-multiplication).
    pub fn same_function(&self, other: &RatFun) -> Result<bool> {
        let a = self.num.mul(&other.den)?;
        let b = other.num.mul(&self.den)?;
        Ok(a.add(&b.neg())?.is_zero())
    }

    pub fn eval_at(&self, point: &[FieldElement]) -> Result<EvalResult> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Ok(EvalResult::Pole);
        }
        let n = self.num.eval(point)?;
        Ok(EvalResult::Value(n.checked_div(&d)?))
    }

    /// Rename/reorder variables to `vars` (must contain all used ones).
    pub fn with_vars(&self, vars: &[String]) -> Result<RatFun> {
        RatFun::new(self.num.with_vars(vars)?, self.den.with_vars(vars)?)
    }

    /// The same function with coefficients viewed in a larger field.
    pub fn lift(&self, field: &Arc<Field>) -> Result<RatFun> {
        RatFun::new(
            self.num.map_coeffs(field, |c| c.lift(field))?,
            self.den.map_coeffs(field, |c| c.lift(field))?,
        )
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den_is_one = self.den.terms.len() == 1
            && self.den.terms.keys().next().unwrap().iter().all(|&k| k == 0)
            && self.den.terms.values().next().unwrap().to_string() == "1";
        let n = self.num.to_string();
        if den_is_one {
            return write!(f, "{n}");
        }
        let n = if needs_parens(&n) || n.contains('*') {
            format!("({n})")
        } else {
            n
        };
        write!(f, "{n}/({})", self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valgroup::{GroupElem, ValueGroup};

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn evaluate_and_poles() {
        let f = Field::hahn(None, ValueGroup::lex(1));
        let vs = vars(&["y"]);
        let y = RatFun::var(&f, &vs, 0);
        let y2 = y.mul(&y).unwrap();
        match y2.eval_at(&[f.int(2)]).unwrap() {
            EvalResult::Value(v) => assert_eq!(v, f.int(4)),
            EvalResult::Pole => panic!("pole"),
        }
        let g = RatFun::constant(&f.one(), &vs)
            .div(&y.sub(&RatFun::constant(&f.int(2), &vs)).unwrap())
            .unwrap();
        assert!(matches!(g.eval_at(&[f.int(2)]).unwrap(), EvalResult::Pole));
    }

    #[test]
    fn noncontinuity_function_substitution() {
        let f = Field::hahn(None, ValueGroup::lex(2));
        let vs = vars(&["x", "y"]);
        let x = RatFun::var(&f, &vs, 0);
        let y = RatFun::var(&f, &vs, 1);
        let h = x.add(&y.pow(2).unwrap()).unwrap().div(&x).unwrap();
        let s = f.t(GroupElem::from_ints(&[1, 0])).unwrap();
        let u = f.t(GroupElem::from_ints(&[0, 1])).unwrap();
        let EvalResult::Value(v) = h.eval_at(&[s.clone(), u.clone()]).unwrap() else {
            panic!("pole");
        };
        let expected = &f.one() + &(&u * &u).checked_div(&s).unwrap();
        assert_eq!(v, expected);
    }

    #[test]
    fn printing() {
        let f = Field::hahn(None, ValueGroup::lex(1));
        let vs = vars(&["x", "y"]);
        let x = RatFun::var(&f, &vs, 0);
        let y = RatFun::var(&f, &vs, 1);
        let t = RatFun::constant(&(&f.one() + &f.t(GroupElem::from_ints(&[1])).unwrap()), &vs);
        let p = t.mul(&y).unwrap().add(&x.pow(2).unwrap()).unwrap();
        assert_eq!(p.to_string(), "x^2+(1+t^(1))*y");
        let q = RatFun::constant(&f.one(), &vs).div(&x).unwrap();
        assert_eq!(q.to_string(), "1/(x)");
    }
}
