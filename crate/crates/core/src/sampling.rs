//! Seeded generators for random exponents, elements, balls, cuts and
//! rational functions. Used by the `probe` experiments and the test suites.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::balls::Ball;
use crate::cuts::Cut;
use crate::error::Result;
use crate::ordfield::{Field, FieldElement, HahnSum};
use crate::quad::Quad;
use crate::ratfun::{Poly, RatFun};
use crate::valgroup::{GroupCut, GroupElem, Side};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    /// `n/m` with `|n/m| ≤ span` and `1 ≤ m ≤ den`.
    pub fn rational(&mut self, span: i64, den: i64) -> BigRational {
        let m = self.rng.gen_range(1..=den);
        let n = self.rng.gen_range(-span * m..=span * m);
        BigRational::new(BigInt::from(n), BigInt::from(m))
    }

    pub fn nonzero_rational(&mut self, span: i64, den: i64) -> BigRational {
        loop {
            let q = self.rational(span, den);
            if q != BigRational::from_integer(0.into()) {
                return q;
            }
        }
    }

    /// Coefficient in the field's coefficient domain.
    pub fn coeff(&mut self, f: &Field, span: i64) -> Quad {
        let a = self.rational(span, 3);
        match f.coeff() {
            Some(d) if self.coin(0.5) => Quad::new(a, self.rational(span, 2), d),
            _ => Quad::from_rational(a),
        }
    }

    pub fn nonzero_coeff(&mut self, f: &Field, span: i64) -> Quad {
        loop {
            let c = self.coeff(f, span);
            if !c.is_zero() {
                return c;
            }
        }
    }

    /// Exponent inside the field's value group, coordinates in `[-span, span]`.
    pub fn exponent(&mut self, f: &Field, span: i64) -> GroupElem {
        let n = f.rank();
        let mut v = vec![BigRational::from_integer(0.into()); n];
        for &i in f.support().coords() {
            v[i] = self.rational(span, 2);
        }
        GroupElem::new(v)
    }

    /// Finite Hahn sum with up to `terms` terms.
    pub fn sum(&mut self, f: &Field, terms: usize, span: i64) -> HahnSum {
        let k = self.rng.gen_range(1..=terms.max(1));
        let ts = (0..k)
            .map(|_| (self.exponent(f, span), self.nonzero_coeff(f, 3)))
            .collect();
        HahnSum::from_terms(ts, f.group())
    }

    pub fn polynomial_element(&mut self, f: &Arc<Field>, terms: usize) -> FieldElement {
        let s = self.sum(f, terms, 2);
        f.from_sums(s, HahnSum::one(f.rank())).expect("unit denominator")
    }

    /// Quotient of two random sums (never zero denominator).
    pub fn element(&mut self, f: &Arc<Field>, terms: usize) -> FieldElement {
        let n = self.polynomial_element(f, terms);
        if self.coin(0.5) {
            return n;
        }
        loop {
            let d = self.polynomial_element(f, 2);
            if let Ok(x) = n.checked_div(&d) {
                return x;
            }
        }
    }

    pub fn nonzero_element(&mut self, f: &Arc<Field>, terms: usize) -> FieldElement {
        loop {
            let x = self.element(f, terms);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// A position in the value group of `f`: mostly `above γ`/`from γ`,
    /// sometimes a coset edge, rarely `±∞`.
    pub fn group_cut(&mut self, f: &Field, span: i64) -> GroupCut {
        let g = f.group();
        let roll = self.rng.gen_range(0..20);
        match roll {
            0 => GroupCut::MinusInf,
            1 => GroupCut::PlusInf,
            2..=5 if g.height() > 1 => GroupCut::CosetEdge {
                at: self.exponent(f, span),
                level: self.rng.gen_range(1..g.height()),
                side: if self.coin(0.5) { Side::Upper } else { Side::Lower },
            },
            r => {
                let e = self.exponent(f, span);
                if r % 2 == 0 {
                    GroupCut::Above(e)
                } else {
                    GroupCut::Below(e)
                }
            }
        }
    }

    /// A ball with nonempty radius segment that is not the whole field.
    pub fn proper_ball(&mut self, f: &Arc<Field>) -> Result<Ball> {
        loop {
            let c = self.polynomial_element(f, 3);
            let r = self.group_cut(f, 3);
            if matches!(r, GroupCut::MinusInf | GroupCut::PlusInf) {
                continue;
            }
            let b = Ball::new(f, &c, &r)?;
            if !b.is_whole() && !b.is_singleton() {
                return Ok(b);
            }
        }
    }

    pub fn ball(&mut self, f: &Arc<Field>) -> Result<Ball> {
        let c = self.polynomial_element(f, 3);
        let r = self.group_cut(f, 3);
        Ball::new(f, &c, &r)
    }

    pub fn side(&mut self) -> Side {
        if self.coin(0.5) {
            Side::Upper
        } else {
            Side::Lower
        }
    }

    /// Ball edges, principal cuts and the two infinite cuts.
    pub fn cut(&mut self, f: &Arc<Field>) -> Result<Cut> {
        Ok(match self.rng.gen_range(0..20) {
            0 => Cut::minus_inf(f),
            1 => Cut::plus_inf(f),
            2..=6 => Cut::principal(&self.polynomial_element(f, 3), self.side()),
            _ => {
                let b = self.proper_ball(f)?;
                Cut::edge(b, self.side())
            }
        })
    }

    /// Polynomial with up to `terms` monomials of total degree `≤ deg`.
    pub fn poly(&mut self, base: &Arc<Field>, vars: &[String], deg: u32, terms: usize) -> Result<Poly> {
        let k = self.rng.gen_range(1..=terms.max(1));
        let mut ts = Vec::with_capacity(k);
        for _ in 0..k {
            let mut mono = vec![0u32; vars.len()];
            let mut budget = self.rng.gen_range(0..=deg);
            for slot in mono.iter_mut() {
                let e = self.rng.gen_range(0..=budget);
                *slot = e;
                budget -= e;
            }
            let c = if self.coin(0.6) {
                base.constant(self.nonzero_coeff(base, 3))
            } else {
                self.polynomial_element(base, 2)
            };
            ts.push((mono, c));
        }
        Poly::from_terms(base, vars, ts)
    }

    pub fn ratfun(&mut self, base: &Arc<Field>, vars: &[String], deg: u32) -> Result<RatFun> {
        let num = self.poly(base, vars, deg, 3)?;
        loop {
            let den = self.poly(base, vars, deg, 3)?;
            if !den.is_zero() {
                return RatFun::new(num, den);
            }
        }
    }
}
