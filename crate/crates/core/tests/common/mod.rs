//! Test-side oracles. They work on raw coordinates and term lists and do not
//! call the library's order, valuation or division code.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Signed;

use rplaces::cli::syntax::{BinOp, Exponent, Expr};
use rplaces::ordfield::FieldElement;
use rplaces::quad::Quad;
use rplaces::valgroup::{GroupCut, GroupElem, Side};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn ge(xs: &[i64]) -> GroupElem {
    GroupElem::from_ints(xs)
}

/// Lexicographic comparison of the first `k` coordinates.
pub fn lex_prefix(a: &[BigRational], b: &[BigRational], k: usize) -> Ordering {
    for (x, y) in a.iter().zip(b).take(k) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

pub fn lex(a: &GroupElem, b: &GroupElem) -> Ordering {
    lex_prefix(a.coords(), b.coords(), usize::MAX)
}

/// `(at, level, side)` reading of a segment boundary in `ℚⁿ` lex.
pub fn edge(c: &GroupCut, n: usize) -> Option<(Vec<BigRational>, usize, Side)> {
    match c {
        GroupCut::MinusInf | GroupCut::PlusInf => None,
        GroupCut::Above(g) => Some((g.coords().to_vec(), n, Side::Upper)),
        GroupCut::Below(g) => Some((g.coords().to_vec(), n, Side::Lower)),
        GroupCut::CosetEdge { at, level, side } => Some((at.coords().to_vec(), *level, *side)),
    }
}

/// Whether `g` lies strictly below the boundary `c` in `ℚⁿ` lex.
pub fn lex_below(c: &GroupCut, g: &GroupElem) -> bool {
    let n = g.dim();
    match c {
        GroupCut::MinusInf => false,
        GroupCut::PlusInf => true,
        _ => {
            let (at, k, side) = edge(c, n).unwrap();
            match lex_prefix(g.coords(), &at, k) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => side == Side::Upper,
            }
        }
    }
}

/// Same boundary as a set of group elements.
pub fn lex_same_cut(a: &GroupCut, b: &GroupCut, n: usize) -> bool {
    match (edge(a, n), edge(b, n)) {
        (None, None) => a == b,
        (Some((x, k, s)), Some((y, l, t))) => {
            k == l && s == t && lex_prefix(&x, &y, k) == Ordering::Equal
        }
        _ => false,
    }
}

pub type Series = BTreeMap<Vec<BigRational>, Quad>;

/// Terms of an element with unit denominator.
pub fn series(x: &FieldElement) -> Series {
    assert!(
        x.den().terms().len() == 1 && x.den().terms()[0].0.is_zero(),
        "expected a polynomial element"
    );
    x.num()
        .terms()
        .iter()
        .map(|(e, c)| (e.coords().to_vec(), c.clone()))
        .collect()
}

pub fn series_sub(a: &Series, b: &Series) -> Series {
    let mut out = a.clone();
    for (e, c) in b {
        let v = out.remove(e).unwrap_or_else(Quad::zero) - c.clone();
        if !v.is_zero() {
            out.insert(e.clone(), v);
        }
    }
    out
}

/// Smallest exponent with a nonzero coefficient (lex order = `Vec` order).
pub fn series_val(s: &Series) -> Option<GroupElem> {
    s.iter()
        .find(|(_, c)| !c.is_zero())
        .map(|(e, _)| GroupElem::new(e.clone()))
}

/// `v(a − b)` for polynomial elements of a lex field.
pub fn val_diff(a: &FieldElement, b: &FieldElement) -> Option<GroupElem> {
    series_val(&series_sub(&series(a), &series(b)))
}

/// Long division `num / den` in a lex Hahn field, keeping quotient terms
/// with exponent `≤ cutoff`. Returns the terms and whether a nonzero
/// remainder is left.
pub fn long_division(num: &Series, den: &Series, cutoff: &[BigRational], max_steps: usize) -> (Series, bool) {
    let (dl, dc) = den.iter().next().map(|(e, c)| (e.clone(), c.clone())).expect("nonzero");
    let inv = Quad::one() / dc;
    let mut rem = num.clone();
    let mut q = Series::new();
    for _ in 0..max_steps {
        let Some((e, c)) = rem.iter().next().map(|(e, c)| (e.clone(), c.clone())) else {
            return (q, false);
        };
        let qe: Vec<BigRational> = e.iter().zip(&dl).map(|(a, b)| a - b).collect();
        if qe.as_slice() > cutoff {
            return (q, true);
        }
        let qc = c * inv.clone();
        for (de, dcoef) in den {
            let pe: Vec<BigRational> = qe.iter().zip(de).map(|(a, b)| a + b).collect();
            let v = rem.remove(&pe).unwrap_or_else(Quad::zero) - qc.clone() * dcoef.clone();
            if !v.is_zero() {
                rem.insert(pe, v);
            }
        }
        q.insert(qe, qc);
    }
    panic!("long division did not reach the cutoff");
}

/// Random expression trees for round-trip checks.
pub fn random_expr(rng: &mut impl rand::Rng, depth: u32) -> Expr {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..5) {
            0 => Expr::Int(rng.gen_range(0..50).into()),
            1 => Expr::Sqrt(*[2u64, 3, 5].get(rng.gen_range(0..3)).unwrap()),
            2 => Expr::Name(["a", "b", "x", "y", "u_1"][rng.gen_range(0..5)].to_string()),
            3 => Expr::Mono(Exponent::Scalar(rat(rng.gen_range(-9..10), rng.gen_range(1..4)))),
            _ => Expr::Mono(Exponent::Tuple(vec![
                rat(rng.gen_range(-5..6), rng.gen_range(1..3)),
                rat(rng.gen_range(-5..6), 1),
            ])),
        };
    }
    match rng.gen_range(0..4) {
        0 => Expr::Neg(Box::new(random_expr(rng, depth - 1))),
        1 => Expr::Pow(Box::new(random_expr(rng, depth - 1)), rng.gen_range(-3..5)),
        _ => {
            let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div][rng.gen_range(0..4)];
            Expr::Bin(
                op,
                Box::new(random_expr(rng, depth - 1)),
                Box::new(random_expr(rng, depth - 1)),
            )
        }
    }
}

pub fn positive(q: &BigRational) -> bool {
    q.is_positive()
}
