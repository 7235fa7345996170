//! The embedding of cut spaces `C(R) → C(F)` for an extension `F ⊇ R`
//! with `vR` convex in `vF`, the induced map on places, and the objects
//! showing that nothing of the kind exists when `vR` is not convex.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::balls::{between_ball, segment_above_in, upward_closure_in, Ball, CutComplementSpec};
use crate::cuts::{classify, cut_cmp, Classification, Cut, CutKind};
use crate::error::{Error, Result};
use crate::ordfield::{Field, FieldElement};
use crate::places::{place_from_cut, Provenance, RPlace};
use crate::valgroup::{GroupCut, GroupElem, Side, Subgroup, ValueGroup};

#[derive(Clone, Debug)]
pub struct EmbeddingContext {
    r: Arc<Field>,
    f: Arc<Field>,
    convex: bool,
}

/// `Δ_R = Δ_F ∩ K_k` for some `k`: the convex subgroups of `Δ_F` are
/// exactly its intersections with the kernels of the leading rows.
fn relatively_convex(g: &ValueGroup, inner: &Subgroup, outer: &Subgroup) -> bool {
    let n = inner.coords().len();
    (0..=g.height()).any(|k| g.sub_kernel_dim(inner, k) == n && g.sub_kernel_dim(outer, k) == n)
}

impl EmbeddingContext {
    pub fn new(r: &Arc<Field>, f: &Arc<Field>) -> Result<EmbeddingContext> {
        if !f.contains_field(r) {
            return Err(Error::FieldMismatch(format!("{r} is not a subfield of {f}")));
        }
        let convex = relatively_convex(f.group(), r.support(), f.support());
        Ok(EmbeddingContext {
            r: Arc::clone(r),
            f: Arc::clone(f),
            convex,
        })
    }

    pub fn r(&self) -> &Arc<Field> {
        &self.r
    }

    pub fn f(&self) -> &Arc<Field> {
        &self.f
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    fn require_convex(&self) -> Result<()> {
        if self.convex {
            Ok(())
        } else {
            Err(Error::NonConvex)
        }
    }
}

pub fn embedding_exists(ctx: &EmbeddingContext) -> bool {
    ctx.convex
}

/// The edge of `B_S(a, F)` (or the principal cut at `a` when `S` is empty).
fn edge_in(f: &Arc<Field>, center: &FieldElement, s: &GroupCut, side: Side) -> Result<Cut> {
    let a = center.lift(f)?;
    if *s == GroupCut::PlusInf {
        return Ok(Cut::principal(&a, side));
    }
    Ok(Cut::edge(Ball::new(f, &a, s)?, side))
}

pub fn iota_tilde(c: &Cut, ctx: &EmbeddingContext) -> Result<Cut> {
    ctx.require_convex()?;
    if **c.field() != *ctx.r {
        return Err(Error::FieldMismatch(format!("{c} is not a cut of {}", ctx.r)));
    }
    let (r, f) = (&ctx.r, &ctx.f);
    match classify(c)? {
        Classification::Infinite(Side::Lower) => Ok(Cut::minus_inf(f)),
        Classification::Infinite(Side::Upper) => Ok(Cut::plus_inf(f)),
        Classification::Principal { center, side } => {
            let s = segment_above_in(f, r, &GroupCut::PlusInf)?;
            edge_in(f, &center, &s, side)
        }
        Classification::BallCut { ball, side } => {
            let s = segment_above_in(f, r, ball.radius())?;
            edge_in(f, ball.center(), &s, side)
        }
        Classification::NonBall(cert) => {
            if f.coeff_contains(&cert.coeff) {
                // filled in F: D⁺ is the lower edge of the between-ball
                let rep = cert.rep.lift(f)?;
                let comp = CutComplementSpec::NonBallWithFiller(c.clone(), rep.clone());
                let b = between_ball(&comp, f, &rep)?;
                Ok(Cut::edge(b, Side::Lower))
            } else {
                let CutKind::Filler { g, .. } = c.kind() else {
                    unreachable!("non-ball cuts are filler cuts");
                };
                if !g.field().contains_field(f) {
                    return Err(Error::FieldMismatch(format!(
                        "the filler {g} does not live over {f}"
                    )));
                }
                Cut::filler(f, g, Side::Lower)
            }
        }
        Classification::Unknown { g, .. } => Err(Error::Incomparable(format!(
            "could not classify the cut of {g}"
        ))),
    }
}

/// `ι(ζ)` for `ζ` the place attached to the cut `c` of `R`.
pub fn iota_place(c: &Cut, ctx: &EmbeddingContext, var: &str) -> Result<RPlace> {
    let image = iota_tilde(c, ctx)?;
    let p = place_from_cut(&image, var)?;
    Ok(p.with_provenance(Provenance::Embedded(c.to_string())))
}

#[derive(Clone, Debug)]
pub struct NonConvexWitness {
    pub alpha: GroupElem,
    pub gamma: GroupElem,
    pub beta: GroupElem,
    /// Boundary of `S₀ = {δ ∈ vR : δ > γ}`.
    pub s0: GroupCut,
    pub b0: Ball,
    /// `segment_above(vR ∖ S₀)` in `vF`.
    pub s: GroupCut,
    /// Upward closure of `S₀` in `vF`; `B₀⁺` read in `F` is the upper edge
    /// of the ball with this radius.
    pub hull: GroupCut,
    pub lower: Cut,
    pub upper: Cut,
    /// `t^γ`, inside `B_S(0,F)` but above every element of `B₀`.
    pub u: FieldElement,
    /// `t^β ∈ B₀`, nonzero.
    pub s_elem: FieldElement,
    /// `t^α ∉ B₀`.
    pub outside: FieldElement,
}

impl NonConvexWitness {
    pub fn verify(&self) -> Result<bool> {
        let g = self.b0.field().group().clone();
        let ordered = g.cmp_elems(&self.alpha, &self.gamma) == Ordering::Less
            && g.cmp_elems(&self.gamma, &self.beta) == Ordering::Less;
        let b0_proper = self.b0.contains(&self.s_elem)? && !self.s_elem.is_zero() && !self.b0.contains(&self.outside)?;
        let f = self.u.field();
        let gamma_in_s = !f.group().is_below(&self.s, &self.gamma);
        let gamma_off_s0 = !self.b0.field().support().contains(&self.gamma);
        let u_between = Ball::new(f, &f.zero(), &self.s)?.contains(&self.u)?
            && !Ball::new(f, &f.zero(), &self.hull)?.contains(&self.u)?;
        let strict = cut_cmp(&self.lower, &self.upper)? == Ordering::Less;
        Ok(ordered && b0_proper && gamma_in_s && gamma_off_s0 && u_between && strict)
    }
}

pub fn nonconvex_witness(ctx: &EmbeddingContext) -> Result<NonConvexWitness> {
    if ctx.convex {
        return Err(Error::Convex);
    }
    let (r, f) = (&ctx.r, &ctx.f);
    if f.support().coords().len() != f.group().rank() {
        return Err(Error::Unsupported(
            "witnesses are built for extensions with full support".into(),
        ));
    }
    let (alpha, gamma, beta) = f
        .group()
        .convexity_witness(r.support())
        .expect("non-convex subgroup has a witness");
    let b0 = Ball::new(r, &r.zero(), &GroupCut::Above(gamma.clone()))?;
    let s0 = b0.radius().clone();
    let s = segment_above_in(f, r, &s0)?;
    let hull = upward_closure_in(f, r, &s0)?;
    let lower = edge_in(f, &f.zero(), &hull, Side::Upper)?;
    let upper = edge_in(f, &f.zero(), &s, Side::Upper)?;
    let w = NonConvexWitness {
        u: f.t(gamma.clone())?,
        s_elem: r.t(beta.clone())?,
        outside: r.t(alpha.clone())?,
        alpha,
        gamma,
        beta,
        s0,
        b0,
        s,
        hull,
        lower,
        upper,
    };
    if !w.verify()? {
        return Err(Error::Unsupported("witness relations failed to verify".into()));
    }
    Ok(w)
}

/// `ι̃` sends principal cuts to principal cuts iff `vR` is cofinal in `vF`;
/// the answer is cross-checked on `ι̃(0⁺)`.
pub fn principal_preservation(ctx: &EmbeddingContext) -> Result<bool> {
    ctx.require_convex()?;
    let g = ctx.f.group();
    let cofinal = if ctx.f.support().coords().len() == g.rank() {
        g.is_cofinal(ctx.r.support())
    } else {
        let levels_r = g.levels(ctx.r.support());
        levels_r.first() == g.levels(ctx.f.support()).first()
    };
    let image = iota_tilde(&Cut::principal(&ctx.r.zero(), Side::Upper), ctx)?;
    let principal = matches!(classify(&image)?, Classification::Principal { .. });
    if principal != cofinal {
        return Err(Error::Unsupported(format!(
            "cofinality ({cofinal}) disagrees with the image of 0+ ({image})"
        )));
    }
    Ok(cofinal)
}
