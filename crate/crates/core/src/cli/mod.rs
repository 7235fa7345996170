//! Command language: a session of named fields, elements, balls, cuts and
//! places, driven one line at a time. Every command produces a text line
//! and a JSON record `{command, inputs, result, certificates?}`; numbers are
//! always exact strings.

pub mod probes;
pub mod syntax;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::balls::{between_ball, Ball, CutComplementSpec};
use crate::cuts::{
    classify_with, cut_cmp, equivalent, find_between, fiber, is_full_ball_interval, restrict,
    Classification, Cut, Position,
};
use crate::embed::{
    embedding_exists, iota_place, iota_tilde, nonconvex_witness, principal_preservation,
    EmbeddingContext,
};
use crate::error::{Error, Result};
use crate::ordfield::{Field, FieldElement, HahnSum, Residue, DEFAULT_MAX_STEPS};
use crate::places::{
    canonical_place, constant_ext_embed, eval_place, gauss_extension, harrison, independent_place,
    place_from_cut, place_restrict, rational_place_compose, realized_place, separating_function,
    stacked_place, three_case_witness, RPlace,
};
use crate::quad::{is_squarefree, Quad};
use crate::ratfun::RatFun;
use crate::sampling::Sampler;
use crate::valgroup::{Subgroup, ValueGroup};

use syntax::{BinOp, Expr, Parser, Tok};

#[derive(Clone, Debug)]
pub struct Options {
    pub json: bool,
    pub seed: u64,
    pub max_steps: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            json: false,
            seed: 0,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

/// One entry of the command table: name, usage, and the library
/// operations the command reaches.
pub struct CommandInfo {
    pub name: &'static str,
    pub usage: &'static str,
    pub ops: &'static [&'static str],
}

pub const COMMANDS: &[CommandInfo] = &[
    CommandInfo {
        name: "def-field",
        usage: "def-field F = hahn(Q; lex(2)) | hahn(Q(sqrt(2)); weighted(1, sqrt(2))) | sub(F; {2}) | coeff(F; 2) | adjoin(F; above (1); eps)",
        ops: &["adjoin_infinitesimal"],
    },
    CommandInfo {
        name: "def-elem",
        usage: "def-elem a = 3*t^(1/2) + u^2 in F",
        ops: &["add", "sub", "mul", "div", "parse", "print"],
    },
    CommandInfo {
        name: "def-ball",
        usage: "def-ball B = ball(0; above (0,2)) in F",
        ops: &[],
    },
    CommandInfo {
        name: "def-cut",
        usage: "def-cut C = +inf | -inf | a+ | a- | edge(ball(0; above (2)), upper) | filler(sqrt(2), lower, over R)  in F",
        ops: &[],
    },
    CommandInfo {
        name: "def-place",
        usage: "def-place P = from-cut C var y | stacked x=0 y=0 order y,x | independent x=0:1 y=0:sqrt(2) | gauss F var y | const-ext P into F | compose x=t over K | realize x=t y=2*t in F over K | embed C from R into F var y | restrict P to x",
        ops: &[
            "place_from_cut",
            "stacked_place",
            "independent_place",
            "gauss_extension",
            "constant_ext_embed",
            "rational_place_compose",
            "iota_place",
        ],
    },
    CommandInfo {
        name: "cmp",
        usage: "cmp a b | cmp C1 C2 | cmp C a | cmp (1,0) (0,1) in F",
        ops: &["cmp_group", "cmp_field", "cut_cmp", "side_of"],
    },
    CommandInfo {
        name: "val",
        usage: "val a",
        ops: &["valuation"],
    },
    CommandInfo {
        name: "residue",
        usage: "residue a",
        ops: &["residue"],
    },
    CommandInfo {
        name: "expand",
        usage: "expand a to (3) | expand a",
        ops: &["expand"],
    },
    CommandInfo {
        name: "classify",
        usage: "classify C",
        ops: &["classify"],
    },
    CommandInfo {
        name: "equiv",
        usage: "equiv C1 C2",
        ops: &["equivalent"],
    },
    CommandInfo {
        name: "restrict",
        usage: "restrict C to R | restrict P to x",
        ops: &["restrict", "place_restrict"],
    },
    CommandInfo {
        name: "fiber",
        usage: "fiber C into F",
        ops: &["fiber"],
    },
    CommandInfo {
        name: "between",
        usage: "between B in F at a | between C in F at a | between C1 C2",
        ops: &["between_ball", "find_between"],
    },
    CommandInfo {
        name: "ball",
        usage: "ball contains B a | ball eq B1 B2 | ball distance B | ball full B",
        ops: &["ball_contains", "ball_eq", "distance_sets", "is_full_ball_interval"],
    },
    CommandInfo {
        name: "group",
        usage: "group convex F {2} | group cofinal F {2} | group segment-above F {2} above (0,1)",
        ops: &["is_convex", "is_cofinal", "segment_above"],
    },
    CommandInfo {
        name: "embed",
        usage: "embed cut C from R into F | embed place C from R into F var y | embed check R F",
        ops: &["embedding_exists", "iota_tilde", "iota_place", "principal_preservation"],
    },
    CommandInfo {
        name: "witness",
        usage: "witness nonconvex R F | witness three-case P x y",
        ops: &["nonconvex_witness", "three_case_witness"],
    },
    CommandInfo {
        name: "eval",
        usage: "eval P y^2",
        ops: &["eval_place", "ratfun_arith", "eval_at"],
    },
    CommandInfo {
        name: "harrison",
        usage: "harrison P y-1",
        ops: &["harrison"],
    },
    CommandInfo {
        name: "probe",
        usage: "probe noncontinuity | circle | three-case | stacked-vs-independent | rational-compose",
        ops: &[],
    },
];

#[derive(Clone, Debug)]
pub enum Object {
    Field(Arc<Field>),
    Elem(FieldElement),
    Ball(Ball),
    Cut(Cut),
    Place(RPlace),
}

impl Object {
    fn kind(&self) -> &'static str {
        match self {
            Object::Field(_) => "field",
            Object::Elem(_) => "element",
            Object::Ball(_) => "ball",
            Object::Cut(_) => "cut",
            Object::Place(_) => "place",
        }
    }
}

/// Outcome of one command.
#[derive(Clone, Debug)]
pub struct Reply {
    pub command: String,
    pub args: String,
    pub outcome: std::result::Result<(Value, Option<Value>), Error>,
    pub text: String,
}

impl Reply {
    pub fn is_ok(&self) -> bool {
        self.outcome.is_ok()
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("inputs".into(), json!({ "args": self.args }));
        match &self.outcome {
            Ok((result, certs)) => {
                m.insert("result".into(), result.clone());
                if let Some(c) = certs {
                    m.insert("certificates".into(), c.clone());
                }
            }
            Err(e) => {
                m.insert(
                    "error".into(),
                    json!({ "code": e.code(), "message": e.to_string() }),
                );
            }
        }
        Value::Object(m)
    }

    pub fn render(&self, json_mode: bool) -> String {
        if json_mode {
            self.to_json().to_string()
        } else {
            match &self.outcome {
                Ok(_) => format!("{}: {}", self.command, self.text),
                Err(e) => format!("{}: error[{}]: {}", self.command, e.code(), e),
            }
        }
    }
}

struct Out {
    result: Value,
    certs: Option<Value>,
    text: String,
}

impl Out {
    fn new(result: Value, text: impl Into<String>) -> Out {
        Out {
            result,
            certs: None,
            text: text.into(),
        }
    }

    fn text(s: impl Into<String>) -> Out {
        let s = s.into();
        Out::new(json!(s), s)
    }

    fn with_certs(mut self, c: Value) -> Out {
        self.certs = Some(c);
        self
    }
}

fn ord_str(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "lt",
        Ordering::Equal => "eq",
        Ordering::Greater => "gt",
    }
}

fn residue_str(r: &Residue) -> String {
    match r {
        Residue::Finite(q) => q.to_string(),
        Residue::Infinite => "inf".into(),
    }
}

pub fn cut_json(c: &Cut) -> Value {
    json!({ "cut": c.to_string(), "field": c.field().to_string() })
}

pub struct Session {
    objects: BTreeMap<String, Object>,
    opts: Options,
    sampler: Sampler,
}

impl Session {
    pub fn new(opts: Options) -> Session {
        Session {
            sampler: Sampler::new(opts.seed),
            objects: BTreeMap::new(),
            opts,
        }
    }

    pub fn options(&self) -> &Options {
        &self.opts
    }

    pub fn get(&self, name: &str) -> Option<&Object> {
        self.objects.get(name)
    }

    /// Runs every non-empty, non-comment line of a script.
    pub fn run_script(&mut self, script: &str) -> Vec<Reply> {
        script
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(|l| self.run_line(l))
            .collect()
    }

    pub fn run_line(&mut self, line: &str) -> Reply {
        let line = line.trim();
        let (command, args) = match line.split_once(char::is_whitespace) {
            Some((c, a)) => (c.to_string(), a.trim().to_string()),
            None => (line.to_string(), String::new()),
        };
        let outcome = self.dispatch(&command, &args);
        let text = match &outcome {
            Ok(o) => o.text.clone(),
            Err(_) => String::new(),
        };
        Reply {
            command,
            args,
            outcome: outcome.map(|o| (o.result, o.certs)),
            text,
        }
    }

    fn dispatch(&mut self, command: &str, args: &str) -> Result<Out> {
        let mut p = Parser::new(args)?;
        let out = match command {
            "def-field" => self.def_field(&mut p)?,
            "def-elem" => self.def_elem(&mut p)?,
            "def-ball" => self.def_ball(&mut p)?,
            "def-cut" => self.def_cut(&mut p)?,
            "def-place" => self.def_place(&mut p)?,
            "cmp" => self.cmp(&mut p)?,
            "val" => self.val(&mut p)?,
            "residue" => self.residue(&mut p)?,
            "expand" => self.expand(&mut p)?,
            "classify" => self.classify(&mut p)?,
            "equiv" => self.equiv(&mut p)?,
            "restrict" => self.restrict(&mut p)?,
            "fiber" => self.fiber(&mut p)?,
            "between" => self.between(&mut p)?,
            "ball" => self.ball(&mut p)?,
            "group" => self.group(&mut p)?,
            "embed" => self.embed(&mut p)?,
            "witness" => self.witness(&mut p)?,
            "eval" => self.eval(&mut p, false)?,
            "harrison" => self.eval(&mut p, true)?,
            "probe" => {
                let name = args.trim();
                let v = probes::run_probe(name, self.opts.seed, self.opts.max_steps)?;
                let text = format!("{name}: {}", v["summary"].as_str().unwrap_or(""));
                return Ok(Out::new(v, text));
            }
            _ => return Err(Error::UnknownName(command.to_string())),
        };
        p.finish()?;
        Ok(out)
    }

    fn define(&mut self, name: &str, obj: Object) -> Result<()> {
        if self.objects.contains_key(name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        self.objects.insert(name.to_string(), obj);
        Ok(())
    }

    fn lookup(&self, name: &str) -> Result<&Object> {
        self.objects
            .get(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    fn field(&self, name: &str) -> Result<Arc<Field>> {
        match self.lookup(name)? {
            Object::Field(f) => Ok(Arc::clone(f)),
            o => Err(Error::FieldMismatch(format!("`{name}` is a {}, not a field", o.kind()))),
        }
    }

    fn elem_named(&self, name: &str) -> Result<FieldElement> {
        match self.lookup(name)? {
            Object::Elem(x) => Ok(x.clone()),
            o => Err(Error::FieldMismatch(format!("`{name}` is a {}, not an element", o.kind()))),
        }
    }

    fn cut(&self, name: &str) -> Result<Cut> {
        match self.lookup(name)? {
            Object::Cut(c) => Ok(c.clone()),
            o => Err(Error::InvalidCut(format!("`{name}` is a {}, not a cut", o.kind()))),
        }
    }

    fn ball_named(&self, name: &str) -> Result<Ball> {
        match self.lookup(name)? {
            Object::Ball(b) => Ok(b.clone()),
            o => Err(Error::InvalidBall(format!("`{name}` is a {}, not a ball", o.kind()))),
        }
    }

    fn place(&self, name: &str) -> Result<RPlace> {
        match self.lookup(name)? {
            Object::Place(p) => Ok(p.clone()),
            o => Err(Error::InvalidPlace(format!("`{name}` is a {}, not a place", o.kind()))),
        }
    }

    fn define_name(&mut self, p: &mut Parser) -> Result<String> {
        let name = p.name()?;
        p.expect(&Tok::Eq)?;
        Ok(name)
    }

    // ---- expression evaluation ----

    pub fn elem(&self, e: &Expr, f: &Arc<Field>) -> Result<FieldElement> {
        Ok(match e {
            Expr::Int(n) => f.constant(Quad::from_rational(n.clone().into())),
            Expr::Sqrt(d) => f_sqrt(f, *d)?,
            Expr::Mono(x) => {
                let g = x.to_group_elem();
                if g.dim() != f.rank() {
                    return Err(Error::DimensionMismatch {
                        expected: f.rank(),
                        found: g.dim(),
                    });
                }
                f.t(g)?
            }
            Expr::Name(n) => self.elem_named(n)?.lift(f)?,
            Expr::Neg(a) => -self.elem(a, f)?,
            Expr::Bin(op, a, b) => {
                let x = self.elem(a, f)?;
                let y = self.elem(b, f)?;
                match op {
                    BinOp::Add => x.try_add(&y)?,
                    BinOp::Sub => x.try_sub(&y)?,
                    BinOp::Mul => x.try_mul(&y)?,
                    BinOp::Div => x.checked_div(&y)?,
                }
            }
            Expr::Pow(a, k) => self.elem(a, f)?.pow(*k)?,
        })
    }

    /// A constant of some `ℚ(√d)`.
    pub fn quad(&self, e: &Expr) -> Result<Quad> {
        let bin = |a: Quad, b: Quad, op: BinOp| -> Result<Quad> {
            if let (Some(x), Some(y)) = (a.radicand(), b.radicand()) {
                if x != y {
                    return Err(Error::Unsupported(
                        "constants from different quadratic fields".into(),
                    ));
                }
            }
            Ok(match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    a / b
                }
            })
        };
        Ok(match e {
            Expr::Int(n) => Quad::from_rational(n.clone().into()),
            Expr::Sqrt(d) => sqrt_quad(*d)?,
            Expr::Name(n) => self
                .elem_named(n)?
                .as_constant()
                .ok_or_else(|| Error::Unsupported(format!("`{n}` is not a constant")))?,
            Expr::Mono(_) => return Err(Error::Unsupported("expected a constant".into())),
            Expr::Neg(a) => -self.quad(a)?,
            Expr::Bin(op, a, b) => bin(self.quad(a)?, self.quad(b)?, *op)?,
            Expr::Pow(a, k) => {
                let q = self.quad(a)?;
                if *k >= 0 {
                    q.pow(*k as u32)
                } else {
                    q.inv().ok_or(Error::DivisionByZero)?.pow(k.unsigned_abs())
                }
            }
        })
    }

    pub fn ratfun(&self, e: &Expr, base: &Arc<Field>, vars: &[String]) -> Result<RatFun> {
        Ok(match e {
            Expr::Name(n) if vars.contains(n) => {
                let i = vars.iter().position(|v| v == n).expect("checked");
                RatFun::var(base, vars, i)
            }
            Expr::Neg(a) => self.ratfun(a, base, vars)?.neg(),
            Expr::Bin(op, a, b) => {
                let x = self.ratfun(a, base, vars)?;
                let y = self.ratfun(b, base, vars)?;
                match op {
                    BinOp::Add => x.add(&y)?,
                    BinOp::Sub => x.sub(&y)?,
                    BinOp::Mul => x.mul(&y)?,
                    BinOp::Div => x.div(&y)?,
                }
            }
            Expr::Pow(a, k) => self.ratfun(a, base, vars)?.pow(*k)?,
            leaf => RatFun::constant(&self.elem(leaf, base)?, vars),
        })
    }

    // ---- definitions ----

    fn coeff_spec(p: &mut Parser) -> Result<Option<u64>> {
        p.expect_word("Q")?;
        if p.eat(&Tok::LParen) {
            p.expect_word("sqrt")?;
            p.expect(&Tok::LParen)?;
            let d = radicand(p)?;
            p.expect(&Tok::RParen)?;
            p.expect(&Tok::RParen)?;
            Ok(Some(d))
        } else {
            Ok(None)
        }
    }

    fn def_field(&mut self, p: &mut Parser) -> Result<Out> {
        let name = self.define_name(p)?;
        let (field, extra) = match p.next() {
            Tok::Ident(k) if k == "hahn" => {
                p.expect(&Tok::LParen)?;
                let coeff = Self::coeff_spec(p)?;
                p.expect(&Tok::Semi)?;
                let group = if p.eat_word("lex") {
                    p.expect(&Tok::LParen)?;
                    let n = p.small_int()?;
                    p.expect(&Tok::RParen)?;
                    if !(1..=16).contains(&n) {
                        return Err(Error::Unsupported(format!("rank {n}")));
                    }
                    ValueGroup::lex(n as usize)
                } else if p.eat_word("weighted") {
                    p.expect(&Tok::LParen)?;
                    let mut ws = vec![self.quad(&p.expr()?)?];
                    while p.eat(&Tok::Comma) {
                        ws.push(self.quad(&p.expr()?)?);
                    }
                    p.expect(&Tok::RParen)?;
                    ValueGroup::weighted(ws)?
                } else {
                    return p.error("expected `lex(n)` or `weighted(...)`");
                };
                p.expect(&Tok::RParen)?;
                (Field::hahn(coeff, group), None)
            }
            Tok::Ident(k) if k == "sub" => {
                p.expect(&Tok::LParen)?;
                let parent = self.field(&p.name()?)?;
                p.expect(&Tok::Semi)?;
                let support = subgroup(p, parent.rank())?;
                let coeff = if p.eat(&Tok::Semi) {
                    Self::coeff_spec(p)?
                } else {
                    parent.coeff()
                };
                p.expect(&Tok::RParen)?;
                (parent.subfield(coeff, support)?, None)
            }
            Tok::Ident(k) if k == "coeff" => {
                p.expect(&Tok::LParen)?;
                let parent = self.field(&p.name()?)?;
                p.expect(&Tok::Semi)?;
                let d = radicand(p)?;
                p.expect(&Tok::RParen)?;
                (parent.with_coeff(d)?, None)
            }
            Tok::Ident(k) if k == "adjoin" => {
                p.expect(&Tok::LParen)?;
                let parent = self.field(&p.name()?)?;
                p.expect(&Tok::Semi)?;
                let at = p.group_cut()?;
                p.expect(&Tok::Semi)?;
                let eps = p.name()?;
                let positive = if p.eat(&Tok::Semi) {
                    if p.eat_word("negative") {
                        false
                    } else {
                        p.expect_word("positive")?;
                        true
                    }
                } else {
                    true
                };
                p.expect(&Tok::RParen)?;
                let (f, e) = parent.adjoin_infinitesimal(&at, positive)?;
                (f, Some((eps, e)))
            }
            t => return p.error(format!("expected a field constructor, found `{t}`")),
        };
        p.finish()?;
        if let Some((eps, _)) = &extra {
            if self.objects.contains_key(eps) || *eps == name {
                return Err(Error::DuplicateName(eps.clone()));
            }
        }
        self.define(&name, Object::Field(Arc::clone(&field)))?;
        let mut result = json!({ "name": name, "field": field.to_string() });
        let mut text = format!("{name} = {field}");
        if let Some((eps, e)) = extra {
            result["generator"] = json!({ "name": eps, "value": e.to_string() });
            text.push_str(&format!(", {eps} = {e}"));
            self.define(&eps, Object::Elem(e))?;
        }
        Ok(Out::new(result, text))
    }

    fn def_elem(&mut self, p: &mut Parser) -> Result<Out> {
        let name = self.define_name(p)?;
        let e = p.expr()?;
        p.expect_word("in")?;
        let f = self.field(&p.name()?)?;
        p.finish()?;
        let x = self.elem(&e, &f)?;
        let s = x.to_string();
        self.define(&name, Object::Elem(x))?;
        Ok(Out::new(json!({ "name": name, "value": s }), format!("{name} = {s}")))
    }

    fn ball_expr(&self, p: &mut Parser) -> Result<BallSyntax> {
        if p.eat_word("ball") {
            p.expect(&Tok::LParen)?;
            let c = p.expr()?;
            p.expect(&Tok::Semi)?;
            let r = p.group_cut()?;
            p.expect(&Tok::RParen)?;
            Ok(BallSyntax::Literal(c, r))
        } else {
            Ok(BallSyntax::Named(p.name()?))
        }
    }

    fn build_ball(&self, b: BallSyntax, f: Option<&Arc<Field>>) -> Result<Ball> {
        match b {
            BallSyntax::Named(n) => self.ball_named(&n),
            BallSyntax::Literal(c, r) => {
                let f = f.ok_or_else(|| Error::InvalidBall("a literal ball needs `in F`".into()))?;
                Ball::new(f, &self.elem(&c, f)?, &r)
            }
        }
    }

    fn def_ball(&mut self, p: &mut Parser) -> Result<Out> {
        let name = self.define_name(p)?;
        let b = self.ball_expr(p)?;
        let f = if p.eat_word("in") {
            Some(self.field(&p.name()?)?)
        } else {
            None
        };
        p.finish()?;
        let ball = self.build_ball(b, f.as_ref())?;
        let s = ball.to_string();
        self.define(&name, Object::Ball(ball))?;
        Ok(Out::new(json!({ "name": name, "ball": s }), format!("{name} = {s}")))
    }

    fn def_cut(&mut self, p: &mut Parser) -> Result<Out> {
        let name = self.define_name(p)?;
        p.eat_word("cut");
        let syntax = if *p.peek() == Tok::Plus && matches!(p.peek_at(1), Tok::Ident(s) if s == "inf") {
            p.next();
            p.next();
            CutSyntax::PlusInf
        } else if *p.peek() == Tok::Minus && matches!(p.peek_at(1), Tok::Ident(s) if s == "inf") {
            p.next();
            p.next();
            CutSyntax::MinusInf
        } else if p.eat_word("edge") {
            p.expect(&Tok::LParen)?;
            let b = self.ball_expr(p)?;
            p.expect(&Tok::Comma)?;
            let side = p.side()?;
            p.expect(&Tok::RParen)?;
            CutSyntax::Edge(b, side)
        } else if p.eat_word("filler") {
            p.expect(&Tok::LParen)?;
            let g = p.expr()?;
            p.expect(&Tok::Comma)?;
            let side = p.side()?;
            p.expect(&Tok::Comma)?;
            p.expect_word("over")?;
            let r = self.field(&p.name()?)?;
            p.expect(&Tok::RParen)?;
            CutSyntax::Filler(g, side, r)
        } else {
            let a = p.expr()?;
            let side = match p.next() {
                Tok::Plus => crate::valgroup::Side::Upper,
                Tok::Minus => crate::valgroup::Side::Lower,
                t => return p.error(format!("expected `+` or `-` after the element, found `{t}`")),
            };
            CutSyntax::Principal(a, side)
        };
        let f = if p.eat_word("in") {
            Some(self.field(&p.name()?)?)
        } else {
            None
        };
        p.finish()?;
        let need = |f: &Option<Arc<Field>>| -> Result<Arc<Field>> {
            f.clone()
                .ok_or_else(|| Error::InvalidCut("this cut needs `in F`".into()))
        };
        let cut = match syntax {
            CutSyntax::PlusInf => Cut::plus_inf(&need(&f)?),
            CutSyntax::MinusInf => Cut::minus_inf(&need(&f)?),
            CutSyntax::Principal(a, side) => Cut::principal(&self.elem(&a, &need(&f)?)?, side),
            CutSyntax::Edge(b, side) => Cut::edge(self.build_ball(b, f.as_ref())?, side),
            CutSyntax::Filler(g, side, r) => {
                let gf = need(&f)?;
                Cut::filler(&r, &self.elem(&g, &gf)?, side)?
            }
        };
        let s = cut.to_string();
        let fs = cut.field().to_string();
        self.define(&name, Object::Cut(cut))?;
        Ok(Out::new(
            json!({ "name": name, "cut": s, "field": fs }),
            format!("{name} = {s} over {fs}"),
        ))
    }

    fn assignments(&self, p: &mut Parser, weighted: bool) -> Result<Vec<(String, Expr, Option<Expr>)>> {
        let mut out = Vec::new();
        while matches!(p.peek(), Tok::Ident(s) if !syntax::is_keyword(s)) && *p.peek_at(1) == Tok::Eq {
            let v = p.name()?;
            p.expect(&Tok::Eq)?;
            let a = p.expr()?;
            let w = if weighted {
                p.expect(&Tok::Colon)?;
                Some(p.expr()?)
            } else {
                None
            };
            out.push((v, a, w));
        }
        if out.is_empty() {
            return p.error("expected assignments `x=...`");
        }
        Ok(out)
    }

    fn def_place(&mut self, p: &mut Parser) -> Result<Out> {
        let name = self.define_name(p)?;
        let place = if p.eat_compound("from-cut") {
            let c = self.cut(&p.name()?)?;
            p.expect_word("var")?;
            let v = p.name()?;
            place_from_cut(&c, &v)?
        } else if p.eat_word("stacked") {
            let asg = self.assignments(p, false)?;
            let vars: Vec<String> = asg.iter().map(|a| a.0.clone()).collect();
            let vals = asg.iter().map(|a| self.quad(&a.1)).collect::<Result<Vec<_>>>()?;
            let order = if p.eat_word("order") { p.name_list()? } else { vars.clone() };
            stacked_place(&vars, &vals, &order)?
        } else if p.eat_word("independent") {
            let asg = self.assignments(p, true)?;
            let vars: Vec<String> = asg.iter().map(|a| a.0.clone()).collect();
            let vals = asg.iter().map(|a| self.quad(&a.1)).collect::<Result<Vec<_>>>()?;
            let ws = asg
                .iter()
                .map(|a| self.quad(a.2.as_ref().expect("weighted")))
                .collect::<Result<Vec<_>>>()?;
            independent_place(&vars, &vals, &ws)?
        } else if p.eat_word("gauss") {
            let f = self.field(&p.name()?)?;
            p.expect_word("var")?;
            gauss_extension(&f, &p.name()?)
        } else if p.eat_compound("const-ext") {
            let z = self.place(&p.name()?)?;
            p.expect_word("into")?;
            let f = self.field(&p.name()?)?;
            constant_ext_embed(&z, &f)?
        } else if p.eat_word("compose") {
            let asg = self.assignments(p, false)?;
            p.expect_word("over")?;
            let k = self.field(&p.name()?)?;
            let vars: Vec<String> = asg.iter().map(|a| a.0.clone()).collect();
            let vals = asg.iter().map(|a| self.elem(&a.1, &k)).collect::<Result<Vec<_>>>()?;
            rational_place_compose(&vars, &vals, &canonical_place(&k))?
        } else if p.eat_word("realize") {
            let asg = self.assignments(p, false)?;
            p.expect_word("in")?;
            let f = self.field(&p.name()?)?;
            p.expect_word("over")?;
            let k = self.field(&p.name()?)?;
            let vars: Vec<String> = asg.iter().map(|a| a.0.clone()).collect();
            let vals = asg.iter().map(|a| self.elem(&a.1, &f)).collect::<Result<Vec<_>>>()?;
            realized_place(&k, &vars, &vals)?
        } else if p.eat_word("embed") {
            let c = self.cut(&p.name()?)?;
            let (ctx, v) = self.embed_tail(p, true)?;
            iota_place(&c, &ctx, &v.expect("var"))?
        } else if p.eat_word("restrict") {
            let z = self.place(&p.name()?)?;
            p.expect_word("to")?;
            place_restrict(&z, &p.name_list()?)?.0
        } else {
            return p.error(format!("expected a place constructor, found `{}`", p.peek()));
        };
        p.finish()?;
        let d = place.describe();
        let prov = place.provenance().to_string();
        self.define(&name, Object::Place(place))?;
        Ok(Out::new(
            json!({ "name": name, "realization": d, "provenance": prov }),
            format!("{name}: {d}"),
        ))
    }

    /// `from R into F [var y]`
    fn embed_tail(&self, p: &mut Parser, with_var: bool) -> Result<(EmbeddingContext, Option<String>)> {
        p.expect_word("from")?;
        let r = self.field(&p.name()?)?;
        p.expect_word("into")?;
        let f = self.field(&p.name()?)?;
        let v = if with_var {
            p.expect_word("var")?;
            Some(p.name()?)
        } else {
            None
        };
        Ok((EmbeddingContext::new(&r, &f)?, v))
    }

    // ---- queries ----

    fn cmp(&mut self, p: &mut Parser) -> Result<Out> {
        if *p.peek() == Tok::LParen {
            let a = p.group_elem()?;
            let b = p.group_elem()?;
            p.expect_word("in")?;
            let f = self.field(&p.name()?)?;
            let o = f.group().compare(&a, &b)?;
            return Ok(Out::text(ord_str(o)));
        }
        let a = p.name()?;
        let b = p.name()?;
        match (self.lookup(&a)?.clone(), self.lookup(&b)?.clone()) {
            (Object::Elem(x), Object::Elem(y)) => Ok(Out::text(ord_str(x.try_cmp(&y)?))),
            (Object::Cut(c1), Object::Cut(c2)) => Ok(Out::text(ord_str(cut_cmp(&c1, &c2)?))),
            (Object::Cut(c), Object::Elem(x)) => {
                let s = match c.side_of(&x)? {
                    Position::Below => "below",
                    Position::Above => "above",
                };
                Ok(Out::text(s))
            }
            (x, y) => Err(Error::Unsupported(format!(
                "cannot compare a {} with a {}",
                x.kind(),
                y.kind()
            ))),
        }
    }

    fn val(&mut self, p: &mut Parser) -> Result<Out> {
        let x = self.elem_named(&p.name()?)?;
        Ok(Out::text(match x.valuation() {
            Some(v) => v.to_string(),
            None => "inf".into(),
        }))
    }

    fn residue(&mut self, p: &mut Parser) -> Result<Out> {
        let x = self.elem_named(&p.name()?)?;
        Ok(Out::text(residue_str(&x.residue())))
    }

    fn expand(&mut self, p: &mut Parser) -> Result<Out> {
        let x = self.elem_named(&p.name()?)?;
        if p.eat_word("to") {
            let cutoff = p.group_elem()?;
            x.group().check_dim(&cutoff)?;
            let (s, rest) = x.expand(&cutoff, self.opts.max_steps)?;
            let text = format!("{s} (remainder {})", if rest { "nonzero" } else { "zero" });
            return Ok(Out::new(
                json!({ "series": s.to_string(), "remainder_nonzero": rest }),
                text,
            ));
        }
        let n = if matches!(p.peek(), Tok::Int(_)) { p.small_int()? as usize } else { 6 };
        let terms = x.leading_terms(n);
        let s = HahnSum::from_terms(terms, x.group());
        Ok(Out::new(json!({ "series": s.to_string() }), s.to_string()))
    }

    fn classify(&mut self, p: &mut Parser) -> Result<Out> {
        let c = self.cut(&p.name()?)?;
        let k = classify_with(&c, None, self.opts.max_steps)?;
        let out = Out::new(
            json!({ "kind": k.kind_name(), "description": k.describe() }),
            k.describe(),
        );
        Ok(match &k {
            Classification::NonBall(cert) => out.with_certs(json!({
                "filler": cert.g.to_string(),
                "gamma0": cert.gamma0.to_string(),
                "coefficient": cert.coeff.to_string(),
                "r0": cert.r0.to_string(),
                "representative": cert.rep.to_string(),
                "below": cert.r_below.to_string(),
                "above": cert.r_above.to_string(),
                "verified": cert.verify(),
            })),
            _ => out,
        })
    }

    fn equiv(&mut self, p: &mut Parser) -> Result<Out> {
        let c1 = self.cut(&p.name()?)?;
        let c2 = self.cut(&p.name()?)?;
        let eq = equivalent(&c1, &c2)?;
        let out = Out::new(json!(eq), eq.to_string());
        if eq {
            return Ok(out);
        }
        match separating_function(&c1, &c2, "y") {
            Ok(Some(f)) => {
                let v1 = eval_place(&place_from_cut(&c1, "y")?, &f)?.value;
                let v2 = eval_place(&place_from_cut(&c2, "y")?, &f)?.value;
                Ok(out.with_certs(json!({
                    "separating": f.to_string(),
                    "values": [v1.to_string(), v2.to_string()],
                })))
            }
            _ => Ok(out),
        }
    }

    fn restrict(&mut self, p: &mut Parser) -> Result<Out> {
        let name = p.name()?;
        p.expect_word("to")?;
        match self.lookup(&name)?.clone() {
            Object::Cut(c) => {
                let r = self.field(&p.name()?)?;
                let out = restrict(&c, &r)?;
                Ok(Out::new(cut_json(&out), out.to_string()))
            }
            Object::Place(z) => {
                let vars = p.name_list()?;
                let (q, cut) = place_restrict(&z, &vars)?;
                let mut v = json!({ "realization": q.describe() });
                let mut text = q.describe();
                if let Some(c) = cut {
                    v["cut"] = cut_json(&c);
                    text.push_str(&format!("; cut {c}"));
                }
                Ok(Out::new(v, text))
            }
            o => Err(Error::Unsupported(format!("cannot restrict a {}", o.kind()))),
        }
    }

    fn fiber(&mut self, p: &mut Parser) -> Result<Out> {
        let c = self.cut(&p.name()?)?;
        p.expect_word("into")?;
        let f = self.field(&p.name()?)?;
        let fb = fiber(&c, &f)?;
        let text = format!(
            "[{}, {}]{}",
            fb.lower,
            fb.upper,
            if fb.singleton { " (singleton)" } else { "" }
        );
        Ok(Out::new(
            json!({
                "lower": fb.lower.to_string(),
                "upper": fb.upper.to_string(),
                "singleton": fb.singleton,
            }),
            text,
        ))
    }

    fn between(&mut self, p: &mut Parser) -> Result<Out> {
        let first = p.name()?;
        if !p.is_word("in") {
            let c1 = self.cut(&first)?;
            let c2 = self.cut(&p.name()?)?;
            let a = find_between(&c1, &c2)?;
            return Ok(Out::text(a.to_string()));
        }
        p.expect_word("in")?;
        let f = self.field(&p.name()?)?;
        p.expect_word("at")?;
        let a = self.elem(&p.expr()?, &f)?;
        let comp = match self.lookup(&first)?.clone() {
            Object::Ball(b) => CutComplementSpec::BallComplement(b),
            Object::Cut(c) => CutComplementSpec::NonBallWithFiller(c, a.clone()),
            o => return Err(Error::Unsupported(format!("`between` needs a ball or a cut, not a {}", o.kind()))),
        };
        let b = between_ball(&comp, &f, &a)?;
        Ok(Out::new(json!({ "ball": b.to_string(), "radius": b.radius().to_string() }), b.to_string()))
    }

    fn ball(&mut self, p: &mut Parser) -> Result<Out> {
        let sub = p.name()?;
        match sub.as_str() {
            "contains" => {
                let b = self.ball_named(&p.name()?)?;
                let x = self.elem(&p.expr()?, b.field())?;
                let r = b.contains(&x)?;
                Ok(Out::new(json!(r), r.to_string()))
            }
            "eq" => {
                let b1 = self.ball_named(&p.name()?)?;
                let b2 = self.ball_named(&p.name()?)?;
                let r = b1.ball_eq(&b2);
                Ok(Out::new(json!(r), r.to_string()))
            }
            "distance" => {
                let b = self.ball_named(&p.name()?)?;
                let s = b.distance_sets()?;
                Ok(Out::text(format!("below {}", s.boundary)))
            }
            "full" => {
                let b = self.ball_named(&p.name()?)?;
                let f = Arc::clone(b.field());
                let mut samples = vec![b.clone()];
                for _ in 0..24 {
                    samples.push(self.sampler.ball(&f)?);
                }
                let rows = is_full_ball_interval(&b, &samples)?;
                let holds = rows.iter().all(|r| r.holds);
                let detail: Vec<Value> = rows
                    .iter()
                    .map(|r| json!({ "ball": r.other.to_string(), "relation": r.relation.to_string(), "holds": r.holds }))
                    .collect();
                Ok(Out::new(json!(holds), format!("{holds} ({} cases)", rows.len()))
                    .with_certs(json!({ "cases": detail })))
            }
            _ => p.error(format!("unknown ball query `{sub}`")),
        }
    }

    fn group(&mut self, p: &mut Parser) -> Result<Out> {
        let sub = if p.eat_compound("segment-above") {
            "segment-above".to_string()
        } else {
            p.name()?
        };
        let f = self.field(&p.name()?)?;
        let delta = subgroup(p, f.rank())?;
        let g = f.group();
        match sub.as_str() {
            "convex" => {
                let r = g.is_convex(&delta);
                let out = Out::new(json!(r), r.to_string());
                Ok(match g.convexity_witness(&delta) {
                    Some((a, c, b)) => out.with_certs(json!({
                        "alpha": a.to_string(), "gamma": c.to_string(), "beta": b.to_string()
                    })),
                    None => out,
                })
            }
            "cofinal" => {
                let r = g.is_cofinal(&delta);
                Ok(Out::new(json!(r), r.to_string()))
            }
            "segment-above" => {
                let c = p.group_cut()?;
                Ok(Out::text(g.segment_above(&delta, &c)?.to_string()))
            }
            _ => p.error(format!("unknown group query `{sub}`")),
        }
    }

    fn embed(&mut self, p: &mut Parser) -> Result<Out> {
        let sub = p.name()?;
        match sub.as_str() {
            "cut" => {
                let c = self.cut(&p.name()?)?;
                let (ctx, _) = self.embed_tail(p, false)?;
                let img = iota_tilde(&c, &ctx)?;
                let back = restrict(&img, ctx.r())?;
                let section = cut_cmp(&back, &c)? == Ordering::Equal;
                Ok(Out::new(cut_json(&img), img.to_string())
                    .with_certs(json!({ "restriction": back.to_string(), "section": section })))
            }
            "place" => {
                let c = self.cut(&p.name()?)?;
                let (ctx, v) = self.embed_tail(p, true)?;
                let z = iota_place(&c, &ctx, &v.expect("var"))?;
                Ok(Out::text(z.describe()))
            }
            "check" => {
                let r = self.field(&p.name()?)?;
                let f = self.field(&p.name()?)?;
                let ctx = EmbeddingContext::new(&r, &f)?;
                let exists = embedding_exists(&ctx);
                let principal = if exists { Some(principal_preservation(&ctx)?) } else { None };
                Ok(Out::new(
                    json!({ "exists": exists, "principal_preserved": principal }),
                    format!(
                        "exists {exists}{}",
                        principal.map(|b| format!(", principal cuts preserved {b}")).unwrap_or_default()
                    ),
                ))
            }
            _ => p.error(format!("unknown embed form `{sub}`")),
        }
    }

    fn witness(&mut self, p: &mut Parser) -> Result<Out> {
        if p.eat_word("nonconvex") {
            let r = self.field(&p.name()?)?;
            let f = self.field(&p.name()?)?;
            let w = nonconvex_witness(&EmbeddingContext::new(&r, &f)?)?;
            let verified = w.verify()?;
            let v = json!({
                "alpha": w.alpha.to_string(),
                "gamma": w.gamma.to_string(),
                "beta": w.beta.to_string(),
                "S0": w.s0.to_string(),
                "B0": w.b0.to_string(),
                "S": w.s.to_string(),
                "hull": w.hull.to_string(),
                "B0_plus_in_F": w.lower.to_string(),
                "BS_plus": w.upper.to_string(),
                "comparison": ord_str(cut_cmp(&w.lower, &w.upper)?),
                "u": w.u.to_string(),
                "s": w.s_elem.to_string(),
                "outside": w.outside.to_string(),
                "verified": verified,
            });
            let text = format!(
                "alpha {} < gamma {} < beta {}; {} < {}",
                w.alpha, w.gamma, w.beta, w.lower, w.upper
            );
            return Ok(Out::new(v, text));
        }
        if p.eat_compound("three-case") {
            let z = self.place(&p.name()?)?;
            let x = p.name()?;
            let y = p.name()?;
            let (case, f, value) = three_case_witness(&z, &x, &y)?;
            return Ok(Out::new(
                json!({ "case": case, "f": f.to_string(), "value": value.to_string() }),
                format!("case {case}: {f} -> {value}"),
            ));
        }
        p.error(format!("unknown witness `{}`", p.peek()))
    }

    fn eval(&mut self, p: &mut Parser, membership: bool) -> Result<Out> {
        let z = self.place(&p.name()?)?;
        let e = p.expr()?;
        let f = self.ratfun(&e, z.base(), z.vars())?;
        if membership {
            let h = harrison(&z, &f)?;
            return Ok(Out::new(json!(h), h.to_string()));
        }
        let ev = eval_place(&z, &f)?;
        let v = ev.value.to_string();
        Ok(Out::new(json!(v), v.clone()).with_certs(json!({
            "valuation": ev.valuation.map(|g| g.to_string()),
            "realization": z.describe(),
        })))
    }
}

enum BallSyntax {
    Named(String),
    Literal(Expr, crate::valgroup::GroupCut),
}

enum CutSyntax {
    PlusInf,
    MinusInf,
    Principal(Expr, crate::valgroup::Side),
    Edge(BallSyntax, crate::valgroup::Side),
    Filler(Expr, crate::valgroup::Side, Arc<Field>),
}

fn radicand(p: &mut Parser) -> Result<u64> {
    let at = p.offset();
    let d = p.int()?;
    match d.to_u64() {
        Some(d) if d > 1 && is_squarefree(d) => Ok(d),
        _ => Err(Error::Syntax {
            pos: at,
            msg: format!("{d} is not a squarefree radicand"),
        }),
    }
}

fn sqrt_quad(d: u64) -> Result<Quad> {
    if d == 1 {
        return Ok(Quad::one());
    }
    crate::quad::checked_sqrt(d).ok_or_else(|| Error::Unsupported(format!("sqrt({d}) is not supported")))
}

fn f_sqrt(f: &Arc<Field>, d: u64) -> Result<FieldElement> {
    let q = sqrt_quad(d)?;
    if !f.coeff_contains(&q) {
        return Err(Error::FieldMismatch(format!("{q} is not a coefficient of {f}")));
    }
    Ok(f.constant(q))
}

/// `{i, j, ...}` with 1-based coordinate indices.
fn subgroup(p: &mut Parser, rank: usize) -> Result<Subgroup> {
    p.expect(&Tok::LBrace)?;
    let mut coords = Vec::new();
    if !p.eat(&Tok::RBrace) {
        loop {
            let at = p.offset();
            let i = p.int()?;
            let i = i
                .to_usize()
                .filter(|i| (1..=rank).contains(i))
                .ok_or(Error::Syntax {
                    pos: at,
                    msg: format!("coordinate {i} outside 1..{rank}"),
                })?;
            coords.push(i - 1);
            if !p.eat(&Tok::Comma) {
                break;
            }
        }
        p.expect(&Tok::RBrace)?;
    }
    Ok(Subgroup::new(coords))
}

#[allow(dead_code)]
fn is_unit(n: &BigInt) -> bool {
    n.is_one() || n.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(script: &str) -> Vec<Reply> {
        let mut s = Session::new(Options::default());
        s.run_script(script)
    }

    fn results(script: &str) -> Vec<Value> {
        run(script)
            .into_iter()
            .map(|r| {
                let j = r.to_json();
                assert!(j.get("error").is_none(), "{j}");
                j["result"].clone()
            })
            .collect()
    }

    #[test]
    fn element_commands() {
        let r = results(
            "def-field F = hahn(Q; lex(2))\n\
             def-elem u = t^((0,1)) in F\n\
             def-elem s = t^((1,0)) in F\n\
             cmp s u\n\
             val u\n\
             def-elem a = 3 + u^2 in F\n\
             residue a\n",
        );
        assert_eq!(r[3], json!("lt"));
        assert_eq!(r[4], json!("(0,1)"));
        assert_eq!(r[6], json!("3"));
    }

    #[test]
    fn eval_and_equiv() {
        let r = results(
            "def-field R = hahn(Q; lex(1))\n\
             def-cut C = 2+ in R\n\
             def-place P = from-cut C var y\n\
             eval P y^2\n\
             harrison P 1/(y-2)\n\
             def-ball B = ball(0; above (2)) in R\n\
             def-cut L = edge(B, lower)\n\
             def-cut U = edge(B, upper)\n\
             equiv L U\n\
             equiv L C\n",
        );
        assert_eq!(r[3], json!("4"));
        assert_eq!(r[4], json!(false));
        assert_eq!(r[8], json!(true));
        assert_eq!(r[9], json!(false));
    }

    #[test]
    fn errors_have_codes() {
        let rs = run("def-field F = hahn(Q; lex(1))\ndef-elem a = 1/0 in F\nval nope\ndef-field F = hahn(Q; lex(1))\n");
        assert_eq!(rs[1].to_json()["error"]["code"], json!("division_by_zero"));
        assert_eq!(rs[2].to_json()["error"]["code"], json!("unknown_name"));
        assert_eq!(rs[3].to_json()["error"]["code"], json!("duplicate_name"));
    }

    #[test]
    fn witness_json() {
        let r = results(
            "def-field F = hahn(Q; lex(2))\n\
             def-field Rn = sub(F; {1})\n\
             witness nonconvex Rn F\n",
        );
        assert_eq!(r[2]["gamma"], json!("(0,1)"));
        assert_eq!(r[2]["comparison"], json!("lt"));
        assert_eq!(r[2]["verified"], json!(true));
    }
}
