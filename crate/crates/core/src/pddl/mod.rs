//! STRIPS-subset PDDL: domains and problems with typing, constants and
//! negated preconditions/goals.
//!
//! Grammar (case-insensitive, `;` comments):
//!
//! ```text
//! domain  := (define (domain NAME) [(:requirements REQ*)] [(:types TYPED*)]
//!             [(:constants TYPED*)] (:predicates (NAME VAR-TYPED*)*) ACTION*)
//! ACTION  := (:action NAME :parameters (VAR-TYPED*)
//!             [:precondition COND] [:effect COND])
//! COND    := LIT | (and LIT*)
//! LIT     := (PRED TERM*) | (not (PRED TERM*))
//! problem := (define (problem NAME) (:domain NAME) [(:objects TYPED*)]
//!             (:init (PRED OBJ*)*) (:goal COND))
//! TYPED   := NAME+ [- TYPE]       REQ := :strips | :typing | :negative-preconditions
//! ```

mod sexpr;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

pub use sexpr::{read, Pos, SExpr};

/// Root of the type hierarchy.
pub const OBJECT_TYPE: &str = "object";
pub const SUPPORTED_REQUIREMENTS: [&str; 3] = [":strips", ":typing", ":negative-preconditions"];

/// The four-skill manipulation domain.
pub const MANIPULATION_DOMAIN: &str = include_str!("manipulation.pddl");

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{col}: {message}")]
    Lexical { line: usize, col: usize, message: String },
    #[error("{line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("unknown requirement {0}")]
    UnknownRequirement(String),
    #[error("predicate {predicate} takes {expected} arguments, got {found}")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
    },
    #[error("{name} has type {found}, expected {expected}")]
    TypeMismatch {
        name: String,
        expected: String,
        found: String,
    },
    #[error("undeclared predicate {0}")]
    UndeclaredPredicate(String),
    #[error("undeclared {what} {name}")]
    Undeclared { what: &'static str, name: String },
    #[error("problem is for domain {found}, not {expected}")]
    DomainMismatch { expected: String, found: String },
}

impl ParseError {
    pub(crate) fn lexical(pos: Pos, msg: &str) -> Self {
        ParseError::Lexical {
            line: pos.line,
            col: pos.col,
            message: msg.to_string(),
        }
    }

    fn syntax(pos: Pos, msg: impl Into<String>) -> Self {
        ParseError::Syntax {
            line: pos.line,
            col: pos.col,
            message: msg.into(),
        }
    }
}

type PResult<T> = Result<T, ParseError>;

/// A name with its declared type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Typed {
    pub name: String,
    pub ty: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicate {
    pub name: String,
    /// Variable names without the leading `?`.
    pub params: Vec<Typed>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Object(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Literal {
    pub predicate: String,
    pub args: Vec<Term>,
    pub positive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorSchema {
    pub name: String,
    pub params: Vec<Typed>,
    pub precondition: Vec<Literal>,
    pub effects: Vec<Literal>,
}

impl OperatorSchema {
    pub fn add_effects(&self) -> impl Iterator<Item = &Literal> {
        self.effects.iter().filter(|l| l.positive)
    }

    pub fn delete_effects(&self) -> impl Iterator<Item = &Literal> {
        self.effects.iter().filter(|l| !l.positive)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PddlDomain {
    pub name: String,
    pub requirements: Vec<String>,
    /// Declared types with their parent, in declaration order.
    pub types: Vec<Typed>,
    pub constants: Vec<Typed>,
    pub predicates: Vec<Predicate>,
    pub operators: Vec<OperatorSchema>,
}

/// A proposition over named objects.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<String>,
}

impl GroundAtom {
    pub fn new(predicate: &str, args: &[&str]) -> Self {
        Self {
            predicate: predicate.to_string(),
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundLiteral {
    pub atom: GroundAtom,
    pub positive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PddlProblem {
    pub name: String,
    pub domain: String,
    pub objects: Vec<Typed>,
    pub init: Vec<GroundAtom>,
    pub goal: Vec<GroundLiteral>,
}

impl PddlDomain {
    pub fn predicate(&self, name: &str) -> Option<&Predicate> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn parent(&self, ty: &str) -> Option<&str> {
        self.types.iter().find(|t| t.name == ty).map(|t| t.ty.as_str())
    }

    pub fn is_type(&self, ty: &str) -> bool {
        ty == OBJECT_TYPE || self.parent(ty).is_some()
    }

    /// `sub` equals `sup` or descends from it.
    pub fn is_subtype(&self, sub: &str, sup: &str) -> bool {
        let mut cur = sub;
        for _ in 0..=self.types.len() {
            if cur == sup {
                return true;
            }
            match self.parent(cur) {
                Some(p) => cur = p,
                None => return sup == OBJECT_TYPE,
            }
        }
        false
    }

    pub fn constant_type(&self, name: &str) -> Option<&str> {
        self.constants.iter().find(|c| c.name == name).map(|c| c.ty.as_str())
    }
}

impl PddlProblem {
    /// Type of a problem object or domain constant.
    pub fn object_type<'a>(&'a self, domain: &'a PddlDomain, name: &str) -> Option<&'a str> {
        self.objects
            .iter()
            .find(|o| o.name == name)
            .map(|o| o.ty.as_str())
            .or_else(|| domain.constant_type(name))
    }

    /// Problem objects followed by domain constants not redeclared.
    pub fn all_objects(&self, domain: &PddlDomain) -> Vec<Typed> {
        let mut out = self.objects.clone();
        for c in &domain.constants {
            if !out.iter().any(|o| o.name == c.name) {
                out.push(c.clone());
            }
        }
        out
    }
}

// ---------------------------------------------------------------- parsing

fn atom<'a>(e: &'a SExpr, what: &str) -> PResult<&'a str> {
    e.as_atom()
        .ok_or_else(|| ParseError::syntax(e.pos(), format!("expected {what}, found a list")))
}

fn list<'a>(e: &'a SExpr, what: &str) -> PResult<&'a [SExpr]> {
    e.as_list()
        .ok_or_else(|| ParseError::syntax(e.pos(), format!("expected {what}, found a symbol")))
}

/// `(define (KIND NAME) sections...)`
fn header<'a>(e: &'a SExpr, kind: &str) -> PResult<(String, &'a [SExpr])> {
    let items = list(e, "(define ...)")?;
    if items.first().and_then(SExpr::as_atom) != Some("define") {
        return Err(ParseError::syntax(e.pos(), "expected (define ...)"));
    }
    let head = items
        .get(1)
        .ok_or_else(|| ParseError::syntax(e.pos(), format!("missing ({kind} NAME)")))?;
    let h = list(head, "header")?;
    if h.len() != 2 || h[0].as_atom() != Some(kind) {
        return Err(ParseError::syntax(head.pos(), format!("expected ({kind} NAME)")));
    }
    Ok((atom(&h[1], "name")?.to_string(), &items[2..]))
}

/// `a b - t c` → [(a,t), (b,t), (c,object)]; variables keep no `?`.
fn typed_list(items: &[SExpr], vars: bool) -> PResult<Vec<Typed>> {
    let mut out = Vec::new();
    let mut pending: Vec<String> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let s = atom(&items[i], "name")?;
        if s == "-" {
            let ty = items
                .get(i + 1)
                .ok_or_else(|| ParseError::syntax(items[i].pos(), "'-' without a type"))?;
            let ty = atom(ty, "type")?;
            if pending.is_empty() {
                return Err(ParseError::syntax(items[i].pos(), "'-' without names"));
            }
            out.extend(pending.drain(..).map(|name| Typed { name, ty: ty.to_string() }));
            i += 2;
            continue;
        }
        let name = match (vars, s.strip_prefix('?')) {
            (true, Some(v)) if !v.is_empty() => v.to_string(),
            (true, _) => return Err(ParseError::syntax(items[i].pos(), format!("expected a ?variable, found {s}"))),
            (false, Some(_)) => return Err(ParseError::syntax(items[i].pos(), format!("unexpected variable {s}"))),
            (false, None) => s.to_string(),
        };
        pending.push(name);
        i += 1;
    }
    out.extend(pending.into_iter().map(|name| Typed {
        name,
        ty: OBJECT_TYPE.to_string(),
    }));
    Ok(out)
}

/// `(p a b)` or `(not (p a b))` as raw (predicate, args, positive).
fn raw_literal(e: &SExpr) -> PResult<(String, Vec<(String, Pos)>, bool)> {
    let items = list(e, "literal")?;
    let head = items
        .first()
        .ok_or_else(|| ParseError::syntax(e.pos(), "empty literal"))?;
    if atom(head, "predicate")? == "not" {
        if items.len() != 2 {
            return Err(ParseError::syntax(e.pos(), "(not ...) takes one atom"));
        }
        let (p, a, pos) = raw_literal(&items[1])?;
        if !pos {
            return Err(ParseError::syntax(items[1].pos(), "nested negation"));
        }
        return Ok((p, a, false));
    }
    if matches!(atom(head, "predicate")?, "and" | "or" | "imply" | "forall" | "exists" | "when") {
        return Err(ParseError::syntax(head.pos(), "only (and literal*) conjunctions are supported"));
    }
    let args = items[1..]
        .iter()
        .map(|a| atom(a, "argument").map(|s| (s.to_string(), a.pos())))
        .collect::<PResult<_>>()?;
    Ok((atom(head, "predicate")?.to_string(), args, true))
}

fn conjunction(e: &SExpr) -> PResult<Vec<(String, Vec<(String, Pos)>, bool)>> {
    let items = list(e, "condition")?;
    if items.first().and_then(SExpr::as_atom) == Some("and") {
        items[1..].iter().map(raw_literal).collect()
    } else if items.is_empty() {
        Ok(Vec::new())
    } else {
        Ok(alloc::vec![raw_literal(e)?])
    }
}

fn check_arity(p: &Predicate, found: usize) -> PResult<()> {
    if p.params.len() != found {
        return Err(ParseError::ArityMismatch {
            predicate: p.name.clone(),
            expected: p.params.len(),
            found,
        });
    }
    Ok(())
}

fn check_type(domain: &PddlDomain, name: &str, found: &str, expected: &str) -> PResult<()> {
    if !domain.is_subtype(found, expected) {
        return Err(ParseError::TypeMismatch {
            name: name.to_string(),
            expected: expected.to_string(),
            found: found.to_string(),
        });
    }
    Ok(())
}

fn domain_literal(
    domain: &PddlDomain,
    params: &[Typed],
    (pred, args, positive): (String, Vec<(String, Pos)>, bool),
) -> PResult<Literal> {
    let p = domain
        .predicate(&pred)
        .ok_or_else(|| ParseError::UndeclaredPredicate(pred.clone()))?;
    check_arity(p, args.len())?;
    let mut terms = Vec::with_capacity(args.len());
    for ((a, _), expected) in args.into_iter().zip(&p.params) {
        let (ty, term) = match a.strip_prefix('?') {
            Some(v) => {
                let ty = params
                    .iter()
                    .find(|t| t.name == v)
                    .map(|t| t.ty.clone())
                    .ok_or_else(|| ParseError::Undeclared {
                        what: "variable",
                        name: a.clone(),
                    })?;
                (ty, Term::Var(v.to_string()))
            }
            None => {
                let ty = domain.constant_type(&a).ok_or_else(|| ParseError::Undeclared {
                    what: "constant",
                    name: a.clone(),
                })?;
                (ty.to_string(), Term::Object(a.clone()))
            }
        };
        check_type(domain, &a, &ty, &expected.ty)?;
        terms.push(term);
    }
    Ok(Literal {
        predicate: pred,
        args: terms,
        positive,
    })
}

fn section<'a>(e: &'a SExpr) -> PResult<(&'a str, &'a [SExpr])> {
    let items = list(e, "section")?;
    let key = items
        .first()
        .ok_or_else(|| ParseError::syntax(e.pos(), "empty section"))?;
    Ok((atom(key, "section keyword")?, &items[1..]))
}

pub fn parse_domain(text: &str) -> PResult<PddlDomain> {
    let root = read(text)?;
    let (name, sections) = header(&root, "domain")?;
    let mut d = PddlDomain {
        name,
        requirements: Vec::new(),
        types: Vec::new(),
        constants: Vec::new(),
        predicates: Vec::new(),
        operators: Vec::new(),
    };
    for s in sections {
        let (key, body) = section(s)?;
        match key {
            ":requirements" => {
                for r in body {
                    let r = atom(r, "requirement")?;
                    if !SUPPORTED_REQUIREMENTS.contains(&r) {
                        return Err(ParseError::UnknownRequirement(r.to_string()));
                    }
                    d.requirements.push(r.to_string());
                }
            }
            ":types" => {
                d.types = typed_list(body, false)?;
                for t in &d.types {
                    if !d.is_type(&t.ty) {
                        return Err(ParseError::Undeclared {
                            what: "type",
                            name: t.ty.clone(),
                        });
                    }
                }
            }
            ":constants" => d.constants = typed_list(body, false)?,
            ":predicates" => {
                for p in body {
                    let items = list(p, "predicate declaration")?;
                    let head = items
                        .first()
                        .ok_or_else(|| ParseError::syntax(p.pos(), "empty predicate declaration"))?;
                    d.predicates.push(Predicate {
                        name: atom(head, "predicate name")?.to_string(),
                        params: typed_list(&items[1..], true)?,
                    });
                }
            }
            ":action" => d.operators.push(parse_action(&d, s, body)?),
            other => return Err(ParseError::syntax(s.pos(), format!("unsupported section {other}"))),
        }
    }
    let declared = |ty: &str| d.is_type(ty);
    for t in d.constants.iter().chain(d.predicates.iter().flat_map(|p| p.params.iter())) {
        if !declared(&t.ty) {
            return Err(ParseError::Undeclared {
                what: "type",
                name: t.ty.clone(),
            });
        }
    }
    Ok(d)
}

fn parse_action(d: &PddlDomain, s: &SExpr, body: &[SExpr]) -> PResult<OperatorSchema> {
    let name = atom(
        body.first()
            .ok_or_else(|| ParseError::syntax(s.pos(), "action without a name"))?,
        "action name",
    )?;
    let mut op = OperatorSchema {
        name: name.to_string(),
        params: Vec::new(),
        precondition: Vec::new(),
        effects: Vec::new(),
    };
    let mut raw_pre = Vec::new();
    let mut raw_eff = Vec::new();
    let mut i = 1;
    while i < body.len() {
        let key = atom(&body[i], "action keyword")?;
        let value = body
            .get(i + 1)
            .ok_or_else(|| ParseError::syntax(body[i].pos(), format!("{key} without a value")))?;
        match key {
            ":parameters" => op.params = typed_list(list(value, "parameter list")?, true)?,
            ":precondition" => raw_pre = conjunction(value)?,
            ":effect" => raw_eff = conjunction(value)?,
            other => return Err(ParseError::syntax(body[i].pos(), format!("unsupported action key {other}"))),
        }
        i += 2;
    }
    for p in &op.params {
        if !d.is_type(&p.ty) {
            return Err(ParseError::Undeclared {
                what: "type",
                name: p.ty.clone(),
            });
        }
    }
    op.precondition = raw_pre
        .into_iter()
        .map(|l| domain_literal(d, &op.params, l))
        .collect::<PResult<_>>()?;
    op.effects = raw_eff
        .into_iter()
        .map(|l| domain_literal(d, &op.params, l))
        .collect::<PResult<_>>()?;
    Ok(op)
}

fn ground_literal(
    domain: &PddlDomain,
    objects: &BTreeMap<String, String>,
    (pred, args, positive): (String, Vec<(String, Pos)>, bool),
) -> PResult<GroundLiteral> {
    let p = domain
        .predicate(&pred)
        .ok_or_else(|| ParseError::UndeclaredPredicate(pred.clone()))?;
    check_arity(p, args.len())?;
    for ((a, pos), expected) in args.iter().zip(&p.params) {
        if a.starts_with('?') {
            return Err(ParseError::syntax(*pos, format!("variable {a} in a ground fact")));
        }
        let ty = objects.get(a).ok_or_else(|| ParseError::Undeclared {
            what: "object",
            name: a.clone(),
        })?;
        check_type(domain, a, ty, &expected.ty)?;
    }
    Ok(GroundLiteral {
        atom: GroundAtom {
            predicate: pred,
            args: args.into_iter().map(|(a, _)| a).collect(),
        },
        positive,
    })
}

pub fn parse_problem(text: &str, domain: &PddlDomain) -> PResult<PddlProblem> {
    let root = read(text)?;
    let (name, sections) = header(&root, "problem")?;
    let mut pr = PddlProblem {
        name,
        domain: String::new(),
        objects: Vec::new(),
        init: Vec::new(),
        goal: Vec::new(),
    };
    let mut raw_init = Vec::new();
    let mut raw_goal = Vec::new();
    for s in sections {
        let (key, body) = section(s)?;
        match key {
            ":domain" => {
                let n = atom(
                    body.first()
                        .ok_or_else(|| ParseError::syntax(s.pos(), "(:domain NAME)"))?,
                    "domain name",
                )?;
                if n != domain.name {
                    return Err(ParseError::DomainMismatch {
                        expected: domain.name.clone(),
                        found: n.to_string(),
                    });
                }
                pr.domain = n.to_string();
            }
            ":objects" => pr.objects = typed_list(body, false)?,
            ":init" => raw_init = body.iter().map(raw_literal).collect::<PResult<_>>()?,
            ":goal" => {
                let g = body
                    .first()
                    .ok_or_else(|| ParseError::syntax(s.pos(), "(:goal CONDITION)"))?;
                raw_goal = conjunction(g)?;
            }
            other => return Err(ParseError::syntax(s.pos(), format!("unsupported section {other}"))),
        }
    }
    if pr.domain.is_empty() {
        return Err(ParseError::syntax(root.pos(), "problem lacks (:domain NAME)"));
    }
    let mut objects = BTreeMap::new();
    for o in pr.all_objects(domain) {
        if !domain.is_type(&o.ty) {
            return Err(ParseError::Undeclared {
                what: "type",
                name: o.ty.clone(),
            });
        }
        objects.insert(o.name, o.ty);
    }
    for l in raw_init {
        let g = ground_literal(domain, &objects, l)?;
        if !g.positive {
            return Err(ParseError::Syntax {
                line: root.pos().line,
                col: root.pos().col,
                message: "negated atom in :init".into(),
            });
        }
        pr.init.push(g.atom);
    }
    pr.goal = raw_goal
        .into_iter()
        .map(|l| ground_literal(domain, &objects, l))
        .collect::<PResult<_>>()?;
    Ok(pr)
}

// --------------------------------------------------------------- printing

fn write_typed(f: &mut fmt::Formatter<'_>, items: &[Typed], var: bool) -> fmt::Result {
    let mut i = 0;
    while i < items.len() {
        let ty = &items[i].ty;
        let mut j = i;
        while j < items.len() && items[j].ty == *ty {
            if j > i || i > 0 {
                f.write_str(" ")?;
            }
            if var {
                f.write_str("?")?;
            }
            f.write_str(&items[j].name)?;
            j += 1;
        }
        write!(f, " - {ty}")?;
        i = j;
    }
    Ok(())
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term) -> fmt::Result {
    match t {
        Term::Var(v) => write!(f, " ?{v}"),
        Term::Object(o) => write!(f, " {o}"),
    }
}

fn write_literal(f: &mut fmt::Formatter<'_>, l: &Literal) -> fmt::Result {
    if !l.positive {
        f.write_str("(not ")?;
    }
    write!(f, "({}", l.predicate)?;
    for t in &l.args {
        write_term(f, t)?;
    }
    f.write_str(")")?;
    if !l.positive {
        f.write_str(")")?;
    }
    Ok(())
}

fn write_conjunction(f: &mut fmt::Formatter<'_>, lits: &[Literal]) -> fmt::Result {
    f.write_str("(and")?;
    for l in lits {
        f.write_str(" ")?;
        write_literal(f, l)?;
    }
    f.write_str(")")
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.predicate)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for GroundLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "(not {})", self.atom)
        }
    }
}

impl fmt::Display for PddlDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(define (domain {})", self.name)?;
        if !self.requirements.is_empty() {
            writeln!(f, "  (:requirements {})", self.requirements.join(" "))?;
        }
        if !self.types.is_empty() {
            f.write_str("  (:types ")?;
            write_typed(f, &self.types, false)?;
            f.write_str(")\n")?;
        }
        if !self.constants.is_empty() {
            f.write_str("  (:constants ")?;
            write_typed(f, &self.constants, false)?;
            f.write_str(")\n")?;
        }
        f.write_str("  (:predicates")?;
        for p in &self.predicates {
            write!(f, "\n    ({}", p.name)?;
            if !p.params.is_empty() {
                f.write_str(" ")?;
                write_typed(f, &p.params, true)?;
            }
            f.write_str(")")?;
        }
        f.write_str(")")?;
        for op in &self.operators {
            write!(f, "\n  (:action {}\n    :parameters (", op.name)?;
            write_typed(f, &op.params, true)?;
            f.write_str(")\n    :precondition ")?;
            write_conjunction(f, &op.precondition)?;
            f.write_str("\n    :effect ")?;
            write_conjunction(f, &op.effects)?;
            f.write_str(")")?;
        }
        f.write_str(")\n")
    }
}

impl fmt::Display for PddlProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(define (problem {})", self.name)?;
        writeln!(f, "  (:domain {})", self.domain)?;
        if !self.objects.is_empty() {
            f.write_str("  (:objects ")?;
            write_typed(f, &self.objects, false)?;
            f.write_str(")\n")?;
        }
        f.write_str("  (:init")?;
        for a in &self.init {
            write!(f, " {a}")?;
        }
        f.write_str(")\n  (:goal (and")?;
        for g in &self.goal {
            write!(f, " {g}")?;
        }
        f.write_str(")))\n")
    }
}
