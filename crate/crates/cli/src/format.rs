//! A line-oriented, sectioned text format for the structures the tool works
//! with. One document per file: a `kind` header, an optional `name`, then
//! kind-specific table lines. `#` starts a comment; blank lines are ignored;
//! files are UTF-8 with LF line endings.
//!
//! Serialization is canonical — ids ascending, fields in a fixed order — so
//! that `serialize(parse(serialize(d))) == serialize(d)` byte for byte.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use diptych_core::conjugation::{ButterflyDiagram, Cover};
use diptych_core::diptych::{verify_product_candidate, Diptych, Prediptych};
use diptych_core::fincat::{ArrId, Arrow, FinCategory, ObjId};
use diptych_core::groupoid::FinGroupoid;
use diptych_core::morphism::{ActionLaw, GroupoidMorphism};

#[derive(Debug, Clone)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

/// A parsed input or result artifact. The payload keeps the checked core
/// structure except for cocycles, whose overlap table is kept verbatim so a
/// semantically invalid table can still round-trip and be reported by the
/// relevant command rather than the parser.
#[derive(Debug, Clone)]
pub enum Payload {
    Category(FinCategory),
    Diptych(Diptych),
    Groupoid(Arc<FinGroupoid>),
    Morphism(GroupoidMorphism),
    Action(ActionLaw),
    Cover(Cover),
    Cocycle {
        cover: Cover,
        target: Arc<FinGroupoid>,
        table: BTreeMap<(usize, usize, usize), ArrId>,
    },
    Butterfly(ButterflyDiagram),
}

#[derive(Debug, Clone)]
pub struct Document {
    pub name: Option<String>,
    pub payload: Payload,
}

impl Document {
    pub fn new(name: impl Into<String>, payload: Payload) -> Document {
        Document { name: Some(name.into()), payload }
    }

    pub fn kind(&self) -> &'static str {
        match &self.payload {
            Payload::Category(_) => "category",
            Payload::Diptych(_) => "diptych",
            Payload::Groupoid(_) => "groupoid",
            Payload::Morphism(_) => "morphism",
            Payload::Action(_) => "action",
            Payload::Cover(_) => "cover",
            Payload::Cocycle { .. } => "cocycle",
            Payload::Butterfly(_) => "butterfly",
        }
    }
}

// ---------------------------------------------------------------------------
// statement tree

#[derive(Debug)]
enum Stmt {
    Line { line: usize, col: usize, words: Vec<String> },
    Section { line: usize, name: String, body: Vec<Stmt> },
}

impl Stmt {
    fn line(&self) -> usize {
        match self {
            Stmt::Line { line, .. } => *line,
            Stmt::Section { line, .. } => *line,
        }
    }
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, col, msg: msg.into() }
}

fn tokenize(text: &str) -> Vec<(usize, usize, Vec<String>)> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let mut words = Vec::new();
        let mut first_col = 0;
        for (off, _) in body.match_indices(|c: char| !c.is_whitespace()) {
            if off > 0 && !body.as_bytes()[off - 1].is_ascii_whitespace() {
                continue; // interior of a word
            }
            let word: String =
                body[off..].chars().take_while(|c| !c.is_whitespace()).collect();
            if words.is_empty() {
                first_col = off + 1;
            }
            words.push(word);
        }
        if !words.is_empty() {
            out.push((i + 1, first_col, words));
        }
    }
    out
}

fn build_tree(
    toks: &[(usize, usize, Vec<String>)],
    pos: &mut usize,
    depth: usize,
) -> Result<Vec<Stmt>, ParseError> {
    let mut out = Vec::new();
    while *pos < toks.len() {
        let (line, col, words) = &toks[*pos];
        match words[0].as_str() {
            "section" => {
                if words.len() != 2 {
                    return Err(err(*line, *col, "section needs exactly one name"));
                }
                *pos += 1;
                let body = build_tree(toks, pos, depth + 1)?;
                if *pos >= toks.len() {
                    return Err(err(*line, *col, format!("section {} is never closed by end", words[1])));
                }
                *pos += 1; // consume the `end`
                out.push(Stmt::Section { line: *line, name: words[1].clone(), body });
            }
            "end" => {
                if depth == 0 {
                    return Err(err(*line, *col, "end without a matching section"));
                }
                return Ok(out);
            }
            _ => {
                out.push(Stmt::Line { line: *line, col: *col, words: words.clone() });
                *pos += 1;
            }
        }
    }
    if depth > 0 {
        // caller reports the unclosed section with its own line
        return Ok(out);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// low-level readers

fn num(word: &str, line: usize, col: usize) -> Result<usize, ParseError> {
    word.parse::<usize>().map_err(|_| err(line, col, format!("expected a number, got `{word}`")))
}

struct Fields<'a> {
    line: usize,
    col: usize,
    words: &'a [String],
    at: usize,
}

impl<'a> Fields<'a> {
    fn of(line: usize, col: usize, words: &'a [String]) -> Fields<'a> {
        Fields { line, col, words, at: 1 }
    }

    fn num(&mut self) -> Result<usize, ParseError> {
        if self.at >= self.words.len() {
            return Err(err(self.line, self.col, format!("{}: missing field", self.words[0])));
        }
        let v = num(&self.words[self.at], self.line, self.col)?;
        self.at += 1;
        Ok(v)
    }

    fn rest(&mut self) -> Result<Vec<usize>, ParseError> {
        let mut out = Vec::new();
        while self.at < self.words.len() {
            out.push(self.num()?);
        }
        Ok(out)
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at != self.words.len() {
            return Err(err(self.line, self.col, format!("{}: too many fields", self.words[0])));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// category / groupoid bodies

#[derive(Default)]
struct RawCat {
    objects: Option<(usize, usize)>, // (n, line)
    arrows: BTreeMap<usize, (ObjId, ObjId, usize)>,
    identity: BTreeMap<usize, (ArrId, usize)>,
    comp: BTreeMap<(ArrId, ArrId), (ArrId, usize)>,
    inverse: BTreeMap<usize, (ArrId, usize)>,
}

impl RawCat {
    /// Accepts a body line; returns false if the keyword is not a category /
    /// groupoid table line (the caller decides whether that is an error).
    fn accept(&mut self, line: usize, col: usize, words: &[String], groupoid: bool) -> Result<bool, ParseError> {
        let mut f = Fields::of(line, col, words);
        match words[0].as_str() {
            "objects" => {
                if self.objects.is_some() {
                    return Err(err(line, col, "duplicate objects line"));
                }
                let n = f.num()?;
                f.finish()?;
                self.objects = Some((n, line));
            }
            "arrow" => {
                let (id, s, t) = (f.num()?, f.num()?, f.num()?);
                f.finish()?;
                if self.arrows.insert(id, (s, t, line)).is_some() {
                    return Err(err(line, col, format!("duplicate id: arrow {id}")));
                }
            }
            "identity" => {
                let (b, a) = (f.num()?, f.num()?);
                f.finish()?;
                if self.identity.insert(b, (a, line)).is_some() {
                    return Err(err(line, col, format!("duplicate id: identity for object {b}")));
                }
            }
            "comp" => {
                let (g, x, gx) = (f.num()?, f.num()?, f.num()?);
                f.finish()?;
                if self.comp.insert((g, x), (gx, line)).is_some() {
                    return Err(err(line, col, format!("duplicate id: comp {g} {x}")));
                }
            }
            "inverse" if groupoid => {
                let (a, b) = (f.num()?, f.num()?);
                f.finish()?;
                if self.inverse.insert(a, (b, line)).is_some() {
                    return Err(err(line, col, format!("duplicate id: inverse of arrow {a}")));
                }
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn build_category(&self, name: &str, at: usize) -> Result<FinCategory, ParseError> {
        let (n, oline) = self.objects.ok_or_else(|| err(at, 1, "missing objects line"))?;
        if n == 0 {
            return Err(err(oline, 1, "no objects"));
        }
        let m = self.arrows.len();
        let mut arrows = Vec::with_capacity(m);
        for (&id, &(s, t, line)) in &self.arrows {
            if id != arrows.len() {
                return Err(err(line, 1, format!("arrow ids must be consecutive from 0; got {id}")));
            }
            if s >= n || t >= n {
                return Err(err(line, 1, format!("dangling id: object {} in arrow {id}", s.max(t))));
            }
            arrows.push(Arrow { src: s, tgt: t });
        }
        let mut identity = Vec::with_capacity(n);
        for b in 0..n {
            let &(a, line) = self
                .identity
                .get(&b)
                .ok_or_else(|| err(at, 1, format!("missing identity for object {b}")))?;
            if a >= m {
                return Err(err(line, 1, format!("dangling id: arrow {a}")));
            }
            identity.push(a);
        }
        for (&b, &(_, line)) in &self.identity {
            if b >= n {
                return Err(err(line, 1, format!("dangling id: object {b}")));
            }
        }
        let mut comp = HashMap::new();
        for (&(g, x), &(gx, line)) in &self.comp {
            for a in [g, x, gx] {
                if a >= m {
                    return Err(err(line, 1, format!("dangling id: arrow {a}")));
                }
            }
            comp.insert((g, x), gx);
        }
        Ok(FinCategory::from_fn(name, n, arrows, identity, |g, x| comp.get(&(g, x)).copied()))
    }

    fn build_groupoid(&self, name: &str, at: usize) -> Result<FinGroupoid, ParseError> {
        let cat = self.build_category(name, at)?;
        let m = cat.n_arrows();
        let mut inverse = Vec::with_capacity(m);
        for a in 0..m {
            let &(b, line) = self
                .inverse
                .get(&a)
                .ok_or_else(|| err(at, 1, format!("missing inverse for arrow {a}")))?;
            if b >= m {
                return Err(err(line, 1, format!("dangling id: arrow {b}")));
            }
            inverse.push(b);
        }
        for (&a, &(_, line)) in &self.inverse {
            if a >= m {
                return Err(err(line, 1, format!("dangling id: arrow {a}")));
            }
        }
        Ok(FinGroupoid::new_unchecked(cat, inverse))
    }
}

fn groupoid_from_stmts(stmts: &[Stmt], name: &str, at: usize) -> Result<FinGroupoid, ParseError> {
    let mut raw = RawCat::default();
    for s in stmts {
        match s {
            Stmt::Line { line, col, words } => {
                if !raw.accept(*line, *col, words, true)? {
                    return Err(err(*line, *col, format!("unknown groupoid line `{}`", words[0])));
                }
            }
            Stmt::Section { line, name, .. } => {
                return Err(err(*line, 1, format!("unexpected section `{name}` inside a groupoid body")));
            }
        }
    }
    raw.build_groupoid(name, at)
}

// ---------------------------------------------------------------------------
// morphism helpers

struct RawMorphism {
    f0: BTreeMap<usize, (ObjId, usize)>,
    f1: BTreeMap<usize, (ArrId, usize)>,
}

impl RawMorphism {
    fn new() -> RawMorphism {
        RawMorphism { f0: BTreeMap::new(), f1: BTreeMap::new() }
    }

    fn accept(&mut self, line: usize, col: usize, words: &[String]) -> Result<bool, ParseError> {
        let mut f = Fields::of(line, col, words);
        let map = match words[0].as_str() {
            "f0" => &mut self.f0,
            "f1" => &mut self.f1,
            _ => return Ok(false),
        };
        let (k, v) = (f.num()?, f.num()?);
        f.finish()?;
        if map.insert(k, (v, line)).is_some() {
            return Err(err(line, col, format!("duplicate id: {} {k}", words[0])));
        }
        Ok(true)
    }

    fn build(
        &self,
        source: Arc<FinGroupoid>,
        target: Arc<FinGroupoid>,
        at: usize,
    ) -> Result<GroupoidMorphism, ParseError> {
        let mut f0 = Vec::with_capacity(source.base_size());
        for b in 0..source.base_size() {
            let &(v, line) = self
                .f0
                .get(&b)
                .ok_or_else(|| err(at, 1, format!("missing f0 entry for object {b}")))?;
            if v >= target.base_size() {
                return Err(err(line, 1, format!("dangling id: object {v}")));
            }
            f0.push(v);
        }
        let mut f1 = Vec::with_capacity(source.n_arrows());
        for a in 0..source.n_arrows() {
            let &(v, line) = self
                .f1
                .get(&a)
                .ok_or_else(|| err(at, 1, format!("missing f1 entry for arrow {a}")))?;
            if v >= target.n_arrows() {
                return Err(err(line, 1, format!("dangling id: arrow {v}")));
            }
            f1.push(v);
        }
        for (&k, &(_, line)) in &self.f0 {
            if k >= source.base_size() {
                return Err(err(line, 1, format!("dangling id: object {k}")));
            }
        }
        for (&k, &(_, line)) in &self.f1 {
            if k >= source.n_arrows() {
                return Err(err(line, 1, format!("dangling id: arrow {k}")));
            }
        }
        Ok(GroupoidMorphism::new(source, target, f0, f1))
    }
}

// ---------------------------------------------------------------------------
// per-kind interpreters

fn parse_category_like(stmts: &[Stmt], kind: &str, name: &str) -> Result<Payload, ParseError> {
    let mut raw = RawCat::default();
    let mut good_monos: Vec<(usize, usize)> = Vec::new();
    let mut good_epis: Vec<(usize, usize)> = Vec::new();
    let mut products: Vec<(usize, usize, usize, usize, usize, usize)> = Vec::new();
    let groupoid = kind == "groupoid";
    let diptych = kind == "diptych";
    for s in stmts {
        let (line, col, words) = match s {
            Stmt::Line { line, col, words } => (*line, *col, words),
            Stmt::Section { line, name, .. } => {
                return Err(err(*line, 1, format!("unexpected section `{name}` in a {kind} document")));
            }
        };
        if raw.accept(line, col, words, groupoid)? {
            continue;
        }
        let mut f = Fields::of(line, col, words);
        match (words[0].as_str(), diptych) {
            ("good-mono", true) => {
                let id = f.num()?;
                f.finish()?;
                good_monos.push((id, line));
            }
            ("good-epi", true) => {
                let id = f.num()?;
                f.finish()?;
                good_epis.push((id, line));
            }
            ("product", true) => {
                let (a, b, apex, p1, p2) = (f.num()?, f.num()?, f.num()?, f.num()?, f.num()?);
                f.finish()?;
                products.push((a, b, apex, p1, p2, line));
            }
            _ => return Err(err(line, col, format!("unknown {kind} line `{}`", words[0]))),
        }
    }
    match kind {
        "category" => Ok(Payload::Category(raw.build_category(name, 1)?)),
        "groupoid" => Ok(Payload::Groupoid(Arc::new(raw.build_groupoid(name, 1)?))),
        "diptych" => {
            let cat = raw.build_category(name, 1)?;
            let mut monos = vec![false; cat.n_arrows()];
            let mut epis = vec![false; cat.n_arrows()];
            for (id, line) in good_monos {
                if id >= cat.n_arrows() {
                    return Err(err(line, 1, format!("dangling id: arrow {id}")));
                }
                monos[id] = true;
            }
            for (id, line) in good_epis {
                if id >= cat.n_arrows() {
                    return Err(err(line, 1, format!("dangling id: arrow {id}")));
                }
                epis[id] = true;
            }
            let mut table = BTreeMap::new();
            for (a, b, apex, p1, p2, line) in products {
                if a >= cat.n_objects() || b >= cat.n_objects() || apex >= cat.n_objects() {
                    return Err(err(line, 1, "dangling id: object in product line"));
                }
                if p1 >= cat.n_arrows() || p2 >= cat.n_arrows() {
                    return Err(err(line, 1, "dangling id: arrow in product line"));
                }
                if cat.src(p1) != apex || cat.src(p2) != apex || cat.tgt(p1) != a || cat.tgt(p2) != b {
                    return Err(err(line, 1, format!("product ({a}, {b}): legs do not match the declared feet")));
                }
                let w = verify_product_candidate(&cat, apex, p1, p2).ok_or_else(|| {
                    err(line, 1, format!("product ({a}, {b}): candidate fails the universal property"))
                })?;
                if table.insert((a, b), w).is_some() {
                    return Err(err(line, 1, format!("duplicate id: product ({a}, {b})")));
                }
            }
            Ok(Payload::Diptych(Diptych {
                pre: Prediptych { cat, good_monos: monos, good_epis: epis },
                products: table,
            }))
        }
        _ => unreachable!(),
    }
}

fn take_section<'a>(
    stmts: &'a [Stmt],
    name: &str,
    kind: &str,
) -> Result<(&'a [Stmt], usize), ParseError> {
    let mut found = None;
    for s in stmts {
        if let Stmt::Section { line, name: n, body } = s {
            if n == name {
                if found.is_some() {
                    return Err(err(*line, 1, format!("duplicate id: section {name}")));
                }
                found = Some((body.as_slice(), *line));
            }
        }
    }
    found.ok_or_else(|| err(1, 1, format!("{kind} document needs a `section {name}`")))
}

fn parse_morphism(stmts: &[Stmt]) -> Result<Payload, ParseError> {
    let (src_body, src_line) = take_section(stmts, "source", "morphism")?;
    let (tgt_body, tgt_line) = take_section(stmts, "target", "morphism")?;
    let source = Arc::new(groupoid_from_stmts(src_body, "source", src_line)?);
    let target = Arc::new(groupoid_from_stmts(tgt_body, "target", tgt_line)?);
    let mut raw = RawMorphism::new();
    for s in stmts {
        match s {
            Stmt::Section { name, line, .. } => {
                if name != "source" && name != "target" {
                    return Err(err(*line, 1, format!("unexpected section `{name}` in a morphism document")));
                }
            }
            Stmt::Line { line, col, words } => {
                if !raw.accept(*line, *col, words)? {
                    return Err(err(*line, *col, format!("unknown morphism line `{}`", words[0])));
                }
            }
        }
    }
    Ok(Payload::Morphism(raw.build(source, target, 1)?))
}

fn parse_action(stmts: &[Stmt]) -> Result<Payload, ParseError> {
    let (grp_body, grp_line) = take_section(stmts, "group", "action")?;
    let g = Arc::new(groupoid_from_stmts(grp_body, "group", grp_line)?);
    let mut points: Option<usize> = None;
    let mut moment: BTreeMap<usize, (ObjId, usize)> = BTreeMap::new();
    let mut lambda: BTreeMap<(ArrId, usize), (usize, usize)> = BTreeMap::new();
    for s in stmts {
        let (line, col, words) = match s {
            Stmt::Line { line, col, words } => (*line, *col, words),
            Stmt::Section { name, line, .. } => {
                if name != "group" {
                    return Err(err(*line, 1, format!("unexpected section `{name}` in an action document")));
                }
                continue;
            }
        };
        let mut f = Fields::of(line, col, words);
        match words[0].as_str() {
            "points" => {
                if points.is_some() {
                    return Err(err(line, col, "duplicate points line"));
                }
                points = Some(f.num()?);
                f.finish()?;
            }
            "moment" => {
                let (p, b) = (f.num()?, f.num()?);
                f.finish()?;
                if moment.insert(p, (b, line)).is_some() {
                    return Err(err(line, col, format!("duplicate id: moment of point {p}")));
                }
            }
            "act" => {
                let (a, p, q) = (f.num()?, f.num()?, f.num()?);
                f.finish()?;
                if lambda.insert((a, p), (q, line)).is_some() {
                    return Err(err(line, col, format!("duplicate id: act {a} {p}")));
                }
            }
            _ => return Err(err(line, col, format!("unknown action line `{}`", words[0]))),
        }
    }
    let e_size = points.ok_or_else(|| err(1, 1, "action document needs a points line"))?;
    let mut mom = Vec::with_capacity(e_size);
    for p in 0..e_size {
        let &(b, line) = moment
            .get(&p)
            .ok_or_else(|| err(1, 1, format!("missing moment for point {p}")))?;
        if b >= g.base_size() {
            return Err(err(line, 1, format!("dangling id: object {b}")));
        }
        mom.push(b);
    }
    for (&p, &(_, line)) in &moment {
        if p >= e_size {
            return Err(err(line, 1, format!("dangling id: point {p}")));
        }
    }
    let mut lam = HashMap::new();
    for (&(a, p), &(q, line)) in &lambda {
        if a >= g.n_arrows() {
            return Err(err(line, 1, format!("dangling id: arrow {a}")));
        }
        if p >= e_size || q >= e_size {
            return Err(err(line, 1, format!("dangling id: point {}", p.max(q))));
        }
        lam.insert((a, p), q);
    }
    Ok(Payload::Action(ActionLaw { g, e_size, moment: mom, lambda: lam }))
}

fn parse_cover_lines(
    stmts: &[Stmt],
    allow: &dyn Fn(&str) -> bool,
) -> Result<Cover, ParseError> {
    let mut base: Option<usize> = None;
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    for s in stmts {
        let (line, col, words) = match s {
            Stmt::Line { line, col, words } => (*line, *col, words),
            Stmt::Section { .. } => continue,
        };
        let mut f = Fields::of(line, col, words);
        match words[0].as_str() {
            "base" => {
                if base.is_some() {
                    return Err(err(line, col, "duplicate base line"));
                }
                base = Some(f.num()?);
                f.finish()?;
            }
            "piece" => pieces.push(f.rest()?),
            w if allow(w) => {}
            w => return Err(err(line, col, format!("unknown line `{w}`"))),
        }
    }
    let b_size = base.ok_or_else(|| err(1, 1, "cover needs a base line"))?;
    for piece in &pieces {
        for &p in piece {
            if p >= b_size {
                return Err(err(1, 1, format!("dangling id: base point {p}")));
            }
        }
    }
    Ok(Cover { b_size, pieces })
}

fn parse_cocycle(stmts: &[Stmt]) -> Result<Payload, ParseError> {
    let cover = parse_cover_lines(stmts, &|w| w == "entry")?;
    let (tgt_body, tgt_line) = take_section(stmts, "target", "cocycle")?;
    let target = Arc::new(groupoid_from_stmts(tgt_body, "target", tgt_line)?);
    let mut table = BTreeMap::new();
    for s in stmts {
        let (line, col, words) = match s {
            Stmt::Line { line, col, words } => (*line, *col, words),
            Stmt::Section { name, line, .. } => {
                if name != "target" {
                    return Err(err(*line, 1, format!("unexpected section `{name}` in a cocycle document")));
                }
                continue;
            }
        };
        if words[0] != "entry" {
            continue; // base / piece, already consumed
        }
        let mut f = Fields::of(line, col, words);
        let (i, j, b, a) = (f.num()?, f.num()?, f.num()?, f.num()?);
        f.finish()?;
        if i >= cover.pieces.len() || j >= cover.pieces.len() {
            return Err(err(line, 1, format!("dangling id: piece {}", i.max(j))));
        }
        if b >= cover.b_size {
            return Err(err(line, 1, format!("dangling id: base point {b}")));
        }
        if a >= target.n_arrows() {
            return Err(err(line, 1, format!("dangling id: arrow {a}")));
        }
        if table.insert((i, j, b), a).is_some() {
            return Err(err(line, col, format!("duplicate id: entry {i} {j} {b}")));
        }
    }
    Ok(Payload::Cocycle { cover, target, table })
}

const NODE_NAMES: [&str; 5] = ["r", "rp", "k", "g", "gp"];
/// edge name, source node, target node
const EDGE_NAMES: [(&str, &str, &str); 6] = [
    ("i", "r", "k"),
    ("ip", "rp", "k"),
    ("q", "k", "g"),
    ("qp", "k", "gp"),
    ("r", "r", "g"),
    ("rp", "rp", "gp"),
];

fn parse_butterfly(stmts: &[Stmt]) -> Result<Payload, ParseError> {
    let mut nodes: HashMap<&str, Arc<FinGroupoid>> = HashMap::new();
    for n in NODE_NAMES {
        let (body, line) = take_section(stmts, &format!("node.{n}"), "butterfly")?;
        nodes.insert(n, Arc::new(groupoid_from_stmts(body, n, line)?));
    }
    let mut edges: HashMap<&str, GroupoidMorphism> = HashMap::new();
    for (e, s, t) in EDGE_NAMES {
        let (body, line) = take_section(stmts, &format!("edge.{e}"), "butterfly")?;
        let mut raw = RawMorphism::new();
        for st in body {
            match st {
                Stmt::Line { line, col, words } => {
                    if !raw.accept(*line, *col, words)? {
                        return Err(err(*line, *col, format!("unknown edge line `{}`", words[0])));
                    }
                }
                Stmt::Section { line, name, .. } => {
                    return Err(err(*line, 1, format!("unexpected section `{name}` inside an edge")));
                }
            }
        }
        edges.insert(e, raw.build(nodes[s].clone(), nodes[t].clone(), line)?);
    }
    let k_arrows = nodes["k"].n_arrows();
    let mut r_flags = vec![false; k_arrows];
    let mut rp_flags = vec![false; k_arrows];
    for s in stmts {
        let (line, col, words) = match s {
            Stmt::Line { line, col, words } => (*line, *col, words),
            Stmt::Section { name, line, .. } => {
                let known = NODE_NAMES.iter().any(|n| name == &format!("node.{n}"))
                    || EDGE_NAMES.iter().any(|(e, _, _)| name == &format!("edge.{e}"));
                if !known {
                    return Err(err(*line, 1, format!("unexpected section `{name}` in a butterfly document")));
                }
                continue;
            }
        };
        let flags = match words[0].as_str() {
            "rwing" => &mut r_flags,
            "rpwing" => &mut rp_flags,
            w => return Err(err(line, col, format!("unknown butterfly line `{w}`"))),
        };
        let mut f = Fields::of(line, col, words);
        let a = f.num()?;
        f.finish()?;
        if a >= k_arrows {
            return Err(err(line, 1, format!("dangling id: arrow {a}")));
        }
        flags[a] = true;
    }
    Ok(Payload::Butterfly(ButterflyDiagram {
        r_grp: nodes["r"].clone(),
        rp_grp: nodes["rp"].clone(),
        k: nodes["k"].clone(),
        g: nodes["g"].clone(),
        gp: nodes["gp"].clone(),
        i: edges.remove("i").unwrap(),
        ip: edges.remove("ip").unwrap(),
        q: edges.remove("q").unwrap(),
        qp: edges.remove("qp").unwrap(),
        r: edges.remove("r").unwrap(),
        rp: edges.remove("rp").unwrap(),
        r_flags,
        rp_flags,
    }))
}

// ---------------------------------------------------------------------------
// entry points

pub fn parse(text: &str) -> Result<Document, ParseError> {
    let toks = tokenize(text);
    let mut pos = 0;
    let tree = build_tree(&toks, &mut pos, 0)?;
    let mut it = tree.iter();
    let (kind, kline) = match it.next() {
        Some(Stmt::Line { line, words, .. }) if words[0] == "kind" && words.len() == 2 => {
            (words[1].clone(), *line)
        }
        Some(s) => return Err(err(s.line(), 1, "document must start with `kind <k>`")),
        None => return Err(err(1, 1, "empty document")),
    };
    let mut name = None;
    let mut body_start = 1;
    if let Some(Stmt::Line { words, .. }) = tree.get(1) {
        if words[0] == "name" {
            name = Some(words[1..].join(" "));
            body_start = 2;
        }
    }
    let body = &tree[body_start..];
    let cat_name = name.clone().unwrap_or_else(|| kind.clone());
    let payload = match kind.as_str() {
        "category" | "groupoid" | "diptych" => parse_category_like(body, &kind, &cat_name)?,
        "morphism" => parse_morphism(body)?,
        "action" => parse_action(body)?,
        "cover" => Payload::Cover(parse_cover_lines(body, &|_| false)?),
        "cocycle" => parse_cocycle(body)?,
        "butterfly" => parse_butterfly(body)?,
        other => return Err(err(kline, 1, format!("unknown document kind `{other}`"))),
    };
    Ok(Document { name, payload })
}

fn write_category(out: &mut String, c: &FinCategory) {
    out.push_str(&format!("objects {}\n", c.n_objects()));
    for a in c.arrow_ids() {
        out.push_str(&format!("arrow {} {} {}\n", a, c.src(a), c.tgt(a)));
    }
    for b in c.object_ids() {
        out.push_str(&format!("identity {} {}\n", b, c.identity_of(b)));
    }
    for g in c.arrow_ids() {
        for f in c.arrow_ids() {
            if c.tgt(f) == c.src(g) {
                if let Some(gf) = c.compose(g, f) {
                    out.push_str(&format!("comp {g} {f} {gf}\n"));
                }
            }
        }
    }
}

fn write_groupoid(out: &mut String, g: &FinGroupoid) {
    write_category(out, &g.cat);
    for (a, &b) in g.inverse.iter().enumerate() {
        out.push_str(&format!("inverse {a} {b}\n"));
    }
}

fn write_morphism_tables(out: &mut String, f: &GroupoidMorphism) {
    for (b, &v) in f.f0.iter().enumerate() {
        out.push_str(&format!("f0 {b} {v}\n"));
    }
    for (a, &v) in f.f1.iter().enumerate() {
        out.push_str(&format!("f1 {a} {v}\n"));
    }
}

fn write_cover(out: &mut String, c: &Cover) {
    out.push_str(&format!("base {}\n", c.b_size));
    for piece in &c.pieces {
        out.push_str("piece");
        for p in piece {
            out.push_str(&format!(" {p}"));
        }
        out.push('\n');
    }
}

fn write_section(out: &mut String, name: &str, body: impl FnOnce(&mut String)) {
    out.push_str(&format!("section {name}\n"));
    body(out);
    out.push_str("end\n");
}

pub fn serialize(d: &Document) -> String {
    let mut out = String::new();
    out.push_str(&format!("kind {}\n", d.kind()));
    if let Some(n) = &d.name {
        out.push_str(&format!("name {n}\n"));
    }
    match &d.payload {
        Payload::Category(c) => write_category(&mut out, c),
        Payload::Groupoid(g) => write_groupoid(&mut out, g),
        Payload::Diptych(dip) => {
            write_category(&mut out, dip.cat());
            for a in dip.cat().arrow_ids() {
                if dip.pre.good_monos[a] {
                    out.push_str(&format!("good-mono {a}\n"));
                }
            }
            for a in dip.cat().arrow_ids() {
                if dip.pre.good_epis[a] {
                    out.push_str(&format!("good-epi {a}\n"));
                }
            }
            for (&(a, b), w) in &dip.products {
                out.push_str(&format!(
                    "product {a} {b} {} {} {}\n",
                    w.apex, w.legs[0], w.legs[1]
                ));
            }
        }
        Payload::Morphism(f) => {
            write_section(&mut out, "source", |o| write_groupoid(o, &f.source));
            write_section(&mut out, "target", |o| write_groupoid(o, &f.target));
            write_morphism_tables(&mut out, f);
        }
        Payload::Action(law) => {
            write_section(&mut out, "group", |o| write_groupoid(o, &law.g));
            out.push_str(&format!("points {}\n", law.e_size));
            for (p, &b) in law.moment.iter().enumerate() {
                out.push_str(&format!("moment {p} {b}\n"));
            }
            let mut entries: Vec<_> = law.lambda.iter().collect();
            entries.sort();
            for (&(a, p), &q) in entries {
                out.push_str(&format!("act {a} {p} {q}\n"));
            }
        }
        Payload::Cover(c) => write_cover(&mut out, c),
        Payload::Cocycle { cover, target, table } => {
            write_cover(&mut out, cover);
            write_section(&mut out, "target", |o| write_groupoid(o, target));
            for (&(i, j, b), &a) in table {
                out.push_str(&format!("entry {i} {j} {b} {a}\n"));
            }
        }
        Payload::Butterfly(bf) => {
            let nodes: [(&str, &Arc<FinGroupoid>); 5] = [
                ("r", &bf.r_grp),
                ("rp", &bf.rp_grp),
                ("k", &bf.k),
                ("g", &bf.g),
                ("gp", &bf.gp),
            ];
            for (n, g) in nodes {
                write_section(&mut out, &format!("node.{n}"), |o| write_groupoid(o, g));
            }
            let edges: [(&str, &GroupoidMorphism); 6] = [
                ("i", &bf.i),
                ("ip", &bf.ip),
                ("q", &bf.q),
                ("qp", &bf.qp),
                ("r", &bf.r),
                ("rp", &bf.rp),
            ];
            for (e, f) in edges {
                write_section(&mut out, &format!("edge.{e}"), |o| write_morphism_tables(o, f));
            }
            for (a, &on) in bf.r_flags.iter().enumerate() {
                if on {
                    out.push_str(&format!("rwing {a}\n"));
                }
            }
            for (a, &on) in bf.rp_flags.iter().enumerate() {
                if on {
                    out.push_str(&format!("rpwing {a}\n"));
                }
            }
        }
    }
    out
}
