//! The line-oriented category file format.
//!
//! ```text
//! # the A2 quiver
//! ring F 2
//! object X
//! object Y
//! gen 1_X : X -> X deg 0
//! gen 1_Y : Y -> Y deg 0
//! gen f : X -> Y deg 0
//! id X = 1_X
//! id Y = 1_Y
//! ```
//!
//! Products use the dg-style convention: `d a = …` is the differential and
//! `mu2(g, f) = …` is the composite "g after f". Arguments of every `mu<k>`
//! are listed outermost first, so the last argument is applied first.
//! A twisted object lists its summands as `X[shift]` and its differential
//! entries as `delta (i,j) = …`, the component into summand `i` from
//! summand `j` (so `i > j`). A sequence lists objects and the maps between
//! consecutive ones: `sequence S = [Y0, Y1] maps [1*u]`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use ainf::category::{dg_to_reduced_parity, fmt_lincomb, AInfCategory, CategoryBuilder};
use ainf::linalg::SVec;
use ainf::localize::ObjectSequence;
use ainf::scalar::{Field, Scalar};
use ainf::twisted::TwObject;
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("undeclared {0}")]
    Undeclared(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("characteristic {0} is not prime")]
    NonPrime(String),
    #[error("duplicate {0}")]
    Duplicate(String),
    #[error("{0}")]
    Invalid(String),
}

/// A parse error with its 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}{line}:{column}: {kind}", path.as_ref().map(|p| format!("{p}:")).unwrap_or_default())]
pub struct ParseError {
    pub path: Option<String>,
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug)]
pub struct NamedSequence {
    pub name: String,
    pub sequence: ObjectSequence,
}

/// A parsed file.
#[derive(Clone, Debug)]
pub struct CategoryFile {
    pub path: Option<String>,
    pub category: AInfCategory,
    pub twobjs: Vec<TwObject>,
    pub sequences: Vec<NamedSequence>,
    /// Line of the declaration of every object, generator, twisted object and sequence.
    pub declared_at: BTreeMap<String, usize>,
}

impl CategoryFile {
    pub fn sequence(&self, name: &str) -> Option<&ObjectSequence> {
        self.sequences.iter().find(|s| s.name == name).map(|s| &s.sequence)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Int(BigInt),
    Sym(&'static str),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

const SYMBOLS: [&str; 11] = ["->", "(", ")", ",", "=", ":", "[", "]", "*", "+", "/"];

fn lex(line: &str, lineno: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let word_char = |c: char| c.is_alphanumeric() || c == '_' || c == '\'' || c == '.';
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '-' {
            if chars.get(i + 1) == Some(&'>') {
                out.push(Token { tok: Tok::Sym("->"), col });
                i += 2;
            } else {
                out.push(Token { tok: Tok::Sym("-"), col });
                i += 1;
            }
            continue;
        }
        if let Some(s) = SYMBOLS.iter().find(|s| s.len() == 1 && s.starts_with(c)) {
            out.push(Token { tok: Tok::Sym(s), col });
            i += 1;
            continue;
        }
        if word_char(c) {
            let start = i;
            while i < chars.len() && word_char(chars[i]) {
                i += 1;
            }
            let w: String = chars[start..i].iter().collect();
            let tok = if w.chars().all(|c| c.is_ascii_digit()) { Tok::Int(w.parse().expect("digits")) } else { Tok::Word(w) };
            out.push(Token { tok, col });
            continue;
        }
        return Err(ParseError {
            path: None,
            line: lineno,
            column: col,
            kind: ParseErrorKind::Syntax(format!("unexpected character `{c}`")),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
struct GenInfo {
    index: usize,
    src: usize,
    tgt: usize,
    deg: i64,
}

/// A twisted-object stanza kept until every generator is known:
/// line, column, name, summands `(object, shift)` and δ entries.
type PendingTwObject = (usize, usize, String, Vec<(usize, i64)>, BTreeMap<(usize, usize), SVec>);

struct Parser {
    path: Option<String>,
    field: Option<Field>,
    ring_override: Option<Field>,
    builder: Option<CategoryBuilder>,
    objects: Vec<String>,
    gens: BTreeMap<String, GenInfo>,
    twobj_lines: Vec<PendingTwObject>,
    sequences: Vec<(usize, NamedSequence)>,
    declared_at: BTreeMap<String, usize>,
    object_lines: Vec<usize>,
    has_identity: Vec<bool>,
}

/// A cursor over one line's tokens.
struct Line<'a> {
    toks: &'a [Token],
    pos: usize,
    lineno: usize,
    end_col: usize,
}

impl Line<'_> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }
    fn err_at(&self, col: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { path: None, line: self.lineno, column: col, kind }
    }
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        self.err_at(self.col(), kind)
    }
    fn syntax(&self, what: &str) -> ParseError {
        let found = match self.peek() {
            None => "end of line".to_string(),
            Some(Tok::Word(w)) => format!("`{w}`"),
            Some(Tok::Int(n)) => format!("`{n}`"),
            Some(Tok::Sym(s)) => format!("`{s}`"),
        };
        self.err(ParseErrorKind::Syntax(format!("expected {what}, found {found}")))
    }
    fn sym(&mut self, s: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::Sym(s)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&format!("`{s}`")))
        }
    }
    fn eat(&mut self, s: &'static str) -> bool {
        if self.peek() == Some(&Tok::Sym(s)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn keyword(&mut self, k: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Word(w)) if w == k) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    /// A name, returned with its column.
    fn ident(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let out = (w.clone(), self.col());
                self.pos += 1;
                Ok(out)
            }
            _ => Err(self.syntax(what)),
        }
    }
    fn int(&mut self) -> Result<BigInt, ParseError> {
        let neg = self.eat("-");
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(if neg { -n } else { n })
            }
            _ => Err(self.syntax("an integer")),
        }
    }
    fn small_int(&mut self) -> Result<i64, ParseError> {
        let col = self.col();
        let n = self.int()?;
        i64::try_from(n).map_err(|_| self.err_at(col, ParseErrorKind::Invalid("integer out of range".into())))
    }
    fn done(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            Err(self.syntax("end of line"))
        } else {
            Ok(())
        }
    }
}

impl Parser {
    fn field(&self, line: &Line) -> Result<Field, ParseError> {
        self.field.ok_or_else(|| line.err_at(1, ParseErrorKind::Invalid("the file must start with a `ring` line".into())))
    }

    fn object(&self, line: &Line, name: &str, col: usize) -> Result<usize, ParseError> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| line.err_at(col, ParseErrorKind::Undeclared(format!("object `{name}`"))))
    }

    fn gen(&self, line: &Line, name: &str, col: usize) -> Result<GenInfo, ParseError> {
        self.gens
            .get(name)
            .cloned()
            .ok_or_else(|| line.err_at(col, ParseErrorKind::Undeclared(format!("generator `{name}`"))))
    }

    fn declare(&mut self, line: &Line, name: &str, col: usize, what: &str) -> Result<(), ParseError> {
        if self.declared_at.contains_key(name) {
            return Err(line.err_at(col, ParseErrorKind::Duplicate(format!("{what} `{name}`"))));
        }
        self.declared_at.insert(name.to_string(), line.lineno);
        Ok(())
    }

    /// `0` or `c*g (± c*g)*`; a bare generator means coefficient 1. Every
    /// term must have the expected ends and degree when those are given.
    fn lincomb(&self, line: &mut Line, expect: Option<(usize, usize, i64)>) -> Result<SVec, ParseError> {
        let field = self.field(line)?;
        if matches!(line.peek(), Some(Tok::Int(n)) if *n == BigInt::from(0))
            && !matches!(line.toks.get(line.pos + 1).map(|t| &t.tok), Some(Tok::Sym("*")) | Some(Tok::Sym("/")))
        {
            line.pos += 1;
            return Ok(SVec::new());
        }
        let mut terms: BTreeMap<usize, Scalar> = BTreeMap::new();
        let mut first = true;
        loop {
            let neg = if first {
                line.eat("-")
            } else if line.eat("+") {
                false
            } else if line.eat("-") {
                true
            } else {
                break;
            };
            first = false;
            let coef = if matches!(line.peek(), Some(Tok::Int(_))) {
                let col = line.col();
                let num = line.int()?;
                let den = if line.eat("/") { line.int()? } else { BigInt::from(1) };
                line.sym("*")?;
                field.from_ratio(&num, &den).map_err(|e| line.err_at(col, ParseErrorKind::Invalid(e.to_string())))?
            } else {
                field.one()
            };
            let coef = if neg { field.neg(&coef) } else { coef };
            let (name, col) = line.ident("a generator")?;
            let g = self.gen(line, &name, col)?;
            if let Some((src, tgt, deg)) = expect {
                if g.src != src || g.tgt != tgt {
                    return Err(line.err_at(
                        col,
                        ParseErrorKind::DegreeMismatch(format!(
                            "`{name}` goes {} -> {}, expected {} -> {}",
                            self.objects[g.src], self.objects[g.tgt], self.objects[src], self.objects[tgt]
                        )),
                    ));
                }
                if g.deg != deg {
                    return Err(line.err_at(
                        col,
                        ParseErrorKind::DegreeMismatch(format!("`{name}` has degree {}, expected {deg}", g.deg)),
                    ));
                }
            }
            let cur = terms.remove(&g.index).unwrap_or_else(|| field.zero());
            let sum = field.add(&cur, &coef);
            if !field.is_zero(&sum) {
                terms.insert(g.index, sum);
            }
        }
        if first {
            return Err(line.syntax("a linear combination"));
        }
        Ok(terms.into_iter().collect())
    }

    fn statement(&mut self, line: &mut Line) -> Result<(), ParseError> {
        let (kw, kw_col) = line.ident("a keyword")?;
        match kw.as_str() {
            "ring" => {
                if self.field.is_some() {
                    return Err(line.err_at(kw_col, ParseErrorKind::Duplicate("`ring` line".into())));
                }
                let field = if line.keyword("Q") {
                    Field::Rationals
                } else if line.keyword("F") {
                    let col = line.col();
                    let p = line.int()?;
                    let p32 = u32::try_from(p.clone()).ok();
                    p32.and_then(|p| Field::prime(p).ok())
                        .ok_or_else(|| line.err_at(col, ParseErrorKind::NonPrime(p.to_string())))?
                } else {
                    return Err(line.syntax("`Q` or `F <p>`"));
                };
                line.done()?;
                let field = self.ring_override.unwrap_or(field);
                self.field = Some(field);
                self.builder = Some(CategoryBuilder::new(field));
            }
            "object" => {
                self.field(line)?;
                let (name, col) = line.ident("an object name")?;
                line.done()?;
                self.declare(line, &name, col, "object")?;
                let b = self.builder.as_mut().expect("ring seen");
                b.object(&name).map_err(|e| line.err_at(col, ParseErrorKind::Invalid(e.to_string())))?;
                self.objects.push(name);
                self.object_lines.push(line.lineno);
                self.has_identity.push(false);
            }
            "gen" => {
                self.field(line)?;
                let (name, col) = line.ident("a generator name")?;
                line.sym(":")?;
                let (src, scol) = line.ident("a source object")?;
                line.sym("->")?;
                let (tgt, tcol) = line.ident("a target object")?;
                if !line.keyword("deg") {
                    return Err(line.syntax("`deg`"));
                }
                let deg = line.small_int()?;
                line.done()?;
                let (s, t) = (self.object(line, &src, scol)?, self.object(line, &tgt, tcol)?);
                self.declare(line, &name, col, "generator")?;
                let b = self.builder.as_mut().expect("ring seen");
                let index = b.gen(&name, &src, &tgt, deg).map_err(|e| line.err_at(col, ParseErrorKind::Invalid(e.to_string())))?;
                self.gens.insert(name.clone(), GenInfo { index, src: s, tgt: t, deg });
            }
            "id" => {
                self.field(line)?;
                let (obj, ocol) = line.ident("an object")?;
                line.sym("=")?;
                let (g, gcol) = line.ident("a generator")?;
                line.done()?;
                let o = self.object(line, &obj, ocol)?;
                let info = self.gen(line, &g, gcol)?;
                if info.src != o || info.tgt != o || info.deg != 0 {
                    return Err(line.err_at(
                        gcol,
                        ParseErrorKind::DegreeMismatch(format!("the identity of `{obj}` must be a degree-0 endomorphism")),
                    ));
                }
                if self.has_identity[o] {
                    return Err(line.err_at(ocol, ParseErrorKind::Duplicate(format!("identity for `{obj}`"))));
                }
                self.has_identity[o] = true;
                let b = self.builder.as_mut().expect("ring seen");
                b.identity(&obj, &g).map_err(|e| line.err_at(gcol, ParseErrorKind::Invalid(e.to_string())))?;
            }
            "d" => {
                self.field(line)?;
                let (g, gcol) = line.ident("a generator")?;
                line.sym("=")?;
                let info = self.gen(line, &g, gcol)?;
                let value = self.lincomb(line, Some((info.src, info.tgt, info.deg + 1)))?;
                line.done()?;
                self.product(line, kw_col, vec![(g, gcol)], value)?;
            }
            w if w.starts_with("mu") && w.len() > 2 && w[2..].chars().all(|c| c.is_ascii_digit()) => {
                self.field(line)?;
                let k: usize = w[2..].parse().map_err(|_| line.err_at(kw_col, ParseErrorKind::Syntax("bad arity".into())))?;
                if k == 0 {
                    return Err(line.err_at(kw_col, ParseErrorKind::Invalid("`mu0` has no meaning here".into())));
                }
                line.sym("(")?;
                let mut args = vec![line.ident("a generator")?];
                while line.eat(",") {
                    args.push(line.ident("a generator")?);
                }
                line.sym(")")?;
                if args.len() != k {
                    return Err(line.err_at(kw_col, ParseErrorKind::Invalid(format!("`{w}` takes {k} arguments, got {}", args.len()))));
                }
                line.sym("=")?;
                let infos: Vec<GenInfo> = args.iter().map(|(n, c)| self.gen(line, n, *c)).collect::<Result<_, _>>()?;
                // outermost first: consecutive arguments must compose
                for i in 0..k - 1 {
                    if infos[i].src != infos[i + 1].tgt {
                        return Err(line.err_at(
                            args[i].1,
                            ParseErrorKind::Invalid(format!("`{}` does not compose after `{}`", args[i].0, args[i + 1].0)),
                        ));
                    }
                }
                let deg = infos.iter().map(|g| g.deg).sum::<i64>() + 2 - k as i64;
                let value = self.lincomb(line, Some((infos[k - 1].src, infos[0].tgt, deg)))?;
                line.done()?;
                self.product(line, kw_col, args, value)?;
            }
            "twobj" => {
                self.field(line)?;
                let (name, col) = line.ident("a twisted object name")?;
                line.sym("=")?;
                line.sym("[")?;
                let mut summands = Vec::new();
                loop {
                    let (o, ocol) = line.ident("an object")?;
                    let o = self.object(line, &o, ocol)?;
                    let shift = if line.eat("[") {
                        let s = line.small_int()?;
                        line.sym("]")?;
                        s
                    } else {
                        0
                    };
                    summands.push((o, shift));
                    if !line.eat(",") {
                        break;
                    }
                }
                line.sym("]")?;
                let mut delta = BTreeMap::new();
                while line.keyword("delta") {
                    let dcol = line.col();
                    line.sym("(")?;
                    let i = line.small_int()?;
                    line.sym(",")?;
                    let j = line.small_int()?;
                    line.sym(")")?;
                    line.sym("=")?;
                    let n = summands.len() as i64;
                    if !(0 <= j && j < i && i < n) {
                        return Err(line.err_at(
                            dcol,
                            ParseErrorKind::Invalid(format!("delta entry ({i},{j}) must satisfy 0 <= j < i < {n}")),
                        ));
                    }
                    let (i, j) = (i as usize, j as usize);
                    let (so, ss) = summands[j];
                    let (to, ts) = summands[i];
                    // δ has degree 1 on the shifted sum, so a base map X → Y of degree 1 - s + t
                    let v = self.lincomb(line, Some((so, to, 1 - ss + ts)))?;
                    if delta.insert((i, j), v).is_some() {
                        return Err(line.err_at(dcol, ParseErrorKind::Duplicate(format!("delta entry ({i},{j})"))));
                    }
                }
                line.done()?;
                self.declare(line, &name, col, "twisted object")?;
                self.twobj_lines.push((line.lineno, col, name, summands, delta));
            }
            "sequence" => {
                self.field(line)?;
                let (name, col) = line.ident("a sequence name")?;
                line.sym("=")?;
                line.sym("[")?;
                let mut objects = Vec::new();
                loop {
                    let (o, ocol) = line.ident("an object")?;
                    objects.push(self.object(line, &o, ocol)?);
                    if !line.eat(",") {
                        break;
                    }
                }
                line.sym("]")?;
                let mut maps = Vec::new();
                if line.keyword("maps") {
                    line.sym("[")?;
                    if !line.eat("]") {
                        loop {
                            let i = maps.len();
                            let mcol = line.col();
                            if i + 1 >= objects.len() {
                                return Err(line.err_at(mcol, ParseErrorKind::Invalid("more maps than gaps between objects".into())));
                            }
                            maps.push(self.lincomb(line, Some((objects[i], objects[i + 1], 0)))?);
                            if !line.eat(",") {
                                break;
                            }
                        }
                        line.sym("]")?;
                    }
                }
                line.done()?;
                if maps.len() + 1 != objects.len() {
                    return Err(line.err_at(
                        col,
                        ParseErrorKind::Invalid(format!("{} objects need {} maps", objects.len(), objects.len() - 1)),
                    ));
                }
                self.declare(line, &name, col, "sequence")?;
                self.sequences.push((line.lineno, NamedSequence { name, sequence: ObjectSequence { objects, maps } }));
            }
            other => return Err(line.err_at(kw_col, ParseErrorKind::Syntax(format!("unknown keyword `{other}`")))),
        }
        Ok(())
    }

    fn product(&mut self, line: &Line, col: usize, args: Vec<(String, usize)>, value: SVec) -> Result<(), ParseError> {
        for (n, c) in &args {
            if self.builder.as_ref().expect("ring seen").find_gen(n).is_err() {
                return Err(line.err_at(*c, ParseErrorKind::Undeclared(format!("generator `{n}`"))));
            }
        }
        let names: Vec<&str> = args.iter().map(|(n, _)| n.as_str()).collect();
        let b = self.builder.as_mut().expect("ring seen");
        b.dg_product(&names, value).map_err(|e| line.err_at(col, ParseErrorKind::Invalid(e.to_string())))
    }
}

/// Parses a category file. `ring_override` replaces the file's `ring` line.
pub fn parse(text: &str, path: Option<&str>, ring_override: Option<Field>) -> Result<CategoryFile, ParseError> {
    let with_path = |mut e: ParseError| {
        e.path = path.map(str::to_string);
        e
    };
    let mut p = Parser {
        path: path.map(str::to_string),
        field: None,
        ring_override,
        builder: None,
        objects: Vec::new(),
        gens: BTreeMap::new(),
        twobj_lines: Vec::new(),
        sequences: Vec::new(),
        declared_at: BTreeMap::new(),
        object_lines: Vec::new(),
        has_identity: Vec::new(),
    };
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        let toks = lex(raw, lineno).map_err(with_path)?;
        if toks.is_empty() {
            continue;
        }
        let mut line = Line { toks: &toks, pos: 0, lineno, end_col: raw.chars().count() + 1 };
        p.statement(&mut line).map_err(with_path)?;
    }
    let at = |line: usize, column: usize, kind: ParseErrorKind| ParseError { path: p.path.clone(), line, column, kind };
    let Some(builder) = p.builder.take() else {
        return Err(at(last_line.max(1), 1, ParseErrorKind::Invalid("missing `ring` line".into())));
    };
    if let Some(o) = p.has_identity.iter().position(|h| !h) {
        return Err(at(
            p.object_lines[o],
            1,
            ParseErrorKind::Invalid(format!("object `{}` has no `id` line", p.objects[o])),
        ));
    }
    let category = builder.build().map_err(|e| at(last_line, 1, ParseErrorKind::Invalid(e.to_string())))?;
    let mut twobjs = Vec::new();
    for (lineno, col, name, summands, delta) in std::mem::take(&mut p.twobj_lines) {
        let obj = TwObject::new(&category, &name, summands, delta)
            .map_err(|e| at(lineno, col, ParseErrorKind::Invalid(e.to_string())))?;
        twobjs.push(obj);
    }
    let sequences = p.sequences.into_iter().map(|(_, s)| s).collect();
    Ok(CategoryFile { path: p.path, category, twobjs, sequences, declared_at: p.declared_at })
}

/// Prints a file that parses back to the same data.
pub fn print(file: &CategoryFile) -> String {
    let cat = &file.category;
    let field = cat.field();
    let name = |g: usize| cat.gen(g).name.clone();
    let mut out = String::new();
    writeln!(out, "ring {field}").unwrap();
    for o in cat.objects() {
        writeln!(out, "object {o}").unwrap();
    }
    for g in cat.gens() {
        writeln!(out, "gen {} : {} -> {} deg {}", g.name, cat.objects()[g.src], cat.objects()[g.tgt], g.deg).unwrap();
    }
    for (o, &u) in cat.units().iter().enumerate() {
        writeln!(out, "id {} = {}", cat.objects()[o], name(u)).unwrap();
    }
    for (args, value) in cat.mu_table() {
        if value.is_empty() {
            continue;
        }
        // back from the stored convention; the sign is its own inverse
        let degs: Vec<i64> = args.iter().map(|&g| cat.gen(g).deg).collect();
        let s = field.sign(dg_to_reduced_parity(&degs));
        let v: SVec = value.iter().map(|(g, c)| (*g, field.mul(&s, c))).collect();
        let rhs = fmt_lincomb(&field, &v, name);
        if args.len() == 1 {
            writeln!(out, "d {} = {rhs}", name(args[0])).unwrap();
        } else {
            let names: Vec<String> = args.iter().map(|&g| name(g)).collect();
            writeln!(out, "mu{}({}) = {rhs}", args.len(), names.join(", ")).unwrap();
        }
    }
    for t in &file.twobjs {
        let summands: Vec<String> = t.summands.iter().map(|&(o, s)| format!("{}[{s}]", cat.objects()[o])).collect();
        write!(out, "twobj {} = [{}]", t.name, summands.join(", ")).unwrap();
        for ((i, j), v) in &t.delta {
            if !v.is_empty() {
                write!(out, " delta ({i},{j}) = {}", fmt_lincomb(&field, v, name)).unwrap();
            }
        }
        out.push('\n');
    }
    for s in &file.sequences {
        let objs: Vec<&str> = s.sequence.objects.iter().map(|&o| cat.objects()[o].as_str()).collect();
        let maps: Vec<String> = s.sequence.maps.iter().map(|m| fmt_lincomb(&field, m, name)).collect();
        writeln!(out, "sequence {} = [{}] maps [{}]", s.name, objs.join(", "), maps.join(", ")).unwrap();
    }
    out
}

/// The file form of a category with no extra stanzas.
pub fn print_category(cat: &AInfCategory) -> String {
    print(&CategoryFile {
        path: None,
        category: cat.clone(),
        twobjs: Vec::new(),
        sequences: Vec::new(),
        declared_at: BTreeMap::new(),
    })
}
