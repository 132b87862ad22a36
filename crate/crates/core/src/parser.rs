//! Line-oriented system files.
//!
//! ```text
//! ring x y z
//! field gf 7            # optional, default `field q`
//! order lex x y z       # priority list optional
//! poly x^2*y + z
//! poly g2: x*y*z        # optional label
//! ```
//!
//! A monomial is `[integer] ([*] variable [^ integer])*`. Variables are
//! separated by whitespace or `*`, so `xy` is one identifier while `4x0` is
//! the coefficient 4 times `x0`.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::algebra::{
    AlgebraError, Coefficient, Field, OrderKind, Polynomial, RingContext, Term, TermOrdering,
};

/// A parsed polynomial system together with its ring and ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemFile {
    pub context: Arc<RingContext>,
    pub ordering: TermOrdering,
    pub polys: Vec<Polynomial>,
    pub labels: Vec<Option<String>>,
}

impl SystemFile {
    /// Builds a system, checking the invariants the parser guarantees.
    pub fn new(
        context: Arc<RingContext>,
        ordering: TermOrdering,
        polys: Vec<Polynomial>,
    ) -> Result<Self, AlgebraError> {
        ordering.check_context(&context)?;
        if polys.is_empty() {
            return Err(AlgebraError::InvalidRing("system without polynomials".into()));
        }
        for p in &polys {
            if p.is_zero() {
                return Err(AlgebraError::ZeroPolynomial);
            }
            if **p.context() != *context {
                return Err(AlgebraError::ContextMismatch(
                    "polynomial outside the system ring".into(),
                ));
            }
        }
        let labels = vec![None; polys.len()];
        Ok(SystemFile {
            context,
            ordering,
            polys,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn leading_terms(&self) -> Vec<Term> {
        self.polys
            .iter()
            .map(|p| {
                p.leading_term(&self.ordering)
                    .expect("system polynomials are nonzero")
                    .clone()
            })
            .collect()
    }

    /// Same polynomials under a different ordering.
    pub fn with_ordering(&self, ordering: TermOrdering) -> Result<Self, AlgebraError> {
        ordering.check_context(&self.context)?;
        Ok(SystemFile {
            ordering,
            ..self.clone()
        })
    }

    /// The subsystem made of the given (0-based) indices, in that order.
    pub fn subsystem(&self, indices: &[usize]) -> SystemFile {
        SystemFile {
            context: Arc::clone(&self.context),
            ordering: self.ordering.clone(),
            polys: indices.iter().map(|&k| self.polys[k].clone()).collect(),
            labels: indices.iter().map(|&k| self.labels[k].clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("malformed exponent")]
    MalformedExponent,
    #[error("zero polynomial is not admitted as a system element")]
    ZeroPolynomial,
    #[error("empty polynomial")]
    EmptyPolynomial,
    #[error("duplicate `{0}` declaration")]
    DuplicateDeclaration(&'static str),
    #[error("`{0}` must come after `ring`")]
    MissingRing(&'static str),
    #[error("`{0}` must come before the first `poly`")]
    HeaderAfterPolys(&'static str),
    #[error("missing `order` declaration")]
    MissingOrder,
    #[error("no `ring` declaration")]
    NoRing,
    #[error("system has no polynomials")]
    NoPolynomials,
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("unexpected {0}")]
    Unexpected(String),
    #[error("invalid header: {0}")]
    InvalidHeader(String),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A parse failure with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Colon,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(i) => format!("integer `{i}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Colon => "`:`".into(),
        }
    }
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
    end_col: usize,
}

fn lex(text: &str, line: usize, col0: usize) -> Result<Lexed, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            ':' => Some(Tok::Colon),
            _ => None,
        };
        if let Some(t) = single {
            toks.push((t, col));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            toks.push((Tok::Int(s.parse().expect("digits")), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else {
            return Err(ParseError {
                line,
                column: col,
                kind: ParseErrorKind::Unexpected(format!("character `{c}`")),
            });
        }
    }
    Ok(Lexed {
        toks,
        end_col: col0 + chars.len(),
    })
}

struct ExprParser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    end_col: usize,
    ctx: &'a Arc<RingContext>,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|&(_, c)| c)
            .unwrap_or(self.end_col)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column: self.col(),
            kind,
        }
    }

    fn unexpected(&self) -> ParseError {
        let what = match self.peek() {
            Some(t) => t.describe(),
            None => "end of line".into(),
        };
        self.err(ParseErrorKind::Unexpected(what))
    }

    fn expression(&mut self) -> Result<Vec<(Coefficient, Term)>, ParseError> {
        if self.peek().is_none() {
            return Err(self.err(ParseErrorKind::EmptyPolynomial));
        }
        let mut out = Vec::new();
        let mut negative = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let (mut c, t) = self.monomial()?;
            if negative {
                c = -&c;
            }
            out.push((c, t));
            match self.peek() {
                None => return Ok(out),
                Some(Tok::Plus) => negative = false,
                Some(Tok::Minus) => negative = true,
                Some(_) => return Err(self.unexpected()),
            }
            self.pos += 1;
        }
    }

    fn monomial(&mut self) -> Result<(Coefficient, Term), ParseError> {
        let field = self.ctx.field();
        let mut coeff = None;
        if let Some(Tok::Int(i)) = self.peek() {
            coeff = Some(field.from_bigint(i));
            self.pos += 1;
        }
        let mut exps = vec![0u32; self.ctx.n()];
        let mut any_var = false;
        loop {
            let starred = matches!(self.peek(), Some(Tok::Star));
            if starred {
                if coeff.is_none() && !any_var {
                    return Err(self.unexpected());
                }
                self.pos += 1;
            }
            let name = match self.peek() {
                Some(Tok::Ident(name)) => name.clone(),
                _ if starred => return Err(self.unexpected()),
                _ => break,
            };
            let var = self
                .ctx
                .index_of(&name)
                .ok_or_else(|| self.err(ParseErrorKind::UnknownVariable(name.clone())))?;
            self.pos += 1;
            let mut power = 1u32;
            if matches!(self.peek(), Some(Tok::Caret)) {
                self.pos += 1;
                power = match self.peek() {
                    Some(Tok::Int(i)) => u32::try_from(i)
                        .map_err(|_| self.err(ParseErrorKind::MalformedExponent))?,
                    _ => return Err(self.err(ParseErrorKind::MalformedExponent)),
                };
                self.pos += 1;
                if matches!(self.peek(), Some(Tok::Caret)) {
                    return Err(self.err(ParseErrorKind::MalformedExponent));
                }
            }
            exps[var] = exps[var]
                .checked_add(power)
                .ok_or_else(|| self.err(ParseErrorKind::MalformedExponent))?;
            any_var = true;
        }
        if coeff.is_none() && !any_var {
            return Err(self.unexpected());
        }
        Ok((coeff.unwrap_or_else(|| field.one()), Term::from_exponents(exps)))
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(k) => &line[..k],
        None => line,
    }
}

struct Header {
    ctx: Option<Arc<RingContext>>,
    names: Vec<String>,
    field: Option<Field>,
    order: Option<(OrderKind, Option<Vec<String>>)>,
}

fn header_err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

/// Parses a system file.
pub fn parse_system(text: &str) -> Result<SystemFile, ParseError> {
    let mut header = Header {
        ctx: None,
        names: Vec::new(),
        field: None,
        order: None,
    };
    let mut ordering: Option<TermOrdering> = None;
    let mut polys = Vec::new();
    let mut labels = Vec::new();
    let mut last_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = strip_comment(raw);
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = content.chars().count() - trimmed.chars().count();
        let keyword: String = trimmed.chars().take_while(|c| !c.is_whitespace()).collect();
        let rest = &trimmed[keyword.len()..];
        let rest_col = indent + keyword.chars().count() + 1;
        let kw_col = indent + 1;
        let words: Vec<&str> = rest.split_whitespace().collect();

        match keyword.as_str() {
            "ring" => {
                if header.ctx.is_some() {
                    return Err(header_err(
                        line_no,
                        kw_col,
                        ParseErrorKind::DuplicateDeclaration("ring"),
                    ));
                }
                let lexed = lex(rest, line_no, rest_col)?;
                let mut names = Vec::new();
                for (tok, col) in lexed.toks {
                    match tok {
                        Tok::Ident(n) => names.push(n),
                        other => {
                            return Err(header_err(
                                line_no,
                                col,
                                ParseErrorKind::Unexpected(other.describe()),
                            ))
                        }
                    }
                }
                // Field may still change, so only validate names here.
                let ctx = RingContext::new(names.clone())
                    .map_err(|e| header_err(line_no, rest_col, e.into()))?;
                header.ctx = Some(Arc::new(ctx));
                header.names = names;
            }
            "field" => {
                if header.ctx.is_none() {
                    return Err(header_err(line_no, kw_col, ParseErrorKind::MissingRing("field")));
                }
                if !polys.is_empty() {
                    return Err(header_err(
                        line_no,
                        kw_col,
                        ParseErrorKind::HeaderAfterPolys("field"),
                    ));
                }
                if header.field.is_some() {
                    return Err(header_err(
                        line_no,
                        kw_col,
                        ParseErrorKind::DuplicateDeclaration("field"),
                    ));
                }
                let field = match words.as_slice() {
                    ["q"] => Field::Rational,
                    ["gf", p] => {
                        let p: u64 = p.parse().map_err(|_| {
                            header_err(
                                line_no,
                                rest_col,
                                ParseErrorKind::InvalidHeader(format!("bad modulus `{p}`")),
                            )
                        })?;
                        Field::prime(p).map_err(|e| header_err(line_no, rest_col, e.into()))?
                    }
                    _ => {
                        return Err(header_err(
                            line_no,
                            rest_col,
                            ParseErrorKind::InvalidHeader(
                                "expected `field q` or `field gf <prime>`".into(),
                            ),
                        ))
                    }
                };
                header.field = Some(field);
            }
            "order" => {
                if header.ctx.is_none() {
                    return Err(header_err(line_no, kw_col, ParseErrorKind::MissingRing("order")));
                }
                if !polys.is_empty() {
                    return Err(header_err(
                        line_no,
                        kw_col,
                        ParseErrorKind::HeaderAfterPolys("order"),
                    ));
                }
                if header.order.is_some() {
                    return Err(header_err(
                        line_no,
                        kw_col,
                        ParseErrorKind::DuplicateDeclaration("order"),
                    ));
                }
                let Some((kind, names)) = words.split_first() else {
                    return Err(header_err(
                        line_no,
                        rest_col,
                        ParseErrorKind::InvalidHeader("missing ordering kind".into()),
                    ));
                };
                let kind: OrderKind = kind
                    .parse()
                    .map_err(|e: AlgebraError| header_err(line_no, rest_col, e.into()))?;
                let prio = if names.is_empty() {
                    None
                } else {
                    Some(names.iter().map(|s| s.to_string()).collect())
                };
                header.order = Some((kind, prio));
            }
            "poly" => {
                if header.ctx.is_none() {
                    return Err(header_err(line_no, kw_col, ParseErrorKind::MissingRing("poly")));
                }
                if ordering.is_none() {
                    let (ctx, ord) = finish_header(&mut header, line_no)?;
                    header.ctx = Some(ctx);
                    ordering = Some(ord);
                }
                let ctx = header.ctx.as_ref().expect("ring checked above");
                let lexed = lex(rest, line_no, rest_col)?;
                let mut toks = lexed.toks.as_slice();
                let mut label = None;
                if let [(Tok::Ident(name), _), (Tok::Colon, _), tail @ ..] = toks {
                    label = Some(name.clone());
                    toks = tail;
                }
                let mut parser = ExprParser {
                    toks,
                    pos: 0,
                    line: line_no,
                    end_col: lexed.end_col,
                    ctx,
                };
                let items = parser.expression()?;
                let p = Polynomial::from_terms(ctx, items)
                    .map_err(|e| header_err(line_no, rest_col, e.into()))?;
                if p.is_zero() {
                    return Err(header_err(line_no, rest_col, ParseErrorKind::ZeroPolynomial));
                }
                polys.push(p);
                labels.push(label);
            }
            other => {
                return Err(header_err(
                    line_no,
                    kw_col,
                    ParseErrorKind::UnknownDirective(other.to_string()),
                ))
            }
        }
    }

    if header.ctx.is_none() {
        return Err(header_err(1, 1, ParseErrorKind::NoRing));
    }
    if header.order.is_none() {
        return Err(header_err(last_line, 1, ParseErrorKind::MissingOrder));
    }
    let Some(ordering) = ordering else {
        return Err(header_err(last_line, 1, ParseErrorKind::NoPolynomials));
    };
    Ok(SystemFile {
        context: header.ctx.expect("ring present"),
        ordering,
        polys,
        labels,
    })
}

fn finish_header(
    header: &mut Header,
    line_no: usize,
) -> Result<(Arc<RingContext>, TermOrdering), ParseError> {
    let field = header.field.unwrap_or(Field::Rational);
    let ctx = Arc::new(
        RingContext::with_field(header.names.clone(), field)
            .map_err(|e| header_err(line_no, 1, e.into()))?,
    );
    let Some((kind, prio)) = header.order.take() else {
        return Err(header_err(line_no, 1, ParseErrorKind::MissingOrder));
    };
    let ord = match &prio {
        None => TermOrdering::new(kind, ctx.n()),
        Some(names) => {
            let mut idx = Vec::with_capacity(names.len());
            for n in names {
                idx.push(
                    ctx.index_of(n)
                        .ok_or_else(|| header_err(line_no, 1, ParseErrorKind::UnknownVariable(n.clone())))?,
                );
            }
            if idx.len() != ctx.n() {
                return Err(header_err(
                    line_no,
                    1,
                    ParseErrorKind::InvalidHeader(
                        "order priority must list every ring variable once".into(),
                    ),
                ));
            }
            TermOrdering::with_priority(kind, idx).map_err(|e| header_err(line_no, 1, e.into()))?
        }
    };
    header.order = Some((kind, prio));
    Ok((ctx, ord))
}

/// Renders a system in canonical form; `parse_system` reads it back exactly.
pub fn serialize_system(s: &SystemFile) -> String {
    let ctx = &s.context;
    let mut out = String::new();
    writeln!(out, "ring {}", ctx.names().join(" ")).unwrap();
    if let Field::Prime(p) = ctx.field() {
        writeln!(out, "field gf {p}").unwrap();
    }
    let prio: Vec<&str> = s.ordering.priority().iter().map(|&v| ctx.name(v)).collect();
    writeln!(out, "order {} {}", s.ordering.kind(), prio.join(" ")).unwrap();
    for (p, label) in s.polys.iter().zip(&s.labels) {
        match label {
            Some(l) => writeln!(out, "poly {l}: {}", p.display(&s.ordering)).unwrap(),
            None => writeln!(out, "poly {}", p.display(&s.ordering)).unwrap(),
        }
    }
    out
}

/// Parses a single expression in an existing ring (used by factor sidecars).
pub fn parse_polynomial(ctx: &Arc<RingContext>, text: &str) -> Result<Polynomial, ParseError> {
    let lexed = lex(text, 1, 1)?;
    let mut parser = ExprParser {
        toks: &lexed.toks,
        pos: 0,
        line: 1,
        end_col: lexed.end_col,
        ctx,
    };
    let items = parser.expression()?;
    Polynomial::from_terms(ctx, items).map_err(|e| ParseError {
        line: 1,
        column: 1,
        kind: e.into(),
    })
}

/// A known common factor of the endpoints of a chain of system elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorHint {
    /// 0-based system indices.
    pub chain: Vec<usize>,
    pub factor: Polynomial,
}

/// Parses a factor sidecar: lines `chain 1 2 3 : <polynomial>` with 1-based
/// indices into `system`; `#` starts a comment.
pub fn parse_factor_hints(system: &SystemFile, text: &str) -> Result<Vec<FactorHint>, ParseError> {
    let mut hints = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let start = line.len() - trimmed.len() + 1;
        let err = |column: usize, msg: String| ParseError {
            line: line_no,
            column,
            kind: ParseErrorKind::InvalidChain(msg),
        };
        let Some(rest) = trimmed.strip_prefix("chain") else {
            let word = trimmed.split_whitespace().next().unwrap_or_default();
            return Err(ParseError {
                line: line_no,
                column: start,
                kind: ParseErrorKind::UnknownDirective(word.to_string()),
            });
        };
        let Some(colon) = rest.find(':') else {
            return Err(err(start, "missing `:` before the factor".into()));
        };
        let mut chain = Vec::new();
        for tok in rest[..colon].split_whitespace() {
            match tok.parse::<usize>() {
                Ok(v) if v >= 1 && v <= system.len() => chain.push(v - 1),
                _ => return Err(err(start, format!("index `{tok}` is not in 1..={}", system.len()))),
            }
        }
        if chain.len() < 2 {
            return Err(err(start, "a chain needs at least two indices".into()));
        }
        let expr_col = start + "chain".len() + colon + 1;
        let lexed = lex(&rest[colon + 1..], line_no, expr_col)?;
        let mut parser = ExprParser {
            toks: &lexed.toks,
            pos: 0,
            line: line_no,
            end_col: lexed.end_col,
            ctx: &system.context,
        };
        let items = parser.expression()?;
        let factor = Polynomial::from_terms(&system.context, items).map_err(|e| ParseError {
            line: line_no,
            column: expr_col,
            kind: e.into(),
        })?;
        hints.push(FactorHint { chain, factor });
    }
    Ok(hints)
}
