use std::sync::Arc;

use crate::dsl::lexer::{lex, Tok, Token};
use crate::dsl::{ErrorKind, ParseError};
use crate::model::{
    AssertionBodyDef, AssertionDef, Branch, Chain, CmpOp, Field, FlowDef, FunctionDef, Guard,
    Ident, InputDef, ModelDef, RawAtom, RawConstraint, RawLiteral, RawTerm, TransferDef,
};
use crate::{SourceSpan, Status};

const KEYWORDS: &[&str] = &[
    "model", "values", "function", "in", "out", "free", "transfer", "flow", "assert", "when",
    "expect", "others", "all", "except", "structure", "implies", "else", "and", "or", "not", "OK",
    "Err", "Lost",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

enum GuardOrTerm {
    Guard(Guard<RawTerm>),
    Term(RawTerm, SourceSpan),
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    pub(crate) fn new(text: &str, file: &str) -> PResult<Self> {
        let file: Arc<str> = Arc::from(file);
        Ok(Parser {
            toks: lex(text, &file)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span.clone()
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        let found = self.peek().describe();
        let message = match expected {
            [] => format!("unexpected {found}"),
            [one] => format!("expected {one}, found {found}"),
            many => format!("expected one of {}, found {found}", many.join(", ")),
        };
        Err(ParseError::new(
            ErrorKind::Syntax,
            self.span(),
            message,
            expected.iter().map(|s| s.to_string()).collect(),
        ))
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            self.error(&[&tok.describe()])
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<Token> {
        if self.at_kw(kw) {
            Ok(self.bump())
        } else {
            self.error(&[&format!("`{kw}`")])
        }
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.at_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.peek() {
            Tok::Ident(s) if !is_keyword(s) => {
                let t = self.bump();
                let Tok::Ident(name) = t.tok else { unreachable!() };
                Ok(Ident::spanned(name, t.span))
            }
            _ => self.error(&["identifier"]),
        }
    }

    fn expect_eof(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error(&["end of input"])
        }
    }

    pub(crate) fn model(&mut self) -> PResult<ModelDef> {
        let mut def = ModelDef {
            name: "unnamed".into(),
            values: Vec::new(),
            functions: Vec::new(),
            flows: Vec::new(),
            assertions: Vec::new(),
        };
        if self.eat_kw("model") {
            def.name = self.ident()?.name;
        }
        let mut saw_values = false;
        loop {
            match self.peek() {
                Tok::Eof => break,
                Tok::Ident(k) if k == "values" => {
                    if saw_values {
                        return Err(ParseError::new(
                            ErrorKind::Semantic,
                            self.span(),
                            "value domain declared twice",
                            Vec::new(),
                        ));
                    }
                    saw_values = true;
                    self.bump();
                    self.expect(Tok::LBrace)?;
                    while *self.peek() != Tok::RBrace {
                        def.values.push(self.ident()?);
                    }
                    self.bump();
                }
                Tok::Ident(k) if k == "function" => {
                    let f = self.function()?;
                    def.functions.push(f);
                }
                Tok::Ident(k) if k == "flow" => {
                    self.bump();
                    let source = self.ident()?;
                    self.expect(Tok::Arrow)?;
                    loop {
                        let target = self.ident()?;
                        def.flows.push(FlowDef {
                            source: source.clone(),
                            target,
                        });
                        if *self.peek() != Tok::Comma {
                            break;
                        }
                        self.bump();
                    }
                }
                Tok::Ident(k) if k == "assert" => {
                    let a = self.assertion()?;
                    def.assertions.push(a);
                }
                _ => return self.error(&["`values`", "`function`", "`flow`", "`assert`"]),
            }
        }
        if !saw_values {
            return Err(ParseError::new(
                ErrorKind::Semantic,
                self.span(),
                "missing `values { ... }` declaration",
                vec!["`values`".into()],
            ));
        }
        Ok(def)
    }

    fn function(&mut self) -> PResult<FunctionDef> {
        self.expect_kw("function")?;
        let name = self.ident()?;
        self.expect(Tok::LBrace)?;
        let mut f = FunctionDef {
            name,
            inputs: Vec::new(),
            outputs: Vec::new(),
            transfers: Vec::new(),
        };
        loop {
            match self.peek() {
                Tok::RBrace => {
                    self.bump();
                    return Ok(f);
                }
                Tok::Ident(k) if k == "in" => {
                    self.bump();
                    let free = self.eat_kw("free");
                    let name = self.ident()?;
                    f.inputs.push(InputDef { name, free });
                }
                Tok::Ident(k) if k == "out" => {
                    self.bump();
                    f.outputs.push(self.ident()?);
                }
                Tok::Ident(k) if k == "transfer" => {
                    self.bump();
                    let port = self.ident()?;
                    self.expect(Tok::Dot)?;
                    let field = self.field()?;
                    self.expect(Tok::Eq)?;
                    let expr = self.chain()?;
                    f.transfers.push(TransferDef { port, field, expr });
                }
                _ => return self.error(&["`in`", "`out`", "`transfer`", "`}`"]),
            }
        }
    }

    fn field(&mut self) -> PResult<Field> {
        match self.peek() {
            Tok::Ident(s) if s == "status" => {
                self.bump();
                Ok(Field::Status)
            }
            Tok::Ident(s) if s == "value" => {
                self.bump();
                Ok(Field::Value)
            }
            _ => self.error(&["`status`", "`value`"]),
        }
    }

    pub(crate) fn chain(&mut self) -> PResult<Chain<RawTerm>> {
        if *self.peek() == Tok::LBrace {
            self.bump();
            let c = self.chain_body()?;
            self.expect(Tok::RBrace)?;
            Ok(c)
        } else {
            self.chain_body()
        }
    }

    fn chain_body(&mut self) -> PResult<Chain<RawTerm>> {
        let mut branches = Vec::new();
        loop {
            let start = self.span();
            match self.guard_or_term()? {
                GuardOrTerm::Guard(guard) => {
                    if !self.at_kw("implies") {
                        return self.error(&["`implies`"]);
                    }
                    self.bump();
                    let (result, _) = self.term()?;
                    branches.push(Branch { guard, result });
                    if !self.eat_kw("else") {
                        return Err(ParseError::new(
                            ErrorKind::Semantic,
                            start,
                            "transfer chain not total: missing final `else`",
                            vec!["`else`".into()],
                        ));
                    }
                }
                GuardOrTerm::Term(otherwise, _) => {
                    return Ok(Chain { branches, otherwise });
                }
            }
        }
    }

    fn guard_or_term(&mut self) -> PResult<GuardOrTerm> {
        let first = self.and_level()?;
        if !self.at_kw("or") {
            return Ok(first);
        }
        let mut parts = vec![self.require_guard(first)?];
        while self.eat_kw("or") {
            let next = self.and_level()?;
            parts.push(self.require_guard(next)?);
        }
        Ok(GuardOrTerm::Guard(Guard::Or(parts)))
    }

    fn and_level(&mut self) -> PResult<GuardOrTerm> {
        let first = self.unary()?;
        if !self.at_kw("and") {
            return Ok(first);
        }
        let mut parts = vec![self.require_guard(first)?];
        while self.eat_kw("and") {
            let next = self.unary()?;
            parts.push(self.require_guard(next)?);
        }
        Ok(GuardOrTerm::Guard(Guard::And(parts)))
    }

    fn unary(&mut self) -> PResult<GuardOrTerm> {
        if self.eat_kw("not") {
            let inner = self.unary()?;
            return Ok(GuardOrTerm::Guard(Guard::Not(Box::new(self.require_guard(inner)?))));
        }
        if *self.peek() == Tok::LParen {
            self.bump();
            let inner = self.guard_or_term()?;
            let g = self.require_guard(inner)?;
            self.expect(Tok::RParen)?;
            return Ok(GuardOrTerm::Guard(g));
        }
        let (lhs, span) = self.term()?;
        let op = match self.peek() {
            Tok::Eq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            _ => return Ok(GuardOrTerm::Term(lhs, span)),
        };
        self.bump();
        let (rhs, _) = self.term()?;
        Ok(GuardOrTerm::Guard(Guard::Cmp(lhs, op, rhs)))
    }

    fn require_guard(&self, g: GuardOrTerm) -> PResult<Guard<RawTerm>> {
        match g {
            GuardOrTerm::Guard(g) => Ok(g),
            GuardOrTerm::Term(_, span) => Err(ParseError::new(
                ErrorKind::Syntax,
                span,
                "expected a comparison (`=` or `!=`)",
                vec!["`=`".into(), "`!=`".into()],
            )),
        }
    }

    fn status_kw(&self) -> Option<Status> {
        match self.peek() {
            Tok::Ident(s) => s.parse().ok(),
            _ => None,
        }
    }

    fn term(&mut self) -> PResult<(RawTerm, SourceSpan)> {
        let span = self.span();
        if let Some(s) = self.status_kw() {
            self.bump();
            return Ok((RawTerm::Status(s), span));
        }
        let id = self.ident().or_else(|_| self.error(&["identifier", "`OK`", "`Err`", "`Lost`"]))?;
        if *self.peek() == Tok::Dot {
            self.bump();
            let field = self.field()?;
            Ok((RawTerm::Field(id, field), span))
        } else {
            Ok((RawTerm::Name(id), span))
        }
    }

    fn literal(&mut self) -> PResult<RawLiteral> {
        if let Some(s) = self.status_kw() {
            self.bump();
            return Ok(RawLiteral::Status(s));
        }
        match self.ident() {
            Ok(id) => Ok(RawLiteral::Name(id)),
            Err(_) => self.error(&["`OK`", "`Err`", "`Lost`", "value"]),
        }
    }

    fn atom(&mut self) -> PResult<RawAtom> {
        let target = self.ident()?;
        self.expect(Tok::Dot)?;
        let field = self.field()?;
        let op = match self.peek() {
            Tok::Eq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            _ => return self.error(&["`=`", "`!=`"]),
        };
        self.bump();
        let rhs = self.literal()?;
        Ok(RawAtom {
            target,
            field,
            op,
            rhs,
        })
    }

    pub(crate) fn constraint(&mut self) -> PResult<Vec<RawConstraint>> {
        let mut parts = Vec::new();
        loop {
            let span = self.span();
            if self.eat_kw("others") {
                self.expect_kw("OK")?;
                let mut except = Vec::new();
                if self.eat_kw("except") {
                    except.push(self.ident()?);
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        except.push(self.ident()?);
                    }
                }
                parts.push(RawConstraint::OthersOk { except, span });
            } else if self.eat_kw("all") {
                self.expect_kw("OK")?;
                parts.push(RawConstraint::AllOk { span });
            } else {
                parts.push(RawConstraint::Atom(self.atom()?));
            }
            if !self.eat_kw("and") {
                return Ok(parts);
            }
        }
    }

    pub(crate) fn condition(&mut self) -> PResult<Vec<RawAtom>> {
        let mut atoms = vec![self.atom()?];
        while self.eat_kw("and") {
            atoms.push(self.atom()?);
        }
        Ok(atoms)
    }

    pub(crate) fn assertion(&mut self) -> PResult<AssertionDef> {
        self.expect_kw("assert")?;
        let name = self.ident()?;
        self.expect(Tok::LBrace)?;
        let body = if self.eat_kw("structure") {
            AssertionBodyDef::Structure
        } else {
            let hypothesis = if self.eat_kw("when") {
                self.constraint()?
            } else {
                Vec::new()
            };
            self.expect_kw("expect")?;
            let conclusion = self.condition()?;
            AssertionBodyDef::Implication {
                hypothesis,
                conclusion,
            }
        };
        self.expect(Tok::RBrace)?;
        Ok(AssertionDef { name, body })
    }

    pub(crate) fn finish<T>(&mut self, value: T) -> PResult<T> {
        self.expect_eof()?;
        Ok(value)
    }
}
