//! Recursive-descent parser for SL modules.

use crate::diag::{Code, Diagnostic, Span};

use super::ast::*;
use super::lexer::{describe, lex, Kw, Tok, Token};

type PResult<T> = Result<T, Diagnostic>;

/// Parses one source file into a module AST.
///
/// The text is the decoded file contents; byte-level decoding failures are
/// reported by [`parse_module_bytes`].
pub fn parse_module(text: &str, file: &str) -> Result<ModuleAst, Vec<Diagnostic>> {
    let tokens = lex(text, file).map_err(|d| vec![d])?;
    let mut p = Parser { tokens, pos: 0 };
    p.module().map_err(|d| vec![d])
}

pub fn parse_module_bytes(bytes: &[u8], file: &str) -> Result<ModuleAst, Vec<Diagnostic>> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_module(text, file),
        Err(e) => Err(vec![Diagnostic::new(
            Code::Encoding,
            "",
            Span::synthetic(file),
            format!("source is not valid UTF-8 (byte offset {})", e.valid_up_to()),
        )]),
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span.clone()
    }

    fn prev_span(&self) -> Span {
        self.tokens[self.pos.saturating_sub(1)].span.clone()
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, what: &str) -> Diagnostic {
        Diagnostic::new(
            Code::Parse,
            "",
            self.span(),
            format!("expected {what}, found {}", describe(self.peek())),
        )
    }

    fn expect(&mut self, t: Tok) -> PResult<Span> {
        if self.at(&t) {
            Ok(self.bump().span)
        } else {
            Err(self.error(&describe(&t)))
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let span = self.bump().span;
                Ok(Ident { name, span })
            }
            _ => Err(self.error("identifier")),
        }
    }

    fn path(&mut self) -> PResult<Vec<Ident>> {
        let mut path = vec![self.ident()?];
        while self.at(&Tok::Dot) && matches!(self.peek_at(1), Tok::Ident(_)) {
            self.bump();
            path.push(self.ident()?);
        }
        Ok(path)
    }

    fn sep_list<T>(
        &mut self,
        close: &Tok,
        mut item: impl FnMut(&mut Self) -> PResult<T>,
    ) -> PResult<Vec<T>> {
        let mut out = Vec::new();
        if self.at(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if !self.eat(&Tok::Comma) || self.at(close) {
                break;
            }
        }
        Ok(out)
    }

    fn module(&mut self) -> PResult<ModuleAst> {
        let start = self.span();
        if !self.at(&Tok::Kw(Kw::Module)) {
            return Err(Diagnostic::new(Code::Parse, "", start, "expected module header"));
        }
        self.bump();
        let name = self.ident()?;
        let mut imports: Vec<Ident> = Vec::new();
        while self.eat(&Tok::Kw(Kw::Import)) {
            let imp = self.ident()?;
            if imports.iter().any(|i| i.name == imp.name) {
                return Err(Diagnostic::new(
                    Code::Parse,
                    "",
                    imp.span,
                    format!("duplicate import of `{}`", imp.name),
                ));
            }
            imports.push(imp);
        }
        let mut decls = Vec::new();
        while !self.at(&Tok::Eof) {
            decls.push(self.decl()?);
        }
        let end = self.prev_span();
        Ok(ModuleAst { name, imports, decls, span: start.to(&end) })
    }

    fn decl(&mut self) -> PResult<Decl> {
        match self.peek() {
            Tok::Kw(Kw::Concept) => self.concept().map(Decl::Concept),
            Tok::Kw(Kw::Model) => self.model().map(Decl::Model),
            Tok::Kw(Kw::Fn) => self.fun().map(Decl::Fun),
            Tok::Kw(Kw::Data) => self.data().map(Decl::Data),
            Tok::Kw(Kw::Module) => Err(Diagnostic::new(
                Code::Parse,
                "",
                self.span(),
                "only one module header is allowed per file",
            )),
            _ => Err(self.error("declaration")),
        }
    }

    fn ident_list_brackets(&mut self) -> PResult<Vec<Ident>> {
        self.expect(Tok::LBracket)?;
        let xs = self.sep_list(&Tok::RBracket, |p| p.ident())?;
        self.expect(Tok::RBracket)?;
        Ok(xs)
    }

    fn concept(&mut self) -> PResult<ConceptAst> {
        let start = self.bump().span;
        let name = self.ident()?;
        let params = self.ident_list_brackets()?;
        if params.is_empty() {
            return Err(Diagnostic::new(Code::Parse, "", name.span, "a concept needs at least one parameter"));
        }
        let supers = if self.eat(&Tok::Kw(Kw::Where)) { self.constraints()? } else { Vec::new() };
        self.expect(Tok::LBrace)?;
        let mut assoc = Vec::new();
        let mut reqs = Vec::new();
        loop {
            match self.peek() {
                Tok::Kw(Kw::Type) => {
                    self.bump();
                    assoc.push(self.ident()?);
                }
                Tok::Kw(Kw::Fn) => {
                    let s = self.bump().span;
                    let name = self.ident()?;
                    self.expect(Tok::LParen)?;
                    let params = self.sep_list(&Tok::RParen, |p| p.param())?;
                    self.expect(Tok::RParen)?;
                    self.expect(Tok::Arrow)?;
                    let ret = self.ty()?;
                    let span = s.to(ret.span());
                    reqs.push(ReqSig { name, params, ret, span });
                }
                Tok::RBrace => break,
                _ => return Err(self.error("`type`, `fn` or `}`")),
            }
        }
        let end = self.expect(Tok::RBrace)?;
        Ok(ConceptAst { name, params, supers, assoc, reqs, span: start.to(&end) })
    }

    fn model(&mut self) -> PResult<ModelAst> {
        let start = self.bump().span;
        let name = if matches!(self.peek(), Tok::Ident(_)) && self.peek_at(1) == &Tok::Colon {
            let n = self.ident()?;
            self.bump();
            Some(n)
        } else {
            None
        };
        let concept = self.path()?;
        self.expect(Tok::LBracket)?;
        let head = self.sep_list(&Tok::RBracket, |p| p.ty())?;
        self.expect(Tok::RBracket)?;
        let context = if self.eat(&Tok::Kw(Kw::Where)) { self.constraints()? } else { Vec::new() };
        self.expect(Tok::LBrace)?;
        let mut assoc = Vec::new();
        let mut reqs = Vec::new();
        loop {
            match self.peek() {
                Tok::Kw(Kw::Type) => {
                    let s = self.bump().span;
                    let name = self.ident()?;
                    self.expect(Tok::Eq)?;
                    let ty = self.ty()?;
                    let span = s.to(ty.span());
                    assoc.push(AssocBinding { name, ty, span });
                }
                Tok::Kw(Kw::Fn) => {
                    let s = self.bump().span;
                    let name = self.ident()?;
                    self.expect(Tok::LParen)?;
                    let params = self.sep_list(&Tok::RParen, |p| p.lam_param())?;
                    self.expect(Tok::RParen)?;
                    let ret = if self.eat(&Tok::Arrow) { Some(self.ty()?) } else { None };
                    self.expect(Tok::Eq)?;
                    let body = self.expr()?;
                    let span = s.to(body.span());
                    reqs.push(ReqImpl { name, params, ret, body, span });
                }
                Tok::RBrace => break,
                _ => return Err(self.error("`type`, `fn` or `}`")),
            }
        }
        let end = self.expect(Tok::RBrace)?;
        Ok(ModelAst { name, concept, head, context, assoc, reqs, span: start.to(&end) })
    }

    fn fun(&mut self) -> PResult<FunAst> {
        let start = self.bump().span;
        let name = self.ident()?;
        let tparams = if self.at(&Tok::LBracket) { self.ident_list_brackets()? } else { Vec::new() };
        self.expect(Tok::LParen)?;
        let params = self.sep_list(&Tok::RParen, |p| p.param())?;
        self.expect(Tok::RParen)?;
        self.expect(Tok::Arrow)?;
        let ret = self.ty()?;
        let context = if self.eat(&Tok::Kw(Kw::Where)) { self.constraints()? } else { Vec::new() };
        self.expect(Tok::Eq)?;
        let body = self.expr()?;
        let span = start.to(body.span());
        Ok(FunAst { name, tparams, params, ret, context, body, span })
    }

    fn data(&mut self) -> PResult<DataAst> {
        let start = self.bump().span;
        let name = self.ident()?;
        let params = if self.at(&Tok::LBracket) { self.ident_list_brackets()? } else { Vec::new() };
        self.expect(Tok::Eq)?;
        let mut ctors = Vec::new();
        loop {
            let cname = self.ident()?;
            let mut span = cname.span.clone();
            let fields = if self.eat(&Tok::LParen) {
                let fs = self.sep_list(&Tok::RParen, |p| p.ty())?;
                span = span.to(&self.expect(Tok::RParen)?);
                fs
            } else {
                Vec::new()
            };
            ctors.push(CtorAst { name: cname, fields, span });
            if !self.eat(&Tok::Bar) {
                break;
            }
        }
        let span = start.to(&ctors.last().expect("at least one constructor").span);
        Ok(DataAst { name, params, ctors, span })
    }

    fn param(&mut self) -> PResult<Param> {
        let name = self.ident()?;
        self.expect(Tok::Colon)?;
        let ty = self.ty()?;
        Ok(Param { name, ty })
    }

    fn lam_param(&mut self) -> PResult<LamParam> {
        let name = self.ident()?;
        let ty = if self.eat(&Tok::Colon) { Some(self.ty()?) } else { None };
        Ok(LamParam { name, ty })
    }

    fn constraints(&mut self) -> PResult<Vec<ConstraintAst>> {
        let mut out = vec![self.constraint()?];
        while self.eat(&Tok::Comma) {
            out.push(self.constraint()?);
        }
        Ok(out)
    }

    fn constraint(&mut self) -> PResult<ConstraintAst> {
        let lhs = self.ty()?;
        if self.eat(&Tok::EqEq) {
            let rhs = self.ty()?;
            let span = lhs.span().to(rhs.span());
            return Ok(ConstraintAst::Eq { lhs, rhs, span });
        }
        match lhs {
            TypeExpr::Name { path, args, span } if !args.is_empty() => {
                Ok(ConstraintAst::Conf { concept: path, args, span })
            }
            other => Err(Diagnostic::new(
                Code::Parse,
                "",
                other.span().clone(),
                "expected a constraint `Concept[T, ...]` or `T == U`",
            )),
        }
    }

    fn ty(&mut self) -> PResult<TypeExpr> {
        let start = self.span();
        if self.eat(&Tok::LParen) {
            let elems = self.sep_list(&Tok::RParen, |p| p.ty())?;
            let close = self.expect(Tok::RParen)?;
            if self.eat(&Tok::Arrow) {
                let ret = self.ty()?;
                let span = start.to(ret.span());
                return Ok(TypeExpr::Fn { params: elems, ret: Box::new(ret), span });
            }
            let mut t = if elems.len() == 1 {
                elems.into_iter().next().expect("one element")
            } else {
                TypeExpr::Tuple { elems, span: start.to(&close) }
            };
            while self.at(&Tok::Dot) {
                self.bump();
                let member = self.ident()?;
                let span = start.to(&member.span);
                t = TypeExpr::Proj { base: Box::new(t), member, span };
            }
            return Ok(t);
        }
        let path = self.path()?;
        let mut span = path[0].span.to(&path[path.len() - 1].span);
        let args = if self.eat(&Tok::LBracket) {
            let args = self.sep_list(&Tok::RBracket, |p| p.ty())?;
            span = span.to(&self.expect(Tok::RBracket)?);
            args
        } else {
            Vec::new()
        };
        let mut t = TypeExpr::Name { path, args, span };
        while self.at(&Tok::Dot) {
            self.bump();
            let member = self.ident()?;
            let span = start.to(&member.span);
            t = TypeExpr::Proj { base: Box::new(t), member, span };
        }
        Ok(t)
    }

    fn expr(&mut self) -> PResult<Expr> {
        let start = self.span();
        match self.peek() {
            Tok::Kw(Kw::If) => {
                self.bump();
                let cond = self.expr()?;
                self.expect(Tok::Kw(Kw::Then))?;
                let then = self.expr()?;
                self.expect(Tok::Kw(Kw::Else))?;
                let els = self.expr()?;
                let span = start.to(els.span());
                Ok(Expr::If { cond: Box::new(cond), then: Box::new(then), els: Box::new(els), span })
            }
            Tok::Kw(Kw::Let) => {
                self.bump();
                let name = self.ident()?;
                let ty = if self.eat(&Tok::Colon) { Some(self.ty()?) } else { None };
                self.expect(Tok::Eq)?;
                let value = self.expr()?;
                self.expect(Tok::Kw(Kw::In))?;
                let body = self.expr()?;
                let span = start.to(body.span());
                Ok(Expr::Let { name, ty, value: Box::new(value), body: Box::new(body), span })
            }
            Tok::Kw(Kw::Match) => {
                self.bump();
                let scrutinee = self.expr()?;
                self.expect(Tok::LBrace)?;
                let mut arms = Vec::new();
                while !self.at(&Tok::RBrace) {
                    let pat = self.pat()?;
                    self.expect(Tok::FatArrow)?;
                    let body = self.expr()?;
                    let span = pat.span().to(body.span());
                    arms.push(Arm { pat, body, span });
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                let end = self.expect(Tok::RBrace)?;
                if arms.is_empty() {
                    return Err(Diagnostic::new(Code::Parse, "", start.to(&end), "match needs at least one arm"));
                }
                Ok(Expr::Match { scrutinee: Box::new(scrutinee), arms, span: start.to(&end) })
            }
            Tok::Backslash => {
                self.bump();
                let params = if self.eat(&Tok::LParen) {
                    let ps = self.sep_list(&Tok::RParen, |p| p.lam_param())?;
                    self.expect(Tok::RParen)?;
                    ps
                } else {
                    vec![self.lam_param()?]
                };
                self.expect(Tok::Arrow)?;
                let body = self.expr()?;
                let span = start.to(body.span());
                Ok(Expr::Lambda { params, body: Box::new(body), span })
            }
            _ => self.postfix(),
        }
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut e = self.primary()?;
        loop {
            if self.at(&Tok::LParen) {
                self.bump();
                let args = self.sep_list(&Tok::RParen, |p| p.expr())?;
                let end = self.expect(Tok::RParen)?;
                let span = e.span().to(&end);
                e = Expr::Call { func: Box::new(e), args, span };
            } else if self.at(&Tok::Colon) {
                self.bump();
                let ty = self.ty()?;
                let span = e.span().to(ty.span());
                e = Expr::Annot { expr: Box::new(e), ty, span };
            } else {
                return Ok(e);
            }
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Int(value, width) => {
                self.bump();
                Ok(Expr::Lit { lit: Lit::Int { value, width }, span: start })
            }
            Tok::Float(s) => {
                self.bump();
                Ok(Expr::Lit { lit: Lit::Float(s), span: start })
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Expr::Lit { lit: Lit::Str(s), span: start })
            }
            Tok::Kw(Kw::True) | Tok::Kw(Kw::False) => {
                let b = self.at(&Tok::Kw(Kw::True));
                self.bump();
                Ok(Expr::Lit { lit: Lit::Bool(b), span: start })
            }
            Tok::LParen => {
                self.bump();
                if self.at(&Tok::RParen) {
                    let end = self.bump().span;
                    return Ok(Expr::Lit { lit: Lit::Unit, span: start.to(&end) });
                }
                let first = self.expr()?;
                if self.eat(&Tok::Comma) {
                    let mut elems = vec![first];
                    elems.extend(self.sep_list(&Tok::RParen, |p| p.expr())?);
                    let end = self.expect(Tok::RParen)?;
                    return Ok(Expr::Tuple { elems, span: start.to(&end) });
                }
                self.expect(Tok::RParen)?;
                Ok(first)
            }
            Tok::Ident(_) => {
                let path = self.path()?;
                let span = path[0].span.to(&path[path.len() - 1].span);
                Ok(Expr::Var { path, span })
            }
            _ => Err(self.error("expression")),
        }
    }

    fn pat(&mut self) -> PResult<Pat> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Underscore => {
                self.bump();
                Ok(Pat::Wild { span: start })
            }
            Tok::Int(value, width) => {
                self.bump();
                Ok(Pat::Lit { lit: Lit::Int { value, width }, span: start })
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Pat::Lit { lit: Lit::Str(s), span: start })
            }
            Tok::Kw(Kw::True) | Tok::Kw(Kw::False) => {
                let b = self.at(&Tok::Kw(Kw::True));
                self.bump();
                Ok(Pat::Lit { lit: Lit::Bool(b), span: start })
            }
            Tok::LParen => {
                self.bump();
                if self.at(&Tok::RParen) {
                    let end = self.bump().span;
                    return Ok(Pat::Lit { lit: Lit::Unit, span: start.to(&end) });
                }
                let elems = self.sep_list(&Tok::RParen, |p| p.pat())?;
                let end = self.expect(Tok::RParen)?;
                if elems.len() == 1 {
                    Ok(elems.into_iter().next().expect("one element"))
                } else {
                    Ok(Pat::Tuple { elems, span: start.to(&end) })
                }
            }
            Tok::Ident(_) => {
                let name = self.ident()?;
                if self.eat(&Tok::LParen) {
                    let args = self.sep_list(&Tok::RParen, |p| p.pat())?;
                    let end = self.expect(Tok::RParen)?;
                    let span = name.span.to(&end);
                    Ok(Pat::Ctor { name, args, span })
                } else {
                    Ok(Pat::Ident { name })
                }
            }
            _ => Err(self.error("pattern")),
        }
    }
}
