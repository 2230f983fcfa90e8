//! Recursive-descent parser with name resolution in the same pass: names
//! must be defined before use, so a single left-to-right scan suffices.

use std::collections::{BTreeMap, HashMap};

use gradcalc_core::lifts::LiftContext;
use gradcalc_core::{BlockSymmetry, Chart, Rational, Symmetry, Var};
use num_traits::Zero;

use crate::ast::{BracketKind, Command, DeclKind, Expr, OracleKind, Script, Stmt, StmtKind, CHECKS};
use crate::diag::{codes, Diagnostic};
use crate::lexer::{tokenize, Tok, Token};

type PResult<T> = Result<T, Diagnostic>;

pub fn parse(src: &str) -> PResult<Script> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        src,
        toks,
        pos: 0,
        charts: Vec::new(),
        tensors: HashMap::new(),
        contexts: Vec::new(),
    };
    let mut stmts = Vec::new();
    loop {
        while p.peek() == &Tok::Newline {
            p.pos += 1;
        }
        if p.peek() == &Tok::Eof {
            break;
        }
        stmts.push(p.statement()?);
    }
    Ok(Script {
        stmts,
        contexts: p.contexts,
    })
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
    charts: Vec<(String, Chart)>,
    /// Tensor name to the chart it lives on.
    tensors: HashMap<String, Chart>,
    contexts: Vec<LiftContext>,
}

/// `key=value` options of a command.
type Options = BTreeMap<String, (i64, Token)>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn token(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, t: &Token, code: &'static str, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::new(code, msg, t.line, t.column)
    }

    fn error(&self, code: &'static str, msg: impl Into<String>) -> Diagnostic {
        self.error_at(self.token(), code, msg)
    }

    fn expected(&self, what: &str) -> Diagnostic {
        self.error(codes::EXPECTED, format!("expected {what}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.expected(&tok.describe()))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Token)> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((s, self.bump())),
            _ => Err(self.expected(what)),
        }
    }

    /// An identifier possibly joined with adjacent `-word` parts, as in
    /// `lift-connection`.
    fn word(&mut self, what: &str) -> PResult<(String, Token)> {
        let (mut s, first) = self.ident(what)?;
        let mut end = first.end;
        while self.peek() == &Tok::Minus && self.token().start == end {
            let next = &self.toks[self.pos + 1];
            match &next.tok {
                Tok::Ident(w) if next.start == end + 1 => {
                    s.push('-');
                    s.push_str(w);
                    end = next.end;
                    self.pos += 2;
                }
                _ => break,
            }
        }
        Ok((s, first))
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => Err(self.expected(&format!("`{kw}`"))),
        }
    }

    fn number(&mut self) -> PResult<(String, Token)> {
        match self.peek().clone() {
            Tok::Num(s) => Ok((s, self.bump())),
            _ => Err(self.expected("a number")),
        }
    }

    fn signed_int(&mut self) -> PResult<i64> {
        let neg = self.peek() == &Tok::Minus;
        if neg {
            self.bump();
        }
        let (s, t) = self.number()?;
        let v: i64 = s
            .parse()
            .map_err(|_| self.error_at(&t, codes::BAD_NUMBER, format!("{s} is out of range")))?;
        Ok(if neg { -v } else { v })
    }

    fn unsigned(&mut self, what: &str) -> PResult<usize> {
        let t = self.token().clone();
        let v = self.signed_int()?;
        usize::try_from(v).map_err(|_| self.error_at(&t, codes::BAD_NUMBER, format!("{what} must be non-negative")))
    }

    /// `[-]INT[/INT]`
    fn signed_rational(&mut self) -> PResult<Rational> {
        let neg = self.peek() == &Tok::Minus;
        if neg {
            self.bump();
        }
        let (n, _) = self.number()?;
        let mut v: Rational = n.parse().expect("digits");
        if self.peek() == &Tok::Slash {
            self.bump();
            let (d, t) = self.number()?;
            let d: Rational = d.parse().expect("digits");
            if d.is_zero() {
                return Err(self.error_at(&t, codes::BAD_NUMBER, "division by zero"));
            }
            v /= d;
        }
        Ok(if neg { -v } else { v })
    }

    fn end_of_statement(&mut self) -> PResult<()> {
        match self.peek() {
            Tok::Newline | Tok::Eof => Ok(()),
            _ => Err(self.expected("end of statement")),
        }
    }

    fn chart(&self, name: &str, at: &Token) -> PResult<Chart> {
        self.charts
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.clone())
            .ok_or_else(|| self.error_at(at, codes::UNDEFINED, format!("chart `{name}` is not defined")))
    }

    fn chart_name(&self, chart: &Chart) -> String {
        self.charts
            .iter()
            .find(|(_, c)| c == chart)
            .map_or_else(|| "an unnamed chart".to_string(), |(n, _)| n.clone())
    }

    fn tensor(&mut self) -> PResult<(String, Chart)> {
        let (name, t) = self.ident("a tensor name")?;
        match self.tensors.get(&name) {
            Some(c) => Ok((name, c.clone())),
            None => Err(self.error_at(&t, codes::UNDEFINED, format!("`{name}` is not defined"))),
        }
    }

    fn define_tensor(&mut self, name: &str, at: &Token, chart: &Chart) -> PResult<()> {
        if self.tensors.contains_key(name) {
            return Err(self.error_at(at, codes::REDEFINED, format!("`{name}` is already defined")));
        }
        if chart.lookup(name).is_some() {
            return Err(self.error_at(
                at,
                codes::REDEFINED,
                format!("`{name}` is a coordinate of {}", self.chart_name(chart)),
            ));
        }
        self.tensors.insert(name.to_string(), chart.clone());
        Ok(())
    }

    fn define_chart(&mut self, name: &str, at: &Token, chart: Chart) -> PResult<()> {
        if let Some((_, c)) = self.charts.iter().find(|(n, _)| n == name) {
            if *c == chart {
                return Ok(());
            }
            return Err(self.error_at(at, codes::REDEFINED, format!("chart `{name}` is already defined")));
        }
        self.charts.push((name.to_string(), chart));
        Ok(())
    }

    /// The shared prolongation of `chart` to order `r`. Its chart is
    /// registered as `T<r><name>` unless that name is taken.
    fn context(&mut self, chart: &Chart, r: usize, at: &Token) -> PResult<usize> {
        if let Some(i) = self.contexts.iter().position(|c| c.base() == chart && c.r() == r) {
            return Ok(i);
        }
        let ctx = LiftContext::new(chart, r).map_err(|e| self.error_at(at, codes::BAD_CHART, e.to_string()))?;
        let name = format!("T{r}{}", self.chart_name(chart));
        if !self.charts.iter().any(|(n, _)| *n == name) {
            self.charts.push((name, ctx.prolonged().clone()));
        }
        self.contexts.push(ctx);
        Ok(self.contexts.len() - 1)
    }

    fn options(&mut self, allowed: &[&str]) -> PResult<Options> {
        let mut out = Options::new();
        while matches!(self.peek(), Tok::Ident(_)) && self.peek_at(1) == &Tok::Eq {
            let (key, t) = self.ident("an option")?;
            if !allowed.contains(&key.as_str()) {
                let list = allowed.iter().map(|a| format!("{a}=")).collect::<Vec<_>>().join(", ");
                let hint = if list.is_empty() { "none".to_string() } else { list };
                return Err(self.error_at(
                    &t,
                    codes::BAD_ARGUMENTS,
                    format!("unknown option `{key}=` (expected {hint})"),
                ));
            }
            self.expect(Tok::Eq)?;
            let v = self.signed_int()?;
            if out.insert(key.clone(), (v, t.clone())).is_some() {
                return Err(self.error_at(&t, codes::BAD_ARGUMENTS, format!("option `{key}=` given twice")));
            }
        }
        Ok(out)
    }

    fn required(&self, opts: &Options, key: &str, cmd: &Token) -> PResult<i64> {
        opts.get(key)
            .map(|(v, _)| *v)
            .ok_or_else(|| self.error_at(cmd, codes::BAD_ARGUMENTS, format!("missing option `{key}=`")))
    }

    fn order(&self, opts: &Options, cmd: &Token) -> PResult<usize> {
        let r = self.required(opts, "r", cmd)?;
        usize::try_from(r).map_err(|_| self.error_at(&opts["r"].1, codes::BAD_NUMBER, "r must be non-negative"))
    }

    fn component(&self, opts: &Options, chart: &Chart) -> PResult<usize> {
        let count = chart.grading_count();
        match opts.get("component") {
            None => Ok(count - 1),
            Some((c, t)) => usize::try_from(*c)
                .ok()
                .filter(|&c| c < count)
                .ok_or_else(|| {
                    self.error_at(t, codes::BAD_ARGUMENTS, format!("component must lie in 0..{count}"))
                }),
        }
    }

    fn statement(&mut self) -> PResult<Stmt> {
        let first = self.token().clone();
        let (word, _) = self.word("a statement")?;
        let kind = match word.as_str() {
            "chart" => self.chart_decl()?,
            "fn" | "vf" | "form" | "tensor" => self.decl(&word)?,
            _ => self.command(&word, &first)?,
        };
        let last = &self.toks[self.pos - 1];
        let source = self.src[first.start..last.end].to_string();
        self.end_of_statement()?;
        Ok(Stmt {
            line: first.line,
            column: first.column,
            source,
            kind,
        })
    }

    fn chart_decl(&mut self) -> PResult<StmtKind> {
        let (name, at) = self.ident("a chart name")?;
        self.expect(Tok::LBrace)?;
        let mut names = Vec::new();
        let mut weights: Vec<Vec<i64>> = Vec::new();
        loop {
            let (v, _) = self.ident("a coordinate name")?;
            self.expect(Tok::Colon)?;
            let mut w = vec![self.signed_int()?];
            while self.peek() == &Tok::Comma && matches!(self.peek_at(1), Tok::Num(_) | Tok::Minus) {
                self.bump();
                w.push(self.signed_int()?);
            }
            names.push(v);
            weights.push(w);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RBrace => break,
                _ => return Err(self.expected("`,` or `}`")),
            }
        }
        self.expect(Tok::RBrace)?;
        let chart = Chart::graded(names, weights).map_err(|e| self.error_at(&at, codes::BAD_CHART, e.to_string()))?;
        self.define_chart(&name, &at, chart.clone())?;
        Ok(StmtKind::Chart { name, chart })
    }

    fn symmetry_tag(&mut self) -> Option<BlockSymmetry> {
        let tag = match self.peek() {
            Tok::Ident(s) if s == "sym" => BlockSymmetry::Sym,
            Tok::Ident(s) if s == "antisym" => BlockSymmetry::Antisym,
            Tok::Ident(s) if s == "none" => BlockSymmetry::None,
            _ => return None,
        };
        self.bump();
        Some(tag)
    }

    fn decl(&mut self, word: &str) -> PResult<StmtKind> {
        let kind = match word {
            "fn" => DeclKind::Function,
            "vf" => DeclKind::VectorField,
            "form" => DeclKind::Form,
            _ => {
                self.expect(Tok::LParen)?;
                let q = self.unsigned("q")?;
                self.expect(Tok::Comma)?;
                let p = self.unsigned("p")?;
                self.expect(Tok::RParen)?;
                let sym = match (self.symmetry_tag(), self.symmetry_tag()) {
                    (None, _) => Symmetry::NONE,
                    (Some(t), None) => Symmetry { contra: t, cov: t },
                    (Some(a), Some(b)) => Symmetry { contra: a, cov: b },
                };
                DeclKind::Tensor { q, p, sym }
            }
        };
        let (name, at) = self.ident("a tensor name")?;
        self.keyword("on")?;
        let (cname, ct) = self.ident("a chart name")?;
        let chart = self.chart(&cname, &ct)?;
        self.expect(Tok::Eq)?;
        let expr = self.expr(&chart)?;
        self.define_tensor(&name, &at, &chart)?;
        Ok(StmtKind::Decl {
            name,
            kind,
            chart,
            expr,
        })
    }

    fn expr(&mut self, chart: &Chart) -> PResult<Expr> {
        let mut lhs = self.ox_expr(chart)?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.ox_expr(chart)?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.ox_expr(chart)?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn ox_expr(&mut self, chart: &Chart) -> PResult<Expr> {
        let mut lhs = self.wedge_expr(chart)?;
        while self.peek() == &Tok::Ox {
            self.bump();
            lhs = Expr::Ox(Box::new(lhs), Box::new(self.wedge_expr(chart)?));
        }
        Ok(lhs)
    }

    fn wedge_expr(&mut self, chart: &Chart) -> PResult<Expr> {
        let mut lhs = self.mul_expr(chart)?;
        while self.peek() == &Tok::Wedge {
            self.bump();
            lhs = Expr::Wedge(Box::new(lhs), Box::new(self.mul_expr(chart)?));
        }
        Ok(lhs)
    }

    fn mul_expr(&mut self, chart: &Chart) -> PResult<Expr> {
        let mut lhs = self.unary(chart)?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary(chart)?));
                }
                Tok::Slash => {
                    self.bump();
                    let (d, t) = match self.peek() {
                        Tok::Num(_) => self.number()?,
                        _ => return Err(self.error(codes::EXPECTED, "only division by a number is supported")),
                    };
                    let d: Rational = d.parse().expect("digits");
                    if d.is_zero() {
                        return Err(self.error_at(&t, codes::BAD_NUMBER, "division by zero"));
                    }
                    lhs = Expr::Mul(Box::new(lhs), Box::new(Expr::Const(d.recip())));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self, chart: &Chart) -> PResult<Expr> {
        if self.peek() == &Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary(chart)?)));
        }
        let base = self.atom(chart)?;
        if self.peek() == &Tok::Caret {
            self.bump();
            let (e, t) = self.number()?;
            let e: u32 = e
                .parse()
                .map_err(|_| self.error_at(&t, codes::BAD_NUMBER, format!("exponent {e} is too large")))?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn coordinate(&self, chart: &Chart, name: &str, at: &Token) -> PResult<Var> {
        chart
            .lookup(name)
            .ok_or_else(|| self.error_at(at, codes::UNDEFINED, format!("{name} not in {}", self.chart_name(chart))))
    }

    fn atom(&mut self, chart: &Chart) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Expr::Const(n.parse().expect("digits")))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr(chart)?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Partial => {
                self.bump();
                let (v, t) = self.ident("a coordinate after `∂`")?;
                Ok(Expr::Basis(self.coordinate(chart, &v, &t)?))
            }
            Tok::Ident(name) => {
                let at = self.bump();
                if name == "d" && self.peek() == &Tok::Slash {
                    if let Tok::Ident(dv) = self.peek_at(1).clone() {
                        if let Some(v) = dv.strip_prefix('d').filter(|v| !v.is_empty()) {
                            self.bump();
                            let t = self.bump();
                            return Ok(Expr::Basis(self.coordinate(chart, v, &t)?));
                        }
                    }
                }
                if let Some(v) = chart.lookup(&name) {
                    return Ok(Expr::Var(v));
                }
                if let Some(c) = self.tensors.get(&name) {
                    if c == chart {
                        return Ok(Expr::Ref(name));
                    }
                    return Err(self.error_at(
                        &at,
                        codes::WRONG_CHART,
                        format!("`{name}` lives on {}, not {}", self.chart_name(c), self.chart_name(chart)),
                    ));
                }
                if let Some(v) = name.strip_prefix('d').and_then(|v| chart.lookup(v)) {
                    return Ok(Expr::Differential(v));
                }
                Err(self.error_at(&at, codes::UNDEFINED, format!("{name} not in {}", self.chart_name(chart))))
            }
            _ => Err(self.expected("an expression")),
        }
    }

    fn bind(&mut self) -> PResult<Option<(String, Token)>> {
        match self.peek() {
            Tok::Ident(s) if s == "as" => {
                self.bump();
                Ok(Some(self.ident("a name after `as`")?))
            }
            _ => Ok(None),
        }
    }

    fn command(&mut self, word: &str, cmd: &Token) -> PResult<StmtKind> {
        // commands producing a tensor may bind it with `as NAME`
        let (command, result_chart) = match word {
            "lift" => {
                let (tensor, chart) = self.tensor()?;
                let opts = self.options(&["lambda", "r"])?;
                let lambda = self.required(&opts, "lambda", cmd)?;
                let r = self.order(&opts, cmd)?;
                let ctx = self.context(&chart, r, cmd)?;
                let out = self.contexts[ctx].prolonged().clone();
                (Command::Lift { tensor, lambda, ctx }, Some(out))
            }
            "bracket" => {
                let (k, t) = self.ident("a bracket kind")?;
                let kind = BracketKind::ALL.iter().find(|(n, _)| *n == k).map(|(_, b)| *b).ok_or_else(|| {
                    let names: Vec<_> = BracketKind::ALL.iter().map(|(n, _)| *n).collect();
                    self.error_at(
                        &t,
                        codes::BAD_ARGUMENTS,
                        format!("unknown bracket `{k}` (expected one of {})", names.join(", ")),
                    )
                })?;
                let (a, chart) = self.tensor()?;
                let (b, _) = self.tensor()?;
                (Command::Bracket { kind, a, b }, Some(chart))
            }
            "d" => {
                let (tensor, chart) = self.tensor()?;
                (Command::D { tensor }, Some(chart))
            }
            "liederiv" => {
                let (x, _) = self.tensor()?;
                let (k, chart) = self.tensor()?;
                (Command::LieDeriv { x, k }, Some(chart))
            }
            "degree" => {
                let (tensor, chart) = self.tensor()?;
                let opts = self.options(&["component"])?;
                let component = self.component(&opts, &chart)?;
                (Command::Degree { tensor, component }, None)
            }
            "check" => (self.check(cmd)?, None),
            "prolong" => {
                let (cname, ct) = self.ident("a chart name")?;
                let chart = self.chart(&cname, &ct)?;
                let opts = self.options(&["r"])?;
                let r = self.order(&opts, cmd)?;
                let ctx = self.context(&chart, r, cmd)?;
                let prolonged = self.contexts[ctx].prolonged().clone();
                let name = match self.bind()? {
                    Some((name, at)) => {
                        self.define_chart(&name, &at, prolonged)?;
                        name
                    }
                    None => self.chart_name(&prolonged),
                };
                return Ok(StmtKind::Command {
                    command: Command::Prolong { ctx, name },
                    bind: None,
                });
            }
            "lift-connection" => (self.lift_connection(cmd)?, None),
            "eval" => {
                let (tensor, chart) = self.tensor()?;
                self.keyword("at")?;
                let point = self.point(&chart)?;
                (Command::Eval { tensor, point }, None)
            }
            "oracle" => (self.oracle(cmd)?, None),
            _ => {
                return Err(self.error_at(cmd, codes::EXPECTED, format!("unknown statement `{word}`")));
            }
        };
        let bind = match (self.bind()?, result_chart) {
            (Some((name, at)), Some(chart)) => {
                self.define_tensor(&name, &at, &chart)?;
                Some(name)
            }
            (Some((_, at)), None) => {
                return Err(self.error_at(&at, codes::BAD_ARGUMENTS, format!("`{word}` does not produce a tensor")));
            }
            (None, _) => None,
        };
        Ok(StmtKind::Command { command, bind })
    }

    fn check(&mut self, cmd: &Token) -> PResult<Command> {
        let (name, t) = self.word("a check kind")?;
        let shape = CHECKS.iter().find(|s| s.name == name).ok_or_else(|| {
            let names: Vec<_> = CHECKS.iter().map(|s| s.name).collect();
            self.error_at(
                &t,
                codes::BAD_ARGUMENTS,
                format!("unknown check `{name}` (expected one of {})", names.join(", ")),
            )
        })?;
        let mut args = Vec::new();
        let mut chart = None;
        while matches!(self.peek(), Tok::Ident(_)) && self.peek_at(1) != &Tok::Eq {
            if matches!(self.peek(), Tok::Ident(s) if s == "as") {
                break;
            }
            let (a, c) = self.tensor()?;
            chart.get_or_insert(c);
            args.push(a);
        }
        let arity_ok = match shape.arity {
            Some(n) => args.len() == n,
            None => !args.is_empty(),
        };
        if !arity_ok {
            let want = shape.arity.map_or("at least 1".to_string(), |n| n.to_string());
            return Err(self.error_at(
                cmd,
                codes::BAD_ARGUMENTS,
                format!("check {name} takes {want} tensor argument(s), found {}", args.len()),
            ));
        }
        let allowed: &[&str] = if shape.needs_k { &["component", "k"] } else { &["component"] };
        let opts = self.options(allowed)?;
        let k = if shape.needs_k {
            Some(self.required(&opts, "k", cmd)?)
        } else {
            None
        };
        let component = self.component(&opts, &chart.expect("at least one argument"))?;
        Ok(Command::Check {
            kind: shape.kind,
            args,
            component,
            k,
        })
    }

    fn lift_connection(&mut self, cmd: &Token) -> PResult<Command> {
        let (cname, ct) = self.ident("a chart name")?;
        let chart = self.chart(&cname, &ct)?;
        let opts = self.options(&["r"])?;
        let r = self.order(&opts, cmd)?;
        let ctx = self.context(&chart, r, cmd)?;
        self.expect(Tok::LBrace)?;
        let mut symbols = Vec::new();
        while self.peek() != &Tok::RBrace {
            self.expect(Tok::LBracket)?;
            let mut idx = Vec::new();
            for i in 0..3 {
                if i > 0 {
                    self.expect(Tok::Comma)?;
                }
                let (v, t) = self.ident("a coordinate")?;
                idx.push(self.coordinate(&chart, &v, &t)?);
            }
            self.expect(Tok::RBracket)?;
            self.expect(Tok::Eq)?;
            symbols.push(((idx[0], idx[1], idx[2]), self.expr(&chart)?));
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RBrace => {}
                _ => return Err(self.expected("`,` or `}`")),
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(Command::LiftConnection { ctx, symbols })
    }

    fn point(&mut self, chart: &Chart) -> PResult<Vec<Rational>> {
        let mut values: Vec<Option<Rational>> = vec![None; chart.dim()];
        let start = self.token().clone();
        loop {
            let (v, t) = self.ident("a coordinate assignment")?;
            let var = self.coordinate(chart, &v, &t)?;
            self.expect(Tok::Eq)?;
            let val = self.signed_rational()?;
            if values[var.index()].replace(val).is_some() {
                return Err(self.error_at(&t, codes::REDEFINED, format!("`{v}` assigned twice")));
            }
            if self.peek() != &Tok::Comma {
                break;
            }
            self.bump();
        }
        values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    self.error_at(
                        &start,
                        codes::UNDEFINED,
                        format!("point does not assign `{}`", chart.name(Var::from(i))),
                    )
                })
            })
            .collect()
    }

    fn oracle(&mut self, cmd: &Token) -> PResult<Command> {
        let (kind, t) = self.ident("an oracle kind")?;
        let oracle = match kind.as_str() {
            "taylor" => {
                let (f, chart) = self.tensor()?;
                let opts = self.options(&["lambda", "r"])?;
                let lambda = self.required(&opts, "lambda", cmd)?;
                let r = self.order(&opts, cmd)?;
                let ctx = self.context(&chart, r, cmd)?;
                OracleKind::Taylor { f, lambda, ctx }
            }
            "koszul" => OracleKind::Koszul {
                lambda: self.tensor()?.0,
                n: self.tensor()?.0,
                alpha: self.tensor()?.0,
                beta: self.tensor()?.0,
            },
            "spot" => OracleKind::Spot {
                lhs: self.tensor()?.0,
                rhs: self.tensor()?.0,
            },
            _ => {
                return Err(self.error_at(
                    &t,
                    codes::BAD_ARGUMENTS,
                    format!("unknown oracle `{kind}` (expected taylor, koszul or spot)"),
                ))
            }
        };
        Ok(Command::Oracle(oracle))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::CheckKind;

    fn err(src: &str) -> Diagnostic {
        parse(src).unwrap_err()
    }

    #[test]
    fn chart_and_vector_field() {
        let s = parse("chart M { x:0, y:0 }\nvf X on M = x * d/dy").unwrap();
        assert_eq!(s.stmts.len(), 2);
        match &s.stmts[1].kind {
            StmtKind::Decl { expr, kind, .. } => {
                assert_eq!(*kind, DeclKind::VectorField);
                assert_eq!(*expr, Expr::Mul(Box::new(Expr::Var(Var(0))), Box::new(Expr::Basis(Var(1)))));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(s.stmts[1].source, "vf X on M = x * d/dy");
    }

    #[test]
    fn undefined_coordinate_is_a_name_error() {
        let e = err("chart M { x:0, y:0 }\nvf X on M = x * d/dz");
        assert_eq!(e.code, codes::UNDEFINED);
        assert_eq!(e.message, "z not in M");
        assert_eq!((e.line, e.column), (2, 19));
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn error_stages_have_distinct_codes() {
        assert_eq!(err("chart M { x:0 } $").code, codes::UNEXPECTED_CHAR);
        assert_eq!(err("chart M { x:0 ").code, codes::EXPECTED);
        assert_eq!(err("vf X on M = x").code, codes::UNDEFINED);
        assert_eq!(err("chart M { x:0 }\nchart M { y:0 }").code, codes::REDEFINED);
        assert_eq!(err("chart M { x:0, x:1 }").code, codes::BAD_CHART);
        assert_eq!(err("chart M { x:0 }\nfn f on M = x\nd g").code, codes::UNDEFINED);
        assert_eq!(err("chart M { x:0 }\nfn f on M = x\ncheck poisson").code, codes::BAD_ARGUMENTS);
    }

    #[test]
    fn multigraded_chart_and_tags() {
        let s = parse("chart E { x:0,0, y:1,0, u:-1,2 }\ntensor(2,2) sym antisym T on E = d/dx ox d/dx ox dy ^^ du").unwrap();
        let StmtKind::Chart { chart, .. } = &s.stmts[0].kind else { panic!() };
        assert_eq!(chart.grading_count(), 2);
        assert_eq!(chart.weights(Var(2)), &[-1, 2]);
        let StmtKind::Decl { kind, .. } = &s.stmts[1].kind else { panic!() };
        assert_eq!(
            *kind,
            DeclKind::Tensor {
                q: 2,
                p: 2,
                sym: Symmetry {
                    contra: BlockSymmetry::Sym,
                    cov: BlockSymmetry::Antisym
                }
            }
        );
    }

    #[test]
    fn commands_resolve_and_bind() {
        let src = "chart M { x:0, y:0 }
vf X on M = x*d/dy
lift X lambda=1 r=1 as X1
vf Y on T1M = X1 + d/dx_1
check weighted Y k=0 component=0
lift-connection M r=2 { [y, x, x] = 1 }
eval X at x=1/2, y=-3
oracle taylor X lambda=0 r=1
prolong M r=1";
        let s = parse(src).unwrap();
        assert_eq!(s.contexts.len(), 2);
        let StmtKind::Command { command, .. } = &s.stmts[4].kind else { panic!() };
        assert_eq!(
            *command,
            Command::Check {
                kind: CheckKind::Weighted,
                args: vec!["Y".into()],
                component: 0,
                k: Some(0)
            }
        );
        let StmtKind::Command { command: Command::Eval { point, .. }, .. } = &s.stmts[6].kind else { panic!() };
        assert_eq!(point[0], gradcalc_core::rat(1, 2));
        let StmtKind::Command { command: Command::Prolong { ctx, name }, .. } = &s.stmts[8].kind else { panic!() };
        assert_eq!((*ctx, name.as_str()), (0, "T1M"));
    }

    #[test]
    fn tensors_stay_on_their_chart() {
        let e = err("chart M { x:0 }\nchart N { y:0 }\nfn f on M = x\nfn g on N = f*y");
        assert_eq!(e.code, codes::WRONG_CHART);
        assert_eq!(e.message, "`f` lives on M, not N");
    }

    #[test]
    fn differentials_and_precedence() {
        let s = parse("chart M { x:0, y:0 }\nform w on M = -x^2*dx ^^ dy + 1/2*dy ^^ dx").unwrap();
        let StmtKind::Decl { expr, .. } = &s.stmts[1].kind else { panic!() };
        let Expr::Add(lhs, _) = expr else { panic!("{expr:?}") };
        let Expr::Wedge(a, _) = lhs.as_ref() else { panic!("{lhs:?}") };
        assert!(matches!(a.as_ref(), Expr::Mul(n, _) if matches!(n.as_ref(), Expr::Neg(_))));
    }
}
