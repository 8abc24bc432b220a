//! OpenQASM 2.0 subset reader and writer.
//!
//! Supported: `OPENQASM 2.0;`, `include` lines (ignored), exactly one `qreg`,
//! at most one `creg`, gate statements from [`GateKind`], `measure` and
//! `barrier`. Angle expressions may use numbers, `pi`, `+ - * / ^` and
//! parentheses.
//!
//! A leading `// name: <name>` comment carries the circuit name so that
//! emitted programs read back into an equal [`Circuit`].

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, GateKind, QubitId};

/// Position-tagged parse failure.
#[derive(Debug, Error, PartialEq)]
#[error("{line}:{col}: {kind}")]
pub struct QasmError {
    pub line: usize,
    pub col: usize,
    pub kind: QasmErrorKind,
}

#[derive(Debug, Error, PartialEq)]
pub enum QasmErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unsupported gate `{0}`")]
    UnsupportedGate(String),
    #[error("unsupported statement `{0}`")]
    UnsupportedStatement(String),
    #[error("qubit index {index} out of range for register of size {size}")]
    QubitOutOfRange { index: usize, size: usize },
    #[error("duplicate qubit {0} in one gate")]
    DuplicateQubit(usize),
    #[error("only one {0} register is supported")]
    MultipleRegisters(&'static str),
    #[error("no qreg declared before first gate")]
    MissingQreg,
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Str(String),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(x) => write!(f, "`{x}`"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 12] = ["->", ";", ",", "[", "]", "(", ")", "+", "-", "*", "/", "^"];

struct Lexed {
    tokens: Vec<Spanned>,
    name: Option<String>,
}

fn lex(text: &str) -> Result<Lexed, QasmError> {
    let mut tokens = Vec::new();
    let mut name = None;
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c == '/' && chars.get(i + 1) == Some(&'/') {
                let comment: String = chars[i + 2..].iter().collect();
                if tokens.len() <= 3 && name.is_none() {
                    if let Some(rest) = comment.trim().strip_prefix("name:") {
                        name = Some(rest.trim().to_string());
                    }
                }
                break;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                tokens.push(Spanned {
                    tok: Tok::Ident(word),
                    line: line_no,
                    col,
                });
                continue;
            }
            if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let lit: String = chars[start..i].iter().collect();
                let value = lit.parse::<f64>().map_err(|_| QasmError {
                    line: line_no,
                    col,
                    kind: QasmErrorKind::Syntax(format!("malformed number `{lit}`")),
                })?;
                tokens.push(Spanned {
                    tok: Tok::Num(value),
                    line: line_no,
                    col,
                });
                continue;
            }
            if c == '"' {
                let start = i + 1;
                let end = chars[start..]
                    .iter()
                    .position(|&d| d == '"')
                    .map(|p| start + p)
                    .ok_or(QasmError {
                        line: line_no,
                        col,
                        kind: QasmErrorKind::Syntax("unterminated string".into()),
                    })?;
                tokens.push(Spanned {
                    tok: Tok::Str(chars[start..end].iter().collect()),
                    line: line_no,
                    col,
                });
                i = end + 1;
                continue;
            }
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(sym) => {
                    tokens.push(Spanned {
                        tok: Tok::Sym(sym),
                        line: line_no,
                        col,
                    });
                    i += sym.len();
                }
                None => {
                    return Err(QasmError {
                        line: line_no,
                        col,
                        kind: QasmErrorKind::Syntax(format!("unexpected character `{c}`")),
                    })
                }
            }
        }
    }
    Ok(Lexed { tokens, name })
}

struct Register {
    name: String,
    size: usize,
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    eof: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .map(|s| (s.line, s.col))
            .unwrap_or(self.eof)
    }

    fn err(&self, kind: QasmErrorKind) -> QasmError {
        let (line, col) = self.here();
        QasmError { line, col, kind }
    }

    fn err_at(&self, at: (usize, usize), kind: QasmErrorKind) -> QasmError {
        QasmError {
            line: at.0,
            col: at.1,
            kind,
        }
    }

    fn unexpected(&self, wanted: &str) -> QasmError {
        let msg = match self.peek() {
            Some(t) => format!("expected {wanted}, found {t}"),
            None => format!("expected {wanted}, found end of input"),
        };
        self.err(QasmErrorKind::Syntax(msg))
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), QasmError> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{sym}`")))
        }
    }

    fn ident(&mut self) -> Result<String, QasmError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn index(&mut self) -> Result<usize, QasmError> {
        match self.peek() {
            Some(Tok::Num(x)) if x.fract() == 0.0 && *x >= 0.0 => {
                let v = *x as usize;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.unexpected("non-negative integer")),
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<f64, QasmError> {
        let mut acc = self.term()?;
        loop {
            if self.eat("+") {
                acc += self.term()?;
            } else if self.eat("-") {
                acc -= self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<f64, QasmError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat("*") {
                acc *= self.unary()?;
            } else if self.eat("/") {
                acc /= self.unary()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<f64, QasmError> {
        if self.eat("-") {
            return Ok(-self.unary()?);
        }
        if self.eat("+") {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat("^") {
            let exp = self.unary()?;
            return Ok(base.powf(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<f64, QasmError> {
        match self.peek().cloned() {
            Some(Tok::Num(x)) => {
                self.pos += 1;
                Ok(x)
            }
            Some(Tok::Ident(s)) if s == "pi" => {
                self.pos += 1;
                Ok(std::f64::consts::PI)
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(")")?;
                Ok(v)
            }
            _ => Err(self.unexpected("expression")),
        }
    }

    /// `reg[i]` or a bare `reg` (whole register, only where `allow_whole`).
    fn operand(&mut self, reg: &Register, allow_whole: bool) -> Result<Vec<usize>, QasmError> {
        let at = self.here();
        let name = self.ident()?;
        if name != reg.name {
            return Err(self.err_at(at, QasmErrorKind::UnknownRegister(name)));
        }
        if self.eat("[") {
            let at = self.here();
            let idx = self.index()?;
            self.expect("]")?;
            if idx >= reg.size {
                return Err(self.err_at(
                    at,
                    QasmErrorKind::QubitOutOfRange {
                        index: idx,
                        size: reg.size,
                    },
                ));
            }
            Ok(vec![idx])
        } else if allow_whole {
            Ok((0..reg.size).collect())
        } else {
            Err(self.unexpected("`[`"))
        }
    }
}

/// Parse a program in the supported OpenQASM 2.0 subset.
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let lexed = lex(text)?;
    let eof = (text.lines().count().max(1), 1);
    let mut p = Parser {
        tokens: lexed.tokens,
        pos: 0,
        eof,
    };
    let name = lexed.name.unwrap_or_else(|| "main".to_string());

    let mut qreg: Option<Register> = None;
    let mut creg: Option<Register> = None;
    let mut circuit: Option<Circuit> = None;

    while let Some(tok) = p.peek().cloned() {
        let at = p.here();
        let word = match tok {
            Tok::Ident(w) => w,
            _ => return Err(p.unexpected("statement")),
        };
        p.pos += 1;
        match word.as_str() {
            "OPENQASM" => {
                match p.next() {
                    Some(Tok::Num(2.0)) => {}
                    _ => {
                        return Err(p.err_at(
                            at,
                            QasmErrorKind::Syntax("only OPENQASM 2.0 is supported".into()),
                        ))
                    }
                }
                p.expect(";")?;
            }
            "include" => {
                match p.next() {
                    Some(Tok::Str(_)) => {}
                    _ => return Err(p.err_at(at, QasmErrorKind::Syntax("include needs a file name".into()))),
                }
                p.expect(";")?;
            }
            "qreg" | "creg" => {
                let reg_name = p.ident()?;
                p.expect("[")?;
                let size = p.index()?;
                p.expect("]")?;
                p.expect(";")?;
                let reg = Register {
                    name: reg_name,
                    size,
                };
                if word == "qreg" {
                    if qreg.is_some() {
                        return Err(p.err_at(at, QasmErrorKind::MultipleRegisters("quantum")));
                    }
                    qreg = Some(reg);
                } else {
                    if creg.is_some() {
                        return Err(p.err_at(at, QasmErrorKind::MultipleRegisters("classical")));
                    }
                    if circuit.is_some() {
                        return Err(p.err_at(
                            at,
                            QasmErrorKind::Syntax("creg must precede gate statements".into()),
                        ));
                    }
                    creg = Some(reg);
                }
            }
            "gate" | "opaque" | "if" | "reset" | "U" | "CX" => {
                return Err(p.err_at(at, QasmErrorKind::UnsupportedStatement(word)));
            }
            _ => {
                let reg = qreg
                    .as_ref()
                    .ok_or_else(|| p.err_at(at, QasmErrorKind::MissingQreg))?;
                if circuit.is_none() {
                    let nc = creg.as_ref().map_or(0, |c| c.size);
                    let c = Circuit::with_clbits(name.clone(), reg.size, nc)
                        .map_err(|e| p.err_at(at, e.into()))?;
                    circuit = Some(c);
                }
                let c = circuit.as_mut().expect("initialised above");
                let gates = parse_statement(&mut p, &word, at, reg, creg.as_ref())?;
                for g in gates {
                    c.push(g).map_err(|e| p.err_at(at, e.into()))?;
                }
            }
        }
    }

    match circuit {
        Some(c) => Ok(c),
        None => {
            let reg = qreg.ok_or(QasmError {
                line: eof.0,
                col: eof.1,
                kind: QasmErrorKind::MissingQreg,
            })?;
            let nc = creg.map_or(0, |c| c.size);
            Circuit::with_clbits(name, reg.size, nc).map_err(|e| QasmError {
                line: eof.0,
                col: eof.1,
                kind: e.into(),
            })
        }
    }
}

fn parse_statement(
    p: &mut Parser,
    word: &str,
    at: (usize, usize),
    qreg: &Register,
    creg: Option<&Register>,
) -> Result<Vec<Gate>, QasmError> {
    match word {
        "measure" => {
            let qs = p.operand(qreg, true)?;
            p.expect("->")?;
            let creg = creg.ok_or_else(|| p.err(QasmErrorKind::Syntax("measure without creg".into())))?;
            let cs = p.operand(creg, true)?;
            p.expect(";")?;
            if qs.len() != cs.len() {
                return Err(p.err_at(
                    at,
                    QasmErrorKind::Syntax("measure operands differ in size".into()),
                ));
            }
            Ok(qs.into_iter().zip(cs).map(|(q, c)| Gate::measure(q, c)).collect())
        }
        "barrier" => {
            let mut qubits = p.operand(qreg, true)?;
            while p.eat(",") {
                qubits.extend(p.operand(qreg, true)?);
            }
            p.expect(";")?;
            check_distinct(p, at, &qubits)?;
            Ok(vec![Gate::fixed(GateKind::Barrier, &qubits)])
        }
        _ => {
            let kind: GateKind = word
                .parse()
                .map_err(|_| p.err_at(at, QasmErrorKind::UnsupportedGate(word.to_string())))?;
            if kind.is_terminal() {
                return Err(p.err_at(at, QasmErrorKind::UnsupportedGate(word.to_string())));
            }
            let mut params = Vec::new();
            if p.eat("(") && !p.eat(")") {
                params.push(p.expr()?);
                while p.eat(",") {
                    params.push(p.expr()?);
                }
                p.expect(")")?;
            }
            let mut qubits = p.operand(qreg, false)?;
            while p.eat(",") {
                qubits.extend(p.operand(qreg, false)?);
            }
            p.expect(";")?;
            check_distinct(p, at, &qubits)?;
            Gate::new(kind, &qubits, &params).map_err(|e| p.err_at(at, e.into()))
                .map(|g| vec![g])
        }
    }
}

fn check_distinct(p: &Parser, at: (usize, usize), qubits: &[usize]) -> Result<(), QasmError> {
    for (i, q) in qubits.iter().enumerate() {
        if qubits[..i].contains(q) {
            return Err(p.err_at(at, QasmErrorKind::DuplicateQubit(*q)));
        }
    }
    Ok(())
}

/// Emit a program that [`parse_qasm`] reads back into an equal circuit.
///
/// One statement per line; angles use 17 significant digits.
pub fn emit_qasm(c: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    let name = c.name().replace(['\n', '\r'], " ");
    let _ = writeln!(out, "// name: {name}");
    out.push_str("include \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", c.num_qubits());
    if c.num_clbits() > 0 {
        let _ = writeln!(out, "creg c[{}];", c.num_clbits());
    }
    for g in c.gates() {
        match g.kind {
            GateKind::Measure => {
                let _ = writeln!(out, "measure q[{}] -> c[{}];", g.qubits[0].0, g.clbits[0]);
            }
            _ => {
                out.push_str(g.kind.name());
                if !g.params.is_empty() {
                    out.push('(');
                    for (i, a) in g.params.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        let _ = write!(out, "{a:.16e}");
                    }
                    out.push(')');
                }
                out.push(' ');
                push_operands(&mut out, &g.qubits);
                out.push_str(";\n");
            }
        }
    }
    out
}

fn push_operands(out: &mut String, qubits: &[QubitId]) {
    for (i, q) in qubits.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "q[{}]", q.0);
    }
}
