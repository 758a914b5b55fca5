//! HOA v1 reader and canonical printer, transition-based acceptance only.
//!
//! Labels are expanded into explicit minterms over the declared APs, so
//! an automaton with `m` APs has `2^m` letters.

use std::fmt::Write as _;

use crate::acceptance::AcceptanceFormula;
use crate::error::{Error, Result};
use crate::sets::{ColourSet, StateId};
use crate::tela::{Symbol, Tela, Transition};

/// Largest number of atomic propositions accepted.
pub const MAX_APS: usize = 8;

/// Canonical HOA text for `aut`.
pub fn print_hoa(aut: &Tela) -> String {
    let mut out = String::new();
    out.push_str("HOA: v1\n");
    if let Some(name) = aut.name() {
        let _ = writeln!(out, "name: {}", quote(name));
    }
    let _ = writeln!(out, "States: {}", aut.num_states());
    if aut.initial().is_empty() {
        out.push_str("/* no initial states */\n");
    }
    for q in aut.initial() {
        let _ = writeln!(out, "Start: {q}");
    }
    if !aut.aps().is_empty() {
        let _ = write!(out, "AP: {}", aut.aps().len());
        for ap in aut.aps() {
            let _ = write!(out, " {}", quote(ap));
        }
        out.push('\n');
    }
    let _ = writeln!(out, "Acceptance: {} {}", aut.num_colours(), aut.acceptance());
    out.push_str("--BODY--\n");
    for q in 0..aut.num_states() as StateId {
        match aut.state_name(q) {
            Some(n) if !n.is_empty() => {
                let _ = writeln!(out, "State: {q} {}", quote(n));
            }
            _ => {
                let _ = writeln!(out, "State: {q}");
            }
        }
        for a in 0..aut.num_symbols() as Symbol {
            for &(dst, colours) in aut.succ(q, a) {
                let _ = write!(out, "[{}] {dst}", minterm_label(a, aut.aps().len()));
                if !colours.is_empty() {
                    out.push_str(" {");
                    for (i, c) in colours.iter().enumerate() {
                        if i > 0 {
                            out.push(' ');
                        }
                        let _ = write!(out, "{c}");
                    }
                    out.push('}');
                }
                out.push('\n');
            }
        }
    }
    out.push_str("--END--\n");
    out
}

/// Conjunction of literals describing letter `a` over `num_aps` APs.
pub fn minterm_label(a: Symbol, num_aps: usize) -> String {
    if num_aps == 0 {
        return "t".into();
    }
    (0..num_aps)
        .map(|i| if a >> i & 1 == 1 { format!("{i}") } else { format!("!{i}") })
        .collect::<Vec<_>>()
        .join("&")
}

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for ch in s.chars() {
        if ch == '"' || ch == '\\' {
            q.push('\\');
        }
        q.push(ch);
    }
    q.push('"');
    q
}

/// Parses one automaton.
pub fn parse_hoa(text: &str) -> Result<Tela> {
    let tokens = lex(text)?;
    Parser { tokens, pos: 0 }.automaton()
}

/// Parses an `Acceptance:` formula such as `Inf(0) & (Fin(1) | t)`.
pub fn parse_acceptance(text: &str) -> Result<AcceptanceFormula> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let f = p.acc_or()?;
    if p.peek().kind != Tok::Eof {
        return Err(p.error("trailing input after acceptance formula"));
    }
    Ok(f.normalized())
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Header(String),
    Ident(String),
    Int(u64),
    Str(String),
    Alias(String),
    Punct(char),
    Body,
    End,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    kind: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, message: &str| Error::Parse { line, column, message: message.into() };
    while i < chars.len() {
        let ch = chars[i];
        let (tl, tc) = (line, col);
        let advance = |i: &mut usize, line: &mut usize, col: &mut usize, to: usize| {
            while *i < to {
                if chars[*i] == '\n' {
                    *line += 1;
                    *col = 1;
                } else {
                    *col += 1;
                }
                *i += 1;
            }
        };
        if ch.is_whitespace() {
            let to = i + 1;
            advance(&mut i, &mut line, &mut col, to);
        } else if ch == '/' && chars.get(i + 1) == Some(&'*') {
            let mut j = i + 2;
            while j + 1 < chars.len() && !(chars[j] == '*' && chars[j + 1] == '/') {
                j += 1;
            }
            if j + 1 >= chars.len() {
                return Err(err(tl, tc, "unterminated comment"));
            }
            advance(&mut i, &mut line, &mut col, j + 2);
        } else if ch == '-' && chars.get(i + 1) == Some(&'-') {
            let mut j = i + 2;
            while j < chars.len() && chars[j].is_ascii_alphabetic() {
                j += 1;
            }
            let word: String = chars[i + 2..j].iter().collect();
            if chars.get(j) != Some(&'-') || chars.get(j + 1) != Some(&'-') {
                return Err(err(tl, tc, "malformed --MARKER--"));
            }
            let kind = match word.as_str() {
                "BODY" => Tok::Body,
                "END" => Tok::End,
                "ABORT" => return Err(err(tl, tc, "automaton aborted by producer")),
                _ => return Err(err(tl, tc, "unknown --MARKER--")),
            };
            advance(&mut i, &mut line, &mut col, j + 2);
            out.push(Token { kind, line: tl, column: tc });
        } else if ch == '"' {
            let mut s = String::new();
            let mut j = i + 1;
            loop {
                match chars.get(j) {
                    None => return Err(err(tl, tc, "unterminated string")),
                    Some('"') => break,
                    Some('\\') => {
                        if let Some(&c) = chars.get(j + 1) {
                            s.push(c);
                        }
                        j += 2;
                    }
                    Some(&c) => {
                        s.push(c);
                        j += 1;
                    }
                }
            }
            advance(&mut i, &mut line, &mut col, j + 1);
            out.push(Token { kind: Tok::Str(s), line: tl, column: tc });
        } else if ch.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let digits: String = chars[i..j].iter().collect();
            let v = digits.parse().map_err(|_| err(tl, tc, "integer too large"))?;
            advance(&mut i, &mut line, &mut col, j);
            out.push(Token { kind: Tok::Int(v), line: tl, column: tc });
        } else if ch.is_ascii_alphabetic() || ch == '_' || ch == '@' {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '-') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let kind = if ch == '@' {
                Tok::Alias(word)
            } else if chars.get(j) == Some(&':') {
                j += 1;
                Tok::Header(word)
            } else {
                Tok::Ident(word)
            };
            advance(&mut i, &mut line, &mut col, j);
            out.push(Token { kind, line: tl, column: tc });
        } else if "()[]{}!&|".contains(ch) {
            let to = i + 1;
            advance(&mut i, &mut line, &mut col, to);
            out.push(Token { kind: Tok::Punct(ch), line: tl, column: tc });
        } else {
            return Err(err(tl, tc, &format!("unexpected character {ch:?}")));
        }
    }
    out.push(Token { kind: Tok::Eof, line, column: col });
    Ok(out)
}

enum Label {
    True,
    False,
    Ap(usize),
    Not(Box<Label>),
    And(Vec<Label>),
    Or(Vec<Label>),
}

impl Label {
    fn eval(&self, a: Symbol) -> bool {
        match self {
            Label::True => true,
            Label::False => false,
            Label::Ap(i) => a >> i & 1 == 1,
            Label::Not(x) => !x.eval(a),
            Label::And(xs) => xs.iter().all(|x| x.eval(a)),
            Label::Or(xs) => xs.iter().any(|x| x.eval(a)),
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: &str) -> Error {
        let t = self.peek();
        Error::Parse { line: t.line, column: t.column, message: message.into() }
    }

    fn unsupported(code: &'static str, message: &str) -> Error {
        Error::Unsupported { code, message: message.into() }
    }

    fn expect_punct(&mut self, c: char) -> Result<()> {
        if self.peek().kind == Tok::Punct(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.peek().kind == Tok::Punct(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn int(&mut self, what: &str) -> Result<u64> {
        match self.peek().kind {
            Tok::Int(v) => {
                self.bump();
                Ok(v)
            }
            _ => Err(self.error(&format!("expected {what}"))),
        }
    }

    fn small_int(&mut self, what: &str, limit: u64) -> Result<u32> {
        let t = self.peek().clone();
        let v = self.int(what)?;
        if v >= limit {
            return Err(Error::Parse {
                line: t.line,
                column: t.column,
                message: format!("{what} {v} out of range (limit {limit})"),
            });
        }
        Ok(v as u32)
    }

    fn automaton(&mut self) -> Result<Tela> {
        match &self.peek().kind {
            Tok::Header(h) if h == "HOA" => {
                self.bump();
            }
            _ => return Err(self.error("expected 'HOA: v1'")),
        }
        match &self.peek().kind {
            Tok::Ident(v) if v == "v1" => {
                self.bump();
            }
            _ => return Err(self.error("only HOA version v1 is supported")),
        }
        let mut states: Option<u64> = None;
        let mut start = Vec::new();
        let mut aps: Option<Vec<String>> = None;
        let mut acceptance: Option<(u32, AcceptanceFormula)> = None;
        let mut name = None;
        loop {
            let header = match &self.peek().kind {
                Tok::Header(h) => h.clone(),
                Tok::Body => break,
                _ => return Err(self.error("expected a header item or --BODY--")),
            };
            self.bump();
            match header.as_str() {
                "States" => states = Some(self.int("state count")?),
                "Start" => {
                    start.push(self.int("initial state")?);
                    if self.peek().kind == Tok::Punct('&') {
                        return Err(Self::unsupported("start-conjunction", "conjunctive Start lines"));
                    }
                }
                "AP" => {
                    let n = self.int("AP count")? as usize;
                    if n > MAX_APS {
                        return Err(Error::TooManyAps(n));
                    }
                    let mut names = Vec::with_capacity(n);
                    for _ in 0..n {
                        match self.bump().kind {
                            Tok::Str(s) => names.push(s),
                            _ => return Err(self.error("expected an AP name string")),
                        }
                    }
                    aps = Some(names);
                }
                "Acceptance" => {
                    let k = self.int("acceptance set count")?;
                    if k > u64::from(crate::sets::MAX_COLOURS) {
                        return Err(Error::TooManyColours(k as u32));
                    }
                    let f = self.acc_or()?;
                    acceptance = Some((k as u32, f));
                }
                "name" => match self.bump().kind {
                    Tok::Str(s) => name = Some(s),
                    _ => return Err(self.error("expected a name string")),
                },
                "Alias" => return Err(Self::unsupported("alias", "Alias definitions")),
                "HOA" => return Err(self.error("duplicate HOA header")),
                _ => {
                    // acc-name, properties, tool and unknown headers: skip values
                    while !matches!(self.peek().kind, Tok::Header(_) | Tok::Body | Tok::Eof) {
                        self.bump();
                    }
                }
            }
        }
        self.bump(); // --BODY--
        let n = states.ok_or_else(|| self.error("missing States header"))?;
        if n == 0 {
            return Err(Error::NoStates);
        }
        let aps = aps.unwrap_or_default();
        let (k, alpha) = acceptance.ok_or_else(|| self.error("missing Acceptance header"))?;
        for &q in &start {
            if q >= n {
                return Err(Error::StateOutOfRange { state: q as StateId, count: n as usize });
            }
        }
        let symbols = 1u32 << aps.len();
        let mut transitions = Vec::new();
        let mut names: Vec<String> = vec![String::new(); n as usize];
        loop {
            match &self.peek().kind {
                Tok::Header(h) if h == "State" => {
                    self.bump();
                }
                Tok::End => break,
                _ => return Err(self.error("expected 'State:' or --END--")),
            }
            let state_line = self.peek().line;
            let q = self.small_int("state", n)?;
            if let Tok::Str(s) = &self.peek().kind {
                names[q as usize] = s.clone();
                self.bump();
            }
            if self.peek().kind == Tok::Punct('[') && self.peek().line == state_line {
                return Err(Self::unsupported("state-label", "state labels"));
            }
            if self.peek().kind == Tok::Punct('{') && self.peek().line == state_line {
                return Err(Self::unsupported("state-acceptance", "state-based acceptance marks"));
            }
            while !matches!(&self.peek().kind, Tok::Header(h) if h == "State") && self.peek().kind != Tok::End {
                if !self.eat_punct('[') {
                    if matches!(self.peek().kind, Tok::Int(_)) {
                        return Err(Self::unsupported("implicit-labels", "edges without explicit labels"));
                    }
                    return Err(self.error("expected '[' starting an edge label"));
                }
                let label = self.label_or(aps.len())?;
                self.expect_punct(']')?;
                let dst = self.small_int("state", n)?;
                if self.peek().kind == Tok::Punct('&') {
                    return Err(Self::unsupported("universal-branching", "conjunctive edge targets"));
                }
                let mut colours = ColourSet::EMPTY;
                if self.eat_punct('{') {
                    while !self.eat_punct('}') {
                        colours.insert(self.small_int("acceptance set", u64::from(k))?);
                    }
                }
                for a in 0..symbols {
                    if label.eval(a) {
                        transitions.push(Transition { src: q, symbol: a, dst, colours });
                    }
                }
            }
        }
        self.bump(); // --END--
        if self.peek().kind != Tok::Eof {
            return Err(self.error("trailing input after --END--"));
        }
        let mut aut = Tela::new(aps, n as usize, start.into_iter().map(|q| q as StateId), k, alpha, transitions)?;
        if names.iter().any(|s| !s.is_empty()) {
            aut = aut.with_state_names(names)?;
        }
        if let Some(name) = name {
            aut = aut.with_name(name);
        }
        Ok(aut)
    }

    fn acc_or(&mut self) -> Result<AcceptanceFormula> {
        let mut parts = vec![self.acc_and()?];
        while self.eat_punct('|') {
            parts.push(self.acc_and()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { AcceptanceFormula::Or(parts) })
    }

    fn acc_and(&mut self) -> Result<AcceptanceFormula> {
        let mut parts = vec![self.acc_atom()?];
        while self.eat_punct('&') {
            parts.push(self.acc_atom()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { AcceptanceFormula::And(parts) })
    }

    fn acc_atom(&mut self) -> Result<AcceptanceFormula> {
        if self.eat_punct('(') {
            let f = self.acc_or()?;
            self.expect_punct(')')?;
            return Ok(f);
        }
        let word = match &self.peek().kind {
            Tok::Ident(w) => w.clone(),
            _ => return Err(self.error("expected t, f, Inf(..), Fin(..) or '('")),
        };
        self.bump();
        match word.as_str() {
            "t" => Ok(AcceptanceFormula::True),
            "f" => Ok(AcceptanceFormula::False),
            "Inf" | "Fin" => {
                self.expect_punct('(')?;
                if self.peek().kind == Tok::Punct('!') {
                    return Err(Self::unsupported("negated-set", "complemented acceptance sets"));
                }
                let c = self.small_int("acceptance set", u64::from(crate::sets::MAX_COLOURS))?;
                self.expect_punct(')')?;
                Ok(if word == "Inf" { AcceptanceFormula::Inf(c) } else { AcceptanceFormula::Fin(c) })
            }
            _ => Err(self.error(&format!("unexpected '{word}' in acceptance formula"))),
        }
    }

    fn label_or(&mut self, num_aps: usize) -> Result<Label> {
        let mut parts = vec![self.label_and(num_aps)?];
        while self.eat_punct('|') {
            parts.push(self.label_and(num_aps)?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Label::Or(parts) })
    }

    fn label_and(&mut self, num_aps: usize) -> Result<Label> {
        let mut parts = vec![self.label_atom(num_aps)?];
        while self.eat_punct('&') {
            parts.push(self.label_atom(num_aps)?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Label::And(parts) })
    }

    fn label_atom(&mut self, num_aps: usize) -> Result<Label> {
        if self.eat_punct('!') {
            return Ok(Label::Not(Box::new(self.label_atom(num_aps)?)));
        }
        if self.eat_punct('(') {
            let l = self.label_or(num_aps)?;
            self.expect_punct(')')?;
            return Ok(l);
        }
        match &self.peek().kind {
            Tok::Ident(w) if w == "t" => {
                self.bump();
                Ok(Label::True)
            }
            Tok::Ident(w) if w == "f" => {
                self.bump();
                Ok(Label::False)
            }
            Tok::Int(_) => Ok(Label::Ap(self.small_int("AP index", num_aps as u64)? as usize)),
            Tok::Alias(_) => Err(Self::unsupported("alias", "alias references in labels")),
            _ => Err(self.error("expected a label expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const T1: &str = "HOA: v1\nStates: 1\nStart: 0\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0\n[t] 0 {0}\n--END--\n";

    #[test]
    fn t1_parses_and_prints_canonically() {
        let a = parse_hoa(T1).unwrap();
        assert_eq!(a.num_states(), 1);
        assert_eq!(a.num_symbols(), 1);
        assert_eq!(a.succ(0, 0), &[(0, ColourSet::singleton(0))]);
        assert_eq!(a.acceptance(), &AcceptanceFormula::Inf(0));
        assert_eq!(print_hoa(&a), T1);
        assert_eq!(print_hoa(&a).lines().count(), 8);
    }

    #[test]
    fn trivial_acceptance() {
        let a = parse_hoa("HOA: v1\nStates: 1\nStart: 0\nAcceptance: 0 t\n--BODY--\nState: 0\n[t] 0\n--END--\n").unwrap();
        assert_eq!(a.acceptance(), &AcceptanceFormula::True);
        assert_eq!(a.num_colours(), 0);
    }

    #[test]
    fn labels_expand_to_minterms() {
        let text = r#"HOA: v1
States: 2
Start: 0
AP: 2 "a" "b"
acc-name: Buchi
Acceptance: 1 Inf(0)
properties: trans-labels explicit-labels
--BODY--
State: 0 "init"
[0 | !1] 1 {0}
[(!0 & 1)] 0
State: 1
[t] 1
--END--
"#;
        let a = parse_hoa(text).unwrap();
        assert_eq!(a.num_symbols(), 4);
        // minterms: 0 = !a!b, 1 = a!b, 2 = !ab, 3 = ab
        let to1: Vec<Symbol> = (0..4).filter(|&s| a.succ(0, s).iter().any(|e| e.0 == 1)).collect();
        assert_eq!(to1, vec![0, 1, 3]);
        assert_eq!(a.succ(0, 2), &[(0, ColourSet::EMPTY)]);
        assert_eq!(a.state_name(0), Some("init"));
        let again = parse_hoa(&print_hoa(&a)).unwrap();
        assert_eq!(again, a);
    }

    #[test]
    fn empty_initial_set_is_commented() {
        let a = Tela::new(vec![], 1, [], 0, AcceptanceFormula::True, []).unwrap();
        let text = print_hoa(&a);
        assert!(text.contains("/* no initial states */"));
        assert!(!text.contains("Start:"));
        assert_eq!(parse_hoa(&text).unwrap(), a);
    }

    #[test]
    fn unsupported_features_have_codes() {
        let state_acc = "HOA: v1\nStates: 1\nStart: 0\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0 {0}\n[t] 0\n--END--\n";
        assert!(matches!(parse_hoa(state_acc), Err(Error::Unsupported { code: "state-acceptance", .. })));
        let alias = "HOA: v1\nStates: 1\nStart: 0\nAlias: @a 0\nAcceptance: 1 Inf(0)\n--BODY--\n--END--\n";
        assert!(matches!(parse_hoa(alias), Err(Error::Unsupported { code: "alias", .. })));
        let implicit = "HOA: v1\nStates: 1\nStart: 0\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0\n0 {0}\n--END--\n";
        assert!(matches!(parse_hoa(implicit), Err(Error::Unsupported { code: "implicit-labels", .. })));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let bad = "HOA: v1\nStates: 1\nStart: 0\nAcceptance: 1 Inf(0\n--BODY--\n--END--\n";
        match parse_hoa(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn acceptance_text_round_trips() {
        for s in ["t", "f", "Inf(0)", "Fin(0) & (Inf(1) | (Fin(2) & Inf(3)))", "(Fin(0) & Inf(1)) | (Fin(2) & Inf(3))"] {
            let f: AcceptanceFormula = s.parse().unwrap();
            assert_eq!(f.to_string().parse::<AcceptanceFormula>().unwrap(), f);
        }
    }
}
