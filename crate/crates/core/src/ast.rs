//! Expression trees for combined operations, with an s-expression syntax.
//!
//! ```text
//! (in K)                       input slot K
//! (rev X) (star X) (cyc X) (half X) (power P X)
//! (not X) (or X Y ..) (and X Y ..) (xor X Y ..) (bool "0110" X Y)
//! (concat X Y ..)
//! (shuffle-traj shuffle|concat|anticoncat|insertion|"N;I;F,..;D D .." X Y)
//! (lquo DIVISOR DIVIDEND) (del X Y)
//! (sigma all) (sigma none) (sigma n=K ..) (sigma ge=K)
//! (invmorph "B0 B1 .." X)
//! ```

use std::fmt;
use std::str::FromStr;

use crate::automata::{minimize, Dfa};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::ops::{self, BooleanFn, LengthSpec, Trajectory};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpAst {
    Input(usize),
    Reverse(Box<OpAst>),
    Star(Box<OpAst>),
    Power(usize, Box<OpAst>),
    CyclicShift(Box<OpAst>),
    Concat(Vec<OpAst>),
    Boolean(BooleanFn, Vec<OpAst>),
    ShuffleTraj(Trajectory, Box<OpAst>, Box<OpAst>),
    LeftQuotient { divisor: Box<OpAst>, dividend: Box<OpAst> },
    Delete(Box<OpAst>, Box<OpAst>),
    Half(Box<OpAst>),
    AlphabetLang(LengthSpec),
    /// Inverse image under the letter map `a ↦ map[a]`; the result has
    /// `map.len()` letters.
    InverseMorphism(Vec<usize>, Box<OpAst>),
}

impl OpAst {
    pub fn input(slot: usize) -> Self {
        OpAst::Input(slot)
    }

    pub fn children(&self) -> Vec<&OpAst> {
        match self {
            OpAst::Input(_) | OpAst::AlphabetLang(_) => vec![],
            OpAst::Reverse(c)
            | OpAst::Star(c)
            | OpAst::Power(_, c)
            | OpAst::CyclicShift(c)
            | OpAst::Half(c)
            | OpAst::InverseMorphism(_, c) => vec![c],
            OpAst::Concat(cs) | OpAst::Boolean(_, cs) => cs.iter().collect(),
            OpAst::ShuffleTraj(_, a, b) | OpAst::Delete(a, b) => vec![a, b],
            OpAst::LeftQuotient { divisor, dividend } => vec![divisor, dividend],
        }
    }

    /// One more than the largest referenced slot (0 if none).
    pub fn arity(&self) -> usize {
        match self {
            OpAst::Input(k) => k + 1,
            _ => self.children().iter().map(|c| c.arity()).max().unwrap_or(0),
        }
    }

    /// Names of the primitives in this tree that are not uniform.
    pub fn nonuniform_primitives(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        self.collect_nonuniform(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_nonuniform(&self, out: &mut Vec<&'static str>) {
        match self {
            OpAst::Half(_) => out.push("half"),
            OpAst::Delete(..) => out.push("del"),
            OpAst::LeftQuotient { .. } => out.push("lquo"),
            _ => {}
        }
        for c in self.children() {
            c.collect_nonuniform(out);
        }
    }

    pub fn is_uniform(&self) -> bool {
        self.nonuniform_primitives().is_empty()
    }

    /// Evaluates bottom-up. Every node's result, leaves included, is
    /// minimized before it is passed on; alphabet-dependent leaves use the
    /// alphabet of `inputs[0]`.
    pub fn eval(&self, inputs: &[Dfa], limits: &Limits) -> Result<Dfa> {
        if inputs.is_empty() {
            return Err(Error::Arity { needed: self.arity().max(1), given: 0 });
        }
        if self.arity() > inputs.len() {
            return Err(Error::Arity { needed: self.arity(), given: inputs.len() });
        }
        let sigma = inputs[0].alphabet_size();
        if let Some(d) = inputs.iter().find(|d| d.alphabet_size() != sigma) {
            return Err(Error::AlphabetMismatch { expected: sigma, found: d.alphabet_size() });
        }
        self.eval_node(inputs, sigma, limits)
    }

    fn eval_node(&self, inputs: &[Dfa], sigma: usize, limits: &Limits) -> Result<Dfa> {
        let sub = |c: &OpAst| c.eval_node(inputs, sigma, limits);
        let out = match self {
            OpAst::Input(k) => inputs[*k].clone(),
            OpAst::Reverse(c) => ops::reverse(&sub(c)?, limits)?,
            OpAst::Star(c) => ops::star(&sub(c)?, limits)?,
            OpAst::Power(p, c) => ops::power(&sub(c)?, *p, limits)?,
            OpAst::CyclicShift(c) => ops::cyclic_shift(&sub(c)?, limits)?,
            OpAst::Half(c) => ops::half(&sub(c)?, limits)?,
            OpAst::Concat(cs) => {
                let vals = cs.iter().map(sub).collect::<Result<Vec<_>>>()?;
                let refs: Vec<&Dfa> = vals.iter().collect();
                ops::concat(&refs, limits)?
            }
            OpAst::Boolean(f, cs) => {
                let vals = cs.iter().map(sub).collect::<Result<Vec<_>>>()?;
                let refs: Vec<&Dfa> = vals.iter().collect();
                ops::boolean(f, &refs, limits)?
            }
            OpAst::ShuffleTraj(t, a, b) => ops::shuffle_traj(&t.dfa(), &sub(a)?, &sub(b)?, limits)?,
            OpAst::LeftQuotient { divisor, dividend } => {
                ops::left_quotient(&sub(divisor)?, &sub(dividend)?, limits)?
            }
            OpAst::Delete(a, b) => ops::delete(&sub(a)?, &sub(b)?, limits)?,
            OpAst::AlphabetLang(spec) => ops::alphabet_lang(spec, sigma)?,
            OpAst::InverseMorphism(map, c) => sub(c)?.inverse_morphism(map, map.len())?,
        };
        Ok(minimize(&out))
    }
}

impl fmt::Display for OpAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, head: &str, cs: &[OpAst]| -> fmt::Result {
            write!(f, "({head}")?;
            for c in cs {
                write!(f, " {c}")?;
            }
            write!(f, ")")
        };
        match self {
            OpAst::Input(k) => write!(f, "(in {k})"),
            OpAst::Reverse(c) => write!(f, "(rev {c})"),
            OpAst::Star(c) => write!(f, "(star {c})"),
            OpAst::Power(p, c) => write!(f, "(power {p} {c})"),
            OpAst::CyclicShift(c) => write!(f, "(cyc {c})"),
            OpAst::Half(c) => write!(f, "(half {c})"),
            OpAst::Concat(cs) => list(f, "concat", cs),
            OpAst::Boolean(func, cs) => {
                let m = cs.len();
                if m == 1 && *func == BooleanFn::not() {
                    list(f, "not", cs)
                } else if m >= 2 && *func == BooleanFn::or(m) {
                    list(f, "or", cs)
                } else if m >= 2 && *func == BooleanFn::and(m) {
                    list(f, "and", cs)
                } else if m >= 2 && *func == BooleanFn::xor(m) {
                    list(f, "xor", cs)
                } else {
                    list(f, &format!("bool \"{func}\""), cs)
                }
            }
            OpAst::ShuffleTraj(t, a, b) => match t.name() {
                Some(name) => write!(f, "(shuffle-traj {name} {a} {b})"),
                None => write!(f, "(shuffle-traj \"{}\" {a} {b})", trajectory_literal(&t.dfa())),
            },
            OpAst::LeftQuotient { divisor, dividend } => write!(f, "(lquo {divisor} {dividend})"),
            OpAst::Delete(a, b) => write!(f, "(del {a} {b})"),
            OpAst::AlphabetLang(spec) => {
                write!(f, "(sigma")?;
                if spec.lengths.is_empty() && spec.at_least.is_none() {
                    write!(f, " none")?;
                }
                for l in &spec.lengths {
                    write!(f, " n={l}")?;
                }
                match spec.at_least {
                    Some(0) if spec.lengths.is_empty() => write!(f, " all")?,
                    Some(t) => write!(f, " ge={t}")?,
                    None => {}
                }
                write!(f, ")")
            }
            OpAst::InverseMorphism(map, c) => {
                let body: Vec<String> = map.iter().map(ToString::to_string).collect();
                write!(f, "(invmorph \"{}\" {c})", body.join(" "))
            }
        }
    }
}

fn trajectory_literal(d: &Dfa) -> String {
    let finals: Vec<String> = d.final_states().iter().map(ToString::to_string).collect();
    let delta: Vec<String> = d.delta().iter().map(ToString::to_string).collect();
    format!("{};{};{};{}", d.state_count(), d.initial(), finals.join(","), delta.join(" "))
}

fn parse_trajectory_literal(text: &str) -> Result<Dfa> {
    let bad = |m: &str| Error::InvalidConfig(format!("trajectory literal {text:?}: {m}"));
    let parts: Vec<&str> = text.split(';').collect();
    if parts.len() != 4 {
        return Err(bad("expected STATES;INITIAL;FINALS;DELTA"));
    }
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad("not a number"));
    let states = num(parts[0])?;
    let initial = num(parts[1])?;
    let finals = parts[2]
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(num)
        .collect::<Result<Vec<_>>>()?;
    let delta = parts[3]
        .split_whitespace()
        .map(|s| num(s).map(|v| v as u32))
        .collect::<Result<Vec<_>>>()?;
    Dfa::new(states, 2, delta, initial, &finals)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Atom(String),
    Str(String),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            '(' => {
                out.push((i, Token::Open));
                chars.next();
            }
            ')' => {
                out.push((i, Token::Close));
                chars.next();
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some((_, '"')) => break,
                        Some((_, ch)) => s.push(ch),
                        None => {
                            return Err(Error::Parse { offset: i, message: "unterminated string".into() })
                        }
                    }
                }
                out.push((i, Token::Str(s)));
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut s = String::new();
                while let Some(&(_, ch)) = chars.peek() {
                    if ch.is_whitespace() || ch == '(' || ch == ')' || ch == '"' {
                        break;
                    }
                    s.push(ch);
                    chars.next();
                }
                out.push((i, Token::Atom(s)));
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|t| t.0).unwrap_or(self.len)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset: self.offset(), message: message.into() })
    }

    fn fail_at<T>(&mut self, pos: usize, message: impl Into<String>) -> Result<T> {
        self.pos = pos;
        self.err(message)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.1)
    }

    fn expect_close(&mut self) -> Result<()> {
        match self.next() {
            Some(Token::Close) => Ok(()),
            _ => {
                self.pos -= 1;
                self.err("expected ')'")
            }
        }
    }

    fn atom(&mut self) -> Result<String> {
        match self.next() {
            Some(Token::Atom(s)) => Ok(s),
            _ => {
                self.pos -= 1;
                self.err("expected an atom")
            }
        }
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        let s = self.atom()?;
        s.parse().or_else(|_| {
            self.pos = start;
            self.err(format!("expected a non-negative integer, found {s:?}"))
        })
    }

    fn string(&mut self) -> Result<String> {
        match self.next() {
            Some(Token::Str(s)) => Ok(s),
            _ => {
                self.pos -= 1;
                self.err("expected a quoted string")
            }
        }
    }

    fn exprs_until_close(&mut self) -> Result<Vec<OpAst>> {
        let mut out = Vec::new();
        while !matches!(self.peek(), Some(Token::Close) | None) {
            out.push(self.expr()?);
        }
        self.expect_close()?;
        Ok(out)
    }

    fn unary(&mut self, wrap: fn(Box<OpAst>) -> OpAst) -> Result<OpAst> {
        let c = self.expr()?;
        self.expect_close()?;
        Ok(wrap(Box::new(c)))
    }

    fn binary(&mut self) -> Result<(OpAst, OpAst)> {
        let a = self.expr()?;
        let b = self.expr()?;
        self.expect_close()?;
        Ok((a, b))
    }

    fn expr(&mut self) -> Result<OpAst> {
        match self.next() {
            Some(Token::Open) => {}
            Some(_) => {
                self.pos -= 1;
                return self.err("expected '('");
            }
            None => return self.err("unexpected end of input"),
        }
        let head_pos = self.pos;
        let head = self.atom()?;
        match head.as_str() {
            "in" => {
                let k = self.number()?;
                self.expect_close()?;
                Ok(OpAst::Input(k))
            }
            "rev" => self.unary(OpAst::Reverse),
            "star" => self.unary(OpAst::Star),
            "cyc" => self.unary(OpAst::CyclicShift),
            "half" => self.unary(OpAst::Half),
            "not" => {
                let c = self.expr()?;
                self.expect_close()?;
                Ok(OpAst::Boolean(BooleanFn::not(), vec![c]))
            }
            "power" => {
                let p = self.number()?;
                let c = self.expr()?;
                self.expect_close()?;
                Ok(OpAst::Power(p, Box::new(c)))
            }
            "concat" => {
                let cs = self.exprs_until_close()?;
                if cs.is_empty() {
                    return self.fail_at(head_pos, "concat needs at least one operand");
                }
                Ok(OpAst::Concat(cs))
            }
            "or" | "and" | "xor" => {
                let cs = self.exprs_until_close()?;
                if cs.len() < 2 {
                    return self.fail_at(head_pos, format!("{head} needs at least two operands"));
                }
                let f = match head.as_str() {
                    "or" => BooleanFn::or(cs.len()),
                    "and" => BooleanFn::and(cs.len()),
                    _ => BooleanFn::xor(cs.len()),
                };
                Ok(OpAst::Boolean(f, cs))
            }
            "bool" => {
                let table = self.string()?;
                let f = BooleanFn::parse(&table).or_else(|e| self.fail_at(head_pos, e.to_string()))?;
                let cs = self.exprs_until_close()?;
                if cs.len() != f.arity() {
                    return self.fail_at(
                        head_pos,
                        format!("truth table of arity {} given {} operands", f.arity(), cs.len()),
                    );
                }
                Ok(OpAst::Boolean(f, cs))
            }
            "shuffle-traj" => {
                let traj = match self.next() {
                    Some(Token::Atom(name)) => match Trajectory::from_name(&name) {
                        Some(t) => t,
                        None => return self.fail_at(head_pos, format!("unknown trajectory preset {name:?}")),
                    },
                    Some(Token::Str(lit)) => {
                        Trajectory::Custom(parse_trajectory_literal(&lit).or_else(|e| self.fail_at(head_pos, e.to_string()))?)
                    }
                    _ => return self.fail_at(head_pos, "expected a trajectory name or literal"),
                };
                let (a, b) = self.binary()?;
                Ok(OpAst::ShuffleTraj(traj, Box::new(a), Box::new(b)))
            }
            "lquo" => {
                let (divisor, dividend) = self.binary()?;
                Ok(OpAst::LeftQuotient { divisor: Box::new(divisor), dividend: Box::new(dividend) })
            }
            "del" => {
                let (a, b) = self.binary()?;
                Ok(OpAst::Delete(Box::new(a), Box::new(b)))
            }
            "sigma" => {
                let mut spec = LengthSpec::none();
                let mut saw_any = false;
                while let Some(Token::Atom(_)) = self.peek() {
                    let item = self.atom()?;
                    saw_any = true;
                    if item == "all" {
                        spec.at_least = Some(0);
                    } else if item == "none" {
                    } else if let Some(v) = item.strip_prefix("n=") {
                        let v = v.parse().or_else(|_| self.fail_at(head_pos, format!("bad length {item:?}")))?;
                        spec.lengths.push(v);
                    } else if let Some(v) = item.strip_prefix("ge=") {
                        let v: usize = v.parse().or_else(|_| self.fail_at(head_pos, format!("bad length {item:?}")))?;
                        spec.at_least = Some(spec.at_least.map_or(v, |t| t.min(v)));
                    } else {
                        return self.fail_at(head_pos, format!("unknown sigma item {item:?}"));
                    }
                }
                if !saw_any {
                    return self.fail_at(head_pos, "sigma needs a length specification");
                }
                self.expect_close()?;
                spec.lengths.sort_unstable();
                spec.lengths.dedup();
                Ok(OpAst::AlphabetLang(spec))
            }
            "invmorph" => {
                let body = self.string()?;
                let map = body
                    .split_whitespace()
                    .map(|s| s.parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .or_else(|_| self.fail_at(head_pos, "letter map must be integers"))?;
                if map.is_empty() {
                    return self.fail_at(head_pos, "letter map must be non-empty");
                }
                let c = self.expr()?;
                self.expect_close()?;
                Ok(OpAst::InverseMorphism(map, Box::new(c)))
            }
            other => self.fail_at(head_pos, format!("unknown operation {other:?}")),
        }
    }
}

impl FromStr for OpAst {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut p = Parser { tokens: tokenize(text)?, pos: 0, len: text.len() };
        let ast = p.expr()?;
        if p.pos < p.tokens.len() {
            return p.err("trailing input");
        }
        Ok(ast)
    }
}

pub fn parse(text: &str) -> Result<OpAst> {
    text.parse()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_forms() {
        for text in [
            "(star (not (star (in 0))))",
            "(bool \"0110\" (in 0) (in 1))",
            "(shuffle-traj concat (in 0) (in 1))",
            "(power 2 (in 0))",
            "(half (in 0))",
            "(del (in 0) (in 1))",
            "(lquo (in 1) (in 0))",
            "(cyc (in 0))",
            "(rev (in 0))",
            "(sigma all)",
            "(sigma n=3)",
            "(sigma ge=1)",
        ] {
            let ast = parse(text).unwrap_or_else(|e| panic!("{text}: {e}"));
            let again = parse(&ast.to_string()).unwrap();
            assert_eq!(ast, again, "{text}");
        }
    }

    #[test]
    fn canonical_rendering() {
        assert_eq!(parse("(bool \"0110\" (in 0) (in 1))").unwrap().to_string(), "(xor (in 0) (in 1))");
        assert_eq!(parse("(bool \"10\" (in 0))").unwrap().to_string(), "(not (in 0))");
        assert_eq!(parse("( sigma  n=2 n=0 ge=5 )").unwrap().to_string(), "(sigma n=0 n=2 ge=5)");
        assert_eq!(parse("(sigma none)").unwrap().to_string(), "(sigma none)");
        let lit = "(shuffle-traj \"1;0;0;0 0\" (in 0) (in 1))";
        assert_eq!(parse(lit).unwrap().to_string(), lit);
        let inv = "(invmorph \"1 1\" (in 0))";
        assert_eq!(parse(inv).unwrap().to_string(), inv);
    }

    #[test]
    fn arity_and_uniformity() {
        let ast = parse("(concat (sigma all) (in 0) (sigma all))").unwrap();
        assert_eq!(ast.arity(), 1);
        assert!(ast.is_uniform());
        let q = parse("(lquo (in 1) (half (in 0)))").unwrap();
        assert_eq!(q.arity(), 2);
        assert_eq!(q.nonuniform_primitives(), vec!["half", "lquo"]);
        assert_eq!(parse("(sigma all)").unwrap().arity(), 0);
    }

    #[test]
    fn parse_errors_carry_offsets() {
        for (text, offset) in [
            ("(star (in 0)", 12),
            ("(frob (in 0))", 1),
            ("(in x)", 4),
            ("(rev (in 0)) extra", 13),
            ("(bool \"011\" (in 0))", 1),
            ("(bool \"01\" (in 0) (in 1))", 1),
            ("(shuffle-traj zigzag (in 0) (in 1))", 1),
            ("(or (in 0))", 1),
            ("\"x", 0),
        ] {
            match parse(text) {
                Err(Error::Parse { offset: o, .. }) => assert_eq!(o, offset, "{text}"),
                other => panic!("{text}: expected parse error, got {other:?}"),
            }
        }
    }

    #[test]
    fn eval_checks_inputs() {
        let d = Dfa::trivial(2, true).unwrap();
        let ast = parse("(concat (in 0) (in 1))").unwrap();
        assert!(matches!(ast.eval(std::slice::from_ref(&d), &Limits::default()), Err(Error::Arity { .. })));
        let e = Dfa::trivial(3, true).unwrap();
        assert!(matches!(ast.eval(&[d.clone(), e], &Limits::default()), Err(Error::AlphabetMismatch { .. })));
        let id = parse("(in 0)").unwrap().eval(std::slice::from_ref(&d), &Limits::default()).unwrap();
        assert_eq!(id, d);
    }
}
