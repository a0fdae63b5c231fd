//! Text grammars for spaces, weights and step profiles.
//!
//! ```text
//! space   := "L:" num | "Lw:" num | "Lor:" num ":" num | "Orl:" young | "Zyg:" num ":" num | "Linf"
//! young   := "pow:" num | "powlog:" num ":" num | "linf" | "tab:" num "," num ("," num "," num)*
//! weight  := "pow:" num | "powlog:" num ":" num | "powloglog:" num ":" num ":" num | "one"
//! profile := "ind:" num | "pow:" num ":" num | "steps:" num "@" num ("," num "@" num)*
//! ```

use std::fmt;

use riembed_core::{RiSpace, StepFunction, Weight, YoungFunction};

/// A parse failure pointing at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError {
    pub kind: &'static str,
    pub input: String,
    pub position: usize,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let col = self.input[..self.position.min(self.input.len())].chars().count();
        writeln!(f, "invalid {} spec at column {}: {}", self.kind, col + 1, self.message)?;
        writeln!(f, "  {}", self.input)?;
        write!(f, "  {}^", " ".repeat(col))
    }
}

impl std::error::Error for SpecError {}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    at: usize,
}

struct Parser<'a> {
    kind: &'static str,
    input: &'a str,
    tokens: Vec<Token<'a>>,
    next: usize,
}

impl<'a> Parser<'a> {
    fn new(kind: &'static str, input: &'a str, sep: char) -> Self {
        let mut tokens = Vec::new();
        let mut start = 0;
        for (i, ch) in input.char_indices() {
            if ch == sep {
                tokens.push(Token { text: &input[start..i], at: start });
                start = i + ch.len_utf8();
            }
        }
        tokens.push(Token { text: &input[start..], at: start });
        Self { kind, input, tokens, next: 0 }
    }

    fn error(&self, at: usize, message: impl Into<String>) -> SpecError {
        SpecError { kind: self.kind, input: self.input.to_string(), position: at, message: message.into() }
    }

    fn word(&mut self, expected: &str) -> Result<Token<'a>, SpecError> {
        match self.tokens.get(self.next) {
            Some(t) => {
                self.next += 1;
                Ok(*t)
            }
            None => Err(self.error(self.input.len(), format!("expected {expected}"))),
        }
    }

    fn number(&mut self, what: &str) -> Result<(f64, usize), SpecError> {
        let t = self.word(what)?;
        parse_number(t.text).map(|v| (v, t.at)).ok_or_else(|| self.error(t.at, format!("expected {what}, found '{}'", t.text)))
    }

    fn rest(&self) -> Option<Token<'a>> {
        self.tokens.get(self.next).copied()
    }

    fn finish(&self) -> Result<(), SpecError> {
        match self.rest() {
            None => Ok(()),
            Some(t) => Err(self.error(t.at.saturating_sub(1), "unexpected trailing field")),
        }
    }
}

fn parse_number(s: &str) -> Option<f64> {
    let v: f64 = match s {
        "inf" | "Inf" | "infinity" => f64::INFINITY,
        _ => s.trim().parse().ok()?,
    };
    (!v.is_nan()).then_some(v)
}

fn core_err(p: &Parser<'_>, at: usize, e: riembed_core::Error) -> SpecError {
    p.error(at, e.to_string())
}

pub fn parse_space(input: &str) -> Result<RiSpace, SpecError> {
    let mut p = Parser::new("space", input, ':');
    let head = p.word("a space family")?;
    let space = match head.text {
        "L" => {
            let (v, at) = p.number("an exponent p")?;
            RiSpace::lebesgue(v).map_err(|e| core_err(&p, at, e))?
        }
        "Linf" => RiSpace::lebesgue(f64::INFINITY).map_err(|e| core_err(&p, head.at, e))?,
        "Lw" => {
            let (v, at) = p.number("an exponent p")?;
            RiSpace::weak_lebesgue(v).map_err(|e| core_err(&p, at, e))?
        }
        "Lor" => {
            let (a, at) = p.number("an exponent p")?;
            let (b, _) = p.number("an exponent q")?;
            RiSpace::lorentz(a, b).map_err(|e| core_err(&p, at, e))?
        }
        "Zyg" => {
            let (a, at) = p.number("an exponent p")?;
            let (b, _) = p.number("a log exponent alpha")?;
            RiSpace::zygmund(a, b).map_err(|e| core_err(&p, at, e))?
        }
        "Orl" => RiSpace::orlicz(parse_young(&mut p)?),
        other => {
            return Err(p.error(head.at, format!("unknown space family '{other}' (expected L, Lw, Lor, Orl, Zyg or Linf)")))
        }
    };
    p.finish()?;
    Ok(space)
}

fn parse_young(p: &mut Parser<'_>) -> Result<YoungFunction, SpecError> {
    let head = p.word("a Young function")?;
    match head.text {
        "pow" => {
            let (v, at) = p.number("an exponent")?;
            YoungFunction::power(v, 1.0).map_err(|e| core_err(p, at, e))
        }
        "powlog" => {
            let (a, at) = p.number("an exponent")?;
            let (b, _) = p.number("a log exponent")?;
            YoungFunction::power_log(a, b, 1.0).map_err(|e| core_err(p, at, e))
        }
        "linf" => Ok(YoungFunction::LinfLike),
        "tab" => {
            let t = p.word("knots")?;
            let mut values = Vec::new();
            let mut offset = t.at;
            for part in t.text.split(',') {
                let v = parse_number(part).ok_or_else(|| p.error(offset, format!("expected a knot coordinate, found '{part}'")))?;
                values.push(v);
                offset += part.len() + 1;
            }
            if values.len() % 2 != 0 {
                return Err(p.error(t.at, "knots come in (t, A(t)) pairs"));
            }
            let knots = values.chunks(2).map(|c| (c[0], c[1])).collect();
            YoungFunction::tabulated(knots).map_err(|e| core_err(p, t.at, e))
        }
        other => Err(p.error(head.at, format!("unknown Young function '{other}' (expected pow, powlog, linf or tab)"))),
    }
}

pub fn parse_weight(input: &str) -> Result<Weight, SpecError> {
    let mut p = Parser::new("weight", input, ':');
    let head = p.word("a weight family")?;
    let nums = |p: &mut Parser<'_>, k: usize| -> Result<Vec<f64>, SpecError> {
        (0..k).map(|_| p.number("an exponent").map(|v| v.0)).collect()
    };
    let w = match head.text {
        "one" => Weight::one(),
        "pow" => Weight::power(nums(&mut p, 1)?[0]),
        "powlog" => {
            let v = nums(&mut p, 2)?;
            Weight::power_log(v[0], v[1], 0.0).map_err(|e| core_err(&p, head.at, e))?
        }
        "powloglog" => {
            let v = nums(&mut p, 3)?;
            Weight::power_log(v[0], v[1], v[2]).map_err(|e| core_err(&p, head.at, e))?
        }
        other => {
            return Err(p.error(head.at, format!("unknown weight '{other}' (expected pow, powlog, powloglog or one)")))
        }
    };
    if let Weight::PowerLog { a, .. } = w {
        if !a.is_finite() {
            return Err(p.error(head.at, "weight exponents must be finite"));
        }
    }
    p.finish()?;
    Ok(w)
}

/// Cells per decade used for power profiles.
const PROFILE_DENSITY: f64 = 32.0;

pub fn parse_profile(input: &str) -> Result<StepFunction, SpecError> {
    let mut p = Parser::new("profile", input, ':');
    let head = p.word("a profile family")?;
    let f = match head.text {
        "ind" => {
            let (a, at) = p.number("a length")?;
            if !(a > 0.0 && a <= 1.0) {
                return Err(p.error(at, "indicator length must lie in (0,1]"));
            }
            let (edges, values) = if a < 1.0 { (vec![a], vec![1.0, 0.0]) } else { (vec![], vec![1.0]) };
            riembed_core::Grid::from_breakpoints(&edges)
                .and_then(|g| StepFunction::new(g, values))
                .map_err(|e| core_err(&p, at, e))?
        }
        "pow" => {
            let (beta, at) = p.number("an exponent")?;
            let (lo, lo_at) = p.number("a lower cut-off")?;
            if !(lo > 0.0 && lo < 1.0) {
                return Err(p.error(lo_at, "cut-off must lie in (0,1)"));
            }
            power_profile(beta, lo).map_err(|e| core_err(&p, at, e))?
        }
        "steps" => {
            let t = p.word("value@measure pairs")?;
            let mut samples = Vec::new();
            let mut offset = t.at;
            for part in t.text.split(',') {
                let (v, w) = part.split_once('@').ok_or_else(|| p.error(offset, "expected value@measure"))?;
                let v = parse_number(v).ok_or_else(|| p.error(offset, format!("expected a value, found '{v}'")))?;
                let w = parse_number(w)
                    .ok_or_else(|| p.error(offset, format!("expected a measure, found '{w}'")))?;
                samples.push((v, w));
                offset += part.len() + 1;
            }
            StepFunction::from_samples(&samples).map_err(|e| core_err(&p, t.at, e))?
        }
        other => {
            return Err(p.error(head.at, format!("unknown profile '{other}' (expected ind, pow or steps)")))
        }
    };
    p.finish()?;
    Ok(f)
}

/// `s^(-β)` on `(0,1)`, cut to the constant `lo^(-β)` on `(0,lo)`, by exact cell averages.
fn power_profile(beta: f64, lo: f64) -> riembed_core::Result<StepFunction> {
    let cells = (-lo.log10() * PROFILE_DENSITY).ceil().max(1.0) as usize;
    let mut edges = vec![lo];
    for i in 1..cells {
        edges.push(lo * (-lo.ln() * i as f64 / cells as f64).exp());
    }
    let mut values = vec![lo.powf(-beta)];
    let mut prev = lo;
    for &e in edges.iter().skip(1).chain(std::iter::once(&1.0)) {
        let avg = if (1.0 - beta).abs() < 1e-12 {
            (e / prev).ln() / (e - prev)
        } else {
            (e.powf(1.0 - beta) - prev.powf(1.0 - beta)) / ((1.0 - beta) * (e - prev))
        };
        values.push(avg);
        prev = e;
    }
    StepFunction::new(riembed_core::Grid::from_breakpoints(&edges)?, values)
}
