//! Symbolic cutoff functions.
//!
//! An [`EpsFunction`] is a finite rational combination of monomials
//! `prod_x x^a log^c(x) exp(-lambda x)` in the variables `e` (the ultraviolet
//! cutoff), `L`, `M` (a second infrared cutoff) and `t` (heat-kernel time).
//! Distinct monomials are linearly independent functions, so the sparse map
//! from monomials to coefficients is a normal form and equality is exact.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::scalar::{factorial, format_rational, Rational, Scalar};

/// Variables of the function algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// Ultraviolet cutoff, written `e`.
    Eps,
    /// Infrared cutoff, written `L`.
    L,
    /// Second infrared cutoff, written `M`.
    M,
    /// Heat-kernel time, written `t`.
    T,
}

const VARS: [Var; 4] = [Var::Eps, Var::L, Var::M, Var::T];

impl Var {
    fn idx(self) -> usize {
        self as usize
    }

    /// Textual name.
    pub fn name(self) -> &'static str {
        match self {
            Var::Eps => "e",
            Var::L => "L",
            Var::M => "M",
            Var::T => "t",
        }
    }
}

/// One-variable factor `x^pow log^log(x) exp(-rate x)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
struct Factor {
    pow: i32,
    log: u32,
    rate: Rational,
}

impl Factor {
    fn is_one(&self) -> bool {
        self.pow == 0 && self.log == 0 && self.rate.is_zero()
    }

    fn mul(&self, o: &Factor) -> Factor {
        Factor {
            pow: self.pow + o.pow,
            log: self.log + o.log,
            rate: &self.rate + &o.rate,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
struct Monomial([Factor; 4]);

impl Monomial {
    fn is_one(&self) -> bool {
        self.0.iter().all(Factor::is_one)
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        Monomial([
            self.0[0].mul(&o.0[0]),
            self.0[1].mul(&o.0[1]),
            self.0[2].mul(&o.0[2]),
            self.0[3].mul(&o.0[3]),
        ])
    }
}

/// Element of the cutoff-function algebra.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct EpsFunction {
    terms: BTreeMap<Monomial, Rational>,
}

impl EpsFunction {
    fn from_term(m: Monomial, c: Rational) -> Self {
        let mut f = Self::default();
        f.push(m, c);
        f
    }

    fn push(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    fn single(v: Var, f: Factor) -> Self {
        let mut m = Monomial::default();
        m.0[v.idx()] = f;
        Self::from_term(m, Rational::one())
    }

    /// Constant function.
    pub fn constant(q: Rational) -> Self {
        Self::from_term(Monomial::default(), q)
    }

    /// The function `x^n`.
    pub fn power(v: Var, n: i32) -> Self {
        Self::single(
            v,
            Factor {
                pow: n,
                ..Factor::default()
            },
        )
    }

    /// The variable itself.
    pub fn var(v: Var) -> Self {
        Self::power(v, 1)
    }

    /// `log(x)`.
    pub fn log(v: Var) -> Self {
        Self::single(
            v,
            Factor {
                log: 1,
                ..Factor::default()
            },
        )
    }

    /// `exp(-rate * x)`.
    pub fn exp_decay(v: Var, rate: Rational) -> Self {
        Self::single(
            v,
            Factor {
                rate,
                ..Factor::default()
            },
        )
    }

    /// Number of monomials.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `true` when the function involves the variable.
    pub fn depends_on(&self, v: Var) -> bool {
        self.terms.keys().any(|m| !m.0[v.idx()].is_one())
    }

    /// Constant value if the function is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().expect("one term");
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Expands every `exp(-lambda x)` factor to the order needed to read off
    /// the terms `x^a log^c x` with `a <= 0`, returning them with the remaining factors.
    fn low_order_terms(&self, v: Var) -> Vec<(i32, u32, Monomial, Rational)> {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            let f = &m.0[v.idx()];
            let mut rest = m.clone();
            rest.0[v.idx()] = Factor::default();
            if f.rate.is_zero() {
                if f.pow <= 0 {
                    out.push((f.pow, f.log, rest, c.clone()));
                }
                continue;
            }
            let minus_rate = -&f.rate;
            let mut mterm = 0i32;
            while f.pow + mterm <= 0 {
                let coeff = c * pow_rational(&minus_rate, mterm as u32) / factorial(mterm as usize);
                out.push((f.pow + mterm, f.log, rest.clone(), coeff));
                mterm += 1;
            }
        }
        out
    }

    /// Singular part with respect to `v` under the default scheme: the span of
    /// `x^a log^c x` with `a < 0`, or `a = 0` and `c > 0`.
    pub fn singular_part(&self, v: Var) -> Self {
        let mut out = Self::default();
        for (a, c, mut rest, coeff) in self.low_order_terms(v) {
            if a < 0 || (a == 0 && c > 0) {
                rest.0[v.idx()] = Factor {
                    pow: a,
                    log: c,
                    rate: Rational::zero(),
                };
                out.push(rest, coeff);
            }
        }
        out
    }

    /// `true` when the limit `v -> 0+` exists.
    pub fn has_limit(&self, v: Var) -> bool {
        self.singular_part(v).is_zero_fn()
    }

    /// Limit as `v -> 0+`, if it exists.
    pub fn limit(&self, v: Var) -> Option<Self> {
        if !self.has_limit(v) {
            return None;
        }
        let mut out = Self::default();
        for (a, c, rest, coeff) in self.low_order_terms(v) {
            if a == 0 && c == 0 {
                out.push(rest, coeff);
            }
        }
        Some(out)
    }

    /// Renames variable `from` to `to`, multiplying into any existing `to` factor.
    pub fn rename(&self, from: Var, to: Var) -> Self {
        if from == to {
            return self.clone();
        }
        let mut out = Self::default();
        for (m, c) in &self.terms {
            let mut n = m.clone();
            let f = std::mem::take(&mut n.0[from.idx()]);
            n.0[to.idx()] = n.0[to.idx()].mul(&f);
            out.push(n, c.clone());
        }
        out
    }

    /// Exchanges two variables.
    pub fn swap(&self, a: Var, b: Var) -> Self {
        let mut out = Self::default();
        for (m, c) in &self.terms {
            let mut n = m.clone();
            n.0.swap(a.idx(), b.idx());
            out.push(n, c.clone());
        }
        out
    }

    /// Substitutes a rational value for `v`. Fails when a logarithm or a
    /// nontrivial exponential in `v` is present, or on division by zero.
    pub fn substitute(&self, v: Var, q: &Rational) -> Result<Self> {
        let mut out = Self::default();
        for (m, c) in &self.terms {
            let f = &m.0[v.idx()];
            if f.log > 0 || (!f.rate.is_zero() && !q.is_zero()) {
                return Err(Error::Algebra(format!(
                    "cannot substitute a number for {} in a logarithm or exponential",
                    v.name()
                )));
            }
            if q.is_zero() && f.pow < 0 {
                return Err(Error::Algebra("division by zero in substitution".into()));
            }
            let val = if f.pow >= 0 {
                pow_rational(q, f.pow as u32)
            } else {
                Rational::one() / pow_rational(q, (-f.pow) as u32)
            };
            let mut n = m.clone();
            n.0[v.idx()] = Factor::default();
            out.push(n, c * val);
        }
        Ok(out)
    }

    /// Multiplicative inverse of a single logarithm-free monomial.
    pub fn inverse(&self) -> Result<Self> {
        if self.terms.len() != 1 {
            return Err(Error::Algebra(
                "only single monomials can be inverted".into(),
            ));
        }
        let (m, c) = self.terms.iter().next().expect("one term");
        if m.0.iter().any(|f| f.log > 0) {
            return Err(Error::Algebra("cannot invert a logarithm".into()));
        }
        let mut n = m.clone();
        for f in n.0.iter_mut() {
            f.pow = -f.pow;
            f.rate = -f.rate.clone();
        }
        Ok(Self::from_term(n, Rational::one() / c))
    }

    /// Integer power, negative exponents allowed for invertible monomials.
    pub fn powi(&self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::constant(Rational::one());
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn is_zero_fn(&self) -> bool {
        self.terms.is_empty()
    }

    /// Parses the textual grammar used in family files, for example `"1/e + 2*log(e)"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut p = Parser {
            s: s.as_bytes(),
            pos: 0,
        };
        let f = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(Error::Parse(format!(
                "unexpected input at position {} in {s:?}",
                p.pos
            )));
        }
        Ok(f)
    }
}

fn pow_rational(q: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..n {
        acc *= q;
    }
    acc
}

impl Scalar for EpsFunction {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::constant(Rational::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_rational(q: &Rational) -> Self {
        Self::constant(q.clone())
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }
    fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.push(m.clone(), c.clone());
        }
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.push(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
    fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
    fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::default();
        }
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }
}

impl fmt::Display for EpsFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let factors = monomial_string(m);
            let neg = c.is_negative();
            let abs = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            match (factors.is_empty(), abs == Rational::one()) {
                (true, _) => write!(f, "{}", format_rational(&abs))?,
                (false, true) => write!(f, "{factors}")?,
                (false, false) => write!(f, "{}*{factors}", format_rational(&abs))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for EpsFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn monomial_string(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for v in VARS {
        let fac = &m.0[v.idx()];
        let x = v.name();
        match fac.pow {
            0 => {}
            1 => parts.push(x.to_string()),
            p => parts.push(format!("{x}^{p}")),
        }
        match fac.log {
            0 => {}
            1 => parts.push(format!("log({x})")),
            c => parts.push(format!("log({x})^{c}")),
        }
        if !fac.rate.is_zero() {
            let q = -fac.rate.clone();
            if q == Rational::one() {
                parts.push(format!("exp({x})"));
            } else if -q.clone() == Rational::one() {
                parts.push(format!("exp(-{x})"));
            } else {
                parts.push(format!("exp({}*{x})", format_rational(&q)));
            }
        }
    }
    parts.join("*")
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected '{}' at position {}",
                c as char, self.pos
            )))
        }
    }

    fn expr(&mut self) -> Result<EpsFunction> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc.add_assign(&t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc.add_assign(&t.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<EpsFunction> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.unary()?;
                    acc = acc.mul(&f);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let f = self.unary()?;
                    acc = acc.mul(&f.inverse()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<EpsFunction> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let n = self.integer()? as i32;
            return base.powi(if neg { -n } else { n });
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!(
                "expected a number at position {start}"
            )));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|e| Error::Parse(format!("{e}")))
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn variable(name: &str) -> Result<Var> {
        match name {
            "e" | "eps" => Ok(Var::Eps),
            "L" => Ok(Var::L),
            "M" => Ok(Var::M),
            "t" => Ok(Var::T),
            _ => Err(Error::Parse(format!("unknown variable {name:?}"))),
        }
    }

    fn atom(&mut self) -> Result<EpsFunction> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let f = self.expr()?;
                self.expect(b')')?;
                Ok(f)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(EpsFunction::constant(Rational::from_integer(n.into())))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.ident();
                match name.as_str() {
                    "log" => {
                        self.expect(b'(')?;
                        let v = Self::variable(&self.ident())?;
                        self.expect(b')')?;
                        Ok(EpsFunction::log(v))
                    }
                    "exp" => {
                        self.expect(b'(')?;
                        let arg = self.expr()?;
                        self.expect(b')')?;
                        exp_of_linear(&arg)
                    }
                    _ => Ok(EpsFunction::var(Self::variable(&name)?)),
                }
            }
            _ => Err(Error::Parse(format!(
                "unexpected input at position {}",
                self.pos
            ))),
        }
    }
}

fn exp_of_linear(arg: &EpsFunction) -> Result<EpsFunction> {
    if arg.terms.is_empty() {
        return Ok(EpsFunction::one());
    }
    if arg.terms.len() == 1 {
        let (m, c) = arg.terms.iter().next().expect("one term");
        let active: Vec<Var> = VARS
            .into_iter()
            .filter(|v| !m.0[v.idx()].is_one())
            .collect();
        if active.len() == 1 {
            let v = active[0];
            let f = &m.0[v.idx()];
            if f.pow == 1 && f.log == 0 && f.rate.is_zero() {
                return Ok(EpsFunction::exp_decay(v, -c.clone()));
            }
        }
    }
    Err(Error::Parse(
        "exp() needs an argument of the form q*x".into(),
    ))
}
