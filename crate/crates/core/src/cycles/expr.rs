//! Exact rational functions in `t, x1, x2, ...` with integer coefficients.
//!
//! Polynomials are sparse maps from exponent vectors to integers. Variable
//! `0` is `t` and variable `k ≥ 1` is `x_k`; exponent vectors carry no
//! trailing zeros, so their `Vec` order is the lexicographic monomial order
//! with `t > x1 > x2 > ...` and the leading term is the last entry.
//! Fractions are kept reduced with a denominator of positive leading
//! coefficient, so equal functions have equal representations.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Index of a variable: `0` is `t`, `k` is `x_k`.
pub type Var = u16;

/// The base variable `t`.
pub const T: Var = 0;

type Monomial = Vec<u16>;

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn mono_mul(a: &[u16], b: &[u16]) -> Monomial {
    let n = a.len().max(b.len());
    let e = (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect();
    trim(e)
}

fn mono_div(a: &[u16], b: &[u16]) -> Option<Monomial> {
    if b.len() > a.len() {
        return None;
    }
    let mut e = Vec::with_capacity(a.len());
    for (i, &ai) in a.iter().enumerate() {
        e.push(ai.checked_sub(b.get(i).copied().unwrap_or(0))?);
    }
    Some(trim(e))
}

fn exponent(m: &[u16], v: Var) -> u16 {
    m.get(v as usize).copied().unwrap_or(0)
}

/// Sparse multivariate polynomial with integer coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly(BTreeMap<Monomial, BigInt>);

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c.into());
        p
    }

    pub fn var(v: Var) -> Self {
        let mut m = vec![0; v as usize + 1];
        m[v as usize] = 1;
        let mut p = Self::zero();
        p.add_term(m, BigInt::one());
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(m).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.retain(|_, c| !c.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// The constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.0.len() {
            0 => Some(BigInt::zero()),
            1 => self.0.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    fn leading(&self) -> Option<(&Monomial, &BigInt)> {
        self.0.iter().next_back()
    }

    /// Variables occurring with nonzero exponent.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for m in self.0.keys() {
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    out.insert(i as Var);
                }
            }
        }
        out
    }

    pub fn degree_in(&self, v: Var) -> u16 {
        self.0.keys().map(|m| exponent(m, v)).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                out.add_term(mono_mul(m1, m2), c1 * c2);
            }
        }
        out
    }

    fn pow(&self, k: u16) -> Self {
        (0..k).fold(Self::constant(1), |acc, _| acc.mul(self))
    }

    /// `self / d` when the division is exact.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (dm, dc) = d.leading()?;
        let mut r = self.clone();
        let mut q = Self::zero();
        while let Some((rm, rc)) = r.leading() {
            let m = mono_div(rm, dm)?;
            let (c, rem) = rc.div_rem(dc);
            if !rem.is_zero() {
                return None;
            }
            let mut term = Self::zero();
            term.add_term(m, c);
            r = r.sub(&term.mul(d));
            q = q.add(&term);
        }
        Some(q)
    }

    /// Coefficients in `v`, lowest degree first; they do not involve `v`.
    fn split(&self, v: Var) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.0 {
            let k = exponent(m, v) as usize;
            let mut rest = m.clone();
            if (v as usize) < rest.len() {
                rest[v as usize] = 0;
            }
            out[k].add_term(trim(rest), c.clone());
        }
        out
    }

    /// Greatest common divisor with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalized_sign();
        }
        if other.is_zero() {
            return self.normalized_sign();
        }
        let all: BTreeSet<Var> = self.vars().union(&other.vars()).copied().collect();
        let Some(&v) = all.iter().next_back() else {
            let g = self.as_constant().unwrap().gcd(&other.as_constant().unwrap());
            return Poly::constant(g);
        };
        let (ca, pa) = content_split(self, v);
        let (cb, pb) = content_split(other, v);
        let c = ca.gcd(&cb);
        let (mut a, mut b) = (pa, pb);
        if a.degree_in(v) < b.degree_in(v) {
            std::mem::swap(&mut a, &mut b);
        }
        let g = loop {
            if b.degree_in(v) == 0 {
                break Poly::constant(1);
            }
            let r = pseudo_rem(&a, &b, v);
            if r.is_zero() {
                break b;
            }
            a = b;
            b = content_split(&r, v).1;
        };
        c.mul(&content_split(&g, v).1).normalized_sign()
    }

    fn normalized_sign(&self) -> Self {
        match self.leading() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Substitutes `value` for `v`.
    pub fn substitute(&self, v: Var, value: &Rational) -> Option<Rational> {
        let coeffs = self.split(v);
        let mut acc = Rational::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(value).add(&Rational::from_poly(c.clone()));
        }
        Some(acc)
    }

    /// Renames variables through `map`.
    pub fn rename(&self, map: &dyn Fn(Var) -> Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.0 {
            let mut e: Monomial = Vec::new();
            for (i, &k) in m.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let j = map(i as Var) as usize;
                if e.len() <= j {
                    e.resize(j + 1, 0);
                }
                e[j] += k;
            }
            out.add_term(trim(e), c.clone());
        }
        out
    }
}

// Content (gcd of the coefficients in `v`) and primitive part.
fn content_split(p: &Poly, v: Var) -> (Poly, Poly) {
    let coeffs = p.split(v);
    let mut c = Poly::zero();
    for k in &coeffs {
        c = c.gcd(k);
    }
    if p.leading().is_some_and(|(_, lc)| lc.is_negative()) {
        c = c.neg();
    }
    let prim = p.exact_div(&c).expect("content divides");
    (c, prim)
}

fn pseudo_rem(a: &Poly, b: &Poly, v: Var) -> Poly {
    let db = b.degree_in(v);
    let lb = b.split(v).pop().expect("nonzero divisor");
    let x = Poly::var(v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.split(v).pop().expect("nonzero");
        r = r.mul(&lb).sub(&b.mul(&lr).mul(&x.pow(dr - db)));
    }
    r
}

/// Reduced quotient of two polynomials.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational {
    num: Poly,
    den: Poly,
}

impl Rational {
    /// `num / den` in lowest terms; `None` if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self::zero());
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap());
        if den.leading().is_some_and(|(_, c)| c.is_negative()) {
            num = num.neg();
            den = den.neg();
        }
        Some(Self { num, den })
    }

    pub fn zero() -> Self {
        Self {
            num: Poly::zero(),
            den: Poly::constant(1),
        }
    }

    pub fn constant(c: i64) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> Self {
        Self {
            num: p,
            den: Poly::constant(1),
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self, c: i64) -> bool {
        *self == Self::constant(c)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.num.vars().union(&self.den.vars()).copied().collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).unwrap()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    /// `self / o`; `None` when `o` is zero.
    pub fn div(&self, o: &Self) -> Option<Self> {
        Self::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    /// Substitutes `value` for `v`; `None` if the result has a vanishing
    /// denominator.
    pub fn substitute(&self, v: Var, value: &Rational) -> Option<Self> {
        let n = self.num.substitute(v, value)?;
        let d = self.den.substitute(v, value)?;
        n.div(&d)
    }

    pub fn rename(&self, map: &dyn Fn(Var) -> Var) -> Self {
        Self::new(self.num.rename(map), self.den.rename(map)).expect("renaming keeps denominators nonzero")
    }

    /// Solves `self = 0` (or `self = ∞` when `at_infinity`) for `v`, if the
    /// relevant polynomial is Möbius in `v` and actually involves it.
    pub fn solve(&self, v: Var, at_infinity: bool) -> Result<Option<Rational>> {
        let p = if at_infinity { &self.den } else { &self.num };
        let deg = p.degree_in(v);
        if deg > 1 || self.den.degree_in(v) > 1 || self.num.degree_in(v) > 1 {
            return Err(Error::NotMobius(self.to_string(), var_name(v)));
        }
        if deg == 0 {
            return Ok(None);
        }
        let c = p.split(v);
        Ok(Rational::new(c[0].neg(), c[1].clone()))
    }
}

/// `t` or `x<k>`.
pub fn var_name(v: Var) -> String {
    if v == T {
        "t".into()
    } else {
        format!("x{v}")
    }
}

fn fmt_monomial(m: &[u16]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(var_name(i as Var)),
            _ => parts.push(format!("{}^{e}", var_name(i as Var))),
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let degree = |m: &Monomial| m.iter().map(|&e| e as u32).sum::<u32>();
        let mut terms: Vec<(&Monomial, &BigInt)> = self.0.iter().collect();
        terms.sort_by(|a, b| {
            b.1.is_positive()
                .cmp(&a.1.is_positive())
                .then(degree(b.0).cmp(&degree(a.0)))
                .then_with(|| cmp_vars_first(a.0, b.0))
        });
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let mag = c.abs();
            let sign = if c.is_negative() {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            f.write_str(sign)?;
            let mono = fmt_monomial(m);
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => f.write_str(&mono)?,
                (false, false) => write!(f, "{mag}*{mono}")?,
            }
        }
        Ok(())
    }
}

// Lower variable indices first, then higher exponents.
fn cmp_vars_first(a: &[u16], b: &[u16]) -> Ordering {
    for i in 0..a.len().max(b.len()) {
        let (x, y) = (a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0));
        if x != y {
            return y.cmp(&x);
        }
    }
    Ordering::Equal
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn atom(p: &Poly) -> String {
    let s = p.to_string();
    if p.0.len() > 1 || s.starts_with('-') || s.contains('*') {
        format!("({s})")
    } else {
        s
    }
}

fn fraction(num: &Poly, den: &Poly) -> String {
    if den.as_constant().is_some_and(|c| c.is_one()) {
        return num.to_string();
    }
    let n = if num.0.len() > 1 {
        format!("({num})")
    } else {
        num.to_string()
    };
    format!("{n}/{}", atom(den))
}

impl fmt::Display for Rational {
    /// Prints `N/D`, or `1-G` when that is shorter.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let direct = fraction(&self.num, &self.den);
        let g = self.den.sub(&self.num);
        let alt = if g.is_zero() || g.to_string().starts_with('-') {
            None
        } else {
            let body = fraction(&g, &self.den);
            let body = if g.0.len() > 1 && self.den.as_constant().is_some_and(|c| c.is_one()) {
                format!("({body})")
            } else {
                body
            };
            Some(format!("1-{body}"))
        };
        match alt {
            Some(a) if a.len() < direct.len() => f.write_str(&a),
            _ => f.write_str(&direct),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigInt),
    Var(Var),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let bad = |msg: String| Error::Parse(msg);
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token::Num(
                text.parse().map_err(|_| bad(format!("bad integer {text}")))?,
            ));
        } else if c == 't' {
            out.push(Token::Var(T));
            i += 1;
        } else if c == 'x' {
            let start = i + 1;
            i = start;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let k: Var = text
                .parse()
                .map_err(|_| bad(format!("variable x needs an index in {s:?}")))?;
            if k == 0 {
                return Err(bad("variables are numbered from x1".into()));
            }
            out.push(Token::Var(k));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(bad(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Rational> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Rational> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                acc = acc.div(&d).ok_or_else(|| Error::Parse("division by zero".into()))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Rational> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.eat('^') {
            match self.tokens.get(self.pos).cloned() {
                Some(Token::Num(n)) => {
                    self.pos += 1;
                    let k: u32 = n.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
                    return Ok((0..k).fold(Rational::constant(1), |acc, _| acc.mul(&base)));
                }
                _ => return Err(Error::Parse("expected an integer exponent".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Rational> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                Ok(Rational::from_poly(Poly::constant(n)))
            }
            Some(Token::Var(v)) => {
                self.pos += 1;
                Ok(Rational::var(v))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            tokens: tokenize(s)?,
            pos: 0,
        };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("trailing input in {s:?}")));
        }
        Ok(e)
    }
}
