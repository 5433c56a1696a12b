//! Multivariate rational functions over Q.
//!
//! Denominators are kept as a product of monic factors. Factors are never
//! factored further; cancellation is by trial division only, which is
//! enough to keep the expressions produced by the engine small.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exponent::{fmt_q, parse_decimal, q_to_f64, Assumptions, Exponent, Q};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn vars(&self) -> &[(String, u32)] {
        &self.0
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < o.0.len() {
            match (self.0.get(i), o.0.get(j)) {
                (Some(a), Some(b)) if a.0 == b.0 => {
                    out.push((a.0.clone(), a.1 + b.1));
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a.0 < b.0 => {
                    out.push(a.clone());
                    i += 1;
                }
                (Some(a), None) => {
                    out.push(a.clone());
                    i += 1;
                }
                (_, Some(b)) => {
                    out.push(b.clone());
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial(out)
    }

    fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut out = Vec::new();
        let mut j = 0;
        for (v, e) in &self.0 {
            let mut e = *e;
            if let Some((w, f)) = o.0.get(j) {
                if w < v {
                    return None;
                }
                if w == v {
                    if *f > e {
                        return None;
                    }
                    e -= f;
                    j += 1;
                }
            }
            if e > 0 {
                out.push((v.clone(), e));
            }
        }
        (j == o.0.len()).then_some(Monomial(out))
    }

    fn exp_of(&self, v: &str) -> u32 {
        self.0.iter().find(|(w, _)| w == v).map(|(_, e)| *e).unwrap_or(0)
    }

    /// Degree-lexicographic monomial order.
    fn deglex(&self, o: &Monomial) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| {
            let mut names: Vec<&str> = self.0.iter().chain(o.0.iter()).map(|(v, _)| v.as_str()).collect();
            names.sort_unstable();
            names.dedup();
            for v in names {
                let c = self.exp_of(v).cmp(&o.exp_of(v));
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(name: &str) -> Self {
        let mut p = Poly::zero();
        p.terms.insert(Monomial::var(name), Q::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Q> {
        &self.terms
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().max_by(|a, b| a.0.deglex(b.0))
    }

    fn mul_term(&self, m: &Monomial, c: &Q) -> Poly {
        Poly { terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect() }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::constant(Q::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lm_d, lc_d) = d.leading()?;
        let mut r = self.clone();
        let mut quo = Poly::zero();
        while let Some((lm, lc)) = r.leading() {
            let m = lm.div(lm_d)?;
            let c = lc / lc_d;
            r = &r - &d.mul_term(&m, &c);
            quo.add_term(m, c);
        }
        Some(quo)
    }

    /// Splits off the leading coefficient: `self = c * monic`.
    fn normalize(&self) -> (Q, Poly) {
        match self.leading() {
            Some((_, c)) => {
                let c = c.clone();
                (c.clone(), self.scale(&c.recip()))
            }
            None => (Q::zero(), Poly::zero()),
        }
    }

    pub fn eval(&self, env: &Assumptions) -> Option<f64> {
        let mut s = 0.0;
        for (m, c) in &self.terms {
            let mut t = q_to_f64(c);
            for (v, e) in &m.0 {
                let x = match env.get(v) {
                    Some(x) => *x,
                    None => eval_atom(v, env)?,
                };
                t *= f64::powi(x, *e as i32);
            }
            s += t;
        }
        Some(s)
    }

    fn sorted_terms(&self) -> Vec<(&Monomial, &Q)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.deglex(a.0));
        v
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), -c.clone());
        }
        p
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut p = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                p.add_term(m1.mul(m2), c1 * c2);
            }
        }
        p
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let mut parts = Vec::new();
            if !a.is_one() || m.0.is_empty() {
                parts.push(fmt_q(&a));
            }
            for (v, e) in &m.0 {
                if *e == 1 {
                    parts.push(v.clone());
                } else {
                    parts.push(format!("{v}^{e}"));
                }
            }
            out.push_str(&parts.join("*"));
        }
        f.write_str(&out)
    }
}

#[derive(Clone, Debug)]
pub struct RatFunc {
    num: Poly,
    den: BTreeMap<Poly, u32>,
}

pub type Sym = RatFunc;

impl RatFunc {
    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: BTreeMap::new() }
    }

    pub fn constant(c: Q) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn var(name: &str) -> Self {
        Self::from_poly(Poly::var(name))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> Poly {
        self.den.iter().fold(Poly::constant(Q::one()), |acc, (f, e)| &acc * &f.pow(*e))
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Polynomial of degree at most one in plain identifiers.
    pub fn as_affine(&self) -> Option<Exponent> {
        if !self.den.is_empty() {
            return None;
        }
        let mut constant = Q::zero();
        let mut terms = Vec::new();
        for (m, c) in &self.num.terms {
            match m.0.as_slice() {
                [] => constant = c.clone(),
                [(v, 1)] if is_plain_ident(v) => terms.push((v.clone(), c.clone())),
                _ => return None,
            }
        }
        Some(Exponent::from_parts(constant, terms))
    }

    fn cancel(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let factors: Vec<(Poly, u32)> = std::mem::take(&mut self.den).into_iter().collect();
        for (f, mut e) in factors {
            while e > 0 {
                match self.num.div_exact(&f) {
                    Some(q) => {
                        self.num = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            if e > 0 {
                *self.den.entry(f).or_insert(0) += e;
            }
        }
        self
    }

    fn insert_factor(den: &mut BTreeMap<Poly, u32>, g: Poly, e: u32) -> Q {
        let (c, g) = g.normalize();
        if g.as_constant().is_some() {
            return c.pow(e as i32);
        }
        if let Some(x) = den.get_mut(&g) {
            *x += e;
            return c.pow(e as i32);
        }
        let existing: Vec<Poly> = den.keys().cloned().collect();
        for f in existing {
            if let Some(h) = g.div_exact(&f) {
                *den.get_mut(&f).unwrap() += e;
                return c.pow(e as i32) * Self::insert_factor(den, h, e);
            }
            if let Some(h) = f.div_exact(&g) {
                let ef = den.remove(&f).unwrap();
                den.insert(g, ef + e);
                return c.pow(e as i32) * Self::insert_factor(den, h, ef);
            }
        }
        den.insert(g, e);
        c.pow(e as i32)
    }

    pub fn pow_i64(&self, n: i64) -> Option<RatFunc> {
        let mut acc = RatFunc::constant(Q::one());
        for _ in 0..n.unsigned_abs() {
            acc = acc * self.clone();
        }
        if n < 0 {
            acc.try_recip()
        } else {
            Some(acc)
        }
    }

    pub fn try_recip(&self) -> Option<RatFunc> {
        if self.num.is_zero() {
            return None;
        }
        let num = self.denominator();
        let mut den = BTreeMap::new();
        let c = Self::insert_factor(&mut den, self.num.clone(), 1);
        Some(RatFunc { num: num.scale(&c.recip()), den }.cancel())
    }

    pub fn eval(&self, env: &Assumptions) -> Option<f64> {
        let n = self.num.eval(env)?;
        let mut d = 1.0;
        for (f, e) in &self.den {
            d *= f64::powi(f.eval(env)?, *e as i32);
        }
        Some(n / d)
    }

    /// All variable names appearing anywhere.
    pub fn variables(&self) -> Vec<String> {
        let mut v: Vec<String> = std::iter::once(&self.num)
            .chain(self.den.keys())
            .flat_map(|p| p.terms.keys().flat_map(|m| m.0.iter().map(|(n, _)| n.clone())))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut p = Parser { s: s.as_bytes(), i: 0, src: s };
        let r = p.expr()?;
        p.ws();
        if p.i != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(r)
    }
}

fn is_plain_ident(v: &str) -> bool {
    let mut cs = v.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &Self) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        (self.clone() - o.clone()).num.is_zero()
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, o: RatFunc) -> RatFunc {
        if self.num.is_zero() {
            return o;
        }
        if o.num.is_zero() {
            return self;
        }
        if self.den == o.den {
            return RatFunc { num: &self.num + &o.num, den: self.den }.cancel();
        }
        let mut l = self.den.clone();
        for (f, e) in &o.den {
            let x = l.entry(f.clone()).or_insert(0);
            *x = (*x).max(*e);
        }
        let cofactor = |d: &BTreeMap<Poly, u32>| {
            l.iter().fold(Poly::constant(Q::one()), |acc, (f, e)| &acc * &f.pow(e - d.get(f).copied().unwrap_or(0)))
        };
        let num = &(&self.num * &cofactor(&self.den)) + &(&o.num * &cofactor(&o.den));
        RatFunc { num, den: l }.cancel()
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, o: RatFunc) -> RatFunc {
        self + (-o)
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: self.num.scale(&-Q::one()), den: self.den }
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, o: RatFunc) -> RatFunc {
        if self.num.is_zero() || o.num.is_zero() {
            return RatFunc::constant(Q::zero());
        }
        let mut den = self.den;
        let mut c = Q::one();
        for (f, e) in o.den {
            c *= RatFunc::insert_factor(&mut den, f, e);
        }
        RatFunc { num: (&self.num * &o.num).scale(&c.recip()), den }.cancel()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let dens: Vec<String> = self
            .den
            .iter()
            .map(|(p, e)| {
                let s = if p.terms.len() > 1 { format!("({p})") } else { p.to_string() };
                if *e > 1 {
                    format!("{s}^{e}")
                } else {
                    s
                }
            })
            .collect();
        let n = if self.num.terms.len() > 1 { format!("({})", self.num) } else { self.num.to_string() };
        write!(f, "{n}/({})", dens.join("*"))
    }
}

mod scalar_impl {
    use std::cmp::Ordering;

    use super::RatFunc;
    use crate::error::{Error, Result};
    use crate::exponent::{q_from_f64, q_to_f64, Assumptions, Exponent, Q};
    use crate::ring::{Ring, Scalar};

    impl Ring for RatFunc {
        fn zero() -> Self {
            RatFunc::constant(<Q as num_traits::Zero>::zero())
        }
        fn one() -> Self {
            RatFunc::constant(<Q as num_traits::One>::one())
        }
        fn from_q(q: &Q) -> Self {
            RatFunc::constant(q.clone())
        }
        fn is_zero(&self) -> bool {
            self.num.is_zero()
        }
        fn try_inv(&self) -> Option<Self> {
            self.try_recip()
        }
    }

    impl Scalar for RatFunc {
        const EXACT: bool = true;
        const NAME: &'static str = "symbolic";

        fn from_exponent(e: &Exponent) -> Result<Self> {
            let mut r = RatFunc::constant(e.constant_part().clone());
            for (s, c) in e.symbolic_terms() {
                r = r + RatFunc::var(s) * RatFunc::constant(c.clone());
            }
            Ok(r)
        }

        fn pow_exponent(&self, e: &Exponent) -> Result<Self> {
            if let Some(n) = e.as_i64() {
                return self.powi(n);
            }
            if let Some(c) = self.as_constant() {
                if let Ok(v) = c.pow_exponent(e) {
                    return Ok(RatFunc::constant(v));
                }
            }
            // x^{s+n} = x^n · [x^s] with [x^s] an opaque atom
            let n = e.constant_part().floor();
            let s = e.add_q(&-n.clone());
            let n: i64 = n.to_integer().try_into().map_err(|_| Error::Inexact(format!("({self})^({e})")))?;
            let base = if self.numerator().terms().len() > 1 || !self.den.is_empty() {
                format!("({self})")
            } else {
                self.to_string()
            };
            Ok(self.powi(n)? * RatFunc::var(&format!("{base}^({s})")))
        }

        fn ln(&self) -> Result<Self> {
            if self.as_constant().is_some_and(|c| num_traits::One::is_one(&c)) {
                return Ok(RatFunc::zero());
            }
            Ok(RatFunc::var(&format!("log({self})")))
        }

        fn atom(name: &str) -> Result<Self> {
            Ok(RatFunc::var(name))
        }

        fn to_f64(&self) -> Option<f64> {
            self.as_constant().map(|c| q_to_f64(&c))
        }

        fn eval_f64(&self, env: &Assumptions) -> Option<f64> {
            self.eval(env)
        }

        fn sign(&self) -> Option<Ordering> {
            self.as_constant().map(|c| c.cmp(&<Q as num_traits::Zero>::zero()))
        }

        fn parse(s: &str) -> Result<Self> {
            RatFunc::parse(s)
        }

        fn from_f64(x: f64) -> Result<Self> {
            q_from_f64(x).map(RatFunc::constant)
        }
    }
}

/// Numeric value of an opaque atom such as `[θ^(s)*Gamma(g)]`, `x^(s)` or `A_t[α]`.
fn eval_atom(name: &str, env: &Assumptions) -> Option<f64> {
    use statrs::function::gamma::gamma;
    let expr = |s: &str| RatFunc::parse(s).ok()?.eval(env);
    let expo = |s: &str| Exponent::parse(s).ok()?.eval(env);
    if let Some(a) = name.strip_prefix("A_t[").and_then(|r| r.strip_suffix(']')) {
        let a = expo(a)?;
        let k = gamma((a + 1.0) / 2.0) / ((a * std::f64::consts::PI).sqrt() * gamma(a / 2.0));
        return Some(a.powf((a + 1.0) / 2.0) * k);
    }
    if let Some(body) = name.strip_prefix('[').and_then(|r| r.strip_suffix(")]")) {
        let (pow, g) = body.split_once("*Gamma(")?;
        return Some(eval_power(pow, &expr, &expo)? * gamma(expo(g)?));
    }
    eval_power(name, &expr, &expo)
}

/// `base^(s)` with the exponent in the last parenthesised group.
fn eval_power(s: &str, expr: &dyn Fn(&str) -> Option<f64>, expo: &dyn Fn(&str) -> Option<f64>) -> Option<f64> {
    let body = s.strip_suffix(')')?;
    let cut = body.rfind("^(")?;
    let base = &body[..cut];
    let base = base.strip_prefix('(').and_then(|b| b.strip_suffix(')')).unwrap_or(base);
    Some(expr(base)?.powf(expo(&body[cut + 2..])?))
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in '{}'", self.i, self.src))
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.i += 1;
            let t = self.term()?;
            acc = if c == b'+' { acc + t } else { acc - t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.i += 1;
            let t = self.unary()?;
            acc = if c == b'*' {
                acc * t
            } else {
                let inv = t.try_recip().ok_or_else(|| self.err("division by zero"))?;
                acc * inv
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(b'-') => {
                self.i += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.i += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.i += 1;
            let neg = match self.peek() {
                Some(b'-') => {
                    self.i += 1;
                    true
                }
                _ => false,
            };
            let n = match self.peek() {
                Some(b'(') => {
                    let e = self.primary()?;
                    e.as_constant()
                        .filter(|c| c.is_integer())
                        .ok_or_else(|| self.err("non-integer power"))?
                        .to_integer()
                }
                _ => self.integer()?,
            };
            let n: i64 = n.try_into().map_err(|_| self.err("power too large"))?;
            let n = if neg { -n } else { n };
            return base.pow_i64(n).ok_or_else(|| self.err("zero to negative power"));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.ws();
        let st = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        if st == self.i {
            return Err(self.err("expected integer"));
        }
        Ok(self.src[st..self.i].parse().unwrap())
    }

    fn primary(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.i += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let st = self.i;
                while self.i < self.s.len() && (self.s[self.i].is_ascii_digit() || self.s[self.i] == b'.') {
                    self.i += 1;
                }
                if self.i < self.s.len() && matches!(self.s[self.i], b'e' | b'E') {
                    let save = self.i;
                    self.i += 1;
                    if self.i < self.s.len() && matches!(self.s[self.i], b'-' | b'+') {
                        self.i += 1;
                    }
                    let ds = self.i;
                    while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                        self.i += 1;
                    }
                    if ds == self.i {
                        self.i = save;
                    }
                }
                parse_decimal(&self.src[st..self.i]).map(RatFunc::constant)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let st = self.i;
                while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
                    self.i += 1;
                }
                let mut name = self.src[st..self.i].to_string();
                if self.i < self.s.len() && self.s[self.i] == b'[' {
                    let bs = self.i + 1;
                    let mut depth = 1;
                    self.i += 1;
                    while self.i < self.s.len() && depth > 0 {
                        match self.s[self.i] {
                            b'[' => depth += 1,
                            b']' => depth -= 1,
                            _ => {}
                        }
                        self.i += 1;
                    }
                    if depth != 0 {
                        return Err(self.err("unbalanced '['"));
                    }
                    let inner = &self.src[bs..self.i - 1];
                    name = format!("{name}[{}]", canonical_index(inner));
                }
                Ok(RatFunc::var(&name))
            }
            _ => Err(self.err("expected operand")),
        }
    }
}

/// Canonical rendering of a bracketed index list such as `alpha+1` or `15,2`.
pub fn canonical_index(inner: &str) -> String {
    inner
        .split(',')
        .map(|part| match part.parse::<Exponent>() {
            Ok(e) => e.to_string(),
            Err(_) => part.trim().to_string(),
        })
        .collect::<Vec<_>>()
        .join(",")
}

pub fn sym(s: &str) -> RatFunc {
    RatFunc::parse(s).unwrap_or_else(|e| panic!("{e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    #[test]
    fn arithmetic_and_cancellation() {
        let a = sym("x/(x+y)") + sym("y/(x+y)");
        assert_eq!(a.as_constant(), Some(crate::exponent::q(1)));
        let b = sym("(x^2-y^2)/(x-y)");
        assert_eq!(b.to_string(), "x + y");
        assert_eq!(sym("1/(1-t)") - sym("1/(t-1)"), sym("2/(1-t)"));
        assert!(sym("a*b - b*a").is_zero());
    }

    #[test]
    fn factor_splitting() {
        let f = sym("1/((x+1)*(x+2))") * sym("(x+1)^2");
        assert_eq!(f, sym("(x+1)/(x+2)"));
        let g = (sym("x^2+3*x+2")).try_recip().unwrap() * sym("x+2");
        assert_eq!(g, sym("1/(x+1)"));
    }

    #[test]
    fn bracket_names_are_canonical() {
        assert_eq!(sym("C[ 1+alpha ]"), sym("C[alpha+1]"));
        assert_eq!(sym("C[33/2] - C[16.5]"), RatFunc::zero());
        assert_eq!(sym("C[15,2]").to_string(), "C[15,2]");
    }

    #[test]
    fn eval_and_affine() {
        let env: Assumptions = [("a".into(), 2.0), ("b".into(), 0.5)].into();
        assert!((sym("a^2/(1-b)").eval(&env).unwrap() - 8.0).abs() < 1e-15);
        assert_eq!(sym("2*a-1/2").as_affine().unwrap().to_string(), "2*a-1/2");
        assert!(sym("a*b").as_affine().is_none());
    }

    #[test]
    fn negative_power() {
        assert_eq!(sym("x^-2*x^3"), sym("x"));
    }
}
