use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::symbols::{Family, FunctionSymbol, Generator};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A coefficient-free product: degree-zero functions times a word in the
/// generators. Odd generators appear at most once; even ones carry exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub funcs: Vec<(FunctionSymbol, u32)>,
    pub word: Vec<(Generator, u32)>,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word.cmp(&other.word).then_with(|| self.funcs.cmp(&other.funcs))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial::default()
    }

    pub fn from_generator(g: Generator) -> Self {
        Monomial { funcs: vec![], word: vec![(g, 1)] }
    }

    pub fn from_function(f: FunctionSymbol) -> Self {
        Monomial { funcs: vec![(f, 1)], word: vec![] }
    }

    pub fn degree(&self) -> usize {
        self.word.iter().map(|(g, e)| g.degree as usize * *e as usize).sum()
    }

    pub fn weight(&self) -> usize {
        self.word.iter().map(|(g, e)| g.weight as usize * *e as usize).sum()
    }

    pub fn family_degree(&self, family: Family) -> usize {
        self.word
            .iter()
            .filter(|(g, _)| g.family == family)
            .map(|(g, e)| g.degree as usize * *e as usize)
            .sum()
    }

    pub fn contains_family(&self, family: Family) -> bool {
        self.word.iter().any(|(g, _)| g.family == family)
    }

    fn odd_count(&self) -> usize {
        self.word.iter().filter(|(g, _)| g.is_odd()).count()
    }

    /// Graded product. Returns `None` when an odd generator would repeat.
    pub fn mul(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        let funcs = merge_funcs(&self.funcs, &other.funcs);

        let mut word = Vec::with_capacity(self.word.len() + other.word.len());
        let mut negate = false;
        // odd factors of `self` not yet placed; each odd factor of `other`
        // moved in front of them flips the sign once per factor passed
        let mut odd_left = self.odd_count();
        let (mut i, mut j) = (0, 0);
        while i < self.word.len() || j < other.word.len() {
            let take_a = match (self.word.get(i), other.word.get(j)) {
                (Some(_), None) => Some(true),
                (None, Some(_)) => Some(false),
                (Some((ga, _)), Some((gb, _))) => match ga.cmp(gb) {
                    Ordering::Less => Some(true),
                    Ordering::Greater => Some(false),
                    Ordering::Equal => None,
                },
                (None, None) => unreachable!(),
            };
            match take_a {
                Some(true) => {
                    let (g, e) = self.word[i];
                    if g.is_odd() {
                        odd_left -= 1;
                    }
                    word.push((g, e));
                    i += 1;
                }
                Some(false) => {
                    let (g, e) = other.word[j];
                    if g.is_odd() && odd_left % 2 == 1 {
                        negate = !negate;
                    }
                    word.push((g, e));
                    j += 1;
                }
                None => {
                    let (g, ea) = self.word[i];
                    let (_, eb) = other.word[j];
                    if g.is_odd() {
                        return None;
                    }
                    word.push((g, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        Some((negate, Monomial { funcs, word }))
    }
}

fn merge_funcs(
    a: &[(FunctionSymbol, u32)],
    b: &[(FunctionSymbol, u32)],
) -> Vec<(FunctionSymbol, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), None) => {
                out.push(*x);
                i += 1;
            }
            (None, Some(y)) => {
                out.push(*y);
                j += 1;
            }
            (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                Ordering::Less => {
                    out.push(*x);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(*y);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((x.0, x.1 + y.1));
                    i += 1;
                    j += 1;
                }
            },
            (None, None) => unreachable!(),
        }
    }
    out
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.funcs.is_empty() {
            write!(f, "1")?;
        } else {
            let parts: Vec<String> = self.funcs.iter().map(|(s, e)| power(s, *e)).collect();
            write!(f, "{}", parts.join("*"))?;
        }
        write!(f, " * ")?;
        if self.word.is_empty() {
            write!(f, "1")
        } else {
            let parts: Vec<String> = self.word.iter().map(|(g, e)| power(g, *e)).collect();
            write!(f, "{}", parts.join(" ^ "))
        }
    }
}

fn power<T: fmt::Display>(x: &T, e: u32) -> String {
    if e == 1 {
        x.to_string()
    } else {
        format!("{x}**{e}")
    }
}

/// Finite rational combination of monomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedElement {
    terms: BTreeMap<Monomial, Rational>,
}

impl GradedElement {
    pub fn zero() -> Self {
        GradedElement::default()
    }

    pub fn one() -> Self {
        Self::scalar(Rational::one())
    }

    pub fn scalar(c: Rational) -> Self {
        Self::term(c, Monomial::unit())
    }

    pub fn int(n: i64) -> Self {
        Self::scalar(rat(n))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn generator(g: Generator) -> Self {
        Self::term(Rational::one(), Monomial::from_generator(g))
    }

    pub fn function(f: FunctionSymbol) -> Self {
        Self::term(Rational::one(), Monomial::from_function(f))
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The degree if every term has the same degree (`Some(0)` for zero).
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => Some(0),
            Some(d) => it.all(|x| x == d).then_some(d),
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.terms.keys().map(Monomial::degree).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    pub fn homogeneous_part(&self, degree: usize) -> Self {
        self.filter(|m| m.degree() == degree)
    }

    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Self {
        GradedElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GradedElement {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((neg, m)) = ma.mul(mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// Product keeping only monomials of weight at most `max_weight`. Weight is
    /// additive, so this equals truncating the full product.
    pub fn wedge_bounded(&self, other: &Self, max_weight: usize) -> Self {
        let mut out = Self::zero();
        let right: Vec<(&Monomial, &Rational, usize)> =
            other.terms.iter().map(|(m, c)| (m, c, m.weight())).collect();
        for (ma, ca) in &self.terms {
            let wa = ma.weight();
            if wa > max_weight {
                continue;
            }
            for &(mb, cb, wb) in &right {
                if wa + wb > max_weight {
                    continue;
                }
                if let Some((neg, m)) = ma.mul(mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.wedge(self);
        }
        acc
    }

    pub fn min_weight(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::weight).min()
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }

    /// One term per line, `<rational> * <functions> * <word>`, in monomial order.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (m, c) in &self.terms {
            s.push_str(&format!("{c} * {m}\n"));
        }
        s
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c}) * {m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<'a> Add<&'a GradedElement> for &'a GradedElement {
    type Output = GradedElement;
    fn add(self, rhs: &GradedElement) -> GradedElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for GradedElement {
    type Output = GradedElement;
    fn add(mut self, rhs: GradedElement) -> GradedElement {
        self += &rhs;
        self
    }
}

impl AddAssign<&GradedElement> for GradedElement {
    fn add_assign(&mut self, rhs: &GradedElement) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<'a> Sub<&'a GradedElement> for &'a GradedElement {
    type Output = GradedElement;
    fn sub(self, rhs: &GradedElement) -> GradedElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Sub for GradedElement {
    type Output = GradedElement;
    fn sub(self, rhs: GradedElement) -> GradedElement {
        &self - &rhs
    }
}

impl Neg for &GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        self.scale(&-Rational::one())
    }
}

impl Neg for GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        -&self
    }
}

impl<'a> Mul<&'a GradedElement> for &'a GradedElement {
    type Output = GradedElement;
    fn mul(self, rhs: &GradedElement) -> GradedElement {
        self.wedge(rhs)
    }
}

impl Mul for GradedElement {
    type Output = GradedElement;
    fn mul(self, rhs: GradedElement) -> GradedElement {
        self.wedge(&rhs)
    }
}
