//! Exponent vectors, term orders and sparse polynomials.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::field::Field;

/// Element of the monoid `N^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent(pub SmallVec<[u32; 8]>);

impl Exponent {
    pub fn zero(n: usize) -> Self {
        Exponent(SmallVec::from_elem(0, n))
    }

    pub fn from_slice(v: &[u32]) -> Self {
        Exponent(SmallVec::from_slice(v))
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = Self::zero(n);
        e.0[i] = 1;
        e
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, o: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Exponent) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// `o - self`, when `self` divides `o`.
    pub fn quotient(&self, o: &Exponent) -> Option<Exponent> {
        if self.divides(o) {
            Some(Exponent(o.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
        } else {
            None
        }
    }

    pub fn lcm(&self, o: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&o.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, o: &Exponent) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermOrder {
    /// Degree reverse lexicographic with `x_1 > ... > x_n`.
    DegRevLex,
    Lex,
    /// Variables `0..split` form a block eliminated against the rest; degrevlex
    /// inside each block.
    Elimination(usize),
}

fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

impl TermOrder {
    pub fn cmp(&self, a: &Exponent, b: &Exponent) -> Ordering {
        match *self {
            TermOrder::DegRevLex => degrevlex(&a.0, &b.0),
            TermOrder::Lex => a.0.cmp(&b.0),
            TermOrder::Elimination(k) => {
                degrevlex(&a.0[..k], &b.0[..k]).then_with(|| degrevlex(&a.0[k..], &b.0[k..]))
            }
        }
    }
}

/// Sparse polynomial; terms sorted strictly descending in degrevlex, no zero
/// coefficients.
#[derive(Clone, PartialEq)]
pub struct Polynomial<F> {
    nvars: usize,
    terms: Vec<(Exponent, F)>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::monomial(Exponent::zero(nvars), c)
    }

    pub fn monomial(e: Exponent, c: F) -> Self {
        let nvars = e.nvars();
        if c.is_zero() {
            Self::zero(nvars)
        } else {
            Polynomial {
                nvars,
                terms: vec![(e, c)],
            }
        }
    }

    pub fn var(nvars: usize, i: usize, one: F) -> Self {
        Self::monomial(Exponent::unit(nvars, i), one)
    }

    /// Builds from arbitrary terms: sorts, merges duplicates, drops zeros.
    pub fn from_terms(nvars: usize, mut terms: Vec<(Exponent, F)>) -> Self {
        terms.sort_by(|a, b| TermOrder::DegRevLex.cmp(&b.0, &a.0));
        let mut out: Vec<(Exponent, F)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => {
                    *lc = lc.clone() + c;
                }
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Polynomial { nvars, terms: out }
    }

    /// Binomial `x^a - lambda x^b`.
    pub fn binomial(a: Exponent, b: Exponent, one: F, lambda: F) -> Self {
        let n = a.nvars();
        Self::from_terms(n, vec![(a, one), (b, -lambda)])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Exponent, F)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Exponent, F)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// At most two terms.
    pub fn is_binomial(&self) -> bool {
        self.terms.len() <= 2
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.degree() == 0
    }

    pub fn leading(&self, ord: TermOrder) -> Option<&(Exponent, F)> {
        self.terms.iter().max_by(|a, b| ord.cmp(&a.0, &b.0))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.degree()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, e: &Exponent) -> F {
        self.terms
            .iter()
            .find(|(x, _)| x == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(F::zero)
    }

    /// A nonzero coefficient carrying the field context, if any.
    pub fn field_sample(&self) -> Option<F> {
        self.terms.first().map(|(_, c)| c.clone())
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.clone(), x.clone() * c.clone()))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }

    pub fn mul_monomial(&self, e: &Exponent, c: &F) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(x, a)| (x.add(e), a.clone() * c.clone()))
                .filter(|(_, a)| !a.is_zero())
                .collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            match TermOrder::DegRevLex.cmp(&self.terms[i].0, &o.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(o.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.terms[i].1.clone() + o.terms[j].1.clone();
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        Polynomial {
            nvars: self.nvars,
            terms: out,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut acc = Self::zero(self.nvars);
        for (e, c) in &o.terms {
            acc = acc.add(&self.mul_monomial(e, c));
        }
        acc
    }

    pub fn pow(&self, k: u32) -> Self {
        let one = self.field_sample().map(|c| c.integer(1)).unwrap_or_else(F::one);
        let mut acc = Self::constant(self.nvars, one);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divides by the degrevlex-leading coefficient.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero")),
        }
    }

    pub fn monic_wrt(&self, ord: TermOrder) -> Self {
        match self.leading(ord) {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero")),
        }
    }

    /// Re-embeds into a ring with `nvars` variables; variable `i` goes to
    /// `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut x = Exponent::zero(nvars);
                for (i, &v) in e.0.iter().enumerate() {
                    x.0[map[i]] += v;
                }
                (x, c.clone())
            })
            .collect();
        Self::from_terms(nvars, terms)
    }

    /// Drops variables: keeps indices listed in `keep` (in order); `None` if a
    /// dropped variable actually occurs.
    pub fn restrict(&self, keep: &[usize]) -> Option<Self> {
        let kept: std::collections::HashSet<usize> = keep.iter().copied().collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            if e.0.iter().enumerate().any(|(i, &v)| v > 0 && !kept.contains(&i)) {
                return None;
            }
            let x = Exponent(keep.iter().map(|&i| e.0[i]).collect());
            terms.push((x, c.clone()));
        }
        Some(Self::from_terms(keep.len(), terms))
    }

    /// Exact division by a monomial that divides every term.
    pub fn div_monomial(&self, m: &Exponent) -> Option<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            terms.push((m.quotient(e)?, c.clone()));
        }
        Some(Polynomial {
            nvars: self.nvars,
            terms,
        })
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = monomial_string(e, names);
            if mono.is_empty() {
                s.push_str(&mag);
            } else if mag == "1" {
                s.push_str(&mono);
            } else {
                s.push_str(&mag);
                s.push('*');
                s.push_str(&mono);
            }
        }
        s
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    match n {
        1 => vec!["x".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        _ => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}

pub fn monomial_string(e: &Exponent, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &v) in e.0.iter().enumerate() {
        match v {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], v)),
        }
    }
    parts.join("*")
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(&default_names(self.nvars)))
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(&default_names(self.nvars)))
    }
}
