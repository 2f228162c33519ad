//! Ideals with cached reduced Gröbner bases and the standard ideal-theoretic
//! operations built on elimination.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::Result;
use crate::field::Field;
use crate::groebner::{self, global_limits};
use crate::poly::{Exponent, Polynomial, TermOrder};

pub struct Ideal<F: Field> {
    nvars: usize,
    gens: Vec<Polynomial<F>>,
    template: F,
    cache: Mutex<HashMap<TermOrder, Arc<Vec<Polynomial<F>>>>>,
}

impl<F: Field> Clone for Ideal<F> {
    fn clone(&self) -> Self {
        Ideal {
            nvars: self.nvars,
            gens: self.gens.clone(),
            template: self.template.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl<F: Field> fmt::Debug for Ideal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

impl<F: Field> Ideal<F> {
    /// Field context is taken from the first nonzero coefficient.
    pub fn new(nvars: usize, gens: Vec<Polynomial<F>>) -> Self {
        let template = gens
            .iter()
            .find_map(|g| g.field_sample())
            .map(|c| c.integer(1))
            .unwrap_or_else(F::one);
        Self::with_template(nvars, gens, template)
    }

    pub fn with_template(nvars: usize, gens: Vec<Polynomial<F>>, template: F) -> Self {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal {
            nvars,
            gens,
            template: template.integer(1),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn zero(nvars: usize, template: F) -> Self {
        Self::with_template(nvars, vec![], template)
    }

    pub fn unit(nvars: usize, template: F) -> Self {
        let one = template.integer(1);
        Self::with_template(nvars, vec![Polynomial::constant(nvars, one.clone())], one)
    }

    /// The field's one, carrying its context.
    pub fn one(&self) -> F {
        self.template.clone()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[Polynomial<F>] {
        &self.gens
    }

    pub fn is_binomial(&self) -> bool {
        self.gens.iter().all(|g| g.is_binomial())
    }

    pub fn monomial(&self, e: &[u32]) -> Polynomial<F> {
        Polynomial::monomial(Exponent::from_slice(e), self.one())
    }

    pub fn groebner(&self, ord: TermOrder) -> Result<Arc<Vec<Polynomial<F>>>> {
        if let Some(b) = self.cache.lock().unwrap().get(&ord) {
            return Ok(b.clone());
        }
        let b = Arc::new(groebner::groebner_basis(&self.gens, ord, global_limits())?);
        self.cache.lock().unwrap().insert(ord, b.clone());
        Ok(b)
    }

    /// Reduced degrevlex basis.
    pub fn basis(&self) -> Result<Arc<Vec<Polynomial<F>>>> {
        self.groebner(TermOrder::DegRevLex)
    }

    pub fn normal_form(&self, f: &Polynomial<F>) -> Result<Polynomial<F>> {
        self.normal_form_wrt(f, TermOrder::DegRevLex)
    }

    pub fn normal_form_wrt(&self, f: &Polynomial<F>, ord: TermOrder) -> Result<Polynomial<F>> {
        Ok(groebner::normal_form(f, &self.groebner(ord)?, ord))
    }

    pub fn contains(&self, f: &Polynomial<F>) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal<F>) -> Result<bool> {
        for g in other.gens() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.basis()?.iter().any(|g| g.is_constant()))
    }

    /// Equality of reduced degrevlex bases.
    pub fn equals(&self, other: &Ideal<F>) -> Result<bool> {
        Ok(*self.basis()? == *other.basis()?)
    }

    /// Ideal generated by the reduced degrevlex basis.
    pub fn canonical(&self) -> Result<Ideal<F>> {
        Ok(Ideal::with_template(self.nvars, self.basis()?.to_vec(), self.one()))
    }

    pub fn sum(&self, other: &Ideal<F>) -> Ideal<F> {
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Ideal::with_template(self.nvars, g, self.one())
    }

    pub fn with_generators(&self, extra: impl IntoIterator<Item = Polynomial<F>>) -> Ideal<F> {
        let mut g = self.gens.clone();
        g.extend(extra);
        Ideal::with_template(self.nvars, g, self.one())
    }

    /// Intersection with the subring in the variables not listed in `vars`,
    /// returned in the same ring.
    pub fn eliminate(&self, vars: &[usize]) -> Result<Ideal<F>> {
        if vars.is_empty() {
            return Ok(self.clone());
        }
        let n = self.nvars;
        // reorder: eliminated variables first
        let mut order: Vec<usize> = vars.to_vec();
        order.extend((0..n).filter(|i| !vars.contains(i)));
        let mut forward = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            forward[old] = new;
        }
        let moved: Vec<_> = self.gens.iter().map(|g| g.remap(n, &forward)).collect();
        let gb = groebner::groebner_basis(&moved, TermOrder::Elimination(vars.len()), global_limits())?;
        let k = vars.len();
        let kept = gb
            .into_iter()
            .filter(|g| g.terms().iter().all(|(e, _)| e.0[..k].iter().all(|&v| v == 0)))
            .map(|g| g.remap(n, &order))
            .collect();
        Ok(Ideal::with_template(n, kept, self.one()))
    }

    fn with_extra_variable(&self) -> (Vec<Polynomial<F>>, usize) {
        let n = self.nvars;
        let map: Vec<usize> = (0..n).collect();
        (self.gens.iter().map(|g| g.remap(n + 1, &map)).collect(), n)
    }

    fn drop_last_variable(&self, gens: Vec<Polynomial<F>>) -> Ideal<F> {
        let keep: Vec<usize> = (0..self.nvars).collect();
        let g = gens.into_iter().filter_map(|g| g.restrict(&keep)).collect();
        Ideal::with_template(self.nvars, g, self.one())
    }

    /// `(I : f^infinity)`, via `I + <1 - t f>` and elimination of `t`.
    pub fn saturate_poly(&self, f: &Polynomial<F>) -> Result<Ideal<F>> {
        let (mut gens, t) = self.with_extra_variable();
        let map: Vec<usize> = (0..self.nvars).collect();
        let tf = f
            .remap(self.nvars + 1, &map)
            .mul_monomial(&Exponent::unit(self.nvars + 1, t), &self.one());
        gens.push(Polynomial::constant(self.nvars + 1, self.one()).sub(&tf));
        let big = Ideal::with_template(self.nvars + 1, gens, self.one());
        let e = big.eliminate(&[t])?;
        Ok(self.drop_last_variable(e.gens))
    }

    /// `(I : (x^m)^infinity)`.
    pub fn saturate(&self, m: &Exponent) -> Result<Ideal<F>> {
        if m.degree() == 0 {
            return Ok(self.clone());
        }
        let relevant = self
            .gens
            .iter()
            .any(|g| g.terms().iter().any(|(e, _)| e.0.iter().zip(&m.0).any(|(a, b)| *a > 0 && *b > 0)));
        if !relevant {
            return Ok(self.clone());
        }
        self.saturate_poly(&Polynomial::monomial(m.clone(), self.one()))
    }

    /// Saturation at the product of the listed variables.
    pub fn saturate_vars(&self, vars: &[usize]) -> Result<Ideal<F>> {
        let mut m = Exponent::zero(self.nvars);
        for &v in vars {
            m.0[v] = 1;
        }
        self.saturate(&m)
    }

    /// `I ∩ J` via `t I + (1 - t) J`.
    pub fn intersect(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        let n = self.nvars;
        let map: Vec<usize> = (0..n).collect();
        let t = Polynomial::var(n + 1, n, self.one());
        let one_minus_t = Polynomial::constant(n + 1, self.one()).sub(&t);
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(g.remap(n + 1, &map).mul(&t));
        }
        for g in &other.gens {
            gens.push(g.remap(n + 1, &map).mul(&one_minus_t));
        }
        let big = Ideal::with_template(n + 1, gens, self.one());
        let e = big.eliminate(&[n])?;
        Ok(self.drop_last_variable(e.gens))
    }

    pub fn intersect_all<'a>(ideals: impl IntoIterator<Item = &'a Ideal<F>>) -> Result<Option<Ideal<F>>> {
        let mut acc: Option<Ideal<F>> = None;
        for i in ideals {
            acc = Some(match acc {
                None => i.clone(),
                Some(a) => a.intersect(i)?.canonical()?,
            });
        }
        Ok(acc)
    }

    /// `(I : f)`.
    pub fn colon(&self, f: &Polynomial<F>) -> Result<Ideal<F>> {
        assert!(!f.is_zero(), "colon by zero");
        let principal = Ideal::with_template(self.nvars, vec![f.clone()], self.one());
        let meet = self.intersect(&principal)?;
        let gens = meet
            .gens
            .iter()
            .map(|g| groebner::exact_division(g, f).expect("generator of I ∩ <f> is divisible by f"))
            .collect();
        Ok(Ideal::with_template(self.nvars, gens, self.one()))
    }

    /// Canonical generator strings (reduced degrevlex basis).
    pub fn canonical_strings(&self, names: &[String]) -> Result<Vec<String>> {
        Ok(self.basis()?.iter().map(|g| g.to_string_with(names)).collect())
    }
}

pub fn normal_form<F: Field>(f: &Polynomial<F>, i: &Ideal<F>, ord: TermOrder) -> Result<Polynomial<F>> {
    i.normal_form_wrt(f, ord)
}

pub fn groebner<F: Field>(i: &Ideal<F>, ord: TermOrder) -> Result<Arc<Vec<Polynomial<F>>>> {
    i.groebner(ord)
}

pub fn saturate<F: Field>(i: &Ideal<F>, m: &Exponent) -> Result<Ideal<F>> {
    i.saturate(m)
}

pub fn intersect<F: Field>(i: &Ideal<F>, j: &Ideal<F>) -> Result<Ideal<F>> {
    i.intersect(j)
}

pub fn colon<F: Field>(i: &Ideal<F>, f: &Polynomial<F>) -> Result<Ideal<F>> {
    i.colon(f)
}

pub fn ideal_equal<F: Field>(i: &Ideal<F>, j: &Ideal<F>) -> Result<bool> {
    i.equals(j)
}
