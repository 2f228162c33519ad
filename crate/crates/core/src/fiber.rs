//! The localized quotient `k[Q_P]/I_P` as a finite-dimensional algebra.
//!
//! Variables outside the monoid prime are inverted by adjoining `y_u` with
//! `x_u y_u = 1`. When the result is finite-dimensional its standard
//! monomials are exactly the non-nil classes of the localized congruence,
//! and every monomial acts on them as a scaled partial permutation.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner;
use crate::ideal::Ideal;
use crate::lattice::{self, IntVec};
use crate::linalg::{self, Vector};
use crate::poly::{monomial_string, Exponent, Polynomial, TermOrder};

const MAX_CELLS: usize = 50_000;

/// A monoid prime of `N^n`: a set of variable indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonoidPrime {
    vars: Vec<usize>,
}

impl MonoidPrime {
    pub fn new(vars: impl IntoIterator<Item = usize>) -> Self {
        let mut vars: Vec<usize> = vars.into_iter().collect();
        vars.sort_unstable();
        vars.dedup();
        MonoidPrime { vars }
    }

    pub fn maximal(nvars: usize) -> Self {
        Self::new(0..nvars)
    }

    pub fn empty() -> Self {
        Self::new([])
    }

    /// All `2^n` monoid primes, largest first.
    pub fn all(nvars: usize) -> Vec<MonoidPrime> {
        let mut out: Vec<MonoidPrime> = (0u32..1 << nvars)
            .map(|mask| Self::new((0..nvars).filter(|i| mask & (1 << i) != 0)))
            .collect();
        out.sort_by(|a, b| b.vars.len().cmp(&a.vars.len()).then(a.vars.cmp(&b.vars)));
        out
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn contains(&self, i: usize) -> bool {
        self.vars.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn complement(&self, nvars: usize) -> Vec<usize> {
        (0..nvars).filter(|i| !self.contains(*i)).collect()
    }

    pub fn names(&self, names: &[String]) -> Vec<String> {
        self.vars.iter().map(|&i| names[i].clone()).collect()
    }

    /// The monomial ideal `<x_i : i in P>`.
    pub fn ideal<F: Field>(&self, nvars: usize, one: &F) -> Ideal<F> {
        let gens = self.vars.iter().map(|&i| Polynomial::var(nvars, i, one.clone())).collect();
        Ideal::with_template(nvars, gens, one.clone())
    }
}

impl fmt::Debug for MonoidPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.vars)
    }
}

/// A scaled move `key_c * m = scale * key_target`.
pub type Move<F> = Option<(usize, F)>;

pub struct Fiber<F: Field> {
    ideal: Ideal<F>,
    prime: MonoidPrime,
    units: Vec<usize>,
    ext: Ideal<F>,
    keys: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
    reps: Vec<Exponent>,
    rep_scale: Vec<F>,
    forward: Vec<Vec<Move<F>>>,
    backward: Vec<Vec<(usize, F)>>,
    saturated: OnceLock<Ideal<F>>,
}

impl<F: Field> fmt::Debug for Fiber<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fiber")
            .field("prime", &self.prime)
            .field("cells", &self.reps)
            .finish()
    }
}

impl<F: Field> Fiber<F> {
    pub fn new(ideal: &Ideal<F>, prime: &MonoidPrime) -> Result<Self> {
        let n = ideal.nvars();
        let units = prime.complement(n);
        let s = units.len();
        let one = ideal.one();
        let map: Vec<usize> = (0..n).collect();
        let mut gens: Vec<Polynomial<F>> = ideal.gens().iter().map(|g| g.remap(n + s, &map)).collect();
        for (k, &u) in units.iter().enumerate() {
            let mut e = Exponent::zero(n + s);
            e.0[u] = 1;
            e.0[n + k] = 1;
            gens.push(Polynomial::binomial(e, Exponent::zero(n + s), one.clone(), one.clone()));
        }
        let ext = Ideal::with_template(n + s, gens, one.clone());
        let gb = ext.basis()?;

        let mut fiber = Fiber {
            ideal: ideal.clone(),
            prime: prime.clone(),
            units,
            ext: ext.clone(),
            keys: vec![],
            index: HashMap::new(),
            reps: vec![],
            rep_scale: vec![],
            forward: vec![vec![]; n],
            backward: vec![vec![]; s],
            saturated: OnceLock::new(),
        };
        if gb.iter().any(|g| g.is_constant()) {
            return Ok(fiber);
        }

        let leads: Vec<Exponent> = gb.iter().map(|g| g.terms()[0].0.clone()).collect();
        let zero_dim = (0..n + s).all(|v| {
            leads
                .iter()
                .any(|e| e.0[v] > 0 && e.0.iter().enumerate().all(|(j, &x)| j == v || x == 0))
        });
        if !zero_dim {
            for &i in prime.vars() {
                if !ext.saturate_vars(&[i])?.is_unit()? {
                    return Err(Error::NotPCofinite {
                        prime: prime.vars().to_vec(),
                        var: i,
                    });
                }
            }
            return Err(Error::UnsupportedUnitRank {
                prime: prime.vars().to_vec(),
            });
        }

        // standard monomials
        let mut keys = vec![Exponent::zero(n + s)];
        let mut seen: HashMap<Exponent, ()> = HashMap::new();
        seen.insert(keys[0].clone(), ());
        let mut head = 0;
        while head < keys.len() {
            let k = keys[head].clone();
            head += 1;
            for v in 0..n + s {
                let mut e = k.clone();
                e.0[v] += 1;
                if seen.contains_key(&e) || leads.iter().any(|l| l.divides(&e)) {
                    continue;
                }
                seen.insert(e.clone(), ());
                keys.push(e);
                if keys.len() > MAX_CELLS {
                    return Err(Error::ResourceLimit(format!(
                        "fiber has more than {MAX_CELLS} standard monomials"
                    )));
                }
            }
        }
        let ord = TermOrder::DegRevLex;
        keys.sort_by(|a, b| ord.cmp(a, b));
        let index: HashMap<Exponent, usize> = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();

        let step = |c: usize, v: usize| -> Result<Move<F>> {
            let e = keys[c].add(&Exponent::unit(n + s, v));
            let nf = groebner::normal_form(&Polynomial::monomial(e, one.clone()), &gb, ord);
            match nf.terms() {
                [] => Ok(None),
                [(m, c)] => Ok(Some((index[m], c.clone()))),
                _ => Err(Error::NotBinomial(
                    "normal form of a monomial is not a monomial".into(),
                )),
            }
        };
        let mut forward = vec![Vec::with_capacity(keys.len()); n];
        let mut backward = vec![Vec::with_capacity(keys.len()); s];
        for c in 0..keys.len() {
            for (v, table) in forward.iter_mut().enumerate() {
                table.push(step(c, v)?);
            }
            for (k, table) in backward.iter_mut().enumerate() {
                let m = step(c, n + k)?.ok_or_else(|| {
                    Error::CrossCheckMismatch("inverse of a unit annihilates a class".into())
                })?;
                table.push(m);
            }
        }

        // representatives in N^n, breadth first from the class of 1
        let mut reps: Vec<Option<(Exponent, F)>> = vec![None; keys.len()];
        let start = index[&Exponent::zero(n + s)];
        reps[start] = Some((Exponent::zero(n), one.clone()));
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            let (e, sc) = reps[c].clone().unwrap();
            for v in 0..n {
                if let Some((d, mu)) = &forward[v][c] {
                    if reps[*d].is_none() {
                        let mut e2 = e.clone();
                        e2.0[v] += 1;
                        reps[*d] = Some((e2, sc.clone() * mu.clone()));
                        queue.push_back(*d);
                    }
                }
            }
        }
        if reps.iter().any(|r| r.is_none()) {
            return Err(Error::CrossCheckMismatch(
                "a localized class has no representative in N^n".into(),
            ));
        }
        let (reps, rep_scale): (Vec<Exponent>, Vec<F>) = reps.into_iter().map(|r| r.unwrap()).unzip();

        fiber.keys = keys;
        fiber.index = index;
        fiber.reps = reps;
        fiber.rep_scale = rep_scale;
        fiber.forward = forward;
        fiber.backward = backward;
        Ok(fiber)
    }

    pub fn shared(ideal: &Ideal<F>, prime: &MonoidPrime) -> Result<Arc<Self>> {
        Ok(Arc::new(Self::new(ideal, prime)?))
    }

    pub fn ideal(&self) -> &Ideal<F> {
        &self.ideal
    }

    pub fn nvars(&self) -> usize {
        self.ideal.nvars()
    }

    pub fn prime(&self) -> &MonoidPrime {
        &self.prime
    }

    pub fn units(&self) -> &[usize] {
        &self.units
    }

    pub fn one(&self) -> F {
        self.ideal.one()
    }

    /// Number of non-nil classes, which is the vector-space dimension.
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// The extended ideal in `k[x, y_u]`.
    pub fn extended(&self) -> &Ideal<F> {
        &self.ext
    }

    pub fn key(&self, cell: usize) -> &Exponent {
        &self.keys[cell]
    }

    /// Representative of a class in `N^n`.
    pub fn rep(&self, cell: usize) -> &Exponent {
        &self.reps[cell]
    }

    pub fn reps(&self) -> &[Exponent] {
        &self.reps
    }

    /// Scalar with `x^rep = scale * key` in the fiber.
    pub fn rep_scale(&self, cell: usize) -> &F {
        &self.rep_scale[cell]
    }

    pub fn cell_of_key(&self, key: &Exponent) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Multiplication by `x_v`.
    pub fn shift(&self, cell: usize, v: usize) -> Move<F> {
        self.forward[v][cell].clone()
    }

    /// Multiplication by `y_k`, the inverse of the `k`-th unit variable.
    pub fn unshift(&self, cell: usize, k: usize) -> (usize, F) {
        self.backward[k][cell].clone()
    }

    /// Class of `x^a` together with its scale, or `None` when nil.
    pub fn locate(&self, a: &Exponent) -> Move<F> {
        if self.is_empty() {
            return None;
        }
        let mut cell = self.index[&Exponent::zero(self.ext.nvars())];
        let mut scale = self.one();
        for (v, &k) in a.0.iter().enumerate() {
            for _ in 0..k {
                let (d, mu) = self.shift(cell, v)?;
                cell = d;
                scale = scale * mu;
            }
        }
        Some((cell, scale))
    }

    pub fn cell_of(&self, a: &Exponent) -> Option<usize> {
        self.locate(a).map(|(c, _)| c)
    }

    /// Translate by a unit `g` in `Z^units`.
    pub fn translate(&self, cell: usize, g: &[i64]) -> (usize, F) {
        let mut c = cell;
        let mut scale = self.one();
        for (k, &gk) in g.iter().enumerate() {
            let u = self.units[k];
            for _ in 0..gk.unsigned_abs() {
                let (d, mu) = if gk > 0 {
                    self.shift(c, u).expect("units never annihilate")
                } else {
                    self.unshift(c, k)
                };
                c = d;
                scale = scale * mu;
            }
        }
        (c, scale)
    }

    /// Cells in the unit orbit of `cell` with offsets and scales:
    /// `key_cell * x^offset = scale * key_member`.
    pub fn orbit(&self, cell: usize) -> Vec<(usize, IntVec, F)> {
        let s = self.units.len();
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut out = vec![(cell, vec![0; s], self.one())];
        seen.insert(cell, 0);
        let mut head = 0;
        while head < out.len() {
            let (c, off, sc) = out[head].clone();
            head += 1;
            for k in 0..s {
                for dir in [1i64, -1] {
                    let (d, mu) = if dir > 0 {
                        self.shift(c, self.units[k]).expect("units never annihilate")
                    } else {
                        self.unshift(c, k)
                    };
                    if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(d) {
                        e.insert(out.len());
                        let mut o = off.clone();
                        o[k] += dir;
                        out.push((d, o, sc.clone() * mu));
                    }
                }
            }
        }
        out
    }

    /// Stabilizer lattice of a class in Hermite form, with the character on its basis.
    pub fn stabilizer(&self, cell: usize) -> (Vec<IntVec>, Vec<F>) {
        let s = self.units.len();
        let orbit = self.orbit(cell);
        let pos: HashMap<usize, usize> = orbit.iter().enumerate().map(|(i, (c, _, _))| (*c, i)).collect();
        let mut gens = Vec::new();
        for (c, off, _) in &orbit {
            for k in 0..s {
                let (d, _) = self.shift(*c, self.units[k]).expect("units never annihilate");
                let (_, off_d, _) = &orbit[pos[&d]];
                let g: IntVec = (0..s).map(|j| off[j] + i64::from(j == k) - off_d[j]).collect();
                if g.iter().any(|&x| x != 0) {
                    gens.push(g);
                }
            }
        }
        let basis = lattice::hermite(&gens, s);
        let rho = basis
            .iter()
            .map(|g| {
                let (d, sc) = self.translate(cell, g);
                debug_assert_eq!(d, cell);
                sc
            })
            .collect();
        (basis, rho)
    }

    /// Matrix of multiplication by `x_v` acting on column vectors.
    pub fn multiplication_matrix(&self, v: usize) -> Vec<Vector<F>> {
        let m = self.len();
        let mut rows = vec![vec![F::zero(); m]; m];
        for c in 0..m {
            if let Some((d, mu)) = self.shift(c, v) {
                rows[d][c] = mu;
            }
        }
        rows
    }

    /// Matrix of multiplication by the inverse of the `k`-th unit variable.
    pub fn inverse_unit_matrix(&self, k: usize) -> Vec<Vector<F>> {
        let m = self.len();
        let mut rows = vec![vec![F::zero(); m]; m];
        for c in 0..m {
            let (d, mu) = self.unshift(c, k);
            rows[d][c] = mu;
        }
        rows
    }

    /// Socle: vectors annihilated by every `x_i`, `i` in the prime.
    pub fn socle(&self) -> linalg::Subspace<F> {
        let m = self.len();
        let mut rows = Vec::new();
        for &i in self.prime.vars() {
            rows.extend(self.multiplication_matrix(i));
        }
        if rows.is_empty() {
            return linalg::Subspace::full(m);
        }
        linalg::Subspace::span(m, &linalg::kernel(&rows, m))
    }

    /// Polynomial in `k[x]` whose image is the coordinate vector `v`.
    pub fn polynomial(&self, v: &[F]) -> Polynomial<F> {
        let n = self.nvars();
        let terms = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.reps[i].clone(), c.clone() / self.rep_scale[i].clone()))
            .collect();
        Polynomial::from_terms(n, terms)
    }

    /// The same element written on the standard monomials of `k[x, y_u]`.
    pub fn extended_polynomial(&self, v: &[F]) -> Polynomial<F> {
        let terms = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.keys[i].clone(), c.clone()))
            .collect();
        Polynomial::from_terms(self.ext.nvars(), terms)
    }

    /// Coordinates of the image of `f` in the fiber.
    pub fn vector(&self, f: &Polynomial<F>) -> Vector<F> {
        let mut v = vec![F::zero(); self.len()];
        for (e, c) in f.terms() {
            if let Some((cell, sc)) = self.locate(e) {
                v[cell] = v[cell].clone() + c.clone() * sc;
            }
        }
        v
    }

    /// `I_P ∩ k[x]`.
    pub fn saturated_ideal(&self) -> Result<Ideal<F>> {
        if let Some(s) = self.saturated.get() {
            return Ok(s.clone());
        }
        let s = self.contract(&self.ext)?;
        Ok(self.saturated.get_or_init(|| s).clone())
    }

    /// Preimage in `k[x]` of an ideal of `k[x, y_u]`.
    pub fn contract(&self, ext: &Ideal<F>) -> Result<Ideal<F>> {
        let n = self.nvars();
        let s = self.units.len();
        let y: Vec<usize> = (n..n + s).collect();
        let e = ext.eliminate(&y)?;
        let keep: Vec<usize> = (0..n).collect();
        let gens = e.gens().iter().filter_map(|g| g.restrict(&keep)).collect();
        Ideal::with_template(n, gens, self.one()).canonical()
    }

    pub fn describe(&self, cell: usize, names: &[String]) -> String {
        monomial_string(&self.reps[cell], names)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::parse::parse_ideal_file;

    fn q(text: &str) -> Ideal<Rational> {
        parse_ideal_file(text).unwrap().ideal(&Rational::from_integer(1.into()))
    }

    #[test]
    fn seven_classes_for_cogenerated_example() {
        let i = q("ring x y; char 0; ideal x^2*y - x*y^2, x^3, y^3");
        let f = Fiber::new(&i, &MonoidPrime::maximal(2)).unwrap();
        assert_eq!(f.len(), 7);
        let a = f.cell_of(&Exponent::from_slice(&[2, 1])).unwrap();
        let b = f.cell_of(&Exponent::from_slice(&[1, 2])).unwrap();
        assert_eq!(a, b);
        assert_eq!(f.rep(a), &Exponent::from_slice(&[2, 1]));
        assert!(f.cell_of(&Exponent::from_slice(&[3, 0])).is_none());
        assert_eq!(f.socle().dim(), 2);
    }

    #[test]
    fn unit_direction_with_character() {
        let i = q("ring x y; char 0; ideal x*y - 2*x, x^2, y^2 - 4");
        let f = Fiber::new(&i, &MonoidPrime::new([0])).unwrap();
        assert_eq!(f.len(), 3);
        let c = f.cell_of(&Exponent::from_slice(&[1, 0])).unwrap();
        let (basis, rho) = f.stabilizer(c);
        assert_eq!(basis, vec![vec![1]]);
        assert_eq!(rho, vec![Rational::from_integer(2.into())]);
        let one = f.cell_of(&Exponent::zero(2)).unwrap();
        let (basis, rho) = f.stabilizer(one);
        assert_eq!(basis, vec![vec![2]]);
        assert_eq!(rho, vec![Rational::from_integer(4.into())]);
        assert_eq!(f.orbit(one).len(), 2);
    }

    #[test]
    fn errors_distinguish_cofiniteness_from_unit_rank() {
        let i = q("ring x y; char 0; ideal x*y");
        match Fiber::new(&i, &MonoidPrime::maximal(2)) {
            Err(Error::NotPCofinite { var, .. }) => assert!(var < 2),
            other => panic!("{other:?}"),
        }
        let j = q("ring x y; char 0; ideal x^2");
        assert_eq!(
            Fiber::new(&j, &MonoidPrime::new([0])).unwrap_err(),
            Error::UnsupportedUnitRank { prime: vec![0] }
        );
    }

    #[test]
    fn inverting_a_nilpotent_gives_empty_fiber() {
        let i = q("ring x y; char 0; ideal x^2, y^3");
        let f = Fiber::new(&i, &MonoidPrime::new([0])).unwrap();
        assert!(f.is_empty());
    }

    #[test]
    fn group_fiber_of_positive_rank_is_unsupported() {
        let i = q("ring x y; char 0; ideal x^2 - x*y");
        let f = Fiber::new(&i, &MonoidPrime::empty());
        // x - y with both inverted leaves an infinite group
        assert!(matches!(f, Err(Error::UnsupportedUnitRank { .. })));
    }

    #[test]
    fn all_primes_listed_largest_first() {
        let ps = MonoidPrime::all(3);
        assert_eq!(ps.len(), 8);
        assert_eq!(ps[0], MonoidPrime::maximal(3));
        assert!(ps[7].is_empty());
    }
}
