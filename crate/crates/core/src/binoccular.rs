//! Socles, binoccular collapses and closures, and binoccular decompositions.

use rayon::prelude::*;

use crate::congruence::{CongruenceView, WitnessKind};
use crate::error::{Error, Result};
use crate::fiber::{Fiber, MonoidPrime};
use crate::field::Field;
use crate::ideal::Ideal;
use crate::linalg::{Subspace, Vector};
use crate::mesoprimary::{
    coprincipal_component_in, essential_jobs, intersection_certificate, is_mesoprimary_component, Component, ComponentKind,
};
use crate::poly::{Exponent, Polynomial};
use crate::soccular::{cogenerator, finite_localizations, uncertified};

/// `soc_P(I)`: the elements of the localized quotient killed by `m_P`.
#[derive(Clone, Debug)]
pub struct SocleSpace<F: Field> {
    pub prime: MonoidPrime,
    /// Echelon basis in fiber coordinates.
    pub space: Subspace<F>,
    /// The same basis written as polynomials of `k[x]`.
    pub basis: Vec<Polynomial<F>>,
}

impl<F: Field> SocleSpace<F> {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

pub fn socle_in<F: Field>(fiber: &Fiber<F>) -> SocleSpace<F> {
    let space = fiber.socle();
    let basis = space.basis().iter().map(|v| fiber.polynomial(v)).collect();
    SocleSpace {
        prime: fiber.prime().clone(),
        space,
        basis,
    }
}

pub fn socle<F: Field>(ideal: &Ideal<F>, prime: &MonoidPrime) -> Result<SocleSpace<F>> {
    Ok(socle_in(&*Fiber::shared(ideal, prime)?))
}

/// A binomial (or monomial) socle candidate `e_a - lambda e_b` in fiber coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate<F: Field> {
    pub a: usize,
    pub b: Option<usize>,
    pub lambda: F,
}

impl<F: Field> Candidate<F> {
    pub fn vector(&self, len: usize) -> Vector<F> {
        let mut v = vec![F::zero(); len];
        v[self.a] = self.lambda.integer(1);
        if let Some(b) = self.b {
            v[b] = -self.lambda.clone();
        }
        v
    }
}

/// Pairs of cells outside the cogenerator's Green's class whose difference,
/// suitably scaled, is killed by every generator of the prime.
pub fn candidates<F: Field>(view: &CongruenceView<F>, w: usize) -> Vec<Candidate<F>> {
    let fiber = view.fiber();
    let vars = view.prime().vars();
    let outside: Vec<usize> = (0..fiber.len())
        .filter(|&c| view.class_of_cell(c).is_some_and(|a| !view.reaches(w, a)))
        .collect();
    let mut out = Vec::new();
    for &a in &outside {
        if vars.iter().all(|&v| fiber.shift(a, v).is_none()) {
            out.push(Candidate {
                a,
                b: None,
                lambda: fiber.one(),
            });
        }
    }
    for (i, &a) in outside.iter().enumerate() {
        'pair: for &b in &outside[i + 1..] {
            let mut lambda: Option<F> = None;
            for &v in vars {
                match (fiber.shift(a, v), fiber.shift(b, v)) {
                    (None, None) => {}
                    (Some((ca, ma)), Some((cb, mb))) if ca == cb => {
                        let l = ma / mb;
                        match &lambda {
                            Some(prev) if *prev != l => continue 'pair,
                            _ => lambda = Some(l),
                        }
                    }
                    _ => continue 'pair,
                }
            }
            if let Some(lambda) = lambda {
                out.push(Candidate { a, b: Some(b), lambda });
            }
        }
    }
    out
}

fn coprincipal_view<F: Field>(ideal: &Ideal<F>, prime: &MonoidPrime) -> Result<(CongruenceView<F>, usize)> {
    let view = CongruenceView::from_fiber(Fiber::shared(ideal, prime)?);
    let w = cogenerator(&view)?;
    if !view.predicates().is_coprincipal {
        return Err(Error::NotCoprincipal("congruence is not mesoprimary".into()));
    }
    Ok((view, w))
}

/// The binomials of `k[x]` added by one collapse.
pub fn collapse_binomials<F: Field>(view: &CongruenceView<F>, w: usize) -> Vec<Polynomial<F>> {
    let fiber = view.fiber();
    candidates(view, w)
        .iter()
        .map(|c| fiber.polynomial(&c.vector(fiber.len())))
        .collect()
}

/// `I` plus every binomial whose multiples by the generators of `P` lie in `I`.
pub fn binoccular_collapse<F: Field>(ideal: &Ideal<F>, prime: &MonoidPrime) -> Result<Ideal<F>> {
    let (view, w) = coprincipal_view(ideal, prime)?;
    let added = collapse_binomials(&view, w);
    if added.is_empty() {
        return Ok(ideal.clone());
    }
    let units = prime.complement(ideal.nvars());
    ideal.with_generators(added).saturate_vars(&units)?.canonical()
}

/// Iterated collapses up to equality of ideals.
pub fn binoccular_closure<F: Field>(ideal: &Ideal<F>, prime: &MonoidPrime) -> Result<Ideal<F>> {
    let mut cur = ideal.canonical()?;
    loop {
        let next = binoccular_collapse(&cur, prime)?;
        if next.equals(&cur)? {
            return Ok(cur);
        }
        cur = next;
    }
}

pub fn is_binoccular<F: Field>(ideal: &Ideal<F>, prime: &MonoidPrime) -> Result<bool> {
    let (view, w) = coprincipal_view(ideal, prime)?;
    Ok(candidates(&view, w).is_empty())
}

/// Binoccular test by linear algebra on the socle: no socle element is
/// supported on one or two cells outside the cogenerator's class.
pub fn is_binoccular_by_socle<F: Field>(ideal: &Ideal<F>, prime: &MonoidPrime) -> Result<bool> {
    let (view, w) = coprincipal_view(ideal, prime)?;
    let fiber = view.fiber();
    let soc = fiber.socle();
    let m = fiber.len();
    let outside: Vec<usize> = (0..m)
        .filter(|&c| view.class_of_cell(c).is_some_and(|a| !view.reaches(w, a)))
        .collect();
    for (i, &a) in outside.iter().enumerate() {
        for &b in &outside[i..] {
            let support = Subspace::coordinates(m, [a, b]);
            let meet = soc.intersect(&support);
            if !meet.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Binoccular closure of the coprincipal component at the class `w`.
pub fn binoccular_component_in<F: Field>(
    view: &CongruenceView<F>,
    w: usize,
    kind: WitnessKind,
) -> Result<Component<F>> {
    let mut c = coprincipal_component_in(view, w, kind)?;
    c.generators = binoccular_closure(&c.generators, &c.prime)?;
    c.kind = ComponentKind::Binoccular;
    c.socle_dim = Some(socle(&c.generators, &c.prime)?.dim());
    Ok(c)
}

pub fn binoccular_component<F: Field>(
    ideal: &Ideal<F>,
    prime: &MonoidPrime,
    w: &Exponent,
) -> Result<Component<F>> {
    let view = CongruenceView::from_fiber(Fiber::shared(ideal, prime)?);
    let class = view.class_of(w).ok_or(Error::NilClass)?;
    binoccular_component_in(&view, class, WitnessKind::Witness)
}

#[derive(Clone, Debug)]
pub struct BinoccularDecomposition<F: Field> {
    pub components: Vec<Component<F>>,
    pub certified: bool,
    pub mesoprimary: bool,
    pub skipped: Vec<MonoidPrime>,
}

pub fn binoccular_decomposition<F: Field>(ideal: &Ideal<F>) -> Result<BinoccularDecomposition<F>> {
    let (views, skipped) = finite_localizations(ideal)?;
    let components = essential_jobs(&views)
        .into_par_iter()
        .map(|(v, w, kind)| binoccular_component_in(&v, w, kind))
        .collect::<Result<Vec<_>>>()?;
    let gens: Vec<Ideal<F>> = components.iter().map(|c| c.generators.clone()).collect();
    let certified = intersection_certificate(ideal, &gens)?;
    if !certified {
        return Err(uncertified(
            &skipped,
            0,
            format!("intersection of {} binoccular components differs from the input", components.len()),
        ));
    }
    let checks = components
        .par_iter()
        .map(|c| is_mesoprimary_component(ideal, c))
        .collect::<Result<Vec<bool>>>()?;
    Ok(BinoccularDecomposition {
        components,
        certified,
        mesoprimary: checks.iter().all(|&b| b),
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::parse::parse_ideal_file;

    fn ideal(text: &str) -> Ideal<Rational> {
        parse_ideal_file(text).unwrap().ideal(&Rational::from_integer(1.into()))
    }

    fn max() -> MonoidPrime {
        MonoidPrime::maximal(2)
    }

    #[test]
    fn socle_of_cogenerated_example() {
        let i = ideal("ring x y; char 0; ideal x^2*y - x*y^2, x^3, y^3");
        let s = socle(&i, &max()).unwrap();
        assert_eq!(s.dim(), 2);
        let alpha = ideal("ring x y; char 0; ideal x^2 + y^2 - x*y").gens()[0].clone();
        let beta = ideal("ring x y; char 0; ideal x^2*y").gens()[0].clone();
        let fiber = Fiber::new(&i, &max()).unwrap();
        assert!(s.space.contains(&fiber.vector(&alpha)));
        assert!(s.space.contains(&fiber.vector(&beta)));
        assert_eq!(socle(&ideal("ring x y; char 0; ideal x, y"), &max()).unwrap().dim(), 1);
    }

    #[test]
    fn collapse_adds_difference_of_mutual_aides() {
        let i = ideal("ring x y; char 0; ideal x^2 - x*y, x*y - y^2, x^3");
        let c = binoccular_collapse(&i, &max()).unwrap();
        let xy = ideal("ring x y; char 0; ideal x - y").gens()[0].clone();
        assert!(c.contains(&xy).unwrap());
        let closure = binoccular_closure(&i, &max()).unwrap();
        assert!(closure.equals(&ideal("ring x y; char 0; ideal x - y, y^3")).unwrap());
        assert!(!is_binoccular(&i, &max()).unwrap());
        assert!(!is_binoccular_by_socle(&i, &max()).unwrap());
    }

    #[test]
    fn binoccular_examples() {
        for text in [
            "ring x y; char 0; ideal x^2*y - x*y^2, x^3, y^3",
            "ring x y; char 0; ideal x^2 - x*y, x*y + y^2",
        ] {
            let i = ideal(text);
            assert!(is_binoccular(&i, &max()).unwrap(), "{text}");
            assert!(is_binoccular_by_socle(&i, &max()).unwrap(), "{text}");
            assert!(binoccular_collapse(&i, &max()).unwrap().equals(&i).unwrap());
        }
    }

    #[test]
    fn decomposition_of_monomial_ideal() {
        let i = ideal("ring x y; char 0; ideal x^2, x*y, y^2");
        let d = binoccular_decomposition(&i).unwrap();
        assert!(d.certified && d.mesoprimary);
        assert_eq!(d.components.len(), 2);
    }
}
