//! Irreducible closures of coprincipal ideals and irreducible decompositions.

use std::sync::Arc;

use rayon::prelude::*;

use crate::binoccular::socle;
use crate::error::{Error, Result};
use crate::fiber::{Fiber, MonoidPrime};
use crate::field::Field;
use crate::ideal::Ideal;
use crate::linalg::{Subspace, Vector};
use crate::mesoprimary::{
    character_extensions, coprincipal_component_in, essential_jobs, intersection_certificate, lattice_binomial, Component,
    ComponentKind, StabilizerCharacter,
};
use crate::poly::{Exponent, Polynomial};
use crate::soccular::finite_localizations;
use crate::verify::irredundancy_prune;

/// The localized quotient as a finite-dimensional module, with the
/// cogenerator's cell singled out.
#[derive(Clone, Debug)]
pub struct FiberAlgebra<F: Field> {
    pub fiber: Arc<Fiber<F>>,
    pub cogenerator: usize,
    /// Cells in the unit orbit of the cogenerator.
    pub orbit: Vec<usize>,
    /// Multiplication by `x_i` for each `i` in the prime.
    pub mult: Vec<Vec<Vector<F>>>,
    /// Multiplication by each unit variable and by its inverse.
    pub unit_maps: Vec<Vec<Vector<F>>>,
}

impl<F: Field> FiberAlgebra<F> {
    pub fn dim(&self) -> usize {
        self.fiber.len()
    }

    fn all_maps(&self) -> impl Iterator<Item = &Vec<Vector<F>>> {
        self.mult.iter().chain(&self.unit_maps)
    }
}

pub fn fiber_algebra_in<F: Field>(fiber: Arc<Fiber<F>>, w: &Exponent) -> Result<FiberAlgebra<F>> {
    let cell = fiber.cell_of(w).ok_or(Error::NilClass)?;
    let vars = fiber.prime().vars().to_vec();
    if vars.iter().any(|&v| fiber.shift(cell, v).is_some()) {
        return Err(Error::NotCoprincipal(format!(
            "{} is not annihilated by the prime",
            fiber.describe(cell, &crate::poly::default_names(fiber.nvars()))
        )));
    }
    let mut orbit: Vec<usize> = fiber.orbit(cell).into_iter().map(|(c, _, _)| c).collect();
    orbit.sort_unstable();
    let mult = vars.iter().map(|&v| fiber.multiplication_matrix(v)).collect();
    let mut unit_maps = Vec::new();
    for (k, &u) in fiber.units().iter().enumerate() {
        unit_maps.push(fiber.multiplication_matrix(u));
        unit_maps.push(fiber.inverse_unit_matrix(k));
    }
    Ok(FiberAlgebra {
        fiber,
        cogenerator: cell,
        orbit,
        mult,
        unit_maps,
    })
}

pub fn fiber_algebra<F: Field>(ideal: &Ideal<F>, prime: &MonoidPrime, w: &Exponent) -> Result<FiberAlgebra<F>> {
    fiber_algebra_in(Fiber::shared(ideal, prime)?, w)
}

/// Coordinates outside the orbit of the cogenerator.
pub fn perp_subspace<F: Field>(fa: &FiberAlgebra<F>) -> Subspace<F> {
    Subspace::coordinates(fa.dim(), (0..fa.dim()).filter(|c| !fa.orbit.contains(c)))
}

/// Largest submodule contained in `v`: shrink by preimages until stable.
pub fn largest_submodule_in<F: Field>(v: &Subspace<F>, fa: &FiberAlgebra<F>) -> Subspace<F> {
    let mut u = v.clone();
    loop {
        let mut next = u.clone();
        for m in fa.all_maps() {
            next = next.preimage_within(m, &u);
        }
        if next.dim() == u.dim() {
            return u;
        }
        u = next;
    }
}

/// Whether `u` is closed under every multiplication map.
pub fn is_submodule<F: Field>(u: &Subspace<F>, fa: &FiberAlgebra<F>) -> bool {
    fa.all_maps()
        .all(|m| u.basis().iter().all(|b| u.contains(&crate::linalg::mat_vec(m, b))))
}

/// Irreducible closure read from a fiber algebra, with the submodule it kills.
pub fn irreducible_closure_in<F: Field>(fa: &FiberAlgebra<F>) -> Result<(Ideal<F>, Subspace<F>)> {
    let u = largest_submodule_in(&perp_subspace(fa), fa);
    let fiber = &fa.fiber;
    let lifts: Vec<Polynomial<F>> = u.basis().iter().map(|b| fiber.extended_polynomial(b)).collect();
    let irr = if lifts.is_empty() {
        fiber.saturated_ideal()?
    } else {
        fiber.contract(&fiber.extended().with_generators(lifts))?
    };
    let w = Polynomial::monomial(fiber.rep(fa.cogenerator).clone(), fiber.one());
    if irr.contains(&w)? || !irr.contains_ideal(fiber.ideal())? {
        return Err(Error::CrossCheckMismatch("irreducible closure lost the cogenerator or the input".into()));
    }
    Ok((irr, u))
}

pub fn irreducible_closure<F: Field>(ideal: &Ideal<F>, prime: &MonoidPrime, w: &Exponent) -> Result<Ideal<F>> {
    Ok(irreducible_closure_in(&fiber_algebra(ideal, prime, w)?)?.0)
}

/// The cogenerator's orbit is essential in the quotient by `u`: every
/// socle element of the quotient lies in its span.
pub fn essential_submodule_check<F: Field>(fa: &FiberAlgebra<F>, u: &Subspace<F>) -> bool {
    let full = Subspace::full(fa.dim());
    let mut soc = full.clone();
    for m in &fa.mult {
        soc = soc.preimage_within(m, u);
    }
    let line = Subspace::coordinates(fa.dim(), fa.orbit.iter().copied()).sum(u);
    line.contains_space(&soc)
}

/// Primary components of an irreducible closure, one per extension of
/// the character to the saturated lattice.
pub fn irr_primary_components<F: Field>(irr: &Ideal<F>, sc: &StabilizerCharacter<F>) -> Result<Vec<Ideal<F>>> {
    let one = irr.one();
    let (basis, combos) = character_extensions(sc, &one)?;
    if combos.len() <= 1 {
        return Ok(vec![irr.clone()]);
    }
    let n = irr.nvars();
    let units = sc.units();
    combos
        .iter()
        .enumerate()
        .map(|(l, sigma)| {
            let mut s = Polynomial::constant(n, one.clone());
            for (k, other) in combos.iter().enumerate() {
                if k == l {
                    continue;
                }
                let j = (0..basis.len()).find(|&j| sigma[j] != other[j]).expect("distinct extensions");
                s = s.mul(&lattice_binomial(n, &units, &basis[j], other[j].clone(), one.clone()));
            }
            irr.saturate_poly(&s)?.canonical()
        })
        .collect()
}

/// A component that could not be completed, with the fallback kept in its place.
#[derive(Clone, Debug)]
pub struct ComponentFailure {
    pub prime: MonoidPrime,
    pub witness: Exponent,
    pub error: Error,
}

#[derive(Clone, Debug)]
pub struct IrreducibleDecomposition<F: Field> {
    pub components: Vec<Component<F>>,
    pub certified: bool,
    pub failures: Vec<ComponentFailure>,
    pub skipped: Vec<MonoidPrime>,
}

fn irreducible_pieces<F: Field>(c: Component<F>) -> (Vec<Component<F>>, Option<ComponentFailure>) {
    let attempt = || -> Result<Vec<Component<F>>> {
        let fa = fiber_algebra(&c.generators, &c.prime, &c.witness)?;
        let (irr, _) = irreducible_closure_in(&fa)?;
        let pieces = irr_primary_components(&irr, &c.mesoprime)?;
        let single = pieces.len() == 1;
        pieces
            .into_iter()
            .map(|g| {
                let dim = socle(&g, &c.prime).ok().map(|s| s.dim());
                Ok(Component {
                    kind: if single { ComponentKind::IrreducibleClosure } else { ComponentKind::Irreducible },
                    generators: g,
                    is_primary: Some(true),
                    socle_dim: dim,
                    ..c.clone()
                })
            })
            .collect()
    };
    match attempt() {
        Ok(v) => (v, None),
        Err(error) => {
            let failure = ComponentFailure {
                prime: c.prime.clone(),
                witness: c.witness.clone(),
                error,
            };
            (vec![c], Some(failure))
        }
    }
}

/// Irreducible closures of the coprincipal components at all essential
/// witnesses, split into primary pieces, optionally pruned.
pub fn irreducible_decomposition<F: Field>(ideal: &Ideal<F>, prune: bool) -> Result<IrreducibleDecomposition<F>> {
    let (views, skipped) = finite_localizations(ideal)?;
    let coprincipal = essential_jobs(&views)
        .into_par_iter()
        .map(|(v, w, kind)| coprincipal_component_in(&v, w, kind))
        .collect::<Result<Vec<_>>>()?;
    let results: Vec<(Vec<Component<F>>, Option<ComponentFailure>)> =
        coprincipal.into_par_iter().map(irreducible_pieces).collect();
    let mut components = Vec::new();
    let mut failures = Vec::new();
    for (c, f) in results {
        components.extend(c);
        failures.extend(f);
    }
    let gens: Vec<Ideal<F>> = components.iter().map(|c| c.generators.clone()).collect();
    let certified = intersection_certificate(ideal, &gens)?;
    if certified && prune {
        components = irredundancy_prune(ideal, components)?;
    }
    Ok(IrreducibleDecomposition {
        components,
        certified,
        failures,
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

    fn e(v: &[u32]) -> Exponent {
        Exponent::from_slice(v)
    }

    const EX61: &str = "ring x y; char 0; ideal x^2*y - x*y^2, x^3, y^3";

    #[test]
    fn fixpoint_on_cogenerated_example() {
        let i = ideal(EX61);
        let fa = fiber_algebra(&i, &MonoidPrime::maximal(2), &e(&[2, 1])).unwrap();
        assert_eq!(fa.dim(), 7);
        assert_eq!(perp_subspace(&fa).dim(), 6);
        let u = largest_submodule_in(&perp_subspace(&fa), &fa);
        assert_eq!(u.dim(), 1);
        let alpha = ideal("ring x y; char 0; ideal x^2 + y^2 - x*y").gens()[0].clone();
        assert!(u.contains(&fa.fiber.vector(&alpha)));
        assert!(is_submodule(&u, &fa));
        assert!(essential_submodule_check(&fa, &u));
        assert!(!essential_submodule_check(&fa, &Subspace::zero(7)));
    }

    #[test]
    fn closure_adds_alpha() {
        let i = ideal(EX61);
        let irr = irreducible_closure(&i, &MonoidPrime::maximal(2), &e(&[2, 1])).unwrap();
        assert!(irr
            .equals(&ideal("ring x y; char 0; ideal x^2 + y^2 - x*y, x^3, y^3"))
            .unwrap());
        assert!(matches!(
            irreducible_closure(&irr, &MonoidPrime::maximal(2), &e(&[2, 1])),
            Err(Error::NotBinomial(_))
        ));
    }

    #[test]
    fn simple_socle_is_its_own_closure() {
        let i = ideal("ring x y; char 0; ideal x^2 - x*y, x*y + y^2");
        let irr = irreducible_closure(&i, &MonoidPrime::maximal(2), &e(&[2, 0])).unwrap();
        assert!(irr.equals(&i).unwrap());
    }

    #[test]
    fn pruned_decomposition_of_cogenerated_example() {
        let i = ideal(EX61);
        let d = irreducible_decomposition(&i, true).unwrap();
        assert!(d.certified);
        assert_eq!(d.components.len(), 2);
        let expected = [
            ideal("ring x y; char 0; ideal x^3, y"),
            ideal("ring x y; char 0; ideal x^2 + y^2 - x*y, x^3, y^3"),
        ];
        for x in &expected {
            assert!(d.components.iter().any(|c| c.generators.equals(x).unwrap()));
        }
    }

    #[test]
    fn monomial_decomposition() {
        let i = ideal("ring x y; char 0; ideal x^2, x*y, y^2");
        let d = irreducible_decomposition(&i, true).unwrap();
        assert_eq!(d.components.len(), 2);
        assert!(d.components.iter().all(|c| c.socle_dim == Some(1)));
    }
}
