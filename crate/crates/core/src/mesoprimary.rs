//! Stabilizer characters, mesoprimes, coprincipal components and their
//! decomposition, and minimal primes of mesoprimes.

use rayon::prelude::*;

use crate::congruence::{essential_witnesses, orbit_representatives, CongruenceView, WitnessKind};
use crate::error::{Error, Result};
use crate::fiber::{Fiber, MonoidPrime};
use crate::field::Field;
use crate::ideal::Ideal;
use crate::lattice::{self, IntVec};
use crate::poly::{Exponent, Polynomial};
use crate::soccular::{finite_localizations, uncertified};

/// The stabilizer lattice `K` of a class under the unit group, in Hermite
/// form, with the character on its basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerCharacter<F: Field> {
    pub prime: MonoidPrime,
    pub q: Exponent,
    pub lattice: Vec<IntVec>,
    pub rho: Vec<F>,
}

impl<F: Field> StabilizerCharacter<F> {
    pub fn units(&self) -> Vec<usize> {
        self.prime.complement(self.q.nvars())
    }

    /// `rho(v)`, or `None` when `v` is not in the lattice.
    pub fn rho_of(&self, v: &[i64]) -> Option<F> {
        let coords = lattice::coordinates(&self.lattice, v)?;
        let one = self.one();
        let mut acc = one.clone();
        for (c, r) in coords.iter().zip(&self.rho) {
            let base = if *c < 0 { r.inv().expect("character values are units") } else { r.clone() };
            for _ in 0..c.unsigned_abs() {
                acc = acc * base.clone();
            }
        }
        Some(acc)
    }

    fn one(&self) -> F {
        self.rho.first().map(|r| r.integer(1)).unwrap_or_else(F::one)
    }
}

/// `x^{g+} - c x^{g-}` for `g` in unit coordinates.
pub fn lattice_binomial<F: Field>(nvars: usize, units: &[usize], g: &[i64], c: F, one: F) -> Polynomial<F> {
    let (plus, minus) = split(nvars, units, g);
    Polynomial::binomial(plus, minus, one, c)
}

/// Positive and negative parts of a unit vector as exponents in `N^n`.
pub fn split(nvars: usize, units: &[usize], g: &[i64]) -> (Exponent, Exponent) {
    let mut plus = Exponent::zero(nvars);
    let mut minus = Exponent::zero(nvars);
    for (k, &u) in units.iter().enumerate() {
        if g[k] > 0 {
            plus.0[u] = g[k] as u32;
        } else {
            minus.0[u] = (-g[k]) as u32;
        }
    }
    (plus, minus)
}

/// Character at the fiber cell of `q`, read off the multiplication tables.
pub fn stabilizer_character_in<F: Field>(fiber: &Fiber<F>, q: &Exponent) -> Result<StabilizerCharacter<F>> {
    let cell = fiber.cell_of(q).ok_or(Error::NilClass)?;
    let (basis, rho) = fiber.stabilizer(cell);
    Ok(StabilizerCharacter {
        prime: fiber.prime().clone(),
        q: q.clone(),
        lattice: basis,
        rho,
    })
}

/// Uses the fiber tables when the localization is finite, elimination otherwise.
pub fn stabilizer_character<F: Field>(ideal: &Ideal<F>, prime: &MonoidPrime, q: &Exponent) -> Result<StabilizerCharacter<F>> {
    let fiber = match Fiber::shared(ideal, prime) {
        Ok(f) => f,
        Err(Error::NotPCofinite { .. }) | Err(Error::UnsupportedUnitRank { .. }) => {
            return stabilizer_character_by_elimination(ideal, prime, q)
        }
        Err(e) => return Err(e),
    };
    let sc = stabilizer_character_in(&fiber, q)?;
    if cfg!(debug_assertions) {
        let other = stabilizer_character_by_elimination(ideal, prime, q)?;
        if other != sc {
            return Err(Error::CrossCheckMismatch(format!(
                "stabilizer by elimination {:?} differs from fiber tables {:?}",
                other.lattice, sc.lattice
            )));
        }
    }
    Ok(sc)
}

/// Same data via `((I : units^inf) : x^q)` restricted to the unit variables.
pub fn stabilizer_character_by_elimination<F: Field>(
    ideal: &Ideal<F>,
    prime: &MonoidPrime,
    q: &Exponent,
) -> Result<StabilizerCharacter<F>> {
    let n = ideal.nvars();
    let one = ideal.one();
    let units = prime.complement(n);
    let sat = ideal.saturate_vars(&units)?;
    let colon = sat.colon(&Polynomial::monomial(q.clone(), one.clone()))?;
    let e = colon.eliminate(prime.vars())?.canonical()?;
    if e.is_unit()? {
        return Err(Error::NilClass);
    }
    let mut diffs = Vec::new();
    for g in e.gens() {
        let t = g.terms();
        if t.len() != 2 {
            continue;
        }
        let d: IntVec = units.iter().map(|&u| i64::from(t[0].0 .0[u]) - i64::from(t[1].0 .0[u])).collect();
        diffs.push(d);
    }
    let basis = lattice::hermite(&diffs, units.len());
    let rho = basis
        .iter()
        .map(|g| {
            let (plus, minus) = split(n, &units, g);
            let nf_plus = e.normal_form(&Polynomial::monomial(plus, one.clone()))?;
            let nf_minus = e.normal_form(&Polynomial::monomial(minus, one.clone()))?;
            match (nf_plus.terms(), nf_minus.terms()) {
                ([p], [m]) if p.0 == m.0 => Ok(p.1.clone() / m.1.clone()),
                _ => Err(Error::CrossCheckMismatch("lattice binomial does not reduce to a term".into())),
            }
        })
        .collect::<Result<Vec<F>>>()?;
    Ok(StabilizerCharacter {
        prime: prime.clone(),
        q: q.clone(),
        lattice: basis,
        rho,
    })
}

/// `I_rho + m_P`, saturated at the units.
pub fn mesoprime<F: Field>(sc: &StabilizerCharacter<F>, one: &F) -> Result<Ideal<F>> {
    let n = sc.q.nvars();
    let units = sc.units();
    let mut gens: Vec<Polynomial<F>> = sc.prime.vars().iter().map(|&i| Polynomial::var(n, i, one.clone())).collect();
    for (g, r) in sc.lattice.iter().zip(&sc.rho) {
        gens.push(lattice_binomial(n, &units, g, r.clone(), one.clone()));
    }
    Ideal::with_template(n, gens, one.clone()).saturate_vars(&units)?.canonical()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    Coprincipal,
    Binoccular,
    IrreducibleClosure,
    Irreducible,
}

impl ComponentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ComponentKind::Coprincipal => "coprincipal",
            ComponentKind::Binoccular => "binoccular",
            ComponentKind::IrreducibleClosure => "irreducible-closure",
            ComponentKind::Irreducible => "irreducible",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Component<F: Field> {
    pub kind: ComponentKind,
    pub prime: MonoidPrime,
    pub witness: Exponent,
    pub witness_kind: WitnessKind,
    pub generators: Ideal<F>,
    pub mesoprime: StabilizerCharacter<F>,
    pub is_primary: Option<bool>,
    pub socle_dim: Option<usize>,
}


/// `W_w^P` in `k[x, y_u]` before contraction: the extended ideal, the
/// lattice binomials at `w`, and the keys of classes whose ideal misses `w`.
pub fn component_extension<F: Field>(view: &CongruenceView<F>, w: usize) -> Ideal<F> {
    let fiber = view.fiber();
    let ext = fiber.extended();
    let big = ext.nvars();
    let n = fiber.nvars();
    let one = fiber.one();
    let map: Vec<usize> = (0..n).collect();
    let (basis, rho) = fiber.stabilizer(view.members(w)[0]);
    let mut gens: Vec<Polynomial<F>> = ext.gens().to_vec();
    for (g, r) in basis.iter().zip(rho) {
        gens.push(lattice_binomial(n, fiber.units(), g, r, one.clone()).remap(big, &map));
    }
    for a in 0..view.len() {
        if !view.reaches(a, w) {
            for &c in view.members(a) {
                gens.push(Polynomial::monomial(fiber.key(c).clone(), one.clone()));
            }
        }
    }
    Ideal::with_template(big, gens, one)
}

/// Coprincipal component at the class `w` of a localization.
pub fn coprincipal_component_in<F: Field>(view: &CongruenceView<F>, w: usize, kind: WitnessKind) -> Result<Component<F>> {
    let fiber = view.fiber();
    let generators = fiber.contract(&component_extension(view, w))?;
    let (lattice, rho) = fiber.stabilizer(view.members(w)[0]);
    Ok(Component {
        kind: ComponentKind::Coprincipal,
        prime: view.prime().clone(),
        witness: view.rep(w).clone(),
        witness_kind: kind,
        generators,
        mesoprime: StabilizerCharacter {
            prime: view.prime().clone(),
            q: view.rep(w).clone(),
            lattice,
            rho,
        },
        is_primary: None,
        socle_dim: None,
    })
}

pub fn coprincipal_component<F: Field>(ideal: &Ideal<F>, prime: &MonoidPrime, w: &Exponent) -> Result<Component<F>> {
    let view = CongruenceView::from_fiber(Fiber::shared(ideal, prime)?);
    let class = view.class_of(w).ok_or(Error::NilClass)?;
    coprincipal_component_in(&view, class, WitnessKind::Witness)
}

/// Whether the intersection of the components equals the ideal.
pub fn intersection_certificate<F: Field>(ideal: &Ideal<F>, components: &[Ideal<F>]) -> Result<bool> {
    match Ideal::intersect_all(components)? {
        None => ideal.is_unit(),
        Some(meet) => meet.equals(ideal),
    }
}

#[derive(Clone, Debug)]
pub struct CoprincipalDecomposition<F: Field> {
    pub components: Vec<Component<F>>,
    pub certified: bool,
    /// Every component has a coprincipal congruence and shares the
    /// mesoprime of the input at each of its cogenerators.
    pub mesoprimary: bool,
    pub skipped: Vec<MonoidPrime>,
}

/// Jobs `(view, class, kind)` for every essential witness, one per Green's class.
pub fn essential_jobs<F: Field>(views: &[CongruenceView<F>]) -> Vec<(CongruenceView<F>, usize, WitnessKind)> {
    views
        .iter()
        .flat_map(|v| {
            let records = essential_witnesses(v);
            let classes: Vec<usize> = records.iter().map(|r| r.class).collect();
            let reps = orbit_representatives(v, &classes);
            records
                .into_iter()
                .filter(|r| reps.contains(&r.class))
                .map(|r| (v.clone(), r.class, r.kind))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Coprincipal components at all essential witnesses, with the intersection certificate.
pub fn coprincipal_decomposition<F: Field>(ideal: &Ideal<F>) -> Result<CoprincipalDecomposition<F>> {
    let (views, skipped) = finite_localizations(ideal)?;
    let components = essential_jobs(&views)
        .into_par_iter()
        .map(|(v, w, kind)| coprincipal_component_in(&v, w, kind))
        .collect::<Result<Vec<_>>>()?;
    let gens: Vec<Ideal<F>> = components.iter().map(|c| c.generators.clone()).collect();
    let certified = intersection_certificate(ideal, &gens)?;
    if !certified {
        return Err(uncertified(
            &skipped,
            0,
            format!("intersection of {} components differs from the input", components.len()),
        ));
    }
    let checks = components
        .par_iter()
        .map(|c| is_mesoprimary_component(ideal, c))
        .collect::<Result<Vec<bool>>>()?;
    Ok(CoprincipalDecomposition {
        components,
        certified,
        mesoprimary: checks.iter().all(|&b| b),
        skipped,
    })
}

/// The component's congruence is coprincipal at its prime, and at each
/// cogenerator its mesoprime agrees with that of `ideal`.
pub fn is_mesoprimary_component<F: Field>(ideal: &Ideal<F>, c: &Component<F>) -> Result<bool> {
    let view = CongruenceView::from_fiber(Fiber::shared(&c.generators, &c.prime)?);
    if !view.predicates().is_coprincipal {
        return Ok(false);
    }
    let outer = Fiber::shared(ideal, &c.prime)?;
    for cog in view.cogenerators() {
        let q = view.rep(cog);
        let inner = stabilizer_character_in(view.fiber(), q)?;
        let theirs = stabilizer_character_in(&outer, q)?;
        if inner.lattice != theirs.lattice || inner.rho != theirs.rho {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `ideal` is its own coprincipal component at a cogenerator.
pub fn is_maximal_coprincipal<F: Field>(ideal: &Ideal<F>, prime: &MonoidPrime) -> Result<bool> {
    let view = CongruenceView::from_fiber(Fiber::shared(ideal, prime)?);
    if !view.predicates().is_coprincipal {
        return Ok(false);
    }
    let Some(&w) = view.cogenerators().first() else {
        return Ok(false);
    };
    let comp = coprincipal_component_in(&view, w, WitnessKind::Cogenerator)?;
    comp.generators.equals(ideal)
}

/// Extensions of the character to the saturation of its lattice: the
/// saturated basis `v_j` and, per extension, the values on it.
pub fn character_extensions<F: Field>(sc: &StabilizerCharacter<F>, one: &F) -> Result<(Vec<IntVec>, Vec<Vec<F>>)> {
    let s = sc.units().len();
    let snf = lattice::smith(&sc.lattice, s);
    let m = snf.index();
    let p = one.characteristic();
    if p != 0 && snf.divisors.iter().any(|&d| d as u64 % p == 0) {
        return Err(Error::BadCharacteristic(m as u64));
    }
    let mut combos: Vec<Vec<F>> = vec![vec![]];
    for (d, v) in snf.divisors.iter().zip(&snf.saturated_basis) {
        let dv: IntVec = v.iter().map(|x| x * d).collect();
        let target = sc.rho_of(&dv).expect("d_j v_j lies in the lattice");
        let roots = target.nth_roots(*d as u64);
        if (roots.len() as i64) < *d {
            return Err(Error::FieldExtensionRequired(m as u64));
        }
        combos = combos
            .into_iter()
            .flat_map(|c| {
                roots.iter().map(move |r| {
                    let mut c = c.clone();
                    c.push(r.clone());
                    c
                })
            })
            .collect();
    }
    Ok((snf.saturated_basis, combos))
}

/// Minimal primes over a mesoprime: one per extension of the character to
/// the saturated lattice.
pub fn mesoprime_minimal_primes<F: Field>(sc: &StabilizerCharacter<F>, one: &F) -> Result<Vec<Ideal<F>>> {
    let (basis, combos) = character_extensions(sc, one)?;
    combos
        .into_iter()
        .map(|sigma| {
            let ext = StabilizerCharacter {
                prime: sc.prime.clone(),
                q: sc.q.clone(),
                lattice: basis.clone(),
                rho: sigma,
            };
            mesoprime(&ext, one)
        })
        .collect()
}
