//! Colon sets, soccular collapses and closures, and soccular decompositions.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use crate::congruence::{box_points, default_bounds, orbit_representatives, CongruenceView};
use crate::error::{Error, Result};
use crate::fiber::{Fiber, MonoidPrime};
use crate::field::Field;
use crate::ideal::Ideal;
use crate::poly::{Exponent, Polynomial};

/// `(w : q)` as the sorted list of classes `p` with `q + p = w`.
pub type ColonSet = Vec<usize>;

pub fn colon_set<F: Field>(view: &CongruenceView<F>, w: usize, q: usize) -> ColonSet {
    (0..view.len()).filter(|&p| view.add(q, p) == Some(w)).collect()
}

/// The unique cogenerator up to Green's equivalence.
pub fn cogenerator<F: Field>(view: &CongruenceView<F>) -> Result<usize> {
    let cogens = view.cogenerators();
    let Some(&w) = cogens.first() else {
        return Err(Error::NotCoprincipal("no cogenerator".into()));
    };
    if cogens.iter().any(|&c| !(view.reaches(c, w) && view.reaches(w, c))) {
        return Err(Error::NotCoprincipal(format!(
            "{} cogenerators in distinct Green's classes",
            orbit_representatives(view, &cogens).len()
        )));
    }
    Ok(w)
}

fn union_find_map(m: usize, groups: impl IntoIterator<Item = Vec<usize>>) -> Vec<Option<usize>> {
    let mut map: Vec<Option<usize>> = (0..m).map(Some).collect();
    for g in groups {
        if let Some(&first) = g.iter().min() {
            for c in g {
                map[c] = Some(first);
            }
        }
    }
    map
}

/// One soccular collapse of a coprincipal view cogenerated by `w`.
pub fn soccular_collapse_at<F: Field>(view: &CongruenceView<F>, w: usize) -> CongruenceView<F> {
    let vars = view.prime().vars().to_vec();
    let mut groups: BTreeMap<Vec<Option<usize>>, Vec<usize>> = BTreeMap::new();
    for a in 0..view.len() {
        if view.reaches(w, a) {
            continue;
        }
        let sig: Vec<Option<usize>> = vars.iter().map(|&v| view.step(a, v)).collect();
        groups.entry(sig).or_default().push(a);
    }
    let out = view.relabel(&union_find_map(view.len(), groups.into_values()));
    debug_assert!(out.is_congruence());
    out
}

pub fn soccular_collapse<F: Field>(view: &CongruenceView<F>) -> Result<CongruenceView<F>> {
    let w = cogenerator(view)?;
    Ok(soccular_collapse_at(view, w))
}

/// Class of `w` after relabelling to a coarser view.
pub fn follow<F: Field>(from: &CongruenceView<F>, to: &CongruenceView<F>, w: usize) -> usize {
    to.class_of_cell(from.members(w)[0]).expect("cogenerator survives")
}

/// Iterated collapses until nothing merges; returns every stage.
pub fn collapse_chain<F: Field>(view: &CongruenceView<F>, w: usize) -> Vec<(CongruenceView<F>, usize)> {
    let mut out = vec![(view.clone(), w)];
    loop {
        let (cur, cw) = out.last().unwrap();
        let next = soccular_collapse_at(cur, *cw);
        if next.len() == cur.len() {
            return out;
        }
        let nw = follow(cur, &next, *cw);
        out.push((next, nw));
    }
}

/// Closure by colon fingerprints.
pub fn fingerprint_closure<F: Field>(view: &CongruenceView<F>, w: usize) -> CongruenceView<F> {
    let mut groups: BTreeMap<ColonSet, Vec<usize>> = BTreeMap::new();
    for q in 0..view.len() {
        groups.entry(colon_set(view, w, q)).or_default().push(q);
    }
    view.relabel(&union_find_map(view.len(), groups.into_values()))
}

pub fn soccular_closure_at<F: Field>(view: &CongruenceView<F>, w: usize) -> Result<CongruenceView<F>> {
    let fast = fingerprint_closure(view, w);
    if cfg!(debug_assertions) {
        let chain = collapse_chain(view, w);
        let slow = &chain.last().unwrap().0;
        if slow.labels() != fast.labels() {
            return Err(Error::CrossCheckMismatch(format!(
                "iterated collapse has {} classes, colon fingerprints give {}",
                slow.len(),
                fast.len()
            )));
        }
    }
    Ok(fast)
}

pub fn soccular_closure<F: Field>(view: &CongruenceView<F>) -> Result<CongruenceView<F>> {
    let w = cogenerator(view)?;
    soccular_closure_at(view, w)
}

/// Distinct classes with equal colon sets.
pub fn protected_pairs<F: Field>(view: &CongruenceView<F>) -> Result<Vec<(usize, usize)>> {
    let w = cogenerator(view)?;
    let colons: Vec<ColonSet> = (0..view.len()).map(|q| colon_set(view, w, q)).collect();
    let mut out = Vec::new();
    for a in 0..view.len() {
        for b in a + 1..view.len() {
            if colons[a] == colons[b] {
                out.push((a, b));
            }
        }
    }
    Ok(out)
}

/// Classes belonging to some protected pair.
pub fn protected_witnesses<F: Field>(view: &CongruenceView<F>) -> Result<Vec<usize>> {
    let set: BTreeSet<usize> = protected_pairs(view)?.into_iter().flat_map(|(a, b)| [a, b]).collect();
    Ok(set.into_iter().collect())
}

/// Soccular closure of the coprincipal component at the class `w`.
pub fn soccular_component<F: Field>(view: &CongruenceView<F>, w: usize) -> Result<CongruenceView<F>> {
    let comp = view.coprincipal_component(w);
    let cw = follow(view, &comp, w);
    soccular_closure_at(&comp, cw)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionMode {
    Coprincipal,
    Soccular,
}

/// A component congruence with its cogenerating witness.
#[derive(Clone, Debug)]
pub struct ComponentCongruence<F: Field> {
    pub prime: MonoidPrime,
    pub witness: Exponent,
    pub view: CongruenceView<F>,
}

impl<F: Field> ComponentCongruence<F> {
    /// Binomials with coefficient one for merged pairs plus the minimal
    /// nil monomials in the box; only meant for display.
    pub fn presentation(&self, bounds: &[u32]) -> Vec<Polynomial<F>> {
        let one = self.view.fiber().one();
        let pts = box_points(bounds);
        let mut nil: Vec<Exponent> = Vec::new();
        let mut first: HashMap<usize, Exponent> = HashMap::new();
        let mut out = Vec::new();
        for a in pts {
            match self.view.class_of(&a) {
                None => {
                    if !nil.iter().any(|m| m.divides(&a)) {
                        nil.push(a);
                    }
                }
                Some(c) => match first.get(&c) {
                    None => {
                        first.insert(c, a);
                    }
                    Some(b) => {
                        let redundant = out.iter().any(|p: &Polynomial<F>| {
                            p.terms().iter().any(|(e, _)| e.divides(&a) && e != &a)
                        });
                        if !redundant {
                            out.push(Polynomial::binomial(a, b.clone(), one.clone(), one.clone()));
                        }
                    }
                },
            }
        }
        let n = bounds.len();
        let mut gens: Vec<Polynomial<F>> = nil.into_iter().map(|m| Polynomial::monomial(m, one.clone())).collect();
        gens.extend(out);
        gens.retain(|g| g.nvars() == n);
        gens
    }
}

/// Result of a pairwise class-separation check over a box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementCertificate {
    pub bounds: Vec<u32>,
    pub holds: bool,
    /// Two monomials whose classes differ between the two sides.
    pub counterexample: Option<(Exponent, Exponent)>,
}

#[derive(Clone, Debug)]
pub struct SoccularDecomposition<F: Field> {
    pub components: Vec<ComponentCongruence<F>>,
    pub certificate: RefinementCertificate,
    /// Primes skipped because their fiber is not finite.
    pub skipped: Vec<MonoidPrime>,
}

/// Key for the class of `a` under the congruence of `ideal` on `N^n`.
pub fn ideal_class_key<F: Field>(ideal: &Ideal<F>, a: &Exponent) -> Result<Option<Vec<(Exponent, String)>>> {
    let nf = ideal.normal_form(&Polynomial::monomial(a.clone(), ideal.one()))?;
    if nf.is_zero() {
        return Ok(None);
    }
    let nf = nf.monic();
    Ok(Some(nf.terms().iter().map(|(e, c)| (e.clone(), c.key())).collect()))
}

/// Whether two labellings of the same points induce the same partition.
pub fn same_partition<A: Eq + std::hash::Hash + Clone, B: Eq + std::hash::Hash + Clone>(
    points: &[Exponent],
    left: &[A],
    right: &[B],
) -> Option<(Exponent, Exponent)> {
    let mut l2r: HashMap<A, (B, usize)> = HashMap::new();
    let mut r2l: HashMap<B, (A, usize)> = HashMap::new();
    for (i, (a, b)) in left.iter().zip(right).enumerate() {
        if let Some((rb, j)) = l2r.get(a) {
            if rb != b {
                return Some((points[*j].clone(), points[i].clone()));
            }
        } else {
            l2r.insert(a.clone(), (b.clone(), i));
        }
        if let Some((la, j)) = r2l.get(b) {
            if la != a {
                return Some((points[*j].clone(), points[i].clone()));
            }
        } else {
            r2l.insert(b.clone(), (a.clone(), i));
        }
    }
    None
}

/// Compares `~_I` with the common refinement of the components on a box.
pub fn refinement_certificate<F: Field>(
    ideal: &Ideal<F>,
    components: &[ComponentCongruence<F>],
    bounds: &[u32],
) -> Result<RefinementCertificate> {
    let pts = box_points(bounds);
    let left = pts.iter().map(|a| ideal_class_key(ideal, a)).collect::<Result<Vec<_>>>()?;
    let right: Vec<Vec<Option<usize>>> = pts
        .iter()
        .map(|a| components.iter().map(|c| c.view.class_of(a)).collect())
        .collect();
    let counterexample = same_partition(&pts, &left, &right);
    Ok(RefinementCertificate {
        bounds: bounds.to_vec(),
        holds: counterexample.is_none(),
        counterexample,
    })
}

/// Error for an intersection that missed the input: unsupported scope when
/// some prime was skipped, otherwise a bound failure.
pub fn uncertified(skipped: &[MonoidPrime], rounds: usize, detail: String) -> Error {
    match skipped.first() {
        Some(p) => Error::UnsupportedUnitRank { prime: p.vars().to_vec() },
        None => Error::BoundExceeded { rounds, detail },
    }
}

/// Localizations at every monoid prime with a finite nonempty fiber.
pub fn finite_localizations<F: Field>(ideal: &Ideal<F>) -> Result<(Vec<CongruenceView<F>>, Vec<MonoidPrime>)> {
    let primes = MonoidPrime::all(ideal.nvars());
    let results: Vec<(MonoidPrime, Result<Arc<Fiber<F>>>)> = primes
        .into_par_iter()
        .map(|p| {
            let f = Fiber::shared(ideal, &p);
            (p, f)
        })
        .collect();
    let mut views = Vec::new();
    let mut skipped = Vec::new();
    for (p, r) in results {
        match r {
            Ok(f) if !f.is_empty() => views.push(CongruenceView::from_fiber(f)),
            Ok(_) => {}
            Err(Error::UnsupportedUnitRank { .. }) => skipped.push(p),
            Err(Error::NotPCofinite { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok((views, skipped))
}

/// Components at the key witnesses of every localization, one per Green's class.
pub fn soccular_decomposition<F: Field>(ideal: &Ideal<F>, mode: DecompositionMode, rounds: usize) -> Result<SoccularDecomposition<F>> {
    let (views, skipped) = finite_localizations(ideal)?;
    let jobs: Vec<(CongruenceView<F>, usize)> = views
        .iter()
        .flat_map(|v| {
            let key = v.key_witness_classes();
            orbit_representatives(v, &key).into_iter().map(move |w| (v.clone(), w))
        })
        .collect();
    let components = jobs
        .into_par_iter()
        .map(|(v, w)| {
            let view = match mode {
                DecompositionMode::Coprincipal => v.coprincipal_component(w),
                DecompositionMode::Soccular => soccular_component(&v, w)?,
            };
            Ok(ComponentCongruence {
                prime: v.prime().clone(),
                witness: v.rep(w).clone(),
                view,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let base = default_bounds(ideal)?;
    let mut last = None;
    for round in 0..=rounds {
        let bounds: Vec<u32> = base.iter().map(|b| b + round as u32).collect();
        let cert = refinement_certificate(ideal, &components, &bounds)?;
        if cert.holds {
            return Ok(SoccularDecomposition {
                components,
                certificate: cert,
                skipped,
            });
        }
        last = cert.counterexample;
    }
    let (a, b) = last.expect("failed certificate has a counterexample");
    Err(uncertified(
        &skipped,
        rounds,
        format!("components do not separate {:?} and {:?}", a.0.as_slice(), b.0.as_slice()),
    ))
}
