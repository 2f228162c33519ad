//! Intersection certificates, mesoprimary validation, pruning, and the
//! binomial-irreducibility report.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;

use crate::binoccular::{binoccular_decomposition, socle_in};
use crate::congruence::{essential_witnesses, CongruenceView};
use crate::error::Result;
use crate::fiber::{Fiber, MonoidPrime};
use crate::field::Field;
use crate::ideal::Ideal;
use crate::linalg::{self, Vector};
use crate::mesoprimary::{intersection_certificate, stabilizer_character_in, Component};
use crate::poly::{Exponent, Polynomial, TermOrder};
use crate::soccular::finite_localizations;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Criterion {
    /// Equality of `I` with the intersection, by Groebner bases.
    GbIntersection,
    /// Injectivity of each local socle into the component quotients.
    SocleInjectivity,
}

impl Criterion {
    pub fn as_str(&self) -> &'static str {
        match self {
            Criterion::GbIntersection => "gb-intersection",
            Criterion::SocleInjectivity => "socle-injectivity",
        }
    }
}

/// A socle element of `I` that vanishes in every component.
#[derive(Clone, Debug)]
pub struct SocleFailure<F: Field> {
    pub prime: MonoidPrime,
    pub element: Polynomial<F>,
}

#[derive(Clone, Debug)]
pub struct Certificate<F: Field> {
    pub criterion: Criterion,
    pub verdict: bool,
    /// Components not containing `I`, by index.
    pub not_containing: Vec<usize>,
    pub failures: Vec<SocleFailure<F>>,
    /// Primes whose localization is infinite and was not examined.
    pub skipped: Vec<MonoidPrime>,
}

pub fn check_intersection<F: Field>(ideal: &Ideal<F>, components: &[Ideal<F>], criterion: Criterion) -> Result<Certificate<F>> {
    let not_containing = components
        .iter()
        .enumerate()
        .map(|(k, w)| Ok((k, w.contains_ideal(ideal)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(k, _)| k)
        .collect::<Vec<_>>();
    let mut cert = Certificate {
        criterion,
        verdict: false,
        not_containing,
        failures: vec![],
        skipped: vec![],
    };
    match criterion {
        Criterion::GbIntersection => {
            cert.verdict = cert.not_containing.is_empty() && intersection_certificate(ideal, components)?;
        }
        Criterion::SocleInjectivity => {
            let (views, skipped) = finite_localizations(ideal)?;
            cert.skipped = skipped;
            let per_prime = views
                .par_iter()
                .map(|v| socle_kernel(v.fiber(), components))
                .collect::<Result<Vec<_>>>()?;
            for (v, kernel) in views.iter().zip(per_prime) {
                for element in kernel {
                    cert.failures.push(SocleFailure {
                        prime: v.prime().clone(),
                        element,
                    });
                }
            }
            cert.verdict = cert.not_containing.is_empty() && cert.failures.is_empty();
        }
    }
    Ok(cert)
}

/// The part of the socle of a localization killed by every component, as
/// polynomials of `k[x]`.
pub fn socle_kernel<F: Field>(fiber: &Fiber<F>, components: &[Ideal<F>]) -> Result<Vec<Polynomial<F>>> {
    let soc = socle_in(fiber);
    if soc.dim() == 0 {
        return Ok(vec![]);
    }
    let n = fiber.nvars();
    let units = fiber.units();
    let big = n + units.len();
    let one = fiber.one();
    let map: Vec<usize> = (0..n).collect();
    let lifts: Vec<Polynomial<F>> = soc.space.basis().iter().map(|b| fiber.extended_polynomial(b)).collect();
    // columns: (component, monomial) pairs of the stacked normal forms
    let mut columns: Vec<(usize, Exponent)> = Vec::new();
    let mut rows: Vec<Vec<(usize, F)>> = vec![vec![]; lifts.len()];
    for (j, w) in components.iter().enumerate() {
        let mut gens: Vec<Polynomial<F>> = w.gens().iter().map(|g| g.remap(big, &map)).collect();
        for (k, &u) in units.iter().enumerate() {
            let mut e = Exponent::zero(big);
            e.0[u] = 1;
            e.0[n + k] = 1;
            gens.push(Polynomial::binomial(e, Exponent::zero(big), one.clone(), one.clone()));
        }
        let ext = Ideal::with_template(big, gens, one.clone());
        for (r, f) in lifts.iter().enumerate() {
            for (e, c) in ext.normal_form(f)?.terms() {
                let col = match columns.iter().position(|x| x.0 == j && &x.1 == e) {
                    Some(p) => p,
                    None => {
                        columns.push((j, e.clone()));
                        columns.len() - 1
                    }
                };
                rows[r].push((col, c.clone()));
            }
        }
    }
    // kernel of the transpose: combinations of socle basis vectors with zero image
    let ncols = columns.len();
    let dense: Vec<Vec<F>> = (0..ncols)
        .map(|col| {
            rows.iter()
                .map(|row| row.iter().find(|(c, _)| *c == col).map(|(_, v)| v.clone()).unwrap_or_else(F::zero))
                .collect()
        })
        .collect();
    let kernel = if dense.is_empty() {
        (0..lifts.len())
            .map(|i| (0..lifts.len()).map(|j| if i == j { one.clone() } else { F::zero() }).collect())
            .collect()
    } else {
        linalg::kernel(&dense, lifts.len())
    };
    Ok(kernel
        .iter()
        .map(|coeffs| {
            let mut v = vec![F::zero(); fiber.len()];
            for (c, b) in coeffs.iter().zip(soc.space.basis()) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = x.clone() + c.clone() * y.clone();
                }
            }
            fiber.polynomial(&v)
        })
        .collect())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MesoprimaryReport {
    pub valid: bool,
    pub combinatorial: bool,
    /// `(component index, cogenerator)` where the mesoprimes differ.
    pub mismatches: Vec<(usize, Exponent)>,
    /// Components whose congruence is not coprincipal at their prime.
    pub not_coprincipal: Vec<usize>,
}

pub fn check_mesoprimary_decomposition<F: Field>(ideal: &Ideal<F>, components: &[Component<F>]) -> Result<MesoprimaryReport> {
    let mut report = MesoprimaryReport {
        valid: true,
        combinatorial: true,
        ..Default::default()
    };
    for (k, c) in components.iter().enumerate() {
        let view = CongruenceView::from_fiber(Fiber::shared(&c.generators, &c.prime)?);
        if !view.predicates().is_coprincipal {
            report.not_coprincipal.push(k);
            report.valid = false;
        }
        let outer = CongruenceView::from_fiber(Fiber::shared(ideal, &c.prime)?);
        let essential: Vec<usize> = essential_witnesses(&outer).iter().map(|r| r.class).collect();
        for cog in view.cogenerators() {
            let q = view.rep(cog);
            let inner = stabilizer_character_in(view.fiber(), q)?;
            let theirs = stabilizer_character_in(outer.fiber(), q)?;
            if inner.lattice != theirs.lattice || inner.rho != theirs.rho {
                report.mismatches.push((k, q.clone()));
                report.valid = false;
            }
            if !outer.class_of(q).is_some_and(|cl| essential.contains(&cl)) {
                report.combinatorial = false;
            }
        }
    }
    Ok(report)
}

/// Drops duplicates, then greedily removes components in ascending
/// (prime, witness) order while the intersection stays equal to `ideal`.
pub fn irredundancy_prune<F: Field>(ideal: &Ideal<F>, mut components: Vec<Component<F>>) -> Result<Vec<Component<F>>> {
    components.sort_by(|a, b| (a.prime.vars(), &a.witness).cmp(&(b.prime.vars(), &b.witness)));
    let mut unique: Vec<Component<F>> = Vec::new();
    for c in components {
        let mut dup = false;
        for u in &unique {
            if u.generators.equals(&c.generators)? {
                dup = true;
                break;
            }
        }
        if !dup {
            unique.push(c);
        }
    }
    let mut keep = vec![true; unique.len()];
    for k in 0..unique.len() {
        keep[k] = false;
        let rest: Vec<Ideal<F>> = unique
            .iter()
            .zip(&keep)
            .filter(|(_, &kp)| kp)
            .map(|(c, _)| c.generators.clone())
            .collect();
        if rest.is_empty() || !intersection_certificate(ideal, &rest)? {
            keep[k] = true;
        }
    }
    Ok(unique.into_iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportVerdict {
    /// The components with simple socle already intersect to the input.
    Found,
    /// Not found among these candidates; says nothing about existence.
    NotFound,
    /// Socle-count argument: every candidate irreducible component is non-binomial.
    ProvedImpossible,
}

impl ReportVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReportVerdict::Found => "found",
            ReportVerdict::NotFound => "not-found",
            ReportVerdict::ProvedImpossible => "proved-impossible",
        }
    }
}

/// Heuristic search for a binomial irreducible decomposition among the
/// binoccular components.
#[derive(Clone, Debug)]
pub struct IrreducibilityReport<F: Field> {
    pub components: Vec<Component<F>>,
    /// Indices of components whose socle has dimension above one.
    pub bad: Vec<usize>,
    /// Per bad component: can it be dropped while keeping all the others.
    pub omittable: Vec<bool>,
    pub decomposition: Option<Vec<Component<F>>>,
    pub verdict: ReportVerdict,
}

pub fn binomial_irreducibility_report<F: Field>(ideal: &Ideal<F>) -> Result<IrreducibilityReport<F>> {
    let d = binoccular_decomposition(ideal)?;
    let components = d.components;
    let bad: Vec<usize> = (0..components.len())
        .filter(|&k| components[k].socle_dim.map_or(true, |s| s > 1))
        .collect();
    let omittable = bad
        .iter()
        .map(|&b| {
            let rest: Vec<Ideal<F>> = components
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != b)
                .map(|(_, c)| c.generators.clone())
                .collect();
            intersection_certificate(ideal, &rest)
        })
        .collect::<Result<Vec<bool>>>()?;
    let good: Vec<Component<F>> = components
        .iter()
        .enumerate()
        .filter(|(k, _)| !bad.contains(k))
        .map(|(_, c)| c.clone())
        .collect();
    let gens: Vec<Ideal<F>> = good.iter().map(|c| c.generators.clone()).collect();
    let (decomposition, verdict) = if !good.is_empty() && intersection_certificate(ideal, &gens)? {
        (Some(irredundancy_prune(ideal, good)?), ReportVerdict::Found)
    } else if socle_pencil_is_non_binomial(ideal)? {
        (None, ReportVerdict::ProvedImpossible)
    } else {
        (None, ReportVerdict::NotFound)
    };
    Ok(IrreducibilityReport {
        components,
        bad,
        omittable,
        decomposition,
        verdict,
    })
}

/// For a maximal-ideal-primary input with two-dimensional socle over a
/// finite field, checks that `I + <s_1 + lambda s_2>` has simple socle and
/// a non-binomial reduced basis for every `lambda`.
pub fn socle_pencil_is_non_binomial<F: Field>(ideal: &Ideal<F>) -> Result<bool> {
    let one = ideal.one();
    let Some(elements) = one.elements() else {
        return Ok(false);
    };
    let n = ideal.nvars();
    let max = MonoidPrime::maximal(n);
    let (views, skipped) = finite_localizations(ideal)?;
    if !skipped.is_empty() || views.len() != 1 || views[0].prime() != &max {
        return Ok(false);
    }
    let fiber = views[0].fiber();
    let soc = socle_in(fiber);
    if soc.dim() != 2 {
        return Ok(false);
    }
    let (s1, s2) = (&soc.basis[0], &soc.basis[1]);
    for lambda in elements {
        let f = s1.add(&s2.scale(&lambda));
        let j = ideal.with_generators([f]).canonical()?;
        let simple = artinian_socle_dim(&j)? == Some(1);
        let binomial = j.basis()?.iter().all(|g| g.len() <= 2);
        if !simple || binomial {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Standard monomials of a zero-dimensional ideal in degrevlex, or `None`
/// when more than `cap` are found.
pub fn standard_monomials<F: Field>(ideal: &Ideal<F>, cap: usize) -> Result<Option<Vec<Exponent>>> {
    let n = ideal.nvars();
    let basis = ideal.basis()?;
    let leads: Vec<Exponent> = basis
        .iter()
        .filter_map(|g| g.leading(TermOrder::DegRevLex).map(|t| t.0.clone()))
        .collect();
    let mut seen: HashSet<Exponent> = HashSet::new();
    let mut queue = VecDeque::from([Exponent::zero(n)]);
    while let Some(e) = queue.pop_front() {
        if seen.contains(&e) || leads.iter().any(|l| l.divides(&e)) {
            continue;
        }
        seen.insert(e.clone());
        if seen.len() > cap {
            return Ok(None);
        }
        for i in 0..n {
            queue.push_back(e.add(&Exponent::unit(n, i)));
        }
    }
    let mut out: Vec<Exponent> = seen.into_iter().collect();
    out.sort_by(|a, b| TermOrder::DegRevLex.cmp(a, b));
    Ok(Some(out))
}

/// Socle dimension of `k[x]/I` for an ideal primary to the maximal
/// monomial ideal, binomial or not.
pub fn artinian_socle_dim<F: Field>(ideal: &Ideal<F>) -> Result<Option<usize>> {
    let Some(std) = standard_monomials(ideal, 100_000)? else {
        return Ok(None);
    };
    let n = ideal.nvars();
    let index: HashMap<&Exponent, usize> = std.iter().enumerate().map(|(k, e)| (e, k)).collect();
    let one = ideal.one();
    // rows: coordinates of x_i * e_c, stacked over i
    let mut rows: Vec<Vector<F>> = Vec::new();
    for i in 0..n {
        let images = std
            .iter()
            .map(|e| ideal.normal_form(&Polynomial::monomial(e.add(&Exponent::unit(n, i)), one.clone())))
            .collect::<Result<Vec<_>>>()?;
        for r in 0..std.len() {
            rows.push(
                images
                    .iter()
                    .map(|f| {
                        f.terms()
                            .iter()
                            .find(|(m, _)| index.get(m) == Some(&r))
                            .map(|(_, c)| c.clone())
                            .unwrap_or_else(F::zero)
                    })
                    .collect(),
            );
        }
    }
    Ok(Some(std.len() - linalg::rank(&rows, std.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::parse::parse_ideal_file;

    fn ideal(text: &str) -> Ideal<Rational> {
        parse_ideal_file(text).unwrap().ideal(&Rational::from_integer(1.into()))
    }

    const EX61: &str = "ring x y; char 0; ideal x^2*y - x*y^2, x^3, y^3";

    #[test]
    fn both_criteria_accept_the_decomposition() {
        let i = ideal(EX61);
        let comps = [
            ideal("ring x y; char 0; ideal x^2 + y^2 - x*y, x^3, y^3"),
            ideal("ring x y; char 0; ideal x^3, y"),
        ];
        for c in [Criterion::GbIntersection, Criterion::SocleInjectivity] {
            assert!(check_intersection(&i, &comps, c).unwrap().verdict, "{c:?}");
        }
        assert!(check_intersection(&i, &[i.clone()], Criterion::SocleInjectivity).unwrap().verdict);
    }

    #[test]
    fn socle_element_dying_everywhere_is_reported() {
        let i = ideal(EX61);
        let comps = [ideal("ring x y; char 0; ideal x^3, y"), ideal("ring x y; char 0; ideal x, y^3")];
        assert!(!check_intersection(&i, &comps, Criterion::GbIntersection).unwrap().verdict);
        let cert = check_intersection(&i, &comps, Criterion::SocleInjectivity).unwrap();
        assert!(!cert.verdict);
        assert_eq!(cert.failures.len(), 1);
        let beta = ideal("ring x y; char 0; ideal x^2*y").gens()[0].clone();
        assert!(i.with_generators([cert.failures[0].element.clone()]).equals(&i.with_generators([beta])).unwrap());
    }

    #[test]
    fn report_on_cogenerated_example_over_a_prime_field() {
        let f = parse_ideal_file("ring x y; char 7; ideal x^2*y - x*y^2, x^3, y^3").unwrap();
        let i = f.ideal(&crate::field::Fp::new(1, 7));
        let r = binomial_irreducibility_report(&i).unwrap();
        assert_eq!(r.verdict, ReportVerdict::ProvedImpossible);
        let q = binomial_irreducibility_report(&ideal(EX61)).unwrap();
        assert_eq!(q.verdict, ReportVerdict::NotFound);
    }

    #[test]
    fn monomial_ideal_report_finds_decomposition() {
        let r = binomial_irreducibility_report(&ideal("ring x y; char 0; ideal x^2, x*y, y^2")).unwrap();
        assert_eq!(r.verdict, ReportVerdict::Found);
        assert_eq!(r.decomposition.unwrap().len(), 2);
    }
}
