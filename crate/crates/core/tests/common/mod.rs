//! Shared helpers and brute-force oracles for the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use binoc_core::fiber::{Fiber, MonoidPrime};
use binoc_core::parse::parse_ideal_file;
use binoc_core::poly::Exponent;
use binoc_core::{Field, Fp, Ideal, Polynomial, Rational};
use rand::Rng;

pub fn q(text: &str) -> Ideal<Rational> {
    parse_ideal_file(text).unwrap().ideal(&Rational::from_integer(1.into()))
}

pub fn fp(text: &str, p: u64) -> Ideal<Fp> {
    parse_ideal_file(text).unwrap().ideal(&Fp::new(1, p))
}

pub fn poly<F: Field>(ideal: &Ideal<F>, text: &str) -> Polynomial<F> {
    let names = binoc_core::poly::default_names(ideal.nvars());
    let p = binoc_core::parse::parse_polynomial(text, &names).unwrap();
    binoc_core::parse::convert(&p, &ideal.one())
}

pub fn e(v: &[u32]) -> Exponent {
    Exponent::from_slice(v)
}

pub fn names(n: usize) -> Vec<String> {
    binoc_core::poly::default_names(n)
}

/// Random binomial ideal in `n` variables with exponents at most `max_exp`.
/// Binomials are mostly degree-preserving so that they survive reduction.
pub fn random_binomial_ideal<R: Rng>(rng: &mut R, n: usize, max_exp: u32, p: u64) -> Ideal<Fp> {
    let one = Fp::new(1, p);
    let of_degree = |rng: &mut R, d: u32| {
        let mut e = Exponent::zero(n);
        let mut left = d;
        while left > 0 {
            let i = rng.gen_range(0..n);
            if e.0[i] < max_exp {
                e.0[i] += 1;
                left -= 1;
            }
        }
        e
    };
    let mut gens = Vec::new();
    for i in 0..n {
        if rng.gen_bool(0.85) {
            let mut d = Exponent::zero(n);
            d.0[i] = rng.gen_range(3..=max_exp);
            gens.push(Polynomial::monomial(d, one.clone()));
        }
    }
    for _ in 0..rng.gen_range(1..=3) {
        let d = rng.gen_range(1..=max_exp);
        let a = of_degree(rng, d);
        let mut b = a.clone();
        for _ in 0..8 {
            if b != a {
                break;
            }
            b = if rng.gen_bool(0.7) {
                of_degree(rng, d)
            } else {
                let d2 = rng.gen_range(0..=max_exp);
                of_degree(rng, d2)
            };
        }
        if a == b {
            continue;
        }
        let c = match rng.gen_range(0..5) {
            0..=2 => one.clone(),
            3 => Fp::new(-1, p),
            _ => Fp::new(rng.gen_range(1..p as i64), p),
        };
        gens.push(Polynomial::binomial(a, b, one.clone(), c));
    }
    Ideal::with_template(n, gens, one)
}

/// Every monoid prime has a finite (possibly empty) localization.
pub fn p_cofinite<F: Field>(ideal: &Ideal<F>) -> bool {
    MonoidPrime::all(ideal.nvars()).iter().all(|p| Fiber::new(ideal, p).is_ok())
}

/// Monomials `x^e` with `NF(x^e) = x^e`, found by search from `1`.
pub fn standard_monomials<F: Field>(ideal: &Ideal<F>) -> Vec<Exponent> {
    let n = ideal.nvars();
    let one = ideal.one();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut stack = vec![Exponent::zero(n)];
    while let Some(a) = stack.pop() {
        if !seen.insert(a.clone()) {
            continue;
        }
        let m = Polynomial::monomial(a.clone(), one.clone());
        if ideal.normal_form(&m).unwrap() != m {
            continue;
        }
        assert!(out.len() < 10_000, "quotient is not finite");
        out.push(a.clone());
        for i in 0..n {
            stack.push(a.add(&Exponent::unit(n, i)));
        }
    }
    out.sort();
    out
}

/// All coefficient vectors over `F_p`, in lexicographic order.
pub fn all_vectors(len: usize, p: u64) -> Vec<Vec<Fp>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v: Vec<Fp>| {
                (0..p as i64).map(move |c| {
                    let mut w = v.clone();
                    w.push(Fp::new(c, p));
                    w
                })
            })
            .collect();
    }
    out
}

pub fn combine<F: Field>(basis: &[Exponent], coeffs: &[F], n: usize) -> Polynomial<F> {
    let terms = basis.iter().cloned().zip(coeffs.iter().cloned()).collect();
    Polynomial::from_terms(n, terms)
}

/// Brute-force socle of `k[x]/I` for an ideal primary to the maximal
/// ideal over `F_p`: every `f` with `x_i f` in `I` for all `i`.
pub fn brute_socle(ideal: &Ideal<Fp>, p: u64) -> Vec<Polynomial<Fp>> {
    let n = ideal.nvars();
    let std = standard_monomials(ideal);
    let one = ideal.one();
    all_vectors(std.len(), p)
        .into_iter()
        .map(|c| combine(&std, &c, n))
        .filter(|f| {
            (0..n).all(|i| {
                let xi = Polynomial::var(n, i, one.clone());
                ideal.contains(&f.mul(&xi)).unwrap()
            })
        })
        .collect()
}

/// Brute-force largest submodule of `k[x]/I` inside the span `v` of some
/// polynomials: the vectors all of whose monomial multiples stay in `v`.
pub fn brute_largest_submodule(ideal: &Ideal<Fp>, v: &[Polynomial<Fp>], p: u64) -> Vec<Polynomial<Fp>> {
    let n = ideal.nvars();
    let std = standard_monomials(ideal);
    let one = ideal.one();
    let reduce = |f: &Polynomial<Fp>| ideal.normal_form(f).unwrap();
    let vset: HashSet<String> = all_vectors(v.len(), p)
        .iter()
        .map(|c| {
            let mut f = Polynomial::zero(n);
            for (k, g) in c.iter().zip(v) {
                f = f.add(&g.scale(k));
            }
            key(&reduce(&f))
        })
        .collect();
    let multipliers: Vec<Exponent> = std.clone();
    all_vectors(std.len(), p)
        .into_iter()
        .map(|c| combine(&std, &c, n))
        .filter(|f| {
            multipliers
                .iter()
                .all(|m| vset.contains(&key(&reduce(&f.mul_monomial(m, &one)))))
        })
        .collect()
}

pub fn key<F: Field>(f: &Polynomial<F>) -> String {
    f.to_string_with(&names(f.nvars()))
}

/// Ring-level criterion: `k[x]/I` embeds in the product of the
/// `k[x]/W_j`, tested on the standard monomial basis of a finite quotient.
pub fn criterion_ring_injective<F: Field>(ideal: &Ideal<F>, components: &[Ideal<F>]) -> bool {
    let n = ideal.nvars();
    let one = ideal.one();
    let std = standard_monomials(ideal);
    let mut cols: Vec<Exponent> = Vec::new();
    let mut rows = Vec::new();
    for a in &std {
        let m = Polynomial::monomial(a.clone(), one.clone());
        let mut row: Vec<(usize, F)> = Vec::new();
        for (j, w) in components.iter().enumerate() {
            for (t, c) in w.normal_form(&m).unwrap().terms() {
                let mut tagged = t.clone();
                tagged.0.push(j as u32);
                let k = cols.iter().position(|x| *x == tagged).unwrap_or_else(|| {
                    cols.push(tagged.clone());
                    cols.len() - 1
                });
                row.push((k, c.clone()));
            }
        }
        rows.push(row);
    }
    let dense: Vec<Vec<F>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![F::zero(); cols.len()];
            for (k, c) in r {
                v[*k] = c.clone();
            }
            v
        })
        .collect();
    let _ = n;
    binoc_core::linalg::rank(&dense, cols.len()) == std.len()
}

/// Socle criterion at the maximal monomial prime: every nonzero socle
/// element of `k[x]/I` survives in some `k[x]/W_j`.
pub fn criterion_maximal_socle(ideal: &Ideal<Fp>, components: &[Ideal<Fp>], p: u64) -> bool {
    brute_socle(ideal, p)
        .iter()
        .filter(|f| !ideal.contains(f).unwrap())
        .all(|f| components.iter().any(|w| !w.contains(f).unwrap()))
}
