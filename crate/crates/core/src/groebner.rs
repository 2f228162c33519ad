//! Buchberger's algorithm with the normal selection strategy and
//! Gebauer–Möller pair elimination, plus the division algorithm.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicU32, AtomicUsize, Ordering as AtomicOrdering};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Exponent, Polynomial, TermOrder};

/// Caps on Buchberger runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_basis: usize,
    pub max_degree: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_basis: 10_000,
            max_degree: 64,
        }
    }
}

static MAX_BASIS: AtomicUsize = AtomicUsize::new(10_000);
static MAX_DEGREE: AtomicU32 = AtomicU32::new(64);

/// Process-wide limits used by [`crate::ideal::Ideal`].
pub fn global_limits() -> Limits {
    Limits {
        max_basis: MAX_BASIS.load(AtomicOrdering::Relaxed),
        max_degree: MAX_DEGREE.load(AtomicOrdering::Relaxed),
    }
}

pub fn set_global_limits(l: Limits) {
    MAX_BASIS.store(l.max_basis, AtomicOrdering::Relaxed);
    MAX_DEGREE.store(l.max_degree, AtomicOrdering::Relaxed);
}

/// Terms sorted descending under a fixed order.
type Terms<F> = Vec<(Exponent, F)>;

fn sorted<F: Field>(p: &Polynomial<F>, ord: TermOrder) -> Terms<F> {
    let mut t = p.terms().to_vec();
    t.sort_by(|a, b| ord.cmp(&b.0, &a.0));
    t
}

/// `a - c * x^m * b` for descending term lists.
fn sub_scaled<F: Field>(a: &[(Exponent, F)], c: &F, m: &Exponent, b: &[(Exponent, F)], ord: TermOrder) -> Terms<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() {
            out.extend_from_slice(&a[i..]);
            break;
        }
        let be = b[j].0.add(m);
        if i == a.len() {
            out.push((be, -(c.clone() * b[j].1.clone())));
            j += 1;
            continue;
        }
        match ord.cmp(&a[i].0, &be) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((be, -(c.clone() * b[j].1.clone())));
                j += 1;
            }
            Ordering::Equal => {
                let v = a[i].1.clone() - c.clone() * b[j].1.clone();
                if !v.is_zero() {
                    out.push((be, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Full reduction of `f` modulo monic `basis` (all sorted under `ord`).
fn reduce_terms<F: Field>(f: Terms<F>, basis: &[Terms<F>], ord: TermOrder) -> Terms<F> {
    let mut rem: Terms<F> = Vec::new();
    let mut p = f;
    let mut start = 0;
    while start < p.len() {
        let (lt, lc) = (&p[start].0, &p[start].1);
        let div = basis
            .iter()
            .find_map(|g| g[0].0.quotient(lt).map(|m| (g, m)));
        match div {
            Some((g, m)) => {
                let c = lc.clone();
                p = sub_scaled(&p[start..], &c, &m, g, ord);
                start = 0;
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    rem
}

fn make_monic<F: Field>(mut t: Terms<F>) -> Terms<F> {
    if let Some((_, c)) = t.first() {
        let inv = c.inv().expect("nonzero leading coefficient");
        for (_, x) in t.iter_mut() {
            *x = x.clone() * inv.clone();
        }
    }
    t
}

fn to_poly<F: Field>(nvars: usize, t: Terms<F>) -> Polynomial<F> {
    Polynomial::from_terms(nvars, t)
}

#[derive(Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Exponent,
}

/// Reduced Gröbner basis, monic, sorted ascending by leading term.
pub fn groebner_basis<F: Field>(gens: &[Polynomial<F>], ord: TermOrder, limits: Limits) -> Result<Vec<Polynomial<F>>> {
    let nvars = gens.first().map(|g| g.nvars()).unwrap_or(0);
    let mut polys: Vec<Terms<F>> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut input: Vec<Terms<F>> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| make_monic(sorted(g, ord)))
        .collect();
    input.sort_by(|a, b| ord.cmp(&a[0].0, &b[0].0));

    let insert = |h: Terms<F>, polys: &mut Vec<Terms<F>>, active: &mut Vec<bool>, pairs: &mut Vec<Pair>| -> Result<()> {
        if h.first().map(|t| t.0.degree()).unwrap_or(0) > limits.max_degree {
            return Err(Error::ResourceLimit(format!(
                "basis element degree exceeds {}",
                limits.max_degree
            )));
        }
        let hk = polys.len();
        let lt_h = h[0].0.clone();
        // Gebauer–Möller update
        let cands: Vec<(usize, Exponent)> = (0..polys.len())
            .filter(|&g| active[g])
            .map(|g| (g, lt_h.lcm(&polys[g][0].0)))
            .collect();
        let mut keep: Vec<(usize, Exponent)> = Vec::new();
        for (idx, (g, l)) in cands.iter().enumerate() {
            let coprime = lt_h.is_coprime(&polys[*g][0].0);
            let dominated = cands[idx + 1..]
                .iter()
                .chain(keep.iter())
                .any(|(_, l2)| l2.divides(l));
            if coprime || !dominated {
                keep.push((*g, l.clone()));
            }
        }
        let new_pairs: Vec<Pair> = keep
            .into_iter()
            .filter(|(g, _)| !lt_h.is_coprime(&polys[*g][0].0))
            .map(|(g, l)| Pair { i: g, j: hk, lcm: l })
            .collect();
        pairs.retain(|p| {
            let li = lt_h.lcm(&polys[p.i][0].0);
            let lj = lt_h.lcm(&polys[p.j][0].0);
            !(lt_h.divides(&p.lcm) && li != p.lcm && lj != p.lcm)
        });
        pairs.extend(new_pairs);
        for g in 0..polys.len() {
            if active[g] && lt_h.divides(&polys[g][0].0) {
                active[g] = false;
            }
        }
        polys.push(h);
        active.push(true);
        if active.iter().filter(|a| **a).count() > limits.max_basis {
            return Err(Error::ResourceLimit(format!(
                "basis size exceeds {}",
                limits.max_basis
            )));
        }
        Ok(())
    };

    for g in input {
        let basis: Vec<Terms<F>> = (0..polys.len())
            .filter(|&k| active[k])
            .map(|k| polys[k].clone())
            .collect();
        let h = reduce_terms(g, &basis, ord);
        if !h.is_empty() {
            insert(make_monic(h), &mut polys, &mut active, &mut pairs)?;
        }
    }

    while !pairs.is_empty() {
        // normal strategy: smallest lcm first
        let k = (0..pairs.len())
            .min_by(|&a, &b| ord.cmp(&pairs[a].lcm, &pairs[b].lcm))
            .unwrap();
        let p = pairs.swap_remove(k);
        let (f, g) = (&polys[p.i], &polys[p.j]);
        let mf = f[0].0.quotient(&p.lcm).unwrap();
        let mg = g[0].0.quotient(&p.lcm).unwrap();
        let one = f[0].1.clone();
        let fm: Terms<F> = f[1..].iter().map(|(e, c)| (e.add(&mf), c.clone())).collect();
        let s = sub_scaled(&fm, &one, &mg, &g[1..], ord);
        let basis: Vec<Terms<F>> = (0..polys.len())
            .filter(|&k| active[k])
            .map(|k| polys[k].clone())
            .collect();
        let h = reduce_terms(s, &basis, ord);
        if !h.is_empty() {
            insert(make_monic(h), &mut polys, &mut active, &mut pairs)?;
        }
    }

    // interreduce
    let mut basis: Vec<Terms<F>> = (0..polys.len())
        .filter(|&k| active[k])
        .map(|k| polys[k].clone())
        .collect();
    basis.sort_by(|a, b| ord.cmp(&a[0].0, &b[0].0));
    let mut reduced = Vec::with_capacity(basis.len());
    for k in 0..basis.len() {
        let others: Vec<Terms<F>> = basis
            .iter()
            .enumerate()
            .filter(|(m, _)| *m != k)
            .map(|(_, t)| t.clone())
            .collect();
        let head = basis[k][0].clone();
        let tail = reduce_terms(basis[k][1..].to_vec(), &others, ord);
        let mut t = vec![head];
        t.extend(tail);
        reduced.push(t);
    }
    Ok(reduced.into_iter().map(|t| to_poly(nvars, t)).collect())
}

/// Remainder of `f` on division by a Gröbner basis under `ord`.
pub fn normal_form<F: Field>(f: &Polynomial<F>, basis: &[Polynomial<F>], ord: TermOrder) -> Polynomial<F> {
    let b: Vec<Terms<F>> = basis.iter().map(|g| make_monic(sorted(g, ord))).collect();
    to_poly(f.nvars(), reduce_terms(sorted(f, ord), &b, ord))
}

/// Exact quotient `f / g`, or `None` if `g` does not divide `f`.
pub fn exact_division<F: Field>(f: &Polynomial<F>, g: &Polynomial<F>) -> Option<Polynomial<F>> {
    let ord = TermOrder::DegRevLex;
    let gt = sorted(g, ord);
    let (glt, glc) = gt.first()?.clone();
    let ginv = glc.inv()?;
    let mut p = sorted(f, ord);
    let mut q: Terms<F> = Vec::new();
    while let Some((lt, lc)) = p.first().cloned() {
        let m = glt.quotient(&lt)?;
        let c = lc * ginv.clone();
        p = sub_scaled(&p, &c, &m, &gt, ord);
        q.push((m, c));
    }
    Some(to_poly(f.nvars(), q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};
    use num_traits::One;

    fn p(terms: &[(i64, &[u32])]) -> Polynomial<Rational> {
        let one = Rational::one();
        Polynomial::from_terms(
            terms[0].1.len(),
            terms
                .iter()
                .map(|(c, e)| (Exponent::from_slice(e), one.integer(*c)))
                .collect(),
        )
    }

    #[test]
    fn cyclic_three_basis_is_reduced() {
        // x+y+z, xy+yz+zx, xyz-1
        let f1 = p(&[(1, &[1, 0, 0]), (1, &[0, 1, 0]), (1, &[0, 0, 1])]);
        let f2 = p(&[(1, &[1, 1, 0]), (1, &[0, 1, 1]), (1, &[1, 0, 1])]);
        let f3 = p(&[(1, &[1, 1, 1]), (-1, &[0, 0, 0])]);
        let gb = groebner_basis(&[f1.clone(), f2.clone(), f3.clone()], TermOrder::Lex, Limits::default()).unwrap();
        assert_eq!(gb.len(), 3);
        for f in [f1, f2, f3] {
            assert!(normal_form(&f, &gb, TermOrder::Lex).is_zero());
        }
        // z^3 - 1 is in the basis
        assert!(gb.iter().any(|g| *g == p(&[(1, &[0, 0, 3]), (-1, &[0, 0, 0])])));
    }

    #[test]
    fn binomial_input_gives_binomial_basis() {
        let one = Fp::new(1, 101);
        let f = Polynomial::binomial(Exponent::from_slice(&[2, 0]), Exponent::from_slice(&[1, 1]), one, Fp::new(3, 101));
        let g = Polynomial::binomial(Exponent::from_slice(&[0, 3]), Exponent::from_slice(&[1, 0]), one, Fp::new(5, 101));
        let gb = groebner_basis(&[f, g], TermOrder::DegRevLex, Limits::default()).unwrap();
        assert!(gb.iter().all(|g| g.is_binomial()));
    }

    #[test]
    fn exact_division_roundtrip() {
        let f = p(&[(1, &[2, 0]), (-1, &[1, 1])]);
        let x = p(&[(1, &[1, 0])]);
        assert_eq!(exact_division(&f, &x).unwrap(), p(&[(1, &[1, 0]), (-1, &[0, 1])]));
        assert!(exact_division(&f, &p(&[(1, &[0, 1])])).is_none());
    }

    #[test]
    fn degree_cap_is_enforced() {
        let f = p(&[(1, &[5, 0]), (-1, &[0, 0])]);
        let lim = Limits { max_basis: 10, max_degree: 3 };
        assert!(matches!(groebner_basis(&[f], TermOrder::DegRevLex, lim), Err(Error::ResourceLimit(_))));
    }
}
