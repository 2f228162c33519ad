//! Congruences on the localization `Q_P` with a finite quotient.
//!
//! A [`CongruenceView`] is a partition of the fiber's standard monomials plus
//! the nil class. The congruence induced by the ideal is the finest such
//! partition; every derived congruence (components, collapses, closures) is
//! a coarsening of it, so translations are always computed through the
//! fiber tables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fiber::{Fiber, MonoidPrime};
use crate::field::Field;
use crate::ideal::Ideal;
use crate::lattice::{self, IntVec};
use crate::poly::{monomial_string, Exponent};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GreensOrder {
    /// The first element generates the second.
    Below,
    Above,
    Equivalent,
    Incomparable,
}

/// A partner certifying a witness for one generator of the prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Aide {
    Nil,
    Class(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WitnessKind {
    Witness,
    Key,
    Essential,
    Protected,
    Cogenerator,
}

impl WitnessKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            WitnessKind::Witness => "witness",
            WitnessKind::Key => "key",
            WitnessKind::Essential => "essential",
            WitnessKind::Protected => "protected",
            WitnessKind::Cogenerator => "cogenerator",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessRecord {
    pub witness: Exponent,
    pub class: usize,
    pub prime: MonoidPrime,
    pub kind: WitnessKind,
    /// Aides per generator (variable index) of the prime.
    pub aides: Vec<(usize, Vec<Aide>)>,
    pub key_aide: Option<Aide>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct CongruencePredicates {
    pub is_primary: bool,
    pub is_mesoprimary: bool,
    pub is_coprincipal: bool,
    pub is_soccular: bool,
}

/// The prime congruence at a class: the prime plus the stabilizer lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeCongruence {
    pub prime: MonoidPrime,
    pub lattice: Vec<IntVec>,
}

pub struct CongruenceView<F: Field> {
    fiber: Arc<Fiber<F>>,
    label: Vec<Option<usize>>,
    members: Vec<Vec<usize>>,
    reach: Vec<Vec<bool>>,
    reach_nil: Vec<bool>,
}

impl<F: Field> Clone for CongruenceView<F> {
    fn clone(&self) -> Self {
        CongruenceView {
            fiber: self.fiber.clone(),
            label: self.label.clone(),
            members: self.members.clone(),
            reach: self.reach.clone(),
            reach_nil: self.reach_nil.clone(),
        }
    }
}

impl<F: Field> fmt::Debug for CongruenceView<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let classes: Vec<Vec<&Exponent>> = self
            .members
            .iter()
            .map(|m| m.iter().map(|&c| self.fiber.rep(c)).collect())
            .collect();
        f.debug_struct("CongruenceView")
            .field("prime", self.fiber.prime())
            .field("classes", &classes)
            .finish()
    }
}

impl<F: Field> PartialEq for CongruenceView<F> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.fiber, &other.fiber) && self.label == other.label
    }
}

/// The congruence induced by `ideal` on the localization at `prime`.
pub fn localize<F: Field>(ideal: &Ideal<F>, prime: &MonoidPrime) -> Result<CongruenceView<F>> {
    Ok(CongruenceView::from_fiber(Fiber::shared(ideal, prime)?))
}

impl<F: Field> CongruenceView<F> {
    pub fn from_fiber(fiber: Arc<Fiber<F>>) -> Self {
        let label = (0..fiber.len()).map(Some).collect();
        Self::from_labels(fiber, label)
    }

    /// Builds a view from a cell labelling; labels are renumbered by first cell.
    pub fn from_labels(fiber: Arc<Fiber<F>>, label: Vec<Option<usize>>) -> Self {
        let mut renumber: HashMap<usize, usize> = HashMap::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        let label: Vec<Option<usize>> = label
            .into_iter()
            .enumerate()
            .map(|(cell, l)| {
                l.map(|l| {
                    let next = renumber.len();
                    let id = *renumber.entry(l).or_insert(next);
                    if id == members.len() {
                        members.push(vec![]);
                    }
                    members[id].push(cell);
                    id
                })
            })
            .collect();
        let mut view = CongruenceView {
            fiber,
            label,
            members,
            reach: vec![],
            reach_nil: vec![],
        };
        view.compute_reach();
        view
    }

    fn compute_reach(&mut self) {
        let m = self.members.len();
        let n = self.fiber.nvars();
        let s = self.fiber.units().len();
        let mut reach = vec![vec![false; m]; m];
        let mut reach_nil = vec![false; m];
        for a in 0..m {
            let mut stack = vec![a];
            reach[a][a] = true;
            while let Some(b) = stack.pop() {
                let mut next: Vec<Option<usize>> = (0..n).map(|v| self.step(b, v)).collect();
                next.extend((0..s).map(|k| Some(self.step_back(b, k))));
                for c in next {
                    match c {
                        None => reach_nil[a] = true,
                        Some(c) if !reach[a][c] => {
                            reach[a][c] = true;
                            stack.push(c);
                        }
                        _ => {}
                    }
                }
            }
        }
        self.reach = reach;
        self.reach_nil = reach_nil;
    }

    /// A coarsening given by a map on classes.
    pub fn relabel(&self, class_map: &[Option<usize>]) -> Self {
        let label = self.label.iter().map(|l| l.and_then(|c| class_map[c])).collect();
        Self::from_labels(self.fiber.clone(), label)
    }

    pub fn fiber(&self) -> &Arc<Fiber<F>> {
        &self.fiber
    }

    pub fn prime(&self) -> &MonoidPrime {
        self.fiber.prime()
    }

    pub fn nvars(&self) -> usize {
        self.fiber.nvars()
    }

    /// Number of non-nil classes.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self, class: usize) -> &[usize] {
        &self.members[class]
    }

    pub fn labels(&self) -> &[Option<usize>] {
        &self.label
    }

    pub fn class_of_cell(&self, cell: usize) -> Option<usize> {
        self.label[cell]
    }

    /// Class of a monomial, `None` for nil.
    pub fn class_of(&self, q: &Exponent) -> Option<usize> {
        self.fiber.cell_of(q).and_then(|c| self.label[c])
    }

    /// Representative of a class in `N^n`.
    pub fn rep(&self, class: usize) -> &Exponent {
        self.fiber.rep(self.members[class][0])
    }

    pub fn describe(&self, class: Option<usize>, names: &[String]) -> String {
        match class {
            None => "nil".into(),
            Some(c) => monomial_string(self.rep(c), names),
        }
    }

    /// Class of `a + e_v`.
    pub fn step(&self, class: usize, v: usize) -> Option<usize> {
        self.fiber
            .shift(self.members[class][0], v)
            .and_then(|(d, _)| self.label[d])
    }

    /// Class of `a - e_u` for the `k`-th unit variable.
    pub fn step_back(&self, class: usize, k: usize) -> usize {
        let (d, _) = self.fiber.unshift(self.members[class][0], k);
        self.label[d].expect("units never annihilate")
    }

    /// Class of `a + g` for a unit `g`.
    pub fn translate(&self, class: usize, g: &[i64]) -> usize {
        let (d, _) = self.fiber.translate(self.members[class][0], g);
        self.label[d].expect("units never annihilate")
    }

    /// Class of `a + b`.
    pub fn add(&self, a: usize, b: usize) -> Option<usize> {
        let rep = self.rep(b).clone();
        let mut c = a;
        for (v, &k) in rep.0.iter().enumerate() {
            for _ in 0..k {
                c = self.step(c, v)?;
            }
        }
        Some(c)
    }

    /// `b` lies in the ideal generated by `a`.
    pub fn reaches(&self, a: usize, b: usize) -> bool {
        self.reach[a][b]
    }

    pub fn reaches_nil(&self, a: usize) -> bool {
        self.reach_nil[a]
    }

    pub fn strictly_below(&self, a: usize, b: usize) -> bool {
        self.reach[a][b] && !self.reach[b][a]
    }

    pub fn greens(&self, a: Option<usize>, b: Option<usize>) -> GreensOrder {
        let up = |x: Option<usize>, y: Option<usize>| match (x, y) {
            (_, None) => x.map_or(true, |x| self.reach_nil[x]),
            (None, Some(_)) => false,
            (Some(x), Some(y)) => self.reach[x][y],
        };
        match (up(a, b), up(b, a)) {
            (true, true) => GreensOrder::Equivalent,
            (true, false) => GreensOrder::Below,
            (false, true) => GreensOrder::Above,
            (false, false) => GreensOrder::Incomparable,
        }
    }

    pub fn greens_compare(&self, q: &Exponent, r: &Exponent) -> Result<GreensOrder> {
        let a = self.class_of(q).ok_or(Error::NilClass)?;
        let b = self.class_of(r).ok_or(Error::NilClass)?;
        Ok(self.greens(Some(a), Some(b)))
    }

    /// Classes in the unit orbit of `class`, which is its Green's class.
    pub fn orbit(&self, class: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.len())
            .filter(|&b| self.reach[class][b] && self.reach[b][class])
            .collect();
        out.sort_unstable();
        out
    }

    /// Stabilizer of a class under the unit group, in Hermite form.
    pub fn stabilizer(&self, class: usize) -> Vec<IntVec> {
        let s = self.fiber.units().len();
        let mut offsets: BTreeMap<usize, IntVec> = BTreeMap::new();
        offsets.insert(class, vec![0; s]);
        let mut stack = vec![class];
        let mut gens = Vec::new();
        while let Some(a) = stack.pop() {
            let off = offsets[&a].clone();
            for k in 0..s {
                let u = self.fiber.units()[k];
                let b = self.step(a, u).expect("units never annihilate");
                let mut o = off.clone();
                o[k] += 1;
                match offsets.get(&b) {
                    Some(ob) => {
                        let g: IntVec = o.iter().zip(ob).map(|(x, y)| x - y).collect();
                        if g.iter().any(|&x| x != 0) {
                            gens.push(g);
                        }
                    }
                    None => {
                        offsets.insert(b, o);
                        stack.push(b);
                    }
                }
            }
        }
        lattice::hermite(&gens, s)
    }

    pub fn prime_congruence(&self, class: usize) -> PrimeCongruence {
        PrimeCongruence {
            prime: self.prime().clone(),
            lattice: self.stabilizer(class),
        }
    }

    pub fn is_aide(&self, q: Aide, w: usize, v: usize) -> bool {
        let target = self.step(w, v);
        match q {
            Aide::Nil => target.is_none(),
            Aide::Class(q) => q != w && self.step(q, v) == target && !self.strictly_below(q, w),
        }
    }

    fn aides_of(&self, w: usize) -> Vec<(usize, Vec<Aide>)> {
        let candidates: Vec<Aide> = std::iter::once(Aide::Nil)
            .chain((0..self.len()).map(Aide::Class))
            .collect();
        self.prime()
            .vars()
            .iter()
            .map(|&v| {
                let list = candidates.iter().copied().filter(|&q| self.is_aide(q, w, v)).collect();
                (v, list)
            })
            .collect()
    }

    fn record(&self, w: usize) -> Option<WitnessRecord> {
        let aides = self.aides_of(w);
        if aides.iter().any(|(_, l)| l.is_empty()) {
            return None;
        }
        let key_aide = if aides.is_empty() {
            Some(Aide::Nil)
        } else {
            aides[0]
                .1
                .iter()
                .copied()
                .find(|q| aides.iter().all(|(_, l)| l.contains(q)))
        };
        let cogen = key_aide.is_some() && self.prime().vars().iter().all(|&v| self.step(w, v).is_none());
        let kind = match (key_aide.is_some(), cogen) {
            (_, true) => WitnessKind::Cogenerator,
            (true, false) => WitnessKind::Key,
            (false, _) => WitnessKind::Witness,
        };
        Some(WitnessRecord {
            witness: self.rep(w).clone(),
            class: w,
            prime: self.prime().clone(),
            kind,
            aides,
            key_aide,
        })
    }

    /// All witness classes; with `key_only`, those with a key aide.
    pub fn witnesses(&self, key_only: bool) -> Vec<WitnessRecord> {
        (0..self.len())
            .filter_map(|w| self.record(w))
            .filter(|r| !key_only || r.key_aide.is_some())
            .collect()
    }

    pub fn key_witness_classes(&self) -> Vec<usize> {
        self.witnesses(true).into_iter().map(|r| r.class).collect()
    }

    pub fn cogenerators(&self) -> Vec<usize> {
        self.witnesses(true)
            .into_iter()
            .filter(|r| r.kind == WitnessKind::Cogenerator)
            .map(|r| r.class)
            .collect()
    }

    /// Distinct key witnesses that are key aides for each other.
    pub fn key_witness_pairs(&self) -> Vec<(usize, usize)> {
        let key = self.key_witness_classes();
        let is_key_aide = |q: usize, w: usize| self.prime().vars().iter().all(|&v| self.is_aide(Aide::Class(q), w, v));
        let mut out = Vec::new();
        for (i, &a) in key.iter().enumerate() {
            for &b in &key[i + 1..] {
                if is_key_aide(a, b) && is_key_aide(b, a) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn predicates(&self) -> CongruencePredicates {
        let n = self.nvars();
        let s = self.fiber.units().len();
        let m = self.len();
        let nilpotent = self.prime().vars().iter().all(|&v| {
            (0..m).all(|a| {
                let mut c = Some(a);
                for _ in 0..=m {
                    c = c.and_then(|c| self.step(c, v));
                }
                c.is_none()
            })
        });
        let cancellative = self.fiber.units().iter().all(|&u| {
            let mut image = vec![false; m];
            (0..m).all(|a| match self.step(a, u) {
                Some(b) if !image[b] => {
                    image[b] = true;
                    true
                }
                _ => false,
            })
        });
        let is_primary = nilpotent && cancellative;
        let base = self.class_of(&Exponent::zero(n));
        let is_mesoprimary = is_primary
            && match base {
                None => true,
                Some(z) => {
                    let size = self.orbit(z).len();
                    (0..m).all(|a| self.orbit(a).len() == size)
                }
            };
        let cogens = self.cogenerators();
        let same_green = |list: &[usize]| list.windows(2).all(|p| self.reach[p[0]][p[1]] && self.reach[p[1]][p[0]]);
        let is_coprincipal = is_mesoprimary && same_green(&cogens);
        let is_soccular = same_green(&self.key_witness_classes());
        let _ = s;
        CongruencePredicates {
            is_primary,
            is_mesoprimary,
            is_coprincipal,
            is_soccular,
        }
    }

    /// Coprincipal component cogenerated by the class `w`: classes outside
    /// the ideal reaching `w` become nil, the rest are merged along the
    /// stabilizer of `w`.
    pub fn coprincipal_component(&self, w: usize) -> Self {
        let m = self.len();
        let stab = self.stabilizer(w);
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for a in 0..m {
            if !self.reach[a][w] {
                continue;
            }
            for g in &stab {
                let b = self.translate(a, g);
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let map: Vec<Option<usize>> = (0..m)
            .map(|a| self.reach[a][w].then(|| find(&mut parent, a)))
            .collect();
        self.relabel(&map)
    }

    /// Classes of every monomial in the box `0 <= a_i <= bounds_i`.
    pub fn class_table(&self, bounds: &[u32]) -> Vec<(Exponent, Option<usize>)> {
        box_points(bounds)
            .into_iter()
            .map(|a| {
                let c = self.class_of(&a);
                (a, c)
            })
            .collect()
    }

    /// Checks that the labelling is compatible with translation.
    pub fn is_congruence(&self) -> bool {
        let n = self.nvars();
        (0..self.len()).all(|a| {
            (0..n).all(|v| {
                let t = self.step(a, v);
                self.members[a]
                    .iter()
                    .all(|&c| self.fiber.shift(c, v).and_then(|(d, _)| self.label[d]) == t)
            })
        })
    }

    /// `self` refines `other`: related classes stay related.
    pub fn refines(&self, other: &CongruenceView<F>) -> bool {
        let mut image: HashMap<Option<usize>, Option<usize>> = HashMap::new();
        self.label.iter().zip(&other.label).all(|(a, b)| match a {
            None => b.is_none(),
            Some(_) => *image.entry(*a).or_insert(*b) == *b,
        })
    }
}

/// `a` refines `b` on the monomials of a box; works across different fibers.
pub fn refines_on_box<F: Field, G: Field>(a: &CongruenceView<F>, b: &CongruenceView<G>, bounds: &[u32]) -> bool {
    let mut image: HashMap<Option<usize>, Option<usize>> = HashMap::new();
    box_points(bounds).iter().all(|p| {
        let (x, y) = (a.class_of(p), b.class_of(p));
        match x {
            None => y.is_none(),
            Some(_) => *image.entry(x).or_insert(y) == y,
        }
    })
}

/// Essential witnesses: key witnesses together with classes that occur as
/// a Green's-minimal monomial of some socle element.
pub fn essential_witnesses<F: Field>(view: &CongruenceView<F>) -> Vec<WitnessRecord> {
    let fiber = view.fiber();
    let socle = fiber.socle();
    let mut out: Vec<WitnessRecord> = Vec::new();
    for w in 0..view.len() {
        let record = view.record(w);
        if let Some(r) = &record {
            if r.key_aide.is_some() {
                out.push(r.clone());
                continue;
            }
        }
        let below: Vec<Vec<F>> = (0..fiber.len())
            .filter(|&d| view.class_of_cell(d).is_some_and(|b| view.strictly_below(b, w)))
            .map(|d| {
                let mut e = vec![F::zero(); fiber.len()];
                e[d] = F::one();
                e
            })
            .collect();
        let restricted = socle.restrict_by(&below);
        let hit = restricted
            .basis()
            .iter()
            .any(|v| view.members(w).iter().any(|&c| !v[c].is_zero()));
        if hit {
            out.push(WitnessRecord {
                witness: view.rep(w).clone(),
                class: w,
                prime: view.prime().clone(),
                kind: WitnessKind::Essential,
                aides: record.map(|r| r.aides).unwrap_or_default(),
                key_aide: None,
            });
        }
    }
    out
}

/// One class per Green's class among the given ones, keeping the smallest id.
pub fn orbit_representatives<F: Field>(view: &CongruenceView<F>, classes: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for &c in classes {
        if !out.iter().any(|&d| view.reaches(c, d) && view.reaches(d, c)) {
            out.push(c);
        }
    }
    out
}

pub fn box_points(bounds: &[u32]) -> Vec<Exponent> {
    let mut out = vec![Exponent::zero(bounds.len())];
    for (i, &b) in bounds.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * (b as usize + 1));
        for e in &out {
            for k in 0..=b {
                let mut f = e.clone();
                f.0[i] = k;
                next.push(f);
            }
        }
        out = next;
    }
    out
}

/// Per-variable bound: largest exponent in the reduced basis, plus one.
pub fn default_bounds<F: Field>(ideal: &Ideal<F>) -> Result<Vec<u32>> {
    let n = ideal.nvars();
    let mut b = vec![1u32; n];
    for g in ideal.basis()?.iter() {
        for (e, _) in g.terms() {
            for i in 0..n {
                b[i] = b[i].max(e.0[i] + 1);
            }
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::parse::parse_ideal_file;

    fn view(text: &str) -> CongruenceView<Rational> {
        let f = parse_ideal_file(text).unwrap();
        let i = f.ideal(&Rational::from_integer(1.into()));
        localize(&i, &MonoidPrime::maximal(i.nvars())).unwrap()
    }

    fn e(v: &[u32]) -> Exponent {
        Exponent::from_slice(v)
    }

    #[test]
    fn cogenerated_example_classes() {
        let v = view("ring x y; char 0; ideal x^2*y - x*y^2, x^3, y^3");
        assert_eq!(v.len(), 7);
        assert_eq!(v.class_of(&e(&[3, 0])), None);
        assert_eq!(v.class_of(&e(&[1, 2])), v.class_of(&e(&[2, 1])));
        let cog = v.cogenerators();
        assert_eq!(cog.len(), 1);
        assert_eq!(v.rep(cog[0]), &e(&[2, 1]));
        assert_eq!(v.greens_compare(&e(&[1, 0]), &e(&[0, 1])).unwrap(), GreensOrder::Incomparable);
        assert_eq!(v.greens_compare(&e(&[1, 0]), &e(&[1, 0])).unwrap(), GreensOrder::Equivalent);
    }

    #[test]
    fn mutual_key_aides() {
        let v = view("ring x y; char 0; ideal x^2 - x*y, x*y - y^2, x^3");
        let x = v.class_of(&e(&[1, 0])).unwrap();
        let y = v.class_of(&e(&[0, 1])).unwrap();
        let key = v.key_witness_classes();
        assert!(key.contains(&x) && key.contains(&y));
        assert!(v.key_witness_pairs().contains(&(x.min(y), x.max(y))));
        assert_eq!(v.greens_compare(&e(&[1, 0]), &e(&[2, 0])).unwrap(), GreensOrder::Below);
        assert!(v.predicates().is_coprincipal);
    }

    #[test]
    fn component_at_a_non_key_witness() {
        let v = view("ring x y; char 0; ideal x^2*y - x*y^2, x^3, y^3");
        let w = v.class_of(&e(&[2, 0])).unwrap();
        let c = v.coprincipal_component(w);
        let alive: Vec<Exponent> = (0..c.len()).map(|k| c.rep(k).clone()).collect();
        assert_eq!(alive, vec![e(&[0, 0]), e(&[1, 0]), e(&[2, 0])]);
        assert!(c.is_congruence());
        assert!(v.refines(&c));
    }

    #[test]
    fn box_enumeration() {
        assert_eq!(box_points(&[1, 2]).len(), 6);
    }
}
