//! Dense linear algebra over an exact field.

use crate::field::Field;

pub type Vector<F> = Vec<F>;

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref<F: Field>(rows: &[Vector<F>], ncols: usize) -> (Vec<Vector<F>>, Vec<usize>) {
    let mut m: Vec<Vector<F>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let t = m[r][j].clone();
                    if !t.is_zero() {
                        m[i][j] = m[i][j].clone() - f.clone() * t;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank<F: Field>(rows: &[Vector<F>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : A x = 0}` for `A` given by rows.
pub fn kernel<F: Field>(rows: &[Vector<F>], ncols: usize) -> Vec<Vector<F>> {
    let (m, pivots) = rref(rows, ncols);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(); ncols];
        v[free] = F::one();
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

pub fn mat_vec<F: Field>(rows: &[Vector<F>], v: &[F]) -> Vector<F> {
    rows.iter()
        .map(|r| {
            r.iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
        })
        .collect()
}

/// A subspace of `F^n`, stored as a reduced echelon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F: Field> {
    ambient: usize,
    basis: Vec<Vector<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: vec![],
            pivots: vec![],
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::coordinates(ambient, 0..ambient)
    }

    pub fn span(ambient: usize, vectors: &[Vector<F>]) -> Self {
        let (basis, pivots) = rref(vectors, ambient);
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    /// Span of the given standard basis vectors.
    pub fn coordinates(ambient: usize, coords: impl IntoIterator<Item = usize>) -> Self {
        let vs: Vec<Vector<F>> = coords
            .into_iter()
            .map(|c| {
                let mut v = vec![F::zero(); ambient];
                v[c] = F::one();
                v
            })
            .collect();
        Self::span(ambient, &vs)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vector<F>] {
        &self.basis
    }

    /// Remainder of `v` after eliminating the pivot coordinates.
    pub fn reduce(&self, v: &[F]) -> Vector<F> {
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if !r[p].is_zero() {
                let f = r[p].clone();
                for (x, b) in r.iter_mut().zip(row) {
                    if !b.is_zero() {
                        *x = x.clone() - f.clone() * b.clone();
                    }
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    pub fn contains_space(&self, other: &Subspace<F>) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace<F>) -> Subspace<F> {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Self::span(self.ambient, &vs)
    }

    /// Linear functionals cutting out this subspace.
    pub fn equations(&self) -> Vec<Vector<F>> {
        kernel(&self.basis, self.ambient)
    }

    pub fn intersect(&self, other: &Subspace<F>) -> Subspace<F> {
        self.restrict_by(&other.equations())
    }

    /// `{v in self : e(v) = 0 for every functional e}`.
    pub fn restrict_by(&self, functionals: &[Vector<F>]) -> Subspace<F> {
        if self.basis.is_empty() || functionals.is_empty() {
            return self.clone();
        }
        // rows: e(b_k) for each functional e, columns indexed by basis vectors
        let rows: Vec<Vector<F>> = functionals
            .iter()
            .map(|e| {
                self.basis
                    .iter()
                    .map(|b| {
                        e.iter()
                            .zip(b)
                            .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                            .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
                    })
                    .collect()
            })
            .collect();
        let ker = kernel(&rows, self.basis.len());
        let vs: Vec<Vector<F>> = ker.iter().map(|c| self.combine(c)).collect();
        Self::span(self.ambient, &vs)
    }

    /// `{v in self : M v in target}` for a linear map `M` given by rows.
    pub fn preimage_within(&self, map: &[Vector<F>], target: &Subspace<F>) -> Subspace<F> {
        let eqs = target.equations();
        let pulled: Vec<Vector<F>> = eqs
            .iter()
            .map(|e| {
                (0..self.ambient)
                    .map(|j| {
                        e.iter()
                            .zip(map)
                            .filter(|(x, row)| !x.is_zero() && !row[j].is_zero())
                            .fold(F::zero(), |acc, (x, row)| acc + x.clone() * row[j].clone())
                    })
                    .collect()
            })
            .collect();
        self.restrict_by(&pulled)
    }

    fn combine(&self, coeffs: &[F]) -> Vector<F> {
        let mut v = vec![F::zero(); self.ambient];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x = x.clone() + c.clone() * y.clone();
                }
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use num_traits::Zero;

    fn v(xs: &[i64]) -> Vec<Fp> {
        xs.iter().map(|&x| Fp::new(x, 7)).collect()
    }

    #[test]
    fn kernel_of_rank_one_map() {
        let k = kernel(&[v(&[1, 2, 3])], 3);
        assert_eq!(k.len(), 2);
        for x in &k {
            assert!(mat_vec(&[v(&[1, 2, 3])], x)[0].is_zero());
        }
    }

    #[test]
    fn subspace_ops() {
        let a = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        let i = a.intersect(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&v(&[0, 3, 0])));
        assert_eq!(a.sum(&b).dim(), 3);
        assert!(a.contains_space(&i));
    }

    #[test]
    fn preimage_under_shift() {
        // shift e0 -> e1 -> e2 -> 0; preimage of span(e2) is span(e1, e2)
        let shift = vec![v(&[0, 0, 0]), v(&[1, 0, 0]), v(&[0, 1, 0])];
        let full = Subspace::<Fp>::full(3);
        let target = Subspace::coordinates(3, [2]);
        let pre = full.preimage_within(&shift, &target);
        assert_eq!(pre, Subspace::coordinates(3, [1, 2]));
    }
}
