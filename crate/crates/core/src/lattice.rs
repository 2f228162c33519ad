//! Integer lattices in `Z^s`: Hermite and Smith normal forms.

use num_integer::Integer;

pub type IntVec = Vec<i64>;

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// Zero rows are dropped, pivots are positive and entries above a pivot
/// lie in `[0, pivot)`.
pub fn hermite(rows: &[IntVec], ncols: usize) -> Vec<IntVec> {
    let mut m: Vec<IntVec> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let mut out_row = 0;
    for col in 0..ncols {
        if out_row >= m.len() {
            break;
        }
        // gcd reduction of column `col` among rows out_row..
        loop {
            let mut best: Option<usize> = None;
            for r in out_row..m.len() {
                if m[r][col] != 0 && best.map_or(true, |b| m[r][col].abs() < m[b][col].abs()) {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            m.swap(out_row, b);
            let mut done = true;
            for r in out_row + 1..m.len() {
                if m[r][col] != 0 {
                    let q = Integer::div_floor(&m[r][col], &m[out_row][col]);
                    for c in 0..ncols {
                        m[r][c] -= q * m[out_row][c];
                    }
                    if m[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[out_row][col] == 0 {
            continue;
        }
        if m[out_row][col] < 0 {
            for c in 0..ncols {
                m[out_row][c] = -m[out_row][c];
            }
        }
        let p = m[out_row][col];
        for r in 0..out_row {
            let q = Integer::div_floor(&m[r][col], &p);
            if q != 0 {
                for c in 0..ncols {
                    m[r][c] -= q * m[out_row][c];
                }
            }
        }
        out_row += 1;
    }
    m.truncate(out_row);
    m.retain(|r| r.iter().any(|&x| x != 0));
    m
}

/// Coefficients of `v` in a Hermite basis, if `v` lies in the lattice.
pub fn coordinates(basis: &[IntVec], v: &[i64]) -> Option<Vec<i64>> {
    let mut rest = v.to_vec();
    let mut coeffs = vec![0; basis.len()];
    for (k, row) in basis.iter().enumerate() {
        let pivot = row.iter().position(|&x| x != 0)?;
        if rest[pivot] % row[pivot] != 0 {
            return None;
        }
        let q = rest[pivot] / row[pivot];
        coeffs[k] = q;
        for (r, b) in rest.iter_mut().zip(row) {
            *r -= q * b;
        }
    }
    rest.iter().all(|&x| x == 0).then_some(coeffs)
}

pub fn contains(basis: &[IntVec], v: &[i64]) -> bool {
    coordinates(basis, v).is_some()
}

/// Smith form data of a lattice `K` spanned by the rows of a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero elementary divisors `d_1 | d_2 | ...`.
    pub divisors: Vec<i64>,
    /// Basis `v_j` of the saturation `(K ⊗ Q) ∩ Z^s` with `d_j v_j` a basis of `K`.
    pub saturated_basis: Vec<IntVec>,
}

impl SmithForm {
    /// The index `[K_sat : K]`.
    pub fn index(&self) -> i64 {
        self.divisors.iter().product()
    }
}

pub fn smith(rows: &[IntVec], ncols: usize) -> SmithForm {
    let mut a: Vec<IntVec> = hermite(rows, ncols);
    let r = a.len();
    // column operations on `a` are mirrored as row operations on `vinv`
    let mut vinv: Vec<IntVec> = (0..ncols)
        .map(|i| (0..ncols).map(|j| i64::from(i == j)).collect())
        .collect();

    for t in 0..r {
        loop {
            // smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..ncols {
                    if a[i][j] != 0 && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            swap_cols(&mut a, t, bj);
            vinv.swap(t, bj);
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..r {
                let q = Integer::div_floor(&a[i][t], &p);
                if q != 0 {
                    for j in 0..ncols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..ncols {
                let q = Integer::div_floor(&a[t][j], &p);
                if q != 0 {
                    // col_j -= q col_t  <=>  row_t(vinv) += q row_j(vinv)
                    for i in 0..r {
                        a[i][j] -= q * a[i][t];
                    }
                    for c in 0..ncols {
                        vinv[t][c] += q * vinv[j][c];
                    }
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the rest of the block
            let mut fixed = true;
            'outer: for i in t + 1..r {
                for j in t + 1..ncols {
                    if a[i][j] % p != 0 {
                        for c in 0..ncols {
                            a[t][c] += a[i][c];
                        }
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if a[t][t] < 0 {
            for j in 0..ncols {
                a[t][j] = -a[t][j];
            }
        }
    }
    let divisors: Vec<i64> = (0..r).map(|t| a[t][t]).filter(|&d| d != 0).collect();
    SmithForm {
        saturated_basis: vinv.into_iter().take(divisors.len()).collect(),
        divisors,
    }
}

fn swap_cols(a: &mut [IntVec], i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}
