//! Dense matrices over `F_p` and row reduction.

use crate::formula::Fp;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    cols: usize,
    rows: Vec<Vec<u64>>,
}

impl Matrix {
    pub fn new(cols: usize, rows: Vec<Vec<u64>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Self { cols, rows }
    }

    pub fn zeros(nrows: usize, cols: usize) -> Self {
        Self::new(cols, vec![vec![0; cols]; nrows])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = 1;
        }
        m
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<u64>> {
        self.rows
    }
}

/// Reduced row echelon form with its rank profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    /// Nonzero rows only.
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination: leftmost pivots, each scaled to 1 and cleared
/// above and below. Zero rows are dropped.
pub fn rref(m: &Matrix, field: Fp) -> Rref {
    let mut rows: Vec<Vec<u64>> = m.rows.iter().map(|r| r.iter().map(|&x| x % field.p()).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        let Some(found) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, found);
        let inv = field.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let factor = rows[i][c];
                for j in 0..m.cols {
                    let sub = field.mul(factor, rows[r][j]);
                    rows[i][j] = field.sub(rows[i][j], sub);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    Rref {
        matrix: Matrix::new(m.cols, rows),
        rank: r,
        pivots,
    }
}

/// Row-echelon basis that grows one vector at a time. Rows are kept sorted
/// by pivot, so a single forward pass reduces a new vector.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: Fp,
    rows: Vec<(usize, Vec<u64>)>,
}

impl EchelonBasis {
    pub fn new(field: Fp) -> Self {
        Self {
            field,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let f = self.field;
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        v
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &Vec<u64>> {
        self.rows.iter().map(|(_, r)| r)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns the pivot column of the new row, or `None` if `v`
    /// was already in the span.
    pub fn insert(&mut self, v: &[u64]) -> Option<usize> {
        let f = self.field;
        let mut r = self.reduce(v);
        let pivot = r.iter().position(|&x| x != 0)?;
        let inv = f.inv(r[pivot]);
        for x in r.iter_mut() {
            *x = f.mul(*x, inv);
        }
        let at = self.rows.partition_point(|(p, _)| *p < pivot);
        self.rows.insert(at, (pivot, r));
        Some(pivot)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }

    #[test]
    fn examples() {
        let r = rref(&Matrix::new(2, vec![vec![1, 1], vec![1, 1]]), fp(2));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);

        let id = Matrix::identity(2);
        let r = rref(&id, fp(3));
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 2);

        let r = rref(&Matrix::zeros(2, 3), fp(2));
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
        assert_eq!(r.matrix.nrows(), 0);
    }

    #[test]
    fn echelon_basis_tracks_span() {
        let mut b = EchelonBasis::new(fp(3));
        assert_eq!(b.insert(&[0, 1, 2]), Some(1));
        assert_eq!(b.insert(&[1, 1, 0]), Some(0));
        assert_eq!(b.insert(&[2, 0, 2]), None);
        assert!(b.contains(&[1, 2, 2]));
        assert!(!b.contains(&[0, 0, 1]));
        assert_eq!(b.rank(), 2);
    }

    fn matrix_strategy() -> impl Strategy<Value = (u64, Matrix)> {
        (prop_oneof![Just(2u64), Just(3), Just(5)], 1usize..5, 1usize..5).prop_flat_map(
            |(p, r, c)| {
                proptest::collection::vec(proptest::collection::vec(0..p, c), r)
                    .prop_map(move |rows| (p, Matrix::new(c, rows)))
            },
        )
    }

    proptest! {
        #[test]
        fn rref_is_idempotent((p, m) in matrix_strategy()) {
            let once = rref(&m, fp(p));
            let twice = rref(&once.matrix, fp(p));
            prop_assert_eq!(&once, &twice);
        }

        #[test]
        fn rank_ignores_row_order((p, m) in matrix_strategy()) {
            let mut rows = m.rows().to_vec();
            rows.reverse();
            let rev = Matrix::new(m.cols(), rows);
            let a = rref(&m, fp(p));
            let b = rref(&rev, fp(p));
            prop_assert_eq!(a.rank, b.rank);
            prop_assert_eq!(a.matrix, b.matrix);
        }

        #[test]
        fn echelon_rank_matches_rref((p, m) in matrix_strategy()) {
            let mut basis = EchelonBasis::new(fp(p));
            for row in m.rows() {
                basis.insert(row);
            }
            prop_assert_eq!(basis.rank(), rref(&m, fp(p)).rank);
        }
    }
}
