//! Linear algebra over the field with two elements. Vectors are bit masks
//! (bit `i` is coordinate `i`), so dimensions are limited to 64.

/// A linear map `F₂^cols → F₂^rows`, stored column by column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Z2Matrix {
    rows: usize,
    cols: Vec<u64>,
}

impl Z2Matrix {
    pub fn from_columns(rows: usize, cols: Vec<u64>) -> Self {
        debug_assert!(cols.iter().all(|c| rows >= 64 || c >> rows == 0));
        Z2Matrix { rows, cols }
    }

    pub fn identity(n: usize) -> Self {
        Z2Matrix::from_columns(n, (0..n).map(|i| 1u64 << i).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> u64 {
        self.cols[j]
    }

    pub fn apply(&self, v: u64) -> u64 {
        self.cols
            .iter()
            .enumerate()
            .filter(|(j, _)| v >> j & 1 == 1)
            .fold(0, |acc, (_, c)| acc ^ c)
    }

    /// `self ∘ other`.
    pub fn mul(&self, other: &Z2Matrix) -> Z2Matrix {
        assert_eq!(self.cols(), other.rows, "dimension mismatch");
        Z2Matrix::from_columns(self.rows, other.cols.iter().map(|&c| self.apply(c)).collect())
    }

    pub fn rank(&self) -> usize {
        let mut basis: Vec<u64> = Vec::new();
        for &c in &self.cols {
            let mut v = c;
            for &b in &basis {
                v = v.min(v ^ b);
            }
            if v != 0 {
                basis.push(v);
                basis.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        basis.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols() && self.rank() == self.rows
    }

    /// Composes the functional `f` (a row vector, as a mask over the rows)
    /// with this matrix: returns `f ∘ self` as a mask over the columns.
    pub fn pull_back(&self, f: u64) -> u64 {
        self.cols
            .iter()
            .enumerate()
            .filter(|(_, &c)| (c & f).count_ones() % 2 == 1)
            .fold(0, |acc, (j, _)| acc | 1 << j)
    }
}

/// Evaluates the functional `f` on the vector `v`.
pub fn pair(f: u64, v: u64) -> bool {
    (f & v).count_ones() % 2 == 1
}
