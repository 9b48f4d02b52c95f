//! Small dense linear algebra over the two-element field.
//!
//! Vectors are bit masks (`u128`, so up to 128 coordinates); linear
//! combinations over a list of columns are reported as `u64` masks, so at
//! most 64 columns can be combined. These widths match the caps of the
//! space layer (at most 128 points, group rank at most 64).

/// Rank of a set of bit vectors.
pub fn rank(vecs: impl IntoIterator<Item = u128>) -> usize {
    let mut basis: Vec<u128> = Vec::new();
    for mut v in vecs {
        for b in &basis {
            let high = 127 - b.leading_zeros() as usize;
            if v >> high & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
            basis.sort_by_key(|b| std::cmp::Reverse(*b));
        }
    }
    basis.len()
}

/// Incremental Gaussian eliminator that tracks, for every reduced row, which
/// input columns were combined to produce it.
#[derive(Debug, Clone, Default)]
pub struct Eliminator {
    /// (reduced vector, combination mask over inserted columns)
    rows: Vec<(u128, u64)>,
    n_cols: usize,
}

impl Eliminator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build an eliminator from a list of columns.
    pub fn from_columns(columns: &[u128]) -> Self {
        assert!(columns.len() <= 64, "at most 64 columns supported");
        let mut e = Self::new();
        for &c in columns {
            e.insert(c);
        }
        e
    }

    /// Reduce `v` against the current rows; returns the residue and the
    /// combination accumulated while reducing.
    fn reduce(&self, mut v: u128) -> (u128, u64) {
        let mut combo = 0u64;
        for &(row, c) in &self.rows {
            let high = 127 - row.leading_zeros() as usize;
            if v >> high & 1 == 1 {
                v ^= row;
                combo ^= c;
            }
        }
        (v, combo)
    }

    /// Insert a column. Returns `true` if it enlarged the span (was
    /// independent of the columns inserted before it).
    pub fn insert(&mut self, v: u128) -> bool {
        let idx = self.n_cols;
        assert!(idx < 64, "at most 64 columns supported");
        self.n_cols += 1;
        let (res, combo) = self.reduce(v);
        if res == 0 {
            return false;
        }
        self.rows.push((res, combo | 1 << idx));
        self.rows.sort_by_key(|(r, _)| std::cmp::Reverse(*r));
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Express `target` as a combination of the inserted columns.
    /// Returns the combination mask, or `None` if `target` is outside the span.
    pub fn solve(&self, target: u128) -> Option<u64> {
        let (res, combo) = self.reduce(target);
        if res == 0 {
            Some(combo)
        } else {
            None
        }
    }

    /// A nonzero combination of the inserted columns equal to zero, if one
    /// exists (i.e. the columns are dependent).
    pub fn dependency(columns: &[u128]) -> Option<u64> {
        let mut e = Self::new();
        for &c in columns {
            let idx = e.n_cols;
            e.n_cols += 1;
            let (res, combo) = e.reduce(c);
            if res == 0 {
                return Some(combo | 1 << idx);
            }
            e.rows.push((res, combo | 1 << idx));
            e.rows.sort_by_key(|(r, _)| std::cmp::Reverse(*r));
        }
        None
    }
}

/// Indices of a greedy independent subset of `columns` (left to right).
pub fn pivot_columns(columns: &[u128]) -> Vec<usize> {
    let mut e = Eliminator::new();
    let mut pivots = Vec::new();
    for (i, &c) in columns.iter().enumerate() {
        if e.insert(c) {
            pivots.push(i);
        }
    }
    pivots
}
