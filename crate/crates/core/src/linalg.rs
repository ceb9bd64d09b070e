//! Exact row reduction over the rationals.
//!
//! [`Echelon`] keeps an incrementally built row-echelon basis of a subspace of
//! `Q^ncols`. Column order is significant: a lower index is a "heavier"
//! coordinate, picked first as a pivot. The non-pivot columns then index a
//! basis of the quotient `Q^ncols / span`.

use num_traits::{One, Zero};

use crate::rat::Rat;

/// Sparse vector with entries sorted by strictly increasing column.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: Vec<(usize, Rat)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec::default()
    }

    /// Builds from unsorted `(column, value)` pairs, summing duplicates.
    pub fn from_pairs(mut pairs: Vec<(usize, Rat)>) -> Self {
        pairs.sort_by_key(|(c, _)| *c);
        let mut entries: Vec<(usize, Rat)> = Vec::with_capacity(pairs.len());
        for (c, v) in pairs {
            match entries.last_mut() {
                Some((lc, lv)) if *lc == c => *lv += &v,
                _ => entries.push((c, v)),
            }
        }
        entries.retain(|(_, v)| !v.is_zero());
        SparseVec { entries }
    }

    pub fn unit(col: usize) -> Self {
        SparseVec { entries: vec![(col, Rat::one())] }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn lead(&self) -> Option<usize> {
        self.entries.first().map(|(c, _)| *c)
    }

    pub fn entries(&self) -> &[(usize, Rat)] {
        &self.entries
    }

    pub fn get(&self, col: usize) -> Rat {
        match self.entries.binary_search_by_key(&col, |(c, _)| *c) {
            Ok(i) => self.entries[i].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    fn scale(&mut self, s: &Rat) {
        for (_, v) in &mut self.entries {
            *v = &*v * s;
        }
    }

    /// `self - factor * other`, dropping cancellations.
    fn sub_scaled(&self, factor: &Rat, other: &SparseVec) -> SparseVec {
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                out.push(a[i].clone());
                i += 1;
            } else if take_b {
                out.push((b[j].0, -(factor * &b[j].1)));
                j += 1;
            } else {
                let v = &a[i].1 - &(factor * &b[j].1);
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }
}

/// Incremental row-echelon basis. Pivot rows are normalized to a leading 1.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    pivots: Vec<Option<SparseVec>>,
    rank: usize,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, pivots: vec![None; ncols], rank: 0 }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots[col].is_some()
    }

    /// Eliminates leading entries until the lead is a non-pivot column.
    /// The result is zero iff `v` lies in the span.
    pub fn reduce_head(&self, mut v: SparseVec) -> SparseVec {
        while let Some((c, coef)) = v.entries.first().cloned() {
            match &self.pivots[c] {
                Some(row) => v = v.sub_scaled(&coef, row),
                None => break,
            }
        }
        v
    }

    /// Eliminates every pivot column from `v`. Two vectors are congruent
    /// modulo the span iff their full reductions coincide.
    pub fn reduce_full(&self, mut v: SparseVec) -> SparseVec {
        let mut pos = 0;
        while pos < v.entries.len() {
            let (c, coef) = v.entries[pos].clone();
            match &self.pivots[c] {
                Some(row) => v = v.sub_scaled(&coef, row),
                None => pos += 1,
            }
        }
        v
    }

    /// Adds `v` to the span. Returns `true` if the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut v = self.reduce_head(v);
        let Some((c, lead)) = v.entries.first().cloned() else {
            return false;
        };
        if !lead.is_one() {
            v.scale(&lead.recip());
        }
        self.pivots[c] = Some(v);
        self.rank += 1;
        true
    }

    /// Inserts rows sparsest-first, which keeps fill-in low.
    pub fn insert_all(&mut self, mut rows: Vec<SparseVec>) {
        rows.retain(|r| !r.is_zero());
        rows.sort_by_key(|r| (r.nnz(), r.lead()));
        for r in rows {
            self.insert(r);
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce_head(v.clone()).is_zero()
    }

    pub fn non_pivot_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivots[c].is_none()).collect()
    }
}

/// Reduced row echelon form of a dense matrix. Returns the pivot columns.
pub fn rref(m: &mut [Vec<Rat>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= &d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Rat>]) -> usize {
    let mut m = m.to_vec();
    rref(&mut m).len()
}

/// Basis of the right null space `{v : m v = 0}`.
pub fn nullspace(m: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&a[row][f];
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn sv(pairs: &[(usize, i64)]) -> SparseVec {
        SparseVec::from_pairs(pairs.iter().map(|&(c, v)| (c, r(v))).collect())
    }

    #[test]
    fn echelon_rank_and_membership() {
        let mut e = Echelon::new(4);
        assert!(e.insert(sv(&[(0, 1), (1, 2)])));
        assert!(e.insert(sv(&[(0, 2), (1, 4), (3, 1)])));
        assert!(!e.insert(sv(&[(0, 3), (1, 6), (3, 1)])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&sv(&[(3, 5)])));
        assert!(!e.contains(&sv(&[(2, 1)])));
        assert_eq!(e.non_pivot_columns(), vec![1, 2]);
        let red = e.reduce_full(sv(&[(0, 1), (1, 1), (3, 7)]));
        assert_eq!(red, sv(&[(1, -1)]));
    }

    #[test]
    fn dense_rank_and_nullspace() {
        let m = vec![vec![r(1), r(2), r(3)], vec![r(2), r(4), r(6)]];
        assert_eq!(rank(&m), 1);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot: Rat = m[0].iter().zip(&v).fold(Rat::zero(), |acc, (a, b)| &acc + &(a * b));
            assert!(dot.is_zero());
        }
    }
}
