//! Truncated operators: dense complex matrices tagged with their basis
//! labeling (oscillator number n or angular momentum l) and an edge margin
//! for interior-only identity checks.

use ndarray::Array2;

use crate::fock::{n_of_l, FockTruncation};
use crate::linalg::CMatrix;
use crate::scalar::{Scalar, C};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisIndexing {
    /// Rows/columns ordered by oscillator number n = 0..n_max.
    FockIndexed,
    /// Rows/columns ordered by angular momentum l = -n_max/2..n_max/2.
    LIndexed,
}

#[derive(Debug, Clone)]
pub struct TruncatedOperator<T: Scalar> {
    pub trunc: FockTruncation,
    pub basis: BasisIndexing,
    pub matrix: CMatrix<T>,
    /// Rows/columns within this margin of the Fock cutoff are excluded from
    /// exact-identity checks; cutoff artifacts are confined there.
    pub edge_margin: usize,
}

impl<T: Scalar> TruncatedOperator<T> {
    pub fn new(trunc: FockTruncation, basis: BasisIndexing, matrix: CMatrix<T>) -> Self {
        assert_eq!(matrix.nrows(), trunc.dim());
        assert_eq!(matrix.ncols(), trunc.dim());
        Self {
            trunc,
            basis,
            matrix,
            edge_margin: FockTruncation::DEFAULT_EDGE_MARGIN,
        }
    }

    pub fn dim(&self) -> usize {
        self.trunc.dim()
    }

    /// Fock quantum number carried by storage index `idx` in this labeling.
    pub fn fock_n_of_index(&self, idx: usize) -> usize {
        match self.basis {
            BasisIndexing::FockIndexed => idx,
            BasisIndexing::LIndexed => {
                n_of_l(idx as i64 - self.trunc.l_span() as i64) as usize
            }
        }
    }

    /// Whether index `idx` lies in the interior, n < n_max - margin.
    pub fn is_interior(&self, idx: usize, margin: usize) -> bool {
        self.fock_n_of_index(idx) + margin < self.trunc.n_max
    }

    /// Same operator in the other labeling (an exact permutation).
    pub fn relabeled(&self, target: BasisIndexing) -> Self {
        if self.basis == target {
            return self.clone();
        }
        let dim = self.dim();
        let span = self.trunc.l_span() as i64;
        // position in `target` indexing of each storage index of `self`
        let map: Vec<usize> = (0..dim)
            .map(|idx| match self.basis {
                BasisIndexing::FockIndexed => {
                    // target is LIndexed
                    (crate::fock::l_of_n(idx as i64) + span) as usize
                }
                BasisIndexing::LIndexed => n_of_l(idx as i64 - span) as usize,
            })
            .collect();
        let mut out = crate::linalg::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                out[[map[i], map[j]]] = self.matrix[[i, j]];
            }
        }
        Self {
            trunc: self.trunc,
            basis: target,
            matrix: out,
            edge_margin: self.edge_margin,
        }
    }

    /// Max |self - other| over interior rows and columns; `other` is
    /// relabeled first if the bases differ.
    pub fn interior_max_dev(&self, other: &Self, margin: usize) -> T {
        let other = other.relabeled(self.basis);
        self.masked_dev(&other.matrix, margin, true)
    }

    /// Max |self - other| over entries with at least one edge index.
    pub fn edge_max_dev(&self, other: &Self, margin: usize) -> T {
        let other = other.relabeled(self.basis);
        self.masked_dev(&other.matrix, margin, false)
    }

    fn masked_dev(&self, other: &CMatrix<T>, margin: usize, interior: bool) -> T {
        let dim = self.dim();
        let mut dev = T::zero();
        for i in 0..dim {
            for j in 0..dim {
                let inside = self.is_interior(i, margin) && self.is_interior(j, margin);
                if inside == interior {
                    dev = dev.max((self.matrix[[i, j]] - other[[i, j]]).norm());
                }
            }
        }
        dev
    }

    /// Max interior deviation from the identity matrix.
    pub fn interior_dev_from_identity(&self, margin: usize) -> T {
        let dim = self.dim();
        let mut dev = T::zero();
        for i in 0..dim {
            for j in 0..dim {
                if self.is_interior(i, margin) && self.is_interior(j, margin) {
                    let want = if i == j { T::one() } else { T::zero() };
                    dev = dev.max((self.matrix[[i, j]] - C::new(want, T::zero())).norm());
                }
            }
        }
        dev
    }

    pub fn apply(&self, v: &[C<T>]) -> Vec<C<T>> {
        crate::linalg::matvec(&self.matrix, v)
    }

    /// CSV-style triples (label_row, label_col, value) of non-negligible
    /// entries, labeled by n or l according to the indexing.
    pub fn labeled_entries(&self, threshold: T) -> Vec<(i64, i64, C<T>)> {
        let dim = self.dim();
        let span = self.trunc.l_span() as i64;
        let label = |idx: usize| match self.basis {
            BasisIndexing::FockIndexed => idx as i64,
            BasisIndexing::LIndexed => idx as i64 - span,
        };
        let mut out = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                if self.matrix[[i, j]].norm() > threshold {
                    out.push((label(i), label(j), self.matrix[[i, j]]));
                }
            }
        }
        out
    }
}

/// Dense matrix builder from an entry function over labeled indices.
pub fn matrix_from_labels<T: Scalar>(
    dim: usize,
    f: impl Fn(usize, usize) -> C<T>,
) -> CMatrix<T> {
    Array2::from_shape_fn((dim, dim), |(i, j)| f(i, j))
}
