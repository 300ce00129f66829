//! Bounded double complexes of finite-dimensional Q(i)-vector spaces.
//!
//! A [`Bicomplex`] stores, for every bidegree `(p, q)` in the rectangle
//! `[0, pmax] x [0, qmax]`, the dimension of the space there and the two
//! differentials leaving it: `del` of bidegree `(1, 0)` and `delbar` of
//! bidegree `(0, 1)`. The stored maps must satisfy
//!
//! ```text
//! del ∘ del = 0,    delbar ∘ delbar = 0,    del ∘ delbar + delbar ∘ del = 0
//! ```
//!
//! (anticommutation, so that `d = del + delbar` squares to zero on the total
//! complex). Maps leaving the rectangle are implicitly zero; [`validate`]
//! checks that boundary maps which would have to be zero actually are.
//!
//! [`validate`]: Bicomplex::validate

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{scalar, QMatrix, Scalar};
use crate::zigzag::{FirstStep, ZigzagShape};

/// Errors raised while assembling a double complex from raw parts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BicomplexError {
    /// A differential matrix has the wrong shape for its source/target
    /// dimensions.
    #[error(
        "map {map} at ({p},{q}) has shape {got_rows}x{got_cols}, expected {want_rows}x{want_cols}"
    )]
    ShapeMismatch {
        map: &'static str,
        p: usize,
        q: usize,
        got_rows: usize,
        got_cols: usize,
        want_rows: usize,
        want_cols: usize,
    },
    /// Conjugation data fails one of its defining identities.
    #[error("conjugation data invalid at ({p},{q}): {reason}")]
    BadConjugation {
        p: usize,
        q: usize,
        reason: &'static str,
    },
}

/// One way in which a would-be double complex fails the axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `del ∘ del != 0` starting at this bidegree.
    DelSquared { p: usize, q: usize },
    /// `delbar ∘ delbar != 0` starting at this bidegree.
    DelbarSquared { p: usize, q: usize },
    /// `del∘delbar + delbar∘del != 0` starting at this bidegree.
    Anticommutation { p: usize, q: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::DelSquared { p, q } => {
                write!(f, "del∘del != 0 starting at ({p},{q})")
            }
            Violation::DelbarSquared { p, q } => {
                write!(f, "delbar∘delbar != 0 starting at ({p},{q})")
            }
            Violation::Anticommutation { p, q } => {
                write!(f, "del∘delbar + delbar∘del != 0 starting at ({p},{q})")
            }
        }
    }
}

/// A bounded double complex on the rectangle `[0, pmax] x [0, qmax]`.
///
/// All data is indexed by bidegree `(p, q)`. The two differentials are
/// `del : (p,q) -> (p+1,q)` and `delbar : (p,q) -> (p,q+1)`; matrices whose
/// source or target lies outside the rectangle are 0-dimensional on that
/// side.
#[derive(Debug, Clone)]
pub struct Bicomplex {
    pmax: usize,
    qmax: usize,
    /// dims[p][q]
    dims: Vec<Vec<usize>>,
    /// del[p][q] : dims[p][q] -> dims[p+1][q]; at p = pmax the target is 0.
    del: Vec<Vec<QMatrix>>,
    /// delbar[p][q] : dims[p][q] -> dims[p][q+1]; at q = qmax the target is 0.
    delbar: Vec<Vec<QMatrix>>,
    /// Optional real-structure data: `conj[p][q]` is the matrix of an
    /// antilinear map `sigma : (p,q) -> (q,p)` under the convention
    /// `sigma(v) = conj[p][q] · v̄` (entrywise conjugation of coordinates).
    /// Validated at construction by [`Bicomplex::with_conjugation`]: the
    /// rectangle is square, `sigma` is an involution, and it intertwines
    /// `del` with `delbar`.
    conj: Option<Vec<Vec<QMatrix>>>,
}

/// The total complex of a [`Bicomplex`]: one space per total degree `k`,
/// the direct sum of the antidiagonal `p + q = k` (blocks in increasing `p`),
/// with differential `d = del + delbar`.
#[derive(Debug, Clone)]
pub struct TotalComplex {
    /// Dimension of the degree-k space, k = 0 ..= pmax+qmax.
    pub dims: Vec<usize>,
    /// d[k] : dims[k] -> dims[k+1]; the last entry maps to the zero space.
    pub d: Vec<QMatrix>,
    /// Block offsets: `offsets[k]` maps each `p` with blocks on antidiagonal
    /// k to the starting coordinate of block `(p, k-p)` inside degree k.
    pub offsets: Vec<BTreeMap<usize, usize>>,
}

impl Bicomplex {
    /// Assemble a double complex from explicit data, checking only shapes
    /// (use [`validate`](Self::validate) for the differential axioms).
    ///
    /// `del[p][q]` and `delbar[p][q]` must be `dims[p+1][q] x dims[p][q]` and
    /// `dims[p][q+1] x dims[p][q]` matrices; rows whose target lies outside
    /// the rectangle must be 0-row matrices.
    pub fn from_parts(
        dims: Vec<Vec<usize>>,
        del: Vec<Vec<QMatrix>>,
        delbar: Vec<Vec<QMatrix>>,
    ) -> Result<Self, BicomplexError> {
        let pmax = dims.len().saturating_sub(1);
        assert!(!dims.is_empty(), "dims must cover at least (0,0)");
        let qmax = dims[0].len().saturating_sub(1);
        assert!(
            dims.iter().all(|col| col.len() == qmax + 1),
            "ragged dims grid"
        );
        assert_eq!(del.len(), pmax + 1, "del grid has wrong width");
        assert_eq!(delbar.len(), pmax + 1, "delbar grid has wrong width");
        for p in 0..=pmax {
            assert_eq!(del[p].len(), qmax + 1, "del grid has wrong height");
            assert_eq!(delbar[p].len(), qmax + 1, "delbar grid has wrong height");
            for q in 0..=qmax {
                let src = dims[p][q];
                let del_tgt = if p < pmax { dims[p + 1][q] } else { 0 };
                let delbar_tgt = if q < qmax { dims[p][q + 1] } else { 0 };
                let m = &del[p][q];
                if (m.rows(), m.cols()) != (del_tgt, src) {
                    return Err(BicomplexError::ShapeMismatch {
                        map: "del",
                        p,
                        q,
                        got_rows: m.rows(),
                        got_cols: m.cols(),
                        want_rows: del_tgt,
                        want_cols: src,
                    });
                }
                let m = &delbar[p][q];
                if (m.rows(), m.cols()) != (delbar_tgt, src) {
                    return Err(BicomplexError::ShapeMismatch {
                        map: "delbar",
                        p,
                        q,
                        got_rows: m.rows(),
                        got_cols: m.cols(),
                        want_rows: delbar_tgt,
                        want_cols: src,
                    });
                }
            }
        }
        Ok(Bicomplex {
            pmax,
            qmax,
            dims,
            del,
            delbar,
            conj: None,
        })
    }

    /// The zero complex on a given rectangle.
    pub fn zero(pmax: usize, qmax: usize) -> Self {
        let dims = vec![vec![0usize; qmax + 1]; pmax + 1];
        let z = vec![vec![QMatrix::zeros(0, 0); qmax + 1]; pmax + 1];
        Bicomplex {
            pmax,
            qmax,
            dims,
            del: z.clone(),
            delbar: z,
            conj: None,
        }
    }

    pub fn pmax(&self) -> usize {
        self.pmax
    }

    pub fn qmax(&self) -> usize {
        self.qmax
    }

    /// Dimension of the space at `(p, q)`; 0 outside the rectangle.
    pub fn dim(&self, p: usize, q: usize) -> usize {
        if p <= self.pmax && q <= self.qmax {
            self.dims[p][q]
        } else {
            0
        }
    }

    /// Total dimension over all bidegrees.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().flatten().sum()
    }

    /// The map `del : (p,q) -> (p+1,q)`; a 0-row matrix when the target is
    /// outside the rectangle.
    pub fn del(&self, p: usize, q: usize) -> &QMatrix {
        &self.del[p][q]
    }

    /// The map `delbar : (p,q) -> (p,q+1)`; a 0-row matrix when the target
    /// is outside the rectangle.
    pub fn delbar(&self, p: usize, q: usize) -> &QMatrix {
        &self.delbar[p][q]
    }

    /// The composite `del∘delbar : (p,q) -> (p+1,q+1)` (a 0-row matrix when
    /// the target leaves the rectangle).
    pub fn del_delbar(&self, p: usize, q: usize) -> QMatrix {
        if p < self.pmax && q < self.qmax {
            self.del[p][q + 1].mul(&self.delbar[p][q])
        } else {
            QMatrix::zeros(0, self.dim(p, q))
        }
    }

    /// Iterate over all bidegrees in (antidiagonal, p)-ascending order.
    pub fn bidegrees(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let pmax = self.pmax;
        let qmax = self.qmax;
        (0..=pmax + qmax).flat_map(move |k| {
            (0..=k.min(pmax))
                .filter(move |&p| k - p <= qmax)
                .map(move |p| (p, k - p))
        })
    }

    /// Check the double-complex axioms, returning every violation.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for p in 0..=self.pmax {
            for q in 0..=self.qmax {
                // del∘del : (p,q) -> (p+2,q)
                if p + 2 <= self.pmax && !self.del[p + 1][q].mul(&self.del[p][q]).is_zero() {
                    out.push(Violation::DelSquared { p, q });
                }
                // delbar∘delbar : (p,q) -> (p,q+2)
                if q + 2 <= self.qmax && !self.delbar[p][q + 1].mul(&self.delbar[p][q]).is_zero() {
                    out.push(Violation::DelbarSquared { p, q });
                }
                // anticommutation : (p,q) -> (p+1,q+1)
                if p + 1 <= self.pmax && q + 1 <= self.qmax {
                    let a = self.del[p][q + 1].mul(&self.delbar[p][q]);
                    let b = self.delbar[p + 1][q].mul(&self.del[p][q]);
                    if !a.add(&b).is_zero() {
                        out.push(Violation::Anticommutation { p, q });
                    }
                }
            }
        }
        out
    }

    /// Antidiagonal block layout: for each total degree k, the dimension of
    /// A^k and the starting offset of each block (p, k-p), blocks ordered by
    /// increasing p.
    pub(crate) fn total_layout(&self) -> (Vec<usize>, Vec<BTreeMap<usize, usize>>) {
        let kmax = self.pmax + self.qmax;
        let mut dims = Vec::with_capacity(kmax + 1);
        let mut offsets: Vec<BTreeMap<usize, usize>> = Vec::with_capacity(kmax + 1);
        for k in 0..=kmax {
            let mut map = BTreeMap::new();
            let mut off = 0usize;
            for p in 0..=k.min(self.pmax) {
                let q = k - p;
                if q > self.qmax {
                    continue;
                }
                map.insert(p, off);
                off += self.dims[p][q];
            }
            dims.push(off);
            offsets.push(map);
        }
        (dims, offsets)
    }

    /// Degree-k block matrices A^k -> A^{k+1} assembled from `del` blocks
    /// (when `with_del`) and `delbar` blocks (when `with_delbar`). The last
    /// entry maps to the zero space.
    pub(crate) fn total_partial(&self, with_del: bool, with_delbar: bool) -> Vec<QMatrix> {
        let (dims, offsets) = self.total_layout();
        let kmax = self.pmax + self.qmax;
        let mut d = Vec::with_capacity(kmax + 1);
        for k in 0..=kmax {
            let tgt = if k < kmax { dims[k + 1] } else { 0 };
            let mut m = QMatrix::zeros(tgt, dims[k]);
            if k < kmax {
                for (&p, &src_off) in &offsets[k] {
                    let q = k - p;
                    let mut place = |blk: &QMatrix, tgt_p: usize| {
                        if let Some(&tgt_off) = offsets[k + 1].get(&tgt_p) {
                            for i in 0..blk.rows() {
                                for j in 0..blk.cols() {
                                    if !blk.get(i, j).is_zero() {
                                        m.set(tgt_off + i, src_off + j, blk.get(i, j).clone());
                                    }
                                }
                            }
                        }
                    };
                    if with_del {
                        place(&self.del[p][q], p + 1);
                    }
                    if with_delbar && q < self.qmax {
                        place(&self.delbar[p][q], p);
                    }
                }
            }
            d.push(m);
        }
        d
    }

    /// The total complex, with antidiagonal blocks ordered by increasing `p`.
    pub fn total(&self) -> TotalComplex {
        let (dims, offsets) = self.total_layout();
        let d = self.total_partial(true, true);
        TotalComplex { dims, d, offsets }
    }

    /// Direct sum of two complexes on (possibly different) rectangles; the
    /// result lives on the union rectangle.
    pub fn direct_sum(&self, other: &Bicomplex) -> Bicomplex {
        let pmax = self.pmax.max(other.pmax);
        let qmax = self.qmax.max(other.qmax);
        let dims: Vec<Vec<usize>> = (0..=pmax)
            .map(|p| {
                (0..=qmax)
                    .map(|q| self.dim(p, q) + other.dim(p, q))
                    .collect()
            })
            .collect();
        let block = |a: &QMatrix, b: &QMatrix| -> QMatrix {
            let mut m = QMatrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    m.set(i, j, a.get(i, j).clone());
                }
            }
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    m.set(a.rows() + i, a.cols() + j, b.get(i, j).clone());
                }
            }
            m
        };
        let get_del = |c: &Bicomplex, p: usize, q: usize, pm: usize, qm: usize| -> QMatrix {
            if p <= c.pmax && q <= c.qmax {
                // The stored target may become nonzero-dimensional only if
                // inside c's own rectangle; re-shape boundary zero maps to
                // the union rectangle's expectations.
                let tgt = if p < pm && p + 1 <= c.pmax && q <= c.qmax {
                    c.dim(p + 1, q)
                } else {
                    0
                };
                if p < c.pmax {
                    c.del[p][q].clone()
                } else {
                    QMatrix::zeros(tgt, c.dim(p, q))
                }
            } else {
                let _ = (pm, qm);
                QMatrix::zeros(0, 0)
            }
        };
        let get_delbar = |c: &Bicomplex, p: usize, q: usize| -> QMatrix {
            if p <= c.pmax && q <= c.qmax {
                if q < c.qmax {
                    c.delbar[p][q].clone()
                } else {
                    QMatrix::zeros(0, c.dim(p, q))
                }
            } else {
                QMatrix::zeros(0, 0)
            }
        };
        let mut del = vec![vec![QMatrix::zeros(0, 0); qmax + 1]; pmax + 1];
        let mut delbar = vec![vec![QMatrix::zeros(0, 0); qmax + 1]; pmax + 1];
        for p in 0..=pmax {
            for q in 0..=qmax {
                let (a_src, b_src) = (self.dim(p, q), other.dim(p, q));
                let del_tgt = if p < pmax { dims[p + 1][q] } else { 0 };
                let delbar_tgt = if q < qmax { dims[p][q + 1] } else { 0 };
                let a = {
                    let m = get_del(self, p, q, pmax, qmax);
                    let want_rows = if p < pmax { self.dim(p + 1, q) } else { 0 };
                    reshape_zero_padded(&m, want_rows, a_src)
                };
                let b = {
                    let m = get_del(other, p, q, pmax, qmax);
                    let want_rows = if p < pmax { other.dim(p + 1, q) } else { 0 };
                    reshape_zero_padded(&m, want_rows, b_src)
                };
                let mm = block(&a, &b);
                debug_assert_eq!((mm.rows(), mm.cols()), (del_tgt, a_src + b_src));
                del[p][q] = mm;
                let a = {
                    let m = get_delbar(self, p, q);
                    let want_rows = if q < qmax { self.dim(p, q + 1) } else { 0 };
                    reshape_zero_padded(&m, want_rows, a_src)
                };
                let b = {
                    let m = get_delbar(other, p, q);
                    let want_rows = if q < qmax { other.dim(p, q + 1) } else { 0 };
                    reshape_zero_padded(&m, want_rows, b_src)
                };
                let mm = block(&a, &b);
                debug_assert_eq!((mm.rows(), mm.cols()), (delbar_tgt, a_src + b_src));
                delbar[p][q] = mm;
            }
        }
        Bicomplex {
            pmax,
            qmax,
            dims,
            del,
            delbar,
            conj: None,
        }
    }

    /// The conjugate complex: space at `(p, q)` is the space at `(q, p)`,
    /// `del` and `delbar` swap roles, and all matrix entries are conjugated.
    pub fn conjugate(&self) -> Bicomplex {
        let pmax = self.qmax;
        let qmax = self.pmax;
        let dims: Vec<Vec<usize>> = (0..=pmax)
            .map(|p| (0..=qmax).map(|q| self.dims[q][p]).collect())
            .collect();
        let mut del = vec![vec![QMatrix::zeros(0, 0); qmax + 1]; pmax + 1];
        let mut delbar = vec![vec![QMatrix::zeros(0, 0); qmax + 1]; pmax + 1];
        for p in 0..=pmax {
            for q in 0..=qmax {
                // del at (p,q) of the conjugate = conj(delbar at (q,p)).
                del[p][q] = if p < pmax {
                    self.delbar[q][p].conj_entries()
                } else {
                    QMatrix::zeros(0, dims[p][q])
                };
                delbar[p][q] = if q < qmax {
                    self.del[q][p].conj_entries()
                } else {
                    QMatrix::zeros(0, dims[p][q])
                };
            }
        }
        // An antilinear identification sigma transported to the conjugate
        // complex: the coordinates of the conjugate at (p,q) are the
        // conjugated coordinates of (q,p), so the matrix picks up an
        // entrywise conjugation on top of the grading swap.
        let conj = self.conj.as_ref().map(|c| {
            (0..=pmax)
                .map(|p| {
                    (0..=qmax)
                        .map(|q| c[q][p].conj_entries())
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
        });
        Bicomplex {
            pmax,
            qmax,
            dims,
            del,
            delbar,
            conj,
        }
    }

    /// Attach real-structure data: `conj[p][q]` is the matrix of an
    /// antilinear map `sigma : (p,q) -> (q,p)`, acting as
    /// `v ↦ conj[p][q] · v̄`.
    ///
    /// Validates that the rectangle is square, that every matrix has the
    /// right shape, that `sigma` is an involution
    /// (`conj[q][p] · conj̄[p][q] = id`), and that `sigma` intertwines the
    /// two differentials (`sigma ∘ del = delbar ∘ sigma` and vice versa).
    /// The last condition says exactly that the matrices `conj[q][p]` form a
    /// linear isomorphism from [`conjugate`](Self::conjugate)`(self)` to
    /// `self`, commuting with the differentials.
    pub fn with_conjugation(
        mut self,
        conj: Vec<Vec<QMatrix>>,
    ) -> Result<Bicomplex, BicomplexError> {
        if self.pmax != self.qmax {
            return Err(BicomplexError::BadConjugation {
                p: 0,
                q: 0,
                reason: "rectangle is not square",
            });
        }
        let n = self.pmax;
        assert_eq!(conj.len(), n + 1, "conj grid has wrong width");
        for (p, col) in conj.iter().enumerate() {
            assert_eq!(col.len(), n + 1, "conj grid has wrong height");
            for (q, m) in col.iter().enumerate() {
                if (m.rows(), m.cols()) != (self.dims[q][p], self.dims[p][q]) {
                    return Err(BicomplexError::ShapeMismatch {
                        map: "conj",
                        p,
                        q,
                        got_rows: m.rows(),
                        got_cols: m.cols(),
                        want_rows: self.dims[q][p],
                        want_cols: self.dims[p][q],
                    });
                }
            }
        }
        for p in 0..=n {
            for q in 0..=n {
                let involution = conj[q][p].mul(&conj[p][q].conj_entries());
                if involution != QMatrix::identity(self.dims[p][q]) {
                    return Err(BicomplexError::BadConjugation {
                        p,
                        q,
                        reason: "not an involution",
                    });
                }
                if p < n {
                    let lhs = conj[p + 1][q].mul(&self.del[p][q].conj_entries());
                    let rhs = self.delbar[q][p].mul(&conj[p][q]);
                    if lhs != rhs {
                        return Err(BicomplexError::BadConjugation {
                            p,
                            q,
                            reason: "does not intertwine del with delbar",
                        });
                    }
                }
                if q < n {
                    let lhs = conj[p][q + 1].mul(&self.delbar[p][q].conj_entries());
                    let rhs = self.del[q][p].mul(&conj[p][q]);
                    if lhs != rhs {
                        return Err(BicomplexError::BadConjugation {
                            p,
                            q,
                            reason: "does not intertwine delbar with del",
                        });
                    }
                }
            }
        }
        self.conj = Some(conj);
        Ok(self)
    }

    /// Whether real-structure data is attached.
    pub fn has_conjugation(&self) -> bool {
        self.conj.is_some()
    }

    /// The antilinear identification matrix at `(p, q)`, if attached.
    pub fn conjugation(&self, p: usize, q: usize) -> Option<&QMatrix> {
        self.conj.as_ref().map(|c| &c[p][q])
    }
}

fn reshape_zero_padded(m: &QMatrix, rows: usize, cols: usize) -> QMatrix {
    if (m.rows(), m.cols()) == (rows, cols) {
        return m.clone();
    }
    debug_assert!(
        m.is_zero() || (m.rows() == rows && m.cols() == cols),
        "reshape of a nonzero matrix"
    );
    let mut out = QMatrix::zeros(rows, cols);
    for i in 0..m.rows().min(rows) {
        for j in 0..m.cols().min(cols) {
            out.set(i, j, m.get(i, j).clone());
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Model complexes and pseudo-random generation
// ---------------------------------------------------------------------------

/// Build the literal model complex of a single indecomposable shape, on the
/// smallest rectangle containing it (extended to `pmax x qmax`).
pub(crate) fn model_complex(shape: &ZigzagShape, pmax: usize, qmax: usize) -> Bicomplex {
    let mut dims = vec![vec![0usize; qmax + 1]; pmax + 1];
    let mut del_one: Vec<(usize, usize)> = Vec::new(); // source bidegrees with del = [1]
    let mut delbar_one: Vec<(usize, usize)> = Vec::new();
    match shape {
        ZigzagShape::Dot { p, q } => {
            dims[*p][*q] = 1;
        }
        ZigzagShape::Square { p, q } => {
            dims[*p][*q] = 1;
            dims[*p + 1][*q] = 1;
            dims[*p][*q + 1] = 1;
            dims[*p + 1][*q + 1] = 1;
            del_one.push((*p, *q));
            del_one.push((*p, *q + 1));
            delbar_one.push((*p, *q));
            delbar_one.push((*p + 1, *q));
        }
        ZigzagShape::Zigzag {
            p,
            q,
            first_step,
            length,
        } => {
            let dots = zigzag_dots(*p, *q, first_step.is_vertical(), *length);
            for &(pp, qq) in &dots {
                dims[pp][qq] = 1;
            }
            for (src, vertical) in zigzag_arrows(*p, *q, first_step.is_vertical(), *length) {
                if vertical {
                    delbar_one.push(src);
                } else {
                    del_one.push(src);
                }
            }
        }
    }
    let mut del = vec![vec![QMatrix::zeros(0, 0); qmax + 1]; pmax + 1];
    let mut delbar = vec![vec![QMatrix::zeros(0, 0); qmax + 1]; pmax + 1];
    for p in 0..=pmax {
        for q in 0..=qmax {
            let src = dims[p][q];
            let del_tgt = if p < pmax { dims[p + 1][q] } else { 0 };
            let delbar_tgt = if q < qmax { dims[p][q + 1] } else { 0 };
            del[p][q] = QMatrix::zeros(del_tgt, src);
            delbar[p][q] = QMatrix::zeros(delbar_tgt, src);
        }
    }
    for (p, q) in del_one {
        del[p][q].set(0, 0, Scalar::one());
    }
    // Sign convention for the square: make the two composites anticommute.
    if let ZigzagShape::Square { p, q } = shape {
        // del on the upper edge (p, q+1) -> (p+1, q+1) carries -1 so that
        // del∘delbar + delbar∘del = 0.
        del[*p][*q + 1].set(0, 0, -Scalar::one());
    }
    for (p, q) in delbar_one {
        delbar[p][q].set(0, 0, Scalar::one());
    }
    Bicomplex {
        pmax,
        qmax,
        dims,
        del,
        delbar,
        conj: None,
    }
}

/// Dot `t` of a zigzag with anchor `(p, q)` (lex-least dot, always a source
/// dot), as signed coordinates. The enumeration walks the path from one end:
///
/// * vertical-first (the anchor has a vertical arrow): the walk starts at
///   the sink dot directly above the anchor, so even `t` are sinks
///   `(p + t/2, q + 1 - t/2)` and odd `t` are sources
///   `(p + (t-1)/2, q - (t-1)/2)`; the arrow between `t` and `t+1` is
///   vertical iff `t` is even, and always points from the odd dot to the
///   even dot.
/// * horizontal-first: the walk starts at the anchor, so even `t` are
///   sources `(p + t/2, q - t/2)` and odd `t` are sinks
///   `(p + (t+1)/2, q - (t-1)/2)`; the arrow between `t` and `t+1` is
///   horizontal iff `t` is even, and points from the even dot to the odd
///   dot.
fn zigzag_dot_signed(p: usize, q: usize, first_step_vertical: bool, t: usize) -> (isize, isize) {
    let (p, q) = (p as isize, q as isize);
    let t = t as isize;
    if first_step_vertical {
        if t % 2 == 0 {
            (p + t / 2, q + 1 - t / 2)
        } else {
            (p + (t - 1) / 2, q - (t - 1) / 2)
        }
    } else if t % 2 == 0 {
        (p + t / 2, q - t / 2)
    } else {
        (p + (t + 1) / 2, q - (t - 1) / 2)
    }
}

/// The dots of a zigzag, in walk order t = 0 .. length-1. Panics when a dot
/// would leave the first quadrant (callers must pass valid shapes).
pub(crate) fn zigzag_dots(
    p: usize,
    q: usize,
    first_step_vertical: bool,
    length: usize,
) -> Vec<(usize, usize)> {
    (0..length)
        .map(|t| {
            let (ip, iq) = zigzag_dot_signed(p, q, first_step_vertical, t);
            assert!(ip >= 0 && iq >= 0, "zigzag dot outside the first quadrant");
            (ip as usize, iq as usize)
        })
        .collect()
}

/// The arrows of a zigzag as `(source_dot, is_vertical)` pairs, one per
/// consecutive dot pair on the walk.
pub(crate) fn zigzag_arrows(
    p: usize,
    q: usize,
    first_step_vertical: bool,
    length: usize,
) -> Vec<((usize, usize), bool)> {
    let dots = zigzag_dots(p, q, first_step_vertical, length);
    (0..length.saturating_sub(1))
        .map(|t| {
            let vertical = if first_step_vertical {
                t % 2 == 0
            } else {
                t % 2 == 1
            };
            // sources are the odd dots when vertical-first, even otherwise
            let src = if first_step_vertical {
                if t % 2 == 0 {
                    dots[t + 1]
                } else {
                    dots[t]
                }
            } else if t % 2 == 0 {
                dots[t]
            } else {
                dots[t + 1]
            };
            (src, vertical)
        })
        .collect()
}

/// A pseudo-randomly generated complex together with the multiset of
/// indecomposable summands it was assembled from.
#[derive(Debug, Clone)]
pub struct RandomBicomplex {
    /// The seed the generator was called with.
    pub seed: u64,
    pub complex: Bicomplex,
    /// The multiset of shapes used, as (shape, multiplicity), sorted.
    pub multiset: Vec<(ZigzagShape, usize)>,
}

/// Generate a pseudo-random bounded double complex with a known
/// decomposition: a direct sum of random indecomposable model shapes,
/// conjugated by a random invertible change of basis at every bidegree.
///
/// Deterministic in `seed`. The rectangle is at most `pmax x qmax` and every
/// space has dimension at most `max_dim`.
pub fn random_bicomplex(
    seed: u64,
    pmax: usize,
    qmax: usize,
    max_dim: usize,
) -> RandomBicomplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Sample shapes until capacity: track per-bidegree usage.
    let mut usage = vec![vec![0usize; qmax + 1]; pmax + 1];
    let mut shapes: Vec<ZigzagShape> = Vec::new();
    let attempts = rng.gen_range(2..=(3 * (pmax + 1) * (qmax + 1)).max(3));
    for _ in 0..attempts {
        let shape = sample_shape(&mut rng, pmax, qmax);
        let dots = shape_dots(&shape);
        if dots
            .iter()
            .all(|&(p, q)| usage[p][q] + dots.iter().filter(|&&d| d == (p, q)).count() <= max_dim)
        {
            for &(p, q) in &dots {
                usage[p][q] += 1;
            }
            shapes.push(shape);
        }
    }
    if shapes.is_empty() {
        shapes.push(ZigzagShape::Dot { p: 0, q: 0 });
        usage[0][0] += 1;
    }
    // Assemble the direct sum of the model complexes.
    let mut complex = Bicomplex::zero(pmax, qmax);
    for shape in &shapes {
        complex = complex.direct_sum(&model_complex(shape, pmax, qmax));
    }
    // Conjugate by random invertible base changes at every bidegree.
    complex = random_base_change(&mut rng, &complex);

    // Sorted multiset with multiplicities.
    let mut shapes_sorted = shapes;
    shapes_sorted.sort();
    let mut multiset: Vec<(ZigzagShape, usize)> = Vec::new();
    for s in shapes_sorted {
        match multiset.last_mut() {
            Some((prev, m)) if *prev == s => *m += 1,
            _ => multiset.push((s, 1)),
        }
    }
    RandomBicomplex { seed, complex, multiset }
}

fn sample_shape(rng: &mut ChaCha8Rng, pmax: usize, qmax: usize) -> ZigzagShape {
    loop {
        match rng.gen_range(0..4u8) {
            0 => {
                return ZigzagShape::Dot {
                    p: rng.gen_range(0..=pmax),
                    q: rng.gen_range(0..=qmax),
                }
            }
            1 if pmax >= 1 && qmax >= 1 => {
                return ZigzagShape::Square {
                    p: rng.gen_range(0..pmax),
                    q: rng.gen_range(0..qmax),
                }
            }
            2 | 3 => {
                let first_step = if rng.gen_bool(0.5) {
                    FirstStep::Vertical
                } else {
                    FirstStep::Horizontal
                };
                let length = rng.gen_range(2..=5usize);
                // Choose an anchor such that every dot stays inside the
                // rectangle; rejection-sample.
                let p = rng.gen_range(0..=pmax);
                let q = rng.gen_range(0..=qmax);
                let dots =
                    zigzag_dots_checked(p, q, first_step.is_vertical(), length, pmax, qmax);
                if let Some(_dots) = dots {
                    return ZigzagShape::Zigzag {
                        p,
                        q,
                        first_step,
                        length,
                    };
                }
            }
            _ => {}
        }
    }
}

/// Dots of a zigzag, or None if any dot leaves `[0,pmax] x [0,qmax]`.
pub(crate) fn zigzag_dots_checked(
    p: usize,
    q: usize,
    first_step_vertical: bool,
    length: usize,
    pmax: usize,
    qmax: usize,
) -> Option<Vec<(usize, usize)>> {
    let mut out = Vec::with_capacity(length);
    for t in 0..length {
        let (ip, iq) = zigzag_dot_signed(p, q, first_step_vertical, t);
        if ip < 0 || iq < 0 || ip > pmax as isize || iq > qmax as isize {
            return None;
        }
        out.push((ip as usize, iq as usize));
    }
    Some(out)
}

pub(crate) fn shape_dots(shape: &ZigzagShape) -> Vec<(usize, usize)> {
    match shape {
        ZigzagShape::Dot { p, q } => vec![(*p, *q)],
        ZigzagShape::Square { p, q } => {
            vec![(*p, *q), (*p + 1, *q), (*p, *q + 1), (*p + 1, *q + 1)]
        }
        ZigzagShape::Zigzag {
            p,
            q,
            first_step,
            length,
        } => zigzag_dots(*p, *q, first_step.is_vertical(), *length),
    }
}

/// Conjugate every space by a random invertible matrix with small integer
/// entries (a product of elementary operations, so invertibility is by
/// construction).
fn random_base_change(rng: &mut ChaCha8Rng, c: &Bicomplex) -> Bicomplex {
    let mut t: Vec<Vec<QMatrix>> = Vec::with_capacity(c.pmax + 1); // change of basis per bidegree
    let mut tinv: Vec<Vec<QMatrix>> = Vec::with_capacity(c.pmax + 1);
    for p in 0..=c.pmax {
        let mut col = Vec::with_capacity(c.qmax + 1);
        let mut col_inv = Vec::with_capacity(c.qmax + 1);
        for q in 0..=c.qmax {
            let n = c.dims[p][q];
            let (m, minv) = random_invertible(rng, n);
            col.push(m);
            col_inv.push(minv);
        }
        t.push(col);
        tinv.push(col_inv);
    }
    let mut del = vec![vec![QMatrix::zeros(0, 0); c.qmax + 1]; c.pmax + 1];
    let mut delbar = vec![vec![QMatrix::zeros(0, 0); c.qmax + 1]; c.pmax + 1];
    for p in 0..=c.pmax {
        for q in 0..=c.qmax {
            del[p][q] = if p < c.pmax {
                t[p + 1][q].mul(&c.del[p][q]).mul(&tinv[p][q])
            } else {
                c.del[p][q].clone()
            };
            delbar[p][q] = if q < c.qmax {
                t[p][q + 1].mul(&c.delbar[p][q]).mul(&tinv[p][q])
            } else {
                c.delbar[p][q].clone()
            };
        }
    }
    Bicomplex {
        pmax: c.pmax,
        qmax: c.qmax,
        dims: c.dims.clone(),
        del,
        delbar,
        conj: None,
    }
}

/// A random invertible n x n matrix and its inverse, built as a product of
/// elementary row operations (shears and transpositions) applied to I.
fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> (QMatrix, QMatrix) {
    let mut m = QMatrix::identity(n);
    let mut minv = QMatrix::identity(n);
    if n <= 1 {
        if n == 1 && rng.gen_bool(0.3) {
            // unit scaling by i keeps things exactly invertible
            let unit = crate::linalg::scalar_i(0, 1);
            let unit_inv = crate::linalg::scalar_i(0, -1);
            m.set(0, 0, unit);
            minv.set(0, 0, unit_inv);
        }
        return (m, minv);
    }
    let ops = rng.gen_range(n..=3 * n);
    for _ in 0..ops {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        if i == j {
            j = (j + 1) % n;
        }
        match rng.gen_range(0..3u8) {
            0 => {
                // swap rows of m; for the inverse, swap columns
                for col in 0..n {
                    let a = m.get(i, col).clone();
                    let b = m.get(j, col).clone();
                    m.set(i, col, b);
                    m.set(j, col, a);
                }
                for row in 0..n {
                    let a = minv.get(row, i).clone();
                    let b = minv.get(row, j).clone();
                    minv.set(row, i, b);
                    minv.set(row, j, a);
                }
            }
            _ => {
                // shear: row_i += c * row_j; inverse: col_j -= c * col_i
                let c = match rng.gen_range(0..4u8) {
                    0 => scalar(1),
                    1 => scalar(-1),
                    2 => scalar(2),
                    _ => crate::linalg::scalar_i(0, 1),
                };
                for col in 0..n {
                    let add = m.get(j, col) * &c;
                    let cur = m.get(i, col).clone();
                    m.set(i, col, cur + add);
                }
                for row in 0..n {
                    let sub = minv.get(row, i) * &c;
                    let cur = minv.get(row, j).clone();
                    minv.set(row, j, cur - sub);
                }
            }
        }
    }
    debug_assert_eq!(m.mul(&minv), QMatrix::identity(n));
    (m, minv)
}

/// Generate the direct sum of an explicit multiset of model shapes,
/// conjugated by a random seeded base change (for pin-down tests where the
/// expected decomposition is known in advance).
pub fn random_bicomplex_with_multiset(
    seed: u64,
    pmax: usize,
    qmax: usize,
    multiset: &[(ZigzagShape, usize)],
) -> Bicomplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut complex = Bicomplex::zero(pmax, qmax);
    for (shape, mult) in multiset {
        for _ in 0..*mult {
            complex = complex.direct_sum(&model_complex(shape, pmax, qmax));
        }
    }
    random_base_change(&mut rng, &complex)
}
