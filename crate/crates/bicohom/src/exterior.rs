//! Exterior-algebra scaffolding over a finite set of anticommuting
//! generators.
//!
//! A monomial is a bitmask over generator indices `0..n` (bit `i` set means
//! generator `i` is present), read as the wedge of its generators in
//! increasing index order.  The basis of each degree is ordered by the
//! lexicographic order of the increasing index tuples — for four generators
//! in degree two: `{0,1}, {0,2}, {0,3}, {1,2}, {1,3}, {2,3}` — and every
//! matrix emitted by this module uses that layout for its rows and columns.
//!
//! The module stays `pub(crate)`: it backs the Chevalley–Eilenberg
//! construction in [`crate::lie`] and the differential graded algebra in
//! [`crate::massey`], but is not part of the public surface.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::linalg::{QMatrix, Scalar};

/// Binomial coefficient `C(n, k)`; exact for the small inputs used here.
pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        // acc holds C(n, i); the product below is divisible by i + 1.
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All `k`-subsets of `{0, …, n-1}` as bitmasks, in tuple-lex order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<u32> {
    assert!(n <= 30, "generator count {n} exceeds the bitmask width");
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut idx: Vec<usize> = (0..k).collect();
    'outer: loop {
        out.push(idx.iter().fold(0u32, |m, &i| m | (1u32 << i)));
        for j in (0..k).rev() {
            if idx[j] < j + n - k {
                idx[j] += 1;
                for l in j + 1..k {
                    idx[l] = idx[l - 1] + 1;
                }
                continue 'outer;
            }
        }
        return out;
    }
}

/// Set bits of `mask` in increasing order.
pub(crate) fn bits(mask: u32) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut rest = mask;
    while rest != 0 {
        out.push(rest.trailing_zeros() as usize);
        rest &= rest - 1;
    }
    out
}

/// Sign of `e_A ∧ e_B` relative to the sorted monomial `e_{A∪B}`; `0` when
/// the index sets intersect.  The sign is the parity of the number of pairs
/// `(i, j)` with `i ∈ A`, `j ∈ B`, `j < i`.
pub(crate) fn wedge_sign(a: u32, b: u32) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut inversions = 0u32;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros();
        inversions += (b & ((1u32 << i) - 1)).count_ones();
        rest &= rest - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A finite linear combination of monomials, not necessarily homogeneous.
/// Zero coefficients are pruned eagerly, so `terms.is_empty()` iff zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct MultiVector {
    pub(crate) terms: BTreeMap<u32, Scalar>,
}

impl MultiVector {
    pub(crate) fn zero() -> Self {
        MultiVector {
            terms: BTreeMap::new(),
        }
    }

    pub(crate) fn monomial(mask: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(mask, Scalar::one());
        MultiVector { terms }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Accumulate `coeff · e_mask`, pruning the entry if it cancels.
    pub(crate) fn add_term(&mut self, mask: u32, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mask).or_insert_with(Scalar::zero);
        *entry = entry.clone() + coeff;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub(crate) fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (mask, c) in &other.terms {
            out.add_term(*mask, c.clone());
        }
        out
    }

    pub(crate) fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return MultiVector::zero();
        }
        MultiVector {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (*m, v.clone() * c.clone()))
                .collect(),
        }
    }

    pub(crate) fn wedge(&self, other: &Self) -> Self {
        let mut out = MultiVector::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let sign = wedge_sign(*ma, *mb);
                if sign == 0 {
                    continue;
                }
                let mut c = ca.clone() * cb.clone();
                if sign < 0 {
                    c = -c;
                }
                out.add_term(ma | mb, c);
            }
        }
        out
    }
}

/// The full exterior algebra on `n` generators: per-degree bases in the
/// canonical order plus the extension of a generator-level differential to
/// a graded derivation (`d(α∧β) = dα∧β + (−1)^{|α|} α∧dβ`).
pub(crate) struct Exterior {
    pub(crate) n: usize,
    basis: Vec<Vec<u32>>,
    index: HashMap<u32, usize>,
}

impl Exterior {
    pub(crate) fn new(n: usize) -> Self {
        let basis: Vec<Vec<u32>> = (0..=n).map(|k| combinations(n, k)).collect();
        let mut index = HashMap::new();
        for masks in &basis {
            for (pos, &mask) in masks.iter().enumerate() {
                index.insert(mask, pos);
            }
        }
        Exterior { n, basis, index }
    }

    /// Dimension of degree `k` (zero beyond `n`).
    pub(crate) fn dim(&self, k: usize) -> usize {
        self.basis.get(k).map_or(0, Vec::len)
    }

    pub(crate) fn basis(&self, k: usize) -> &[u32] {
        &self.basis[k]
    }

    /// Position of a monomial inside the basis of its own degree.
    pub(crate) fn position(&self, mask: u32) -> usize {
        self.index[&mask]
    }

    /// Coordinates of a homogeneous element in the degree-`k` basis.
    pub(crate) fn coords(&self, k: usize, v: &MultiVector) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim(k)];
        for (mask, c) in &v.terms {
            assert_eq!(
                mask.count_ones() as usize, k,
                "element is not homogeneous of degree {k}"
            );
            out[self.position(*mask)] = c.clone();
        }
        out
    }

    pub(crate) fn from_coords(&self, k: usize, coords: &[Scalar]) -> MultiVector {
        assert_eq!(coords.len(), self.dim(k), "coordinate length mismatch");
        let mut out = MultiVector::zero();
        for (pos, c) in coords.iter().enumerate() {
            out.add_term(self.basis[k][pos], c.clone());
        }
        out
    }

    /// Apply the derivation determined by `d_gen[i] = d(e_i)` to an
    /// arbitrary element.  On a monomial `e_{i_0}∧…∧e_{i_{k-1}}` (indices
    /// increasing) the result is `Σ_j (−1)^j d(e_{i_j}) ∧ e_{rest_j}`.
    pub(crate) fn derive(&self, d_gen: &[MultiVector], v: &MultiVector) -> MultiVector {
        assert_eq!(d_gen.len(), self.n, "one image per generator required");
        let mut out = MultiVector::zero();
        for (mask, coeff) in &v.terms {
            for (j, i) in bits(*mask).into_iter().enumerate() {
                let rest = mask & !(1u32 << i);
                let mut piece = d_gen[i].wedge(&MultiVector::monomial(rest));
                if j % 2 == 1 {
                    piece = piece.scale(&-Scalar::one());
                }
                out = out.add(&piece.scale(coeff));
            }
        }
        out
    }

    /// Matrix of the derivation from degree `k` to degree `k+1` in the
    /// canonical bases (a `0 × dim(k)` matrix at the top degree).
    pub(crate) fn derivation_matrix(&self, d_gen: &[MultiVector], k: usize) -> QMatrix {
        let rows = if k + 1 <= self.n { self.dim(k + 1) } else { 0 };
        let mut m = QMatrix::zeros(rows, self.dim(k));
        for (col, &mask) in self.basis[k].iter().enumerate() {
            let image = self.derive(d_gen, &MultiVector::monomial(mask));
            for (tmask, c) in &image.terms {
                assert_eq!(
                    tmask.count_ones() as usize,
                    k + 1,
                    "derivation image must be homogeneous of degree k+1"
                );
                m.set(self.position(*tmask), col, c.clone());
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::scalar;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn combinations_are_tuple_lex_ordered() {
        // {0,3} (mask 9) precedes {1,2} (mask 6): tuple order, not mask order.
        assert_eq!(combinations(4, 2), vec![3, 5, 9, 6, 10, 12]);
        assert_eq!(combinations(3, 0), vec![0]);
        assert_eq!(combinations(3, 3), vec![7]);
        assert_eq!(combinations(2, 3), Vec::<u32>::new());
    }

    #[test]
    fn wedge_signs() {
        // e1 ∧ e0 = −e0 ∧ e1
        assert_eq!(wedge_sign(0b10, 0b01), -1);
        assert_eq!(wedge_sign(0b01, 0b10), 1);
        // overlapping monomials square to zero
        assert_eq!(wedge_sign(0b11, 0b01), 0);
        // e{1,3} ∧ e{0,2}: inversions (1>0), (3>0), (3>2) → odd
        assert_eq!(wedge_sign(0b1010, 0b0101), -1);
    }

    #[test]
    fn wedge_is_graded_commutative() {
        let ext = Exterior::new(4);
        let a = ext.from_coords(1, &[scalar(1), scalar(2), scalar(0), scalar(3)]);
        let b = ext.from_coords(1, &[scalar(5), scalar(0), scalar(7), scalar(1)]);
        // odd · odd: a∧b = −b∧a
        assert_eq!(a.wedge(&b), b.wedge(&a).scale(&-Scalar::one()));
        let ab = a.wedge(&b);
        // even · odd commutes
        assert_eq!(ab.wedge(&a), a.wedge(&ab));
    }

    #[test]
    fn derivation_squares_to_zero_for_heisenberg() {
        // d(e2) = −e0∧e1 on three generators.
        let ext = Exterior::new(3);
        let mut d2 = MultiVector::zero();
        d2.add_term(0b011, -Scalar::one());
        let d_gen = vec![MultiVector::zero(), MultiVector::zero(), d2];
        for k in 0..=3 {
            let dk = ext.derivation_matrix(&d_gen, k);
            if k + 1 <= 3 {
                let dk1 = ext.derivation_matrix(&d_gen, k + 1);
                assert!(dk1.mul(&dk).is_zero(), "d² ≠ 0 at degree {k}");
            }
        }
        // Leibniz: d(e0∧e2) = −e0∧d(e2) = e0∧e0∧e1 = 0; d(e1∧e2) likewise.
        let v = MultiVector::monomial(0b101);
        assert!(ext.derive(&d_gen, &v).is_zero());
        // d(e2∧x) with x degree 0 side: d(e2) itself appears with sign +1.
        let w = ext.derive(&d_gen, &MultiVector::monomial(0b100));
        assert_eq!(w, d_gen[2].clone());
    }
}
