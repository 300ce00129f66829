//! Double complexes from Lie-algebra data.
//!
//! A finite-dimensional real Lie algebra 𝔤 with rational structure constants
//! induces the Chevalley–Eilenberg differential on Λ•(𝔤*); a compatible
//! complex structure `J` splits the complexification into bidegrees and turns
//! it into a [`Bicomplex`].  This module provides both construction routes —
//! real structure constants plus `J`, or complex structure equations for an
//! invariant coframe — together with the Jacobi and Nijenhuis (integrability)
//! checks, the ascending central series, and a small catalog of built-in
//! examples.
//!
//! Conventions:
//! * bases are 0-indexed in the API; diagnostics print 1-based names
//!   (`x1`, `φ1`, …) to match the usual notation;
//! * invariant 1-forms differentiate by `dα(x, y) = −α([x, y])`, so a single
//!   bracket `[x_i, x_j] = x_k` gives `dα^k = −α^i ∧ α^j`;
//! * the coframe route derives the conjugate equations `dφ̄^k` from `dφ^k`
//!   by conjugation (the presentation stores only the unbarred half);
//! * `Λ^{p,q}` is based by pairs `(I, J)` of increasing index tuples,
//!   `I` major and `J` minor, each half in tuple-lex order.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::bicomplex::{Bicomplex, TotalComplex};
use crate::exterior::{binomial, combinations, Exterior, MultiVector};
use crate::linalg::{conj, QMatrix, Rational, Scalar, Subspace};

/// Failures while interpreting Lie-algebra data.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LieError {
    /// The structure constants violate the Jacobi identity (0-based triple).
    #[error("Jacobi identity fails on the basis triple (x{}, x{}, x{})", .i + 1, .j + 1, .k + 1)]
    JacobiViolation { i: usize, j: usize, k: usize },
    /// The proposed `J` is not an almost-complex structure (or is missing).
    #[error("not an almost-complex structure: {reason}")]
    NotAlmostComplex { reason: String },
    /// The almost-complex structure fails integrability, or the coframe
    /// equations do not induce a valid double complex.
    #[error("complex structure is not integrable: {detail}")]
    NotIntegrable { detail: String },
    /// Unknown name passed to [`builtin`].
    #[error("unknown example {name:?}; available: {}", .catalog.join(", "))]
    UnknownExample { name: String, catalog: Vec<String> },
}

fn rat_zero() -> Rational {
    Rational::zero()
}

/// A real Lie algebra given by rational structure constants
/// `[x_i, x_j] = Σ_k c_{ij}^k x_k`, stored for `i < j` only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraPresentation {
    n: usize,
    c: BTreeMap<(usize, usize), Vec<Rational>>,
}

impl LieAlgebraPresentation {
    /// The abelian algebra of dimension `n` (all brackets zero).
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "the algebra must have positive dimension");
        LieAlgebraPresentation {
            n,
            c: BTreeMap::new(),
        }
    }

    /// Real dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Accumulate a single structure constant: add `c · x_k` to `[x_i, x_j]`.
    /// Indices are 0-based; `i > j` is folded to `(j, i)` with the opposite
    /// sign.  Panics on out-of-range indices or `i == j` with `c ≠ 0`.
    pub fn add_bracket_term(&mut self, i: usize, j: usize, k: usize, c: Rational) {
        assert!(i < self.n && j < self.n && k < self.n, "basis index out of range");
        if c.is_zero() {
            return;
        }
        assert!(i != j, "[x_i, x_i] must vanish");
        let (key, signed) = if i < j { ((i, j), c) } else { ((j, i), -c) };
        let entry = self
            .c
            .entry(key)
            .or_insert_with(|| vec![rat_zero(); self.n]);
        entry[k] += signed;
        if entry.iter().all(Rational::is_zero) {
            self.c.remove(&key);
        }
    }

    /// `[x_i, x_j]` as a coordinate vector (any index order; zero on the
    /// diagonal).
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        assert!(i < self.n && j < self.n, "basis index out of range");
        if i == j {
            return vec![rat_zero(); self.n];
        }
        let (key, flip) = if i < j { ((i, j), false) } else { ((j, i), true) };
        match self.c.get(&key) {
            None => vec![rat_zero(); self.n],
            Some(v) if flip => v.iter().map(|c| -c.clone()).collect(),
            Some(v) => v.clone(),
        }
    }

    /// Bilinear extension of the bracket to ℚ(i)-coefficient vectors.
    fn bracket_vectors(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.n];
        for ((i, j), coeffs) in &self.c {
            // coefficient of c_{ij} in [u, v] is u_i v_j − u_j v_i
            let w = u[*i].clone() * v[*j].clone() - u[*j].clone() * v[*i].clone();
            if w.is_zero() {
                continue;
            }
            for (k, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    out[k] += w.clone() * Scalar::from(c.clone());
                }
            }
        }
        out
    }

    /// First basis triple `i < j < k` violating the Jacobi identity, or
    /// `None` when the presentation is a Lie algebra.
    pub fn jacobi_check(&self) -> Option<(usize, usize, usize)> {
        let mut first = None;
        'scan: for i in 0..self.n {
            for j in i + 1..self.n {
                for k in j + 1..self.n {
                    let mut acc = vec![rat_zero(); self.n];
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        // [[x_a, x_b], x_c]
                        let inner = self.bracket_basis(a, b);
                        for (l, coeff) in inner.iter().enumerate() {
                            if coeff.is_zero() {
                                continue;
                            }
                            for (t, d) in self.bracket_basis(l, c).iter().enumerate() {
                                acc[t] += coeff.clone() * d.clone();
                            }
                        }
                    }
                    if acc.iter().any(|v| !v.is_zero()) {
                        first = Some((i, j, k));
                        break 'scan;
                    }
                }
            }
        }
        // The identity is equivalent to d² = 0 on generators; both are
        // computed and must agree.
        debug_assert_eq!(first.is_none(), self.d_squared_vanishes());
        first
    }

    fn d_squared_vanishes(&self) -> bool {
        let ext = Exterior::new(self.n);
        let d_gen = self.generator_differential();
        d_gen.iter().all(|img| ext.derive(&d_gen, img).is_zero())
    }

    /// `d x^k = −Σ_{i<j} c_{ij}^k x^i ∧ x^j` for each dual generator.
    pub(crate) fn generator_differential(&self) -> Vec<MultiVector> {
        let mut d_gen = vec![MultiVector::zero(); self.n];
        for ((i, j), coeffs) in &self.c {
            let mask = (1u32 << i) | (1u32 << j);
            for (k, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    d_gen[k].add_term(mask, -Scalar::from(c.clone()));
                }
            }
        }
        d_gen
    }

    /// The Chevalley–Eilenberg complex on Λ•(𝔤*) with complexified
    /// coefficients, as an ungraded total complex (one block per degree;
    /// no bigrading).  Degree-`k` bases are increasing index tuples in
    /// tuple-lex order.
    pub fn ce_differential(&self) -> Result<TotalComplex, LieError> {
        if let Some((i, j, k)) = self.jacobi_check() {
            return Err(LieError::JacobiViolation { i, j, k });
        }
        let ext = Exterior::new(self.n);
        let d_gen = self.generator_differential();
        let dims: Vec<usize> = (0..=self.n).map(|k| ext.dim(k)).collect();
        let d: Vec<QMatrix> = (0..=self.n)
            .map(|k| ext.derivation_matrix(&d_gen, k))
            .collect();
        let offsets = (0..=self.n)
            .map(|_| BTreeMap::from([(0usize, 0usize)]))
            .collect();
        Ok(TotalComplex { dims, d, offsets })
    }

    /// Ascending central series `𝒵⁰ = 0 ⊆ 𝒵¹ ⊆ …` with
    /// `𝒵^{i+1} = {x : [x, 𝔤] ⊆ 𝒵^i}`.
    pub fn central_series(&self) -> CentralSeries {
        let n = self.n;
        // ad_j : x ↦ [x, e_j], columns are [e_i, e_j].
        let ad: Vec<QMatrix> = (0..n)
            .map(|j| {
                QMatrix::from_fn(n, n, |r, i| {
                    Scalar::from(self.bracket_basis(i, j)[r].clone())
                })
            })
            .collect();
        let mut z = Subspace::zero(n);
        let mut dims = vec![0usize];
        loop {
            let mut next = Subspace::full(n);
            for m in &ad {
                let pre = Subspace::preimage(m, &z).expect("ambient dimensions agree");
                next = next.intersect(&pre).expect("ambient dimensions agree");
            }
            if next.dim() <= z.dim() {
                break;
            }
            dims.push(next.dim());
            z = next;
            if z.dim() == n {
                break;
            }
        }
        let step = if *dims.last().unwrap() == n {
            Some(dims.len() - 1)
        } else {
            None
        };
        CentralSeries { dims, step }
    }
}

/// Dimensions of the ascending central series and the nilpotency step
/// (`None` when the series stabilizes below the whole algebra).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralSeries {
    /// `dims[i] = dim 𝒵^i`, listed while strictly increasing.
    pub dims: Vec<usize>,
    /// Least `s` with `𝒵^s = 𝔤`, if the algebra is nilpotent.
    pub step: Option<usize>,
}

impl CentralSeries {
    pub fn is_nilpotent(&self) -> bool {
        self.step.is_some()
    }
}

/// An almost-complex structure: a rational matrix with `J² = −identity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexStructure {
    j: QMatrix,
}

impl ComplexStructure {
    pub fn new(j: QMatrix) -> Result<Self, LieError> {
        if j.rows() != j.cols() {
            return Err(LieError::NotAlmostComplex {
                reason: format!("matrix is {}x{}, not square", j.rows(), j.cols()),
            });
        }
        let n = j.rows();
        for r in 0..n {
            for c in 0..n {
                if !j.get(r, c).im.is_zero() {
                    return Err(LieError::NotAlmostComplex {
                        reason: "matrix entries must be real rationals".into(),
                    });
                }
            }
        }
        if !j.mul(&j).add(&QMatrix::identity(n)).is_zero() {
            return Err(LieError::NotAlmostComplex {
                reason: "J² ≠ −identity".into(),
            });
        }
        Ok(ComplexStructure { j })
    }

    /// The block structure pairing consecutive basis vectors:
    /// `J e_{2t} = e_{2t+1}`, `J e_{2t+1} = −e_{2t}`.
    pub fn standard(m: usize) -> Self {
        let mut j = QMatrix::zeros(2 * m, 2 * m);
        for t in 0..m {
            j.set(2 * t + 1, 2 * t, Scalar::one());
            j.set(2 * t, 2 * t + 1, -Scalar::one());
        }
        ComplexStructure { j }
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.j
    }

    pub fn dim(&self) -> usize {
        self.j.rows()
    }
}

/// Values of the Nijenhuis tensor on all basis pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NijenhuisReport {
    /// `N_J(x_i, x_j)` for every pair `i < j` (0-based), as coordinates.
    pub values: Vec<((usize, usize), Vec<Rational>)>,
    pub is_integrable: bool,
}

impl NijenhuisReport {
    /// First pair with a nonvanishing tensor value, if any.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        self.values
            .iter()
            .find(|(_, v)| v.iter().any(|c| !c.is_zero()))
            .map(|(pair, _)| *pair)
    }
}

fn unit_vector(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

/// Evaluate `N_J(V, W) = [V,W] + J[JV,W] + J[V,JW] − [JV,JW]` on all basis
/// pairs.  The boolean verdict is cross-checked against the equivalent
/// criterion that `[T^{1,0}, T^{1,0}] ⊆ T^{1,0}`.
pub fn nijenhuis(
    g: &LieAlgebraPresentation,
    j: &ComplexStructure,
) -> Result<NijenhuisReport, LieError> {
    let n = g.dim();
    if j.dim() != n {
        return Err(LieError::NotAlmostComplex {
            reason: format!(
                "complex structure is {}-dimensional but the algebra is {}-dimensional",
                j.dim(),
                n
            ),
        });
    }
    let jm = j.matrix();
    let mut values = Vec::new();
    let mut is_integrable = true;
    for a in 0..n {
        for b in a + 1..n {
            let ea = unit_vector(n, a);
            let eb = unit_vector(n, b);
            let ja = jm.apply(&ea);
            let jb = jm.apply(&eb);
            let mut total = g.bracket_vectors(&ea, &eb);
            for (t, v) in jm.apply(&g.bracket_vectors(&ja, &eb)).into_iter().enumerate() {
                total[t] += v;
            }
            for (t, v) in jm.apply(&g.bracket_vectors(&ea, &jb)).into_iter().enumerate() {
                total[t] += v;
            }
            for (t, v) in g.bracket_vectors(&ja, &jb).into_iter().enumerate() {
                total[t] -= v;
            }
            let coords: Vec<Rational> = total
                .into_iter()
                .map(|z| {
                    debug_assert!(z.im.is_zero(), "Nijenhuis values of a real J are real");
                    z.re
                })
                .collect();
            if coords.iter().any(|c| !c.is_zero()) {
                is_integrable = false;
            }
            values.push(((a, b), coords));
        }
    }
    // Cross-check: J integrates iff the +i eigenspace of the complexified J
    // closes under the bracket.
    let holo = holomorphic_frame(g, j);
    let mut closes = true;
    'pairs: for s in 0..holo.len() {
        for t in s + 1..holo.len() {
            let w = g.bracket_vectors(&holo[s], &holo[t]);
            let jw = jm.apply(&w);
            for k in 0..n {
                // (1 + iJ) kills exactly the +i eigenspace
                if !(w[k].clone() + Scalar::i() * jw[k].clone()).is_zero() {
                    closes = false;
                    break 'pairs;
                }
            }
        }
    }
    debug_assert_eq!(is_integrable, closes, "the two integrability criteria agree");
    Ok(NijenhuisReport {
        values,
        is_integrable,
    })
}

/// Greedy adapted basis: real pairs `(u_t, J u_t)` spanning the algebra.
fn adapted_pairs(g: &LieAlgebraPresentation, j: &ComplexStructure) -> Vec<Vec<Scalar>> {
    let n = g.dim();
    let mut chosen: Vec<Vec<Scalar>> = Vec::new();
    for i in 0..n {
        if chosen.len() == n {
            break;
        }
        let v = unit_vector(n, i);
        if !Subspace::span(n, &chosen).contains_vector(&v) {
            let jv = j.matrix().apply(&v);
            chosen.push(v);
            chosen.push(jv);
        }
    }
    assert_eq!(chosen.len(), n, "J-stable pairs must exhaust the algebra");
    chosen
}

/// Basis `Z_t = (u_t − i J u_t)/2` of the +i eigenspace `T^{1,0}`.
fn holomorphic_frame(g: &LieAlgebraPresentation, j: &ComplexStructure) -> Vec<Vec<Scalar>> {
    let pairs = adapted_pairs(g, j);
    let half = Scalar::from(crate::linalg::ratio(1, 2));
    pairs
        .chunks(2)
        .map(|uv| {
            (0..g.dim())
                .map(|k| (uv[0][k].clone() - Scalar::i() * uv[1][k].clone()) * half.clone())
                .collect()
        })
        .collect()
}

/// Complex structure equations for an invariant coframe `φ^1, …, φ^m`:
/// `dφ^k = Σ_{s<t} A^k_{st} φ^s∧φ^t + Σ_{s,t} B^k_{st̄} φ^s∧φ̄^t`.
/// The conjugate equations are derived, never stored.  The absence of a
/// `φ̄∧φ̄` part is integrability in coframe form and is built into the type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexCoframePresentation {
    m: usize,
    /// `(k, s, t) ↦ A^k_{st}` with `s < t`.
    a: BTreeMap<(usize, usize, usize), Scalar>,
    /// `(k, s, t) ↦ B^k_{st̄}`.
    b: BTreeMap<(usize, usize, usize), Scalar>,
}

impl ComplexCoframePresentation {
    /// All structure equations zero (the complex m-torus).
    pub fn new(m: usize) -> Self {
        assert!(m >= 1, "the coframe must have positive dimension");
        ComplexCoframePresentation {
            m,
            a: BTreeMap::new(),
            b: BTreeMap::new(),
        }
    }

    /// Complex dimension.
    pub fn dim(&self) -> usize {
        self.m
    }

    /// Accumulate `c · φ^s∧φ^t` into `dφ^k` (0-based; `s > t` folds over
    /// with a sign; `s == t` must carry `c = 0`).
    pub fn add_holomorphic_term(&mut self, k: usize, s: usize, t: usize, c: Scalar) {
        assert!(k < self.m && s < self.m && t < self.m, "coframe index out of range");
        if c.is_zero() {
            return;
        }
        assert!(s != t, "φ^s ∧ φ^s vanishes");
        let (key, signed) = if s < t { ((k, s, t), c) } else { ((k, t, s), -c) };
        let entry = self.a.entry(key).or_insert_with(Scalar::zero);
        *entry += signed;
        if entry.is_zero() {
            self.a.remove(&key);
        }
    }

    /// Accumulate `c · φ^s∧φ̄^t` into `dφ^k` (0-based).
    pub fn add_mixed_term(&mut self, k: usize, s: usize, t: usize, c: Scalar) {
        assert!(k < self.m && s < self.m && t < self.m, "coframe index out of range");
        if c.is_zero() {
            return;
        }
        let entry = self.b.entry((k, s, t)).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.b.remove(&(k, s, t));
        }
    }

    /// The stored `A^k_{st}` coefficients as `(k, s, t, value)` with
    /// `s < t`, in lexicographic key order (0-based).
    pub fn holomorphic_terms(&self) -> impl Iterator<Item = (usize, usize, usize, &Scalar)> {
        self.a.iter().map(|(&(k, s, t), c)| (k, s, t, c))
    }

    /// The stored `B^k_{st̄}` coefficients as `(k, s, t, value)`, in
    /// lexicographic key order (0-based).
    pub fn mixed_terms(&self) -> impl Iterator<Item = (usize, usize, usize, &Scalar)> {
        self.b.iter().map(|(&(k, s, t), c)| (k, s, t, c))
    }

    /// Differential on the `2m` generators `φ^1..φ^m, φ̄^1..φ̄^m` (in that
    /// order), with `dφ̄^k` obtained by conjugating `dφ^k`.
    pub(crate) fn generator_differential(&self) -> Vec<MultiVector> {
        let m = self.m;
        let mut d_gen = vec![MultiVector::zero(); 2 * m];
        for ((k, s, t), c) in &self.a {
            d_gen[*k].add_term((1u32 << s) | (1u32 << t), c.clone());
            // conj(φ^s∧φ^t) = φ̄^s∧φ̄^t
            d_gen[*k + m].add_term((1u32 << (s + m)) | (1u32 << (t + m)), conj(c));
        }
        for ((k, s, t), c) in &self.b {
            d_gen[*k].add_term((1u32 << s) | (1u32 << (t + m)), c.clone());
            // conj(φ^s∧φ̄^t) = φ̄^s∧φ^t = −φ^t∧φ̄^s
            d_gen[*k + m].add_term((1u32 << t) | (1u32 << (s + m)), -conj(c));
        }
        d_gen
    }
}

/// The basis of `Λ^{p,q}` as monomial masks: unbarred tuple major, barred
/// tuple minor, each in tuple-lex order.
fn bidegree_basis(m: usize, p: usize, q: usize) -> Vec<u32> {
    let is = combinations(m, p);
    let js = combinations(m, q);
    let mut out = Vec::with_capacity(is.len() * js.len());
    for &i in &is {
        for &j in &js {
            out.push(i | (j << m));
        }
    }
    out
}

/// Build the Dolbeault double complex of a coframe presentation, with the
/// conjugation data `σ(φ^I∧φ̄^J) = (−1)^{pq} φ^J∧φ̄^I` attached.
pub fn build_bicomplex_coframe(c: &ComplexCoframePresentation) -> Result<Bicomplex, LieError> {
    let m = c.dim();
    let full = Exterior::new(2 * m);
    let half = Exterior::new(m);
    let d_gen = c.generator_differential();
    let lowmask = (1u32 << m) - 1;
    let dim_pq = |p: usize, q: usize| binomial(m, p) * binomial(m, q);
    let pos = |mask: u32| -> usize {
        let lower = mask & lowmask;
        let upper = mask >> m;
        half.position(lower) * binomial(m, upper.count_ones() as usize) + half.position(upper)
    };

    let mut dims = vec![vec![0usize; m + 1]; m + 1];
    let mut del = vec![vec![QMatrix::zeros(0, 0); m + 1]; m + 1];
    let mut delbar = vec![vec![QMatrix::zeros(0, 0); m + 1]; m + 1];
    for p in 0..=m {
        for q in 0..=m {
            let basis = bidegree_basis(m, p, q);
            dims[p][q] = basis.len();
            let mut dmat = QMatrix::zeros(if p < m { dim_pq(p + 1, q) } else { 0 }, basis.len());
            let mut dbmat = QMatrix::zeros(if q < m { dim_pq(p, q + 1) } else { 0 }, basis.len());
            for (col, &mask) in basis.iter().enumerate() {
                let image = full.derive(&d_gen, &MultiVector::monomial(mask));
                for (tmask, coeff) in &image.terms {
                    let tp = (tmask & lowmask).count_ones() as usize;
                    let tq = (tmask >> m).count_ones() as usize;
                    if tp == p + 1 && tq == q {
                        dmat.set(pos(*tmask), col, coeff.clone());
                    } else if tp == p && tq == q + 1 {
                        dbmat.set(pos(*tmask), col, coeff.clone());
                    } else {
                        unreachable!("structure terms stay within bidegrees (2,0) and (1,1)");
                    }
                }
            }
            del[p][q] = dmat;
            delbar[p][q] = dbmat;
        }
    }
    let b = Bicomplex::from_parts(dims, del, delbar).expect("shapes are consistent by construction");
    let violations = b.validate();
    if let Some(first) = violations.first() {
        return Err(LieError::NotIntegrable {
            detail: format!(
                "the induced differential violates the double-complex axioms \
                 ({} failed check(s); first: {first})",
                violations.len()
            ),
        });
    }
    let mut conj_data = Vec::with_capacity(m + 1);
    for p in 0..=m {
        let mut row = Vec::with_capacity(m + 1);
        for q in 0..=m {
            let sign = if (p * q) % 2 == 1 {
                -Scalar::one()
            } else {
                Scalar::one()
            };
            let mut cmat = QMatrix::zeros(dim_pq(q, p), dim_pq(p, q));
            for (col, &mask) in bidegree_basis(m, p, q).iter().enumerate() {
                let lower = mask & lowmask;
                let upper = mask >> m;
                cmat.set(pos(upper | (lower << m)), col, sign.clone());
            }
            row.push(cmat);
        }
        conj_data.push(row);
    }
    Ok(b
        .with_conjugation(conj_data)
        .expect("derived conjugation data satisfies the axioms"))
}

/// Build the Dolbeault double complex of `(𝔤, J)`: check Jacobi and
/// integrability, extract the structure equations of an adapted coframe,
/// and delegate to [`build_bicomplex_coframe`].
pub fn build_bicomplex(
    g: &LieAlgebraPresentation,
    j: &ComplexStructure,
) -> Result<Bicomplex, LieError> {
    if let Some((i, jx, k)) = g.jacobi_check() {
        return Err(LieError::JacobiViolation { i, j: jx, k });
    }
    let report = nijenhuis(g, j)?;
    if !report.is_integrable {
        let (a, b) = report.first_nonzero().expect("non-integrable has a witness");
        return Err(LieError::NotIntegrable {
            detail: format!("Nijenhuis tensor N(x{}, x{}) ≠ 0", a + 1, b + 1),
        });
    }
    let n = g.dim();
    let m = n / 2;
    let zs = holomorphic_frame(g, j);
    // Frame matrix with columns Z_1..Z_m, Z̄_1..Z̄_m; its inverse reads off
    // coordinates in the dual coframe.
    let frame = QMatrix::from_fn(n, n, |r, c| {
        if c < m {
            zs[c][r].clone()
        } else {
            conj(&zs[c - m][r])
        }
    });
    let inv = frame.inverse().expect("an adapted frame is invertible");
    let mut coframe = ComplexCoframePresentation::new(m);
    for s in 0..m {
        for t in 0..m {
            let zbar_t: Vec<Scalar> = zs[t].iter().map(conj).collect();
            if s < t {
                // A^k_{st} = −φ^k([Z_s, Z_t])
                let x = inv.apply(&g.bracket_vectors(&zs[s], &zs[t]));
                debug_assert!(
                    x[m..].iter().all(Scalar::is_zero),
                    "integrability forces [T^{{1,0}}, T^{{1,0}}] ⊆ T^{{1,0}}"
                );
                for (k, v) in x[..m].iter().enumerate() {
                    coframe.add_holomorphic_term(k, s, t, -v.clone());
                }
            }
            // B^k_{st̄} = −φ^k([Z_s, Z̄_t])
            let y = inv.apply(&g.bracket_vectors(&zs[s], &zbar_t));
            for (k, v) in y[..m].iter().enumerate() {
                coframe.add_mixed_term(k, s, t, -v.clone());
            }
        }
    }
    build_bicomplex_coframe(&coframe)
}

/// A catalog entry: either real structure constants (with an optional
/// complex structure) or a complex coframe presentation.
#[derive(Clone, Debug)]
pub enum BuiltinExample {
    Real {
        algebra: LieAlgebraPresentation,
        complex_structure: Option<ComplexStructure>,
    },
    Coframe(ComplexCoframePresentation),
}

impl BuiltinExample {
    pub fn real_algebra(&self) -> Option<&LieAlgebraPresentation> {
        match self {
            BuiltinExample::Real { algebra, .. } => Some(algebra),
            BuiltinExample::Coframe(_) => None,
        }
    }

    pub fn coframe(&self) -> Option<&ComplexCoframePresentation> {
        match self {
            BuiltinExample::Coframe(c) => Some(c),
            BuiltinExample::Real { .. } => None,
        }
    }

    pub fn has_complex_structure(&self) -> bool {
        !matches!(
            self,
            BuiltinExample::Real {
                complex_structure: None,
                ..
            }
        )
    }

    /// The associated double complex; fails when the presentation carries
    /// no complex structure.
    pub fn bicomplex(&self) -> Result<Bicomplex, LieError> {
        match self {
            BuiltinExample::Real {
                algebra,
                complex_structure: Some(j),
            } => build_bicomplex(algebra, j),
            BuiltinExample::Real {
                complex_structure: None,
                ..
            } => Err(LieError::NotAlmostComplex {
                reason: "the presentation carries no complex structure".into(),
            }),
            BuiltinExample::Coframe(c) => build_bicomplex_coframe(c),
        }
    }
}

fn catalog_names() -> Vec<String> {
    ["heisenberg", "iwasawa", "iwasawa-real", "kodaira-thurston", "torus:m (m = 1..=4)"]
        .into_iter()
        .map(str::to_owned)
        .collect()
}

/// Look up a built-in example by name.
///
/// * `"iwasawa"` — coframe `dφ¹ = dφ² = 0`, `dφ³ = −φ¹∧φ²` (complex
///   Heisenberg group), complex dimension 3;
/// * `"iwasawa-real"` — the same algebra as real structure constants in
///   dimension 6 with the standard pairing `J`;
/// * `"kodaira-thurston"` — `h₃ ⊕ ℝ` with the standard `J`, dimension 4;
/// * `"heisenberg"` — the real Heisenberg algebra, dimension 3, no complex
///   structure;
/// * `"torus:m"` — the abelian coframe of complex dimension `m ∈ 1..=4`.
pub fn builtin(name: &str) -> Result<BuiltinExample, LieError> {
    let unknown = || LieError::UnknownExample {
        name: name.to_owned(),
        catalog: catalog_names(),
    };
    match name {
        "iwasawa" => {
            let mut c = ComplexCoframePresentation::new(3);
            c.add_holomorphic_term(2, 0, 1, -Scalar::one());
            Ok(BuiltinExample::Coframe(c))
        }
        "iwasawa-real" => {
            // Realification of [Z1, Z2] = Z3 over e_{2t-1} = Re-part basis:
            // [e1,e3] = e5, [e1,e4] = e6, [e2,e3] = e6, [e2,e4] = −e5.
            let mut g = LieAlgebraPresentation::new(6);
            g.add_bracket_term(0, 2, 4, Rational::one());
            g.add_bracket_term(0, 3, 5, Rational::one());
            g.add_bracket_term(1, 2, 5, Rational::one());
            g.add_bracket_term(1, 3, 4, -Rational::one());
            Ok(BuiltinExample::Real {
                algebra: g,
                complex_structure: Some(ComplexStructure::standard(3)),
            })
        }
        "kodaira-thurston" => {
            let mut g = LieAlgebraPresentation::new(4);
            g.add_bracket_term(0, 1, 2, Rational::one());
            Ok(BuiltinExample::Real {
                algebra: g,
                complex_structure: Some(ComplexStructure::standard(2)),
            })
        }
        "heisenberg" => {
            let mut g = LieAlgebraPresentation::new(3);
            g.add_bracket_term(0, 1, 2, Rational::one());
            Ok(BuiltinExample::Real {
                algebra: g,
                complex_structure: None,
            })
        }
        _ => match name.strip_prefix("torus:") {
            Some(rest) => match rest.parse::<usize>() {
                Ok(m) if (1..=4).contains(&m) => {
                    Ok(BuiltinExample::Coframe(ComplexCoframePresentation::new(m)))
                }
                _ => Err(unknown()),
            },
            None => Err(unknown()),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{all_tables, dolbeault};

    fn heisenberg() -> LieAlgebraPresentation {
        let mut g = LieAlgebraPresentation::new(3);
        g.add_bracket_term(0, 1, 2, Rational::one());
        g
    }

    #[test]
    fn heisenberg_differential_and_jacobi() {
        let g = heisenberg();
        assert_eq!(g.jacobi_check(), None);
        let total = g.ce_differential().unwrap();
        assert_eq!(total.dims, vec![1, 3, 3, 1]);
        // d x³ = −x¹∧x²: degree-2 basis is (0,1), (0,2), (1,2).
        let d1 = &total.d[1];
        assert_eq!(*d1.get(0, 2), -Scalar::one());
        for (r, c) in [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)] {
            assert!(d1.get(r, c).is_zero());
        }
        for k in 0..total.d.len() - 1 {
            assert!(total.d[k + 1].mul(&total.d[k]).is_zero(), "d² ≠ 0 at {k}");
        }
    }

    #[test]
    fn jacobi_violation_detected() {
        // [x1,x2] = x3 and [x1,x3] = x1 breaks the identity on (x1,x2,x3).
        let mut g = LieAlgebraPresentation::new(3);
        g.add_bracket_term(0, 1, 2, Rational::one());
        g.add_bracket_term(0, 2, 0, Rational::one());
        assert_eq!(g.jacobi_check(), Some((0, 1, 2)));
        let err = g.ce_differential().unwrap_err();
        assert_eq!(err, LieError::JacobiViolation { i: 0, j: 1, k: 2 });
    }

    #[test]
    fn central_series_examples() {
        let abelian = LieAlgebraPresentation::new(4);
        assert_eq!(
            abelian.central_series(),
            CentralSeries { dims: vec![0, 4], step: Some(1) }
        );
        assert_eq!(
            heisenberg().central_series(),
            CentralSeries { dims: vec![0, 1, 3], step: Some(2) }
        );
        // sl2: [h,e] = 2e, [h,f] = −2f, [e,f] = h has trivial center.
        let mut sl2 = LieAlgebraPresentation::new(3);
        sl2.add_bracket_term(0, 1, 1, crate::linalg::ratio(2, 1));
        sl2.add_bracket_term(0, 2, 2, crate::linalg::ratio(-2, 1));
        sl2.add_bracket_term(1, 2, 0, Rational::one());
        assert_eq!(sl2.jacobi_check(), None);
        let series = sl2.central_series();
        assert_eq!(series, CentralSeries { dims: vec![0], step: None });
        assert!(!series.is_nilpotent());
        // Kodaira–Thurston: h₃ ⊕ ℝ.
        let kt = builtin("kodaira-thurston").unwrap();
        assert_eq!(
            kt.real_algebra().unwrap().central_series(),
            CentralSeries { dims: vec![0, 2, 4], step: Some(2) }
        );
    }

    #[test]
    fn complex_structure_checks() {
        assert!(ComplexStructure::new(ComplexStructure::standard(2).matrix().clone()).is_ok());
        let id = QMatrix::identity(2);
        assert!(matches!(
            ComplexStructure::new(id),
            Err(LieError::NotAlmostComplex { .. })
        ));
        let mut complex_entries = QMatrix::zeros(2, 2);
        complex_entries.set(0, 1, -Scalar::i());
        complex_entries.set(1, 0, Scalar::i());
        assert!(matches!(
            ComplexStructure::new(complex_entries),
            Err(LieError::NotAlmostComplex { .. })
        ));
    }

    #[test]
    fn nijenhuis_integrability_verdicts() {
        let abelian = LieAlgebraPresentation::new(4);
        let report = nijenhuis(&abelian, &ComplexStructure::standard(2)).unwrap();
        assert!(report.is_integrable);
        assert!(report.first_nonzero().is_none());

        let kt = builtin("kodaira-thurston").unwrap();
        let report = nijenhuis(
            kt.real_algebra().unwrap(),
            &ComplexStructure::standard(2),
        )
        .unwrap();
        assert!(report.is_integrable);

        // Pair the real directions of the Iwasawa algebra across the complex
        // coordinates: J e1 = e2, J e3 = e5, J e4 = e6.  This J squares to
        // −1 but fails integrability, first at the pair (x1, x3).
        let iw = builtin("iwasawa-real").unwrap();
        let mut jm = QMatrix::zeros(6, 6);
        for (src, dst) in [(0, 1), (2, 4), (3, 5)] {
            jm.set(dst, src, Scalar::one());
            jm.set(src, dst, -Scalar::one());
        }
        let j = ComplexStructure::new(jm).unwrap();
        let report = nijenhuis(iw.real_algebra().unwrap(), &j).unwrap();
        assert!(!report.is_integrable);
        assert_eq!(report.first_nonzero(), Some((0, 2)));
        let value = &report
            .values
            .iter()
            .find(|(pair, _)| *pair == (0, 2))
            .unwrap()
            .1;
        let expected: Vec<Rational> = [0i64, 0, 0, -1, 1, 0]
            .iter()
            .map(|&v| Rational::from_integer(v.into()))
            .collect();
        assert_eq!(value, &expected);

        let err = build_bicomplex(iw.real_algebra().unwrap(), &j).unwrap_err();
        assert!(matches!(err, LieError::NotIntegrable { .. }));
    }

    #[test]
    fn iwasawa_coframe_builds_the_expected_complex() {
        let b = builtin("iwasawa").unwrap().bicomplex().unwrap();
        for p in 0..=3 {
            for q in 0..=3 {
                assert_eq!(b.dim(p, q), binomial(3, p) * binomial(3, q));
            }
        }
        assert!(b.has_conjugation());
        // dφ³ = −φ¹∧φ² sits in del at (1,0): column φ³, row φ¹∧φ².
        let d10 = b.del(1, 0);
        assert_eq!(*d10.get(0, 2), -Scalar::one());
        assert!(b.delbar(1, 0).is_zero());
        assert!(b.validate().is_empty());
    }

    #[test]
    fn torus_cohomology_equals_dimensions() {
        let b = builtin("torus:2").unwrap().bicomplex().unwrap();
        let tables = all_tables(&b).unwrap();
        for p in 0..=2 {
            for q in 0..=2 {
                let d = b.dim(p, q);
                assert_eq!(tables.dolbeault.bidegree(p, q), d);
                assert_eq!(tables.conj_dolbeault.bidegree(p, q), d);
                assert_eq!(tables.bott_chern.bidegree(p, q), d);
                assert_eq!(tables.aeppli.bidegree(p, q), d);
            }
        }
        assert_eq!(tables.de_rham.totals(), &[1, 4, 6, 4, 1]);
    }

    #[test]
    fn kodaira_thurston_builds() {
        let b = builtin("kodaira-thurston").unwrap().bicomplex().unwrap();
        for p in 0..=2 {
            for q in 0..=2 {
                assert_eq!(b.dim(p, q), binomial(2, p) * binomial(2, q));
            }
        }
        assert!(b.has_conjugation());
        let dolb = dolbeault(&b).unwrap();
        assert_eq!(dolb.bidegree(0, 1), 2);
    }

    #[test]
    fn iwasawa_construction_paths_agree() {
        let from_coframe = builtin("iwasawa").unwrap().bicomplex().unwrap();
        let from_real = builtin("iwasawa-real").unwrap().bicomplex().unwrap();
        for p in 0..=3 {
            for q in 0..=3 {
                assert_eq!(from_coframe.dim(p, q), from_real.dim(p, q));
            }
        }
        let t1 = all_tables(&from_coframe).unwrap();
        let t2 = all_tables(&from_real).unwrap();
        assert_eq!(t1.de_rham, t2.de_rham);
        assert_eq!(t1.dolbeault, t2.dolbeault);
        assert_eq!(t1.conj_dolbeault, t2.conj_dolbeault);
        assert_eq!(t1.bott_chern, t2.bott_chern);
        assert_eq!(t1.aeppli, t2.aeppli);
    }

    #[test]
    fn builtin_catalog_is_reported() {
        let err = builtin("nope").unwrap_err();
        match err {
            LieError::UnknownExample { name, catalog } => {
                assert_eq!(name, "nope");
                assert!(catalog.iter().any(|c| c == "iwasawa"));
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert!(builtin("torus:0").is_err());
        assert!(builtin("torus:9").is_err());
        assert!(builtin("torus:3").is_ok());
        let heis = builtin("heisenberg").unwrap();
        assert!(!heis.has_complex_structure());
        assert!(matches!(
            heis.bicomplex(),
            Err(LieError::NotAlmostComplex { .. })
        ));
    }
}
