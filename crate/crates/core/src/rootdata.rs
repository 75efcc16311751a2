//! Exact combinatorics of the root datum of GL(n) relative to the block
//! parabolic `P_0` with Levi `GL(d)^r`.
//!
//! `a_T` is modelled as `Q^n` with the standard inner product. A standard
//! parabolic `P ⊇ P_0` is an ordered composition of `r`; its blocks have sizes
//! `d * r_i` in `R^n` coordinates and `a_P` is the space of vectors constant on
//! each block. Roots and coroots are both represented by their Riesz vectors,
//! so every pairing below is a rational dot product.

use std::fmt;
use std::ops::Range;

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::linalg::{self, Matrix};

/// `a_T ≅ R^n` with the usual inner product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AmbientSpace {
    pub n: usize,
}

impl AmbientSpace {
    pub fn zero(&self) -> LinearForm {
        LinearForm::zeros(self.n)
    }
}

/// A rational vector of `a_T`, used both for points `λ` and for (co)roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    coords: Vec<Rational>,
}

impl LinearForm {
    pub fn new(coords: Vec<Rational>) -> Self {
        LinearForm { coords }
    }

    pub fn zeros(n: usize) -> Self {
        LinearForm { coords: vec![Rational::new(); n] }
    }

    pub fn from_integers(v: &[i64]) -> Self {
        LinearForm::new(v.iter().map(|&x| Rational::from(x)).collect())
    }

    pub fn from_ratios(v: &[(i64, i64)]) -> Self {
        LinearForm::new(v.iter().map(|&(p, q)| Rational::from((p, q))).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dot(&self, other: &LinearForm) -> Rational {
        assert_eq!(self.dim(), other.dim(), "pairing of vectors of different length");
        let mut acc = Rational::new();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            if *a != 0 && *b != 0 {
                acc += Rational::from(a * b);
            }
        }
        acc
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        LinearForm::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| Rational::from(a + b))
                .collect(),
        )
    }

    pub fn sub(&self, other: &LinearForm) -> LinearForm {
        LinearForm::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| Rational::from(a - b))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> LinearForm {
        LinearForm::new(self.coords.iter().map(|a| Rational::from(a * c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == 0)
    }

    pub fn sum(&self) -> Rational {
        self.coords.iter().fold(Rational::new(), |acc, c| acc + c)
    }

    /// Constant on each of the given coordinate ranges.
    pub fn is_constant_on(&self, blocks: &[Range<usize>]) -> bool {
        blocks
            .iter()
            .all(|b| self.coords[b.clone()].iter().all(|c| *c == self.coords[b.start]))
    }

    /// Coordinate sum zero on each of the given ranges.
    pub fn sums_to_zero_on(&self, blocks: &[Range<usize>]) -> bool {
        blocks.iter().all(|b| {
            self.coords[b.clone()]
                .iter()
                .fold(Rational::new(), |acc, c| acc + c)
                == 0
        })
    }

    /// Replace every coordinate by the mean over its block: the orthogonal
    /// projection onto the block-constant vectors.
    pub fn block_means(&self, blocks: &[Range<usize>]) -> LinearForm {
        let mut out = self.coords.clone();
        for b in blocks {
            let s = self.coords[b.clone()]
                .iter()
                .fold(Rational::new(), |acc, c| acc + c);
            let mean = s / Rational::from(b.len() as u64);
            for c in &mut out[b.clone()] {
                *c = mean.clone();
            }
        }
        LinearForm::new(out)
    }

    pub fn indicator(n: usize, block: &Range<usize>, weight: &Rational) -> LinearForm {
        let mut v = LinearForm::zeros(n);
        for i in block.clone() {
            v.coords[i] = weight.clone();
        }
        v
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A standard parabolic containing `P_0`, as a composition of `r` with block size `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockProfile {
    d: usize,
    composition: Vec<usize>,
}

impl BlockProfile {
    pub fn new(d: usize, composition: Vec<usize>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("block size d must be positive".into()));
        }
        if composition.is_empty() || composition.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "composition {composition:?} must be a nonempty list of positive integers"
            )));
        }
        Ok(BlockProfile { d, composition })
    }

    /// `P = G`.
    pub fn group(d: usize, r: usize) -> Self {
        BlockProfile { d, composition: vec![r] }
    }

    /// `P = P_0`.
    pub fn minimal(d: usize, r: usize) -> Self {
        BlockProfile { d, composition: vec![1; r] }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.composition.iter().sum()
    }

    pub fn n(&self) -> usize {
        self.d * self.r()
    }

    pub fn composition(&self) -> &[usize] {
        &self.composition
    }

    /// Number of blocks `k`; `dim a_P = k`, `|Δ_P| = k - 1`.
    pub fn len(&self) -> usize {
        self.composition.len()
    }

    pub fn is_empty(&self) -> bool {
        self.composition.is_empty()
    }

    pub fn ambient(&self) -> AmbientSpace {
        AmbientSpace { n: self.n() }
    }

    /// Coordinate ranges of the blocks in `R^n`.
    pub fn blocks(&self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.composition
            .iter()
            .map(|&ri| {
                let b = start..start + ri * self.d;
                start += ri * self.d;
                b
            })
            .collect()
    }

    /// For each `P_0`-block index, the index of the block of `self` containing it.
    pub fn block_of_unit(&self) -> Vec<usize> {
        self.composition
            .iter()
            .enumerate()
            .flat_map(|(i, &ri)| std::iter::repeat_n(i, ri))
            .collect()
    }

    /// `self ⊆ other`, i.e. `self`'s composition refines `other`'s.
    pub fn refines(&self, other: &BlockProfile) -> bool {
        if self.d != other.d || self.r() != other.r() {
            return false;
        }
        let mut it = self.composition.iter();
        for &target in &other.composition {
            let mut acc = 0;
            while acc < target {
                match it.next() {
                    Some(&x) => acc += x,
                    None => return false,
                }
            }
            if acc != target {
                return false;
            }
        }
        it.next().is_none()
    }

    /// `dim a_self^other` for `self ⊆ other`.
    pub fn relative_rank(&self, other: &BlockProfile) -> usize {
        self.len() - other.len()
    }

    /// The profile with the composition sorted in decreasing order.
    pub fn sorted_descending(&self) -> BlockProfile {
        let mut c = self.composition.clone();
        c.sort_unstable_by(|a, b| b.cmp(a));
        BlockProfile { d: self.d, composition: c }
    }
}

impl fmt::Display for BlockProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} (", self.d)?;
        for (i, c) in self.composition.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Compositions of `r` in reverse-lexicographic order.
fn compositions(r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=r).rev() {
        for mut rest in compositions(r - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All `2^{r-1}` standard parabolics `P_0 ⊆ P ⊆ G`.
pub fn enumerate_parabolics(d: usize, r: usize) -> Vec<BlockProfile> {
    assert!(d >= 1 && r >= 1, "d and r must be positive");
    compositions(r)
        .into_iter()
        .map(|composition| BlockProfile { d, composition })
        .collect()
}

/// All `Q` with `fine ⊆ Q ⊆ coarse`, in reverse-lexicographic order.
pub fn parabolics_between(fine: &BlockProfile, coarse: &BlockProfile) -> Result<Vec<BlockProfile>> {
    ensure_refines(fine, coarse)?;
    // Each Q is obtained by merging runs of consecutive fine blocks that lie
    // in a common coarse block; enumerate the cut patterns.
    let unit_of = {
        let mut v = Vec::new();
        for (i, &c) in coarse.composition.iter().enumerate() {
            let mut acc = 0;
            while acc < c {
                v.push(i);
                acc += 1;
            }
        }
        v
    };
    // coarse block index of every fine block
    let mut owner = Vec::new();
    let mut start = 0;
    for &f in &fine.composition {
        owner.push(unit_of[start]);
        start += f;
    }
    let k = fine.len();
    let free: Vec<usize> = (0..k.saturating_sub(1)).filter(|&i| owner[i] == owner[i + 1]).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << free.len()) {
        let mut merge = vec![false; k.saturating_sub(1)];
        for (bit, &i) in free.iter().enumerate() {
            merge[i] = mask >> bit & 1 == 1;
        }
        let mut comp = Vec::new();
        let mut acc = fine.composition[0];
        for i in 0..k - 1 {
            if merge[i] {
                acc += fine.composition[i + 1];
            } else {
                comp.push(acc);
                acc = fine.composition[i + 1];
            }
        }
        comp.push(acc);
        out.push(BlockProfile { d: fine.d, composition: comp });
    }
    out.sort_by(|a, b| b.composition.cmp(&a.composition));
    Ok(out)
}

fn ensure_refines(fine: &BlockProfile, coarse: &BlockProfile) -> Result<()> {
    if fine.refines(coarse) {
        Ok(())
    } else {
        Err(Error::NotRefinement {
            fine: fine.composition.clone(),
            coarse: coarse.composition.clone(),
        })
    }
}

/// Simple roots, coroots and their dual bases for `P ⊆ Q`, indexed by the
/// pairs of adjacent `P`-blocks lying in a common `Q`-block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleData {
    /// Index `i` of the left block of each adjacent pair `(i, i+1)`.
    pub indices: Vec<usize>,
    pub roots: Vec<LinearForm>,
    pub coroots: Vec<LinearForm>,
    /// Basis of `a_P^{Q,*}` dual to the coroots.
    pub weights: Vec<LinearForm>,
    /// Basis of `a_P^Q` dual to the roots.
    pub coweights: Vec<LinearForm>,
}

impl SimpleData {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

/// Cartan-type pairing matrix `A[i][j] = <x_i, y_j>`.
fn pairing_matrix(xs: &[LinearForm], ys: &[LinearForm]) -> Matrix {
    xs.iter().map(|x| ys.iter().map(|y| x.dot(y)).collect()).collect()
}

/// Rows of `m` used as coefficients on `basis`.
fn combine(m: &Matrix, basis: &[LinearForm], n: usize) -> Vec<LinearForm> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(basis)
                .fold(LinearForm::zeros(n), |acc, (c, v)| acc.add(&v.scale(c)))
        })
        .collect()
}

/// Dual basis of `vs` inside their span: `<dual_i, ws_j> = δ_ij` where `ws`
/// spans the same space.
pub(crate) fn dual_basis(span: &[LinearForm], against: &[LinearForm], n: usize) -> Result<Vec<LinearForm>> {
    if span.is_empty() {
        return Ok(Vec::new());
    }
    // dual_β = Σ_γ C[β][γ] span_γ, need Σ_γ C[β][γ] <span_γ, against_α> = δ.
    let a = pairing_matrix(span, against);
    let inv = linalg::inverse(&a).ok_or(Error::DependentVectors)?;
    // C = A^{-1} with A[γ][α]: C·A = I means C = A^{-1}.
    Ok(combine(&inv, span, n))
}

/// `Δ_P^Q`, `Δ_P^{Q,∨}` and the dual bases, exact.
pub fn simple_data(p: &BlockProfile, q: &BlockProfile) -> Result<SimpleData> {
    ensure_refines(p, q)?;
    let n = p.n();
    let blocks = p.blocks();
    // owner of each P-block in Q
    let q_blocks = q.blocks();
    let owner: Vec<usize> = blocks
        .iter()
        .map(|b| q_blocks.iter().position(|qb| qb.contains(&b.start)).expect("refinement"))
        .collect();
    let mut indices = Vec::new();
    let mut coroots = Vec::new();
    for i in 0..blocks.len().saturating_sub(1) {
        if owner[i] != owner[i + 1] {
            continue;
        }
        let left = LinearForm::indicator(n, &blocks[i], &Rational::from((1, blocks[i].len() as u64)));
        let right = LinearForm::indicator(n, &blocks[i + 1], &Rational::from((1, blocks[i + 1].len() as u64)));
        indices.push(i);
        coroots.push(left.sub(&right));
    }
    // The root α_i, as a linear form on a_P, is (block mean i) - (block mean i+1);
    // its Riesz vector coincides with the projected coroot.
    let roots = coroots.clone();
    let weights = dual_basis(&roots, &coroots, n)?;
    let coweights = dual_basis(&coroots, &roots, n)?;
    Ok(SimpleData { indices, roots, coroots, weights, coweights })
}

/// Covolume of the lattice spanned by linearly independent vectors, kept as
/// the exact Gram determinant; the square root is taken on demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covolume {
    gram_det: Rational,
}

impl Covolume {
    pub fn gram_determinant(&self) -> &Rational {
        &self.gram_det
    }

    pub fn value(&self, prec: u32) -> Float {
        Float::with_val(prec, &self.gram_det).sqrt()
    }

    pub fn recip(&self, prec: u32) -> Float {
        self.value(prec).recip()
    }

    /// Product of two covolumes, still exact.
    pub fn times(&self, other: &Covolume) -> Covolume {
        Covolume { gram_det: Rational::from(&self.gram_det * &other.gram_det) }
    }
}

/// `vol(span / Z(vectors)) = sqrt(det Gram)`; the empty lattice has covolume 1.
pub fn covolume(vectors: &[LinearForm]) -> Result<Covolume> {
    let gram = pairing_matrix(vectors, vectors);
    let det = linalg::determinant(&gram);
    if det == 0 {
        return Err(Error::DependentVectors);
    }
    Ok(Covolume { gram_det: det })
}

/// `covolume^{-1} · Π <λ, form>`.
#[derive(Clone, Debug)]
pub struct ThetaFactor {
    pub covolume: Covolume,
    pub forms: Vec<LinearForm>,
}

impl ThetaFactor {
    /// `θ_P^Q`: products over the coroots `Δ_P^{Q,∨}`.
    pub fn theta(p: &BlockProfile, q: &BlockProfile) -> Result<Self> {
        let sd = simple_data(p, q)?;
        Ok(ThetaFactor { covolume: covolume(&sd.coroots)?, forms: sd.coroots })
    }

    /// `θ̂_P^Q`: products over the coweights `Δ̂_P^{Q,∨}`.
    pub fn hat_theta(p: &BlockProfile, q: &BlockProfile) -> Result<Self> {
        let sd = simple_data(p, q)?;
        Ok(ThetaFactor { covolume: covolume(&sd.coweights)?, forms: sd.coweights })
    }

    /// Build directly from a list of independent forms.
    pub fn from_forms(forms: Vec<LinearForm>) -> Result<Self> {
        Ok(ThetaFactor { covolume: covolume(&forms)?, forms })
    }

    /// Homogeneous degree.
    pub fn degree(&self) -> usize {
        self.forms.len()
    }

    /// `Π <λ, form>` (exact).
    pub fn pairing_product(&self, lambda: &LinearForm) -> Rational {
        self.forms.iter().fold(Rational::from(1), |acc, f| acc * lambda.dot(f))
    }

    pub fn pairings(&self, lambda: &LinearForm) -> Vec<Rational> {
        self.forms.iter().map(|f| lambda.dot(f)).collect()
    }

    pub fn eval(&self, lambda: &LinearForm, prec: u32) -> Float {
        let p = Float::with_val(prec, &self.pairing_product(lambda));
        p / self.covolume.value(prec)
    }

    /// `t -> θ(t λ0) = θ(λ0) t^deg`, known up to `t^end`.
    pub fn on_line(&self, lambda0: &LinearForm, end: i32, prec: u32) -> Jet {
        Jet::monomial(self.eval(lambda0, prec), self.degree() as i32, end, prec)
    }
}

/// `ε_P^G = (-1)^{dim a_P^G}`.
pub fn epsilon(p: &BlockProfile) -> i32 {
    relative_sign(p, &BlockProfile::group(p.d, p.r()))
}

/// `ε_P^Q = (-1)^{dim a_P^Q}`.
pub fn relative_sign(p: &BlockProfile, q: &BlockProfile) -> i32 {
    if p.relative_rank(q).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Orthogonal decomposition `λ = λ^P + λ_P` with `λ_P ∈ a_P` (block means)
/// and `λ^P` of mean zero on each `P`-block.
pub fn project(lambda: &LinearForm, p: &BlockProfile) -> (LinearForm, LinearForm) {
    let lower = lambda.block_means(&p.blocks());
    let upper = lambda.sub(&lower);
    (upper, lower)
}

/// Gram determinant of the full set of simple coroots of `GL(n)` relative to
/// the Borel, i.e. of `e_i - e_{i+1}`.
pub fn borel_coroot_covolume(n: usize) -> Result<Covolume> {
    let p = BlockProfile::minimal(1, n);
    let g = BlockProfile::group(1, n);
    covolume(&simple_data(&p, &g)?.coroots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prof(d: usize, c: &[usize]) -> BlockProfile {
        BlockProfile::new(d, c.to_vec()).unwrap()
    }

    #[test]
    fn parabolics_of_gl6_blocks() {
        let ps = enumerate_parabolics(2, 3);
        let comps: Vec<_> = ps.iter().map(|p| p.composition().to_vec()).collect();
        assert_eq!(comps, vec![vec![3], vec![2, 1], vec![1, 2], vec![1, 1, 1]]);
        assert_eq!(enumerate_parabolics(1, 1).len(), 1);
        assert_eq!(enumerate_parabolics(1, 4).len(), 8);
    }

    #[test]
    fn refinement() {
        assert!(prof(1, &[1, 1, 2]).refines(&prof(1, &[2, 2])));
        assert!(!prof(1, &[1, 2, 1]).refines(&prof(1, &[2, 2])));
        assert!(prof(2, &[3]).refines(&prof(2, &[3])));
        assert!(simple_data(&prof(1, &[2, 2]), &prof(1, &[1, 1, 2])).is_err());
    }

    #[test]
    fn gl2_coroot_and_coweight() {
        let sd = simple_data(&prof(1, &[1, 1]), &prof(1, &[2])).unwrap();
        assert_eq!(sd.coroots, vec![LinearForm::from_integers(&[1, -1])]);
        assert_eq!(sd.coweights, vec![LinearForm::from_ratios(&[(1, 2), (-1, 2)])]);
    }

    #[test]
    fn equal_profiles_have_no_simple_data() {
        let p = prof(2, &[2, 1]);
        let sd = simple_data(&p, &p).unwrap();
        assert!(sd.roots.is_empty() && sd.coroots.is_empty() && sd.weights.is_empty() && sd.coweights.is_empty());
    }

    #[test]
    fn duality_in_gl6() {
        let sd = simple_data(&prof(2, &[1, 1, 1]), &prof(2, &[3])).unwrap();
        for (b, w) in sd.weights.iter().enumerate() {
            for (a, c) in sd.coroots.iter().enumerate() {
                assert_eq!(w.dot(c), Rational::from(u32::from(a == b)));
            }
        }
        for (b, w) in sd.coweights.iter().enumerate() {
            for (a, c) in sd.roots.iter().enumerate() {
                assert_eq!(w.dot(c), Rational::from(u32::from(a == b)));
            }
        }
    }

    #[test]
    fn covolume_of_single_root() {
        let c = covolume(&[LinearForm::from_integers(&[1, -1])]).unwrap();
        assert_eq!(*c.gram_determinant(), 2);
        assert!((c.value(64).to_f64() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(*covolume(&[]).unwrap().gram_determinant(), 1);
        assert!(covolume(&[LinearForm::from_integers(&[1, -1]), LinearForm::from_integers(&[2, -2])]).is_err());
    }

    #[test]
    fn theta_gl2() {
        let th = ThetaFactor::theta(&prof(1, &[1, 1]), &prof(1, &[2])).unwrap();
        let s = Rational::from((3, 7));
        let lambda = LinearForm::from_integers(&[1, -1]).scale(&s);
        let v = th.eval(&lambda, 128).to_f64();
        assert!((v - 2f64.sqrt() * 3.0 / 7.0).abs() < 1e-15);
        let g = ThetaFactor::theta(&prof(1, &[2]), &prof(1, &[2])).unwrap();
        assert_eq!(g.eval(&lambda, 64).to_f64(), 1.0);
        let hat = ThetaFactor::hat_theta(&prof(1, &[1, 1]), &prof(1, &[1, 1])).unwrap();
        assert_eq!(hat.eval(&lambda, 64).to_f64(), 1.0);
    }

    #[test]
    fn signs() {
        assert_eq!(epsilon(&prof(1, &[2])), 1);
        assert_eq!(epsilon(&prof(1, &[1, 1])), -1);
        assert_eq!(relative_sign(&prof(1, &[1, 1, 1]), &prof(1, &[1, 2])), -1);
    }

    #[test]
    fn projection_gl3() {
        let lambda = LinearForm::from_integers(&[1, 0, -1]);
        let (upper, lower) = project(&lambda, &prof(1, &[2, 1]));
        assert_eq!(lower, LinearForm::from_ratios(&[(1, 2), (1, 2), (-1, 1)]));
        assert_eq!(upper, LinearForm::from_ratios(&[(1, 2), (-1, 2), (0, 1)]));
        assert_eq!(upper.add(&lower), lambda);
        assert_eq!(upper.dot(&lower), 0);
        let (u, l) = project(&lambda, &prof(1, &[3]));
        assert_eq!(u, lambda);
        assert!(l.is_zero());
    }

    #[test]
    fn parabolics_between_levels() {
        let fine = BlockProfile::minimal(1, 4);
        let coarse = prof(1, &[2, 2]);
        let qs: Vec<_> = parabolics_between(&fine, &coarse)
            .unwrap()
            .into_iter()
            .map(|p| p.composition().to_vec())
            .collect();
        assert_eq!(qs, vec![vec![2, 2], vec![2, 1, 1], vec![1, 1, 2], vec![1, 1, 1, 1]]);
    }
}
