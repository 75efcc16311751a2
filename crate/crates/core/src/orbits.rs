//! Nilpotent orbits of `gl(n)` by Jordan type, orbit induction from Levi
//! subalgebras, and the classes of pairs `(L, o')` inducing the orbit `(r^d)`.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rootdata::BlockProfile;

/// Weakly decreasing list of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Sorts and drops zero parts.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// The zero orbit of `gl(m)`: `(1^m)`.
    pub fn zero(m: usize) -> Self {
        Partition { parts: vec![1; m] }
    }

    /// `(r^d)`.
    pub fn rectangle(r: usize, d: usize) -> Self {
        Partition { parts: vec![r; d] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn is_zero_orbit(&self) -> bool {
        self.parts.iter().all(|&p| p == 1)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n`, in decreasing lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for p in (1..=max.min(n)).rev() {
            prefix.push(p);
            go(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// A Levi `L = GL(n_1) x ... x GL(n_k)` up to conjugacy with one orbit per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LeviDatum {
    pub parts: Vec<usize>,
    pub orbits: Vec<Partition>,
}

impl LeviDatum {
    pub fn new(parts: Vec<usize>, orbits: Vec<Partition>) -> Result<Self> {
        if parts.len() != orbits.len() || parts.is_empty() {
            return Err(Error::InvalidArgument("one orbit per Levi factor is required".into()));
        }
        for (p, o) in parts.iter().zip(&orbits) {
            if *p == 0 || o.size() != *p {
                return Err(Error::InvalidArgument(format!("orbit {o} is not a partition of {p}")));
            }
        }
        Ok(LeviDatum { parts, orbits })
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Representative with the factors sorted by decreasing size, then orbit.
    pub fn canonical(&self) -> LeviDatum {
        let mut pairs: Vec<_> = self.parts.iter().cloned().zip(self.orbits.iter().cloned()).collect();
        pairs.sort_by(|a, b| b.cmp(a));
        let (parts, orbits) = pairs.into_iter().unzip();
        LeviDatum { parts, orbits }
    }

    /// Sizes in decreasing order.
    pub fn sorted_parts(&self) -> Vec<usize> {
        let mut p = self.parts.clone();
        p.sort_unstable_by(|a, b| b.cmp(a));
        p
    }

    /// `|W^L| = Π n_i!`.
    pub fn weyl_order(&self) -> Integer {
        self.parts.iter().fold(Integer::from(1), |acc, &p| acc * factorial(p))
    }

    /// The standard block profile of `L ⊇ M_0 = GL(d)^r` (sizes sorted
    /// decreasingly), if every factor is a multiple of `d`.
    pub fn block_profile(&self, d: usize) -> Option<BlockProfile> {
        if self.parts.iter().any(|p| p % d != 0) {
            return None;
        }
        BlockProfile::new(d, self.sorted_parts().iter().map(|p| p / d).collect()).ok()
    }
}

impl fmt::Display for LeviDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, o)) in self.parts.iter().zip(&self.orbits).enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "GL({p}){o}")?;
        }
        Ok(())
    }
}

pub fn factorial(n: usize) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

/// `X_P`: on each block of size `r_i d`, identity `d x d` blocks on the block
/// super-diagonal.
pub fn block_nilpotent_matrix(profile: &BlockProfile) -> Vec<Vec<i64>> {
    let n = profile.n();
    let d = profile.d();
    let mut m = vec![vec![0i64; n]; n];
    for block in profile.blocks() {
        let len = block.len();
        for i in 0..len.saturating_sub(d) {
            m[block.start + i][block.start + i + d] = 1;
        }
    }
    m
}

/// Jordan type of `X_P`: each `r_i` repeated `d` times.
pub fn jordan_type(profile: &BlockProfile) -> Partition {
    Partition::new(
        profile
            .composition()
            .iter()
            .flat_map(|&ri| std::iter::repeat_n(ri, profile.d()))
            .collect(),
    )
}

/// `I_L^G`: zero-pad the orbit partitions and add them componentwise.
pub fn induce(levi: &LeviDatum) -> Partition {
    let width = levi.orbits.iter().map(|o| o.parts.len()).max().unwrap_or(0);
    let mut sum = vec![0usize; width];
    for o in &levi.orbits {
        for (i, p) in o.parts.iter().enumerate() {
            sum[i] += p;
        }
    }
    Partition::new(sum)
}

/// Ranks of `m^0, m^1, ...` until the power vanishes.
fn rank_sequence(m: &[Vec<i64>]) -> Result<Vec<usize>> {
    let n = m.len();
    let a = linalg::from_integers(m);
    let mut power = linalg::from_integers(&(0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect::<Vec<_>>());
    let mut ranks = vec![n];
    for _ in 0..n {
        power = linalg::multiply(&power, &a);
        let rk = linalg::rank(&power);
        ranks.push(rk);
        if rk == 0 {
            return Ok(ranks);
        }
    }
    Err(Error::NotNilpotent)
}

fn partition_from_ranks(ranks: &[usize]) -> Partition {
    // number of parts >= j is ranks[j-1] - ranks[j]
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut parts = Vec::new();
    for j in 1..=at_least.len() {
        let next = at_least.get(j).copied().unwrap_or(0);
        parts.extend(std::iter::repeat_n(j, at_least[j - 1] - next));
    }
    Partition::new(parts)
}

/// Jordan type of a nilpotent integer matrix from the ranks of its powers.
pub fn rank_powers_oracle(m: &[Vec<i64>]) -> Result<Partition> {
    if m.iter().any(|row| row.len() != m.len()) {
        return Err(Error::InvalidArgument("matrix must be square".into()));
    }
    if m.is_empty() {
        return Ok(Partition::new(Vec::new()));
    }
    Ok(partition_from_ranks(&rank_sequence(m)?))
}

/// Jordan matrix of the given type.
pub fn jordan_matrix(p: &Partition) -> Vec<Vec<i64>> {
    let n = p.size();
    let mut m = vec![vec![0i64; n]; n];
    let mut start = 0;
    for &part in &p.parts {
        for i in 0..part - 1 {
            m[start + i][start + i + 1] = 1;
        }
        start += part;
    }
    m
}

/// Jordan type of a generic element of `o' + n_P`, where `P` is the block upper
/// triangular parabolic with Levi `L`: the ranks of powers of several random
/// integer perturbations in the nilradical are maximized entrywise.
pub fn induction_oracle(levi: &LeviDatum, seed: u64, draws: usize) -> Result<Partition> {
    let n = levi.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut base = vec![vec![0i64; n]; n];
    let mut starts = Vec::new();
    let mut start = 0;
    for (p, o) in levi.parts.iter().zip(&levi.orbits) {
        let y = jordan_matrix(o);
        for i in 0..*p {
            for j in 0..*p {
                base[start + i][start + j] = y[i][j];
            }
        }
        starts.push(start);
        start += p;
    }
    let block_of = |i: usize| starts.iter().rposition(|&s| s <= i).expect("index in range");
    let mut best = vec![0usize; n + 1];
    for _ in 0..draws.max(1) {
        let mut m = base.clone();
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                if block_of(j) > block_of(i) {
                    *x = rng.gen_range(-999..=999);
                }
            }
        }
        let ranks = rank_sequence(&m)?;
        for (k, r) in ranks.iter().enumerate() {
            best[k] = best[k].max(*r);
        }
    }
    let len = best.iter().position(|&r| r == 0).map_or(best.len(), |i| i + 1);
    Ok(partition_from_ranks(&best[..len]))
}

/// One conjugacy class of pairs `(L, o')` with `I_L^G(o') = (r^d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducingClass {
    pub levi: LeviDatum,
    /// `|W^L| / |W|`.
    pub weyl_weight: Rational,
    /// Number of standard Levis (orderings of the factor sizes) in the class.
    pub standard_levi_count: usize,
    /// Number of Levis containing `T` in the class: `|W| / |N_W(L)|`.
    pub conjugate_count: Integer,
}

fn multiplicities(parts: &[usize]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for &p in parts {
        *m.entry(p).or_insert(0) += 1;
    }
    m
}

impl InducingClass {
    fn from_levi(levi: LeviDatum) -> Self {
        let n = levi.n();
        let weyl_weight = Rational::from((levi.weyl_order(), factorial(n)));
        let sym = multiplicities(&levi.parts)
            .values()
            .fold(Integer::from(1), |acc, &m| acc * factorial(m));
        let standard_levi_count = (factorial(levi.parts.len()) / sym.clone())
            .to_usize()
            .expect("small count");
        let conjugate_count = factorial(n) / (levi.weyl_order() * sym);
        InducingClass { levi, weyl_weight, standard_levi_count, conjugate_count }
    }
}

/// All classes of pairs inducing `(r^d)`, found by exhaustive search over
/// Levi size multisets and orbit tuples. Ordered by the decreasing-sorted
/// Levi sizes, ascending lexicographically (so `M_0` first and `G` last).
pub fn enumerate_inducing_pairs(d: usize, r: usize) -> Result<Vec<InducingClass>> {
    if d == 0 || r == 0 {
        return Err(Error::InvalidArgument("d and r must be positive".into()));
    }
    let n = d * r;
    let target = Partition::rectangle(r, d);
    let mut found = Vec::new();
    for levi_parts in partitions(n) {
        let choices: Vec<Vec<Partition>> = levi_parts.parts.iter().map(|&p| partitions(p)).collect();
        let mut seen = std::collections::BTreeSet::new();
        let mut idx = vec![0usize; choices.len()];
        loop {
            let orbits: Vec<Partition> = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
            let levi = LeviDatum { parts: levi_parts.parts.clone(), orbits }.canonical();
            if induce(&levi) == target && seen.insert(levi.clone()) {
                found.push(levi);
            }
            // odometer
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    found.sort_by(|a, b| (a.sorted_parts(), &a.orbits).cmp(&(b.sorted_parts(), &b.orbits)));
    Ok(found.into_iter().map(InducingClass::from_levi).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prof(d: usize, c: &[usize]) -> BlockProfile {
        BlockProfile::new(d, c.to_vec()).unwrap()
    }

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec())
    }

    #[test]
    fn jordan_types_of_block_elements() {
        assert_eq!(jordan_type(&prof(2, &[2, 1])).parts(), &[2, 2, 1, 1]);
        assert_eq!(jordan_type(&prof(1, &[5])).parts(), &[5]);
        assert_eq!(jordan_type(&prof(3, &[1, 1])).parts(), &[1; 6]);
        let x = block_nilpotent_matrix(&prof(2, &[2, 1]));
        assert_eq!(rank_powers_oracle(&x).unwrap().parts(), &[2, 2, 1, 1]);
        let z = block_nilpotent_matrix(&prof(3, &[1, 1]));
        assert!(z.iter().flatten().all(|&v| v == 0));
    }

    #[test]
    fn oracle_basics() {
        assert_eq!(rank_powers_oracle(&vec![vec![0; 3]; 3]).unwrap().parts(), &[1, 1, 1]);
        assert_eq!(rank_powers_oracle(&jordan_matrix(&part(&[4]))).unwrap().parts(), &[4]);
        assert!(matches!(rank_powers_oracle(&[vec![1, 0], vec![0, 0]]), Err(Error::NotNilpotent)));
    }

    #[test]
    fn induction_examples() {
        let t = LeviDatum::new(vec![1, 1], vec![part(&[1]), part(&[1])]).unwrap();
        assert_eq!(induce(&t).parts(), &[2]);
        assert_eq!(induction_oracle(&t, 0, 3).unwrap().parts(), &[2]);
        let g = LeviDatum::new(vec![4], vec![part(&[2, 1, 1])]).unwrap();
        assert_eq!(induce(&g).parts(), &[2, 1, 1]);
        let l = LeviDatum::new(vec![2, 2], vec![part(&[1, 1]), part(&[1, 1])]).unwrap();
        assert_eq!(induce(&l).parts(), &[2, 2]);
        assert_eq!(induction_oracle(&l, 0, 3).unwrap().parts(), &[2, 2]);
    }

    #[test]
    fn inducing_pairs_small() {
        let c = enumerate_inducing_pairs(1, 2).unwrap();
        let keys: Vec<_> = c.iter().map(|x| (x.levi.parts.clone(), x.levi.orbits.clone())).collect();
        assert_eq!(
            keys,
            vec![(vec![1, 1], vec![part(&[1]), part(&[1])]), (vec![2], vec![part(&[2])])]
        );
        assert_eq!(c[0].weyl_weight, Rational::from((1, 2)));
        assert_eq!(c[1].weyl_weight, 1);
        let c = enumerate_inducing_pairs(2, 2).unwrap();
        let keys: Vec<_> = c.iter().map(|x| (x.levi.parts.clone(), x.levi.orbits.clone())).collect();
        assert_eq!(
            keys,
            vec![
                (vec![2, 2], vec![part(&[1, 1]), part(&[1, 1])]),
                (vec![4], vec![part(&[2, 2])])
            ]
        );
    }

    #[test]
    fn class_counts_balance() {
        for (d, r) in [(1, 3), (2, 3), (1, 4), (3, 2)] {
            let n = d * r;
            for c in enumerate_inducing_pairs(d, r).unwrap() {
                assert_eq!(induce(&c.levi), Partition::rectangle(r, d));
                // conjugates times |W^L|/|W| equals 1 / Π m_j!
                let lhs = &c.weyl_weight * Rational::from(c.conjugate_count.clone());
                let sym = multiplicities(&c.levi.parts)
                    .values()
                    .fold(Integer::from(1), |acc, &m| acc * factorial(m));
                assert_eq!(lhs, Rational::from((1, sym)), "n={n}");
            }
        }
    }

    #[test]
    fn partitions_count() {
        let counts: Vec<_> = (1..=8).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
    }
}
