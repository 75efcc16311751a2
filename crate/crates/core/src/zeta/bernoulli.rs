//! Exact Bernoulli numbers, cached process-wide.

use std::sync::{Mutex, OnceLock};

use rug::{Integer, Rational};

static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();

/// `B_0, ..., B_m` (with `B_1 = -1/2`).
pub fn bernoulli_upto(m: usize) -> Vec<Rational> {
    let table = TABLE.get_or_init(|| Mutex::new(vec![Rational::from(1)]));
    let mut b = table.lock().expect("bernoulli cache poisoned");
    while b.len() <= m {
        // B_k = -1/(k+1) * Σ_{j<k} C(k+1, j) B_j
        let k = b.len();
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from(bj * &binom);
            binom = binom * (k + 1 - j) as u64 / (j + 1) as u64;
        }
        let next = -acc / Rational::from(k as u64 + 1);
        b.push(next);
    }
    b[..=m].to_vec()
}

/// `B_{2j}` for `j = 0..=count`.
pub fn even_bernoulli(count: usize) -> Vec<Rational> {
    bernoulli_upto(2 * count).into_iter().step_by(2).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        let b = bernoulli_upto(12);
        let expected = [
            (1, 1),
            (-1, 2),
            (1, 6),
            (0, 1),
            (-1, 30),
            (0, 1),
            (1, 42),
            (0, 1),
            (-1, 30),
            (0, 1),
            (5, 66),
            (0, 1),
            (-691, 2730),
        ];
        for (x, &(p, q)) in b.iter().zip(&expected) {
            assert_eq!(*x, Rational::from((p, q)));
        }
        assert_eq!(even_bernoulli(2), vec![Rational::from(1), Rational::from((1, 6)), Rational::from((-1, 30))]);
    }
}
