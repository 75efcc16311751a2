//! Exact linear algebra over the rationals (small dense matrices only).

use rug::Rational;

pub type Matrix = Vec<Vec<Rational>>;

fn reduce(mut m: Matrix) -> (Matrix, Vec<usize>, Rational) {
    // Row echelon form; returns pivot columns and the determinant factor of the
    // row operations (sign and pivot products) for square input.
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut det = Rational::from(1);
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| m[i][col] != 0) else {
            continue;
        };
        if p != row {
            m.swap(p, row);
            det = -det;
        }
        let pivot = m[row][col].clone();
        det *= &pivot;
        for i in row + 1..rows {
            if m[i][col] == 0 {
                continue;
            }
            let factor = Rational::from(&m[i][col] / &pivot);
            for j in col..cols {
                let delta = Rational::from(&factor * &m[row][j]);
                m[i][j] -= delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (m, pivots, det)
}

pub fn rank(m: &Matrix) -> usize {
    reduce(m.clone()).1.len()
}

pub fn determinant(m: &Matrix) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::from(1);
    }
    let (_, pivots, det) = reduce(m.clone());
    if pivots.len() < n {
        Rational::new()
    } else {
        det
    }
}

/// Gauss-Jordan inverse; `None` for singular input.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut a: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| Rational::from(u32::from(i == j))));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| a[i][col] != 0)?;
        a.swap(p, col);
        let pivot = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..n {
            if i == col || a[i][col] == 0 {
                continue;
            }
            let factor = a[i][col].clone();
            for j in 0..2 * n {
                let delta = Rational::from(&factor * &a[col][j]);
                a[i][j] -= delta;
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn multiply(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = Rational::new();
                    for k in 0..inner {
                        if row[k] != 0 && b[k][j] != 0 {
                            acc += Rational::from(&row[k] * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn from_integers(rows: &[Vec<i64>]) -> Matrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_of_cartan_matrix() {
        let a = from_integers(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        assert_eq!(determinant(&a), 4);
    }

    #[test]
    fn inverse_round_trip() {
        let a = from_integers(&[vec![2, -1], vec![-1, 2]]);
        let inv = inverse(&a).unwrap();
        let id = multiply(&a, &inv);
        assert_eq!(id, from_integers(&[vec![1, 0], vec![0, 1]]));
    }

    #[test]
    fn singular_matrix() {
        let a = from_integers(&[vec![1, 2], vec![2, 4]]);
        assert!(inverse(&a).is_none());
        assert_eq!(rank(&a), 1);
        assert_eq!(determinant(&a), 0);
    }
}
