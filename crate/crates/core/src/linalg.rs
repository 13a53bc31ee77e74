//! Rank computations: exact over the integers, floating otherwise.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

/// Rank over the rationals of an integer matrix.
///
/// Fraction-free Gaussian elimination; every row is divided by the gcd of its
/// entries after each update, which keeps coefficient growth tame on the
/// small structured systems this crate produces.
pub fn integer_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    for row in &mut rows {
        debug_assert_eq!(row.len(), ncols);
        reduce_content(row);
    }
    let mut rank = 0;
    for col in 0..ncols {
        // Smallest nonzero pivot limits growth in the update below.
        let pivot = (rank..rows.len())
            .filter(|&r| !rows[r][col].is_zero())
            .min_by_key(|&r| rows[r][col].magnitude().clone());
        let Some(p) = pivot else { continue };
        rows.swap(rank, p);
        let pivot_row = std::mem::take(&mut rows[rank]);
        let pv = pivot_row[col].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let a = std::mem::replace(&mut row[col], BigInt::zero());
            for c in col + 1..ncols {
                let t = &row[c] * &pv - &pivot_row[c] * &a;
                row[c] = t;
            }
            reduce_content(row);
        }
        rows[rank] = pivot_row;
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

pub fn integer_rank_i64(rows: &[Vec<i64>]) -> usize {
    integer_rank(
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
    )
}

fn reduce_content(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g == BigInt::from(1) {
                return;
            }
        }
    }
    if g.is_zero() {
        return;
    }
    for x in row.iter_mut() {
        *x /= &g;
    }
}

/// Floating rank via column-pivoted Householder QR: the number of diagonal
/// R entries above `rel_cutoff` times the first. The pivot norms are
/// recomputed fresh each step, so exactly dependent columns bottom out near
/// machine epsilon rather than at the sqrt(epsilon) floor that forming
/// `A^T A` would impose.
pub fn numeric_rank(a: &[Vec<f64>], rel_cutoff: f64) -> usize {
    if a.is_empty() || a[0].is_empty() {
        return 0;
    }
    let m = a.len();
    let n = a[0].len();
    let mut cols: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            a.iter()
                .map(|r| {
                    debug_assert_eq!(r.len(), n);
                    r[j]
                })
                .collect()
        })
        .collect();
    let tail_norm = |col: &[f64], k: usize| col[k..].iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut diag = Vec::with_capacity(m.min(n));
    for k in 0..m.min(n) {
        let (pivot, norm) = (k..n)
            .map(|j| (j, tail_norm(&cols[j], k)))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("k < n");
        cols.swap(k, pivot);
        diag.push(norm);
        if norm == 0.0 {
            break;
        }
        // Reflect the pivot tail onto -sign(x_k) * norm * e_k and apply the
        // same reflector to the remaining columns.
        let alpha = if cols[k][k] >= 0.0 { -norm } else { norm };
        let mut v = cols[k][k..].to_vec();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        for col in cols.iter_mut().skip(k + 1) {
            let dot: f64 = v.iter().zip(&col[k..]).map(|(x, y)| x * y).sum();
            let s = 2.0 * dot / vv;
            for (x, y) in col[k..].iter_mut().zip(&v) {
                *x -= s * y;
            }
        }
    }
    if diag[0] == 0.0 {
        return 0;
    }
    // Pivoting makes the diagonal non-increasing, so this counts a prefix.
    diag.iter().filter(|&&d| d > rel_cutoff * diag[0]).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_rank_basics() {
        assert_eq!(integer_rank_i64(&[]), 0);
        assert_eq!(
            integer_rank_i64(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
            3
        );
        assert_eq!(integer_rank_i64(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(integer_rank_i64(&[vec![0, 0], vec![0, 0]]), 0);
        // Rank bounded by both dimensions.
        assert_eq!(
            integer_rank_i64(&[vec![3, 1, 4], vec![1, 5, 9], vec![2, 6, 5], vec![3, 5, 8]]),
            3
        );
        // Dependent combination: r3 = r1 + r2, r4 = r1 - r2.
        assert_eq!(
            integer_rank_i64(&[
                vec![1, 2, 3, 4],
                vec![4, 3, 2, 1],
                vec![5, 5, 5, 5],
                vec![-3, -1, 1, 3]
            ]),
            2
        );
    }

    #[test]
    fn numeric_rank_matches_exact_on_integer_matrices() {
        let cases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![1, 2], vec![2, 4]],
            vec![vec![1, 1, 1], vec![1, -1, 1], vec![2, 0, 2]],
            vec![vec![2, -1, 0, 3], vec![0, 0, 0, 0], vec![4, -2, 0, 6]],
        ];
        for m in cases {
            let exact = integer_rank_i64(&m);
            let f: Vec<Vec<f64>> = m
                .iter()
                .map(|r| r.iter().map(|&x| x as f64).collect())
                .collect();
            assert_eq!(numeric_rank(&f, 1e-8), exact, "on {m:?}");
        }
    }

    #[test]
    fn numeric_rank_near_singular() {
        // Third row differs from a dependent combination by 1e-3: full rank.
        let a = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![1.0, 1.0, 1e-3],
        ];
        assert_eq!(numeric_rank(&a, 1e-8), 3);
        let b = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![1.0, 1.0, 0.0],
        ];
        assert_eq!(numeric_rank(&b, 1e-8), 2);
    }

    #[test]
    fn elimination_survives_coefficient_growth() {
        // Dense random-ish 12x12 with entries in [-9, 9]; checked against the
        // floating rank.
        let mut m = Vec::new();
        let mut state = 0x2545f4914f6cdd1d_u64;
        for _ in 0..12 {
            let mut row = Vec::new();
            for _ in 0..12 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                row.push(((state >> 33) % 19) as i64 - 9);
            }
            m.push(row);
        }
        let f: Vec<Vec<f64>> = m
            .iter()
            .map(|r| r.iter().map(|&x| x as f64).collect())
            .collect();
        assert_eq!(integer_rank_i64(&m), numeric_rank(&f, 1e-8));
    }
}
