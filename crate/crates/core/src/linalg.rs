//! Exact rank of integer matrices by fraction-free (Bareiss) elimination.
//!
//! Every entry after step `k` is a `k×k` minor of the input, so the division
//! by the previous pivot is exact. The `i128` path bails out on overflow and
//! the computation is redone over `BigInt`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Rank over the rationals of a dense integer matrix given as rows.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let wide: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    match rank_i128(wide) {
        Some(r) => r,
        None => rank_bigint(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        ),
    }
}

// Row updates read two rows at once.
#[allow(clippy::needless_range_loop)]
fn rank_i128(mut a: Vec<Vec<i128>>) -> Option<usize> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut prev: i128 = 1;
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c];
        for i in r + 1..nrows {
            let f = a[i][c];
            for j in c + 1..ncols {
                let lhs = pivot.checked_mul(a[i][j])?;
                let rhs = f.checked_mul(a[r][j])?;
                a[i][j] = lhs.checked_sub(rhs)? / prev;
            }
            a[i][c] = 0;
        }
        prev = pivot;
        r += 1;
    }
    Some(r)
}

#[allow(clippy::needless_range_loop)]
pub fn rank_bigint(mut a: Vec<Vec<BigInt>>) -> usize {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for i in r + 1..nrows {
            let f = a[i][c].clone();
            for j in c + 1..ncols {
                let v = (&pivot * &a[i][j] - &f * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = pivot;
        r += 1;
    }
    r
}
