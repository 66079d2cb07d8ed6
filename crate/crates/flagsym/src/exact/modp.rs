//! Arithmetic modulo a word-sized prime.
//!
//! Used only to certify lower bounds on ranks of rational matrices: the rank
//! of a reduction mod p never exceeds the rank over ℚ.

use super::rational::Rational;

pub const PRIME: u64 = 2_147_483_647;

pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    acc
}

pub fn inv(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero mod p");
    pow(a, p - 2, p)
}

fn rank_rows(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let iv = inv(rows[rank][col], p);
        for v in rows[rank].iter_mut() {
            *v = mul(*v, iv, p);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x = (*x + p - mul(f, *y, p)) % p;
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of the reduction of `rows` mod `p`, or `None` if an entry has a
/// denominator divisible by `p`.
pub fn rank_mod_p(rows: &[Vec<Rational>], p: u64) -> Option<usize> {
    let mut red = Vec::with_capacity(rows.len());
    for row in rows {
        let mut r = Vec::with_capacity(row.len());
        for x in row {
            r.push(x.mod_p(p)?);
        }
        red.push(r);
    }
    Some(rank_rows(red, p))
}

/// The rational `n/d` with `|n|, d ≤ √(p/2)` congruent to `a`, if any.
pub fn rational_reconstruct(a: u64, p: u64) -> Option<Rational> {
    let bound = ((p / 2) as f64).sqrt() as i128;
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() > bound {
        return None;
    }
    let (n, d) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
    Some(Rational::new(n as i64, d as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstruction_inverts_reduction() {
        for (n, d) in [(0, 1), (1, 1), (-3, 7), (120, 41), (-9999, 10000)] {
            let x = Rational::new(n, d);
            assert_eq!(rational_reconstruct(x.mod_p(PRIME).unwrap(), PRIME), Some(x));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        for a in [1u64, 2, 12345, PRIME - 1] {
            assert_eq!(mul(a, inv(a, PRIME), PRIME), 1);
        }
    }

    #[test]
    fn rank_of_small_matrix() {
        let q = |n: i64| Rational::from_int(n);
        let rows = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert_eq!(rank_mod_p(&rows, PRIME), Some(1));
        let rows = vec![vec![q(1), q(2)], vec![q(3), q(4)]];
        assert_eq!(rank_mod_p(&rows, PRIME), Some(2));
    }
}
