//! Arithmetic modulo a 61-bit Mersenne prime, used to find pivot rows fast
//! before the exact rational pass.

pub const PRIME: u64 = (1u64 << 61) - 1;

#[inline]
pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, p);
        }
        base = mul(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue.
pub fn inv(a: u64, p: u64) -> u64 {
    pow(a, p - 2, p)
}

/// Incrementally selects a maximal set of rows that are independent modulo `p`.
///
/// Rows independent modulo a prime are independent over the rationals, so the
/// selection is always a valid (possibly non-maximal) independent set.
pub struct ModpRowSelector {
    cols: usize,
    p: u64,
    // echelon rows, each normalized so its pivot entry is 1
    echelon: Vec<(usize, Vec<u64>)>,
    pivot_of_col: Vec<Option<usize>>,
}

impl ModpRowSelector {
    pub fn new(cols: usize, p: u64) -> Self {
        Self { cols, p, echelon: Vec::new(), pivot_of_col: vec![None; cols] }
    }

    pub fn rank(&self) -> usize {
        self.echelon.len()
    }

    /// Reduces `row` against the current echelon form; keeps it and returns
    /// true when it is independent.
    pub fn offer(&mut self, mut row: Vec<u64>) -> bool {
        let p = self.p;
        debug_assert_eq!(row.len(), self.cols);
        for c in 0..self.cols {
            if row[c] == 0 {
                continue;
            }
            if let Some(e) = self.pivot_of_col[c] {
                let f = row[c];
                let (_, prow) = &self.echelon[e];
                for k in c..self.cols {
                    if prow[k] != 0 {
                        row[k] = sub(row[k], mul(f, prow[k], p), p);
                    }
                }
            } else {
                let f = inv(row[c], p);
                for v in row.iter_mut().skip(c) {
                    *v = mul(*v, f, p);
                }
                self.pivot_of_col[c] = Some(self.echelon.len());
                self.echelon.push((c, row));
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_is_inverse() {
        for a in [1u64, 2, 3, 12345, PRIME - 1] {
            assert_eq!(mul(a, inv(a, PRIME), PRIME), 1);
        }
    }

    #[test]
    fn selector_detects_dependence() {
        let mut s = ModpRowSelector::new(3, PRIME);
        assert!(s.offer(vec![1, 2, 3]));
        assert!(s.offer(vec![0, 1, 1]));
        assert!(!s.offer(vec![2, 5, 7]));
        assert!(s.offer(vec![0, 0, 5]));
        assert_eq!(s.rank(), 3);
    }
}
