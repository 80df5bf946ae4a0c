//! Subset enumeration engine. Visits k-subsets in lexicographic order of
//! their sorted index sequence, so the first hit at the optimal size is the
//! lexicographically smallest optimum.

use super::Encoded;

/// Calls `visit` on every k-subset of `0..n` in lexicographic order until it
/// returns true. Returns the accepted mask.
fn first_combination(n: usize, k: usize, mut visit: impl FnMut(u64) -> bool) -> Option<u64> {
    if k > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mask = idx.iter().fold(0u64, |m, &i| m | 1 << i);
        if visit(mask) {
            return Some(mask);
        }
        // advance the rightmost index that still has room
        let mut pos = k;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            if idx[pos] < n - k + pos {
                break;
            }
        }
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn min_cover(enc: &Encoded) -> u64 {
    let n = enc.len();
    (0..=n)
        .find_map(|k| first_combination(n, k, |m| enc.req.iter().all(|r| r & m != 0)))
        .expect("the full vertex set is always a cover")
}

pub fn max_independent(enc: &Encoded) -> u64 {
    let n = enc.len();
    (0..=n)
        .rev()
        .find_map(|k| first_combination(n, k, |m| super::bits(m).all(|i| enc.adj[i] & m == 0)))
        .expect("the empty set is always independent")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_are_lexicographic() {
        let mut seen = Vec::new();
        first_combination(4, 2, |m| {
            seen.push(super::super::bits(m).collect::<Vec<_>>());
            false
        });
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn degenerate_sizes() {
        assert_eq!(first_combination(3, 0, |_| true), Some(0));
        assert_eq!(first_combination(2, 3, |_| true), None);
    }
}
