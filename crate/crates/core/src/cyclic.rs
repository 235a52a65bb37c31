//! Rotation helpers shared by cyclic words and cyclic sequences.

/// Start index of the lexicographically least rotation (Booth's algorithm).
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: usize| &s[i % n];
    let mut f = vec![usize::MAX; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let mut i = f[j - k - 1];
        while i != usize::MAX && at(j) != at(k + i + 1) {
            if at(j) < at(k + i + 1) {
                k = j - i - 1;
            }
            i = f[i];
        }
        if i == usize::MAX && at(j) != at(k) {
            if at(j) < at(k) {
                k = j;
            }
            f[j - k] = usize::MAX;
        } else {
            f[j - k] = if i == usize::MAX { 0 } else { i + 1 };
        }
    }
    k
}

pub fn rotated<T: Clone>(s: &[T], k: usize) -> Vec<T> {
    if s.is_empty() {
        return Vec::new();
    }
    let k = k % s.len();
    s[k..].iter().chain(&s[..k]).cloned().collect()
}

pub fn canonical_rotation<T: Ord + Clone>(s: &[T]) -> Vec<T> {
    rotated(s, least_rotation(s))
}

/// True iff `b` is a rotation of `a`.
pub fn is_rotation<T: PartialEq>(a: &[T], b: &[T]) -> bool {
    a.len() == b.len() && cyclic_find(a, b).is_some()
}

/// First start position `k` with `needle[j] == hay[(k + j) mod n]` for all `j`,
/// requiring `needle.len() <= hay.len()`.
pub fn cyclic_find<T: PartialEq>(hay: &[T], needle: &[T]) -> Option<usize> {
    cyclic_positions(hay, needle).next()
}

pub fn cyclic_positions<'a, T: PartialEq>(
    hay: &'a [T],
    needle: &'a [T],
) -> impl Iterator<Item = usize> + 'a {
    let n = hay.len();
    let ok = needle.len() <= n && n > 0;
    (0..if ok { n } else { 0 })
        .filter(move |&k| needle.iter().enumerate().all(|(j, x)| hay[(k + j) % n] == *x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute<T: Ord + Clone>(s: &[T]) -> Vec<T> {
        (0..s.len().max(1)).map(|k| rotated(s, k)).min().unwrap()
    }

    #[test]
    fn booth_matches_brute_force() {
        let cases: [&[u8]; 6] = [b"bbaab", b"abab", b"aaaa", b"cabbage", b"z", b"baabaa"];
        for s in cases {
            assert_eq!(canonical_rotation(s), brute(s), "{:?}", s);
        }
    }

    #[test]
    fn rotations() {
        assert!(is_rotation(b"abcd", b"cdab"));
        assert!(!is_rotation(b"abcd", b"acbd"));
        assert_eq!(cyclic_positions(b"abab", b"ba").collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(cyclic_find(b"abc", b"ca"), Some(2));
    }
}
