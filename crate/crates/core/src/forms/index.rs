//! Strictly increasing multi-indices and permutation signs.

use std::sync::OnceLock;

use crate::jets::MAX_DIM;

/// All strictly increasing index tuples of length `k` in `0..n`, in
/// lexicographic order.
pub fn combinations(n: usize, k: usize) -> &'static [Vec<usize>] {
    static TABLE: OnceLock<Vec<Vec<Vec<Vec<usize>>>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (0..=MAX_DIM)
            .map(|n| (0..=MAX_DIM).map(|k| build(n, k)).collect())
            .collect()
    });
    assert!(n <= MAX_DIM && k <= MAX_DIM, "multi-index out of range");
    &table[n][k]
}

fn build(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Position of an increasing multi-index within `combinations(n, k)`.
pub fn position(n: usize, idx: &[usize]) -> Option<usize> {
    combinations(n, idx.len()).iter().position(|c| c == idx)
}

/// Sorts `idx` and returns the sign of the sorting permutation, or `None`
/// when an index repeats.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, f64)> {
    let mut v = idx.to_vec();
    let mut sign = 1.0;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, sign))
    }
}

/// Permutations of `0..k` paired with their signs.
pub fn permutations(k: usize) -> Vec<(Vec<usize>, f64)> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    heap(k, &mut cur, &mut out);
    out.into_iter()
        .map(|p| {
            let s = sort_with_sign(&p).expect("permutation").1;
            (p, s)
        })
        .collect()
}

fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k - 1 {
        heap(k - 1, a, out);
        if k.is_multiple_of(2) {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
    heap(k - 1, a, out);
}
