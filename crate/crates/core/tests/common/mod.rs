//! Brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

/// Letters by first appearance, e.g. [7, 3, 7, 3] -> "abab".
pub fn relabel(seq: &[usize]) -> String {
    let mut seen: Vec<usize> = Vec::new();
    seq.iter()
        .map(|x| {
            let i = seen.iter().position(|y| y == x).unwrap_or_else(|| {
                seen.push(*x);
                seen.len() - 1
            });
            (b'a' + i as u8) as char
        })
        .collect()
}

/// Every perfect matching of 2n points as a label sequence, read off all
/// permutations of the points (consecutive pairs form chords).
pub fn matchings_from_permutations(n: usize) -> BTreeSet<String> {
    let m = 2 * n;
    let mut perm: Vec<usize> = (0..m).collect();
    let mut out = BTreeSet::new();
    loop {
        let mut seq = vec![0usize; m];
        for (k, pair) in perm.chunks(2).enumerate() {
            seq[pair[0]] = k;
            seq[pair[1]] = k;
        }
        out.insert(relabel(&seq));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else { return false };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Smallest relabelled rotation of a circle label word.
pub fn circle_canonical(word: &str) -> String {
    let chars: Vec<char> = word.chars().collect();
    let m = chars.len();
    (0..m.max(1))
        .map(|r| {
            let seq: Vec<usize> = (0..m).map(|i| chars[(i + r) % m] as usize).collect();
            relabel(&seq)
        })
        .min()
        .unwrap_or_default()
}

pub fn circle_oracle(n: usize) -> BTreeSet<String> {
    matchings_from_permutations(n).iter().map(|w| circle_canonical(w)).collect()
}

/// Two-strand diagrams as "xxx|yyy" words.
pub fn two_strand_oracle(n: usize) -> BTreeSet<String> {
    let m = 2 * n;
    let mut out = BTreeSet::new();
    for w in matchings_from_permutations(n) {
        for cut in 0..=m {
            out.insert(format!("{}|{}", &w[..cut], &w[cut..]));
        }
    }
    out
}
