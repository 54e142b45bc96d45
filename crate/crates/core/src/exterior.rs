//! Index tuples for exterior powers, shared by multivectors over a Lie
//! algebra and by differential forms on ℝⁿ.
//!
//! Tuples are 0-based internally and displayed 1-based.

use std::collections::HashMap;

/// Strictly increasing list of 0-based indices.
pub type IndexTuple = Vec<usize>;

/// Sorts `idx` in place and returns the sign of the sorting permutation,
/// or 0 if an index repeats.
pub fn sort_with_sign(idx: &mut [usize]) -> i32 {
    let mut sign = 1;
    // insertion sort: each swap is one transposition
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        sign
    }
}

/// Concatenates two tuples and normalizes, returning `(sign, sorted)`.
pub fn merge_sign(a: &[usize], b: &[usize]) -> (i32, IndexTuple) {
    let mut t: Vec<usize> = a.iter().chain(b).copied().collect();
    let s = sort_with_sign(&mut t);
    (s, t)
}

/// Removes position `pos` from `t`.
pub fn without(t: &[usize], pos: usize) -> IndexTuple {
    t.iter().enumerate().filter(|(i, _)| *i != pos).map(|(_, x)| *x).collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Lexicographically ordered basis of the `k`-th exterior power of an
/// `n`-dimensional space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorBasis {
    n: usize,
    k: usize,
    tuples: Vec<IndexTuple>,
    index: HashMap<IndexTuple, usize>,
}

impl ExteriorBasis {
    pub fn new(n: usize, k: usize) -> Self {
        let mut tuples = Vec::with_capacity(binomial(n, k));
        let mut cur = Vec::with_capacity(k);
        fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<IndexTuple>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(n, k, i + 1, cur, out);
                cur.pop();
            }
        }
        if k <= n {
            rec(n, k, 0, &mut cur, &mut tuples);
        }
        let index = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        ExteriorBasis { n, k, tuples, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[IndexTuple] {
        &self.tuples
    }

    pub fn tuple(&self, i: usize) -> &IndexTuple {
        &self.tuples[i]
    }

    pub fn index_of(&self, t: &[usize]) -> Option<usize> {
        self.index.get(t).copied()
    }
}

/// `1,2,3` style rendering of a 0-based tuple.
pub fn one_based(t: &[usize]) -> String {
    t.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
}
