//! Independent oracles shared by the integration and acceptance tests.
//! Nothing here goes through the library's elimination or boundary code.
#![allow(dead_code)]

use momentkit::lie::LieAlgebra;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Increasing k-subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Sign of the permutation sorting `v` (0 on repeats) and the sorted vector.
fn sort_sign(mut v: Vec<usize>) -> (i64, Vec<usize>) {
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return (0, v);
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    (sign, v)
}

/// Integer matrix of ∂ₖ : Λᵏ → Λᵏ⁻¹ (rows indexed by (k−1)-subsets), scaled
/// by the common denominator of the structure constants.
pub fn boundary_integer(alg: &LieAlgebra, k: usize) -> Vec<Vec<BigInt>> {
    let d = alg.dim();
    let src = subsets(d, k);
    let dst = if k == 0 { Vec::new() } else { subsets(d, k - 1) };
    let mut den = BigInt::one();
    for (_, _, _, c) in alg.structure() {
        let q = c.denom();
        den = num_integer::Integer::lcm(&den, &q);
    }
    let mut m = vec![vec![BigInt::zero(); src.len()]; dst.len()];
    for (col, t) in src.iter().enumerate() {
        for a in 0..k {
            for b in a + 1..k {
                let rest: Vec<usize> = t.iter().enumerate().filter(|(i, _)| *i != a && *i != b).map(|(_, x)| *x).collect();
                // [e_ta, e_tb] with ta < tb
                for (i, j, l, c) in alg.structure() {
                    if (*i, *j) != (t[a], t[b]) {
                        continue;
                    }
                    let mut v = vec![*l];
                    v.extend(&rest);
                    let (s, sorted) = sort_sign(v);
                    if s == 0 {
                        continue;
                    }
                    let row = dst.iter().position(|u| *u == sorted).unwrap();
                    // (−1)^{a+b} with 1-based positions equals (−1)^{a+b} 0-based
                    let sign = if (a + b) % 2 == 0 { 1 } else { -1 } * s;
                    let scaled = c.numer() * (&den / c.denom());
                    m[row][col] += BigInt::from(sign) * scaled;
                }
            }
        }
    }
    m
}

/// Rank by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for cc in c + 1..cols {
                let v = (&m[rank][c] * &m[r][cc] - &m[r][c] * &m[rank][cc]) / &prev;
                m[r][cc] = v;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Betti numbers dim Hᵏ = C(d,k) − rank ∂ₖ − rank ∂ₖ₊₁.
pub fn betti_oracle(alg: &LieAlgebra) -> Vec<usize> {
    let d = alg.dim();
    let ranks: Vec<usize> = (0..=d + 1)
        .map(|k| if k == 0 || k > d { 0 } else { bareiss_rank(boundary_integer(alg, k)) })
        .collect();
    (0..=d).map(|k| subsets(d, k).len() - ranks[k] - ranks[k + 1]).collect()
}

/// dim ker ∂ₖ.
pub fn kernel_dim_oracle(alg: &LieAlgebra, k: usize) -> usize {
    subsets(alg.dim(), k).len() - if k == 0 { 0 } else { bareiss_rank(boundary_integer(alg, k)) }
}

pub fn catalog() -> Vec<LieAlgebra> {
    LieAlgebra::CATALOG.iter().map(|n| LieAlgebra::catalog(n).unwrap()).collect()
}
