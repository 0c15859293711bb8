//! Counting helpers shared by the polynomial and element code.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Binomial coefficient with the convention C(n,k)=0 outside 0<=k<=n.
pub fn binomial(n: i64, k: i64) -> i64 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// All k-element subsets of `items`, in lexicographic order of positions.
pub fn subsets<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn rec<T: Clone>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i].clone());
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= items.len() {
        rec(items, k, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// Sign of the permutation that sorts the concatenation of two disjoint
/// sorted index lists; zero if they overlap.
pub fn merge_sign(a: &[usize], b: &[usize]) -> i32 {
    let mut inversions = 0usize;
    for &x in a {
        for &y in b {
            if x == y {
                return 0;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Exponent vectors of fixed total degree, in ascending lexicographic order.
#[derive(Debug)]
pub struct MonomialTable {
    pub nvars: usize,
    pub degree: usize,
    pub list: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialTable {
    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn index_of(&self, alpha: &[u32]) -> Option<usize> {
        self.index.get(alpha).copied()
    }
}

fn build_table(nvars: usize, degree: usize) -> MonomialTable {
    fn rec(nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == nvars {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in 0..=left {
            cur.push(a);
            rec(nvars, left - a, cur, out);
            cur.pop();
        }
    }
    let mut list = Vec::new();
    if nvars > 0 {
        rec(nvars, degree as u32, &mut Vec::new(), &mut list);
    }
    let index = list.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
    MonomialTable { nvars, degree, list, index }
}

/// Cached monomial table for `nvars` variables of total degree `degree`.
pub fn monomials(nvars: usize, degree: usize) -> Arc<MonomialTable> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<MonomialTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("monomial cache poisoned");
    guard
        .entry((nvars, degree))
        .or_insert_with(|| Arc::new(build_table(nvars, degree)))
        .clone()
}

/// alpha! = prod alpha_i!
pub fn multi_factorial(alpha: &[u32]) -> f64 {
    alpha.iter().map(|&a| factorial(a as usize)).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(-1, 0), 0);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(20, 10), 184756);
    }

    #[test]
    fn monomial_counts_match_binomials() {
        for nvars in 1..5 {
            for d in 0..7 {
                assert_eq!(monomials(nvars, d).len() as i64, binomial((d + nvars - 1) as i64, (nvars - 1) as i64));
            }
        }
        let t = monomials(3, 1);
        assert_eq!(t.list, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
    }

    #[test]
    fn subset_order_and_sign() {
        assert_eq!(subsets(&[1, 2, 3], 2), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(merge_sign(&[2], &[1, 3]), -1);
        assert_eq!(merge_sign(&[1], &[2, 3]), 1);
        assert_eq!(merge_sign(&[2], &[2]), 0);
    }
}
