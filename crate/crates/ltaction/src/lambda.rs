//! The index sets `Λ`, `Λ^odd`, `Λ^even` of parity-alternating sequences, and
//! the compositions and weak compositions used by the Witt-subgroup formulas.
//!
//! A member of `Λ` is a strictly increasing sequence of nonnegative integers
//! whose consecutive entries have opposite parity and whose first entry (if
//! any) is even. For a prime power `q`, `QI` denotes `Σ_j q^{i_j}`. These sets
//! are tiny but queried at every series degree, so enumeration by `Q`-value
//! is memoized.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

/// A member of `Λ`: strictly increasing, parity-alternating, first entry even.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LambdaSeq(Vec<u32>);

impl LambdaSeq {
    /// Validate the three structural conditions.
    pub fn new(entries: Vec<u32>) -> Option<Self> {
        if let Some(&first) = entries.first() {
            if first % 2 != 0 {
                return None;
            }
        }
        for w in entries.windows(2) {
            if w[1] <= w[0] || w[1] % 2 == w[0] % 2 {
                return None;
            }
        }
        Some(LambdaSeq(entries))
    }

    pub fn empty() -> Self {
        LambdaSeq(Vec::new())
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `QI = Σ_j q^{i_j}`; 0 for the empty sequence.
    pub fn q_value(&self, q: u64) -> u64 {
        self.0.iter().map(|&i| q.pow(i)).sum()
    }

    pub fn len_parity(&self) -> LenParity {
        if self.0.len() % 2 == 0 {
            LenParity::Even
        } else {
            LenParity::Odd
        }
    }
}

/// Length-parity filter for `Λ` enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LenParity {
    All,
    Odd,
    Even,
}

impl LenParity {
    fn admits(self, len: usize) -> bool {
        match self {
            LenParity::All => true,
            LenParity::Odd => len % 2 == 1,
            LenParity::Even => len % 2 == 0,
        }
    }
}

fn collect_lambda(
    q: u64,
    remaining: u64,
    prev: Option<u32>,
    prefix: &mut Vec<u32>,
    out: &mut Vec<LambdaSeq>,
) {
    if remaining == 0 {
        out.push(LambdaSeq(prefix.clone()));
        return;
    }
    let (start, need_parity) = match prev {
        None => (0u32, 0u32),
        Some(p) => (p + 1, (p + 1) % 2),
    };
    let mut e = start;
    if e % 2 != need_parity {
        e += 1;
    }
    while let Some(val) = q.checked_pow(e) {
        if val > remaining {
            break;
        }
        prefix.push(e);
        collect_lambda(q, remaining - val, Some(e), prefix, out);
        prefix.pop();
        e += 2;
    }
}

type LambdaCache = Mutex<HashMap<(u64, u64), Arc<Vec<LambdaSeq>>>>;

fn lambda_all(q: u64, n: u64) -> Arc<Vec<LambdaSeq>> {
    static CACHE: OnceLock<LambdaCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(q, n)) {
        return hit.clone();
    }
    let mut out = Vec::new();
    collect_lambda(q, n, None, &mut Vec::new(), &mut out);
    let out = Arc::new(out);
    cache.lock().unwrap().insert((q, n), out.clone());
    out
}

/// Every `I ∈ Λ` with `QI = n`, restricted to the requested length-parity
/// class, in lexicographic order.
pub fn enumerate_lambda(q: u64, n: u64, parity: LenParity) -> Vec<LambdaSeq> {
    assert!(q >= 2, "q must be a prime power ≥ 2");
    lambda_all(q, n)
        .iter()
        .filter(|s| parity.admits(s.len()))
        .cloned()
        .collect()
}

/// Dense table of `Λ` members indexed by `Q`-value, for engines that sweep
/// every degree of a truncated series.
pub struct LambdaTable {
    q: u64,
    by_value: Vec<Arc<Vec<LambdaSeq>>>,
}

impl LambdaTable {
    pub fn new(q: u64, max_value: u64) -> Self {
        let by_value = (0..=max_value).map(|v| lambda_all(q, v)).collect();
        LambdaTable { q, by_value }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn max_value(&self) -> u64 {
        self.by_value.len() as u64 - 1
    }

    /// All `I ∈ Λ` with `QI = v`.
    pub fn with_value(&self, v: u64) -> &[LambdaSeq] {
        &self.by_value[v as usize]
    }

    /// The sparse set of attained `Q`-values up to the table maximum.
    pub fn attained_values(&self) -> Vec<u64> {
        (0..=self.max_value())
            .filter(|&v| !self.with_value(v).is_empty())
            .collect()
    }
}

/// A composition (positive entries) or weak composition (nonnegative entries).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntComposition {
    entries: Vec<u64>,
    weak: bool,
}

impl IntComposition {
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().sum()
    }

    pub fn is_weak(&self) -> bool {
        self.weak
    }
}

/// All weak compositions of `total` into exactly `length` parts, lexicographic.
pub fn enumerate_weak_compositions(
    total: u64,
    length: usize,
) -> impl Iterator<Item = IntComposition> {
    WeakCompositions {
        state: None,
        total,
        length,
        done: false,
    }
}

struct WeakCompositions {
    state: Option<Vec<u64>>,
    total: u64,
    length: usize,
    done: bool,
}

impl Iterator for WeakCompositions {
    type Item = IntComposition;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match &mut self.state {
            None => {
                if self.length == 0 {
                    self.done = true;
                    if self.total == 0 {
                        return Some(IntComposition {
                            entries: Vec::new(),
                            weak: true,
                        });
                    }
                    return None;
                }
                let mut first = vec![0u64; self.length];
                first[self.length - 1] = self.total;
                self.state = Some(first.clone());
                Some(IntComposition {
                    entries: first,
                    weak: true,
                })
            }
            Some(cur) => {
                // Increment the rightmost position that has mass to its right.
                let len = cur.len();
                let mut suffix = 0u64;
                for i in (0..len).rev() {
                    if i < len - 1 {
                        // suffix currently holds sum of entries > i
                        if suffix >= 1 {
                            cur[i] += 1;
                            let r = suffix - 1;
                            for e in cur.iter_mut().take(len).skip(i + 1) {
                                *e = 0;
                            }
                            cur[len - 1] = r;
                            return Some(IntComposition {
                                entries: cur.clone(),
                                weak: true,
                            });
                        }
                    }
                    suffix += cur[i];
                }
                self.done = true;
                None
            }
        }
    }
}

/// All compositions of `total` into positive parts strictly below
/// `entries_below`, lexicographic.
pub fn enumerate_compositions(
    total: u64,
    entries_below: u64,
) -> impl Iterator<Item = IntComposition> {
    BoundedCompositions {
        state: None,
        total,
        bound: entries_below,
        done: false,
    }
}

struct BoundedCompositions {
    state: Option<Vec<u64>>,
    total: u64,
    bound: u64,
    done: bool,
}

impl Iterator for BoundedCompositions {
    type Item = IntComposition;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match &mut self.state {
            None => {
                if self.total == 0 {
                    self.done = true;
                    return Some(IntComposition {
                        entries: Vec::new(),
                        weak: false,
                    });
                }
                if self.bound < 2 {
                    self.done = true;
                    return None;
                }
                let first = vec![1u64; self.total as usize];
                self.state = Some(first.clone());
                Some(IntComposition {
                    entries: first,
                    weak: false,
                })
            }
            Some(cur) => {
                // Successor: increment the deepest entry that stays below the
                // bound and has mass after it; re-expand the rest as ones.
                let len = cur.len();
                let mut tail = 0u64;
                for j in (0..len).rev() {
                    tail += cur[j];
                    if j == len - 1 {
                        continue;
                    }
                    // mass strictly after position j:
                    let after = tail - cur[j];
                    if after >= 1 && cur[j] + 1 < self.bound {
                        let mut next = cur[..j].to_vec();
                        next.push(cur[j] + 1);
                        next.extend(std::iter::repeat_n(1, (after - 1) as usize));
                        *cur = next.clone();
                        return Some(IntComposition {
                            entries: next,
                            weak: false,
                        });
                    }
                }
                self.done = true;
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_value_examples() {
        assert_eq!(LambdaSeq::empty().q_value(3), 0);
        assert_eq!(LambdaSeq::new(vec![0, 1]).unwrap().q_value(2), 3);
        assert_eq!(LambdaSeq::new(vec![0, 1, 4]).unwrap().q_value(2), 19);
    }

    #[test]
    fn structural_rejects() {
        assert!(LambdaSeq::new(vec![1, 4]).is_none()); // odd first entry
        assert!(LambdaSeq::new(vec![0, 4]).is_none()); // not parity-alternating
        assert!(LambdaSeq::new(vec![0, 1, 1]).is_none()); // not increasing
        assert!(LambdaSeq::new(vec![0, 3]).is_some());
        assert!(LambdaSeq::new(vec![2, 3, 6]).is_some());
    }

    #[test]
    fn enumerate_examples() {
        for q in [2u64, 3, 4, 5] {
            assert_eq!(
                enumerate_lambda(q, 1, LenParity::All),
                vec![LambdaSeq::new(vec![0]).unwrap()]
            );
        }
        assert_eq!(
            enumerate_lambda(2, 3, LenParity::All),
            vec![LambdaSeq::new(vec![0, 1]).unwrap()]
        );
        assert_eq!(
            enumerate_lambda(2, 0, LenParity::Even),
            vec![LambdaSeq::empty()]
        );
        assert!(enumerate_lambda(2, 0, LenParity::Odd).is_empty());
    }

    /// Brute-force oracle: subsets of admissible powers with the structural
    /// filter applied, compared as sorted lists.
    fn brute_lambda(q: u64, n: u64) -> Vec<LambdaSeq> {
        if n == 0 {
            return vec![LambdaSeq::empty()];
        }
        let mut max_e = 0u32;
        while q.checked_pow(max_e + 1).is_some_and(|v| v <= n) {
            max_e += 1;
        }
        let mut out = Vec::new();
        for mask in 1u32..(1 << (max_e + 1)) {
            let entries: Vec<u32> = (0..=max_e).filter(|e| mask >> e & 1 == 1).collect();
            let sum: u64 = entries.iter().map(|&e| q.pow(e)).sum();
            if sum == n {
                if let Some(seq) = LambdaSeq::new(entries) {
                    out.push(seq);
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn brute_force_agreement() {
        for q in [2u64, 3, 5, 7] {
            for n in 0..=140 {
                let mut got = enumerate_lambda(q, n, LenParity::All);
                got.sort();
                assert_eq!(got, brute_lambda(q, n), "q={q} n={n}");
            }
        }
    }

    #[test]
    fn parity_classes_partition() {
        for q in [2u64, 3] {
            for n in 0..=80 {
                let all = enumerate_lambda(q, n, LenParity::All).len();
                let odd = enumerate_lambda(q, n, LenParity::Odd).len();
                let even = enumerate_lambda(q, n, LenParity::Even).len();
                assert_eq!(all, odd + even);
            }
        }
    }

    #[test]
    fn weak_composition_examples() {
        let got: Vec<_> = enumerate_weak_compositions(0, 3)
            .map(|c| c.entries().to_vec())
            .collect();
        assert_eq!(got, vec![vec![0, 0, 0]]);

        let got: Vec<_> = enumerate_weak_compositions(2, 2)
            .map(|c| c.entries().to_vec())
            .collect();
        assert_eq!(got, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);

        assert_eq!(enumerate_weak_compositions(3, 5).count(), 35);

        // degenerate lengths
        assert_eq!(enumerate_weak_compositions(0, 0).count(), 1);
        assert_eq!(enumerate_weak_compositions(2, 0).count(), 0);
    }

    #[test]
    fn bounded_composition_examples() {
        let got: Vec<_> = enumerate_compositions(1, 2)
            .map(|c| c.entries().to_vec())
            .collect();
        assert_eq!(got, vec![vec![1]]);

        let mut got: Vec<_> = enumerate_compositions(3, 3)
            .map(|c| c.entries().to_vec())
            .collect();
        got.sort();
        assert_eq!(got, vec![vec![1, 1, 1], vec![1, 2], vec![2, 1]]);

        assert_eq!(enumerate_compositions(4, 4).count(), 7);
    }

    #[test]
    fn lambda_table_matches_enumeration() {
        let table = LambdaTable::new(2, 40);
        for v in 0..=40 {
            assert_eq!(
                table.with_value(v).to_vec(),
                enumerate_lambda(2, v, LenParity::All)
            );
        }
        assert!(table.attained_values().contains(&0));
        assert!(table.attained_values().contains(&1));
        assert!(!table.attained_values().contains(&2));
    }
}
