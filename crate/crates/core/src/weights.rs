//! Weight systems `(k_1 ≤ … ≤ k_n)` with `Σ 1/k_i = 1` and the weighted
//! models `(k; w_1, …, w_n)` they define.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{factorial, Rational};

/// Exact `Σ 1/k_i`.
pub fn reciprocal_sum(parts: &[u64]) -> Rational {
    parts
        .iter()
        .map(|&k| Rational::new(BigInt::one(), BigInt::from(k)))
        .fold(Rational::zero(), |acc, x| acc + x)
}

/// A non-decreasing tuple of positive integers whose reciprocals sum to one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KVector(Vec<u64>);

impl KVector {
    /// Sorts `parts` and checks `n ≥ 2` and `Σ 1/k_i = 1`.
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::InvalidModel(format!(
                "need at least two exponents, got {}",
                parts.len()
            )));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidModel("exponents must be positive".into()));
        }
        parts.sort_unstable();
        let sum = reciprocal_sum(&parts);
        if !sum.is_one() {
            return Err(Error::InvalidModel(format!(
                "reciprocal sum of {parts:?} is {sum}, not 1"
            )));
        }
        Ok(Self(parts))
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn lcm(&self) -> u64 {
        self.0.iter().fold(1u64, |acc, &k| acc.lcm(&k))
    }

    pub fn aut_order(&self) -> u64 {
        aut_order(self)
    }

    pub fn to_model(&self) -> Model {
        to_model(self)
    }
}

impl fmt::Display for KVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Every solution of `Σ 1/k_i = 1` with `n` parts, ascending lexicographically.
///
/// Depth-first search over exact residuals: with residual `r` and `s` free
/// slots the next part lies in `[max(prev, ⌊1/r⌋ + 1), ⌊s/r⌋]`, and the last
/// part is forced to `1/r`.
pub fn enumerate(n: usize) -> Result<Vec<KVector>> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension must be at least 2, got {n}")));
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    search(&BigInt::one(), &BigInt::one(), n, 2, &mut prefix, &mut out);
    Ok(out)
}

// residual = num/den in lowest terms
fn search(
    num: &BigInt,
    den: &BigInt,
    slots: usize,
    min_part: u64,
    prefix: &mut Vec<u64>,
    out: &mut Vec<KVector>,
) {
    if slots == 1 {
        if num.is_one() {
            if let Some(k) = den.to_u64() {
                if k >= min_part {
                    let mut parts = prefix.clone();
                    parts.push(k);
                    out.push(KVector(parts));
                }
            }
        }
        return;
    }
    let lower = (den / num + 1u32).to_u64().expect("part bound fits in u64");
    let upper = (den * BigInt::from(slots) / num)
        .to_u64()
        .expect("part bound fits in u64");
    for k in lower.max(min_part)..=upper {
        // num/den − 1/k = (num·k − den)/(den·k)
        let kb = BigInt::from(k);
        let rest_num = num * &kb - den;
        if !rest_num.is_positive() {
            continue;
        }
        let rest_den = den * &kb;
        let g = rest_num.gcd(&rest_den);
        prefix.push(k);
        search(&(rest_num / &g), &(rest_den / &g), slots - 1, k, prefix, out);
        prefix.pop();
    }
}

/// Number of permutations fixing the tuple: `Π (multiplicity)!`.
pub fn aut_order(kv: &KVector) -> u64 {
    kv.0.chunk_by(|a, b| a == b)
        .map(|run| factorial(run.len() as u64).to_u64().expect("small factorial"))
        .product()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counts {
    pub simple: usize,
    /// Each solution weighted by `1/|Aut|`.
    pub weighted: Rational,
}

pub fn counts(n: usize) -> Result<Counts> {
    let all = enumerate(n)?;
    let weighted = all
        .iter()
        .map(|kv| Rational::new(BigInt::one(), BigInt::from(aut_order(kv))))
        .fold(Rational::zero(), |acc, x| acc + x);
    Ok(Counts {
        simple: all.len(),
        weighted,
    })
}

/// A weighted homogeneous model of degree `k` with weights `w`, `Σ w_i = k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Model {
    /// Exponent vector the model came from, absent for direct weights.
    #[serde(rename = "k")]
    source: Option<Vec<u64>>,
    #[serde(rename = "lcm")]
    degree: u64,
    w: Vec<u64>,
    name: String,
}

pub fn to_model(kv: &KVector) -> Model {
    let degree = kv.lcm();
    Model {
        source: Some(kv.0.clone()),
        degree,
        w: kv.0.iter().map(|&k| degree / k).collect(),
        name: kv.to_string(),
    }
}

impl Model {
    pub fn from_kvector(kv: &KVector) -> Self {
        to_model(kv)
    }

    /// Model from exponents given in any order.
    pub fn from_parts(parts: &[u64]) -> Result<Self> {
        Ok(to_model(&KVector::new(parts.to_vec())?))
    }

    /// Direct `(k; w_1, …, w_n)` model. Needs `n ≥ 2`, positive weights and `Σ w_i = k`.
    pub fn from_weights(degree: u64, w: Vec<u64>) -> Result<Self> {
        if w.len() < 2 {
            return Err(Error::InvalidModel("need at least two weights".into()));
        }
        if w.contains(&0) {
            return Err(Error::InvalidModel("weights must be positive".into()));
        }
        let total: u64 = w.iter().sum();
        if total != degree {
            return Err(Error::InvalidModel(format!(
                "weights {w:?} sum to {total}, not {degree}"
            )));
        }
        let parts: Vec<String> = w.iter().map(u64::to_string).collect();
        let name = format!("[{degree};{}]", parts.join(","));
        Ok(Self {
            source: None,
            degree,
            w,
            name,
        })
    }

    /// `k`, the degree (the lcm of the exponents when built from a k-vector).
    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn weights(&self) -> &[u64] {
        &self.w
    }

    pub fn kvector(&self) -> Option<KVector> {
        self.source.clone().map(KVector)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of variables `n`.
    pub fn dimension(&self) -> usize {
        self.w.len()
    }

    /// The Fermat family `x_1^n + … + x_n^n`.
    pub fn is_diagonal(&self) -> bool {
        self.degree == self.w.len() as u64 && self.w.iter().all(|&w| w == 1)
    }

    /// Filesystem- and cache-safe identifier, e.g. `k2-3-6` or `w6-3-2-1`.
    pub fn canonical_key(&self) -> String {
        match &self.source {
            Some(parts) => format!("k{}", join(parts, "-")),
            None => format!("w{}-{}", self.degree, join(&self.w, "-")),
        }
    }
}

fn join(values: &[u64], sep: &str) -> String {
    values.iter().map(u64::to_string).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// `j − Σ_i ⌊w_i·j/k⌋ ≥ 1` for every `j = 1..k−1`.
pub fn floor_gap_check(model: &Model) -> bool {
    let k = model.degree;
    (1..k).all(|j| {
        let floors: u64 = model.w.iter().map(|&w| w * j / k).sum();
        j >= floors + 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn kv(parts: &[u64]) -> KVector {
        KVector::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate(2).unwrap(), vec![kv(&[2, 2])]);
        assert_eq!(
            enumerate(3).unwrap(),
            vec![kv(&[2, 3, 6]), kv(&[2, 4, 4]), kv(&[3, 3, 3])]
        );
        assert!(matches!(enumerate(1), Err(Error::Domain(_))));
    }

    #[test]
    fn counts_for_small_n() {
        // (3,3,6,6) is a solution too, so n = 4 has 14.
        assert_eq!(counts(4).unwrap().simple, 14);
        assert_eq!(counts(5).unwrap().simple, 147);
        assert_eq!(counts(3).unwrap().weighted, frac(5, 3));
        assert_eq!(counts(2).unwrap().weighted, frac(1, 2));
    }

    // Independent oracle: scan every non-decreasing tuple with parts up to
    // the largest part that can occur, keeping exact reciprocal sums of one.
    fn brute_force(n: usize, max_part: u64) -> Vec<KVector> {
        fn rec(n: usize, start: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<KVector>) {
            if cur.len() == n {
                if reciprocal_sum(cur).is_one() {
                    out.push(KVector(cur.clone()));
                }
                return;
            }
            for k in start..=max {
                cur.push(k);
                if reciprocal_sum(cur) <= Rational::one() {
                    rec(n, k, max, cur, out);
                }
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, 2, max_part, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        // largest parts: 6 for n = 3, 42 for n = 4
        assert_eq!(enumerate(3).unwrap(), brute_force(3, 6));
        assert_eq!(enumerate(4).unwrap(), brute_force(4, 42));
        assert!(enumerate(4).unwrap().contains(&kv(&[3, 3, 6, 6])));
    }

    #[test]
    fn enumeration_is_sorted_and_valid() {
        let all = enumerate(5).unwrap();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for s in &all {
            assert!(reciprocal_sum(s.parts()).is_one());
            assert!(s.parts().windows(2).all(|w| w[0] <= w[1]));
            assert!(s.parts()[0] >= 2 && s.parts()[0] <= 5);
        }
    }

    #[test]
    fn automorphisms() {
        assert_eq!(aut_order(&kv(&[5, 5, 5, 5, 5])), 120);
        assert_eq!(aut_order(&kv(&[2, 3, 6])), 1);
        assert_eq!(aut_order(&kv(&[2, 4, 4])), 2);
        assert_eq!(aut_order(&kv(&[3, 3, 4, 12])), 2);
    }

    #[test]
    fn models_from_kvectors() {
        let m = kv(&[2, 3, 6]).to_model();
        assert_eq!((m.degree(), m.weights()), (6, &[3, 2, 1][..]));
        let m = kv(&[2, 2]).to_model();
        assert_eq!((m.degree(), m.weights()), (2, &[1, 1][..]));
        let m = kv(&[4, 4, 4, 4]).to_model();
        assert_eq!((m.degree(), m.weights()), (4, &[1, 1, 1, 1][..]));
        assert!(m.is_diagonal());
        assert_eq!(m.canonical_key(), "k4-4-4-4");
    }

    #[test]
    fn kvector_validation() {
        assert_eq!(kv(&[6, 2, 3]).parts(), &[2, 3, 6]);
        assert!(matches!(KVector::new(vec![2, 5]), Err(Error::InvalidModel(_))));
        assert!(matches!(KVector::new(vec![1]), Err(Error::InvalidModel(_))));
        assert!(matches!(KVector::new(vec![0, 2]), Err(Error::InvalidModel(_))));
        // The five-entry Sylvester tuple misses 1/3; the six-entry one is a solution.
        assert!(KVector::new(vec![2, 7, 43, 1807, 3263442]).is_err());
        assert!(KVector::new(vec![2, 3, 7, 43, 1807, 3263442]).is_ok());
    }

    #[test]
    fn direct_weights() {
        let m = Model::from_weights(6, vec![3, 2, 1]).unwrap();
        assert_eq!(m.name(), "[6;3,2,1]");
        assert!(m.kvector().is_none());
        assert!(Model::from_weights(6, vec![3, 2, 2]).is_err());
        assert!(Model::from_weights(2, vec![2]).is_err());
    }

    #[test]
    fn floor_gaps() {
        assert!(floor_gap_check(&kv(&[2, 3, 6]).to_model()));
        assert!(floor_gap_check(&kv(&[2, 2]).to_model()));
        // j = 2: 2 − (1 + 1 + 0) = 0
        assert!(!floor_gap_check(&Model::from_weights(4, vec![2, 2]).unwrap()));
    }

    #[test]
    fn floor_gap_holds_on_all_solutions_up_to_five() {
        for n in 2..=5 {
            for s in enumerate(n).unwrap() {
                assert!(floor_gap_check(&s.to_model()), "{s}");
            }
        }
    }

    #[test]
    fn aut_order_divides_factorial() {
        for s in enumerate(4).unwrap() {
            assert_eq!(24 % aut_order(&s), 0);
        }
        let c = counts(4).unwrap();
        assert!(c.weighted <= Rational::from_integer(c.simple.into()));
    }
}
