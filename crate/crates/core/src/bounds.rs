//! Repetitiveness bounds driven by an attractor size: distinct k-mers,
//! linguistic complexity and the longest repeated substring.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::textcore::{verify_attractor, AttractorSet, SuffixIndex, Text};

/// Distinct k-mer count against the attractor cap `γk`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KmerRow {
    pub k: usize,
    pub count: u64,
    pub cap: u64,
}

/// `counts[k-1]` is the number of distinct substrings of length `k`, for `k` in `1..=n`.
pub fn distinct_kmer_counts(idx: &SuffixIndex) -> Vec<u64> {
    let n = idx.n();
    // row q contributes the lengths lcp[q]+1 ..= n-sa[q]
    let mut diff = vec![0i64; n + 2];
    for q in 1..=n {
        let (lo, hi) = (idx.lcp()[q] + 1, n - idx.sa()[q]);
        if lo <= hi {
            diff[lo] += 1;
            diff[hi + 1] -= 1;
        }
    }
    let mut acc = 0i64;
    (1..=n)
        .map(|k| {
            acc += diff[k];
            acc as u64
        })
        .collect()
}

/// Per-k distinct counts next to `γk`; fails unless `g` is an attractor of `t`.
pub fn kmer_counts(t: &Text, idx: &SuffixIndex, g: &AttractorSet) -> Result<Vec<KmerRow>> {
    let v = verify_attractor(t, idx, g)?;
    if !v.valid {
        return Err(Error::InvalidAttractor(format!(
            "{:?} is not an attractor",
            g.positions()
        )));
    }
    let gamma = g.len() as u64;
    Ok(distinct_kmer_counts(idx)
        .into_iter()
        .enumerate()
        .map(|(i, count)| KmerRow {
            k: i + 1,
            count,
            cap: gamma * (i as u64 + 1),
        })
        .collect())
}

/// `σ^k`, saturated once it exceeds `limit` (the minimum it feeds is unchanged).
fn pow_capped(sigma: usize, k: usize, limit: u64) -> u64 {
    let mut p = 1u64;
    for _ in 0..k {
        p = p.saturating_mul(sigma as u64);
        if p > limit {
            return u64::MAX;
        }
    }
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinguisticComplexity {
    /// Distinct non-empty substrings.
    pub distinct: u64,
    /// `Σ_k min{σ^k, n-k+1}`, the most any text of this length and alphabet can have.
    pub max_possible: u64,
    /// `Σ_k min{σ^k, n-k+1, γk}`.
    pub capped: u64,
    pub lc: f64,
    pub bound: f64,
}

/// Linguistic complexity of `t` and the upper bound implied by an attractor of size `gamma`.
pub fn lc_and_bound(t: &Text, idx: &SuffixIndex, gamma: usize) -> Result<LinguisticComplexity> {
    let (n, sigma) = (t.len(), t.sigma());
    if gamma < sigma {
        return Err(Error::ParameterOutOfRange(format!(
            "attractor size {gamma} is below the alphabet size {sigma}"
        )));
    }
    let (mut max_possible, mut capped) = (0u64, 0u64);
    for k in 1..=n {
        let m = pow_capped(sigma, k, n as u64).min((n - k + 1) as u64);
        max_possible += m;
        capped += m.min((gamma * k) as u64);
    }
    let distinct = idx.count_distinct_substrings();
    Ok(LinguisticComplexity {
        distinct,
        max_possible,
        capped,
        lc: distinct as f64 / max_possible as f64,
        bound: capped as f64 / max_possible as f64,
    })
}

/// Both directions of the relation between `ℓ_max` and the attractor size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LmaxCheck {
    pub lmax: usize,
    pub gamma: usize,
    /// Whether `gamma` is the exact optimum; otherwise only `lower` is meaningful.
    pub exact: bool,
    /// `(n - γ) / (γ + 1)`, which `ℓ_max` must reach.
    pub lower: f64,
    pub lower_holds: bool,
    /// `(n - ℓ_max) / (ℓ_max + 1)`, which an exact `γ` must reach.
    pub reverse: Option<f64>,
    pub reverse_holds: Option<bool>,
}

impl LmaxCheck {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.reverse_holds.unwrap_or(true)
    }
}

pub fn lmax_bounds(t: &Text, idx: &SuffixIndex, gamma: usize, exact: bool) -> LmaxCheck {
    let n = t.len() as f64;
    let lmax = idx.longest_repeated_len();
    let g = gamma as f64;
    let lower = (n - g) / (g + 1.0);
    let reverse = exact.then(|| (n - lmax as f64) / (lmax as f64 + 1.0));
    LmaxCheck {
        lmax,
        gamma,
        exact,
        lower,
        lower_holds: lmax as f64 >= lower,
        reverse,
        reverse_holds: reverse.map(|r| g >= r),
    }
}

/// All bounds for one text and one verified attractor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub sigma: usize,
    pub gamma: usize,
    pub kmers: Vec<KmerRow>,
    pub linguistic: LinguisticComplexity,
    pub lmax: LmaxCheck,
}

impl BoundsReport {
    /// Fails if `g` does not verify or any of the asserted inequalities is violated.
    pub fn build(t: &Text, idx: &SuffixIndex, g: &AttractorSet, exact: bool) -> Result<Self> {
        kmer_counts(t, idx, g)?;
        BoundsReport::from_size(t, idx, g.len(), exact)
    }

    /// Same report for an attractor size known to be achievable (or, with
    /// `exact`, optimal) without the attractor at hand.
    pub fn from_size(t: &Text, idx: &SuffixIndex, gamma: usize, exact: bool) -> Result<Self> {
        if gamma < t.sigma() || gamma > t.len() {
            return Err(Error::ParameterOutOfRange(format!(
                "attractor size {gamma} outside [{}, {}]",
                t.sigma(),
                t.len()
            )));
        }
        let kmers: Vec<KmerRow> = distinct_kmer_counts(idx)
            .into_iter()
            .enumerate()
            .map(|(i, count)| KmerRow {
                k: i + 1,
                count,
                cap: (gamma * (i + 1)) as u64,
            })
            .collect();
        if let Some(r) = kmers.iter().find(|r| r.count > r.cap) {
            return Err(Error::ParameterOutOfRange(format!(
                "{} distinct {}-mers exceed the cap {}: no attractor of size {gamma} exists",
                r.count, r.k, r.cap
            )));
        }
        let linguistic = lc_and_bound(t, idx, gamma)?;
        if linguistic.distinct > linguistic.capped {
            return Err(Error::Internal(
                "linguistic complexity above its bound".into(),
            ));
        }
        let lmax = lmax_bounds(t, idx, gamma, exact);
        if !lmax.holds() {
            return Err(Error::Internal(format!(
                "longest repeat inequality fails: {lmax:?}"
            )));
        }
        Ok(BoundsReport {
            n: t.len(),
            sigma: t.sigma(),
            gamma,
            kmers,
            linguistic,
            lmax,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let l = &self.linguistic;
        let _ = writeln!(
            s,
            "n = {}  sigma = {}  gamma = {}",
            self.n, self.sigma, self.gamma
        );
        let _ = writeln!(s, "distinct substrings  {:>10}", l.distinct);
        let _ = writeln!(s, "max possible         {:>10}", l.max_possible);
        let _ = writeln!(s, "capped by gamma      {:>10}", l.capped);
        let _ = writeln!(s, "LC                   {:>10.4}", l.lc);
        let _ = writeln!(s, "LC bound             {:>10.4}", l.bound);
        let m = &self.lmax;
        let _ = writeln!(s, "l_max                {:>10}  >= {:.4}", m.lmax, m.lower);
        if let Some(r) = m.reverse {
            let _ = writeln!(s, "gamma (exact)        {:>10}  >= {:.4}", m.gamma, r);
        }
        let _ = writeln!(s, "{:>8} {:>10} {:>10}", "k", "k-mers", "gamma*k");
        for r in &self.kmers {
            let _ = writeln!(s, "{:>8} {:>10} {:>10}", r.k, r.count, r.cap);
        }
        s
    }
}
