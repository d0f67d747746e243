use std::fmt::Write as _;

use serde::Serialize;

use super::{pad_attractor, parse_from_attractor, slp_from_parse};
use crate::compressors::{
    attractor_from_bwt_runs, attractor_from_lz77, attractor_from_suffix_tree, bwt_runs, lz77_parse,
};
use crate::error::Result;
use crate::textcore::{smallest_attractor_bruteforce, AttractorSet, SuffixIndex, Text};
use crate::treeattr::greedy_string_attractor;

/// Texts up to this length get an exact smallest attractor.
pub const REPORT_BRUTE_MAX: usize = 16;
/// Texts up to this length get the greedy attractor (quadratic).
pub const REPORT_GREEDY_MAX: usize = 2048;

/// Repetitiveness measures of one text plus the sizes of what an attractor derives.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasuresReport {
    pub n: usize,
    pub sigma: usize,
    pub z: usize,
    pub r: usize,
    pub e: usize,
    pub distinct_substrings: u64,
    pub gamma_greedy: Option<usize>,
    pub gamma_exact: Option<usize>,
    /// Size of the attractor the parse and SLP below were derived from.
    pub gamma: usize,
    /// Which attractor that was: `brute`, `greedy`, `lz77`, `bwt` or `stree`.
    pub gamma_source: String,
    pub parse_size: usize,
    pub parse_height: usize,
    pub slp_size: usize,
    /// `parse_size / (γ log2(n/γ))`, absent when `n/γ <= 1`.
    pub parse_ratio: Option<f64>,
    /// `slp_size / (γ log2²(n/γ))`, absent when `n/γ <= 1`.
    pub slp_ratio: Option<f64>,
}

pub fn measures_report(t: &Text) -> Result<MeasuresReport> {
    let n = t.len();
    let idx = SuffixIndex::build(t);
    let lz = lz77_parse(t, &idx);
    let runs = bwt_runs(t, &idx);
    let gamma_exact = if n <= REPORT_BRUTE_MAX {
        Some(smallest_attractor_bruteforce(t, &idx, REPORT_BRUTE_MAX)?)
    } else {
        None
    };
    let gamma_greedy = (n <= REPORT_GREEDY_MAX).then(|| greedy_string_attractor(t));

    let mut candidates: Vec<(&str, AttractorSet)> = Vec::new();
    if let Some(g) = &gamma_exact {
        candidates.push(("brute", g.clone()));
    }
    if let Some(g) = &gamma_greedy {
        candidates.push(("greedy", g.clone()));
    }
    candidates.push(("lz77", attractor_from_lz77(&lz)));
    candidates.push(("bwt", attractor_from_bwt_runs(t, &runs)));
    candidates.push(("stree", attractor_from_suffix_tree(&idx)));
    let (source, best) = candidates
        .into_iter()
        .min_by_key(|(_, g)| g.len())
        .expect("candidates are never empty");

    let pa = pad_attractor(t, &idx, &best)?;
    let parse = parse_from_attractor(t, &idx, &pa)?;
    let slp = slp_from_parse(t, &parse)?;
    let gamma = best.len();
    let log = (n as f64 / gamma as f64).log2();
    let ratio = |size: usize, power: i32| {
        (log > 0.0).then(|| size as f64 / (gamma as f64 * log.powi(power)))
    };
    Ok(MeasuresReport {
        n,
        sigma: t.sigma(),
        z: lz.z(),
        r: runs.r(),
        e: idx.edge_count(),
        distinct_substrings: idx.count_distinct_substrings(),
        gamma_greedy: gamma_greedy.map(|g| g.len()),
        gamma_exact: gamma_exact.map(|g| g.len()),
        gamma,
        gamma_source: source.to_string(),
        parse_size: parse.size(),
        parse_height: parse.height()?,
        slp_size: slp.size(),
        parse_ratio: ratio(parse.size(), 1),
        slp_ratio: ratio(slp.size(), 2),
    })
}

impl MeasuresReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }

    pub fn to_table(&self) -> String {
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
        let optf = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.4}"));
        let rows = [
            ("n", self.n.to_string()),
            ("sigma", self.sigma.to_string()),
            ("z", self.z.to_string()),
            ("r", self.r.to_string()),
            ("e", self.e.to_string()),
            ("distinct substrings", self.distinct_substrings.to_string()),
            ("gamma (greedy)", opt(self.gamma_greedy)),
            ("gamma (exact)", opt(self.gamma_exact)),
            (
                "gamma used",
                format!("{} ({})", self.gamma, self.gamma_source),
            ),
            ("parse size", self.parse_size.to_string()),
            ("parse height", self.parse_height.to_string()),
            ("slp size", self.slp_size.to_string()),
            ("parse ratio", optf(self.parse_ratio)),
            ("slp ratio", optf(self.slp_ratio)),
        ];
        let mut s = String::new();
        for (k, v) in rows {
            let _ = writeln!(s, "{k:<20} {v:>12}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_report() {
        let t = Text::from_bytes(b"CDABCCDABCCA").unwrap();
        let r = measures_report(&t).unwrap();
        assert_eq!(r.z, 8);
        assert_eq!(r.gamma_exact, Some(4));
        assert_eq!(r.gamma, 4);
        assert_eq!(r.gamma_source, "brute");
        assert!(r.to_table().contains("gamma (exact)"));
        assert!(r.to_json().starts_with("{\"n\":12,"));
    }

    #[test]
    fn unary_measures_stay_small() {
        for k in 2..=9 {
            let t = Text::from_bytes(&vec![b'a'; 1 << k]).unwrap();
            let r = measures_report(&t).unwrap();
            assert!(
                r.z <= 2 * k + 1 && r.r <= 2,
                "n = {}: z = {}, r = {}",
                1 << k,
                r.z,
                r.r
            );
        }
    }

    #[test]
    fn single_symbol() {
        let r = measures_report(&Text::from_bytes(b"x").unwrap()).unwrap();
        assert_eq!((r.gamma, r.parse_ratio), (1, None));
    }
}
