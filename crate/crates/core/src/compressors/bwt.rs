use crate::textcore::{AttractorSet, Provenance, SuffixIndex, Text};

/// BWT of `T·$` with its equal-letter runs.
///
/// Symbols are ranks; 0 stands for the sentinel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BwtRuns {
    bwt: Vec<u32>,
    run_starts: Vec<usize>,
    /// 1-based position of the character `bwt[q]` in `T`; `None` on the sentinel row.
    row_to_text: Vec<Option<usize>>,
}

impl BwtRuns {
    pub fn bwt(&self) -> &[u32] {
        &self.bwt
    }

    /// Rows `q > 0` with `bwt[q] != bwt[q-1]`, plus row 0.
    pub fn run_starts(&self) -> &[usize] {
        &self.run_starts
    }

    pub fn row_to_text(&self) -> &[Option<usize>] {
        &self.row_to_text
    }

    /// Number of equal-letter runs in `BWT(T·$)`.
    pub fn r(&self) -> usize {
        self.run_starts.len()
    }

    /// Renders the BWT with `$` for the sentinel.
    pub fn render(&self, t: &Text) -> String {
        self.bwt
            .iter()
            .map(|&c| {
                if c == 0 {
                    '$'
                } else {
                    t.rank_to_byte(c) as char
                }
            })
            .collect()
    }

    /// Inverts the transform by LF-mapping, returning symbol ranks of `T`.
    pub fn invert(&self) -> Vec<u32> {
        let len = self.bwt.len();
        let sigma = *self.bwt.iter().max().unwrap_or(&0) as usize;
        let mut counts = vec![0usize; sigma + 2];
        for &c in &self.bwt {
            counts[c as usize + 1] += 1;
        }
        for c in 1..counts.len() {
            counts[c] += counts[c - 1];
        }
        let mut seen = vec![0usize; sigma + 1];
        let lf: Vec<usize> = self
            .bwt
            .iter()
            .map(|&c| {
                let r = counts[c as usize] + seen[c as usize];
                seen[c as usize] += 1;
                r
            })
            .collect();
        let mut out = vec![0u32; len - 1];
        let mut q = 0;
        for k in (0..len - 1).rev() {
            out[k] = self.bwt[q];
            q = lf[q];
        }
        out
    }
}

pub fn bwt_runs(t: &Text, idx: &SuffixIndex) -> BwtRuns {
    let ranks = t.ranks();
    let sa = idx.sa();
    let bwt: Vec<u32> = sa
        .iter()
        .map(|&p| if p == 0 { 0 } else { ranks[p - 1] })
        .collect();
    let row_to_text = sa
        .iter()
        .map(|&p| if p == 0 { None } else { Some(p) })
        .collect();
    let run_starts = (0..bwt.len())
        .filter(|&q| q == 0 || bwt[q] != bwt[q - 1])
        .collect();
    BwtRuns {
        bwt,
        run_starts,
        row_to_text,
    }
}

/// Text positions of the first and last character of every BWT run, plus `n`.
///
/// Position `n` stands in for the character lost on the sentinel row.
pub fn attractor_from_bwt_runs(t: &Text, runs: &BwtRuns) -> AttractorSet {
    let rows = runs.bwt.len();
    let mut positions = vec![t.len()];
    for (k, &start) in runs.run_starts.iter().enumerate() {
        let end = runs
            .run_starts
            .get(k + 1)
            .map_or(rows - 1, |&next| next - 1);
        positions.extend(runs.row_to_text[start]);
        positions.extend(runs.row_to_text[end]);
    }
    AttractorSet::new(t.len(), positions, Provenance::BwtRuns).expect("rows map inside the text")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textcore::verify_attractor;

    fn build(s: &[u8]) -> (Text, SuffixIndex, BwtRuns) {
        let t = Text::from_bytes(s).unwrap();
        let idx = SuffixIndex::build(&t);
        let runs = bwt_runs(&t, &idx);
        (t, idx, runs)
    }

    /// Sorts the rotations of `s$` directly.
    fn rotation_bwt(s: &[u8]) -> String {
        let mut u: Vec<u8> = s.iter().map(|&c| c + 1).collect();
        u.push(0);
        let mut rots: Vec<Vec<u8>> = (0..u.len()).map(|k| [&u[k..], &u[..k]].concat()).collect();
        rots.sort();
        rots.iter()
            .map(|r| {
                let c = *r.last().unwrap();
                if c == 0 {
                    '$'
                } else {
                    (c - 1) as char
                }
            })
            .collect()
    }

    #[test]
    fn examples() {
        let (t, _, runs) = build(b"banana");
        assert_eq!(runs.render(&t), "annb$aa");
        assert_eq!(runs.r(), 5);
        let (t, _, runs) = build(b"a");
        assert_eq!(runs.render(&t), "a$");
        assert_eq!(runs.r(), 2);
        let (t, _, runs) = build(b"aaaa");
        assert_eq!(runs.render(&t), "aaaa$");
        assert_eq!(runs.r(), 2);
    }

    #[test]
    fn agrees_with_rotation_sort_and_inverts() {
        for s in [
            &b"banana"[..],
            b"mississippi",
            b"abracadabra",
            b"aabaaabaab",
            b"zyx",
        ] {
            let (t, _, runs) = build(s);
            assert_eq!(runs.render(&t), rotation_bwt(s));
            assert_eq!(runs.invert(), t.ranks());
        }
    }

    #[test]
    fn induced_attractors() {
        let (t, idx, runs) = build(b"banana");
        let g = attractor_from_bwt_runs(&t, &runs);
        assert_eq!(g.positions(), &[1, 2, 3, 4, 5, 6]);
        assert!(g.len() <= 2 * runs.r());
        assert!(verify_attractor(&t, &idx, &g).unwrap().valid);

        let (t, _, runs) = build(b"a");
        assert_eq!(attractor_from_bwt_runs(&t, &runs).positions(), &[1]);

        let (t, idx, runs) = build(b"aaaa");
        let g = attractor_from_bwt_runs(&t, &runs);
        assert!(g.len() <= 4);
        assert!(verify_attractor(&t, &idx, &g).unwrap().valid);
    }
}
