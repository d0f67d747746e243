//! From an attractor back to compressed representations: a bidirectional
//! parse and a straight-line program, plus the measures report.

mod padding;
mod parse;
mod report;
mod slp;

pub use padding::{max_gap, pad_attractor, PaddedAttractor};
pub use parse::{parse_from_attractor, BidirectionalParse, GapStats};
pub use report::{measures_report, MeasuresReport, REPORT_BRUTE_MAX, REPORT_GREEDY_MAX};
pub use slp::{slp_from_attractor, slp_from_parse, LeveledRule, PhraseCharge, Slp};
