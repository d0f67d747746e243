//! `strattr`: batch front end for string attractors.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use strattr::adag::{ADag, ADagConfig, DEFAULT_WORD_BITS};
use strattr::bounds::BoundsReport;
use strattr::compressors::{
    attractor_from_bwt_runs, attractor_from_grammar, attractor_from_lz77, attractor_from_macro,
    attractor_from_suffix_tree, bwt_runs, lz77_parse, Lz77Parse, MacroScheme, RlGrammar,
};
use strattr::derive::{measures_report, pad_attractor, parse_from_attractor, slp_from_attractor};
use strattr::textcore::{smallest_attractor_bruteforce, verify_attractor, BRUTE_FORCE_MAX};
use strattr::treeattr::{
    bruteforce_path_attractor, greedy_path_attractor, greedy_string_attractor, tree_from_setcover,
    LabeledTree, SetCoverInstance,
};
use strattr::{AttractorSet, Error, SuffixIndex, Text};

#[derive(Parser)]
#[command(
    name = "strattr",
    version,
    about = "String attractors: compute, verify, convert, extract"
)]
struct Cli {
    /// Keep a trailing newline of text inputs as part of the text.
    #[arg(long, global = true)]
    raw: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Lz77,
    Bwt,
    Grammar,
    Macro,
    Stree,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Encoded {
    Parse,
    Slp,
    Lz77,
}

#[derive(Subcommand)]
enum AdagCmd {
    /// Build the structure and write it in binary form.
    Build {
        text: PathBuf,
        attractor: PathBuf,
        #[arg(long, default_value_t = 2)]
        tau: usize,
        /// Word size in bits used to size query units.
        #[arg(long, default_value_t = DEFAULT_WORD_BITS)]
        word_bits: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Extract `len` characters starting at 1-based `pos`.
    Extract {
        file: PathBuf,
        #[arg(long)]
        pos: usize,
        #[arg(long)]
        len: usize,
    },
    /// Space usage breakdown.
    Space {
        file: PathBuf,
        #[arg(long)]
        table: bool,
    },
}

#[derive(Subcommand)]
enum Cmd {
    /// Attractor induced by a compressor or found greedily.
    Attractor {
        #[arg(value_enum)]
        source: Source,
        text: PathBuf,
        /// Grammar JSON for `grammar` (default: an SLP derived from LZ77).
        #[arg(long)]
        grammar: Option<PathBuf>,
        /// Macro scheme JSON for `macro` (default: the LZ77 parse).
        #[arg(long)]
        scheme: Option<PathBuf>,
    },
    /// Check an attractor against a text.
    Verify { text: PathBuf, attractor: PathBuf },
    /// Smallest attractor by exhaustive search.
    Brute {
        text: PathBuf,
        #[arg(long, default_value_t = 24)]
        limit: usize,
    },
    /// Greedy set-cover attractor.
    Greedy { text: PathBuf },
    /// Greedy path attractor of a labeled tree.
    TreeGreedy { tree: PathBuf },
    /// Smallest path attractor of a labeled tree.
    TreeBrute {
        tree: PathBuf,
        #[arg(long, default_value_t = 256)]
        limit: usize,
    },
    /// Bidirectional parse built around an attractor.
    ToParse { text: PathBuf, attractor: PathBuf },
    /// Straight-line program built around an attractor.
    ToSlp { text: PathBuf, attractor: PathBuf },
    /// Expand a parse, SLP or LZ77 file back to text.
    Decode {
        #[arg(value_enum)]
        kind: Encoded,
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Random-access structure.
    Adag {
        #[command(subcommand)]
        cmd: AdagCmd,
    },
    /// k-mer, linguistic complexity and longest-repeat bounds.
    Bounds {
        text: PathBuf,
        /// Attractor size to evaluate instead of computing one.
        #[arg(long)]
        gamma: Option<usize>,
        #[arg(long)]
        table: bool,
    },
    /// Repetitiveness measures of a text.
    Report {
        text: PathBuf,
        #[arg(long)]
        table: bool,
    },
    /// Labeled tree of the set-cover hardness gadget.
    ReduceSetcover { instance: PathBuf },
}

/// Error tagged with the subcommand it came from.
struct Failure {
    cmd: &'static str,
    code: String,
    message: String,
}

impl Failure {
    fn lib(cmd: &'static str, e: Error) -> Self {
        Failure {
            cmd,
            code: e.code().to_string(),
            message: e.to_string(),
        }
    }

    fn io(cmd: &'static str, path: &Path, e: io::Error) -> Self {
        Failure {
            cmd,
            code: "io".into(),
            message: format!("{}: {e}", path.display()),
        }
    }
}

type CmdResult = Result<Output, Failure>;

enum Output {
    Text(String),
    Bytes(Vec<u8>),
    /// Printed, then the process exits with status 1.
    Negative(String),
}

fn read_input(cmd: &'static str, path: &Path) -> Result<Vec<u8>, Failure> {
    if path.as_os_str() == "-" {
        let mut v = Vec::new();
        io::stdin()
            .read_to_end(&mut v)
            .map_err(|e| Failure::io(cmd, path, e))?;
        Ok(v)
    } else {
        fs::read(path).map_err(|e| Failure::io(cmd, path, e))
    }
}

fn read_string(cmd: &'static str, path: &Path) -> Result<String, Failure> {
    String::from_utf8(read_input(cmd, path)?).map_err(|_| Failure {
        cmd,
        code: "malformed-input".into(),
        message: format!("{} is not UTF-8", path.display()),
    })
}

fn read_text(cmd: &'static str, path: &Path, raw: bool) -> Result<Text, Failure> {
    let mut bytes = read_input(cmd, path)?;
    if !raw && bytes.last() == Some(&b'\n') {
        bytes.pop();
        if bytes.last() == Some(&b'\r') {
            bytes.pop();
        }
    }
    Text::from_bytes(&bytes).map_err(|e| Failure::lib(cmd, e))
}

fn read_attractor(cmd: &'static str, path: &Path, t: &Text) -> Result<AttractorSet, Failure> {
    let g = AttractorSet::from_json(&read_string(cmd, path)?).map_err(|e| Failure::lib(cmd, e))?;
    if g.n() != t.len() {
        return Err(Failure {
            cmd,
            code: "length-mismatch".into(),
            message: format!(
                "attractor is for length {}, text has length {}",
                g.n(),
                t.len()
            ),
        });
    }
    Ok(g)
}

fn run(cli: Cli) -> CmdResult {
    let raw = cli.raw;
    match cli.cmd {
        Cmd::Attractor {
            source,
            text,
            grammar,
            scheme,
        } => {
            let c = "attractor";
            let lib = |e| Failure::lib(c, e);
            let t = read_text(c, &text, raw)?;
            let idx = SuffixIndex::build(&t);
            let lz = || lz77_parse(&t, &idx);
            let g = match source {
                Source::Lz77 => attractor_from_lz77(&lz()),
                Source::Bwt => attractor_from_bwt_runs(&t, &bwt_runs(&t, &idx)),
                Source::Stree => attractor_from_suffix_tree(&idx),
                Source::Greedy => greedy_string_attractor(&t),
                Source::Grammar => {
                    let gr = match grammar {
                        Some(p) => RlGrammar::from_json(&read_string(c, &p)?).map_err(lib)?,
                        None => {
                            let pa = pad_attractor(&t, &idx, &attractor_from_lz77(&lz()))
                                .map_err(lib)?;
                            slp_from_attractor(&t, &idx, &pa)
                                .map_err(lib)?
                                .grammar()
                                .clone()
                        }
                    };
                    attractor_from_grammar(&gr, &t).map_err(lib)?
                }
                Source::Macro => {
                    let ms = match scheme {
                        Some(p) => MacroScheme::from_json(&read_string(c, &p)?).map_err(lib)?,
                        None => lz().to_macro_scheme(),
                    };
                    if ms.decode().map_err(lib)?.text != t.to_bytes() {
                        return Err(Failure {
                            cmd: c,
                            code: "text-mismatch".into(),
                            message: "the macro scheme does not decode to the text".into(),
                        });
                    }
                    attractor_from_macro(&ms).map_err(lib)?
                }
            };
            Ok(Output::Text(g.to_json()))
        }
        Cmd::Verify { text, attractor } => {
            let c = "verify";
            let t = read_text(c, &text, raw)?;
            let g = read_attractor(c, &attractor, &t)?;
            let idx = SuffixIndex::build(&t);
            let v = verify_attractor(&t, &idx, &g).map_err(|e| Failure::lib(c, e))?;
            match v.witness {
                None => Ok(Output::Text("valid".into())),
                Some(w) => Ok(Output::Negative(format!(
                    "invalid\n{}",
                    json!({"witness": {"start": w.start, "end": w.end,
                        "text": String::from_utf8_lossy(&t.slice_bytes(w.start, w.end))}})
                ))),
            }
        }
        Cmd::Brute { text, limit } => {
            let c = "brute";
            let t = read_text(c, &text, raw)?;
            let idx = SuffixIndex::build(&t);
            let g = smallest_attractor_bruteforce(&t, &idx, limit.min(BRUTE_FORCE_MAX))
                .map_err(|e| Failure::lib(c, e))?;
            Ok(Output::Text(g.to_json()))
        }
        Cmd::Greedy { text } => {
            let t = read_text("greedy", &text, raw)?;
            Ok(Output::Text(greedy_string_attractor(&t).to_json()))
        }
        Cmd::TreeGreedy { tree } => {
            let c = "tree-greedy";
            let tr =
                LabeledTree::from_json(&read_string(c, &tree)?).map_err(|e| Failure::lib(c, e))?;
            Ok(Output::Text(greedy_path_attractor(&tr).to_json(&tr)))
        }
        Cmd::TreeBrute { tree, limit } => {
            let c = "tree-brute";
            let lib = |e| Failure::lib(c, e);
            let tr = LabeledTree::from_json(&read_string(c, &tree)?).map_err(lib)?;
            let a = bruteforce_path_attractor(&tr, limit).map_err(lib)?;
            Ok(Output::Text(a.to_json(&tr)))
        }
        Cmd::ToParse { text, attractor } => {
            let c = "to-parse";
            let lib = |e| Failure::lib(c, e);
            let t = read_text(c, &text, raw)?;
            let g = read_attractor(c, &attractor, &t)?;
            let idx = SuffixIndex::build(&t);
            let pa = pad_attractor(&t, &idx, &g).map_err(lib)?;
            let p = parse_from_attractor(&t, &idx, &pa).map_err(lib)?;
            Ok(Output::Text(p.scheme().to_json()))
        }
        Cmd::ToSlp { text, attractor } => {
            let c = "to-slp";
            let lib = |e| Failure::lib(c, e);
            let t = read_text(c, &text, raw)?;
            let g = read_attractor(c, &attractor, &t)?;
            let idx = SuffixIndex::build(&t);
            let pa = pad_attractor(&t, &idx, &g).map_err(lib)?;
            Ok(Output::Text(
                slp_from_attractor(&t, &idx, &pa).map_err(lib)?.to_json(),
            ))
        }
        Cmd::Decode { kind, file, output } => {
            let c = "decode";
            let lib = |e| Failure::lib(c, e);
            let s = read_string(c, &file)?;
            let bytes = match kind {
                Encoded::Parse => {
                    MacroScheme::from_json(&s)
                        .and_then(|m| m.decode())
                        .map_err(lib)?
                        .text
                }
                Encoded::Slp => RlGrammar::from_json(&s).map_err(lib)?.expand(),
                Encoded::Lz77 => Lz77Parse::from_json(&s).map_err(lib)?.decode(),
            };
            match output {
                Some(p) if p.as_os_str() != "-" => {
                    fs::write(&p, &bytes).map_err(|e| Failure::io(c, &p, e))?;
                    Ok(Output::Bytes(Vec::new()))
                }
                _ => Ok(Output::Bytes(bytes)),
            }
        }
        Cmd::Adag { cmd } => run_adag(cmd, raw),
        Cmd::Bounds { text, gamma, table } => {
            let c = "bounds";
            let lib = |e| Failure::lib(c, e);
            let t = read_text(c, &text, raw)?;
            let idx = SuffixIndex::build(&t);
            let report = match gamma {
                Some(g) => BoundsReport::from_size(&t, &idx, g, false),
                None if t.len() <= 16 => smallest_attractor_bruteforce(&t, &idx, 16)
                    .and_then(|g| BoundsReport::build(&t, &idx, &g, true)),
                None => BoundsReport::build(&t, &idx, &greedy_string_attractor(&t), false),
            }
            .map_err(lib)?;
            Ok(Output::Text(if table {
                report.to_table()
            } else {
                report.to_json()
            }))
        }
        Cmd::Report { text, table } => {
            let c = "report";
            let t = read_text(c, &text, raw)?;
            let r = measures_report(&t).map_err(|e| Failure::lib(c, e))?;
            Ok(Output::Text(if table { r.to_table() } else { r.to_json() }))
        }
        Cmd::ReduceSetcover { instance } => {
            let c = "reduce-setcover";
            let lib = |e| Failure::lib(c, e);
            let sc = SetCoverInstance::from_json(&read_string(c, &instance)?).map_err(lib)?;
            let (tree, t) = tree_from_setcover(&sc).map_err(lib)?;
            let mut v: serde_json::Value =
                serde_json::from_str(&tree.to_json()).expect("tree JSON is valid");
            v["t"] = json!(t);
            Ok(Output::Text(v.to_string()))
        }
    }
}

fn run_adag(cmd: AdagCmd, raw: bool) -> CmdResult {
    let c = "adag";
    let lib = |e| Failure::lib(c, e);
    let load = |p: &Path| ADag::from_bytes(&read_input(c, p)?).map_err(lib);
    match cmd {
        AdagCmd::Build {
            text,
            attractor,
            tau,
            word_bits,
            output,
        } => {
            let t = read_text(c, &text, raw)?;
            let g = read_attractor(c, &attractor, &t)?;
            let idx = SuffixIndex::build(&t);
            let d = ADag::build(&t, &idx, &g, ADagConfig::new(tau).with_word_bits(word_bits))
                .map_err(lib)?;
            if output.as_os_str() == "-" {
                return Ok(Output::Bytes(d.to_bytes()));
            }
            fs::write(&output, d.to_bytes()).map_err(|e| Failure::io(c, &output, e))?;
            Ok(Output::Text(d.space_report().to_json()))
        }
        AdagCmd::Extract { file, pos, len } => {
            Ok(Output::Bytes(load(&file)?.extract(pos, len).map_err(lib)?))
        }
        AdagCmd::Space { file, table } => {
            let r = load(&file)?.space_report();
            Ok(Output::Text(if table { r.to_table() } else { r.to_json() }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    match run(cli) {
        Ok(Output::Text(s)) => {
            let _ = writeln!(out, "{}", s.trim_end());
            ExitCode::SUCCESS
        }
        Ok(Output::Bytes(b)) => {
            let _ = out.write_all(&b);
            ExitCode::SUCCESS
        }
        Ok(Output::Negative(s)) => {
            let _ = writeln!(out, "{s}");
            ExitCode::from(1)
        }
        Err(f) => {
            let record =
                json!({"error": {"code": format!("{}.{}", f.cmd, f.code), "message": f.message}});
            eprintln!("{record}");
            ExitCode::from(2)
        }
    }
}
