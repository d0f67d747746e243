//! Little-endian binary form: header, alphabet, attractor positions,
//! coordinate tables level by level, then packed leaves.

use std::io::{Read, Write};

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};

use super::{block_len, ADag, Coord, Leaf};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"ADAG";
const VERSION: u32 = 1;
const ABSENT: u64 = u64::MAX;

fn io_err(e: std::io::Error) -> Error {
    Error::Format(format!("A-DAG stream: {e}"))
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

impl ADag {
    pub fn write_to(&self, out: &mut impl Write) -> Result<()> {
        let w = |out: &mut dyn Write, v: usize| out.write_u64::<LE>(v as u64).map_err(io_err);
        out.write_all(MAGIC).map_err(io_err)?;
        out.write_u32::<LE>(VERSION).map_err(io_err)?;
        for v in [
            self.n,
            self.alphabet.len(),
            self.gamma(),
            self.tau,
            self.w,
            self.depth,
            self.alpha,
            self.top_len,
        ] {
            w(out, v)?;
        }
        out.write_all(&self.alphabet).map_err(io_err)?;
        for &p in &self.positions {
            w(out, p)?;
        }
        let coord = |out: &mut dyn Write, c: Option<Coord>| -> Result<()> {
            match c {
                Some(c) => {
                    w(out, c.off)?;
                    w(out, c.j)
                }
                None => {
                    out.write_u64::<LE>(ABSENT).map_err(io_err)?;
                    out.write_u64::<LE>(ABSENT).map_err(io_err)
                }
            }
        };
        w(out, self.top.len())?;
        for &c in &self.top {
            coord(out, Some(c))?;
        }
        for level in &self.levels {
            w(out, level.len())?;
            for &c in level {
                coord(out, c)?;
            }
        }
        w(out, self.leaves.len())?;
        for leaf in &self.leaves {
            w(out, leaf.start)?;
            w(out, leaf.len)?;
            w(out, leaf.words.len())?;
            for &x in &leaf.words {
                out.write_u64::<LE>(x).map_err(io_err)?;
            }
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut v = Vec::new();
        self.write_to(&mut v)
            .expect("writing to memory cannot fail");
        v
    }

    /// Reads and checks a structure written by [`ADag::write_to`].
    pub fn read_from(input: &mut impl Read) -> Result<ADag> {
        let mut magic = [0u8; 4];
        input.read_exact(&mut magic).map_err(io_err)?;
        if &magic != MAGIC {
            return Err(bad("not an A-DAG file"));
        }
        let version = input.read_u32::<LE>().map_err(io_err)?;
        if version != VERSION {
            return Err(bad(format!("unsupported A-DAG version {version}")));
        }
        let r = |input: &mut dyn Read| -> Result<usize> {
            let v = input.read_u64::<LE>().map_err(io_err)?;
            usize::try_from(v).map_err(|_| bad("value does not fit in memory"))
        };
        let n = r(input)?;
        let sigma = r(input)?;
        let gamma = r(input)?;
        let tau = r(input)?;
        let w = r(input)?;
        let depth = r(input)?;
        let alpha = r(input)?;
        let top_len = r(input)?;
        if n == 0 || sigma == 0 || sigma > 256 || gamma == 0 || gamma > n || tau < 2 || alpha == 0 {
            return Err(bad("inconsistent A-DAG header"));
        }
        if top_len != block_len(n, gamma, tau, 0) || depth > 64 {
            return Err(bad("inconsistent A-DAG geometry"));
        }
        let mut alphabet = vec![0u8; sigma];
        input.read_exact(&mut alphabet).map_err(io_err)?;
        let positions = (0..gamma).map(|_| r(input)).collect::<Result<Vec<_>>>()?;
        if positions.windows(2).any(|p| p[0] >= p[1])
            || positions[0] == 0
            || positions[gamma - 1] > n
        {
            return Err(bad(
                "attractor positions must be increasing inside the text",
            ));
        }
        let coord = |input: &mut dyn Read| -> Result<Option<Coord>> {
            let off = input.read_u64::<LE>().map_err(io_err)?;
            let j = input.read_u64::<LE>().map_err(io_err)?;
            if off == ABSENT && j == ABSENT {
                return Ok(None);
            }
            if j as usize >= gamma || off as usize >= n {
                return Err(bad("coordinate outside the attractor"));
            }
            Ok(Some(Coord {
                off: off as usize,
                j: j as usize,
            }))
        };
        let slots = 8 * tau - 1;
        let mut dag = ADag {
            n,
            alphabet,
            tau,
            w,
            alpha,
            depth,
            positions,
            top_len,
            top: Vec::new(),
            levels: Vec::new(),
            leaves: Vec::new(),
        };
        let top_count = r(input)?;
        let expect_top = if depth == 0 { 0 } else { n.div_ceil(top_len) };
        if top_count != expect_top {
            return Err(bad("wrong number of level-0 blocks"));
        }
        for _ in 0..top_count {
            dag.top
                .push(coord(input)?.ok_or_else(|| bad("level-0 block without coordinate"))?);
        }
        for _ in 1..depth.max(1) {
            let count = r(input)?;
            if count != gamma * slots {
                return Err(bad("wrong coordinate table size"));
            }
            let level = (0..count)
                .map(|_| coord(input))
                .collect::<Result<Vec<_>>>()?;
            dag.levels.push(level);
        }
        let leaf_count = r(input)?;
        if leaf_count != if depth == 0 { 1 } else { gamma } {
            return Err(bad("wrong number of leaves"));
        }
        let bits = super::bits_per_symbol(sigma);
        for k in 0..leaf_count {
            let start = r(input)?;
            let len = r(input)?;
            let words = r(input)?;
            let (a, b) = if depth == 0 {
                (1, n)
            } else {
                dag.region(depth, k)
            };
            if start != a || len != b - a + 1 || words != (len * bits).div_ceil(64) {
                return Err(bad("leaf does not match its region"));
            }
            let words = (0..words)
                .map(|_| input.read_u64::<LE>().map_err(io_err))
                .collect::<Result<Vec<_>>>()?;
            dag.leaves.push(Leaf { start, len, words });
        }
        Ok(dag)
    }

    pub fn from_bytes(mut bytes: &[u8]) -> Result<ADag> {
        let dag = ADag::read_from(&mut bytes)?;
        if !bytes.is_empty() {
            return Err(bad("trailing bytes after the A-DAG"));
        }
        Ok(dag)
    }
}
