//! `qfs/1` state files.
//!
//! ```text
//! qfs/1 local_dim=3 num_qudits=2 phase_order=8
//! provenance family=cantor c=2 s=3 n=1
//! 00 0 3:1
//! 01 0 3:1
//! 02 0 3:1
//! ```
//!
//! The provenance line is optional. Each record is
//! `<digits> <phase_index> <base:exp[,base:exp...]>`, or `1` in place of the
//! exponent list for unit magnitude. Digits are concatenated when the local
//! dimension is at most 10 and comma-separated otherwise. Records are
//! strictly ascending by digit string.

use std::fmt::Write as _;
use std::path::Path;

use crate::statecore::{Amplitude, BasisIndex, Provenance, SparseState};
use crate::{Error, Result};

pub const STATE_FORMAT_TAG: &str = "qfs/1";

fn format_digits(idx: &BasisIndex, local_dim: u32) -> String {
    if local_dim <= 10 {
        idx.digits()
            .iter()
            .map(|d| char::from(b'0' + *d as u8))
            .collect()
    } else {
        let parts: Vec<String> = idx.digits().iter().map(u32::to_string).collect();
        parts.join(",")
    }
}

pub fn serialize_state(state: &SparseState) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{STATE_FORMAT_TAG} local_dim={} num_qudits={} phase_order={}",
        state.local_dim(),
        state.num_qudits(),
        state.phase_order()
    )
    .unwrap();
    if let Some(p) = state.provenance() {
        writeln!(
            out,
            "provenance family={} c={} s={} n={}",
            p.family, p.c, p.s, p.n
        )
        .unwrap();
    }
    for (idx, amp) in state.entries() {
        writeln!(out, "{} {amp}", format_digits(idx, state.local_dim())).unwrap();
    }
    out
}

fn key_values<'a>(line: usize, fields: &[&'a str], keys: &[&str]) -> Result<Vec<&'a str>> {
    if fields.len() != keys.len() {
        return Err(Error::parse(
            line,
            format!("expected {} fields", keys.len()),
        ));
    }
    fields
        .iter()
        .zip(keys)
        .map(|(f, k)| {
            f.strip_prefix(k)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| Error::parse(line, format!("expected {k}=..., found {f:?}")))
        })
        .collect()
}

fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("invalid number {s:?}")))
}

fn parse_digits(line: usize, s: &str, local_dim: u32) -> Result<BasisIndex> {
    let digits: Vec<u32> = if local_dim <= 10 {
        s.chars()
            .map(|ch| {
                ch.to_digit(10)
                    .ok_or_else(|| Error::parse(line, format!("invalid digit {ch:?}")))
            })
            .collect::<Result<_>>()?
    } else {
        s.split(',').map(|d| num(line, d)).collect::<Result<_>>()?
    };
    if let Some(d) = digits.iter().find(|&&d| d >= local_dim) {
        return Err(Error::parse(
            line,
            format!("digit {d} >= local_dim {local_dim}"),
        ));
    }
    Ok(BasisIndex::new(digits))
}

fn parse_magnitude(line: usize, s: &str) -> Result<Vec<(u32, i32)>> {
    if s == "1" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|pair| {
            let (b, e) = pair
                .split_once(':')
                .ok_or_else(|| Error::parse(line, format!("expected base:exp, found {pair:?}")))?;
            let b: u32 = num(line, b)?;
            if b < 2 {
                return Err(Error::parse(line, format!("base {b} < 2")));
            }
            Ok((b, num(line, e)?))
        })
        .collect()
}

pub fn parse_state(text: &str) -> Result<SparseState> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "empty file"))?;
    let fields: Vec<&str> = header.split(' ').collect();
    if fields.first() != Some(&STATE_FORMAT_TAG) {
        return Err(Error::parse(ln, format!("missing {STATE_FORMAT_TAG} tag")));
    }
    let vals = key_values(
        ln,
        &fields[1..],
        &["local_dim", "num_qudits", "phase_order"],
    )?;
    let local_dim: u32 = num(ln, vals[0])?;
    let num_qudits: usize = num(ln, vals[1])?;
    let phase_order: u32 = num(ln, vals[2])?;
    if local_dim < 2 || num_qudits == 0 || phase_order == 0 || !phase_order.is_multiple_of(2) {
        return Err(Error::parse(ln, "invalid header values"));
    }

    let mut provenance = None;
    let mut records: Vec<(BasisIndex, Amplitude)> = Vec::new();
    for (ln, line) in lines {
        let fields: Vec<&str> = line.split(' ').collect();
        if fields[0] == "provenance" {
            if provenance.is_some() || !records.is_empty() {
                return Err(Error::parse(
                    ln,
                    "provenance must directly follow the header",
                ));
            }
            let v = key_values(ln, &fields[1..], &["family", "c", "s", "n"])?;
            if v[0].is_empty() {
                return Err(Error::parse(ln, "empty family"));
            }
            provenance = Some(Provenance {
                family: v[0].to_string(),
                c: num(ln, v[1])?,
                s: num(ln, v[2])?,
                n: num(ln, v[3])?,
            });
            continue;
        }
        if fields.len() != 3 {
            return Err(Error::parse(ln, format!("malformed record {line:?}")));
        }
        let idx = parse_digits(ln, fields[0], local_dim)?;
        if idx.len() != num_qudits {
            return Err(Error::parse(
                ln,
                format!("{} digits, expected {num_qudits}", idx.len()),
            ));
        }
        let phase: u32 = num(ln, fields[1])?;
        if phase >= phase_order {
            return Err(Error::parse(
                ln,
                format!("phase {phase} >= phase_order {phase_order}"),
            ));
        }
        let amp = Amplitude::new(phase, phase_order, parse_magnitude(ln, fields[2])?);
        if let Some((prev, _)) = records.last() {
            if *prev == idx {
                return Err(Error::parse(ln, format!("duplicate index {}", fields[0])));
            }
            if *prev > idx {
                return Err(Error::parse(
                    ln,
                    format!("record {} out of order", fields[0]),
                ));
            }
        }
        records.push((idx, amp));
    }
    Ok(
        SparseState::from_entries(local_dim, num_qudits, phase_order, records)?
            .with_provenance(provenance),
    )
}

pub fn read_state(path: &Path) -> Result<SparseState> {
    parse_state(&super::read_text(path)?)
}

pub fn write_state(path: &Path, state: &SparseState) -> Result<()> {
    super::write_atomic(path, &serialize_state(state))
}
