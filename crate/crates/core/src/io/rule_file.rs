//! `qfs-rule/1` scale-rule files.
//!
//! ```text
//! qfs-rule/1
//! c=2 s=3 phase_order=8
//! # slot <1-based slot> <index> predecessor | basis:<digits> | file:<path>
//! slot 1 0 predecessor
//! slot 2 0 basis:00
//! # coef <i_1,...,i_c> <phase_index>
//! coef 0,0 0
//! ```
//!
//! Blank lines and `#` comments are ignored. `file:` paths are resolved
//! relative to the directory holding the rule file.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use crate::constructors::{Coefficient, ScaleRule, SlotVector};
use crate::statecore::{BasisIndex, SparseState};
use crate::{Error, Result};

pub const RULE_FORMAT_TAG: &str = "qfs-rule/1";

/// Renders a rule. `named` supplies the `file:` reference for each named slot vector.
pub fn serialize_rule(
    rule: &ScaleRule,
    mut named: impl FnMut(&SparseState) -> Result<String>,
) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "{RULE_FORMAT_TAG}").unwrap();
    writeln!(
        out,
        "c={} s={} phase_order={}",
        rule.c, rule.s, rule.phase_order
    )
    .unwrap();
    for (j, table) in rule.slots.iter().enumerate() {
        for (i, v) in table {
            let entry = match v {
                SlotVector::Predecessor => "predecessor".to_string(),
                SlotVector::Basis(idx) => format!("basis:{idx}"),
                SlotVector::Named(st) => format!("file:{}", named(st)?),
            };
            writeln!(out, "slot {} {i} {entry}", j + 1).unwrap();
        }
    }
    for coef in &rule.coefficients {
        let idx: Vec<String> = coef.indices.iter().map(usize::to_string).collect();
        writeln!(out, "coef {} {}", idx.join(","), coef.phase).unwrap();
    }
    Ok(out)
}

fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("invalid number {s:?}")))
}

/// Parses a rule; `base_dir` anchors `file:` references.
pub fn parse_rule(text: &str, base_dir: Option<&Path>) -> Result<ScaleRule> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, RULE_FORMAT_TAG)) => {}
        Some((ln, _)) => return Err(Error::parse(ln, format!("missing {RULE_FORMAT_TAG} tag"))),
        None => return Err(Error::parse(1, "empty rule file")),
    }
    let (ln, params) = lines
        .next()
        .ok_or_else(|| Error::parse(2, "missing parameters"))?;
    let mut c = None;
    let mut s = None;
    let mut phase_order = crate::statecore::DEFAULT_PHASE_ORDER;
    for kv in params.split_whitespace() {
        match kv.split_once('=') {
            Some(("c", v)) => c = Some(num::<usize>(ln, v)?),
            Some(("s", v)) => s = Some(num::<usize>(ln, v)?),
            Some(("phase_order", v)) => phase_order = num(ln, v)?,
            _ => return Err(Error::parse(ln, format!("unexpected parameter {kv:?}"))),
        }
    }
    let c = c.ok_or_else(|| Error::parse(ln, "missing c"))?;
    let s = s.ok_or_else(|| Error::parse(ln, "missing s"))?;
    if c < 2 {
        return Err(Error::parse(ln, "c must exceed 1"));
    }

    let mut slots: Vec<BTreeMap<usize, SlotVector>> = vec![BTreeMap::new(); c];
    let mut coefficients = Vec::new();
    for (ln, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        match f.as_slice() {
            ["slot", j, i, entry] => {
                let j: usize = num(ln, j)?;
                if j == 0 || j > c {
                    return Err(Error::parse(ln, format!("slot {j} outside 1..={c}")));
                }
                let i: usize = num(ln, i)?;
                let v = if *entry == "predecessor" {
                    SlotVector::Predecessor
                } else if let Some(d) = entry.strip_prefix("basis:") {
                    let digits = if d.contains(',') {
                        d.split(',')
                            .map(|x| num(ln, x))
                            .collect::<Result<Vec<u32>>>()?
                    } else {
                        d.chars()
                            .map(|ch| {
                                ch.to_digit(10).ok_or_else(|| {
                                    Error::parse(ln, format!("invalid digit {ch:?}"))
                                })
                            })
                            .collect::<Result<_>>()?
                    };
                    SlotVector::Basis(BasisIndex::new(digits))
                } else if let Some(p) = entry.strip_prefix("file:") {
                    let path = match base_dir {
                        Some(dir) => dir.join(p),
                        None => Path::new(p).to_path_buf(),
                    };
                    SlotVector::Named(Arc::new(super::read_state(&path)?))
                } else {
                    return Err(Error::parse(ln, format!("unknown slot entry {entry:?}")));
                };
                if slots[j - 1].insert(i, v).is_some() {
                    return Err(Error::parse(
                        ln,
                        format!("slot {j} index {i} defined twice"),
                    ));
                }
            }
            ["coef", idx, phase] => {
                let indices = idx
                    .split(',')
                    .map(|x| num(ln, x))
                    .collect::<Result<Vec<usize>>>()?;
                coefficients.push(Coefficient::new(indices, num(ln, phase)?));
            }
            _ => return Err(Error::parse(ln, format!("malformed line {line:?}"))),
        }
    }
    ScaleRule::new(c, s, phase_order, slots, coefficients)
}

pub fn read_rule(path: &Path) -> Result<ScaleRule> {
    parse_rule(&super::read_text(path)?, path.parent())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{build_bell_pair, Sign};

    fn no_named(_: &SparseState) -> Result<String> {
        Err(Error::InvalidParams("unexpected named slot".into()))
    }

    #[test]
    fn cantor_rule_text() {
        let text = serialize_rule(&ScaleRule::cantor(2).unwrap(), no_named).unwrap();
        let want = "qfs-rule/1\nc=2 s=3 phase_order=8\n\
            slot 1 0 predecessor\nslot 1 1 predecessor\nslot 1 2 predecessor\n\
            slot 2 0 basis:00\nslot 2 1 basis:11\nslot 2 2 basis:22\n\
            coef 0,0 0\ncoef 1,1 0\ncoef 2,2 0\n";
        assert_eq!(text, want);
        assert_eq!(
            parse_rule(&text, None).unwrap(),
            ScaleRule::cantor(2).unwrap()
        );
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# bit flip\nqfs-rule/1\n\nc=3 s=1\nslot 1 0 predecessor\nslot 2 0 basis:1\nslot 3 0 basis:1\ncoef 0,0,0 0\n";
        assert_eq!(
            parse_rule(text, None).unwrap(),
            ScaleRule::bitflip(1, 1).unwrap()
        );
    }

    #[test]
    fn named_slots_load_from_files() {
        let dir = tempfile::tempdir().unwrap();
        let rule = ScaleRule::gem(build_bell_pair(Sign::Plus), Sign::Minus).unwrap();
        let text = serialize_rule(&rule, |st| {
            super::super::write_state(&dir.path().join("plus.qfs"), st)?;
            Ok("plus.qfs".into())
        })
        .unwrap();
        assert!(text.contains("slot 1 0 file:plus.qfs"));
        assert!(text.contains("coef 1,0 4"));
        let path = dir.path().join("gem.rule");
        std::fs::write(&path, &text).unwrap();
        assert_eq!(read_rule(&path).unwrap(), rule);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_rule("", None).is_err());
        assert!(parse_rule("rule\nc=2 s=1\n", None).is_err());
        assert!(parse_rule("qfs-rule/1\ns=1\n", None).is_err());
        let base = "qfs-rule/1\nc=2 s=1\n";
        for body in [
            "slot 3 0 predecessor\n",
            "slot 1 0 nothing\n",
            "slot 1 0 predecessor\nslot 1 0 predecessor\n",
            "coef 0 0\n",
            "slot 1 0 file:/nonexistent/x.qfs\n",
            "bogus\n",
        ] {
            assert!(
                parse_rule(&format!("{base}{body}"), None).is_err(),
                "{body}"
            );
        }
    }
}
