use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::constructors::MAX_SUPPORT;
use crate::statecore::SparseState;
use crate::{Error, Rational, Result};

/// Half-open subinterval `[start, end)` of `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub start: Rational,
    pub end: Rational,
}

const ASCII_MAX_WIDTH: u64 = 96;
const SVG_WIDTH: f64 = 800.0;
const SVG_MARGIN: f64 = 10.0;
const SVG_ROW: f64 = 24.0;
const SVG_BAR: f64 = 16.0;

fn total_dim(state: &SparseState) -> BigInt {
    num_traits::Pow::pow(BigInt::from(state.local_dim()), state.num_qudits())
}

/// Each supported string `x` maps to `[v/N^Q, (v+1)/N^Q)` with `v` its base-N value.
/// Adjacent intervals are merged.
pub fn support_intervals(state: &SparseState) -> Result<Vec<Interval>> {
    if state.support_size() > MAX_SUPPORT {
        return Err(Error::guard(format!(
            "support {} exceeds {MAX_SUPPORT}",
            state.support_size()
        )));
    }
    let denom = total_dim(state);
    let n = BigInt::from(state.local_dim());
    let mut out: Vec<Interval> = Vec::new();
    for (idx, _) in state.entries() {
        let v = idx
            .digits()
            .iter()
            .fold(BigInt::from(0), |acc, &d| acc * &n + BigInt::from(d));
        let start = Rational::new(v.clone(), denom.clone());
        let end = Rational::new(v + 1, denom.clone());
        match out.last_mut() {
            Some(last) if last.end == start => last.end = end,
            _ => out.push(Interval { start, end }),
        }
    }
    Ok(out)
}

/// One text row per state. The column count is `max N^Q` capped at 96; a
/// column is `#` when a supported interval overlaps it.
pub fn render_ascii(rows: &[(String, &SparseState)]) -> Result<String> {
    let width = rows
        .iter()
        .map(|(_, s)| {
            total_dim(s)
                .to_u64()
                .unwrap_or(u64::MAX)
                .min(ASCII_MAX_WIDTH)
        })
        .max()
        .unwrap_or(1);
    let label_w = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
    let w = Rational::from_integer(width.into());
    let mut out = String::new();
    for (label, state) in rows {
        let mut cols = vec![false; width as usize];
        for iv in support_intervals(state)? {
            let first = (&iv.start * &w).floor().to_integer();
            let last: BigInt = (&iv.end * &w).ceil().to_integer() - 1;
            let first = first.to_usize().unwrap_or(0);
            let last = last.to_usize().unwrap_or(0).min(width as usize - 1);
            for c in cols.iter_mut().take(last + 1).skip(first) {
                *c = true;
            }
        }
        let bar: String = cols.iter().map(|&b| if b { '#' } else { '.' }).collect();
        writeln!(out, "{label:<label_w$} |{bar}|").unwrap();
    }
    Ok(out)
}

/// SVG 1.1 document with one bar row per state, stacked top to bottom.
pub fn render_svg(rows: &[(String, &SparseState)]) -> Result<String> {
    let height = 2.0 * SVG_MARGIN + SVG_ROW * rows.len() as f64;
    let width = 2.0 * SVG_MARGIN + SVG_WIDTH;
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    let full = Rational::from_integer(BigInt::one());
    for (r, (label, state)) in rows.iter().enumerate() {
        let y = SVG_MARGIN + SVG_ROW * r as f64;
        writeln!(out, r#"<g id="row{r}">"#).unwrap();
        writeln!(out, "<title>{}</title>", escape(label)).unwrap();
        writeln!(
            out,
            r##"<rect x="{SVG_MARGIN:.6}" y="{y:.6}" width="{SVG_WIDTH:.6}" height="{SVG_BAR:.6}" fill="none" stroke="#999999"/>"##
        )
        .unwrap();
        for iv in support_intervals(state)? {
            debug_assert!(iv.end <= full);
            let x0 = iv.start.to_f64().unwrap_or(0.0) * SVG_WIDTH + SVG_MARGIN;
            let w = (&iv.end - &iv.start).to_f64().unwrap_or(0.0) * SVG_WIDTH;
            writeln!(
                out,
                r#"<rect x="{x0:.6}" y="{y:.6}" width="{w:.6}" height="{SVG_BAR:.6}" fill="black"/>"#
            )
            .unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
