//! Plain-text form of an atlas.
//!
//! ```text
//! atlas hilb21 k=2
//! chart V2
//!   even b1 inv; even b2 inv; odd beta1; odd beta2;
//!   locus b1*b2 - 1
//! transition V3 -> V1
//!   a1 := c1 - c2^-2*gamma1*gamma2
//!   alpha1 := ... over ...
//! ```
//!
//! A rule with a denominator is written `numerator over denominator`.

use std::collections::BTreeMap;

use super::{Atlas, SuperChart, TransitionMap};
use crate::error::{ChartError, ParseError};
use crate::fraction::Frac;
use crate::parser::{parse_poly, parse_ring, pretty, RingDecl};

pub fn frac_text(f: &Frac) -> String {
    if f.is_poly() {
        pretty(f.numerator())
    } else {
        format!("{} over {}", pretty(f.numerator()), pretty(&f.denominator()))
    }
}

pub fn parse_frac(text: &str, ring: &RingDecl) -> Result<Frac, ChartError> {
    match text.split_once(" over ") {
        None => Ok(Frac::from(parse_poly(text, ring)?)),
        Some((num, den)) => {
            let num = parse_poly(num, ring)?;
            let den = parse_poly(den, ring)?;
            Frac::new(num, den).map_err(|e| ChartError::Parse(syntax(0, &e.to_string())))
        }
    }
}

fn syntax(line: usize, message: &str) -> ParseError {
    ParseError::Syntax {
        line,
        column: 1,
        message: message.into(),
    }
}

impl Atlas {
    pub fn to_text(&self) -> String {
        let mut out = format!("atlas {} k={}\n", self.name, self.k);
        for c in &self.charts {
            out.push_str(&format!("chart {}\n", c.name));
            let ring = c.ring().expect("chart names are unique");
            out.push_str(&format!("  {}\n", ring.to_text()));
            for l in &c.loci {
                out.push_str(&format!("  locus {}\n", pretty(l)));
            }
        }
        for t in self.transitions.values() {
            out.push_str(&format!("transition {} -> {}\n", t.source, t.target));
            for (v, r) in &t.rules {
                out.push_str(&format!("  {} := {}\n", v.name(), frac_text(r)));
            }
        }
        out
    }
}

enum Block {
    None,
    Chart(SuperChart, bool),
    Transition(TransitionMap),
}

/// Reads the format written by [`Atlas::to_text`].
pub fn parse_atlas(text: &str) -> Result<Atlas, ChartError> {
    let mut atlas: Option<Atlas> = None;
    let mut block = Block::None;
    let flush = |atlas: &mut Option<Atlas>, block: Block| {
        if let Some(a) = atlas.as_mut() {
            match block {
                Block::Chart(c, _) => a.charts.push(c),
                Block::Transition(t) => a.insert(t),
                Block::None => {}
            }
        }
    };
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim_end();
        if line.trim().is_empty() {
            continue;
        }
        let indented = line.starts_with(' ') || line.starts_with('\t');
        let line = line.trim();
        if !indented {
            flush(&mut atlas, std::mem::replace(&mut block, Block::None));
            let mut words = line.split_whitespace();
            match words.next() {
                Some("atlas") => {
                    let name = words.next().ok_or_else(|| syntax(line_no, "atlas needs a name"))?;
                    let k = words
                        .next()
                        .and_then(|w| w.strip_prefix("k="))
                        .and_then(|w| w.parse::<i32>().ok())
                        .ok_or_else(|| syntax(line_no, "expected k=<integer>"))?;
                    atlas = Some(Atlas {
                        name: name.into(),
                        k,
                        charts: Vec::new(),
                        transitions: BTreeMap::new(),
                    });
                }
                Some(kw) if atlas.is_none() => return Err(syntax(line_no, &format!("`{kw}` before the atlas line")).into()),
                Some("chart") => {
                    let name = words.next().ok_or_else(|| syntax(line_no, "chart needs a name"))?;
                    block = Block::Chart(SuperChart::new(name, vec![], vec![], vec![])?, false);
                }
                Some("transition") => {
                    let rest: Vec<&str> = words.collect();
                    if rest.len() != 3 || rest[1] != "->" {
                        return Err(syntax(line_no, "expected `transition A -> B`").into());
                    }
                    let a = atlas.as_ref().unwrap();
                    a.chart(rest[0])?;
                    a.chart(rest[2])?;
                    block = Block::Transition(TransitionMap {
                        source: rest[0].into(),
                        target: rest[2].into(),
                        rules: BTreeMap::new(),
                    });
                }
                _ => return Err(syntax(line_no, "expected atlas, chart or transition").into()),
            }
            continue;
        }
        match &mut block {
            Block::Chart(chart, declared) => {
                if let Some(expr) = line.strip_prefix("locus ") {
                    let locus = parse_poly(expr, &chart.ring()?)?;
                    chart.loci.push(locus);
                } else if !*declared {
                    let ring = parse_ring(line)?;
                    chart.even = ring.vars().iter().filter(|v| !v.is_odd()).cloned().collect();
                    chart.odd = ring.vars().iter().filter(|v| v.is_odd()).cloned().collect();
                    *declared = true;
                } else {
                    return Err(syntax(line_no, "chart already has coordinates").into());
                }
            }
            Block::Transition(t) => {
                let (lhs, rhs) = line
                    .split_once(":=")
                    .ok_or_else(|| syntax(line_no, "expected `coordinate := expression`"))?;
                let a = atlas.as_ref().unwrap();
                let target = a.chart(&t.target)?.ring()?;
                let v = target
                    .get(lhs.trim())
                    .cloned()
                    .ok_or_else(|| ParseError::UnknownVariable {
                        name: lhs.trim().into(),
                        line: line_no,
                        column: 1,
                    })?;
                let rule = parse_frac(rhs.trim(), &a.chart(&t.source)?.ring()?)?;
                t.rules.insert(v, rule);
            }
            Block::None => return Err(syntax(line_no, "indented line outside a block").into()),
        }
    }
    flush(&mut atlas, block);
    atlas.ok_or_else(|| syntax(1, "empty atlas").into())
}
