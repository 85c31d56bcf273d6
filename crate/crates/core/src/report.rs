//! Run reports and the enumerator text format.
//!
//! The enumerator mirrors the usual polynomial notation: terms ascend by
//! weight, the weight-0 term prints as its bare count, and a
//! coefficient of 1 is omitted for positive weights
//! ("1+576x^48+576x^54+...").  JSON counts render as numbers up to
//! 2^53-1 and as decimal strings beyond.

use crate::chars::periods_closed_n2;
use crate::closedform::select_case;
use crate::code::{CodeParams, WeightDistribution};
use crate::curve::{primary_pi, trace_power};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

const JSON_INT_MAX: u128 = (1 << 53) - 1;

#[derive(Serialize, Clone, Debug)]
pub struct ParamsEcho {
    pub p: u64,
    pub s: u32,
    pub m: u32,
    pub h: u64,
    pub e: u64,
    pub q: u64,
    pub r: u64,
    pub n: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub modulus: String,
    pub generator: String,
}

#[derive(Serialize, Clone, Debug)]
#[serde(untagged)]
pub enum PiRepr {
    Gaussian { re: i128, im: i128 },
    Supersingular(String),
}

#[derive(Serialize, Clone, Debug)]
pub struct DistEntry {
    pub weight: u64,
    pub count: serde_json::Value,
}

#[derive(Serialize, Clone, Debug)]
pub struct RunReport {
    pub params: ParamsEcho,
    pub case: Option<String>,
    pub eta: Option<(i128, i128)>,
    pub pi: Option<PiRepr>,
    pub pi_trace: Option<i128>,
    pub distribution: Vec<DistEntry>,
    pub enumerator: String,
    pub method: String,
    pub agreement: Option<bool>,
    pub elapsed_ms: u128,
}

fn count_value(c: u128) -> serde_json::Value {
    if c <= JSON_INT_MAX {
        serde_json::Value::from(c as u64)
    } else {
        serde_json::Value::from(c.to_string())
    }
}

impl RunReport {
    pub fn build(
        params: &CodeParams,
        dist: &WeightDistribution,
        method: &str,
        agreement: Option<bool>,
        elapsed_ms: u128,
    ) -> Self {
        let ctx = params.field();
        let echo = ParamsEcho {
            p: params.p,
            s: params.s,
            m: params.m,
            h: params.h,
            e: params.e,
            q: params.q,
            r: params.r,
            n: params.n,
            big_n: params.big_n,
            modulus: ctx
                .modulus()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(","),
            generator: ctx.format_elem(ctx.generator()),
        };
        let closed_ctx = params.e == 4 && params.big_n == 2 && params.p != 2;
        let case = closed_ctx.then(|| {
            if select_case(params).map(|c| c.gb1_square).unwrap_or(false) {
                "square".to_string()
            } else {
                "nonsquare".to_string()
            }
        });
        let eta = closed_ctx
            .then(|| periods_closed_n2(params.p, params.s, params.m).ok())
            .flatten();
        let pi = closed_ctx.then(|| {
            if params.p % 4 == 1 {
                let z = primary_pi(params.p).unwrap();
                PiRepr::Gaussian { re: z.re, im: z.im }
            } else {
                PiRepr::Supersingular(format!("i*sqrt({})", params.p))
            }
        });
        let pi_trace = closed_ctx
            .then(|| trace_power(params.p, params.s * params.m).ok())
            .flatten();
        RunReport {
            params: echo,
            case,
            eta,
            pi,
            pi_trace,
            distribution: dist
                .entries
                .iter()
                .map(|(&w, &c)| DistEntry {
                    weight: w,
                    count: count_value(c),
                })
                .collect(),
            enumerator: format_enumerator(dist),
            method: method.to_string(),
            agreement,
            elapsed_ms,
        }
    }
}

/// Render a distribution as its weight enumerator polynomial.
pub fn format_enumerator(dist: &WeightDistribution) -> String {
    let mut terms = Vec::new();
    for (&w, &c) in &dist.entries {
        if w == 0 {
            terms.push(c.to_string());
        } else if c == 1 {
            terms.push(format!("x^{w}"));
        } else {
            terms.push(format!("{c}x^{w}"));
        }
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

/// Parse the enumerator format back into a weight → count map.
pub fn parse_enumerator(s: &str) -> Result<BTreeMap<u64, u128>> {
    let mut out = BTreeMap::new();
    for term in s.split('+') {
        let term = term.trim();
        if term.is_empty() {
            return Err(Error::Parse("empty term".into()));
        }
        let (count, weight) = match term.split_once("x^") {
            None => (
                term.parse::<u128>()
                    .map_err(|_| Error::Parse(format!("bad constant {term:?}")))?,
                0u64,
            ),
            Some((c, w)) => {
                let count = if c.is_empty() {
                    1
                } else {
                    c.parse::<u128>()
                        .map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))?
                };
                let weight = w
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad exponent {w:?}")))?;
                (count, weight)
            }
        };
        if out.insert(weight, count).is_some() {
            return Err(Error::Parse(format!("duplicate weight {weight}")));
        }
    }
    Ok(out)
}
