//! Table and JSON rendering of action results and tree censuses.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use ltaction::witt::balanced_residue;
use ltaction::{
    ActionResult, GroupElem, LabelledTree, Method, Result, ScaledSeries, ScaledWitt, SeriesRecord,
    Target, WittElem,
};

use crate::run::TreesConfig;

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Recursive => "recursive",
        Method::Trees => "trees",
        Method::Functional => "functional",
        Method::WittAlt => "witt-alt",
        Method::WittRecursion => "witt-recursion",
        Method::LowDegree => "low-degree",
    }
}

/// Canonical coefficient text mod `p^m`: a balanced integer when the value
/// lies in the prime subring, otherwise the polynomial form.
pub fn coeff_text(value: &WittElem, m_exp: u32) -> String {
    if let Some(balanced) = balanced_residue(value, m_exp) {
        return balanced.to_string();
    }
    let coords = value.coords_mod(m_exp);
    let mut parts = Vec::new();
    for (i, c) in coords.iter().enumerate() {
        if c == &BigUint::ZERO {
            continue;
        }
        match i {
            0 => parts.push(c.to_string()),
            1 => parts.push(format!("{c}*z")),
            _ => parts.push(format!("{c}*z^{i}")),
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub fn scaled_witt_text(value: &ScaledWitt, m_exp: u32) -> String {
    let v = value.normalize();
    let body = coeff_text(v.num(), m_exp + v.denom_exp());
    if v.denom_exp() == 0 {
        body
    } else {
        format!("({body})/p^{}", v.denom_exp())
    }
}

pub fn action_table(g: &GroupElem, result: &ActionResult) -> String {
    let params = result.series.params();
    let mut out = format!(
        "# p={} f={} M={} W={} target={} method={}\n",
        params.p(),
        params.f(),
        result.m_exp,
        result.wmax,
        match result.target {
            Target::U1 => "u1",
            Target::U => "u",
        },
        method_name(result.method),
    );
    out.push_str(&format!(
        "# alpha0 = {}, alpha1 = {}\n# max denominator exponent used: {}\n",
        coeff_text(g.alpha0(), result.m_exp),
        coeff_text(g.alpha1(), result.m_exp),
        result.max_denom_seen
    ));
    for n in 0..result.wmax {
        let c = result.coeff(n);
        if c.is_zero_mod(result.m_exp) {
            continue;
        }
        out.push_str(&format!("{n}\t{}\n", coeff_text(&c, result.m_exp)));
    }
    out
}

/// The wire schema for `act --format json`.
#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ActionJson {
    pub p: u64,
    pub f: u32,
    pub precision: PrecisionJson,
    pub alpha0: Vec<String>,
    pub alpha1: Vec<String>,
    pub target: String,
    pub series: Vec<SeriesRecord>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PrecisionJson {
    pub p_exp: u32,
    pub u1_exp: usize,
}

pub fn action_json(g: &GroupElem, result: &ActionResult) -> Result<String> {
    let params = result.series.params();
    let doc = ActionJson {
        p: params.p(),
        f: params.f(),
        precision: PrecisionJson {
            p_exp: result.m_exp,
            u1_exp: result.wmax,
        },
        alpha0: g
            .alpha0()
            .coords_mod(result.m_exp)
            .iter()
            .map(BigUint::to_string)
            .collect(),
        alpha1: g
            .alpha1()
            .coords_mod(result.m_exp)
            .iter()
            .map(BigUint::to_string)
            .collect(),
        target: match result.target {
            Target::U1 => "u1".into(),
            Target::U => "u".into(),
        },
        series: result.series.to_records(result.m_exp),
    };
    serde_json::to_string_pretty(&doc).map_err(|e| ltaction::Error::Internal(e.to_string()))
}

/// Parse the JSON output back into a series (round-trip support).
pub fn action_json_series(text: &str, budget: u32) -> Result<(ActionJson, ScaledSeries)> {
    let doc: ActionJson =
        serde_json::from_str(text).map_err(|e| ltaction::Error::Syntax(e.to_string()))?;
    let params = ltaction::WittParams::new(doc.p, doc.f, doc.precision.p_exp + budget)?;
    let series = ScaledSeries::from_records(&params, doc.precision.u1_exp, budget, &doc.series)?;
    Ok((doc, series))
}

#[derive(Serialize)]
struct TreeEntry<'a> {
    tree: &'a LabelledTree,
    weight: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    index: Option<ScaledWittJson>,
}

#[derive(Serialize)]
struct ScaledWittJson {
    denom_exp: u32,
    coeff: Vec<String>,
}

fn scaled_json(v: &ScaledWitt, m_exp: u32) -> ScaledWittJson {
    let n = v.normalize();
    ScaledWittJson {
        denom_exp: n.denom_exp(),
        coeff: n
            .num()
            .coords_mod(m_exp + n.denom_exp())
            .iter()
            .map(BigUint::to_string)
            .collect(),
    }
}

pub fn trees_json(
    trees: &[LabelledTree],
    indexed: Option<&(Vec<ScaledWitt>, ScaledWitt)>,
    cfg: &TreesConfig,
) -> Result<String> {
    #[derive(Serialize)]
    struct Doc<'a> {
        q: u64,
        weight: u64,
        alternating: bool,
        count: usize,
        trees: Vec<TreeEntry<'a>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        index_sum: Option<ScaledWittJson>,
    }
    let entries = trees
        .iter()
        .enumerate()
        .map(|(k, t)| TreeEntry {
            tree: t,
            weight: t.weight(cfg.q),
            index: indexed.map(|(values, _)| scaled_json(&values[k], cfg.m_exp)),
        })
        .collect();
    let doc = Doc {
        q: cfg.q,
        weight: cfg.weight,
        alternating: cfg.alternating,
        count: trees.len(),
        trees: entries,
        index_sum: indexed.map(|(_, sum)| scaled_json(sum, cfg.m_exp)),
    };
    serde_json::to_string_pretty(&doc).map_err(|e| ltaction::Error::Internal(e.to_string()))
}
