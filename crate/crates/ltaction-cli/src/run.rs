//! Execution of the `act` and `trees` subcommands.

use ltaction::trees::{index, index_alt, render_text, TreeEnumerator};
use ltaction::witt::parse_elem;
use ltaction::{
    ActionEngine, ActionResult, Error, GroupElem, Method, Result, ScaledWitt, WittElem,
};

use crate::render;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodOpt {
    Auto,
    Recursive,
    Trees,
    Functional,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetOpt {
    U1,
    U,
}

#[derive(Clone, Debug)]
pub struct ActConfig {
    pub p: u64,
    pub f: u32,
    pub m_exp: u32,
    pub wmax: usize,
    /// `α_0` expression; paired with `alpha1`.
    pub alpha0: Option<String>,
    pub alpha1: String,
    /// Witt-subgroup element `α`; mutually exclusive with `alpha0`.
    pub alpha: Option<String>,
    pub target: TargetOpt,
    pub method: MethodOpt,
    pub format: Format,
}

pub fn run_act(cfg: &ActConfig) -> Result<String> {
    let engine = ActionEngine::new(cfg.p, cfg.f, cfg.m_exp, cfg.wmax)?;
    let params = engine.params();
    let (g, witt_route) = match (&cfg.alpha, &cfg.alpha0) {
        (Some(alpha), None) => {
            let a = parse_elem(alpha, params)?;
            (GroupElem::from_witt_unit(a)?, true)
        }
        (None, Some(alpha0)) => {
            let a0 = parse_elem(alpha0, params)?;
            let a1 = parse_elem(&cfg.alpha1, params)?;
            (GroupElem::new(a0, a1)?, false)
        }
        (None, None) => {
            return Err(Error::Syntax(
                "provide either --alpha or --alpha0/--alpha1".into(),
            ))
        }
        (Some(_), Some(_)) => {
            return Err(Error::Syntax(
                "--alpha conflicts with --alpha0/--alpha1".into(),
            ))
        }
    };

    let result: ActionResult = match cfg.target {
        TargetOpt::U1 => match cfg.method {
            MethodOpt::Auto => {
                if witt_route && params.f() % 2 == 1 {
                    engine.witt_act_u1(g.alpha0())?
                } else {
                    engine.act_u1(&g, Method::Recursive)?
                }
            }
            MethodOpt::Recursive => engine.act_u1(&g, Method::Recursive)?,
            MethodOpt::Trees => engine.act_u1(&g, Method::Trees)?,
            MethodOpt::Functional => engine.act_u1(&g, Method::Functional)?,
        },
        TargetOpt::U => {
            if witt_route && params.f() % 2 == 1 {
                engine.witt_act_u(g.alpha0())?
            } else {
                let m = match cfg.method {
                    MethodOpt::Trees => Method::Trees,
                    MethodOpt::Functional => Method::Functional,
                    _ => Method::Recursive,
                };
                engine.act_u(&g, m)?
            }
        }
    };

    Ok(match cfg.format {
        Format::Table => render::action_table(&g, &result),
        Format::Json => render::action_json(&g, &result)?,
    })
}

#[derive(Clone, Debug)]
pub struct TreesConfig {
    pub q: u64,
    pub weight: u64,
    pub alternating: bool,
    pub m_exp: u32,
    pub alpha0: Option<String>,
    pub alpha1: Option<String>,
    pub alpha: Option<String>,
    pub format: Format,
    pub ceiling: u64,
}

/// Factor a prime power `q = p^f`.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    for p in 2..=q {
        if q % p == 0 {
            let mut f = 0u32;
            let mut rest = q;
            while rest % p == 0 {
                rest /= p;
                f += 1;
            }
            if rest != 1 {
                return Err(Error::NotPrime(q));
            }
            return Ok((p, f));
        }
    }
    Err(Error::NotPrime(q))
}

pub fn run_trees(cfg: &TreesConfig) -> Result<String> {
    let (p, f) = prime_power(cfg.q)?;
    let mut enumerator = TreeEnumerator::with_ceiling(cfg.q, cfg.ceiling);
    let trees = enumerator.enumerate(cfg.weight, cfg.alternating)?;

    // evaluate indices when inputs are supplied
    let indexed: Option<(Vec<ScaledWitt>, ScaledWitt)> =
        if cfg.alpha.is_some() || cfg.alpha0.is_some() {
            let n_exp = cfg.m_exp + cfg.weight as u32 + 2;
            let params = ltaction::WittParams::new(p, f, n_exp)?;
            let mut values = Vec::with_capacity(trees.len());
            let mut sum = ScaledWitt::zero(&params);
            if let Some(alpha) = &cfg.alpha {
                let a = parse_elem(alpha, &params)?;
                for t in trees.iter() {
                    let v = if cfg.alternating {
                        index_alt(t, &a)?
                    } else {
                        index(t, &a, &a)?
                    };
                    sum = sum.add(&v);
                    values.push(v);
                }
            } else {
                let a0 = parse_elem(cfg.alpha0.as_ref().unwrap(), &params)?;
                let a1 = parse_elem(cfg.alpha1.as_deref().unwrap_or("0"), &params)?;
                for t in trees.iter() {
                    let v = index(t, &a0, &a1)?;
                    sum = sum.add(&v);
                    values.push(v);
                }
            }
            Some((values, sum))
        } else {
            None
        };

    match cfg.format {
        Format::Table => {
            let mut out = format!(
                "# {} trees of weight {} at q = {}{}\n",
                trees.len(),
                cfg.weight,
                cfg.q,
                if cfg.alternating {
                    " (alternating)"
                } else {
                    ""
                }
            );
            for (k, t) in trees.iter().enumerate() {
                out.push_str(&render_text(t, cfg.q));
                if let Some((values, _)) = &indexed {
                    out.push_str(&format!(
                        "  index = {}\n",
                        render::scaled_witt_text(&values[k], cfg.m_exp)
                    ));
                }
                out.push('\n');
            }
            if let Some((_, sum)) = &indexed {
                out.push_str(&format!(
                    "# index sum = {}\n",
                    render::scaled_witt_text(sum, cfg.m_exp)
                ));
            }
            Ok(out)
        }
        Format::Json => render::trees_json(&trees, indexed.as_ref(), cfg),
    }
}

/// Convenience used by the verification suites.
pub fn witt_unit_from(engine: &ActionEngine, text: &str) -> Result<WittElem> {
    let e = engine.parse(text)?;
    if !e.is_unit() {
        return Err(Error::NonUnit);
    }
    Ok(e)
}
