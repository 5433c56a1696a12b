//! JSON problem documents.

use serde_json::{Map, Value};

use crate::engine::WeightSequence;
use crate::error::{Error, Result};
use crate::exponent::{Assumptions, Exponent};
use crate::ring::Scalar;
use crate::scale::ScaleItem;
use crate::tails::{DistributionSpec, Family, Support, TailTerm};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// A JSON object together with the defaults applied while reading it.
pub struct Doc<'a> {
    map: &'a Map<String, Value>,
    path: String,
    pub defaults: Vec<(String, Value)>,
}

impl<'a> Doc<'a> {
    pub fn new(v: &'a Value, path: &str) -> Result<Self> {
        let map = v.as_object().ok_or_else(|| perr(format!("{} must be an object", name(path))))?;
        Ok(Doc { map, path: path.to_string(), defaults: Vec::new() })
    }

    fn key(&self, k: &str) -> String {
        if self.path.is_empty() {
            k.to_string()
        } else {
            format!("{}.{k}", self.path)
        }
    }

    pub fn get(&self, k: &str) -> Option<&'a Value> {
        self.map.get(k).filter(|v| !v.is_null())
    }

    pub fn req(&self, k: &str) -> Result<&'a Value> {
        self.get(k).ok_or_else(|| perr(format!("missing field '{}'", self.key(k))))
    }

    pub fn sub(&self, k: &str) -> Result<Doc<'a>> {
        Doc::new(self.req(k)?, &self.key(k))
    }

    pub fn scalar<S: Scalar>(&self, k: &str) -> Result<S> {
        scalar(self.req(k)?, &self.key(k))
    }

    pub fn scalar_or<S: Scalar>(&mut self, k: &str, default: &str) -> Result<S> {
        match self.get(k) {
            Some(v) => scalar(v, &self.key(k)),
            None => {
                self.defaults.push((self.key(k), Value::String(default.into())));
                S::parse(default)
            }
        }
    }

    pub fn exponent(&self, k: &str) -> Result<Exponent> {
        exponent(self.req(k)?, &self.key(k))
    }

    pub fn opt_exponent(&self, k: &str) -> Result<Option<Exponent>> {
        self.get(k).map(|v| exponent(v, &self.key(k))).transpose()
    }

    pub fn usize(&self, k: &str) -> Result<usize> {
        let v = self.req(k)?;
        v.as_u64().map(|x| x as usize).ok_or_else(|| perr(format!("'{}' must be a nonnegative integer", self.key(k))))
    }

    pub fn usize_or(&mut self, k: &str, default: usize) -> Result<usize> {
        if self.get(k).is_some() {
            return self.usize(k);
        }
        self.defaults.push((self.key(k), Value::from(default)));
        Ok(default)
    }

    pub fn str_or(&mut self, k: &str, default: &str) -> Result<String> {
        match self.get(k) {
            Some(Value::String(s)) => Ok(s.clone()),
            Some(_) => Err(perr(format!("'{}' must be a string", self.key(k)))),
            None => {
                self.defaults.push((self.key(k), Value::String(default.into())));
                Ok(default.to_string())
            }
        }
    }

    pub fn assumptions(&self) -> Result<Assumptions> {
        let mut env = Assumptions::new();
        if let Some(v) = self.get("assumptions") {
            let m = v.as_object().ok_or_else(|| perr(format!("'{}' must be an object", self.key("assumptions"))))?;
            for (k, x) in m {
                let f = x.as_f64().ok_or_else(|| perr(format!("assumption '{k}' must be a number")))?;
                env.insert(k.clone(), f);
            }
        }
        Ok(env)
    }
}

fn name(path: &str) -> &str {
    if path.is_empty() {
        "the document"
    } else {
        path
    }
}

fn text(v: &Value, path: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(perr(format!("'{path}' must be a number or a string"))),
    }
}

pub fn scalar<S: Scalar>(v: &Value, path: &str) -> Result<S> {
    S::parse(&text(v, path)?).map_err(|e| perr(format!("'{path}': {e}")))
}

pub fn exponent(v: &Value, path: &str) -> Result<Exponent> {
    Exponent::parse(&text(v, path)?).map_err(|e| perr(format!("'{path}': {e}")))
}

pub fn scalars<S: Scalar>(v: &Value, path: &str) -> Result<Vec<S>> {
    let a = v.as_array().ok_or_else(|| perr(format!("'{path}' must be an array")))?;
    a.iter().enumerate().map(|(i, x)| scalar(x, &format!("{path}[{i}]"))).collect()
}

fn terms<S: Scalar>(v: &Value, path: &str) -> Result<Vec<TailTerm<S>>> {
    let a = v.as_array().ok_or_else(|| perr(format!("'{path}' must be an array")))?;
    a.iter()
        .enumerate()
        .map(|(i, t)| {
            let d = Doc::new(t, &format!("{path}[{i}]"))?;
            let log = d.opt_exponent("log_power")?.unwrap_or_else(Exponent::zero);
            Ok(TailTerm { coeff: d.scalar("coeff")?, item: ScaleItem::new(d.exponent("power")?, log) })
        })
        .collect()
}

/// A distribution object; `env` is merged under the law's own assumptions.
pub fn law<S: Scalar>(v: &Value, path: &str, env: &Assumptions) -> Result<DistributionSpec<S>> {
    let d = Doc::new(v, path)?;
    let family = match d.req("family")?.as_str().ok_or_else(|| perr(format!("'{path}.family' must be a string")))? {
        "burr" => Family::Burr { beta: d.scalar("beta")?, tau: d.exponent("tau")?, gamma: d.exponent("gamma")? },
        "hall-weissman" => Family::HallWeissman {
            a: d.scalar("a")?,
            b: d.scalar("b")?,
            alpha: d.exponent("alpha")?,
            beta: d.exponent("beta")?,
        },
        "frechet" => Family::Frechet { alpha: d.exponent("alpha")? },
        "pareto" => Family::Pareto { alpha: d.exponent("alpha")? },
        "student" => Family::Student { alpha: d.exponent("alpha")? },
        "log-gamma" => Family::LogGamma { lambda: d.exponent("lambda")?, alpha: d.exponent("alpha")? },
        "exponential" => Family::Exponential { theta: d.scalar("theta")? },
        "point-mass" => Family::PointMass { at: d.scalar("at")? },
        "power-series" => Family::PowerSeriesTail { terms: terms(d.req("terms")?, &format!("{path}.terms"))? },
        other => return Err(perr(format!("unknown family '{other}' in '{path}'"))),
    };
    let mut spec = DistributionSpec::new(family);
    if let Some(s) = d.get("support") {
        spec.support = match s {
            Value::String(x) if x == "nonnegative" => Support::Nonnegative,
            Value::String(x) if x == "symmetric" => Support::Symmetric,
            Value::String(x) if x == "unspecified" => Support::Unspecified,
            Value::Object(_) => {
                let sd = Doc::new(s, &format!("{path}.support"))?;
                Support::TwoSided { lower: terms(sd.req("lower")?, &format!("{path}.support.lower"))? }
            }
            _ => return Err(perr(format!("unknown support in '{path}'"))),
        };
    }
    if let Some(m) = d.get("moments") {
        spec.moments = Some(scalars(m, &format!("{path}.moments"))?);
    }
    if d.get("synthetic").and_then(Value::as_bool) == Some(true) {
        spec.synthetic = true;
    }
    let mut e = env.clone();
    e.extend(d.assumptions()?);
    spec.env = e;
    Ok(spec)
}

pub fn weights<S: Scalar>(v: &Value, path: &str, env: &Assumptions) -> Result<WeightSequence<S>> {
    if v.as_str() == Some("symbolic") {
        return Ok(WeightSequence::symbolic().with_env(env.clone()));
    }
    let d = Doc::new(v, path)?;
    let w = if let Some(x) = d.get("explicit") {
        WeightSequence::explicit(scalars(x, &format!("{path}.explicit"))?)
    } else if let Some(x) = d.get("ar1") {
        WeightSequence::ar1(scalar(x, &format!("{path}.ar1"))?)
    } else if let Some(x) = d.get("ma") {
        WeightSequence::ma(scalars(x, &format!("{path}.ma"))?)
    } else {
        return Err(perr(format!("'{path}' needs one of explicit, ar1, ma, or the string \"symbolic\"")));
    };
    let mut e = env.clone();
    e.extend(d.assumptions()?);
    Ok(w.with_env(e))
}
