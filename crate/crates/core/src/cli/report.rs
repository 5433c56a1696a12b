//! JSON rendering of results: exact strings next to float values.

use serde_json::{json, Value};

use crate::exponent::Assumptions;
use crate::laplace::{LaplaceCharacter, MomentVector};
use crate::ring::Scalar;
use crate::scale::ScaleBasis;
use crate::tails::TailVector;

fn float(x: Option<f64>) -> Value {
    x.filter(|v| v.is_finite()).map_or(Value::Null, Value::from)
}

pub fn scalar<S: Scalar>(x: &S, env: &Assumptions) -> Value {
    json!({ "exact": x.to_string(), "float": float(x.eval_f64(env)) })
}

pub fn scalars<S: Scalar>(xs: &[S], env: &Assumptions) -> Value {
    Value::Array(xs.iter().map(|x| scalar(x, env)).collect())
}

pub fn basis(b: &ScaleBasis) -> Value {
    Value::Array(b.items().iter().map(|it| Value::String(it.to_string())).collect())
}

pub fn tail<S: Scalar>(v: &TailVector<S>) -> Value {
    let env = v.basis.assumptions();
    let coeffs: Vec<Value> = v
        .basis
        .items()
        .iter()
        .zip(&v.p)
        .map(|(it, x)| {
            json!({
                "item": it.to_string(),
                "power": it.power.to_string(),
                "log_power": it.log_power.to_string(),
                "exact": x.to_string(),
                "float": float(x.eval_f64(env)),
            })
        })
        .collect();
    json!({ "basis": basis(&v.basis), "cutoff": v.basis.cutoff().to_string(), "coefficients": coeffs })
}

pub fn moments<S: Scalar>(m: &MomentVector<S>, env: &Assumptions) -> Value {
    scalars(m.mu(), env)
}

/// Coefficients of `𝒟^j`.
pub fn operator<S: Scalar>(c: &LaplaceCharacter<S>, env: &Assumptions) -> Value {
    scalars(c.coeff(), env)
}
