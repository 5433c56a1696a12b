//! `E(Σ c_i X_i)^j` by multinomial expansion.

use crate::error::{Error, Result};
use crate::exponent::{factorial, Q};
use crate::laplace::MomentVector;
use crate::ring::Ring;

fn walk<T: Ring>(c: &[T], mu: &[T], left: usize, acc: T, denom: num_bigint::BigInt, jfact: &num_bigint::BigInt, out: &mut T) {
    let Some((head, rest)) = c.split_first() else {
        if left == 0 {
            *out = out.clone() + acc.scale_q(&Q::new(jfact.clone(), denom));
        }
        return;
    };
    if rest.is_empty() {
        let t = acc * head.powu(left as u32) * mu[left].clone();
        walk(rest, mu, 0, t, denom * factorial(left as u64), jfact, out);
        return;
    }
    for k in 0..=left {
        let t = acc.clone() * head.powu(k as u32) * mu[k].clone();
        walk(rest, mu, left - k, t, denom.clone() * factorial(k as u64), jfact, out);
    }
}

/// Moment of order `j` of `Σ c_i X_i` with independent `X_i ~ F`.
pub fn brute_moments<T: Ring>(c: &[T], fm: &MomentVector<T>, j: usize) -> Result<T> {
    if j > fm.order() {
        return Err(Error::OrderMismatch(format!("need moments to order {j}, have {}", fm.order())));
    }
    if c.is_empty() {
        return Ok(if j == 0 { T::one() } else { T::zero() });
    }
    let mut out = T::zero();
    walk(c, fm.mu(), j, T::one(), 1.into(), &factorial(j as u64), &mut out);
    Ok(out)
}
