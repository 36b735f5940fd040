//! Canonical text form of exact polynomials.
//!
//! Terms are printed in descending graded-lex order and joined with ` + `.
//! Each term is `coef` followed by `*x<i>` or `*x<i>^<e>` for every variable
//! with positive exponent; coefficients are integers or `p/q`. The zero
//! polynomial prints as `0`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::coeff::Rational;
use super::sparse::QPoly;
use crate::error::{Error, Result};

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}")?;
            for (v, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{v}")?,
                    _ => write!(f, "*x{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad coefficient `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Parses the canonical text form back into a polynomial in `nvars`
/// variables.
pub fn parse_poly(text: &str, nvars: usize) -> Result<QPoly> {
    let text = text.trim();
    if text == "0" {
        return Ok(QPoly::zero(nvars));
    }
    let mut terms = Vec::new();
    for term in text.split(" + ") {
        let term = term.trim();
        // A leading variable means an implicit coefficient of 1 or -1.
        let (coef, rest) = match term.strip_prefix('-') {
            Some(r) if r.starts_with('x') => (-Rational::one(), r),
            _ if term.starts_with('x') => (Rational::one(), term),
            _ => {
                let (c, r) = term.split_once('*').unwrap_or((term, ""));
                (parse_rational(c.trim())?, r)
            }
        };
        let mut exps = vec![0u16; nvars];
        for factor in rest.split('*').filter(|f| !f.trim().is_empty()) {
            let factor = factor.trim();
            let body = factor
                .strip_prefix('x')
                .ok_or_else(|| Error::Parse(format!("bad factor `{factor}`")))?;
            let (idx, e) = match body.split_once('^') {
                Some((i, e)) => (i, e.parse::<u16>().map_err(|_| Error::Parse(factor.into()))?),
                None => (body, 1),
            };
            let idx: usize = idx.parse().map_err(|_| Error::Parse(factor.into()))?;
            if idx >= nvars {
                return Err(Error::Parse(format!("variable x{idx} out of range")));
            }
            exps[idx] += e;
        }
        terms.push((exps, coef));
    }
    Ok(QPoly::from_terms(nvars, terms))
}

/// Text form of a rational, `p/q` or `p`.
pub fn rational_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p/q` or `p`.
pub fn rational_from_str(s: &str) -> Result<Rational> {
    parse_rational(s.trim())
}
