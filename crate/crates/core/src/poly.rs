//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept in a BTreeMap keyed by exponent vectors, so iteration
//! order (and printing) is deterministic. Everything here stays tiny: the
//! chart bivectors are quadratic and the Jacobiator is cubic.

use std::collections::BTreeMap;

use num::rational::BigRational;
use num::traits::Zero;

use crate::rat::format_rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        assert!(idx < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[idx] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(exps, BigRational::from_integer(1.into()));
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        Poly { nvars: self.nvars, terms }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut terms: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exps: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let entry = terms.entry(exps).or_insert_with(BigRational::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { nvars: self.nvars, terms }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Partial derivative with respect to variable `idx`.
    pub fn partial(&self, idx: usize) -> Poly {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[idx] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[idx] -= 1;
            terms.insert(e2, c * BigRational::from_integer(e[idx].into()));
        }
        Poly { nvars: self.nvars, terms }
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    term *= &point[i];
                }
            }
            acc += term;
        }
        acc
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", format_rational(c))?;
            for (i, &exp) in e.iter().enumerate() {
                match exp {
                    0 => {}
                    1 => write!(f, "*z{i}")?,
                    _ => write!(f, "*z{i}^{exp}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::big;

    fn z(i: usize) -> Poly {
        Poly::var(3, i)
    }

    #[test]
    fn arithmetic_identities() {
        let p = z(0).mul(&z(1)).add(&Poly::constant(3, big(2)));
        let q = z(2).sub(&z(0));
        assert_eq!(p.mul(&q), q.mul(&p));
        assert_eq!(p.sub(&p), Poly::zero(3));
        assert_eq!(p.add(&q).total_degree(), 2);
    }

    #[test]
    fn derivative_satisfies_leibniz() {
        let p = z(0).mul(&z(1)).add(&z(2).mul(&z(2)));
        let q = z(0).add(&Poly::constant(3, big(5)));
        let lhs = p.mul(&q).partial(0);
        let rhs = p.partial(0).mul(&q).add(&p.mul(&q.partial(0)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_commutes_with_multiplication() {
        let p = z(0).mul(&z(1)).sub(&z(2));
        let q = z(1).add(&z(2).mul(&z(0)));
        let pt = vec![big(3), big(-2), big(7) / big(2)];
        assert_eq!(p.mul(&q).eval(&pt), p.eval(&pt) * q.eval(&pt));
    }
}
