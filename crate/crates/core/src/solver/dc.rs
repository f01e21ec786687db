//! Difference-of-concave rate expressions in the covert power share.
//!
//! Every rate in this crate is a sum of `c * log2(a + b * rho)` terms with
//! `a + b * rho > 0` on `[0, 1]`. Terms with `c > 0` are concave; terms with
//! `c < 0` are convex and get replaced by their tangent line to produce a
//! concave minorant that touches the expression at the linearization point.

use std::f64::consts::LN_2;

/// `coef * log2(intercept + slope * rho)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogAffine {
    pub coef: f64,
    pub intercept: f64,
    pub slope: f64,
}

impl LogAffine {
    pub fn new(coef: f64, intercept: f64, slope: f64) -> Self {
        debug_assert!(intercept > 0.0 && intercept + slope > 0.0);
        Self {
            coef,
            intercept,
            slope,
        }
    }

    fn arg(&self, rho: f64) -> f64 {
        self.intercept + self.slope * rho
    }

    pub fn value(&self, rho: f64) -> f64 {
        self.coef * self.arg(rho).ln() / LN_2
    }

    pub fn derivative(&self, rho: f64) -> f64 {
        self.coef * self.slope / (self.arg(rho) * LN_2)
    }

    fn is_concave(&self) -> bool {
        self.coef >= 0.0 || self.slope == 0.0
    }
}

/// `constant + sum(terms)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DcExpr {
    pub constant: f64,
    pub terms: Vec<LogAffine>,
}

impl DcExpr {
    pub fn constant(value: f64) -> Self {
        Self {
            constant: value,
            terms: Vec::new(),
        }
    }

    pub fn push(&mut self, coef: f64, intercept: f64, slope: f64) -> &mut Self {
        self.terms.push(LogAffine::new(coef, intercept, slope));
        self
    }

    pub fn value(&self, rho: f64) -> f64 {
        self.constant + self.terms.iter().map(|t| t.value(rho)).sum::<f64>()
    }

    pub fn derivative(&self, rho: f64) -> f64 {
        self.terms.iter().map(|t| t.derivative(rho)).sum()
    }

    /// Concave minorant tight at `at`: convex terms are replaced by their
    /// tangent lines, which lie below them.
    pub fn minorant(&self, at: f64) -> Minorant {
        let mut constant = self.constant;
        let mut slope = 0.0;
        let mut concave = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.is_concave() {
                concave.push(*t);
            } else {
                let g = t.derivative(at);
                constant += t.value(at) - g * at;
                slope += g;
            }
        }
        Minorant {
            constant,
            slope,
            concave,
        }
    }
}

/// `constant + slope * rho + sum(concave terms)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Minorant {
    pub constant: f64,
    pub slope: f64,
    concave: Vec<LogAffine>,
}

impl Minorant {
    pub fn zero() -> Self {
        Self {
            constant: 0.0,
            slope: 0.0,
            concave: Vec::new(),
        }
    }

    pub fn value(&self, rho: f64) -> f64 {
        self.constant + self.slope * rho + self.concave.iter().map(|t| t.value(rho)).sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample_expr(gb: f64, gu: f64, gc: f64) -> DcExpr {
        let mut e = DcExpr::constant(0.3);
        e.push(1.0, 1.0 + gu, -gu)
            .push(-1.0, 1.0 + gb, -gb)
            .push(-1.0, 1.0, gc)
            .push(1.0, 1.0 + gc, 0.0);
        e
    }

    #[test]
    fn derivative_matches_central_difference() {
        let e = sample_expr(5.0, 2.0, 3.0);
        let h = 1e-6;
        for i in 1..100 {
            let rho = i as f64 / 100.0;
            let fd = (e.value(rho + h) - e.value(rho - h)) / (2.0 * h);
            let an = e.derivative(rho);
            assert!((fd - an).abs() <= 1e-6 * an.abs().max(1.0));
        }
    }

    proptest! {
        #[test]
        fn minorant_is_tight_and_below(gb in 0.0f64..1e3, gu in 0.0f64..1e3, gc in 0.0f64..1e3,
                                       at in 0.0f64..=1.0, rho in 0.0f64..=1.0) {
            let e = sample_expr(gb, gu, gc);
            let m = e.minorant(at);
            let scale = e.value(at).abs().max(1.0);
            prop_assert!((m.value(at) - e.value(at)).abs() <= 1e-12 * scale);
            prop_assert!(m.value(rho) <= e.value(rho) + 1e-12 * scale);
        }
    }
}
