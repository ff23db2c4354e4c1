//! 256-bit re-evaluation of every bound formula, used as the independent
//! oracle for the formula-accuracy criterion. All expressions are written
//! directly against the big-float API; the library's `f64` routes (sums of
//! logarithms, precomputed coefficients) share no code with these.

use astro_float::{BigFloat, Consts, RoundingMode};

pub const PREC: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

pub struct HighPrec {
    cc: Consts,
}

impl HighPrec {
    pub fn new() -> HighPrec {
        HighPrec {
            cc: Consts::new().expect("constants cache"),
        }
    }

    pub fn big(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, PREC)
    }

    pub fn from_u64(&self, x: u64) -> BigFloat {
        BigFloat::from_u64(x, PREC)
    }

    pub fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(PREC, RM, &mut self.cc)
    }

    pub fn sqrt(&self, x: &BigFloat) -> BigFloat {
        x.sqrt(PREC, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, PREC, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, PREC, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, PREC, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, PREC, RM)
    }

    pub fn powi(&self, a: &BigFloat, n: usize) -> BigFloat {
        a.powi(n, PREC, RM)
    }

    pub fn pow(&mut self, a: &BigFloat, e: &BigFloat) -> BigFloat {
        a.pow(e, PREC, RM, &mut self.cc)
    }

    /// `2^k` exactly, including exponents far beyond the `f64` range.
    pub fn pow2(&self, k: u64) -> BigFloat {
        self.powi(&self.from_u64(2), k as usize)
    }

    /// `sqrt(log(scale * n * (n+1) / beta) / (2n))`, the shared shape of
    /// every confidence interval here.
    pub fn confidence(&mut self, scale: &BigFloat, n: u64, beta: f64) -> BigFloat {
        let nn = self.from_u64(n);
        let n1 = self.from_u64(n + 1);
        let prod = self.mul(&self.mul(scale, &nn), &n1);
        let arg = self.div(&prod, &self.big(beta));
        let ln = self.ln(&arg);
        let denom = self.mul(&self.big(2.0), &nn);
        self.sqrt(&self.div(&ln, &denom))
    }

    /// Relative error of `got` against the oracle value, as `f64`.
    pub fn rel_err(&self, got: f64, oracle: &BigFloat) -> f64 {
        let g = self.big(got);
        let diff = self.sub(&g, oracle).abs();
        let denom = oracle.abs();
        if denom.is_zero() {
            return if diff.is_zero() { 0.0 } else { f64::INFINITY };
        }
        let rel = self.div(&diff, &denom);
        // upper-bound the magnitude via the decimal rendering
        format!("{rel}").parse::<f64>().unwrap_or(f64::INFINITY)
    }
}
