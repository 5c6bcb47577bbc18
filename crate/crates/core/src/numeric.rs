//! Small numeric helpers: exact binomials, log-gamma based log-factorials and
//! a compensated log-sum-exp.

/// `C(n, k)` as an exact integer, `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

pub fn ln_factorial(n: f64) -> f64 {
    libm::lgamma(n + 1.0)
}

/// `ln C(n, k)` for real `n >= k >= 0`.
pub fn ln_binomial(n: f64, k: f64) -> f64 {
    if k < 0.0 || k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Neumaier-compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `ln Σ exp(t)` over the terms. Terms equal to `-inf` contribute nothing;
/// an empty or all-`-inf` input yields `-inf`.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut acc = CompensatedSum::default();
    for &t in terms {
        if t != f64::NEG_INFINITY {
            acc.add((t - max).exp());
        }
    }
    max + acc.value().ln()
}
