//! Compensated summation in a fixed order.

/// Running Neumaier (improved Kahan) sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    carry: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

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

/// Compensated sum of an iterator, in iteration order.
pub fn neumaier<I: IntoIterator<Item = f64>>(items: I) -> f64 {
    let mut acc = Neumaier::new();
    for x in items {
        acc.add(x);
    }
    acc.value()
}

/// Compensated maximum-safe `ℓ^p` reduction `(Σ|x|^p)^{1/p}`, `p = ∞` giving the max.
pub fn lp_reduce<I: IntoIterator<Item = f64>>(items: I, p: f64) -> f64 {
    if p.is_infinite() {
        return items.into_iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    }
    neumaier(items.into_iter().map(|x| x.abs().powf(p))).powf(1.0 / p)
}
