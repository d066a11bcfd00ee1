//! Real edge weights to positive integers, and integers to weight classes.

/// Clamp, floor-to-unit, scale and round up; then snap to classes
/// `[(1+eps)^i, (1+eps)^{i+1})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rounding {
    eps: f64,
    clamp: f64,
    unit: f64,
}

impl Rounding {
    /// `unit = eps * clamp / (2n)`; a zero clamp uses unit 1, so only
    /// zero-length edges survive.
    pub fn new(eps: f64, clamp: f64, n: usize) -> Self {
        assert!(eps > 0.0 && eps.is_finite(), "eps must be positive");
        assert!(clamp >= 0.0 && n > 0);
        let unit = if clamp > 0.0 {
            eps * clamp / (2.0 * n as f64)
        } else {
            1.0
        };
        Rounding { eps, clamp, unit }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn clamp(&self) -> f64 {
        self.clamp
    }

    /// Original-cost value of integer weight 1.
    pub fn unit(&self) -> f64 {
        self.unit
    }

    /// `None` when `raw` exceeds the clamp.
    pub fn int_weight(&self, raw: f64) -> Option<i64> {
        if raw > self.clamp {
            return None;
        }
        Some((raw.max(self.unit) / self.unit).ceil() as i64)
    }

    fn pow(&self, i: usize) -> f64 {
        (1.0 + self.eps).powi(i as i32)
    }

    /// Largest `i` with `(1+eps)^i <= a`.
    pub fn class_of(&self, a: i64) -> usize {
        assert!(a >= 1);
        let af = a as f64;
        let mut i = (af.ln() / (1.0 + self.eps).ln()).floor().max(0.0) as usize;
        while self.pow(i + 1) <= af {
            i += 1;
        }
        while i > 0 && self.pow(i) > af {
            i -= 1;
        }
        i
    }

    /// Largest integer below `(1+eps)^{i+1}`.
    pub fn class_weight(&self, i: usize) -> i64 {
        self.pow(i + 1).ceil() as i64 - 1
    }

    /// Class representative of `raw`, or `None` if excluded.
    pub fn rounded(&self, raw: f64) -> Option<i64> {
        self.int_weight(raw).map(|a| self.class_weight(self.class_of(a)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_examples() {
        let r = Rounding::new(1.0, 10.0, 5);
        assert_eq!(r.unit(), 1.0);
        assert_eq!(r.int_weight(0.5), Some(1));
        assert_eq!(r.int_weight(100.0), None);
        assert_eq!(r.int_weight(10.0), Some(10));
        assert_eq!(r.int_weight(2.5), Some(3));

        let r = Rounding::new(0.5, 10.0, 5);
        assert_eq!(r.class_of(10), 5);
        assert_eq!(r.class_weight(5), 11);
    }

    #[test]
    fn classes_contain_their_members() {
        for eps in [0.0125, 0.025, 0.125, 0.25] {
            let r = Rounding::new(eps, 1.0, 1);
            let mut prev = 0;
            for a in 1..5000i64 {
                let i = r.class_of(a);
                assert!(i >= prev);
                prev = i;
                let w = r.class_weight(i);
                assert!(w >= a, "eps {eps} a {a} class {i} w {w}");
                assert!((w as f64) < (1.0 + eps) * a as f64 + 1e-9);
            }
        }
        let r = Rounding::new(0.25, 1.0, 1);
        assert_eq!(r.class_of(1), 0);
        assert_eq!(r.class_weight(0), 1);
    }

    #[test]
    fn zero_clamp() {
        let r = Rounding::new(0.25, 0.0, 4);
        assert_eq!(r.unit(), 1.0);
        assert_eq!(r.int_weight(0.0), Some(1));
        assert_eq!(r.int_weight(1e-300), None);
    }
}
