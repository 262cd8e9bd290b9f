use std::fmt;
use std::path::PathBuf;

/// How a quantity is compared against its expected value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    /// `|value − expected| ≤ tolerance`
    Abs,
    /// `|value − expected| ≤ tolerance · |expected|`
    Rel,
    /// `value ≥ expected − tolerance`
    AtLeast,
    /// `value ≤ expected + tolerance`
    AtMost,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Abs => "abs",
            Check::Rel => "rel",
            Check::AtLeast => "at_least",
            Check::AtMost => "at_most",
        }
    }

    pub fn passes(self, value: f64, expected: f64, tolerance: f64) -> bool {
        if value.is_nan() || expected.is_nan() {
            return false;
        }
        match self {
            Check::Abs => (value - expected).abs() <= tolerance,
            Check::Rel => (value - expected).abs() <= tolerance * expected.abs(),
            Check::AtLeast => value >= expected - tolerance,
            Check::AtMost => value <= expected + tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    pub label: String,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub check: Check,
    pub pass: bool,
}

impl Quantity {
    pub fn new(label: impl Into<String>, value: f64, expected: f64, tolerance: f64, check: Check) -> Self {
        Self {
            label: label.into(),
            value,
            expected,
            tolerance,
            check,
            pass: check.passes(value, expected, tolerance),
        }
    }

    /// True when the stored pass flag agrees with the stored numbers.
    pub fn is_consistent(&self) -> bool {
        self.pass == self.check.passes(self.value, self.expected, self.tolerance)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: value={:.9e} expected={:.9e} tol={:.3e} ({})",
            if self.pass { "PASS" } else { "FAIL" },
            self.label,
            self.value,
            self.expected,
            self.tolerance,
            self.check.name()
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentReport {
    pub name: String,
    pub quantities: Vec<Quantity>,
    pub artifacts: Vec<PathBuf>,
}

impl ExperimentReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, label: impl Into<String>, value: f64, expected: f64, tolerance: f64, check: Check) -> bool {
        let q = Quantity::new(label, value, expected, tolerance, check);
        let pass = q.pass;
        self.quantities.push(q);
        pass
    }

    /// Records a boolean outcome as value 1 (true) or 0 against expected 1.
    pub fn push_flag(&mut self, label: impl Into<String>, ok: bool) -> bool {
        self.push(label, if ok { 1.0 } else { 0.0 }, 1.0, 0.0, Check::Abs)
    }

    pub fn all_pass(&self) -> bool {
        self.quantities.iter().all(|q| q.pass)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.quantities
            .iter()
            .filter(|q| !q.pass)
            .map(|q| q.label.as_str())
            .collect()
    }

    pub fn is_consistent(&self) -> bool {
        self.quantities.iter().all(Quantity::is_consistent)
    }

    pub fn get(&self, label: &str) -> Option<&Quantity> {
        self.quantities.iter().find(|q| q.label == label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks() {
        assert!(Check::Abs.passes(1.0, 1.04, 0.05));
        assert!(!Check::Abs.passes(1.0, 1.06, 0.05));
        assert!(Check::Rel.passes(101.0, 100.0, 0.01));
        assert!(!Check::Rel.passes(102.0, 100.0, 0.01));
        assert!(Check::AtLeast.passes(0.9, 1.0, 0.1));
        assert!(!Check::AtMost.passes(1.2, 1.0, 0.1));
        assert!(!Check::Abs.passes(f64::NAN, 0.0, 1.0));
    }

    #[test]
    fn report_flags_are_recomputable() {
        let mut r = ExperimentReport::new("x");
        r.push("a", 1.0, 1.0, 0.0, Check::Abs);
        r.push("b", 2.0, 1.0, 0.5, Check::Abs);
        assert!(r.is_consistent());
        assert_eq!(r.failures(), vec!["b"]);
        r.quantities[1].pass = true;
        assert!(!r.is_consistent());
    }
}
