use std::fmt;

/// Outcome of one named numerical check.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// A list of named checks, as produced by the state and projector validators.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    /// Records `residual <= tolerance` under `name`. NaN residuals fail.
    pub fn record(&mut self, name: &'static str, residual: f64, tolerance: f64) {
        self.checks.push(Check { name, residual, tolerance, passed: residual <= tolerance });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.get(name).is_some_and(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<14} {}  residual {:.3e} (tol {:.1e})",
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.residual,
                c.tolerance
            )?;
        }
        Ok(())
    }
}
