use std::str::FromStr;

use anyhow::{bail, Context};

/// `lo:hi:step` grid, or a single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    lo: f64,
    hi: f64,
    step: f64,
}

impl Range {
    pub fn len(&self) -> usize {
        if self.step == 0.0 {
            return 1;
        }
        ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1
    }

    /// Grid points `lo + i step`, computed from the index so they do not drift.
    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.lo + i as f64 * self.step).collect()
    }
}

impl FromStr for Range {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>().with_context(|| format!("bad number '{p}' in grid '{s}'")))
            .collect::<Result<_, _>>()?;
        let r = match parts[..] {
            [x] => Range { lo: x, hi: x, step: 0.0 },
            [lo, hi, step] => Range { lo, hi, step },
            _ => bail!("grid '{s}' is not of the form lo:hi:step"),
        };
        if !(r.lo.is_finite() && r.hi.is_finite() && r.step.is_finite()) {
            bail!("grid '{s}' has a non-finite entry");
        }
        if parts.len() == 3 && (r.step <= 0.0 || r.hi < r.lo) {
            bail!("grid '{s}' needs step > 0 and hi >= lo");
        }
        Ok(r)
    }
}
