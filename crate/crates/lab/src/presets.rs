//! Critical-value references for the survival verdicts.
//!
//! No closed form for the contact-process critical value exists, so the lab
//! never hardcodes one silently. Callers choose between the rigorous bounds
//! `1/(2d-1)` (lower) and `2/d` (upper), a bundled literature point
//! estimate, or an explicit number.

use std::str::FromStr;

use crate::Failure;

/// Simulation-survey point estimate of the 1-d critical value. External
/// constant, not derived here; labeled as such in every report.
pub const LITERATURE_LAMBDA_C_1D: f64 = 1.6494;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaCRef {
    /// Rigorous lower bound `1/(2d-1)`.
    Lower,
    /// Rigorous upper bound `2/d`.
    Upper,
    /// Bundled simulation estimate (d = 1 only).
    Literature,
    Value(f64),
}

impl LambdaCRef {
    /// Numeric value plus a label for reports.
    pub fn resolve(&self, dim: u32) -> Result<(f64, String), Failure> {
        let d = f64::from(dim);
        match self {
            LambdaCRef::Lower => Ok((1.0 / (2.0 * d - 1.0), format!("lower-bound 1/(2d-1), d={dim}"))),
            LambdaCRef::Upper => Ok((2.0 / d, format!("upper-bound 2/d, d={dim}"))),
            LambdaCRef::Literature => {
                if dim == 1 {
                    Ok((
                        LITERATURE_LAMBDA_C_1D,
                        "literature estimate (external, non-rigorous), d=1".to_string(),
                    ))
                } else {
                    Err(Failure::domain(format!(
                        "no bundled literature estimate for d={dim}; pass --lambda-c <value>"
                    )))
                }
            }
            LambdaCRef::Value(v) => {
                if v.is_finite() && *v > 0.0 {
                    Ok((*v, "user-supplied".to_string()))
                } else {
                    Err(Failure::domain(format!("lambda-c must be positive, got {v}")))
                }
            }
        }
    }

    pub fn canon(&self) -> String {
        match self {
            LambdaCRef::Lower => "lower".to_string(),
            LambdaCRef::Upper => "upper".to_string(),
            LambdaCRef::Literature => "literature".to_string(),
            LambdaCRef::Value(v) => crate::output::canon_f64(*v),
        }
    }
}

impl FromStr for LambdaCRef {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lower" => Ok(LambdaCRef::Lower),
            "upper" => Ok(LambdaCRef::Upper),
            "literature" => Ok(LambdaCRef::Literature),
            other => other
                .parse::<f64>()
                .map(LambdaCRef::Value)
                .map_err(|_| format!("expected lower|upper|literature|<number>, got `{other}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolves_bounds() {
        assert_eq!(LambdaCRef::Lower.resolve(1).unwrap().0, 1.0);
        assert_eq!(LambdaCRef::Lower.resolve(2).unwrap().0, 1.0 / 3.0);
        assert_eq!(LambdaCRef::Upper.resolve(1).unwrap().0, 2.0);
        assert_eq!(LambdaCRef::Upper.resolve(2).unwrap().0, 1.0);
    }

    #[test]
    fn literature_only_in_1d() {
        assert_eq!(LambdaCRef::Literature.resolve(1).unwrap().0, 1.6494);
        assert!(LambdaCRef::Literature.resolve(2).is_err());
    }

    #[test]
    fn parses_and_canonicalizes() {
        assert_eq!("lower".parse::<LambdaCRef>().unwrap(), LambdaCRef::Lower);
        assert_eq!("1.5".parse::<LambdaCRef>().unwrap(), LambdaCRef::Value(1.5));
        assert!("sideways".parse::<LambdaCRef>().is_err());
        assert_eq!(LambdaCRef::Value(1.5).canon(), "1.5");
    }
}
