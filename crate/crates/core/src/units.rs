use crate::error::{require_positive, Result};

/// Values of ħ and m that fix the working unit convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    hbar: f64,
    mass: f64,
}

impl UnitSystem {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        Ok(Self {
            hbar: require_positive("hbar", hbar)?,
            mass: require_positive("mass", mass)?,
        })
    }

    /// ħ = m = 1.
    pub const fn natural() -> Self {
        Self { hbar: 1.0, mass: 1.0 }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::natural()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_or_nonfinite() {
        assert!(UnitSystem::new(0.0, 1.0).is_err());
        assert!(UnitSystem::new(1.0, -2.0).is_err());
        assert!(UnitSystem::new(f64::NAN, 1.0).is_err());
        assert!(UnitSystem::new(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn default_is_natural() {
        let u = UnitSystem::default();
        assert_eq!((u.hbar(), u.mass()), (1.0, 1.0));
    }
}
