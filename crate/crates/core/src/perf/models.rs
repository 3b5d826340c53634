use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

/// Encryption memory model `n(1 + k + t + 2n) + t²`, in abstract cells.
pub fn memory_model_enc(n: u64, k: u64, t: u64) -> u64 {
    n * (1 + k + t + 2 * n) + t * t
}

/// Decryption memory model `n(3n + 2k + t + 1) + t² + k²`, in abstract cells.
pub fn memory_model_dec(n: u64, k: u64, t: u64) -> u64 {
    n * (3 * n + 2 * k + t + 1) + t * t + k * k
}

/// Supply model for `E = I · V_cc · (execution time)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyModel {
    pub current_amps: f64,
    pub voltage: f64,
}

impl Default for EnergyModel {
    fn default() -> Self {
        Self {
            current_amps: 0.7,
            voltage: 1.5,
        }
    }
}

impl EnergyModel {
    pub fn new(current_amps: f64, voltage: f64) -> Result<Self> {
        if !(current_amps > 0.0 && voltage > 0.0) {
            return param("current and voltage must be positive");
        }
        Ok(Self {
            current_amps,
            voltage,
        })
    }

    /// Joules consumed over `wall_time_s` seconds.
    pub fn energy(&self, wall_time_s: f64) -> f64 {
        self.current_amps * self.voltage * wall_time_s
    }
}

pub fn energy(model: &EnergyModel, wall_time_s: f64) -> f64 {
    model.energy(wall_time_s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn memory_examples() {
        assert_eq!(memory_model_enc(256, 16, 8), 137_536);
        assert_eq!(memory_model_enc(1, 0, 0), 3);
        assert_eq!(memory_model_enc(64, 16, 4), 9_552);
        assert_eq!(memory_model_dec(256, 16, 8), 207_424);
        assert_eq!(memory_model_dec(1, 0, 0), 4);
    }

    #[test]
    fn energy_examples() {
        let m = EnergyModel::default();
        assert!((energy(&m, 0.076) - 0.0798).abs() < 1e-12);
        assert!((energy(&m, 1.24) - 1.302).abs() < 1e-12);
        assert_eq!(energy(&m, 0.0), 0.0);
        assert!(EnergyModel::new(0.0, 5.0).is_err());
        assert!(EnergyModel::new(1.0, -5.0).is_err());
    }
}
