use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::gf2::MAX_KRONECKER_EXPONENT;
use crate::polar::{log2_length, max_rate_r0, ChannelSpec};

/// Design erasure probability used when none is given.
pub const DEFAULT_EPSILON: f64 = 0.5;

/// Code and error parameters of a key.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Params {
    /// Validates `n = 2^m`, `1 ≤ k < n`, `1 ≤ t < n/2` and `0 < ε < 1`.
    /// Logs a warning when `k` exceeds the rate limit window `⌊n·R₀⌋`.
    pub fn new(n: usize, k: usize, t: usize, epsilon: f64) -> Result<Self> {
        let p = Self {
            n,
            k,
            t,
            epsilon,
            label: None,
        };
        p.validate()?;
        let k0 = p.rate_limit_window();
        if k > k0 {
            log::warn!(
                "k = {k} exceeds the rate-limit window {k0} for n = {n}, epsilon = {epsilon}; \
                 key generation needs an explicit window"
            );
        }
        Ok(p)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        let m = log2_length(self.n)?;
        if m > MAX_KRONECKER_EXPONENT {
            return param(format!("code length 2^{m} exceeds the supported maximum"));
        }
        if self.k == 0 || self.k >= self.n {
            return param(format!(
                "need 1 <= k < n, got k = {}, n = {}",
                self.k, self.n
            ));
        }
        if self.t == 0 || 2 * self.t >= self.n {
            return param(format!(
                "need 1 <= t < n/2, got t = {}, n = {}",
                self.t, self.n
            ));
        }
        self.channel()?;
        Ok(())
    }

    pub fn channel(&self) -> Result<ChannelSpec> {
        ChannelSpec::bec(self.epsilon)
    }

    /// `⌊n·R₀⌋` for the design channel.
    pub fn rate_limit_window(&self) -> usize {
        self.channel()
            .map(|c| max_rate_r0(&c, self.n).k0)
            .unwrap_or(0)
    }
}

/// A benchmark grid point: parameters plus the sampling window to use at
/// key generation (`None` means the rate-limit window).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    #[serde(flatten)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
}

impl GridPoint {
    /// Uses the rate-limit window when it admits `k`, otherwise a window of
    /// exactly `k` (the k most reliable channels).
    pub fn with_fallback_window(params: Params) -> Self {
        let window = (params.k > params.rate_limit_window()).then_some(params.k);
        Self { params, window }
    }
}

/// Named parameter grids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// (256,16), (512,8), (1024,4): equal public-key size comparison grid.
    Comparison,
    /// (256,192), (512,384), (1024,768): rate 3/4.
    Rate075,
}

impl Preset {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "comparison" => Some(Self::Comparison),
            "rate075" => Some(Self::Rate075),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Comparison => "comparison",
            Self::Rate075 => "rate075",
        }
    }

    /// `(n, k, t, epsilon)` rows. The error weights come from
    /// [`crate::pkc::suggest_error_weight`] at a 1e-3 error-rate target over
    /// 2000 trials. Rate 3/4 is outside the ε = 0.5 window, so those rows use
    /// ε = 0.1.
    fn rows(self) -> &'static [(usize, usize, usize, f64)] {
        match self {
            Self::Comparison => &[(256, 16, 33, 0.5), (512, 8, 57, 0.5), (1024, 4, 93, 0.5)],
            Self::Rate075 => &[(256, 192, 3, 0.1), (512, 384, 4, 0.1), (1024, 768, 9, 0.1)],
        }
    }

    pub fn grid(self) -> Vec<GridPoint> {
        self.rows()
            .iter()
            .map(|&(n, k, t, eps)| {
                let params = Params {
                    n,
                    k,
                    t,
                    epsilon: eps,
                    label: Some(format!("{}-{n}-{k}", self.name())),
                };
                GridPoint::with_fallback_window(params)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Params::new(256, 72, 8, 0.5).is_ok());
        assert!(Params::new(255, 72, 8, 0.5).is_err());
        assert!(Params::new(256, 0, 8, 0.5).is_err());
        assert!(Params::new(256, 256, 8, 0.5).is_err());
        assert!(Params::new(256, 72, 0, 0.5).is_err());
        assert!(Params::new(256, 72, 128, 0.5).is_err());
        assert!(Params::new(256, 72, 8, 1.0).is_err());
        assert!(Params::new(1 << 17, 72, 8, 0.5).is_err());
    }

    #[test]
    fn window_at_n256() {
        let p = Params::new(256, 16, 8, 0.5).unwrap();
        assert_eq!(p.rate_limit_window(), 72);
    }

    #[test]
    fn presets_are_valid_and_admissible() {
        for preset in [Preset::Comparison, Preset::Rate075] {
            let grid = preset.grid();
            assert_eq!(grid.len(), 3);
            for g in grid {
                g.params.validate().unwrap();
                let window = g.window.unwrap_or(g.params.rate_limit_window());
                assert!(window >= g.params.k);
            }
        }
        assert_eq!(Preset::parse("rate075"), Some(Preset::Rate075));
        assert_eq!(Preset::parse("nope"), None);
    }
}
