use crate::error::{PbtError, Result};

/// Environment variable overriding [`OracleConfig::cap`].
pub const ORACLE_CAP_ENV: &str = "PBT_ORACLE_CAP";
pub const DEFAULT_ORACLE_CAP: usize = 4096;
pub const DEFAULT_CHANNEL_CAP: usize = 1024;
/// Young projectors sum over all of `S_N`.
pub const MAX_PROJECTOR_PORTS: u32 = 6;

/// Size limits of the dense constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest `d^{N+1}` for states and certificates on `A^N B`.
    pub cap: usize,
    /// Largest `d^{N+1}` for the channel simulation, whose state space is
    /// the square of that.
    pub channel_cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            cap: DEFAULT_ORACLE_CAP,
            channel_cap: DEFAULT_CHANNEL_CAP,
        }
    }
}

impl OracleConfig {
    /// Defaults, with `PBT_ORACLE_CAP` applied when set.
    pub fn from_env() -> Result<Self> {
        let mut config = Self::default();
        if let Ok(raw) = std::env::var(ORACLE_CAP_ENV) {
            config.cap = raw.trim().parse().map_err(|_| {
                PbtError::InvalidArgument(format!("{ORACLE_CAP_ENV} must be a positive integer, got `{raw}`"))
            })?;
        }
        Ok(config)
    }

    /// `d^{N+1}`, checked against `cap`.
    pub fn port_dim(&self, d: u32, n: u32) -> Result<usize> {
        check_dim(d, n + 1, self.cap)
    }

    pub(crate) fn channel_dim(&self, d: u32, n: u32) -> Result<usize> {
        check_dim(d, n + 1, self.channel_cap.min(self.cap))
    }
}

/// `d^k`, failing with [`PbtError::SizeCap`] above `cap`.
pub(crate) fn check_dim(d: u32, k: u32, cap: usize) -> Result<usize> {
    if d == 0 {
        return Err(PbtError::InvalidArgument("d must be at least 1".into()));
    }
    match (d as usize).checked_pow(k) {
        Some(dim) if dim <= cap => Ok(dim),
        Some(dim) => Err(PbtError::SizeCap { dim, cap }),
        None => Err(PbtError::SizeCap { dim: usize::MAX, cap }),
    }
}

pub(crate) fn check_port_index(n: u32, i: u32) -> Result<()> {
    if n == 0 || i == 0 || i > n {
        return Err(PbtError::InvalidArgument(format!("port {i} out of range 1..={n}")));
    }
    Ok(())
}

pub(crate) fn check_projector_ports(n: u32) -> Result<()> {
    if n > MAX_PROJECTOR_PORTS {
        return Err(PbtError::ProjectorOrder {
            n,
            max: MAX_PROJECTOR_PORTS,
        });
    }
    Ok(())
}
