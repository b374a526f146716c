use serde::{Deserialize, Serialize};

use crate::efficiency::EfficiencyModel;
use crate::{Error, Result};

/// Population and link parameters shared by every user.
///
/// Defaults follow the two-carrier experiments: `L = M = 100` bits,
/// `R = 100 kbit/s`, `σ² = 5e-16 W` and an effectively unbounded `P_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// Number of users `K`.
    pub users: usize,
    /// Number of carriers `D`.
    pub carriers: usize,
    /// Processing gain `N` per carrier.
    pub processing_gain: u32,
    /// Receiver noise power `σ²` in watts.
    pub noise_power: f64,
    /// Per-carrier transmit power cap in watts.
    pub p_max: f64,
    /// Information bits per packet `L`.
    pub info_bits: u32,
    /// Total bits per packet `M`.
    pub total_bits: u32,
    /// Transmission rate in bits per second.
    pub rate: f64,
    /// Exponent of the efficiency function.
    pub efficiency_exponent: u32,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            users: 2,
            carriers: 2,
            processing_gain: 128,
            noise_power: 5e-16,
            p_max: 1e6,
            info_bits: 100,
            total_bits: 100,
            rate: 1e5,
            efficiency_exponent: 100,
        }
    }
}

impl SystemConfig {
    pub fn new(users: usize, carriers: usize, processing_gain: u32) -> Self {
        Self {
            users,
            carriers,
            processing_gain,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.users == 0 {
            return Err(Error::invalid("users", "must be at least 1"));
        }
        if self.carriers == 0 {
            return Err(Error::invalid("carriers", "must be at least 1"));
        }
        if self.processing_gain == 0 {
            return Err(Error::invalid("processing_gain", "must be at least 1"));
        }
        positive("noise_power", self.noise_power)?;
        positive("rate", self.rate)?;
        if self.p_max.is_nan() || self.p_max <= 0.0 {
            return Err(Error::invalid(
                "p_max",
                format!("must be positive, got {}", self.p_max),
            ));
        }
        if self.info_bits == 0 {
            return Err(Error::invalid("info_bits", "must be at least 1"));
        }
        if self.total_bits < self.info_bits {
            return Err(Error::invalid(
                "total_bits",
                format!("{} is below info_bits {}", self.total_bits, self.info_bits),
            ));
        }
        if self.efficiency_exponent == 0 {
            return Err(Error::invalid("efficiency_exponent", "must be at least 1"));
        }
        Ok(())
    }

    pub fn efficiency_model(&self) -> Result<EfficiencyModel> {
        EfficiencyModel::new(self.efficiency_exponent)
    }

    pub fn processing_gain_f64(&self) -> f64 {
        self.processing_gain as f64
    }

    /// `(L/M)·R`, the throughput of an error-free link.
    pub fn goodput_scale(&self) -> f64 {
        self.info_bits as f64 / self.total_bits as f64 * self.rate
    }

    /// True when all `K` users could share one carrier at the SIR target,
    /// i.e. `N > (K − 1)γ*`.
    pub fn crowded_carrier_feasible(&self, model: &EfficiencyModel) -> bool {
        self.processing_gain_f64() > (self.users as f64 - 1.0) * model.gamma_star()
    }

    /// Fails when no carrier assignment can meet the SIR target: even the
    /// most even spread, `⌈K/D⌉` users per carrier, overloads a carrier.
    pub fn check_feasible(&self, model: &EfficiencyModel) -> Result<()> {
        let crowd = self.users.div_ceil(self.carriers.max(1));
        let n = self.processing_gain_f64();
        if crowd > 1 && n <= (crowd as f64 - 1.0) * model.gamma_star() {
            return Err(Error::Infeasible {
                users: crowd,
                processing_gain: n,
                gamma_star: model.gamma_star(),
            });
        }
        Ok(())
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must be positive, got {value}"),
        ))
    }
}

/// Dense row-major matrix indexed `[user][carrier]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn row_mut(&mut self, row: usize) -> &mut [f64] {
        &mut self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Path gains `h[k][ℓ]`, all finite and strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelMatrix(Matrix);

impl ChannelMatrix {
    pub fn new(gains: Matrix) -> Result<Self> {
        if gains.rows() == 0 || gains.cols() == 0 {
            return Err(Error::Dimension("channel matrix must be non-empty".into()));
        }
        if let Some(bad) = gains
            .as_slice()
            .iter()
            .find(|h| !(h.is_finite() && **h > 0.0))
        {
            return Err(Error::invalid(
                "channels",
                format!("gains must be finite and positive, got {bad}"),
            ));
        }
        Ok(Self(gains))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn users(&self) -> usize {
        self.0.rows()
    }

    pub fn carriers(&self) -> usize {
        self.0.cols()
    }

    pub fn gain(&self, user: usize, carrier: usize) -> f64 {
        self.0.get(user, carrier)
    }

    pub fn row(&self, user: usize) -> &[f64] {
        self.0.row(user)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    /// Same gains with every entry multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let rows: Vec<Vec<f64>> = self
            .0
            .iter_rows()
            .map(|r| r.iter().map(|h| h * factor).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub(crate) fn check_against(&self, config: &SystemConfig) -> Result<()> {
        if self.users() != config.users || self.carriers() != config.carriers {
            return Err(Error::Dimension(format!(
                "channels are {}x{}, config expects {}x{}",
                self.users(),
                self.carriers(),
                config.users,
                config.carriers
            )));
        }
        Ok(())
    }
}

/// Transmit powers `p[k][ℓ]` in watts, entrywise in `[0, P_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerAllocation(Matrix);

impl PowerAllocation {
    pub fn zeros(users: usize, carriers: usize) -> Self {
        Self(Matrix::zeros(users, carriers))
    }

    /// Validates `0 ≤ p ≤ p_max` and finiteness.
    pub fn new(powers: Matrix, p_max: f64) -> Result<Self> {
        if let Some(bad) = powers
            .as_slice()
            .iter()
            .find(|p| !(p.is_finite() && **p >= 0.0 && **p <= p_max))
        {
            return Err(Error::invalid(
                "powers",
                format!("entries must lie in [0, {p_max}], got {bad}"),
            ));
        }
        Ok(Self(powers))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], p_max: f64) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?, p_max)
    }

    pub fn users(&self) -> usize {
        self.0.rows()
    }

    pub fn carriers(&self) -> usize {
        self.0.cols()
    }

    pub fn power(&self, user: usize, carrier: usize) -> f64 {
        self.0.get(user, carrier)
    }

    pub fn row(&self, user: usize) -> &[f64] {
        self.0.row(user)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn total_power(&self, user: usize) -> f64 {
        self.0.row(user).iter().sum()
    }

    pub fn max_power(&self) -> f64 {
        self.0.as_slice().iter().copied().fold(0.0, f64::max)
    }

    /// Overwrites one user's power vector. Callers uphold the entry bounds.
    pub(crate) fn set_row(&mut self, user: usize, powers: &[f64]) {
        self.0.row_mut(user).copy_from_slice(powers);
    }

    pub(crate) fn set(&mut self, user: usize, carrier: usize, value: f64) {
        self.0.set(user, carrier, value);
    }

    pub(crate) fn check_against(&self, channels: &ChannelMatrix) -> Result<()> {
        if self.users() != channels.users() || self.carriers() != channels.carriers() {
            return Err(Error::Dimension(format!(
                "powers are {}x{}, channels are {}x{}",
                self.users(),
                self.carriers(),
                channels.users(),
                channels.carriers()
            )));
        }
        Ok(())
    }
}
