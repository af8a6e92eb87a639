//! Seeded random instance generation for the certification suite.
//!
//! Instances are nonvanishing maps with `h' = (1+ε)/(1−ε)` for a finite
//! Blaschke-product ε (so `Re h' > 0` automatically) and a Blaschke-product
//! dilatation; both stay rational, so evaluation near the boundary is exact
//! and `g` comes from an exact path integral instead of a truncated series.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{exact_g_from_dilatation, AnalyticMap, LogharmonicMap, RationalFn, Variant};

/// 64-bit linear congruential generator (Knuth's MMIX constants); fixed
/// here so seeded runs reproduce bit-for-bit.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    const MULT: u64 = 6364136223846793005;
    const INC: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        let mut rng = Lcg { state: seed };
        // one warm-up step so seeds 0 and small integers decorrelate
        rng.next_u64();
        rng
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(Self::MULT)
            .wrapping_add(Self::INC);
        self.state
    }

    /// Uniform in [0,1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform over {0, 1, ..., n-1}.
    pub fn next_below(&mut self, n: u64) -> u64 {
        // modulo bias is negligible for the tiny n used here
        self.next_u64() % n
    }

    /// Uniform over the disk |z| <= rmax.
    pub fn disk_point(&mut self, rmax: f64) -> Complex64 {
        let r = rmax * self.next_f64().sqrt();
        let theta = 2.0 * std::f64::consts::PI * self.next_f64();
        Complex64::from_polar(r, theta)
    }
}

/// Blaschke-product zeros defining one random instance; serializable so a
/// run can be replayed from an explicit instance list instead of a seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceSpec {
    /// Zeros of ε (always includes 0 so that ε(0)=0 and h'(0)=1).
    pub eps_zeros: Vec<Complex64>,
    /// Zeros of the dilatation ω.
    pub omega_zeros: Vec<Complex64>,
}

/// Contraction applied to every Blaschke product so |ε| and |ω| stay
/// strictly below 1 on the closed disk.
pub const BLASCHKE_SCALE: f64 = 0.99;
/// Zeros are drawn uniformly from this subdisk.
pub const ZERO_RADIUS: f64 = 0.9;
/// Degree cap for the Blaschke products.
pub const MAX_DEGREE: u64 = 4;

impl InstanceSpec {
    /// Draws one instance from the generator: ε = 0.99·z·B₁(z) with
    /// deg B₁ ≤ 3, ω = 0.99·B₂(z) with 1 ≤ deg B₂ ≤ 4, zeros uniform in
    /// |z| ≤ 0.9.
    pub fn random(rng: &mut Lcg) -> Self {
        let extra = rng.next_below(MAX_DEGREE); // 0..=3 beyond the z factor
        let mut eps_zeros = vec![Complex64::ZERO];
        for _ in 0..extra {
            eps_zeros.push(rng.disk_point(ZERO_RADIUS));
        }
        let deg = 1 + rng.next_below(MAX_DEGREE);
        let omega_zeros = (0..deg).map(|_| rng.disk_point(ZERO_RADIUS)).collect();
        InstanceSpec {
            eps_zeros,
            omega_zeros,
        }
    }

    pub fn eps(&self) -> RationalFn {
        RationalFn::blaschke(&self.eps_zeros, Complex64::new(BLASCHKE_SCALE, 0.0))
    }

    pub fn omega(&self) -> RationalFn {
        RationalFn::blaschke(&self.omega_zeros, Complex64::new(BLASCHKE_SCALE, 0.0))
    }

    /// Materializes the nonvanishing map: h from the Herglotz transform of
    /// ε, g from the exact path integral of ω h'.
    pub fn build(&self) -> Result<LogharmonicMap> {
        if !self.eps_zeros.contains(&Complex64::ZERO) {
            return Err(Error::DilatationNotVanishingAtZero {
                value: self.eps().eval(Complex64::ZERO)?.norm(),
            });
        }
        if self
            .eps_zeros
            .iter()
            .chain(self.omega_zeros.iter())
            .any(|z| z.norm() >= 1.0)
        {
            return Err(Error::InvalidManifest(
                "Blaschke zeros must lie inside the unit disk".into(),
            ));
        }
        let hp = RationalFn::herglotz(&self.eps());
        let h = AnalyticMap::Integral(Box::new(AnalyticMap::Rational(hp)));
        let omega = AnalyticMap::Rational(self.omega());
        let g = exact_g_from_dilatation(&h, &omega)
            .expect("rational h' and omega always integrate");
        let mut f = LogharmonicMap::new(h, g, Variant::Nonvanishing)?;
        f.omega = Some(omega);
        Ok(f)
    }
}

/// The deterministic instance stream for a seed.
pub fn generate(seed: u64, count: usize) -> Vec<InstanceSpec> {
    let mut rng = Lcg::new(seed);
    (0..count).map(|_| InstanceSpec::random(&mut rng)).collect()
}
