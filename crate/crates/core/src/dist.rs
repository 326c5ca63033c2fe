//! Parametric lifetime distributions: Weibull (with the exponential as the
//! shape-1 special case) plus a location shift.
//!
//! The survival function is `exp(-rate * (x - shift)^shape)` on
//! `[shift, inf)` and 1 below the shift. Everything else (cdf, density,
//! hazard, reversed hazard) derives from it in closed form. Survival is
//! carried in log space so that products over many components do not
//! underflow.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Weibull,
    Exponential,
}

/// A shifted Weibull lifetime: survival `exp(-rate * (x - shift)^shape)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistSpec {
    family: Family,
    shape: f64,
    rate: f64,
    shift: f64,
}

impl DistSpec {
    pub fn weibull(shape: f64, rate: f64) -> Result<Self> {
        if !shape.is_finite() || shape <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "shape",
                value: shape,
                reason: "must be finite and > 0",
            });
        }
        if !rate.is_finite() || rate <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "rate",
                value: rate,
                reason: "must be finite and > 0",
            });
        }
        Ok(Self {
            family: Family::Weibull,
            shape,
            rate,
            shift: 0.0,
        })
    }

    /// Exponential with the given rate (Weibull with shape 1).
    pub fn exponential(rate: f64) -> Result<Self> {
        let mut d = Self::weibull(1.0, rate)?;
        d.family = Family::Exponential;
        Ok(d)
    }

    pub fn with_shift(mut self, shift: f64) -> Result<Self> {
        if !shift.is_finite() {
            return Err(Error::InvalidParameter {
                name: "shift",
                value: shift,
                reason: "must be finite",
            });
        }
        self.shift = shift;
        Ok(self)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// Left endpoint of the support.
    pub fn support_start(&self) -> f64 {
        self.shift
    }

    /// log of the survival function; 0 at or below the shift.
    pub fn log_sf(&self, x: f64) -> f64 {
        let t = x - self.shift;
        if t <= 0.0 {
            0.0
        } else {
            -self.rate * t.powf(self.shape)
        }
    }

    /// Survival function, in [0, 1]; 1 at or below the shift.
    pub fn sf(&self, x: f64) -> f64 {
        self.log_sf(x).exp()
    }

    /// Cumulative distribution function. Computed as `-expm1(log_sf)` so the
    /// result keeps relative accuracy when the survival is close to 1.
    pub fn cdf(&self, x: f64) -> f64 {
        -self.log_sf(x).exp_m1()
    }

    /// log of the cdf; -inf at or below the shift.
    pub fn log_cdf(&self, x: f64) -> f64 {
        let a = -self.log_sf(x); // cumulative hazard, >= 0
        if a == 0.0 {
            f64::NEG_INFINITY
        } else if a > std::f64::consts::LN_2 {
            (-(-a).exp()).ln_1p()
        } else {
            (-(-a).exp_m1()).ln()
        }
    }

    /// Density `rate * shape * (x - shift)^(shape - 1) * sf(x)`.
    ///
    /// For shape < 1 the density blows up at the support endpoint; such
    /// points are an error so that grid code is forced to exclude them.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        Ok(self.hazard(x)? * self.sf(x))
    }

    /// Hazard rate `rate * shape * (x - shift)^(shape - 1)`; 0 strictly
    /// below the support where no failure is possible yet. The support
    /// endpoint itself is singular for shape < 1 and must be excluded from
    /// grids.
    pub fn hazard(&self, x: f64) -> Result<f64> {
        let t = x - self.shift;
        if t > 0.0 {
            Ok(self.rate * self.shape * t.powf(self.shape - 1.0))
        } else if t == 0.0 {
            if self.shape < 1.0 {
                Err(Error::EndpointSingularity {
                    x,
                    shape: self.shape,
                })
            } else if self.shape == 1.0 {
                Ok(self.rate)
            } else {
                Ok(0.0)
            }
        } else {
            Ok(0.0)
        }
    }

    /// Reversed hazard rate `pdf / cdf`; positive and finite on the open
    /// support, `ZeroDenominator` where the cdf vanishes.
    pub fn rev_hazard(&self, x: f64) -> Result<f64> {
        let cdf = self.cdf(x);
        if cdf <= 0.0 {
            return Err(Error::ZeroDenominator { x });
        }
        Ok(self.pdf(x)? / cdf)
    }

    /// Inverse of the survival function: the time `x` with `sf(x) = u`.
    pub fn inv_sf(&self, u: f64) -> f64 {
        debug_assert!(u > 0.0 && u <= 1.0);
        self.shift + ((-u.ln()) / self.rate).powf(1.0 / self.shape)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn sf_at_support_left_endpoint_is_one() {
        let d = DistSpec::weibull(0.5, 2.0).unwrap();
        assert_eq!(d.sf(0.0), 1.0);
        assert_eq!(d.sf(-3.0), 1.0);
    }

    #[test]
    fn sf_direct_exponent() {
        let d = DistSpec::weibull(0.5, 2.0).unwrap();
        assert!(close(d.sf(1.0), (-2.0f64).exp(), 1e-15));
    }

    #[test]
    fn cdf_complements_sf() {
        let d = DistSpec::weibull(0.5, 2.0).unwrap();
        assert_eq!(d.cdf(0.0), 0.0);
        assert!(close(d.cdf(1.0), 1.0 - (-2.0f64).exp(), 1e-15));
        for &x in &[0.01, 0.3, 1.0, 4.0, 25.0] {
            assert!((d.sf(x) + d.cdf(x) - 1.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn cdf_tiny_argument_matches_series() {
        // 200-term alternating series for 1 - exp(-u), u = 0.2 * x^0.6.
        let d = DistSpec::weibull(0.6, 0.2).unwrap();
        let x = 1e-8f64;
        let u = 0.2 * x.powf(0.6);
        let mut series = 0.0f64;
        let mut term = 1.0f64;
        for j in 1..=200u32 {
            term *= -u / j as f64;
            series -= term;
        }
        let got = d.cdf(x);
        assert!(
            close(got, series, 1e-12),
            "cdf({x}) = {got:e}, series = {series:e}"
        );
    }

    #[test]
    fn pdf_known_values() {
        let e = DistSpec::weibull(1.0, 1.0).unwrap();
        assert!(close(e.pdf(0.5).unwrap(), (-0.5f64).exp(), 1e-15));
        // rate*shape*x^(shape-1) = 1 at x = 1 for (0.5, 2).
        let d = DistSpec::weibull(0.5, 2.0).unwrap();
        assert!(close(d.pdf(1.0).unwrap(), (-2.0f64).exp(), 1e-15));
    }

    #[test]
    fn pdf_matches_cdf_finite_difference() {
        let d = DistSpec::weibull(0.5, 2.0).unwrap();
        let x = 4.0f64;
        let h = 1e-6 * x.max(1.0);
        let fd = (d.cdf(x + h) - d.cdf(x - h)) / (2.0 * h);
        assert!(close(d.pdf(x).unwrap(), fd, 1e-6));
    }

    #[test]
    fn pdf_endpoint_singularity_for_shape_below_one() {
        let d = DistSpec::weibull(0.5, 2.0).unwrap();
        assert!(matches!(d.pdf(0.0), Err(Error::EndpointSingularity { .. })));
        // Strictly below the support the density is plainly zero.
        assert_eq!(d.pdf(-1.0).unwrap(), 0.0);
        // Shape >= 1 is total everywhere.
        let e = DistSpec::weibull(2.0, 1.0).unwrap();
        assert_eq!(e.pdf(-1.0).unwrap(), 0.0);
        assert_eq!(e.pdf(0.0).unwrap(), 0.0);
    }

    #[test]
    fn hazard_example5_base() {
        // Hazard of sf = exp(-2 sqrt(x)) is 1/sqrt(x).
        let d = DistSpec::weibull(0.5, 2.0).unwrap();
        assert!(close(d.hazard(4.0).unwrap(), 0.5, 1e-15));
    }

    #[test]
    fn exponential_hazard_is_constant() {
        let d = DistSpec::exponential(3.5).unwrap();
        for &x in &[0.1, 1.0, 10.0] {
            assert!(close(d.hazard(x).unwrap(), 3.5, 1e-15));
        }
    }

    #[test]
    fn hazard_is_pdf_over_sf() {
        let d = DistSpec::weibull(0.6, 0.2).unwrap();
        let x = 1.0;
        let ratio = d.pdf(x).unwrap() / d.sf(x);
        assert!(close(d.hazard(x).unwrap(), ratio, 1e-12));
    }

    #[test]
    fn rev_hazard_is_pdf_over_cdf() {
        let d = DistSpec::weibull(1.0, 1.0).unwrap();
        for &x in &[0.1, 1.0, 10.0] {
            let ratio = d.pdf(x).unwrap() / d.cdf(x);
            assert!(close(d.rev_hazard(x).unwrap(), ratio, 1e-12));
        }
    }

    #[test]
    fn rev_hazard_zero_denominator_at_or_below_shift() {
        let d = DistSpec::weibull(2.0, 1.0).unwrap().with_shift(0.3).unwrap();
        assert!(matches!(
            d.rev_hazard(0.3),
            Err(Error::ZeroDenominator { .. })
        ));
        assert!(matches!(
            d.rev_hazard(0.0),
            Err(Error::ZeroDenominator { .. })
        ));
    }

    #[test]
    fn rev_hazard_closed_form() {
        let d = DistSpec::weibull(0.5, 2.0).unwrap();
        let e2 = (-2.0f64).exp();
        assert!(close(d.rev_hazard(1.0).unwrap(), e2 / (1.0 - e2), 1e-14));
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(DistSpec::weibull(0.0, 1.0).is_err());
        assert!(DistSpec::weibull(-1.0, 1.0).is_err());
        assert!(DistSpec::weibull(1.0, 0.0).is_err());
        assert!(DistSpec::weibull(f64::NAN, 1.0).is_err());
        assert!(DistSpec::weibull(1.0, 1.0)
            .unwrap()
            .with_shift(f64::INFINITY)
            .is_err());
    }

    #[test]
    fn inv_sf_known_points() {
        let e = DistSpec::weibull(1.0, 1.0).unwrap();
        assert!(close(e.inv_sf((-1.0f64).exp()), 1.0, 1e-14));
        let d = DistSpec::weibull(0.5, 2.0).unwrap();
        assert!(close(d.inv_sf((-2.0f64).exp()), 1.0, 1e-14));
    }
}
