use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::ProtocolError;
use crate::qmath::EXACT_TOL;

/// The unknown qubit `alpha|0> + beta|1>` the dealer splits.
///
/// Stored in canonical form: normalized, with `alpha` real and non-negative.
/// `lambda_view = beta / alpha` whenever `alpha != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSecret")]
pub struct SecretSpec {
    alpha: C64,
    beta: C64,
    lambda_view: Option<C64>,
}

#[derive(Deserialize)]
struct RawSecret {
    alpha: C64,
    beta: C64,
    #[serde(default)]
    lambda_view: Option<C64>,
}

impl TryFrom<RawSecret> for SecretSpec {
    type Error = ProtocolError;

    /// Canonical input is kept bit for bit; anything else is normalized.
    fn try_from(raw: RawSecret) -> Result<Self, Self::Error> {
        let n = raw.alpha.norm_sqr() + raw.beta.norm_sqr();
        if !n.is_finite() || (n - 1.0).abs() > 1e-9 {
            return Err(ProtocolError::InvalidSecret(format!(
                "|alpha|^2 + |beta|^2 = {n}, expected 1"
            )));
        }
        if raw.alpha.im != 0.0 || raw.alpha.re < 0.0 {
            return SecretSpec::from_amplitudes(raw.alpha, raw.beta);
        }
        let derived = (raw.alpha.re > 0.0).then(|| raw.beta / raw.alpha.re);
        let lambda_view = match (raw.lambda_view, derived) {
            (Some(given), Some(d)) if (given - d).norm() <= 1e-9 * (1.0 + d.norm()) => Some(given),
            (Some(given), _) => {
                return Err(ProtocolError::InvalidSecret(format!(
                    "lambda_view {given} does not match beta / alpha"
                )))
            }
            (None, d) => d,
        };
        Ok(SecretSpec {
            alpha: raw.alpha,
            beta: raw.beta,
            lambda_view,
        })
    }
}

impl SecretSpec {
    /// `(|0> + λ|1>) / sqrt(1 + |λ|²)`.
    pub fn from_lambda(lambda: C64) -> Result<Self, ProtocolError> {
        if !lambda.re.is_finite() || !lambda.im.is_finite() {
            return Err(ProtocolError::InvalidSecret(format!(
                "lambda = {lambda} is not finite"
            )));
        }
        Self::from_amplitudes(C64::new(1.0, 0.0), lambda)
    }

    /// Normalizes `(alpha, beta)` and removes the global phase.
    pub fn from_amplitudes(alpha: C64, beta: C64) -> Result<Self, ProtocolError> {
        let finite = [alpha, beta]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite());
        let n = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !finite || n < 1e-150 {
            return Err(ProtocolError::InvalidSecret(format!(
                "amplitudes ({alpha}, {beta}) cannot be normalized"
            )));
        }
        let (alpha, beta) = if alpha.norm() > 0.0 {
            let phase = alpha.conj() / alpha.norm();
            (C64::new(alpha.norm() / n, 0.0), beta * phase / n)
        } else {
            (C64::new(0.0, 0.0), C64::new(beta.norm() / n, 0.0))
        };
        let lambda_view = (alpha.re > 0.0).then(|| beta / alpha.re);
        Ok(Self {
            alpha,
            beta,
            lambda_view,
        })
    }

    /// Haar-uniform point on the Bloch sphere: two independent complex
    /// Gaussians, normalized.
    pub fn haar<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut g = || -> f64 { rng.sample(StandardNormal) };
            let alpha = C64::new(g(), g());
            let beta = C64::new(g(), g());
            if let Ok(s) = Self::from_amplitudes(alpha, beta) {
                return s;
            }
        }
    }

    /// `count` Haar secrets drawn from one stream.
    pub fn haar_batch<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<Self> {
        (0..count).map(|_| Self::haar(rng)).collect()
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    pub fn lambda(&self) -> Option<C64> {
        self.lambda_view
    }

    /// `Im(λ) / (1 + |λ|²)`, written as `Im(conj(alpha) beta)` so it stays
    /// defined at `alpha = 0`.
    pub fn im_lambda_weight(&self) -> f64 {
        (self.alpha.conj() * self.beta).im
    }

    pub fn is_normalized(&self) -> bool {
        (self.alpha.norm_sqr() + self.beta.norm_sqr() - 1.0).abs() <= EXACT_TOL
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn lambda_zero_is_ket_zero() {
        let s = SecretSpec::from_lambda(C64::new(0.0, 0.0)).unwrap();
        assert_eq!(s.alpha(), C64::new(1.0, 0.0));
        assert_eq!(s.beta(), C64::new(0.0, 0.0));
    }

    #[test]
    fn alpha_zero_has_no_lambda() {
        let s = SecretSpec::from_amplitudes(C64::new(0.0, 0.0), C64::new(0.0, -2.0)).unwrap();
        assert_eq!(s.beta(), C64::new(1.0, 0.0));
        assert_eq!(s.lambda(), None);
        assert!(SecretSpec::from_amplitudes(C64::new(0.0, 0.0), C64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn canonical_phase() {
        let s = SecretSpec::from_amplitudes(C64::new(0.0, 3.0), C64::new(4.0, 0.0)).unwrap();
        assert!((s.alpha() - C64::new(0.6, 0.0)).norm() < 1e-15);
        assert!((s.beta() - C64::new(0.0, -0.8)).norm() < 1e-15);
        assert!(s.is_normalized());
    }

    #[test]
    fn haar_mean_population() {
        let mut rng = stream(11, 0);
        let batch = SecretSpec::haar_batch(&mut rng, 4000);
        let mean = batch.iter().map(|s| s.alpha().norm_sqr()).sum::<f64>() / batch.len() as f64;
        assert!((mean - 0.5).abs() < 0.05, "mean |alpha|^2 = {mean}");
    }

    #[test]
    fn json_uses_pairs_and_validates() {
        let s = SecretSpec::from_lambda(C64::new(1.0, 1.0)).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.starts_with("{\"alpha\":["), "{text}");
        let back: SecretSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<SecretSpec>(r#"{"alpha":[1,0],"beta":[1,0]}"#).is_err());
        let bad_view = r#"{"alpha":[1,0],"beta":[0,0],"lambda_view":[2,0]}"#;
        assert!(serde_json::from_str::<SecretSpec>(bad_view).is_err());
        // non-canonical phase is normalized away
        let s: SecretSpec = serde_json::from_str(r#"{"alpha":[0,1],"beta":[0,0]}"#).unwrap();
        assert_eq!(s.alpha(), C64::new(1.0, 0.0));
        let s: SecretSpec = serde_json::from_str(r#"{"alpha":[0,0],"beta":[0,1]}"#).unwrap();
        assert!(s.lambda().is_none());
    }
}
