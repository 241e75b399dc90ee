use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const EPS_SING_ENV: &str = "KOWTYPE_EPS_SING";

/// Parameter record shared by all systems. Each system reads only the
/// fields it needs. Values may be complex because generic complex
/// trajectories carry complex conserved-value labels; JSON accepts either a
/// number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemParams {
    #[serde(with = "cnum")]
    pub g2: Complex64,
    #[serde(with = "cnum")]
    pub g3: Complex64,
    #[serde(with = "cnum")]
    pub a: Complex64,
    #[serde(with = "cnum")]
    pub b: Complex64,
    #[serde(with = "cnum")]
    pub c: Complex64,
    #[serde(with = "cnum")]
    pub k: Complex64,
    #[serde(with = "cnum")]
    pub d: Complex64,
    pub eps_sing: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        let z = Complex64::new(0.0, 0.0);
        SystemParams {
            g2: z,
            g3: z,
            a: z,
            b: z,
            c: z,
            k: z,
            d: z,
            eps_sing: 1e-6,
        }
    }
}

impl SystemParams {
    pub fn with_g2(mut self, g2: f64) -> Self {
        self.g2 = g2.into();
        self
    }

    /// Replace `eps_sing` with the value from the environment, if set and valid.
    pub fn with_env_eps(mut self) -> Self {
        if let Some(eps) = eps_sing_from_env() {
            self.eps_sing = eps;
        }
        self
    }
}

/// Positive finite `eps_sing` read from [`EPS_SING_ENV`].
pub fn eps_sing_from_env() -> Option<f64> {
    std::env::var(EPS_SING_ENV)
        .ok()?
        .trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite() && *v > 0.0)
}

mod cnum {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Real(f64),
        Pair([f64; 2]),
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        if z.im == 0.0 {
            Repr::Real(z.re).serialize(s)
        } else {
            Repr::Pair([z.re, z.im]).serialize(s)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        Ok(match Repr::deserialize(d)? {
            Repr::Real(re) => Complex64::new(re, 0.0),
            Repr::Pair([re, im]) => Complex64::new(re, im),
        })
    }
}
