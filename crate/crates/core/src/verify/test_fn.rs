use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Domain1D;

pub const MIN_FAMILY_SIZE: usize = 8;
/// `max |b'|` and `max |b''|` for `b(s) = (1 - s^2)^3`.
const BUMP_D1: f64 = 1.717_300_206_719_838_4;
const BUMP_D2: f64 = 6.0;

#[inline]
fn bump(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        let r = 1.0 - s * s;
        r * r * r
    }
}

/// `φ(t, x) = b((t - tc)/wt) b((x - xc)/wx)` with `b(s) = (1 - s^2)^3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub id: usize,
    pub tc: f64,
    pub wt: f64,
    pub xc: f64,
    pub wx: f64,
}

impl TestFunction {
    /// Rejects bumps whose time support reaches past `horizon`.
    pub fn new(id: usize, (tc, wt): (f64, f64), (xc, wx): (f64, f64), horizon: f64) -> Result<Self> {
        if !(wt > 0.0 && wx > 0.0) || ![tc, wt, xc, wx].iter().all(|v| v.is_finite()) {
            return Err(Error::TestFunction(format!("test function {id}: bad centers or widths")));
        }
        if tc + wt > horizon {
            return Err(Error::TestFunction(format!(
                "test function {id} does not vanish at T = {horizon} (support ends at {})",
                tc + wt
            )));
        }
        Ok(TestFunction { id, tc, wt, xc, wx })
    }

    #[inline]
    pub fn eval(&self, t: f64, x: f64) -> f64 {
        bump((t - self.tc) / self.wt) * bump((x - self.xc) / self.wx)
    }

    /// Bound on the sum of the sup norms of `φ` and its derivatives up to
    /// order two.
    pub fn c2_norm(&self) -> f64 {
        let (a, b) = (1.0 / self.wt, 1.0 / self.wx);
        1.0 + BUMP_D1 * (a + b) + BUMP_D2 * (a * a + b * b) + BUMP_D1 * BUMP_D1 * a * b
    }

    /// Whether the support meets `t = 0`.
    pub fn touches_initial_line(&self) -> bool {
        self.tc - self.wt < 0.0
    }
}

/// Seeded tensor-bump family: four fixed members (one at each boundary
/// point, one across `t = 0`, one interior) followed by random ones.
pub fn test_family(domain: &Domain1D, horizon: f64, count: usize, seed: u64) -> Result<Vec<TestFunction>> {
    if count < MIN_FAMILY_SIZE {
        return Err(Error::Invalid(format!(
            "need at least {MIN_FAMILY_SIZE} test functions, got {count}"
        )));
    }
    let (a, b, len, t) = (domain.a, domain.b, domain.length(), horizon);
    let mut out = vec![
        TestFunction::new(0, (0.3 * t, 0.6 * t), (a, 0.3 * len), t)?,
        TestFunction::new(1, (0.3 * t, 0.6 * t), (b, 0.3 * len), t)?,
        TestFunction::new(2, (0.0, 0.8 * t), (0.5 * (a + b), 0.4 * len), t)?,
        TestFunction::new(3, (0.5 * t, 0.4 * t), (a + 0.4 * len, 0.25 * len), t)?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count {
        let wt = rng.gen_range(0.15 * t..0.45 * t);
        let tc = rng.gen_range(-0.2 * t..t - wt);
        let wx = rng.gen_range(0.1 * len..0.4 * len);
        let xc = rng.gen_range(a - 0.05 * len..b + 0.05 * len);
        out.push(TestFunction::new(out.len(), (tc, wt), (xc, wx), t)?);
    }
    Ok(out)
}
