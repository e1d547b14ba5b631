//! Flux and source models of a scalar balance law.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::smooth::{NormFn, Partial, Smooth3};

/// Flux `f(t, x, u)`; `div_f` denotes the x-derivative at frozen `u`.
#[derive(Clone)]
pub struct FluxModel {
    pub name: String,
    func: Smooth3,
    norms: BTreeMap<String, NormFn>,
}

/// Source `F(t, x, u)`.
#[derive(Clone)]
pub struct SourceModel {
    pub name: String,
    func: Smooth3,
    norms: BTreeMap<String, NormFn>,
}

macro_rules! model_common {
    ($ty:ident) => {
        impl $ty {
            pub fn new(
                name: impl Into<String>,
                value: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
            ) -> Self {
                $ty {
                    name: name.into(),
                    func: Smooth3::new(value),
                    norms: BTreeMap::new(),
                }
            }

            pub fn from_smooth(name: impl Into<String>, func: Smooth3) -> Self {
                $ty {
                    name: name.into(),
                    func,
                    norms: BTreeMap::new(),
                }
            }

            pub fn zero() -> Self {
                $ty {
                    name: "zero".into(),
                    func: Smooth3::zero(),
                    norms: BTreeMap::new(),
                }
            }

            pub fn with_partial(
                mut self,
                p: Partial,
                g: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
            ) -> Self {
                self.func = self.func.with_partial(p, g);
                self
            }

            /// Registers a closed-form sup-norm `(t, radius) -> bound` for a
            /// report entry; it then overrides sampling.
            pub fn with_norm(
                mut self,
                entry: &str,
                g: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
            ) -> Self {
                self.norms.insert(entry.to_string(), Arc::new(g));
                self
            }

            pub fn closed_form_norm(&self, entry: &str) -> Option<&NormFn> {
                self.norms.get(entry)
            }

            pub fn func(&self) -> &Smooth3 {
                &self.func
            }

            #[inline]
            pub fn partial(&self, p: Partial, t: f64, x: f64, u: f64) -> f64 {
                self.func.partial(p, t, x, u)
            }

            /// Two models are the same when they share evaluators or agree
            /// exactly on a fixed pseudo-random sample.
            pub fn same_as(&self, other: &Self) -> bool {
                if Arc::ptr_eq(self.func.value_arc(), other.func.value_arc()) {
                    return true;
                }
                let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
                (0..64).all(|_| {
                    let t = rng.gen_range(0.0..2.0);
                    let x = rng.gen_range(-2.0..2.0);
                    let u = rng.gen_range(-4.0..4.0);
                    self.func.eval(t, x, u).to_bits() == other.func.eval(t, x, u).to_bits()
                })
            }
        }

        impl fmt::Debug for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_struct(stringify!($ty))
                    .field("name", &self.name)
                    .field("func", &self.func)
                    .field("closed_form_norms", &self.norms.keys().collect::<Vec<_>>())
                    .finish()
            }
        }
    };
}

model_common!(FluxModel);
model_common!(SourceModel);

impl FluxModel {
    #[inline]
    pub fn f(&self, t: f64, x: f64, u: f64) -> f64 {
        self.func.eval(t, x, u)
    }
    #[inline]
    pub fn du_f(&self, t: f64, x: f64, u: f64) -> f64 {
        self.func.partial(Partial::DU, t, x, u)
    }
    #[inline]
    pub fn div_f(&self, t: f64, x: f64, u: f64) -> f64 {
        self.func.partial(Partial::DX, t, x, u)
    }
    pub fn du_div_f(&self, t: f64, x: f64, u: f64) -> f64 {
        self.func.partial(Partial::DXU, t, x, u)
    }
    pub fn dt_f(&self, t: f64, x: f64, u: f64) -> f64 {
        self.func.partial(Partial::DT, t, x, u)
    }
    pub fn dt_div_f(&self, t: f64, x: f64, u: f64) -> f64 {
        self.func.partial(Partial::DTX, t, x, u)
    }
    pub fn grad_div_f(&self, t: f64, x: f64, u: f64) -> f64 {
        self.func.partial(Partial::DXX, t, x, u)
    }
    /// Coincides with `du_div_f` in one space dimension.
    pub fn grad_du_f(&self, t: f64, x: f64, u: f64) -> f64 {
        self.func.partial(Partial::DXU, t, x, u)
    }
    pub fn duu_f(&self, t: f64, x: f64, u: f64) -> f64 {
        self.func.partial(Partial::DUU, t, x, u)
    }
    pub fn dt_du_f(&self, t: f64, x: f64, u: f64) -> f64 {
        self.func.partial(Partial::DTU, t, x, u)
    }
    pub fn dtt_f(&self, t: f64, x: f64, u: f64) -> f64 {
        self.func.partial(Partial::DTT, t, x, u)
    }
}

#[allow(non_snake_case)]
impl SourceModel {
    #[inline]
    pub fn F(&self, t: f64, x: f64, u: f64) -> f64 {
        self.func.eval(t, x, u)
    }
    #[inline]
    pub fn du_F(&self, t: f64, x: f64, u: f64) -> f64 {
        self.func.partial(Partial::DU, t, x, u)
    }
    pub fn dt_F(&self, t: f64, x: f64, u: f64) -> f64 {
        self.func.partial(Partial::DT, t, x, u)
    }
    pub fn grad_F(&self, t: f64, x: f64, u: f64) -> f64 {
        self.func.partial(Partial::DX, t, x, u)
    }
}
