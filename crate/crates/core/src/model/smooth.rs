//! Real-valued C² maps of `(t, x, u)` with optional hand-coded partial
//! derivatives and centered finite-difference fallbacks.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Evaluator of a map `(t, x, u) -> R`.
pub type Eval3 = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;
/// Evaluator of a map `t -> R`.
pub type Eval1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// Closed-form sup-norm as a function of `(t, radius)`.
pub type NormFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Relative step for first-order differences.
pub const FD_STEP_FIRST: f64 = 1e-5;
/// Relative step for second-order differences taken directly from values.
pub const FD_STEP_SECOND: f64 = 1e-4;

/// Multi-index of a partial derivative in `(t, x, u)`, total order at most 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partial {
    pub t: u8,
    pub x: u8,
    pub u: u8,
}

impl Partial {
    pub const VALUE: Partial = Partial::new(0, 0, 0);
    pub const DT: Partial = Partial::new(1, 0, 0);
    pub const DX: Partial = Partial::new(0, 1, 0);
    pub const DU: Partial = Partial::new(0, 0, 1);
    pub const DTT: Partial = Partial::new(2, 0, 0);
    pub const DXX: Partial = Partial::new(0, 2, 0);
    pub const DUU: Partial = Partial::new(0, 0, 2);
    pub const DTX: Partial = Partial::new(1, 1, 0);
    pub const DTU: Partial = Partial::new(1, 0, 1);
    pub const DXU: Partial = Partial::new(0, 1, 1);

    pub const ALL: [Partial; 10] = [
        Self::VALUE,
        Self::DT,
        Self::DX,
        Self::DU,
        Self::DTT,
        Self::DXX,
        Self::DUU,
        Self::DTX,
        Self::DTU,
        Self::DXU,
    ];

    pub const fn new(t: u8, x: u8, u: u8) -> Self {
        Partial { t, x, u }
    }

    pub fn order(self) -> u8 {
        self.t + self.x + self.u
    }

    fn vars(self) -> Vec<Var> {
        let mut v = Vec::with_capacity(2);
        for _ in 0..self.t {
            v.push(Var::T);
        }
        for _ in 0..self.x {
            v.push(Var::X);
        }
        for _ in 0..self.u {
            v.push(Var::U);
        }
        v
    }

    fn without(self, var: Var) -> Partial {
        let mut p = self;
        match var {
            Var::T => p.t -= 1,
            Var::X => p.x -= 1,
            Var::U => p.u -= 1,
        }
        p
    }
}

impl fmt::Display for Partial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order() == 0 {
            return write!(f, "value");
        }
        write!(f, "d")?;
        for v in self.vars() {
            write!(f, "{}", v.name())?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Var {
    T,
    X,
    U,
}

impl Var {
    fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::X => "x",
            Var::U => "u",
        }
    }
}

#[inline]
fn shifted(p: (f64, f64, f64), var: Var, h: f64) -> (f64, f64, f64) {
    match var {
        Var::T => (p.0 + h, p.1, p.2),
        Var::X => (p.0, p.1 + h, p.2),
        Var::U => (p.0, p.1, p.2 + h),
    }
}

#[inline]
fn coord(p: (f64, f64, f64), var: Var) -> f64 {
    match var {
        Var::T => p.0,
        Var::X => p.1,
        Var::U => p.2,
    }
}

#[inline]
fn step(rel: f64, arg: f64) -> f64 {
    rel * (1.0 + arg.abs())
}

/// A C² map of `(t, x, u)` together with any partial derivatives the
/// caller supplied in closed form.
#[derive(Clone)]
pub struct Smooth3 {
    value: Eval3,
    partials: BTreeMap<Partial, Eval3>,
}

impl fmt::Debug for Smooth3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Smooth3")
            .field("supplied", &self.partials.keys().collect::<Vec<_>>())
            .finish()
    }
}

impl Smooth3 {
    pub fn new(value: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Smooth3 {
            value: Arc::new(value),
            partials: BTreeMap::new(),
        }
    }

    pub fn from_arc(value: Eval3) -> Self {
        Smooth3 {
            value,
            partials: BTreeMap::new(),
        }
    }

    /// The identically zero map, with every partial supplied.
    pub fn zero() -> Self {
        let mut s = Smooth3::new(|_, _, _| 0.0);
        for p in Partial::ALL.iter().skip(1) {
            s.partials.insert(*p, Arc::new(|_, _, _| 0.0));
        }
        s
    }

    pub fn with_partial(
        mut self,
        p: Partial,
        g: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        assert!(p.order() >= 1 && p.order() <= 2, "partials of order 1 or 2 only");
        self.partials.insert(p, Arc::new(g));
        self
    }

    pub fn with_partial_arc(mut self, p: Partial, g: Eval3) -> Self {
        assert!(p.order() >= 1 && p.order() <= 2, "partials of order 1 or 2 only");
        self.partials.insert(p, g);
        self
    }

    pub fn value_arc(&self) -> &Eval3 {
        &self.value
    }

    pub fn supplied(&self) -> impl Iterator<Item = Partial> + '_ {
        self.partials.keys().copied()
    }

    pub fn is_supplied(&self, p: Partial) -> bool {
        self.partials.contains_key(&p)
    }

    #[inline]
    pub fn eval(&self, t: f64, x: f64, u: f64) -> f64 {
        (self.value)(t, x, u)
    }

    /// Partial derivative: the supplied evaluator when present, otherwise a
    /// centered difference (of a supplied first derivative when one fits).
    pub fn partial(&self, p: Partial, t: f64, x: f64, u: f64) -> f64 {
        if p.order() == 0 {
            return self.eval(t, x, u);
        }
        if let Some(g) = self.partials.get(&p) {
            return g(t, x, u);
        }
        let pt = (t, x, u);
        match p.order() {
            1 => self.fd_first(&*self.value, p.vars()[0], pt),
            2 => {
                let vars = p.vars();
                for (i, &var) in vars.iter().enumerate() {
                    let lower = p.without(var);
                    if let Some(g) = self.partials.get(&lower) {
                        return self.fd_first(&**g, vars[1 - i], pt);
                    }
                }
                self.fd_second_from_value(vars[0], vars[1], pt)
            }
            _ => unreachable!("order > 2 not supported"),
        }
    }

    /// Finite-difference estimate computed from the value evaluator only,
    /// ignoring any supplied partials. Used to audit hand-coded derivatives.
    pub fn fd_reference(&self, p: Partial, t: f64, x: f64, u: f64) -> f64 {
        let pt = (t, x, u);
        match p.order() {
            0 => self.eval(t, x, u),
            1 => self.fd_first(&*self.value, p.vars()[0], pt),
            2 => {
                let v = p.vars();
                self.fd_second_from_value(v[0], v[1], pt)
            }
            _ => unreachable!(),
        }
    }

    fn fd_first(&self, g: &(dyn Fn(f64, f64, f64) -> f64 + Send + Sync), var: Var, p: (f64, f64, f64)) -> f64 {
        let h = step(FD_STEP_FIRST, coord(p, var));
        let a = shifted(p, var, h);
        let b = shifted(p, var, -h);
        (g(a.0, a.1, a.2) - g(b.0, b.1, b.2)) / (2.0 * h)
    }

    fn fd_second_from_value(&self, v1: Var, v2: Var, p: (f64, f64, f64)) -> f64 {
        let f = &self.value;
        if v1 == v2 {
            let h = step(FD_STEP_SECOND, coord(p, v1));
            let a = shifted(p, v1, h);
            let b = shifted(p, v1, -h);
            (f(a.0, a.1, a.2) - 2.0 * f(p.0, p.1, p.2) + f(b.0, b.1, b.2)) / (h * h)
        } else {
            let h1 = step(FD_STEP_SECOND, coord(p, v1));
            let h2 = step(FD_STEP_SECOND, coord(p, v2));
            let pp = shifted(shifted(p, v1, h1), v2, h2);
            let pm = shifted(shifted(p, v1, h1), v2, -h2);
            let mp = shifted(shifted(p, v1, -h1), v2, h2);
            let mm = shifted(shifted(p, v1, -h1), v2, -h2);
            (f(pp.0, pp.1, pp.2) - f(pm.0, pm.1, pm.2) - f(mp.0, mp.1, mp.2) + f(mm.0, mm.1, mm.2))
                / (4.0 * h1 * h2)
        }
    }
}

/// Centered difference of a time evaluator.
pub fn fd_time(g: &(dyn Fn(f64) -> f64 + Send + Sync), t: f64, rel: f64) -> f64 {
    let h = step(rel, t);
    (g(t + h) - g(t - h)) / (2.0 * h)
}
