//! Weight measures on the line or the circle, with the moment, incomplete
//! moment and skew-moment providers the partition function needs.
//!
//! Moments are taken in the variable that `omega` is evaluated at: `x` on
//! the line and `z = e^{i theta}` on the circle. Orderings (the sign kernel
//! and incomplete moments) always refer to the real coordinate, i.e. the
//! angle on the circle.

mod moments;
pub mod quadrature;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{cos_pi, normal_pdf, sin_pi};

pub use moments::MomentTable;
pub use quadrature::QuadratureRule;

/// Default number of nodes for the continuous part.
pub const DEFAULT_QUAD_ORDER: usize = 80;

/// User-supplied density on a finite interval.
#[derive(Clone)]
pub struct CustomWeight {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub weight: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for CustomWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomWeight({}, [{}, {}])", self.name, self.lo, self.hi)
    }
}

#[derive(Clone, Debug)]
pub enum MeasureKind {
    /// `e^{-x^2/2} / sqrt(2 pi)` on the line.
    Gaussian,
    /// `x^{a-1} (1-x)^{b-1}` on `[0, 1]` (not normalised).
    Jacobi { a: f64, b: f64 },
    /// Probability density `1/(hi-lo)` on `[lo, hi]`.
    Uniform { lo: f64, hi: f64 },
    /// `(-i e^{-i theta})^{beta (N-1)/2} dtheta` on `[-pi, pi)`.
    Circular { n: usize, beta: u32 },
    Custom(CustomWeight),
}

impl MeasureKind {
    pub fn name(&self) -> &str {
        match self {
            MeasureKind::Gaussian => "gaussian",
            MeasureKind::Jacobi { .. } => "jacobi",
            MeasureKind::Uniform { .. } => "uniform",
            MeasureKind::Circular { .. } => "circular",
            MeasureKind::Custom(c) => &c.name,
        }
    }
}

/// Point mass `c * w(x) * delta_x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub x: f64,
    pub c: C64,
}

#[derive(Clone, Debug)]
pub struct Measure {
    kind: MeasureKind,
    atoms: Vec<Atom>,
    quad_order: usize,
    scale: f64,
}

impl Measure {
    fn from_kind(kind: MeasureKind) -> Self {
        Self { kind, atoms: Vec::new(), quad_order: DEFAULT_QUAD_ORDER, scale: 1.0 }
    }

    pub fn gaussian() -> Self {
        Self::from_kind(MeasureKind::Gaussian)
    }

    pub fn jacobi(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParameter(format!("jacobi needs a, b > 0 (got a={a}, b={b})")));
        }
        Ok(Self::from_kind(MeasureKind::Jacobi { a, b }))
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        check_interval(lo, hi)?;
        Ok(Self::from_kind(MeasureKind::Uniform { lo, hi }))
    }

    pub fn circular(n: usize, beta: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("circular measure needs N >= 1".into()));
        }
        Ok(Self::from_kind(MeasureKind::Circular { n, beta }))
    }

    pub fn custom(
        name: impl Into<String>,
        lo: f64,
        hi: f64,
        weight: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        check_interval(lo, hi)?;
        Ok(Self::from_kind(MeasureKind::Custom(CustomWeight {
            name: name.into(),
            lo,
            hi,
            weight: Arc::new(weight),
        })))
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn quad_order(&self) -> usize {
        self.quad_order
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_circular(&self) -> bool {
        matches!(self.kind, MeasureKind::Circular { .. })
    }

    pub fn with_quad_order(mut self, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter("quadrature order must be at least 1".into()));
        }
        self.quad_order = order;
        Ok(self)
    }

    /// The measure multiplied by `t` (continuous part and atoms alike).
    pub fn scaled(mut self, t: f64) -> Self {
        self.scale *= t;
        self
    }

    /// Closed support in the real coordinate.
    pub fn support(&self) -> (f64, f64) {
        match &self.kind {
            MeasureKind::Gaussian => (f64::NEG_INFINITY, f64::INFINITY),
            MeasureKind::Jacobi { .. } => (0.0, 1.0),
            MeasureKind::Uniform { lo, hi } => (*lo, *hi),
            MeasureKind::Circular { .. } => (-std::f64::consts::PI, std::f64::consts::PI),
            MeasureKind::Custom(c) => (c.lo, c.hi),
        }
    }

    /// Adds point masses `c_n w(x_n) delta_{x_n}` to the measure.
    pub fn with_atoms(&self, atoms: &[(f64, C64)]) -> Result<Self> {
        let (lo, hi) = self.support();
        let mut out = self.clone();
        for &(x, c) in atoms {
            let inside = x.is_finite()
                && x >= lo
                && if self.is_circular() { x < hi } else { x <= hi };
            if !inside {
                return Err(Error::AtomOutsideSupport(x));
            }
            out.atoms.push(Atom { x, c });
        }
        Ok(out)
    }

    /// Density of the continuous part with respect to `dx` (or `dtheta`).
    pub fn density(&self, x: f64) -> C64 {
        let w = match &self.kind {
            MeasureKind::Gaussian => C64::new(normal_pdf(x), 0.0),
            MeasureKind::Jacobi { a, b } => {
                if (0.0..=1.0).contains(&x) {
                    C64::new(x.powf(a - 1.0) * (1.0 - x).powf(b - 1.0), 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }
            MeasureKind::Uniform { lo, hi } => {
                if (*lo..=*hi).contains(&x) {
                    C64::new(1.0 / (hi - lo), 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }
            MeasureKind::Circular { n, beta } => circular_weight(*n, *beta, x),
            MeasureKind::Custom(c) => {
                if (c.lo..=c.hi).contains(&x) {
                    C64::new((c.weight)(x), 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }
        };
        w * self.scale
    }

    /// Mass carried by an atom, `c w(x)`.
    pub fn atom_mass(&self, atom: &Atom) -> C64 {
        atom.c * self.density(atom.x)
    }

    /// The point `omega` is evaluated at: `x` on the line, `e^{ix}` on the circle.
    pub fn variable(&self, x: f64) -> C64 {
        if self.is_circular() {
            C64::new(x.cos(), x.sin())
        } else {
            C64::new(x, 0.0)
        }
    }
}

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParameter(format!("need finite lo < hi (got [{lo}, {hi}])")));
    }
    Ok(())
}

/// `(-i e^{-i theta})^{beta (N-1)/2}` on the principal branch,
/// i.e. `e^{-i pi c/2} e^{-i c theta}` with `c = beta (N-1)/2`.
pub fn circular_weight(n: usize, beta: u32, theta: f64) -> C64 {
    let c = circular_exponent(n, beta);
    let phase = C64::new(cos_pi(c / 2.0), -sin_pi(c / 2.0));
    phase * C64::new((c * theta).cos(), -(c * theta).sin())
}

pub(crate) fn circular_exponent(n: usize, beta: u32) -> f64 {
    beta as f64 * n.saturating_sub(1) as f64 / 2.0
}

/// JSON form of a measure, e.g.
/// `{"kind": "jacobi", "a": 2, "b": 1, "atoms": [{"x": 0.5, "c": 1}], "quad_order": 60}`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDescriptor {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub atoms: Vec<AtomDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_order: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDescriptor {
    pub x: f64,
    #[serde(default = "one")]
    pub c: f64,
}

fn one() -> f64 {
    1.0
}

impl MeasureDescriptor {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("measure descriptor: {e}")))
    }

    /// `n` and `beta` are only used by the circular kind.
    pub fn build(&self, n: usize, beta: u32) -> Result<Measure> {
        let base = match self.kind.to_ascii_lowercase().as_str() {
            "gaussian" => Measure::gaussian(),
            "jacobi" => Measure::jacobi(self.a.unwrap_or(1.0), self.b.unwrap_or(1.0))?,
            "uniform" => Measure::uniform(self.lo.unwrap_or(0.0), self.hi.unwrap_or(1.0))?,
            "circular" => Measure::circular(n, beta)?,
            _ => return Err(Error::UnknownKind { what: "measure", name: self.kind.clone() }),
        };
        let base = match self.quad_order {
            Some(q) => base.with_quad_order(q)?,
            None => base,
        };
        let atoms: Vec<(f64, C64)> = self.atoms.iter().map(|a| (a.x, C64::new(a.c, 0.0))).collect();
        base.with_atoms(&atoms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circular_weight_examples() {
        assert_eq!(circular_weight(1, 9, 0.7), C64::new(1.0, 0.0));
        let w = circular_weight(3, 1, 0.0);
        assert!((w - C64::new(0.0, -1.0)).norm() < 1e-15);
        for theta in [-3.0, -1.0, 0.0, 0.4, 2.9] {
            let w = circular_weight(2, 1, theta);
            let expected = C64::new(0.0, -1.0) * C64::new(0.0, -theta).exp();
            assert!((w * w - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn constructors_validate() {
        assert!(Measure::jacobi(0.0, 1.0).is_err());
        assert!(Measure::uniform(1.0, 1.0).is_err());
        assert!(Measure::circular(0, 1).is_err());
        assert!(Measure::gaussian().with_quad_order(0).is_err());
        let j = Measure::jacobi(1.0, 1.0).unwrap();
        assert!(matches!(j.with_atoms(&[(1.5, C64::new(1.0, 0.0))]), Err(Error::AtomOutsideSupport(_))));
        let c = Measure::circular(2, 1).unwrap();
        assert!(c.with_atoms(&[(std::f64::consts::PI, C64::new(1.0, 0.0))]).is_err());
        assert!(c.with_atoms(&[(-std::f64::consts::PI, C64::new(1.0, 0.0))]).is_ok());
    }

    #[test]
    fn descriptor_round_trip() {
        let d = MeasureDescriptor::from_json(
            r#"{"kind":"jacobi","a":2,"b":1.5,"atoms":[{"x":0.25,"c":2}],"quad_order":40}"#,
        )
        .unwrap();
        let m = d.build(3, 1).unwrap();
        assert!(matches!(m.kind(), MeasureKind::Jacobi { a, b } if *a == 2.0 && *b == 1.5));
        assert_eq!(m.atoms().len(), 1);
        assert_eq!(m.quad_order(), 40);
        let again: MeasureDescriptor = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        assert_eq!(again, d);
        let bad = MeasureDescriptor { kind: "cauchy".into(), ..Default::default() };
        assert!(matches!(bad.build(2, 1), Err(Error::UnknownKind { .. })));
        assert!(MeasureDescriptor::from_json(r#"{"kind":"gaussian","zeta":1}"#).is_err());
    }
}
