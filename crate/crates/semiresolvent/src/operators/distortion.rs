use crate::error::{Error, Result};
use crate::scalar::{cre, cx, Cx, Real};
use crate::smooth::Smoothstep;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScalingKind {
    /// `F = 0` on `[0, A]`, `F = r` on `[A + 1, inf)`, smoothstep in between.
    Exterior { onset: f64, transition: Smoothstep },
    /// `F = r` everywhere.
    Global,
}

/// Complex scaling `r -> r + (e^{i theta} - 1) F(r)`.
///
/// Beyond the transition the contour is the ray `r e^{i theta}`, so the
/// continua rotate by exactly `-2 theta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistortionProfile<T: Real> {
    theta: T,
    kind: ScalingKind,
    factor: Cx<T>,
}

impl<T: Real> DistortionProfile<T> {
    pub fn exterior(onset: T, theta: T) -> Result<Self> {
        Self::exterior_with(onset, theta, Smoothstep::Quintic)
    }

    pub fn exterior_with(onset: T, theta: T, transition: Smoothstep) -> Result<Self> {
        if !(onset >= T::zero()) {
            return Err(Error::invalid("distortion onset must be nonnegative"));
        }
        Self::build(theta, ScalingKind::Exterior { onset: onset.as_f64(), transition })
    }

    pub fn global(theta: T) -> Result<Self> {
        Self::build(theta, ScalingKind::Global)
    }

    fn build(theta: T, kind: ScalingKind) -> Result<Self> {
        if !(theta >= T::zero()) || theta >= T::FRAC_PI_4() {
            return Err(Error::invalid("scaling angle must lie in [0, pi/4)"));
        }
        let factor = cx(theta.cos() - T::one(), theta.sin());
        Ok(Self { theta, kind, factor })
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn kind(&self) -> ScalingKind {
        self.kind
    }

    /// Onset radius `A` (zero for global scaling).
    pub fn onset(&self) -> T {
        match self.kind {
            ScalingKind::Exterior { onset, .. } => T::lit(onset),
            ScalingKind::Global => T::zero(),
        }
    }

    /// `(F, F')` at `r`.
    pub fn f(&self, r: T) -> (T, T) {
        match self.kind {
            ScalingKind::Global => (r, T::one()),
            ScalingKind::Exterior { onset, transition } => {
                let a = T::lit(onset);
                if r <= a {
                    (T::zero(), T::zero())
                } else if r >= a + T::one() {
                    (r, T::one())
                } else {
                    let s = transition.eval(r - a);
                    (r * s[0], s[0] + r * s[1])
                }
            }
        }
    }

    /// Contour point `r + (e^{i theta} - 1) F(r)`.
    pub fn contour(&self, r: T) -> Cx<T> {
        let (f, _) = self.f(r);
        cre(r) + self.factor * f
    }

    /// Jacobian `g = 1 + (e^{i theta} - 1) F'(r)`.
    pub fn jacobian(&self, r: T) -> Cx<T> {
        let (_, fp) = self.f(r);
        cre(T::one()) + self.factor * fp
    }
}
