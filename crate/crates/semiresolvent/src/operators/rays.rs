use serde::Serialize;

use crate::scalar::{Cx, Real};

/// Half-line `origin + t e^{i angle}`, `t >= 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ray<T: Real> {
    pub origin: T,
    pub angle: T,
}

impl<T: Real> Ray<T> {
    pub fn distance(&self, z: Cx<T>) -> T {
        let dir = Cx::from_polar(T::one(), self.angle);
        let w = z - self.origin;
        let t = (w * dir.conj()).re;
        if t <= T::zero() {
            w.norm()
        } else {
            (w - dir * t).norm()
        }
    }
}

/// Rotated continua `lambda_j + e^{-2 i theta} R_+` of the scaled operator.
#[derive(Clone, Debug, PartialEq)]
pub struct EssentialRays<T: Real> {
    pub theta: T,
    pub rays: Vec<Ray<T>>,
}

impl<T: Real> EssentialRays<T> {
    /// Distance from `z` to the nearest ray.
    pub fn distance(&self, z: Cx<T>) -> T {
        self.rays.iter().fold(T::infinity(), |m, r| m.min(r.distance(z)))
    }

    /// Whether `z` lies in the sector between `[lambda_1, inf)` and the
    /// lowest rotated ray, where scaled eigenvalues are resonances.
    pub fn sector_contains(&self, z: Cx<T>) -> bool {
        let Some(first) = self.rays.first() else { return false };
        let w = z - first.origin;
        if w.norm() == T::zero() {
            return false;
        }
        let arg = w.im.atan2(w.re);
        arg <= T::zero() && arg > first.angle
    }

    pub fn describe(&self) -> String {
        let origins: Vec<String> = self.rays.iter().map(|r| format!("{}", r.origin)).collect();
        format!(
            "rays from [{}] at angle {}; sector between the real axis and angle {}",
            origins.join(", "),
            -(self.theta + self.theta),
            -(self.theta + self.theta)
        )
    }
}

/// One ray per threshold, all at angle `-2 theta`.
pub fn essential_rays<T: Real>(thresholds: &[T], theta: T) -> EssentialRays<T> {
    let angle = -(theta + theta);
    EssentialRays { theta, rays: thresholds.iter().map(|&origin| Ray { origin, angle }).collect() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RayClass {
    RayArtifact,
    CandidateResonance,
}

/// Labels `z` as a ray artifact when it lies strictly inside a tube around a ray.
pub fn ray_tube_classifier<T: Real>(z: Cx<T>, rays: &EssentialRays<T>, half_width: T) -> RayClass {
    if rays.distance(z) < half_width || (half_width > T::zero() && rays.distance(z) == T::zero()) {
        RayClass::RayArtifact
    } else {
        RayClass::CandidateResonance
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ray_angles() {
        let r = essential_rays(&[0.0f64], 0.1);
        assert_eq!(r.rays[0].angle, -0.2);
        let r = essential_rays(&[0.0f64, 1.0], 0.15);
        assert_eq!(r.rays.len(), 2);
        assert!(r.rays.iter().all(|x| x.angle == -0.3));
        let r = essential_rays(&[0.0f64, 1.0], 0.0);
        assert_eq!(r.distance(Cx::new(3.0, 0.0)), 0.0);
        assert!(r.distance(Cx::new(0.5, -0.1)) > 0.0);
    }

    #[test]
    fn classifier_cases() {
        let r = essential_rays(&[0.0f64], 0.2);
        let on = Cx::from_polar(2.0, -0.4);
        assert_eq!(ray_tube_classifier(on, &r, 1e-8), RayClass::RayArtifact);
        let z = Cx::new(3.0, -1e-9);
        assert_eq!(ray_tube_classifier(z, &r, 1e-6), RayClass::CandidateResonance);
        assert_eq!(ray_tube_classifier(Cx::new(2.0, -0.5), &r, 0.0), RayClass::CandidateResonance);
    }
}
