//! Sinusoidal site curves woven through the torus.
//!
//! Curve 0 is centered on toroidal angle 0 and spans `[-T, T]` with
//! `T = 2π/n - γ`. Its height follows
//! `v(t) = A sin(n t / 2) + B sin(2 n t)`: the first term gives the over/under
//! weave with the two neighbours, the second is a small shared ripple that
//! keeps the interfaces between Connectors from being flat. With `B = 0` the
//! family reduces to the plain half-frequency sine.

use std::io::Write;

use nalgebra::Point3;

use crate::geometry::{RigidTransform, TorusSpec};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CurveParams {
    /// Number of curves `n`, one per Connector.
    pub valence: usize,
    pub amplitude: f64,
    /// Coefficient `B` of the `sin(2 n t)` ripple.
    pub ripple: f64,
    /// Angular trim `γ` in radians.
    pub gap: f64,
    pub samples: usize,
    pub radial_offset: f64,
}

impl CurveParams {
    /// Defaults scaled to the torus side: `A = 0.3 s`, `B = 0.12 s`, `γ = 30°`,
    /// 200 samples, no radial offset.
    pub fn defaults(valence: usize, t: &TorusSpec) -> Self {
        let s = t.side();
        Self {
            valence,
            amplitude: 0.3 * s,
            ripple: 0.12 * s,
            gap: 30f64.to_radians(),
            samples: 200,
            radial_offset: 0.0,
        }
    }

    /// Half-span `T = 2π/n - γ` of the curve parameter.
    pub fn half_span(&self) -> f64 {
        std::f64::consts::TAU / self.valence as f64 - self.gap
    }

    pub fn height(&self, t: f64) -> f64 {
        let n = self.valence as f64;
        self.amplitude * (0.5 * n * t).sin() + self.ripple * (2.0 * n * t).sin()
    }

    pub fn validate(&self, t: &TorusSpec) -> Result<()> {
        let hs = t.half_side();
        let bad = |msg: String| Err(Error::InvalidCurveParams(msg));
        if self.valence < 1 {
            return bad("valence must be at least 1".into());
        }
        if self.samples < 16 {
            return bad(format!("need at least 16 samples per curve, got {}", self.samples));
        }
        let sector = std::f64::consts::PI / self.valence as f64;
        if !(self.gap > 0.0 && self.gap < sector) {
            return bad(format!("gap {} rad must lie in (0, π/n = {sector})", self.gap));
        }
        if !(self.amplitude > 0.0 && self.amplitude < hs) {
            return bad(format!("amplitude {} must lie in (0, s/2 = {hs})", self.amplitude));
        }
        if !self.ripple.is_finite() || self.amplitude + self.ripple.abs() >= hs {
            return bad(format!(
                "amplitude plus |ripple| = {} must stay below s/2 = {hs}",
                self.amplitude + self.ripple.abs()
            ));
        }
        if !(self.radial_offset.abs() < hs) {
            return bad(format!("radial offset {} must satisfy |u0| < s/2", self.radial_offset));
        }
        Ok(())
    }
}

/// One labeled polyline of site samples.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteCurve {
    pub label: usize,
    pub points: Vec<Point3<f64>>,
}

impl SiteCurve {
    pub fn arc_length(&self) -> f64 {
        self.points.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }
}

/// Straight-space curve 0: point `i` is `(R t_i, u0, v(t_i))` with `t_i`
/// uniform over `[-T, T]`.
pub fn generate_base_curve(params: &CurveParams, t: &TorusSpec) -> Result<SiteCurve> {
    params.validate(t)?;
    Ok(sample_base_curve(params, t))
}

pub(crate) fn sample_base_curve(params: &CurveParams, t: &TorusSpec) -> SiteCurve {
    let half = params.half_span();
    let m = params.samples;
    let r = t.revolve_radius();
    let points = (0..m)
        .map(|i| {
            let ti = -half + 2.0 * half * i as f64 / (m - 1) as f64;
            Point3::new(r * ti, params.radial_offset, params.height(ti))
        })
        .collect();
    SiteCurve { label: 0, points }
}

/// Wraps the straight coordinate around the axis: `x = R t` becomes toroidal
/// angle `t`, `y` becomes a radial offset from `R`, `z` stays the axial offset.
pub fn deform_to_torus(curve: &SiteCurve, t: &TorusSpec) -> Result<SiteCurve> {
    let r = t.revolve_radius();
    let mut points = Vec::with_capacity(curve.points.len());
    for (index, p) in curve.points.iter().enumerate() {
        let q = t.from_cylindrical(r + p.y, p.x / r, p.z);
        let margin = t.boundary_margin(&q);
        if margin <= 0.0 {
            return Err(Error::Deformation { index, distance: margin });
        }
        points.push(q);
    }
    Ok(SiteCurve { label: curve.label, points })
}

/// Curve `k` is `curve0` turned by `2πk/n` about the torus axis.
pub fn replicate_rotated(curve0: &SiteCurve, n: usize, t: &TorusSpec) -> Vec<SiteCurve> {
    (0..n)
        .map(|k| {
            if k == 0 {
                return SiteCurve { label: 0, points: curve0.points.clone() };
            }
            let angle = std::f64::consts::TAU * k as f64 / n as f64;
            let rot = RigidTransform::about_axis(&t.axis(), angle, &t.center());
            SiteCurve {
                label: k,
                points: curve0.points.iter().map(|p| rot.apply(p)).collect(),
            }
        })
        .collect()
}

/// Full curve set for one vertex.
pub fn build_curves(params: &CurveParams, t: &TorusSpec) -> Result<Vec<SiteCurve>> {
    let base = generate_base_curve(params, t)?;
    let curve0 = deform_to_torus(&base, t)?;
    Ok(replicate_rotated(&curve0, params.valence, t))
}

/// Smallest polyline-to-polyline distance over all pairs of distinct curves.
/// Returns `f64::INFINITY` for fewer than two curves.
pub fn validate_separation(curves: &[SiteCurve], min_distance: f64) -> Result<f64> {
    let mut best = (f64::INFINITY, 0, 0);
    for a in 0..curves.len() {
        for b in a + 1..curves.len() {
            let d = polyline_distance(&curves[a].points, &curves[b].points);
            if d < best.0 {
                best = (d, curves[a].label, curves[b].label);
            }
        }
    }
    if best.0 < min_distance {
        return Err(Error::Separation {
            first: best.1,
            second: best.2,
            distance: best.0,
            required: min_distance,
        });
    }
    Ok(best.0)
}

fn polyline_distance(a: &[Point3<f64>], b: &[Point3<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for sa in a.windows(2) {
        for sb in b.windows(2) {
            best = best.min(segment_distance(&sa[0], &sa[1], &sb[0], &sb[1]));
        }
    }
    best
}

/// Closest distance between segments `p0 p1` and `q0 q1`.
pub fn segment_distance(p0: &Point3<f64>, p1: &Point3<f64>, q0: &Point3<f64>, q1: &Point3<f64>) -> f64 {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let r = p0 - q0;
    let a = d1.norm_squared();
    let e = d2.norm_squared();
    let f = d2.dot(&r);
    let eps = 1e-300;
    let (s, t) = if a <= eps && e <= eps {
        (0.0, 0.0)
    } else if a <= eps {
        (0.0, (f / e).clamp(0.0, 1.0))
    } else {
        let c = d1.dot(&r);
        if e <= eps {
            ((-c / a).clamp(0.0, 1.0), 0.0)
        } else {
            let b = d1.dot(&d2);
            let denom = a * e - b * b;
            let mut s = if denom > 0.0 { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
            let mut t = (b * s + f) / e;
            if t < 0.0 {
                t = 0.0;
                s = (-c / a).clamp(0.0, 1.0);
            } else if t > 1.0 {
                t = 1.0;
                s = ((b - c) / a).clamp(0.0, 1.0);
            }
            (s, t)
        }
    };
    ((p0 + d1 * s) - (q0 + d2 * t)).norm()
}

/// One `label x y z` line per sample.
pub fn write_point_cloud<W: Write>(curves: &[SiteCurve], mut out: W) -> std::io::Result<()> {
    for c in curves {
        for p in &c.points {
            writeln!(out, "{} {} {} {}", c.label, p.x, p.y, p.z)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn torus() -> TorusSpec {
        TorusSpec::new(2.0, 1.0).unwrap()
    }

    fn plain(n: usize, gap_deg: f64) -> CurveParams {
        CurveParams {
            ripple: 0.0,
            gap: gap_deg.to_radians(),
            ..CurveParams::defaults(n, &torus())
        }
    }

    #[test]
    fn height_examples() {
        let p = CurveParams::defaults(3, &torus());
        assert_eq!(p.height(0.0), 0.0);
        // the ripple vanishes at the crest
        assert_relative_eq!(p.height(PI / 3.0), p.amplitude, epsilon = 1e-12);
        let q = plain(3, 12.0);
        let end = q.height(q.half_span());
        assert_relative_eq!(end, q.amplitude * 18f64.to_radians().sin(), epsilon = 1e-12);
        assert_relative_eq!(end / q.amplitude, 0.309, epsilon = 1e-3);
    }

    #[test]
    fn base_curve_layout() {
        let p = CurveParams::defaults(3, &torus());
        let c = generate_base_curve(&p, &torus()).unwrap();
        assert_eq!(c.points.len(), 200);
        let t = p.half_span();
        assert_relative_eq!(c.points[0].x, -2.0 * t, epsilon = 1e-12);
        assert_relative_eq!(c.points[199].x, 2.0 * t, epsilon = 1e-12);
        assert!(c.points.iter().all(|q| q.y == 0.0));
        // odd profile: endpoint heights are opposite and nonzero
        assert!(c.points[0].z.abs() > 1e-3);
        assert_relative_eq!(c.points[0].z, -c.points[199].z, epsilon = 1e-12);
    }

    #[test]
    fn invalid_params_rejected() {
        let t = torus();
        let ok = CurveParams::defaults(3, &t);
        for bad in [
            CurveParams { gap: 0.0, ..ok.clone() },
            CurveParams { gap: PI / 3.0, ..ok.clone() },
            CurveParams { amplitude: 0.5, ..ok.clone() },
            CurveParams { ripple: 0.25, ..ok.clone() },
            CurveParams { samples: 15, ..ok.clone() },
            CurveParams { radial_offset: 0.5, ..ok.clone() },
            CurveParams { valence: 0, ..ok.clone() },
        ] {
            assert!(matches!(generate_base_curve(&bad, &t), Err(Error::InvalidCurveParams(_))), "{bad:?}");
        }
    }

    #[test]
    fn deformation_maps_center_to_radius() {
        let t = torus();
        let base = SiteCurve { label: 0, points: vec![Point3::new(0.0, 0.0, 0.0)] };
        let d = deform_to_torus(&base, &t).unwrap();
        assert_relative_eq!(d.points[0], Point3::new(2.0, 0.0, 0.0), epsilon = 1e-15);
        let outside = SiteCurve { label: 0, points: vec![Point3::new(0.0, 0.0, 0.7)] };
        assert!(matches!(deform_to_torus(&outside, &t), Err(Error::Deformation { index: 0, .. })));
    }

    #[test]
    fn deformed_curve_stays_inside_and_is_long_enough() {
        let t = torus();
        let p = CurveParams::defaults(3, &t);
        let c = deform_to_torus(&generate_base_curve(&p, &t).unwrap(), &t).unwrap();
        assert!(c.points.iter().all(|q| t.contains(q)));
        let limit = (t.half_side() - p.amplitude - p.ripple) * (1.0 - 1e-9);
        assert!(c.points.iter().all(|q| t.boundary_margin(q) >= limit));
        assert!(c.arc_length() >= t.revolve_radius() * 2.0 * p.half_span());
    }

    #[test]
    fn replication_angles() {
        let t = torus();
        for n in [1usize, 3, 4] {
            let p = CurveParams::defaults(n, &t);
            let curves = build_curves(&p, &t).unwrap();
            assert_eq!(curves.len(), n);
            let mid = p.samples / 2;
            for (k, c) in curves.iter().enumerate() {
                assert_eq!(c.label, k);
                // midpoint of the sample range sits just off angle 0 of its sector
                let (_, a0, _) = t.cylindrical(&curves[0].points[mid]);
                let (_, ak, _) = t.cylindrical(&c.points[mid]);
                let expect = 2.0 * PI * k as f64 / n as f64;
                let diff = (ak - a0 - expect).rem_euclid(2.0 * PI);
                assert!(diff < 1e-9 || 2.0 * PI - diff < 1e-9, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn separation_examples() {
        let t = torus();
        let touching = replicate_rotated(
            &deform_to_torus(&sample_base_curve(&CurveParams { gap: 0.0, ..plain(3, 12.0) }, &t), &t).unwrap(),
            3,
            &t,
        );
        let err = validate_separation(&touching, 1e-9).unwrap_err();
        assert!(matches!(err, Error::Separation { distance, .. } if distance < 1e-9));

        let curves = build_curves(&plain(3, 12.0), &t).unwrap();
        let d = validate_separation(&curves, 0.05).unwrap();
        assert!(d >= 0.05);
        assert_eq!(validate_separation(&curves[..1], 0.05).unwrap(), f64::INFINITY);
    }

    #[test]
    fn segment_distance_cases() {
        let o = Point3::origin();
        let x = Point3::new(1.0, 0.0, 0.0);
        assert_relative_eq!(
            segment_distance(&o, &x, &Point3::new(0.5, 1.0, 1.0), &Point3::new(0.5, -1.0, 1.0)),
            1.0
        );
        assert_relative_eq!(
            segment_distance(&o, &x, &Point3::new(2.0, 0.0, 0.0), &Point3::new(3.0, 0.0, 0.0)),
            1.0
        );
        assert_relative_eq!(segment_distance(&o, &o, &x, &x), 1.0);
        // parallel overlapping segments
        assert_relative_eq!(
            segment_distance(&o, &x, &Point3::new(0.5, 2.0, 0.0), &Point3::new(1.5, 2.0, 0.0)),
            2.0
        );
    }

    #[test]
    fn point_cloud_lines() {
        let t = torus();
        let curves = build_curves(&CurveParams { samples: 16, ..CurveParams::defaults(3, &t) }, &t).unwrap();
        let mut buf = Vec::new();
        write_point_cloud(&curves, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 48);
        assert!(text.lines().all(|l| l.split(' ').count() == 4));
        assert!(text.lines().last().unwrap().starts_with("2 "));
    }
}
