//! Reference surfaces with closed-form parameterizations and derived
//! constants: the equatorial disk, the critical catenoid (explicit and as
//! a Weierstrass chart), and an Enneper chart. These feed the
//! verification suites.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::Vector3;
use thiserror::Error;

use crate::geometry::{Domain, GeometryError, Surface};
use crate::jets::Complex;
use crate::weierstrass::{Chart, Exp, Polynomial, SurfacePoint, WeierstrassData, WeierstrassError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("parameter out of range: {0}")]
    InvalidParameter(&'static str),
    #[error("root finder failed to converge")]
    RootFind,
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
}

type CurveJetFn = Box<dyn Fn(f64) -> [Vector3<f64>; 4] + Send + Sync>;
type ConormalFn = Box<dyn Fn(f64) -> Vector3<f64> + Send + Sync>;
type LocusFn = Box<dyn Fn(f64) -> (f64, f64) + Send + Sync>;

/// A boundary curve of a catalog surface: closed-form position and first
/// three parameter derivatives, plus the outward conormal of the surface
/// along it and its locus in chart parameters.
pub struct BoundaryCurve3 {
    pub name: String,
    pub range: (f64, f64),
    jet_fn: CurveJetFn,
    conormal_fn: ConormalFn,
    locus_fn: LocusFn,
}

impl BoundaryCurve3 {
    /// Position and first three derivatives at curve parameter `s`.
    pub fn jet(&self, s: f64) -> [Vector3<f64>; 4] {
        (self.jet_fn)(s)
    }

    pub fn conormal(&self, s: f64) -> Vector3<f64> {
        (self.conormal_fn)(s)
    }

    pub fn chart_locus(&self, s: f64) -> (f64, f64) {
        (self.locus_fn)(s)
    }
}

type EvalFn = Box<dyn Fn(f64, f64) -> Result<SurfacePoint, GeometryError> + Send + Sync>;

/// A named reference surface with closed-form derivative access, declared
/// boundary curves and derived constants.
pub struct CatalogSurface {
    pub name: String,
    pub constants: BTreeMap<String, f64>,
    pub boundary: Vec<BoundaryCurve3>,
    /// Underlying Weierstrass chart, when the surface is built from one.
    pub weierstrass: Option<Arc<WeierstrassData>>,
    domain: Domain,
    eval_fn: EvalFn,
}

impl Surface for CatalogSurface {
    fn domain(&self) -> Domain {
        self.domain
    }

    fn eval(&self, u: f64, v: f64) -> Result<SurfacePoint, GeometryError> {
        if !self.domain.contains(u, v) {
            return Err(GeometryError::OutOfDomain(u, v));
        }
        (self.eval_fn)(u, v)
    }
}

/// Root of t·tanh(t) = 1 (bisection on [1, 1.5], then Newton polish) and
/// the scale c = 1/√(cosh²t₀ + t₀²) that puts the catenoid boundary on
/// the unit sphere.
pub fn critical_catenoid_constants() -> Result<(f64, f64), CatalogError> {
    let f = |t: f64| t * t.tanh() - 1.0;
    let (mut lo, mut hi) = (1.0f64, 1.5f64);
    if f(lo) >= 0.0 || f(hi) <= 0.0 {
        return Err(CatalogError::RootFind);
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut t0 = 0.5 * (lo + hi);
    for _ in 0..8 {
        let sech = 1.0 / t0.cosh();
        let df = t0.tanh() + t0 * sech * sech;
        t0 -= f(t0) / df;
    }
    if !(f(t0).abs() < 1e-14) {
        return Err(CatalogError::RootFind);
    }
    let c = 1.0 / (t0.cosh().powi(2) + t0 * t0).sqrt();
    Ok((t0, c))
}

/// Flat unit disk in the XY-plane, in conformal polar coordinates
/// U(u, v) = (e^u cos v, e^u sin v, 0). The boundary circle is the chart
/// edge u = 0; the surface meets the unit sphere orthogonally there.
pub fn equatorial_disk() -> CatalogSurface {
    let eval = |u: f64, v: f64| -> Result<SurfacePoint, GeometryError> {
        let (s, c) = v.sin_cos();
        let r = u.exp();
        Ok(SurfacePoint::from_derivatives(
            Complex::new(u, v),
            Vector3::new(r * c, r * s, 0.0),
            Vector3::new(r * c, r * s, 0.0),
            Vector3::new(-r * s, r * c, 0.0),
            Vector3::new(r * c, r * s, 0.0),
            Vector3::new(-r * s, r * c, 0.0),
            Vector3::new(-r * c, -r * s, 0.0),
            1.0,
        ))
    };
    let boundary = BoundaryCurve3 {
        name: "equator".into(),
        range: (-std::f64::consts::PI, std::f64::consts::PI),
        jet_fn: Box::new(|s| {
            let (sn, cs) = s.sin_cos();
            [
                Vector3::new(cs, sn, 0.0),
                Vector3::new(-sn, cs, 0.0),
                Vector3::new(-cs, -sn, 0.0),
                Vector3::new(sn, -cs, 0.0),
            ]
        }),
        conormal_fn: Box::new(|s| {
            let (sn, cs) = s.sin_cos();
            Vector3::new(cs, sn, 0.0)
        }),
        locus_fn: Box::new(|s| (0.0, s)),
    };
    CatalogSurface {
        name: "equatorial-disk".into(),
        constants: BTreeMap::from([("radius".into(), 1.0)]),
        boundary: vec![boundary],
        weierstrass: None,
        domain: Domain {
            u_min: -3.0,
            u_max: 0.0,
            v_min: -std::f64::consts::PI,
            v_max: std::f64::consts::PI,
        },
        eval_fn: Box::new(eval),
    }
}

/// The critical catenoid X(t, θ) = c(cosh t cos θ, cosh t sin θ, t) with
/// |t| ≤ t₀, meeting the unit sphere orthogonally along both boundary
/// circles t = ±t₀.
pub fn critical_catenoid() -> Result<CatalogSurface, CatalogError> {
    let (t0, c) = critical_catenoid_constants()?;
    let eval = move |t: f64, th: f64| -> Result<SurfacePoint, GeometryError> {
        let (sn, cs) = th.sin_cos();
        let (sh, ch) = (t.sinh(), t.cosh());
        Ok(SurfacePoint::from_derivatives(
            Complex::new(t, th),
            Vector3::new(c * ch * cs, c * ch * sn, c * t),
            Vector3::new(c * sh * cs, c * sh * sn, c),
            Vector3::new(-c * ch * sn, c * ch * cs, 0.0),
            Vector3::new(c * ch * cs, c * ch * sn, 0.0),
            Vector3::new(-c * sh * sn, c * sh * cs, 0.0),
            Vector3::new(-c * ch * cs, -c * ch * sn, 0.0),
            1.0,
        ))
    };
    let circle = |t_edge: f64| -> BoundaryCurve3 {
        let rho = c * t_edge.cosh();
        let sh = t_edge.sinh();
        BoundaryCurve3 {
            name: if t_edge > 0.0 { "top".into() } else { "bottom".into() },
            range: (-std::f64::consts::PI, std::f64::consts::PI),
            jet_fn: Box::new(move |s| {
                let (sn, cs) = s.sin_cos();
                [
                    Vector3::new(rho * cs, rho * sn, c * t_edge),
                    Vector3::new(-rho * sn, rho * cs, 0.0),
                    Vector3::new(-rho * cs, -rho * sn, 0.0),
                    Vector3::new(rho * sn, -rho * cs, 0.0),
                ]
            }),
            conormal_fn: Box::new(move |s| {
                let (sn, cs) = s.sin_cos();
                // Outward conormal: ±X_t at t = ±t₀.
                Vector3::new(c * sh * cs, c * sh * sn, c) * t_edge.signum()
            }),
            locus_fn: Box::new(move |s| (t_edge, s)),
        }
    };
    Ok(CatalogSurface {
        name: "critical-catenoid".into(),
        constants: BTreeMap::from([("t0".into(), t0), ("c".into(), c)]),
        boundary: vec![circle(t0), circle(-t0)],
        weierstrass: None,
        domain: Domain {
            u_min: -t0,
            u_max: t0,
            v_min: -std::f64::consts::PI,
            v_max: std::f64::consts::PI,
        },
        eval_fn: Box::new(eval),
    })
}

/// The same catenoid as a canonical Weierstrass chart: g = e^{(w+kt₀)/k}
/// with k = √c, θ₀ = 0. The chart edge w = iv is the boundary circle
/// t = t₀; chart coordinates map to (t, θ) = (u/k + t₀, π + v/k).
pub fn catenoid_weierstrass_chart() -> Result<CatalogSurface, CatalogError> {
    let (t0, c) = critical_catenoid_constants()?;
    let k = c.sqrt();
    let chart = Chart::new(0.8 * k * t0, 2.0)?;
    let data = Arc::new(WeierstrassData::from_gauss_map(
        Arc::new(Exp {
            rate: Complex::new(1.0 / k, 0.0),
            amplitude: Complex::new(t0.exp(), 0.0),
        }),
        0.0,
        chart,
        Complex::ZERO,
        Vector3::new(-c * t0.cosh(), 0.0, c * t0),
    )?);
    let rho = c * t0.cosh();
    let sh = t0.sinh();
    let boundary = BoundaryCurve3 {
        name: "top".into(),
        range: (-chart.dv, chart.dv),
        jet_fn: Box::new(move |s| {
            // w = is lies on t = t₀, θ = π + s/k; derivatives are in the
            // chart parameter s, |dθ/ds| = 1/k.
            let th = std::f64::consts::PI + s / k;
            let (sn, cs) = th.sin_cos();
            [
                Vector3::new(rho * cs, rho * sn, c * t0),
                Vector3::new(-rho * sn, rho * cs, 0.0) / k,
                Vector3::new(-rho * cs, -rho * sn, 0.0) / (k * k),
                Vector3::new(rho * sn, -rho * cs, 0.0) / (k * k * k),
            ]
        }),
        conormal_fn: Box::new(move |s| {
            let th = std::f64::consts::PI + s / k;
            let (sn, cs) = th.sin_cos();
            Vector3::new(c * sh * cs, c * sh * sn, c)
        }),
        locus_fn: Box::new(|s| (0.0, s)),
    };
    let eval_data = Arc::clone(&data);
    Ok(CatalogSurface {
        name: "catenoid-weierstrass".into(),
        constants: BTreeMap::from([("t0".into(), t0), ("c".into(), c), ("k".into(), k)]),
        boundary: vec![boundary],
        weierstrass: Some(data),
        domain: Domain {
            u_min: -chart.du,
            u_max: chart.du,
            v_min: -chart.dv,
            v_max: chart.dv,
        },
        eval_fn: Box::new(move |u, v| Ok(eval_data.evaluate(Complex::new(u, v))?)),
    })
}

/// Enneper chart from the simplest canonical data g = w, θ₀ = 0 on a
/// square of half-width `delta`. Not a free-boundary surface; used for
/// curvature and conformal-factor tests.
pub fn enneper_chart(delta: f64) -> Result<CatalogSurface, CatalogError> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(CatalogError::InvalidParameter("enneper delta must lie in (0, 1)"));
    }
    let data = Arc::new(WeierstrassData::from_gauss_map(
        Arc::new(Polynomial::new(vec![Complex::ZERO, Complex::ONE])),
        0.0,
        Chart::new(delta, delta)?,
        Complex::ZERO,
        Vector3::zeros(),
    )?);
    let eval_data = Arc::clone(&data);
    Ok(CatalogSurface {
        name: "enneper".into(),
        constants: BTreeMap::from([("delta".into(), delta)]),
        boundary: Vec::new(),
        weierstrass: Some(data),
        domain: Domain {
            u_min: -delta,
            u_max: delta,
            v_min: -delta,
            v_max: delta,
        },
        eval_fn: Box::new(move |u, v| Ok(eval_data.evaluate(Complex::new(u, v))?)),
    })
}

/// Looks a surface up by its catalog name.
pub fn by_name(name: &str) -> Result<CatalogSurface, CatalogError> {
    match name {
        "equatorial-disk" => Ok(equatorial_disk()),
        "critical-catenoid" => critical_catenoid(),
        "catenoid-weierstrass" => catenoid_weierstrass_chart(),
        "enneper" => enneper_chart(0.5),
        other => {
            if let Some(d) = other.strip_prefix("enneper:") {
                let delta: f64 = d
                    .parse()
                    .map_err(|_| CatalogError::InvalidParameter("bad enneper delta"))?;
                enneper_chart(delta)
            } else {
                Err(CatalogError::InvalidParameter("unknown catalog surface"))
            }
        }
    }
}

pub fn catalog_names() -> &'static [&'static str] {
    &["equatorial-disk", "critical-catenoid", "catenoid-weierstrass", "enneper"]
}
