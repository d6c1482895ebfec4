//! Pointwise and along-curve differential geometry: umbilic detection,
//! canonicalization of principal patches, geodesic curvature of chart
//! curves, normalization of boundary points to the special position, and
//! rigid alignment of sample clouds.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;
use thiserror::Error;

use crate::jets::Complex;
use crate::weierstrass::{SurfacePoint, WeierstrassData, WeierstrassError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("parameter ({0}, {1}) lies outside the surface domain")]
    OutOfDomain(f64, f64),
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
    #[error("degenerate tangent vector")]
    DegenerateTangent,
    #[error("point is not on the unit sphere (|U| = {0})")]
    NotOnSphere(f64),
    #[error("patch is not minimal: |kappa1 + kappa2| / max|kappa| = {0:.3e}")]
    NotMinimal(f64),
    #[error("patch coordinates are not principal (off-diagonal residual {0:.3e})")]
    NotPrincipal(f64),
    #[error("principal curvature is not positive after sign normalization")]
    NonPositiveCurvature,
    #[error("kappa·E varies along the transverse direction (relative variation {0:.3e})")]
    CodazziViolation(f64),
    #[error("vector is not tangent to the surface (normal component {0:.3e})")]
    NotTangent(f64),
    #[error("{0}")]
    DegenerateInput(&'static str),
}

/// Closed parameter rectangle of a surface patch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Domain {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl Domain {
    pub fn contains(&self, u: f64, v: f64) -> bool {
        let eps = 1e-12;
        u >= self.u_min - eps && u <= self.u_max + eps && v >= self.v_min - eps && v <= self.v_max + eps
    }
}

/// A surface patch evaluable to second-derivative data on a rectangle.
pub trait Surface: Send + Sync {
    fn domain(&self) -> Domain;
    fn eval(&self, u: f64, v: f64) -> Result<SurfacePoint, GeometryError>;
}

impl Surface for WeierstrassData {
    fn domain(&self) -> Domain {
        let chart = self.chart();
        Domain {
            u_min: -chart.du,
            u_max: chart.du,
            v_min: -chart.dv,
            v_max: chart.dv,
        }
    }

    fn eval(&self, u: f64, v: f64) -> Result<SurfacePoint, GeometryError> {
        Ok(self.evaluate(Complex::new(u, v))?)
    }
}

/// Uniform sampling grid over a surface domain, inset by a small margin
/// so open charts are never evaluated on their edge.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub nu: usize,
    pub nv: usize,
    pub margin: f64,
}

impl GridSpec {
    pub fn new(nu: usize, nv: usize) -> Self {
        Self { nu, nv, margin: 0.01 }
    }

    pub fn points(&self, domain: Domain) -> Vec<(f64, f64)> {
        let span_u = domain.u_max - domain.u_min;
        let span_v = domain.v_max - domain.v_min;
        let u0 = domain.u_min + self.margin * span_u;
        let v0 = domain.v_min + self.margin * span_v;
        let du = span_u * (1.0 - 2.0 * self.margin);
        let dv = span_v * (1.0 - 2.0 * self.margin);
        let mut out = Vec::with_capacity(self.nu * self.nv);
        for i in 0..self.nu {
            let fu = if self.nu == 1 { 0.5 } else { i as f64 / (self.nu - 1) as f64 };
            for j in 0..self.nv {
                let fv = if self.nv == 1 { 0.5 } else { j as f64 / (self.nv - 1) as f64 };
                out.push((u0 + fu * du, v0 + fv * dv));
            }
        }
        out
    }
}

/// Umbilic classification of one grid point.
#[derive(Debug, Clone, Serialize)]
pub struct UmbilicReport {
    pub w: Complex,
    pub kappa_gap: f64,
    pub is_umbilic: bool,
    pub threshold: f64,
}

/// Outcome of an umbilic scan over a grid.
#[derive(Debug, Clone, Serialize)]
pub struct UmbilicScan {
    pub reports: Vec<UmbilicReport>,
    pub umbilic_count: usize,
    /// Set when umbilic points cluster instead of being isolated, which
    /// on a minimal surface indicates a flat patch.
    pub non_discrete: bool,
    /// Median |kappa1| over the grid.
    pub curvature_scale: f64,
}

/// Fraction of umbilic grid points above which the scan is flagged
/// non-discrete.
const NON_DISCRETE_FRACTION: f64 = 0.1;

/// Median |kappa1| over a sampling grid, the scale against which the
/// default umbilic threshold (1e-8 · scale) is taken.
pub fn curvature_scale(surface: &dyn Surface, grid: GridSpec) -> Result<f64, GeometryError> {
    let mut mags = Vec::new();
    for (u, v) in grid.points(surface.domain()) {
        mags.push(surface.eval(u, v)?.kappa1.abs());
    }
    if mags.is_empty() {
        return Err(GeometryError::DegenerateInput("empty sampling grid"));
    }
    mags.sort_by(f64::total_cmp);
    Ok(mags[mags.len() / 2])
}

/// Classifies every grid point by its principal-curvature gap |κ₁ − κ₂|.
pub fn detect_umbilics(
    surface: &dyn Surface,
    grid: GridSpec,
    threshold: f64,
) -> Result<UmbilicScan, GeometryError> {
    let mut reports = Vec::new();
    let mut mags = Vec::new();
    for (u, v) in grid.points(surface.domain()) {
        let p = surface.eval(u, v)?;
        let gap = (p.kappa1 - p.kappa2).abs();
        mags.push(p.kappa1.abs());
        reports.push(UmbilicReport {
            w: Complex::new(u, v),
            kappa_gap: gap,
            is_umbilic: gap < threshold,
            threshold,
        });
    }
    mags.sort_by(f64::total_cmp);
    let umbilic_count = reports.iter().filter(|r| r.is_umbilic).count();
    Ok(UmbilicScan {
        non_discrete: umbilic_count as f64 > NON_DISCRETE_FRACTION * reports.len() as f64,
        umbilic_count,
        curvature_scale: mags[mags.len() / 2],
        reports,
    })
}

/// First/second fundamental form coefficients in canonical principal
/// coordinates.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CanonicalForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub l: f64,
    pub m: f64,
    pub n2: f64,
    pub lambda: f64,
}

/// A reparameterized principal patch with I = λ(du² + dv²) and
/// II = −du² + dv², centered on the source domain midpoint.
pub struct PrincipalPatch<'a> {
    source: &'a dyn Surface,
    x_nodes: Vec<f64>,
    u_nodes: Vec<f64>,
    y_nodes: Vec<f64>,
    v_nodes: Vec<f64>,
    delta: f64,
    form_sign: f64,
}

impl<'a> PrincipalPatch<'a> {
    /// Half-width of the canonical (u, v) square.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Source parameters reached by canonical coordinates (u, v).
    pub fn source_params(&self, u: f64, v: f64) -> Result<(f64, f64), GeometryError> {
        if u.abs() > self.delta || v.abs() > self.delta {
            return Err(GeometryError::OutOfDomain(u, v));
        }
        Ok((
            invert_table(&self.u_nodes, &self.x_nodes, u),
            invert_table(&self.v_nodes, &self.y_nodes, v),
        ))
    }

    /// Surface point under the canonical coordinates.
    pub fn map(&self, u: f64, v: f64) -> Result<SurfacePoint, GeometryError> {
        let (x, y) = self.source_params(u, v)?;
        self.source.eval(x, y)
    }

    /// Conformal factor λ = 1/κ at canonical coordinates.
    pub fn lambda(&self, u: f64, v: f64) -> Result<f64, GeometryError> {
        Ok(self.canonical_forms(u, v)?.lambda)
    }

    /// Fundamental forms transformed to the canonical coordinates.
    pub fn canonical_forms(&self, u: f64, v: f64) -> Result<CanonicalForms, GeometryError> {
        let (x, y) = self.source_params(u, v)?;
        let p = self.source.eval(x, y)?;
        let kappa = self.form_sign * p.n2 / p.g;
        let mu2 = kappa * p.e;
        let nu2 = kappa * p.g;
        Ok(CanonicalForms {
            e: p.e / mu2,
            f: p.f / (mu2 * nu2).sqrt(),
            g: p.g / nu2,
            l: self.form_sign * p.l / mu2,
            m: self.form_sign * p.m / (mu2 * nu2).sqrt(),
            n2: self.form_sign * p.n2 / nu2,
            lambda: 1.0 / kappa,
        })
    }
}

const PRINCIPAL_GRID: usize = 25;
const TABLE_NODES: usize = 1024;
const CODAZZI_TOL: f64 = 1e-6;

/// Reparameterizes a principal patch (diagonal I and II, opposite equal
/// principal curvatures) into the canonical form I = λ(du² + dv²),
/// II = −du² + dv², via u = ∫√(κE) dx, v = ∫√(κG) dy. The Codazzi
/// consequences (κE a function of x alone, κG of y alone) are certified
/// on a grid before integrating.
pub fn canonical_principal_form(surface: &dyn Surface) -> Result<PrincipalPatch<'_>, GeometryError> {
    let domain = surface.domain();
    let grid = GridSpec::new(PRINCIPAL_GRID, PRINCIPAL_GRID);

    // Validate principality, minimality and the curvature sign on the grid.
    let mut form_sign = 0.0f64;
    let mut kappa_e = vec![vec![0.0f64; PRINCIPAL_GRID]; PRINCIPAL_GRID];
    let mut kappa_g = vec![vec![0.0f64; PRINCIPAL_GRID]; PRINCIPAL_GRID];
    let points = grid.points(domain);
    for (idx, &(x, y)) in points.iter().enumerate() {
        let p = surface.eval(x, y)?;
        let kappa_max = p.kappa1.abs().max(p.kappa2.abs());
        if kappa_max == 0.0 {
            return Err(GeometryError::NonPositiveCurvature);
        }
        let minimality = (p.kappa1 + p.kappa2).abs() / kappa_max;
        if minimality > 1e-6 {
            return Err(GeometryError::NotMinimal(minimality));
        }
        let off_diag = (p.f.abs() / p.e).max(p.m.abs() / (p.l.abs() + p.n2.abs()));
        if off_diag > 1e-6 {
            return Err(GeometryError::NotPrincipal(off_diag));
        }
        if form_sign == 0.0 {
            // Normal sign convention: κ > 0 along the v-direction.
            form_sign = if p.n2 > 0.0 { 1.0 } else { -1.0 };
        }
        let kappa = form_sign * p.n2 / p.g;
        if kappa <= 0.0 {
            return Err(GeometryError::NonPositiveCurvature);
        }
        let i = idx / PRINCIPAL_GRID;
        let j = idx % PRINCIPAL_GRID;
        kappa_e[i][j] = kappa * p.e;
        kappa_g[i][j] = kappa * p.g;
    }

    // κE must not vary with y; κG must not vary with x.
    for i in 0..PRINCIPAL_GRID {
        let row = &kappa_e[i];
        let (lo, hi) = min_max(row.iter().copied());
        let var = (hi - lo) / hi.abs().max(1e-300);
        if var > CODAZZI_TOL {
            return Err(GeometryError::CodazziViolation(var));
        }
    }
    for j in 0..PRINCIPAL_GRID {
        let col: Vec<f64> = (0..PRINCIPAL_GRID).map(|i| kappa_g[i][j]).collect();
        let (lo, hi) = min_max(col.iter().copied());
        let var = (hi - lo) / hi.abs().max(1e-300);
        if var > CODAZZI_TOL {
            return Err(GeometryError::CodazziViolation(var));
        }
    }

    // Cumulative arclength-style tables u(x) = ∫ μ and v(y) = ∫ ν from the
    // domain midpoint, trapezoid on a dense grid.
    let x_mid = 0.5 * (domain.u_min + domain.u_max);
    let y_mid = 0.5 * (domain.v_min + domain.v_max);
    let span = 1.0 - 2.0 * grid.margin;
    let x_lo = x_mid - 0.5 * span * (domain.u_max - domain.u_min);
    let x_hi = x_mid + 0.5 * span * (domain.u_max - domain.u_min);
    let y_lo = y_mid - 0.5 * span * (domain.v_max - domain.v_min);
    let y_hi = y_mid + 0.5 * span * (domain.v_max - domain.v_min);

    let mu = |x: f64| -> Result<f64, GeometryError> {
        let p = surface.eval(x, y_mid)?;
        Ok((form_sign * p.n2 / p.g * p.e).sqrt())
    };
    let nu = |y: f64| -> Result<f64, GeometryError> {
        let p = surface.eval(x_mid, y)?;
        Ok((form_sign * p.n2 / p.g * p.g).sqrt())
    };
    let (x_nodes, u_nodes) = cumulative_table(x_lo, x_hi, x_mid, TABLE_NODES, mu)?;
    let (y_nodes, v_nodes) = cumulative_table(y_lo, y_hi, y_mid, TABLE_NODES, nu)?;

    let delta = u_nodes[0]
        .abs()
        .min(u_nodes[u_nodes.len() - 1].abs())
        .min(v_nodes[0].abs())
        .min(v_nodes[v_nodes.len() - 1].abs());

    Ok(PrincipalPatch {
        source: surface,
        x_nodes,
        u_nodes,
        y_nodes,
        v_nodes,
        delta,
        form_sign,
    })
}

fn min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

fn cumulative_table(
    lo: f64,
    hi: f64,
    anchor: f64,
    nodes: usize,
    density: impl Fn(f64) -> Result<f64, GeometryError>,
) -> Result<(Vec<f64>, Vec<f64>), GeometryError> {
    let h = (hi - lo) / (nodes - 1) as f64;
    let xs: Vec<f64> = (0..nodes).map(|i| lo + i as f64 * h).collect();
    let ds: Vec<f64> = xs.iter().map(|&x| density(x)).collect::<Result<_, _>>()?;
    let mut cum = vec![0.0; nodes];
    for i in 1..nodes {
        cum[i] = cum[i - 1] + 0.5 * (ds[i - 1] + ds[i]) * h;
    }
    // Shift so the anchor maps to 0.
    let at_anchor = interp(&xs, &cum, anchor);
    for c in &mut cum {
        *c -= at_anchor;
    }
    Ok((xs, cum))
}

fn interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    let idx = xs.partition_point(|&v| v < x).clamp(1, n - 1);
    let t = (x - xs[idx - 1]) / (xs[idx] - xs[idx - 1]);
    ys[idx - 1] + t * (ys[idx] - ys[idx - 1])
}

fn invert_table(us: &[f64], xs: &[f64], u: f64) -> f64 {
    // us is strictly increasing (positive density).
    interp(us, xs, u)
}

/// Rotation that carries a sphere boundary point to the special position:
/// the curve tangent goes to (0, 1, 0) (the curve orientation is chosen
/// so the tangent ends up along +Y) and the normal lands in the XZ-plane,
/// making the stereographic Gauss-map value real.
pub fn normalize_boundary_point(point: &SurfacePoint) -> Result<Matrix3<f64>, GeometryError> {
    let pos = point.position;
    if (pos.norm() - 1.0).abs() > 1e-9 {
        return Err(GeometryError::NotOnSphere(pos.norm()));
    }
    if point.d_v.norm() < 1e-12 {
        return Err(GeometryError::DegenerateTangent);
    }
    let mut tangent = point.d_v / point.d_v.norm();
    // Orientation: the special position satisfies n = T × U, so flip the
    // curve direction when the sampled handedness is opposite.
    if tangent.cross(&pos).dot(&point.normal) < 0.0 {
        tangent = -tangent;
    }
    Ok(minimal_rotation_to(tangent, Vector3::y()))
}

/// Shortest rotation carrying unit vector `from` to unit vector `to`.
fn minimal_rotation_to(from: Vector3<f64>, to: Vector3<f64>) -> Matrix3<f64> {
    let axis = from.cross(&to);
    let s = axis.norm();
    let c = from.dot(&to);
    if s < 1e-14 {
        if c > 0.0 {
            return Matrix3::identity();
        }
        // Antipodal: rotate by π about any axis perpendicular to `to`.
        let helper = if to.x.abs() < 0.9 { Vector3::x() } else { Vector3::z() };
        let axis = (helper - to * helper.dot(&to)).normalize();
        return rodrigues(axis, -1.0, 0.0);
    }
    rodrigues(axis / s, c, s)
}

fn rodrigues(axis: Vector3<f64>, cos: f64, sin: f64) -> Matrix3<f64> {
    let k = Matrix3::new(
        0.0, -axis.z, axis.y,
        axis.z, 0.0, -axis.x,
        -axis.y, axis.x, 0.0,
    );
    Matrix3::identity() + k * sin + k * k * (1.0 - cos)
}

/// A parameterized curve in chart coordinates with explicit velocity and
/// acceleration.
pub struct ChartCurve {
    pos: Box<dyn Fn(f64) -> (f64, f64) + Send + Sync>,
    vel: Box<dyn Fn(f64) -> (f64, f64) + Send + Sync>,
    acc: Box<dyn Fn(f64) -> (f64, f64) + Send + Sync>,
}

impl ChartCurve {
    pub fn new(
        pos: impl Fn(f64) -> (f64, f64) + Send + Sync + 'static,
        vel: impl Fn(f64) -> (f64, f64) + Send + Sync + 'static,
        acc: impl Fn(f64) -> (f64, f64) + Send + Sync + 'static,
    ) -> Self {
        Self {
            pos: Box::new(pos),
            vel: Box::new(vel),
            acc: Box::new(acc),
        }
    }

    /// Coordinate line t ↦ (t, v0).
    pub fn u_line(v0: f64) -> Self {
        Self::new(move |t| (t, v0), |_| (1.0, 0.0), |_| (0.0, 0.0))
    }

    /// Coordinate line t ↦ (u0, t).
    pub fn v_line(u0: f64) -> Self {
        Self::new(move |t| (u0, t), |_| (0.0, 1.0), |_| (0.0, 0.0))
    }

    pub fn at(&self, t: f64) -> ((f64, f64), (f64, f64), (f64, f64)) {
        ((self.pos)(t), (self.vel)(t), (self.acc)(t))
    }
}

/// Geodesic curvature of a chart curve at parameter `t`, via the normal
/// projection k_g = ((c' × c'') · n) / |c'|³.
pub fn geodesic_curvature(
    surface: &dyn Surface,
    curve: &ChartCurve,
    t: f64,
) -> Result<f64, GeometryError> {
    let ((u, v), (du, dv), (ddu, ddv)) = curve.at(t);
    if !surface.domain().contains(u, v) {
        return Err(GeometryError::OutOfDomain(u, v));
    }
    let p = surface.eval(u, v)?;
    let c1 = p.d_u * du + p.d_v * dv;
    let c2 = p.d_uu * (du * du) + p.d_uv * (2.0 * du * dv) + p.d_vv * (dv * dv)
        + p.d_u * ddu + p.d_v * ddv;
    let speed = c1.norm();
    if speed < 1e-14 {
        return Err(GeometryError::DegenerateTangent);
    }
    Ok(c1.cross(&c2).dot(&p.normal) / speed.powi(3))
}

/// Best-fit rigid motion mapping `src` onto `dst` (Kabsch), with the RMS
/// residual after alignment.
#[derive(Debug, Clone)]
pub struct RigidMotion {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
    pub rms: f64,
}

impl RigidMotion {
    pub fn apply(&self, p: Vector3<f64>) -> Vector3<f64> {
        self.rotation * p + self.translation
    }
}

pub fn rigid_align(src: &[Vector3<f64>], dst: &[Vector3<f64>]) -> Result<RigidMotion, GeometryError> {
    if src.len() != dst.len() || src.len() < 3 {
        return Err(GeometryError::DegenerateInput(
            "rigid alignment needs two point lists of equal length >= 3",
        ));
    }
    let n = src.len() as f64;
    let cs = src.iter().sum::<Vector3<f64>>() / n;
    let cd = dst.iter().sum::<Vector3<f64>>() / n;
    let mut h = Matrix3::zeros();
    for (s, d) in src.iter().zip(dst) {
        h += (d - cd) * (s - cs).transpose();
    }
    let svd = h.svd(true, true);
    let u = svd.u.ok_or(GeometryError::DegenerateInput("svd failed"))?;
    let vt = svd.v_t.ok_or(GeometryError::DegenerateInput("svd failed"))?;
    let det = (u * vt).determinant();
    let fix = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, det.signum()));
    let rotation = u * fix * vt;
    let translation = cd - rotation * cs;
    let mut sq = 0.0;
    for (s, d) in src.iter().zip(dst) {
        sq += (rotation * s + translation - d).norm_squared();
    }
    Ok(RigidMotion {
        rotation,
        translation,
        rms: (sq / n).sqrt(),
    })
}
