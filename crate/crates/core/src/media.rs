//! Scene geometry and material coefficients.
//!
//! A scene is a host region `D` with a real symmetric tensor `A` and real index
//! `n`, containing defects `D₀ᵢ` with complex tensor `A₀` and index `n₀`.
//! Outside `D` the medium is free space `(I, 1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Point, Real, C};

/// Threshold below which a definiteness margin is treated as degenerate.
pub const DEFINITENESS_TOL: f64 = 1e-12;

/// Symmetric 2×2 tensor with optional imaginary part.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize + PartialEq + Default", deserialize = "T: Deserialize<'de> + Default"))]
pub struct SymTensor2<T> {
    pub a11: T,
    pub a12: T,
    pub a22: T,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub i11: T,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub i12: T,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub i22: T,
}

fn is_zero<T: PartialEq + Default>(x: &T) -> bool {
    *x == T::default()
}

/// Eigenvalues `(min, max)` of the real symmetric matrix `[[p, q], [q, r]]`.
pub fn sym2_eigenvalues<T: Real>(p: T, q: T, r: T) -> (T, T) {
    let half = T::of(0.5);
    let mean = (p + r) * half;
    let rad = ((p - r) * half).hypot(q);
    (mean - rad, mean + rad)
}

impl<T: Real> SymTensor2<T> {
    pub fn real(a11: T, a12: T, a22: T) -> Self {
        Self { a11, a12, a22, i11: T::zero(), i12: T::zero(), i22: T::zero() }
    }

    pub fn identity() -> Self {
        Self::scaled_identity(T::one())
    }

    pub fn scaled_identity(a: T) -> Self {
        Self::real(a, T::zero(), a)
    }

    pub fn is_real(&self) -> bool {
        self.i11.is_zero() && self.i12.is_zero() && self.i22.is_zero()
    }

    pub fn real_part(&self) -> Self {
        Self::real(self.a11, self.a12, self.a22)
    }

    /// `(min, max)` eigenvalue of the real part.
    pub fn re_eigenvalues(&self) -> (T, T) {
        sym2_eigenvalues(self.a11, self.a12, self.a22)
    }

    /// `(min, max)` eigenvalue of the imaginary part.
    pub fn im_eigenvalues(&self) -> (T, T) {
        sym2_eigenvalues(self.i11, self.i12, self.i22)
    }

    /// Entrywise difference (real and imaginary parts).
    pub fn minus(&self, other: &Self) -> Self {
        Self {
            a11: self.a11 - other.a11,
            a12: self.a12 - other.a12,
            a22: self.a22 - other.a22,
            i11: self.i11 - other.i11,
            i12: self.i12 - other.i12,
            i22: self.i22 - other.i22,
        }
    }

    pub fn max_abs_entry(&self) -> T {
        [self.a11, self.a12, self.a22, self.i11, self.i12, self.i22]
            .into_iter()
            .map(T::abs)
            .fold(T::zero(), T::max)
    }

    /// Matrix absolute value `|Im A|` (real symmetric, PSD).
    pub fn abs_imag(&self) -> Self {
        let (p, q, r) = (self.i11, self.i12, self.i22);
        let (l1, l2) = sym2_eigenvalues(p, q, r);
        if q.is_zero() {
            return Self::real(p.abs(), T::zero(), r.abs());
        }
        // eigenvector of l: (q, l - p)
        let proj = |l: T| {
            let (vx, vy) = (q, l - p);
            let nrm = vx * vx + vy * vy;
            (vx * vx / nrm, vx * vy / nrm, vy * vy / nrm)
        };
        let (a1, b1, c1) = proj(l1);
        let (a2, b2, c2) = proj(l2);
        let (m1, m2) = (l1.abs(), l2.abs());
        Self::real(m1 * a1 + m2 * a2, m1 * b1 + m2 * b2, m1 * c1 + m2 * c2)
    }

    /// Complex entries `(A11, A12, A22)`.
    pub fn entries(&self) -> [C<T>; 3] {
        [
            C::new(self.a11, self.i11),
            C::new(self.a12, self.i12),
            C::new(self.a22, self.i22),
        ]
    }

    pub fn is_finite(&self) -> bool {
        [self.a11, self.a12, self.a22, self.i11, self.i12, self.i22].iter().all(|v| v.is_finite())
    }
}

/// Region of the plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Shape<T> {
    Circle { center: Point<T>, radius: T },
    /// Axis-aligned ellipse, `semi_a` along x.
    Ellipse { center: Point<T>, semi_a: T, semi_b: T },
    Rectangle { xmin: T, xmax: T, ymin: T, ymax: T },
    Union { members: Vec<Shape<T>> },
}

impl<T: Real> Shape<T> {
    pub fn circle(cx: T, cy: T, radius: T) -> Self {
        Shape::Circle { center: [cx, cy], radius }
    }

    pub fn ellipse(cx: T, cy: T, semi_a: T, semi_b: T) -> Self {
        Shape::Ellipse { center: [cx, cy], semi_a, semi_b }
    }

    pub fn rectangle(xmin: T, xmax: T, ymin: T, ymax: T) -> Self {
        Shape::Rectangle { xmin, xmax, ymin, ymax }
    }

    /// Closed-set membership.
    pub fn contains(&self, p: Point<T>) -> bool {
        match self {
            Shape::Circle { center, radius } => {
                let (dx, dy) = (p[0] - center[0], p[1] - center[1]);
                dx * dx + dy * dy <= *radius * *radius
            }
            Shape::Ellipse { center, semi_a, semi_b } => {
                let (u, v) = ((p[0] - center[0]) / *semi_a, (p[1] - center[1]) / *semi_b);
                u * u + v * v <= T::one()
            }
            Shape::Rectangle { xmin, xmax, ymin, ymax } => {
                p[0] >= *xmin && p[0] <= *xmax && p[1] >= *ymin && p[1] <= *ymax
            }
            Shape::Union { members } => members.iter().any(|m| m.contains(p)),
        }
    }

    /// `[xmin, xmax, ymin, ymax]`
    pub fn bounding_box(&self) -> [T; 4] {
        match self {
            Shape::Circle { center, radius } => [
                center[0] - *radius,
                center[0] + *radius,
                center[1] - *radius,
                center[1] + *radius,
            ],
            Shape::Ellipse { center, semi_a, semi_b } => [
                center[0] - *semi_a,
                center[0] + *semi_a,
                center[1] - *semi_b,
                center[1] + *semi_b,
            ],
            Shape::Rectangle { xmin, xmax, ymin, ymax } => [*xmin, *xmax, *ymin, *ymax],
            Shape::Union { members } => members.iter().map(Shape::bounding_box).fold(
                [T::infinity(), T::neg_infinity(), T::infinity(), T::neg_infinity()],
                |a, b| [a[0].min(b[0]), a[1].max(b[1]), a[2].min(b[2]), a[3].max(b[3])],
            ),
        }
    }

    /// Radius of the smallest origin-centred disc containing the shape.
    pub fn circumradius(&self) -> T {
        match self {
            Shape::Circle { center, radius } => center[0].hypot(center[1]) + *radius,
            Shape::Rectangle { xmin, xmax, ymin, ymax } => {
                xmin.abs().max(xmax.abs()).hypot(ymin.abs().max(ymax.abs()))
            }
            Shape::Ellipse { .. } => self
                .boundary_points(2048)
                .into_iter()
                .map(|p| p[0].hypot(p[1]))
                .fold(T::zero(), T::max),
            Shape::Union { members } => {
                members.iter().map(Shape::circumradius).fold(T::zero(), T::max)
            }
        }
    }

    /// Radius of the largest inscribed disc (of the largest member for unions).
    pub fn inradius(&self) -> T {
        let half = T::of(0.5);
        match self {
            Shape::Circle { radius, .. } => *radius,
            Shape::Ellipse { semi_a, semi_b, .. } => semi_a.min(*semi_b),
            Shape::Rectangle { xmin, xmax, ymin, ymax } => ((*xmax - *xmin) * half).min((*ymax - *ymin) * half),
            Shape::Union { members } => members.iter().map(Shape::inradius).fold(T::zero(), T::max),
        }
    }

    /// `count` points distributed along the boundary (per member for unions).
    pub fn boundary_points(&self, count: usize) -> Vec<Point<T>> {
        let count = count.max(4);
        let two_pi = T::PI() + T::PI();
        match self {
            Shape::Circle { center, radius } => (0..count)
                .map(|i| {
                    let t = two_pi * T::of(i as f64) / T::of(count as f64);
                    [center[0] + *radius * t.cos(), center[1] + *radius * t.sin()]
                })
                .collect(),
            Shape::Ellipse { center, semi_a, semi_b } => (0..count)
                .map(|i| {
                    let t = two_pi * T::of(i as f64) / T::of(count as f64);
                    [center[0] + *semi_a * t.cos(), center[1] + *semi_b * t.sin()]
                })
                .collect(),
            Shape::Rectangle { xmin, xmax, ymin, ymax } => {
                let per_side = count.div_ceil(4);
                let mut pts = Vec::with_capacity(4 * per_side);
                for i in 0..per_side {
                    let s = T::of(i as f64) / T::of(per_side as f64);
                    let x = *xmin + (*xmax - *xmin) * s;
                    let y = *ymin + (*ymax - *ymin) * s;
                    let xr = *xmax - (*xmax - *xmin) * s;
                    let yr = *ymax - (*ymax - *ymin) * s;
                    pts.push([x, *ymin]);
                    pts.push([*xmax, y]);
                    pts.push([xr, *ymax]);
                    pts.push([*xmin, yr]);
                }
                pts
            }
            Shape::Union { members } => {
                members.iter().flat_map(|m| m.boundary_points(count)).collect()
            }
        }
    }

    /// Signed distance to the boundary: negative inside, positive outside.
    /// Exact for circles and rectangles, boundary-sampled for ellipses.
    pub fn signed_distance(&self, p: Point<T>) -> T {
        match self {
            Shape::Circle { center, radius } => {
                (p[0] - center[0]).hypot(p[1] - center[1]) - *radius
            }
            Shape::Rectangle { xmin, xmax, ymin, ymax } => {
                let dx = (*xmin - p[0]).max(p[0] - *xmax);
                let dy = (*ymin - p[1]).max(p[1] - *ymax);
                if dx <= T::zero() && dy <= T::zero() {
                    dx.max(dy)
                } else {
                    dx.max(T::zero()).hypot(dy.max(T::zero()))
                }
            }
            Shape::Ellipse { .. } => {
                let d = self
                    .boundary_points(4096)
                    .into_iter()
                    .map(|q| (q[0] - p[0]).hypot(q[1] - p[1]))
                    .fold(T::infinity(), T::min);
                if self.contains(p) {
                    -d
                } else {
                    d
                }
            }
            Shape::Union { members } => {
                let inside: Vec<T> = members
                    .iter()
                    .map(|m| m.signed_distance(p))
                    .filter(|&d| d <= T::zero())
                    .collect();
                if inside.is_empty() {
                    members.iter().map(|m| m.signed_distance(p)).fold(T::infinity(), T::min)
                } else {
                    inside.into_iter().fold(T::infinity(), T::min)
                }
            }
        }
    }

    /// Geometric parameter checks plus pairwise disjointness of union
    /// members, probed on a lattice of spacing `resolution`.
    pub fn validate(&self, resolution: T) -> Result<()> {
        let positive = |v: T, what: &str| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::ConfigInvalid(format!("{what} must be positive, got {v}")))
            }
        };
        match self {
            Shape::Circle { center, radius } => {
                finite_point(center)?;
                positive(*radius, "circle radius")
            }
            Shape::Ellipse { center, semi_a, semi_b } => {
                finite_point(center)?;
                positive(*semi_a, "ellipse semi_a")?;
                positive(*semi_b, "ellipse semi_b")
            }
            Shape::Rectangle { xmin, xmax, ymin, ymax } => {
                if xmin < xmax && ymin < ymax {
                    Ok(())
                } else {
                    Err(Error::ConfigInvalid(format!(
                        "rectangle needs xmin < xmax and ymin < ymax, got [{xmin}, {xmax}] x [{ymin}, {ymax}]"
                    )))
                }
            }
            Shape::Union { members } => {
                if members.is_empty() {
                    return Err(Error::ConfigInvalid("empty union".into()));
                }
                for m in members {
                    m.validate(resolution)?;
                }
                for (i, a) in members.iter().enumerate() {
                    for b in &members[i + 1..] {
                        if let Some(p) = first_common_point(a, b, resolution) {
                            return Err(Error::ConfigInvalid(format!(
                                "union members overlap near ({}, {})",
                                p[0], p[1]
                            )));
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

fn finite_point<T: Real>(p: &Point<T>) -> Result<()> {
    if p[0].is_finite() && p[1].is_finite() {
        Ok(())
    } else {
        Err(Error::ConfigInvalid("non-finite coordinate".into()))
    }
}

/// Probes the intersection of the two bounding boxes on a lattice.
fn first_common_point<T: Real>(a: &Shape<T>, b: &Shape<T>, resolution: T) -> Option<Point<T>> {
    let (ba, bb) = (a.bounding_box(), b.bounding_box());
    let (x0, x1) = (ba[0].max(bb[0]), ba[1].min(bb[1]));
    let (y0, y1) = (ba[2].max(bb[2]), ba[3].min(bb[3]));
    if x0 > x1 || y0 > y1 {
        return None;
    }
    let nx = ((x1 - x0) / resolution).ceil().to_usize().unwrap_or(0).min(4000) + 1;
    let ny = ((y1 - y0) / resolution).ceil().to_usize().unwrap_or(0).min(4000) + 1;
    for j in 0..ny {
        for i in 0..nx {
            let p = [
                x0 + (x1 - x0) * T::of(i as f64) / T::of((nx - 1).max(1) as f64),
                y0 + (y1 - y0) * T::of(j as f64) / T::of((ny - 1).max(1) as f64),
            ];
            if a.contains(p) && b.contains(p) {
                return Some(p);
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize + PartialEq + Default", deserialize = "T: Deserialize<'de> + Default"))]
pub struct Host<T> {
    pub shape: Shape<T>,
    #[serde(rename = "A")]
    pub a: SymTensor2<T>,
    pub n: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize + PartialEq + Default", deserialize = "T: Deserialize<'de> + Default"))]
pub struct Defect<T> {
    pub shape: Shape<T>,
    #[serde(rename = "A0")]
    pub a0: SymTensor2<T>,
    /// `[re, im]`
    pub n0: C<T>,
}

impl<T: Real> Defect<T> {
    /// `A₀ = I`, `n₀ = 1`.
    pub fn void(shape: Shape<T>) -> Self {
        Self { shape, a0: SymTensor2::identity(), n0: C::new(T::one(), T::zero()) }
    }
}

/// Which of the two forward problems to sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Medium {
    /// Healthy host, no defects.
    Background,
    /// Host with defects.
    Defective,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize + PartialEq + Default", deserialize = "T: Deserialize<'de> + Default"))]
pub struct MediaConfig<T> {
    pub host: Host<T>,
    #[serde(default)]
    pub defects: Vec<Defect<T>>,
    pub k: T,
}

impl<T: Real> MediaConfig<T> {
    /// Coefficients `(A, n)` at `p` for the selected medium.
    pub fn sample_coefficients(&self, p: Point<T>, medium: Medium) -> (SymTensor2<T>, C<T>) {
        if medium == Medium::Defective {
            if let Some(d) = self.defects.iter().find(|d| d.shape.contains(p)) {
                return (d.a0, d.n0);
            }
        }
        if self.host.shape.contains(p) {
            (self.host.a, C::new(self.host.n, T::zero()))
        } else {
            (SymTensor2::identity(), C::new(T::one(), T::zero()))
        }
    }

    /// Whether a material interface of `medium` passes within `radius` of `p`.
    /// Boundaries between identical coefficients do not count.
    pub fn near_interface(&self, p: Point<T>, radius: T, medium: Medium) -> bool {
        let near = |s: &Shape<T>| s.signed_distance(p).abs() <= radius;
        let host_n = C::new(self.host.n, T::zero());
        let host_free = self.host.a == SymTensor2::identity() && self.host.n == T::one();
        (!host_free && near(&self.host.shape))
            || (medium == Medium::Defective
                && self.defects.iter().any(|d| (d.a0 != self.host.a || d.n0 != host_n) && near(&d.shape)))
    }

    /// Smallest eigenvalue of any real tensor part in the scene (including free space).
    pub fn min_tensor_eigenvalue(&self) -> T {
        self.defects
            .iter()
            .map(|d| d.a0.re_eigenvalues().0)
            .fold(self.host.a.re_eigenvalues().0.min(T::one()), T::min)
    }

    /// `max √(Re n / a_min)` over the scene's regions.
    pub fn max_relative_wavenumber(&self) -> T {
        let host = (self.host.n / self.host.a.re_eigenvalues().0).sqrt();
        self.defects
            .iter()
            .map(|d| (d.n0.re / d.a0.re_eigenvalues().0).sqrt())
            .fold(host.max(T::one()), T::max)
    }

    /// Shortest wavelength present in the scene.
    pub fn min_wavelength(&self) -> T {
        (T::PI() + T::PI()) / (self.k * self.max_relative_wavenumber())
    }

    /// Checks every invariant of the scene. Defect boundaries must stay at
    /// least `margin` inside the host (strictly inside when `margin` is 0).
    pub fn validate(&self, margin: T) -> Result<()> {
        if !(self.k > T::zero() && self.k.is_finite()) {
            return Err(Error::ConfigInvalid(format!("wavenumber must be positive, got {}", self.k)));
        }
        let resolution = if margin > T::zero() { margin * T::of(0.5) } else { T::of(0.01) };
        self.host.shape.validate(resolution)?;
        if !(self.host.n > T::zero() && self.host.n.is_finite()) {
            return Err(Error::ConfigInvalid(format!("host index must be positive, got {}", self.host.n)));
        }
        if !self.host.a.is_finite() || !self.host.a.is_real() {
            return Err(Error::ConfigInvalid("host tensor must be real".into()));
        }
        if !(self.host.a.re_eigenvalues().0 > T::zero()) {
            return Err(Error::ConfigInvalid("host tensor must be positive definite".into()));
        }
        for (idx, d) in self.defects.iter().enumerate() {
            d.shape.validate(resolution)?;
            if !d.a0.is_finite() || !d.n0.re.is_finite() || !d.n0.im.is_finite() {
                return Err(Error::ConfigInvalid(format!("defect {idx}: non-finite coefficient")));
            }
            if !(d.a0.re_eigenvalues().0 > T::zero()) {
                return Err(Error::ConfigInvalid(format!(
                    "defect {idx}: Re(A0) must be positive definite"
                )));
            }
            if d.a0.im_eigenvalues().1 > T::zero() {
                return Err(Error::ConfigInvalid(format!(
                    "defect {idx}: Im(A0) must be negative semidefinite"
                )));
            }
            if !(d.n0.re > T::zero()) || d.n0.im < T::zero() {
                return Err(Error::ConfigInvalid(format!(
                    "defect {idx}: need Re(n0) > 0 and Im(n0) >= 0"
                )));
            }
            for p in d.shape.boundary_points(512) {
                let sd = self.host.shape.signed_distance(p);
                if !(sd < -margin) && !(margin.is_zero() && sd < T::zero()) {
                    return Err(Error::ConfigInvalid(format!(
                        "defect {idx} is not contained in the host with margin {margin} (boundary point ({}, {}))",
                        p[0], p[1]
                    )));
                }
            }
        }
        for (i, a) in self.defects.iter().enumerate() {
            for (j, b) in self.defects.iter().enumerate().skip(i + 1) {
                if first_common_point(&a.shape, &b.shape, resolution).is_some() {
                    return Err(Error::ConfigInvalid(format!("defects {i} and {j} overlap")));
                }
            }
        }
        Ok(())
    }
}

/// Which sufficient condition on `A`, `A₀` holds in a defect.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum Branch {
    /// `Re(A₀) − A > 0`
    ReA0MinusA,
    /// `A − A₀ > 0` with `Im(A₀) = 0`
    AMinusA0,
    /// `A − Re(A₀) − α|Im(A₀)| > 0` and `Re(A₀) − |Im(A₀)|/α ≥ 0`
    Alpha { alpha: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Satisfied,
    Violated,
    Indeterminate,
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectAssumption {
    pub index: usize,
    pub samples: usize,
    pub min_eig_re_a0_minus_a: f64,
    pub min_eig_a_minus_re_a0: f64,
    pub im_a0_zero: bool,
    pub im_n0_zero: bool,
    pub branch: Option<Branch>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct AssumptionReport {
    pub defects: Vec<DefectAssumption>,
    pub verdict: Verdict,
}

/// Points of the R2 low-discrepancy sequence inside `shape`.
pub fn quasi_random_points<T: Real>(shape: &Shape<T>, count: usize) -> Vec<Point<T>> {
    // plastic number
    let g = 1.324_717_957_244_746_f64;
    let (a1, a2) = (1.0 / g, 1.0 / (g * g));
    let bb = shape.bounding_box();
    let mut pts = Vec::with_capacity(count);
    let mut i = 0u64;
    while pts.len() < count && i < 1000 * count as u64 + 10_000 {
        let u = (0.5 + a1 * i as f64).fract();
        let v = (0.5 + a2 * i as f64).fract();
        i += 1;
        let p = [bb[0] + (bb[1] - bb[0]) * T::of(u), bb[2] + (bb[3] - bb[2]) * T::of(v)];
        if shape.contains(p) {
            pts.push(p);
        }
    }
    pts
}

/// Checks the definiteness hypotheses of the reconstruction theorem on
/// `samples` quasi-random points per defect.
pub fn validate_assumptions<T: Real>(config: &MediaConfig<T>, samples: usize) -> Result<AssumptionReport> {
    if samples < 100 {
        return Err(Error::ConfigInvalid(format!("need at least 100 samples, got {samples}")));
    }
    config.validate(T::zero())?;
    let tol = T::of(DEFINITENESS_TOL);
    let alphas: Vec<T> = (0..=160).map(|i| T::of(10f64.powf(-4.0 + 0.05 * i as f64))).collect();
    let mut defects = Vec::with_capacity(config.defects.len());
    for (index, d) in config.defects.iter().enumerate() {
        let pts = quasi_random_points(&d.shape, samples);
        let mut re_margin = T::infinity();
        let mut a_margin = T::infinity();
        let mut contrast = T::zero();
        let mut im_a0_zero = true;
        let mut im_n0_zero = true;
        let mut alpha_first = vec![T::infinity(); alphas.len()];
        let mut alpha_second = vec![T::infinity(); alphas.len()];
        for &p in &pts {
            let (a, _) = config.sample_coefficients(p, Medium::Background);
            let (a0, n0) = config.sample_coefficients(p, Medium::Defective);
            let diff = a0.real_part().minus(&a);
            re_margin = re_margin.min(diff.re_eigenvalues().0);
            a_margin = a_margin.min(sym2_eigenvalues(-diff.a11, -diff.a12, -diff.a22).0);
            contrast = contrast.max(a0.minus(&a).max_abs_entry());
            im_a0_zero &= a0.is_real();
            im_n0_zero &= n0.im.is_zero();
            if !a0.is_real() {
                let abs_im = a0.abs_imag();
                for (slot, &alpha) in alphas.iter().enumerate() {
                    let first = sym2_eigenvalues(
                        -diff.a11 - alpha * abs_im.a11,
                        -diff.a12 - alpha * abs_im.a12,
                        -diff.a22 - alpha * abs_im.a22,
                    )
                    .0;
                    let second = sym2_eigenvalues(
                        a0.a11 - abs_im.a11 / alpha,
                        a0.a12 - abs_im.a12 / alpha,
                        a0.a22 - abs_im.a22 / alpha,
                    )
                    .0;
                    alpha_first[slot] = alpha_first[slot].min(first);
                    alpha_second[slot] = alpha_second[slot].min(second);
                }
            }
        }
        let alpha_branch = if im_a0_zero {
            None
        } else {
            alphas
                .iter()
                .zip(alpha_first.iter().zip(&alpha_second))
                .filter(|(_, (&f, &s))| f > tol && s >= -tol)
                .max_by(|a, b| a.1 .0.partial_cmp(b.1 .0).unwrap())
                .map(|(&alpha, _)| Branch::Alpha { alpha: alpha.to_f64_lossy() })
        };
        let branch = if re_margin > tol {
            Some(Branch::ReA0MinusA)
        } else if im_a0_zero && a_margin > tol {
            Some(Branch::AMinusA0)
        } else {
            alpha_branch
        };
        let verdict = match branch {
            Some(_) => Verdict::Satisfied,
            None if contrast <= tol => Verdict::Violated,
            None if re_margin.max(a_margin) >= -tol => Verdict::Indeterminate,
            None => Verdict::Violated,
        };
        defects.push(DefectAssumption {
            index,
            samples: pts.len(),
            min_eig_re_a0_minus_a: re_margin.to_f64_lossy(),
            min_eig_a_minus_re_a0: a_margin.to_f64_lossy(),
            im_a0_zero,
            im_n0_zero,
            branch,
            verdict,
        });
    }
    let verdict = if defects.is_empty() {
        Verdict::Indeterminate
    } else if defects.iter().any(|d| d.verdict == Verdict::Violated) {
        Verdict::Violated
    } else if defects.iter().any(|d| d.verdict == Verdict::Indeterminate) {
        Verdict::Indeterminate
    } else {
        Verdict::Satisfied
    };
    Ok(AssumptionReport { defects, verdict })
}
