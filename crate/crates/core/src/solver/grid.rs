use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::media::MediaConfig;
use crate::scalar::{Point, Real, C};

/// Cell discretization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Fourth-order compact nine-point scheme (exact for constant
    /// diagonal tensors up to `O(h⁴)`); second order at interfaces.
    #[default]
    Compact,
    /// Classic five-point Laplacian with lumped mass.
    Standard,
}

/// Uniform grid over `[-L, L]²` plus a PML collar of `pml_cells` cells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<T> {
    pub half_extent: T,
    pub h: T,
    pub pml_cells: usize,
    /// Peak imaginary stretch at the outer edge of the collar.
    pub pml_strength: T,
    #[serde(default)]
    pub scheme: Scheme,
}

impl<T: Real> GridSpec<T> {
    pub fn new(half_extent: T, h: T, pml_cells: usize, pml_strength: T) -> Result<Self> {
        let spec = Self { half_extent, h, pml_cells, pml_strength, scheme: Scheme::default() };
        spec.validate()?;
        Ok(spec)
    }

    /// Grid with the default stretch `30 / (k·T)`, `T` the collar width.
    pub fn with_default_pml(half_extent: T, h: T, pml_cells: usize, k: T) -> Result<Self> {
        let width = h * T::of(pml_cells as f64);
        Self::new(half_extent, h, pml_cells, Self::default_pml_strength(k, width))
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn default_pml_strength(k: T, width: T) -> T {
        T::of(30.0) / (k * width)
    }

    /// Automatic grid for a scene: `h = 1/m` with at least
    /// `points_per_wavelength` nodes per shortest wavelength, `L` the
    /// smallest multiple of `h` that is at least `max(1.5·R_D, min_half_extent)`.
    pub fn for_scene(config: &MediaConfig<T>, points_per_wavelength: T, min_half_extent: T, pml_cells: usize) -> Result<Self> {
        let target = config.min_wavelength() / points_per_wavelength;
        let m = (T::one() / target).ceil();
        let h = T::one() / m;
        let r = config.host.shape.circumradius();
        let l_min = (T::of(1.5) * r).max(r + T::of(6.0) * h).max(min_half_extent);
        let l = (l_min * m - T::of(1e-9)).ceil() / m;
        Self::with_default_pml(l, h, pml_cells, config.k)
    }

    /// Same grid with spacing `h` (the half-extent is rounded up to a multiple of `h`).
    pub fn with_spacing(&self, h: T, k: T) -> Result<Self> {
        let cells = (self.half_extent / h - T::of(1e-9)).ceil();
        Ok(Self::with_default_pml(cells * h, h, self.pml_cells, k)?.with_scheme(self.scheme))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > T::zero() && self.half_extent > T::zero()) {
            return Err(Error::ConfigInvalid("grid spacing and half extent must be positive".into()));
        }
        if self.pml_cells < 8 {
            return Err(Error::ConfigInvalid(format!("need at least 8 PML cells, got {}", self.pml_cells)));
        }
        if !(self.pml_strength >= T::zero()) {
            return Err(Error::ConfigInvalid("PML strength must be non-negative".into()));
        }
        let ratio = T::of(2.0) * self.half_extent / self.h;
        if (ratio - ratio.round()).abs() > T::tol(1e-9) * ratio {
            return Err(Error::ConfigInvalid(format!(
                "2L/h = {ratio} is not an integer (L = {}, h = {})",
                self.half_extent, self.h
            )));
        }
        Ok(())
    }

    /// Checks the grid against a scene: `L ≥ 1.5·R_D` and `h ≤ λ_min/10`.
    pub fn validate_for(&self, config: &MediaConfig<T>) -> Result<()> {
        self.validate()?;
        let r = config.host.shape.circumradius();
        if self.half_extent < T::of(1.5) * r - T::tol(1e-9) {
            return Err(Error::ConfigInvalid(format!(
                "half extent {} is below 1.5 x host circumradius {}",
                self.half_extent, r
            )));
        }
        if self.half_extent - T::of(6.0) * self.h < r - T::tol(1e-9) {
            return Err(Error::ConfigInvalid(format!(
                "half extent {} leaves less than 6h between the host (circumradius {r}) and the PML",
                self.half_extent
            )));
        }
        let lambda = config.min_wavelength();
        if self.h > lambda / T::of(10.0) {
            return Err(Error::ConfigInvalid(format!(
                "grid spacing {} exceeds a tenth of the shortest wavelength {}",
                self.h, lambda
            )));
        }
        Ok(())
    }

    pub fn physical_cells(&self) -> usize {
        (T::of(2.0) * self.half_extent / self.h).round().to_usize().expect("cell count")
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.physical_cells() + 2 * self.pml_cells + 1
    }

    pub fn node_count(&self) -> usize {
        let n = self.nodes_per_axis();
        n * n
    }

    pub fn pml_width(&self) -> T {
        self.h * T::of(self.pml_cells as f64)
    }

    /// Coordinate of the first node.
    pub fn origin(&self) -> T {
        -(self.half_extent + self.pml_width())
    }

    #[inline]
    pub fn coord(&self, i: usize) -> T {
        self.origin() + self.h * T::of(i as f64)
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nodes_per_axis() + i
    }

    /// Complex coordinate stretch `1 + iσ(t)`, `σ(t) = strength·(t/T)²`
    /// with `t` the depth into the collar.
    pub fn stretch(&self, x: T) -> C<T> {
        let depth = x.abs() - self.half_extent;
        if depth <= T::zero() {
            return C::new(T::one(), T::zero());
        }
        let s = depth / self.pml_width();
        C::new(T::one(), self.pml_strength * s * s)
    }

    /// Base node and weights of the cubic stencil containing `p`, if the
    /// stencil (plus `margin` extra nodes) fits inside the grid.
    pub(crate) fn cubic_stencil(&self, p: Point<T>, margin: usize) -> Option<([usize; 2], [[T; 4]; 2])> {
        let n = self.nodes_per_axis();
        let mut base = [0usize; 2];
        let mut weights = [[T::zero(); 4]; 2];
        for axis in 0..2 {
            let s = (p[axis] - self.origin()) / self.h;
            let f = s.floor();
            let i0 = f.to_isize()?;
            if i0 - 1 - (margin as isize) < 0 || i0 + 2 + margin as isize > n as isize - 1 {
                return None;
            }
            base[axis] = (i0 - 1) as usize;
            weights[axis] = cubic_weights(s - f);
        }
        Some((base, weights))
    }

    pub fn nearest_node(&self, p: Point<T>) -> (usize, usize) {
        let n = self.nodes_per_axis() - 1;
        let idx = |x: T| ((x - self.origin()) / self.h).round().max(T::zero()).to_usize().unwrap_or(0).min(n);
        (idx(p[0]), idx(p[1]))
    }

    /// Whether `p` is inside `[-L + margin, L - margin]²`.
    pub fn inside_physical(&self, p: Point<T>, margin: T) -> bool {
        let lim = self.half_extent - margin;
        p[0].abs() <= lim && p[1].abs() <= lim
    }
}

/// Complex nodal field, row-major with `y` as the slow index.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexGridField<T> {
    pub spec: GridSpec<T>,
    pub values: Vec<C<T>>,
}

/// Cubic Lagrange weights on nodes `-1, 0, 1, 2` for offset `t ∈ [0, 1)`.
fn cubic_weights<T: Real>(t: T) -> [T; 4] {
    let one = T::one();
    let two = T::of(2.0);
    let six = T::of(6.0);
    [
        -t * (t - one) * (t - two) / six,
        (t + one) * (t - one) * (t - two) / two,
        -(t + one) * t * (t - two) / two,
        (t + one) * t * (t - one) / six,
    ]
}

impl<T: Real> ComplexGridField<T> {
    pub fn new(spec: GridSpec<T>, values: Vec<C<T>>) -> Result<Self> {
        if values.len() != spec.node_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} nodes",
                values.len(),
                spec.node_count()
            )));
        }
        Ok(Self { spec, values })
    }

    pub fn zeros(spec: GridSpec<T>) -> Self {
        Self { values: vec![C::zero(); spec.node_count()], spec }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C<T> {
        self.values[self.spec.index(i, j)]
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn norm(&self) -> T {
        self.values.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Fourth-order centred gradient at an interior node (two-node margin).
    pub fn gradient_at_node(&self, i: usize, j: usize) -> [C<T>; 2] {
        let c = T::one() / (T::of(12.0) * self.spec.h);
        let eight = T::of(8.0);
        let dx = (self.at(i - 2, j) - self.at(i + 2, j) + (self.at(i + 1, j) - self.at(i - 1, j)) * eight) * c;
        let dy = (self.at(i, j - 2) - self.at(i, j + 2) + (self.at(i, j + 1) - self.at(i, j - 1)) * eight) * c;
        [dx, dy]
    }

    /// Bicubic (tensor cubic Lagrange) interpolation.
    pub fn interpolate(&self, p: Point<T>) -> Option<C<T>> {
        let ([bi, bj], [wx, wy]) = self.spec.cubic_stencil(p, 0)?;
        let mut acc = C::zero();
        for (b, &wyb) in wy.iter().enumerate() {
            let mut row = C::zero();
            for (a, &wxa) in wx.iter().enumerate() {
                row += self.at(bi + a, bj + b) * wxa;
            }
            acc += row * wyb;
        }
        Some(acc)
    }

    /// Value and gradient at `p`: bicubic interpolation of the nodal values
    /// and of the fourth-order nodal gradients.
    pub fn interpolate_with_gradient(&self, p: Point<T>) -> Option<(C<T>, [C<T>; 2])> {
        let ([bi, bj], [wx, wy]) = self.spec.cubic_stencil(p, 2)?;
        let mut v = C::zero();
        let mut g = [C::zero(); 2];
        for (b, &wyb) in wy.iter().enumerate() {
            for (a, &wxa) in wx.iter().enumerate() {
                let w = wxa * wyb;
                let (i, j) = (bi + a, bj + b);
                v += self.at(i, j) * w;
                let gn = self.gradient_at_node(i, j);
                g[0] += gn[0] * w;
                g[1] += gn[1] * w;
            }
        }
        Some((v, g))
    }
}
