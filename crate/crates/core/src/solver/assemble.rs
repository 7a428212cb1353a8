//! Cell-based nine-point discretization.
//!
//! Coefficients live on cells (the squares between nodes); each cell adds a
//! symmetric 4×4 stiffness block and a 4×4 mass block to its corners.
//!
//! * [`Scheme::Standard`]: `a11`, `a22` act on the cell's edges with weight
//!   ½, which sums to the five-point operator; lumped mass.
//! * [`Scheme::Compact`]: the diagonal part is the mean of the five-point
//!   block and the bilinear finite-element block, and the mass is
//!   `k²n(1 + h²/12 Δ_h)`. For constant diagonal tensors this is the
//!   fourth-order compact (Mehrstellen) scheme.
//!
//! In both, `a12` couples the cell-centred quotients
//! `∂x u ≈ (u₁+u₃−u₀−u₂)/2h`, `∂y u ≈ (u₂+u₃−u₀−u₁)/2h`.
//! The PML is a complex stretch folded into the cell tensor and mass.
//! In cells cut by an interface every sample is shifted by the difference
//! between the smoothed tensor (see `smoothed_tensor`) and the sample mean.

use num_traits::Zero;
use rayon::prelude::*;

use super::grid::{ComplexGridField, GridSpec, Scheme};
use crate::error::{Error, Result};
use crate::linalg::BandedLu;
use crate::media::{MediaConfig, Medium};
use crate::scalar::{cis, Point, Real, C};

/// Sub-samples per cell side when integrating coefficients; cells whose
/// samples disagree are redone with [`CUT_CELL_SUBSAMPLES`].
const CELL_SUBSAMPLES: usize = 4;
const CUT_CELL_SUBSAMPLES: usize = 32;

/// Midpoint sub-samples per side for source integrals over cells cut by an
/// interface. Homogeneous cells use Gauss–Legendre instead.
const SOURCE_SUBSAMPLES: usize = 32;

/// Four-point Gauss–Legendre rule on `[0, 1]`.
const GAUSS4: [(f64, f64); 4] = [
    (0.069_431_844_202_973_71, 0.173_927_422_568_726_93),
    (0.330_009_478_207_571_87, 0.326_072_577_431_273_07),
    (0.669_990_521_792_428_1, 0.326_072_577_431_273_07),
    (0.930_568_155_797_026_3, 0.173_927_422_568_726_93),
];

/// Node offsets of the quintic source basis relative to the cell's lower-left node.
const SOURCE_OFFSETS: [isize; 6] = [-2, -1, 0, 1, 2, 3];

/// Quintic Lagrange weights and their derivatives at `t ∈ [0, 1]`.
fn source_weights<T: Real>(t: T) -> ([T; 6], [T; 6]) {
    let mut w = [T::zero(); 6];
    let mut dw = [T::zero(); 6];
    for (m, &om) in SOURCE_OFFSETS.iter().enumerate() {
        let mut denom = T::one();
        let mut prod = T::one();
        let mut deriv = T::zero();
        for &oj in SOURCE_OFFSETS.iter().filter(|&&oj| oj != om) {
            let f = t - T::of(oj as f64);
            denom *= T::of((om - oj) as f64);
            deriv = deriv * f + prod;
            prod *= f;
        }
        w[m] = prod / denom;
        dw[m] = deriv / denom;
    }
    (w, dw)
}

/// Local corner `c` of a cell sits at offset `(c & 1, c >> 1)`.
const EX: [i8; 4] = [-1, 1, -1, 1];
const EY: [i8; 4] = [-1, -1, 1, 1];

/// Coefficient moments of one cell in local coordinates `(s, t) ∈ [0, 1]²`
/// with the hat factors `X₀ = 1 − s`, `X₁ = s`, `Y₀ = 1 − t`, `Y₁ = t`.
/// The PML stretch is already folded in.
#[derive(Clone, Copy, Debug, Default)]
struct Cell<T> {
    /// `∫a11 Y_b`.
    a11_edge: [C<T>; 2],
    /// `∫a11 Y_b Y_c` for `b + c = 0, 1, 2`.
    a11_full: [C<T>; 3],
    /// `∫a22 X_b`.
    a22_edge: [C<T>; 2],
    /// `∫a22 X_b X_c`.
    a22_full: [C<T>; 3],
    /// `∫a12`.
    a12: C<T>,
    /// `k² ∫n X_a Y_a` per corner.
    mass_corner: [C<T>; 4],
    /// `k² ∫n`.
    mass: C<T>,
    /// Whether any sub-sample differs from free space.
    contrast: bool,
    /// Whether all sub-samples agree.
    uniform: bool,
    /// Shift from the sample mean to the interface-smoothed tensor of a cut
    /// cell, added to every sample.
    shift: Option<[C<T>; 3]>,
}

/// Quadrature point of the plane-wave source: cell, local offset, weight,
/// `A − I` and `n − 1`.
#[derive(Clone, Copy, Debug)]
struct SourcePoint<T> {
    cell: (usize, usize),
    t: [T; 2],
    w: T,
    b: [C<T>; 3],
    dn: C<T>,
}

/// Stiffness block in units of `1/h²` (the operator row is `−Σ K u / h²`).
fn cell_block<T: Real>(cell: &Cell<T>, scheme: Scheme) -> [[C<T>; 4]; 4] {
    let (edge, full) = match scheme {
        Scheme::Standard => (T::one(), T::zero()),
        Scheme::Compact => (T::of(0.5), T::of(0.5)),
    };
    let quarter = T::of(0.25);
    let mut k = [[C::zero(); 4]; 4];
    for a in 0..4 {
        let (xa, ya) = (a & 1, a >> 1);
        for b in 0..4 {
            let (xb, yb) = (b & 1, b >> 1);
            let sx = if xa == xb { T::one() } else { -T::one() };
            let sy = if ya == yb { T::one() } else { -T::one() };
            let mut v = cell.a11_full[ya + yb] * (sx * full) + cell.a22_full[xa + xb] * (sy * full);
            if ya == yb {
                v += cell.a11_edge[ya] * (sx * edge);
            }
            if xa == xb {
                v += cell.a22_edge[xa] * (sy * edge);
            }
            let s = T::of((EX[a] * EY[b] + EY[a] * EX[b]) as f64);
            k[a][b] = v + cell.a12 * (quarter * s);
        }
    }
    k
}

/// Mass coupling between local corners.
fn cell_mass<T: Real>(cell: &Cell<T>, a: usize, b: usize, scheme: Scheme) -> C<T> {
    let diff = ((a ^ b) & 1) + ((a ^ b) >> 1);
    match (scheme, diff) {
        (Scheme::Standard, 0) => cell.mass_corner[a],
        (Scheme::Compact, 0) => cell.mass_corner[a] - cell.mass * T::of(1.0 / 12.0),
        (Scheme::Compact, 1) => cell.mass * T::of(1.0 / 24.0),
        _ => C::zero(),
    }
}

/// Discretized operator for one medium, factorized once.
pub struct BandedSystem<T> {
    spec: GridSpec<T>,
    medium: Medium,
    k: T,
    cells: Vec<Cell<T>>,
    source: Vec<SourcePoint<T>>,
    lu: BandedLu<T>,
    probe_residual: T,
}

impl<T: Real> std::fmt::Debug for BandedSystem<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BandedSystem")
            .field("spec", &self.spec)
            .field("medium", &self.medium)
            .field("k", &self.k)
            .field("bandwidth", &self.bandwidth())
            .field("probe_residual", &self.probe_residual)
            .finish()
    }
}

impl<T: Real> BandedSystem<T> {
    pub fn spec(&self) -> &GridSpec<T> {
        &self.spec
    }

    pub fn medium(&self) -> Medium {
        self.medium
    }

    pub fn k(&self) -> T {
        self.k
    }

    pub fn bandwidth(&self) -> usize {
        self.lu.lower_bandwidth()
    }

    /// `‖Lx − b‖/‖b‖` measured on a pseudo-random probe right after factorization.
    pub fn probe_residual(&self) -> T {
        self.probe_residual
    }

    fn cells_per_axis(&self) -> usize {
        self.spec.nodes_per_axis() - 1
    }

    fn cell(&self, ci: usize, cj: usize) -> &Cell<T> {
        &self.cells[cj * self.cells_per_axis() + ci]
    }

    fn is_boundary(&self, i: usize, j: usize) -> bool {
        let n = self.spec.nodes_per_axis();
        i == 0 || j == 0 || i == n - 1 || j == n - 1
    }

    /// Nine-point stencil at interior node `(i, j)`: `s[1 + dy][1 + dx]`.
    pub fn stencil_at(&self, i: usize, j: usize) -> [[C<T>; 3]; 3] {
        assert!(!self.is_boundary(i, j), "boundary node has no stencil");
        let scheme = self.spec.scheme;
        let inv_h2 = T::one() / (self.spec.h * self.spec.h);
        let mut s = [[C::zero(); 3]; 3];
        // (cell offset, local corner of (i, j) in that cell)
        for (ci, cj, corner) in [(i - 1, j - 1, 3usize), (i, j - 1, 2), (i - 1, j, 1), (i, j, 0)] {
            let cell = self.cell(ci, cj);
            let block = cell_block(cell, scheme);
            let (ax, ay) = ((corner & 1) as isize, (corner >> 1) as isize);
            for (b, &kab) in block[corner].iter().enumerate() {
                let (bx, by) = ((b & 1) as isize, (b >> 1) as isize);
                let (dx, dy) = (bx - ax, by - ay);
                s[(1 + dy) as usize][(1 + dx) as usize] += cell_mass(cell, corner, b, scheme) - kab * inv_h2;
            }
        }
        s
    }

    /// Applies the unfactored operator (Dirichlet rows are the identity).
    pub fn apply(&self, u: &[C<T>]) -> Vec<C<T>> {
        let n = self.spec.nodes_per_axis();
        assert_eq!(u.len(), n * n);
        (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx % n, idx / n);
                if self.is_boundary(i, j) {
                    return u[idx];
                }
                let s = self.stencil_at(i, j);
                let mut acc = C::zero();
                for (dy, row) in s.iter().enumerate() {
                    for (dx, &c) in row.iter().enumerate() {
                        let (ii, jj) = (i + dx - 1, j + dy - 1);
                        if !self.is_boundary(ii, jj) {
                            acc += c * u[jj * n + ii];
                        }
                    }
                }
                acc
            })
            .collect()
    }

    /// Solves `L u = rhs`.
    pub fn solve(&self, rhs: &[C<T>]) -> Result<ComplexGridField<T>> {
        if rhs.len() != self.spec.node_count() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} nodes",
                rhs.len(),
                self.spec.node_count()
            )));
        }
        let mut x = rhs.to_vec();
        self.lu.solve_in_place(&mut x);
        ComplexGridField::new(self.spec, x)
    }

    /// Nodal source for the scattered field of `uⁱ = e^{ik d·x}`:
    /// the weak form `∫(A−I)∇uⁱ·∇ψ − k²(n−1)uⁱψ` against the
    /// interpolation basis `ψ` (quintic Lagrange), followed by the scheme's mass operator.
    pub fn plane_wave_rhs(&self, d: Point<T>) -> Vec<C<T>> {
        let n = self.spec.nodes_per_axis();
        let h = self.spec.h;
        let k = self.k;
        let k2 = k * k;
        let mut moments = vec![C::zero(); n * n];
        for sp in &self.source {
            let (ci, cj) = sp.cell;
            let p = [self.spec.coord(ci) + h * sp.t[0], self.spec.coord(cj) + h * sp.t[1]];
            let [b11, b12, b22] = sp.b;
            let u = cis(k * (d[0] * p[0] + d[1] * p[1])) * sp.w;
            let g = [u * C::new(T::zero(), k * d[0]), u * C::new(T::zero(), k * d[1])];
            let flux = [(b11 * g[0] + b12 * g[1]) / h, (b12 * g[0] + b22 * g[1]) / h];
            let mass = sp.dn * u * k2;
            let (wx, dwx) = source_weights(sp.t[0]);
            let (wy, dwy) = source_weights(sp.t[1]);
            for b in 0..6 {
                let row = (cj + b - 2) * n + ci - 2;
                for a in 0..6 {
                    moments[row + a] += flux[0] * (dwx[a] * wy[b]) + flux[1] * (wx[a] * dwy[b]) - mass * (wx[a] * wy[b]);
                }
            }
        }
        self.apply_mass(&moments)
    }

    /// Maps nodal densities to right-hand-side values: identity for the
    /// standard scheme, `1 + h²/12 Δ_h` for the compact one.
    fn apply_mass(&self, f: &[C<T>]) -> Vec<C<T>> {
        let n = self.spec.nodes_per_axis();
        let mut out = vec![C::zero(); n * n];
        for j in 1..n - 1 {
            for i in 1..n - 1 {
                let idx = j * n + i;
                out[idx] = match self.spec.scheme {
                    Scheme::Standard => f[idx],
                    Scheme::Compact => {
                        f[idx] * T::of(2.0 / 3.0) + (f[idx - 1] + f[idx + 1] + f[idx - n] + f[idx + n]) * T::of(1.0 / 12.0)
                    }
                };
            }
        }
        out
    }
}

/// `(∫₀¹(1−t), ∫₀¹t)` and `(∫(1−t)², ∫t(1−t), ∫t²)` over `[t0, t1]`.
fn hat_moments<T: Real>(t0: T, t1: T) -> ([T; 2], [T; 3]) {
    let (two, three) = (T::of(2.0), T::of(3.0));
    let p1 = |t: T| t * t / two;
    let p2 = |t: T| t * t * t / three;
    let dt = t1 - t0;
    let m1 = p1(t1) - p1(t0);
    let m2 = p2(t1) - p2(t0);
    ([dt - m1, m1], [dt - two * m1 + m2, m1 - m2, m2])
}

fn build_cell<T: Real>(spec: &GridSpec<T>, config: &MediaConfig<T>, medium: Medium, ci: usize, cj: usize) -> Cell<T> {
    let half = T::of(0.5);
    let centre = [spec.coord(ci) + spec.h * half, spec.coord(cj) + spec.h * half];
    let cut = config.near_interface(centre, spec.h * T::of(0.75), medium);
    build_cell_with(spec, config, medium, ci, cj, if cut { CUT_CELL_SUBSAMPLES } else { CELL_SUBSAMPLES })
}

fn build_cell_with<T: Real>(
    spec: &GridSpec<T>,
    config: &MediaConfig<T>,
    medium: Medium,
    ci: usize,
    cj: usize,
    q: usize,
) -> Cell<T> {
    let h = spec.h;
    let (x0, y0) = (spec.coord(ci), spec.coord(cj));
    let one = C::new(T::one(), T::zero());
    let mut cell = Cell { uniform: true, ..Cell::default() };
    let mut first = None;
    let mut n_avg: C<T> = C::zero();
    let mut samples = Vec::with_capacity(q * q);
    let step = T::one() / T::of(q as f64);
    for sj in 0..q {
        let (t0, t1) = (T::of(sj as f64) * step, T::of(sj as f64 + 1.0) * step);
        let (ty1, ty2) = hat_moments(t0, t1);
        for si in 0..q {
            let (s0, s1) = (T::of(si as f64) * step, T::of(si as f64 + 1.0) * step);
            let (tx1, tx2) = hat_moments(s0, s1);
            let centre = [x0 + h * (s0 + s1) / T::of(2.0), y0 + h * (t0 + t1) / T::of(2.0)];
            let (a, n) = config.sample_coefficients(centre, medium);
            let [a11, a12, a22] = a.entries();
            cell.contrast |= a11 != one || !a12.is_zero() || a22 != one || n != one;
            let sample = (a11, a12, a22, n);
            cell.uniform &= *first.get_or_insert(sample) == sample;
            samples.push(([(s0 + s1) / T::of(2.0), (t0 + t1) / T::of(2.0)], [a11, a12, a22]));
            for b in 0..2 {
                cell.a11_edge[b] += a11 * (step * ty1[b]);
                cell.a22_edge[b] += a22 * (step * tx1[b]);
            }
            for b in 0..3 {
                cell.a11_full[b] += a11 * (step * ty2[b]);
                cell.a22_full[b] += a22 * (step * tx2[b]);
            }
            cell.a12 += a12 * (step * step);
            for c in 0..4 {
                cell.mass_corner[c] += n * (tx1[c & 1] * ty1[c >> 1]);
            }
            n_avg += n * (step * step);
        }
    }
    if !cell.uniform {
        if let Some(eff) = smoothed_tensor(&samples) {
            let m = T::of(samples.len() as f64);
            let mut shift = eff;
            for (_, a) in &samples {
                for (d, v) in shift.iter_mut().zip(a) {
                    *d -= v / m;
                }
            }
            let [d11, d12, d22] = shift;
            let (third, sixth) = (T::of(1.0 / 3.0), T::of(1.0 / 6.0));
            for b in 0..2 {
                cell.a11_edge[b] += d11 * T::of(0.5);
                cell.a22_edge[b] += d22 * T::of(0.5);
            }
            for (b, w) in [third, sixth, third].into_iter().enumerate() {
                cell.a11_full[b] += d11 * w;
                cell.a22_full[b] += d22 * w;
            }
            cell.a12 += d12;
            cell.shift = Some(shift);
        }
    }
    let half = T::of(0.5);
    let sx = spec.stretch(x0 + h * half);
    let sy = spec.stretch(y0 + h * half);
    let (r11, r22, m) = (sy / sx, sx / sy, sx * sy * config.k * config.k);
    cell.a11_edge = cell.a11_edge.map(|v| v * r11);
    cell.a11_full = cell.a11_full.map(|v| v * r11);
    cell.a22_edge = cell.a22_edge.map(|v| v * r22);
    cell.a22_full = cell.a22_full.map(|v| v * r22);
    cell.mass_corner = cell.mass_corner.map(|v| v * m);
    cell.mass = n_avg * m;
    cell
}

/// Effective tensor of a cell cut by an interface: in the frame of the
/// interface normal `ν`, average `τ(A) = [−1/a_νν, a_νt/a_νν; ·, a_tt − a_νt²/a_νν]`
/// and invert. For isotropic phases this is the harmonic mean across the
/// interface and the arithmetic mean along it. The normal is the first
/// moment of the indicator of the first sample's phase. `None` when the
/// samples carry no usable direction.
fn smoothed_tensor<T: Real>(samples: &[(Point<T>, [C<T>; 3])]) -> Option<[C<T>; 3]> {
    let first = samples.first()?.1;
    let m = T::of(samples.len() as f64);
    let phase: Vec<T> = samples.iter().map(|(_, a)| if *a == first { T::one() } else { T::zero() }).collect();
    let mean_phase = phase.iter().copied().sum::<T>() / m;
    let mut g = [T::zero(); 2];
    for ((p, _), &f) in samples.iter().zip(&phase) {
        g[0] += (p[0] - T::of(0.5)) * (f - mean_phase);
        g[1] += (p[1] - T::of(0.5)) * (f - mean_phase);
    }
    let len = (g[0] * g[0] + g[1] * g[1]).sqrt();
    if !(len > T::tol(1e-12) * m) {
        return None;
    }
    let (c, s) = (g[0] / len, g[1] / len);
    let (cc, ss, cs) = (c * c, s * s, c * s);
    let mut tau = [C::<T>::zero(); 3];
    for (_, [a11, a12, a22]) in samples {
        let ann = *a11 * cc + *a12 * (cs + cs) + *a22 * ss;
        let ant = (*a22 - *a11) * cs + *a12 * (cc - ss);
        let att = *a11 * ss - *a12 * (cs + cs) + *a22 * cc;
        tau[0] -= ann.inv();
        tau[1] += ant / ann;
        tau[2] += att - ant * ant / ann;
    }
    let [t_nn, t_nt, t_tt] = tau.map(|t| t / m);
    let bnn = -t_nn.inv();
    let bnt = -t_nt / t_nn;
    let btt = t_tt - t_nt * t_nt / t_nn;
    Some([
        bnn * cc - bnt * (cs + cs) + btt * ss,
        (bnn - btt) * cs + bnt * (cc - ss),
        bnn * ss + bnt * (cs + cs) + btt * cc,
    ])
}

fn source_points<T: Real>(
    spec: &GridSpec<T>,
    config: &MediaConfig<T>,
    medium: Medium,
    cell: (usize, usize),
    uniform: bool,
    shift: Option<[C<T>; 3]>,
) -> Vec<SourcePoint<T>> {
    let one = C::new(T::one(), T::zero());
    let rule: Vec<(T, T)> = if uniform {
        GAUSS4.iter().map(|&(t, w)| (T::of(t), T::of(w))).collect()
    } else {
        let q = SOURCE_SUBSAMPLES;
        (0..q).map(|i| (T::of((i as f64 + 0.5) / q as f64), T::one() / T::of(q as f64))).collect()
    };
    let (x0, y0) = (spec.coord(cell.0), spec.coord(cell.1));
    let mut out = Vec::new();
    for &(ty, wy) in &rule {
        for &(tx, wx) in &rule {
            let (a, n) = config.sample_coefficients([x0 + spec.h * tx, y0 + spec.h * ty], medium);
            let [mut a11, mut a12, mut a22] = a.entries();
            if let Some([d11, d12, d22]) = shift {
                a11 += d11;
                a12 += d12;
                a22 += d22;
            }
            let (b, dn) = ([a11 - one, a12, a22 - one], n - one);
            if b.iter().all(|v| v.is_zero()) && dn.is_zero() {
                continue;
            }
            out.push(SourcePoint { cell, t: [tx, ty], w: wx * wy, b, dn });
        }
    }
    out
}

/// Discretizes the selected medium and factorizes the banded matrix.
pub fn assemble_system<T: Real>(spec: &GridSpec<T>, config: &MediaConfig<T>, medium: Medium) -> Result<BandedSystem<T>> {
    spec.validate_for(config)?;
    config.validate(spec.h)?;
    let n = spec.nodes_per_axis();
    let nc = n - 1;
    let one = C::new(T::one(), T::zero());
    let cells: Vec<Cell<T>> =
        (0..nc * nc).into_par_iter().map(|idx| build_cell(spec, config, medium, idx % nc, idx / nc)).collect();

    let contrast_cells: Vec<usize> = (0..nc * nc).filter(|&c| cells[c].contrast).collect();
    let source = contrast_cells
        .par_iter()
        .flat_map_iter(|&c| source_points(spec, config, medium, (c % nc, c / nc), cells[c].uniform, cells[c].shift))
        .collect();
    let mut sys = BandedSystem {
        spec: *spec,
        medium,
        k: config.k,
        cells,
        source,
        lu: BandedLu::new(n * n, n + 1, n + 1),
        probe_residual: T::zero(),
    };
    let mut lu = BandedLu::new(n * n, n + 1, n + 1);
    for j in 0..n {
        for i in 0..n {
            let row = j * n + i;
            if sys.is_boundary(i, j) {
                lu.add(row, row, one);
                continue;
            }
            let s = sys.stencil_at(i, j);
            for (dy, srow) in s.iter().enumerate() {
                for (dx, &c) in srow.iter().enumerate() {
                    let (ii, jj) = (i + dx - 1, j + dy - 1);
                    if !sys.is_boundary(ii, jj) && !c.is_zero() {
                        lu.add(row, jj * n + ii, c);
                    }
                }
            }
        }
    }
    lu.factor()?;
    sys.lu = lu;

    let probe: Vec<C<T>> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx % n, idx / n);
            if sys.is_boundary(i, j) {
                C::zero()
            } else {
                let s = T::of(idx as f64);
                C::new((s * T::of(12.9898)).sin(), (s * T::of(78.233)).cos())
            }
        })
        .collect();
    let x = sys.solve(&probe)?;
    let r = sys.apply(&x.values);
    let num: T = r.iter().zip(&probe).map(|(a, b)| (a - b).norm_sqr()).sum::<T>().sqrt();
    let den: T = probe.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    sys.probe_residual = num / den;
    Ok(sys)
}

/// Scattered field for the incident plane wave `e^{ik x·d}`.
pub fn solve_plane_wave<T: Real>(system: &BandedSystem<T>, d: Point<T>) -> Result<ComplexGridField<T>> {
    let norm = d[0].hypot(d[1]);
    if (norm - T::one()).abs() > T::tol(1e-12) {
        return Err(Error::ConfigInvalid(format!("incident direction must be a unit vector, |d| = {norm}")));
    }
    let rhs = system.plane_wave_rhs(d);
    system.solve(&rhs)
}

/// Discrete Green's function: `L 𝔾 = −δ_z`. The delta is spread over the
/// bicubic interpolation stencil of `z` (weights `w/h²`), the transpose of
/// the interpolation used to evaluate fields off the nodes.
pub fn solve_point_source<T: Real>(system: &BandedSystem<T>, z: Point<T>) -> Result<ComplexGridField<T>> {
    solve_point_source_scaled(system, z, T::one())
}

pub(crate) fn solve_point_source_scaled<T: Real>(system: &BandedSystem<T>, z: Point<T>, amplitude: T) -> Result<ComplexGridField<T>> {
    let spec = system.spec();
    if !spec.inside_physical(z, T::of(4.0) * spec.h) {
        return Err(Error::PointInPml { x: z[0].to_f64_lossy(), y: z[1].to_f64_lossy() });
    }
    let ([bi, bj], [wx, wy]) =
        spec.cubic_stencil(z, 0).ok_or(Error::PointInPml { x: z[0].to_f64_lossy(), y: z[1].to_f64_lossy() })?;
    let mut delta = vec![C::zero(); spec.node_count()];
    let scale = -amplitude / (spec.h * spec.h);
    for (b, &wyb) in wy.iter().enumerate() {
        for (a, &wxa) in wx.iter().enumerate() {
            delta[spec.index(bi + a, bj + b)] = C::new(scale * wxa * wyb, T::zero());
        }
    }
    system.solve(&system.apply_mass(&delta))
}
