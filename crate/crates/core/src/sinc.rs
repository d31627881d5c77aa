//! Sinc machinery on the half line `(0, inf)`.
//!
//! The half line is carried onto the real axis by the conformal map
//! `phi(w) = ln(sinh w)` with inverse `psi(z) = asinh(e^z)`. A grid of step
//! `a` on the real axis pulls back to the sinc points `x_m = psi(m a)`,
//! `m = -M..=N`.
//!
//! Logical indices `m` run from `-M` to `N`; storage offsets are `m + M`.
//! Every vector indexed "over the grid" (nodal values, `phi'` and so on)
//! follows this convention.

use std::f64::consts::{LN_2, PI};

use faer::Mat;

use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};

/// `S(m, a)(x) = sin(pi (x - m a) / a) / (pi (x - m a) / a)`.
pub fn sinc_basis(m: i64, a: f64, x: f64) -> f64 {
    sinc((x - m as f64 * a) / a)
}

/// Normalized cardinal sine, `sin(pi u) / (pi u)`, equal to 1 at `u = 0`.
pub fn sinc(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        let pu = PI * u;
        pu.sin() / pu
    }
}

/// `phi(w) = ln(sinh(w))`, mapping `(0, inf)` onto the real line.
pub fn map_forward(w: f64) -> Result<f64> {
    if w <= 0.0 || !w.is_finite() {
        return Err(Error::Domain {
            what: "map_forward",
            value: w,
        });
    }
    if w > 0.5 {
        // ln(sinh w) = w - ln 2 + ln(1 - e^{-2w}); sinh overflows past w ~ 710.
        Ok(w - LN_2 + (-(-2.0 * w).exp()).ln_1p())
    } else {
        Ok(w.sinh().ln())
    }
}

/// `psi(z) = asinh(e^z)`, the inverse of [`map_forward`].
///
/// Split into three branches so that neither `e^z` nor `e^{2z}` is ever
/// formed where it could overflow or cancel.
pub fn map_inverse(z: f64) -> f64 {
    if z > 30.0 {
        z + (1.0 + (1.0 + (-2.0 * z).exp()).sqrt()).ln()
    } else if z < -30.0 {
        // asinh(y) = y - y^3/6 + ...; y^2 < 1e-26 here.
        z.exp()
    } else {
        let y = z.exp();
        let h = y.hypot(1.0);
        if z >= 0.0 {
            (y + h).ln()
        } else {
            (y + y * y / (1.0 + h)).ln_1p()
        }
    }
}

/// `phi'(x) = coth(x)` at an arbitrary point of the half line.
pub fn map_derivative(x: f64) -> f64 {
    1.0 / x.tanh()
}

/// `phi''(x) = -1 / sinh(x)^2` at an arbitrary point of the half line.
pub fn map_second_derivative(x: f64) -> f64 {
    let s = x.sinh();
    -1.0 / (s * s)
}

/// Quantities at the sinc point `m` of a grid with step `a`, computed from
/// closed forms: `x_m = psi(m a)`, `e^{-2 m a}`, `phi'(x_m) = sqrt(1 + e^{-2ma})`
/// and `phi''(x_m) = -e^{-2ma}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SincNode {
    pub x: f64,
    pub decay: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl SincNode {
    pub fn at(m: i64, a: f64) -> Self {
        let t = m as f64 * a;
        let decay = (-2.0 * t).exp();
        Self {
            x: map_inverse(t),
            decay,
            phi1: (1.0 + decay).sqrt(),
            phi2: -decay,
        }
    }

    fn is_finite(&self) -> bool {
        self.x.is_finite() && self.decay.is_finite() && self.phi1.is_finite() && self.x > 0.0
    }
}

/// Mapped sinc discretization of `(0, inf)`.
///
/// Built from the growth exponents of the target function: `|f(x)| <= C x^alpha`
/// near the origin and `<= C e^{-beta x}` at infinity. The counts and step
/// follow the usual balancing rule `N = ceil(alpha M / beta)`,
/// `a = sqrt(2 pi d / (alpha M))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SincGrid {
    alpha: f64,
    beta: f64,
    d: f64,
    lower: usize,
    upper: usize,
    step: f64,
    points: Vec<f64>,
    decay: Vec<f64>,
    phi1: Vec<f64>,
    phi2: Vec<f64>,
}

impl SincGrid {
    pub fn new(alpha: f64, beta: f64, d: f64, m: usize) -> Result<Self> {
        Self::with_execution(alpha, beta, d, m, Execution::default())
    }

    pub fn with_execution(alpha: f64, beta: f64, d: f64, m: usize, exec: Execution) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(invalid("alpha", format!("must be positive and finite, got {alpha}")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(invalid("beta", format!("must be positive and finite, got {beta}")));
        }
        if !(d > 0.0 && d <= PI / 2.0) {
            return Err(invalid("d", format!("must lie in (0, pi/2], got {d}")));
        }
        if m == 0 {
            return Err(invalid("M", "must be at least 1".to_string()));
        }

        let upper = ceil_count(alpha / beta * m as f64);
        let step = (2.0 * PI * d / (alpha * m as f64)).sqrt();
        let step_limit = 2.0 * PI * d / LN_2;
        if step > step_limit {
            return Err(invalid(
                "a",
                format!("step {step} exceeds 2 pi d / ln 2 = {step_limit}"),
            ));
        }

        let lower = m as i64;
        let len = m + upper + 1;
        let nodes = map_indexed(exec, len, |i| SincNode::at(i as i64 - lower, step));
        if let Some(i) = nodes.iter().position(|n| !n.is_finite()) {
            return Err(Error::NonFinite {
                what: "sinc grid",
                index: i as i64 - lower,
            });
        }

        Ok(Self {
            alpha,
            beta,
            d,
            lower: m,
            upper,
            step,
            points: nodes.iter().map(|n| n.x).collect(),
            decay: nodes.iter().map(|n| n.decay).collect(),
            phi1: nodes.iter().map(|n| n.phi1).collect(),
            phi2: nodes.iter().map(|n| n.phi2).collect(),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// `M`: the lowest logical index is `-M`.
    pub fn lower(&self) -> usize {
        self.lower
    }

    /// `N`: the highest logical index.
    pub fn upper(&self) -> usize {
        self.upper
    }

    /// Step `a` on the real line.
    pub fn step(&self) -> f64 {
        self.step
    }

    /// Number of sinc points, `M + N + 1`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Logical indices `-M..=N` in storage order.
    pub fn indices(&self) -> impl Iterator<Item = i64> + '_ {
        let lo = -(self.lower as i64);
        (0..self.len()).map(move |i| i as i64 + lo)
    }

    /// Logical index of storage offset `i`.
    pub fn index_of(&self, offset: usize) -> i64 {
        offset as i64 - self.lower as i64
    }

    /// Storage offset of logical index `m`, if it lies on the grid.
    pub fn offset_of(&self, m: i64) -> Option<usize> {
        let i = m + self.lower as i64;
        (0..self.len() as i64).contains(&i).then_some(i as usize)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// `e^{-2 m a}` at each sinc point.
    pub fn decay(&self) -> &[f64] {
        &self.decay
    }

    /// `phi'(x_m)`.
    pub fn phi1(&self) -> &[f64] {
        &self.phi1
    }

    /// `phi''(x_m)`.
    pub fn phi2(&self) -> &[f64] {
        &self.phi2
    }

    /// Closed-form node data at any logical index, on or off the grid.
    pub fn node(&self, m: i64) -> SincNode {
        SincNode::at(m, self.step)
    }
}

fn invalid(name: &'static str, reason: String) -> Error {
    Error::InvalidParameter { name, reason }
}

// ceil() of a product that should be an integer can land one ulp above it
// (e.g. 4.5 * 100 = 450.00000000000006); snap those back before rounding up.
fn ceil_count(r: f64) -> usize {
    let nearest = r.round();
    if (r - nearest).abs() <= 1e-9 * r.abs().max(1.0) {
        nearest as usize
    } else {
        r.ceil() as usize
    }
}

/// Entry of the first-derivative Toeplitz matrix for index difference `k = m - n`:
/// `0` on the diagonal, `(-1)^k / k` elsewhere.
pub fn delta1(k: i64) -> f64 {
    if k == 0 {
        0.0
    } else {
        sign_pow(k) / k as f64
    }
}

/// Entry of the second-derivative Toeplitz matrix for index difference `k = m - n`:
/// `-pi^2/3` on the diagonal, `2 (-1)^{k+1} / k^2` elsewhere.
pub fn delta2(k: i64) -> f64 {
    if k == 0 {
        -PI * PI / 3.0
    } else {
        let kf = k as f64;
        -2.0 * sign_pow(k) / (kf * kf)
    }
}

fn sign_pow(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The three Toeplitz matrices, dense, indexed `(n + M, m + M)`.
#[derive(Debug, Clone)]
pub struct DeltaMatrices {
    pub d0: Mat<f64>,
    pub d1: Mat<f64>,
    pub d2: Mat<f64>,
}

impl DeltaMatrices {
    pub fn new(grid: &SincGrid) -> Self {
        Self::with_execution(grid, Execution::default())
    }

    pub fn with_execution(grid: &SincGrid, exec: Execution) -> Self {
        let k = grid.len();
        // Entries depend only on m - n; tabulate once and copy out.
        let span = k as i64;
        let d1_tab = map_indexed(exec, 2 * k - 1, |i| delta1(i as i64 - span + 1));
        let d2_tab = map_indexed(exec, 2 * k - 1, |i| delta2(i as i64 - span + 1));
        let at = |tab: &[f64], n: usize, m: usize| tab[m + k - 1 - n];
        Self {
            d0: Mat::identity(k, k),
            d1: Mat::from_fn(k, k, |n, m| at(&d1_tab, n, m)),
            d2: Mat::from_fn(k, k, |n, m| at(&d2_tab, n, m)),
        }
    }

    pub fn size(&self) -> usize {
        self.d0.nrows()
    }
}

/// Free-function spelling of [`DeltaMatrices::new`].
pub fn build_deltas(grid: &SincGrid) -> DeltaMatrices {
    DeltaMatrices::new(grid)
}

/// Sinc interpolant `sum_m values[m] S(m, a)(phi(x))`.
///
/// At a stored sinc point the nodal value is returned exactly.
pub fn interpolate(grid: &SincGrid, values: &[f64], x: f64) -> Result<f64> {
    if values.len() != grid.len() {
        return Err(Error::LengthMismatch {
            expected: grid.len(),
            found: values.len(),
        });
    }
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain {
            what: "interpolate",
            value: x,
        });
    }
    if let Ok(i) = grid.points.binary_search_by(|p| p.total_cmp(&x)) {
        return Ok(values[i]);
    }

    let t = map_forward(x)? / grid.step;
    // sin(pi (t - m)) = (-1)^(t0 - m) sin(pi frac) with t = t0 + frac, which
    // avoids reducing a large argument once per term.
    let t0 = t.floor();
    let frac = t - t0;
    if frac == 0.0 {
        return Ok(grid
            .offset_of(t0 as i64)
            .map(|i| values[i])
            .unwrap_or(0.0));
    }
    let s = (PI * frac).sin() / PI;
    let t0i = t0 as i64;
    let mut sum = 0.0;
    for (i, &v) in values.iter().enumerate() {
        let m = grid.index_of(i);
        let u = (t0i - m) as f64 + frac;
        sum += v * sign_pow(t0i - m) * s / u;
    }
    Ok(sum)
}

/// Sinc quadrature `a sum_m F(x_m) / phi'(x_m)` for `int_0^inf F(x) dx`.
///
/// The integrand is expected to satisfy `|F| <= C x^{alpha - 1}` near zero and
/// `<= C e^{-beta x}` at infinity for the grid's `alpha`, `beta`; that is the
/// caller's business.
pub fn quadrature<F>(grid: &SincGrid, integrand: F) -> Result<f64>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    quadrature_with(grid, integrand, Execution::default())
}

pub fn quadrature_with<F>(grid: &SincGrid, integrand: F, exec: Execution) -> Result<f64>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let samples = map_slice_points(grid, &integrand, exec);
    quadrature_nodal(grid, &samples)
}

fn map_slice_points<F>(grid: &SincGrid, f: &F, exec: Execution) -> Vec<f64>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    map_indexed(exec, grid.len(), |i| f(grid.points[i]))
}

/// Sinc quadrature from integrand values already sampled at the sinc points.
pub fn quadrature_nodal(grid: &SincGrid, samples: &[f64]) -> Result<f64> {
    if samples.len() != grid.len() {
        return Err(Error::LengthMismatch {
            expected: grid.len(),
            found: samples.len(),
        });
    }
    let mut sum = 0.0;
    for (i, (&s, &p1)) in samples.iter().zip(&grid.phi1).enumerate() {
        if !s.is_finite() {
            return Err(Error::NonFinite {
                what: "quadrature integrand",
                index: grid.index_of(i),
            });
        }
        sum += s / p1;
    }
    Ok(grid.step * sum)
}
