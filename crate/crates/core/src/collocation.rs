//! Sinc collocation of `-f'' + q(x) f = lambda f` on `(0, inf)`.
//!
//! [`CollocationProblem::assemble`] builds the dense matrix
//!
//! ```text
//! A[n][m] = q(x_m) d0[n][m] + (e^{-2ma} / a) d1[n][m] - ((1 + e^{-2ma}) / a^2) d2[n][m]
//! ```
//!
//! with the exponential prefactors attached to the column index `m`. This
//! matrix is the transpose of the operator that maps nodal values `f(x_m)` to
//! `(-f'' + q f)(x_n)`, so it has the right spectrum while the nodal values of
//! an eigenfunction are its *left* eigenvectors. [`solve`] works on that
//! transposed operator, row-scaled by `1 / phi'(x_n)^2` so the entries stay
//! O(1/a^2) even where `e^{-2na}` is astronomically large, and runs the dense
//! eigensolver on the shift-inverted pencil.

use std::fmt;
use std::sync::Arc;

use faer::linalg::solvers::Solve;
use faer::{Mat, MatRef};
use num_complex::Complex64;

use crate::eig::{eig, inf_norm, RESIDUAL_TOLERANCE};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::sinc::{delta1, delta2, interpolate, SincGrid};

/// Relative bound on `|Im lambda|` for an eigenvalue to count as real.
pub const REALITY_TOLERANCE: f64 = 1e-8;

/// Shift-inverted eigenvalues below this fraction of the largest one are
/// round-off images of the far end of the spectrum and are dropped.
pub const UNRESOLVED_RATIO: f64 = 1e-10;

/// Default shift for the shift-invert transform.
pub const DEFAULT_SHIFT: f64 = -1.0;

/// A real function on the half line.
#[derive(Clone)]
pub struct Potential(Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl Potential {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.0)(x)
    }
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Potential(..)")
    }
}

/// How the sinc sum is closed at the origin.
#[derive(Debug, Clone)]
pub enum OriginTreatment {
    /// Plain truncation of the sum at `m = -M`.
    Truncated,
    /// For `q(x) = -1/(4x^2) + V(x)`, where both `sqrt(x)` and `sqrt(x) ln x`
    /// are admissible at the origin. The state is written as
    /// `f = sqrt(x) (c sech(x) + sum_m v_m S(m,a)(phi(x)))`, which admits only
    /// the regular branch. One extra collocation row at `x_{-M-1}` closes the
    /// system for the extra unknown `c`.
    RegularOrigin { smooth: Potential },
}

#[derive(Debug, Clone)]
pub struct CollocationProblem {
    grid: SincGrid,
    potential: Potential,
    origin: OriginTreatment,
    matrix: Mat<f64>,
    exec: Execution,
}

impl CollocationProblem {
    /// Collocation of `-f'' + q f` with the sum truncated at `-M`.
    pub fn assemble(grid: SincGrid, potential: Potential) -> Result<Self> {
        Self::assemble_with(grid, potential, OriginTreatment::Truncated, Execution::default())
    }

    /// Collocation of `-f'' + (-1/(4x^2) + smooth(x)) f` with the regular
    /// closure at the origin.
    pub fn assemble_regular_origin(grid: SincGrid, smooth: Potential) -> Result<Self> {
        let v = smooth.clone();
        let potential = Potential::new(move |x| -0.25 / (x * x) + v.eval(x));
        Self::assemble_with(
            grid,
            potential,
            OriginTreatment::RegularOrigin { smooth },
            Execution::default(),
        )
    }

    pub fn assemble_with(
        grid: SincGrid,
        potential: Potential,
        origin: OriginTreatment,
        exec: Execution,
    ) -> Result<Self> {
        let q = sample(&grid, &potential, "potential", exec)?;
        if let OriginTreatment::RegularOrigin { smooth } = &origin {
            sample(&grid, smooth, "smooth potential", exec)?;
        }
        let matrix = literal_matrix(&grid, &q, exec);
        Ok(Self {
            grid,
            potential,
            origin,
            matrix,
            exec,
        })
    }

    pub fn grid(&self) -> &SincGrid {
        &self.grid
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn origin(&self) -> &OriginTreatment {
        &self.origin
    }

    /// The collocation matrix `I0 + I1 + I2`, indexed `(n + M, m + M)`.
    pub fn matrix(&self) -> MatRef<'_, f64> {
        self.matrix.as_ref()
    }

    pub fn execution(&self) -> Execution {
        self.exec
    }

    /// Row-scaled operator pencil `(A, B)` whose right eigenvectors carry the
    /// state; see [`OriginTreatment`] for the unknowns in each case.
    ///
    /// For [`OriginTreatment::Truncated`] this is `(W A^T, W)` with
    /// `W = diag(1 / phi'(x_n)^2)`, built directly from the grid.
    pub fn scaled_pencil(&self) -> (Mat<f64>, Mat<f64>) {
        match &self.origin {
            OriginTreatment::Truncated => truncated_pencil(&self.grid, &self.potential, self.exec),
            OriginTreatment::RegularOrigin { smooth } => regular_pencil(&self.grid, smooth, self.exec),
        }
    }
}

fn sample(grid: &SincGrid, f: &Potential, what: &'static str, exec: Execution) -> Result<Vec<f64>> {
    let q = map_indexed(exec, grid.len(), |i| f.eval(grid.points()[i]));
    match q.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite {
            what,
            index: grid.index_of(i),
        }),
        None => Ok(q),
    }
}

fn literal_matrix(grid: &SincGrid, q: &[f64], exec: Execution) -> Mat<f64> {
    let k = grid.len();
    let a = grid.step();
    let columns = map_indexed(exec, k, |j| {
        let m = grid.index_of(j);
        let e = grid.decay()[j];
        let c1 = e / a;
        let c2 = (1.0 + e) / (a * a);
        (0..k)
            .map(|i| {
                let km = m - grid.index_of(i);
                let diag = if km == 0 { q[j] } else { 0.0 };
                diag + c1 * delta1(km) - c2 * delta2(km)
            })
            .collect::<Vec<f64>>()
    });
    Mat::from_fn(k, k, |i, j| columns[j][i])
}

fn truncated_pencil(grid: &SincGrid, potential: &Potential, exec: Execution) -> (Mat<f64>, Mat<f64>) {
    let k = grid.len();
    let a = grid.step();
    let rows = map_indexed(exec, k, |i| {
        let n = grid.index_of(i);
        let e = grid.decay()[i];
        let w = 1.0 / (1.0 + e);
        let g = e / (1.0 + e);
        let q = potential.eval(grid.points()[i]);
        (0..k)
            .map(|j| {
                let km = grid.index_of(j) - n;
                let diag = if km == 0 { q * w } else { 0.0 };
                diag - delta2(km) / (a * a) - g * delta1(km) / a
            })
            .collect::<Vec<f64>>()
    });
    let a_hat = Mat::from_fn(k, k, |i, j| rows[i][j]);
    let b_hat = Mat::from_fn(k, k, |i, j| if i == j { 1.0 / (1.0 + grid.decay()[i]) } else { 0.0 });
    (a_hat, b_hat)
}

fn sech_parts(x: f64) -> (f64, f64, f64) {
    let s = 1.0 / x.cosh();
    let t = x.tanh();
    (s, -s * t, s * (1.0 - 2.0 * s * s))
}

// Unknowns (c, v_{-M}, ..., v_N) for R = f / sqrt(x) = c sech(x) + sum v_m S_m;
// rows are collocation points x_{-M-1}, ..., x_N of
// -R'' - R'/x + V R = lambda R, each scaled by 1 / phi'(x_n)^2.
fn regular_pencil(grid: &SincGrid, smooth: &Potential, exec: Execution) -> (Mat<f64>, Mat<f64>) {
    let k = grid.len();
    let a = grid.step();
    let first = -(grid.lower() as i64) - 1;
    let rows = map_indexed(exec, k + 1, |r| {
        let n = first + r as i64;
        let node = grid.node(n);
        let x = node.x;
        let w = 1.0 / (1.0 + node.decay);
        let g = node.decay / (1.0 + node.decay);
        // w (phi'' + phi'/x), the first-derivative weight after scaling.
        let drift = 1.0 / (node.phi1 * x) - g;
        let v = smooth.eval(x);
        let (om, om1, om2) = sech_parts(x);

        let mut a_row = vec![0.0; k + 1];
        let mut b_row = vec![0.0; k + 1];
        a_row[0] = w * (-om2 - om1 / x + v * om);
        b_row[0] = w * om;
        for j in 0..k {
            let km = grid.index_of(j) - n;
            let diag = if km == 0 { v * w } else { 0.0 };
            a_row[j + 1] = diag - delta2(km) / (a * a) + drift * delta1(km) / a;
            if km == 0 {
                b_row[j + 1] = w;
            }
        }
        (a_row, b_row)
    });
    let a_hat = Mat::from_fn(k + 1, k + 1, |i, j| rows[i].0[j]);
    let b_hat = Mat::from_fn(k + 1, k + 1, |i, j| rows[i].1[j]);
    (a_hat, b_hat)
}

/// One eigenpair of the collocation problem.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub lambda: f64,
    /// Nodal values `f(x_m)`, `m = -M..=N`, scaled so the largest magnitude
    /// entry is exactly `+1`.
    pub coefficients: Vec<f64>,
    /// Relative residual of the pair against the scaled operator pencil.
    pub residual: f64,
    /// `|Im lambda|` before the eigenvalue was taken as real.
    pub imag_leak: f64,
    /// The solver's own representation of `f / sqrt(x)` for problems with
    /// the regular origin closure; scaled consistently with `coefficients`.
    pub regular: Option<RegularPart>,
}

/// `f(x) / sqrt(x) = c sech(x) + sum_m v_m S(m,a)(phi(x))`.
///
/// Dividing the interpolant of `f` by `sqrt(x)` near the first sinc point
/// magnifies its truncation error; this form has no such division.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularPart {
    pub c: f64,
    pub v: Vec<f64>,
}

impl RegularPart {
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            c: self.c * s,
            v: self.v.iter().map(|v| v * s).collect(),
        }
    }

    /// `f(x) / sqrt(x)`.
    pub fn evaluate(&self, grid: &SincGrid, x: f64) -> Result<f64> {
        Ok(self.c / x.cosh() + interpolate(grid, &self.v, x)?)
    }
}

/// Result of [`solve_detailed`]: the selected pairs plus bookkeeping on what
/// was filtered out.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub pairs: Vec<EigenPair>,
    /// Eigenvalues dropped because their imaginary part was too large.
    pub complex_discarded: usize,
    /// Eigenvalues dropped as unresolved after shift-invert.
    pub unresolved_discarded: usize,
    pub shift: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub shift: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { shift: DEFAULT_SHIFT }
    }
}

/// The `count` smallest real eigenpairs, ascending.
pub fn solve(problem: &CollocationProblem, count: usize) -> Result<Vec<EigenPair>> {
    Ok(solve_detailed(problem, count, SolveOptions::default())?.pairs)
}

pub fn solve_detailed(problem: &CollocationProblem, count: usize, opts: SolveOptions) -> Result<Spectrum> {
    let grid = problem.grid();
    if count == 0 || count > grid.len() {
        return Err(Error::InvalidParameter {
            name: "count",
            reason: format!("must lie in 1..={}, got {count}", grid.len()),
        });
    }
    let sigma = opts.shift;
    let (a_hat, b_hat) = problem.scaled_pencil();
    let dim = a_hat.nrows();

    let shifted = Mat::from_fn(dim, dim, |i, j| a_hat[(i, j)] - sigma * b_hat[(i, j)]);
    let c = shifted.partial_piv_lu().solve(&b_hat);
    if (0..dim).any(|j| (0..dim).any(|i| !c[(i, j)].is_finite())) {
        return Err(Error::SingularShift { shift: sigma });
    }
    let dec = eig(c.as_ref())?;

    let mu_max = dec.eigenvalues.iter().map(|m| m.norm()).fold(0.0, f64::max);
    let mut unresolved = 0;
    let mut complex = 0;
    let mut candidates: Vec<(f64, f64, usize)> = Vec::new();
    for (j, &mu) in dec.eigenvalues.iter().enumerate() {
        if mu.norm() <= UNRESOLVED_RATIO * mu_max {
            unresolved += 1;
            continue;
        }
        let lam = Complex64::new(sigma, 0.0) + mu.inv();
        if lam.im.abs() > REALITY_TOLERANCE * lam.re.abs().max(1.0) {
            complex += 1;
            continue;
        }
        candidates.push((lam.re, lam.im.abs(), j));
    }
    if candidates.len() < count {
        return Err(Error::TooFewReal {
            requested: count,
            survived: candidates.len(),
        });
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0));

    let a_norm = inf_norm(a_hat.as_ref());
    let b_norm = inf_norm(b_hat.as_ref());
    let mut pairs = map_indexed(problem.execution(), count, |s| {
        let (lambda, imag_leak, j) = candidates[s];
        let z = realize(&dec.vector(j));
        let residual = pencil_residual(a_hat.as_ref(), b_hat.as_ref(), a_norm, b_norm, lambda, &z);
        let mut coefficients = nodal_values(problem, &z);
        let scale = apply_sign_convention(&mut coefficients);
        let regular = match problem.origin() {
            OriginTreatment::Truncated => None,
            OriginTreatment::RegularOrigin { .. } => Some(
                RegularPart {
                    c: z[0],
                    v: z[1..].to_vec(),
                }
                .scaled(scale.recip()),
            ),
        };
        EigenPair {
            lambda,
            coefficients,
            residual,
            imag_leak,
            regular,
        }
    })
    .into_iter()
    .enumerate()
    .map(|(index, p)| {
        if p.coefficients.iter().all(|&v| v == 0.0) || p.residual.is_nan() || p.residual > RESIDUAL_TOLERANCE {
            return Err(Error::Residual {
                index,
                residual: p.residual,
                tolerance: RESIDUAL_TOLERANCE,
            });
        }
        Ok(p)
    })
    .collect::<Result<Vec<_>>>()?;

    pairs.sort_by(|x, y| {
        x.lambda.total_cmp(&y.lambda).then_with(|| {
            x.coefficients
                .iter()
                .zip(&y.coefficients)
                .map(|(a, b)| a.total_cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });

    Ok(Spectrum {
        pairs,
        complex_discarded: complex,
        unresolved_discarded: unresolved,
        shift: sigma,
    })
}

// Rotate a complex eigenvector so its largest component is real and positive,
// then keep the real part.
fn realize(v: &[Complex64]) -> Vec<f64> {
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(Complex64::new(1.0, 0.0));
    let phase = pivot.conj() / pivot.norm();
    v.iter().map(|c| (c * phase).re).collect()
}

fn pencil_residual(a: MatRef<'_, f64>, b: MatRef<'_, f64>, a_norm: f64, b_norm: f64, lambda: f64, z: &[f64]) -> f64 {
    let col = Mat::from_fn(z.len(), 1, |i, _| z[i]);
    let az = a * &col;
    let bz = b * &col;
    let res = (0..z.len())
        .map(|i| (az[(i, 0)] - lambda * bz[(i, 0)]).abs())
        .fold(0.0, f64::max);
    let znorm = z.iter().map(|v| v.abs()).fold(0.0, f64::max);
    res / ((a_norm + lambda.abs() * b_norm) * znorm)
}

fn nodal_values(problem: &CollocationProblem, z: &[f64]) -> Vec<f64> {
    let grid = problem.grid();
    match problem.origin() {
        OriginTreatment::Truncated => z.to_vec(),
        OriginTreatment::RegularOrigin { .. } => {
            let c = z[0];
            grid.points()
                .iter()
                .zip(&z[1..])
                .map(|(&x, &v)| x.sqrt() * (c / x.cosh() + v))
                .collect()
        }
    }
}

/// Scale to unit max-norm with the largest-magnitude entry positive.
/// Returns the divisor used (1 for an empty or zero vector).
pub fn apply_sign_convention(values: &mut [f64]) -> f64 {
    let pivot = values
        .iter()
        .copied()
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
        .unwrap_or(0.0);
    if pivot == 0.0 {
        return 1.0;
    }
    for v in values.iter_mut() {
        *v /= pivot;
    }
    pivot
}

/// `f(x)` from an eigenpair: the sinc interpolant of the nodal values, or
/// `sqrt(x)` times the regular-closure form when the pair carries one.
pub fn reconstruct(grid: &SincGrid, pair: &EigenPair, x: f64) -> Result<f64> {
    match &pair.regular {
        None => interpolate(grid, &pair.coefficients, x),
        Some(r) => Ok(x.sqrt() * r.evaluate(grid, x)?),
    }
}
