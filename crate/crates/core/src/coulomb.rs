//! The logarithmic Coulomb problem in two space dimensions:
//!
//! ```text
//! -R'' - R'/x + (l^2 / x^2) R + ln(x) R = lambda R,    f = sqrt(x) R,
//! ```
//!
//! solved for `f` with potential `(4l^2 - 1)/(4x^2) + ln x`. Energies are also
//! reported as `lambda' = lambda + gamma + ln 2`.

use std::f64::consts::{FRAC_PI_4, LN_2};

use crate::collocation::{
    solve_detailed, CollocationProblem, EigenPair, OriginTreatment, Potential, RegularPart, SolveOptions,
};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, map_slice, Execution};
use crate::sinc::{interpolate, quadrature_nodal, SincGrid};

pub const EULER_GAMMA: f64 = 0.5772156649015329;

/// `lambda' - lambda`.
pub const LAMBDA_SHIFT: f64 = EULER_GAMMA + LN_2;

pub fn lambda_prime(lambda: f64) -> f64 {
    lambda + LAMBDA_SHIFT
}

/// Origin closure selection for [`flagship_problem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Origin {
    /// Regular closure for `l = 0`, plain truncation otherwise.
    #[default]
    Auto,
    /// Plain truncation for every `l`.
    Truncated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub d: f64,
    pub beta: f64,
    pub m: usize,
    pub origin: Origin,
    pub exec: Execution,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            d: FRAC_PI_4,
            beta: 1.0,
            m: 500,
            origin: Origin::Auto,
            exec: Execution::default(),
        }
    }
}

impl Settings {
    pub fn with_m(self, m: usize) -> Self {
        Self { m, ..self }
    }
}

/// `(4l^2 - 1)/(4x^2) + ln x`.
pub fn flagship_potential(l: u32) -> Potential {
    let c = (4.0 * f64::from(l) * f64::from(l) - 1.0) / 4.0;
    Potential::new(move |x: f64| c / (x * x) + x.ln())
}

pub fn flagship_problem(l: u32, settings: &Settings) -> Result<CollocationProblem> {
    if !(0.5..=1.0).contains(&settings.beta) {
        return Err(Error::InvalidParameter {
            name: "beta",
            reason: format!("must lie in [0.5, 1], got {}", settings.beta),
        });
    }
    let alpha = f64::from(l) + 0.5;
    let grid = SincGrid::with_execution(alpha, settings.beta, settings.d, settings.m, settings.exec)?;
    let regular = l == 0 && settings.origin == Origin::Auto;
    if regular {
        let smooth = Potential::new(f64::ln);
        let v = smooth.clone();
        let full = Potential::new(move |x| -0.25 / (x * x) + v.eval(x));
        CollocationProblem::assemble_with(grid, full, OriginTreatment::RegularOrigin { smooth }, settings.exec)
    } else {
        CollocationProblem::assemble_with(grid, flagship_potential(l), OriginTreatment::Truncated, settings.exec)
    }
}

/// A normalized bound state.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    pub l: u32,
    pub n: usize,
    pub lambda: f64,
    pub lambda_prime: f64,
    pub grid: SincGrid,
    /// `f(x_m)`, scaled so that the integral of `R^2` over `(0, inf)` is 1.
    pub coefficients: Vec<f64>,
    /// Regular-closure form of `R`, present for `l = 0` with [`Origin::Auto`].
    pub regular: Option<RegularPart>,
    pub norm_residual: f64,
    /// Relative eigen residual of the underlying pair.
    pub residual: f64,
    pub imag_leak: f64,
}

impl RadialSolution {
    /// `R(x) = f(x) / sqrt(x)`.
    pub fn evaluate_r(&self, x: f64) -> Result<f64> {
        match &self.regular {
            None => Ok(interpolate(&self.grid, &self.coefficients, x)? / x.sqrt()),
            Some(r) => r.evaluate(&self.grid, x),
        }
    }

    /// `f(x)`.
    pub fn evaluate_f(&self, x: f64) -> Result<f64> {
        match &self.regular {
            None => interpolate(&self.grid, &self.coefficients, x),
            Some(r) => Ok(x.sqrt() * r.evaluate(&self.grid, x)?),
        }
    }
}

/// Quadrature of `R^2 = f^2 / x` at the sinc points of `grid`.
pub fn norm_squared(grid: &SincGrid, coefficients: &[f64]) -> Result<f64> {
    if coefficients.len() != grid.len() {
        return Err(Error::LengthMismatch {
            expected: grid.len(),
            found: coefficients.len(),
        });
    }
    let samples: Vec<f64> = coefficients
        .iter()
        .zip(grid.points())
        .map(|(f, x)| f * f / x)
        .collect();
    quadrature_nodal(grid, &samples)
}

/// Scale an eigenpair so that the integral of `R^2` is 1.
pub fn normalize(l: u32, n: usize, pair: &EigenPair, grid: &SincGrid) -> Result<RadialSolution> {
    let norm2 = norm_squared(grid, &pair.coefficients)?;
    if !(norm2.is_finite() && norm2 > 0.0) {
        return Err(Error::BadNorm { norm: norm2.sqrt() });
    }
    let scale = norm2.sqrt().recip();
    let coefficients: Vec<f64> = pair.coefficients.iter().map(|v| v * scale).collect();
    let norm_residual = (norm_squared(grid, &coefficients)?.sqrt() - 1.0).abs();
    Ok(RadialSolution {
        l,
        n,
        lambda: pair.lambda,
        lambda_prime: lambda_prime(pair.lambda),
        grid: grid.clone(),
        coefficients,
        regular: pair.regular.as_ref().map(|r| r.scaled(scale)),
        norm_residual,
        residual: pair.residual,
        imag_leak: pair.imag_leak,
    })
}

/// The `count` lowest normalized states for angular momentum `l`.
pub fn solve_states(l: u32, count: usize, settings: &Settings) -> Result<Vec<RadialSolution>> {
    let problem = flagship_problem(l, settings)?;
    let spectrum = solve_detailed(&problem, count, SolveOptions::default())?;
    spectrum
        .pairs
        .iter()
        .enumerate()
        .map(|(n, pair)| normalize(l, n, pair, problem.grid()))
        .collect()
}

/// States for one value of `l`.
#[derive(Debug, Clone)]
pub struct LevelSet {
    pub l: u32,
    pub states: Vec<RadialSolution>,
}

/// `count` states for each `l` in `ls`, in the order given. Independent `l`
/// values are solved concurrently in parallel mode.
pub fn eigen_table(ls: &[u32], count: usize, settings: &Settings) -> Result<Vec<LevelSet>> {
    map_slice(settings.exec, ls, |&l| {
        solve_states(l, count, settings).map(|states| LevelSet { l, states })
    })
    .into_iter()
    .collect()
}

/// Norm of `R` re-integrated on an independent grid with `m` lower points.
///
/// `f` is carried over by [`RadialSolution::evaluate_f`]; the fresh grid uses the origin
/// exponent `2l + 1` of `R^2 x` and twice the decay rate.
pub fn norm_on_grid(solution: &RadialSolution, m: usize, exec: Execution) -> Result<f64> {
    let old = &solution.grid;
    let alpha = 2.0 * f64::from(solution.l) + 1.0;
    let fine = SincGrid::with_execution(alpha, 2.0 * old.beta(), old.d(), m, exec)?;
    let samples = map_indexed(exec, fine.len(), |i| {
        let x = fine.points()[i];
        solution.evaluate_f(x).map(|f| f * f / x)
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    Ok(quadrature_nodal(&fine, &samples)?.sqrt())
}

/// `<f_a, f_b> / (|f_a| |f_b|)` with the plain measure `dx` on `f`, which is
/// the measure in which states of one `l` are orthogonal. In terms of `R`
/// this is the integral of `R_a R_b x`.
pub fn overlap(a: &RadialSolution, b: &RadialSolution) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::InvalidParameter {
            name: "b",
            reason: "states live on different grids".into(),
        });
    }
    let g = &a.grid;
    let prod = |u: &[f64], v: &[f64]| -> Result<f64> {
        let s: Vec<f64> = u.iter().zip(v).map(|(p, q)| p * q).collect();
        quadrature_nodal(g, &s)
    };
    let ab = prod(&a.coefficients, &b.coefficients)?;
    let aa = prod(&a.coefficients, &a.coefficients)?;
    let bb = prod(&b.coefficients, &b.coefficients)?;
    Ok(ab / (aa * bb).sqrt())
}

/// Integral of `R_a R_b` over `(0, inf)` by quadrature on the shared grid.
pub fn radial_overlap(a: &RadialSolution, b: &RadialSolution) -> Result<f64> {
    let s: Vec<f64> = a
        .coefficients
        .iter()
        .zip(&b.coefficients)
        .zip(a.grid.points())
        .map(|((p, q), x)| p * q / x)
        .collect();
    quadrature_nodal(&a.grid, &s)
}
