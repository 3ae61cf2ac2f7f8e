//! Numerov integration of the heavy-heavy radial equation in the Langer
//! variable, `χ'' + q(x) χ = 0` with `q = ν0 [E e^{2x} + s(x)]`, and the
//! exact zero-energy solution for `s(x) = 1/x`.

use thiserror::Error;

use crate::potentials::Potential;
use crate::roots;
use crate::specfun::{bessel_j, bessel_y};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RadialError {
    #[error("{name} = {value} outside domain")]
    Domain { name: &'static str, value: f64 },
    #[error("step rejected at x = {x}: h²|q|/12 = {estimate} exceeds {tol}")]
    StepRejected { x: f64, estimate: f64, tol: f64 },
    #[error("level {k} has {nodes} nodes")]
    NodeTheorem { k: usize, nodes: usize },
    #[error("eigenvalue search failed: {0}")]
    Search(String),
}

/// Largest accepted `h²|q|/12`; at 0.5 the recurrence stays sign-definite
/// in forbidden regions.
pub const DEFAULT_STEP_TOL: f64 = 0.5;

const RESCALE_LIMIT: f64 = 1e150;
/// 2^-498, an exact power of two.
const RESCALE_FACTOR: f64 = 1.221_338_669_755_462e-150;

#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionSample {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub node_count: usize,
    /// `1 / sqrt(∫ χ² dx)` over the grid (trapezoid).
    pub norm_const: f64,
}

impl WavefunctionSample {
    fn new(grid: Vec<f64>, values: Vec<f64>) -> Self {
        let node_count = count_sign_changes(&values);
        let norm_const = 1.0 / trapezoid_sq(&grid, &values).sqrt();
        Self {
            grid,
            values,
            node_count,
            norm_const,
        }
    }
}

fn count_sign_changes(values: &[f64]) -> usize {
    let mut last = 0.0_f64;
    let mut count = 0;
    for &v in values {
        if v != 0.0 {
            if last != 0.0 && (v < 0.0) != (last < 0.0) {
                count += 1;
            }
            last = v;
        }
    }
    count
}

fn trapezoid_sq(grid: &[f64], values: &[f64]) -> f64 {
    grid.windows(2)
        .zip(values.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] * y[0] + y[1] * y[1]))
        .sum()
}

/// Running state of a Numerov sweep.
struct Sweep {
    prev: f64,
    cur: f64,
    nodes: usize,
    last_sign: f64,
}

impl Sweep {
    fn new(y0: f64, y1: f64) -> Self {
        let mut s = Self {
            prev: y0,
            cur: y1,
            nodes: 0,
            last_sign: 0.0,
        };
        s.observe(y0);
        s.observe(y1);
        s
    }

    fn observe(&mut self, y: f64) {
        if y != 0.0 {
            let sign = y.signum();
            if self.last_sign != 0.0 && sign != self.last_sign {
                self.nodes += 1;
            }
            self.last_sign = sign;
        }
    }

    /// Advances one step; returns `true` when a rescale happened.
    fn step(&mut self, h2: f64, q_prev: f64, q_cur: f64, q_next: f64) -> bool {
        let next = (2.0 * (1.0 - 5.0 * h2 * q_cur / 12.0) * self.cur - (1.0 + h2 * q_prev / 12.0) * self.prev)
            / (1.0 + h2 * q_next / 12.0);
        self.prev = self.cur;
        self.cur = next;
        self.observe(next);
        if next.abs() > RESCALE_LIMIT {
            self.prev *= RESCALE_FACTOR;
            self.cur *= RESCALE_FACTOR;
            true
        } else {
            false
        }
    }
}

fn check_step(x: f64, h2: f64, q: f64, tol: f64) -> Result<(), RadialError> {
    let estimate = h2 * q.abs() / 12.0;
    if estimate > tol || !q.is_finite() {
        Err(RadialError::StepRejected { x, estimate, tol })
    } else {
        Ok(())
    }
}

/// Numerov solution of `χ'' + q(x) χ = 0` on `x0 + i h`, `i = 0..=n`,
/// from `χ(x0) = y0`, `χ(x0 + h) = y1`. `q` is never evaluated at `x0`
/// when `y0 = 0`.
pub fn numerov_integrate_q<Q>(
    q: Q,
    x0: f64,
    h: f64,
    n: usize,
    bc: (f64, f64),
    step_tol: f64,
) -> Result<WavefunctionSample, RadialError>
where
    Q: Fn(f64) -> f64,
{
    if !(h > 0.0) || n < 2 {
        return Err(RadialError::Domain { name: "h", value: h });
    }
    let h2 = h * h;
    let grid: Vec<f64> = (0..=n).map(|i| x0 + h * i as f64).collect();
    let mut values = Vec::with_capacity(n + 1);
    values.push(bc.0);
    values.push(bc.1);
    // q·χ at x0 is 0 when χ(x0) = 0, whatever q does there.
    let mut q_prev = if bc.0 == 0.0 { 0.0 } else { q(grid[0]) };
    let mut q_cur = q(grid[1]);
    check_step(grid[1], h2, q_cur, step_tol)?;
    let mut sweep = Sweep::new(bc.0, bc.1);
    for i in 1..n {
        let q_next = q(grid[i + 1]);
        check_step(grid[i + 1], h2, q_next, step_tol)?;
        if sweep.step(h2, q_prev, q_cur, q_next) {
            for v in values.iter_mut() {
                *v *= RESCALE_FACTOR;
            }
        }
        values.push(sweep.cur);
        q_prev = q_cur;
        q_cur = q_next;
    }
    Ok(WavefunctionSample::new(grid, values))
}

/// Numerov on the radial equation for `potential` at energy `energy`.
#[allow(clippy::too_many_arguments)]
pub fn numerov_integrate<P: Potential + ?Sized>(
    potential: &P,
    energy: f64,
    nu0: f64,
    x0: f64,
    h: f64,
    n: usize,
    bc: (f64, f64),
    step_tol: f64,
) -> Result<WavefunctionSample, RadialError> {
    let eps = nu0 * energy;
    numerov_integrate_q(
        |x| eps * (2.0 * x).exp() + nu0 * potential.scaled(x),
        x0,
        h,
        n,
        bc,
        step_tol,
    )
}

/// `χ0(x) = sqrt(x) [A J1(2 sqrt(ν0 x)) + B Y1(2 sqrt(ν0 x))]`.
pub fn zero_energy_exact(x_grid: &[f64], nu0: f64, a: f64, b: f64) -> Result<WavefunctionSample, RadialError> {
    let mut values = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        if !(x > 0.0) {
            return Err(RadialError::Domain { name: "x", value: x });
        }
        let arg = 2.0 * (nu0 * x).sqrt();
        let j = bessel_j(1, arg).map_err(|_| RadialError::Domain { name: "x", value: x })?;
        let y = if b == 0.0 {
            0.0
        } else {
            bessel_y(1, arg).map_err(|_| RadialError::Domain { name: "x", value: x })?
        };
        values.push(x.sqrt() * (a * j + b * y));
    }
    Ok(WavefunctionSample::new(x_grid.to_vec(), values))
}

/// Regular solution of `χ'' + (ε e^{2x} + c/x) χ = 0` at small `x`,
/// normalized to `χ'(0) = 1`.
pub fn frobenius_inverse_x(c: f64, eps: f64, x: f64) -> f64 {
    const TERMS: usize = 40;
    let mut coef = [0.0_f64; TERMS + 1];
    let mut exp2 = [0.0_f64; TERMS + 1];
    exp2[0] = 1.0;
    for j in 1..=TERMS {
        exp2[j] = exp2[j - 1] * 2.0 / j as f64;
    }
    coef[1] = 1.0;
    let mut sum = x;
    let mut power = x;
    for k in 1..TERMS {
        let conv: f64 = (0..k).map(|j| exp2[j] * coef[k - 1 - j]).sum();
        coef[k + 1] = -(c * coef[k] + eps * conv) / ((k + 1) as f64 * k as f64);
        power *= x;
        let term = coef[k + 1] * power;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// How the solution leaves the left wall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LeftStart {
    /// `χ(x_lo) = 0`, `χ(x_lo + h) = h`.
    Wall,
    /// Wall at `x_lo = 0` for `q = eps_per_energy · E e^{2x} + c/x`;
    /// the first two points come from the regular series.
    InverseX { c: f64, eps_per_energy: f64 },
}

/// Eigenvalue problem `χ'' + q(x, E) χ = 0` with `χ = 0` at both ends.
pub struct EigenProblem<Q> {
    pub q: Q,
    pub x_lo: f64,
    pub x_hi: f64,
    pub h: f64,
    pub start: LeftStart,
    pub step_tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub energies: Vec<f64>,
    pub nodes: Vec<usize>,
    /// `false` when fewer levels than requested exist.
    pub complete: bool,
}

/// Stored solution and the nodes counted over the visited interior indices.
struct Solution {
    values: Vec<f64>,
    nodes: usize,
}

impl<Q> EigenProblem<Q>
where
    Q: Fn(f64, f64) -> f64,
{
    fn steps(&self) -> usize {
        ((self.x_hi - self.x_lo) / self.h).round().max(4.0) as usize
    }

    fn step_len(&self) -> f64 {
        (self.x_hi - self.x_lo) / self.steps() as f64
    }

    fn x_at(&self, i: usize) -> f64 {
        if i == self.steps() {
            self.x_hi
        } else {
            self.x_lo + self.step_len() * i as f64
        }
    }

    /// Left solution on indices `0..=upto`; nodes counted on `1..=upto`.
    fn left(&self, energy: f64, upto: usize) -> Result<Solution, RadialError> {
        let h = self.step_len();
        let h2 = h * h;
        let q = |i: usize| (self.q)(self.x_at(i), energy);
        let (first, y_a, y_b) = match self.start {
            LeftStart::Wall => (0, 0.0, h),
            LeftStart::InverseX { c, eps_per_energy } => {
                let eps = eps_per_energy * energy;
                (
                    1,
                    frobenius_inverse_x(c, eps, self.x_at(1)),
                    frobenius_inverse_x(c, eps, self.x_at(2)),
                )
            }
        };
        let mut values = vec![0.0; upto + 1];
        values[first] = y_a;
        values[first + 1] = y_b;
        let mut q_prev = if first == 0 { 0.0 } else { q(first) };
        let mut q_cur = q(first + 1);
        check_step(self.x_at(first + 1), h2, q_cur, self.step_tol)?;
        let mut sweep = Sweep::new(y_a, y_b);
        for i in (first + 1)..upto {
            let q_next = q(i + 1);
            check_step(self.x_at(i + 1), h2, q_next, self.step_tol)?;
            if sweep.step(h2, q_prev, q_cur, q_next) {
                values[..=i].iter_mut().for_each(|v| *v *= RESCALE_FACTOR);
            }
            values[i + 1] = sweep.cur;
            q_prev = q_cur;
            q_cur = q_next;
        }
        Ok(Solution {
            values,
            nodes: sweep.nodes,
        })
    }

    /// Right solution on indices `downto..=n` (stored at their own index);
    /// nodes counted on `downto..=n-1`.
    fn right(&self, energy: f64, downto: usize) -> Result<Solution, RadialError> {
        let n = self.steps();
        let h = self.step_len();
        let h2 = h * h;
        let q = |i: usize| (self.q)(self.x_at(i), energy);
        let mut values = vec![0.0; n + 1];
        values[n - 1] = h;
        let mut q_prev = 0.0;
        let mut q_cur = q(n - 1);
        check_step(self.x_at(n - 1), h2, q_cur, self.step_tol)?;
        let mut sweep = Sweep::new(0.0, h);
        for i in ((downto + 1)..n).rev() {
            let q_next = q(i - 1);
            check_step(self.x_at(i - 1), h2, q_next, self.step_tol)?;
            if sweep.step(h2, q_prev, q_cur, q_next) {
                values[i..].iter_mut().for_each(|v| *v *= RESCALE_FACTOR);
            }
            values[i - 1] = sweep.cur;
            q_prev = q_cur;
            q_cur = q_next;
        }
        Ok(Solution {
            values,
            nodes: sweep.nodes,
        })
    }

    /// Sign changes of the left solution strictly inside the window; equals
    /// the number of eigenvalues below `energy`.
    pub fn node_count(&self, energy: f64) -> Result<usize, RadialError> {
        Ok(self.left(energy, self.steps() - 1)?.nodes)
    }

    /// Outermost grid index where `q > 0`, kept away from the walls.
    fn matching_index(&self, energy: f64) -> usize {
        let n = self.steps();
        let margin = 4.min(n / 4).max(2);
        let allowed = (margin..=n - margin)
            .rev()
            .find(|&i| (self.q)(self.x_at(i), energy) > 0.0);
        allowed.unwrap_or(n / 2).clamp(margin, n - margin)
    }

    /// Normalized Wronskian of left and right solutions at index `m`.
    fn mismatch(&self, energy: f64, m: usize) -> Result<(f64, usize), RadialError> {
        let l = self.left(energy, m + 1)?;
        let r = self.right(energy, m - 1)?;
        let (yl, dl) = (l.values[m], 0.5 * (l.values[m + 1] - l.values[m - 1]));
        let (yr, dr) = (r.values[m], 0.5 * (r.values[m + 1] - r.values[m - 1]));
        let w = yl * dr - dl * yr;
        let norm = yl.hypot(dl) * yr.hypot(dr);
        // Nodes of the stitched eigenfunction: left through m, right beyond m.
        let left_nodes = count_through(&l, m);
        let nodes = left_nodes + r.nodes - usize::from(sign_change(r.values[m], r.values[m - 1]));
        Ok((w / norm, nodes))
    }

    /// Lowest `k` eigenvalues, optionally restricted to `E < e_ceiling`.
    pub fn eigenvalues(&self, k: usize, e_ceiling: Option<f64>) -> Result<EigenResult, RadialError> {
        let mut e_low = -1.0;
        while self.node_count(e_low)? > 0 {
            e_low *= 4.0;
            if e_low < -1e300 {
                return Err(RadialError::Search("no lower energy bound".into()));
            }
        }
        let available = match e_ceiling {
            Some(top) => self.node_count(top)?.min(k),
            None => k,
        };
        let mut energies = Vec::with_capacity(available);
        let mut nodes = Vec::with_capacity(available);
        let mut e_high = e_ceiling.unwrap_or(1.0);
        for level in 0..available {
            if e_ceiling.is_none() {
                while self.node_count(e_high)? <= level {
                    e_high = if e_high > 0.0 { 4.0 * e_high } else { 1.0 };
                }
            }
            let (a, b) = self.isolate(level, e_low, e_high)?;
            let m = self.matching_index(0.5 * (a + b));
            let f = |e: f64| self.mismatch(e, m).map_or(f64::NAN, |(w, _)| w);
            let tol = 1e-10 * a.abs().max(b.abs()).max(f64::MIN_POSITIVE) * 1e-2;
            let root = roots::ridders(f, a, b, tol).map_err(|e| RadialError::Search(e.to_string()))?;
            let (_, stitched_nodes) = self.mismatch(root.x, m)?;
            if stitched_nodes != level {
                return Err(RadialError::NodeTheorem {
                    k: level,
                    nodes: stitched_nodes,
                });
            }
            energies.push(root.x);
            nodes.push(stitched_nodes);
            e_low = b;
        }
        Ok(EigenResult {
            complete: energies.len() == k,
            energies,
            nodes,
        })
    }

    /// Left and right solutions joined at the matching point, unit-normalized.
    pub fn eigenfunction(&self, energy: f64) -> Result<WavefunctionSample, RadialError> {
        let n = self.steps();
        let m = self.matching_index(energy);
        let l = self.left(energy, m)?;
        let r = self.right(energy, m)?;
        if r.values[m] == 0.0 {
            return Err(RadialError::Search(format!(
                "right solution vanishes at match, E = {energy}"
            )));
        }
        let scale = l.values[m] / r.values[m];
        let mut values = l.values;
        values.extend(r.values[m + 1..].iter().map(|v| v * scale));
        let grid: Vec<f64> = (0..=n).map(|i| self.x_at(i)).collect();
        let mut sample = WavefunctionSample::new(grid, values);
        let c = sample.norm_const;
        sample.values.iter_mut().for_each(|v| *v *= c);
        sample.norm_const = 1.0;
        Ok(sample)
    }

    /// Interval holding exactly one eigenvalue, the `level`-th.
    fn isolate(&self, level: usize, mut lo: f64, mut hi: f64) -> Result<(f64, f64), RadialError> {
        // lo may sit above earlier levels only; move it below this one.
        while self.node_count(lo)? > level {
            lo -= (hi - lo).abs().max(1.0);
        }
        for _ in 0..300 {
            let n_lo = self.node_count(lo)?;
            let n_hi = self.node_count(hi)?;
            if n_lo == level && n_hi == level + 1 {
                return Ok((lo, hi));
            }
            let mid = 0.5 * (lo + hi);
            if self.node_count(mid)? > level {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(RadialError::Search(format!("could not isolate level {level}")))
    }
}

fn sign_change(a: f64, b: f64) -> bool {
    a != 0.0 && b != 0.0 && (a < 0.0) != (b < 0.0)
}

fn count_through(sol: &Solution, m: usize) -> usize {
    // The left sweep ran to m + 1; remove a flip between m and m + 1.
    sol.nodes - usize::from(sign_change(sol.values[m], sol.values[m + 1]))
}

/// Bound levels (`E < 0`) of `potential` between hard walls at `window`.
///
/// A wall at `R_lo = 1` on a potential with `s(x) = c/x` uses the regular
/// series start at the singular point.
pub fn bound_states_numerov<P: Potential + ?Sized>(
    potential: &P,
    nu0: f64,
    window: (f64, f64),
    k_levels: usize,
    h: f64,
) -> Result<EigenResult, RadialError> {
    // Just below threshold so E = 0 itself is never an eigenvalue.
    radial_problem(potential, nu0, window, h)?.eigenvalues(k_levels, Some(-f64::MIN_POSITIVE))
}

/// Normalized eigenfunction `χ(x)` at an eigenvalue from [`bound_states_numerov`].
pub fn bound_state_wavefunction<P: Potential + ?Sized>(
    potential: &P,
    nu0: f64,
    window: (f64, f64),
    energy: f64,
    h: f64,
) -> Result<WavefunctionSample, RadialError> {
    radial_problem(potential, nu0, window, h)?.eigenfunction(energy)
}

fn radial_problem<'a, P: Potential + ?Sized>(
    potential: &'a P,
    nu0: f64,
    window: (f64, f64),
    h: f64,
) -> Result<EigenProblem<impl Fn(f64, f64) -> f64 + 'a>, RadialError> {
    let (r_lo, r_hi) = window;
    if !(r_lo >= 1.0) || !(r_hi > r_lo) {
        return Err(RadialError::Domain {
            name: "R_lo",
            value: r_lo,
        });
    }
    if !(nu0 > 0.0) {
        return Err(RadialError::Domain {
            name: "nu0",
            value: nu0,
        });
    }
    let (x_lo, x_hi) = (r_lo.ln(), r_hi.ln());
    let start = match (x_lo == 0.0, potential.inverse_x_strength()) {
        (true, Some(c)) => LeftStart::InverseX {
            c: nu0 * c,
            eps_per_energy: nu0,
        },
        _ => LeftStart::Wall,
    };
    Ok(EigenProblem {
        q: move |x: f64, e: f64| nu0 * (e * (2.0 * x).exp() + potential.scaled(x)),
        x_lo,
        x_hi,
        h,
        start,
        step_tol: DEFAULT_STEP_TOL,
    })
}

/// Number of bound levels in the window: node count at threshold.
pub fn count_levels_numerov<P: Potential + ?Sized>(
    potential: &P,
    nu0: f64,
    window: (f64, f64),
    h: f64,
) -> Result<usize, RadialError> {
    bound_states_numerov(potential, nu0, window, usize::MAX, h).map(|r| r.energies.len())
}
