//! Partial-wave spectral analysis on the half line.
//!
//! Rotationally symmetric fields split the Pauli operator into a family of
//! radial operators −ψ″ − ψ′/r + V_ℓ^±(r) on L²(r dr) with
//! V_ℓ^±(r) = (λA(r) + ℓ/r)² ± (g/2)λB(r).
//! The substitution ψ = u/√r maps each to −u″ + [V − 1/(4r²)]u on L²(dr)
//! with u(0) = 0, which discretizes to a symmetric tridiagonal matrix on a
//! staggered grid (first point at h/2, so 1/(4r²) is never evaluated at 0).
//! Eigenvalues come from Sturm-sequence bisection, eigenvectors from
//! inverse iteration.
//!
//! For a positive-flux compact field the bound states guaranteed by the
//! zero-mode analysis live in the channels ℓ = −j, j = 0…N: there
//! (λA + ℓ/r)² = (A − j/r)² matches the covariant derivative acting on
//! e^{−φ}(x₁+ix₂)^j.
//!
//! The module also evaluates the two coupling asymptotics for zero-flux
//! vortex fields: the weak-coupling binding condition and energy law, and
//! the strong-coupling harmonic-oscillator limit ν_{n,ℓ}.

use crate::fields::{self, CurrentProfile, FieldProfile};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn sign(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }
}

/// Where the effective potential comes from.
#[derive(Clone)]
pub enum PotentialSource {
    /// Physical: V = (λA₁ + ℓ/r)² ± (g/2)λB₁ built from the unit-strength
    /// field profile; λ enters only through the problem.
    Field(FieldProfile),
    /// A complete effective potential V(r), centrifugal term included.
    /// Used for synthetic calibration problems (oscillator, square well).
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for PotentialSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialSource::Field(p) => f.debug_tuple("Field").field(p).finish(),
            PotentialSource::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RadialProblem {
    pub ell: i64,
    pub spin: Spin,
    pub g: f64,
    pub lambda: f64,
    pub source: PotentialSource,
}

impl RadialProblem {
    pub fn from_field(
        ell: i64,
        spin: Spin,
        g: f64,
        lambda: f64,
        field: FieldProfile,
    ) -> Result<Self> {
        field.validate()?;
        if !field.is_radial() {
            return Err(Error::Validation(
                "partial-wave reduction needs a rotationally symmetric field".into(),
            ));
        }
        if !(lambda >= 0.0) {
            return Err(Error::Validation(format!("lambda = {lambda} must be ≥ 0")));
        }
        Ok(RadialProblem {
            ell,
            spin,
            g,
            lambda,
            source: PotentialSource::Field(field),
        })
    }

    /// Calibration problem with an explicit effective potential.
    pub fn synthetic(potential: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        RadialProblem {
            ell: 0,
            spin: Spin::Down,
            g: 0.0,
            lambda: 0.0,
            source: PotentialSource::Custom(Arc::new(potential)),
        }
    }

    /// V_ℓ^±(r); for synthetic problems, the stored potential verbatim.
    pub fn effective_potential(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Validation(format!("r = {r} must be positive")));
        }
        match &self.source {
            PotentialSource::Custom(v) => Ok(v(r)),
            PotentialSource::Field(field) => {
                let a = self.lambda * field.radial_vector_potential(r)?;
                let b = self.lambda * field.radial_b(r);
                let w = a + self.ell as f64 / r;
                Ok(w * w + self.spin.sign() * 0.5 * self.g * b)
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Discretization {
    pub r_max: f64,
    pub n: usize,
    pub refinement_levels: usize,
}

impl Discretization {
    pub fn new(r_max: f64, n: usize) -> Self {
        Discretization {
            r_max,
            n,
            refinement_levels: 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 64 {
            return Err(Error::Validation(format!(
                "n = {} below the minimum grid size 64",
                self.n
            )));
        }
        if !(self.r_max > 0.0) {
            return Err(Error::Validation("r_max must be positive".into()));
        }
        if self.refinement_levels == 0 {
            return Err(Error::Validation("need at least one refinement level".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Converged eigenvalues below 0 at the finest grid, ascending.
    pub eigenvalues: Vec<f64>,
    /// Richardson extrapolation across the two finest levels.
    pub extrapolated: Vec<f64>,
    /// Error estimates from the refinement study.
    pub error_estimates: Vec<f64>,
    /// ‖Tu − Eu‖/‖u‖ in the discrete operator at the finest level.
    pub residual_norms: Vec<f64>,
    /// Eigenvalues that kept drifting when the domain was enlarged;
    /// excluded from `eigenvalues`.
    pub unconverged: Vec<f64>,
    /// Ground-state samples (r_i, ψ(r_i)) with ψ = u/√r, if any state exists.
    pub ground_state: Option<(Vec<f64>, Vec<f64>)>,
    pub r_max_used: f64,
}

/// Symmetric tridiagonal form of −u″ + [V − 1/(4r²)]u on the staggered grid
/// r_i = (i+1/2)h.
///
/// Writing −1/(4r²) directly on the diagonal makes row 0 read
/// 1/h² + V against an off-diagonal −1/h², which supports a spurious
/// origin-localized state at −O(1/h²). The finite-volume symmetrization of
/// the same measure transform (u_i = ψ_i√(r_i h), fluxes at cell faces
/// r = ih where r·∂_r vanishes naturally at the origin) carries the
/// correction on the off-diagonals instead:
/// diag_i = 2/h² + V(r_i), off_i = −(i+1)/(h²√((i+1/2)(i+3/2))),
/// which agrees with the diagonal form to O(h²) and has no spurious mode.
struct Tridiag {
    h: f64,
    diag: Vec<f64>,
    /// off[i] couples nodes i and i+1 (length n − 1)
    off: Vec<f64>,
}

fn assemble(problem: &RadialProblem, r_max: f64, n: usize) -> Result<Tridiag> {
    let h = r_max / n as f64;
    let inv_h2 = 1.0 / (h * h);
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        let r = (i as f64 + 0.5) * h;
        let v = problem.effective_potential(r)?;
        diag.push(2.0 * inv_h2 + v);
    }
    let mut off = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let k = i as f64;
        off.push(-inv_h2 * (k + 1.0) / ((k + 0.5) * (k + 1.5)).sqrt());
    }
    Ok(Tridiag { h, diag, off })
}

impl Tridiag {
    fn n(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below x (Sturm sequence with pivot
    /// guard in the LDL recurrence).
    fn count_below(&self, x: f64) -> usize {
        let off2_max = self
            .off
            .iter()
            .fold(1.0f64, |acc, o| acc.max(o * o));
        let pivmin = f64::MIN_POSITIVE.sqrt() * off2_max;
        let mut count = 0usize;
        let mut d = self.diag[0] - x;
        if d.abs() < pivmin {
            d = -pivmin;
        }
        if d < 0.0 {
            count += 1;
        }
        for i in 1..self.n() {
            let o = self.off[i - 1];
            d = self.diag[i] - x - o * o / d;
            if d.abs() < pivmin {
                d = -pivmin;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (i, &d) in self.diag.iter().enumerate() {
            let mut width = 0.0;
            if i > 0 {
                width += self.off[i - 1].abs();
            }
            if i + 1 < n {
                width += self.off[i].abs();
            }
            lo = lo.min(d - width);
            hi = hi.max(d + width);
        }
        (lo, hi)
    }

    /// k-th smallest eigenvalue (k = 0 is the lowest) by bisection.
    fn kth_eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(1.0);
        for _ in 0..120 {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) <= k {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * scale {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Inverse iteration at the computed eigenvalue; deterministic seed.
    fn eigenvector(&self, e: f64) -> Vec<f64> {
        let n = self.n();
        let mut rng = ChaCha8Rng::seed_from_u64(0x666c7578);
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        normalize(&mut v);
        for _ in 0..4 {
            v = self.solve_shifted(e, &v);
            normalize(&mut v);
        }
        if v.iter().sum::<f64>() < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
        v
    }

    /// Solve (T − σ)x = b by Gaussian elimination with partial pivoting;
    /// a row swap fills in one second superdiagonal.
    fn solve_shifted(&self, sigma: f64, b: &[f64]) -> Vec<f64> {
        let n = self.n();
        // dl[i] couples row i to col i-1; du[i] couples row i to col i+1
        let mut dl = vec![0.0; n];
        dl[1..n].copy_from_slice(&self.off);
        let mut d: Vec<f64> = self.diag.iter().map(|x| x - sigma).collect();
        let mut du = vec![0.0; n];
        du[..n - 1].copy_from_slice(&self.off);
        let mut du2 = vec![0.0; n];
        let mut rhs = b.to_vec();
        let tiny = 1e-300;
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i + 1].abs() {
                let p = if d[i].abs() < tiny { tiny } else { d[i] };
                let m = dl[i + 1] / p;
                d[i + 1] -= m * du[i];
                rhs[i + 1] -= m * rhs[i];
                d[i] = p;
            } else {
                // swap rows i and i+1, then eliminate
                let m = d[i] / dl[i + 1];
                let (old_di1, old_dui, old_dui1) = (d[i + 1], du[i], du[i + 1]);
                d[i] = dl[i + 1];
                du[i] = old_di1;
                du2[i] = old_dui1;
                d[i + 1] = old_dui - m * old_di1;
                du[i + 1] = -m * old_dui1;
                rhs.swap(i, i + 1);
                rhs[i + 1] -= m * rhs[i];
            }
        }
        if d[n - 1].abs() < tiny {
            d[n - 1] = tiny;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = rhs[n - 1] / d[n - 1];
        if n >= 2 {
            x[n - 2] = (rhs[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (rhs[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
        }
        x
    }

    fn residual(&self, e: f64, u: &[f64]) -> f64 {
        let n = self.n();
        let mut num = 0.0;
        for i in 0..n {
            let mut t = (self.diag[i] - e) * u[i];
            if i > 0 {
                t += self.off[i - 1] * u[i - 1];
            }
            if i + 1 < n {
                t += self.off[i] * u[i + 1];
            }
            num += t * t;
        }
        let den: f64 = u.iter().map(|x| x * x).sum();
        (num / den).sqrt()
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

/// All eigenvalues strictly below `threshold` at the given grid.
fn eigenvalues_below(t: &Tridiag, threshold: f64) -> Vec<f64> {
    let m = t.count_below(threshold);
    (0..m).map(|k| t.kth_eigenvalue(k)).collect()
}

/// The k lowest eigenvalues of the discretized problem, Richardson
/// extrapolated across the discretization's refinement levels.
pub fn lowest_eigenvalues(problem: &RadialProblem, disc: &Discretization, k: usize) -> Result<Vec<f64>> {
    disc.validate()?;
    if k == 0 {
        return Err(Error::Validation("k must be ≥ 1".into()));
    }
    let mut prev: Option<Vec<f64>> = None;
    let mut fine: Vec<f64> = Vec::new();
    for level in 0..disc.refinement_levels {
        let n = disc.n << level;
        let t = assemble(problem, disc.r_max, n)?;
        fine = (0..k).map(|i| t.kth_eigenvalue(i)).collect();
        if level + 1 == disc.refinement_levels && disc.refinement_levels >= 2 {
            let coarse = prev.as_ref().unwrap();
            fine = fine
                .iter()
                .zip(coarse)
                .map(|(f, c)| (4.0 * f - c) / 3.0)
                .collect();
        }
        prev = Some(fine.clone());
    }
    Ok(fine)
}

/// Ground-state eigenvalue on one fixed grid, no refinement study. Exposes
/// the raw discretization error, which is what a convergence-order
/// measurement needs; everything else should go through
/// [`lowest_eigenvalues`] or [`negative_spectrum`].
pub fn ground_state_at_resolution(problem: &RadialProblem, r_max: f64, n: usize) -> Result<f64> {
    if !(r_max > 0.0) || n < 64 {
        return Err(Error::Validation(format!(
            "ground_state_at_resolution: need r_max > 0 and n ≥ 64, got ({r_max}, {n})"
        )));
    }
    Ok(assemble(problem, r_max, n)?.kth_eigenvalue(0))
}

/// Negative part of the spectrum with domain-size stabilization, grid
/// refinement, and residual checks.
///
/// The truncation radius is doubled (keeping the grid spacing) until the
/// negative eigenvalues stop moving; states that keep drifting are flagged
/// as unconverged rather than reported bound.
pub fn negative_spectrum(problem: &RadialProblem, disc: &Discretization) -> Result<SpectrumResult> {
    disc.validate()?;
    let h0 = disc.r_max / disc.n as f64;

    // Domain stabilization at the base spacing. The probe is the lowest
    // eigenvalue regardless of sign: by Dirichlet domain monotonicity it
    // decreases as r_max grows, so watching it settle also rules out a
    // shallow bound state still hiding beyond the current box. States with
    // |E| below ~1e-8 are under this resolution and count as absent.
    let probe_all = |r: f64, n: usize| -> Result<(Vec<f64>, f64)> {
        let t = assemble(problem, r, n)?;
        let vals = eigenvalues_below(&t, 0.0);
        let probe = match vals.first() {
            Some(&e) => e,
            None => t.kth_eigenvalue(0),
        };
        Ok((vals, probe))
    };
    let mut r_max = disc.r_max;
    let mut n = disc.n;
    let (mut vals, mut probe) = probe_all(r_max, n)?;
    let mut stable = false;
    let mut drifting: Vec<f64> = Vec::new();
    for _ in 0..12 {
        let (r2, n2) = (2.0 * r_max, 2 * n);
        if n2 > 6_000_000 {
            break;
        }
        let (vals2, probe2) = probe_all(r2, n2)?;
        let moved = vals.len() != vals2.len()
            || (probe - probe2).abs() > 1e-8_f64.max(1e-7 * probe.abs())
            || vals
                .iter()
                .zip(&vals2)
                .any(|(a, b)| (a - b).abs() > 1e-8_f64.max(1e-7 * a.abs()));
        r_max = r2;
        n = n2;
        if !moved {
            stable = true;
            vals = vals2;
            break;
        }
        drifting = vals2.clone();
        vals = vals2;
        probe = probe2;
    }
    if !stable && !vals.is_empty() {
        // never settled: report everything as unconverged
        return Ok(SpectrumResult {
            eigenvalues: Vec::new(),
            extrapolated: Vec::new(),
            error_estimates: Vec::new(),
            residual_norms: Vec::new(),
            unconverged: drifting,
            ground_state: None,
            r_max_used: r_max,
        });
    }

    // grid refinement at the stabilized domain
    let levels = disc.refinement_levels.max(1);
    let base_n = (r_max / h0).round() as usize;
    let mut per_level: Vec<Vec<f64>> = Vec::new();
    let mut finest: Option<Tridiag> = None;
    for level in 0..levels {
        let t = assemble(problem, r_max, base_n << level)?;
        per_level.push(eigenvalues_below(&t, 0.0));
        if level + 1 == levels {
            finest = Some(t);
        }
    }
    let t = finest.unwrap();
    let fine = per_level.last().unwrap().clone();
    let coarse = if levels >= 2 {
        per_level[levels - 2].clone()
    } else {
        fine.clone()
    };
    let m = fine.len().min(coarse.len());
    let mut eigenvalues = Vec::new();
    let mut extrapolated = Vec::new();
    let mut error_estimates = Vec::new();
    let mut residual_norms = Vec::new();
    let mut unconverged = Vec::new();
    let mut ground: Option<(Vec<f64>, Vec<f64>)> = None;
    for k in 0..m {
        let (ef, ec) = (fine[k], coarse[k]);
        let rich = if levels >= 2 { (4.0 * ef - ec) / 3.0 } else { ef };
        let err = if levels >= 2 {
            (ef - ec).abs() / 3.0
        } else {
            f64::NAN
        };
        // refinement may push a marginal state across 0
        if rich >= 0.0 {
            unconverged.push(ef);
            continue;
        }
        let u = t.eigenvector(ef);
        let res = t.residual(ef, &u);
        if eigenvalues.is_empty() {
            let rs: Vec<f64> = (0..t.n()).map(|i| (i as f64 + 0.5) * t.h).collect();
            let psi: Vec<f64> = u.iter().zip(&rs).map(|(ui, r)| ui / r.sqrt()).collect();
            ground = Some((rs, psi));
        }
        eigenvalues.push(ef);
        extrapolated.push(rich);
        error_estimates.push(err);
        residual_norms.push(res);
    }
    // states present at the fine grid only are refinement artifacts
    for k in m..fine.len() {
        unconverged.push(fine[k]);
    }
    Ok(SpectrumResult {
        eigenvalues,
        extrapolated,
        error_estimates,
        residual_norms,
        unconverged,
        ground_state: ground,
        r_max_used: r_max,
    })
}

/// Number of eigenvalues strictly below zero (Sturm count at shift 0),
/// with the same domain stabilization as [`negative_spectrum`].
pub fn count_negative(problem: &RadialProblem, disc: &Discretization) -> Result<usize> {
    disc.validate()?;
    let probe_count = |r: f64, n: usize| -> Result<(usize, f64)> {
        let t = assemble(problem, r, n)?;
        Ok((t.count_below(0.0), t.kth_eigenvalue(0)))
    };
    let mut r_max = disc.r_max;
    let mut n = disc.n;
    let (mut count, mut probe) = probe_count(r_max, n)?;
    for _ in 0..12 {
        if 2 * n > 6_000_000 {
            break;
        }
        let (next, probe2) = probe_count(2.0 * r_max, 2 * n)?;
        r_max *= 2.0;
        n *= 2;
        let settled =
            next == count && (probe - probe2).abs() <= 1e-8_f64.max(1e-7 * probe.abs());
        if settled {
            return Ok(count);
        }
        count = next;
        probe = probe2;
    }
    if count == 0 {
        // the probe ran the domain budget down without finding anything;
        // any remaining state is below the stabilization floor
        return Ok(0);
    }
    Err(Error::Convergence(format!(
        "negative-eigenvalue count kept changing under domain doubling (last value {count} at r_max = {r_max})"
    )))
}

#[derive(Debug, Clone, Copy)]
pub struct CriticalStrength {
    pub lambda_c: f64,
    pub count_below: usize,
    pub count_above: usize,
}

/// Bisect the current strength λ at which the channel (ℓ, spin) first
/// acquires a negative eigenvalue.
pub fn critical_strength(
    ell: i64,
    spin: Spin,
    g: f64,
    current: &CurrentProfile,
    bracket: (f64, f64),
    disc: &Discretization,
) -> Result<CriticalStrength> {
    let (lo0, hi0) = bracket;
    if !(lo0 > 0.0 && hi0 > lo0) {
        return Err(Error::Validation(format!(
            "bracket ({lo0}, {hi0}) must satisfy 0 < lo < hi"
        )));
    }
    let field = FieldProfile::vortex(current.clone())?;
    let count_at = |lambda: f64| -> Result<usize> {
        let p = RadialProblem::from_field(ell, spin, g, lambda, field.clone())?;
        count_negative(&p, disc)
    };
    let c_lo = count_at(lo0)?;
    let c_hi = count_at(hi0)?;
    if c_lo == c_hi {
        return Err(Error::Validation(format!(
            "no count transition in bracket: count({lo0}) = count({hi0}) = {c_lo}"
        )));
    }
    let (mut lo, mut hi) = (lo0, hi0);
    while (hi - lo) > 1e-3 * hi {
        let mid = 0.5 * (lo + hi);
        if count_at(mid)? == c_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CriticalStrength {
        lambda_c: 0.5 * (lo + hi),
        count_below: c_lo,
        count_above: c_hi,
    })
}

/// Weak-coupling binding condition for a zero-flux field:
/// lhs = ∫A²d²x + (g²/8π)∬B(x)ln|x−x′|B(x′); binding for lhs < 0.
pub fn weak_coupling_condition(field: &FieldProfile, g: f64) -> Result<(f64, bool)> {
    let flux = field.total_flux()?;
    if flux.f.abs() > 1e-8 {
        return Err(Error::Validation(format!(
            "weak-coupling condition needs zero total flux, got F = {:.3e}",
            flux.f
        )));
    }
    let gauge = fields::gauge_energy(field)?;
    let pairing = fields::pair_interaction(field)?;
    let lhs = gauge + g * g / (8.0 * PI) * pairing;
    Ok((lhs, lhs < 0.0))
}

/// Asymptotic weak-coupling energy
/// ε(λ) = −exp{−[(λ²/8)(g²−4)∫₀^∞A₁(r)²r dr]^{−1}},
/// with A₁ the unit-strength vector potential. The law is spin independent.
pub fn weak_coupling_energy(lambda: f64, g: f64, field: &FieldProfile) -> Result<f64> {
    let i_a = fields::gauge_energy(field)? / (2.0 * PI);
    let denom = lambda * lambda / 8.0 * (g * g - 4.0) * i_a;
    if denom <= 0.0 {
        return Err(Error::Validation(format!(
            "(g²−4)∫A²r dr must be positive for the weak-coupling law; got {denom:.3e} (g = {g})"
        )));
    }
    Ok(-(-1.0 / denom).exp())
}

/// Strong-coupling oscillator levels ν_{n,ℓ} = μ(4n + 2(|ℓ|+ℓ) + 2 − g);
/// the channel binds at large λ when this is negative.
pub fn strong_coupling_limit(mu: f64, g: f64, n: u32, ell: i64) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(Error::Validation(format!("mu = {mu} must be positive")));
    }
    Ok(mu * (4.0 * n as f64 + 2.0 * (ell.abs() + ell) as f64 + 2.0 - g))
}

/// Lowest eigenvalue of the spin-down vortex channel divided by λ; converges
/// to ν_{0,ℓ} as λ → ∞ when that limit is negative. Returns None when the
/// channel has no negative eigenvalue at this λ.
pub fn rescaled_ground_state(
    lambda: f64,
    g: f64,
    ell: i64,
    current: &CurrentProfile,
    disc: &Discretization,
) -> Result<Option<f64>> {
    if !(lambda > 0.0) {
        return Err(Error::Validation(format!("lambda = {lambda} must be positive")));
    }
    let field = FieldProfile::vortex(current.clone())?;
    let problem = RadialProblem::from_field(ell, Spin::Down, g, lambda, field)?;
    let spectrum = negative_spectrum(&problem, disc)?;
    Ok(spectrum.extrapolated.first().map(|e| e / lambda))
}

/// Discretization sized for the oscillator-like strong-coupling regime,
/// where the state lives on the scale (λμ)^{-1/2}.
pub fn strong_coupling_discretization(lambda: f64, mu: f64) -> Discretization {
    let scale = (lambda * mu).sqrt().recip();
    let r_max = (40.0 * scale).max(1.0);
    let n = ((r_max / (scale / 50.0)).ceil() as usize).clamp(2048, 1 << 20);
    Discretization {
        r_max,
        n,
        refinement_levels: 2,
    }
}
