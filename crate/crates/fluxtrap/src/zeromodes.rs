//! Zero modes of the Pauli operator and the variational binding certifier.
//!
//! For a compactly supported field with flux F = N + eps the operator D =
//! (p₁-A₁) + i(p₂-A₂) annihilates the explicit modes
//! χ_j = e^{-φ}(x₁+ix₂)^j, j = 0…N, with φ the logarithmic potential of B.
//! Modes j ≤ N-1 are square integrable; j = N decays like r^{-eps} and is a
//! zero-energy resonance. When the anomaly g-2 is positive, each j with
//! binding integral I_j = ∫ B e^{-2φ} r^{2j} ≥ 0 yields a bound state of
//! H = D*D - (g-2)B/2; [`certify`] exhibits an explicit trial function with
//! negative energy for it.
//!
//! Trial functions follow the structure of the underlying variational
//! argument: ψ = f_R·χ_j + ε·h with a radial cutoff f_R (f ≡ 1 for the
//! normalizable modes, a C¹ ramp from 1 at R to 0 at 2R for the resonance)
//! and a smooth bump h placed where |B χ_j| is large. The quadratic form
//! splits into four exactly computable terms because Dχ_j = 0 and the
//! supports of ∇f_R and h are disjoint.

use crate::fields::{FieldProfile, FluxDecomposition};
use crate::specfun::{self, QuadratureSpec};
use crate::{Error, Result};
use num_complex::Complex64;
use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;

/// Support disc of the bump perturbation h, centred on the positive x-axis
/// (radial fields make the angular position immaterial).
#[derive(Debug, Clone, PartialEq)]
pub struct BumpSpec {
    pub center_r: f64,
    pub radius: f64,
}

/// Trial function ψ = f_R χ_j + ε h.
///
/// `r_cut = None` means f ≡ 1, which is only admissible for the square
/// integrable modes j ≤ N-1; the resonance j = N requires a cutoff radius.
#[derive(Debug, Clone)]
pub struct TrialFunction {
    pub j: usize,
    pub r_cut: Option<f64>,
    pub eps: f64,
    pub bump: BumpSpec,
}

/// The four terms of the expanded quadratic form, in the order they arise:
/// cutoff kinetic ∫|∇f_R|²|χ_j|², perturbation kinetic ε²∫|Dh|², cross
/// -(g-2)·ε·Re∫h B χ_j, and the diagonal Zeeman pair
/// -(g-2)/2·(I_j + ε²∫B h²).
#[derive(Debug, Clone, Copy)]
pub struct FormBreakdown {
    pub cutoff_kinetic: f64,
    pub perturbation_kinetic: f64,
    pub cross: f64,
    pub zeeman: f64,
}

impl FormBreakdown {
    pub fn total(&self) -> f64 {
        self.cutoff_kinetic + self.perturbation_kinetic + self.cross + self.zeeman
    }
}

#[derive(Debug, Clone)]
pub struct BindingCertificate {
    pub j: usize,
    pub form_value: f64,
    pub r_cut: Option<f64>,
    pub eps: f64,
    pub bump: BumpSpec,
    pub breakdown: FormBreakdown,
    /// Set when the search had to leave its standard grid (resonance with
    /// small eps needs very large cutoff radii).
    pub warning: Option<String>,
}

/// Why a certificate search came back empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureReason {
    /// I_j < 0: no trial in this family helps. Defensive: integration by
    /// parts (u = j ln r - φ) gives I_j = 2∫|∇u|²e^{2u} > 0 whenever
    /// j < F, so for admissible modes this can only arise from quadrature
    /// noise on a vanishingly small integral.
    NegativeBindingIntegral,
    /// I_j ≥ 0 but no grid point produced a negative value.
    SearchExhausted,
}

#[derive(Debug, Clone)]
pub struct SearchFailure {
    pub j: usize,
    pub reason: FailureReason,
    pub binding_integral: f64,
    /// Most negative form value seen, for diagnostics.
    pub best_value: f64,
}

#[derive(Debug, Clone)]
pub enum CertifyOutcome {
    Certified(BindingCertificate),
    Exhausted(SearchFailure),
}

/// Guaranteed lower bound on the number of bound states, with the per-mode
/// binding integrals behind it.
#[derive(Debug, Clone)]
pub struct GuaranteedCount {
    pub n_bound: usize,
    pub flags: Vec<bool>,
    pub binding_integrals: Vec<f64>,
    pub flux: FluxDecomposition,
}

fn require_compact_radial(field: &FieldProfile) -> Result<()> {
    field.validate()?;
    if !field.is_compact() {
        return Err(Error::Validation(
            "zero-mode analysis needs a compactly supported field".into(),
        ));
    }
    if !field.is_radial() {
        return Err(Error::Validation(
            "binding integrals use the radial reduction; planar grids are not supported here"
                .into(),
        ));
    }
    Ok(())
}

fn mode_range(field: &FieldProfile) -> Result<(FluxDecomposition, i64)> {
    let flux = field.total_flux()?;
    Ok((flux, flux.n))
}

/// χ_j(x) = e^{-φ(x)} (x₁ + i x₂)^j.
pub fn zero_mode(field: &FieldProfile, j: usize, x: [f64; 2]) -> Result<Complex64> {
    field.validate()?;
    if !field.is_compact() {
        return Err(Error::Validation(
            "zero modes need a compactly supported field".into(),
        ));
    }
    let (flux, n) = mode_range(field)?;
    if (j as i64) > n {
        return Err(Error::Validation(format!(
            "zero_mode: j = {j} exceeds N = {n} (flux F = {:.6})",
            flux.f
        )));
    }
    let phi = field.log_potential(x)?;
    let z = Complex64::new(x[0], x[1]);
    Ok(z.powu(j as u32) * (-phi).exp())
}

/// Cached radial logarithmic potential; the certifier evaluates φ at the
/// same radii over and over across the bump dictionary.
struct PhiCache<'a> {
    field: &'a FieldProfile,
    map: RefCell<HashMap<u64, f64>>,
}

impl<'a> PhiCache<'a> {
    fn new(field: &'a FieldProfile) -> Self {
        PhiCache {
            field,
            map: RefCell::new(HashMap::new()),
        }
    }

    fn phi(&self, r: f64) -> f64 {
        if let Some(v) = self.map.borrow().get(&r.to_bits()) {
            return *v;
        }
        let v = self
            .field
            .log_potential([r, 0.0])
            .expect("log potential quadrature");
        self.map.borrow_mut().insert(r.to_bits(), v);
        v
    }
}

/// I_j = ∫ B e^{-2φ} r^{2j} d²x via the radial reduction
/// 2π ∫ B(r) e^{-2φ(r)} r^{2j+1} dr.
pub fn binding_integral(field: &FieldProfile, j: usize) -> Result<f64> {
    require_compact_radial(field)?;
    let (flux, n) = mode_range(field)?;
    if (j as i64) > n {
        return Err(Error::Validation(format!(
            "binding_integral: j = {j} exceeds N = {n} (flux F = {:.6})",
            flux.f
        )));
    }
    binding_integral_unchecked(field, j)
}

fn binding_integral_unchecked(field: &FieldProfile, j: usize) -> Result<f64> {
    let cache = PhiCache::new(field);
    let sup = field.support_radius();
    let spec = QuadratureSpec {
        abs_tol: 1e-10,
        rel_tol: 1e-10,
        singular_points: field.radial_breakpoints(),
        ..Default::default()
    };
    let v = specfun::integrate(
        |r| field.radial_b(r) * (-2.0 * cache.phi(r)).exp() * r.powi(2 * j as i32 + 1),
        0.0,
        sup,
        &spec,
    )?;
    Ok(2.0 * PI * v)
}

/// n_B = #{ j ∈ 0…N : I_j ≥ 0 } together with the flag vector.
pub fn guaranteed_count(field: &FieldProfile) -> Result<GuaranteedCount> {
    require_compact_radial(field)?;
    let (flux, n) = mode_range(field)?;
    if flux.f <= 0.0 {
        return Err(Error::Validation(format!(
            "guaranteed_count needs positive total flux, got F = {:.6}",
            flux.f
        )));
    }
    let mut flags = Vec::new();
    let mut integrals = Vec::new();
    for j in 0..=n.max(0) as usize {
        let i_j = binding_integral_unchecked(field, j)?;
        flags.push(i_j >= 0.0);
        integrals.push(i_j);
    }
    Ok(GuaranteedCount {
        n_bound: flags.iter().filter(|f| **f).count(),
        flags,
        binding_integrals: integrals,
        flux,
    })
}

/// Cutoff ramp: f(u) = 1 for u ≤ 1, cubic smoothstep down to 0 at u = 2.
/// C¹ with ‖f′‖_∞ = 3/2, which is all the variational estimate needs.
fn ramp_deriv(u: f64) -> f64 {
    if !(1.0..2.0).contains(&u) {
        0.0
    } else {
        let t = u - 1.0;
        -(6.0 * t - 6.0 * t * t)
    }
}

/// ∫_1^2 f′(u)² u^p du for the closed-form exterior cutoff integral.
fn ramp_moment(p: f64) -> f64 {
    let spec = QuadratureSpec::default();
    specfun::integrate(|u| ramp_deriv(u).powi(2) * u.powf(p), 1.0, 2.0, &spec)
        .expect("ramp moment quadrature")
}

/// Bump h(x) = exp(-1/(1-u²)) with u = |x - c|/ρ < 1, zero outside.
fn bump_h(w: f64) -> f64 {
    // w = u²
    if w >= 1.0 - 1e-12 {
        0.0
    } else {
        (-1.0 / (1.0 - w)).exp()
    }
}

/// The three bump integrals that enter the form:
/// k1 = ∫|Dh|², k2 = Re ∫ h B χ_j / (normalization e^{-φ} r^j cos jθ), and
/// k3 = ∫ B h², all over the bump's support.
///
/// Uses ∫|Dh|² = ∫(|∇h|² + |A|² h²) - ∫ B h², valid for real h, and
/// integrates radially (adaptive, with the field's breakpoints declared)
/// against a fixed Gauss rule in the angle, where everything is smooth.
fn bump_integrals(
    field: &FieldProfile,
    cache: &PhiCache,
    j: usize,
    bump: &BumpSpec,
) -> Result<(f64, f64, f64)> {
    let (c, rho) = (bump.center_r, bump.radius);
    let r_lo = (c - rho).max(0.0);
    let r_hi = c + rho;
    let mut pts: Vec<f64> = field
        .radial_breakpoints()
        .into_iter()
        .filter(|p| *p > r_lo && *p < r_hi)
        .collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let spec = QuadratureSpec {
        abs_tol: 1e-10,
        rel_tol: 1e-9,
        singular_points: pts,
        ..Default::default()
    };
    // 24-point Gauss on the half angular range (integrands are even in θ)
    const NTH: usize = 24;
    let gauss = gauss_legendre_24();
    let angular = |r: f64, f: &dyn Fn(f64) -> f64| -> f64 {
        if r == 0.0 {
            return 2.0 * PI * f(0.0);
        }
        let cos_max = (r * r + c * c - rho * rho) / (2.0 * r * c);
        let th_max = if c == 0.0 || cos_max <= -1.0 {
            PI
        } else if cos_max >= 1.0 {
            return 0.0;
        } else {
            cos_max.acos()
        };
        let mut s = 0.0;
        for k in 0..NTH {
            let (x, w) = gauss[k];
            let th = 0.5 * th_max * (x + 1.0);
            s += w * f(th);
        }
        s * th_max // half-width × 2 for the mirror image
    };
    let w_of = |r: f64, th: f64| -> f64 {
        let dx = r * th.cos() - c;
        let dy = r * th.sin();
        (dx * dx + dy * dy) / (rho * rho)
    };
    let k1 = specfun::integrate(
        |r| {
            let a = if r > 0.0 {
                field.radial_vector_potential(r).unwrap_or(0.0)
            } else {
                0.0
            };
            let b = field.radial_b(r);
            r * angular(r, &|th| {
                let w = w_of(r, th);
                let h = bump_h(w);
                if h == 0.0 {
                    return 0.0;
                }
                let grad2 = 4.0 * h * h * w / ((1.0 - w).powi(4) * rho * rho);
                grad2 + (a * a - b) * h * h
            })
        },
        r_lo,
        r_hi,
        &spec,
    )?;
    let k2 = specfun::integrate(
        |r| {
            let b = field.radial_b(r);
            if b == 0.0 {
                return 0.0;
            }
            let weight = b * (-cache.phi(r)).exp() * r.powi(j as i32);
            r * angular(r, &|th| {
                let h = bump_h(w_of(r, th));
                weight * (j as f64 * th).cos() * h
            })
        },
        r_lo,
        r_hi,
        &spec,
    )?;
    let k3 = specfun::integrate(
        |r| {
            let b = field.radial_b(r);
            if b == 0.0 {
                return 0.0;
            }
            r * angular(r, &|th| {
                let h = bump_h(w_of(r, th));
                b * h * h
            })
        },
        r_lo,
        r_hi,
        &spec,
    )?;
    Ok((k1, k2, k3))
}

fn gauss_legendre_24() -> &'static [(f64, f64); 24] {
    // nodes/weights on [-1,1], 24 points (exact through degree 47)
    const GL24: [(f64, f64); 24] = [
        (-0.9951872199970213, 0.0123412297999872),
        (-0.9747285559713095, 0.0285313886289337),
        (-0.9382745520027328, 0.0442774388174198),
        (-0.8864155270044011, 0.0592985849154368),
        (-0.8200019859739029, 0.0733464814110803),
        (-0.7401241915785544, 0.0861901615319533),
        (-0.6480936519369755, 0.0976186521041139),
        (-0.5454214713888396, 0.1074442701159656),
        (-0.4337935076260451, 0.1155056680537256),
        (-0.3150426796961634, 0.1216704729278034),
        (-0.1911188674736163, 0.1258374563468283),
        (-0.0640568928626056, 0.1279381953467522),
        (0.0640568928626056, 0.1279381953467522),
        (0.1911188674736163, 0.1258374563468283),
        (0.3150426796961634, 0.1216704729278034),
        (0.4337935076260451, 0.1155056680537256),
        (0.5454214713888396, 0.1074442701159656),
        (0.6480936519369755, 0.0976186521041139),
        (0.7401241915785544, 0.0861901615319533),
        (0.8200019859739029, 0.0733464814110803),
        (0.8864155270044011, 0.0592985849154368),
        (0.9382745520027328, 0.0442774388174198),
        (0.9747285559713095, 0.0285313886289337),
        (0.9951872199970213, 0.0123412297999872),
    ];
    &GL24
}

/// Evaluate the four-term form for an explicit trial function.
pub fn variational_form(
    field: &FieldProfile,
    g: f64,
    trial: &TrialFunction,
) -> Result<FormBreakdown> {
    require_compact_radial(field)?;
    if g < 2.0 {
        return Err(Error::Validation(format!(
            "variational_form: g = {g} < 2; the certificate targets the anomalous regime"
        )));
    }
    let (flux, n) = mode_range(field)?;
    if flux.f <= 0.0 {
        return Err(Error::Validation(format!(
            "variational_form needs positive total flux, got F = {:.6}",
            flux.f
        )));
    }
    let j = trial.j;
    if (j as i64) > n {
        return Err(Error::Validation(format!(
            "variational_form: j = {j} exceeds N = {n}"
        )));
    }
    let sup = field.support_radius();
    let resonance = j as i64 == n;
    match trial.r_cut {
        None if resonance => {
            return Err(Error::Validation(
                "the resonance mode j = N is not square integrable; a cutoff radius is required"
                    .into(),
            ));
        }
        Some(_) if !resonance => {
            return Err(Error::Validation(
                "modes j ≤ N-1 are square integrable; the trial uses f ≡ 1 there (no cutoff)"
                    .into(),
            ));
        }
        Some(r) if r < sup => {
            return Err(Error::Validation(format!(
                "cutoff radius {r} lies inside the field support {sup}; f must be 1 on it"
            )));
        }
        Some(r) if trial.bump.center_r + trial.bump.radius > r => {
            return Err(Error::Validation(
                "bump support must stay inside the cutoff radius (disjoint from ∇f)".into(),
            ));
        }
        _ => {}
    }
    if !(trial.bump.radius > 0.0) || trial.bump.center_r < 0.0 {
        return Err(Error::Validation("bump needs radius > 0, center ≥ 0".into()));
    }

    let cache = PhiCache::new(field);
    let i_j = binding_integral_unchecked(field, j)?;
    let cutoff_kinetic = match trial.r_cut {
        None => 0.0,
        Some(r) => {
            // outside the support φ = F ln r exactly, so the annulus
            // integral collapses to a single u-moment of the ramp
            let p = 2.0 * (j as f64 - flux.f) + 1.0;
            2.0 * PI * r.powf(p - 1.0) * ramp_moment(p)
        }
    };
    let (k1, k2, k3) = if trial.eps != 0.0 {
        bump_integrals(field, &cache, j, &trial.bump)?
    } else {
        (0.0, 0.0, 0.0)
    };
    let e = trial.eps;
    Ok(FormBreakdown {
        cutoff_kinetic,
        perturbation_kinetic: e * e * k1,
        cross: -(g - 2.0) * e * k2,
        zeeman: -0.5 * (g - 2.0) * (i_j + e * e * k3),
    })
}

const EPS_MAGNITUDES: [f64; 7] = [1e-3, 3.1622776601683794e-3, 1e-2, 3.1622776601683794e-2, 0.1, 0.31622776601683794, 1.0];

/// Search the trial-function grids for a certificate of binding for mode j.
///
/// Grid order (first success wins, making the result deterministic): cutoff
/// radii ascending where applicable, then the 3×3 bump dictionary, then
/// ε ∈ {0, ±10^{-3}, …, ±1}. The R grid is support·{2,4,…,64}; for the
/// resonance mode it extends by doubling (with a warning) because the
/// cutoff term decays only like R^{-2·eps_flux}.
pub fn certify(field: &FieldProfile, g: f64, j: usize) -> Result<CertifyOutcome> {
    require_compact_radial(field)?;
    if g < 2.0 {
        return Err(Error::Validation(format!(
            "certify: g = {g} < 2; the certificate targets the anomalous regime"
        )));
    }
    let (flux, n) = mode_range(field)?;
    if flux.f <= 0.0 {
        return Err(Error::Validation(format!(
            "certify needs positive total flux, got F = {:.6}",
            flux.f
        )));
    }
    if (j as i64) > n {
        return Err(Error::Validation(format!("certify: j = {j} exceeds N = {n}")));
    }
    let sup = field.support_radius();
    let cache = PhiCache::new(field);
    let i_j = binding_integral_unchecked(field, j)?;
    let resonance = j as i64 == n;

    // bump dictionary: centers around the maximum of |B χ_j|, three widths
    let cstar = {
        let m = 400;
        let mut best = (0.0_f64, 0.0_f64);
        for k in 1..=m {
            let r = sup * k as f64 / m as f64;
            let w = field.radial_b(r).abs() * (-cache.phi(r)).exp() * r.powi(j as i32);
            if w > best.1 {
                best = (r, w);
            }
        }
        best.0
    };
    let mut centers = vec![cstar, (0.35 * sup).max(cstar), 0.7 * sup];
    centers.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let bumps: Vec<BumpSpec> = centers
        .iter()
        .flat_map(|&c| {
            [0.15, 0.3, 0.5].iter().map(move |&s| BumpSpec {
                center_r: c,
                radius: s * sup,
            })
        })
        .collect();

    let eps_grid: Vec<f64> = std::iter::once(0.0)
        .chain(EPS_MAGNITUDES.iter().flat_map(|m| [*m, -*m]))
        .collect();

    let p = 2.0 * (j as f64 - flux.f) + 1.0;
    let ramp_c = ramp_moment(p);
    let t1_at = |r: f64| 2.0 * PI * r.powf(p - 1.0) * ramp_c;

    let r_grid: Vec<Option<f64>> = if resonance {
        (1..=6).map(|k| Some(sup * (1 << k) as f64)).collect()
    } else {
        vec![None]
    };

    let mut kcache: HashMap<usize, (f64, f64, f64)> = HashMap::new();
    let mut best = (f64::INFINITY, None::<BindingCertificate>);
    let mut try_combo = |r_cut: Option<f64>,
                         bi: usize,
                         bump: &BumpSpec,
                         eps: f64,
                         warning: Option<String>,
                         kcache: &mut HashMap<usize, (f64, f64, f64)>|
     -> Result<Option<BindingCertificate>> {
        let (k1, k2, k3) = if eps != 0.0 {
            if let Some(v) = kcache.get(&bi) {
                *v
            } else {
                let v = bump_integrals(field, &cache, j, bump)?;
                kcache.insert(bi, v);
                v
            }
        } else {
            (0.0, 0.0, 0.0)
        };
        let breakdown = FormBreakdown {
            cutoff_kinetic: r_cut.map_or(0.0, t1_at),
            perturbation_kinetic: eps * eps * k1,
            cross: -(g - 2.0) * eps * k2,
            zeeman: -0.5 * (g - 2.0) * (i_j + eps * eps * k3),
        };
        let total = breakdown.total();
        let cert = BindingCertificate {
            j,
            form_value: total,
            r_cut,
            eps,
            bump: bump.clone(),
            breakdown,
            warning,
        };
        if total < best.0 {
            best = (total, Some(cert.clone()));
        }
        Ok(if total < 0.0 { Some(cert) } else { None })
    };

    for r_cut in &r_grid {
        for (bi, bump) in bumps.iter().enumerate() {
            for &eps in &eps_grid {
                if let Some(cert) = try_combo(*r_cut, bi, bump, eps, None, &mut kcache)? {
                    return Ok(CertifyOutcome::Certified(cert));
                }
            }
        }
    }
    if resonance {
        // extended search: the cutoff term scales like R^{-2 eps_flux},
        // which for small eps_flux needs radii far beyond the base grid
        let mut r = sup * 128.0;
        while r <= sup * 2f64.powi(40) {
            let warning = Some(format!(
                "cutoff radius extended to {:.1}× the field support",
                r / sup
            ));
            for (bi, bump) in bumps.iter().enumerate() {
                for &eps in &eps_grid {
                    if let Some(cert) =
                        try_combo(Some(r), bi, bump, eps, warning.clone(), &mut kcache)?
                    {
                        return Ok(CertifyOutcome::Certified(cert));
                    }
                }
            }
            r *= 2.0;
        }
    }
    let reason = if i_j < 0.0 {
        FailureReason::NegativeBindingIntegral
    } else {
        FailureReason::SearchExhausted
    };
    Ok(CertifyOutcome::Exhausted(SearchFailure {
        j,
        reason,
        binding_integral: i_j,
        best_value: best.0,
    }))
}

/// Root-find the ring amplitude of a sign-changing annulus so that the
/// resonance-mode certificate search cannot close with ε = 0 inside the
/// base cutoff grid: the gap T1(R_max) - (g-2)/2·I_1 is tuned to a small
/// positive margin that only the ε-linear cross term can bridge.
pub fn tuned_linear_term_annulus(g: f64) -> Result<FieldProfile> {
    let make = |y: f64| FieldProfile::Annulus {
        disk_amp: 2.6,
        disk_radius: 1.0,
        ring_amp: y,
        ring_inner: 1.5,
        ring_outer: 2.0,
    };
    let gap = |y: f64| -> Result<f64> {
        let f = make(y);
        let flux = f.total_flux()?;
        let i1 = binding_integral_unchecked(&f, 1)?;
        let p = 2.0 * (1.0 - flux.f) + 1.0;
        let r_max = 64.0 * f.support_radius();
        Ok(2.0 * PI * r_max.powf(p - 1.0) * ramp_moment(p) - 0.5 * (g - 2.0) * i1)
    };
    // gap < 0 at y = -0.20 (ε = 0 already wins), > 0 at y = -0.25
    let (mut lo, mut hi) = (-0.20, -0.25);
    if !(gap(lo)? < 0.0 && gap(hi)? > 0.0) {
        return Err(Error::Validation(format!(
            "tuned annulus: no sign change of the certificate gap over ring amplitudes \
             [{hi}, {lo}] at g = {g}; the tuning targets couplings near g = 3"
        )));
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if gap(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // land on the just-misses side with a deliberate small margin
    let y_root = 0.5 * (lo + hi);
    let mut y = y_root;
    let mut step = 0.25 * (hi - lo).abs().max(1e-6);
    while gap(y)? < 0.02 {
        y -= step;
        step *= 2.0;
    }
    Ok(make(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::CurrentProfile;

    fn disk(b0: f64, radius: f64) -> FieldProfile {
        FieldProfile::uniform_disk(b0, radius)
    }

    /// Interior potential of the uniform unit-disk-supported field:
    /// φ(r) = b0 (r² - R²)/4 + b0 R²/2 · ln R.
    fn disk_phi(b0: f64, radius: f64, r: f64) -> f64 {
        if r >= radius {
            0.5 * b0 * radius * radius * r.ln()
        } else {
            b0 * (r * r - radius * radius) / 4.0 + 0.5 * b0 * radius * radius * radius.ln()
        }
    }

    #[test]
    fn zero_mode_unit_disk_values() {
        let f = disk(1.0, 1.0);
        let v = zero_mode(&f, 0, [0.0, 0.0]).unwrap();
        assert!((v.re - 0.25_f64.exp()).abs() < 1e-9, "{v}");
        assert!(v.im.abs() < 1e-12);

        // j ≥ 1 vanishes at the origin
        let f25 = disk(5.0, 1.0);
        let v = zero_mode(&f25, 1, [0.0, 0.0]).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));

        // angular factor (x₁+ix₂)^j against the closed-form interior φ
        let x = [0.3, 0.4];
        let v = zero_mode(&f25, 2, x).unwrap();
        let z = Complex64::new(0.3, 0.4);
        let expect = z * z * (-disk_phi(5.0, 1.0, 0.5)).exp();
        assert!((v - expect).norm() < 1e-9 * expect.norm(), "{v} vs {expect}");
    }

    #[test]
    fn zero_mode_rejects_j_beyond_resonance() {
        let f = disk(5.0, 1.0); // F = 2.5, N = 2
        assert!(zero_mode(&f, 2, [0.5, 0.0]).is_ok());
        assert!(zero_mode(&f, 3, [0.5, 0.0]).is_err());
    }

    #[test]
    fn zero_mode_far_field_exponent() {
        // |χ_0| ∝ r^{-F} outside the support
        let f = disk(5.0, 1.0);
        let rs = [10.0, 20.0, 40.0, 80.0];
        let vals: Vec<f64> = rs
            .iter()
            .map(|&r| zero_mode(&f, 0, [r, 0.0]).unwrap().norm())
            .collect();
        let slope = (vals[3] / vals[0]).ln() / (rs[3] / rs[0]).ln();
        assert!((slope + 2.5).abs() < 0.05, "decay exponent {slope}");
    }

    #[test]
    fn zero_mode_annihilated_by_covariant_derivative() {
        // finite-difference D χ_j, with A from the same field: the residual
        // probes the consistency φ' = A
        let fields = [
            disk(5.0, 1.0),
            FieldProfile::Annulus {
                disk_amp: -1.0,
                disk_radius: 0.5,
                ring_amp: 2.0,
                ring_inner: 0.8,
                ring_outer: 1.3,
            },
        ];
        for f in &fields {
            let n = f.total_flux().unwrap().n;
            for j in 0..=(n.max(0) as usize) {
                for x in [[0.4, 0.2], [0.9, -0.3], [1.4, 0.1]] {
                    let d = 1e-5;
                    let chi = |p: [f64; 2]| zero_mode(f, j, p).unwrap();
                    let dx = (chi([x[0] + d, x[1]]) - chi([x[0] - d, x[1]])) / (2.0 * d);
                    let dy = (chi([x[0], x[1] + d]) - chi([x[0], x[1] - d])) / (2.0 * d);
                    let a = f.gauge(x).unwrap();
                    let dval = -Complex64::i() * dx + dy
                        - Complex64::new(a[0], a[1]) * chi(x);
                    let scale = chi(x).norm() * (1.0 + a[0].hypot(a[1]));
                    assert!(
                        dval.norm() < 1e-6 * scale.max(1e-6),
                        "D residual {dval} at {x:?}, j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn binding_integral_against_dense_simpson() {
        // independent oracle: closed-form interior φ + composite Simpson
        let (b0, rad) = (5.0, 1.0);
        let f = disk(b0, rad);
        for j in [0usize, 2] {
            let m = 4000;
            let h = rad / m as f64;
            let integrand = |r: f64| {
                b0 * (-2.0 * disk_phi(b0, rad, r)).exp() * r.powi(2 * j as i32 + 1)
            };
            let mut s = integrand(0.0) + integrand(rad);
            for k in 1..m {
                let w = if k % 2 == 1 { 4.0 } else { 2.0 };
                s += w * integrand(k as f64 * h);
            }
            let oracle = 2.0 * PI * s * h / 3.0;
            let val = binding_integral(&f, j).unwrap();
            assert!(
                (val - oracle).abs() < 1e-6 * oracle,
                "j={j}: {val} vs {oracle}"
            );
        }
    }

    #[test]
    fn guaranteed_count_disk_examples() {
        let c = guaranteed_count(&disk(5.0, 1.0)).unwrap();
        assert_eq!(c.n_bound, 3);
        assert_eq!(c.flags, vec![true, true, true]);
        assert_eq!(c.flux.n, 2);

        let c = guaranteed_count(&disk(1.0, 1.0)).unwrap();
        assert_eq!(c.n_bound, 1);

        assert!(guaranteed_count(&disk(-1.0, 1.0)).is_err());
    }

    #[test]
    fn variational_form_f1_trial_is_pure_zeeman() {
        let f = disk(5.0, 1.0);
        let trial = TrialFunction {
            j: 0,
            r_cut: None,
            eps: 0.0,
            bump: BumpSpec {
                center_r: 0.0,
                radius: 0.3,
            },
        };
        let bd = variational_form(&f, 2.5, &trial).unwrap();
        assert_eq!(bd.cutoff_kinetic, 0.0);
        assert_eq!(bd.perturbation_kinetic, 0.0);
        assert_eq!(bd.cross, 0.0);
        let i0 = binding_integral(&f, 0).unwrap();
        assert!((bd.zeeman + 0.25 * i0).abs() < 1e-12 * i0);
        assert!(bd.total() < 0.0);
    }

    #[test]
    fn variational_form_configuration_errors() {
        let f = disk(5.0, 1.0); // N = 2
        let bump = BumpSpec {
            center_r: 0.5,
            radius: 0.2,
        };
        // resonance requires a cutoff
        assert!(variational_form(
            &f,
            2.5,
            &TrialFunction { j: 2, r_cut: None, eps: 0.0, bump: bump.clone() }
        )
        .is_err());
        // normalizable modes reject a cutoff
        assert!(variational_form(
            &f,
            2.5,
            &TrialFunction { j: 0, r_cut: Some(4.0), eps: 0.0, bump: bump.clone() }
        )
        .is_err());
        // cutoff inside the support
        assert!(variational_form(
            &f,
            2.5,
            &TrialFunction { j: 2, r_cut: Some(0.5), eps: 0.0, bump: bump.clone() }
        )
        .is_err());
        // g below the anomalous regime
        assert!(variational_form(
            &f,
            1.5,
            &TrialFunction { j: 0, r_cut: None, eps: 0.0, bump }
        )
        .is_err());
    }

    #[test]
    fn cutoff_term_scales_like_r_to_minus_two_eps() {
        let f = disk(5.0, 1.0); // eps_flux = 0.5
        let bump = BumpSpec {
            center_r: 0.5,
            radius: 0.2,
        };
        let t1 = |r: f64| {
            variational_form(
                &f,
                2.5,
                &TrialFunction {
                    j: 2,
                    r_cut: Some(r),
                    eps: 0.0,
                    bump: bump.clone(),
                },
            )
            .unwrap()
            .cutoff_kinetic
        };
        let ratio = t1(16.0) / t1(8.0);
        let expect = 2f64.powf(-2.0 * 0.5);
        assert!(
            (ratio - expect).abs() < 0.1 * expect,
            "ratio {ratio} vs {expect}"
        );
        // and the exact closed form scales exactly
        assert!((ratio - expect).abs() < 1e-10);
    }

    #[test]
    fn cross_term_is_odd_in_eps() {
        let f = disk(5.0, 1.0);
        let bump = BumpSpec {
            center_r: 0.6,
            radius: 0.25,
        };
        let mk = |eps: f64| TrialFunction {
            j: 1,
            r_cut: None,
            eps,
            bump: bump.clone(),
        };
        let plus = variational_form(&f, 2.5, &mk(0.1)).unwrap();
        let minus = variational_form(&f, 2.5, &mk(-0.1)).unwrap();
        assert!((plus.cross + minus.cross).abs() < 1e-10 * plus.cross.abs());
        assert!((plus.perturbation_kinetic - minus.perturbation_kinetic).abs()
            < 1e-12 * plus.perturbation_kinetic);
        assert!((plus.zeeman - minus.zeeman).abs() < 1e-12 * plus.zeeman.abs());
    }

    #[test]
    fn form_value_decreases_in_g() {
        let f = disk(5.0, 1.0);
        let trial = TrialFunction {
            j: 0,
            r_cut: None,
            eps: 0.0,
            bump: BumpSpec {
                center_r: 0.0,
                radius: 0.3,
            },
        };
        let mut prev = f64::INFINITY;
        for g in [2.001, 2.1, 2.5, 3.0, 4.0] {
            let v = variational_form(&f, g, &trial).unwrap().total();
            assert!(v < prev, "not decreasing at g={g}");
            prev = v;
        }
    }

    #[test]
    fn perturbation_kinetic_matches_finite_difference_oracle() {
        // ∫|Dh|² computed internally from |∇h|² + |A|²h² - Bh²; check it
        // against a brute-force complex finite-difference D on a cartesian
        // Simpson grid
        let f = disk(5.0, 1.0);
        let bump = BumpSpec {
            center_r: 0.5,
            radius: 0.3,
        };
        let trial = TrialFunction {
            j: 0,
            r_cut: None,
            eps: 1.0,
            bump: bump.clone(),
        };
        let internal = variational_form(&f, 2.5, &trial)
            .unwrap()
            .perturbation_kinetic;
        let h_at = |x: [f64; 2]| -> f64 {
            let dx = x[0] - bump.center_r;
            let dy = x[1];
            bump_h((dx * dx + dy * dy) / (bump.radius * bump.radius))
        };
        let n = 240;
        let (x0, x1) = (bump.center_r - bump.radius, bump.center_r + bump.radius);
        let (y0, y1) = (-bump.radius, bump.radius);
        let hx = (x1 - x0) / n as f64;
        let hy = (y1 - y0) / n as f64;
        let fd = 1e-5;
        let mut total = 0.0;
        let simpson_w = |k: usize| -> f64 {
            if k == 0 || k == n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            }
        };
        for iy in 0..=n {
            let y = y0 + iy as f64 * hy;
            for ix in 0..=n {
                let x = x0 + ix as f64 * hx;
                let hv = h_at([x, y]);
                let ddx = (h_at([x + fd, y]) - h_at([x - fd, y])) / (2.0 * fd);
                let ddy = (h_at([x, y + fd]) - h_at([x, y - fd])) / (2.0 * fd);
                let a = f.gauge([x, y]).unwrap();
                let d = Complex64::new(ddy - a[0] * hv, -ddx - a[1] * hv);
                total += simpson_w(ix) * simpson_w(iy) * d.norm_sqr();
            }
        }
        let oracle = total * hx * hy / 9.0;
        assert!(
            (internal - oracle).abs() < 1e-4 * oracle,
            "internal {internal} vs fd {oracle}"
        );
    }

    #[test]
    fn certify_disk_three_modes() {
        let f = disk(5.0, 1.0);
        let g = 2.0023;
        for j in 0..=2usize {
            match certify(&f, g, j).unwrap() {
                CertifyOutcome::Certified(cert) => {
                    assert!(cert.form_value < 0.0);
                    let resum = cert.breakdown.total();
                    assert!(
                        (cert.form_value - resum).abs() <= 1e-10 * resum.abs().max(1e-300),
                        "breakdown must re-sum"
                    );
                    if j < 2 {
                        assert!(cert.r_cut.is_none());
                    } else {
                        // resonance with tiny g-2 needs the extended R grid
                        let r = cert.r_cut.expect("resonance needs a cutoff");
                        assert!(r > 64.0, "cutoff {r}");
                        assert!(cert.warning.is_some());
                    }
                }
                CertifyOutcome::Exhausted(fail) => panic!("mode {j} not certified: {fail:?}"),
            }
        }
    }

    #[test]
    fn certify_fails_at_g_equal_two() {
        let f = disk(5.0, 1.0);
        match certify(&f, 2.0, 0).unwrap() {
            CertifyOutcome::Exhausted(fail) => {
                assert_eq!(fail.reason, FailureReason::SearchExhausted);
                assert!(fail.best_value >= 0.0);
            }
            CertifyOutcome::Certified(c) => panic!("no binding exists at g = 2: {c:?}"),
        }
    }

    #[test]
    fn binding_integrals_stay_positive_for_admissible_modes() {
        // integration by parts with u = j ln r - φ turns I_j into
        // 2∫|∇u|² e^{2u}, with a boundary term ∝ (j-F)·L^{2(j-F)} that
        // vanishes for every admissible j < F; so even violently
        // sign-changing fields keep I_j > 0
        let fields = [
            FieldProfile::Annulus {
                disk_amp: -3.0,
                disk_radius: 0.7,
                ring_amp: 2.9,
                ring_inner: 1.2,
                ring_outer: 1.5,
            },
            FieldProfile::Annulus {
                disk_amp: 2.6,
                disk_radius: 1.0,
                ring_amp: -0.3,
                ring_inner: 1.5,
                ring_outer: 2.0,
            },
            FieldProfile::Annulus {
                disk_amp: -1.0,
                disk_radius: 0.5,
                ring_amp: 2.0,
                ring_inner: 0.8,
                ring_outer: 1.3,
            },
        ];
        for f in &fields {
            let flux = f.total_flux().unwrap();
            assert!(flux.f > 0.0);
            for j in 0..=(flux.n.max(0) as usize) {
                let i_j = binding_integral(f, j).unwrap();
                assert!(i_j > 0.0, "I_{j} = {i_j} for {f:?}");
            }
        }
    }

    #[test]
    fn certify_tuned_annulus_linear_term_prevails() {
        let g = 3.0;
        let f = tuned_linear_term_annulus(g).unwrap();
        let flux = f.total_flux().unwrap();
        assert!(flux.n == 1, "flux {flux:?}");
        match certify(&f, g, 1).unwrap() {
            CertifyOutcome::Certified(cert) => {
                assert!(cert.eps != 0.0, "the linear-in-ε term must carry this case");
                assert!(cert.form_value < 0.0);
                assert!(cert.warning.is_none(), "should resolve inside the base grid");
                // the ε-free part of the form is positive at the chosen R:
                // only the cross term makes the total negative
                let no_eps = cert.breakdown.cutoff_kinetic
                    - 0.5 * (g - 2.0) * binding_integral(&f, 1).unwrap();
                assert!(no_eps > 0.0);
            }
            CertifyOutcome::Exhausted(fail) => panic!("not certified: {fail:?}"),
        }
    }

    #[test]
    fn count_matches_certificates_on_library_profiles() {
        let profiles = [
            disk(1.0, 1.0),
            disk(5.0, 1.0),
            FieldProfile::GaussianBump {
                amp: 4.0,
                width: 0.8,
                cutoff: 3.2,
            },
        ];
        for f in &profiles {
            let count = guaranteed_count(f).unwrap();
            let mut certified = 0;
            for j in 0..count.flags.len() {
                if let CertifyOutcome::Certified(_) = certify(f, 2.1, j).unwrap() {
                    certified += 1;
                }
            }
            assert_eq!(certified, count.n_bound);
        }
    }

    #[test]
    fn rejects_vortex_and_grid_fields() {
        let v = FieldProfile::vortex(CurrentProfile::standard()).unwrap();
        assert!(binding_integral(&v, 0).is_err());
        assert!(guaranteed_count(&v).is_err());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]

        #[test]
        fn prop_certificates_sound_for_random_disks(b0 in 0.6f64..6.0, radius in 0.5f64..1.8) {
            use proptest::prelude::prop_assert;
            let f = disk(b0, radius);
            let count = guaranteed_count(&f).unwrap();
            prop_assert!(count.flags.iter().all(|x| *x));
            match certify(&f, 2.4, 0).unwrap() {
                CertifyOutcome::Certified(cert) => {
                    prop_assert!(cert.form_value < 0.0);
                    prop_assert!(
                        (cert.breakdown.total() - cert.form_value).abs()
                            <= 1e-10 * cert.form_value.abs()
                    );
                }
                CertifyOutcome::Exhausted(fail) => {
                    return Err(proptest::test_runner::TestCaseError::fail(format!(
                        "disk not certified: {fail:?}"
                    )))
                }
            }
        }
    }
}
