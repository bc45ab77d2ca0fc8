//! Complete elliptic integrals and adaptive quadrature.
//!
//! Both elliptic integrals take the *parameter* m = k² (so the logarithmic
//! singularity of K sits at m = 1). The quadrature is a worst-interval-first
//! Gauss-Kronrod 7/15 scheme; integrable endpoint singularities are handled
//! by declaring them in [`QuadratureSpec::singular_points`], which forces an
//! interval boundary there (the rule never samples interval endpoints).
//! Upper limit +∞ is mapped to (0,1) by r = a + t/(1-t).

use crate::{Error, Result};

/// K(m), first kind, by the arithmetic-geometric mean iteration.
///
/// Quadratically convergent; relative error is at the rounding level
/// (≤ 1e-12 requested well inside [0,1)).
pub fn elliptic_k(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::Validation(format!(
            "elliptic_k: parameter m = {m} outside [0,1)"
        )));
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    for _ in 0..40 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let (an, bn) = (0.5 * (a + b), (a * b).sqrt());
        a = an;
        b = bn;
    }
    Ok(std::f64::consts::FRAC_PI_2 / a)
}

/// E(m), second kind. Regular on the whole closed interval [0,1].
///
/// Uses the AGM with the c-sequence correction
/// E = K · (1 - Σ 2^{n-1} c_n²), c_0 = √m, c_{n+1} = (a_n - b_n)/2.
pub fn elliptic_e(m: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::Validation(format!(
            "elliptic_e: parameter m = {m} outside [0,1]"
        )));
    }
    if m == 1.0 {
        return Ok(1.0);
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    let mut c2_sum = 0.5 * m; // 2^{-1} c_0²
    let mut pow2 = 0.5;
    for _ in 0..40 {
        let c = 0.5 * (a - b);
        let (an, bn) = (0.5 * (a + b), (a * b).sqrt());
        a = an;
        b = bn;
        pow2 *= 2.0;
        c2_sum += pow2 * c * c;
        if c.abs() <= 1e-17 * a {
            break;
        }
    }
    Ok(std::f64::consts::FRAC_PI_2 / a * (1.0 - c2_sum))
}

/// Controls for [`integrate`].
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Interior abscissae where the integrand has an integrable singularity
    /// (or a kink worth isolating). Points outside (a,b) are ignored.
    pub singular_points: Vec<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 4000,
            singular_points: Vec::new(),
        }
    }
}

impl QuadratureSpec {
    pub fn with_singularities(points: &[f64]) -> Self {
        QuadratureSpec {
            singular_points: points.to_vec(),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) || self.max_subdivisions == 0 {
            return Err(Error::Validation(
                "quadrature spec: tolerances must be positive, max_subdivisions ≥ 1".into(),
            ));
        }
        Ok(())
    }
}

/// Result of an adaptive integration: value, rigorous-ish error estimate,
/// and how many interval bisections were spent.
#[derive(Debug, Clone, Copy)]
pub struct IntegralEstimate {
    pub value: f64,
    pub abs_err: f64,
    pub subdivisions: usize,
}

// Gauss-Kronrod 7/15 on [-1,1]. Kronrod abscissae/weights, with the embedded
// 7-point Gauss weights attached to every second abscissa.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One Kronrod pass over [a,b]: returns (value, error estimate).
fn qk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut result_g = WG[3] * fc;
    let mut result_k = WGK[7] * fc;
    let mut fv = [0.0_f64; 15];
    fv[7] = fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        result_k += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            result_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * result_k;
    // resasc: Kronrod estimate of ∫|f - mean|, used to rescale the raw
    // |K - G| difference the way QUADPACK does, so the estimate stays
    // meaningful next to singularities.
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }
    resasc *= half.abs();
    let raw = ((result_k - result_g) * half).abs();
    let err = if resasc != 0.0 && raw != 0.0 {
        resasc * 1.0_f64.min((200.0 * raw / resasc).powf(1.5))
    } else {
        raw
    };
    (result_k * half, err)
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    /// Lives in the mapped coordinate t of the r = origin + t/(1-t) tail.
    tail: bool,
}

/// Adaptive integration of `f` over (a,b); `b` may be `f64::INFINITY`.
///
/// The interval is split at every declared singular point, the (mapped) tail
/// is handled like any other segment, and the segment with the worst error
/// estimate is bisected until the target `max(abs_tol, rel_tol·|I|)` is met.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    integrate_full(f, a, b, spec).map(|e| e.value)
}

/// Same as [`integrate`] but exposing the error estimate and work count.
pub fn integrate_full(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralEstimate> {
    spec.validate()?;
    if !a.is_finite() {
        return Err(Error::Validation(format!(
            "integrate: lower limit {a} must be finite"
        )));
    }
    if b.is_nan() || b <= a {
        return Err(Error::Validation(format!(
            "integrate: bad interval ({a}, {b})"
        )));
    }

    let infinite = b.is_infinite();
    // Map (cut, ∞) to t ∈ (0,1); finite work happens on (a, cut).
    let mut cuts: Vec<f64> = spec
        .singular_points
        .iter()
        .copied()
        .filter(|p| p.is_finite() && *p > a && *p < b)
        .collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();

    let tail_origin = if infinite { *cuts.last().unwrap_or(&a) } else { b };
    let g = |t: f64| {
        if infinite {
            let om = 1.0 - t;
            f(tail_origin + t / om) / (om * om)
        } else {
            0.0
        }
    };

    let mut segs: Vec<Segment> = Vec::new();
    let mut edges = vec![a];
    edges.extend_from_slice(&cuts);
    if !infinite {
        edges.push(b);
    }
    for w in edges.windows(2) {
        if w[1] > w[0] {
            let (v, e) = qk15(&f, w[0], w[1]);
            segs.push(Segment {
                a: w[0],
                b: w[1],
                value: v,
                err: e,
                tail: false,
            });
        }
    }
    if infinite {
        let (v, e) = qk15(&g, 0.0, 1.0);
        segs.push(Segment {
            a: 0.0,
            b: 1.0,
            value: v,
            err: e,
            tail: true,
        });
    }

    // Intervals narrowed to rounding resolution are retired as-is: further
    // bisection would place rule nodes exactly on the singular endpoint.
    let mut retired_value = 0.0;
    let mut retired_err = 0.0;
    let mut used = 0usize;
    loop {
        let value: f64 = retired_value + segs.iter().map(|s| s.value).sum::<f64>();
        let err: f64 = retired_err + segs.iter().map(|s| s.err).sum::<f64>();
        if !value.is_finite() || err.is_nan() {
            return Err(Error::Convergence(
                "integrate: integrand produced non-finite samples".into(),
            ));
        }
        let target = spec.abs_tol.max(spec.rel_tol * value.abs());
        if err <= target {
            return Ok(IntegralEstimate {
                value,
                abs_err: err,
                subdivisions: used,
            });
        }
        if used >= spec.max_subdivisions || segs.is_empty() {
            return Err(Error::Convergence(format!(
                "integrate: tolerance not met after {used} subdivisions \
                 (best estimate {value:.16e}, error bound {err:.3e})"
            )));
        }
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let s = segs.swap_remove(worst);
        // 250 ulp of the endpoint scale: below this, children's rule nodes
        // would round exactly onto a singular endpoint.
        let width_floor = 1e-13 * s.a.abs().max(s.b.abs()).max(1.0);
        if s.b - s.a <= width_floor {
            retired_value += s.value;
            retired_err += s.err;
            continue;
        }
        used += 1;
        let mid = 0.5 * (s.a + s.b);
        for (x0, x1) in [(s.a, mid), (mid, s.b)] {
            let (v, e) = if s.tail { qk15(&g, x0, x1) } else { qk15(&f, x0, x1) };
            segs.push(Segment {
                a: x0,
                b: x1,
                value: v,
                err: e,
                tail: s.tail,
            });
        }
    }
}
