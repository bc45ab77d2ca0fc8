//! Magnetic field profiles and azimuthal current profiles.
//!
//! Two families matter here. Compactly supported fields (disk, annulus,
//! windowed Gaussian, sample table, planar grid) carry positive flux and feed
//! the zero-mode machinery. Current vortices carry exactly zero flux; their
//! vector potential comes from an elliptic-integral kernel and is tabulated
//! once per profile so the eigensolvers can sample it millions of times.
//!
//! Conventions: natural units 2m = ħ = c = e = 1 throughout; flux is measured
//! in units of 2π ("F" below); for radial fields A denotes the azimuthal
//! component in the rotational gauge, related to the field by
//! B = A' + A/r.

use crate::specfun::{self, QuadratureSpec};
use crate::{Error, Result};
use std::f64::consts::PI;
use std::sync::Arc;

/// Total flux F (units of 2π) split as F = N + eps with eps ∈ (0,1].
///
/// N is the number of square-integrable zero modes for F > 0; index j = N is
/// the zero-energy resonance. For F ≤ 0 the decomposition is still well
/// defined (N goes negative) but no zero modes exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxDecomposition {
    pub f: f64,
    pub n: i64,
    pub eps: f64,
}

impl FluxDecomposition {
    pub fn from_flux(f: f64) -> Self {
        let n = f.ceil() as i64 - 1;
        FluxDecomposition {
            f,
            n,
            eps: f - n as f64,
        }
    }
}

/// Azimuthal current density J(r) = amp · r^power · exp(-r/scale).
///
/// power ≥ 2 keeps J twice differentiable at the origin with
/// J(r)/r² → a finite; the exponential factor more than satisfies the
/// required r^{-(3+ε)} far-field bound.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentProfile {
    pub amp: f64,
    pub power: f64,
    pub scale: f64,
}

impl CurrentProfile {
    /// J(r) = r² e^{-r}, the profile used throughout the test suite.
    pub fn standard() -> Self {
        CurrentProfile {
            amp: 1.0,
            power: 2.0,
            scale: 1.0,
        }
    }

    pub fn j(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        self.amp * r.powf(self.power) * (-r / self.scale).exp()
    }

    /// Leading Taylor coefficient a = lim J/r².
    pub fn leading_coefficient(&self) -> f64 {
        if self.power == 2.0 {
            self.amp
        } else {
            0.0
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amp >= 0.0) {
            return Err(Error::Validation("current profile: amp must be ≥ 0".into()));
        }
        if !(self.power >= 2.0) {
            return Err(Error::Validation(
                "current profile: power must be ≥ 2 (J/r² must stay finite)".into(),
            ));
        }
        if !(self.scale > 0.0) {
            return Err(Error::Validation(
                "current profile: scale must be > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Moments of a current profile: dipole moment m, the strength
/// μ = ∫ J(r') dr'/r' that sets the small-r slope of A, and the leading
/// Taylor coefficient a.
#[derive(Debug, Clone, Copy)]
pub struct CurrentMoments {
    pub dipole: f64,
    pub mu: f64,
    pub a: f64,
}

/// m = π ∫ J r'² dr', μ = ∫ J dr'/r', a = lim J/r².
pub fn current_moments(current: &CurrentProfile) -> Result<CurrentMoments> {
    current.validate()?;
    let spec = QuadratureSpec::default();
    let dipole = PI * specfun::integrate(|r| current.j(r) * r * r, 0.0, f64::INFINITY, &spec)?;
    let mu = specfun::integrate(|r| current.j(r) / r, 0.0, f64::INFINITY, &spec)?;
    Ok(CurrentMoments {
        dipole,
        mu,
        a: current.leading_coefficient(),
    })
}

/// K(m) - E(m), guarding the small-m cancellation with the series
/// (π/4) m (1 + 3m/8 + 15m²/64 + …).
fn ke_difference(m: f64) -> Result<f64> {
    if m < 1e-4 {
        return Ok(PI / 4.0 * m * (1.0 + 0.375 * m + 0.234375 * m * m));
    }
    Ok(specfun::elliptic_k(m)? - specfun::elliptic_e(m)?)
}

/// The azimuthal vector potential of the current vortex at strength λ:
///
///   A(r) = (4λ/π) ∫₀^∞ J(r') (r'/r_<) [K(m) - E(m)] dr',   m = (r_</r_>)²
///
/// with r_< = min(r,r'), r_> = max(r,r'). The kernel has an integrable
/// logarithmic singularity at r' = r (declared to the quadrature); the
/// integral is finite for every r. The 1/π relative to the bare elliptic
/// form normalizes the small-r slope to exactly λμ, which is the convention
/// every downstream expansion here assumes; see the module tests, where the
/// whole expression is pinned against a Biot-Savart double integral.
pub fn vortex_vector_potential(current: &CurrentProfile, lambda: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Validation(format!(
            "vortex_vector_potential: r = {r} must be > 0"
        )));
    }
    current.validate()?;
    let spec = QuadratureSpec {
        singular_points: vec![r],
        ..Default::default()
    };
    let integrand = |rp: f64| -> f64 {
        if rp <= 0.0 {
            return 0.0;
        }
        let (rlt, rgt) = if r < rp { (r, rp) } else { (rp, r) };
        let m = (rlt / rgt) * (rlt / rgt);
        let ke = ke_difference(m.min(1.0 - 1e-16)).unwrap_or(f64::NAN);
        current.j(rp) * (rp / rlt) * ke
    };
    let v = specfun::integrate(integrand, 0.0, f64::INFINITY, &spec)?;
    Ok(4.0 * lambda / PI * v)
}

/// Monotone cubic (Fritsch-Carlson) interpolation table.
#[derive(Debug, Clone)]
pub(crate) struct PchipTable {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl PchipTable {
    pub(crate) fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n < 3 || ys.len() != n {
            return Err(Error::Validation(
                "interpolation table needs ≥ 3 matching knots".into(),
            ));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Validation(
                "interpolation knots must be strictly increasing".into(),
            ));
        }
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let del: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
        let mut ds = vec![0.0; n];
        for i in 1..n - 1 {
            if del[i - 1] * del[i] > 0.0 {
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                ds[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
            }
        }
        ds[0] = Self::edge_slope(h[0], h[1], del[0], del[1]);
        ds[n - 1] = Self::edge_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
        Ok(PchipTable { xs, ys, ds })
    }

    fn edge_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
        let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if d * d0 <= 0.0 {
            0.0
        } else if d0 * d1 < 0.0 && d.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            d
        }
    }

    pub(crate) fn lo(&self) -> f64 {
        self.xs[0]
    }

    pub(crate) fn hi(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    fn segment(&self, x: f64) -> usize {
        let k = self.xs.partition_point(|&v| v <= x);
        k.clamp(1, self.xs.len() - 1) - 1
    }

    /// Hermite evaluation; x is clamped to the knot range.
    pub(crate) fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(self.lo(), self.hi());
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.ds[i] + h01 * self.ys[i + 1] + h11 * h * self.ds[i + 1]
    }

    pub(crate) fn eval_deriv(&self, x: f64) -> f64 {
        let x = x.clamp(self.lo(), self.hi());
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let dh00 = (6.0 * t2 - 6.0 * t) / h;
        let dh10 = 3.0 * t2 - 4.0 * t + 1.0;
        let dh01 = (-6.0 * t2 + 6.0 * t) / h;
        let dh11 = 3.0 * t2 - 2.0 * t;
        dh00 * self.ys[i] + dh10 * self.ds[i] + dh01 * self.ys[i + 1] + dh11 * self.ds[i + 1]
    }
}

/// Prebuilt vortex field at unit strength: A tabulated on a log grid,
/// matched to the exact small-r (λμr) and far-field (m₂/r² + 3m₄/8r⁴)
/// expansions outside the tabulated window; B = A' + A/r from the
/// interpolant's own derivative, so A and B cannot drift apart.
#[derive(Debug, Clone)]
pub struct VortexField {
    pub current: CurrentProfile,
    table: Arc<PchipTable>,
    mu: f64,
    m2: f64,
    m4: f64,
}

impl VortexField {
    pub fn new(current: CurrentProfile) -> Result<Self> {
        current.validate()?;
        let spec = QuadratureSpec::default();
        let mu = specfun::integrate(|r| current.j(r) / r, 0.0, f64::INFINITY, &spec)?;
        let m2 = specfun::integrate(|r| current.j(r) * r * r, 0.0, f64::INFINITY, &spec)?;
        let m4 = specfun::integrate(|r| current.j(r) * r.powi(4), 0.0, f64::INFINITY, &spec)?;
        let s = current.scale;
        let (r_lo, r_hi, nk) = (1e-6 * s, 300.0 * s, 3000);
        let ratio = (r_hi / r_lo).ln() / (nk - 1) as f64;
        let xs: Vec<f64> = (0..nk)
            .map(|k| r_lo * (ratio * k as f64).exp())
            .collect();
        let mut ys = Vec::with_capacity(nk);
        for &r in &xs {
            ys.push(vortex_vector_potential(&current, 1.0, r)?);
        }
        Ok(VortexField {
            current,
            table: Arc::new(PchipTable::new(xs, ys)?),
            mu,
            m2,
            m4,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// A(r) at unit strength.
    pub fn a1(&self, r: f64) -> f64 {
        if r <= 0.0 {
            0.0
        } else if r < self.table.lo() {
            self.mu * r
        } else if r > self.table.hi() {
            self.m2 / (r * r) + 0.375 * self.m4 / r.powi(4)
        } else {
            self.table.eval(r)
        }
    }

    /// B(r) at unit strength.
    pub fn b1(&self, r: f64) -> f64 {
        if r <= 0.0 || r < self.table.lo() {
            2.0 * self.mu
        } else if r > self.table.hi() {
            -self.m2 / r.powi(3) - 1.125 * self.m4 / r.powi(5)
        } else {
            self.table.eval_deriv(r) + self.table.eval(r) / r
        }
    }

    /// ∫ |A|² d²x at unit strength. Integrates the table interval by
    /// interval (4-point Gauss is exact for r·cubic²) with closed-form
    /// head and far-tail pieces.
    pub(crate) fn gauge_energy_unit(&self) -> f64 {
        const GX: [f64; 2] = [0.3399810435848563, 0.8611363115940526];
        const GW: [f64; 2] = [0.6521451548625461, 0.3478548451374538];
        let gl4 = |a: f64, b: f64, f: &dyn Fn(f64) -> f64| -> f64 {
            let c = 0.5 * (a + b);
            let h = 0.5 * (b - a);
            let mut s = 0.0;
            for i in 0..2 {
                s += GW[i] * (f(c - h * GX[i]) + f(c + h * GX[i]));
            }
            h * s
        };
        let t = &self.table;
        let mut acc = self.mu * self.mu * t.lo().powi(4) / 4.0;
        let f = |s: f64| {
            let a = t.eval(s);
            a * a * s
        };
        for w in t.xs.windows(2) {
            acc += gl4(w[0], w[1], &f);
        }
        let hi = t.hi();
        acc += self.m2 * self.m2 / (2.0 * hi * hi)
            + 0.1875 * self.m2 * self.m4 / hi.powi(4)
            + 0.0234375 * self.m4 * self.m4 / hi.powi(6);
        2.0 * PI * acc
    }

    /// ∬ B ln|x-x'| B d²x d²x' at unit strength, through the angular
    /// reduction 4π² ∫ b(r) φ̃(r) r dr with φ̃(r) = ∫ b(s) ln(max(r,s)) s ds.
    ///
    /// Everything is integrated interval by interval over the table (fixed
    /// Gauss rules, knots as breakpoints) with closed-form moment tails, so
    /// this is an independent route from [`VortexField::gauge_energy_unit`]:
    /// the two are only equal because ln|x-x'| pairs against a zero-flux
    /// field.
    pub(crate) fn pair_interaction_unit(&self) -> f64 {
        let t = &self.table;
        let n = t.xs.len();
        let (lo, hi) = (t.lo(), t.hi());
        let b = |s: f64| self.b1(s);
        // right-cumulative T_k = ∫_{x_k}^{hi} b s ln s ds + closed tail
        let tail_hi = -self.m2 * (hi.ln() + 1.0) / hi
            - 0.375 * self.m4 * (hi.ln() + 1.0 / 3.0) / hi.powi(3);
        let mut tcum = vec![0.0; n];
        tcum[n - 1] = tail_hi;
        for k in (0..n - 1).rev() {
            tcum[k] = tcum[k + 1] + gl7(t.xs[k], t.xs[k + 1], |s| b(s) * s * s.ln());
        }
        // φ̃(r) = ln r · r·a1(r) + ∫_r^∞ b s ln s ds, r inside the window
        let phi_tilde = |r: f64, seg: usize| -> f64 {
            let part = gl7(r, t.xs[seg + 1], |s| b(s) * s * s.ln());
            r.ln() * r * self.a1(r) + part + tcum[seg + 1]
        };
        // head: b = 2μ, φ̃ continuous at 0; GL on (0, lo) is negligible mass
        let phi_head = |r: f64| -> f64 {
            let part = gl7(r, lo, |s| 2.0 * self.mu * s * s.ln());
            if r <= 0.0 {
                part + tcum[0]
            } else {
                r.ln() * r * self.a1(r) + part + tcum[0]
            }
        };
        let mut acc = gl7(0.0, lo, |s| 2.0 * self.mu * phi_head(s) * s);
        for k in 0..n - 1 {
            acc += gl7(t.xs[k], t.xs[k + 1], |s| b(s) * phi_tilde(s, k) * s);
        }
        // tail: b and φ̃ both in closed moment form beyond the window
        acc += self.m2 * self.m2 / (2.0 * hi * hi)
            + 0.3125 * self.m2 * self.m4 / hi.powi(4)
            + 0.0234375 * self.m4 * self.m4 / hi.powi(6);
        4.0 * PI * PI * acc
    }
}

/// Cell-centred planar samples loaded from a grid file.
///
/// File layout (plain text): a header line `nx ny x0 y0 h`, then nx·ny
/// whitespace-separated field values in row-major order (iy outer, ix
/// inner). Sample (ix,iy) is the constant field value on the h×h cell
/// centred at (x0 + ix·h, y0 + iy·h). The field is zero outside the
/// covered rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub h: f64,
    pub samples: Vec<f64>,
}

impl GridField {
    pub fn new(nx: usize, ny: usize, x0: f64, y0: f64, h: f64, samples: Vec<f64>) -> Result<Self> {
        if nx == 0 || ny == 0 || samples.len() != nx * ny {
            return Err(Error::Validation(format!(
                "grid: expected nx·ny = {} samples, got {}",
                nx * ny,
                samples.len()
            )));
        }
        if !(h > 0.0) || !x0.is_finite() || !y0.is_finite() {
            return Err(Error::Validation("grid: bad geometry header".into()));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("grid: non-finite sample".into()));
        }
        Ok(GridField {
            nx,
            ny,
            x0,
            y0,
            h,
            samples,
        })
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("grid {}: {e}", path.display())))?;
        Self::from_str_data(&text)
    }

    pub fn from_str_data(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Validation("grid: empty file".into()))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 5 {
            return Err(Error::Validation(
                "grid: header must be `nx ny x0 y0 h`".into(),
            ));
        }
        let nx: usize = head[0]
            .parse()
            .map_err(|_| Error::Validation(format!("grid: bad nx `{}`", head[0])))?;
        let ny: usize = head[1]
            .parse()
            .map_err(|_| Error::Validation(format!("grid: bad ny `{}`", head[1])))?;
        let parse_f = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| Error::Validation(format!("grid: bad number `{s}`")))
        };
        let x0 = parse_f(head[2])?;
        let y0 = parse_f(head[3])?;
        let h = parse_f(head[4])?;
        let mut samples = Vec::with_capacity(nx * ny);
        for line in lines {
            for tok in line.split_whitespace() {
                samples.push(parse_f(tok)?);
            }
        }
        Self::new(nx, ny, x0, y0, h, samples)
    }

    pub fn to_file(&self, path: &std::path::Path) -> Result<()> {
        use std::fmt::Write as _;
        let mut out = String::new();
        writeln!(out, "{} {} {} {} {}", self.nx, self.ny, self.x0, self.y0, self.h).unwrap();
        for iy in 0..self.ny {
            let row: Vec<String> = (0..self.nx)
                .map(|ix| format!("{}", self.samples[iy * self.nx + ix]))
                .collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
        std::fs::write(path, out).map_err(|e| Error::Io(format!("grid {}: {e}", path.display())))
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.samples[iy * self.nx + ix]
    }

    pub fn center(&self, ix: usize, iy: usize) -> [f64; 2] {
        [self.x0 + ix as f64 * self.h, self.y0 + iy as f64 * self.h]
    }

    pub fn b_at(&self, x: [f64; 2]) -> f64 {
        let ix = ((x[0] - self.x0) / self.h).round();
        let iy = ((x[1] - self.y0) / self.h).round();
        if ix < 0.0 || iy < 0.0 || ix >= self.nx as f64 || iy >= self.ny as f64 {
            0.0
        } else {
            self.value(ix as usize, iy as usize)
        }
    }

    pub fn support_radius(&self) -> f64 {
        let mut r2max: f64 = 0.0;
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                if self.value(ix, iy) != 0.0 {
                    let c = self.center(ix, iy);
                    r2max = r2max.max(c[0] * c[0] + c[1] * c[1]);
                }
            }
        }
        if r2max == 0.0 {
            0.0
        } else {
            r2max.sqrt() + self.h * std::f64::consts::FRAC_1_SQRT_2
        }
    }
}

/// A planar magnetic field.
///
/// All variants except `Grid` are rotationally symmetric; all variants
/// except `Vortex` are compactly supported.
#[derive(Debug, Clone)]
pub enum FieldProfile {
    /// B = b0 on the disk r < radius.
    UniformDisk { b0: f64, radius: f64 },
    /// B = disk_amp on r < disk_radius, ring_amp on ring_inner ≤ r < ring_outer.
    Annulus {
        disk_amp: f64,
        disk_radius: f64,
        ring_amp: f64,
        ring_inner: f64,
        ring_outer: f64,
    },
    /// B = amp·exp(-(r/width)²) truncated at r = cutoff. With cutoff ≥ 4
    /// widths the truncation jump is below 1e-6·amp.
    GaussianBump { amp: f64, width: f64, cutoff: f64 },
    /// Monotone-cubic interpolated radial samples; zero beyond the last knot.
    RadialTable(RadialTableField),
    /// Zero-flux current vortex at unit strength.
    Vortex(VortexField),
    /// Piecewise-constant planar samples.
    Grid(GridField),
}

/// Radial sample table with a prebuilt cumulative flux so that A(r) is an
/// exact integral of the interpolant.
#[derive(Debug, Clone)]
pub struct RadialTableField {
    pchip: Arc<PchipTable>,
    /// ∫₀^{r_k} b s ds at each knot.
    cumflux: Arc<Vec<f64>>,
}

impl RadialTableField {
    pub fn new(rs: Vec<f64>, bs: Vec<f64>) -> Result<Self> {
        if rs.first().copied() != Some(0.0) {
            return Err(Error::Validation(
                "radial table must start at r = 0".into(),
            ));
        }
        let pchip = PchipTable::new(rs, bs)?;
        let mut cum = vec![0.0];
        let n = pchip.xs.len();
        for i in 0..n - 1 {
            let v = gl3(pchip.xs[i], pchip.xs[i + 1], |s| pchip.eval(s) * s);
            cum.push(cum[i] + v);
        }
        Ok(RadialTableField {
            pchip: Arc::new(pchip),
            cumflux: Arc::new(cum),
        })
    }

    pub fn b(&self, r: f64) -> f64 {
        if r < 0.0 || r > self.pchip.hi() {
            0.0
        } else {
            self.pchip.eval(r)
        }
    }

    /// ∫₀^r b s ds.
    pub fn flux_through(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        if r >= self.pchip.hi() {
            return *self.cumflux.last().unwrap();
        }
        let i = self.pchip.segment(r);
        self.cumflux[i] + gl3(self.pchip.xs[i], r, |s| self.pchip.eval(s) * s)
    }

    pub fn max_r(&self) -> f64 {
        self.pchip.hi()
    }
}

/// 3-point Gauss-Legendre on [a,b]; exact through degree 5, which covers
/// r·(cubic interpolant) exactly.
fn gl3(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    const X: f64 = 0.7745966692414834; // sqrt(3/5)
    const W0: f64 = 0.8888888888888888;
    const W1: f64 = 0.5555555555555556;
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    h * (W0 * f(c) + W1 * (f(c - h * X) + f(c + h * X)))
}

/// 7-point Gauss-Legendre on [a,b]; exact through degree 13. Used for
/// per-interval integrals over the vortex table, where the integrand is a
/// low-degree polynomial times a slowly varying logarithm.
fn gl7(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    const X: [f64; 3] = [
        0.4058451513773972,
        0.7415311855993945,
        0.9491079123427585,
    ];
    const W: [f64; 4] = [
        0.4179591836734694,
        0.3818300505051189,
        0.2797053914892766,
        0.1294849661688697,
    ];
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = W[0] * f(c);
    for i in 0..3 {
        s += W[i + 1] * (f(c - h * X[i]) + f(c + h * X[i]));
    }
    h * s
}

impl FieldProfile {
    pub fn uniform_disk(b0: f64, radius: f64) -> Self {
        FieldProfile::UniformDisk { b0, radius }
    }

    pub fn vortex(current: CurrentProfile) -> Result<Self> {
        Ok(FieldProfile::Vortex(VortexField::new(current)?))
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |c: bool, msg: &str| {
            if c {
                Ok(())
            } else {
                Err(Error::Validation(format!("field: {msg}")))
            }
        };
        match self {
            FieldProfile::UniformDisk { radius, .. } => ok(*radius > 0.0, "disk radius must be > 0"),
            FieldProfile::Annulus {
                disk_radius,
                ring_inner,
                ring_outer,
                ..
            } => ok(
                *disk_radius > 0.0 && ring_inner >= disk_radius && ring_outer > ring_inner,
                "annulus needs 0 < disk_radius ≤ ring_inner < ring_outer",
            ),
            FieldProfile::GaussianBump { width, cutoff, .. } => ok(
                *width > 0.0 && *cutoff >= 2.0 * width,
                "gaussian bump needs width > 0 and cutoff ≥ 2·width",
            ),
            FieldProfile::RadialTable(_) | FieldProfile::Vortex(_) | FieldProfile::Grid(_) => {
                Ok(())
            }
        }
    }

    pub fn is_radial(&self) -> bool {
        !matches!(self, FieldProfile::Grid(_))
    }

    pub fn is_compact(&self) -> bool {
        !matches!(self, FieldProfile::Vortex(_))
    }

    /// Radius of the smallest origin-centred disk containing the support
    /// (infinite for vortex fields).
    pub fn support_radius(&self) -> f64 {
        match self {
            FieldProfile::UniformDisk { radius, .. } => *radius,
            FieldProfile::Annulus { ring_outer, .. } => *ring_outer,
            FieldProfile::GaussianBump { cutoff, .. } => *cutoff,
            FieldProfile::RadialTable(t) => t.max_r(),
            FieldProfile::Vortex(_) => f64::INFINITY,
            FieldProfile::Grid(g) => g.support_radius(),
        }
    }

    /// B(r) for rotationally symmetric profiles. Panics on grids; use
    /// [`FieldProfile::b_at`] for those.
    pub fn radial_b(&self, r: f64) -> f64 {
        match self {
            FieldProfile::UniformDisk { b0, radius } => {
                if r < *radius {
                    *b0
                } else {
                    0.0
                }
            }
            FieldProfile::Annulus {
                disk_amp,
                disk_radius,
                ring_amp,
                ring_inner,
                ring_outer,
            } => {
                if r < *disk_radius {
                    *disk_amp
                } else if r >= *ring_inner && r < *ring_outer {
                    *ring_amp
                } else {
                    0.0
                }
            }
            FieldProfile::GaussianBump { amp, width, cutoff } => {
                if r < *cutoff {
                    amp * (-(r / width) * (r / width)).exp()
                } else {
                    0.0
                }
            }
            FieldProfile::RadialTable(t) => t.b(r),
            FieldProfile::Vortex(v) => v.b1(r),
            FieldProfile::Grid(_) => panic!("radial_b on a planar grid field"),
        }
    }

    pub fn b_at(&self, x: [f64; 2]) -> f64 {
        match self {
            FieldProfile::Grid(g) => g.b_at(x),
            _ => self.radial_b(x[0].hypot(x[1])),
        }
    }

    /// Radii where B is discontinuous or non-smooth (quadrature split points).
    pub(crate) fn radial_breakpoints(&self) -> Vec<f64> {
        match self {
            FieldProfile::UniformDisk { radius, .. } => vec![*radius],
            FieldProfile::Annulus {
                disk_radius,
                ring_inner,
                ring_outer,
                ..
            } => vec![*disk_radius, *ring_inner, *ring_outer],
            FieldProfile::GaussianBump { cutoff, .. } => vec![*cutoff],
            FieldProfile::RadialTable(t) => vec![t.max_r()],
            FieldProfile::Vortex(v) => vec![v.table.lo(), v.table.hi()],
            FieldProfile::Grid(_) => vec![],
        }
    }

    /// ∫₀^r B(s) s ds: the flux through the disk of radius r, divided by 2π.
    pub(crate) fn flux_through(&self, r: f64) -> f64 {
        match self {
            FieldProfile::UniformDisk { b0, radius } => {
                let rr = r.min(*radius);
                0.5 * b0 * rr * rr
            }
            FieldProfile::Annulus {
                disk_amp,
                disk_radius,
                ring_amp,
                ring_inner,
                ring_outer,
            } => {
                let rd = r.min(*disk_radius);
                let ri = r.clamp(*ring_inner, *ring_outer);
                0.5 * disk_amp * rd * rd + 0.5 * ring_amp * (ri * ri - ring_inner * ring_inner)
            }
            FieldProfile::GaussianBump { amp, width, cutoff } => {
                let rr = r.min(*cutoff);
                0.5 * amp * width * width * (1.0 - (-(rr / width) * (rr / width)).exp())
            }
            FieldProfile::RadialTable(t) => t.flux_through(r),
            FieldProfile::Vortex(v) => {
                if r <= 0.0 {
                    0.0
                } else {
                    r * v.a1(r)
                }
            }
            FieldProfile::Grid(_) => panic!("flux_through on a planar grid field"),
        }
    }

    /// Total flux in units of 2π, decomposed as N + eps.
    pub fn total_flux(&self) -> Result<FluxDecomposition> {
        self.validate()?;
        let f = match self {
            FieldProfile::Grid(g) => {
                g.samples.iter().sum::<f64>() * g.h * g.h / (2.0 * PI)
            }
            FieldProfile::Vortex(v) => {
                // F = lim r·A(r); the far field has no 1/r term in A, so
                // r·A ~ m₂/r and one Richardson step in 1/r removes it
                let r = 1e6 * v.current.scale;
                2.0 * (2.0 * r) * v.a1(2.0 * r) - r * v.a1(r)
            }
            _ => self.flux_through(self.support_radius()),
        };
        if !f.is_finite() {
            return Err(Error::Convergence("total_flux: non-finite flux".into()));
        }
        Ok(FluxDecomposition::from_flux(f))
    }

    /// The logarithmic potential φ(x) = (1/2π) ∫ B(y) ln|x-y| d²y.
    ///
    /// Radial profiles use the 1D reduction φ(r) = ∫ B(s) ln(max(r,s)) s ds;
    /// outside the support this is exactly F·ln r. Grid fields use the exact
    /// integral of ln|x-y| over every constant cell, so the only error is the
    /// piecewise-constant field model itself. Requires compact support.
    pub fn log_potential(&self, x: [f64; 2]) -> Result<f64> {
        if !self.is_compact() {
            return Err(Error::Validation(
                "log_potential requires a compactly supported field".into(),
            ));
        }
        match self {
            FieldProfile::Grid(g) => Ok(grid_log_potential(g, x)),
            _ => {
                let r = x[0].hypot(x[1]);
                let sup = self.support_radius();
                if r >= sup {
                    return Ok(self.flux_through(sup) * r.ln());
                }
                let mut pts = self.radial_breakpoints();
                pts.push(r);
                let spec = QuadratureSpec {
                    abs_tol: 1e-12,
                    rel_tol: 1e-12,
                    singular_points: pts,
                    ..Default::default()
                };
                specfun::integrate(
                    |s| self.radial_b(s) * s * r.max(s).ln(),
                    0.0,
                    sup,
                    &spec,
                )
            }
        }
    }

    /// The gauge field A = (-∂₂φ, ∂₁φ), so that curl A = B.
    ///
    /// Radial profiles return the rotational gauge built from
    /// [`FieldProfile::radial_vector_potential`]; grids differentiate the
    /// exact cell integrals in closed form.
    pub fn gauge(&self, x: [f64; 2]) -> Result<[f64; 2]> {
        match self {
            FieldProfile::Grid(g) => Ok(grid_gauge(g, x)),
            _ => {
                let r = x[0].hypot(x[1]);
                if r == 0.0 {
                    return Ok([0.0, 0.0]);
                }
                let a = self.radial_vector_potential(r)?;
                Ok([-a * x[1] / r, a * x[0] / r])
            }
        }
    }

    /// Azimuthal A(r) = (1/r)∫₀^r B s ds for rotationally symmetric fields;
    /// the unique gauge regular at the origin.
    pub fn radial_vector_potential(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Validation(format!(
                "radial_vector_potential: r = {r} must be > 0"
            )));
        }
        if !self.is_radial() {
            return Err(Error::Validation(
                "radial_vector_potential needs a rotationally symmetric field".into(),
            ));
        }
        Ok(self.flux_through(r) / r)
    }
}

/// ∬_cell ln|x-y| d²y over an axis-aligned rectangle, in closed form.
///
/// With G(u,v) = uv·ln(u²+v²) - 3uv + u²·atan(v/u) + v²·atan(u/v) one has
/// ∂²G/∂u∂v = ln(u²+v²), so the rectangle integral is half the alternating
/// corner sum of G in the shifted coordinates u = y₁-x₁, v = y₂-x₂.
fn cell_ln_integral(x: [f64; 2], x1: f64, x2: f64, y1: f64, y2: f64) -> f64 {
    let big_g = |u: f64, v: f64| -> f64 {
        if u == 0.0 && v == 0.0 {
            return 0.0;
        }
        let mut s = u * v * (u * u + v * v).ln() - 3.0 * u * v;
        if u != 0.0 {
            s += u * u * (v / u).atan();
        }
        if v != 0.0 {
            s += v * v * (u / v).atan();
        }
        s
    };
    let (a, b) = (x1 - x[0], x2 - x[0]);
    let (c, d) = (y1 - x[1], y2 - x[1]);
    0.5 * (big_g(b, d) - big_g(a, d) - big_g(b, c) + big_g(a, c))
}

/// ∂/∂u of G above: G_u(u,v) = v·ln(u²+v²) - 2v + 2u·atan(v/u).
fn cell_ln_integral_du(u: f64, v: f64) -> f64 {
    if u == 0.0 && v == 0.0 {
        return 0.0;
    }
    let mut s = -2.0 * v;
    if u != 0.0 || v != 0.0 {
        s += v * (u * u + v * v).ln();
    }
    if u != 0.0 {
        s += 2.0 * u * (v / u).atan();
    }
    s
}

fn grid_log_potential(g: &GridField, x: [f64; 2]) -> f64 {
    let half = 0.5 * g.h;
    let mut acc = 0.0;
    for iy in 0..g.ny {
        for ix in 0..g.nx {
            let b = g.value(ix, iy);
            if b == 0.0 {
                continue;
            }
            let c = g.center(ix, iy);
            acc += b * cell_ln_integral(x, c[0] - half, c[0] + half, c[1] - half, c[1] + half);
        }
    }
    acc / (2.0 * PI)
}

fn grid_gauge(g: &GridField, x: [f64; 2]) -> [f64; 2] {
    let half = 0.5 * g.h;
    let mut dphi = [0.0_f64; 2];
    for iy in 0..g.ny {
        for ix in 0..g.nx {
            let b = g.value(ix, iy);
            if b == 0.0 {
                continue;
            }
            let c = g.center(ix, iy);
            let (a, bb) = (c[0] - half - x[0], c[0] + half - x[0]);
            let (cc, d) = (c[1] - half - x[1], c[1] + half - x[1]);
            // ∂/∂x of the corner sum flips sign: d(edge)/dx = -1
            dphi[0] -= 0.5
                * b
                * (cell_ln_integral_du(bb, d) - cell_ln_integral_du(a, d)
                    - cell_ln_integral_du(bb, cc)
                    + cell_ln_integral_du(a, cc));
            dphi[1] -= 0.5
                * b
                * (cell_ln_integral_du(d, bb) - cell_ln_integral_du(d, a)
                    - cell_ln_integral_du(cc, bb)
                    + cell_ln_integral_du(cc, a));
        }
    }
    let inv = 1.0 / (2.0 * PI);
    [-dphi[1] * inv, dphi[0] * inv]
}

/// ∬ B(x) ln|x-x'| B(x') d²x d²x' for zero-flux rotationally symmetric
/// fields, via the angular reduction to 4π² ∫ b(r) φ̃(r) r dr with
/// φ̃(r) = ∫ b(s) ln(max(r,s)) s ds.
pub fn pair_interaction(field: &FieldProfile) -> Result<f64> {
    if !field.is_radial() {
        return Err(Error::Validation(
            "pair_interaction needs a rotationally symmetric field".into(),
        ));
    }
    let flux = field.total_flux()?;
    if flux.f.abs() > 1e-8 {
        return Err(Error::Validation(format!(
            "pair_interaction needs zero total flux, got F = {:.3e}",
            flux.f
        )));
    }
    if let FieldProfile::Vortex(v) = field {
        return Ok(v.pair_interaction_unit());
    }
    // compact profiles: nested adaptive quadrature over the closed-form B
    let upper = field.support_radius();
    let phi_tilde = |r: f64| -> f64 {
        let mut sp = field.radial_breakpoints();
        sp.push(r);
        let spec = QuadratureSpec {
            abs_tol: 1e-11,
            rel_tol: 1e-11,
            singular_points: sp,
            ..Default::default()
        };
        specfun::integrate(|s| field.radial_b(s) * s * r.max(s).ln(), 0.0, upper, &spec)
            .expect("pair_interaction: inner potential quadrature")
    };
    let v = specfun::integrate(
        |r| field.radial_b(r) * phi_tilde(r) * r,
        0.0,
        upper,
        &QuadratureSpec {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            singular_points: field.radial_breakpoints(),
            ..Default::default()
        },
    )?;
    Ok(4.0 * PI * PI * v)
}

/// ∫ |A|² d²x = 2π ∫ A(r)² r dr for rotationally symmetric fields.
pub fn gauge_energy(field: &FieldProfile) -> Result<f64> {
    if !field.is_radial() {
        return Err(Error::Validation(
            "gauge_energy needs a rotationally symmetric field".into(),
        ));
    }
    if let FieldProfile::Vortex(v) = field {
        return Ok(v.gauge_energy_unit());
    }
    // A ~ F/r outside the support, so the integral only converges for
    // zero-flux fields; the compact case is cut far outside the support and
    // left to diverge loudly through the quadrature error otherwise.
    let upper = 1e6 * field.support_radius();
    let v = specfun::integrate(
        |r| {
            let a = field.flux_through(r) / r;
            a * a * r
        },
        0.0,
        upper,
        &QuadratureSpec {
            singular_points: field.radial_breakpoints(),
            ..Default::default()
        },
    )?;
    Ok(2.0 * PI * v)
}
