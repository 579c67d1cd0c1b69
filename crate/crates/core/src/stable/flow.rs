//! Fixed-step RK4 integration of the half-flat evolution
//!
//! ```text
//! ∂ψ₊/∂s = d̂ω,    ∂ω/∂s = -L⁻¹(d̂ψ₋),    L(β) = ω∧β,
//! ```
//!
//! with unit lapse, on an unwarped 6-model. `ψ₋` is recomputed from `ψ₊` at
//! every stage.

use nalgebra::{DMatrix, DVector};

use super::{numeric_stable, ThreeFormIndex};
use crate::error::{Error, Result};
use crate::exalg::{Blade, Form, Frame};
use crate::linalg::form_operator;
use crate::model::FrameModel;
use crate::ring::rational_to_f64;
use crate::su3::SU3Structure;

const F6: Frame = Frame::SPATIAL6;

#[derive(Clone, Debug, PartialEq)]
pub struct FlowOptions {
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            t0: 0.0,
            t1: 1.0,
            dt: 1e-3,
        }
    }
}

/// Residuals recorded at every accepted step (max absolute coefficient).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Diagnostics {
    /// `ω∧ψ₊`.
    pub omega_psi: f64,
    /// `ψ₊∧ψ₋ - (2/3)ω³`.
    pub volume: f64,
    /// `d̂ψ₊`.
    pub closure_psi_plus: f64,
    /// `d̂(ω²)`.
    pub closure_omega_sq: f64,
    /// `ω∧∂ω + d̂ψ₋` after the Lefschetz solve.
    pub solve_residual: f64,
    pub lambda: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowState {
    pub t: f64,
    /// Coefficients on the 2-blades of `e1..e6` in canonical order.
    pub omega: Vec<f64>,
    /// Coefficients on the 3-blades in canonical order.
    pub psi_plus: Vec<f64>,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub basis2: Vec<Blade>,
    pub basis3: Vec<Blade>,
    pub states: Vec<FlowState>,
}

/// Numeric wedge products on coordinate vectors of `e1..e6`.
struct Wedge {
    bases: Vec<Vec<Blade>>,
    position: Vec<[usize; 256]>,
}

impl Wedge {
    fn new() -> Self {
        let bases: Vec<Vec<Blade>> = (0..=6).map(|k| F6.blades(k)).collect();
        let position = bases
            .iter()
            .map(|b| {
                let mut p = [usize::MAX; 256];
                for (i, x) in b.iter().enumerate() {
                    p[x.mask() as usize] = i;
                }
                p
            })
            .collect();
        Wedge { bases, position }
    }

    fn wedge(&self, x: &[f64], kx: usize, y: &[f64], ky: usize) -> Vec<f64> {
        let k = kx + ky;
        let mut out = vec![0.0; self.bases[k].len()];
        for (i, a) in self.bases[kx].iter().enumerate() {
            if x[i] == 0.0 {
                continue;
            }
            for (j, b) in self.bases[ky].iter().enumerate() {
                if y[j] == 0.0 {
                    continue;
                }
                if let Some(s) = a.wedge_sign(*b) {
                    out[self.position[k][a.union(*b).mask() as usize]] += f64::from(s) * x[i] * y[j];
                }
            }
        }
        out
    }

    /// Matrix of `β ↦ ω∧β` from `Λ²` to `Λ⁴`.
    fn lefschetz(&self, omega: &[f64]) -> DMatrix<f64> {
        let n = self.bases[2].len();
        let mut m = DMatrix::zeros(self.bases[4].len(), n);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let col = self.wedge(omega, 2, &e, 2);
            for (i, v) in col.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }
}

fn to_f64_matrix(m: &crate::linalg::QMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| rational_to_f64(&m[(i, j)]))
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

struct System {
    wedge: Wedge,
    idx: ThreeFormIndex,
    d2: DMatrix<f64>,
    d3: DMatrix<f64>,
}

impl System {
    fn psi_minus(&self, t: f64, pp: &[f64]) -> Result<(f64, Vec<f64>)> {
        match numeric_stable(&self.idx, pp) {
            Ok((lambda, _, pm)) => Ok((lambda, pm)),
            Err(Error::NotStable(_)) => {
                let (lambda, ..) = lambda_only(&self.idx, pp);
                Err(Error::StabilityLoss { t, lambda })
            }
            Err(e) => Err(e),
        }
    }

    /// Returns `(∂ω, ∂ψ₊, solve residual)`.
    fn rhs(&self, t: f64, omega: &[f64], pp: &[f64]) -> Result<(Vec<f64>, Vec<f64>, f64)> {
        let (_, pm) = self.psi_minus(t, pp)?;
        let dpm = &self.d3 * DVector::from_column_slice(&pm);
        let l = self.wedge.lefschetz(omega);
        let lu = l.clone().lu();
        let rhs = -dpm.clone();
        let sol = lu
            .solve(&rhs)
            .ok_or_else(|| Error::Degenerate(format!("ω∧· is singular at t = {t}")))?;
        if sol.iter().any(|x| !x.is_finite()) {
            return Err(Error::Degenerate(format!("ω∧· is singular at t = {t}")));
        }
        let resid = max_abs((&l * &sol + dpm).as_slice());
        let dpp = &self.d2 * DVector::from_column_slice(omega);
        Ok((sol.as_slice().to_vec(), dpp.as_slice().to_vec(), resid))
    }

    fn diagnostics(&self, t: f64, omega: &[f64], pp: &[f64], solve_residual: f64) -> Result<Diagnostics> {
        let (lambda, pm) = self.psi_minus(t, pp)?;
        let w = &self.wedge;
        let w2 = w.wedge(omega, 2, omega, 2);
        let w3 = w.wedge(&w2, 4, omega, 2);
        let pppm = w.wedge(pp, 3, &pm, 3);
        let d_w2 = w.wedge(omega, 2, (&self.d2 * DVector::from_column_slice(omega)).as_slice(), 3);
        Ok(Diagnostics {
            omega_psi: max_abs(&w.wedge(omega, 2, pp, 3)),
            volume: (pppm[0] - 2.0 / 3.0 * w3[0]).abs(),
            closure_psi_plus: max_abs((&self.d3 * DVector::from_column_slice(pp)).as_slice()),
            // d(ω²) = 2 ω∧dω
            closure_omega_sq: 2.0 * max_abs(&d_w2),
            solve_residual,
            lambda,
        })
    }
}

fn lambda_only(idx: &ThreeFormIndex, pp: &[f64]) -> (f64,) {
    let k = super::k_matrix(idx, pp);
    let mut tr = 0.0;
    for i in 0..6 {
        for l in 0..6 {
            tr += k[i][l] * k[l][i];
        }
    }
    (tr / 6.0,)
}

fn axpy(a: &[f64], h: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + h * y).collect()
}

/// Integrates from a half-flat structure `s0` on `m`.
pub fn flow_run(m: &FrameModel, s0: &SU3Structure, opts: &FlowOptions) -> Result<Trajectory> {
    if s0.model() != m {
        return Err(Error::InvalidStructure(
            "initial structure lives on another model".into(),
        ));
    }
    if m.frame() != F6 || m.is_warped() || m.time().is_some() {
        return Err(Error::Unsupported("the flow runs on unwarped 6-models".into()));
    }
    if !(opts.dt > 0.0) || !(opts.t1 >= opts.t0) {
        return Err(Error::InvalidStructure(format!(
            "need dt > 0 and t1 >= t0, got dt = {}, [{}, {}]",
            opts.dt, opts.t0, opts.t1
        )));
    }
    if !super::half_flat_check(s0) {
        return Err(Error::InvalidStructure("initial structure is not half-flat".into()));
    }
    let sys = System {
        wedge: Wedge::new(),
        idx: ThreeFormIndex::new(),
        d2: to_f64_matrix(&form_operator(F6, 2, 3, |a| m.spatial_differential(a))),
        d3: to_f64_matrix(&form_operator(F6, 3, 4, |a| m.spatial_differential(a))),
    };
    let basis2 = F6.blades(2);
    let basis3 = F6.blades(3);
    let f64_coords = |a: &Form, basis: &[Blade]| -> Vec<f64> {
        a.rational_coordinates(basis)
            .expect("constant structure")
            .iter()
            .map(rational_to_f64)
            .collect()
    };
    let mut omega = f64_coords(s0.omega(), &basis2);
    let mut pp = f64_coords(s0.psi_plus(), &basis3);

    let span = opts.t1 - opts.t0;
    let n = ((span / opts.dt) - 1e-9).ceil().max(0.0) as usize;
    let h = if n == 0 { 0.0 } else { span / n as f64 };
    let mut t = opts.t0;
    let (_, _, r0) = sys.rhs(t, &omega, &pp)?;
    let mut states = vec![FlowState {
        t,
        omega: omega.clone(),
        psi_plus: pp.clone(),
        diagnostics: sys.diagnostics(t, &omega, &pp, r0)?,
    }];
    for step in 0..n {
        let (k1w, k1p, _) = sys.rhs(t, &omega, &pp)?;
        let (k2w, k2p, _) = sys.rhs(t + h / 2.0, &axpy(&omega, h / 2.0, &k1w), &axpy(&pp, h / 2.0, &k1p))?;
        let (k3w, k3p, _) = sys.rhs(t + h / 2.0, &axpy(&omega, h / 2.0, &k2w), &axpy(&pp, h / 2.0, &k2p))?;
        let (k4w, k4p, _) = sys.rhs(t + h, &axpy(&omega, h, &k3w), &axpy(&pp, h, &k3p))?;
        for i in 0..omega.len() {
            omega[i] += h / 6.0 * (k1w[i] + 2.0 * k2w[i] + 2.0 * k3w[i] + k4w[i]);
        }
        for i in 0..pp.len() {
            pp[i] += h / 6.0 * (k1p[i] + 2.0 * k2p[i] + 2.0 * k3p[i] + k4p[i]);
        }
        t = opts.t0 + (step + 1) as f64 * h;
        let (_, _, resid) = sys.rhs(t, &omega, &pp)?;
        states.push(FlowState {
            t,
            omega: omega.clone(),
            psi_plus: pp.clone(),
            diagnostics: sys.diagnostics(t, &omega, &pp, resid)?,
        });
    }
    Ok(Trajectory { basis2, basis3, states })
}

impl Trajectory {
    pub fn last(&self) -> &FlowState {
        self.states.last().expect("trajectory has an initial state")
    }

    /// Largest value of a diagnostic over all states.
    pub fn max_diagnostic<F: Fn(&Diagnostics) -> f64>(&self, f: F) -> f64 {
        self.states.iter().map(|s| f(&s.diagnostics)).fold(0.0, f64::max)
    }

    /// CSV with columns `t`, `omega:<blade>`..., `psi+:<blade>`..., then the
    /// residual columns.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["t".to_string()];
        header.extend(self.basis2.iter().map(|b| format!("omega:{b}")));
        header.extend(self.basis3.iter().map(|b| format!("psi+:{b}")));
        header.extend(
            [
                "omega_psi",
                "volume",
                "closure_psi_plus",
                "closure_omega_sq",
                "solve_residual",
                "lambda",
            ]
            .iter()
            .map(|s| s.to_string()),
        );
        let io = |e: csv::Error| Error::Unsupported(format!("csv: {e}"));
        w.write_record(&header).map_err(io)?;
        for s in &self.states {
            let d = &s.diagnostics;
            let mut row = vec![format!("{:.12e}", s.t)];
            row.extend(s.omega.iter().chain(&s.psi_plus).map(|x| format!("{x:.12e}")));
            row.extend(
                [
                    d.omega_psi,
                    d.volume,
                    d.closure_psi_plus,
                    d.closure_omega_sq,
                    d.solve_residual,
                    d.lambda,
                ]
                .iter()
                .map(|x| format!("{x:.6e}")),
            );
            w.write_record(&row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Unsupported(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("ascii"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_is_stationary() {
        let m = FrameModel::flat(F6);
        let s = SU3Structure::standard(m.clone()).unwrap();
        let tr = flow_run(
            &m,
            &s,
            &FlowOptions {
                t0: 0.0,
                t1: 0.01,
                dt: 1e-3,
            },
        )
        .unwrap();
        assert_eq!(tr.states.len(), 11);
        assert_eq!(tr.states[0].omega, tr.last().omega);
        assert_eq!(tr.states[0].psi_plus, tr.last().psi_plus);
    }

    #[test]
    fn rejects_non_half_flat() {
        let m = FrameModel::from_exprs(F6, &[(3, "e25"), (6, "-e24")]).unwrap();
        let s = SU3Structure::standard(m.clone())
            .unwrap()
            .rotate_b(&crate::ring::qi(0), &crate::ring::qi(1))
            .unwrap();
        assert!(flow_run(&m, &s, &FlowOptions::default()).is_err());
    }
}
