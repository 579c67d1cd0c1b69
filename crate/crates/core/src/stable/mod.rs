//! Stable 3-forms in six dimensions and the half-flat evolution.
//!
//! A 3-form `psi` on `e1..e6` defines `K: T -> T` through
//! `X ↦ (X⌟psi) ∧ psi ∈ Λ⁵ ≅ T ⊗ Λ⁶` (trivialized by `e123456`). Then
//! `K² = λ·1` with `λ = tr(K²)/6`, and when `λ < 0` the form has stabilizer
//! SL(3,C): `J = K/√(-λ)` is a complex structure and
//! `psi_minus(X,Y,Z) = psi(JX,JY,JZ) = -psi(JX,Y,Z)`, where the root's sign
//! is fixed by requiring `psi ∧ psi_minus` to be a positive multiple of the
//! volume.

pub mod flow;

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exalg::{Blade, Form, Frame};
use crate::g2::G2Structure;
use crate::linalg::QMatrix;
use crate::ring::{fmt_rational, rational_sqrt, rational_to_f64, Rational};
use crate::su3::SU3Structure;

pub use flow::{flow_run, FlowOptions, FlowState, Trajectory};

/// Field operations shared by the exact and floating-point paths.
pub(crate) trait Scalar:
    Clone + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl Scalar for Rational {}
impl Scalar for f64 {}

/// Position of each 3-blade of `e1..e6` in the canonical basis.
pub(crate) struct ThreeFormIndex {
    pub basis: Vec<Blade>,
    position: [usize; 256],
}

impl ThreeFormIndex {
    pub fn new() -> Self {
        let basis = Frame::SPATIAL6.blades(3);
        let mut position = [usize::MAX; 256];
        for (i, b) in basis.iter().enumerate() {
            position[b.mask() as usize] = i;
        }
        ThreeFormIndex { basis, position }
    }

    fn pos(&self, mask: u8) -> usize {
        self.position[mask as usize]
    }
}

fn gen(i: usize) -> Blade {
    Blade::from_mask(1 << (i + 1))
}

/// `psi(e_x, e_y, e_z)` for generator positions `0..6`.
fn eval3<S: Scalar>(idx: &ThreeFormIndex, psi: &[S], x: usize, y: usize, z: usize) -> S {
    if x == y || y == z || x == z {
        return S::zero();
    }
    let bx = gen(x);
    let byz = gen(y).union(gen(z));
    let s1 = gen(y).wedge_sign(gen(z)).unwrap();
    let s2 = bx.wedge_sign(byz).unwrap();
    let v = psi[idx.pos(bx.union(byz).mask())].clone();
    if s1 * s2 > 0 {
        v
    } else {
        -v
    }
}

/// The endomorphism `K` with `K[b][a]` the `e_b` component of `K e_a`.
pub(crate) fn k_matrix<S: Scalar>(idx: &ThreeFormIndex, psi: &[S]) -> Vec<Vec<S>> {
    let vol = Frame::SPATIAL6.volume();
    let two = Frame::SPATIAL6.blades(2);
    let mut k = vec![vec![S::zero(); 6]; 6];
    for a in 0..6 {
        // beta = e_a ⌟ psi as a 2-form, indexed by the 2-blade mask
        let mut beta: Vec<(Blade, S)> = Vec::new();
        for p in &two {
            if p.contains((a + 1) as u8) {
                continue;
            }
            let s = gen(a).wedge_sign(*p).unwrap();
            let v = psi[idx.pos(gen(a).union(*p).mask())].clone();
            if v.is_zero() {
                continue;
            }
            beta.push((*p, if s > 0 { v } else { -v }));
        }
        for (p, bp) in &beta {
            for (ri, r) in idx.basis.iter().enumerate() {
                let Some(s1) = p.wedge_sign(*r) else {
                    continue;
                };
                let pr = psi[ri].clone();
                if pr.is_zero() {
                    continue;
                }
                let m = p.union(*r);
                let b = (vol.mask() & !m.mask()).trailing_zeros() as usize - 1;
                let s2 = gen(b).wedge_sign(m).unwrap();
                let term = bp.clone() * pr;
                k[b][a] = k[b][a].clone() + if s1 * s2 > 0 { term } else { -term };
            }
        }
    }
    k
}

fn square<S: Scalar>(m: &[Vec<S>]) -> Vec<Vec<S>> {
    let n = m.len();
    let mut out = vec![vec![S::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = S::zero();
            for l in 0..n {
                acc = acc + m[i][l].clone() * m[l][j].clone();
            }
            out[i][j] = acc;
        }
    }
    out
}

/// `-psi(JX, Y, Z)` evaluated through each of the three slots.
pub(crate) fn psi_minus_slots<S: Scalar>(idx: &ThreeFormIndex, psi: &[S], j: &[Vec<S>]) -> [Vec<S>; 3] {
    let mut out: [Vec<S>; 3] = [vec![], vec![], vec![]];
    for b in &idx.basis {
        let ids: Vec<usize> = b.indices().iter().map(|i| *i as usize - 1).collect();
        let (x, y, z) = (ids[0], ids[1], ids[2]);
        let mut s = [S::zero(), S::zero(), S::zero()];
        for d in 0..6 {
            s[0] = s[0].clone() + j[d][x].clone() * eval3(idx, psi, d, y, z);
            s[1] = s[1].clone() + j[d][y].clone() * eval3(idx, psi, x, d, z);
            s[2] = s[2].clone() + j[d][z].clone() * eval3(idx, psi, x, y, d);
        }
        for (slot, v) in s.into_iter().enumerate() {
            out[slot].push(-v);
        }
    }
    out
}

/// Top coefficient of `a ∧ b` for two 3-forms given by coordinates.
pub(crate) fn wedge33<S: Scalar>(idx: &ThreeFormIndex, a: &[S], b: &[S]) -> S {
    let mut acc = S::zero();
    for (i, bi) in idx.basis.iter().enumerate() {
        if a[i].is_zero() {
            continue;
        }
        let comp = Blade::from_mask(Frame::SPATIAL6.volume().mask() & !bi.mask());
        let s = bi.wedge_sign(comp).unwrap();
        let v = a[i].clone() * b[idx.pos(comp.mask())].clone();
        acc = acc + if s > 0 { v } else { -v };
    }
    acc
}

/// The square root `√(-λ)`: exact when `-λ` is a rational square.
#[derive(Clone, Debug, PartialEq)]
pub enum Root {
    Exact(Rational),
    Approximate(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct StableData {
    /// `tr(K²)/6` in the `e123456` trivialization.
    pub lambda: Rational,
    pub k: QMatrix,
    pub root: Root,
    /// Complex structure on vectors: column `a` holds `J e_a`. Present when
    /// the root is exact.
    pub j: Option<QMatrix>,
    pub j_approx: Vec<Vec<f64>>,
    pub psi_minus: Option<Form>,
    pub psi_minus_approx: Vec<f64>,
}

impl StableData {
    /// Action of `J` on 1-form coordinates (pullback `β ↦ β∘J`), as a
    /// matrix acting on column vectors over `e1..e6`.
    pub fn j_on_covectors(&self) -> Option<QMatrix> {
        self.j.as_ref().map(QMatrix::transpose)
    }
}

/// Extracts the `e1..e6` coordinates of a 3-form.
pub(crate) fn spatial_coords(psi: &Form, idx: &ThreeFormIndex) -> Result<Vec<Rational>> {
    if psi.degree() != 3 {
        return Err(Error::Degree(format!("expected a 3-form, got degree {}", psi.degree())));
    }
    for (b, _) in psi.terms() {
        if b.mask() & !Frame::SPATIAL6.mask() != 0 {
            return Err(Error::Degree(format!("3-form uses {b} outside e1..e6")));
        }
    }
    idx.basis
        .iter()
        .map(|b| {
            psi.coefficient(*b)
                .as_constant()
                .ok_or_else(|| Error::Unsupported("stable data needs constant coefficients".into()))
        })
        .collect()
}

/// Computes `λ`, `K`, `J` and `psi_minus` for a 3-form on `e1..e6`.
pub fn stable_data(psi: &Form) -> Result<StableData> {
    let idx = ThreeFormIndex::new();
    let coords = spatial_coords(psi, &idx)?;
    let k = k_matrix(&idx, &coords);
    let k2 = square(&k);
    let lambda: Rational = (0..6).map(|i| k2[i][i].clone()).sum::<Rational>() / Rational::from_integer(6.into());
    // K^2 = lambda * id holds identically; a failure here is a bug
    for (i, row) in k2.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let expect = if i == j { lambda.clone() } else { Rational::zero() };
            if *v != expect {
                return Err(Error::SlotInconsistency(format!(
                    "K^2 is not scalar at ({i},{j}): {}",
                    fmt_rational(v)
                )));
            }
        }
    }
    if !lambda.is_negative() {
        return Err(Error::NotStable(fmt_rational(&lambda)));
    }
    let kq = QMatrix::from_rows(&k);
    let neg = -lambda.clone();
    let kf: Vec<Vec<f64>> = k.iter().map(|r| r.iter().map(rational_to_f64).collect()).collect();
    let coords_f: Vec<f64> = coords.iter().map(rational_to_f64).collect();

    let (mut root, mut j_exact, mut pm_exact) = (Root::Approximate(rational_to_f64(&neg).sqrt()), None, None);
    if let Some(r) = rational_sqrt(&neg) {
        let inv = r.recip();
        let mut j: Vec<Vec<Rational>> = k.iter().map(|row| row.iter().map(|x| x * &inv).collect()).collect();
        let mut slots = psi_minus_slots(&idx, &coords, &j);
        if slots[0] != slots[1] || slots[0] != slots[2] {
            return Err(Error::SlotInconsistency(
                "psi_minus depends on the slot carrying J".into(),
            ));
        }
        let mut pm = std::mem::take(&mut slots[0]);
        let mut r = r;
        if wedge33(&idx, &coords, &pm).is_negative() {
            j = j.into_iter().map(|row| row.into_iter().map(|x| -x).collect()).collect();
            pm = pm.into_iter().map(|x| -x).collect();
            r = -r;
        }
        root = Root::Exact(r);
        j_exact = Some(QMatrix::from_rows(&j));
        pm_exact = Some(Form::from_rational_coordinates(psi.frame(), 3, &idx.basis, &pm));
    }
    let (j_approx, pm_approx) = numeric_j_and_psi_minus(&idx, &coords_f, &kf, rational_to_f64(&lambda))?;
    Ok(StableData {
        lambda,
        k: kq,
        root,
        j: j_exact,
        j_approx,
        psi_minus: pm_exact,
        psi_minus_approx: pm_approx,
    })
}

/// Floating-point `J` and `psi_minus` from `K` and `λ < 0`.
pub(crate) fn numeric_j_and_psi_minus(
    idx: &ThreeFormIndex,
    psi: &[f64],
    k: &[Vec<f64>],
    lambda: f64,
) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    if lambda >= 0.0 {
        return Err(Error::NotStable(format!("{lambda}")));
    }
    let r = (-lambda).sqrt();
    let mut j: Vec<Vec<f64>> = k.iter().map(|row| row.iter().map(|x| x / r).collect()).collect();
    let slots = psi_minus_slots(idx, psi, &j);
    let scale = psi.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
    let diff = slots[0]
        .iter()
        .zip(&slots[1])
        .chain(slots[0].iter().zip(&slots[2]))
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    if diff > 1e-8 * scale {
        return Err(Error::SlotInconsistency(format!("slot mismatch {diff:e}")));
    }
    let mut pm = slots[0].clone();
    if wedge33(idx, psi, &pm) < 0.0 {
        for row in &mut j {
            for x in row.iter_mut() {
                *x = -*x;
            }
        }
        for x in &mut pm {
            *x = -*x;
        }
    }
    Ok((j, pm))
}

/// `λ` in floating point for a coordinate vector over the 3-blade basis.
pub(crate) fn numeric_stable(idx: &ThreeFormIndex, psi: &[f64]) -> Result<(f64, Vec<Vec<f64>>, Vec<f64>)> {
    let k = k_matrix(idx, psi);
    let k2 = square(&k);
    let lambda = (0..6).map(|i| k2[i][i]).sum::<f64>() / 6.0;
    let (j, pm) = numeric_j_and_psi_minus(idx, psi, &k, lambda)?;
    Ok((lambda, j, pm))
}

/// Half-flat: `dψ₊ = 0` and `ω ∧ dω = 0`.
pub fn half_flat_check(s: &SU3Structure) -> bool {
    let dpp = s.d_hat(s.psi_plus());
    if !dpp.is_zero() {
        return false;
    }
    let dw = s.d_hat(s.omega());
    s.omega().wedge(&dw).expect("same frame").is_zero()
}

/// Exact closure residuals of a (possibly warped) G2-structure.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosureResiduals {
    pub dphi: Form,
    pub dstarphi: Form,
}

impl ClosureResiduals {
    pub fn is_closed(&self) -> bool {
        self.dphi.is_zero() && self.dstarphi.is_zero()
    }
}

/// Computes `dφ` and `d*φ` in the Laurent ring, `dt ∧ ∂/∂t` terms included.
pub fn symbolic_verify_closed(g: &G2Structure) -> (bool, ClosureResiduals) {
    let m = g.model();
    let res = ClosureResiduals {
        dphi: m.differential(g.phi()),
        dstarphi: m.differential(g.star_phi()),
    };
    (res.is_closed(), res)
}

/// Ring value of `λ` scaled by `s⁴`, used by tests of homogeneity.
pub fn lambda_of(psi: &Form) -> Result<Rational> {
    let idx = ThreeFormIndex::new();
    let coords = spatial_coords(psi, &idx)?;
    let k = k_matrix(&idx, &coords);
    let k2 = square(&k);
    Ok((0..6).map(|i| k2[i][i].clone()).sum::<Rational>() / Rational::from_integer(6.into()))
}
