//! SU(3)-structures on six-dimensional frame models and their intrinsic
//! torsion.
//!
//! Forms are written in the orthonormal coframe `e1..e6` of the model. `J`
//! acts on 1-forms by `J e1 = -e2`, `J e2 = e1` (and likewise on the pairs
//! 34, 56), so `θ^j = e^{2j-1} + i e^{2j}` satisfies `J θ^j = i θ^j`. On
//! `k`-forms `J` acts as a derivation `D` whose eigenvalue on `(p,q)`-forms
//! is `i(p-q)`; type projections are polynomials in `D`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exalg::{Blade, Form, Frame};
use crate::linalg::{apply_to_form, form_operator, ring_rank, QMatrix};
use crate::model::FrameModel;
use crate::ring::{fmt_rational, q, qi, Rational, RingElement};
use crate::stable::stable_data;

/// Coefficient of `W1p·ψ₋` in `dω`.
pub const RECON_W1P: (i64, i64) = (3, 2);
/// Coefficient of `W1m·ψ₊` in `dω`.
pub const RECON_W1M: (i64, i64) = (-3, 2);
/// Coefficient of `ω∧W4` in `dω`.
pub const RECON_W4: (i64, i64) = (1, 1);

const F6: Frame = Frame::SPATIAL6;

#[derive(Clone, Debug, PartialEq)]
pub struct SU3Structure {
    model: FrameModel,
    omega: Form,
    psi_plus: Form,
    psi_minus: Form,
    /// `J` on 1-form coordinates: column `i` holds `J e^i`.
    j: QMatrix,
    ops: Operators,
}

/// Exact operator matrices that only depend on `J` and `ω`.
#[derive(Clone, Debug, PartialEq)]
struct Operators {
    /// Derivation action of `J` on `Λ^k`, `k = 0..=6`.
    derivation: Vec<QMatrix>,
    /// `β ↦ ω∧β` from `Λ²` to `Λ⁴`, inverted.
    lef2_inv: QMatrix,
    /// `γ ↦ γ∧ω²` from `Λ¹` to `Λ⁵`, inverted.
    lef1_inv: QMatrix,
}

fn pairs(k: usize) -> Vec<(usize, usize)> {
    (0..=3usize)
        .flat_map(|p| (0..=3usize).map(move |q| (p, q)))
        .filter(|(p, q)| p + q == k)
        .collect()
}

impl Operators {
    fn new(j: &QMatrix, omega: &Form) -> Result<Self> {
        let derivation = (0..=6).map(|k| derivation_matrix(j, k)).collect();
        let lef2 = form_operator(F6, 2, 4, |b| omega.wedge(b).unwrap());
        let w2 = omega.wedge_pow(2);
        let lef1 = form_operator(F6, 1, 5, |b| b.wedge(&w2).unwrap());
        let lef2_inv = lef2
            .inverse()
            .ok_or_else(|| Error::Degenerate("ω∧· is not invertible on 2-forms".into()))?;
        let lef1_inv = lef1
            .inverse()
            .ok_or_else(|| Error::Degenerate("ω²∧· is not invertible on 1-forms".into()))?;
        Ok(Operators {
            derivation,
            lef2_inv,
            lef1_inv,
        })
    }

    /// Projector onto the real span of the `(p,q)` and `(q,p)` types with
    /// `|p-q| = m` in degree `k`.
    fn real_type_projector(&self, k: usize, m: usize) -> QMatrix {
        let n = F6.blades(k).len();
        let d = &self.derivation[k];
        let d2 = d.mul(d);
        let mut others: Vec<usize> = pairs(k).iter().map(|(p, q)| p.abs_diff(*q)).collect();
        others.sort();
        others.dedup();
        let mut p = QMatrix::identity(n);
        for o in others.into_iter().filter(|o| *o != m) {
            let (mm, oo) = (qi((m * m) as i64), qi((o * o) as i64));
            // (D² + o²) / (o² - m²)
            let factor = d2.add(&QMatrix::identity(n).scale(&oo)).scale(&(oo - mm).recip());
            p = p.mul(&factor);
        }
        p
    }
}

fn generator_image(j: &QMatrix, i: u8) -> Form {
    let col = j.column(i as usize - 1);
    Form::from_rational_coordinates(F6, 1, &F6.blades(1), &col)
}

fn derivation_matrix(j: &QMatrix, k: usize) -> QMatrix {
    form_operator(F6, k, k, |b| {
        let blade = b.terms().next().map(|(b, _)| *b).unwrap();
        let idx = blade.indices();
        let mut out = Form::zero(F6, k);
        for (pos, &i) in idx.iter().enumerate() {
            let before = Form::blade(F6, Blade::from_indices(&idx[..pos]).unwrap());
            let after = Form::blade(F6, Blade::from_indices(&idx[pos + 1..]).unwrap());
            let term = before.wedge(&generator_image(j, i)).unwrap().wedge(&after).unwrap();
            out = out + term;
        }
        out
    })
}

/// Checks that an `(ω, ψ₊, ψ₋)` triple lives on the 6-frame with constant
/// coefficients and returns its coordinates' frame.
fn check_form(name: &str, a: &Form, degree: usize) -> Result<()> {
    if a.frame() != F6 {
        return Err(Error::FrameMismatch {
            left: a.frame().to_string(),
            right: F6.to_string(),
        });
    }
    if a.degree() != degree {
        return Err(Error::Degree(format!("{name} must have degree {degree}")));
    }
    if !a.is_constant() {
        return Err(Error::Unsupported(format!(
            "{name} must have constant coefficients in the orthonormal coframe"
        )));
    }
    Ok(())
}

impl SU3Structure {
    /// Validates a structure with an explicitly given `ψ₋`.
    pub fn new(model: FrameModel, omega: Form, psi_plus: Form, psi_minus: Form) -> Result<Self> {
        let interval = model.frame() == Frame::INTERVAL7 && model.has_interval();
        if model.frame() != F6 && !interval {
            return Err(Error::FrameMismatch {
                left: model.frame().to_string(),
                right: F6.to_string(),
            });
        }
        check_form("omega", &omega, 2)?;
        check_form("psi+", &psi_plus, 3)?;
        check_form("psi-", &psi_minus, 3)?;
        let bad = |m: String| Err(Error::InvalidStructure(m));
        if !omega.wedge(&psi_plus)?.is_zero() {
            return bad("omega ∧ psi+ != 0".into());
        }
        if !omega.wedge(&psi_minus)?.is_zero() {
            return bad("omega ∧ psi- != 0".into());
        }
        let w3 = omega.wedge_pow(3);
        let vol6 = w3.top_coefficient();
        if vol6.is_zero() {
            return bad("omega is degenerate".into());
        }
        let pp_pm = psi_plus.wedge(&psi_minus)?;
        if pp_pm != w3.scale_q(&q(2, 3)) {
            return bad(format!("psi+ ∧ psi- = {pp_pm}, expected 2/3 omega^3"));
        }
        let sd = stable_data(&psi_plus)?;
        let j = sd
            .j_on_covectors()
            .ok_or_else(|| Error::Unsupported("complex structure is not rational".into()))?;
        if sd.psi_minus.as_ref() != Some(&psi_minus) {
            return bad("psi- is not the form determined by psi+".into());
        }
        let id = QMatrix::identity(6);
        if j.mul(&j) != id.scale(&qi(-1)) {
            return Err(Error::SlotInconsistency("J^2 != -1".into()));
        }
        // induced metric g(X, Y) = ω(X, JY) must be the frame metric
        let b1 = F6.blades(1);
        let jv = j.transpose();
        for a in 0..6 {
            for b in 0..6 {
                let mut g = Rational::zero();
                for c in 0..6 {
                    let wac = omega_entry(&omega, &b1, a, c);
                    g += wac * &jv[(c, b)];
                }
                let expect = if a == b { Rational::one() } else { Rational::zero() };
                if g != expect {
                    return bad(format!(
                        "induced metric is not the frame metric at ({},{}): {}",
                        a + 1,
                        b + 1,
                        fmt_rational(&g)
                    ));
                }
            }
        }
        let ops = Operators::new(&j, &omega)?;
        Ok(SU3Structure {
            model,
            omega,
            psi_plus,
            psi_minus,
            j,
            ops,
        })
    }

    /// Derives `ψ₋` from `ψ₊` through the stable-form construction.
    pub fn from_stable(model: FrameModel, omega: Form, psi_plus: Form) -> Result<Self> {
        let sd = stable_data(&psi_plus)?;
        let pm = sd
            .psi_minus
            .ok_or_else(|| Error::Unsupported("psi- is not rational".into()))?;
        Self::new(model, omega, psi_plus, pm)
    }

    /// The standard forms `ω = e12+e34+e56`, `ψ₊ + iψ₋ = θ¹θ²θ³`.
    pub fn standard(model: FrameModel) -> Result<Self> {
        use crate::exalg::standard;
        Self::new(
            model,
            standard::omega(F6),
            standard::psi_plus(F6),
            standard::psi_minus(F6),
        )
    }

    pub fn model(&self) -> &FrameModel {
        &self.model
    }

    pub fn omega(&self) -> &Form {
        &self.omega
    }

    pub fn psi_plus(&self) -> &Form {
        &self.psi_plus
    }

    pub fn psi_minus(&self) -> &Form {
        &self.psi_minus
    }

    /// `d̂` of a form on `e1..e6`. On a model with an interval parameter the
    /// `dt ∧ ∂/∂t` term is dropped.
    pub fn d_hat(&self, a: &Form) -> Form {
        let frame = self.model.frame();
        let da = self.model.spatial_differential(&a.embed(frame).expect("6-frame form"));
        da.restrict(F6).expect("no dt terms in d-hat")
    }

    /// SHA-256 of the canonical text of the model and forms.
    pub fn fingerprint(&self) -> String {
        let text = format!(
            "{}omega = {}\npsi+ = {}\npsi- = {}\n",
            self.model.to_structure_text(),
            self.omega,
            self.psi_plus,
            self.psi_minus
        );
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// `J` on 1-form coordinates (column `i` is `J e^i`).
    pub fn j_matrix(&self) -> &QMatrix {
        &self.j
    }

    /// `J` applied to a 1-form.
    pub fn apply_j(&self, a: &Form) -> Form {
        assert_eq!(a.degree(), 1);
        apply_to_form(&self.j, a, 1)
    }

    /// Derivation action of `J` on forms.
    pub fn derivation(&self, a: &Form) -> Form {
        apply_to_form(&self.ops.derivation[a.degree()], a, a.degree())
    }

    /// Tensor action `e^I ↦ Je^{i1} ∧ ... ∧ Je^{ik}`.
    pub fn tensor_action(&self, a: &Form) -> Form {
        let mut out = Form::zero(a.frame(), a.degree());
        for (b, c) in a.terms() {
            let mut img = Form::scalar(F6, RingElement::one());
            for i in b.indices() {
                img = img.wedge(&generator_image(&self.j, i)).unwrap();
            }
            out = out + img.scale(c);
        }
        out
    }

    /// Projection onto the real span of the `(p,q)` and `(q,p)` types.
    pub fn real_type_part(&self, a: &Form, p: usize, q: usize) -> Form {
        let k = a.degree();
        if p + q != k || p > 3 || q > 3 {
            return Form::zero(a.frame(), k);
        }
        let pr = self.ops.real_type_projector(k, p.abs_diff(q));
        apply_to_form(&pr, a, k)
    }

    /// Complex `(p,q)` components of a real form, as `(re, im)` pairs.
    pub fn type_split(&self, a: &Form) -> BTreeMap<(usize, usize), (Form, Form)> {
        let k = a.degree();
        let mut out = BTreeMap::new();
        for (p, q) in pairs(k) {
            let w = self.real_type_part(a, p, q);
            if p == q {
                out.insert((p, q), (w, Form::zero(a.frame(), k)));
            } else {
                // a_{pq} = (w - (i/m) D w) / 2 with m = p - q
                let m = p as i64 - q as i64;
                let im = self.derivation(&w).scale_q(&q_frac(-1, 2 * m));
                out.insert((p, q), (w.scale_q(&q_frac(1, 2)), im));
            }
        }
        out
    }

    /// Splits `a = a₀ + ω∧b` with `a₀` primitive; `b` has degree `deg a - 2`
    /// (zero of degree 0 when `deg a < 2`).
    pub fn primitive_decompose(&self, a: &Form) -> Result<(Form, Form)> {
        let k = a.degree();
        if k > 4 {
            return Err(Error::Degree(format!(
                "primitive decomposition needs degree <= 4, got {k}"
            )));
        }
        if k < 2 {
            return Ok((a.clone(), Form::zero(a.frame(), 0)));
        }
        let l = form_operator(F6, k - 2, k, |b| self.omega.wedge(b).unwrap());
        // least squares onto the image of L, which is the orthogonal
        // complement of the primitive forms
        let lt = l.transpose();
        let normal = lt.mul(&l);
        let inv = normal
            .inverse()
            .ok_or_else(|| Error::Degenerate("Lefschetz map is not injective".into()))?;
        let b = apply_to_form(&inv.mul(&lt), a, k - 2);
        let a0 = a - &self.omega.wedge(&b)?;
        Ok((a0, b))
    }

    /// Whether `a` is primitive.
    pub fn is_primitive(&self, a: &Form) -> bool {
        let k = a.degree();
        if k > 3 {
            return a.is_zero();
        }
        a.wedge(&self.omega.wedge_pow(4 - k)).unwrap().is_zero()
    }

    /// `(ψ₊, ψ₋) ↦ (aψ₊ + bψ₋, -bψ₊ + aψ₋)` for `a² + b² = 1`.
    pub fn rotate_b(&self, a: &Rational, b: &Rational) -> Result<Self> {
        let n = a * a + b * b;
        if !n.is_one() {
            return Err(Error::Normalization(fmt_rational(&n)));
        }
        let pp = self.psi_plus.scale_q(a) + self.psi_minus.scale_q(b);
        let pm = self.psi_minus.scale_q(a) - self.psi_plus.scale_q(b);
        Self::new(self.model.clone(), self.omega.clone(), pp, pm)
    }

    /// Conformal change `e^i ↦ t^k e^i`, with `t` a coordinate whose
    /// differential is the model's time generator (the first closed
    /// generator when none is set).
    pub fn conformal_rescale(&self, k: i32) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        let mut m = self.model.clone();
        if m.has_interval() {
            return Err(Error::Unsupported(
                "t is an interval parameter, not a function on M".into(),
            ));
        }
        if m.time().is_none() {
            let p = F6
                .generators()
                .find(|i| m.structure_form(*i).is_zero())
                .ok_or_else(|| Error::Unsupported("no closed generator to serve as dt".into()))?;
            m = m.with_time(p)?;
        }
        for i in F6.generators() {
            let (c, k0) = m.scales().get(&i).cloned().unwrap_or((Rational::one(), 0));
            m = m.with_scale(i, c, k0 + k)?;
        }
        Self::new(m, self.omega.clone(), self.psi_plus.clone(), self.psi_minus.clone())
    }

    pub fn torsion(&self) -> SU3TorsionReport {
        torsion(self)
    }
}

fn q_frac(n: i64, d: i64) -> Rational {
    q(n, d)
}

fn omega_entry(omega: &Form, b1: &[Blade], a: usize, c: usize) -> Rational {
    if a == c {
        return Rational::zero();
    }
    let (x, y) = (b1[a], b1[c]);
    let s = x.wedge_sign(y).unwrap();
    let v = omega.coefficient(x.union(y)).as_constant().unwrap_or_default();
    if s > 0 {
        v
    } else {
        -v
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SU3Flags {
    pub w1p: bool,
    pub w1m: bool,
    pub w2p: bool,
    pub w2m: bool,
    pub w3: bool,
    pub w4: bool,
    pub w5: bool,
    pub half_flat: bool,
    pub self_dual: bool,
    pub anti_self_dual: bool,
}

impl SU3Flags {
    /// Names of the non-vanishing components, e.g. `["W2-"]`.
    pub fn classes(&self) -> Vec<&'static str> {
        [
            (self.w1p, "W1+"),
            (self.w1m, "W1-"),
            (self.w2p, "W2+"),
            (self.w2m, "W2-"),
            (self.w3, "W3"),
            (self.w4, "W4"),
            (self.w5, "W5"),
        ]
        .into_iter()
        .filter_map(|(on, n)| on.then_some(n))
        .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SU3TorsionReport {
    /// Fingerprint of the structure the report was computed from.
    pub fingerprint: String,
    pub d_omega: Form,
    pub d_psi_plus: Form,
    pub d_psi_minus: Form,
    pub w1p: RingElement,
    pub w1m: RingElement,
    pub w2p: Form,
    pub w2m: Form,
    pub w3: Form,
    pub w4: Form,
    pub w5: Form,
    pub rank_w12: usize,
    pub flags: SU3Flags,
}

impl SU3TorsionReport {
    /// `dω` rebuilt from the components.
    pub fn reconstruct_d_omega(&self, s: &SU3Structure) -> Form {
        let c1 = q(RECON_W1P.0, RECON_W1P.1);
        let c2 = q(RECON_W1M.0, RECON_W1M.1);
        let c4 = q(RECON_W4.0, RECON_W4.1);
        s.psi_minus.scale(&self.w1p.scale(&c1))
            + s.psi_plus.scale(&self.w1m.scale(&c2))
            + self.w3.clone()
            + s.omega.wedge(&self.w4).unwrap().scale_q(&c4)
    }
}

/// `(dψ)^{2,2} = W1·ω² + W2∧ω` solved for `(W1, W2)`.
fn w12(s: &SU3Structure, dpsi: &Form) -> (RingElement, Form) {
    let w3top = s.omega.wedge_pow(3).top_coefficient().as_constant().unwrap();
    let w1 = dpsi.wedge(&s.omega).unwrap().top_coefficient().scale(&w3top.recip());
    let d22 = s.real_type_part(dpsi, 2, 2);
    let rest = d22 - s.omega.wedge_pow(2).scale(&w1);
    let w2 = apply_to_form(&s.ops.lef2_inv, &rest, 2);
    (w1, w2)
}

pub fn torsion(s: &SU3Structure) -> SU3TorsionReport {
    let dw = s.d_hat(&s.omega);
    let dpp = s.d_hat(&s.psi_plus);
    let dpm = s.d_hat(&s.psi_minus);
    let (w1p, w2p) = w12(s, &dpp);
    let (w1m, w2m) = w12(s, &dpm);

    let dw21 = s.real_type_part(&dw, 2, 1);
    let gamma = apply_to_form(&s.ops.lef1_inv, &dw21.wedge(&s.omega).unwrap(), 1);
    let w3 = &dw21 - &s.omega.wedge(&gamma).unwrap();

    let half = q(1, 2);
    let w4 = s.omega.contract(&dw).unwrap().scale_q(&half);
    let w5 = s.psi_plus.contract(&dpp).unwrap().scale_q(&half);

    let b2 = F6.blades(2);
    let row = |w1: &RingElement, w2: &Form| {
        let mut r = vec![w1.clone()];
        r.extend(w2.coordinates(&b2));
        r
    };
    let rank_w12 = ring_rank(&[row(&w1p, &w2p), row(&w1m, &w2m)]);

    let flags = SU3Flags {
        w1p: !w1p.is_zero(),
        w1m: !w1m.is_zero(),
        w2p: !w2p.is_zero(),
        w2m: !w2m.is_zero(),
        w3: !w3.is_zero(),
        w4: !w4.is_zero(),
        w5: !w5.is_zero(),
        half_flat: dpp.is_zero() && s.omega.wedge(&dw).unwrap().is_zero(),
        self_dual: s.real_type_part(&dpm, 2, 2).is_zero(),
        anti_self_dual: s.real_type_part(&dpp, 2, 2).is_zero(),
    };
    SU3TorsionReport {
        fingerprint: s.fingerprint(),
        d_omega: dw,
        d_psi_plus: dpp,
        d_psi_minus: dpm,
        w1p,
        w1m,
        w2p,
        w2m,
        w3,
        w4,
        w5,
        rank_w12,
        flags,
    }
}

/// Whether a ring scalar is a nonzero positive constant.
pub fn is_positive_constant(x: &RingElement) -> bool {
    x.as_constant().is_some_and(|c| c.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exalg::standard;

    fn flat() -> SU3Structure {
        SU3Structure::standard(FrameModel::flat(F6)).unwrap()
    }

    fn f(s: &str) -> Form {
        Form::parse(F6, s).unwrap()
    }

    #[test]
    fn j_convention() {
        let s = flat();
        assert_eq!(s.apply_j(&f("e1")), f("-e2"));
        assert_eq!(s.apply_j(&f("e2")), f("e1"));
        assert_eq!(s.apply_j(&f("e5")), f("-e6"));
        assert_eq!(s.tensor_action(s.psi_plus()), *s.psi_minus());
        assert_eq!(s.tensor_action(s.omega()), *s.omega());
    }

    #[test]
    fn type_split_examples() {
        let s = flat();
        let w = s.type_split(s.omega());
        assert_eq!(w[&(1, 1)].0, *s.omega());
        assert!(w[&(2, 0)].0.is_zero() && w[&(0, 2)].0.is_zero());

        let p = s.type_split(s.psi_plus());
        let half = q(1, 2);
        assert_eq!(p[&(3, 0)].0, s.psi_plus().scale_q(&half));
        assert_eq!(p[&(3, 0)].1, s.psi_minus().scale_q(&half));
        assert_eq!(p[&(0, 3)].1, s.psi_minus().scale_q(&-half.clone()));
        assert!(p[&(2, 1)].0.is_zero());

        let e = s.type_split(&f("e1"));
        assert_eq!(e[&(1, 0)], (f("1/2*e1"), f("1/2*e2")));
        assert_eq!(e[&(0, 1)], (f("1/2*e1"), f("-1/2*e2")));
    }

    #[test]
    fn pure_types_of_two_forms() {
        let s = flat();
        for a in ["e13 - e24", "e14 + e23"] {
            assert_eq!(s.real_type_part(&f(a), 2, 0), f(a));
        }
        let b = f("e12 - e34");
        assert_eq!(s.real_type_part(&b, 1, 1), b);
        assert!(s.is_primitive(&b));
    }

    #[test]
    fn primitive_decomposition() {
        let s = flat();
        let (a0, b) = s.primitive_decompose(s.omega()).unwrap();
        assert!(a0.is_zero());
        assert_eq!(b, Form::scalar(F6, RingElement::one()));
        let (a0, b) = s.primitive_decompose(&f("e12 - e34")).unwrap();
        assert_eq!(a0, f("e12 - e34"));
        assert!(b.is_zero());
        let x = f("e1234");
        let (a0, b) = s.primitive_decompose(&x).unwrap();
        assert!(a0.is_zero());
        assert_eq!(s.omega().wedge(&b).unwrap(), x);
        assert_eq!(b, f("1/2*e12 + 1/2*e34 - 1/2*e56"));
    }

    #[test]
    fn flat_torsion_vanishes() {
        let r = flat().torsion();
        assert!(r.flags.classes().is_empty());
        assert_eq!(r.rank_w12, 0);
        assert!(r.flags.half_flat);
    }

    #[test]
    fn w2_minus_example() {
        let m = FrameModel::from_exprs(F6, &[(3, "e25"), (6, "-e24")]).unwrap();
        let s = SU3Structure::standard(m).unwrap();
        let r = s.torsion();
        assert_eq!(r.flags.classes(), vec!["W2-"]);
        assert_eq!(r.w2m, f("e34 - e56"));
        assert_eq!(r.rank_w12, 1);
        assert!(s.is_primitive(&r.w2m));
        assert_eq!(s.real_type_part(&r.w2m, 1, 1), r.w2m);
    }

    #[test]
    fn e1_example_gives_equal_w4_w5() {
        // pointwise data with dω = ω∧e1 and dψ± = ψ±∧e1
        let s = flat();
        let e1 = f("e1");
        let dw = s.omega().wedge(&e1).unwrap();
        let dpp = s.psi_plus().wedge(&e1).unwrap();
        let half = q(1, 2);
        assert_eq!(s.omega().contract(&dw).unwrap().scale_q(&half), e1);
        assert_eq!(s.psi_plus().contract(&dpp).unwrap().scale_q(&half), e1);
    }

    #[test]
    fn rotation_checks() {
        let s = flat();
        assert_eq!(s.rotate_b(&qi(1), &qi(0)).unwrap(), s);
        let r = s.rotate_b(&q(3, 5), &q(4, 5)).unwrap();
        assert_eq!(
            r.psi_plus().wedge(r.psi_minus()).unwrap(),
            r.omega().wedge_pow(3).scale_q(&q(2, 3))
        );
        assert!(matches!(s.rotate_b(&qi(1), &qi(1)), Err(Error::Normalization(_))));
    }

    #[test]
    fn rejects_wrong_normalization() {
        let m = FrameModel::flat(F6);
        let bad = SU3Structure::new(
            m,
            standard::omega(F6).scale_int(2),
            standard::psi_plus(F6),
            standard::psi_minus(F6),
        );
        assert!(bad.is_err());
    }
}
