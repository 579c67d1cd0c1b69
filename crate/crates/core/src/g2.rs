//! G2-structures `φ = ω∧α + ψ₊` on seven-dimensional frame models, their
//! irreducible decompositions and torsion, and the comparison with the
//! torsion of the underlying SU(3)-structure.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exalg::{standard, Blade, Form, Frame};
use crate::linalg::{apply_to_form, form_operator, QMatrix};
use crate::model::FrameModel;
use crate::ring::{fmt_rational, parse_rational, qi, Rational, RingElement};
use crate::su3::{SU3Structure, SU3TorsionReport};

const F6: Frame = Frame::SPATIAL6;

/// Base data of a product (`ρ = 0`) or circle bundle (`d e7 = ρ`).
#[derive(Clone, Debug, PartialEq)]
pub struct G2Extension {
    pub base: FrameModel,
    /// Generator carrying `α`: `0` (an interval `dt`) or `7`.
    pub alpha: u8,
    /// Curvature 2-form on the base, in the 6-frame.
    pub rho: Form,
}

#[derive(Clone, Debug, PartialEq)]
pub struct G2Structure {
    model: FrameModel,
    alpha: u8,
    omega: Form,
    psi_plus: Form,
    psi_minus: Form,
    phi: Form,
    star_phi: Form,
    extension: Option<G2Extension>,
    base_fingerprint: Option<String>,
    ops: Operators,
}

#[derive(Clone, Debug, PartialEq)]
struct Operators {
    /// `(degree, irrep dimension)` to orthogonal projector.
    proj: BTreeMap<(usize, usize), QMatrix>,
    /// Left inverses of `v ↦ v∧φ` and `v ↦ v∧*φ`.
    wedge_phi_left_inv: QMatrix,
    wedge_star_left_inv: QMatrix,
}

fn left_inverse(m: &QMatrix) -> QMatrix {
    let mt = m.transpose();
    mt.mul(m).inverse().expect("injective map").mul(&mt)
}

fn coords(frame: Frame, a: &Form) -> Vec<Rational> {
    a.rational_coordinates(&frame.blades(a.degree()))
        .expect("constant form")
}

impl Operators {
    fn new(frame: Frame, phi: &Form, star: &Form) -> Self {
        let gens: Vec<u8> = frame.generators().collect();
        let g = |i: u8| Form::generator(frame, i);
        let span_proj = |vs: Vec<Form>, k: usize| {
            let rows: Vec<Vec<Rational>> = vs.iter().map(|v| coords(frame, v)).collect();
            QMatrix::projector_onto_span(&rows, frame.blades(k).len())
        };
        let id = |k: usize| QMatrix::identity(frame.blades(k).len());
        let mut proj = BTreeMap::new();

        let p2_7 = span_proj(gens.iter().map(|i| g(*i).contract(phi).unwrap()).collect(), 2);
        proj.insert((2, 14), id(2).sub(&p2_7));
        proj.insert((2, 7), p2_7);

        let p3_1 = span_proj(vec![phi.clone()], 3);
        let p3_7 = span_proj(gens.iter().map(|i| g(*i).wedge(phi).unwrap().hodge()).collect(), 3);
        proj.insert((3, 27), id(3).sub(&p3_1).sub(&p3_7));
        proj.insert((3, 1), p3_1);
        proj.insert((3, 7), p3_7);

        let p4_1 = span_proj(vec![star.clone()], 4);
        let p4_7 = span_proj(gens.iter().map(|i| g(*i).wedge(phi).unwrap()).collect(), 4);
        proj.insert((4, 27), id(4).sub(&p4_1).sub(&p4_7));
        proj.insert((4, 1), p4_1);
        proj.insert((4, 7), p4_7);

        let p5_7 = span_proj(gens.iter().map(|i| g(*i).contract(phi).unwrap().hodge()).collect(), 5);
        proj.insert((5, 14), id(5).sub(&p5_7));
        proj.insert((5, 7), p5_7);

        let wphi = form_operator(frame, 1, 4, |v| v.wedge(phi).unwrap());
        let wstar = form_operator(frame, 1, 5, |v| v.wedge(star).unwrap());
        Operators {
            proj,
            wedge_phi_left_inv: left_inverse(&wphi),
            wedge_star_left_inv: left_inverse(&wstar),
        }
    }
}

impl G2Structure {
    /// Assembles `φ` from SU(3) data written on `e1..e6` and the unit
    /// 1-form `α` (generator `alpha` of the model's 7-frame).
    pub fn new(model: FrameModel, alpha: u8, omega: &Form, psi_plus: &Form, psi_minus: &Form) -> Result<Self> {
        let frame = model.frame();
        if frame.dim() != 7 || !frame.contains(alpha) || frame.mask() & F6.mask() != F6.mask() {
            return Err(Error::FrameMismatch {
                left: frame.to_string(),
                right: "a 7-frame containing e1..e6 and alpha".into(),
            });
        }
        if alpha != 0 && alpha != 7 {
            return Err(Error::Degree(format!("alpha must be dt or e7, got generator {alpha}")));
        }
        // pointwise SU(3) validation
        let base = SU3Structure::new(
            FrameModel::flat(F6),
            omega.restrict(F6)?,
            psi_plus.restrict(F6)?,
            psi_minus.restrict(F6)?,
        )?;
        let w = base.omega().embed(frame)?;
        let pp = base.psi_plus().embed(frame)?;
        let pm = base.psi_minus().embed(frame)?;
        let a = Form::generator(frame, alpha);
        let phi = w.wedge(&a)? + pp.clone();
        let star_phi = pm.wedge(&a)? + w.wedge_pow(2).scale_q(&crate::ring::q(1, 2));
        if phi.hodge() != star_phi {
            return Err(Error::InvalidStructure(
                "*phi does not match the assembled 4-form".into(),
            ));
        }
        if phi.wedge(&star_phi)? != Form::volume(frame).scale_int(7) {
            return Err(Error::InvalidStructure("phi ∧ *phi != 7 vol".into()));
        }
        let ops = Operators::new(frame, &phi, &star_phi);
        Ok(G2Structure {
            model,
            alpha,
            omega: w,
            psi_plus: pp,
            psi_minus: pm,
            phi,
            star_phi,
            extension: None,
            base_fingerprint: None,
            ops,
        })
    }

    /// The standard structure on a model.
    pub fn standard(model: FrameModel, alpha: u8) -> Result<Self> {
        Self::new(
            model,
            alpha,
            &standard::omega(F6),
            &standard::psi_plus(F6),
            &standard::psi_minus(F6),
        )
    }

    pub(crate) fn with_extension(mut self, ext: G2Extension, fingerprint: String) -> Self {
        self.extension = Some(ext);
        self.base_fingerprint = Some(fingerprint);
        self
    }

    pub fn model(&self) -> &FrameModel {
        &self.model
    }

    pub fn alpha_index(&self) -> u8 {
        self.alpha
    }

    pub fn alpha(&self) -> Form {
        Form::generator(self.model.frame(), self.alpha)
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

    pub fn phi(&self) -> &Form {
        &self.phi
    }

    pub fn star_phi(&self) -> &Form {
        &self.star_phi
    }

    pub fn extension(&self) -> Option<&G2Extension> {
        self.extension.as_ref()
    }

    /// Fingerprint of the SU(3)-structure this was built from.
    pub fn base_fingerprint(&self) -> Option<&str> {
        self.base_fingerprint.as_deref()
    }

    /// Components of a form of degree 2..=5 keyed by irrep dimension.
    pub fn irrep_project(&self, a: &Form) -> Result<BTreeMap<usize, Form>> {
        let k = a.degree();
        if !(2..=5).contains(&k) {
            return Err(Error::Degree(format!(
                "irreducible projections need degree 2..5, got {k}"
            )));
        }
        if a.frame() != self.model.frame() {
            return Err(Error::FrameMismatch {
                left: a.frame().to_string(),
                right: self.model.frame().to_string(),
            });
        }
        Ok(self
            .ops
            .proj
            .iter()
            .filter(|((d, _), _)| *d == k)
            .map(|((_, n), p)| (*n, apply_to_form(p, a, k)))
            .collect())
    }

    /// Projector matrix for `(degree, irrep dimension)`.
    pub fn projector(&self, degree: usize, irrep: usize) -> Option<&QMatrix> {
        self.ops.proj.get(&(degree, irrep))
    }

    /// `v` with `a = v∧φ`, for `a` in the 7-part of `Λ⁴`.
    pub fn vector_of_four_form(&self, a: &Form) -> Form {
        apply_to_form(&self.ops.wedge_phi_left_inv, a, 1)
    }

    /// `v` with `a = v∧*φ`, for `a` in the 7-part of `Λ⁵`.
    pub fn vector_of_five_form(&self, a: &Form) -> Form {
        apply_to_form(&self.ops.wedge_star_left_inv, a, 1)
    }

    pub fn torsion(&self) -> G2TorsionReport {
        torsion(self)
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct G2Flags {
    pub calibrated: bool,
    pub cocalibrated: bool,
    pub nearly_parallel: bool,
    pub x1: bool,
    pub x2: bool,
    pub x3: bool,
    pub x4: bool,
}

impl G2Flags {
    pub fn classes(&self) -> Vec<&'static str> {
        [(self.x1, "X1"), (self.x2, "X2"), (self.x3, "X3"), (self.x4, "X4")]
            .into_iter()
            .filter_map(|(on, n)| on.then_some(n))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct G2TorsionReport {
    pub dphi: Form,
    pub dstarphi: Form,
    /// `dφ` has 1-part `dphi_1 · *φ`.
    pub dphi_1: RingElement,
    pub dphi_7: Form,
    pub dphi_27: Form,
    pub dstarphi_7: Form,
    pub dstarphi_14: Form,
    /// `dφ ∧ φ = X1 · vol`.
    pub x1: RingElement,
    /// `*((*d*φ) ∧ *φ)`.
    pub x4vec: Form,
    /// `v` with `dphi_7 = v∧φ`.
    pub dphi_7_vector: Form,
    /// `u` with `dstarphi_7 = u∧*φ`.
    pub dstarphi_7_vector: Form,
    /// Coefficient of `dφ` along `3ψ₋∧α - 2ω²`.
    pub x3_invariant: RingElement,
    pub flags: G2Flags,
    pub base_fingerprint: Option<String>,
    pub rho: Option<Form>,
}

pub fn torsion(g: &G2Structure) -> G2TorsionReport {
    let m = &g.model;
    let dphi = m.differential(&g.phi);
    let dstar = m.differential(&g.star_phi);
    let p4 = g.irrep_project(&dphi).unwrap();
    let p5 = g.irrep_project(&dstar).unwrap();
    let seven = qi(7).recip();
    let dphi_1 = dphi.inner(&g.star_phi).scale(&seven);
    let x1 = dphi.wedge(&g.phi).unwrap().top_coefficient();
    let x4vec = dstar.hodge().wedge(&g.star_phi).unwrap().hodge();
    let inv = g.psi_minus.wedge(&g.alpha()).unwrap().scale_int(3) - g.omega.wedge_pow(2).scale_int(2);
    let norm = inv.inner(&inv).as_constant().unwrap();
    let x3_invariant = dphi.inner(&inv).scale(&norm.recip());
    let (dphi_7, dphi_27) = (p4[&7].clone(), p4[&27].clone());
    let (dstarphi_7, dstarphi_14) = (p5[&7].clone(), p5[&14].clone());
    let nearly_parallel = dstar.is_zero() && !dphi_1.is_zero() && (&dphi - &g.star_phi.scale(&dphi_1)).is_zero();
    let flags = G2Flags {
        calibrated: dphi.is_zero(),
        cocalibrated: dstar.is_zero(),
        nearly_parallel,
        x1: !dphi_1.is_zero(),
        x2: !dstarphi_14.is_zero(),
        x3: !dphi_27.is_zero(),
        x4: !dphi_7.is_zero() || !dstarphi_7.is_zero(),
    };
    G2TorsionReport {
        dphi_7_vector: g.vector_of_four_form(&dphi_7),
        dstarphi_7_vector: g.vector_of_five_form(&dstarphi_7),
        dphi,
        dstarphi: dstar,
        dphi_1,
        dphi_7,
        dphi_27,
        dstarphi_7,
        dstarphi_14,
        x1,
        x4vec,
        x3_invariant,
        flags,
        base_fingerprint: g.base_fingerprint.clone(),
        rho: g.extension.as_ref().map(|e| e.rho.clone()),
    }
}

/// Components of a curvature form: `ρ = ρ0 ω + ρ1 + ρ2`, with `ρ1`
/// primitive of type (1,1) and `ρ2` of type (2,0)+(0,2).
#[derive(Clone, Debug, PartialEq)]
pub struct RhoSplit {
    pub rho0: RingElement,
    pub rho1: Form,
    pub rho2: Form,
}

impl RhoSplit {
    pub fn new(s: &SU3Structure, rho: &Form) -> Self {
        let w = s.omega();
        let rho0 = rho.inner(w).scale(&qi(3).recip());
        let rho2 = s.real_type_part(rho, 2, 0);
        let rho1 = rho - &w.scale(&rho0) - rho2.clone();
        RhoSplit { rho0, rho1, rho2 }
    }

    pub fn total(&self, s: &SU3Structure) -> Form {
        s.omega().scale(&self.rho0) + self.rho1.clone() + self.rho2.clone()
    }
}

/// Names of the 1-form features that the vector parts of the G2 torsion are
/// regressed on.
pub const VECTOR_FEATURES: [&str; 9] = [
    "w4",
    "w5",
    "jw4",
    "jw5",
    "rho2_psi_plus",
    "rho2_psi_minus",
    "w1p_alpha",
    "w1m_alpha",
    "rho0_alpha",
];

/// Scalar features for the invariant parts.
pub const SCALAR_FEATURES: [&str; 2] = ["w1p", "rho0"];

/// Exact constants relating G2 torsion components to SU(3) torsion and the
/// curvature decomposition. Values are rational strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct G2Constants {
    pub version: u32,
    pub x1: BTreeMap<String, String>,
    pub dphi_1: BTreeMap<String, String>,
    pub x3_invariant: BTreeMap<String, String>,
    pub dphi_7: BTreeMap<String, String>,
    pub dstarphi_7: BTreeMap<String, String>,
    pub x4vec: BTreeMap<String, String>,
}

impl G2Constants {
    fn get(table: &BTreeMap<String, String>, name: &str) -> Rational {
        table.get(name).and_then(|s| parse_rational(s)).unwrap_or_default()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}

const CONSTANTS_JSON: &str = include_str!("../data/g2_constants.json");

/// Seed and sample count used to regenerate the frozen constants.
pub const FREEZE_SEED: u64 = 20_240_731;
pub const FREEZE_SAMPLES: usize = 4;

/// The frozen constants table.
pub fn frozen_constants() -> &'static G2Constants {
    static C: OnceLock<G2Constants> = OnceLock::new();
    C.get_or_init(|| serde_json::from_str(CONSTANTS_JSON).expect("valid constants file"))
}

/// A pointwise-generic sample: an SU(3)-structure with random structure
/// constants (no Jacobi requirement) and a random curvature form.
pub fn generic_sample(rng: &mut ChaCha8Rng) -> Result<(SU3Structure, Form)> {
    let random_two_form = |rng: &mut ChaCha8Rng| {
        let terms: Vec<(Blade, RingElement)> = F6
            .blades(2)
            .into_iter()
            .filter_map(|b| {
                let v: i64 = rng.gen_range(-3..=3);
                (v != 0 && rng.gen_bool(0.5)).then(|| (b, RingElement::int(v)))
            })
            .collect();
        Form::from_terms(F6, 2, terms)
    };
    let diffs: Vec<(u8, Form)> = (1..=6).map(|i| (i, random_two_form(rng))).collect();
    let m = FrameModel::new_unchecked(F6, diffs)?;
    let s = SU3Structure::standard(m)?;
    let rho = random_two_form(rng);
    Ok((s, rho))
}

/// Circle extension without the closedness check on `ρ`, for pointwise
/// algebra only.
pub(crate) fn extension_unchecked(s: &SU3Structure, rho: &Form) -> Result<G2Structure> {
    let mut m = s.model().enlarge(Frame::CIRCLE7)?;
    m.set_differential_unchecked(7, rho.embed(Frame::CIRCLE7)?)?;
    let g = G2Structure::new(m, 7, s.omega(), s.psi_plus(), s.psi_minus())?;
    Ok(g.with_extension(
        G2Extension {
            base: s.model().clone(),
            alpha: 7,
            rho: rho.clone(),
        },
        s.fingerprint(),
    ))
}

struct Features {
    scalars: Vec<RingElement>,
    vectors: Vec<Form>,
}

fn features(s: &SU3Structure, ws: &SU3TorsionReport, split: &RhoSplit, frame: Frame, alpha: u8) -> Features {
    let e = |f: &Form| f.embed(frame).expect("6-frame embeds");
    let a = Form::generator(frame, alpha);
    let vectors = vec![
        e(&ws.w4),
        e(&ws.w5),
        e(&s.apply_j(&ws.w4)),
        e(&s.apply_j(&ws.w5)),
        e(&split.rho2.contract(s.psi_plus()).unwrap()),
        e(&split.rho2.contract(s.psi_minus()).unwrap()),
        a.scale(&ws.w1p),
        a.scale(&ws.w1m),
        a.scale(&split.rho0),
    ];
    Features {
        scalars: vec![ws.w1p.clone(), split.rho0.clone()],
        vectors,
    }
}

fn constant(x: &RingElement) -> Result<Rational> {
    x.as_constant()
        .ok_or_else(|| Error::Unsupported("regression samples need constant torsion".into()))
}

fn solve_exact(rows: Vec<Vec<Rational>>, rhs: Vec<Rational>, names: &[&str]) -> Result<BTreeMap<String, String>> {
    let a = QMatrix::from_rows(&rows);
    if a.rank() < names.len() {
        return Err(Error::NotGeneric(format!(
            "rank {} < {} unknowns",
            a.rank(),
            names.len()
        )));
    }
    let x = a
        .solve(&rhs)
        .ok_or_else(|| Error::Unsupported("no exact linear relation on the chosen features".into()))?;
    Ok(names
        .iter()
        .zip(x)
        .map(|(n, v)| (n.to_string(), fmt_rational(&v)))
        .collect())
}

/// Solves for the constants on a list of samples `(structure, ρ)`.
pub fn proportionality_freeze(samples: &[(SU3Structure, Form)]) -> Result<G2Constants> {
    let mut scalar_rows = Vec::new();
    let (mut x1, mut d1, mut x3) = (Vec::new(), Vec::new(), Vec::new());
    let mut vec_rows = Vec::new();
    let (mut v7, mut u7, mut x4) = (Vec::new(), Vec::new(), Vec::new());
    for (s, rho) in samples {
        let ws = s.torsion();
        let split = RhoSplit::new(s, rho);
        let g = extension_unchecked(s, rho)?;
        let gs = g.torsion();
        let frame = g.model().frame();
        let f = features(s, &ws, &split, frame, 7);
        scalar_rows.push(f.scalars.iter().map(constant).collect::<Result<Vec<_>>>()?);
        x1.push(constant(&gs.x1)?);
        d1.push(constant(&gs.dphi_1)?);
        x3.push(constant(&gs.x3_invariant)?);
        for b in frame.blades(1) {
            vec_rows.push(
                f.vectors
                    .iter()
                    .map(|v| constant(&v.coefficient(b)))
                    .collect::<Result<Vec<_>>>()?,
            );
            v7.push(constant(&gs.dphi_7_vector.coefficient(b))?);
            u7.push(constant(&gs.dstarphi_7_vector.coefficient(b))?);
            x4.push(constant(&gs.x4vec.coefficient(b))?);
        }
    }
    Ok(G2Constants {
        version: 1,
        x1: solve_exact(scalar_rows.clone(), x1, &SCALAR_FEATURES)?,
        dphi_1: solve_exact(scalar_rows.clone(), d1, &SCALAR_FEATURES)?,
        x3_invariant: solve_exact(scalar_rows, x3, &SCALAR_FEATURES)?,
        dphi_7: solve_exact(vec_rows.clone(), v7, &VECTOR_FEATURES)?,
        dstarphi_7: solve_exact(vec_rows.clone(), u7, &VECTOR_FEATURES)?,
        x4vec: solve_exact(vec_rows, x4, &VECTOR_FEATURES)?,
    })
}

/// Regenerates the constants from the fixed seed.
pub fn regenerate_constants() -> Result<G2Constants> {
    let mut rng = ChaCha8Rng::seed_from_u64(FREEZE_SEED);
    let samples = (0..FREEZE_SAMPLES)
        .map(|_| generic_sample(&mut rng))
        .collect::<Result<Vec<_>>>()?;
    proportionality_freeze(&samples)
}

/// One named check of [`verify_correspondence`].
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrespondenceReport {
    pub checks: Vec<Check>,
}

impl CorrespondenceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.checks.iter().find(|c| !c.passed).map(|c| c.name.as_str())
    }
}

fn combine_scalar(table: &BTreeMap<String, String>, f: &Features) -> RingElement {
    let mut acc = RingElement::zero();
    for (name, v) in SCALAR_FEATURES.iter().zip(&f.scalars) {
        acc += &v.scale(&G2Constants::get(table, name));
    }
    acc
}

fn combine_vector(table: &BTreeMap<String, String>, f: &Features, frame: Frame) -> Form {
    let mut acc = Form::zero(frame, 1);
    for (name, v) in VECTOR_FEATURES.iter().zip(&f.vectors) {
        acc = acc + v.scale_q(&G2Constants::get(table, name));
    }
    acc
}

/// Checks the G2 torsion of a product or circle extension against the
/// SU(3) torsion of its base and the curvature decomposition.
pub fn verify_correspondence(
    s: &SU3Structure,
    ws: &SU3TorsionReport,
    split: &RhoSplit,
    gs: &G2TorsionReport,
) -> Result<CorrespondenceReport> {
    let fp = s.fingerprint();
    if ws.fingerprint != fp {
        return Err(Error::Provenance(
            "SU(3) report was computed from another structure".into(),
        ));
    }
    if gs.base_fingerprint.as_deref() != Some(fp.as_str()) {
        return Err(Error::Provenance(
            "G2 report was not built from this SU(3)-structure".into(),
        ));
    }
    let rho = split.total(s);
    if gs.rho.as_ref().map(|r| r.restrict(F6)).transpose()? != Some(rho.clone()) {
        return Err(Error::Provenance("curvature form differs from the extension's".into()));
    }
    let frame = gs.dphi.frame();
    let alpha = if frame.has_dt() { 0 } else { 7 };
    let f = features(s, ws, split, frame, alpha);
    let c = frozen_constants();
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool| {
        checks.push(Check {
            name: name.to_string(),
            passed,
        })
    };

    push("X1 = x1(W1+, rho0)", gs.x1 == combine_scalar(&c.x1, &f));
    push("dphi_1 = dphi_1(W1+, rho0)", gs.dphi_1 == combine_scalar(&c.dphi_1, &f));
    push(
        "X3 invariant = x3(W1+, rho0)",
        gs.x3_invariant == combine_scalar(&c.x3_invariant, &f),
    );
    push(
        "dphi_7 vector",
        gs.dphi_7_vector == combine_vector(&c.dphi_7, &f, frame),
    );
    push(
        "dstarphi_7 vector",
        gs.dstarphi_7_vector == combine_vector(&c.dstarphi_7, &f, frame),
    );
    push("X4 vector", gs.x4vec == combine_vector(&c.x4vec, &f, frame));

    let w = s.omega();
    let classes = ws.flags.classes();
    let only = |allowed: &[&str]| classes.iter().all(|c| allowed.contains(c));
    let calibrated_expected = ws.d_omega.is_zero() && (&ws.d_psi_plus + &w.wedge(&rho)?).is_zero();
    push(
        "calibrated iff dω = 0 and dψ₊ + ω∧ρ = 0",
        gs.flags.calibrated == calibrated_expected,
    );
    let cocal_expected =
        ws.d_psi_minus.is_zero() && (&w.wedge(&ws.d_omega)? - &s.psi_minus().wedge(&split.rho2)?).is_zero();
    push(
        "cocalibrated iff dψ₋ = 0 and ω∧dω = ψ₋∧ρ₂",
        gs.flags.cocalibrated == cocal_expected,
    );
    if rho.is_zero() {
        push(
            "product: calibrated iff τ₁ ∈ W2-",
            gs.flags.calibrated == only(&["W2-"]),
        );
        push(
            "product: cocalibrated iff τ₁ ∈ W1+ + W2+ + W3",
            gs.flags.cocalibrated == only(&["W1+", "W2+", "W3"]),
        );
    }
    if gs.flags.calibrated && gs.flags.cocalibrated {
        push("closed: dω = 0", ws.d_omega.is_zero());
        push("closed: dψ₋ = 0", ws.d_psi_minus.is_zero());
        push("closed: τ₁ ∈ W2+", only(&["W2+"]));
        push("closed: ρ = ρ₁", split.rho0.is_zero() && split.rho2.is_zero());
        push("closed: dρ₁ = 0", s.model().spatial_differential(&split.rho1).is_zero());
    }
    Ok(CorrespondenceReport { checks })
}

/// Generic samples drawn from a seed.
pub fn generic_samples(seed: u64, n: usize) -> Result<Vec<(SU3Structure, Form)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| generic_sample(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::q;

    fn flat7() -> G2Structure {
        G2Structure::standard(FrameModel::flat(Frame::CIRCLE7), 7).unwrap()
    }

    fn f7(s: &str) -> Form {
        Form::parse(Frame::CIRCLE7, s).unwrap()
    }

    #[test]
    fn phi_and_star_phi() {
        let g = flat7();
        assert_eq!(g.phi().wedge(g.star_phi()).unwrap(), f7("7*e1234567"));
        assert_eq!(*g.phi(), f7("e127 + e347 + e567 + e135 - e146 - e236 - e245"));
    }

    #[test]
    fn lemma_memberships() {
        let g = flat7();
        let a = g.alpha();
        let check = |form: Form, irrep: usize| {
            let parts = g.irrep_project(&form).unwrap();
            for (n, p) in &parts {
                if *n == irrep {
                    assert_eq!(*p, form, "irrep {n}");
                } else {
                    assert!(p.is_zero(), "irrep {n} of {form}");
                }
            }
        };
        check(g.psi_minus().clone(), 7);
        check(
            g.psi_plus().scale_int(3) - g.omega().wedge(&a).unwrap().scale_int(4),
            27,
        );
        check(g.psi_plus().wedge(&a).unwrap(), 7);
        check(
            g.psi_minus().wedge(&a).unwrap().scale_int(3) - g.omega().wedge_pow(2).scale_int(2),
            27,
        );
        check(g.phi().clone(), 1);
        check(f7("e1347 + e1567 - e1236 - e1245"), 7);
        check(f7("e1347 + e1567 + e1236 + e1245"), 27);
        check(f7("e13456 + e12357 - e12467"), 7);
        check(f7("2*e13456 - e12357 + e12467"), 14);
    }

    #[test]
    fn projector_ranks() {
        let g = flat7();
        for ((k, n), p) in &g.ops.proj {
            assert_eq!(p.rank(), *n, "degree {k}");
            assert_eq!(p.mul(p), *p);
        }
    }

    #[test]
    fn frozen_constants_match_regeneration() {
        assert_eq!(regenerate_constants().unwrap(), *frozen_constants());
        assert_eq!(frozen_constants().to_json(), CONSTANTS_JSON);
    }

    #[test]
    fn constants_agree_on_independent_samples() {
        let other = proportionality_freeze(&generic_samples(7, 3).unwrap()).unwrap();
        assert_eq!(other, *frozen_constants());
    }

    #[test]
    fn generic_samples_satisfy_correspondence() {
        for (s, rho) in generic_samples(99, 3).unwrap() {
            let g = extension_unchecked(&s, &rho).unwrap();
            let ws = s.torsion();
            let split = RhoSplit::new(&s, &rho);
            let r = verify_correspondence(&s, &ws, &split, &g.torsion()).unwrap();
            assert!(r.passed(), "{:?}", r.first_failure());
        }
    }

    #[test]
    fn provenance_mismatch_is_rejected() {
        let mut it = generic_samples(5, 2).unwrap().into_iter();
        let (s1, r1) = it.next().unwrap();
        let (s2, _) = it.next().unwrap();
        let g1 = extension_unchecked(&s1, &r1).unwrap().torsion();
        let ws2 = s2.torsion();
        let split = RhoSplit::new(&s2, &r1);
        assert!(matches!(
            verify_correspondence(&s2, &ws2, &split, &g1),
            Err(Error::Provenance(_))
        ));
    }

    #[test]
    fn sample_relations() {
        // dω = ω∧e1, dψ₋ = ψ₋∧e1 on a product: d*φ = ϑ
        let g = flat7();
        let a = g.alpha();
        let e1 = f7("e1");
        let dw = g.omega().wedge(&e1).unwrap();
        let dpm = g.psi_minus().wedge(&e1).unwrap();
        let dstar = dpm.wedge(&a).unwrap() + g.omega().wedge(&dw).unwrap();
        assert_eq!(dstar, f7("2*e13456 - e12357 + e12467"));
        // dω = ω∧e1, dψ₊ = -ψ₊∧e1: dφ = ζ
        let dpp = -g.psi_plus().wedge(&e1).unwrap();
        let dphi = dw.wedge(&a).unwrap() + dpp;
        assert_eq!(dphi, f7("e1347 + e1567 - e1236 - e1245"));
        // dω = ω∧e1/2, dψ₋ = -ψ₋∧e1: d*φ = ξ
        let dstar = -dpm.wedge(&a).unwrap() + g.omega().wedge(&dw).unwrap().scale_q(&q(1, 2));
        assert_eq!(dstar, f7("e13456 + e12357 - e12467"));
    }
}
