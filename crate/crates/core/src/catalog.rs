//! Built-in models and structures, keyed by name.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exalg::{standard, Form, Frame};
use crate::g2::G2Structure;
use crate::model::{build_circle_extension, build_product, FrameModel, StructureFile};
use crate::ring::{qi, rational_to_f64, Rational};
use crate::su3::SU3Structure;

const F6: Frame = Frame::SPATIAL6;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub su3: SU3Structure,
    pub g2: Option<G2Structure>,
    /// Non-zero SU(3) torsion components.
    pub expected_su3: Vec<&'static str>,
    /// `(calibrated, cocalibrated)` for entries carrying a G2-structure.
    pub expected_g2: Option<(bool, bool)>,
}

/// Structures described by a structure file.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub su3: SU3Structure,
    pub g2: Option<G2Structure>,
}

impl CatalogEntry {
    /// Re-runs the torsion computations and compares with the stored
    /// classes.
    pub fn verify(&self) -> Result<()> {
        let got = self.su3.torsion().flags.classes();
        if got != self.expected_su3 {
            return Err(Error::InvalidStructure(format!(
                "{}: SU(3) classes {:?}, expected {:?}",
                self.name, got, self.expected_su3
            )));
        }
        match (&self.g2, self.expected_g2) {
            (Some(g), Some((cal, cocal))) => {
                let f = g.torsion().flags;
                if f.calibrated != cal || f.cocalibrated != cocal {
                    return Err(Error::InvalidStructure(format!(
                        "{}: calibrated/cocalibrated = {}/{}, expected {}/{}",
                        self.name, f.calibrated, f.cocalibrated, cal, cocal
                    )));
                }
            }
            (None, None) => {}
            _ => return Err(Error::InvalidStructure(format!("{}: G2 data missing", self.name))),
        }
        Ok(())
    }

    /// Structure-file form of the entry; forms are written on the model's
    /// frame.
    pub fn to_structure_file(&self) -> StructureFile {
        let (model, alpha, rho) = match &self.g2 {
            Some(g) if g.alpha_index() == 7 => (g.model().clone(), Some(7), g.extension().map(|e| e.rho.clone())),
            _ => (self.su3.model().clone(), None, None),
        };
        let e = |f: &Form| Some(f.embed(model.frame()).expect("6-frame embeds"));
        StructureFile {
            omega: e(self.su3.omega()),
            psi_plus: e(self.su3.psi_plus()),
            psi_minus: e(self.su3.psi_minus()),
            rho: rho.and_then(|r| e(&r)),
            model,
            alpha,
        }
    }

    pub fn to_text(&self) -> String {
        self.to_structure_file().to_text()
    }
}

fn form6(f: Option<&Form>, default: Form) -> Result<Form> {
    match f {
        Some(a) => a.restrict(F6),
        None => Ok(default),
    }
}

/// Builds the structures a parsed file describes. Omitted forms default to
/// the standard ones; `ψ₋` is recovered from `ψ₊` when absent.
pub fn load(sf: &StructureFile) -> Result<Loaded> {
    let frame = sf.model.frame();
    let omega = form6(sf.omega.as_ref(), standard::omega(F6))?;
    let pp = form6(sf.psi_plus.as_ref(), standard::psi_plus(F6))?;
    let su3_on = |m: FrameModel| match &sf.psi_minus {
        Some(pm) => SU3Structure::new(m, omega.clone(), pp.clone(), pm.restrict(F6)?),
        None => SU3Structure::from_stable(m, omega.clone(), pp.clone()),
    };
    if frame == F6 {
        return Ok(Loaded {
            su3: su3_on(sf.model.clone())?,
            g2: None,
        });
    }
    if frame == Frame::INTERVAL7 {
        let su3 = su3_on(sf.model.clone())?;
        let g2 = G2Structure::new(sf.model.clone(), 0, su3.omega(), su3.psi_plus(), su3.psi_minus())?;
        return Ok(Loaded { su3, g2: Some(g2) });
    }
    // circle bundle over the 6-model spanned by e1..e6
    if sf.model.is_warped() || sf.model.time().is_some() {
        return Err(Error::Unsupported("warped circle bundles".into()));
    }
    let mut diffs = Vec::new();
    for i in 1..=6u8 {
        let f = sf
            .model
            .structure_form(i)
            .restrict(F6)
            .map_err(|_| Error::InvalidStructure(format!("d e{i} involves e7; not a circle bundle")))?;
        diffs.push((i, f));
    }
    let base = FrameModel::new(F6, diffs)?;
    let rho = sf
        .model
        .structure_form(7)
        .restrict(F6)
        .map_err(|_| Error::InvalidStructure("d e7 involves e7".into()))?;
    if let Some(r) = &sf.rho {
        if r.restrict(F6)? != rho {
            return Err(Error::InvalidStructure(format!("rho = {r} but d e7 = {rho}")));
        }
    }
    let su3 = su3_on(base.clone())?;
    let g2 = build_circle_extension(&base, &su3, &rho)?;
    Ok(Loaded { su3, g2: Some(g2) })
}

fn model(exprs: &[(u8, &str)]) -> FrameModel {
    FrameModel::from_exprs(F6, exprs).expect("catalog model")
}

fn warped(base: &FrameModel, scales: &[(u8, Rational, i32)]) -> FrameModel {
    let mut m = FrameModel::new(
        Frame::INTERVAL7,
        (1..=6u8).map(|i| (i, base.structure_form(i).embed(Frame::INTERVAL7).unwrap())),
    )
    .and_then(|m| m.with_time(0))
    .expect("interval model");
    for (i, c, k) in scales {
        m = m.with_scale(*i, c.clone(), *k).expect("scale");
    }
    m
}

fn iwasawa() -> FrameModel {
    model(&[(5, "-e14 - e23"), (6, "-e13 - e42")])
}

/// Unwarped 6-model with the structure constants of `m` on `e1..e6`.
pub fn base_model(m: &FrameModel) -> Result<FrameModel> {
    let mut diffs = Vec::new();
    for i in 1..=6u8 {
        diffs.push((i, m.structure_form(i).restrict(F6)?));
    }
    FrameModel::new(F6, diffs)
}

/// `d e^i = c_i e^1 ∧ e^i` with `c = (0, -2, 1/2, 1/2, 1/2, 1/2)`.
pub fn solvable_e1() -> FrameModel {
    model(&[
        (2, "-2*e12"),
        (3, "1/2*e13"),
        (4, "1/2*e14"),
        (5, "1/2*e15"),
        (6, "1/2*e16"),
    ])
}

pub fn sec3ex2_model() -> FrameModel {
    model(&[(3, "e25"), (6, "-e24")])
}

/// The Iwasawa-type model over an interval with `E^{1..4} = t e^i`,
/// `E^{5,6} = t^-1 e^i`, `E^0 = t^2 dt`.
pub fn iwasawa_variant_model() -> FrameModel {
    let one = Rational::one;
    warped(
        &iwasawa(),
        &[
            (1, one(), 1),
            (2, one(), 1),
            (3, one(), 1),
            (4, one(), 1),
            (5, one(), -1),
            (6, one(), -1),
            (0, one(), 2),
        ],
    )
}

pub fn nil2step_model() -> FrameModel {
    let one = Rational::one;
    warped(
        &model(&[(5, "-e14 - e23"), (6, "e24")]),
        &[
            (1, one(), 1),
            (2, one(), 2),
            (3, one(), 1),
            (4, one(), 2),
            (5, one(), -2),
            (6, one(), -1),
            (0, qi(2), 4),
        ],
    )
}

fn standard_on(m: FrameModel) -> SU3Structure {
    SU3Structure::standard(m).expect("standard structure")
}

fn build(name: &str) -> Result<CatalogEntry> {
    let e = match name {
        "torus6" => CatalogEntry {
            name: "torus6",
            description: "flat 6-torus with the standard structure",
            su3: standard_on(FrameModel::flat(F6)),
            g2: None,
            expected_su3: vec![],
            expected_g2: None,
        },
        "nil-sec3ex2" => {
            let s = standard_on(sec3ex2_model());
            let g = build_product(s.model(), &s)?;
            CatalogEntry {
                name: "nil-sec3ex2",
                description: "nilmanifold with de3 = e25, de6 = -e24; product with an interval is calibrated",
                su3: s,
                g2: Some(g),
                expected_su3: vec!["W2-"],
                expected_g2: Some((true, false)),
            }
        }
        "nil-sec3ex2-swap" => {
            let s0 = standard_on(sec3ex2_model());
            let s = SU3Structure::new(
                s0.model().clone(),
                s0.omega().clone(),
                s0.psi_minus().clone(),
                -s0.psi_plus().clone(),
            )?;
            let g = build_product(s.model(), &s)?;
            CatalogEntry {
                name: "nil-sec3ex2-swap",
                description: "same nilmanifold with psi+ and psi- exchanged; the product is cocalibrated",
                su3: s,
                g2: Some(g),
                expected_su3: vec!["W2+"],
                expected_g2: Some((false, true)),
            }
        }
        "iwasawa6" => CatalogEntry {
            name: "iwasawa6",
            description: "Iwasawa-type nilmanifold de5 = -e14 - e23, de6 = -e13 - e42, unwarped",
            su3: standard_on(iwasawa()),
            g2: None,
            expected_su3: vec!["W1-", "W2-"],
            expected_g2: None,
        },
        "iwasawa-variant" => {
            let m = iwasawa_variant_model();
            let s = standard_on(m.clone());
            let g = G2Structure::standard(m, 0)?;
            CatalogEntry {
                name: "iwasawa-variant",
                description: "Iwasawa-type nilmanifold times an interval, warped frame; holonomy G2",
                su3: s,
                g2: Some(g),
                expected_su3: vec!["W1-", "W2-"],
                expected_g2: Some((true, true)),
            }
        }
        "nil2step" => {
            let m = nil2step_model();
            let s = standard_on(m.clone());
            let g = G2Structure::standard(m, 0)?;
            CatalogEntry {
                name: "nil2step",
                description: "2-step nilmanifold de5 = -e14 - e23, de6 = e24 times an interval, warped frame",
                su3: s,
                g2: Some(g),
                expected_su3: vec!["W1-", "W2-", "W3"],
                expected_g2: Some((true, true)),
            }
        }
        "nil3step" => CatalogEntry {
            name: "nil3step",
            description: "3-step nilmanifold de3 = e25, de6 = e14 - e23; half-flat",
            su3: standard_on(model(&[(3, "e25"), (6, "e14 - e23")])),
            g2: None,
            expected_su3: vec!["W1-", "W2-", "W3"],
            expected_g2: None,
        },
        "solvable-e1" => CatalogEntry {
            name: "solvable-e1",
            description: "solvable algebra de_i = c_i e1 ^ e_i with d omega = omega ^ e1 and d psi+ = psi+ ^ e1",
            su3: standard_on(solvable_e1()),
            g2: None,
            expected_su3: vec!["W4", "W5"],
            expected_g2: None,
        },
        "torus-circle" => {
            let s = standard_on(FrameModel::flat(F6));
            let rho = Form::parse(F6, "e12 + e34 + e56")?;
            let g = build_circle_extension(s.model(), &s, &rho)?;
            CatalogEntry {
                name: "torus-circle",
                description: "circle bundle over the flat torus with curvature omega",
                su3: s,
                g2: Some(g),
                expected_su3: vec![],
                expected_g2: Some((false, true)),
            }
        }
        "torus-circle-primitive" => {
            let s = standard_on(FrameModel::flat(F6));
            let rho = Form::parse(F6, "e12 - e34")?;
            let g = build_circle_extension(s.model(), &s, &rho)?;
            CatalogEntry {
                name: "torus-circle-primitive",
                description: "circle bundle over the flat torus with primitive (1,1) curvature e12 - e34",
                su3: s,
                g2: Some(g),
                expected_su3: vec![],
                expected_g2: Some((false, true)),
            }
        }
        _ => {
            return Err(Error::UnknownExample {
                name: name.to_string(),
                available: names().iter().map(|s| s.to_string()).collect(),
            })
        }
    };
    Ok(e)
}

pub fn names() -> &'static [&'static str] {
    &[
        "torus6",
        "nil-sec3ex2",
        "nil-sec3ex2-swap",
        "iwasawa6",
        "iwasawa-variant",
        "nil2step",
        "nil3step",
        "solvable-e1",
        "torus-circle",
        "torus-circle-primitive",
    ]
}

fn cache() -> &'static BTreeMap<&'static str, CatalogEntry> {
    static CACHE: OnceLock<BTreeMap<&'static str, CatalogEntry>> = OnceLock::new();
    CACHE.get_or_init(|| {
        names()
            .iter()
            .map(|n| {
                let e = build(n).expect("catalog entry builds");
                e.verify().expect("catalog entry matches its classes");
                (*n, e)
            })
            .collect()
    })
}

/// Looks up a validated entry.
pub fn get_example(name: &str) -> Result<&'static CatalogEntry> {
    cache().get(name).ok_or_else(|| Error::UnknownExample {
        name: name.to_string(),
        available: names().iter().map(|s| s.to_string()).collect(),
    })
}

pub fn all() -> impl Iterator<Item = &'static CatalogEntry> {
    cache().values()
}

/// Closed-form Iwasawa-variant solution in the unwarped coordinate coframe
/// at parameter `t`: `ω = t²(e12+e34) + t⁻²e56`, `ψ₊ = t·Re θ¹θ²θ³`.
/// Coefficients are listed on the canonical 2- and 3-blades of `e1..e6`.
pub fn iwasawa_closed_form(t: f64) -> (Vec<f64>, Vec<f64>) {
    let w = standard::omega(F6);
    let pp = standard::psi_plus(F6);
    let val = |f: &Form, b: crate::exalg::Blade| rational_to_f64(&f.coefficient(b).as_constant().expect("constant"));
    let omega = F6
        .blades(2)
        .into_iter()
        .map(|b| val(&w, b) * if b.contains(5) { 1.0 / (t * t) } else { t * t })
        .collect();
    let psi = F6.blades(3).into_iter().map(|b| val(&pp, b) * t).collect();
    (omega, psi)
}

/// Closed-form parameter `t` reached at flow time `s` by a run started at
/// `s0` with `t = 1` (unit lapse, `ds = t² dt`).
pub fn iwasawa_parameter(s: f64, s0: f64) -> f64 {
    (3.0 * (s - s0) + 1.0).cbrt()
}

/// Unwarped Iwasawa-type model with the standard structure, the initial
/// data of the closed-form flow.
pub fn iwasawa_flow_start() -> SU3Structure {
    standard_on(iwasawa())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_model;
    use crate::ring::RingElement;
    use crate::stable::{half_flat_check, symbolic_verify_closed};

    const F7: Frame = Frame::INTERVAL7;

    fn coord(m: &FrameModel, a: &Form) -> Form {
        m.to_coordinate(&a.embed(m.frame()).unwrap())
    }

    #[test]
    fn every_entry_matches_its_classes() {
        assert_eq!(all().count(), names().len());
        for e in all() {
            e.verify().unwrap();
        }
    }

    #[test]
    fn unknown_name_lists_the_catalog() {
        match get_example("s6") {
            Err(Error::UnknownExample { available, .. }) => assert!(available.contains(&"torus6".to_string())),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn export_round_trips() {
        for e in all() {
            let text = e.to_text();
            let sf = parse_model(&text).unwrap();
            assert_eq!(sf, e.to_structure_file(), "{}", e.name);
            let l = load(&sf).unwrap();
            assert_eq!(l.su3.fingerprint(), e.su3.fingerprint(), "{}", e.name);
            let g = match (&l.g2, e.su3.model().frame()) {
                (None, F6) if e.g2.is_some() => Some(build_product(l.su3.model(), &l.su3).unwrap()),
                _ => l.g2.clone(),
            };
            assert_eq!(
                g.as_ref().map(|g| g.phi()),
                e.g2.as_ref().map(|g| g.phi()),
                "{}",
                e.name
            );
            assert_eq!(
                g.as_ref().map(|g| g.model()),
                e.g2.as_ref().map(|g| g.model()),
                "{}",
                e.name
            );
        }
    }

    #[test]
    fn iwasawa_variant_closed_and_evolving() {
        let e = get_example("iwasawa-variant").unwrap();
        let s = &e.su3;
        let m = s.model();
        let t3 = RingElement::t_pow(-3);
        assert_eq!(s.d_hat(s.omega()), s.psi_plus().scale(&t3));
        let dpm = coord(m, &s.d_hat(s.psi_minus()));
        let expect = Form::parse(F7, "-4*t*e1234").unwrap();
        assert_eq!(dpm, expect);
        let (closed, res) = symbolic_verify_closed(e.g2.as_ref().unwrap());
        assert!(closed, "{res:?}");
    }

    #[test]
    fn iwasawa_variant_forms_in_coordinates() {
        let e = get_example("iwasawa-variant").unwrap();
        let m = e.su3.model();
        assert_eq!(
            coord(m, e.su3.omega()),
            Form::parse(F7, "t^2*e12 + t^2*e34 + t^-2*e56").unwrap()
        );
        let pp = standard::psi_plus(F7).scale(&RingElement::t_pow(1));
        assert_eq!(coord(m, e.su3.psi_plus()), pp);
    }

    #[test]
    fn nil2step_displayed_forms() {
        let e = get_example("nil2step").unwrap();
        let g = e.g2.as_ref().unwrap();
        let m = g.model();
        let phi = Form::parse(
            F7,
            "2*t^7*e12^dt + 2*t^7*e34^dt + 2*t*e56^dt + e135 - t^2*e146 - t^2*e236 - t^2*e245",
        )
        .unwrap();
        assert_eq!(m.to_coordinate(g.phi()), phi);
        let star = Form::parse(
            F7,
            "-2*t^7*e246^dt + 2*t^5*e145^dt + 2*t^5*e136^dt + 2*t^5*e235^dt + e1256 + e3456 + t^6*e1234",
        )
        .unwrap();
        assert_eq!(m.to_coordinate(g.star_phi()), star);
        assert!(m.coordinate_differential(&phi).is_zero());
        assert!(m.coordinate_differential(&star).is_zero());
    }

    #[test]
    fn solvable_e1_torsion() {
        let e = get_example("solvable-e1").unwrap();
        let s = &e.su3;
        let e1 = Form::generator(F6, 1);
        assert_eq!(s.d_hat(s.omega()), s.omega().wedge(&e1).unwrap());
        assert_eq!(s.d_hat(s.psi_plus()), s.psi_plus().wedge(&e1).unwrap());
        let r = s.torsion();
        assert_eq!(r.w4, e1);
        assert_eq!(r.w5, e1);
    }

    #[test]
    fn nil3step_is_half_flat() {
        let e = get_example("nil3step").unwrap();
        let s = &e.su3;
        assert!(half_flat_check(s));
        assert_eq!(s.d_hat(s.psi_minus()), Form::parse(F6, "-e1256").unwrap());
    }

    #[test]
    fn sec3ex2_dpsi_minus_and_rank() {
        let e = get_example("nil-sec3ex2").unwrap();
        let r = e.su3.torsion();
        assert_eq!(r.d_psi_minus, Form::parse(F6, "e1234 - e1256").unwrap());
        assert_eq!(r.rank_w12, 1);
    }

    #[test]
    fn closed_form_at_one_is_the_standard_structure() {
        let (w, p) = iwasawa_closed_form(1.0);
        let s = iwasawa_flow_start();
        let wq: Vec<f64> = s
            .omega()
            .rational_coordinates(&F6.blades(2))
            .unwrap()
            .iter()
            .map(rational_to_f64)
            .collect();
        let pq: Vec<f64> = s
            .psi_plus()
            .rational_coordinates(&F6.blades(3))
            .unwrap()
            .iter()
            .map(rational_to_f64)
            .collect();
        assert_eq!(w, wq);
        assert_eq!(p, pq);
        assert_eq!(iwasawa_parameter(0.5, 0.5), 1.0);
    }
}
