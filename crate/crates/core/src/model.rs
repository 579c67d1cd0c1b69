//! Frame models: a coframe with constant structure constants, optional
//! Laurent-monomial warping in a parameter `t`, and the exterior derivative
//! they define.
//!
//! Forms handed to a model are written in its *orthonormal* coframe
//! `E^i = s_i(t) e^i`, where `e^i` is the coordinate coframe whose
//! differentials are the structure constants. The time generator (if any) is
//! the coordinate differential `dt`; it is either the extra slot `0` (an
//! interval factor) or one of the closed generators of the 6-frame, in which
//! case `t` is a function on the 6-manifold itself.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exalg::{parse_form, Blade, Form, Frame};
use crate::g2::{G2Extension, G2Structure};
use crate::ring::{fmt_rational, Rational, RingElement};
use crate::su3::SU3Structure;

#[derive(Clone, Debug, PartialEq)]
pub struct FrameModel {
    frame: Frame,
    /// Coordinate-frame differentials `d e^i`, constant coefficients.
    structure: BTreeMap<u8, Form>,
    /// `E^i = c t^k e^i`; missing entries mean `E^i = e^i`.
    scales: BTreeMap<u8, (Rational, i32)>,
    time: Option<u8>,
}

/// Outcome of checking `d(d e^i) = 0` on every generator.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiReport {
    pub failures: Vec<(u8, Form)>,
}

impl JacobiReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl FrameModel {
    /// Abelian model on the given frame.
    pub fn flat(frame: Frame) -> Self {
        FrameModel {
            frame,
            structure: BTreeMap::new(),
            scales: BTreeMap::new(),
            time: if frame.has_dt() { Some(0) } else { None },
        }
    }

    /// Builds a model from coordinate differentials and checks Jacobi.
    pub fn new<I>(frame: Frame, differentials: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u8, Form)>,
    {
        let mut m = Self::flat(frame);
        for (i, f) in differentials {
            m.set_structure(i, f)?;
        }
        m.validate()?;
        Ok(m)
    }

    /// Convenience constructor from `(i, "expr")` pairs.
    pub fn from_exprs(frame: Frame, exprs: &[(u8, &str)]) -> Result<Self> {
        let mut diffs = Vec::new();
        for (i, e) in exprs {
            diffs.push((*i, parse_form(frame, e, Some(2), 1, 1)?));
        }
        Self::new(frame, diffs)
    }

    /// Same as [`FrameModel::new`] but without the Jacobi check; used for
    /// pointwise (first-order) algebra where `d` only needs to be an
    /// antiderivation.
    pub fn new_unchecked<I>(frame: Frame, differentials: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u8, Form)>,
    {
        let mut m = Self::flat(frame);
        for (i, f) in differentials {
            m.set_structure(i, f)?;
        }
        Ok(m)
    }

    fn set_structure(&mut self, i: u8, f: Form) -> Result<()> {
        if i == 0 || !self.frame.contains(i) {
            return Err(Error::Degree(format!("no generator e{i} in frame {}", self.frame)));
        }
        if f.frame() != self.frame {
            return Err(Error::FrameMismatch {
                left: f.frame().to_string(),
                right: self.frame.to_string(),
            });
        }
        if f.degree() != 2 {
            return Err(Error::Degree(format!("d e{i} must be a 2-form")));
        }
        if !f.is_constant() {
            return Err(Error::Unsupported(format!(
                "structure constants of e{i} depend on t; warp the frame instead"
            )));
        }
        if f.is_zero() {
            self.structure.remove(&i);
        } else {
            self.structure.insert(i, f);
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        let report = self.jacobi_check();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::Jacobi {
                failures: report.failures.into_iter().map(|(i, f)| (i, f.to_string())).collect(),
            })
        }
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn time(&self) -> Option<u8> {
        self.time
    }

    pub fn is_warped(&self) -> bool {
        !self.scales.is_empty()
    }

    /// Whether the time slot is a separate interval factor `dt`.
    pub fn has_interval(&self) -> bool {
        self.time == Some(0)
    }

    pub fn scales(&self) -> &BTreeMap<u8, (Rational, i32)> {
        &self.scales
    }

    /// Coordinate differential `d e^i` (zero form if none was declared).
    pub fn structure_form(&self, i: u8) -> Form {
        self.structure
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Form::zero(self.frame, 2))
    }

    /// Declares a closed generator (or the `dt` slot, index 0) to be the
    /// differential of the parameter `t`.
    pub fn with_time(mut self, index: u8) -> Result<Self> {
        if !self.frame.contains(index) {
            return Err(Error::Degree(format!("no generator {index} in frame {}", self.frame)));
        }
        if index != 0 && self.structure.contains_key(&index) {
            return Err(Error::InvalidStructure(format!(
                "e{index} is not closed and cannot serve as dt"
            )));
        }
        if self.time.is_some_and(|t| t != index) {
            return Err(Error::InvalidStructure("model already has a time generator".into()));
        }
        self.time = Some(index);
        Ok(self)
    }

    /// Sets `E^i = c t^k e^i`. Requires a time generator.
    pub fn with_scale(mut self, i: u8, c: Rational, k: i32) -> Result<Self> {
        if self.time.is_none() {
            return Err(Error::Unsupported("warping requires a parameter t".into()));
        }
        if !self.frame.contains(i) {
            return Err(Error::Degree(format!("no generator {i} in frame {}", self.frame)));
        }
        if c.is_zero() {
            return Err(Error::Degenerate(format!("zero scale on generator {i}")));
        }
        if c.is_one() && k == 0 {
            self.scales.remove(&i);
        } else {
            self.scales.insert(i, (c, k));
        }
        Ok(self)
    }

    /// Scale `s_i` with `E^i = s_i e^i`.
    pub fn scale_of(&self, i: u8) -> RingElement {
        match self.scales.get(&i) {
            Some((c, k)) => RingElement::monomial(c.clone(), *k),
            None => RingElement::one(),
        }
    }

    fn blade_scale(&self, b: Blade) -> RingElement {
        let mut c = Rational::one();
        let mut k = 0;
        for i in b.indices() {
            if let Some((ci, ki)) = self.scales.get(&i) {
                c *= ci;
                k += ki;
            }
        }
        RingElement::monomial(c, k)
    }

    /// Rewrites an orthonormal-frame form in the coordinate coframe.
    pub fn to_coordinate(&self, a: &Form) -> Form {
        if self.scales.is_empty() {
            return a.clone();
        }
        a.map_coefficients(|b, c| c * &self.blade_scale(b))
    }

    /// Rewrites a coordinate-frame form in the orthonormal coframe.
    pub fn from_coordinate(&self, a: &Form) -> Form {
        if self.scales.is_empty() {
            return a.clone();
        }
        a.map_coefficients(|b, c| c.checked_div(&self.blade_scale(b)).expect("monomial scale"))
    }

    /// Differential of a coordinate blade from the structure constants.
    fn coordinate_blade_d(&self, b: Blade) -> Form {
        let mut out = Form::zero(self.frame, b.grade() + 1);
        let idx = b.indices();
        // d(e^{i1} ^ ... ^ e^{ik}) = sum_j (-1)^j e^{i1}..d e^{ij}..e^{ik}
        for (j, &i) in idx.iter().enumerate() {
            let Some(de) = self.structure.get(&i) else {
                continue;
            };
            let before = Blade::from_indices(&idx[..j]).unwrap();
            let after = Blade::from_indices(&idx[j + 1..]).unwrap();
            let term = Form::blade(self.frame, before)
                .wedge(de)
                .and_then(|f| f.wedge(&Form::blade(self.frame, after)))
                .unwrap();
            let term = if j % 2 == 1 { -term } else { term };
            out = out + term;
        }
        out
    }

    fn coordinate_d(&self, a: &Form, with_time: bool) -> Form {
        let mut out = Form::zero(self.frame, a.degree() + 1);
        for (b, c) in a.terms() {
            let db = self.coordinate_blade_d(*b);
            if !db.is_zero() {
                out = out + db.scale(c);
            }
            if with_time {
                if let Some(p) = self.time {
                    let dc = c.derivative();
                    if !dc.is_zero() {
                        let dt = Form::generator(self.frame, p);
                        out = out + dt.wedge(&Form::blade(self.frame, *b)).unwrap().scale(&dc);
                    }
                }
            }
        }
        out
    }

    fn check_bound(&self, a: &Form) -> Result<()> {
        if a.frame() != self.frame {
            return Err(Error::FrameMismatch {
                left: a.frame().to_string(),
                right: self.frame.to_string(),
            });
        }
        Ok(())
    }

    /// Full exterior derivative, including `dt ∧ ∂/∂t` terms.
    pub fn differential(&self, a: &Form) -> Form {
        self.try_differential(a).expect("form bound to model")
    }

    pub fn try_differential(&self, a: &Form) -> Result<Form> {
        self.check_bound(a)?;
        Ok(self.from_coordinate(&self.coordinate_d(&self.to_coordinate(a), true)))
    }

    /// Exterior derivative along the 6-manifold. When the time generator is
    /// an interval slot, `t` is a parameter and is not differentiated; when
    /// it is a generator of the 6-frame, this is the full derivative.
    pub fn spatial_differential(&self, a: &Form) -> Form {
        let with_time = self.time.is_some_and(|p| p != 0);
        self.check_bound(a).expect("form bound to model");
        self.from_coordinate(&self.coordinate_d(&self.to_coordinate(a), with_time))
    }

    /// Coordinate-frame derivative; the input and output are written in the
    /// coordinate coframe `e^i`.
    pub fn coordinate_differential(&self, a: &Form) -> Form {
        self.coordinate_d(a, true)
    }

    /// Coordinate-frame `d̂`: drops the `dt ∧ ∂/∂t` term.
    pub fn coordinate_spatial_differential(&self, a: &Form) -> Form {
        self.coordinate_d(a, self.time.is_some_and(|p| p != 0))
    }

    /// Lists every generator with `d(d e^i) != 0`.
    pub fn jacobi_check(&self) -> JacobiReport {
        let failures = self
            .structure
            .iter()
            .filter_map(|(i, de)| {
                let dd = self.coordinate_d(de, false);
                (!dd.is_zero()).then_some((*i, dd))
            })
            .collect();
        JacobiReport { failures }
    }

    /// Model with the frame enlarged (generators added with zero
    /// differential).
    pub(crate) fn enlarge(&self, frame: Frame) -> Result<Self> {
        let mut structure = BTreeMap::new();
        for (i, f) in &self.structure {
            structure.insert(*i, f.embed(frame)?);
        }
        Ok(FrameModel {
            frame,
            structure,
            scales: self.scales.clone(),
            time: self.time,
        })
    }

    pub(crate) fn set_differential_unchecked(&mut self, i: u8, f: Form) -> Result<()> {
        self.set_structure(i, f)
    }

    /// Renders the model lines of the structure-file grammar.
    pub fn to_structure_text(&self) -> String {
        let mut s = String::new();
        let spatial = self.frame.generators().filter(|i| *i != 0).count();
        writeln!(s, "dim {spatial}").unwrap();
        match self.time {
            Some(0) => writeln!(s, "param t").unwrap(),
            Some(p) => writeln!(s, "param t = e{p}").unwrap(),
            None => {}
        }
        for (i, (c, k)) in &self.scales {
            let name = if *i == 0 { "dt".to_string() } else { format!("e{i}") };
            writeln!(s, "warp {name} = {}", RingElement::monomial(c.clone(), *k)).unwrap();
        }
        for (i, f) in &self.structure {
            writeln!(s, "d e{i} = {f}").unwrap();
        }
        s
    }
}

/// Parsed contents of a structure file.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureFile {
    pub model: FrameModel,
    pub omega: Option<Form>,
    pub psi_plus: Option<Form>,
    pub psi_minus: Option<Form>,
    pub alpha: Option<u8>,
    pub rho: Option<Form>,
}

/// Parses the line-oriented structure grammar:
///
/// ```text
/// dim 6
/// # comment
/// d e5 = -e14 - e23
/// param t            # or: param t = e1
/// warp e5 = t^-1
/// omega = e12 + e34 + e56
/// psi+ = ...
/// psi- = ...
/// alpha = e7
/// rho = ...
/// ```
pub fn parse_model(text: &str) -> Result<StructureFile> {
    let mut dim: Option<usize> = None;
    let mut time: Option<u8> = None;
    let mut diff_lines: Vec<(usize, usize, u8, String)> = Vec::new();
    let mut warp_lines: Vec<(usize, usize, u8, String)> = Vec::new();
    let mut form_lines: Vec<(usize, usize, String, String)> = Vec::new();
    let mut alpha: Option<u8> = None;

    let perr = |line: usize, column: usize, message: String| Error::Parse { line, column, message };

    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let body = content.trim();
        // each line may hold several ';'-separated statements
        let mut offset = indent;
        for stmt in body.split(';') {
            let lead = stmt.len() - stmt.trim_start().len();
            let col = offset + lead + 1;
            offset += stmt.len() + 1;
            let stmt = stmt.trim();
            if stmt.is_empty() {
                continue;
            }
            if let Some(rest) = stmt.strip_prefix("dim") {
                let n: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| perr(line_no, col, format!("bad dimension '{}'", rest.trim())))?;
                if n != 6 && n != 7 {
                    return Err(perr(line_no, col, format!("dimension must be 6 or 7, got {n}")));
                }
                dim = Some(n);
                continue;
            }
            if let Some(rest) = stmt.strip_prefix("param") {
                let rest = rest.trim();
                if rest == "t" {
                    time = Some(0);
                } else if let Some(g) = rest.strip_prefix('t').map(str::trim).and_then(|r| r.strip_prefix('=')) {
                    let g = g.trim();
                    let idx = g
                        .strip_prefix('e')
                        .and_then(|d| d.parse::<u8>().ok())
                        .filter(|i| (1..=7).contains(i))
                        .ok_or_else(|| perr(line_no, col, format!("bad generator '{g}'")))?;
                    time = Some(idx);
                } else {
                    return Err(perr(line_no, col, format!("bad param declaration '{rest}'")));
                }
                continue;
            }
            let Some((lhs, rhs)) = stmt.split_once('=') else {
                return Err(perr(line_no, col, format!("expected '=' in '{stmt}'")));
            };
            let rhs_col = col + lhs.len() + 1 + (rhs.len() - rhs.trim_start().len());
            let lhs = lhs.trim();
            let rhs = rhs.trim().to_string();
            if let Some(g) = lhs.strip_prefix("d ").or_else(|| lhs.strip_prefix("d\t")) {
                let g = g.trim();
                let idx = g
                    .strip_prefix('e')
                    .and_then(|d| d.parse::<u8>().ok())
                    .filter(|i| (1..=7).contains(i))
                    .ok_or_else(|| perr(line_no, col, format!("bad generator '{g}'")))?;
                diff_lines.push((line_no, rhs_col, idx, rhs));
            } else if let Some(g) = lhs.strip_prefix("warp") {
                let g = g.trim();
                let idx = if g == "dt" {
                    0
                } else {
                    g.strip_prefix('e')
                        .and_then(|d| d.parse::<u8>().ok())
                        .filter(|i| (1..=7).contains(i))
                        .ok_or_else(|| perr(line_no, col, format!("bad generator '{g}'")))?
                };
                warp_lines.push((line_no, rhs_col, idx, rhs));
            } else {
                match lhs {
                    "omega" | "psi+" | "psi-" | "rho" => {
                        form_lines.push((line_no, rhs_col, lhs.to_string(), rhs));
                    }
                    "alpha" => {
                        let idx = rhs
                            .strip_prefix('e')
                            .and_then(|d| d.parse::<u8>().ok())
                            .filter(|i| *i == 7)
                            .ok_or_else(|| perr(line_no, rhs_col, format!("alpha must be e7, got '{rhs}'")))?;
                        alpha = Some(idx);
                    }
                    other => return Err(perr(line_no, col, format!("unknown statement '{other}'"))),
                }
            }
        }
    }

    let dim = dim.unwrap_or(6);
    let frame = match (dim, time) {
        (6, Some(0)) => Frame::INTERVAL7,
        (6, _) => Frame::SPATIAL6,
        (7, Some(0)) => {
            return Err(perr(1, 1, "an interval parameter needs dim 6".into()));
        }
        _ => Frame::CIRCLE7,
    };

    let mut model = FrameModel::flat(frame);
    for (line, col, idx, rhs) in &diff_lines {
        if !frame.contains(*idx) {
            return Err(perr(*line, *col, format!("generator e{idx} exceeds dim {dim}")));
        }
        let f = parse_form(frame, rhs, Some(2), *line, *col)?;
        model
            .set_structure(*idx, f)
            .map_err(|e| perr(*line, *col, e.to_string()))?;
    }
    model.validate()?;
    if let Some(p) = time {
        model = model.with_time(p)?;
    }
    for (line, col, idx, rhs) in &warp_lines {
        let s = parse_form(Frame::from_mask(0), rhs, Some(0), *line, *col)?;
        let (c, k) = s.coefficient(Blade::SCALAR).as_monomial().ok_or_else(|| {
            perr(
                *line,
                *col,
                format!("warp factor must be a monomial c*t^k, got '{rhs}'"),
            )
        })?;
        model = model
            .with_scale(*idx, c, k)
            .map_err(|e| perr(*line, *col, e.to_string()))?;
    }

    let mut out = StructureFile {
        model,
        omega: None,
        psi_plus: None,
        psi_minus: None,
        alpha,
        rho: None,
    };
    for (line, col, name, rhs) in form_lines {
        let degree = match name.as_str() {
            "omega" | "rho" => 2,
            _ => 3,
        };
        let f = parse_form(frame, &rhs, Some(degree), line, col)?;
        match name.as_str() {
            "omega" => out.omega = Some(f),
            "psi+" => out.psi_plus = Some(f),
            "psi-" => out.psi_minus = Some(f),
            _ => out.rho = Some(f),
        }
    }
    Ok(out)
}

impl StructureFile {
    pub fn to_text(&self) -> String {
        let mut s = self.model.to_structure_text();
        if let Some(w) = &self.omega {
            writeln!(s, "omega = {w}").unwrap();
        }
        if let Some(p) = &self.psi_plus {
            writeln!(s, "psi+ = {p}").unwrap();
        }
        if let Some(p) = &self.psi_minus {
            writeln!(s, "psi- = {p}").unwrap();
        }
        if let Some(a) = self.alpha {
            writeln!(s, "alpha = e{a}").unwrap();
        }
        if let Some(r) = &self.rho {
            writeln!(s, "rho = {r}").unwrap();
        }
        s
    }
}

/// Renders a rational for file output.
pub fn rational_text(x: &Rational) -> String {
    fmt_rational(x)
}

/// Rewrites `a` on another frame, sending generator `from` to `to`.
pub fn relabel(a: &Form, frame: Frame, from: u8, to: u8) -> Result<Form> {
    let mut out = Form::zero(frame, a.degree());
    for (b, c) in a.terms() {
        let mut f = Form::scalar(frame, RingElement::one());
        for i in b.indices() {
            let j = if i == from { to } else { i };
            if !frame.contains(j) {
                return Err(Error::Degree(format!("no generator {j} in frame {frame}")));
            }
            f = f.wedge(&Form::generator(frame, j))?;
        }
        out = out + f.scale(c);
    }
    Ok(out)
}

fn check_base(base: &FrameModel, s: &SU3Structure) -> Result<()> {
    if base.frame() != Frame::SPATIAL6 || base.time().is_some() {
        return Err(Error::Unsupported(
            "constructions need an unwarped 6-model without parameter".into(),
        ));
    }
    if s.model() != base {
        return Err(Error::Provenance("structure is not defined on the given base".into()));
    }
    Ok(())
}

/// Riemannian product with an interval, `α = dt`.
pub fn build_product(base: &FrameModel, s: &SU3Structure) -> Result<G2Structure> {
    check_base(base, s)?;
    let m = base.enlarge(Frame::INTERVAL7)?.with_time(0)?;
    let g = G2Structure::new(m, 0, s.omega(), s.psi_plus(), s.psi_minus())?;
    Ok(g.with_extension(
        G2Extension {
            base: base.clone(),
            alpha: 0,
            rho: Form::zero(Frame::SPATIAL6, 2),
        },
        s.fingerprint(),
    ))
}

/// Circle bundle with `d e7 = ρ`. The result is checked against
/// `dφ = dω∧α + dψ₊ + ω∧ρ` and `d*φ = dψ₋∧α + ω∧dω - ψ₋∧ρ`.
pub fn build_circle_extension(base: &FrameModel, s: &SU3Structure, rho: &Form) -> Result<G2Structure> {
    check_base(base, s)?;
    if rho.frame() != Frame::SPATIAL6 || rho.degree() != 2 || !rho.is_constant() {
        return Err(Error::Degree("rho must be a constant 2-form on e1..e6".into()));
    }
    let drho = base.differential(rho);
    if !drho.is_zero() {
        return Err(Error::CurvatureNotClosed(drho.to_string()));
    }
    let g = crate::g2::extension_unchecked(s, rho)?;
    let f7 = Frame::CIRCLE7;
    let e = |f: &Form| f.embed(f7).expect("6-frame embeds");
    let alpha = Form::generator(f7, 7);
    let m = g.model();
    let (w, pp, pm, r) = (e(s.omega()), e(s.psi_plus()), e(s.psi_minus()), e(rho));
    let dphi = m.differential(&w).wedge(&alpha)? + m.differential(&pp) + w.wedge(&r)?;
    let dstar = m.differential(&pm).wedge(&alpha)? + w.wedge(&m.differential(&w))? - pm.wedge(&r)?;
    if m.differential(g.phi()) != dphi || m.differential(g.star_phi()) != dstar {
        return Err(Error::InvalidStructure(
            "circle extension fails the fibration identities".into(),
        ));
    }
    Ok(g)
}

/// Cone `t²ĝ + dt²`: `ω = t²ω̂`, `ψ± = t³ψ̂±`. In the warped orthonormal
/// coframe `E^i = t e^i` the forms keep their constant coefficients.
pub fn build_cone(base: &FrameModel, s: &SU3Structure) -> Result<G2Structure> {
    check_base(base, s)?;
    let mut m = base.enlarge(Frame::INTERVAL7)?.with_time(0)?;
    for i in 1..=6 {
        m = m.with_scale(i, Rational::one(), 1)?;
    }
    let g = G2Structure::new(m, 0, s.omega(), s.psi_plus(), s.psi_minus())?;
    Ok(g.with_extension(
        G2Extension {
            base: base.clone(),
            alpha: 0,
            rho: Form::zero(Frame::SPATIAL6, 2),
        },
        s.fingerprint(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exalg::standard;
    use crate::su3::SU3Structure;

    fn iwasawa() -> FrameModel {
        FrameModel::from_exprs(Frame::SPATIAL6, &[(5, "-e14 - e23"), (6, "-e13 - e42")]).unwrap()
    }

    #[test]
    fn iwasawa_differentials() {
        let m = iwasawa();
        let e5 = Form::generator(Frame::SPATIAL6, 5);
        assert_eq!(m.differential(&e5), Form::parse(Frame::SPATIAL6, "-e14 - e23").unwrap());
        assert!(m.jacobi_check().is_valid());
    }

    #[test]
    fn jacobi_failure_names_the_generator() {
        let r = FrameModel::from_exprs(Frame::SPATIAL6, &[(5, "-e14 - e23"), (6, "e15")]);
        match r {
            Err(Error::Jacobi { failures }) => {
                assert_eq!(failures.len(), 1);
                assert_eq!(failures[0].0, 6);
                // d(e15) = -e1 ^ d e5 = e123
                assert_eq!(failures[0].1, "e123");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn section3_example2_dpsi_minus() {
        let m = FrameModel::from_exprs(Frame::SPATIAL6, &[(3, "e25"), (6, "-e24")]).unwrap();
        let pm = standard::psi_minus(Frame::SPATIAL6);
        assert_eq!(
            m.differential(&pm),
            Form::parse(Frame::SPATIAL6, "e1234 - e1256").unwrap()
        );
        assert!(m.differential(&standard::psi_plus(Frame::SPATIAL6)).is_zero());
        assert!(m.differential(&standard::omega(Frame::SPATIAL6)).is_zero());
    }

    #[test]
    fn time_derivative_enters_full_differential_only() {
        let m = FrameModel::flat(Frame::INTERVAL7);
        let f = Form::parse(Frame::INTERVAL7, "t^2*e12").unwrap();
        assert_eq!(m.differential(&f), Form::parse(Frame::INTERVAL7, "2*t*dt^e12").unwrap());
        assert!(m.spatial_differential(&f).is_zero());
    }

    #[test]
    fn warped_frame_conversion_round_trips() {
        let m = FrameModel::flat(Frame::INTERVAL7)
            .with_scale(1, Rational::one(), 1)
            .unwrap()
            .with_scale(0, crate::ring::qi(2), 4)
            .unwrap();
        let f = Form::parse(Frame::INTERVAL7, "e12 + dt^e1").unwrap();
        let c = m.to_coordinate(&f);
        assert_eq!(c, Form::parse(Frame::INTERVAL7, "t*e12 + 2*t^5*dt^e1").unwrap());
        assert_eq!(m.from_coordinate(&c), f);
    }

    #[test]
    fn parse_iwasawa_file() {
        let text = "dim 6\n# Iwasawa variant\nd e5 = -e14 - e23 ; d e6 = -e13 - e42\n";
        let sf = parse_model(text).unwrap();
        assert_eq!(sf.model, iwasawa());
    }

    #[test]
    fn parse_reports_line_and_column() {
        let text = "dim 6\nd e5 = -e14 - e2x\n";
        match parse_model(text) {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 2);
                assert!(column > 8, "column {column}");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_model("dim 5\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_model("dim 6\nfoo = e1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn parse_jacobi_failure() {
        let text = "d e5 = -e14 - e23\nd e6 = e15\n";
        assert!(matches!(parse_model(text), Err(Error::Jacobi { .. })));
    }

    #[test]
    fn all_zero_file_is_the_torus() {
        let sf = parse_model("dim 6\n").unwrap();
        assert_eq!(sf.model, FrameModel::flat(Frame::SPATIAL6));
    }

    #[test]
    fn warped_file_round_trip() {
        let text = "dim 6\nparam t\nwarp dt = 2*t^4\nwarp e5 = t^-2\nd e5 = -e14 - e23\nomega = e12 + e34 + e56\n";
        let sf = parse_model(text).unwrap();
        assert!(sf.model.is_warped());
        let again = parse_model(&sf.to_text()).unwrap();
        assert_eq!(again, sf);
    }

    fn sec3ex2() -> FrameModel {
        FrameModel::from_exprs(Frame::SPATIAL6, &[(3, "e25"), (6, "-e24")]).unwrap()
    }

    fn swapped(s: &SU3Structure) -> SU3Structure {
        // (ψ₊, ψ₋) ↦ (ψ₋, -ψ₊) keeps the orientation ψ₊∧ψ₋ > 0
        SU3Structure::new(
            s.model().clone(),
            s.omega().clone(),
            s.psi_minus().clone(),
            -s.psi_plus().clone(),
        )
        .unwrap()
    }

    /// Pointwise data with `d̂ω = 3ψ₊`, `d̂ψ₋ = -2ω²`: `d e^i = -(e_i ⌟ ψ₋)`.
    fn nearly_kahler_pointwise() -> FrameModel {
        let f = Frame::SPATIAL6;
        let pm = standard::psi_minus(f);
        FrameModel::new_unchecked(f, (1..=6).map(|i| (i, -Form::generator(f, i).contract(&pm).unwrap()))).unwrap()
    }

    #[test]
    fn product_of_flat_torus_is_torsion_free() {
        let base = FrameModel::flat(Frame::SPATIAL6);
        let s = SU3Structure::standard(base.clone()).unwrap();
        let g = build_product(&base, &s).unwrap();
        let m = g.model();
        assert!(m.differential(g.phi()).is_zero());
        assert!(m.differential(g.star_phi()).is_zero());
    }

    #[test]
    fn sec3ex2_products() {
        let base = sec3ex2();
        let s = SU3Structure::standard(base.clone()).unwrap();
        let g = build_product(&base, &s).unwrap();
        assert!(g.model().differential(g.phi()).is_zero());
        assert!(!g.model().differential(g.star_phi()).is_zero());

        let sw = swapped(&s);
        let h = build_product(&base, &sw).unwrap();
        assert!(h.model().differential(h.star_phi()).is_zero());
        let dphi = h.model().differential(h.phi());
        assert!(!dphi.is_zero());
        let parts = h.irrep_project(&dphi).unwrap();
        assert_eq!(parts[&27], dphi);
        assert!(parts[&1].is_zero() && parts[&7].is_zero());
    }

    #[test]
    fn zero_curvature_extension_is_the_product() {
        let base = sec3ex2();
        let s = SU3Structure::standard(base.clone()).unwrap();
        let p = build_product(&base, &s).unwrap();
        let c = build_circle_extension(&base, &s, &Form::zero(Frame::SPATIAL6, 2)).unwrap();
        let f7 = Frame::CIRCLE7;
        assert_eq!(relabel(p.phi(), f7, 0, 7).unwrap(), *c.phi());
        assert_eq!(relabel(p.star_phi(), f7, 0, 7).unwrap(), *c.star_phi());
        let dp = p.model().differential(p.phi());
        assert_eq!(relabel(&dp, f7, 0, 7).unwrap(), c.model().differential(c.phi()));
    }

    #[test]
    fn torus_circle_bundles() {
        let f = Frame::SPATIAL6;
        let base = FrameModel::flat(f);
        let s = SU3Structure::standard(base.clone()).unwrap();
        let rho = Form::parse(f, "e12 + e34 + e56").unwrap();
        let g = build_circle_extension(&base, &s, &rho).unwrap();
        let dphi = g.model().differential(g.phi());
        let expect = s.omega().wedge(&rho).unwrap().embed(Frame::CIRCLE7).unwrap();
        assert_eq!(dphi, expect);
        assert!(!dphi.is_zero());

        let rho2 = Form::parse(f, "e12 - e34").unwrap();
        let g = build_circle_extension(&base, &s, &rho2).unwrap();
        assert!(g.model().differential(g.star_phi()).is_zero());
        assert!(!g.model().differential(g.phi()).is_zero());
    }

    #[test]
    fn non_closed_curvature_is_rejected() {
        let base = iwasawa();
        let s = SU3Structure::standard(base.clone()).unwrap();
        let rho = Form::parse(Frame::SPATIAL6, "e56").unwrap();
        assert!(matches!(
            build_circle_extension(&base, &s, &rho),
            Err(Error::CurvatureNotClosed(_))
        ));
        let closed = Form::parse(Frame::SPATIAL6, "e12 + e34").unwrap();
        assert!(build_circle_extension(&base, &s, &closed).is_ok());
    }

    #[test]
    fn cone_over_flat_torus_is_not_closed() {
        let base = FrameModel::flat(Frame::SPATIAL6);
        let s = SU3Structure::standard(base.clone()).unwrap();
        let g = build_cone(&base, &s).unwrap();
        let m = g.model();
        let dphi = m.coordinate_differential(&m.to_coordinate(g.phi()));
        let pp = standard::psi_plus(Frame::INTERVAL7);
        let expect = Form::generator(Frame::INTERVAL7, 0)
            .wedge(&pp)
            .unwrap()
            .scale(&RingElement::monomial(crate::ring::qi(3), 2));
        assert_eq!(dphi, expect);
        let dstar = m.coordinate_differential(&m.to_coordinate(g.star_phi()));
        let w2 = standard::omega(Frame::INTERVAL7).wedge_pow(2);
        let expect = Form::generator(Frame::INTERVAL7, 0)
            .wedge(&w2)
            .unwrap()
            .scale(&RingElement::monomial(crate::ring::qi(2), 3));
        assert_eq!(dstar, expect);
    }

    #[test]
    fn cone_over_nearly_kahler_data_is_closed() {
        let base = nearly_kahler_pointwise();
        let s = SU3Structure::standard(base.clone()).unwrap();
        assert_eq!(s.d_hat(s.omega()), s.psi_plus().scale_int(3));
        assert_eq!(s.d_hat(s.psi_minus()), s.omega().wedge_pow(2).scale_int(-2));
        let g = build_cone(&base, &s).unwrap();
        let m = g.model();
        assert!(m.differential(g.phi()).is_zero());
        assert!(m.differential(g.star_phi()).is_zero());

        // t^2 in place of t^3 on ψ₊
        let c = m.to_coordinate(g.phi());
        let pp = m.to_coordinate(&s.psi_plus().embed(Frame::INTERVAL7).unwrap());
        let broken = c.clone() - pp.clone() + pp.scale(&RingElement::t_pow(-1));
        assert!(!m.coordinate_differential(&broken).is_zero());
        assert!(m.coordinate_differential(&c).is_zero());
    }

    #[test]
    fn relabel_keeps_orientation_signs() {
        let f = Frame::CIRCLE7;
        let a = Form::parse(Frame::INTERVAL7, "dt^e12").unwrap();
        assert_eq!(relabel(&a, f, 0, 7).unwrap(), Form::parse(f, "e127").unwrap());
    }
}
