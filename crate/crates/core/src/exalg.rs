//! Graded exterior algebra over an orthonormal coframe.
//!
//! Generators are addressed by index: `0` is the distinguished `dt` slot and
//! `1..=7` are `e1..e7`. A [`Frame`] is the set of generators a form may use;
//! the orientation is always the wedge of all generators in increasing index
//! order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::ring::{parse_rational, Rational, RingElement};

/// Set of coframe generators, as a bitmask over indices `0..=7`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Frame(u8);

impl Frame {
    pub const SPATIAL6: Frame = Frame(0b0111_1110);
    /// `dt, e1..e6`.
    pub const INTERVAL7: Frame = Frame(0b0111_1111);
    /// `e1..e7`.
    pub const CIRCLE7: Frame = Frame(0b1111_1110);

    pub fn from_mask(mask: u8) -> Self {
        Frame(mask)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn dim(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, index: u8) -> bool {
        index < 8 && self.0 & (1 << index) != 0
    }

    pub fn has_dt(self) -> bool {
        self.contains(0)
    }

    pub fn generators(self) -> impl Iterator<Item = u8> {
        (0..8u8).filter(move |i| self.contains(*i))
    }

    pub fn volume(self) -> Blade {
        Blade(self.0)
    }

    /// All blades of the given grade inside this frame, in canonical order.
    pub fn blades(self, grade: usize) -> Vec<Blade> {
        let mut out: Vec<Blade> = (0..=255u16)
            .map(|m| m as u8)
            .filter(|m| m & !self.0 == 0 && m.count_ones() as usize == grade)
            .map(Blade)
            .collect();
        out.sort();
        out
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.generators().map(generator_name).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

fn generator_name(i: u8) -> String {
    if i == 0 {
        "dt".to_string()
    } else {
        format!("e{i}")
    }
}

/// Wedge of distinct coframe generators in increasing index order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Blade(u8);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub fn from_mask(mask: u8) -> Self {
        Blade(mask)
    }

    /// Indices must be strictly increasing.
    pub fn from_indices(indices: &[u8]) -> Result<Self> {
        let mut mask = 0u8;
        let mut last: Option<u8> = None;
        for &i in indices {
            if i > 7 {
                return Err(Error::Degree(format!("generator index {i} out of range")));
            }
            if last.is_some_and(|l| i <= l) {
                return Err(Error::Degree(format!(
                    "blade indices must be strictly increasing: {indices:?}"
                )));
            }
            mask |= 1 << i;
            last = Some(i);
        }
        Ok(Blade(mask))
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> Vec<u8> {
        (0..8u8).filter(|i| self.0 & (1 << i) != 0).collect()
    }

    pub fn contains(self, index: u8) -> bool {
        self.0 & (1 << index) != 0
    }

    /// Sign of `e^self ^ e^other` relative to the canonical ordering of the
    /// union, or `None` when the blades share a generator.
    pub fn wedge_sign(self, other: Blade) -> Option<i8> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut swaps = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            swaps += (self.0 >> j).count_ones();
            rest &= rest - 1;
        }
        Some(if swaps % 2 == 0 { 1 } else { -1 })
    }

    pub fn union(self, other: Blade) -> Blade {
        Blade(self.0 | other.0)
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        // lexicographic on the index tuples
        let (mut x, mut y) = (self.0, other.0);
        loop {
            match (x, y) {
                (0, 0) => return Ordering::Equal,
                (0, _) => return Ordering::Less,
                (_, 0) => return Ordering::Greater,
                _ => {}
            }
            let (a, b) = (x.trailing_zeros(), y.trailing_zeros());
            if a != b {
                return a.cmp(&b);
            }
            x &= x - 1;
            y &= y - 1;
        }
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let digits: String = self
            .indices()
            .into_iter()
            .filter(|i| *i != 0)
            .map(|i| char::from(b'0' + i))
            .collect();
        match (self.contains(0), digits.is_empty()) {
            (true, true) => write!(f, "dt"),
            (true, false) => write!(f, "dt^e{digits}"),
            (false, _) => write!(f, "e{digits}"),
        }
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Homogeneous exterior form with exact coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Form {
    frame: Frame,
    degree: usize,
    terms: BTreeMap<Blade, RingElement>,
}

impl Form {
    pub fn zero(frame: Frame, degree: usize) -> Self {
        Form {
            frame,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(frame: Frame, c: RingElement) -> Self {
        Self::term(frame, Blade::SCALAR, c)
    }

    pub fn blade(frame: Frame, blade: Blade) -> Self {
        Self::term(frame, blade, RingElement::one())
    }

    pub fn term(frame: Frame, blade: Blade, c: RingElement) -> Self {
        assert!(blade.mask() & !frame.mask() == 0, "blade {blade} outside frame {frame}");
        let mut f = Self::zero(frame, blade.grade());
        f.add_term(blade, c);
        f
    }

    /// Basis covector `e^i` (or `dt` for index 0).
    pub fn generator(frame: Frame, index: u8) -> Self {
        Self::blade(frame, Blade(1 << index))
    }

    /// The unit top-degree form of the frame.
    pub fn volume(frame: Frame) -> Self {
        Self::blade(frame, frame.volume())
    }

    pub fn from_terms<I>(frame: Frame, degree: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Blade, RingElement)>,
    {
        let mut f = Self::zero(frame, degree);
        for (b, c) in terms {
            f.add_term(b, c);
        }
        f
    }

    /// Parses an expression like `e12 + 2*t^-1*e34 - dt^e5`.
    pub fn parse(frame: Frame, text: &str) -> Result<Self> {
        parse_form(frame, text, None, 1, 1)
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &RingElement)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, blade: Blade) -> RingElement {
        self.terms.get(&blade).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, blade: Blade, c: RingElement) {
        assert_eq!(blade.grade(), self.degree, "blade {blade} has wrong grade");
        assert!(
            blade.mask() & !self.frame.mask() == 0,
            "blade {blade} outside frame {}",
            self.frame
        );
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&blade) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&blade);
                }
            }
            None => {
                self.terms.insert(blade, c);
            }
        }
    }

    pub fn map_coefficients<F: FnMut(Blade, &RingElement) -> RingElement>(&self, mut f: F) -> Self {
        Self::from_terms(self.frame, self.degree, self.terms.iter().map(|(b, c)| (*b, f(*b, c))))
    }

    pub fn scale(&self, c: &RingElement) -> Self {
        self.map_coefficients(|_, x| x * c)
    }

    pub fn scale_q(&self, c: &Rational) -> Self {
        self.map_coefficients(|_, x| x.scale(c))
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale_q(&crate::ring::qi(n))
    }

    /// True when every coefficient is independent of `t`.
    pub fn is_constant(&self) -> bool {
        self.terms.values().all(RingElement::is_constant)
    }

    /// Evaluates every coefficient at `t`.
    pub fn eval(&self, t: &Rational) -> Result<Self> {
        let mut out = Self::zero(self.frame, self.degree);
        for (b, c) in &self.terms {
            out.add_term(*b, RingElement::constant(c.eval(t)?));
        }
        Ok(out)
    }

    /// Same coefficients viewed in a larger frame.
    pub fn embed(&self, frame: Frame) -> Result<Self> {
        if self.frame.mask() & !frame.mask() != 0 {
            return Err(Error::FrameMismatch {
                left: self.frame.to_string(),
                right: frame.to_string(),
            });
        }
        Ok(Form {
            frame,
            degree: self.degree,
            terms: self.terms.clone(),
        })
    }

    /// Restricts the frame, failing if a term uses a dropped generator.
    pub fn restrict(&self, frame: Frame) -> Result<Self> {
        if self.terms.keys().any(|b| b.mask() & !frame.mask() != 0) {
            return Err(Error::FrameMismatch {
                left: self.frame.to_string(),
                right: frame.to_string(),
            });
        }
        Ok(Form {
            frame,
            degree: self.degree,
            terms: self.terms.clone(),
        })
    }

    fn check_frame(&self, other: &Form) -> Result<()> {
        if self.frame != other.frame {
            return Err(Error::FrameMismatch {
                left: self.frame.to_string(),
                right: other.frame.to_string(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Form) -> Result<Form> {
        self.check_frame(other)?;
        if self.degree != other.degree {
            return Err(Error::Degree(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Form) -> Result<Form> {
        self.check_frame(other)?;
        let mut out = Form::zero(self.frame, self.degree + other.degree);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some(s) = a.wedge_sign(*b) {
                    let c = x * y;
                    out.add_term(a.union(*b), if s < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `self` to the power `k` under wedge; `k = 0` gives the constant 1.
    pub fn wedge_pow(&self, k: usize) -> Form {
        let mut out = Form::scalar(self.frame, RingElement::one());
        for _ in 0..k {
            out = out.wedge(self).expect("same frame");
        }
        out
    }

    /// Interior contraction `self ⌟ other`, the metric adjoint of
    /// `c ↦ self ∧ c`.
    pub fn contract(&self, other: &Form) -> Result<Form> {
        self.check_frame(other)?;
        if self.degree > other.degree {
            return Err(Error::Degree(format!(
                "cannot contract a {}-form into a {}-form",
                self.degree, other.degree
            )));
        }
        let mut out = Form::zero(self.frame, other.degree - self.degree);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if a.mask() & !b.mask() != 0 {
                    continue;
                }
                let rest = Blade(b.mask() & !a.mask());
                let s = a.wedge_sign(rest).expect("disjoint");
                let c = x * y;
                out.add_term(rest, if s < 0 { -c } else { c });
            }
        }
        Ok(out)
    }

    /// Hodge star for the frame's standard orientation.
    pub fn hodge(&self) -> Form {
        let vol = self.frame.volume();
        let mut out = Form::zero(self.frame, self.frame.dim() - self.degree);
        for (b, c) in &self.terms {
            let rest = Blade(vol.mask() & !b.mask());
            let s = b.wedge_sign(rest).expect("disjoint");
            out.add_term(rest, if s < 0 { -c } else { c.clone() });
        }
        out
    }

    /// Hodge star for an explicitly supplied orientation blade, which must
    /// be the full blade of the frame.
    pub fn hodge_oriented(&self, orientation: Blade) -> Result<Form> {
        if orientation != self.frame.volume() {
            return Err(Error::Degree(format!(
                "orientation {orientation} is not the volume blade of {}",
                self.frame
            )));
        }
        Ok(self.hodge())
    }

    /// Blade inner product; blades are orthonormal.
    pub fn inner(&self, other: &Form) -> RingElement {
        let mut acc = RingElement::zero();
        if self.degree != other.degree {
            return acc;
        }
        for (b, x) in &self.terms {
            if let Some(y) = other.terms.get(b) {
                acc += &(x * y);
            }
        }
        acc
    }

    /// Coefficient of the top-degree form relative to the volume blade.
    pub fn top_coefficient(&self) -> RingElement {
        self.coefficient(self.frame.volume())
    }

    /// Coefficients on a given list of blades.
    pub fn coordinates(&self, basis: &[Blade]) -> Vec<RingElement> {
        basis.iter().map(|b| self.coefficient(*b)).collect()
    }

    pub fn from_coordinates(frame: Frame, degree: usize, basis: &[Blade], coords: &[RingElement]) -> Self {
        Self::from_terms(frame, degree, basis.iter().copied().zip(coords.iter().cloned()))
    }

    /// Rational coordinates, if every coefficient is constant.
    pub fn rational_coordinates(&self, basis: &[Blade]) -> Option<Vec<Rational>> {
        basis.iter().map(|b| self.coefficient(*b).as_constant()).collect()
    }

    pub fn from_rational_coordinates(frame: Frame, degree: usize, basis: &[Blade], coords: &[Rational]) -> Self {
        Self::from_terms(
            frame,
            degree,
            basis
                .iter()
                .copied()
                .zip(coords.iter().map(|c| RingElement::constant(c.clone()))),
        )
    }
}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        self.try_add(rhs).expect("form addition")
    }
}

impl Add for Form {
    type Output = Form;
    fn add(self, rhs: Form) -> Form {
        &self + &rhs
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self.try_add(&-rhs).expect("form subtraction")
    }
}

impl Sub for Form {
    type Output = Form;
    fn sub(self, rhs: Form) -> Form {
        &self - &rhs
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.map_coefficients(|_, c| -c)
    }
}

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        -&self
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            let text = c.to_string();
            let single = c.terms().count() == 1;
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if single => (true, rest.to_string()),
                _ => (false, text.clone()),
            };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let coef = if single { body } else { format!("({body})") };
            if *b == Blade::SCALAR {
                write!(f, "{coef}")?;
            } else if c.is_one() || (neg && single && coef == "1") {
                write!(f, "{b}")?;
            } else {
                write!(f, "{coef}*{b}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{}]({self})", self.degree)
    }
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
    _src: &'a str,
}

impl Cursor<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.col0 + self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn peek_raw(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }
}

/// Parses a form expression. `line` and `col0` locate the text inside a
/// larger file for error messages.
pub(crate) fn parse_form(
    frame: Frame,
    text: &str,
    expected_degree: Option<usize>,
    line: usize,
    col0: usize,
) -> Result<Form> {
    let mut cur = Cursor {
        chars: text.chars().collect(),
        pos: 0,
        line,
        col0,
        _src: text,
    };
    let mut acc: Vec<(Blade, RingElement)> = Vec::new();
    let mut first = true;
    loop {
        let sign = match cur.peek() {
            None if first => return Err(cur.err("empty expression")),
            None => break,
            Some('+') => {
                cur.pos += 1;
                1
            }
            Some('-') => {
                cur.pos += 1;
                -1
            }
            Some(_) if first => 1,
            Some(c) => return Err(cur.err(format!("expected '+' or '-', found '{c}'"))),
        };
        first = false;
        let (blade, coef) = parse_term(&mut cur, frame)?;
        acc.push((blade, if sign < 0 { -coef } else { coef }));
    }
    let degree = match expected_degree {
        Some(d) => d,
        None => {
            let nonzero: Vec<_> = acc.iter().filter(|(_, c)| !c.is_zero()).collect();
            match nonzero.first() {
                Some((b, _)) => b.grade(),
                None => {
                    if acc.iter().all(|(b, _)| *b == Blade::SCALAR) {
                        0
                    } else {
                        acc[0].0.grade()
                    }
                }
            }
        }
    };
    let mut form = Form::zero(frame, degree);
    for (b, c) in acc {
        if c.is_zero() && b == Blade::SCALAR {
            // a literal 0 is allowed in any degree
            continue;
        }
        if b.grade() != degree {
            return Err(Error::Parse {
                line,
                column: col0,
                message: format!("mixed degrees: {b} is not of degree {degree}"),
            });
        }
        form.add_term(b, c);
    }
    Ok(form)
}

fn parse_term(cur: &mut Cursor<'_>, frame: Frame) -> Result<(Blade, RingElement)> {
    let mut coef = RingElement::one();
    let mut blade: Option<(Blade, i8)> = None;
    loop {
        match cur.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = cur.digits();
                let mut text = num;
                if cur.peek_raw() == Some('/') {
                    cur.pos += 1;
                    let den = cur.digits();
                    if den.is_empty() {
                        return Err(cur.err("expected denominator"));
                    }
                    text = format!("{text}/{den}");
                }
                let r = parse_rational(&text).ok_or_else(|| cur.err(format!("bad rational '{text}'")))?;
                coef = coef.scale(&r);
            }
            Some('t') => {
                cur.pos += 1;
                let mut k = 1i32;
                if cur.peek_raw() == Some('^') {
                    cur.pos += 1;
                    let neg = if cur.peek_raw() == Some('-') {
                        cur.pos += 1;
                        true
                    } else {
                        false
                    };
                    let d = cur.digits();
                    if d.is_empty() {
                        return Err(cur.err("expected exponent after 't^'"));
                    }
                    k = d.parse::<i32>().map_err(|_| cur.err("exponent too large"))?;
                    if neg {
                        k = -k;
                    }
                }
                coef = coef.shift(k);
            }
            Some('(') => {
                cur.pos += 1;
                let inner = parse_ring_expr(cur)?;
                if !cur.eat(')') {
                    return Err(cur.err("expected ')'"));
                }
                coef = &coef * &inner;
            }
            Some('e') | Some('d') => {
                if blade.is_some() {
                    return Err(cur.err("use '^' to wedge generators inside a term"));
                }
                blade = Some(parse_blade(cur, frame)?);
            }
            Some(c) => return Err(cur.err(format!("unexpected '{c}'"))),
            None => return Err(cur.err("unexpected end of expression")),
        }
        if !cur.eat('*') {
            break;
        }
    }
    let (b, s) = blade.unwrap_or((Blade::SCALAR, 1));
    Ok((b, if s < 0 { -coef } else { coef }))
}

/// Parenthesized scalar: signed sum of rational and `t^k` factors.
fn parse_ring_expr(cur: &mut Cursor<'_>) -> Result<RingElement> {
    let mut acc = RingElement::zero();
    let mut first = true;
    loop {
        let sign = match cur.peek() {
            Some('+') => {
                cur.pos += 1;
                1
            }
            Some('-') => {
                cur.pos += 1;
                -1
            }
            Some(')') if !first => break,
            Some(_) if first => 1,
            Some(c) => return Err(cur.err(format!("unexpected '{c}'"))),
            None => return Err(cur.err("unterminated '('")),
        };
        first = false;
        let (b, c) = parse_term(cur, Frame::from_mask(0))?;
        if b != Blade::SCALAR {
            return Err(cur.err("generators are not allowed inside a coefficient"));
        }
        acc += &(if sign < 0 { -c } else { c });
    }
    Ok(acc)
}

fn parse_blade(cur: &mut Cursor<'_>, frame: Frame) -> Result<(Blade, i8)> {
    let mut mask = 0u8;
    let mut sign = 1i8;
    loop {
        let mut atom: Vec<u8> = Vec::new();
        match cur.peek() {
            Some('e') => {
                cur.pos += 1;
                let d = cur.digits();
                if d.is_empty() {
                    return Err(cur.err("expected generator digits after 'e'"));
                }
                for ch in d.chars() {
                    atom.push(ch as u8 - b'0');
                }
            }
            Some('d') => {
                cur.pos += 1;
                if cur.peek_raw() != Some('t') {
                    return Err(cur.err("expected 'dt'"));
                }
                cur.pos += 1;
                atom.push(0);
            }
            _ => return Err(cur.err("expected generator")),
        }
        for i in atom {
            if i == 0 && mask & 1 != 0 || i != 0 && !(1..=7).contains(&i) {
                return Err(cur.err(format!("invalid generator index {i}")));
            }
            if !frame.contains(i) {
                return Err(cur.err(format!("generator {} not in frame {frame}", generator_name(i))));
            }
            let g = Blade(1 << i);
            let b = Blade(mask);
            let s = b
                .wedge_sign(g)
                .ok_or_else(|| cur.err(format!("repeated generator {}", generator_name(i))))?;
            sign *= s;
            mask |= 1 << i;
        }
        if cur.peek_raw() == Some('^') {
            cur.pos += 1;
        } else {
            break;
        }
    }
    Ok((Blade(mask), sign))
}

/// The standard symplectic form and complex volume pieces on `e1..e6`.
pub mod standard {
    use super::*;

    pub fn omega(frame: Frame) -> Form {
        Form::parse(frame, "e12 + e34 + e56").unwrap()
    }

    pub fn psi_plus(frame: Frame) -> Form {
        Form::parse(frame, "e135 - e146 - e236 - e245").unwrap()
    }

    pub fn psi_minus(frame: Frame) -> Form {
        Form::parse(frame, "e136 + e145 + e235 - e246").unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::qi;

    fn f6(s: &str) -> Form {
        Form::parse(Frame::SPATIAL6, s).unwrap()
    }

    fn f7(s: &str) -> Form {
        Form::parse(Frame::CIRCLE7, s).unwrap()
    }

    #[test]
    fn wedge_adjacent() {
        assert_eq!(f6("e1").wedge(&f6("e2")).unwrap(), f6("e12"));
        assert_eq!(f6("e2").wedge(&f6("e1")).unwrap(), f6("-e12"));
        assert!(f6("e1").wedge(&f6("e1")).unwrap().is_zero());
    }

    #[test]
    fn compatibility_of_standard_forms() {
        let w = standard::omega(Frame::SPATIAL6);
        let pp = standard::psi_plus(Frame::SPATIAL6);
        let pm = standard::psi_minus(Frame::SPATIAL6);
        assert!(w.wedge(&pp).unwrap().is_zero());
        assert!(w.wedge(&pm).unwrap().is_zero());
        let lhs = pp.wedge(&pm).unwrap();
        assert_eq!(lhs, f6("4*e123456"));
        assert_eq!(lhs, w.wedge_pow(3).scale_q(&crate::ring::q(2, 3)));
    }

    #[test]
    fn contraction_convention() {
        let a = Form::parse(Frame::CIRCLE7, "e12").unwrap();
        let b = Form::parse(Frame::CIRCLE7, "e12345").unwrap();
        assert_eq!(a.contract(&b).unwrap(), Form::parse(Frame::CIRCLE7, "e345").unwrap());
        assert_eq!(
            f6("e1").contract(&f6("e1")).unwrap(),
            Form::scalar(Frame::SPATIAL6, RingElement::one())
        );
        let half_w = standard::omega(Frame::SPATIAL6).scale_q(&crate::ring::q(1, 2));
        assert_eq!(half_w.contract(&f6("e134 + e156")).unwrap(), f6("e1"));
        assert!(matches!(f6("e12").contract(&f6("e1")), Err(Error::Degree(_))));
    }

    #[test]
    fn hodge_examples() {
        let pp = standard::psi_plus(Frame::CIRCLE7);
        let pm = standard::psi_minus(Frame::CIRCLE7);
        let w = standard::omega(Frame::CIRCLE7);
        let e7 = f7("e7");
        // a ^ *a = |a|^2 vol forces the minus sign here
        assert_eq!(pm.hodge(), -pp.wedge(&e7).unwrap());
        assert_eq!(pp.hodge(), pm.wedge(&e7).unwrap());
        assert_eq!(
            w.wedge(&e7).unwrap().hodge(),
            w.wedge_pow(2).scale_q(&crate::ring::q(1, 2))
        );
        assert_eq!(Form::scalar(Frame::CIRCLE7, RingElement::one()).hodge(), f7("e1234567"));
        assert!(pm.hodge_oriented(Blade::from_indices(&[1, 2, 3]).unwrap()).is_err());
    }

    #[test]
    fn frame_mismatch_is_an_error() {
        let r = f6("e1").wedge(&f7("e2"));
        assert!(matches!(r, Err(Error::FrameMismatch { .. })));
    }

    #[test]
    fn parse_with_dt_and_powers() {
        let f = Form::parse(Frame::INTERVAL7, "2*t^7*e12^dt - t^-1*e5^e6^dt + e34^dt").unwrap();
        assert_eq!(f.degree(), 3);
        let b = Blade::from_indices(&[0, 1, 2]).unwrap();
        assert_eq!(f.coefficient(b), RingElement::monomial(qi(2), 7));
        let b56 = Blade::from_indices(&[0, 5, 6]).unwrap();
        assert_eq!(f.coefficient(b56), -RingElement::t_pow(-1));
        assert_eq!(b.to_string(), "dt^e12");
    }

    #[test]
    fn parse_errors_carry_position() {
        match Form::parse(Frame::SPATIAL6, "e12 + e3x") {
            Err(Error::Parse { column, .. }) => assert!(column >= 8),
            other => panic!("{other:?}"),
        }
        assert!(Form::parse(Frame::SPATIAL6, "e11").is_err());
        assert!(Form::parse(Frame::SPATIAL6, "e17").is_err());
        assert!(Form::parse(Frame::SPATIAL6, "e12 + e3").is_err());
    }

    #[test]
    fn display_round_trip() {
        let f = Form::parse(Frame::INTERVAL7, "e135 - 3/2*t^2*e146 + (t - 1/3*t^-2)*e2^dt^e3").unwrap();
        assert_eq!(
            f.coefficient(Blade::from_indices(&[0, 2, 3]).unwrap()).terms().count(),
            2
        );
        let back = Form::parse(Frame::INTERVAL7, &f.to_string()).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn blade_order_is_lexicographic() {
        let basis = Frame::SPATIAL6.blades(2);
        assert_eq!(basis.len(), 15);
        assert_eq!(basis[0].to_string(), "e12");
        assert_eq!(basis[4].to_string(), "e16");
        assert_eq!(basis[5].to_string(), "e23");
        assert_eq!(Frame::INTERVAL7.blades(1)[0].to_string(), "dt");
    }
}
