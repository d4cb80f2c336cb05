//! Exact verification of maps `(x, y) ↦ (w(x), y·r(x))` from `y² = f(x)` onto
//! `z² = w³ + A w + B`, over ℚ or a number field `ℚ[t]/(g)` with `deg g ≤ 4`.
//!
//! Text format, one `key: expression` per line (`#` comments):
//!
//! ```text
//! minpoly: t^2 - 2
//! f: x^6 + 2*x^5 + 7*x^4 + 8*x^3 + 11*x^2 + 6*x + 5
//! A: 7/12 - t/2
//! B: -1/3 + 29/108*t
//! w_num: (15 - 8*t)*((153 + 4*t) + 4*(14 + t)*x + 97*x^2)
//! w_den: 582*(1 - t + x)^2
//! r_num: -9 + 7*t
//! r_den: 2*(1 - t + x)^3
//! ```
//!
//! Expressions use `+ - * / ^`, parentheses, integers and the symbols `x`, `t`;
//! division is only by nonzero constants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::parse_err;
use crate::intpoly::{is_irreducible, IntPoly};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberField {
    /// Monic irreducible; `t` itself for ℚ.
    pub minpoly: IntPoly,
}

/// Coordinates on `1, t, …, t^{d-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nfe {
    pub coords: Vec<BigRational>,
}

impl Nfe {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.coords[0]
    }
}

pub type FPoly = Vec<Nfe>;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl NumberField {
    pub fn rational() -> Self {
        NumberField { minpoly: IntPoly::x() }
    }

    pub fn new(g: IntPoly) -> Result<Self> {
        if !g.is_monic() {
            return Err(Error::NotMonic);
        }
        if g.deg() == 0 || g.deg() > 4 {
            return Err(Error::DegreeOutOfRange(g.deg()));
        }
        if g.deg() > 1 && !is_irreducible(&g)? {
            return Err(Error::Reducible);
        }
        Ok(NumberField { minpoly: g })
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn from_rational(&self, r: BigRational) -> Nfe {
        let mut coords = vec![BigRational::zero(); self.degree()];
        coords[0] = r;
        Nfe { coords }
    }

    pub fn zero(&self) -> Nfe {
        self.from_rational(BigRational::zero())
    }

    pub fn one(&self) -> Nfe {
        self.from_rational(BigRational::one())
    }

    pub fn gen(&self) -> Result<Nfe> {
        if self.is_rational() {
            return Err(Error::FieldMismatch);
        }
        let mut e = self.zero();
        e.coords[1] = BigRational::one();
        Ok(e)
    }

    pub fn add(&self, a: &Nfe, b: &Nfe) -> Nfe {
        Nfe { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, a: &Nfe, b: &Nfe) -> Nfe {
        Nfe { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect() }
    }

    pub fn neg(&self, a: &Nfe) -> Nfe {
        Nfe { coords: a.coords.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, a: &Nfe, b: &Nfe) -> Nfe {
        let d = self.degree();
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        let g: Vec<BigRational> = self.minpoly.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect();
        for k in (d..prod.len()).rev() {
            let lead = std::mem::take(&mut prod[k]);
            if lead.is_zero() {
                continue;
            }
            for (i, gi) in g.iter().enumerate().take(d) {
                prod[k - d + i] -= &lead * gi;
            }
        }
        prod.truncate(d);
        Nfe { coords: prod }
    }

    pub fn inv(&self, a: &Nfe) -> Result<Nfe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = self.degree();
        // columns: a·t^j
        let mut cols = Vec::with_capacity(d);
        let mut tj = self.one();
        for _ in 0..d {
            cols.push(self.mul(a, &tj).coords);
            if d > 1 {
                tj = self.mul(&tj, &self.gen()?);
            }
        }
        let mut m: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..d).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| !m[r][col].is_zero()).ok_or(Error::DivisionByZero)?;
            m.swap(col, piv);
            let p = m[col][col].clone();
            for v in m[col].iter_mut() {
                *v /= &p;
            }
            for r in 0..d {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    let pivot_row = m[col].clone();
                    for (v, pv) in m[r].iter_mut().zip(pivot_row.iter()) {
                        *v -= &f * pv;
                    }
                }
            }
        }
        Ok(Nfe { coords: m.into_iter().map(|row| row[d].clone()).collect() })
    }

    /// The nontrivial automorphism of a quadratic field.
    pub fn conjugate(&self, a: &Nfe) -> Result<Nfe> {
        if self.degree() != 2 {
            return Err(Error::Invalid("conjugation is only provided for quadratic fields".into()));
        }
        // t ↦ -g1 - t
        let g1 = BigRational::from_integer(self.minpoly.coeff(1));
        Ok(Nfe { coords: vec![&a.coords[0] - &a.coords[1] * &g1, -a.coords[1].clone()] })
    }

    pub fn fmt_elem(&self, a: &Nfe) -> String {
        let mut parts = Vec::new();
        for (i, c) in a.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => format!("{}", c),
                1 => format!("({})*t", c),
                _ => format!("({})*t^{}", c, i),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    // polynomials in x over the field, ascending, trimmed

    pub fn ptrim(&self, mut p: FPoly) -> FPoly {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        p
    }

    pub fn pconst(&self, c: Nfe) -> FPoly {
        self.ptrim(vec![c])
    }

    pub fn padd(&self, a: &FPoly, b: &FPoly) -> FPoly {
        let n = a.len().max(b.len());
        let z = self.zero();
        self.ptrim((0..n).map(|i| self.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect())
    }

    pub fn pneg(&self, a: &FPoly) -> FPoly {
        a.iter().map(|c| self.neg(c)).collect()
    }

    pub fn psub(&self, a: &FPoly, b: &FPoly) -> FPoly {
        self.padd(a, &self.pneg(b))
    }

    pub fn pmul(&self, a: &FPoly, b: &FPoly) -> FPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.add(&out[i + j], &self.mul(x, y));
            }
        }
        self.ptrim(out)
    }

    pub fn pscale(&self, a: &FPoly, c: &Nfe) -> FPoly {
        self.ptrim(a.iter().map(|x| self.mul(x, c)).collect())
    }

    pub fn ppow(&self, a: &FPoly, e: u32) -> FPoly {
        (0..e).fold(self.pconst(self.one()), |acc, _| self.pmul(&acc, a))
    }

    pub fn pderiv(&self, a: &FPoly) -> FPoly {
        self.ptrim(a.iter().enumerate().skip(1).map(|(i, c)| self.mul(c, &self.from_rational(q(i as i64)))).collect())
    }

    pub fn pdeg(&self, a: &FPoly) -> Option<usize> {
        if a.is_empty() {
            None
        } else {
            Some(a.len() - 1)
        }
    }

    pub fn pdivrem(&self, a: &FPoly, b: &FPoly) -> Result<(FPoly, FPoly)> {
        if b.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let inv = self.inv(b.last().unwrap())?;
        let mut r = a.clone();
        let db = b.len() - 1;
        if r.len() < b.len() {
            return Ok((Vec::new(), r));
        }
        let mut qv = vec![self.zero(); r.len() - db];
        while r.len() > db && !r.is_empty() {
            let k = r.len() - 1 - db;
            let c = self.mul(r.last().unwrap(), &inv);
            for (i, bi) in b.iter().enumerate() {
                r[k + i] = self.sub(&r[k + i], &self.mul(&c, bi));
            }
            qv[k] = c;
            r.pop();
            r = self.ptrim(r);
        }
        Ok((self.ptrim(qv), r))
    }

    /// Monic gcd.
    pub fn pgcd(&self, a: &FPoly, b: &FPoly) -> Result<FPoly> {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let (_, r) = self.pdivrem(&a, &b)?;
            a = b;
            b = r;
        }
        if let Some(l) = a.last() {
            let inv = self.inv(l)?;
            a = self.pscale(&a, &inv);
        }
        Ok(a)
    }

    pub fn peval(&self, a: &FPoly, x: &Nfe) -> Nfe {
        let mut acc = self.zero();
        for c in a.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    pub fn fmt_poly(&self, a: &FPoly) -> String {
        if a.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({})", self.fmt_elem(c)),
                1 => format!("({})*x", self.fmt_elem(c)),
                _ => format!("({})*x^{}", self.fmt_elem(c), i),
            })
            .collect();
        parts.join(" + ")
    }
}

// ---------------------------------------------------------------------------
// expression parser

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    X,
    T,
    Op(char),
}

fn tokenize(s: &str, line: usize) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| parse_err(line, "bad integer"))?));
        } else if c == 'x' {
            out.push(Tok::X);
            i += 1;
        } else if c == 't' {
            out.push(Tok::T);
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(parse_err(line, format!("unexpected character '{}'", c)));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    k: &'a NumberField,
    toks: Vec<Tok>,
    pos: usize,
    line: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<FPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = self.k.padd(&acc, &t);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = self.k.psub(&acc, &t);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<FPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let t = self.unary()?;
                acc = self.k.pmul(&acc, &t);
            } else if self.eat('/') {
                let t = self.unary()?;
                if t.len() != 1 {
                    return Err(parse_err(self.line, "division by a non-constant or zero"));
                }
                let inv = self.k.inv(&t[0])?;
                acc = self.k.pscale(&acc, &inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<FPoly> {
        if self.eat('-') {
            let v = self.unary()?;
            return Ok(self.k.pneg(&v));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<FPoly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| parse_err(self.line, "exponent too large"))?;
                    Ok(self.k.ppow(&base, e))
                }
                _ => Err(parse_err(self.line, "exponent must be a non-negative integer")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<FPoly> {
        let tok = self.toks.get(self.pos).cloned().ok_or_else(|| parse_err(self.line, "unexpected end of expression"))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(self.k.pconst(self.k.from_rational(BigRational::from_integer(n)))),
            Tok::X => Ok(vec![self.k.zero(), self.k.one()]),
            Tok::T => Ok(self.k.pconst(self.k.gen().map_err(|_| parse_err(self.line, "'t' used without a minpoly"))?)),
            Tok::Op('(') => {
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(parse_err(self.line, "missing ')'"));
                }
                Ok(v)
            }
            Tok::Op(c) => Err(parse_err(self.line, format!("unexpected '{}'", c))),
        }
    }
}

pub fn parse_poly(k: &NumberField, s: &str, line: usize) -> Result<FPoly> {
    let mut p = Parser { k, toks: tokenize(s, line)?, pos: 0, line };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(parse_err(line, "trailing input"));
    }
    Ok(v)
}

pub fn parse_elem(k: &NumberField, s: &str, line: usize) -> Result<Nfe> {
    let p = parse_poly(k, s, line)?;
    match p.len() {
        0 => Ok(k.zero()),
        1 => Ok(p[0].clone()),
        _ => Err(parse_err(line, "expected a constant")),
    }
}

fn parse_int_poly(s: &str, line: usize) -> Result<IntPoly> {
    let p = parse_poly(&NumberField::rational(), &s.replace('t', "x"), line)?;
    let mut c = Vec::new();
    for e in p {
        let r = e.coords[0].clone();
        if !r.is_integer() {
            return Err(parse_err(line, "minpoly must have integer coefficients"));
        }
        c.push(r.to_integer());
    }
    Ok(IntPoly::new(c))
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverMap {
    pub field: NumberField,
    pub w_num: FPoly,
    pub w_den: FPoly,
    pub r_num: FPoly,
    pub r_den: FPoly,
    pub a: Nfe,
    pub b: Nfe,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldCurve {
    pub field: NumberField,
    pub f: FPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverData {
    pub curve: FieldCurve,
    pub map: CoverMap,
}

pub fn parse_cover(text: &str) -> Result<CoverData> {
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once(':').ok_or_else(|| parse_err(i + 1, "expected 'key: value'"))?;
        entries.push((i + 1, k.trim().to_string(), v.trim().to_string()));
    }
    let get = |key: &str| entries.iter().find(|e| e.1 == key);
    for e in &entries {
        if !["minpoly", "f", "A", "B", "w_num", "w_den", "r_num", "r_den"].contains(&e.1.as_str()) {
            return Err(parse_err(e.0, format!("unknown key '{}'", e.1)));
        }
    }
    let field = match get("minpoly") {
        Some((l, _, v)) => NumberField::new(parse_int_poly(v, *l)?)?,
        None => NumberField::rational(),
    };
    let need = |key: &str| get(key).ok_or_else(|| parse_err(0, format!("missing '{}'", key)));
    let poly = |key: &str, default_one: bool| -> Result<FPoly> {
        match get(key) {
            Some((l, _, v)) => parse_poly(&field, v, *l),
            None if default_one => Ok(field.pconst(field.one())),
            None => Err(parse_err(0, format!("missing '{}'", key))),
        }
    };
    let f = poly("f", false)?;
    let (la, _, va) = need("A")?;
    let (lb, _, vb) = need("B")?;
    let a = parse_elem(&field, va, *la)?;
    let b = parse_elem(&field, vb, *lb)?;
    let map = CoverMap {
        field: field.clone(),
        w_num: poly("w_num", false)?,
        w_den: poly("w_den", true)?,
        r_num: poly("r_num", false)?,
        r_den: poly("r_den", true)?,
        a,
        b,
    };
    Ok(CoverData { curve: FieldCurve { field, f }, map })
}

fn check_field(curve: &FieldCurve, map: &CoverMap) -> Result<()> {
    if curve.field != map.field {
        return Err(Error::FieldMismatch);
    }
    if map.w_den.is_empty() || map.r_den.is_empty() {
        return Err(Error::DivisionByZero);
    }
    Ok(())
}

/// `r² f = w³ + A w + B` as rational functions, cross-multiplied:
/// `R² f D³ = S² (N³ + A N D² + B D³)` with `w = N/D`, `r = R/S`.
pub fn verify_cover(curve: &FieldCurve, map: &CoverMap) -> Result<bool> {
    check_field(curve, map)?;
    let k = &curve.field;
    let (n, d) = (&map.w_num, &map.w_den);
    let (r, s) = (&map.r_num, &map.r_den);
    if curve.f.len() < 6 || curve.f.len() > 7 {
        return Ok(false);
    }
    // the target must be an elliptic curve
    let four_a3 = k.mul(&k.from_rational(q(4)), &k.mul(&map.a, &k.mul(&map.a, &map.a)));
    let b2 = k.mul(&k.from_rational(q(27)), &k.mul(&map.b, &map.b));
    if k.add(&four_a3, &b2).is_zero() {
        return Ok(false);
    }
    // nonconstant w
    let g = k.pgcd(n, d)?;
    let (nr, _) = k.pdivrem(n, &g)?;
    let (dr, _) = k.pdivrem(d, &g)?;
    if nr.len() <= 1 && dr.len() <= 1 {
        return Ok(false);
    }
    if r.is_empty() {
        return Ok(false);
    }
    let d2 = k.pmul(d, d);
    let d3 = k.pmul(&d2, d);
    let lhs = k.pmul(&k.pmul(&k.pmul(r, r), &curve.f), &d3);
    let rhs_inner = k.padd(&k.padd(&k.ppow(n, 3), &k.pscale(&k.pmul(n, &d2), &map.a)), &k.pscale(&d3, &map.b));
    let rhs = k.pmul(&k.pmul(s, s), &rhs_inner);
    Ok(lhs == rhs)
}

/// `max(deg N, deg D)` after cancelling `gcd(N, D)`.
pub fn map_degree(curve: &FieldCurve, map: &CoverMap) -> Result<usize> {
    if !verify_cover(curve, map)? {
        return Err(Error::NotACover("map does not satisfy the curve equation".into()));
    }
    let k = &map.field;
    let g = k.pgcd(&map.w_num, &map.w_den)?;
    let (n, _) = k.pdivrem(&map.w_num, &g)?;
    let (d, _) = k.pdivrem(&map.w_den, &g)?;
    Ok(n.len().max(d.len()) - 1)
}

/// `φ*(dw/z) = (α + βx) dx/y`.
pub fn pullback_differential(curve: &FieldCurve, map: &CoverMap) -> Result<(Nfe, Nfe)> {
    if !verify_cover(curve, map)? {
        return Err(Error::NotACover("map does not satisfy the curve equation".into()));
    }
    let k = &map.field;
    let (n, d, r, s) = (&map.w_num, &map.w_den, &map.r_num, &map.r_den);
    // w'/r = (N'D - ND') S / (D² R)
    let top = k.pmul(&k.psub(&k.pmul(&k.pderiv(n), d), &k.pmul(n, &k.pderiv(d))), s);
    let bot = k.pmul(&k.pmul(d, d), r);
    let (quo, rem) = k.pdivrem(&top, &bot)?;
    if !rem.is_empty() || quo.len() > 2 {
        return Err(Error::NotACover("pullback of dw/z is not regular".into()));
    }
    let alpha = quo.first().cloned().unwrap_or_else(|| k.zero());
    let beta = quo.get(1).cloned().unwrap_or_else(|| k.zero());
    Ok((alpha, beta))
}

pub fn independence(k: &NumberField, p1: &(Nfe, Nfe), p2: &(Nfe, Nfe)) -> bool {
    !k.sub(&k.mul(&p1.0, &p2.1), &k.mul(&p2.0, &p1.1)).is_zero()
}

/// Applies the quadratic-field automorphism to every coefficient.
pub fn conjugate_cover(data: &CoverData) -> Result<CoverData> {
    let k = &data.curve.field;
    let cp = |p: &FPoly| -> Result<FPoly> { p.iter().map(|c| k.conjugate(c)).collect() };
    Ok(CoverData {
        curve: FieldCurve { field: k.clone(), f: cp(&data.curve.f)? },
        map: CoverMap {
            field: k.clone(),
            w_num: cp(&data.map.w_num)?,
            w_den: cp(&data.map.w_den)?,
            r_num: cp(&data.map.r_num)?,
            r_den: cp(&data.map.r_den)?,
            a: k.conjugate(&data.map.a)?,
            b: k.conjugate(&data.map.b)?,
        },
    })
}
