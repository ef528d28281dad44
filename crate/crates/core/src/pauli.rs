//! Signed Pauli words and graph-state stabilizer products.
//!
//! A [`PauliString`] is stored as `(sign, x, z)` with site letters
//! I/X/Z/Y for bit pairs (0,0)/(1,0)/(0,1)/(1,1). The word is Hermitian:
//! `Y` is the usual Pauli-Y (`Y = iXZ`), so the operator equals
//! `sign * i^{|x & z|} * X^x Z^z` and every word has eigenvalues +-1.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::graph::GraphSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self.is_minus() ^ rhs.is_minus())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    sign: Sign,
    x: BitVec,
    z: BitVec,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            sign: Sign::Plus,
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
        }
    }

    pub fn from_masks(sign: Sign, x: BitVec, z: BitVec) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::SizeMismatch {
                expected: x.len(),
                actual: z.len(),
            });
        }
        Ok(PauliString { sign, x, z })
    }

    /// Word with `X` on each listed site (1-indexed) and `I` elsewhere.
    pub fn x_on(n: usize, sites: impl IntoIterator<Item = usize>) -> Self {
        PauliString {
            sign: Sign::Plus,
            x: BitVec::from_indices(n, sites.into_iter().map(|s| s - 1)),
            z: BitVec::zeros(n),
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn x_mask(&self) -> &BitVec {
        &self.x
    }

    pub fn z_mask(&self) -> &BitVec {
        &self.z
    }

    /// Letter at 0-indexed site `i`.
    pub fn letter(&self, i: usize) -> char {
        match (self.x.get(i), self.z.get(i)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (false, true) => 'Z',
            (true, true) => 'Y',
        }
    }

    /// Number of sites carrying X or Y.
    pub fn xy_support(&self) -> usize {
        self.x.count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.sign == Sign::Plus && self.x.is_zero() && self.z.is_zero()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        (self.x.and_count(&other.z) + self.z.and_count(&other.x)) % 2 == 0
    }

    /// Phase exponent k in `word = i^k X^x Z^z`.
    fn xz_phase(&self) -> usize {
        let s = if self.sign.is_minus() { 2 } else { 0 };
        (s + self.x.and_count(&self.z)) % 4
    }

    /// Operator product `self * rhs`. Fails when the factors anticommute,
    /// since the product then carries a phase of +-i.
    pub fn mul(&self, rhs: &PauliString) -> Result<PauliString> {
        if self.n() != rhs.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                actual: rhs.n(),
            });
        }
        // i^a X^x1 Z^z1 i^b X^x2 Z^z2 = i^{a+b} (-1)^{|z1 & x2|} X^{x1^x2} Z^{z1^z2}
        let k = self.xz_phase() + rhs.xz_phase() + 2 * self.z.and_count(&rhs.x);
        let mut x = self.x.clone();
        x.xor_assign(&rhs.x);
        let mut z = self.z.clone();
        z.xor_assign(&rhs.z);
        let residual = (k + 4 - x.and_count(&z) % 4) % 4;
        match residual {
            0 => Ok(PauliString { sign: Sign::Plus, x, z }),
            2 => Ok(PauliString { sign: Sign::Minus, x, z }),
            _ => Err(Error::NonHermitianProduct),
        }
    }

    pub fn negated(&self) -> PauliString {
        PauliString {
            sign: self.sign.flip(),
            ..self.clone()
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.sign.is_minus() { "-" } else { "+" })?;
        for i in 0..self.n() {
            write!(f, "{}", self.letter(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses `[+-]?[IXYZ]+`, site 1 first.
    fn from_str(s: &str) -> Result<Self> {
        let (sign, body) = match s.as_bytes().first() {
            Some(b'-') => (Sign::Minus, &s[1..]),
            Some(b'+') => (Sign::Plus, &s[1..]),
            _ => (Sign::Plus, s),
        };
        if body.is_empty() {
            return Err(Error::InvalidPauli(s.to_string()));
        }
        let n = body.len();
        let mut x = BitVec::zeros(n);
        let mut z = BitVec::zeros(n);
        for (i, c) in body.chars().enumerate() {
            match c {
                'I' => {}
                'X' => x.set(i, true),
                'Z' => z.set(i, true),
                'Y' => {
                    x.set(i, true);
                    z.set(i, true);
                }
                _ => return Err(Error::InvalidPauli(s.to_string())),
            }
        }
        Ok(PauliString { sign, x, z })
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Selector ℓ ∈ {0,1}^n choosing which generators enter a product.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SettingVector(BitVec);

impl SettingVector {
    pub fn new(bits: BitVec) -> Self {
        SettingVector(bits)
    }

    /// `1^wt 0^(n-wt)`.
    pub fn prefix_ones(n: usize, wt: usize) -> Result<Self> {
        if wt > n {
            return Err(Error::WeightOutOfRange { wt, n });
        }
        Ok(SettingVector(BitVec::from_indices(n, 0..wt)))
    }

    /// `(01)^(n/2)`: ones on the even 1-indexed sites.
    pub fn alternating(n: usize) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::OddQubitCount { n });
        }
        Ok(SettingVector(BitVec::from_indices(n, (1..n).step_by(2))))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.count_ones()
    }

    pub fn bits(&self) -> &BitVec {
        &self.0
    }
}

impl FromStr for SettingVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidSetting(s.to_string()));
        }
        let mut bits = BitVec::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits.set(i, true),
                _ => return Err(Error::InvalidSetting(s.to_string())),
            }
        }
        Ok(SettingVector(bits))
    }
}

impl fmt::Display for SettingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Debug for SettingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SettingVector({:?})", self.0)
    }
}

/// Generator `g_i = X_i * prod_{j ~ i} Z_j` for 1-indexed vertex `i`.
pub fn graph_stabilizer(g: &GraphSpec, i: usize) -> Result<PauliString> {
    let n = g.n();
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    let v = i - 1;
    Ok(PauliString {
        sign: Sign::Plus,
        x: BitVec::from_indices(n, [v]),
        z: BitVec::from_indices(n, g.neighbors0(v)),
    })
}

/// `S_ℓ = prod_i g_i^{ℓ_i}`, multiplied left to right in ascending `i`.
pub fn stabilizer_product(g: &GraphSpec, setting: &SettingVector) -> Result<PauliString> {
    if setting.len() != g.n() {
        return Err(Error::SizeMismatch {
            expected: g.n(),
            actual: setting.len(),
        });
    }
    let mut acc = PauliString::identity(g.n());
    for v in setting.bits().iter_ones() {
        let gen = graph_stabilizer(g, v + 1)?;
        acc = acc.mul(&gen).expect("graph stabilizers commute");
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn generator_examples() {
        let g = GraphSpec::new(2, [(1, 2)]).unwrap();
        assert_eq!(graph_stabilizer(&g, 1).unwrap(), p("+XZ"));
        let g = GraphSpec::empty(3).unwrap();
        assert_eq!(graph_stabilizer(&g, 2).unwrap(), p("+IXI"));
        let g = GraphSpec::path(3).unwrap();
        assert_eq!(graph_stabilizer(&g, 2).unwrap(), p("+ZXZ"));
        assert_eq!(
            graph_stabilizer(&g, 4),
            Err(Error::IndexOutOfRange { index: 4, n: 3 })
        );
        assert!(graph_stabilizer(&g, 0).is_err());
    }

    #[test]
    fn product_examples() {
        let g = GraphSpec::new(2, [(1, 2)]).unwrap();
        let yy = stabilizer_product(&g, &"11".parse().unwrap()).unwrap();
        assert_eq!(yy, p("+YY"));
        let id = stabilizer_product(&g, &"00".parse().unwrap()).unwrap();
        assert!(id.is_identity());
        assert!(stabilizer_product(&g, &"101".parse().unwrap()).is_err());
    }

    #[test]
    fn single_site_products() {
        assert_eq!(p("X").mul(&p("X")).unwrap(), p("I"));
        assert_eq!(p("Y").mul(&p("Y")).unwrap(), p("I"));
        assert_eq!(p("X").mul(&p("Z")), Err(Error::NonHermitianProduct));
        // XZ ⊗ ZX = (-iY)(iY)
        assert_eq!(p("XZ").mul(&p("ZX")).unwrap(), p("YY"));
        assert_eq!(p("XX").mul(&p("ZZ")).unwrap(), p("-YY"));
        assert_eq!(p("-X").mul(&p("-X")).unwrap(), p("I"));
    }

    #[test]
    fn parse_and_display() {
        let w = p("-XIZY");
        assert_eq!(w.to_string(), "-XIZY");
        assert_eq!(w.xy_support(), 2);
        assert!("".parse::<PauliString>().is_err());
        assert!("XQ".parse::<PauliString>().is_err());
        assert_eq!(serde_json::to_string(&w).unwrap(), "\"-XIZY\"");
        let back: PauliString = serde_json::from_str("\"-XIZY\"").unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn setting_vectors() {
        let s: SettingVector = "0101".parse().unwrap();
        assert_eq!(s, SettingVector::alternating(4).unwrap());
        assert_eq!(s.weight(), 2);
        assert_eq!(SettingVector::prefix_ones(4, 2).unwrap().to_string(), "1100");
        assert!(SettingVector::alternating(5).is_err());
        assert!(SettingVector::prefix_ones(3, 4).is_err());
        assert!("10a".parse::<SettingVector>().is_err());
    }
}
