//! Generalized stabilizers of hypergraph states in the normal form
//! `sign * X^a * D_f`, where `D_f |z> = (-1)^{f(z)} |z>` and `f` is a
//! boolean polynomial of degree at most two.
//!
//! Moving `X^b` left through `D_f` gives `D_f X^b = X^b D_{f(z ^ b)}`, and
//! the substitution `z_i -> z_i + 1` keeps the degree at two, so products
//! of generators stay in the form.

use std::collections::BTreeSet;
use std::fmt;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::graph::HypergraphSpec;
use crate::pauli::{PauliString, SettingVector, Sign};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StabilizerProduct {
    sign: Sign,
    x: BitVec,
    linear: BitVec,
    /// 0-indexed pairs `(i, j)` with `i < j`.
    quadratic: BTreeSet<(usize, usize)>,
}

fn ordered(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

impl StabilizerProduct {
    pub fn identity(n: usize) -> Self {
        StabilizerProduct {
            sign: Sign::Plus,
            x: BitVec::zeros(n),
            linear: BitVec::zeros(n),
            quadratic: BTreeSet::new(),
        }
    }

    /// Builds from 0-indexed parts. Pairs are canonicalized; a pair listed
    /// twice cancels (coefficients are mod 2).
    pub fn from_parts(
        sign: Sign,
        x: BitVec,
        linear: BitVec,
        quadratic: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = x.len();
        if linear.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                actual: linear.len(),
            });
        }
        let mut quad = BTreeSet::new();
        for (i, j) in quadratic {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange {
                    index: i.max(j) + 1,
                    n,
                });
            }
            if i == j {
                // z_i z_i = z_i over booleans
                return Err(Error::DegenerateEdge {
                    edge: vec![i + 1, j + 1],
                });
            }
            toggle_pair(&mut quad, ordered(i, j));
        }
        Ok(StabilizerProduct {
            sign,
            x,
            linear,
            quadratic: quad,
        })
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

    pub fn linear(&self) -> &BitVec {
        &self.linear
    }

    /// Degree-2 monomials as 0-indexed pairs.
    pub fn quadratic(&self) -> &BTreeSet<(usize, usize)> {
        &self.quadratic
    }

    pub fn is_identity(&self) -> bool {
        self.sign == Sign::Plus
            && self.x.is_zero()
            && self.linear.is_zero()
            && self.quadratic.is_empty()
    }

    /// Value of the phase polynomial `f` at basis index `z` (bit i = qubit i).
    pub fn phase_parity(&self, z: &BitVec) -> bool {
        let mut parity = self.linear.and_count(z) % 2 == 1;
        for &(i, j) in &self.quadratic {
            parity ^= z.get(i) && z.get(j);
        }
        parity
    }

    /// Normal-ordered product `self * rhs`.
    pub fn product(&self, rhs: &StabilizerProduct) -> Result<StabilizerProduct> {
        if self.n() != rhs.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                actual: rhs.n(),
            });
        }
        // f(z ^ b): each linear z_i with i in b contributes a constant;
        // z_i z_j picks up z_j (i in b), z_i (j in b), and 1 (both).
        let b = &rhs.x;
        let mut constant = self.linear.and_count(b) % 2 == 1;
        let mut linear = self.linear.clone();
        for &(i, j) in &self.quadratic {
            let (bi, bj) = (b.get(i), b.get(j));
            if bi {
                linear.toggle(j);
            }
            if bj {
                linear.toggle(i);
            }
            constant ^= bi && bj;
        }
        linear.xor_assign(&rhs.linear);
        let mut quadratic = self.quadratic.clone();
        for &pair in &rhs.quadratic {
            toggle_pair(&mut quadratic, pair);
        }
        let mut x = self.x.clone();
        x.xor_assign(&rhs.x);
        Ok(StabilizerProduct {
            sign: self.sign * rhs.sign * Sign::from_parity(constant),
            x,
            linear,
            quadratic,
        })
    }

    /// The equivalent Hermitian Pauli word, when there is one.
    ///
    /// Returns `None` if the quadratic part is nonempty (a genuine CZ
    /// factor remains), or if `X^a Z^c` carries an odd number of `XZ`
    /// sites so the operator is `+-i` times a Pauli word.
    pub fn try_to_pauli(&self) -> Option<PauliString> {
        if !self.quadratic.is_empty() {
            return None;
        }
        // X Z = -i Y on each site in a & c
        let overlap = self.x.and_count(&self.linear);
        if overlap % 2 == 1 {
            return None;
        }
        let sign = self.sign * Sign::from_parity((overlap / 2) % 2 == 1);
        Some(
            PauliString::from_masks(sign, self.x.clone(), self.linear.clone())
                .expect("masks have equal length"),
        )
    }
}

fn toggle_pair(set: &mut BTreeSet<(usize, usize)>, pair: (usize, usize)) {
    if !set.remove(&pair) {
        set.insert(pair);
    }
}

impl fmt::Debug for StabilizerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_based = |bits: &BitVec| bits.iter_ones().map(|i| i + 1).collect::<Vec<_>>();
        write!(
            f,
            "{}X{:?}·Z{:?}·CZ{:?}",
            if self.sign.is_minus() { "-" } else { "+" },
            one_based(&self.x),
            one_based(&self.linear),
            self.quadratic
                .iter()
                .map(|&(i, j)| (i + 1, j + 1))
                .collect::<Vec<_>>()
        )
    }
}

/// Generalized stabilizer `X_i * prod Z_j * prod CZ_{j,k}` for 1-indexed `i`.
pub fn hypergraph_stabilizer(h: &HypergraphSpec, i: usize) -> Result<StabilizerProduct> {
    let n = h.n();
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    let v = i - 1;
    let mut linear = BitVec::zeros(n);
    for &(a, b) in h.e2_0() {
        if a == v {
            linear.set(b, true);
        } else if b == v {
            linear.set(a, true);
        }
    }
    let quadratic = h
        .e3_0()
        .iter()
        .filter_map(|&(a, b, c)| {
            if a == v {
                Some((b, c))
            } else if b == v {
                Some((a, c))
            } else if c == v {
                Some((a, b))
            } else {
                None
            }
        })
        .collect();
    Ok(StabilizerProduct {
        sign: Sign::Plus,
        x: BitVec::from_indices(n, [v]),
        linear,
        quadratic,
    })
}

/// `prod_i g~_i^{ℓ_i}` in ascending `i`.
pub fn generalized_product(
    h: &HypergraphSpec,
    setting: &SettingVector,
) -> Result<StabilizerProduct> {
    if setting.len() != h.n() {
        return Err(Error::SizeMismatch {
            expected: h.n(),
            actual: setting.len(),
        });
    }
    let mut acc = StabilizerProduct::identity(h.n());
    for v in setting.bits().iter_ones() {
        acc = acc.product(&hypergraph_stabilizer(h, v + 1)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_examples() {
        let h = HypergraphSpec::new(2, [(1, 2)], []).unwrap();
        let g = hypergraph_stabilizer(&h, 1).unwrap();
        assert_eq!(g.x_mask().iter_ones().collect::<Vec<_>>(), vec![0]);
        assert_eq!(g.linear().iter_ones().collect::<Vec<_>>(), vec![1]);
        assert!(g.quadratic().is_empty());

        let h = HypergraphSpec::new(3, [], [(1, 2, 3)]).unwrap();
        let g = hypergraph_stabilizer(&h, 1).unwrap();
        assert!(g.linear().is_zero());
        assert_eq!(g.quadratic().iter().copied().collect::<Vec<_>>(), vec![(1, 2)]);
        assert!(g.try_to_pauli().is_none());
        assert!(hypergraph_stabilizer(&h, 4).is_err());
    }

    #[test]
    fn generators_are_involutions() {
        let h = HypergraphSpec::new(4, [(1, 2), (2, 4)], [(1, 2, 3), (2, 3, 4)]).unwrap();
        for i in 1..=4 {
            let g = hypergraph_stabilizer(&h, i).unwrap();
            assert!(g.product(&g).unwrap().is_identity(), "g{i}^2 != I");
        }
    }

    #[test]
    fn x_through_cz() {
        // (X_1)(CZ_12) = X_1 D_{z1 z2}: already normal-ordered.
        let x1 = StabilizerProduct::from_parts(
            Sign::Plus,
            BitVec::from_indices(2, [0]),
            BitVec::zeros(2),
            [],
        )
        .unwrap();
        let cz = StabilizerProduct::from_parts(Sign::Plus, BitVec::zeros(2), BitVec::zeros(2), [(0, 1)])
            .unwrap();
        let xc = x1.product(&cz).unwrap();
        assert_eq!(xc.quadratic().len(), 1);
        assert!(xc.linear().is_zero());
        // (CZ_12)(X_1) = X_1 D_{(z1+1) z2} = X_1 D_{z1 z2 + z2}
        let cx = cz.product(&x1).unwrap();
        assert_eq!(cx.linear().iter_ones().collect::<Vec<_>>(), vec![1]);
        assert_eq!(cx.sign(), Sign::Plus);
    }

    #[test]
    fn to_pauli_sign_convention() {
        assert_eq!(
            StabilizerProduct::identity(3).try_to_pauli().unwrap().to_string(),
            "+III"
        );
        // -X^{12} D_{z1+z2} = -(XZ)(XZ) = -(-iY)(-iY) = +YY
        let p = StabilizerProduct::from_parts(
            Sign::Minus,
            BitVec::from_indices(2, [0, 1]),
            BitVec::from_indices(2, [0, 1]),
            [],
        )
        .unwrap();
        assert_eq!(p.try_to_pauli().unwrap().to_string(), "+YY");
        // X Z alone is -iY: not Hermitian.
        let q = StabilizerProduct::from_parts(
            Sign::Plus,
            BitVec::from_indices(1, [0]),
            BitVec::from_indices(1, [0]),
            [],
        )
        .unwrap();
        assert!(q.try_to_pauli().is_none());
    }

    #[test]
    fn graph_case_agrees_with_pauli_route() {
        use crate::graph::GraphSpec;
        use crate::pauli::stabilizer_product;
        let g = GraphSpec::ring(5).unwrap();
        let h: HypergraphSpec = (&g).into();
        for bits in 0u64..32 {
            let l = SettingVector::new(BitVec::from_u64(5, bits));
            let via_pauli = stabilizer_product(&g, &l).unwrap();
            let via_poly = generalized_product(&h, &l).unwrap().try_to_pauli().unwrap();
            assert_eq!(via_pauli, via_poly, "ℓ = {l}");
        }
    }

    #[test]
    fn rejects_mismatch() {
        let a = StabilizerProduct::identity(2);
        let b = StabilizerProduct::identity(3);
        assert!(a.product(&b).is_err());
        assert!(StabilizerProduct::from_parts(Sign::Plus, BitVec::zeros(2), BitVec::zeros(2), [(0, 0)]).is_err());
    }
}
