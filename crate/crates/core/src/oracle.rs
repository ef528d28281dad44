//! Brute-force ground truth for small systems.
//!
//! Operators are built from gate definitions (X, Y, Z, CZ, CCZ) as
//! monomial matrices, one nonzero entry per column, which is an exact dense
//! representation that stays cheap up to ~24 qubits. Density matrices are
//! dense `2^n x 2^n` complex arrays. Nothing here goes through the
//! symbolic normal form in [`crate::stabilizer`] or the closed forms in
//! [`crate::thermal`].

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::HypergraphSpec;
use crate::pauli::PauliString;
use crate::stabilizer::StabilizerProduct;
use crate::thermal::ThermalParams;

pub const MAX_STATEVECTOR_QUBITS: usize = 24;
pub const MAX_CHANNEL_QUBITS: usize = 12;
pub const MAX_GIBBS_QUBITS: usize = 10;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn limit(n: usize, max: usize) -> Result<()> {
    if n > max {
        Err(Error::TooManyQubits { n, max })
    } else {
        Ok(())
    }
}

#[inline]
fn bit(x: usize, q: usize) -> bool {
    (x >> q) & 1 == 1
}

/// `op |x> = coeff[x] |target[x]>`; basis bit `q` is qubit `q` (0-indexed).
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialOp {
    n: usize,
    target: Vec<usize>,
    coeff: Vec<Complex64>,
}

impl MonomialOp {
    pub fn identity(n: usize) -> Self {
        let dim = 1usize << n;
        MonomialOp {
            n,
            target: (0..dim).collect(),
            coeff: vec![ONE; dim],
        }
    }

    fn diagonal(n: usize, sign: impl Fn(usize) -> bool) -> Self {
        let mut op = Self::identity(n);
        for (x, c) in op.coeff.iter_mut().enumerate() {
            if sign(x) {
                *c = -ONE;
            }
        }
        op
    }

    pub fn pauli_x(n: usize, q: usize) -> Self {
        let mut op = Self::identity(n);
        for (x, t) in op.target.iter_mut().enumerate() {
            *t = x ^ (1 << q);
        }
        op
    }

    pub fn pauli_z(n: usize, q: usize) -> Self {
        Self::diagonal(n, |x| bit(x, q))
    }

    /// `Y|0> = i|1>`, `Y|1> = -i|0>`.
    pub fn pauli_y(n: usize, q: usize) -> Self {
        let mut op = Self::pauli_x(n, q);
        for (x, c) in op.coeff.iter_mut().enumerate() {
            *c = if bit(x, q) { -I } else { I };
        }
        op
    }

    pub fn cz(n: usize, a: usize, b: usize) -> Self {
        Self::diagonal(n, |x| bit(x, a) && bit(x, b))
    }

    pub fn ccz(n: usize, a: usize, b: usize, c: usize) -> Self {
        Self::diagonal(n, |x| bit(x, a) && bit(x, b) && bit(x, c))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scaled(mut self, s: Complex64) -> Self {
        for c in &mut self.coeff {
            *c *= s;
        }
        self
    }

    /// Matrix product `self * rhs`.
    pub fn compose(&self, rhs: &MonomialOp) -> MonomialOp {
        assert_eq!(self.n, rhs.n);
        let (target, coeff) = rhs
            .target
            .iter()
            .zip(&rhs.coeff)
            .map(|(&y, &c)| (self.target[y], self.coeff[y] * c))
            .unzip();
        MonomialOp {
            n: self.n,
            target,
            coeff,
        }
    }

    /// Site-by-site tensor product of single-qubit Paulis, times the sign.
    pub fn from_pauli(p: &PauliString) -> Self {
        let n = p.n();
        let mut op = Self::identity(n);
        for q in 0..n {
            let site = match p.letter(q) {
                'X' => Self::pauli_x(n, q),
                'Y' => Self::pauli_y(n, q),
                'Z' => Self::pauli_z(n, q),
                _ => continue,
            };
            op = op.compose(&site);
        }
        op.scaled(ONE * f64::from(p.sign().value()))
    }

    /// `sign * X^a * prod Z_i * prod CZ_ij` read off the normal form.
    pub fn from_stabilizer_product(s: &StabilizerProduct) -> Self {
        let n = s.n();
        let mut op = Self::identity(n);
        for q in s.x_mask().iter_ones() {
            op = op.compose(&Self::pauli_x(n, q));
        }
        for q in s.linear().iter_ones() {
            op = op.compose(&Self::pauli_z(n, q));
        }
        for &(a, b) in s.quadratic() {
            op = op.compose(&Self::cz(n, a, b));
        }
        op.scaled(ONE * f64::from(s.sign().value()))
    }

    /// Generalized stabilizer of 1-indexed vertex `i`, from gate definitions.
    pub fn hypergraph_generator(h: &HypergraphSpec, i: usize) -> Result<Self> {
        let n = h.n();
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        let v = i - 1;
        let mut op = Self::pauli_x(n, v);
        for (a, b) in h.e2() {
            let (a, b) = (a - 1, b - 1);
            if a == v {
                op = op.compose(&Self::pauli_z(n, b));
            } else if b == v {
                op = op.compose(&Self::pauli_z(n, a));
            }
        }
        for (a, b, c) in h.e3() {
            let tri = [a - 1, b - 1, c - 1];
            if let Some(pos) = tri.iter().position(|&u| u == v) {
                let rest: Vec<usize> = tri
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != pos)
                    .map(|(_, &u)| u)
                    .collect();
                op = op.compose(&Self::cz(n, rest[0], rest[1]));
            }
        }
        Ok(op)
    }

    pub fn apply(&self, state: &DenseState) -> Result<DenseState> {
        if state.n != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                actual: state.n,
            });
        }
        let mut out = vec![ZERO; state.amplitudes.len()];
        for (x, &a) in state.amplitudes.iter().enumerate() {
            out[self.target[x]] += self.coeff[x] * a;
        }
        Ok(DenseState {
            n: self.n,
            amplitudes: out,
        })
    }

    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        limit(self.n, MAX_GIBBS_QUBITS)?;
        let dim = 1usize << self.n;
        let mut m = DMatrix::from_element(dim, dim, ZERO);
        for x in 0..dim {
            m[(self.target[x], x)] = self.coeff[x];
        }
        Ok(m)
    }

    /// `Tr[ρ · op]`.
    pub fn trace_with(&self, rho: &DenseMixedState) -> Result<Complex64> {
        if rho.n != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                actual: rho.n,
            });
        }
        Ok((0..self.target.len())
            .map(|x| rho.matrix[(x, self.target[x])] * self.coeff[x])
            .sum())
    }
}

/// Either operator flavor accepted by the oracle checks.
#[derive(Clone, Copy, Debug)]
pub enum Operator<'a> {
    Pauli(&'a PauliString),
    Product(&'a StabilizerProduct),
}

impl<'a> From<&'a PauliString> for Operator<'a> {
    fn from(p: &'a PauliString) -> Self {
        Operator::Pauli(p)
    }
}

impl<'a> From<&'a StabilizerProduct> for Operator<'a> {
    fn from(s: &'a StabilizerProduct) -> Self {
        Operator::Product(s)
    }
}

impl Operator<'_> {
    pub fn n(&self) -> usize {
        match self {
            Operator::Pauli(p) => p.n(),
            Operator::Product(s) => s.n(),
        }
    }

    pub fn to_monomial(&self) -> MonomialOp {
        match self {
            Operator::Pauli(p) => MonomialOp::from_pauli(p),
            Operator::Product(s) => MonomialOp::from_stabilizer_product(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl DenseState {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_distance(&self, other: &DenseState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn projector(&self) -> Result<DenseMixedState> {
        limit(self.n, MAX_CHANNEL_QUBITS)?;
        let v = nalgebra::DVector::from_column_slice(&self.amplitudes);
        Ok(DenseMixedState {
            n: self.n,
            matrix: &v * v.adjoint(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMixedState {
    n: usize,
    matrix: DMatrix<Complex64>,
}

impl DenseMixedState {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).camax()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// `<ψ|ρ|ψ>`.
    pub fn overlap(&self, psi: &DenseState) -> Result<f64> {
        if psi.n != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                actual: psi.n,
            });
        }
        let v = nalgebra::DVector::from_column_slice(&psi.amplitudes);
        Ok((v.adjoint() * &self.matrix * &v)[(0, 0)].re)
    }

    pub fn max_entry_distance(&self, other: &DenseMixedState) -> f64 {
        (&self.matrix - &other.matrix).camax()
    }
}

/// `prod CCZ prod CZ |+>^n` as a statevector.
pub fn build_pure_state(h: &HypergraphSpec) -> Result<DenseState> {
    let n = h.n();
    limit(n, MAX_STATEVECTOR_QUBITS)?;
    let dim = 1usize << n;
    let amp = (dim as f64).sqrt().recip();
    let e2: Vec<(usize, usize)> = h.e2().into_iter().map(|(a, b)| (a - 1, b - 1)).collect();
    let e3: Vec<(usize, usize, usize)> = h
        .e3()
        .into_iter()
        .map(|(a, b, c)| (a - 1, b - 1, c - 1))
        .collect();
    let amplitudes = (0..dim)
        .map(|x| {
            let flips = e2.iter().filter(|&&(a, b)| bit(x, a) && bit(x, b)).count()
                + e3
                    .iter()
                    .filter(|&&(a, b, c)| bit(x, a) && bit(x, b) && bit(x, c))
                    .count();
            Complex64::new(if flips % 2 == 0 { amp } else { -amp }, 0.0)
        })
        .collect();
    Ok(DenseState { n, amplitudes })
}

/// `prod_i E_i(|ψ><ψ|)` with `E_i(ρ) = (1-p) ρ + p Z_i ρ Z_i`.
pub fn thermal_density(h: &HypergraphSpec, thermal: &ThermalParams) -> Result<DenseMixedState> {
    limit(h.n(), MAX_CHANNEL_QUBITS)?;
    let mut rho = build_pure_state(h)?.projector()?;
    let p = thermal.p_flip;
    let dim = 1usize << h.n();
    for q in 0..h.n() {
        // (Z_q ρ Z_q)_{xy} = (-1)^{x_q + y_q} ρ_{xy}
        for y in 0..dim {
            for x in 0..dim {
                if bit(x, q) != bit(y, q) {
                    rho.matrix[(x, y)] *= 1.0 - 2.0 * p;
                }
            }
        }
    }
    Ok(rho)
}

/// `e^{-βH} / Tr e^{-βH}` with `H = -sum_i g~_i`, by eigendecomposition.
pub fn boltzmann_density(h: &HypergraphSpec, thermal: &ThermalParams) -> Result<DenseMixedState> {
    let n = h.n();
    limit(n, MAX_GIBBS_QUBITS)?;
    let dim = 1usize << n;
    let mut hamiltonian = DMatrix::from_element(dim, dim, ZERO);
    for i in 1..=n {
        hamiltonian -= MonomialOp::hypergraph_generator(h, i)?.to_dense()?;
    }
    let eig = SymmetricEigen::new(hamiltonian);
    let ground = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let beta = thermal.beta();
    let weights: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&e| {
            if beta.is_infinite() {
                if (e - ground).abs() < 1e-9 {
                    1.0
                } else {
                    0.0
                }
            } else {
                (-beta * (e - ground)).exp()
            }
        })
        .collect();
    let z: f64 = weights.iter().sum();
    let mut scaled = eig.eigenvectors.clone();
    for (j, w) in weights.iter().enumerate() {
        let s = Complex64::new(w / z, 0.0);
        for v in scaled.column_mut(j).iter_mut() {
            *v *= s;
        }
    }
    Ok(DenseMixedState {
        n,
        matrix: scaled * eig.eigenvectors.adjoint(),
    })
}

/// `Tr[ρ · op]`. Fails if the imaginary part exceeds `1e-10`.
pub fn dense_expectation<'a>(rho: &DenseMixedState, op: impl Into<Operator<'a>>) -> Result<f64> {
    let value = op.into().to_monomial().trace_with(rho)?;
    if value.im.abs() > 1e-10 {
        return Err(Error::CheckFailed(format!(
            "expectation has imaginary part {}",
            value.im
        )));
    }
    Ok(value.re)
}

/// Whether `op |ψ> = |ψ>` within `1e-10`.
pub fn stabilizer_check<'a>(psi: &DenseState, op: impl Into<Operator<'a>>) -> bool {
    let op = op.into();
    if op.n() != psi.n() {
        return false;
    }
    op.to_monomial()
        .apply(psi)
        .map(|out| out.max_distance(psi) <= 1e-10)
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphSpec;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn pure_state_examples() {
        let s = build_pure_state(&HypergraphSpec::new(1, [], []).unwrap()).unwrap();
        let r = 0.5f64.sqrt();
        assert!(s.amplitudes().iter().all(|a| close(a.re, r, 1e-15)));

        let s = build_pure_state(&GraphSpec::new(2, [(1, 2)]).unwrap().into()).unwrap();
        let re: Vec<f64> = s.amplitudes().iter().map(|a| a.re).collect();
        assert_eq!(re, vec![0.5, 0.5, 0.5, -0.5]);

        let s = build_pure_state(&HypergraphSpec::new(3, [], [(1, 2, 3)]).unwrap()).unwrap();
        for (x, a) in s.amplitudes().iter().enumerate() {
            assert_eq!(a.re < 0.0, x == 0b111);
        }
        assert!(build_pure_state(&HypergraphSpec::new(25, [], []).unwrap()).is_err());
    }

    #[test]
    fn pauli_matrices() {
        // Y = [[0, -i], [i, 0]]
        let y = MonomialOp::pauli_y(1, 0).to_dense().unwrap();
        assert_eq!(y[(0, 1)], -I);
        assert_eq!(y[(1, 0)], I);
        // Y = i X Z
        let xz = MonomialOp::pauli_x(1, 0).compose(&MonomialOp::pauli_z(1, 0)).scaled(I);
        assert_eq!(xz, MonomialOp::pauli_y(1, 0));
    }

    #[test]
    fn dephased_single_qubit() {
        let h = HypergraphSpec::new(1, [], []).unwrap();
        let rho = thermal_density(&h, &ThermalParams::from_beta(0.0).unwrap()).unwrap();
        let m = rho.matrix();
        assert!(close(m[(0, 0)].re, 0.5, 1e-15) && close(m[(1, 1)].re, 0.5, 1e-15));
        assert!(m[(0, 1)].norm() < 1e-15 && m[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn zero_temperature_is_pure() {
        let h: HypergraphSpec = GraphSpec::ring(4).unwrap().into();
        let psi = build_pure_state(&h).unwrap();
        let rho = thermal_density(&h, &ThermalParams::zero_temperature()).unwrap();
        assert!(rho.max_entry_distance(&psi.projector().unwrap()) < 1e-15);
        let gibbs = boltzmann_density(&h, &ThermalParams::from_beta(30.0).unwrap()).unwrap();
        assert!(gibbs.max_entry_distance(&psi.projector().unwrap()) < 1e-8);
        let gibbs0 = boltzmann_density(&h, &ThermalParams::zero_temperature()).unwrap();
        assert!(gibbs0.max_entry_distance(&psi.projector().unwrap()) < 1e-10);
    }

    #[test]
    fn infinite_temperature_is_maximally_mixed() {
        let h = HypergraphSpec::new(3, [(1, 2)], [(1, 2, 3)]).unwrap();
        let rho = boltzmann_density(&h, &ThermalParams::from_beta(0.0).unwrap()).unwrap();
        let id = DMatrix::<Complex64>::identity(8, 8).scale(1.0 / 8.0);
        assert!((rho.matrix() - id).camax() < 1e-12);
    }

    #[test]
    fn path_graph_fidelity() {
        let h: HypergraphSpec = GraphSpec::path(4).unwrap().into();
        let th = ThermalParams::from_boltzmann_ratio(0.5).unwrap();
        let rho = thermal_density(&h, &th).unwrap();
        let f = rho.overlap(&build_pure_state(&h).unwrap()).unwrap();
        assert!(close(f, 1.0 / 1.5f64.powi(4), 1e-14), "{f}");
        let setting = crate::pauli::stabilizer_product(
            &GraphSpec::path(4).unwrap(),
            &"1100".parse().unwrap(),
        )
        .unwrap();
        assert!(close(dense_expectation(&rho, &setting).unwrap(), 1.0 / 9.0, 1e-14));
        assert!(close(
            dense_expectation(&rho, &PauliString::identity(4)).unwrap(),
            1.0,
            1e-14
        ));
    }

    #[test]
    fn stabilizer_check_examples() {
        let h = HypergraphSpec::new(5, [(1, 2), (4, 5)], [(1, 2, 3), (2, 4, 5)]).unwrap();
        let psi = build_pure_state(&h).unwrap();
        for i in 1..=5 {
            let g = crate::stabilizer::hypergraph_stabilizer(&h, i).unwrap();
            assert!(stabilizer_check(&psi, &g), "g~{i}");
        }
        let g = build_pure_state(&GraphSpec::new(2, [(1, 2)]).unwrap().into()).unwrap();
        assert!(!stabilizer_check(&g, &"XI".parse::<PauliString>().unwrap()));
        assert!(stabilizer_check(&g, &"XZ".parse::<PauliString>().unwrap()));
        assert!(!stabilizer_check(&g, &"XZI".parse::<PauliString>().unwrap()));
    }

    #[test]
    fn channel_matches_mask_sum() {
        // sum over all masks of Pr(mask) Z_mask |ψ><ψ| Z_mask
        let h = HypergraphSpec::new(4, [(1, 3)], [(2, 3, 4)]).unwrap();
        let th = ThermalParams::from_beta(0.35).unwrap();
        let p = th.p_flip;
        let psi = build_pure_state(&h).unwrap();
        let mut sum = DMatrix::from_element(16, 16, ZERO);
        for mask in 0usize..16 {
            let mut op = MonomialOp::identity(4);
            for q in 0..4 {
                if bit(mask, q) {
                    op = op.compose(&MonomialOp::pauli_z(4, q));
                }
            }
            let w = p.powi(mask.count_ones() as i32) * (1.0 - p).powi(4 - mask.count_ones() as i32);
            let flipped = op.apply(&psi).unwrap().projector().unwrap();
            sum += flipped.matrix.scale(w);
        }
        let rho = thermal_density(&h, &th).unwrap();
        assert!((rho.matrix() - sum).camax() < 1e-15);
        assert!(rho.min_eigenvalue() > -1e-12);
        assert!(rho.hermiticity_error() < 1e-15);
        assert!(close(rho.trace().re, 1.0, 1e-14));
    }
}
