//! Circuit operators as dense matrices on a truncated number basis.
//!
//! Every operator is expressed in the number basis of the `R = 0` reference
//! oscillator with `omega0 = 1/sqrt(LC)`. In that basis
//!
//! ```text
//! q = sqrt(hbar / (2 L omega0)) (a + a†)
//! p = i sqrt(hbar L omega0 / 2) (a† - a)
//! ```
//!
//! Products such as `q²` are formed by multiplying the truncated matrices, so
//! the last row and column of each product differ from the infinite-basis
//! operator. Identity checks therefore look at the leading block only.

use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};
use crate::params::{CircuitParams, ParamTag};

/// Entrywise tolerance for the Hermiticity invariant.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Which number basis an operator is written in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BasisTag {
    /// Generic number basis: the ladder operators have the same matrix in
    /// every reference oscillator, so they combine with any tag.
    Number,
    /// Number basis of the reference oscillator with the given inductance
    /// ("mass") and frequency `omega0 = 1/sqrt(LC)`.
    Reference {
        inductance: f64,
        omega0: f64,
        hbar: f64,
    },
}

impl BasisTag {
    pub fn reference(params: &CircuitParams) -> Self {
        BasisTag::Reference {
            inductance: params.inductance,
            omega0: 1.0 / (params.inductance * params.capacitance).sqrt(),
            hbar: params.hbar,
        }
    }

    fn join(self, other: BasisTag) -> Result<BasisTag> {
        match (self, other) {
            (BasisTag::Number, tag) | (tag, BasisTag::Number) => Ok(tag),
            (a, b) if a == b => Ok(a),
            _ => Err(Error::BasisMismatch),
        }
    }
}

/// A finite square matrix standing in for a circuit operator.
#[derive(Clone, Debug)]
pub struct TruncatedOperator {
    entries: Mat<c64>,
    basis: BasisTag,
    hermitian: bool,
}

impl TruncatedOperator {
    /// Wraps a matrix that must be Hermitian within [`HERMITIAN_TOL`].
    pub fn hermitian(entries: Mat<c64>, basis: BasisTag) -> Result<Self> {
        let op = Self::general(entries, basis)?;
        let deviation = op.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self {
            hermitian: true,
            ..op
        })
    }

    /// Wraps an arbitrary square matrix, tagged non-Hermitian.
    pub fn general(entries: Mat<c64>, basis: BasisTag) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                left: entries.nrows(),
                right: entries.ncols(),
            });
        }
        if entries.nrows() < 2 {
            return Err(Error::InvalidDimension {
                dim: entries.nrows(),
            });
        }
        Ok(Self {
            entries,
            basis,
            hermitian: false,
        })
    }

    pub fn identity(dim: usize, basis: BasisTag) -> Result<Self> {
        check_dim(dim)?;
        Self::hermitian(Mat::identity(dim, dim), basis)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    /// True when the operator was built (and checked) as Hermitian.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn entries(&self) -> MatRef<'_, c64> {
        self.entries.as_ref()
    }

    pub fn get(&self, row: usize, col: usize) -> c64 {
        self.entries[(row, col)]
    }

    /// Largest `|A_ij - conj(A_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in j..n {
                let d = (self.entries[(i, j)] - self.entries[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Largest entry deviation from `other` over the leading `size × size` block.
    pub fn block_deviation(&self, other: &TruncatedOperator, size: usize) -> Result<f64> {
        self.compatible(other)?;
        let size = size.min(self.dim());
        let mut worst = 0.0f64;
        for j in 0..size {
            for i in 0..size {
                worst = worst.max((self.entries[(i, j)] - other.entries[(i, j)]).norm());
            }
        }
        Ok(worst)
    }

    pub fn adjoint(&self) -> TruncatedOperator {
        TruncatedOperator {
            entries: self.entries.adjoint().to_owned(),
            basis: self.basis,
            hermitian: self.hermitian,
        }
    }

    pub fn scale(&self, factor: f64) -> TruncatedOperator {
        TruncatedOperator {
            entries: Mat::from_fn(self.dim(), self.dim(), |i, j| self.entries[(i, j)] * factor),
            basis: self.basis,
            hermitian: self.hermitian,
        }
    }

    /// Multiplication by a complex scalar; the result is tagged non-Hermitian
    /// unless the scalar is real.
    pub fn scale_complex(&self, factor: c64) -> TruncatedOperator {
        TruncatedOperator {
            entries: Mat::from_fn(self.dim(), self.dim(), |i, j| self.entries[(i, j)] * factor),
            basis: self.basis,
            hermitian: self.hermitian && factor.im == 0.0,
        }
    }

    pub fn try_add(&self, other: &TruncatedOperator) -> Result<TruncatedOperator> {
        let basis = self.compatible(other)?;
        Ok(TruncatedOperator {
            entries: &self.entries + &other.entries,
            basis,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    pub fn try_sub(&self, other: &TruncatedOperator) -> Result<TruncatedOperator> {
        let basis = self.compatible(other)?;
        Ok(TruncatedOperator {
            entries: &self.entries - &other.entries,
            basis,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    /// Matrix product `self · other`, tagged non-Hermitian.
    pub fn try_mul(&self, other: &TruncatedOperator) -> Result<TruncatedOperator> {
        let basis = self.compatible(other)?;
        Ok(TruncatedOperator {
            entries: &self.entries * &other.entries,
            basis,
            hermitian: false,
        })
    }

    /// Re-tags the operator as Hermitian after checking the invariant.
    pub fn into_hermitian(self) -> Result<TruncatedOperator> {
        TruncatedOperator::hermitian(self.entries, self.basis)
    }

    fn compatible(&self, other: &TruncatedOperator) -> Result<BasisTag> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        self.basis.join(other.basis)
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        Err(Error::InvalidDimension { dim })
    } else {
        Ok(())
    }
}

/// Annihilation and creation operators on `dim` levels.
pub fn build_ladder(dim: usize) -> Result<(TruncatedOperator, TruncatedOperator)> {
    check_dim(dim)?;
    let a = Mat::from_fn(dim, dim, |i, j| {
        if j == i + 1 {
            c64::new((j as f64).sqrt(), 0.0)
        } else {
            c64::new(0.0, 0.0)
        }
    });
    let a = TruncatedOperator::general(a, BasisTag::Number)?;
    let a_dagger = a.adjoint();
    Ok((a, a_dagger))
}

/// Charge `q` and flux `p` in the reference basis of `params`.
pub fn build_quadratures(
    params: &CircuitParams,
    dim: usize,
) -> Result<(TruncatedOperator, TruncatedOperator)> {
    params.validate()?;
    let (a, a_dagger) = build_ladder(dim)?;
    let basis = BasisTag::reference(params);
    let omega0 = 1.0 / (params.inductance * params.capacitance).sqrt();
    let q_scale = (params.hbar / (2.0 * params.inductance * omega0)).sqrt();
    let p_scale = (params.hbar * params.inductance * omega0 / 2.0).sqrt();

    let q = a.try_add(&a_dagger)?.scale(q_scale);
    let p = a_dagger.try_sub(&a)?.scale_complex(c64::new(0.0, p_scale));
    let q = TruncatedOperator::hermitian(q.entries, basis)?;
    let p = TruncatedOperator::hermitian(p.entries, basis)?;
    Ok((q, p))
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &TruncatedOperator, b: &TruncatedOperator) -> Result<TruncatedOperator> {
    a.try_mul(b)?.try_sub(&b.try_mul(a)?)
}

/// The quadrature operators and their quadratic products in one frozen basis.
///
/// Hamiltonians and parameter derivatives for nearby parameter values are
/// assembled from the same `q²`, `p²` and `pq + qp` matrices, so derivatives
/// with respect to `L`, `C` or `R` act on the Hamiltonian's form and not on
/// the representation.
#[derive(Clone, Debug)]
pub struct QuadratureBasis {
    q: TruncatedOperator,
    p: TruncatedOperator,
    q_squared: TruncatedOperator,
    p_squared: TruncatedOperator,
    symmetrized: TruncatedOperator,
    hbar: f64,
}

impl QuadratureBasis {
    pub fn new(params: &CircuitParams, dim: usize) -> Result<Self> {
        let (q, p) = build_quadratures(params, dim)?;
        let q_squared = q.try_mul(&q)?.into_hermitian()?;
        let p_squared = p.try_mul(&p)?.into_hermitian()?;
        let pq = p.try_mul(&q)?;
        let symmetrized = pq.try_add(&pq.adjoint())?.into_hermitian()?;
        Ok(Self {
            q,
            p,
            q_squared,
            p_squared,
            symmetrized,
            hbar: params.hbar,
        })
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn basis(&self) -> BasisTag {
        self.q.basis()
    }

    pub fn q(&self) -> &TruncatedOperator {
        &self.q
    }

    pub fn p(&self) -> &TruncatedOperator {
        &self.p
    }

    pub fn q_squared(&self) -> &TruncatedOperator {
        &self.q_squared
    }

    pub fn p_squared(&self) -> &TruncatedOperator {
        &self.p_squared
    }

    /// `pq + qp`.
    pub fn symmetrized_product(&self) -> &TruncatedOperator {
        &self.symmetrized
    }

    /// `kinetic · p² + potential · q² + cross · (pq + qp)`.
    pub fn quadratic_form(&self, kinetic: f64, potential: f64, cross: f64) -> TruncatedOperator {
        let n = self.dim();
        let (p2, q2, s) = (
            self.p_squared.entries(),
            self.q_squared.entries(),
            self.symmetrized.entries(),
        );
        let entries = Mat::from_fn(n, n, |i, j| {
            p2[(i, j)] * kinetic + q2[(i, j)] * potential + s[(i, j)] * cross
        });
        TruncatedOperator {
            entries,
            basis: self.basis(),
            hermitian: true,
        }
    }

    /// Circuit Hamiltonian at arbitrary `(L, C, R)` in this frozen basis.
    ///
    /// Accepts stencil points the physical parameter type rejects, such as a
    /// slightly negative `R` when differentiating at `R = 0`.
    pub fn hamiltonian_at(&self, l: f64, c: f64, r: f64) -> TruncatedOperator {
        self.quadratic_form(0.5 / l, 0.5 / c, r / (2.0 * l))
    }

    pub fn hamiltonian(&self, params: &CircuitParams) -> TruncatedOperator {
        self.hamiltonian_at(params.inductance, params.capacitance, params.resistance)
    }

    /// `∂H/∂χ` at `(L, C, R)` with `q` and `p` held fixed.
    pub fn parameter_derivative_at(
        &self,
        l: f64,
        c: f64,
        r: f64,
        which: ParamTag,
    ) -> TruncatedOperator {
        match which {
            ParamTag::Inductance => self.quadratic_form(-0.5 / (l * l), 0.0, -r / (2.0 * l * l)),
            ParamTag::Capacitance => self.quadratic_form(0.0, -0.5 / (c * c), 0.0),
            ParamTag::Resistance => self.quadratic_form(0.0, 0.0, 0.5 / l),
        }
    }

    pub fn parameter_derivative(
        &self,
        params: &CircuitParams,
        which: ParamTag,
    ) -> TruncatedOperator {
        self.parameter_derivative_at(
            params.inductance,
            params.capacitance,
            params.resistance,
            which,
        )
    }

    /// The commutator bracket divided by `i hbar`:
    /// `(1/L + 1/C)(pq + qp) + (2R/L)(p² + q²)`.
    pub fn commutator_bracket(&self, params: &CircuitParams) -> TruncatedOperator {
        let (l, c, r) = (params.inductance, params.capacitance, params.resistance);
        let mixing = 2.0 * r / l;
        self.quadratic_form(mixing, mixing, 1.0 / l + 1.0 / c)
    }
}

/// `H = p²/(2L) + q²/(2C) + (R/2L)(pq + qp)` on `dim` levels.
pub fn build_hamiltonian(params: &CircuitParams, dim: usize) -> Result<TruncatedOperator> {
    Ok(QuadratureBasis::new(params, dim)?.hamiltonian(params))
}

/// `∂H/∂L`, `∂H/∂C` or `∂H/∂R` with the quadratures frozen at `params`.
pub fn build_parameter_derivative(
    params: &CircuitParams,
    dim: usize,
    which: ParamTag,
) -> Result<TruncatedOperator> {
    Ok(QuadratureBasis::new(params, dim)?.parameter_derivative(params, which))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(l: f64, c: f64, r: f64) -> CircuitParams {
        CircuitParams::new(l, c, r).unwrap()
    }

    #[test]
    fn ladder_two_levels() {
        let (a, ad) = build_ladder(2).unwrap();
        assert_eq!(a.get(0, 1), c64::new(1.0, 0.0));
        assert_eq!(a.get(1, 0), c64::new(0.0, 0.0));
        assert_eq!(a.get(0, 0), c64::new(0.0, 0.0));
        let number = ad.try_mul(&a).unwrap();
        assert_eq!(number.get(0, 0), c64::new(0.0, 0.0));
        assert_eq!(number.get(1, 1), c64::new(1.0, 0.0));
        assert_eq!(number.get(0, 1), c64::new(0.0, 0.0));
        assert!(!a.is_hermitian());
    }

    #[test]
    fn ladder_three_levels() {
        let (a, _) = build_ladder(3).unwrap();
        assert!((a.get(1, 2).re - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(a.get(0, 1).re, 1.0);
        for i in 0..3 {
            for j in 0..3 {
                if j != i + 1 {
                    assert_eq!(a.get(i, j), c64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn ladder_rejects_tiny_dimension() {
        assert!(matches!(
            build_ladder(1),
            Err(Error::InvalidDimension { dim: 1 })
        ));
        assert!(matches!(
            build_ladder(0),
            Err(Error::InvalidDimension { dim: 0 })
        ));
    }

    #[test]
    fn quadrature_scales() {
        let (q, _) = build_quadratures(&unit(1.0, 1.0, 0.0), 4).unwrap();
        assert!((q.get(0, 1).re - 0.5f64.sqrt()).abs() < 1e-15);
        let (q, _) = build_quadratures(&unit(2.0, 0.5, 0.0), 4).unwrap();
        assert!((q.get(0, 1).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn canonical_commutator_leading_block() {
        let params = CircuitParams::with_units(1.3, 0.7, 0.2, 0.8, 1.0).unwrap();
        let n = 16;
        let (q, p) = build_quadratures(&params, n).unwrap();
        let qp = commutator(&q, &p).unwrap();
        let target = TruncatedOperator::identity(n, BasisTag::Number)
            .unwrap()
            .scale_complex(c64::new(0.0, params.hbar));
        assert!(qp.block_deviation(&target, n - 1).unwrap() < 1e-12);
        // the last diagonal entry carries the truncation defect
        assert!((qp.get(n - 1, n - 1) - c64::new(0.0, params.hbar)).norm() > 1.0);
    }

    #[test]
    fn self_commutator_vanishes() {
        let h = build_hamiltonian(&unit(1.0, 2.0, 0.3), 12).unwrap();
        let zero = commutator(&h, &h).unwrap();
        for i in 0..12 {
            for j in 0..12 {
                assert_eq!(zero.get(i, j).norm(), 0.0);
            }
        }
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        for &(l, c, r) in &[(1.0, 1.0, 0.5), (0.5, 2.0, 0.45), (2.0, 0.5, 1.7)] {
            let h = build_hamiltonian(&unit(l, c, r), 64).unwrap();
            assert!(h.is_hermitian());
            assert!(h.hermitian_deviation() < 1e-12);
        }
    }

    #[test]
    fn undamped_hamiltonian_is_diagonal_number_ladder() {
        let n = 40;
        let h = build_hamiltonian(&unit(1.0, 1.0, 0.0), n).unwrap();
        for k in 0..n - 1 {
            assert!((h.get(k, k).re - (k as f64 + 0.5)).abs() < 1e-12);
        }
        assert!(h.get(0, 2).norm() < 1e-15);
    }

    #[test]
    fn derivative_operators_match_definitions() {
        let params = unit(1.0, 1.0, 0.5);
        let basis = QuadratureBasis::new(&params, 10).unwrap();
        let d_r = basis.parameter_derivative(&params, ParamTag::Resistance);
        let half_sym = basis.symmetrized_product().scale(0.5);
        assert!(d_r.block_deviation(&half_sym, 10).unwrap() < 1e-15);

        let d_c = basis.parameter_derivative(&params, ParamTag::Capacitance);
        let minus_half_q2 = basis.q_squared().scale(-0.5);
        assert!(d_c.block_deviation(&minus_half_q2, 10).unwrap() < 1e-15);
    }

    #[test]
    fn inductance_derivative_matches_finite_difference() {
        let params = unit(1.2, 0.8, 0.3);
        let basis = QuadratureBasis::new(&params, 24).unwrap();
        let (l, c, r) = (1.2, 0.8, 0.3);
        let analytic = basis.parameter_derivative_at(l, c, r, ParamTag::Inductance);
        let mut errors = Vec::new();
        for &h in &[1e-2, 5e-3] {
            let hp = basis.hamiltonian_at(l + h, c, r);
            let hm = basis.hamiltonian_at(l - h, c, r);
            let fd = hp.try_sub(&hm).unwrap().scale(0.5 / h);
            errors.push(fd.block_deviation(&analytic, 24).unwrap());
        }
        // central differences: halving h quarters the error
        assert!(errors[1] < errors[0] / 3.5, "{errors:?}");
        assert!(errors[1] < 1e-3);
    }

    #[test]
    fn mismatched_operators_refuse_to_combine() {
        let (q4, _) = build_quadratures(&unit(1.0, 1.0, 0.0), 4).unwrap();
        let (q5, _) = build_quadratures(&unit(1.0, 1.0, 0.0), 5).unwrap();
        assert!(matches!(
            q4.try_add(&q5),
            Err(Error::DimensionMismatch { .. })
        ));
        let (other, _) = build_quadratures(&unit(2.0, 1.0, 0.0), 4).unwrap();
        assert!(matches!(commutator(&q4, &other), Err(Error::BasisMismatch)));
        let (a, _) = build_ladder(4).unwrap();
        assert!(a.try_add(&q4).is_ok());
    }

    #[test]
    fn commutator_identity_with_hbar() {
        let params = unit(1.0, 2.0, 0.3);
        let n = 64;
        let basis = QuadratureBasis::new(&params, n).unwrap();
        let h = basis.hamiltonian(&params);
        let diff = basis.q_squared().try_sub(basis.p_squared()).unwrap();
        let lhs = commutator(&diff, &h).unwrap();
        let rhs = basis
            .commutator_bracket(&params)
            .scale_complex(c64::new(0.0, params.hbar));
        assert!(lhs.block_deviation(&rhs, n / 2).unwrap() < 1e-10);
    }

    #[test]
    fn commutator_identity_in_si_like_units() {
        let params = CircuitParams::with_units(0.7, 1.9, 0.2, 0.35, 1.0).unwrap();
        let n = 64;
        let basis = QuadratureBasis::new(&params, n).unwrap();
        let diff = basis.q_squared().try_sub(basis.p_squared()).unwrap();
        let lhs = commutator(&diff, &basis.hamiltonian(&params)).unwrap();
        let rhs = basis
            .commutator_bracket(&params)
            .scale_complex(c64::new(0.0, params.hbar));
        assert!(lhs.block_deviation(&rhs, n / 2).unwrap() < 1e-10);
    }
}
