//! The (max, +) semiring: scalars, square matrices, and event graphs with
//! cycle-ratio spectral computation.
//!
//! Values live in `ℝ ∪ {−∞}` with `a ⊕ b = max(a, b)` and `a ⊗ b = a + b`.
//! `−∞` is the additive identity and absorbs under `⊗`. The scalar type is
//! generic; see [`crate::scalar::TropScalar`].

mod cycle;
mod graph;

pub use cycle::{enumerate_cycle_ratios, howard, karp, HowardSolution, RatioEdge};
pub use graph::{EventEdge, EventGraph, GraphError};

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::scalar::TropScalar;

/// A max-plus scalar: either `−∞` or a finite value of type `T`.
///
/// The additive identity is a dedicated variant rather than a large
/// negative sentinel, so no arithmetic can leak it into finite results.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub enum Trop<T> {
    /// `−∞`, the identity of `⊕` and absorbing element of `⊗`.
    NegInf,
    Finite(T),
}

impl<T: TropScalar> Trop<T> {
    /// Wraps a finite value. Panics on invalid scalars (NaN for floats).
    pub fn finite(value: T) -> Self {
        assert!(value.is_valid(), "tropical values must not be NaN");
        Trop::Finite(value)
    }

    /// The `⊕`-identity, `−∞`.
    pub fn zero() -> Self {
        Trop::NegInf
    }

    /// The `⊗`-identity, `0`.
    pub fn one() -> Self
    where
        T: Zero,
    {
        Trop::Finite(T::zero())
    }

    pub fn is_neg_inf(&self) -> bool {
        matches!(self, Trop::NegInf)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Trop::Finite(_))
    }

    /// The finite value, if any.
    pub fn value(&self) -> Option<&T> {
        match self {
            Trop::NegInf => None,
            Trop::Finite(v) => Some(v),
        }
    }

    /// Tropical addition: `max(self, rhs)`, with `−∞` as identity.
    pub fn oplus(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Trop::NegInf, b) => b,
            (a, Trop::NegInf) => a,
            (Trop::Finite(a), Trop::Finite(b)) => {
                if a >= b {
                    Trop::Finite(a)
                } else {
                    Trop::Finite(b)
                }
            }
        }
    }

    /// Tropical multiplication: `self + rhs`, with `−∞` absorbing.
    pub fn otimes(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Trop::Finite(a), Trop::Finite(b)) => Trop::Finite(a + b),
            _ => Trop::NegInf,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Trop<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trop::NegInf => write!(f, "-inf"),
            Trop::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// Errors from matrix-shape mismatches.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("matrix dimensions do not match: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("rows of unequal length cannot form a square matrix")]
    RaggedRows,
}

/// Square matrix over the max-plus semiring, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TropMatrix<T> {
    dim: usize,
    entries: Vec<Trop<T>>,
}

impl<T: TropScalar> TropMatrix<T> {
    /// A `dim × dim` matrix with every entry `−∞`.
    pub fn neg_inf(dim: usize) -> Self {
        TropMatrix {
            dim,
            entries: vec![Trop::NegInf; dim * dim],
        }
    }

    /// The `⊗`-identity: `0` on the diagonal, `−∞` elsewhere.
    pub fn identity(dim: usize) -> Self
    where
        T: Zero,
    {
        let mut m = Self::neg_inf(dim);
        for i in 0..dim {
            m.set(i, i, Trop::one());
        }
        m
    }

    /// Builds a square matrix from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Trop<T>>>) -> Result<Self, AlgebraError> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(AlgebraError::RaggedRows);
        }
        Ok(TropMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Trop<T> {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Trop<T>) {
        self.entries[i * self.dim + j] = v;
    }

    /// Tropical matrix product: `(A ⊗ B)_{ij} = ⊕_k A_{ik} ⊗ B_{kj}`.
    pub fn mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if self.dim != rhs.dim {
            return Err(AlgebraError::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::neg_inf(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Trop::NegInf;
                for k in 0..n {
                    acc = acc.oplus(self.get(i, k).clone().otimes(rhs.get(k, j).clone()));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Applies the matrix to a vector: `(A ⊗ u)_i = ⊕_k A_{ik} ⊗ u_k`.
    pub fn apply(&self, u: &[Trop<T>]) -> Result<Vec<Trop<T>>, AlgebraError> {
        if u.len() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                left: self.dim,
                right: u.len(),
            });
        }
        Ok((0..self.dim)
            .map(|i| {
                let mut acc = Trop::NegInf;
                for k in 0..self.dim {
                    acc = acc.oplus(self.get(i, k).clone().otimes(u[k].clone()));
                }
                acc
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(v: f64) -> Trop<f64> {
        Trop::finite(v)
    }

    #[test]
    fn oplus_takes_the_max() {
        assert_eq!(t(3.0).oplus(t(5.0)), t(5.0));
        assert_eq!(Trop::NegInf.oplus(t(7.0)), t(7.0));
        assert_eq!(t(-2.0).oplus(t(-2.0)), t(-2.0));
    }

    #[test]
    fn otimes_adds_and_absorbs() {
        assert_eq!(t(3.0).otimes(t(5.0)), t(8.0));
        assert_eq!(t(0.0).otimes(t(9.0)), t(9.0));
        assert_eq!(Trop::NegInf.otimes(t(9.0)), Trop::<f64>::NegInf);
    }

    #[test]
    #[should_panic(expected = "NaN")]
    fn nan_is_rejected_at_construction() {
        let _ = Trop::finite(f64::NAN);
    }

    #[test]
    fn identity_matrix_is_neutral() {
        let id = TropMatrix::<f64>::identity(4);
        let mut a = TropMatrix::neg_inf(4);
        for i in 0..4 {
            for j in 0..4 {
                a.set(i, j, t((i * 4 + j) as f64 * 1.5 - 7.0));
            }
        }
        assert_eq!(id.mul(&a).unwrap(), a);
        assert_eq!(a.mul(&id).unwrap(), a);
    }

    #[test]
    fn two_by_two_square_expands_by_hand() {
        let a = TropMatrix::from_rows(vec![
            vec![Trop::NegInf, t(1.0)],
            vec![t(2.0), Trop::NegInf],
        ])
        .unwrap();
        let sq = a.mul(&a).unwrap();
        let expected = TropMatrix::from_rows(vec![
            vec![t(3.0), Trop::NegInf],
            vec![Trop::NegInf, t(3.0)],
        ])
        .unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = TropMatrix::<f64>::neg_inf(2);
        let b = TropMatrix::<f64>::neg_inf(3);
        assert!(matches!(
            a.mul(&b),
            Err(AlgebraError::DimensionMismatch { left: 2, right: 3 })
        ));
    }

    /// Integer-valued scalars make `⊗` chains exact, so associativity can be
    /// asserted with equality rather than a tolerance.
    fn arb_int_trop() -> impl Strategy<Value = Trop<i64>> {
        prop_oneof![
            1 => Just(Trop::NegInf),
            9 => (-1000i64..1000).prop_map(Trop::Finite),
        ]
    }

    fn arb_int_matrix(dim: usize) -> impl Strategy<Value = TropMatrix<i64>> {
        proptest::collection::vec(arb_int_trop(), dim * dim)
            .prop_map(move |entries| TropMatrix { dim, entries })
    }

    proptest! {
        #[test]
        fn scalar_semiring_laws(a in arb_int_trop(), b in arb_int_trop(), c in arb_int_trop()) {
            prop_assert_eq!(a.oplus(b), b.oplus(a));
            prop_assert_eq!(a.oplus(b).oplus(c), a.oplus(b.oplus(c)));
            prop_assert_eq!(a.oplus(a), a);
            prop_assert_eq!(a.otimes(b.oplus(c)), a.otimes(b).oplus(a.otimes(c)));
            prop_assert_eq!(a.otimes(b).otimes(c), a.otimes(b.otimes(c)));
            prop_assert_eq!(Trop::NegInf.oplus(a), a);
            prop_assert_eq!(Trop::NegInf.otimes(a), Trop::NegInf);
        }

        #[test]
        fn matrix_product_is_associative(
            a in arb_int_matrix(5),
            b in arb_int_matrix(5),
            c in arb_int_matrix(5),
        ) {
            let left = a.mul(&b).unwrap().mul(&c).unwrap();
            let right = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        /// The one-Lipschitz bound behind delay non-amplification:
        /// `‖A⊗u − A⊗v‖_∞ ≤ ‖u − v‖_∞` for finite vectors.
        #[test]
        fn matrix_apply_is_one_lipschitz(
            a in arb_int_matrix(4),
            u in proptest::collection::vec(-1000i64..1000, 4),
            v in proptest::collection::vec(-1000i64..1000, 4),
        ) {
            // Rows that are all −∞ map to −∞ for every input; skip those.
            let usable = (0..4).filter(|&i| (0..4).any(|k| a.get(i, k).is_finite()));
            let tu: Vec<_> = u.iter().map(|&x| Trop::Finite(x)).collect();
            let tv: Vec<_> = v.iter().map(|&x| Trop::Finite(x)).collect();
            let au = a.apply(&tu).unwrap();
            let av = a.apply(&tv).unwrap();
            let input_gap = u
                .iter()
                .zip(&v)
                .map(|(x, y)| (x - y).abs())
                .max()
                .unwrap();
            for i in usable {
                let x = au[i].value().unwrap();
                let y = av[i].value().unwrap();
                prop_assert!((x - y).abs() <= input_gap);
            }
        }
    }
}
