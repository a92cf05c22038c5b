//! Operator families `{Φ_i : H -> K_i}` and the systems built from them.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexVector, OperatorMatrix, C64};

/// A finite indexed family of operators from the ambient space `C^n` into
/// subspaces `C^{d_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GOperatorFamily {
    ambient_dim: usize,
    operators: Vec<OperatorMatrix>,
}

impl GOperatorFamily {
    pub fn new(ambient_dim: usize, operators: Vec<OperatorMatrix>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::ShapeMismatch("ambient dimension must be positive".into()));
        }
        for (i, op) in operators.iter().enumerate() {
            if op.ncols() != ambient_dim {
                return Err(Error::ShapeMismatch(format!(
                    "operator {}: expected {} columns, found {}",
                    i + 1,
                    ambient_dim,
                    op.ncols()
                )));
            }
            if op.nrows() == 0 {
                return Err(Error::ShapeMismatch(format!("operator {}: empty codomain", i + 1)));
            }
            linalg::ensure_finite(op, &format!("operator {}", i + 1))?;
        }
        Ok(Self { ambient_dim, operators })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn subspace_dims(&self) -> Vec<usize> {
        self.operators.iter().map(|op| op.nrows()).collect()
    }

    pub fn operators(&self) -> &[OperatorMatrix] {
        &self.operators
    }

    pub fn operator(&self, i: usize) -> &OperatorMatrix {
        &self.operators[i]
    }

    pub fn into_operators(self) -> Vec<OperatorMatrix> {
        self.operators
    }

    /// Family `{Φ_i W}` for an operator `W` on the ambient space.
    pub fn compose_right(&self, w: &OperatorMatrix) -> Result<Self> {
        let n = linalg::ensure_square(w)?;
        if n != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: n });
        }
        Self::new(n, self.operators.iter().map(|op| op * w).collect())
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self {
            ambient_dim: self.ambient_dim,
            operators: self.operators.iter().map(|op| op * c).collect(),
        }
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.subspace_dims() == other.subspace_dims()
    }

    /// Analysis map `x -> (Φ_i x)_i` into the direct sum of the subspaces.
    pub fn analyze(&self, x: &ComplexVector) -> Result<DirectSumVector> {
        if x.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: x.len() });
        }
        Ok(DirectSumVector { blocks: self.operators.iter().map(|op| op * x).collect() })
    }
}

/// Element of the finite direct sum `⊕ K_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectSumVector {
    pub blocks: Vec<ComplexVector>,
}

impl DirectSumVector {
    /// Block-wise inner product, linear in `self`.
    pub fn inner(&self, other: &DirectSumVector) -> C64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(u, v)| linalg::inner(u, v))
            .sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.blocks.iter().map(|b| b.norm_squared()).sum()
    }
}

/// A pair of matching families `(Φ, Ψ)` with the operator `K` on the ambient
/// space.
#[derive(Debug, Clone, PartialEq)]
pub struct BiGFrameSystem {
    pub phi: GOperatorFamily,
    pub psi: GOperatorFamily,
    pub k_op: OperatorMatrix,
}

impl BiGFrameSystem {
    pub fn new(phi: GOperatorFamily, psi: GOperatorFamily, k_op: OperatorMatrix) -> Result<Self> {
        if !phi.same_shape(&psi) {
            return Err(Error::ShapeMismatch(format!(
                "phi dims {:?} on C^{} vs psi dims {:?} on C^{}",
                phi.subspace_dims(),
                phi.ambient_dim(),
                psi.subspace_dims(),
                psi.ambient_dim()
            )));
        }
        let n = phi.ambient_dim();
        if k_op.shape() != (n, n) {
            return Err(Error::ShapeMismatch(format!(
                "K must be {n}x{n}, found {}x{}",
                k_op.nrows(),
                k_op.ncols()
            )));
        }
        linalg::ensure_finite(&k_op, "K")?;
        Ok(Self { phi, psi, k_op })
    }

    pub fn ambient_dim(&self) -> usize {
        self.phi.ambient_dim()
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn with_k(&self, k_op: OperatorMatrix) -> Result<Self> {
        Self::new(self.phi.clone(), self.psi.clone(), k_op)
    }

    /// `K K*`.
    pub fn k_gram(&self) -> OperatorMatrix {
        &self.k_op * self.k_op.adjoint()
    }
}

pub(crate) fn zeros(n: usize) -> OperatorMatrix {
    DMatrix::zeros(n, n)
}
