//! Elements of `D(S*)` in von Neumann coordinates.

use crate::error::{Error, Result};
use crate::linalg::{CVec, C64, IM};

use super::lattice::LatticeVector;

/// A sequence `x` with `x₀ = 0`: no finite entry at position 0, left tails end
/// at `≤ −1`, right tails start at `≥ 1`. Such an `x` parametrizes
/// `u = (U − I)x ∈ D(S)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PuncturedSequence(LatticeVector);

impl PuncturedSequence {
    pub fn new(x: LatticeVector) -> Result<Self> {
        let hits_origin = x.support().contains_key(&0)
            || x.left_tails().iter().any(|t| t.start >= 0)
            || x.right_tails().iter().any(|t| t.start <= 0);
        if hits_origin {
            return Err(Error::NonzeroAtOrigin);
        }
        Ok(PuncturedSequence(x))
    }

    pub fn zero(dim: usize) -> Self {
        PuncturedSequence(LatticeVector::zero(dim))
    }

    pub fn as_lattice(&self) -> &LatticeVector {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

/// `ψ = u + f_i(a) + f_{−i}(b)` with `u = (U − I)x`, `f_i(a) = a@0`,
/// `f_{−i}(b) = b@1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainVector {
    pub xseq: PuncturedSequence,
    pub a: CVec,
    pub b: CVec,
}

impl DomainVector {
    pub fn new(xseq: PuncturedSequence, a: CVec, b: CVec) -> Result<Self> {
        let n = xseq.dim();
        for len in [a.len(), b.len()] {
            if len != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: len,
                });
            }
        }
        Ok(DomainVector { xseq, a, b })
    }

    /// A vector of `D(S)`.
    pub fn regular(xseq: PuncturedSequence) -> Self {
        let n = xseq.dim();
        DomainVector {
            xseq,
            a: CVec::zeros(n),
            b: CVec::zeros(n),
        }
    }

    pub fn from_defects(a: CVec, b: CVec) -> Result<Self> {
        Self::new(PuncturedSequence::zero(a.len()), a, b)
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// The `D(S)` component `u`.
    pub fn regular_part(&self) -> LatticeVector {
        let x = self.xseq.as_lattice();
        &x.shift(1) - x
    }

    /// The represented element of `l2(ℤ, N)`.
    pub fn materialize(&self) -> LatticeVector {
        let mut v = self.regular_part();
        v.add_entry(0, self.a.clone()).expect("dimension checked");
        v.add_entry(1, self.b.clone()).expect("dimension checked");
        v
    }

    pub fn scaled(&self, c: C64) -> Self {
        DomainVector {
            xseq: PuncturedSequence(self.xseq.0.scaled(c)),
            a: &self.a * c,
            b: &self.b * c,
        }
    }

    pub fn plus(&self, other: &DomainVector) -> Self {
        DomainVector {
            xseq: PuncturedSequence(self.xseq.0.plus(&other.xseq.0)),
            a: &self.a + &other.a,
            b: &self.b + &other.b,
        }
    }

    /// Unit-norm copy (unchanged if the vector is zero).
    pub fn normalized(&self) -> Self {
        let n = self.materialize().norm();
        if n > 0.0 {
            self.scaled(C64::from(1.0 / n))
        } else {
            self.clone()
        }
    }
}

/// `S*ψ = Su − i·f_i(a) + i·f_{−i}(b)`, where `S*f_i = −i f_i` and
/// `S*f_{−i} = i f_{−i}` because `𝔑_μ = ker(S* − μ̄)`.
pub fn apply_sstar(psi: &DomainVector) -> LatticeVector {
    let (_, mut out) = super::apply_cayley(psi.xseq.as_lattice());
    out.add_entry(0, &psi.a * (-IM)).expect("dimension checked");
    out.add_entry(1, &psi.b * IM).expect("dimension checked");
    out
}
