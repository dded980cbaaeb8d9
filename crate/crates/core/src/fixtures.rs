//! Built-in structures.

use crate::error::{Error, Result};
use crate::hermitian::{AlmostComplexStructure, HermitianTriple, InvariantMetric};
use crate::lie::LieAlgebra;
use crate::scalar::rat;
use crate::tensor::RealTensor;

pub const EXAMPLE_NAMES: [&str; 5] = ["iwasawa_g0", "iwasawa_alt", "kodaira_thurston", "flat_torus_4", "flat_torus_6"];

/// `[X1,X2]=X3, [X4,X5]=−X3, [X2,X4]=X6, [X5,X1]=X6`.
pub fn iwasawa_algebra() -> LieAlgebra {
    LieAlgebra::from_brackets(
        6,
        &[(0, 1, 2, rat(1)), (3, 4, 2, rat(-1)), (1, 3, 5, rat(1)), (4, 0, 5, rat(1))],
    )
    .expect("valid constants")
}

/// Dual to the coframe with `dα1 = dα3 = −α12 + α45 − α23 + α56`,
/// `dα2 = dα5 = 0`, `dα4 = dα6 = −α24 + α15 − α35 + α26`.
pub fn iwasawa_alt_algebra() -> LieAlgebra {
    let mut e = Vec::new();
    // X1 + X3 from [X1,X2], [X2,X3] and −(X1 + X3) from [X4,X5], [X5,X6].
    for (a, b, s) in [(0, 1, 1), (1, 2, 1), (3, 4, -1), (4, 5, -1)] {
        e.push((a, b, 0, rat(s)));
        e.push((a, b, 2, rat(s)));
    }
    // X4 + X6 from [X2,X4], [X3,X5] and −(X4 + X6) from [X1,X5], [X2,X6].
    for (a, b, s) in [(1, 3, 1), (2, 4, 1), (0, 4, -1), (1, 5, -1)] {
        e.push((a, b, 3, rat(s)));
        e.push((a, b, 5, rat(s)));
    }
    LieAlgebra::from_brackets(6, &e).expect("valid constants")
}

/// `[X1,X2] = X3` in dimension 4.
pub fn kodaira_thurston_algebra() -> LieAlgebra {
    LieAlgebra::from_brackets(4, &[(0, 1, 2, rat(1))]).expect("valid constants")
}

/// `Σ α_i ∧ α_{i+n}` as a matrix.
pub fn omega_standard(dim: usize) -> RealTensor {
    let n = dim / 2;
    let mut w = RealTensor::real_zeros(&[dim, dim]);
    for i in 0..n {
        w.set(&[i, i + n], rat(1));
        w.set(&[i + n, i], rat(-1));
    }
    w
}

fn standard_triple(alg: LieAlgebra) -> HermitianTriple {
    let d = alg.dim();
    HermitianTriple::new(alg, AlmostComplexStructure::standard(d), InvariantMetric::identity(d)).expect("compatible")
}

pub fn iwasawa_g0() -> HermitianTriple {
    standard_triple(iwasawa_algebra())
}

pub fn iwasawa_alt() -> HermitianTriple {
    standard_triple(iwasawa_alt_algebra())
}

/// `J X1 = X3`, `J X2 = X4`, tamed by `ω = α13 + α24`.
pub fn kodaira_thurston() -> HermitianTriple {
    HermitianTriple::from_taming(kodaira_thurston_algebra(), AlmostComplexStructure::standard(4), &omega_standard(4))
        .expect("tamed")
}

pub fn flat_torus(dim: usize) -> HermitianTriple {
    standard_triple(LieAlgebra::abelian(dim))
}

pub fn builtin(name: &str) -> Result<HermitianTriple> {
    match name {
        "iwasawa_g0" => Ok(iwasawa_g0()),
        "iwasawa_alt" => Ok(iwasawa_alt()),
        "kodaira_thurston" => Ok(kodaira_thurston()),
        "flat_torus_4" => Ok(flat_torus(4)),
        "flat_torus_6" => Ok(flat_torus(6)),
        _ => Err(Error::UnknownExample(name.to_string())),
    }
}
