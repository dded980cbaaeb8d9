//! Per-structure pipeline with lazily computed, shared intermediate results.

use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::connection::{canonical_connection_with, levi_civita, Connection, CovariantNijenhuisDerivative};
use crate::curvature::{
    complex_frame_scalar_gap, curvature, first_bianchi_defect, gray_flags, nabla_omega_norm, scalar_invariants,
    tosatti_tensor, w4_projection, CurvatureTensor, GrayFlags, ScalarInvariants, TosattiTensor, TriState,
};
use crate::hermitian::{classify_with, nijenhuis_tensor, Classification, ComplexFrame, HermitianTriple, Variance};
use crate::scalar::{serde_str, GaussianRational, Rational};
use crate::tensor::{ComplexTensor, RealTensor};

pub struct Analysis {
    triple: HermitianTriple,
    frame: ComplexFrame,
    nijenhuis: OnceLock<RealTensor>,
    nijenhuis_frame: OnceLock<ComplexTensor>,
    classification: OnceLock<Classification>,
    lc: OnceLock<Connection>,
    canonical: OnceLock<Connection>,
    riemann: OnceLock<CurvatureTensor>,
    hermitian: OnceLock<CurvatureTensor>,
    riemann_frame: OnceLock<ComplexTensor>,
    hermitian_frame: OnceLock<ComplexTensor>,
    f: OnceLock<CovariantNijenhuisDerivative>,
    f_frame: OnceLock<ComplexTensor>,
    scalars: OnceLock<ScalarInvariants>,
}

impl Analysis {
    pub fn new(triple: HermitianTriple) -> Self {
        let frame = ComplexFrame::standard(&triple);
        Self::with_frame(triple, frame)
    }

    pub fn with_frame(triple: HermitianTriple, frame: ComplexFrame) -> Self {
        Analysis {
            triple,
            frame,
            nijenhuis: OnceLock::new(),
            nijenhuis_frame: OnceLock::new(),
            classification: OnceLock::new(),
            lc: OnceLock::new(),
            canonical: OnceLock::new(),
            riemann: OnceLock::new(),
            hermitian: OnceLock::new(),
            riemann_frame: OnceLock::new(),
            hermitian_frame: OnceLock::new(),
            f: OnceLock::new(),
            f_frame: OnceLock::new(),
            scalars: OnceLock::new(),
        }
    }

    pub fn triple(&self) -> &HermitianTriple {
        &self.triple
    }

    pub fn frame(&self) -> &ComplexFrame {
        &self.frame
    }

    pub fn n(&self) -> usize {
        self.frame.n()
    }

    pub fn nijenhuis(&self) -> &RealTensor {
        self.nijenhuis.get_or_init(|| nijenhuis_tensor(&self.triple))
    }

    /// Axes `(Lower, Lower, Upper)` in the frame.
    pub fn nijenhuis_frame(&self) -> &ComplexTensor {
        self.nijenhuis_frame.get_or_init(|| {
            self.frame
                .complexify(self.nijenhuis(), &[Variance::Lower, Variance::Lower, Variance::Upper])
                .expect("rank 3")
        })
    }

    pub fn classification(&self) -> Classification {
        *self.classification.get_or_init(|| classify_with(&self.triple, self.nijenhuis()))
    }

    pub fn levi_civita(&self) -> &Connection {
        self.lc.get_or_init(|| levi_civita(&self.triple))
    }

    pub fn canonical(&self) -> &Connection {
        self.canonical.get_or_init(|| {
            canonical_connection_with(&self.triple, self.levi_civita(), self.classification().quasi_kahler)
        })
    }

    pub fn riemann(&self) -> &CurvatureTensor {
        self.riemann
            .get_or_init(|| curvature(self.levi_civita(), self.triple.algebra(), self.triple.metric()))
    }

    pub fn hermitian(&self) -> &CurvatureTensor {
        self.hermitian.get_or_init(|| curvature(self.canonical(), self.triple.algebra(), self.triple.metric()))
    }

    pub fn riemann_frame(&self) -> &ComplexTensor {
        self.riemann_frame.get_or_init(|| self.riemann().in_frame(&self.frame))
    }

    pub fn hermitian_frame(&self) -> &ComplexTensor {
        self.hermitian_frame.get_or_init(|| self.hermitian().in_frame(&self.frame))
    }

    pub fn nijenhuis_derivative(&self) -> &CovariantNijenhuisDerivative {
        self.f
            .get_or_init(|| CovariantNijenhuisDerivative::new(self.levi_civita(), &self.triple, self.nijenhuis()))
    }

    pub fn nijenhuis_derivative_frame(&self) -> &ComplexTensor {
        self.f_frame.get_or_init(|| self.nijenhuis_derivative().in_frame(&self.frame))
    }

    pub fn scalars(&self) -> &ScalarInvariants {
        self.scalars.get_or_init(|| scalar_invariants(self.riemann(), &self.triple))
    }

    pub fn hermitian_bianchi_zero(&self) -> bool {
        first_bianchi_defect(self.hermitian()).is_zero()
    }

    pub fn tosatti(&self) -> TosattiTensor {
        tosatti_tensor(self.hermitian_frame(), self.nijenhuis_frame(), &self.frame)
    }

    pub fn curvature_report(&self) -> CurvatureReport {
        let sc = self.scalars();
        let tosatti = self.tosatti();
        CurvatureReport {
            s: sc.s.clone(),
            s_star: sc.s_star.clone(),
            ricci: sc.ricci.clone(),
            ricci_star: sc.ricci_star.clone(),
            nabla_omega_sq: nabla_omega_norm(self.levi_civita(), &self.triple),
            complex_frame_gap: complex_frame_scalar_gap(self.riemann_frame(), &self.frame),
            gray: FlavorPair {
                riemann: gray_flags(self.riemann_frame(), self.n()),
                hermitian: gray_flags(self.hermitian_frame(), self.n()),
            },
            bianchi_defect_zero: FlavorPair {
                riemann: first_bianchi_defect(self.riemann()).is_zero(),
                hermitian: self.hermitian_bianchi_zero(),
            },
            w4: w4_projection(&sc.s, &sc.s_star, self.n()).ok(),
            tosatti_vanishes: tosatti.vanishes(),
            tosatti_nonneg: tosatti.nonnegativity(),
            tosatti_nonneg_form: TOSATTI_PROBE_FORM,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FlavorPair<T> {
    pub riemann: T,
    pub hermitian: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureReport {
    #[serde(with = "serde_str")]
    pub s: Rational,
    #[serde(with = "serde_str")]
    pub s_star: Rational,
    #[serde(serialize_with = "matrix_strings")]
    pub ricci: RealTensor,
    #[serde(serialize_with = "matrix_strings")]
    pub ricci_star: RealTensor,
    #[serde(with = "serde_str")]
    pub nabla_omega_sq: Rational,
    /// `4 Σ R(Z_i,Z_j,conj Z_k,conj Z_l) M^{ik} M^{jl}`; equals `s* − s`.
    #[serde(serialize_with = "serde_str::serialize_gaussian")]
    pub complex_frame_gap: GaussianRational,
    pub gray: FlavorPair<GrayFlags>,
    pub bianchi_defect_zero: FlavorPair<bool>,
    /// Absent in complex dimension one.
    #[serde(serialize_with = "optional_rational")]
    pub w4: Option<Rational>,
    pub tosatti_vanishes: bool,
    /// Depends on the chosen quadratic form; `undetermined` when no probe decides it.
    pub tosatti_nonneg: TriState,
    /// The quadratic form `tosatti_nonneg` was evaluated with.
    pub tosatti_nonneg_form: &'static str,
}

pub const TOSATTI_PROBE_FORM: &str = "v^i conj(w^j) v^k conj(w^l) on probe vectors (convention-dependent)";

pub(crate) fn matrix_strings<S: Serializer>(m: &RealTensor, s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = m.rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    rows.serialize(s)
}

fn optional_rational<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    r.as_ref().map(ToString::to_string).serialize(s)
}
