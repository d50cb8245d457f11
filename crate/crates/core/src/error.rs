use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("singular matrix: pivot {pivot:.3e} below threshold {threshold:.3e}")]
    SingularMatrix { pivot: f64, threshold: f64 },
    #[error("element is not factorizable")]
    NotFactorizable,
    #[error("matrix does not lie in the span of the basis (residual {residual:.3e})")]
    BasisExpansionFailure { residual: f64 },
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("constraint is not second class at this point")]
    NotSecondClass,
    #[error("eta_minus is not a character (max |<eta, [T^a, T^b]>| = {defect:.3e})")]
    NotCharacter { defect: f64 },
    #[error("point is not on the requested level set (residual {residual:.3e})")]
    NotOnLevelSet { residual: f64 },
    #[error("singular configuration: |beta| = {beta_norm:.3e}")]
    SingularConfiguration { beta_norm: f64 },
    #[error("matrix is not unimodular: |det - 1| = {defect:.3e}")]
    NotUnimodular { defect: f64 },
    #[error("unknown tolerance name: {0}")]
    UnknownTolerance(String),
    #[error("tolerance {name} must be positive and finite, got {value}")]
    InvalidTolerance { name: String, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
