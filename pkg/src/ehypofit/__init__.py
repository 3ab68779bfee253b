"""ehypofit - Exponentiated Hypoexponential distributions and their maximum-likelihood fitting."""

from ehypofit.datasets import load_bladder_cancer
from ehypofit.distributions import (
    ExponentiatedDistribution,
    ee_cdf,
    ee_hazard,
    ee_pdf,
    ee_survival,
    exp_cdf,
    exponentiate_cdf,
    exponentiate_hazard,
    exponentiate_pdf,
    exponentiate_survival,
    hypo_cdf,
    hypo_coefficients,
    hypo_hazard,
    hypo_pdf,
    hypo_survival,
)
from ehypofit.ehypo import (
    EHypoSampler,
    ehypo_cdf,
    ehypo_expansion,
    ehypo_expansion_cdf,
    ehypo_expansion_pdf,
    ehypo_expansion_survival,
    ehypo_hazard,
    ehypo_pdf,
    ehypo_sample,
    ehypo_survival,
    enumerate_Ek,
)
from ehypofit.estimate import fit, k_hat, loglik, profile_loglik, score_alpha, score_alphas, score_k
from ehypofit.exceptions import (
    CoalescentRatesWarning,
    CoefficientSingularityError,
    CombinatorialExplosionError,
    ConditioningError,
    ConditioningWarning,
    ConfigError,
    DomainError,
    EHypoError,
    EHypoWarning,
    EmptyDataError,
    ExpansionOverflowError,
    FitFailureError,
    IngestionError,
    NonPositiveValueError,
    NumericError,
    ParseError,
    TailDegeneracyWarning,
    TailSaturationWarning,
    UnboundedDensityWarning,
)
from ehypofit.gof import CandidateModel, compare, edf_statistics, gof_report, information_criteria, model_from_fit
from ehypofit.mee import mee_cdf, mee_cdf_expanded, mee_hazard, mee_pdf, mee_sample, mee_survival
from ehypofit.models import (
    ComparisonRow,
    ComparisonTable,
    EEParams,
    EHypoExpansion,
    EHypoParams,
    ExpansionTerm,
    FitOptions,
    FitResult,
    GofReport,
    HypoCoefficients,
    MEEParams,
    MultiIndex,
    RateVector,
    Sample,
)

__version__ = "0.1.0"
__all__ = [
    "CandidateModel",
    "CoalescentRatesWarning",
    "CoefficientSingularityError",
    "CombinatorialExplosionError",
    "ComparisonRow",
    "ComparisonTable",
    "ConditioningError",
    "ConditioningWarning",
    "ConfigError",
    "DomainError",
    "EEParams",
    "EHypoError",
    "EHypoExpansion",
    "EHypoParams",
    "EHypoSampler",
    "EHypoWarning",
    "EmptyDataError",
    "ExpansionOverflowError",
    "ExpansionTerm",
    "ExponentiatedDistribution",
    "FitFailureError",
    "FitOptions",
    "FitResult",
    "GofReport",
    "HypoCoefficients",
    "IngestionError",
    "MEEParams",
    "MultiIndex",
    "NonPositiveValueError",
    "NumericError",
    "ParseError",
    "RateVector",
    "Sample",
    "TailDegeneracyWarning",
    "TailSaturationWarning",
    "UnboundedDensityWarning",
    "compare",
    "edf_statistics",
    "ee_cdf",
    "ee_hazard",
    "ee_pdf",
    "ee_survival",
    "ehypo_cdf",
    "ehypo_expansion",
    "ehypo_expansion_cdf",
    "ehypo_expansion_pdf",
    "ehypo_expansion_survival",
    "ehypo_hazard",
    "ehypo_pdf",
    "ehypo_sample",
    "ehypo_survival",
    "enumerate_Ek",
    "exp_cdf",
    "exponentiate_cdf",
    "exponentiate_hazard",
    "exponentiate_pdf",
    "exponentiate_survival",
    "fit",
    "gof_report",
    "hypo_cdf",
    "hypo_coefficients",
    "hypo_hazard",
    "hypo_pdf",
    "hypo_survival",
    "information_criteria",
    "k_hat",
    "load_bladder_cancer",
    "loglik",
    "mee_cdf",
    "mee_cdf_expanded",
    "mee_hazard",
    "mee_pdf",
    "mee_sample",
    "mee_survival",
    "model_from_fit",
    "profile_loglik",
    "score_alpha",
    "score_alphas",
    "score_k",
]
