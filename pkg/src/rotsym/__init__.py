"""Tests of rotational symmetry for directional data on the unit hypersphere."""

__version__ = "0.1.0"

from .distributions import (
    AngularFunction,
    Mixture,
    TangentEllipticalParams,
    TangentVmfParams,
    arcsine_tilt_angular,
    cosine_density,
    density_acg,
    density_tangent_elliptical,
    density_tangent_vmf,
    sample_acg,
    sample_cosine,
    sample_mixture,
    sample_tangent_elliptical,
    sample_tangent_vmf,
    sample_uniform_sphere,
    sample_vmf,
    shape_matrix,
    uniform_angular,
    vmf_angular,
    vmf_norm_const,
)
from .errors import (
    AmbiguousAxisError,
    ConfigError,
    DegenerateCosinesError,
    DimensionError,
    ExperimentError,
    InvalidShapeError,
    NormalizationError,
    PoleError,
    RotsymError,
    SingularInformationError,
    UndefinedMeanError,
    UnsupportedAngularFunctionError,
)
from .geometry import (
    SignCosine,
    TangentFrame,
    decompose,
    decompose_sample,
    principal_axis,
    reconstruct,
    reconstruct_sample,
    spherical_mean,
    tangent_frame,
)
from .lecam import (
    InfoFunctionals,
    are_vmf,
    info_functionals,
    location_score_moment,
    noncentrality_semiparam,
    noncentrality_te,
    noncentrality_tm,
    predicted_power,
)
from .montecarlo import (
    ExperimentConfig,
    PowerTable,
    load_config,
    local_alternative_validation,
    run_experiment,
    scenario_misspecified,
)
from .symtests import (
    TestResult,
    efficient_score_loc,
    high_dim_standardize,
    q_cov,
    q_hyb,
    q_hyb_fisher,
    q_hyb_fisher_vmf,
    q_hyb_vmf,
    q_loc,
    q_loc_vmf,
    q_sc,
    q_sc_unspecified,
    run_test,
)

__all__ = [name for name in dir() if not name.startswith("_")]
