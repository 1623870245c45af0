"""Spectral toolbox for -Delta + q on rectangular boxes.

Thin Python layer over the compiled core: Galerkin spectra under mixed
Dirichlet/Neumann face conditions, heat-trace series and asymptotic fits,
reflection/torus kernel identities, transport coefficients, and the
isospectral-invariant bundle machinery.
"""

from ._core import (  # noqa: F401
    AsymptoticFit,
    BoxProblem,
    BundleParams,
    ComparisonEntry,
    ComparisonReport,
    CosineSpec,
    DirectionalComponent,
    DirectionalInvariant,
    HeatPoint,
    IdentityReport,
    InvariantBundle,
    OddDerivativeReport,
    SeparabilityReport,
    Spectrum1D,
    SpectrumInfo,
    SpectrumND,
    TrigPotential,
    __version__,
    a_nu_1d,
    build_potential,
    bundle,
    compare_bundles,
    coordinate_series,
    default_t_set,
    directional_decomposition,
    directional_spectrum,
    even_maclaurin_check,
    factorization_identity,
    fit_expansion,
    fit_t_grid,
    hadamard_a1,
    hadamard_a2,
    predicted_coefficients,
    reduce_potential,
    reflect_potential,
    reflection_identity_1d,
    separability_diagnosis,
    separable_spectrum,
    solve_box,
    solve_interval,
    spectrum_info,
    telescoped_dirichlet_trace,
    torus_image_identity_2d,
    trace_pairing_identity,
    trace_quadrupling_2d,
    trace_series,
)
