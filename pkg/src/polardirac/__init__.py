"""Polar (de Broglie-Bohm) formulation of the Dirac field."""

from . import errors
from .bilinears import Bilinears, FierzResiduals, compute_bilinears, fierz_residuals
from .clifford import (
    BASIS,
    METRIC,
    CliffordBasis,
    SpinorTransform,
    boost_matrices,
    build_basis,
    exp_lorentz,
    goldstone_matrices,
    induced_vector,
    minkowski_dot,
    rotation_matrices,
)
from .connections import (
    ConnectionField,
    CurvatureData,
    DivergenceConstraints,
    ExternalPotentials,
    GoldstoneDerivatives,
    IrreducibleSplit,
    TransformField,
    build_connections,
    covariant_derivative_check,
    curvatures,
    divergence_constraints,
    goldstone_derivatives,
    irreducible_split,
    polar_pipeline,
    reassemble_split,
    transform_from_params,
    transform_from_polar,
)
from .dynamics import (
    EnergyTensor,
    HJResiduals,
    PolarDiracResiduals,
    PolarFields,
    QuantumPotentials,
    SecondOrderResiduals,
    SigmaM,
    dirac_residual,
    energy_and_newton,
    guidance_momentum,
    hj_residuals,
    nonrel_hamiltonian,
    polar_dirac_residuals,
    quantum_potentials,
    second_order_residuals,
    sigma_m_potentials,
)
from .fields import (
    AnalyticField,
    GridField,
    convergence_order,
    gaussian_packet,
    grid_gradient,
    interp_values,
    load_grid,
    plane_wave,
    sample,
    save_grid,
    superpose,
)
from .polar import (
    PolarData,
    decompose,
    decompose_pauli,
    nonrel_deviation,
    reconstruct,
    reconstruct_pauli,
    small_component_fraction,
)
from .trajectories import (
    CurrentField,
    FlowSample,
    Trajectory,
    continuity_residual,
    integrate,
    momentum_along,
    velocity_at,
    write_csv,
)

__all__ = [
    "AnalyticField",
    "BASIS",
    "Bilinears",
    "CliffordBasis",
    "ConnectionField",
    "CurrentField",
    "CurvatureData",
    "DivergenceConstraints",
    "EnergyTensor",
    "ExternalPotentials",
    "FierzResiduals",
    "FlowSample",
    "GoldstoneDerivatives",
    "GridField",
    "HJResiduals",
    "IrreducibleSplit",
    "METRIC",
    "PolarData",
    "PolarDiracResiduals",
    "PolarFields",
    "QuantumPotentials",
    "SecondOrderResiduals",
    "SigmaM",
    "SpinorTransform",
    "Trajectory",
    "TransformField",
    "boost_matrices",
    "build_basis",
    "build_connections",
    "compute_bilinears",
    "continuity_residual",
    "convergence_order",
    "covariant_derivative_check",
    "curvatures",
    "decompose",
    "decompose_pauli",
    "dirac_residual",
    "divergence_constraints",
    "energy_and_newton",
    "errors",
    "exp_lorentz",
    "fierz_residuals",
    "gaussian_packet",
    "goldstone_derivatives",
    "goldstone_matrices",
    "grid_gradient",
    "guidance_momentum",
    "hj_residuals",
    "induced_vector",
    "integrate",
    "interp_values",
    "irreducible_split",
    "load_grid",
    "minkowski_dot",
    "momentum_along",
    "nonrel_deviation",
    "nonrel_hamiltonian",
    "plane_wave",
    "polar_dirac_residuals",
    "polar_pipeline",
    "quantum_potentials",
    "reassemble_split",
    "reconstruct",
    "reconstruct_pauli",
    "rotation_matrices",
    "sample",
    "save_grid",
    "second_order_residuals",
    "sigma_m_potentials",
    "small_component_fraction",
    "superpose",
    "transform_from_params",
    "transform_from_polar",
    "velocity_at",
    "write_csv",
]

__version__ = "0.1.0"
