"""Gauge group and perturbation semigroup of the Toeplitz operator system."""
from .gauge import GaugeElement, Kind, OmegaMultiplier, act, act_schur, classify, group_checks, is_gauge, u_alpha_beta, v_flip
from .linalg import Tol, gamma, hermitian_eigvals, is_psd, kron, lstsq, operator_norm, schur, unvec, vec
from .norms import NormReport, cb_exact_cp, cb_lower, haagerup_upper, min_norm, norm_report, ucp_condition
from .pert import (
    KrausFamily,
    MapMatrixW,
    PertElement,
    apply_map,
    check_conditions,
    is_pert,
    is_pert_plus,
    kraus_from_choi,
    omega_from_family,
    toep2_parametrized,
    w_from_map,
    w_from_omega_solve,
)
from .toeplitz import ToeplitzCoeffs, ToeplitzSystem, delta, fourier_from_samples, is_member, project, tau, truncate

__version__ = "0.1.0"
