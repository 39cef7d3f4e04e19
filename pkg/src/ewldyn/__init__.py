"""Exact entanglement and entropy dynamics of two qubits in a common Lorentzian reservoir."""

from .analysis import (EntanglementEvents, ExtremaReport, SweepGrid, ZeroConditionReport,
                       detect_events, extrema_alignment, stationary_concurrence, sweep,
                       zero_condition_check)
from .errors import (ClusteredRootsError, ConjugatePairError, ConsistencyError, ContractError,
                     DomainError, EwlError, NumericalFailure, ResolutionError, SpanError,
                     StabilityError)
from .laplace import (ExponentialSum, Polynomial, RationalLaplace, eval_exp_sum, final_value,
                      initial_value, partial_fractions, poly_roots, talbot_invert)
from .measures import (MeasureSample, concurrence_single_excitation, concurrence_wootters,
                       concurrence_x, entropy, entropy_closed_form, measure_sample)
from .solutions import (PropagatorColumns, PseudomodeSolution, ReservoirPolynomials, Trajectory,
                        ewl_phi_solution, ewl_psi_solution, propagate, propagator_columns,
                        reconstruct, reservoir_polynomials, stationary_state)
from .states import (BellPhi, BellPsi, EwlPhi, EwlPsi, FactorizedMixed, RadiantCoords, RawX,
                     ReservoirParams, SingleExcitation, Werner, WernerLike, XState,
                     construct_initial, extract_x, radiant_coords, to_dense)

__all__ = [
    "BellPhi",
    "BellPsi",
    "ClusteredRootsError",
    "ConjugatePairError",
    "ConsistencyError",
    "ContractError",
    "DomainError",
    "EntanglementEvents",
    "EwlError",
    "EwlPhi",
    "EwlPsi",
    "ExponentialSum",
    "ExtremaReport",
    "FactorizedMixed",
    "MeasureSample",
    "NumericalFailure",
    "Polynomial",
    "PropagatorColumns",
    "PseudomodeSolution",
    "RadiantCoords",
    "RationalLaplace",
    "RawX",
    "ReservoirParams",
    "ReservoirPolynomials",
    "ResolutionError",
    "SingleExcitation",
    "SpanError",
    "StabilityError",
    "SweepGrid",
    "Trajectory",
    "Werner",
    "WernerLike",
    "XState",
    "ZeroConditionReport",
    "concurrence_single_excitation",
    "concurrence_wootters",
    "concurrence_x",
    "construct_initial",
    "detect_events",
    "entropy",
    "entropy_closed_form",
    "eval_exp_sum",
    "ewl_phi_solution",
    "ewl_psi_solution",
    "extract_x",
    "extrema_alignment",
    "final_value",
    "initial_value",
    "measure_sample",
    "partial_fractions",
    "poly_roots",
    "propagate",
    "propagator_columns",
    "radiant_coords",
    "reconstruct",
    "reservoir_polynomials",
    "stationary_concurrence",
    "stationary_state",
    "sweep",
    "talbot_invert",
    "to_dense",
    "zero_condition_check",
]

__version__ = "0.1.0"
