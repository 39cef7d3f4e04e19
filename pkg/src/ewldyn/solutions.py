"""Closed-form Laplace-domain dynamics of two qubits in a common Lorentzian reservoir.

The reservoir is represented by a damped pseudomode.  Labels of the
transforms follow the qubit-sector x pseudomode-excitation states:

    aa, bb, cc   both qubits ground, 0 / 1 / 2 pseudomode quanta
    dd, ee       super-radiant |+>, 0 / 1 quanta
    ff           both qubits excited, 0 quanta
    mm           sub-radiant |-> (decoupled, constant)
    pm, mp       <+|rho|-> and its conjugate
    af           <00|rho|11>

Transforms are built in units where gamma0 = 4 omega^2 / gamma = 1, so the
time argument everywhere is the scaled time gamma0 * t.

Only the two extended Werner-like families have closed forms.  Every other
X-state initial condition is handled by linearity of the dynamics: it is an
affine combination of eight EWL solutions (:class:`PropagatorColumns`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .constants import TRACE_ATOL
from .errors import ConsistencyError, DomainError, SpanError
from .laplace import (ExponentialSum, Polynomial, RationalLaplace, final_value,
                      initial_value, partial_fractions)
from .states import (EwlPhi, EwlPsi, ReservoirParams, XState, as_ewl,
                     construct_initial, phase)

LABELS = ("aa", "bb", "cc", "dd", "ee", "ff", "pp", "mm", "pm", "mp", "af")
CORRECTIONS = {
    1: "EWL Psi: sub-radiant population is the constant (1-r)/4, not 0",
    2: "EWL Psi: rho_af denominator term 12 Omega^2 read as 12 Omega^2 s",
    3: "EWL Psi: symbol 'alp' read as alpha^2",
    4: "EWL Psi: rho_af carries the phase e^{i theta}",
}
ALL_CORRECTIONS = frozenset(CORRECTIONS)
# "As printed": 'alp' has no literal value, so the only computable reading of
# the printed expressions keeps correction 3.
PRINTED = frozenset({3})

S = Polynomial.s()


@dataclass(frozen=True)
class ReservoirPolynomials:
    k: Polynomial
    j: Polynomial
    l: Polynomial


def reservoir_polynomials(params: ReservoirParams, scaled: bool = False) -> ReservoirPolynomials:
    """The three characteristic polynomials k(s), j(s), l(s).

    With ``scaled=True`` the coefficients are those of the gamma0 = 1 units
    used by the solutions.
    """
    p = params.scaled() if scaled else params
    return _polys(p.gamma, p.omega)


def _polys(G, O) -> ReservoirPolynomials:
    k = ((16 * G * O**2 + 2 * G**2 * S + 24 * O**2 * S + 3 * G * S**2 + S**3)
         * (3 * G**3 + 28 * G * O**2 + 11 * G**2 * S + 24 * O**2 * S + 12 * G * S**2 + 4 * S**3))
    j = (G + 2 * S) * (8 * O**2 + S * (G + S))
    l = 6 * G**3 + 31 * G**2 * S + G * (56 * O**2 + 45 * S**2) + 20 * (3 * O**2 * S + S**3)
    return ReservoirPolynomials(k, j, l)


def _shared_terms(G, O):
    """Polynomials appearing in both EWL blocks besides k, j, l."""
    # numerator of the dd entry multiplying 8 Gamma Omega^2 (...)
    dd_poly = (6 * G**5 + 31 * G**4 * S + 20 * G**3 * (-2 * O**2 + 3 * S**2)
               + 5 * G**2 * S * (-20 * O**2 + 11 * S**2)
               + 8 * G * (56 * O**4 - 8.5 * O**2 * S**2 + 3 * S**4)
               + 4 * (120 * O**4 * S - 2 * O**2 * S**3 + S**5))
    ff_poly = (6 * G**5 + 31 * G**4 * S + 4 * G**3 * (38 * O**2 + 15 * S**2)
               + G**2 * S * (412 * O**2 + 55 * S**2)
               + 8 * G * (40 * O**4 + 45.5 * O**2 * S**2 + 3 * S**4)
               + 4 * (72 * O**4 * S + 26 * O**2 * S**3 + S**5))
    ee_poly = 6 * G**3 + 8 * G * O**2 + 13 * G**2 * S + 12 * O**2 * S + 9 * G * S**2 + 2 * S**3
    ladder = 8 * O**2 + (G + S) * (G + 2 * S)
    return dd_poly, ff_poly, ee_poly, ladder


@dataclass(eq=False)
class PseudomodeSolution:
    """Laplace transforms of one EWL evolution, keyed by :data:`LABELS`."""

    family: str
    transforms: dict
    params: ReservoirParams
    _sums: dict = field(default_factory=dict, repr=False)

    def exp_sum(self, label: str) -> ExponentialSum:
        if label not in self._sums:
            self._sums[label] = partial_fractions(self.transforms[label])
        return self._sums[label]

    def evaluate(self, times) -> dict:
        """Time-domain value of every label at the given scaled times."""
        t = np.atleast_1d(np.asarray(times, dtype=float))
        return {lab: self.exp_sum(lab).evaluate(t) for lab in LABELS}

    def x_vectors(self, times) -> np.ndarray:
        return _reconstruct_vectors(self.evaluate(times))

    def initial_values(self) -> dict:
        return {lab: initial_value(f) for lab, f in self.transforms.items()}

    def final_values(self) -> dict:
        return {lab: final_value(f) for lab, f in self.transforms.items()}


def _finish(family, entries, params) -> PseudomodeSolution:
    entries["pp"] = _add(entries["dd"], entries["ee"])
    entries["mp"] = entries["pm"].conj()
    return PseudomodeSolution(family, {lab: entries[lab] for lab in LABELS}, params)


def _add(f: RationalLaplace, g: RationalLaplace) -> RationalLaplace:
    """f + g for transforms whose factor lists nest (g's factors within f's or vice versa)."""
    if len(g.factors) > len(f.factors):
        f, g = g, f
    rest = list(f.factors)
    for fac in g.factors:
        for i, cand in enumerate(rest):
            if cand is fac:
                del rest[i]
                break
        else:
            raise ValueError("factor lists do not nest")
    extra = Polynomial([1.0])
    for fac in rest:
        extra = extra * fac
    return RationalLaplace(f.numerator + g.numerator * extra, f.factors)


def ewl_phi_solution(r: float, alpha2: float, theta: float,
                     params: ReservoirParams) -> PseudomodeSolution:
    """Transforms for r|Phi><Phi| + (1-r)/4 I, |Phi> = alpha|10> + e^{i theta}sqrt(1-alpha^2)|01>."""
    EwlPhi(r, alpha2, theta)
    sp = params.scaled()
    G, O = sp.gamma, sp.omega
    polys = _polys(G, O)
    k, j, l = polys.k, polys.j, polys.l
    dd_poly, ff_poly, ee_poly, ladder = _shared_terms(G, O)
    m = r - 1.0
    root = math.sqrt(alpha2 * (1.0 - alpha2))
    ph = phase(theta)
    weight = 1.0 + r + 4.0 * root * r * ph.real

    e = {}
    e["aa"] = RationalLaplace(
        -(m * j * k + 64 * G**2 * O**4 * m * l - 8 * G * O**2 * weight * k), (4 * S, j, k))
    e["bb"] = RationalLaplace(2 * O**2 * (weight * k - 8 * G * O**2 * m * l), (j, k))
    e["cc"] = RationalLaplace(-48 * O**4 * m * (G + S), (k,))
    e["dd"] = RationalLaplace(-8 * G * O**2 * m * dd_poly + ladder * weight * k, (4 * j, k))
    e["ee"] = RationalLaplace(-2 * O**2 * m * ee_poly, (k,))
    e["ff"] = RationalLaplace(-m * ff_poly, (4 * k,))
    # Im part sign follows the z(0) ~ e^{+i theta} convention of construct_initial.
    coh = complex(-1.0 + 2.0 * alpha2, -2.0 * root * ph.imag)
    e["pm"] = RationalLaplace(r * (G + 2 * S) * coh, (2 * (4 * O**2 + S * (G + 2 * S)),))
    e["mm"] = RationalLaplace.constant(r * (1.0 - 2.0 * root * ph.real) / 2.0 + (1.0 - r) / 4.0)
    e["af"] = RationalLaplace.zero()
    return _finish("phi", e, params)


def _correction_set(corrections) -> frozenset:
    if corrections is True:
        return ALL_CORRECTIONS
    if corrections is False:
        return PRINTED
    return frozenset(corrections)


def ewl_psi_solution(r: float, alpha2: float, theta: float, params: ReservoirParams,
                     corrections=True) -> PseudomodeSolution:
    """Transforms for r|Psi><Psi| + (1-r)/4 I, |Psi> = alpha|00> + e^{i theta}sqrt(1-alpha^2)|11>.

    ``corrections`` selects which fixes of :data:`CORRECTIONS` are applied:
    ``True`` for all, ``False`` for the printed expressions (:data:`PRINTED`),
    or any set of correction numbers.  Anything but the full set breaks the
    dynamics; the option exists for auditing.
    """
    fixes = _correction_set(corrections)
    EwlPsi(r, alpha2, theta)
    sp = params.scaled()
    G, O = sp.gamma, sp.omega
    polys = _polys(G, O)
    k, j, l = polys.k, polys.j, polys.l
    dd_poly, ff_poly, ee_poly, ladder = _shared_terms(G, O)
    m = r - 1.0
    alpha = math.sqrt(alpha2)
    root = math.sqrt(alpha2 * (1.0 - alpha2))
    alp = alpha2 if 3 in fixes else alpha
    q = -1.0 + (-3.0 + 4.0 * alp) * r

    e = {}
    e["aa"] = RationalLaplace(
        -((-1.0 + r - 4.0 * alpha2 * r) * j * k + 8 * G * O**2 * m * k + 64 * G**2 * O**4 * q * l),
        (4 * S, j, k))
    e["bb"] = RationalLaplace(2 * O**2 * ((1.0 - r) * k - 8 * G * O**2 * q * l), (j, k))
    e["cc"] = RationalLaplace(-48 * O**4 * q * (G + S), (k,))
    e["dd"] = RationalLaplace(-(ladder * m * k + 8 * G * O**2 * q * dd_poly), (4 * j, k))
    e["ee"] = RationalLaplace(-2 * O**2 * q * ee_poly, (k,))
    e["ff"] = RationalLaplace(-q * ff_poly, (4 * k,))
    if 2 in fixes:
        af_den = 4 * G * O**2 + G**2 * S + 12 * O**2 * S + 3 * G * S**2 + 2 * S**3
    else:
        af_den = 4 * G * O**2 + G**2 * S + 12 * O**2 + 3 * G * S**2 + 2 * S**3
    af_num = r * root * ladder * (phase(theta) if 4 in fixes else 1.0)
    e["af"] = RationalLaplace(af_num, (af_den,))
    e["pm"] = RationalLaplace.zero()
    e["mm"] = RationalLaplace.constant((1.0 - r) / 4.0) if 1 in fixes else RationalLaplace.zero()
    return _finish("psi", e, params)


def ewl_solution(spec, params: ReservoirParams, corrections=True) -> PseudomodeSolution:
    if isinstance(spec, EwlPhi):
        return ewl_phi_solution(spec.r, spec.alpha2, spec.theta, params)
    if isinstance(spec, EwlPsi):
        return ewl_psi_solution(spec.r, spec.alpha2, spec.theta, params, corrections)
    raise DomainError(f"no closed-form solution for {spec!r}")


def _reconstruct_vectors(v: dict, check_trace: bool = True) -> np.ndarray:
    """Rows ``(a, b, c, d, Re w, Im w, Re z, Im z)`` from label values."""
    a = (v["aa"] + v["bb"] + v["cc"]).real
    pp, mm, pm, mp = v["pp"], v["mm"], v["pm"], v["mp"]
    b = (0.5 * (pp + mm + pm + mp)).real
    c = (0.5 * (pp + mm - pm - mp)).real
    z = 0.5 * (pp - mm - pm + mp)
    d = v["ff"].real
    w = v["af"]
    if check_trace:
        dev = np.max(np.abs(a + b + c + d - 1.0))
        if dev > TRACE_ATOL:
            raise ConsistencyError(f"reconstructed trace deviates from 1 by {dev:.3g}")
    return np.column_stack([a, b, c, d, w.real, w.imag, z.real, z.imag])


def reconstruct(sol: PseudomodeSolution, t: float, check_trace: bool = True) -> XState:
    """X-state at scaled time ``t`` from a pseudomode solution."""
    if t < 0:
        raise DomainError("t must be >= 0")
    return XState.from_vector(_reconstruct_vectors(sol.evaluate([t]), check_trace)[0])


# --------------------------------------------------------------------------
# Superposition over a fixed basis of EWL solutions


BASIS_SPECS = (
    EwlPsi(1.0, 0.5, 0.0), EwlPsi(1.0, 0.5, math.pi / 2), EwlPsi(1.0, 0.25, 0.0), EwlPsi(0.0, 0.5, 0.0),
    EwlPhi(1.0, 0.5, 0.0), EwlPhi(1.0, 0.5, math.pi / 2), EwlPhi(1.0, 0.25, 0.0), EwlPhi(1.0, 0.25, math.pi),
)


def basis_matrix() -> np.ndarray:
    """Columns are the initial X-vectors of :data:`BASIS_SPECS`."""
    return np.column_stack([construct_initial(s).as_vector() for s in BASIS_SPECS])


@dataclass(eq=False)
class PropagatorColumns:
    basis_specs: tuple
    solutions: tuple
    decomposition: np.ndarray

    def weights(self, x: XState) -> np.ndarray:
        v = x.as_vector()
        lam = self.decomposition @ v
        residual = np.max(np.abs(basis_matrix() @ lam - v))
        if residual > 1e-8:
            raise SpanError(f"initial state not reachable by the basis (residual {residual:.3g})")
        return lam


@lru_cache(maxsize=32)
def propagator_columns(params: ReservoirParams) -> PropagatorColumns:
    sols = tuple(ewl_solution(s, params) for s in BASIS_SPECS)
    return PropagatorColumns(BASIS_SPECS, sols, np.linalg.inv(basis_matrix()))


@dataclass(eq=False)
class Evolution:
    """Weighted sum of pseudomode solutions: the full linear evolution of one initial state."""

    terms: tuple  # ((weight, PseudomodeSolution), ...)
    params: ReservoirParams

    def x_vectors(self, times) -> np.ndarray:
        out = 0.0
        for wgt, sol in self.terms:
            out = out + wgt * sol.x_vectors(times)
        return out

    def state(self, t: float) -> XState:
        return XState.from_vector(self.x_vectors([t])[0])

    def stationary_vector(self) -> np.ndarray:
        out = np.zeros(8)
        for wgt, sol in self.terms:
            fv = sol.final_values()
            out = out + wgt * _reconstruct_vectors({k: np.atleast_1d(v) for k, v in fv.items()})[0]
        return out


def evolution(spec, params: ReservoirParams) -> Evolution:
    ewl = as_ewl(spec)
    if ewl is not None:
        return Evolution(((1.0, ewl_solution(ewl, params)),), params)
    cols = propagator_columns(params)
    lam = cols.weights(construct_initial(spec))
    return Evolution(tuple((float(w), sol) for w, sol in zip(lam, cols.solutions) if w != 0.0), params)


@dataclass(eq=False)
class Trajectory:
    """Sampled X-state evolution.  ``times`` are scaled times gamma0 * t."""

    times: np.ndarray
    vectors: np.ndarray
    params: ReservoirParams
    spec: object
    evolution: Evolution = field(repr=False)

    @property
    def states(self) -> list[XState]:
        return [XState.from_vector(v) for v in self.vectors]

    @property
    def raw_times(self) -> np.ndarray:
        """Times in the physical unit of the reservoir rates."""
        return self.times / self.params.gamma0

    def components(self):
        """Arrays ``(a, b, c, d, w, z)``."""
        v = self.vectors
        return v[:, 0], v[:, 1], v[:, 2], v[:, 3], v[:, 4] + 1j * v[:, 5], v[:, 6] + 1j * v[:, 7]

    def __len__(self):
        return len(self.times)


def propagate(spec, params: ReservoirParams, times) -> Trajectory:
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise DomainError("times must be a non-empty 1-D sequence")
    if np.any(times < 0) or np.any(np.diff(times) <= 0):
        raise DomainError("times must be non-negative and strictly increasing")
    evo = evolution(spec, params)
    vec = evo.x_vectors(times)
    return Trajectory(times, vec, params, spec, evo)


def stationary_state(spec, params: ReservoirParams) -> XState:
    """t -> infinity limit from the final-value theorem on every transform."""
    return XState.from_vector(evolution(spec, params).stationary_vector())


def initial_audit(spec, params: ReservoirParams, corrections=True) -> float:
    """Largest element-wise gap between reconstruct(t=0) and construct_initial."""
    sol = ewl_solution(as_ewl(spec), params, corrections)
    got = reconstruct(sol, 0.0, check_trace=False).as_vector()
    return float(np.max(np.abs(got - construct_initial(spec).as_vector())))
