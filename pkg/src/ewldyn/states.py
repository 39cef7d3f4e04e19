"""Two-qubit X-states, reservoir parameters and initial-state families.

Basis ordering throughout is ``|00>, |10>, |01>, |11>`` where the first label
is qubit A and ``1`` denotes the excited level.  An X-state has nonzero
entries only on the diagonal and the anti-diagonal::

    [[a, 0, 0, w],
     [0, b, z, 0],
     [0, z*, c, 0],
     [w*, 0, 0, d]]
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

from .constants import ATOL, STRONG_COUPLING_RATIO, SUBRADIANT_SIGN
from .errors import DomainError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ReservoirParams:
    """Lorentzian reservoir: width ``gamma`` and qubit coupling ``omega``.

    Both are rates (inverse time).  The qubits are taken resonant with the
    Lorentzian peak, so the peak frequency does not appear.
    """

    gamma: float
    omega: float

    def __post_init__(self):
        for name in ("gamma", "omega"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be a positive finite number, got {value!r}")

    @property
    def gamma0(self) -> float:
        """Markovian decay rate 4 omega^2 / gamma."""
        return 4.0 * self.omega**2 / self.gamma

    def scaled(self) -> "ReservoirParams":
        """Same reservoir in units where gamma0 = 1."""
        g0 = self.gamma0
        return ReservoirParams(self.gamma / g0, self.omega / g0)

    @classmethod
    def strong_coupling(cls, gamma: float = 1.0) -> "ReservoirParams":
        """Default strong-coupling regime, omega = 5 gamma."""
        return cls(gamma, STRONG_COUPLING_RATIO * gamma)


@dataclass(frozen=True)
class XState:
    a: float
    b: float
    c: float
    d: float
    w: complex = 0j
    z: complex = 0j

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "w", complex(self.w))
        object.__setattr__(self, "z", complex(self.z))

    @property
    def trace(self) -> float:
        return self.a + self.b + self.c + self.d

    def as_vector(self) -> np.ndarray:
        """Real 8-vector ``(a, b, c, d, Re w, Im w, Re z, Im z)``."""
        return np.array([self.a, self.b, self.c, self.d,
                         self.w.real, self.w.imag, self.z.real, self.z.imag])

    @classmethod
    def from_vector(cls, v) -> "XState":
        v = np.asarray(v, dtype=float)
        return cls(v[0], v[1], v[2], v[3], complex(v[4], v[5]), complex(v[6], v[7]))

    def violations(self, atol: float = ATOL, physical: bool = True) -> list[str]:
        """Names of the invariants this state breaks (empty when valid)."""
        out = []
        if abs(self.trace - 1.0) > atol:
            out.append(f"trace={self.trace!r}")
        for name in ("a", "b", "c", "d"):
            p = getattr(self, name)
            if p < -atol or p > 1 + atol:
                out.append(f"{name}={p!r} outside [0, 1]")
        if physical:
            if abs(self.w) ** 2 > self.a * self.d + atol:
                out.append("|w|^2 > a d")
            if abs(self.z) ** 2 > self.b * self.c + atol:
                out.append("|z|^2 > b c")
        return out

    def is_valid(self, atol: float = ATOL, physical: bool = True) -> bool:
        return not self.violations(atol, physical)

    def validate(self, atol: float = ATOL, physical: bool = True) -> "XState":
        bad = self.violations(atol, physical)
        if bad:
            raise DomainError("invalid X-state: " + "; ".join(bad))
        return self

    def isclose(self, other: "XState", atol: float = 1e-9) -> bool:
        return bool(np.all(np.abs(self.as_vector() - other.as_vector()) <= atol))


@dataclass(frozen=True)
class RadiantCoords:
    """Populations of |+>, |-> = (|10> +/- |01>)/sqrt(2) and <+|rho|->."""

    rho_pp: float
    rho_mm: float
    rho_pm: complex


# --------------------------------------------------------------------------
# Initial-state families


def _check_unit(name, value):
    if not (math.isfinite(value) and 0.0 <= value <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")


def _check_angle(name, value):
    if not (math.isfinite(value) and 0.0 <= value < TWO_PI):
        raise DomainError(f"{name} must lie in [0, 2*pi), got {value!r}")


@dataclass(frozen=True)
class BellPhi:
    """alpha|10> + e^{i theta} sqrt(1 - alpha^2)|01>."""

    alpha2: float
    theta: float = 0.0

    def __post_init__(self):
        _check_unit("alpha2", self.alpha2)
        _check_angle("theta", self.theta)


@dataclass(frozen=True)
class BellPsi:
    """alpha|00> + e^{i theta} sqrt(1 - alpha^2)|11>."""

    alpha2: float
    theta: float = 0.0

    def __post_init__(self):
        _check_unit("alpha2", self.alpha2)
        _check_angle("theta", self.theta)


@dataclass(frozen=True)
class EwlPhi:
    """r |Phi><Phi| + (1 - r)/4 I, with |Phi> as in :class:`BellPhi`."""

    r: float
    alpha2: float
    theta: float = 0.0

    def __post_init__(self):
        _check_unit("r", self.r)
        _check_unit("alpha2", self.alpha2)
        _check_angle("theta", self.theta)


@dataclass(frozen=True)
class EwlPsi:
    """r |Psi><Psi| + (1 - r)/4 I, with |Psi> as in :class:`BellPsi`."""

    r: float
    alpha2: float
    theta: float = 0.0

    def __post_init__(self):
        _check_unit("r", self.r)
        _check_unit("alpha2", self.alpha2)
        _check_angle("theta", self.theta)


@dataclass(frozen=True)
class Werner:
    """r |-><-| + (1 - r)/4 I with |-> the singlet."""

    r: float

    def __post_init__(self):
        _check_unit("r", self.r)


@dataclass(frozen=True)
class WernerLike:
    """r |M><M| + (1 - r)/4 I for one of the four Bell states.

    ``bell_index``: 0 -> (|00>+|11>)/sqrt2, 1 -> (|00>-|11>)/sqrt2,
    2 -> (|10>+|01>)/sqrt2, 3 -> (|10>-|01>)/sqrt2 (the singlet).
    """

    r: float
    bell_index: int = 3

    def __post_init__(self):
        _check_unit("r", self.r)
        if self.bell_index not in (0, 1, 2, 3):
            raise DomainError(f"bell_index must be 0..3, got {self.bell_index!r}")


@dataclass(frozen=True)
class FactorizedMixed:
    """Product of two identical qubit states alpha^2|0><0| + (1-alpha^2)|1><1|."""

    alpha2: float

    def __post_init__(self):
        _check_unit("alpha2", self.alpha2)


@dataclass(frozen=True)
class SingleExcitation:
    """Mixed state with at most one excitation.

    ``j`` and ``k`` are the coherences <00|rho|10> and <00|rho|01>.  They do
    not belong to the X-form and are carried for validation only: the X-part
    (a, b, c, z) is what gets propagated, and the concurrence depends on z
    alone for this family.
    """

    a: float
    b: float
    c: float
    j: complex = 0j
    k: complex = 0j
    z: complex = 0j

    def __post_init__(self):
        for name in ("a", "b", "c"):
            value = getattr(self, name)
            if not (math.isfinite(value) and -ATOL <= value <= 1 + ATOL):
                raise DomainError(f"{name} must lie in [0, 1], got {value!r}")
        if abs(self.a + self.b + self.c - 1.0) > ATOL:
            raise DomainError(f"a + b + c must equal 1, got {self.a + self.b + self.c!r}")
        m = np.array([[self.a, self.j, self.k],
                      [np.conj(self.j), self.b, self.z],
                      [np.conj(self.k), np.conj(self.z), self.c]], dtype=complex)
        if np.linalg.eigvalsh(m).min() < -ATOL:
            raise DomainError("single-excitation block (a, b, c, j, k, z) is not positive semidefinite")


@dataclass(frozen=True)
class RawX:
    state: XState = field(default_factory=lambda: XState(0.25, 0.25, 0.25, 0.25))

    def __post_init__(self):
        self.state.validate()


EWL_SPECS = (EwlPhi, EwlPsi)
INITIAL_SPECS = (BellPhi, BellPsi, EwlPhi, EwlPsi, Werner, WernerLike,
                 FactorizedMixed, SingleExcitation, RawX)


def spec_fields(spec) -> dict:
    return {f.name: getattr(spec, f.name) for f in fields(spec)}


def phase(theta: float) -> complex:
    """e^{i theta}, exact at multiples of pi/2."""
    c, s = math.cos(theta), math.sin(theta)
    c = 0.0 if abs(c) < 1e-15 else c
    s = 0.0 if abs(s) < 1e-15 else s
    return complex(c, s)


def as_ewl(spec):
    """Rewrite a spec as an EWL spec when one exists, else return None."""
    if isinstance(spec, (EwlPhi, EwlPsi)):
        return spec
    if isinstance(spec, BellPhi):
        return EwlPhi(1.0, spec.alpha2, spec.theta)
    if isinstance(spec, BellPsi):
        return EwlPsi(1.0, spec.alpha2, spec.theta)
    if isinstance(spec, Werner):
        return EwlPhi(spec.r, 0.5, math.pi)
    if isinstance(spec, WernerLike):
        family = EwlPsi if spec.bell_index < 2 else EwlPhi
        theta = 0.0 if spec.bell_index % 2 == 0 else math.pi
        return family(spec.r, 0.5, theta)
    return None


def construct_initial(spec) -> XState:
    """Exact X-state of an initial-state spec."""
    spec = as_ewl(spec) or spec
    if isinstance(spec, (EwlPhi, EwlPsi)):
        r, al2 = spec.r, spec.alpha2
        coh = r * math.sqrt(al2 * (1.0 - al2)) * phase(spec.theta)
        mix = (1.0 - r) / 4.0
        if isinstance(spec, EwlPhi):
            return XState(mix, r * al2 + mix, r * (1.0 - al2) + mix, mix, 0j, coh)
        return XState(r * al2 + mix, mix, mix, r * (1.0 - al2) + mix, coh, 0j)
    if isinstance(spec, FactorizedMixed):
        g, e = spec.alpha2, 1.0 - spec.alpha2
        return XState(g * g, g * e, e * g, e * e)
    if isinstance(spec, SingleExcitation):
        return XState(spec.a, spec.b, spec.c, 0.0, 0j, spec.z)
    if isinstance(spec, RawX):
        return spec.state
    raise DomainError(f"unknown initial-state spec {spec!r}")


# --------------------------------------------------------------------------
# Dense matrices


def to_dense(state: XState) -> np.ndarray:
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0], rho[1, 1], rho[2, 2], rho[3, 3] = state.a, state.b, state.c, state.d
    rho[0, 3], rho[3, 0] = state.w, np.conj(state.w)
    rho[1, 2], rho[2, 1] = state.z, np.conj(state.z)
    return rho


X_MASK = np.eye(4, dtype=bool) | np.eye(4, dtype=bool)[::-1]


def is_x_form(rho, atol: float = 1e-12) -> bool:
    rho = np.asarray(rho)
    return bool(np.all(np.abs(rho[~X_MASK]) <= atol))


def extract_x(rho) -> XState:
    """X-part of a dense 4x4 matrix (the other entries are dropped)."""
    rho = np.asarray(rho, dtype=complex)
    return XState(rho[0, 0].real, rho[1, 1].real, rho[2, 2].real, rho[3, 3].real,
                  rho[0, 3], rho[1, 2])


def validate_density(rho, atol: float = 1e-9) -> np.ndarray:
    """Check a dense two-qubit density matrix; return it as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DomainError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
        raise DomainError("matrix is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > 1e-10:
        raise DomainError(f"trace must be 1, got {tr!r}")
    if np.linalg.eigvalsh(rho).min() < -atol:
        raise DomainError("matrix is not positive semidefinite")
    return rho


# --------------------------------------------------------------------------
# Super/sub-radiant coordinates


def radiant_coords(state: XState) -> RadiantCoords:
    half = 0.5 * (state.b + state.c)
    return RadiantCoords(
        rho_pp=half + state.z.real,
        rho_mm=half - state.z.real,
        rho_pm=complex(0.5 * (state.b - state.c), SUBRADIANT_SIGN * state.z.imag),
    )


def from_radiant(rho_pp, rho_mm, rho_pm):
    """Inverse map: ``(b, c, z)`` from super/sub-radiant coordinates.

    Works on scalars or arrays.
    """
    rho_mp = np.conj(rho_pm)
    b = 0.5 * (rho_pp + rho_mm + rho_pm + rho_mp)
    c = 0.5 * (rho_pp + rho_mm - rho_pm - rho_mp)
    z = 0.5 * (rho_pp - rho_mm - rho_pm + rho_mp)
    return np.real(b), np.real(c), z
