"""Entanglement and mixedness of two-qubit states.

The ``*_components`` kernels take arrays of X-state entries and are what the
trajectory code uses; the scalar functions wrap them for single states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import ATOL
from .errors import DomainError
from .states import XState, is_x_form, radiant_coords, to_dense, validate_density

LN4 = float(np.log(4.0))
SIGMA_YY = np.array([[0, 0, 0, -1],
                     [0, 0, 1, 0],
                     [0, 1, 0, 0],
                     [-1, 0, 0, 0]], dtype=complex)


@dataclass(frozen=True)
class MeasureSample:
    concurrence: float
    entropy: float
    rho_pp: float
    rho_mm: float
    abs_rho_pm: float


def _xlogx(p):
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    pos = p > 0
    out[pos] = p[pos] * np.log(p[pos])
    return out


def signed_concurrence_components(a, b, c, d, w, z):
    """max(C1, C2) without the clamp at zero; negative inside dark periods."""
    a, b, c, d = (np.clip(np.asarray(x, dtype=float), 0.0, None) for x in (a, b, c, d))
    c1 = 2.0 * np.abs(w) - 2.0 * np.sqrt(b * c)
    c2 = 2.0 * np.abs(z) - 2.0 * np.sqrt(a * d)
    return np.maximum(c1, c2)


def concurrence_components(a, b, c, d, w, z):
    return np.clip(signed_concurrence_components(a, b, c, d, w, z), 0.0, 1.0)


def concurrence_x(state: XState) -> float:
    """Concurrence of an X-state from its closed form."""
    return float(concurrence_components(state.a, state.b, state.c, state.d, state.w, state.z))


def concurrence_single_excitation(state: XState) -> float:
    """2|z| for states with no population in |11> and no |00>-|11> coherence."""
    if abs(state.d) > ATOL:
        raise DomainError(f"d must vanish for a single-excitation state, got {state.d!r}")
    if abs(state.w) > ATOL:
        raise DomainError(f"w must vanish for a single-excitation state, got {state.w!r}")
    return float(min(1.0, 2.0 * abs(state.z)))


def concurrence_wootters(rho) -> float:
    """Wootters concurrence of a general two-qubit density matrix."""
    if isinstance(rho, XState):
        rho = to_dense(rho)
    rho = validate_density(rho)
    if is_x_form(rho):
        # R splits into the {00,11} and {10,01} blocks; eigenvalues of each
        # are (sqrt(ad) +/- |w|)^2 and (sqrt(bc) +/- |z|)^2.
        a, b, c, d = np.clip(np.diag(rho).real, 0.0, None)
        w, z = abs(rho[0, 3]), abs(rho[1, 2])
        roots = np.array([np.sqrt(a * d) + w, abs(np.sqrt(a * d) - w),
                          np.sqrt(b * c) + z, abs(np.sqrt(b * c) - z)])
    else:
        r = rho @ SIGMA_YY @ rho.conj() @ SIGMA_YY
        lam = np.clip(np.linalg.eigvals(r).real, -1e-10, None)
        roots = np.sqrt(np.clip(lam, 0.0, None))
    roots = np.sort(roots)[::-1]
    return float(min(1.0, max(0.0, roots[0] - roots[1:].sum())))


def x_block_eigenvalues(a, b, c, d, w, z):
    """The four eigenvalues of an X-state, as arrays (mu+, mu-, nu+, nu-)."""
    f = np.sqrt((a - d) ** 2 + 4.0 * np.abs(w) ** 2)
    g = np.sqrt((b - c) ** 2 + 4.0 * np.abs(z) ** 2)
    return 0.5 * (a + d + f), 0.5 * (a + d - f), 0.5 * (b + c + g), 0.5 * (b + c - g)


def entropy_components(a, b, c, d, w, z, tol: float = 1e-8):
    eig = np.stack(x_block_eigenvalues(*(np.asarray(x) for x in (a, b, c, d)), w, z))
    if np.min(eig) < -tol:
        raise DomainError(f"negative eigenvalue {np.min(eig):.3g}; not a valid state")
    eig = np.clip(eig, 0.0, 1.0)
    return np.clip(-np.sum(_xlogx(eig), axis=0), 0.0, LN4)


def entropy(state) -> float:
    """Von Neumann entropy (natural log) of an XState or a dense 4x4 matrix."""
    if isinstance(state, XState):
        return float(entropy_components(state.a, state.b, state.c, state.d, state.w, state.z))
    rho = np.asarray(state, dtype=complex)
    eig = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if eig.min() < -1e-8:
        raise DomainError(f"negative eigenvalue {eig.min():.3g}; not a valid state")
    return float(np.clip(-np.sum(_xlogx(np.clip(eig, 0.0, 1.0))), 0.0, LN4))


def entropy_closed_form(state: XState, family: str, tol: float = 1e-8) -> float:
    """Entropy along Bell-like evolutions from the two-block closed forms.

    ``family`` is ``"psi"`` (two-excitation Bell-like start: the middle block
    has eigenvalues {rho_pp, 0}) or ``"phi"`` (single-excitation start:
    d = 0 and w = 0).  For ``"phi"`` the middle-block term includes
    (rho_pp + rho_mm) ln 2, which the printed closed form omits.
    """
    rc = radiant_coords(state)
    pp, mm = rc.rho_pp, rc.rho_mm
    if family == "psi":
        if abs(mm) > tol or abs(rc.rho_pm) > tol:
            raise DomainError("psi closed form needs rho_mm = 0 and rho_pm = 0")
        s_ad = state.a + state.d
        f = np.sqrt((state.a - state.d) ** 2 + 4.0 * abs(state.w) ** 2)
        val = 0.5 * (s_ad * LN4 - 2.0 * _xlogx(pp) - _xlogx(s_ad - f) - _xlogx(s_ad + f))
    elif family == "phi":
        if abs(state.d) > tol or abs(state.w) > tol:
            raise DomainError("phi closed form needs d = 0 and w = 0")
        tot = pp + mm
        jj = np.sqrt((pp - mm) ** 2 + 4.0 * abs(rc.rho_pm) ** 2)
        val = 0.5 * (-2.0 * _xlogx(state.a) - _xlogx(tot - jj) - _xlogx(tot + jj)) + 0.5 * tot * LN4
    else:
        raise DomainError(f"family must be 'psi' or 'phi', got {family!r}")
    return float(np.clip(val, 0.0, LN4))


def measure_sample(state: XState) -> MeasureSample:
    rc = radiant_coords(state)
    return MeasureSample(concurrence_x(state), entropy(state), rc.rho_pp, rc.rho_mm, abs(rc.rho_pm))
