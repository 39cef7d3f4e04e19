"""Independent reference implementations used to check the main code paths.

The dynamics reference integrates the two qubits together with one damped
pseudomode in the time domain (matrix exponential of the Lindblad
generator), with no Laplace transforms involved.

Nothing here is on the simulation path.  The eigen-solver is a cyclic
Jacobi iteration and the brute-force concurrence goes through the
characteristic polynomial of R, so neither shares code with
:mod:`ewldyn.measures` beyond :func:`ewldyn.laplace.poly_roots`.

The concurrence needs square roots of the eigenvalues of R, so an absolute
error eps in a small eigenvalue costs sqrt(eps) in the result.  The
characteristic polynomial is therefore formed exactly (float entries are
dyadic rationals) and its roots are refined against the exact coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import expm

from .errors import DomainError, NumericalFailure
from .laplace import Polynomial, poly_roots
from .measures import SIGMA_YY
from .states import ReservoirParams, SingleExcitation, XState, extract_x, to_dense

FAMILIES = ("general-X", "single-excitation", "physical-dense")
# Eigenvalues of R below this fraction of the largest are refined exactly.
POLISH_BELOW = 1e-2


# --------------------------------------------------------------------------
# Hermitian eigenvalues


def eig_hermitian4(m, vectors: bool = False, tol: float = 1e-15, max_sweeps: int = 60):
    """Eigenvalues (descending) of a Hermitian matrix by cyclic complex Jacobi.

    Parameters
    ----------
    m : array_like
        Hermitian matrix, in practice 4x4.
    vectors : bool
        Also return the unitary whose columns are the eigenvectors.

    Returns
    -------
    ndarray or (ndarray, ndarray)
    """
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise DomainError("eig_hermitian4 needs a square matrix")
    if np.max(np.abs(a - a.conj().T), initial=0.0) > 1e-12:
        raise DomainError("matrix is not Hermitian within 1e-12")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    norm = max(np.linalg.norm(a), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2))
        if off <= tol * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                # Unitary rotation in the (p, q) plane; the phase of a_pq is
                # folded into the q-column so the 2x2 problem becomes real.
                ph = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                j = np.eye(n, dtype=complex)
                j[p, p] = c
                j[q, q] = c
                j[p, q] = s * ph
                j[q, p] = -s * np.conj(ph)
                a = j.conj().T @ a @ j
                a[p, q] = a[q, p] = 0.0
                v = v @ j
    else:
        raise NumericalFailure("Jacobi iteration did not converge")
    w = np.diag(a).real.copy()
    order = np.argsort(w)[::-1]
    if vectors:
        return w[order], v[:, order]
    return w[order]


# --------------------------------------------------------------------------
# Brute-force Wootters concurrence


def _to_gaussian_ints(rho):
    """Exact (re, im) integer matrices and exponent E with rho = (re + i im) / 2**E."""
    vals = [float(v) for x in rho.ravel() for v in (x.real, x.imag) if v != 0.0]
    e = max((53 - math.frexp(v)[1] for v in vals), default=0)
    e = max(e, 0)
    scale = 1 << e

    def conv(x):
        return np.array([[int(Fraction(float(v)) * scale) for v in row] for row in x], dtype=object)

    return conv(rho.real), conv(rho.imag), e


def _cmatmul(ar, ai, br, bi):
    return ar.dot(br) - ai.dot(bi), ar.dot(bi) + ai.dot(br)


def r_charpoly(rho) -> list[Fraction]:
    """Exact characteristic polynomial (ascending) of R = rho (sy x sy) rho* (sy x sy).

    rho is read as the exact binary values of its float entries, so R and
    the Faddeev-LeVerrier recursion run in Gaussian integers without any
    rounding.  The coefficients are real for Hermitian rho.
    """
    rho = np.asarray(rho, dtype=complex)
    re, im, e = _to_gaussian_ints(rho)
    yy = SIGMA_YY.real.astype(int).astype(object)
    fr, fi = yy.dot(re).dot(yy), -yy.dot(im).dot(yy)
    rr, ri = _cmatmul(re, im, fr, fi)
    n = 4
    cr, ci = [0] * (n + 1), [0] * (n + 1)
    cr[n] = 1
    zero = np.zeros((n, n), dtype=object)
    eye = np.eye(n, dtype=int).astype(object)
    mr, mi = zero.copy(), zero.copy()
    for k in range(1, n + 1):
        pr, pi = _cmatmul(rr, ri, mr, mi)
        mr, mi = pr + cr[n - k + 1] * eye, pi + ci[n - k + 1] * eye
        tr, ti = _cmatmul(rr, ri, mr, mi)
        sr, si = -sum(tr[i, i] for i in range(n)), -sum(ti[i, i] for i in range(n))
        if sr % k or si % k:
            raise NumericalFailure("non-integral Faddeev-LeVerrier coefficient")
        cr[n - k], ci[n - k] = sr // k, si // k
    if any(ci):
        raise NumericalFailure("characteristic polynomial of R is not real")
    # R was scaled by 2**(2E); undo it coefficient by coefficient.
    return [Fraction(cr[i], 1 << (2 * e * (n - i))) for i in range(n + 1)]


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _pdiv(a, b):
    a, b = _trim(a), _trim(b)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        q[shift] = f
        for i, bi in enumerate(b):
            a[i + shift] -= f * bi
        a = _trim(a[:-1])
    return _trim(q), a


def _pgcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _pdiv(a, b)[1]
    return [x / a[-1] for x in a]


def _pder(p):
    return [i * p[i] for i in range(1, len(p))]


def squarefree_factors(p) -> list[tuple[list[Fraction], int]]:
    """Yun's square-free decomposition over the rationals: [(factor, multiplicity)]."""
    p = _trim(p)
    out = []
    dp = _pder(p)
    g = _pgcd(p, dp)
    b = _pdiv(p, g)[0]
    c = _pdiv(dp, g)[0]
    d = [ci - bi for ci, bi in zip(c + [0] * len(b), _pder(b) + [0] * len(c))]
    m = 1
    while len(_trim(b)) > 1:
        a = _pgcd(b, d)
        if len(a) > 1:
            out.append((a, m))
        b = _pdiv(b, a)[0]
        c = _pdiv(d, a)[0]
        d = [ci - bi for ci, bi in zip(c + [0] * len(b), _pder(b) + [0] * len(c))]
        d = _trim(d)
        m += 1
    return out


def _peval(p, x: Fraction):
    out = Fraction(0)
    for coef in reversed(p):
        out = out * x + coef
    return out


def _exact_newton(p, x: float, steps: int = 60) -> float:
    """Newton iterates rounded to float, with the residual evaluated exactly."""
    dp = _pder(p)
    for _ in range(steps):
        fx = _peval(p, Fraction(x))
        if fx == 0:
            return x
        d = _peval(dp, Fraction(x))
        if d == 0:
            return x
        x_new = float(Fraction(x) - fx / d)
        if x_new == x:
            return x
        x = x_new
    return x


def _factor_roots(factor) -> list[float]:
    """Real roots of a square-free rational factor of the R polynomial."""
    if len(factor) == 2:
        return [float(-factor[0] / factor[1])]
    approx = poly_roots(Polynomial([float(x) for x in factor]))
    top = float(np.max(np.abs(approx)))
    out = []
    for x in approx:
        # Large roots are already accurate enough for their square roots;
        # small ones get refined against the exact coefficients.
        if abs(x.imag) > 1e-8 * max(1.0, abs(x)) or abs(x) < POLISH_BELOW * top:
            xr = _exact_newton(factor, float(x.real))
            scale = sum(abs(float(c)) * max(1.0, abs(xr)) ** i for i, c in enumerate(factor))
            if abs(x.imag) > 1e-8 * max(1.0, abs(x)) and abs(float(_peval(factor, Fraction(xr)))) > 1e-12 * scale:
                raise NumericalFailure(f"R has a complex eigenvalue {complex(x)}")
            out.append(xr)
        else:
            out.append(float(x.real))
    return out


def r_eigenvalues(rho) -> np.ndarray:
    """Eigenvalues of R from its exact characteristic polynomial."""
    p = r_charpoly(rho)
    approx = poly_roots(Polynomial([float(x) for x in p]))
    spread = np.abs(approx[:, None] - approx[None, :]) + np.eye(len(approx))
    if p[0] == 0 or np.min(spread) <= 1e-6 * max(1.0, float(np.max(np.abs(approx)))):
        pieces = squarefree_factors(p)
    else:
        pieces = [(p, 1)]
    lam = []
    for factor, mult in pieces:
        lam.extend(_factor_roots(factor) * mult)
    return np.sort(np.array(lam))[::-1]


def wootters_bruteforce(rho) -> float:
    """Concurrence from the eigenvalues of R found via its characteristic polynomial."""
    if isinstance(rho, XState):
        from .states import to_dense
        rho = to_dense(rho)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DomainError("expected a 4x4 density matrix")
    lam = np.clip(r_eigenvalues(rho), 0.0, None)
    s = np.sort(np.sqrt(lam))[::-1]
    return float(min(1.0, max(0.0, s[0] - s[1:].sum())))


# --------------------------------------------------------------------------
# Random states


@dataclass(frozen=True)
class RandomStateGen:
    """Seeded generator of random states of one family.

    ``general-X`` yields :class:`XState`, ``single-excitation`` yields
    :class:`SingleExcitation` specs and ``physical-dense`` yields 4x4 arrays.
    All are convex mixtures of one to four random pure states, so positivity
    holds by construction.
    """

    seed: int
    family: str = "general-X"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"family must be one of {FAMILIES}, got {self.family!r}")


def _pure(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def _mixture(rng, vectors):
    w = rng.dirichlet(np.ones(len(vectors)))
    return sum(wi * np.outer(v, v.conj()) for wi, v in zip(w, vectors))


def _general_x(rng) -> XState:
    n = rng.integers(1, 5)
    outer = np.zeros((2, 2), complex)
    inner = np.zeros((2, 2), complex)
    w = rng.dirichlet(np.ones(n))
    for wi in w:
        v = _pure(rng, 2)
        if rng.random() < 0.5:
            outer += wi * np.outer(v, v.conj())
        else:
            inner += wi * np.outer(v, v.conj())
    a = outer[0, 0].real
    b, c = inner[0, 0].real, inner[1, 1].real
    return XState(a, b, c, 1.0 - a - b - c, complex(outer[0, 1]), complex(inner[0, 1]))


def _single_excitation(rng) -> SingleExcitation:
    n = rng.integers(1, 5)
    m = _mixture(rng, [_pure(rng, 3) for _ in range(n)])
    a, b = m[0, 0].real, m[1, 1].real
    return SingleExcitation(a, b, 1.0 - a - b, complex(m[0, 1]), complex(m[0, 2]), complex(m[1, 2]))


def _dense(rng) -> np.ndarray:
    n = rng.integers(1, 5)
    m = _mixture(rng, [_pure(rng, 4) for _ in range(n)])
    return 0.5 * (m + m.conj().T)


_MAKERS = {"general-X": _general_x, "single-excitation": _single_excitation, "physical-dense": _dense}


def gen_states(gen: RandomStateGen, n: int) -> list:
    """``n`` states from ``gen``; the same generator always gives the same list."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n!r}")
    rng = np.random.default_rng(gen.seed)
    make = _MAKERS[gen.family]
    return [make(rng) for _ in range(n)]


# --------------------------------------------------------------------------
# Pseudomode master equation


# |10> means the first qubit is excited; kron ordering puts it at index 2.
_KRON_ORDER = [0, 2, 1, 3]


def pseudomode_generator(params: ReservoirParams, levels: int = 3) -> np.ndarray:
    """Lindblad generator (row-major vectorisation) of qubits + pseudomode.

    H = Omega sum_i (sigma_i^+ a + sigma_i a^+), jump operator sqrt(Gamma) a.
    Three Fock levels hold every state with at most two excitations.
    """
    lower = np.array([[0, 1], [0, 0]], complex)
    i2, im = np.eye(2), np.eye(levels)
    a = np.diag(np.sqrt(np.arange(1, levels)), 1).astype(complex)
    s1 = np.kron(np.kron(lower, i2), im)
    s2 = np.kron(np.kron(i2, lower), im)
    mode = np.kron(np.eye(4), a)
    h = params.omega * ((s1 + s2).conj().T @ mode + mode.conj().T @ (s1 + s2))
    jump = math.sqrt(params.gamma) * mode
    jj = jump.conj().T @ jump
    ident = np.eye(h.shape[0])
    return (-1j * (np.kron(h, ident) - np.kron(ident, h.T)) + np.kron(jump, jump.conj())
            - 0.5 * np.kron(jj, ident) - 0.5 * np.kron(ident, jj.T))


def lindblad_reference(state: XState, params: ReservoirParams, times, levels: int = 3) -> np.ndarray:
    """X-vectors ``(a, b, c, d, Re w, Im w, Re z, Im z)`` at scaled times."""
    gen = pseudomode_generator(params, levels)
    n = 4 * levels
    vac = np.zeros((levels, levels))
    vac[0, 0] = 1.0
    rho = to_dense(state)[np.ix_(_KRON_ORDER, _KRON_ORDER)]
    r0 = np.kron(rho, vac).reshape(-1)
    out = []
    for t in np.atleast_1d(times):
        rt = (expm(gen * (t / params.gamma0)) @ r0).reshape(n, n)
        q = np.einsum("ikjk->ij", rt.reshape(4, levels, 4, levels))
        out.append(extract_x(q[np.ix_(_KRON_ORDER, _KRON_ORDER)]).as_vector())
    return np.array(out)
