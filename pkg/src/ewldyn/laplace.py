"""Exact inversion of proper rational Laplace transforms.

A :class:`RationalLaplace` keeps its denominator as a product of factors so
that poles are located factor by factor (the transforms used here have
denominators such as ``s * j(s) * k(s)`` whose factors are at most cubic).
Inversion is by partial fractions into an :class:`ExponentialSum`; a fixed
Talbot quadrature serves as an independent numerical check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from numbers import Number

import numpy as np
from numpy.polynomial import polynomial as P

from .constants import TRIM_RTOL
from .errors import (ClusteredRootsError, ConjugatePairError, ContractError,
                     DomainError, StabilityError)

# Roots closer than this (relative) are always one pole.
MERGE_RTOL = 1e-8
# Roots closer than this are examined as a possible multiple root.
CLUSTER_RTOL = 1e-3
# Roots below this magnitude are compared in absolute terms.
ABS_FLOOR = 1e-12
# A pole counts as sitting at the origin / on the imaginary axis below this.
AXIS_TOL = 1e-10


def _as_coefficients(c) -> np.ndarray:
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    if c.size == 0:
        raise DomainError("polynomial needs at least one coefficient")
    scale = np.max(np.abs(c))
    if scale == 0:
        return np.zeros(1)
    keep = np.nonzero(np.abs(c) >= TRIM_RTOL * scale)[0]
    c = c[: keep[-1] + 1]
    if np.all(c.imag == 0):
        return c.real.copy()
    return c


class Polynomial:
    """Polynomial in s with ascending coefficients.

    Coefficients below ``TRIM_RTOL`` times the largest one are trimmed from
    the top, so the leading coefficient is always significant.
    """

    __slots__ = ("coefficients",)

    def __init__(self, coefficients):
        self.coefficients = _as_coefficients(coefficients)

    @classmethod
    def s(cls) -> "Polynomial":
        return cls([0.0, 1.0])

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self):
        return self.coefficients[-1]

    @property
    def is_zero(self) -> bool:
        return self.degree == 0 and self.coefficients[0] == 0

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.coefficients)

    def __call__(self, s):
        return P.polyval(s, self.coefficients)

    def __repr__(self):
        return f"Polynomial({self.coefficients.tolist()!r})"

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other.coefficients
        if isinstance(other, Number):
            return np.array([other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Polynomial(P.polyadd(self.coefficients, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Polynomial(P.polysub(self.coefficients, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Polynomial(P.polysub(o, self.coefficients))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Polynomial(P.polymul(self.coefficients, o))

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial(-self.coefficients)

    def __pow__(self, n: int):
        return Polynomial(P.polypow(self.coefficients, n))

    def conj(self) -> "Polynomial":
        return Polynomial(np.conj(self.coefficients))

    def derivative(self, order: int = 1) -> "Polynomial":
        if order > self.degree:
            return Polynomial([0.0])
        return Polynomial(P.polyder(self.coefficients, order))

    def taylor(self, at, order: int) -> np.ndarray:
        """Coefficients ``t_0..t_order`` of ``p(at + h) = sum t_k h^k``."""
        out = np.zeros(order + 1, dtype=complex)
        c = self.coefficients.astype(complex)
        for k in range(order + 1):
            if k > self.degree:
                break
            out[k] = P.polyval(at, c) / math.factorial(k)
            c = P.polyder(c)
        return out

    def scale_at(self, s) -> float:
        """Size of the terms of p near s, for relative residual tests."""
        return float(np.max(np.abs(self.coefficients))) * max(1.0, abs(s)) ** self.degree

    def allclose(self, other: "Polynomial", rtol=1e-12, atol=0.0) -> bool:
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        a = np.pad(a, (0, n - len(a)))
        b = np.pad(b, (0, n - len(b)))
        return bool(np.allclose(a, b, rtol=rtol, atol=atol))


def poly_roots(p: Polynomial) -> np.ndarray:
    """All roots of ``p`` with multiplicity.

    Companion-matrix eigenvalues followed by Newton polishing.
    """
    if not isinstance(p, Polynomial):
        p = Polynomial(p)
    n = p.degree
    if n < 1:
        raise DomainError("poly_roots needs a polynomial of degree >= 1")
    c = p.coefficients.astype(complex)
    if n == 1:
        return np.array([-c[0] / c[1]])
    monic = c[:-1] / c[-1]
    companion = np.zeros((n, n), dtype=complex)
    companion[1:, :-1] = np.eye(n - 1)
    companion[:, -1] = -monic
    if p.is_real:
        companion = companion.real
    roots = np.linalg.eigvals(companion).astype(complex)
    # Newton polishing skews the members of a multiple root and spoils
    # their mean, so only isolated roots are polished.
    dp = P.polyder(c)
    for group in cluster_roots(roots, CLUSTER_RTOL):
        if len(group) > 1:
            continue
        i = group[0]
        x = roots[i]
        fx = P.polyval(x, c)
        for _ in range(3):
            d = P.polyval(x, dp)
            if d == 0:
                break
            x_new = x - fx / d
            f_new = P.polyval(x_new, c)
            if not abs(f_new) < abs(fx):
                break
            x, fx = x_new, f_new
        roots[i] = x
    if p.is_real:
        roots = np.where(np.abs(roots.imag) <= 1e-14 * np.maximum(1.0, np.abs(roots)),
                         roots.real + 0j, roots)
    return roots


def cluster_roots(roots, rtol: float) -> list[list[int]]:
    """Single-linkage clusters of root indices closer than ``rtol`` (relative)."""
    roots = np.asarray(roots, dtype=complex)
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            scale = max(abs(roots[i]), abs(roots[j]), ABS_FLOOR)
            if abs(roots[i] - roots[j]) <= rtol * scale:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


class RationalLaplace:
    """``numerator(s) / prod(factors(s))``."""

    __slots__ = ("numerator", "factors", "_poles")

    def __init__(self, numerator, denominator):
        if not isinstance(numerator, Polynomial):
            numerator = Polynomial(numerator)
        if isinstance(denominator, (Polynomial, Number)) or (
                isinstance(denominator, (list, np.ndarray)) and np.ndim(denominator) == 1
                and not isinstance(denominator[0], Polynomial)):
            denominator = (denominator,)
        factors = tuple(f if isinstance(f, Polynomial) else Polynomial(f) for f in denominator)
        if any(f.is_zero for f in factors):
            raise ContractError("denominator is identically zero")
        self.numerator = numerator
        self.factors = factors
        self._poles = None

    @classmethod
    def constant(cls, value) -> "RationalLaplace":
        """Transform of the constant signal ``value``, i.e. value / s."""
        return cls(Polynomial([value]), Polynomial.s())

    @classmethod
    def zero(cls) -> "RationalLaplace":
        return cls(Polynomial([0.0]), Polynomial([1.0]))

    @property
    def denominator(self) -> Polynomial:
        out = Polynomial([1.0])
        for f in self.factors:
            out = out * f
        return out

    @property
    def is_proper(self) -> bool:
        return self.numerator.is_zero or self.numerator.degree <= self.denominator.degree

    @property
    def is_real(self) -> bool:
        return self.numerator.is_real and all(f.is_real for f in self.factors)

    def __call__(self, s):
        den = 1.0
        for f in self.factors:
            den = den * f(s)
        return self.numerator(s) / den

    def __repr__(self):
        return f"RationalLaplace({self.numerator!r}, {self.factors!r})"

    def scaled(self, c) -> "RationalLaplace":
        return RationalLaplace(self.numerator * c, self.factors)

    def conj(self) -> "RationalLaplace":
        return RationalLaplace(self.numerator.conj(), tuple(f.conj() for f in self.factors))

    def real_part(self) -> "RationalLaplace":
        """Transform of Re f(t); valid when the denominator is real."""
        return RationalLaplace(Polynomial(np.real(self.numerator.coefficients)), self.factors)

    def imag_part(self) -> "RationalLaplace":
        return RationalLaplace(Polynomial(np.imag(self.numerator.coefficients)), self.factors)

    def poles(self) -> list[tuple[complex, int]]:
        """Distinct poles with multiplicity (before any cancellation)."""
        if self._poles is None:
            self._poles = _resolve_poles(self)
        return self._poles


def _key(p: Polynomial) -> tuple:
    return tuple(complex(x) for x in p.coefficients)


@lru_cache(maxsize=4096)
def _factor_roots(key: tuple) -> tuple:
    return tuple(poly_roots(Polynomial(np.array(key))))


def _resolve_poles(f: RationalLaplace) -> list[tuple[complex, int]]:
    return list(_resolve_poles_cached(tuple(_key(g) for g in f.factors if g.degree >= 1)))


@lru_cache(maxsize=4096)
def _resolve_poles_cached(keys: tuple) -> tuple:
    # Transforms of one reservoir share a handful of denominator factors, so
    # roots and their clustering are memoised on the exact coefficients.
    roots = np.array([r for k in keys for r in _factor_roots(k)], dtype=complex)
    if roots.size == 0:
        return ()
    den = Polynomial([1.0])
    for k in keys:
        den = den * Polynomial(np.array(k))
    out = []
    for group in cluster_roots(roots, CLUSTER_RTOL):
        members = roots[group]
        m = len(members)
        if m == 1:
            out.append((complex(members[0]), 1))
            continue
        centre = complex(np.mean(members))
        spread = float(np.max(np.abs(members - centre)))
        scale = max(abs(centre), ABS_FLOOR)
        if spread <= MERGE_RTOL * scale or _is_multiple_root(den, centre, m):
            out.append((centre, m))
        else:
            out.extend((complex(x), 1) for x in members)
    return tuple(out)


def _is_multiple_root(den: Polynomial, at: complex, m: int) -> bool:
    """Do den and its first m-1 derivatives vanish at ``at`` to round-off?"""
    t = den.taylor(at, m)
    ref = den.scale_at(at)
    return bool(np.all(np.abs(t[:m]) <= 1e3 * np.finfo(float).eps * ref))


@dataclass(frozen=True, eq=False)
class ExponentialSum:
    """``sum residue * t**(m-1) / (m-1)! * exp(pole * t)`` over the terms."""

    poles: np.ndarray
    residues: np.ndarray
    multiplicities: np.ndarray

    @classmethod
    def empty(cls) -> "ExponentialSum":
        return cls(np.zeros(0, complex), np.zeros(0, complex), np.zeros(0, int))

    def __len__(self):
        return len(self.poles)

    @property
    def terms(self):
        return list(zip(self.poles.tolist(), self.residues.tolist(), self.multiplicities.tolist()))

    def evaluate(self, t):
        """Complex value of the sum at time(s) ``t``."""
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < 0):
            raise DomainError("exponential sums are evaluated at t >= 0 only")
        tt = t_arr.reshape(-1, 1)
        powers = self.multiplicities - 1
        coef = self.residues / np.array([math.factorial(k) for k in powers], dtype=float)
        vals = (np.exp(tt * self.poles) * tt ** powers) @ coef if len(self) else np.zeros(tt.shape[0], complex)
        return vals.reshape(t_arr.shape) if t_arr.ndim else complex(vals[0])

    __call__ = evaluate

    def __add__(self, other: "ExponentialSum") -> "ExponentialSum":
        return ExponentialSum(np.concatenate([self.poles, other.poles]),
                              np.concatenate([self.residues, other.residues]),
                              np.concatenate([self.multiplicities, other.multiplicities]))

    def scaled(self, c) -> "ExponentialSum":
        return ExponentialSum(self.poles, self.residues * c, self.multiplicities)


def _inverse_power_series(delta: complex, m: int, order: int) -> np.ndarray:
    """Coefficients of (delta + h)^(-m) up to h^order."""
    k = np.arange(order + 1)
    binom = np.array([math.comb(m + kk - 1, kk) for kk in k], dtype=float)
    return binom * (-1.0) ** k * delta ** (-(m + k).astype(float))


def partial_fractions(f: RationalLaplace) -> ExponentialSum:
    """Invert ``f`` into a sum of (possibly polynomially weighted) exponentials."""
    num, den = f.numerator, f.denominator
    if num.is_zero:
        return ExponentialSum.empty()
    if num.degree > den.degree:
        raise ContractError(f"transform is improper: deg num {num.degree} > deg den {den.degree}")
    if num.degree == den.degree:
        impulse = num.leading / den.leading
        if abs(impulse) > 1e-12:
            raise ContractError(f"transform has an impulse part {impulse!r}; expected impulse-free")
        num = Polynomial(num.coefficients[:-1])
        if num.is_zero:
            return ExponentialSum.empty()
    lead = np.prod([g.leading for g in f.factors])
    poles = f.poles()
    out_p, out_r, out_m = [], [], []
    simple = all(m == 1 for _, m in poles)
    for i, (p, m) in enumerate(poles):
        if simple:
            prod = lead
            for j, (q, _) in enumerate(poles):
                if j != i:
                    prod = prod * (p - q)
            out_p.append(p)
            out_r.append(num(p) / prod)
            out_m.append(1)
            continue
        series = num.taylor(p, m - 1) / lead
        for j, (q, mq) in enumerate(poles):
            if j != i:
                series = np.convolve(series, _inverse_power_series(p - q, mq, m - 1))[:m]
        # series[k] multiplies (s - p)^(k - m)  ->  power n = m - k
        for k in range(m):
            out_p.append(p)
            out_r.append(series[k])
            out_m.append(m - k)
    poles_arr = np.array(out_p, dtype=complex)
    res = np.array(out_r, dtype=complex)
    _check_cluster_conditioning(poles_arr, res)
    return ExponentialSum(poles_arr, res, np.array(out_m, dtype=int))


def _check_cluster_conditioning(poles, residues):
    """Distinct but nearly coincident poles with cancelling huge residues."""
    for group in cluster_roots(poles, CLUSTER_RTOL):
        if len(group) < 2 or np.ptp(poles[group].real) == 0 and np.ptp(poles[group].imag) == 0:
            continue
        r = residues[group]
        if np.max(np.abs(r)) > 1e6 * (1.0 + abs(np.sum(r))):
            raise ClusteredRootsError(
                "near-coincident poles produce cancelling residues of size "
                f"{np.max(np.abs(r)):.3g}", cluster=poles[group])


def eval_exp_sum(e: ExponentialSum, t):
    """Real value of a sum that is expected to describe a real signal."""
    v = e.evaluate(t)
    imag = np.max(np.abs(np.imag(v))) if np.ndim(v) else abs(v.imag)
    if imag > 1e-6:
        raise ConjugatePairError(f"imaginary part {imag:.3g} exceeds 1e-6; poles are not conjugate-paired")
    return np.real(v) if np.ndim(v) else v.real


def initial_value(f: RationalLaplace):
    """lim s->inf of s f(s), the signal at t = 0+."""
    num, den = f.numerator, f.denominator
    if num.is_zero or num.degree < den.degree - 1:
        return 0j
    if num.degree == den.degree - 1:
        return complex(num.leading / den.leading)
    raise ContractError("initial value diverges: transform is not strictly proper")


def final_value(f: RationalLaplace):
    """lim s->0 of s f(s), the signal at t -> inf.

    Requires every pole in the open left half-plane apart from at most a
    simple pole at the origin.
    """
    if f.numerator.is_zero:
        return 0j
    e = partial_fractions(f)
    value = 0j
    for p, r, m in e.terms:
        if abs(r) == 0:
            continue
        if abs(p) <= AXIS_TOL:
            if m > 1:
                raise StabilityError(f"pole of order {m} at the origin: signal grows without bound")
            value += r
        elif p.real >= -AXIS_TOL:
            raise StabilityError(f"pole {p!r} is not in the open left half-plane")
    return value


# Weideman-Trefethen cotangent contour, s(u) = (N/t)(A u cot(B u) - C + i D u).
_TALBOT_A, _TALBOT_B, _TALBOT_C, _TALBOT_D = 0.5017, 0.6407, 0.6122, 0.2645


def talbot_invert(f, t, nodes: int = 64):
    """Numerical inverse transform by trapezoidal quadrature on a Talbot contour.

    ``f`` is any callable of complex s (a :class:`RationalLaplace` works).
    Returns real values when ``f`` has real coefficients, complex otherwise.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise DomainError("talbot_invert needs t > 0")
    u = -np.pi + (np.arange(nodes) + 0.5) * (2 * np.pi / nodes)
    cot = 1.0 / np.tan(_TALBOT_B * u)
    shape = _TALBOT_A * u * cot - _TALBOT_C + 1j * _TALBOT_D * u
    dshape = (_TALBOT_A * cot - _TALBOT_A * _TALBOT_B * u / np.sin(_TALBOT_B * u) ** 2
              + 1j * _TALBOT_D)
    tt = t_arr.reshape(-1, 1)
    s = nodes / tt * shape
    ds = nodes / tt * dshape
    vals = np.sum(np.exp(s * tt) * f(s) * ds, axis=1) / (1j * nodes)
    if getattr(f, "is_real", False):
        vals = vals.real
    return vals.reshape(t_arr.shape) if t_arr.ndim else vals[0]
