"""Trajectory phenomenology: sudden death and birth, extrema, stationary values, sweeps.

Concurrence zeros come in two kinds.  Inside a finite dark period the
unclamped quantity max(C1, C2) is strictly negative, so the clamped
concurrence sits at zero for a stretch of time.  At an isolated zero it
only touches zero.  Event detection works on the unclamped quantity to tell
the two apart, and refines every boundary on the continuous evaluator.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .constants import EXTREMA_WINDOW, ZERO_TOL
from .errors import DomainError, ResolutionError
from .measures import (concurrence_components, concurrence_x, signed_concurrence_components)
from .solutions import Trajectory, propagate, stationary_state
from .states import EwlPsi, ReservoirParams, as_ewl, radiant_coords

# Largest concurrence jump tolerated between neighbouring samples.
MAX_STEP_CHANGE = 0.05
# Time resolution of refined event boundaries (scaled time).
EVENT_XTOL = 1e-10

PSI_STATIONARY_NOTE = (
    "stationary concurrence of an EWL Psi state equals the constant sub-radiant "
    "population (1-r)/4; the value r/4 quoted in the literature for this state "
    "disagrees with that population and is not used")

DEFAULT_TMAX = 20.0
DEFAULT_STEPS = 2000


@dataclass(frozen=True)
class EntanglementEvents:
    """Summary of the zero set of C(t) along one trajectory.

    ``dark_periods`` holds closed intervals in scaled time.  A degenerate
    interval ``(t, t)`` is an isolated zero.  The separable stretch that
    precedes a sudden birth is reported through ``birth_time`` and is not a
    dark period.
    """

    dark_periods: tuple
    birth_time: float | None
    revivals: int
    stationary_concurrence: float
    horizon: float
    notes: tuple = ()

    @property
    def finite_dark_periods(self) -> tuple:
        return tuple(p for p in self.dark_periods if p[1] > p[0])

    @property
    def isolated_zeros(self) -> tuple:
        return tuple(p[0] for p in self.dark_periods if p[1] == p[0])

    def as_dict(self) -> dict:
        return {
            "dark_periods": [[float(a), float(b)] for a, b in self.dark_periods],
            "birth_time": None if self.birth_time is None else float(self.birth_time),
            "revivals": int(self.revivals),
            "stationary_concurrence": float(self.stationary_concurrence),
            "notes": list(self.notes),
        }


def _signed_at(traj: Trajectory, t) -> np.ndarray:
    v = traj.evolution.x_vectors(np.atleast_1d(np.asarray(t, dtype=float)))
    return signed_concurrence_components(v[:, 0], v[:, 1], v[:, 2], v[:, 3],
                                         v[:, 4] + 1j * v[:, 5], v[:, 6] + 1j * v[:, 7])


def _crossing(f, lo, hi):
    """Root of f between lo and hi, or the nearer end if f does not change sign."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        return lo if abs(flo) < abs(fhi) else hi
    return brentq(f, lo, hi, xtol=EVENT_XTOL)


def _refine_min(f, lo, hi):
    res = minimize_scalar(f, bounds=(lo, hi), method="bounded",
                          options={"xatol": EVENT_XTOL})
    # The bounded search never evaluates the end points themselves.
    cand = [(float(res.fun), float(res.x)), (f(lo), lo), (f(hi), hi)]
    val, x = min(cand)
    return x, val


def notes_for(spec) -> tuple:
    if isinstance(as_ewl(spec), EwlPsi) and getattr(spec, "r", 1.0) < 1.0:
        return (PSI_STATIONARY_NOTE,)
    return ()


def stationary_concurrence(spec, params: ReservoirParams) -> float:
    """Concurrence of the t -> infinity state."""
    return concurrence_x(stationary_state(spec, params))


def detect_events(traj: Trajectory, zero_tol: float = ZERO_TOL,
                  stationary: bool = True) -> EntanglementEvents:
    """Dark periods, sudden birth and revivals of entanglement along ``traj``.

    Parameters
    ----------
    traj : Trajectory
        Sampled evolution.  Concurrence must change by less than 0.05
        between neighbouring samples.
    zero_tol : float
        Concurrence at or below this value counts as zero.
    stationary : bool
        Also compute the stationary concurrence (``nan`` otherwise).
    """
    if zero_tol < 0:
        raise DomainError(f"zero_tol must be non-negative, got {zero_tol!r}")
    t = traj.times
    s = signed_concurrence_components(*traj.components())
    conc = np.clip(s, 0.0, 1.0)
    if len(t) > 1:
        jump = float(np.max(np.abs(np.diff(conc))))
        if jump > MAX_STEP_CHANGE:
            raise ResolutionError(
                f"concurrence changes by {jump:.3g} between samples; refine the time grid")

    def g(x):
        return float(_signed_at(traj, x)[0]) - zero_tol

    def sf(x):
        return float(_signed_at(traj, x)[0])

    n = len(t)
    events = []  # (start, end, is_initial)
    dark = s <= zero_tol
    i = 0
    while i < n:
        if not dark[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and dark[j + 1]:
            j += 1
        lo = t[i] if i == 0 else _crossing(g, t[i - 1], t[i])
        hi = t[j] if j == n - 1 else _crossing(g, t[j], t[j + 1])
        a, b = max(i - 1, 0), min(j + 1, n - 1)
        if np.min(s[i:j + 1]) < -zero_tol:
            events.append((lo, hi, i == 0))
        else:
            tm, vm = _refine_min(sf, t[a], t[b])
            if vm < -zero_tol:
                events.append((lo, hi, i == 0))
            else:
                events.append((tm, tm, i == 0))
        i = j + 1

    # Zeros that fall between samples: discrete local minima above the
    # threshold whose refined minimum reaches it.  A sample above the jump
    # bound cannot hide a zero next to it on a grid that honours the bound.
    for k in range(1, n - 1):
        if dark[k - 1] or dark[k] or dark[k + 1] or s[k] > MAX_STEP_CHANGE:
            continue
        if not (s[k] <= s[k - 1] and s[k] <= s[k + 1]):
            continue
        tm, vm = _refine_min(sf, t[k - 1], t[k + 1])
        if vm > zero_tol:
            continue
        if vm < -zero_tol:
            events.append((_crossing(g, t[k - 1], tm), _crossing(g, tm, t[k + 1]), False))
        else:
            events.append((tm, tm, False))

    events.sort()
    birth = None
    periods = []
    for lo, hi, initial in events:
        if initial:
            if hi < t[-1]:
                birth = float(hi)
            continue
        periods.append((float(lo), float(hi)))
    revivals = sum(1 for lo, hi in periods if hi > lo and hi < t[-1])
    stat = stationary_concurrence(traj.spec, traj.params) if stationary else float("nan")
    return EntanglementEvents(tuple(periods), birth, revivals, stat, float(t[-1]), notes_for(traj.spec))


# --------------------------------------------------------------------------
# Extrema


@dataclass(frozen=True)
class ExtremaReport:
    """Local extrema of two series and their one-to-one matching.

    ``pairs`` holds ``(index_a, index_b, distance)`` into ``times_a`` and
    ``times_b``; only extrema of the same kind (max with max, min with min)
    are paired.
    """

    times_a: np.ndarray
    kinds_a: tuple
    times_b: np.ndarray
    kinds_b: tuple
    pairs: tuple
    window: float

    @property
    def unmatched_a(self) -> int:
        return len(self.times_a) - len(self.pairs)

    @property
    def unmatched_b(self) -> int:
        return len(self.times_b) - len(self.pairs)

    @property
    def max_distance(self) -> float:
        return max((p[2] for p in self.pairs), default=0.0)

    def unmatched_times_a(self) -> list:
        used = {p[0] for p in self.pairs}
        return [float(x) for i, x in enumerate(self.times_a) if i not in used]


def local_extrema(times, y):
    """Interior extrema by the three-point test, refined by a parabola through the neighbours."""
    times = np.asarray(times, dtype=float)
    y = np.asarray(y, dtype=float)
    out_t, kinds = [], []
    for k in range(1, len(y) - 1):
        left, right = y[k] - y[k - 1], y[k + 1] - y[k]
        if left > 0 and right <= 0 and not (right == 0 and k + 2 < len(y) and y[k + 2] > y[k + 1]):
            kind = "max"
        elif left < 0 and right >= 0 and not (right == 0 and k + 2 < len(y) and y[k + 2] < y[k + 1]):
            kind = "min"
        else:
            continue
        t0, t1, t2 = times[k - 1:k + 2]
        y0, y1, y2 = y[k - 1:k + 2]
        den = (t0 - t1) * (t0 - t2) * (t1 - t2)
        a = (t2 * (y1 - y0) + t1 * (y0 - y2) + t0 * (y2 - y1)) / den
        b = (t2 * t2 * (y0 - y1) + t1 * t1 * (y2 - y0) + t0 * t0 * (y1 - y2)) / den
        tv = -b / (2.0 * a) if a != 0 else t1
        out_t.append(float(min(max(tv, t0), t2)))
        kinds.append(kind)
    return np.array(out_t), tuple(kinds)


def extrema_alignment(series_a, series_b, times, window: float = EXTREMA_WINDOW) -> ExtremaReport:
    """Match the local extrema of two series on a common time grid within ``window``."""
    times = np.asarray(times, dtype=float)
    a = np.asarray(series_a, dtype=float)
    b = np.asarray(series_b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise DomainError("extrema_alignment needs non-empty series")
    if not (a.shape == b.shape == times.shape):
        raise DomainError("series and times must share one grid")
    ta, ka = local_extrema(times, a)
    tb, kb = local_extrema(times, b)
    cand = sorted((abs(x - y), i, j) for i, x in enumerate(ta) for j, y in enumerate(tb)
                  if ka[i] == kb[j] and abs(x - y) <= window)
    used_a, used_b, pairs = set(), set(), []
    for dist, i, j in cand:
        if i in used_a or j in used_b:
            continue
        used_a.add(i)
        used_b.add(j)
        pairs.append((i, j, float(dist)))
    pairs.sort()
    return ExtremaReport(ta, ka, tb, kb, tuple(pairs), float(window))


# --------------------------------------------------------------------------
# Zeros of single-excitation trajectories


@dataclass(frozen=True)
class ZeroRecord:
    time: float
    concurrence: float
    rho_pp: float
    rho_mm: float
    abs_rho_pm: float
    pp_minus_mm: float
    pp_minus_abs_pm: float
    variant: str  # "|01>", "|10>" or "unclassified"
    k: float


@dataclass(frozen=True)
class ZeroConditionReport:
    zeros: tuple
    tol: float

    @property
    def satisfied(self) -> bool:
        return all(z.pp_minus_mm < self.tol and z.pp_minus_abs_pm < self.tol for z in self.zeros)


def zero_condition_check(traj: Trajectory, zero_tol: float = ZERO_TOL,
                         tol: float = 1e-4) -> ZeroConditionReport:
    """Radiant populations and coherence at each concurrence zero of a one-excitation trajectory.

    At a zero the state should reduce to (1-k)|00><00| + k|01><01| (b = 0)
    or the |10> variant (c = 0), with k = 2 rho_mm.
    """
    _, _, _, d, w, _ = traj.components()
    if np.max(np.abs(d)) > 1e-8 or np.max(np.abs(w)) > 1e-8:
        raise DomainError("zero_condition_check needs a trajectory with d = 0 and w = 0")
    ev = detect_events(traj, zero_tol, stationary=False)
    records = []
    for lo, hi in ev.dark_periods:
        tz = 0.5 * (lo + hi)
        st = traj.evolution.state(tz)
        rc = radiant_coords(st)
        if st.b < tol:
            variant, k = "|01>", st.c
        elif st.c < tol:
            variant, k = "|10>", st.b
        else:
            variant, k = "unclassified", float("nan")
        records.append(ZeroRecord(float(tz), concurrence_x(st), rc.rho_pp, rc.rho_mm, abs(rc.rho_pm),
                                  abs(rc.rho_pp - rc.rho_mm), abs(rc.rho_pp - abs(rc.rho_pm)),
                                  variant, float(k)))
    return ZeroConditionReport(tuple(records), tol)


# --------------------------------------------------------------------------
# Sweeps


AXES = ("r", "alpha2", "theta")


@dataclass(frozen=True, eq=False)
class SweepGrid:
    """Concurrence on an (axis value) x (scaled time) grid."""

    axis_name: str
    axis_values: np.ndarray
    times: np.ndarray
    concurrence: np.ndarray
    params: ReservoirParams
    template: object

    def rows(self):
        """Long-format rows (axis value, scaled time, concurrence), axis-major."""
        for i, v in enumerate(self.axis_values):
            for j, tt in enumerate(self.times):
                yield float(v), float(tt), float(self.concurrence[i, j])


def sweep(template, axis: str, values, params: ReservoirParams, times) -> SweepGrid:
    """One trajectory per value of ``axis``, substituted into ``template``."""
    if axis not in AXES:
        raise DomainError(f"axis must be one of {AXES}, got {axis!r}")
    names = {f.name for f in dataclasses.fields(template)}
    if axis not in names:
        raise DomainError(f"{type(template).__name__} has no field {axis!r}")
    values = np.asarray(values, dtype=float)
    times = np.asarray(times, dtype=float)
    grid = np.empty((len(values), len(times)))
    for i, v in enumerate(values):
        spec = dataclasses.replace(template, **{axis: float(v)})
        traj = propagate(spec, params, times)
        grid[i] = concurrence_components(*traj.components())
    return SweepGrid(axis, values, times, grid, params, template)
