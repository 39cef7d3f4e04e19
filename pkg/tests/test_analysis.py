import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ewldyn import (BellPhi, BellPsi, DomainError, EwlPhi, EwlPsi, FactorizedMixed, ReservoirParams,
                    ResolutionError, Werner, concurrence_x, construct_initial, detect_events, extrema_alignment, propagate,
                    stationary_concurrence, sweep, zero_condition_check)
from ewldyn.analysis import PSI_STATIONARY_NOTE, local_extrema
from ewldyn.measures import entropy_components
from ewldyn.oracles import (RandomStateGen, gen_states, lindblad_reference, wootters_bruteforce)
from ewldyn.states import XState

HORIZON = np.linspace(0.0, 100.0, 2001)

# Event times at Omega = 5 Gamma on [0, 100].  Each boundary was bracketed
# with the pseudomode master equation and the exact-arithmetic concurrence
# (positive 1e-3 outside, zero inside); see test_boundaries_bracketed.
BELL_PSI_005 = ((11.803631693946452, 18.413434857671923),
                (33.41539903656035, 46.37859238027534),
                (80.96740536197976, 100.0))
FACTORIZED_075_BIRTH = 20.79159171550363
FACTORIZED_075 = ((29.471950612755137, 70.49536358563304), (76.93675533391078, 100.0))
BELL_PHI_02_ZEROS = (17.696030056954356, 27.897448330637943, 61.538641348101734, 73.00605395324071)
BELL_PHI_05_ZEROS = (22.7287282340161, 67.18535195200448)


@pytest.fixture(scope="module")
def events(strong):
    specs = {"psi005": BellPsi(0.05), "psi05": BellPsi(0.5), "fm": FactorizedMixed(0.75),
             "phi02": BellPhi(0.2, 0.0), "phi05": BellPhi(0.5, 0.0),
             "singlet": BellPhi(0.5, math.pi)}
    return {k: detect_events(propagate(s, strong, HORIZON)) for k, s in specs.items()}


def test_bell_psi_sudden_death(events):
    ev = events["psi005"]
    np.testing.assert_allclose(ev.dark_periods, BELL_PSI_005, atol=1e-6)
    assert ev.revivals == 2 and ev.birth_time is None


def test_bell_psi_balanced_no_death(events):
    ev = events["psi05"]
    assert ev.dark_periods == () and ev.revivals == 0


def test_factorized_sudden_birth(events):
    ev = events["fm"]
    assert ev.birth_time == pytest.approx(FACTORIZED_075_BIRTH, abs=1e-6)
    np.testing.assert_allclose(ev.dark_periods, FACTORIZED_075, atol=1e-6)
    assert ev.revivals == 1
    assert ev.stationary_concurrence == pytest.approx(0.1875, abs=1e-12)


def test_single_excitation_zeros_are_isolated(events):
    np.testing.assert_allclose(events["phi02"].isolated_zeros, BELL_PHI_02_ZEROS, atol=2e-6)
    np.testing.assert_allclose(events["phi05"].isolated_zeros, BELL_PHI_05_ZEROS, atol=2e-6)
    assert events["phi02"].finite_dark_periods == ()


def test_decoupled_singlet_never_dark(events, strong):
    assert events["singlet"].dark_periods == ()
    assert events["singlet"].stationary_concurrence == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("spec, periods", [(BellPsi(0.05), BELL_PSI_005),
                                           (FactorizedMixed(0.75), FACTORIZED_075)])
def test_boundaries_bracketed(spec, periods, strong):
    x0 = construct_initial(spec)

    def conc(t):
        return wootters_bruteforce(XState.from_vector(lindblad_reference(x0, strong, [t])[0]))

    for lo, hi in periods:
        assert conc(lo - 1e-3) > 1e-6
        assert conc(0.5 * (lo + hi)) < 1e-9
        if hi < 100.0:
            assert conc(hi + 1e-3) > 1e-6


def test_birth_bracketed(strong):
    x0 = construct_initial(FactorizedMixed(0.75))

    def conc(t):
        return wootters_bruteforce(XState.from_vector(lindblad_reference(x0, strong, [t])[0]))

    assert conc(FACTORIZED_075_BIRTH - 1e-3) < 1e-9 < 1e-6 < conc(FACTORIZED_075_BIRTH + 1e-3)


@pytest.mark.parametrize("spec", [BellPsi(0.05), FactorizedMixed(0.75), BellPhi(0.2, 0.0)])
def test_events_grid_invariant(spec, strong):
    a = detect_events(propagate(spec, strong, HORIZON))
    b = detect_events(propagate(spec, strong, np.linspace(0.0, 100.0, 3001)))
    assert len(a.dark_periods) == len(b.dark_periods)
    np.testing.assert_allclose(a.dark_periods, b.dark_periods, atol=2e-6)
    assert (a.birth_time is None) == (b.birth_time is None)


def test_coarse_grid_rejected(strong):
    with pytest.raises(ResolutionError):
        detect_events(propagate(BellPsi(0.05), strong, np.linspace(0, 100, 5)))


def test_negative_zero_tol(strong):
    with pytest.raises(DomainError):
        detect_events(propagate(BellPsi(0.05), strong, HORIZON[:10]), -1.0)


@pytest.mark.parametrize("r", [0.4, 0.7, 1.0])
def test_stationary_singlet_family(r, strong):
    assert stationary_concurrence(EwlPhi(r, 0.5, math.pi), strong) == pytest.approx((1 + 3 * r) / 4, abs=1e-6)


def test_stationary_balanced_bell_psi(strong):
    assert stationary_concurrence(BellPsi(0.5), strong) == pytest.approx(0.0, abs=1e-6)


def test_stationary_ewl_psi_and_note(strong):
    assert stationary_concurrence(EwlPsi(0.2, 0.5, 0.0), strong) == pytest.approx(0.2, abs=1e-9)
    ev = detect_events(propagate(EwlPsi(0.2, 0.5, 0.0), strong, np.linspace(0, 20, 401)))
    assert ev.stationary_concurrence == pytest.approx(0.2, abs=1e-9)
    assert ev.notes == (PSI_STATIONARY_NOTE,)
    assert "(1-r)/4" in PSI_STATIONARY_NOTE and "r/4" in PSI_STATIONARY_NOTE


def test_final_value_matches_long_time(strong):
    # In a fast-decaying regime the long-time sample agrees with the limit.
    weak = ReservoirParams(1.0, 0.2)
    for spec in (EwlPhi(0.7, 0.5, math.pi), BellPsi(0.5), EwlPsi(0.2, 0.5, 0.0)):
        traj = propagate(spec, weak, [0.0, 50.0])
        assert concurrence_x(traj.states[-1]) == pytest.approx(stationary_concurrence(spec, weak), abs=1e-6)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=15)
def test_single_excitation_never_finite_dark(seed):
    params = ReservoirParams.strong_coupling()
    (se,) = gen_states(RandomStateGen(seed, "single-excitation"), 1)
    ev = detect_events(propagate(se, params, HORIZON))
    assert ev.finite_dark_periods == ()


def test_events_dict_keys(events):
    d = events["psi005"].as_dict()
    assert list(d) == ["dark_periods", "birth_time", "revivals", "stationary_concurrence", "notes"]


# ---------------------------------------------------------------- extrema


def test_series_against_itself():
    t = np.linspace(0, 10, 501)
    y = np.sin(t) * np.exp(-0.1 * t)
    rep = extrema_alignment(y, y, t)
    assert rep.unmatched_a == 0 and rep.unmatched_b == 0 and rep.max_distance == 0.0
    assert len(rep.pairs) == 3


def test_local_extrema_parabolic_vertex():
    t = np.linspace(0, 2 * math.pi, 101)
    times, kinds = local_extrema(t, np.sin(t))
    np.testing.assert_allclose(times, [math.pi / 2, 3 * math.pi / 2], atol=1e-4)
    assert kinds == ("max", "min")


def test_extrema_kinds_not_mixed():
    t = np.linspace(0, 2 * math.pi, 201)
    rep = extrema_alignment(np.sin(t), -np.sin(t), t, window=0.5)
    assert rep.pairs == ()


def test_extrema_alignment_input_checks():
    with pytest.raises(DomainError):
        extrema_alignment([], [], [])
    with pytest.raises(DomainError):
        extrema_alignment([1, 2, 3], [1, 2], [0, 1, 2])


def test_superradiant_zeros_match_rho_pp_zeros(strong):
    traj = propagate(BellPhi(0.5, 0.0), strong, HORIZON)
    a, b, c, d, w, z = traj.components()
    pp = 0.5 * (b + c) + z.real
    minima, kinds = local_extrema(traj.times, pp)
    minima = [m for m, k in zip(minima, kinds) if k == "min"]
    np.testing.assert_allclose(minima, BELL_PHI_05_ZEROS, atol=0.01)


def test_entropy_follows_superradiant_population(strong):
    traj = propagate(BellPhi(0.5, 0.0), strong, HORIZON)
    a, b, c, d, w, z = traj.components()
    s = entropy_components(a, b, c, d, w, z)
    pp = 0.5 * (b + c) + z.real
    rep = extrema_alignment(-s, pp, traj.times, window=0.1)
    assert rep.pairs and rep.max_distance < 0.1


# ---------------------------------------------------------------- zero conditions


def test_zero_conditions_bell_phi(strong):
    rep = zero_condition_check(propagate(BellPhi(0.2, 0.0), strong, HORIZON))
    assert len(rep.zeros) == 4 and rep.satisfied
    assert [z.variant for z in rep.zeros] == ["|01>", "|10>", "|10>", "|01>"]
    for z in rep.zeros:
        assert z.k == pytest.approx(2 * z.rho_mm, abs=1e-4)


def test_zero_conditions_singlet_empty(strong):
    rep = zero_condition_check(propagate(BellPhi(0.5, math.pi), strong, HORIZON))
    assert rep.zeros == () and rep.satisfied


def test_zero_conditions_precondition(strong):
    with pytest.raises(DomainError):
        zero_condition_check(propagate(BellPsi(0.05), strong, HORIZON))


# ---------------------------------------------------------------- sweeps


def test_sweep_singlet_mixing_opens_dark_periods(strong):
    grid = sweep(EwlPhi(1.0, 0.5, 0.0), "r", [1.0, 0.99, 0.95], strong, HORIZON)
    tr = [detect_events(propagate(EwlPhi(r, 0.5, 0.0), strong, HORIZON)) for r in grid.axis_values]
    assert tr[0].finite_dark_periods == ()
    assert all(ev.finite_dark_periods for ev in tr[1:])
    assert np.all((grid.concurrence >= 0) & (grid.concurrence <= 1))


def test_sweep_psi_sudden_birth_rows(strong):
    t = np.linspace(0.0, 600.0, 6001)
    grid = sweep(EwlPsi(1.0, 0.5, 0.0), "r", [0.0, 0.2, 0.3], strong, t)
    for row in grid.concurrence:
        assert row[0] == 0.0
        first = np.argmax(row > 1e-6)
        assert first > 0 and np.all(row[:first] <= 1e-6)


def test_sweep_rows_order_and_values(strong):
    t = np.array([0.0, 1.0])
    grid = sweep(EwlPsi(1.0, 0.5, 0.0), "r", [1.0, 1 / 3], strong, t)
    rows = list(grid.rows())
    assert [r[:2] for r in rows] == [(1.0, 0.0), (1.0, 1.0), (1 / 3, 0.0), (1 / 3, 1.0)]
    assert rows[0][2] == pytest.approx(1.0, abs=1e-12)
    assert rows[2][2] == pytest.approx(0.0, abs=1e-12)


def test_sweep_axis_checks(strong):
    with pytest.raises(DomainError):
        sweep(Werner(0.5), "alpha2", [0.1], strong, [0.0])
    with pytest.raises(DomainError):
        sweep(Werner(0.5), "gamma", [0.1], strong, [0.0])
