import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heunflow import morse
from heunflow.exceptions import RatioNotConstant
from heunflow.params import MorseParams
from heunflow.series import contour_derivatives

P_SMALL = MorseParams(B=3, C=4, s=0.5)
P_S1 = MorseParams(B=2, C=1, s=1)


def _v(p, u):
    B, C, s = p.B.real, p.C.real, p.s.real
    return (B * B / 4) * (cmath.sinh(u) - C / B) ** 2 - B * (s + 0.5) * cmath.cosh(u)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 5), st.floats(0.1, 5), st.sampled_from([0, 0.5, 1, 1.5, 2]))
def test_potential_at_origin(B, C, s):
    p = MorseParams(B=B, C=C, s=s)
    assert math.isclose(morse.potential(p, 0.0), C * C / 4 - B * (s + 0.5), rel_tol=1e-12, abs_tol=1e-12)


def test_to_dche():
    d = morse.to_dche(P_SMALL, E=0.3)
    assert d.B1 == 1.5 and d.B2 == 4 and 1j * d.eta == -3
    assert d.omega == 0.75j and d.B3 == 0.3 + 9 / 8 + 0.25 - 2


def test_small_finite_spectrum():
    e = morse.finite_spectrum(P_SMALL).energies
    assert np.max(np.abs(e - [-2.75, 2.25])) < 1e-10


def test_zero_spin_finite_spectrum():
    e = morse.finite_spectrum(MorseParams(B=3, C=4, s=0)).energies
    assert e.tolist() == [0.0]


def test_s1_finite_spectrum_against_fd():
    fin = morse.finite_spectrum(P_S1).energies
    fd = morse.fd_oracle(P_S1, L=14, N=16000, count=3).energies
    assert fin.size == 3
    assert np.max(np.abs(fin - fd)) < 1e-5


def test_fd_oracle_harmonic():
    fd = morse.fd_oracle(pot=lambda u: u * u, L=10, N=4000, count=4).energies
    assert np.max(np.abs(fd - [1, 3, 5, 7])) < 1e-3


def test_fd_oracle_minimum_grid():
    with pytest.raises(ValueError):
        morse.fd_oracle(P_S1, N=100)


@pytest.mark.parametrize("C,s,case,nu", [(2, 1, "c_integer_or_half", 1 / 3), (1.5, 0.5, "c_integer_or_half", 1 / 3),
                                         (0.4, 1, "s_integer", 1.2), (0.4, 0.5, "s_half_integer", 0.7)])
def test_choose_nu(C, s, case, nu):
    r = morse.choose_nu(C, s)
    assert r.case == case and abs(r.nu - nu) < 1e-15


@pytest.mark.parametrize("C,s", [(1, 1), (0.4, 1), (0.4, 0.5), (2.3, 1.5)])
def test_chosen_nu_keeps_recurrence_nondegenerate(C, s):
    p = MorseParams(B=2, C=C, s=s, E=1.0)
    nu = morse.choose_nu(C, s).nu
    a, _, g = morse.two_sided_system(p, nu).at(np.arange(-200, 201))
    assert np.min(np.abs(a)) > 0 and np.min(np.abs(g)) > 0


@pytest.mark.parametrize("p", [P_SMALL, P_S1])
def test_finite_eigenfunctions(p):
    E = morse.finite_spectrum(p).energies
    for e in E:
        psi, _ = morse.finite_eigenfunction(p, e)
        ends = np.abs(psi(np.array([-12.0, 12.0])))
        assert np.all(ends < 1e-8 * np.max(np.abs(psi(np.linspace(-3, 3, 61)))))
        for u in (-0.7, 0.2, 1.3):
            f, _, d2 = contour_derivatives(lambda w: complex(psi(w)), complex(u), 0.1)
            terms = [d2, (e - _v(p, u)) * f]
            assert abs(sum(terms)) < 1e-9 * max(abs(t) for t in terms)


def test_matched_level_against_fd():
    fd = morse.fd_oracle(P_S1, L=14, N=16000, count=5).energies
    got = morse.matched_spectrum(P_S1, (8, 9), grid=4).energies
    assert got.size == 1 and abs(got[0] - fd[4]) < 1e-4
    psi, rep = morse.eigenfunction_matched(P_S1, got[0], nu=morse.solve_nu(P_S1, got[0]))
    assert rep["variation"] < 1e-6
    assert abs(psi(-1.0)) > 0 and abs(psi(10.0)) < 1e-6 * abs(psi(0.0)) + 1e-12


def test_matching_rejects_non_eigenvalue():
    with pytest.raises(RatioNotConstant):
        morse.eigenfunction_matched(P_S1, 7.0, nu=morse.solve_nu(P_S1, 7.0))


def test_morse_rejects_bad_spin():
    with pytest.raises(ValueError):
        morse.finite_spectrum(MorseParams(B=2, C=1, s=0.3))


def test_unmatched_levels_report():
    low = morse.unmatched_levels(P_S1, (-4, 2), matched=[])
    assert low["unmatched"] == [] and low["fd"].size == 3
    high = morse.unmatched_levels(P_S1, (4, 9), matched=[4.8675385])
    assert len(high["unmatched"]) == 1 and abs(high["unmatched"][0] - 8.5415) < 1e-3
