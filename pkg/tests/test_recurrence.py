import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heunflow import dche, gswe, morse, periodic
from heunflow import numerics as nm
from heunflow.exceptions import CharacteristicUnsatisfied, InadmissibleNu, NonConvergence
from heunflow.params import DcheParams, GsweParams, MathieuParams, MorseParams, WheParams
from heunflow.recurrence import (
    RecurrenceSystem,
    characteristic_residual,
    check_nu,
    continued_fraction,
    detect_finite_series,
    hill_determinant,
    hill_seeds,
    max_iter,
    minimal_solution,
    recurrence_residuals,
    solve_characteristic,
)


def test_continued_fraction_golden_ratio():
    v = continued_fraction(lambda k: 1, lambda k: 1)
    assert abs(v - (math.sqrt(5) - 1) / 2) < 1e-14


def test_continued_fraction_zero_numerators():
    assert continued_fraction(lambda k: 0, lambda k: 3) == 0


def test_continued_fraction_rejects_bad_tol_and_caps():
    with pytest.raises(ValueError):
        continued_fraction(lambda k: 1, lambda k: 1, tol=0)
    with pytest.raises(NonConvergence):
        # alternating partial denominators never settle within 5 terms
        continued_fraction(lambda k: 1, lambda k: 1, max_terms=5, tol=1e-16)


def test_continued_fraction_tan():
    # tan x = x/(1 − x²/(3 − x²/(5 − ...)))
    x = 0.7
    v = continued_fraction(lambda k: x if k == 1 else -x * x, lambda k: 2 * k - 1)
    assert abs(v - math.tan(x)) < 1e-14


def test_residual_zero_at_mathieu_root():
    m = MathieuParams(k=1)
    a = periodic.characteristic_a(m, 1, "ince")
    sys = periodic.mathieu_system(m, 1, "ince")
    assert abs(characteristic_residual(sys, a)) < 1e-10


def test_two_sided_without_off_diagonal_returns_beta0():
    sys = RecurrenceSystem(lambda n, x: (0 * n, x + n * n + 0.5, 0 * n), two_sided=True, free_param="x",
                           value=1.5, nu=0.3)
    assert characteristic_residual(sys) == 2.0  # β0 = x + 0.5


def test_trivially_vanishing_beta0():
    # β0 = x − 2 and α0γ1 = 0: the characteristic equation is just β0 = 0
    sys = RecurrenceSystem(lambda n, x: (np.ones_like(n), x - 2 + 3 * n, 0 * n), free_param="x")
    assert abs(solve_characteristic(sys, 1.7) - 2) < 1e-12


def test_solve_morse_two_by_two():
    p = MorseParams(B=3, C=4, s=0.5)
    root = solve_characteristic(morse.finite_system(p), 2.0, 1e-14)
    assert abs(root - 2.25) < 1e-12


def test_finite_series_root_has_zero_residual():
    p = MorseParams(B=2, C=1, s=1)
    sys = morse.finite_system(p)
    for e in morse.finite_spectrum(p).energies:
        assert abs(characteristic_residual(sys, e)) < 1e-8
        assert abs(hill_determinant(sys, 3, e)) < 1e-8


def test_hill_determinant_small():
    sys = RecurrenceSystem(lambda n, x: (n + 2.0, x + n, n - 0.5), free_param="x", value=0.3)
    a, b, g = sys.at(np.arange(2))
    assert hill_determinant(sys, 1) == b[0]
    assert abs(hill_determinant(sys, 2) - (b[0] * b[1] - a[0] * g[1])) < 1e-15


def test_hill_roots_match_fraction_roots(generic_gswe):
    sys = gswe.c_system(generic_gswe, 1)
    root = gswe.solve_b3(generic_gswe, 1)
    seeds = hill_seeds(sys, 30)
    assert np.min(np.abs(seeds - root)) < 1e-6


def test_minimal_solution_dche_ratio():
    p = DcheParams(B1=-0.5, B2=1.3, B3=0, omega=0.7, eta=0.4)
    p = p.replace(B3=dche.solve_b3(p, 1))
    c = minimal_solution(dche.system(p, 1), 200).values
    n = 150
    assert abs(c[n + 1] / c[n] * n / (-2j * p.omega * p.B1) - 1) < 2e-2


def test_minimal_solution_gswe_psi_ratio(generic_gswe):
    p = generic_gswe.replace(B3=gswe.solve_b3(generic_gswe, 1))
    c = minimal_solution(gswe.c_system(p, 1), 300).values
    z = 2.5
    q = gswe.set_map(p, 1).params
    psi = nm.psi_sequence(1j * q.eta + q.B2 / 2, q.B2, -2j * p.omega * z, 300)
    n = 250
    assert abs(c[n + 1] / c[n] - (-2j * p.omega * p.z0)) < 2e-2
    assert abs(psi[n + 1] / psi[n] - 1 / (-2j * p.omega * z)) < 2e-3
    # term ratio tends to z0/z in modulus and sign: convergence for |z| > |z0|
    ratio = c[n + 1] * psi[n + 1] / (c[n] * psi[n])
    assert abs(ratio - p.z0 / z) < 2e-2


def test_minimal_solution_finite_series_zeros():
    p = MorseParams(B=2, C=1, s=1)
    e = morse.finite_spectrum(p).energies[0]
    c = minimal_solution(morse.finite_system(p).with_value(e), 20).values
    assert np.all(c[3:] == 0) and np.all(c[:3] != 0)


def test_minimal_solution_rejects_non_characteristic(generic_gswe):
    with pytest.raises(CharacteristicUnsatisfied):
        minimal_solution(gswe.c_system(generic_gswe.replace(B3=0.3), 1), 40)


@settings(max_examples=15, deadline=None)
@given(st.floats(-1.5, -0.2), st.floats(0.6, 2.0), st.floats(0.3, 1.2), st.floats(-0.6, 0.6))
def test_pincherle_consistency(b1, b2, omega, eta):
    p = GsweParams(B1=b1, B2=b2, B3=0, z0=1, omega=omega, eta=eta)
    try:
        b3 = gswe.solve_b3(p, 1)
    except Exception:
        return
    sys = gswe.c_system(p.replace(B3=b3), 1)
    seq = minimal_solution(sys, 60)
    assert np.max(recurrence_residuals(sys, seq)) < 1e-10
    # ratio from the tail continued fraction at n = 30
    n = 30
    a, b, g = sys.at(np.arange(n, n + 400))
    r = 0j
    for k in range(len(a) - 1, 0, -1):
        r = -g[k] / (b[k] + a[k] * r)
    assert abs(seq[n + 1] / seq[n] - r) < 1e-8 * abs(r)


def test_two_sided_residual_deterministic(generic_gswe):
    sys = gswe.two_sided_system(generic_gswe.replace(B3=0.4), 0.3)
    a = characteristic_residual(sys, 0.3 + 0.1j)
    b = characteristic_residual(sys, 0.3 + 0.1j)
    assert a == b


def test_inadmissible_nu():
    for nu in (0, 1, -0.5, 2.5 + 1e-8):
        with pytest.raises(InadmissibleNu):
            check_nu(nu)
    check_nu(0.3)
    check_nu(0.5 + 0.01j)


def test_detect_finite_series_gswe():
    p = GsweParams(B1=-0.5, B2=1.3, B3=0, z0=1, omega=0.7, eta=2.65j)  # iη + B2/2 = −2
    assert detect_finite_series(gswe.b_system(p, 1)) == 3


def test_detect_finite_series_whe_as_dche():
    d, _, _ = periodic.whe_as_dche(WheParams(p=-4, xi=0.7))
    assert detect_finite_series(dche.system(d, 1)) == 3


@pytest.mark.parametrize("route,cls", [("ince", 1), ("ince", 2), ("ince", 3), ("ince", 4), ("gswe", 1),
                                       ("gswe", 2), ("dche", 1), ("dche", 2)])
def test_mathieu_never_terminates(route, cls):
    sys = periodic.mathieu_system(MathieuParams(k=1, a=1.3), cls, route)
    assert detect_finite_series(sys, cap=500) is None


def test_max_iter_env(monkeypatch):
    monkeypatch.setenv("HEUNFLOW_MAX_ITER", "7")
    assert max_iter(100) == 7
    monkeypatch.setenv("HEUNFLOW_MAX_ITER", "junk")
    assert max_iter(100) == 100


def test_two_sided_minimal_solution_satisfies_recurrence(generic_gswe):
    p = generic_gswe.replace(B3=0.4)
    nu = gswe.solve_nu(p)
    sys = gswe.two_sided_system(p, nu).with_value(nu)
    seq = minimal_solution(sys, 30)
    assert seq.n_min == -30 and seq[0] == 1
    assert np.max(recurrence_residuals(sys, seq)) < 1e-10
