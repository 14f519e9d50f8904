import cmath

import numpy as np
import pytest

from heunflow import dche
from heunflow.exceptions import DegenerateTarget, InadmissibleNu, OutsideDomain
from heunflow.params import DcheParams, GsweParams

P = DcheParams(B1=-0.5, B2=1.3, B3=0.4, omega=0.7, eta=0.4)


def test_leaver_limit_keeps_parameters():
    g = GsweParams(B1=-0.5, B2=1.3, B3=0.4, z0=1e-4, omega=0.7, eta=0.4)
    d = dche.leaver_limit(g)
    assert (d.B1, d.B2, d.B3, d.omega, d.eta) == (-0.5, 1.3, 0.4, 0.7, 0.4)


def test_leaver_limit_needs_b1():
    with pytest.raises(DegenerateTarget):
        dche.leaver_limit(GsweParams(B1=0, B2=1, B3=0, z0=0.1, omega=1, eta=0))


def test_set1_first_row():
    a, b, g = dche.system(P, 1).at(np.array([0, 1]))
    iw, ie = 1j * P.omega, 1j * P.eta
    assert a[0] == 1 and b[0] == iw * P.B1 + P.B3
    assert abs(g[1] - 2 * iw * P.B1 * (1 + ie + P.B2 / 2 - 1)) < 1e-15


@pytest.mark.parametrize("i", [1, 2])
def test_solution_sets_satisfy_the_equation(i):
    b3 = dche.solve_b3(P, i)
    s = dche.solution_set(P.replace(B3=b3), i)
    for name, f in s.items():
        for z in (1.2 + 0.3j, 0.4 - 0.2j, 6.0):
            assert f.residual(z) < 1e-8, (name, z)


def test_set2_essential_factor():
    b3 = dche.solve_b3(P, 2)
    u = dche.solution_set(P.replace(B3=b3), 2)["U0"]
    # stripping e^{iωz} e^{B1/z} z^{2−B2} leaves a power series with c_0 = 1
    for z in (1e-2, 1e-3):
        v = u(z) * cmath.exp(-P.B1 / z) * z ** (P.B2 - 2) * cmath.exp(-1j * P.omega * z)
        assert abs(v - 1) < 20 * z


def test_near_zero_rejected():
    b3 = dche.solve_b3(P, 1)
    with pytest.raises(OutsideDomain):
        dche.solution_set(P.replace(B3=b3), 1)["U0"](1e-10)


def test_two_sided_solutions():
    nu = 0.3
    b3 = dche.solve_two_sided(P, 0.4, free="B3", nu=nu)
    s = dche.two_sided_set(P.replace(B3=b3), nu)
    for name, f in s.items():
        assert f.residual(1.2 + 0.3j) < 1e-8, name


def test_two_sided_coefficients_hand_evaluated():
    nu = 0.3
    a, b, g = dche.two_sided_system(P, nu).with_value(nu).at(np.array([0, 2]))
    iwb, ie, h = 1j * P.omega * P.B1, 1j * P.eta, P.B2 / 2
    m = 2 + nu
    assert abs(a[1] - iwb * (m + 2 - h) * (m + 1 - ie) / (2 * (m + 1) * (m + 1.5))) < 1e-14
    assert abs(b[1] - (P.B3 - (P.B2 - 1) ** 2 / 4 + (m + 0.5) ** 2
                       + P.eta * P.omega * P.B1 * (h - 1) / (m * (m + 1)))) < 1e-14
    assert abs(g[1] - iwb * (m + h - 1) * (m + ie) / (2 * m * (m - 0.5))) < 1e-14


def test_inadmissible_nu():
    with pytest.raises(InadmissibleNu):
        dche.two_sided_set(P, 0.5)


def test_gswe_small_z0_matches_dche():
    g = GsweParams(B1=-0.5, B2=1.3, B3=0.4, z0=1e-4, omega=0.7, eta=0.4)
    rep = dche.leaver_check(g)
    assert rep["max_error"] < 1e-3
    for pair in rep["pairs"].values():
        assert abs(pair["B3_gswe"] - pair["B3_dche"]) < 1e-2
