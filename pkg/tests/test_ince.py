import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heunflow import ince
from heunflow.exceptions import OutsideDomain, RuleInapplicable
from heunflow.params import DcheParams, GsweParams, InceDcheParams, InceGsweParams
from heunflow.recurrence import minimal_solution

from conftest import rel


def _solved(p, i):
    return p.replace(B3=ince.solve_b3(p, i))


def test_limit_keeps_b_parameters():
    g = GsweParams(B1=-0.5, B2=1.3, B3=0.2, z0=1, omega=1e-3, eta=550)
    p = ince.ince_limit(g, 1.1)
    assert isinstance(p, InceGsweParams) and (p.B1, p.B2, p.B3, p.z0, p.q) == (-0.5, 1.3, 0.2, 1, 1.1)
    d = ince.ince_limit(DcheParams(B1=-0.5, B2=1.3, B3=0.2, omega=1, eta=0), 2)
    assert isinstance(d, InceDcheParams) and d.q == 2
    with pytest.raises(TypeError):
        ince.ince_limit(d, 1)


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(0.2, 3), st.floats(-3, 3),
       st.sampled_from(["T1", "T2", "T4"]))
def test_rules_are_involutions(b1, b2, b3, z0, q, rule):
    p = InceGsweParams(B1=b1, B2=b2, B3=b3, z0=z0, q=q)
    back = ince.transform(ince.transform(p, rule)[0], rule)[0]
    for k in ("B1", "B2", "B3", "z0", "q"):
        assert abs(complex(getattr(back, k)) - complex(getattr(p, k))) < 1e-11 * (1 + abs(complex(getattr(p, k))))


def test_rule_needs_z0():
    with pytest.raises(RuleInapplicable):
        ince.transform(InceGsweParams(B1=1, B2=1, B3=0, z0=0, q=1), "T1")


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_gswe_limit_solutions(generic_ince, i):
    p = _solved(generic_ince, i)
    s = ince.solution_set_gswe(p, i)
    assert s["U0"].residual(0.6 + 0.1j) < 1e-8
    assert s["U"].residual(0.6 + 0.1j) < 1e-8
    for name in ("U", "Uinf", "Uinf_t"):
        for z in (1.8 + 0.4j, 4.0):
            assert s[name].residual(z) < 1e-8, (name, z)


def test_b_and_c_roots_agree(generic_ince):
    bc = ince.solve_b3(generic_ince, 1)
    from heunflow.recurrence import solve_characteristic

    bb = solve_characteristic(ince.b_system(generic_ince, 1), bc, 1e-13)
    assert abs(bb - bc) < 1e-10


def test_d_coefficients_are_scaled_c(generic_ince):
    p = _solved(generic_ince, 1)
    c = minimal_solution(ince.c_system(p, 1), 30).values
    d = minimal_solution(ince.d_system(p, 1), 30).values
    n = np.arange(31)
    assert np.max(np.abs(d / d[0] - 2.0**n * c / c[0]) / np.abs(2.0**n * c / c[0])) < 1e-10


def test_k_series_two_forms_agree(generic_ince):
    s = ince.solution_set_gswe(_solved(generic_ince, 1), 1)
    r = [s["Uinf"](z) / s["Uinf_t"](z) for z in (1.5, 2.5 + 1j, 6.0)]
    assert max(abs(x / r[0] - 1) for x in r) < 1e-10


def test_k_series_substituted_directly(generic_ince):
    rep = ince.k_series_direct_check(_solved(generic_ince, 1), [1.5, 2.5 + 1j, 6.0])
    assert rep["max_residual"] < 1e-9


def test_k_series_domain(generic_ince):
    s = ince.solution_set_gswe(_solved(generic_ince, 1), 1)
    with pytest.raises(OutsideDomain):
        s["Uinf"](0.5)


def test_j_and_k_series_independent(generic_ince):
    s = ince.solution_set_gswe(_solved(generic_ince, 1), 1)
    r = [s["U"](z) / s["Uinf"](z) for z in (1.5, 3.0, 6.0)]
    assert max(abs(x / r[0] - 1) for x in r) > 1e-3


@pytest.mark.parametrize("i", [1, 2])
def test_dche_limit_solutions(generic_ince_dche, i):
    p = generic_ince_dche.replace(B3=ince.solve_b3_dche(generic_ince_dche, i))
    s = ince.solution_set_dche(p, i)
    for name, f in s.items():
        for z in (0.7 + 0.2j, 3.0):
            assert f.residual(z) < 1e-8, (name, z)


def test_small_omega_gswe_approaches_limit(generic_ince):
    rep = ince.whittaker_ince_check(generic_ince, omega=1e-3)
    assert rep["max_error"] < 1e-4
    assert rel(rep["B3_gswe"], rep["B3_limit"]) < 1e-2
