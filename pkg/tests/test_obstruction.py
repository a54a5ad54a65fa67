from fractions import Fraction

import pytest

from nonint.exactalg import Matrix, MultiPoly, charpoly
from nonint.model import MassParameters
from nonint.obstruction import (
    CERTIFIED, FAILED, INDETERMINATE, Certificate, CertifyConfig, CheckResult,
    case1_charpoly_check, case2_conditions_check, certify, kernel_generators_check,
    parse_fault, reduce_product, symbolic_suite,
)

from conftest import PAIRS, PAIR_IDS

EXPECTED_CHECKS = {
    "residue_structure", "derivation_crosscheck", "T0_identity", "jordan_T1", "jordan_T2",
    "relation", "determinants", "spectrum_Tinf", "frobenius_t0", "log_constants",
    "local_global_t1", "resonance_scan", "kernel_generators", "symbolic_case1",
    "symbolic_case2",
}


def _check(name, passed, indeterminate=False):
    return CheckResult(name, passed, 0.0, None, "test", indeterminate=indeterminate)


def test_verdict_precedence():
    m = MassParameters(1, 1)
    assert Certificate(m, [_check("a", True)]).verdict == CERTIFIED
    assert Certificate(m, [_check("a", True), _check("b", False, True)]).verdict == INDETERMINATE
    assert Certificate(m, [_check("a", False), _check("b", False, True)]).verdict == FAILED


def test_check_json_shape():
    js = _check("x", True).to_json()
    assert set(js) == {"name", "pass", "status", "value", "tolerance", "paper_anchor"}
    assert js["status"] == "pass"


@pytest.mark.parametrize("ab", PAIRS, ids=PAIR_IDS)
def test_certify_pairs(certificate, ab):
    cert = certificate(*ab)
    assert {c.name for c in cert.checks} == EXPECTED_CHECKS
    failed = [c.name for c in cert.checks if c.status != "pass"]
    assert failed == [] and cert.certified
    js = cert.to_json()
    assert js["verdict"] == CERTIFIED and js["alpha"] == str(ab[0])


def test_fault_injection_fails():
    cert = certify(MassParameters(1, 1), CertifyConfig(fault="residue:0:0:1e-3"))
    assert cert.verdict == FAILED
    assert not cert.check("derivation_crosscheck").passed
    # exact layers are untouched by the numeric fault
    assert cert.check("residue_structure").passed


def test_parse_fault():
    assert parse_fault("residue:0:0:1e-3") == (0, 0, 0, 1e-3)
    assert parse_fault("residue:B:1:2:0.5") == (1, 1, 2, 0.5)
    for bad in ("matrix:0:0:1", "residue:0:9:1", "residue:X:0:0:1", "residue:0:0"):
        with pytest.raises(ValueError):
            parse_fault(bad)


def test_symbolic_suite_passes():
    results = symbolic_suite()
    assert [r.name for r in results] == ["kernel_generators", "symbolic_case1", "symbolic_case2"]
    assert all(r.passed for r in results)


def test_kernel_generators_rank():
    r = kernel_generators_check()
    assert r.value == 3 and r.details["delta_product"]


def test_case1_details():
    d = case1_charpoly_check().details
    for key in ("rows_forced_zero", "charpoly", "product_matches", "spectrum_1_1_s_f",
                "s_minus_1", "f_squared", "spectrum_all_one"):
        assert d[key], key
    assert d["numeric_max_deviation"] < 1e-10


def test_case2_details():
    d = case2_conditions_check().details
    assert d["delta2_Y3"] and d["delta2_Y3_conditions"]
    assert all(d["P_coefficients"]) and d["block_factorization"]
    assert d["final_T2"] and d["T1T2_spectrum_all_one"]
    assert d["numeric_max_deviation"] < 1e-10


def test_perturbed_p1_is_rejected():
    # negative control: a wrong sign in the trace coefficient must not match
    b2, d4, e1, z1, z2, a2, a4, c2, c4 = (MultiPoly.var(n) for n in
                                          ("b2", "d4", "e1", "z1", "z2", "a2", "a4", "c2", "c4"))
    zero = MultiPoly.constant(0)
    R = Matrix([[b2 + e1, a2, z2, a4], [zero, b2, zero, z2], [z1, c2, d4 + e1, c4],
                [zero, z1, zero, d4]])
    cp = charpoly(R)
    assert cp.coeff("l", 3) == -2 * (b2 + d4 + e1)
    assert cp.coeff("l", 3) != 2 * (b2 + d4 + e1)
    assert cp.coeff("l", 3) != -2 * (b2 + d4 - e1)


def test_reduce_product():
    z1, z2, h = MultiPoly.var("z1"), MultiPoly.var("z2"), MultiPoly.var("h1")
    rel = -(h * h)
    assert reduce_product(h * h + z1 * z2, "z1", "z2", rel) == 0
    assert reduce_product(z1 ** 2 * z2 ** 2, "z1", "z2", rel) == h ** 4
    assert reduce_product(z1 + z2, "z1", "z2", rel) == z1 + z2


def test_cache_sanity():
    # repeated calls reuse the same result object
    assert case1_charpoly_check() is case1_charpoly_check()
    assert Fraction(1) == 1
