import pytest

from edsem.decide import (
    BoundViolation,
    Decision,
    HasZero,
    NontrivialSim,
    Positive,
    SingularMatrix,
    Verdict,
    ZeroDivisor,
    census,
    cross_check_with_oracle,
    decide_ed,
    is_homogroup,
    mgr_like,
    msem,
    verify_certificate,
)
from edsem.fixtures import named_fixture
from edsem.semigroup import adjoin_zero


def test_rs240_is_an_equational_domain(rs240):
    decision = decide_ed(rs240)
    assert decision.verdict is Verdict.ED and decision.is_ed
    certificate = decision.certificate
    assert isinstance(certificate, Positive)
    assert (certificate.group_order, certificate.lambda_size, certificate.i_size) == (60, 2, 2)
    assert certificate.matrix == (("1", "1"), ("1", "(12345)"))
    assert verify_certificate(rs240, decision)
    assert decision.bounds.violated is None
    payload = decision.to_dict()
    assert payload["verdict"] == "ED"
    assert payload["kernel"] == {"size": 240, "group_order": 60, "lambda_size": 2, "i_size": 2}
    assert payload["bounds"][1]["bound"] == "960"
    assert payload["bounds"][0]["bound"].startswith("~10^")


@pytest.mark.parametrize(
    "name, certificate",
    [
        ("n3", HasZero("0")),
        ("c2", ZeroDivisor("c", "c")),
        ("s3", ZeroDivisor("(123)", "(123)")),
        ("a5plus", NontrivialSim("u", "1")),
        ("rsing", SingularMatrix("equal_rows", (0, 1))),
        ("lz2", SingularMatrix("equal_columns", (0, 1))),
    ],
)
def test_negative_certificates(name, certificate):
    semigroup = named_fixture(name)
    decision = decide_ed(semigroup)
    assert decision.verdict is Verdict.NOT_ED
    assert decision.certificate == certificate
    assert verify_certificate(semigroup, decision)


@pytest.mark.parametrize("name", ["triv", "a5"])
def test_groups_without_zero_divisors(name):
    semigroup = named_fixture(name)
    decision = decide_ed(semigroup)
    assert decision.is_ed
    assert verify_certificate(semigroup, decision)
    assert is_homogroup(semigroup)


def test_certificate_texts(rsing, a5plus):
    assert str(decide_ed(rsing).certificate) == "SingularMatrix(rows 1,2)"
    assert str(decide_ed(a5plus).certificate) == "NontrivialSim(u,1)"
    assert str(HasZero("0")) == "HasZero(0)"


def test_bounds_in_the_pipeline(a5plus, n3):
    decision = decide_ed(a5plus, use_bounds=True)
    assert decision.certificate == BoundViolation("|G||Lambda|^|Lambda||I|^|I|", 60, 61)
    assert verify_certificate(a5plus, decision)
    assert str(decision.certificate) == "BoundViolation(|G||Lambda|^|Lambda||I|^|I|: |S|=61 > 60)"
    # the zero shortcut comes first
    assert isinstance(decide_ed(n3, use_bounds=True).certificate, HasZero)


def test_a_zero_makes_any_semigroup_negative(rs240):
    semigroup = adjoin_zero(rs240)
    decision = decide_ed(semigroup)
    assert decision.certificate == HasZero("0")
    assert verify_certificate(semigroup, decision)


@pytest.mark.parametrize(
    "name, forged",
    [
        ("a5", Decision(Verdict.NOT_ED, ZeroDivisor("(123)", "(12345)"))),
        ("a5", Decision(Verdict.NOT_ED, HasZero("1"))),
        ("triv", Decision(Verdict.NOT_ED, HasZero("e"))),
        ("rs240", Decision(Verdict.NOT_ED, NontrivialSim("(1,1,1)", "(1,1,2)"))),
        ("rs240", Decision(Verdict.NOT_ED, SingularMatrix("equal_rows", (0, 1)))),
        ("a5plus", Decision(Verdict.NOT_ED, BoundViolation("l^(2l)", 60**120, 61))),
        ("a5plus", Decision(Verdict.ED, Positive(1, 1, 60, (("1",),)))),
    ],
)
def test_forged_certificates_are_rejected(name, forged):
    assert not verify_certificate(named_fixture(name), forged)


def test_homogroups(a5plus, n3, rs240):
    assert is_homogroup(a5plus)
    assert is_homogroup(n3)
    assert not is_homogroup(rs240)


@pytest.mark.parametrize("name, size", [("triv", 1), ("lz2", 12), ("n3", 45)])
def test_msem_sizes(name, size):
    assert len(msem(named_fixture(name))) == size


def test_mgr_like(a5, a5_analysis):
    target = mgr_like(a5, a5_analysis)
    assert len(target) == 119
    assert (0, 17) in target and (17, 0) in target and (17, 18) not in target


@pytest.mark.parametrize(
    "name, verdict", [("triv", Verdict.ED), ("c2", Verdict.NOT_ED), ("n3", Verdict.NOT_ED)]
)
def test_oracle_agrees(name, verdict):
    report = cross_check_with_oracle(named_fixture(name))
    assert report.agree
    assert report.decision.verdict is verdict
    assert str(report) == f"Agree({verdict.value})"


def test_oracle_refuses_large_inputs(a5):
    with pytest.raises(ValueError):
        cross_check_with_oracle(a5)


def test_oracle_reports_exhausted_budget(c3):
    report = cross_check_with_oracle(c3, closure_budget=5)
    assert not report.agree
    assert str(report).startswith("Inconclusive(")


@pytest.mark.parametrize("order", [1, 2])
def test_census_small_orders(order):
    results = census(order)
    assert all(report.agree for _, report in results)
    positives = [semigroup for semigroup, report in results if report.decision.is_ed]
    assert len(positives) == (1 if order == 1 else 0)


def test_census_options_and_closure_points(triv, c2):
    with pytest.raises(ValueError, match="oracle limit"):
        census(3, max_order=2)
    results = census(2, use_bounds=True, max_order=2)
    assert len(results) == 8 and all(report.agree for _, report in results)
    assert cross_check_with_oracle(triv).closure_points == len(msem(triv))
    assert cross_check_with_oracle(c2).closure_points > len(msem(c2))


@pytest.mark.slow
def test_census_order_three():
    results = census(3)
    assert len(results) == 113
    assert all(report.agree for _, report in results)
    assert not any(report.decision.is_ed for _, report in results)


@pytest.mark.slow
def test_census_up_to_isomorphism():
    results = census(3, up_to_isomorphism=True)
    assert len(results) == 24
    assert all(report.agree for _, report in results)
