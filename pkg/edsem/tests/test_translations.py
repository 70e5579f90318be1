import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edsem.errors import NotAnIdeal
from edsem.fixtures import named_fixture
from edsem.rees import analyze_kernel
from edsem.semigroup import ElementSet, kernel
from edsem.terms import Constant, Term, Variable
from edsem.translations import (
    action_triple,
    bound_checks,
    is_sim_trivial,
    is_weakly_reductive,
    multiplication_indices,
    show_number,
    sim_partition,
)


def test_action_of_rs240_elements(rs240, rs240_analysis):
    analysis = rs240_analysis
    for alpha in range(len(rs240)):
        lam, g, i = analysis.to_coords(alpha)
        triple = action_triple(rs240, analysis, alpha)
        assert triple.g_alpha == g
        assert triple.lambda_map == (lam, lam)
        assert triple.i_map == (i, i)
        assert multiplication_indices(rs240, analysis, alpha) == (g, lam, i)


def test_action_of_a5plus_elements(a5plus, a5plus_analysis):
    analysis = a5plus_analysis
    identity = analysis.spec.group.identity
    u = action_triple(a5plus, analysis, a5plus.index("u"))
    assert (u.g_alpha, u.lambda_map, u.i_map) == (identity, (0,), (0,))
    for alpha in analysis.kernel:
        triple = action_triple(a5plus, analysis, alpha)
        assert triple.g_alpha == analysis.to_coords(alpha).g


@settings(max_examples=1000, deadline=None, derandomize=True)
@given(name=st.sampled_from(["rs240", "a5plus"]), data=st.data())
def test_action_formulas_on_random_products(name, data, rs240_analysis, a5plus_analysis):
    analysis = rs240_analysis if name == "rs240" else a5plus_analysis
    semigroup = analysis.semigroup
    spec = analysis.spec
    gtable = spec.group.table
    p = spec.matrix
    alpha = data.draw(st.integers(0, len(semigroup) - 1))
    x = data.draw(st.sampled_from(analysis.kernel.indices.tolist()))
    triple = action_triple(semigroup, analysis, alpha)
    lam, g, i = analysis.to_coords(x)
    left = analysis.to_coords(semigroup.multiply(alpha, x))
    right = analysis.to_coords(semigroup.multiply(x, alpha))
    assert left == (
        triple.lambda_map[lam],
        gtable[gtable[triple.g_alpha, p[triple.i_map[0], lam]], g],
        i,
    )
    assert right == (
        lam,
        gtable[gtable[g, p[i, triple.lambda_map[0]]], triple.g_alpha],
        triple.i_map[i],
    )


def test_sim_partition_examples(n3, a5plus, lz2):
    partition = sim_partition(n3, kernel(n3))
    assert partition.render() == [["a", "b", "0"]]
    partition = sim_partition(a5plus, kernel(a5plus))
    assert len(partition) == 60
    assert [a5plus.name(x) for x in partition.class_of(a5plus.index("u"))] == ["u", "1"]
    assert len(sim_partition(lz2, ElementSet.full(lz2))) == 2


def test_sim_partition_needs_an_ideal(c3):
    with pytest.raises(NotAnIdeal):
        sim_partition(c3, ElementSet.from_indices(c3, [1]))


def test_sim_verdicts(n3, a5plus, rs240, rs240_analysis):
    verdict = is_sim_trivial(a5plus, kernel(a5plus))
    assert not verdict.trivial
    assert tuple(a5plus.name(x) for x in verdict.pair) == ("u", "1")
    verdict = is_sim_trivial(n3, kernel(n3))
    assert tuple(n3.name(x) for x in verdict.pair) == ("a", "b")
    assert is_sim_trivial(rs240, rs240_analysis.kernel).trivial


@pytest.mark.parametrize("name", ["triv", "lz2", "rz2", "n3", "c6", "s3", "rsing", "a5plus"])
def test_sim_partition_is_a_partition(name):
    semigroup = named_fixture(name)
    ideal = kernel(semigroup)
    partition = sim_partition(semigroup, ideal)
    members = sorted(x for block in partition.classes for x in block)
    assert members == list(range(len(semigroup)))
    table = semigroup.table
    for block in partition.classes:
        for x in block[1:]:
            assert np.array_equal(table[x, ideal.indices], table[block[0], ideal.indices])
            assert np.array_equal(table[ideal.indices, x], table[ideal.indices, block[0]])


@pytest.mark.parametrize("name", ["lz2", "rz2", "n3", "c6", "rsing", "a5plus", "rs240"])
def test_class_count_within_kernel_bound(name):
    semigroup = named_fixture(name)
    analysis = analyze_kernel(semigroup)
    partition = sim_partition(semigroup, analysis.kernel)
    assert len(partition) <= bound_checks(semigroup, analysis).kernel_bound.bound


def test_trivial_sim_separates_every_pair(rsing, rsing_analysis):
    assert is_sim_trivial(rsing, rsing_analysis.kernel).trivial
    table = rsing.table
    for a in range(len(rsing)):
        for b in range(a + 1, len(rsing)):
            assert not (
                np.array_equal(table[a], table[b]) and np.array_equal(table[:, a], table[:, b])
            )


def _two_variable_terms(semigroup):
    atoms = st.one_of(
        st.sampled_from([Variable(0), Variable(1)]),
        st.integers(0, len(semigroup) - 1).map(Constant),
    )
    return (
        st.lists(atoms, min_size=1, max_size=8)
        .filter(lambda found: Variable(1) in found)
        .map(lambda found: Term(2, found))
    )


@settings(max_examples=1000, deadline=None, derandomize=True)
@given(name=st.sampled_from(["n3", "a5plus"]), data=st.data())
def test_equivalent_elements_are_interchangeable(name, data, n3, a5plus):
    semigroup = n3 if name == "n3" else a5plus
    ideal = kernel(semigroup)
    verdict = is_sim_trivial(semigroup, ideal)
    alpha, beta = verdict.pair
    term = data.draw(_two_variable_terms(semigroup))
    r = ideal.indices
    with_alpha = term.evaluate(semigroup, np.stack([np.full_like(r, alpha), r], axis=1))
    with_beta = term.evaluate(semigroup, np.stack([np.full_like(r, beta), r], axis=1))
    assert np.array_equal(with_alpha, with_beta)


def test_bounds(n3, a5plus, rs240_analysis, rs240, a5plus_analysis):
    report = bound_checks(rs240, rs240_analysis)
    assert report.kernel_bound.bound == 960
    assert report.violated is None
    report = bound_checks(a5plus, a5plus_analysis)
    assert report.kernel_bound.bound == 60
    assert report.violated == report.kernel_bound
    assert report.violated.name == "|G||Lambda|^|Lambda||I|^|I|"
    report = bound_checks(n3, analyze_kernel(n3))
    assert report.ideal_bound.bound == 1
    assert str(report.violated) == "ViolatesBound(l^(2l): |S|=3, bound=1)"


def test_weak_reductivity(lz2, n3, a5plus):
    assert is_weakly_reductive(lz2)
    assert is_weakly_reductive(named_fixture("rz2"))
    assert not is_weakly_reductive(n3)
    assert is_weakly_reductive(a5plus)


def test_large_bounds_are_abbreviated(rs240, rs240_analysis):
    report = bound_checks(rs240, rs240_analysis)
    assert report.ideal_bound.bound == 240**480
    assert str(report.ideal_bound) == f"WithinBound(l^(2l): |S|=240, bound=~10^{len(str(240**480)) - 1})"
    assert show_number(960) == "960"
