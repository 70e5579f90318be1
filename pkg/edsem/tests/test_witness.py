from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edsem.decide import msem
from edsem.errors import ConstructionFailed, NotDistinguishable, SweepBudgetExceeded
from edsem.fixtures import named_fixture
from edsem.rees import analyze_kernel
from edsem.terms import Constant, Power, PointSet, Term, Variable, solve_system
from edsem.utils import mixed_radix_points
from edsem.witness import (
    Hypothesis,
    Synthesizer,
    build_tp_term,
    defining_system,
    distinguishing_term,
    invert_term,
    is_gamma_valued,
)


@pytest.fixture(scope="module")
def rs240_synthesizer(rs240, rs240_analysis):
    return Synthesizer(rs240, rs240_analysis)


def _named(semigroup, names):
    return [semigroup.index(name) for name in names]


def test_distinguishing_terms_on_rs240(rs240, rs240_analysis):
    one = rs240.index("(1,1,1)")
    alpha, beta = _named(rs240, ["(1,(123),1)", "(1,(12345),1)"])
    term = distinguishing_term(rs240, rs240_analysis, alpha, beta)
    assert term.atoms == (Constant(one), Variable(0), Constant(one))
    alpha, beta = _named(rs240, ["(1,1,1)", "(2,1,1)"])
    term = distinguishing_term(rs240, rs240_analysis, alpha, beta)
    assert term.atoms == (Constant(rs240.index("(1,1,2)")), Variable(0), Constant(one))


@settings(max_examples=300, deadline=None, derandomize=True)
@given(alpha=st.integers(0, 239), beta=st.integers(0, 239))
def test_distinguishing_terms_separate_and_are_gamma_valued(rs240, rs240_analysis, alpha, beta):
    if alpha == beta:
        with pytest.raises(NotDistinguishable):
            distinguishing_term(rs240, rs240_analysis, alpha, beta)
        return
    term = distinguishing_term(rs240, rs240_analysis, alpha, beta)
    values = term.evaluate(rs240, np.array([[alpha], [beta]]))
    assert values[0] != values[1]
    assert is_gamma_valued(rs240, rs240_analysis, term, mixed_radix_points(240, 1))


def test_not_distinguishable(rsing, rsing_analysis, a5plus, a5plus_analysis):
    with pytest.raises(NotDistinguishable, match="singular"):
        distinguishing_term(rsing, rsing_analysis, 0, 1)
    u, one = _named(a5plus, ["u", "1"])
    with pytest.raises(NotDistinguishable, match="identically"):
        distinguishing_term(a5plus, a5plus_analysis, u, one)


@pytest.mark.parametrize("name", ["rsing", "a5plus", "c2", "s3", "triv", "lz2"])
def test_synthesizer_needs_the_constructive_branch(name):
    semigroup = named_fixture(name)
    with pytest.raises(ConstructionFailed):
        Synthesizer(semigroup, analyze_kernel(semigroup))


def test_is_gamma_valued(rs240, rs240_analysis):
    points = mixed_radix_points(240, 1)
    sandwich = Term(1, [Constant(0), Variable(0), Constant(0)])
    assert is_gamma_valued(rs240, rs240_analysis, sandwich, points)
    assert not is_gamma_valued(rs240, rs240_analysis, Term(1, [Variable(0)]), points)
    assert is_gamma_valued(rs240, rs240_analysis, Term(1, [Variable(0)]), np.array([[0]]))


def test_gamma_valued_needs_kernel_constants(a5plus, a5plus_analysis):
    u = a5plus.index("u")
    term = Term(1, [Constant(u), Constant(0)])
    assert not is_gamma_valued(a5plus, a5plus_analysis, term, np.array([[0]]))


def test_invert_term():
    term = Term(1, [Variable(0)])
    assert invert_term(term, 2) is term
    inverse = invert_term(term, 60)
    assert isinstance(inverse, Power) and inverse.exponent == 59


def test_conjugator_breaks_commutation(rs240_synthesizer):
    group = rs240_synthesizer.group
    g = group.index("(12345)")
    h = rs240_synthesizer.conjugator(g, g)
    assert not group.commute(g, group.conjugate(g, h))
    with pytest.raises(ConstructionFailed):
        rs240_synthesizer.conjugator(group.identity, g)


def test_slabs(rs240_synthesizer):
    others = np.array([[0, 5], [3, 0], [3, 7]])
    assert rs240_synthesizer.slabs((0, 0), others) == [(0, 3), (1, 5)]
    assert rs240_synthesizer.slabs((0, 0), others[:0]) == []
    everything = rs240_synthesizer.slabs((0, 0), None)
    assert len(everything) == 2 * 239
    assert everything[0] == (0, 239)


def test_single_point_domain_gives_a_constant(rs240, rs240_analysis):
    domain = PointSet.from_points(rs240, 1, [(5,)])
    word = build_tp_term(rs240, rs240_analysis, (5,), domain)
    assert isinstance(word, Term) and word.length == 1
    assert word.atoms[0].index != rs240_analysis.gamma_identity


@pytest.mark.parametrize("point", [(0,), (1,), (121,), (239,)])
def test_tp_terms_on_rs240_unary(rs240, rs240_analysis, rs240_synthesizer, point):
    word = build_tp_term(rs240, rs240_analysis, point, synthesizer=rs240_synthesizer)
    points = mixed_radix_points(240, 1)
    values = word.evaluate(rs240, points)
    one = rs240_analysis.gamma_identity
    assert values[point[0]] != one
    assert (np.delete(values, point[0]) == one).all()
    assert is_gamma_valued(rs240, rs240_analysis, word, points)


@settings(max_examples=25, deadline=None, derandomize=True)
@given(point=st.tuples(st.integers(0, 239)), h=st.integers(0, 59))
def test_conjugation_keeps_vanishing_points(rs240, rs240_analysis, rs240_synthesizer, point, h):
    word = build_tp_term(rs240, rs240_analysis, point, synthesizer=rs240_synthesizer)
    value = rs240_analysis.gamma_value(int(word.evaluate(rs240, np.array([point]))[0]))
    conjugated = rs240_synthesizer.conjugate(Hypothesis(word, value), h)
    points = mixed_radix_points(240, 1)
    before = word.evaluate(rs240, points) == rs240_analysis.gamma_identity
    after = conjugated.word.evaluate(rs240, points) == rs240_analysis.gamma_identity
    assert np.array_equal(before, after)
    assert is_gamma_valued(rs240, rs240_analysis, conjugated.word, points)
    group = rs240_analysis.spec.group
    assert rs240_analysis.gamma_value(
        int(conjugated.word.evaluate(rs240, np.array([point]))[0])
    ) == group.conjugate(value, h)


def test_merges_are_recorded(rs240, rs240_analysis):
    synthesizer = Synthesizer(rs240, rs240_analysis)
    build_tp_term(rs240, rs240_analysis, (3, 7), synthesizer=synthesizer)
    assert synthesizer.trace.base_terms == 2 * 239
    assert synthesizer.trace.merges == 2 * 239 - 1


def test_defining_system_a5_unary(a5, a5_analysis):
    target = PointSet.from_points(a5, 1, [(a5.index("1"),), (a5.index("(12345)"),)])
    system = defining_system(a5, a5_analysis, target)
    assert len(system) == 58
    assert solve_system(a5, system) == target


def test_defining_system_edge_cases(a5, a5_analysis, triv):
    assert len(defining_system(a5, a5_analysis, PointSet.full(a5, 2))) == 0
    with pytest.raises(ConstructionFailed):
        defining_system(triv, analyze_kernel(triv), PointSet.empty(triv, 1))
    with pytest.raises(ConstructionFailed):
        defining_system(a5, None, PointSet.empty(a5, 1))


def _random_target(semigroup, arity, size, seed):
    rng = np.random.default_rng(seed)
    codes = rng.choice(len(semigroup) ** arity, size=size, replace=False)
    mask = np.zeros(len(semigroup) ** arity, dtype=bool)
    mask[codes] = True
    return PointSet(semigroup, arity, mask)


@pytest.mark.parametrize("seed", range(20))
def test_defining_system_random_unary_targets(a5, a5_analysis, rs240, rs240_analysis, seed):
    for semigroup, analysis in ((a5, a5_analysis), (rs240, rs240_analysis)):
        size = 1 + seed * (len(semigroup) - 2) // 19
        target = _random_target(semigroup, 1, size, seed)
        system = defining_system(semigroup, analysis, target)
        assert solve_system(semigroup, system) == target


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(20))
def test_defining_system_random_binary_targets(a5, a5_analysis, seed):
    target = _random_target(a5, 2, 100 + 150 * seed, seed)
    system = defining_system(a5, a5_analysis, target, threads=4)
    assert solve_system(a5, system) == target


@pytest.mark.slow
def test_tp_terms_on_rs240_quaternary(rs240, rs240_analysis):
    synthesizer = Synthesizer(rs240, rs240_analysis)
    rng = np.random.default_rng(3)
    members = rng.integers(0, 240, size=(10_000, 4))
    members[:5_000, 1] = members[:5_000, 0]
    members[5_000:, 3] = members[5_000:, 2]
    one = rs240_analysis.gamma_identity
    found = 0
    while found < 50:
        point = tuple(int(v) for v in rng.integers(0, 240, size=4))
        if point[0] == point[1] or point[2] == point[3]:
            continue
        word = build_tp_term(rs240, rs240_analysis, point, synthesizer=synthesizer, sample_size=1000)
        assert word.evaluate(rs240, np.array([point]))[0] != one
        assert (word.evaluate(rs240, members) == one).all()
        assert is_gamma_valued(rs240, rs240_analysis, word, members[:1000])
        found += 1
    with pytest.raises(SweepBudgetExceeded):
        msem(rs240)


def _gamma_valued_terms(semigroup, analysis, arity):
    e = Constant(analysis.gamma_identity)
    atoms = st.one_of(
        st.integers(0, arity - 1).map(Variable),
        st.integers(0, len(semigroup) - 1).map(Constant),
    )
    return st.lists(atoms, min_size=1, max_size=6).map(
        lambda found: Term(arity, [e] + found + [e])
    )


@pytest.mark.slow
@settings(max_examples=1000, deadline=None, derandomize=True)
@given(data=st.data(), arity=st.integers(1, 2), h=st.integers(0, 59))
def test_conjugation_is_stable_on_unary_and_binary_polynomials(
    rs240, rs240_analysis, rs240_synthesizer, data, arity, h
):
    word = data.draw(_gamma_valued_terms(rs240, rs240_analysis, arity))
    points = mixed_radix_points(240, arity)
    values = word.evaluate(rs240, points)
    k = data.draw(st.integers(0, len(points) - 1))
    value = rs240_analysis.gamma_value(int(values[k]))
    conjugated = rs240_synthesizer.conjugate(Hypothesis(word, value), h)
    after = conjugated.word.evaluate(rs240, points)
    identity = rs240_analysis.gamma_identity
    assert np.array_equal(values == identity, after == identity)
    assert is_gamma_valued(rs240, rs240_analysis, conjugated.word, points)
    group = rs240_analysis.spec.group
    assert rs240_analysis.gamma_value(int(after[k])) == group.conjugate(value, h)


def test_parallel_synthesis_keeps_the_trace(a5, a5_analysis):
    target = PointSet.from_points(a5, 1, [(0,), (17,)])
    members = target.points()
    missing = target.complement().points()
    sequential = Synthesizer(a5, a5_analysis)
    expected = [sequential.tp_term(point, members).value for point in missing]
    parallel = Synthesizer(a5, a5_analysis)
    with ThreadPoolExecutor(max_workers=8) as pool:
        found = list(pool.map(lambda point: parallel.tp_term(point, members).value, missing))
    assert found == expected
    assert parallel.trace == sequential.trace
    assert parallel.trace.base_terms == 58 * 2
