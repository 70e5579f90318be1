import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edsem.errors import NotCompletelySimple, SizeCapExceeded, ValidationError
from edsem.fixtures import cyclic_group, named_fixture, rs240_spec, rsing_spec, symmetric_group
from edsem.groups import group_from_semigroup
from edsem.rees import (
    ReesElement,
    ReesSpec,
    analyze_kernel,
    build_cayley_from_rees,
    decompose_completely_simple,
    is_matrix_nonsingular,
    normalize_matrix,
    rees_multiply,
    rees_spec_from_names,
)
from edsem.semigroup import ElementSet, adjoin_zero
from edsem.terms import Constant, Term, Variable


def test_rs240_build(rs240):
    spec = rs240_spec()
    assert len(rs240) == spec.order == 240
    x = ReesElement(1, spec.group.index("(12345)"), 0)
    assert spec.decode(spec.encode(x)) == x
    assert rs240.name(spec.encode(x)) == "(2,(12345),1)"
    assert spec.normalized


def test_rees_multiply_matches_table(rs240):
    spec = rs240_spec()
    rng = np.random.default_rng(7)
    for a, b in rng.integers(0, 240, size=(500, 2)):
        product = rees_multiply(spec, spec.decode(int(a)), spec.decode(int(b)))
        assert spec.encode(product) == rs240.multiply(int(a), int(b))


def test_sandwich_entry_is_used():
    spec = rs240_spec()
    group = spec.group
    five_cycle = group.index("(12345)")
    product = rees_multiply(spec, ReesElement(0, group.identity, 1), ReesElement(1, group.identity, 0))
    assert product == ReesElement(0, five_cycle, 0)


def test_spec_shape_is_checked():
    group = group_from_semigroup(cyclic_group(2))
    with pytest.raises(ValidationError, match="shape"):
        ReesSpec(group, 3, 2, np.zeros((3, 2), dtype=np.int64))
    with pytest.raises(ValidationError):
        ReesSpec(group, 0, 1, np.zeros((1, 0), dtype=np.int64))
    with pytest.raises(ValidationError):
        ReesSpec(group, 1, 1, np.array([[5]]))
    with pytest.raises(ValidationError, match="Row 0"):
        rees_spec_from_names(group, 2, 2, [["1"], ["1", "c"]])
    with pytest.raises(ValidationError, match="not a group element"):
        rees_spec_from_names(group, 1, 1, [[0]])


def test_size_cap():
    with pytest.raises(SizeCapExceeded):
        build_cayley_from_rees(rs240_spec(), size_cap=100)


def test_normalize_matrix():
    group = group_from_semigroup(cyclic_group(3))
    spec = rees_spec_from_names(group, 2, 2, [["c", "1"], ["c", "c2"]])
    assert not spec.normalized
    normalized = normalize_matrix(spec)
    assert normalized.normalized
    # p11 p21^-1 p22 p12^-1 = c c2 c2 1 = c2
    assert normalized.matrix_names() == [["1", "1"], ["1", "c2"]]


def test_matrix_verdicts():
    assert is_matrix_nonsingular(rs240_spec()).nonsingular
    verdict = is_matrix_nonsingular(rsing_spec())
    assert verdict.kind == "equal_rows" and verdict.pair == (0, 1)
    assert str(verdict) == "EqualRows(1,2)"
    group = group_from_semigroup(cyclic_group(2))
    columns = is_matrix_nonsingular(rees_spec_from_names(group, 2, 1, [["1", "1"]]))
    assert columns.kind == "equal_columns" and str(columns) == "EqualColumns(1,2)"
    assert str(is_matrix_nonsingular(rees_spec_from_names(group, 1, 1, [["c"]]))) == "Nonsingular"


def test_rs240_coordinates_match_names(rs240, rs240_analysis):
    analysis = rs240_analysis
    assert (analysis.spec.lambda_size, analysis.spec.i_size) == (2, 2)
    assert len(analysis.spec.group) == 60
    for x in range(len(rs240)):
        assert analysis.spec.element_name(analysis.to_coords(x)) == rs240.name(x)
    assert np.array_equal(analysis.spec.matrix, rs240_spec().matrix)
    assert analysis.render(0) == "(1,1,1)"
    assert analysis.spec.group.index("(12345)") == rs240_spec().group.index("(12345)")


def test_a5plus_kernel_is_a_group(a5plus, a5plus_analysis):
    spec = a5plus_analysis.spec
    assert (spec.lambda_size, spec.i_size, len(spec.group)) == (1, 1, 60)
    assert a5plus_analysis.render(a5plus.index("u")) == "u"
    with pytest.raises(ValueError):
        a5plus_analysis.to_coords(a5plus.index("u"))
    assert a5plus.name(a5plus_analysis.gamma_identity) == "1"


def test_structure_group_names(c3, rsing_analysis):
    analysis = analyze_kernel(c3)
    assert analysis.spec.group.elements == c3.elements
    assert analysis.render(c3.index("c")) == "c=(1,c,1)"
    assert rsing_analysis.spec.group.elements == ("1", "c")
    assert rsing_analysis.render(0) == "(1,1,1)"
    assert all("," not in name for row in rsing_analysis.spec.matrix_names() for name in row)


def test_null_semigroup_kernel(n3):
    analysis = analyze_kernel(n3)
    assert analysis.kernel.names() == ["0"]
    assert len(analysis.spec.group) == 1


def test_not_completely_simple(n3, c3):
    with pytest.raises(NotCompletelySimple, match="not simple"):
        decompose_completely_simple(n3)
    with pytest.raises(NotCompletelySimple, match="subsemigroup"):
        decompose_completely_simple(c3, ElementSet.from_indices(c3, [1]))


def test_gamma_accessors(rs240_analysis):
    analysis = rs240_analysis
    group = analysis.spec.group
    for g in range(len(group)):
        assert analysis.gamma_value(analysis.gamma(g)) == g
    with pytest.raises(ValueError):
        analysis.gamma_value(analysis.from_coords(1, 0, 0))
    gamma = analysis.gamma_group()
    assert len(gamma) == 60 and not gamma.is_abelian()


def test_left_and_right_ideals(rs240, rs240_analysis):
    table = rs240.table
    for i in range(2):
        members = rs240_analysis.left_ideal(i)
        assert len(members) == 120
        assert members.mask[table[:, members.indices]].all()
    for lam in range(2):
        members = rs240_analysis.right_ideal(lam)
        assert members.mask[table[members.indices]].all()


def test_gamma_sandwich_identity_exhaustive(rsing, rsing_analysis):
    analysis = rsing_analysis
    table = rsing.table
    gamma = analysis.gamma_subset.indices
    for x in gamma:
        for y in gamma:
            for z in range(len(rsing)):
                _, c, _ = analysis.to_coords(z)
                assert table[table[x, z], y] == table[table[x, analysis.gamma(c)], y]


def test_gamma_sandwich_identity_sampled(rs240, rs240_analysis):
    analysis = rs240_analysis
    table = rs240.table
    rng = np.random.default_rng(11)
    gamma = analysis.gamma_subset.indices
    x = rng.choice(gamma, 20_000)
    y = rng.choice(gamma, 20_000)
    z = rng.integers(0, 240, 20_000)
    c = analysis.coords[z, 1]
    middle = analysis.elements[0, c, 0]
    assert np.array_equal(table[table[x, z], y], table[table[x, middle], y])


def _one_variable_terms(semigroup):
    atoms = st.one_of(
        st.just(Variable(0)),
        st.integers(0, len(semigroup) - 1).map(Constant),
    )
    return st.lists(atoms, min_size=1, max_size=8).map(lambda found: Term(1, found))


@settings(max_examples=1000, deadline=None, derandomize=True)
@given(data=st.data())
def test_equal_rows_make_elements_hard_to_separate(rsing, rsing_analysis, data):
    term = data.draw(_one_variable_terms(rsing))
    s1 = rsing_analysis.from_coords(0, 0, 0)
    s2 = rsing_analysis.from_coords(0, 0, 1)
    v1 = rsing_analysis.to_coords(int(term.evaluate(rsing, np.array([[s1]]))[0]))
    v2 = rsing_analysis.to_coords(int(term.evaluate(rsing, np.array([[s2]]))[0]))
    if v1 != v2:
        assert term.atoms[-1] == Variable(0)
        assert (v1.lam, v1.g) == (v2.lam, v2.g)


@settings(max_examples=30, deadline=None, derandomize=True)
@given(
    lambda_size=st.integers(1, 3),
    i_size=st.integers(1, 3),
    data=st.data(),
)
def test_decomposition_round_trip(lambda_size, i_size, data):
    group = group_from_semigroup(symmetric_group(3))
    matrix = data.draw(
        st.lists(
            st.lists(st.integers(0, 5), min_size=lambda_size, max_size=lambda_size),
            min_size=i_size,
            max_size=i_size,
        )
    )
    spec = ReesSpec(group, lambda_size, i_size, np.array(matrix))
    semigroup = build_cayley_from_rees(spec)
    permutation = data.draw(st.permutations(list(range(len(semigroup)))))
    shuffled = semigroup.relabel(permutation)
    analysis = decompose_completely_simple(shuffled)
    found = analysis.spec
    assert found.normalized
    assert (found.lambda_size, found.i_size, len(found.group)) == (lambda_size, i_size, 6)
    assert is_matrix_nonsingular(found).nonsingular == is_matrix_nonsingular(
        normalize_matrix(spec)
    ).nonsingular
    # the coordinates are a bijection onto the shuffled semigroup
    assert sorted(analysis.elements.ravel().tolist()) == list(range(len(shuffled)))


def test_kernel_of_rsing_with_zero_adjoined():
    semigroup = adjoin_zero(named_fixture("rsing"))
    analysis = analyze_kernel(semigroup)
    assert analysis.kernel.names() == ["0"]
