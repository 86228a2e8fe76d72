import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coinsim import gf2
from coinsim.fixtures import load_fixture
from coinsim.gf2 import BitMatrix, InconsistentSystem
from coinsim.hypergraph import Hypergraph, incidence_matrix
from oracles import brute_combination, brute_rank


@st.composite
def matrices(draw, max_rows=12, max_cols=12):
    rows = draw(st.integers(0, max_rows))
    cols = draw(st.integers(0, max_cols))
    words = draw(st.lists(st.integers(0, (1 << cols) - 1), min_size=rows, max_size=rows))
    return BitMatrix.from_ints(words, cols)


def bits(word, length):
    return tuple((word >> j) & 1 for j in range(length))


# -- BitMatrix basics ---------------------------------------------------


def test_out_of_range_access_is_an_error():
    m = BitMatrix.identity(3)
    with pytest.raises(IndexError):
        m[3, 0]
    with pytest.raises(IndexError):
        m[0, -1]


def test_rows_cannot_carry_bits_beyond_cols():
    with pytest.raises(ValueError):
        BitMatrix(1, 2, (0b100,))


def test_arithmetic_is_mod_two():
    a = BitMatrix.from_rows([[1, 1], [0, 1]])
    assert (a + a) == BitMatrix.zeros(2, 2)
    assert (a @ a).to_lists() == [[1, 0], [0, 1]]


# -- rank ---------------------------------------------------------------


def test_rank_identity():
    assert gf2.rank(BitMatrix.identity(3)) == 3


def test_rank_empty():
    assert gf2.rank(BitMatrix.zeros(0, 0)) == 0
    assert gf2.rank(BitMatrix.zeros(0, 5)) == 0


def test_rank_fig3_incidence_is_full_row_rank():
    g, _ = load_fixture("fig3")
    assert gf2.rank(incidence_matrix(g).matrix) == 6


def test_rank_complete_3_uniform_on_5():
    inc = incidence_matrix(Hypergraph.complete(5, 3))
    assert inc.matrix.shape == (10, 10)
    assert gf2.rank(inc.matrix) == 6


@settings(max_examples=200)
@given(matrices())
def test_rank_matches_span_enumeration(m):
    assert gf2.rank(m) == brute_rank(m.data)


@settings(max_examples=200)
@given(matrices())
def test_rank_equals_rank_of_transpose(m):
    assert gf2.rank(m) == gf2.rank(m.transpose())
    assert 0 <= gf2.rank(m) <= min(m.rows, m.cols)


# -- row_reduce ---------------------------------------------------------


def test_row_reduce_zero():
    reduced, pivots, _ = gf2.row_reduce(BitMatrix.zeros(2, 2))
    assert reduced == BitMatrix.zeros(2, 2)
    assert pivots == []


def test_row_reduce_identity():
    reduced, pivots, _ = gf2.row_reduce(BitMatrix.identity(2))
    assert reduced == BitMatrix.identity(2)
    assert pivots == [0, 1]


def test_row_reduce_repeated_row():
    reduced, pivots, _ = gf2.row_reduce(BitMatrix.from_rows([[1, 1], [1, 1]]))
    assert reduced.to_lists() == [[1, 1], [0, 0]]
    assert pivots == [0]


@settings(max_examples=200)
@given(matrices())
def test_row_reduce_contract(m):
    reduced, pivots, ops = gf2.row_reduce(m)
    assert ops @ m == reduced
    assert gf2.rank(ops) == m.rows
    assert pivots == sorted(set(pivots))
    for r, col in enumerate(pivots):
        # reduced echelon: pivot column is a unit vector, nothing left of the pivot
        assert [reduced[i, col] for i in range(m.rows)] == [int(i == r) for i in range(m.rows)]
        assert all(reduced[r, j] == 0 for j in range(col))
    assert all(w == 0 for w in reduced.data[len(pivots):])


# -- solve --------------------------------------------------------------


def test_solve_identity():
    assert gf2.solve(BitMatrix.identity(3), (1, 0, 1)) == (1, 0, 1)


def test_solve_free_variable_is_zero():
    # both [1,0] and [0,1] solve x1 ^ x2 = 1; the zero-free-variable one wins
    a = BitMatrix.from_rows([[1, 1]])
    solutions = [x for x in [(0, 0), (0, 1), (1, 0), (1, 1)] if a.multiply_vector(x) == (1,)]
    assert solutions == [(0, 1), (1, 0)]
    assert gf2.solve(a, (1,)) == (1, 0)


def test_solve_inconsistent():
    with pytest.raises(InconsistentSystem):
        gf2.solve(BitMatrix.from_rows([[1], [1]]), (1, 0))


def test_solve_rejects_wrong_length():
    with pytest.raises(ValueError):
        gf2.solve(BitMatrix.identity(2), (1,))


@settings(max_examples=200)
@given(matrices(max_rows=8, max_cols=8), st.integers(0, 255))
def test_solve_reproduces_rhs_or_reports_inconsistency(m, seed):
    y = bits(seed, m.rows)
    solvable = any(m.multiply_vector(bits(x, m.cols)) == y for x in range(1 << m.cols))
    if solvable:
        x = gf2.solve(m, y)
        assert m.multiply_vector(x) == y
    else:
        with pytest.raises(InconsistentSystem):
            gf2.solve(m, y)


@settings(max_examples=100)
@given(matrices(max_rows=8, max_cols=8))
def test_solution_map_agrees_with_solve(m):
    p, check = gf2.solution_map(m)
    for x in range(min(1 << m.cols, 64)):
        y = m.multiply_vector(bits(x, m.cols))
        assert p.multiply_vector(y) == gf2.solve(m, y)
        assert not any(check.multiply_vector(y))


# -- in_row_space -------------------------------------------------------


def test_zero_vector_is_always_in_row_space():
    assert gf2.in_row_space(BitMatrix.identity(3), (0, 0, 0)) == (True, frozenset())


def test_fig3_rows_generate_345():
    g, _ = load_fixture("fig3")
    inc = incidence_matrix(g)
    member, combo = gf2.in_row_space(inc.matrix, inc.row_for((3, 4, 5)))
    assert member
    acc = 0
    for i in combo:
        acc ^= inc.matrix.data[i]
    assert bits(acc, inc.matrix.cols) == inc.row_for((3, 4, 5))


def test_two_rows_do_not_generate_345():
    g = Hypergraph(5, 3, ((1, 2, 3), (1, 2, 4)))
    inc = incidence_matrix(g)
    target = inc.row_for((3, 4, 5))
    word = sum(b << j for j, b in enumerate(target))
    assert brute_combination(list(inc.matrix.data), word) is None
    assert gf2.in_row_space(inc.matrix, target) == (False, None)


@settings(max_examples=200)
@given(matrices(max_rows=8, max_cols=8), st.integers(0, 255))
def test_in_row_space_matches_enumeration(m, seed):
    v = bits(seed % (1 << m.cols) if m.cols else 0, m.cols)
    word = sum(b << j for j, b in enumerate(v))
    member, combo = gf2.in_row_space(m, v)
    assert member == (brute_combination(list(m.data), word) is not None)
    if member:
        acc = 0
        for i in combo:
            acc ^= m.data[i]
        assert acc == word


# -- nullspace ----------------------------------------------------------


def test_nullspace_identity_is_trivial():
    assert gf2.nullspace_basis(BitMatrix.identity(3)) == []


def test_nullspace_zero_row_is_everything():
    assert len(gf2.nullspace_basis(BitMatrix.zeros(1, 2))) == 2


def test_nullspace_path_matrix():
    m = BitMatrix.from_rows([[1, 1, 0], [0, 1, 1]])
    kernel = [bits(x, 3) for x in range(8) if m.multiply_vector(bits(x, 3)) == (0, 0)]
    assert kernel == [(0, 0, 0), (1, 1, 1)]
    assert gf2.nullspace_basis(m) == [(1, 1, 1)]


@settings(max_examples=200)
@given(matrices(max_rows=8, max_cols=8))
def test_nullspace_spans_the_kernel(m):
    basis = gf2.nullspace_basis(m)
    assert len(basis) + gf2.rank(m) == m.cols
    words = [sum(b << j for j, b in enumerate(v)) for v in basis]
    assert brute_rank(words) == len(basis)
    for v in basis:
        assert not any(m.multiply_vector(v))
    kernel = {x for x in range(1 << m.cols) if not any(m.multiply_vector(bits(x, m.cols)))}
    assert len(kernel) == 1 << len(basis)
