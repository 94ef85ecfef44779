from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fi_koszul.exactla import (
    Field,
    Matrix,
    RATIONALS,
    Subspace,
    homology_dim,
    image_basis,
    kernel_basis,
    prime_field,
    rank,
    solve_in_image,
    sum_of_subspaces,
)
from fi_koszul.exceptions import ComplexError, DimensionMismatch, FieldMismatch, InputError

F2 = prime_field(2)
F5 = prime_field(5)


@pytest.mark.parametrize("text,expected", [
    ("Q", RATIONALS),
    ("QQ", RATIONALS),
    ("Fp:7", prime_field(7)),
    ("F3", prime_field(3)),
])
def test_parse_field(text, expected):
    assert Field.parse(text) == expected


@pytest.mark.parametrize("text", ["Fp:4", "R", "Fp:"])
def test_parse_field_rejects(text):
    with pytest.raises(InputError):
        Field.parse(text)


def test_field_round_trips_through_str():
    assert str(prime_field(11)) == "Fp:11"
    assert Field.parse(str(prime_field(11))) == prime_field(11)
    assert str(RATIONALS) == "Q"


def test_scalars_are_normalized():
    assert RATIONALS.normalize(Fraction(4, 6)) == Fraction(2, 3)
    assert RATIONALS.parse_scalar("-3/9") == Fraction(-1, 3)
    assert F5.normalize(-1) == 4
    assert F5.parse_scalar("1/2") == 3
    assert F5.format_scalar(7) == 2
    assert RATIONALS.format_scalar(Fraction(-1, 2)) == "-1/2"
    assert RATIONALS.format_scalar(3) == "3"


def test_residue_of_unit_denominator_only():
    with pytest.raises(InputError):
        F5.normalize(Fraction(1, 5))


@given(st.fractions(), st.fractions().filter(lambda b: b != 0))
def test_exact_arithmetic(a, b):
    m = Matrix.from_rows([[a]], RATIONALS)
    n = Matrix.from_rows([[b]], RATIONALS)
    assert ((m + n) - n).entry(0, 0) == a
    assert (m @ n).entry(0, 0) / b == a


def test_rank_examples():
    assert rank(Matrix.identity(3, RATIONALS)) == 3
    assert rank(Matrix.from_rows([[1, 2], [2, 4]], RATIONALS)) == 1
    assert rank(Matrix.zeros(4, 7, RATIONALS)) == 0


def test_rank_depends_on_the_field():
    m = Matrix.from_rows([[1, 1], [1, -1]], RATIONALS)
    assert rank(m) == 2
    assert rank(Matrix.from_rows([[1, 1], [1, -1]], F2)) == 1


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=4))
def test_kernel_and_rank_nullity(rows):
    m = Matrix.from_rows(rows, RATIONALS)
    kernel = kernel_basis(m)
    assert kernel.dim == m.cols - rank(m)
    assert (m @ kernel.basis).is_zero()
    assert rank(kernel.basis) == kernel.dim


def test_kernel_of_identity_is_zero():
    assert kernel_basis(Matrix.identity(3, F5)).dim == 0


def test_image_basis_is_canonical():
    a = Matrix.from_columns([[1, 0, 1], [0, 1, 1]], RATIONALS)
    b = Matrix.from_columns([[1, 1, 2], [1, -1, 0], [2, 0, 2]], RATIONALS)
    assert image_basis(a) == image_basis(b)
    assert image_basis(a).dim == 2


def test_subspace_coordinates_and_quotient():
    space = image_basis(Matrix.from_columns([[1, 1, 0]], RATIONALS))
    v = Matrix.column_vector([3, 3, 0], RATIONALS)
    assert space.contains(v)
    assert space.basis @ space.coordinates(v) == v
    projection = space.quotient_projection()
    assert projection.shape == (2, 3)
    assert (projection @ space.basis).is_zero()
    assert (projection @ space.quotient_section()).is_identity()
    assert not space.contains(Matrix.column_vector([1, 0, 0], RATIONALS))


def test_zero_and_full_subspaces():
    assert Subspace.zero(3, RATIONALS).dim == 0
    assert Subspace.full(3, RATIONALS).contains_subspace(image_basis(Matrix.identity(3, RATIONALS)))
    assert Subspace.zero(3, RATIONALS).quotient_projection().is_identity()


def test_sum_of_subspaces():
    e1 = image_basis(Matrix.column_vector([1, 0, 0], RATIONALS))
    e2 = image_basis(Matrix.column_vector([0, 1, 0], RATIONALS))
    assert sum_of_subspaces([e1, e2]).dim == 2
    assert sum_of_subspaces([e1, e1]).dim == 1
    assert sum_of_subspaces([], ambient_dim=3, field=RATIONALS).dim == 0


def test_solve_in_image():
    m = Matrix.from_rows([[1, 0], [0, 1], [1, 1]], RATIONALS)
    x = solve_in_image(m, [2, 3, 5])
    assert m.apply(x) == (2, 3, 5)
    assert solve_in_image(m, [1, 1, 0]) is None
    with pytest.raises(DimensionMismatch):
        solve_in_image(m, [1, 2])


def test_homology_dim_of_a_short_complex():
    d_in = Matrix.from_rows([[1], [1]], RATIONALS)
    d_out = Matrix.from_rows([[1, -1]], RATIONALS)
    assert homology_dim(d_out, d_in) == 0
    assert homology_dim(Matrix.zeros(0, 2, RATIONALS), d_in) == 1


def test_homology_dim_rejects_non_complexes():
    with pytest.raises(ComplexError):
        homology_dim(Matrix.identity(2, RATIONALS), Matrix.identity(2, RATIONALS))
    with pytest.raises(ComplexError):
        homology_dim(Matrix.zeros(1, 2, RATIONALS), Matrix.zeros(3, 1, RATIONALS))


def test_mixed_fields_are_rejected():
    with pytest.raises(FieldMismatch):
        Matrix.identity(2, RATIONALS) @ Matrix.identity(2, F5)


def test_empty_shapes():
    empty = Matrix.zeros(0, 3, RATIONALS)
    assert (Matrix.zeros(2, 0, RATIONALS) @ Matrix.zeros(0, 3, RATIONALS)).shape == (2, 3)
    assert kernel_basis(empty).dim == 3
    assert rank(empty) == 0
    assert image_basis(Matrix.zeros(3, 0, RATIONALS)).dim == 0


def test_blocks_and_sparse_construction():
    block = Matrix.from_rows([[1, 2]], RATIONALS)
    m = Matrix.from_blocks(2, 3, RATIONALS, [(0, 0, block), (1, 1, block), (0, 0, block)])
    assert m.to_rows() == [[2, 4, 0], [0, 1, 2]]
    assert Matrix.from_sparse(2, 2, {(1, 0): -1}, F5).to_rows() == [[0, 0], [4, 0]]
    assert Matrix.block_diagonal([Matrix.identity(1, RATIONALS), block], RATIONALS).shape == (2, 3)


def test_sparse_storage():
    m = Matrix.from_sparse(3, 4, {(0, 1): 2, (2, 3): 1}, RATIONALS)
    assert m.nnz() == 2
    assert m.entry(2, 3) == 1
    assert m.entry(1, 1) == 0
    assert (m - m).is_zero()
    assert (m - m).nnz() == 0
    assert m.select_rows([2, 0]).to_rows() == [[0, 0, 0, 1], [0, 2, 0, 0]]
    assert m.select_columns([3, 1, 3]).to_rows() == [[0, 2, 0], [0, 0, 0], [1, 0, 1]]
    with pytest.raises(DimensionMismatch):
        Matrix.from_sparse(2, 2, {(2, 0): 1}, RATIONALS)
    with pytest.raises(DimensionMismatch):
        m.entry(3, 0)


def test_permutation_products_stay_sparse():
    cycle = Matrix.from_sparse(3, 3, {(0, 1): 1, (1, 2): 1, (2, 0): 1}, F2)
    assert (cycle @ cycle).nnz() == 3
    assert (cycle @ cycle @ cycle).is_identity()
    assert cycle.transpose() == cycle @ cycle


def test_equal_matrices_hash_alike():
    built = Matrix.from_sparse(2, 2, {(0, 0): 1, (1, 1): 0}, F5)
    reduced = Matrix.from_rows([[6, 0], [0, 5]], F5)
    assert built == reduced
    assert hash(built) == hash(reduced)
    assert built != Matrix.from_rows([[1, 0], [0, 0]], RATIONALS)
