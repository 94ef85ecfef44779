from math import factorial, perm

import pytest
from hypothesis import given, strategies as st

from fi_koszul.exactla import Matrix, RATIONALS, Subspace, image_basis, prime_field
from fi_koszul.exceptions import InputError, ModuleValidationError, SubmoduleError, TruncationError
from fi_koszul.ficore import (
    Injection,
    Permutation,
    Relation,
    Representation,
    TruncatedFIModule,
    atom_module,
    coinvariants,
    degree,
    direct_sum,
    extend_window,
    factor_injection,
    free_module,
    free_module_injection_matrix,
    identity_morphism,
    injection_matrix,
    j_image,
    j_image_bruteforce,
    kernel_module,
    permutation_action,
    quotient_module,
    reduced_word,
    restrict_window,
    span_submodule,
    truncate_above,
    validate_module,
    validate_morphism,
    word_action,
    yoneda_morphism,
    zero_module,
)
from fi_koszul.selftest import corruptions


def injections(max_n=4):
    @st.composite
    def build(draw):
        n = draw(st.integers(0, max_n))
        m = draw(st.integers(0, n))
        values = draw(st.permutations(range(1, n + 1)))[:m]
        return Injection(n, tuple(values))

    return build()


def test_reduced_word():
    sigma = Permutation((2, 3, 1))
    word = reduced_word(sigma)
    assert word == (1, 2)
    assert len(word) == sigma.inversions()
    assert reduced_word(Permutation.identity(4)) == ()


@given(st.permutations(range(1, 5)))
def test_reduced_words_reproduce_the_permutation(one_line):
    sigma = Permutation(tuple(one_line))
    for rightmost in (False, True):
        word = reduced_word(sigma, rightmost=rightmost)
        assert len(word) == sigma.inversions()
        product = Permutation.identity(4)
        for i in word:
            product = product.compose(Permutation.adjacent(4, i))
        assert product == sigma


def test_factor_injection():
    alpha = Injection(3, (3,))
    sigma = factor_injection(alpha)
    assert sigma.one_line == (3, 1, 2)
    assert Injection.from_permutation(sigma).compose(Injection.standard(1, 3)) == alpha


def test_permutation_basics():
    assert Permutation.cycle(2, 4).one_line == (1, 3, 4, 2)
    assert Permutation((2, 3, 1)).inverse().one_line == (3, 1, 2)
    with pytest.raises(InputError):
        Permutation((1, 1, 2))
    with pytest.raises(InputError):
        Injection(2, (1, 3))
    with pytest.raises(InputError):
        Permutation.adjacent(3, 3)


@pytest.mark.parametrize("d,dims", [
    (0, (1, 1, 1, 1, 1)),
    (1, (0, 1, 2, 3, 4)),
    (2, (0, 0, 2, 6, 12)),
])
def test_free_module_dimensions(d, dims):
    V = free_module(d, 4)
    assert V.dims == dims
    assert validate_module(V).ok


def test_free_module_over_f2(field):
    assert validate_module(free_module(2, 4, field)).ok


@pytest.mark.parametrize("rep,size", [
    (Representation.TRIVIAL, 1),
    (Representation.SIGN, 1),
    (Representation.REGULAR, 6),
])
def test_atoms(rep, size):
    V = atom_module(3, rep, 5)
    assert V.dims == (0, 0, 0, size, 0, 0)
    assert validate_module(V).ok
    assert degree(V).value == 3
    assert degree(V).is_finite


def test_explicit_atom_is_validated():
    swap = Matrix.from_rows([[0, 1], [1, 0]], RATIONALS)
    V = atom_module(2, Representation.EXPLICIT, 3, RATIONALS, [swap])
    assert V.dims == (0, 0, 2, 0)
    with pytest.raises(ModuleValidationError):
        atom_module(2, Representation.EXPLICIT, 3, RATIONALS, [swap.scale(2)])


def test_atom_outside_window():
    with pytest.raises(TruncationError):
        atom_module(4, Representation.TRIVIAL, 3)


@pytest.mark.parametrize("relation", [Relation.INVOLUTION, Relation.EQUIVARIANCE, Relation.SWAP_TRIVIALITY])
def test_corruptions_are_caught(relation, field):
    broken = dict(corruptions(field))[relation]
    report = validate_module(broken)
    assert not report.ok
    assert relation in {failure.relation for failure in report.failures}
    with pytest.raises(ModuleValidationError):
        report.raise_for_failure()


def test_skipped_relation_is_not_checked():
    broken = dict(corruptions(RATIONALS))[Relation.SWAP_TRIVIALITY]
    relations = {Relation.INVOLUTION, Relation.COMMUTATION, Relation.BRAID, Relation.EQUIVARIANCE}
    assert validate_module(broken, relations).ok


def test_first_failure_names_the_place():
    broken = dict(corruptions(RATIONALS))[Relation.INVOLUTION]
    first = validate_module(broken).first_failure
    assert first.relation is Relation.INVOLUTION
    assert first.n == 2
    assert str(first) == "coxeter-involution violated at n=2, i=1"


@given(injections())
def test_free_module_action_matches_post_composition(alpha):
    for d in range(3):
        V = free_module(d, 4)
        assert injection_matrix(V, alpha) == free_module_injection_matrix(d, alpha)


@st.composite
def composable_pairs(draw, max_n=4):
    q = draw(st.integers(0, max_n))
    n = draw(st.integers(0, q))
    m = draw(st.integers(0, n))
    alpha = Injection(n, tuple(draw(st.permutations(range(1, n + 1)))[:m]))
    beta = Injection(q, tuple(draw(st.permutations(range(1, q + 1)))[:n]))
    return alpha, beta


@given(composable_pairs())
def test_functoriality(pair):
    alpha, beta = pair
    V = direct_sum(free_module(1, 4), atom_module(2, Representation.REGULAR, 4))
    assert injection_matrix(V, beta.compose(alpha)) == injection_matrix(V, beta) @ injection_matrix(V, alpha)


def test_word_action_ignores_the_choice_of_word(M2):
    sigma = Permutation((3, 1, 4, 2))
    assert word_action(M2, 4, reduced_word(sigma)) == word_action(M2, 4, reduced_word(sigma, rightmost=True))
    assert permutation_action(M2, sigma) == word_action(M2, 4, reduced_word(sigma))


@pytest.mark.parametrize("V", [
    free_module(1, 4),
    free_module(2, 4),
    truncate_above(free_module(0, 4), 2),
    atom_module(2, Representation.SIGN, 4),
])
def test_j_image_matches_brute_force(V):
    for n in range(V.N + 1):
        assert j_image(V, n) == j_image_bruteforce(V, n)


@pytest.mark.parametrize("d", range(4))
def test_coinvariants_of_free_modules(d):
    co = coinvariants(free_module(d, 4))
    assert co.dims == tuple(factorial(d) if n == d else 0 for n in range(5))


def test_coinvariants_of_m1(M1):
    assert coinvariants(M1).dims == (0, 1, 0, 0)


def test_degree():
    assert degree(zero_module(3)).is_neg_inf
    assert str(degree(zero_module(3))) == "-inf"
    assert degree(truncate_above(free_module(0, 5), 1)).value == 1
    unbounded = degree(free_module(1, 3))
    assert unbounded.unbounded
    assert str(unbounded) == ">=3"


def test_windows():
    V = truncate_above(free_module(0, 3), 1)
    wider = extend_window(V, 6)
    assert wider.dims == (1, 1, 0, 0, 0, 0, 0)
    assert validate_module(wider).ok
    assert restrict_window(wider, 3) == V
    with pytest.raises(TruncationError):
        extend_window(free_module(0, 3), 5)
    with pytest.raises(TruncationError):
        V.dim(4)


def test_direct_sum():
    V = direct_sum(free_module(1, 3), atom_module(2, Representation.TRIVIAL, 3))
    assert V.dims == (0, 1, 3, 3)
    assert validate_module(V).ok
    with pytest.raises(InputError):
        direct_sum(free_module(1, 3), free_module(1, 4))
    with pytest.raises(InputError):
        direct_sum(free_module(1, 3), free_module(1, 3, prime_field(3)))


def test_yoneda_identity(M2):
    f = yoneda_morphism(M2, 2, [1, 0])
    assert all(m.is_identity() for m in f.mats)
    assert validate_morphism(f).ok


def test_yoneda_into_an_atom():
    atom = atom_module(1, Representation.TRIVIAL, 4)
    f = yoneda_morphism(atom, 1, [1])
    assert validate_morphism(f).ok
    assert f.ranks() == (0, 1, 0, 0, 0)
    K, inclusion = kernel_module(f)
    assert K.dims == (0, 0, 2, 3, 4)
    assert validate_module(K).ok
    assert validate_morphism(inclusion).ok
    assert f.compose(inclusion).is_zero()


def test_kernel_of_identity_is_zero(M1):
    K, _ = kernel_module(identity_morphism(M1))
    assert K.is_zero()


def test_kernels_act_through_their_ambient_module():
    f = yoneda_morphism(atom_module(1, Representation.TRIVIAL, 4), 1, [1])
    K, inclusion = kernel_module(f)
    assert K.embedding.ambient is f.source
    for n in range(K.N + 1):
        assert K.embedding.lift(n, Matrix.identity(K.dims[n], RATIONALS)) == inclusion.mats[n]
        assert j_image(K, n) == j_image_bruteforce(K, n)
    g = yoneda_morphism(K, 2, [1, 0])
    assert validate_morphism(g).ok
    lifted = yoneda_morphism(f.source, 2, K.embedding.subspaces[2].basis.column(0))
    assert list(inclusion.compose(g).mats) == list(lifted.mats)


def test_quotient_by_degree_two_is_a_truncation():
    M0 = free_module(0, 4)
    Q = quotient_module(M0, span_submodule(M0, [(2, [1])]))
    assert Q == truncate_above(M0, 1)


def test_quotient_of_m1():
    M1 = free_module(1, 4)
    sub = span_submodule(M1, [(2, [1, -1])])
    assert [s.dim for s in sub] == [0, 0, 1, 2, 3]
    Q = quotient_module(M1, sub)
    assert Q.dims == (0, 1, 1, 1, 1)
    assert validate_module(Q).ok


def test_quotient_rejects_non_submodules(M1):
    sub = [Subspace.zero(d, RATIONALS) for d in M1.dims]
    sub[2] = image_basis(Matrix.column_vector([1, 0], RATIONALS))
    with pytest.raises(SubmoduleError):
        quotient_module(M1, sub)


def test_module_equality_ignores_notes(M1):
    assert M1.with_note("other") == M1
    assert M1 != free_module(1, 4)


def test_structure_shapes_are_checked():
    with pytest.raises(InputError):
        TruncatedFIModule(RATIONALS, (1, 1), ((), ()), (Matrix.zeros(2, 1, RATIONALS),))


def test_free_module_dimensions_count_injections():
    V = free_module(3, 5)
    assert V.dims == tuple(perm(n, 3) if n >= 3 else 0 for n in range(6))
