import pytest

from fi_koszul.exactla import prime_field
from fi_koszul.fihom import CoverStrategy
from fi_koszul.ficore import MODULE_RELATIONS, Relation, validate_module
from fi_koszul.koszul import SignConvention
from fi_koszul.selftest import CriterionResult, SelfTest, build_corpus, first_failure, run_selftest


def test_corpus_is_valid(field):
    for name, V in build_corpus(4, field, quick=True):
        assert validate_module(V).ok, name
        assert V.N == 4


def test_quick_run_passes():
    results = run_selftest(quick=True)
    assert [r.number for r in results] == [1, 2, 3, 4, 5, 6]
    assert first_failure(results) is None, [str(r) for r in results]


@pytest.mark.parametrize("options", [
    {"convention": SignConvention.SHIFTED},
    pytest.param({"strategy": CoverStrategy.BASIS}, marks=pytest.mark.slow),
    {"field": prime_field(3), "seed": 11},
])
def test_variants_pass(options):
    assert first_failure(run_selftest(quick=True, **options)) is None


def test_basis_cover_on_a_small_window():
    check = SelfTest(quick=True, strategy=CoverStrategy.BASIS)
    check.compare_N, check.a_max = 3, 1
    assert check.koszul_equals_tor() is None


def test_skipping_a_relation_fails_the_structural_criterion():
    relations = MODULE_RELATIONS - {Relation.SWAP_TRIVIALITY}
    results = run_selftest(quick=True, relations=relations)
    failure = first_failure(results)
    assert failure.number == 5
    assert "swap-triviality" in failure.detail


def test_torsion_corpus_fits_the_window():
    check = SelfTest(quick=True)
    for name, V in check.torsion_corpus():
        assert not V.dims[-1], name
        assert V.N == max(n for n, d in enumerate(V.dims) if d) + check.a_max + 1


def test_torsion_corpus_starts_in_degree_zero():
    names = [name for name, _ in SelfTest(quick=True).torsion_corpus()]
    assert "atom(0, trivial)" in names
    assert "atom(0, sign)" not in names
    assert len(names) == len(set(names))


def test_result_formatting():
    assert str(CriterionResult(1, "structural checks", True)) == "[1] ok   structural checks"
    failed = CriterionResult(5, "structural checks", False, "M(1) fails validation")
    assert str(failed) == "[5] FAIL structural checks: M(1) fails validation"
