"""Acceptance suite run by ``fi-koszul selftest``.

Six criteria, each over a constructively built corpus of modules:

1. rows a >= 1 of the Koszul table of M(d) vanish;
2. Koszul H_0 of M(d) is d! in degree d and zero elsewhere;
3. Koszul and FI-homology tables agree;
4. regularity equals degree for torsion modules, over the window;
5. structural checks (validation and its negative controls, d∘d = 0, Euler
   characteristics, H_0 against coinvariants, functoriality, J-images);
6. the tables do not depend on generator or subset enumeration order.
"""
import dataclasses
import logging
import random
from math import comb, factorial
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .exactla import Field, Matrix, RATIONALS, prime_field
from .exceptions import FIKoszulError
from .fihom import CoverStrategy, Verdict, compare_koszul_with_tor, regularity_report, tor_table
from .ficore import (
    MODULE_RELATIONS,
    Injection,
    Relation,
    Representation,
    TruncatedFIModule,
    atom_module,
    coinvariants,
    degree,
    direct_sum,
    extend_window,
    free_module,
    injection_matrix,
    j_image,
    j_image_bruteforce,
    kernel_module,
    quotient_module,
    span_submodule,
    truncate_above,
    validate_module,
    yoneda_morphism,
)
from .koszul import SignConvention, koszul_complex, koszul_homology_table

logger = logging.getLogger(__name__)

Corpus = List[Tuple[str, TruncatedFIModule]]


@dataclasses.dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    ok: bool
    detail: str = ""

    def __str__(self):
        return "[{}] {} {}{}".format(
            self.number, "ok  " if self.ok else "FAIL", self.name, ": " + self.detail if self.detail else ""
        )


def build_corpus(N: int, field: Field = RATIONALS, quick: bool = False) -> Corpus:
    """Free modules, atoms, truncations, sums, a kernel and quotients, all over one window."""
    corpus = []
    for d in range(3 if quick else 4):
        corpus.append(("M({})".format(d), free_module(d, N, field)))
    reps = [(1, Representation.TRIVIAL), (2, Representation.TRIVIAL), (2, Representation.REGULAR)] if quick else [
        (p, rep) for p in range(1, 4) for rep in (Representation.TRIVIAL, Representation.SIGN, Representation.REGULAR)
    ]
    for p, rep in reps:
        corpus.append(("atom({}, {})".format(p, rep.value), atom_module(p, rep, N, field)))
    truncations = [(0, 1), (1, 2)] if quick else [(d, q) for d in range(3) for q in range(d, min(4, N) + 1)]
    for d, q in truncations:
        corpus.append(("truncate({}, M({}))".format(q, d), truncate_above(free_module(d, N, field), q)))

    constant_q1 = truncate_above(free_module(0, N, field), 1)
    corpus.append(("M(1) + atom(2)", direct_sum(free_module(1, N, field), atom_module(2, Representation.TRIVIAL, N, field))))
    if not quick:
        corpus.append(("truncate(1, M(0)) + atom(1, sign)",
                       direct_sum(constant_q1, atom_module(1, Representation.SIGN, N, field))))
    atom1 = atom_module(1, Representation.TRIVIAL, N, field)
    corpus.append(("ker(M(1) -> atom(1))", kernel_module(yoneda_morphism(atom1, 1, [1]))[0]))
    M0 = free_module(0, N, field)
    corpus.append(("M(0) / <degree 2>", quotient_module(M0, span_submodule(M0, [(2, [1])]))))
    if not quick:
        M1 = free_module(1, N, field)
        corpus.append(("M(1) / <e1 - e2>", quotient_module(M1, span_submodule(M1, [(2, [1, -1])]))))
    return corpus


def corruptions(field: Field = RATIONALS) -> List[Tuple[Relation, TruncatedFIModule]]:
    """Three broken presentations, each violating the named relation."""
    M2 = free_module(2, 4, field)

    def replace(V, transpositions=None, inclusions=None):
        return TruncatedFIModule(
            V.field, V.dims, transpositions or V.transpositions, inclusions or V.inclusions, note="corrupted"
        )

    doubled = list(M2.transpositions)
    doubled[2] = (Matrix.identity(2, field).scale(2),)
    twisted = list(M2.inclusions)
    twisted[2] = M2.transpositions[3][1] @ M2.inclusions[2]
    # k, k, then the regular representation of S_2 with φ_1 hitting one basis vector
    swapped = TruncatedFIModule(
        field,
        (1, 1, 2),
        ((), (), (Matrix.from_rows([[0, 1], [1, 0]], field),)),
        (Matrix.identity(1, field), Matrix.from_rows([[1], [0]], field)),
        note="corrupted",
    )
    return [
        (Relation.INVOLUTION, replace(M2, transpositions=tuple(doubled))),
        (Relation.EQUIVARIANCE, replace(M2, inclusions=tuple(twisted))),
        (Relation.SWAP_TRIVIALITY, swapped),
    ]


def random_injection(rng: random.Random, m: int, n: int) -> Injection:
    return Injection(n, tuple(rng.sample(range(1, n + 1), m)))


class SelfTest:
    def __init__(self, field: Field = RATIONALS, convention: SignConvention = SignConvention.PAPER,
                 relations: Iterable[Relation] = MODULE_RELATIONS, quick: bool = False,
                 strategy: CoverStrategy = CoverStrategy.ORBIT, workers: int = 1, seed: int = 0):
        self.field = field
        self.convention = convention
        self.relations = frozenset(relations)
        self.quick = quick
        self.strategy = strategy
        self.workers = workers
        self.seed = seed
        self.N = 4 if quick else 6
        self.compare_N = 4 if quick else 5
        self.a_max = 3

    def criteria(self) -> List[Tuple[str, Callable[[], Optional[str]]]]:
        return [
            ("Koszul complexes of free modules are exact in positive degrees", self.free_exactness),
            ("H_0 of M(d) is concentrated in degree d with dimension d!", self.free_degree_zero),
            ("Koszul homology equals FI-homology", self.koszul_equals_tor),
            ("regularity equals degree for torsion modules", self.regularity_equals_degree),
            ("structural checks", self.structure),
            ("tables do not depend on enumeration order", self.order_independence),
        ]

    def run(self) -> List[CriterionResult]:
        results = []
        for number, (name, check) in enumerate(self.criteria(), start=1):
            try:
                problem = check()
            except FIKoszulError as e:
                problem = "{}: {}".format(type(e).__name__, e)
            result = CriterionResult(number, name, problem is None, problem or "")
            logger.info("%s", result)
            results.append(result)
        return results

    # Criteria return None on success, otherwise a description of the first problem

    def free_exactness(self) -> Optional[str]:
        for d in range(4):
            table = koszul_homology_table(free_module(d, self.N, self.field), convention=self.convention,
                                          workers=self.workers)
            for a in range(1, table.a_max + 1):
                if any(table.row(a)):
                    return "M({}) has H_{} = {}".format(d, a, table.row(a))
        return None

    def free_degree_zero(self) -> Optional[str]:
        for d in range(4):
            table = koszul_homology_table(free_module(d, self.N, self.field), a_max=0, convention=self.convention)
            expected = tuple(factorial(d) if n == d else 0 for n in range(self.N + 1))
            if table.row(0) != expected:
                return "M({}) has H_0 = {}, expected {}".format(d, table.row(0), expected)
        return None

    def koszul_equals_tor(self) -> Optional[str]:
        fields = [self.field]
        if not self.quick and self.field != prime_field(2):
            fields.append(prime_field(2))
        for field in fields:
            for name, V in build_corpus(self.compare_N, field, self.quick):
                report = compare_koszul_with_tor(V, self.a_max, strategy=self.strategy, convention=self.convention,
                                                 workers=self.workers)
                if not report.ok:
                    return "{} over {}: first difference {}".format(name, field, report.mismatches[0])
        return None

    def torsion_corpus(self) -> Corpus:
        degrees = range(0, 3 if self.quick else 5)
        # S_0 is trivial, so degree 0 carries one atom
        corpus = [
            ("atom({}, {})".format(p, rep.value), atom_module(p, rep, p + 1, self.field))
            for p in degrees
            for rep in (Representation.TRIVIAL, Representation.SIGN, Representation.REGULAR)
            if (rep is not Representation.REGULAR or p <= 3) and (p > 0 or rep is Representation.TRIVIAL)
        ]
        corpus += [
            ("truncate({}, M({}))".format(q, d), truncate_above(free_module(d, q + 1, self.field), q))
            for d in range(3) for q in degrees if q >= max(d, 1)
        ]
        return [(name, extend_window(V, degree(V).value + self.a_max + 1)) for name, V in corpus]

    def regularity_equals_degree(self) -> Optional[str]:
        for name, V in self.torsion_corpus():
            report = regularity_report(V, self.a_max, self.convention, self.workers)
            p = report.deg_V.value
            if not report.bound_ok:
                return "{}: band bound fails for a in {}".format(name, report.violations)
            if name.startswith("atom"):
                for a in range(1, self.a_max + 1):
                    expected = comb(p + a, a) * V.dims[p]
                    if report.table[a, p + a] != expected:
                        return "{}: dim H_{}([{}]) = {}, expected {}".format(
                            name, a, p + a, report.table[a, p + a], expected)
            if report.verdict is not Verdict.EQUAL:
                return "{}: reg_observed = {}, deg = {}".format(name, report.reg_observed, p)
        return None

    def structure(self) -> Optional[str]:
        rng = random.Random(self.seed)
        corpus = build_corpus(self.N, self.field, self.quick)
        for name, V in corpus:
            report = validate_module(V, self.relations)
            if not report.ok:
                return "{} fails validation: {}".format(name, report.first_failure)
        for relation, V in corruptions(self.field):
            if validate_module(V, self.relations).ok:
                return "corruption of {} passes validation".format(relation.value)
        for name, V in corpus:
            table = koszul_homology_table(V, convention=self.convention, workers=self.workers)
            h0 = coinvariants(V).dims
            if table.row(0) != h0:
                return "{}: Koszul H_0 {} differs from coinvariants {}".format(name, table.row(0), h0)
            for n in range(V.N + 1):
                complex_at = koszul_complex(V, n, self.convention)
                if complex_at.euler_characteristic() != table.euler_characteristic(n):
                    return "{}: Euler characteristics differ at degree {}".format(name, n)
            for n in range(1, min(V.N, 4) + 1):
                if j_image(V, n) != j_image_bruteforce(V, n):
                    return "{}: J-image differs from the brute force at degree {}".format(name, n)
        pairs = 20 if self.quick else 100
        for _ in range(pairs):
            name, V = rng.choice(corpus)
            q = rng.randint(0, V.N)
            n = rng.randint(0, q)
            m = rng.randint(0, n)
            alpha, beta = random_injection(rng, m, n), random_injection(rng, n, q)
            if injection_matrix(V, beta.compose(alpha)) != injection_matrix(V, beta) @ injection_matrix(V, alpha):
                return "{}: V(β∘α) ≠ V(β)V(α) for α = {}, β = {}".format(name, alpha.values, beta.values)
        return None

    def order_independence(self) -> Optional[str]:
        for name, V in build_corpus(4, self.field, quick=True):
            koszul = koszul_homology_table(V, a_max=self.a_max, convention=self.convention)
            shuffled = koszul_homology_table(V, a_max=self.a_max, convention=self.convention,
                                             subset_order_seed=self.seed + 1)
            if not koszul.same_entries(shuffled):
                return "{}: Koszul table depends on the subset order".format(name)
            tor = tor_table(V, self.a_max, strategy=self.strategy)
            reordered = tor_table(V, self.a_max, strategy=self.strategy, shuffle_seed=self.seed + 1)
            if not tor.same_entries(reordered):
                return "{}: FI-homology depends on the cover generator order".format(name)
        return None


def run_selftest(**kwargs) -> List[CriterionResult]:
    return SelfTest(**kwargs).run()


def first_failure(results: Sequence[CriterionResult]) -> Optional[CriterionResult]:
    return next((r for r in results if not r.ok), None)
