"""FI-homology ``H^FI_a = Tor_a(A/J, -)`` through free resolutions by sums of M(d).

Resolutions are built from free covers of successive kernels. Applying
coinvariants to a free module is cheap: ``H_0(M(d))`` lives only in degree d,
where it is all of ``M(d)([d])``. At degree n the coinvariant complex is
therefore a block of each differential, namely the rows and columns of the
summands generated in degree n.
"""
import dataclasses
import logging
import random
from enum import Enum
from math import comb
from typing import List, Optional, Sequence, Tuple

from .exactla import Matrix, Subspace, homology_dim, image_basis, rank
from .exceptions import InputError, InternalConsistencyError, NonTorsionError, WindowTooSmallError
from .ficore import (
    NEG_INF,
    Degree,
    FIMorphism,
    TruncatedFIModule,
    coinvariants,
    degree,
    direct_sum_of,
    free_module,
    free_module_basis,
    kernel_module,
    restrict_window,
    yoneda_columns,
    zero_module,
    zero_morphism,
)
from .koszul import (
    HomologyTable,
    Provenance,
    SignConvention,
    koszul_homology_table,
    table_window,
    tabulate,
)
from .limits import check_dimension

logger = logging.getLogger(__name__)


class CoverStrategy(Enum):
    """BASIS gives one summand per basis vector of ``H_0(V)``. ORBIT may use fewer,
    so ``FreeCover.summands`` only matches ``dim H_0(V)`` under BASIS."""

    BASIS = "basis"
    ORBIT = "orbit"


@dataclasses.dataclass(frozen=True, eq=False)
class FreeCover:
    """``⊕ M(d_i) → V``; summand i sends its identity injection to ``generators[i]``.

    When V carries an :class:`~fi_koszul.ficore.Embedding`, ``lifted`` is the
    surjection followed by that embedding, one matrix per degree.
    """

    summands: Tuple[int, ...]
    generators: Tuple[Tuple[int, Tuple], ...]
    cover_module: TruncatedFIModule
    surjection: FIMorphism
    lifted: Optional[Tuple[Matrix, ...]] = None

    def coinvariant_coordinates(self, n: int) -> Tuple[int, ...]:
        """Coordinates of ``cover_module([n])`` that survive in coinvariants: the summands of degree n."""
        result, offset = [], 0
        for d in self.summands:
            size = len(free_module_basis(d, n))
            if d == n:
                result.extend(range(offset, offset + size))
            offset += size
        return tuple(result)


def _orbit_closure(space: Subspace, generators: Sequence[Matrix]) -> Subspace:
    while space.dim:
        moved = [g @ space.basis for g in generators]
        grown = image_basis(Matrix.hstack([space.basis] + moved, space.ambient_dim, space.field))
        if grown.dim == space.dim:
            break
        space = grown
    return space


def _basis_generators(V: TruncatedFIModule, co, rng: Optional[random.Random]) -> List[Tuple[int, Matrix]]:
    generators = [(n, co.sections[n].select_columns([k])) for n in range(V.N + 1) for k in range(co.dims[n])]
    if rng is not None:
        rng.shuffle(generators)
    return generators


# Random tries per generator before falling back to a unit vector
GENERIC_TRIES = 3


def _candidates(size: int, field, rng: random.Random):
    """A few random combinations, then every unit vector, over and over."""
    bound = field.characteristic or 97
    while True:
        for _ in range(GENERIC_TRIES):
            yield Matrix.column_vector([rng.randrange(bound) for _ in range(size)], field)
        for k in range(size):
            yield Matrix.from_sparse(size, 1, {(k, 0): 1}, field)


def _orbit_generators(V: TruncatedFIModule, co, rng: Optional[random.Random]) -> List[Tuple[int, Matrix]]:
    rng = rng if rng is not None else random.Random(0)
    generators = []
    for n in range(V.N + 1):
        size = co.dims[n]
        if not size:
            continue
        # S_n acts on V/JV through the chosen complement
        induced = [co.projections[n] @ (t @ co.sections[n]) for t in V.transpositions[n]]
        spanned = Subspace.zero(size, V.field)
        for candidate in _candidates(size, V.field, rng):
            if spanned.dim == size:
                break
            if spanned.contains(candidate):
                continue
            generators.append((n, co.sections[n] @ candidate))
            spanned = _orbit_closure(
                image_basis(Matrix.hstack([spanned.basis, candidate], size, V.field)), induced
            )
    return generators


def free_cover(V: TruncatedFIModule, strategy: CoverStrategy = CoverStrategy.BASIS,
               rng: Optional[random.Random] = None) -> FreeCover:
    """A surjection from a finite sum of free modules onto V.

    ``BASIS`` uses one summand per basis vector of ``H_0(V)``, which is the
    library default. ``ORBIT`` only uses enough generators for their
    S_n-translates to span ``H_0(V)([n])``; it is still a free cover, so Tor is
    unchanged, and the command line and :class:`~fi_koszul.selftest.SelfTest`
    default to it. ``rng`` permutes the generator order (BASIS) or draws the
    random combinations tried as generators (ORBIT).
    """
    strategy = CoverStrategy(strategy)
    co = coinvariants(V)
    if strategy is CoverStrategy.BASIS:
        chosen = _basis_generators(V, co, rng)
    else:
        chosen = _orbit_generators(V, co, rng)
    if not chosen:
        P = zero_module(V.N, V.field)
        lifted = None
        if V.embedding is not None:
            lifted = tuple(Matrix.zeros(d, 0, V.field) for d in V.embedding.ambient.dims)
        return FreeCover((), (), P, zero_morphism(P, V), lifted)

    pieces = [yoneda_columns(V, d, vector.column(0)) for d, vector in chosen]
    P = direct_sum_of([free_module(d, V.N, V.field) for d, _ in chosen])
    W = V.embedding.ambient if V.embedding is not None else V
    columns = [Matrix.hstack([piece[n] for piece in pieces], W.dims[n], V.field) for n in range(V.N + 1)]
    mats = columns
    if V.embedding is not None:
        mats = [V.embedding.restrict(n, c) for n, c in enumerate(columns)]
    for n in range(V.N + 1):
        check_dimension(P.dims[n], "cover term at degree {}".format(n))
        if rank(mats[n]) != V.dims[n]:
            raise InternalConsistencyError("Cover of {!r} is not surjective in degree {}".format(V, n))
    summands = tuple(d for d, _ in chosen)
    logger.debug("Free cover of %r by %d summands of degrees %s", V, len(summands), summands)
    return FreeCover(
        summands=summands,
        generators=tuple((d, vector.column(0)) for d, vector in chosen),
        cover_module=P,
        surjection=FIMorphism(P, V, mats),
        lifted=tuple(columns) if V.embedding is not None else None,
    )


@dataclasses.dataclass(frozen=True, eq=False)
class Resolution:
    """``P_L → … → P_0 → V``. ``differentials[a-1]`` is ``P_a → P_{a-1}``."""

    target: TruncatedFIModule
    covers: Tuple[FreeCover, ...]
    differentials: Tuple[FIMorphism, ...]

    @property
    def length(self) -> int:
        return len(self.differentials)

    @property
    def augmentation(self) -> FIMorphism:
        return self.covers[0].surjection

    def module(self, a: int) -> TruncatedFIModule:
        return self.covers[a].cover_module

    def incoming(self, a: int) -> FIMorphism:
        """The map into spot a, where spot -1 is the target."""
        return self.augmentation if a == -1 else self.differentials[a]

    def exactness_defects(self) -> List[Tuple[str, int]]:
        """Spots and degrees where a composite is nonzero or ``rank(in) + rank(out) != dim``."""
        defects = []
        for n in range(self.target.N + 1):
            out_rank = 0
            for a in range(-1, self.length):
                spot = "V" if a == -1 else "P{}".format(a)
                middle = self.target.dims[n] if a == -1 else self.module(a).dims[n]
                in_map = self.incoming(a).mats[n]
                if a >= 0 and not (self.incoming(a - 1).mats[n] @ in_map).is_zero():
                    defects.append((spot, n))
                in_rank = rank(in_map)
                if in_rank + out_rank != middle:
                    defects.append((spot, n))
                out_rank = in_rank
        return defects

    def coinvariant_differential(self, a: int, n: int) -> Matrix:
        """``H_0(P_a)([n]) → H_0(P_{a-1})([n])``; a = 0 gives the zero map to the target side."""
        columns = self.covers[a].coinvariant_coordinates(n)
        if a == 0:
            return Matrix.zeros(0, len(columns), self.target.field)
        rows = self.covers[a - 1].coinvariant_coordinates(n)
        return self.differentials[a - 1].mats[n].select_rows(rows).select_columns(columns)


def resolution(V: TruncatedFIModule, length: int, strategy: CoverStrategy = CoverStrategy.BASIS,
               rng: Optional[random.Random] = None) -> Resolution:
    """Free resolution ``P_0 .. P_length`` of V, exact in every degree of the window."""
    if length < 0:
        raise InputError("Negative resolution length {}".format(length))
    covers = [free_cover(V, strategy, rng)]
    differentials = []
    for a in range(1, length + 1):
        K, _ = kernel_module(covers[-1].surjection)
        logger.debug("Syzygy module %d of %r has dims %s", a, V, K.dims)
        cover = free_cover(K, strategy, rng)
        covers.append(cover)
        # K is embedded in the previous cover module, so the lifted surjection is the differential
        differentials.append(FIMorphism(cover.cover_module, covers[-2].cover_module, cover.lifted))
    result = Resolution(V, tuple(covers), tuple(differentials))
    defects = result.exactness_defects()
    if defects:
        raise InternalConsistencyError("Resolution of {!r} is not exact at {}".format(V, defects))
    return result


def tor_table(V: TruncatedFIModule, a_max: Optional[int] = None, n_max: Optional[int] = None,
              strategy: CoverStrategy = CoverStrategy.BASIS, shuffle_seed: Optional[int] = None,
              workers: int = 1) -> HomologyTable:
    """``dim Tor_a(A/J, V)([n])`` from the coinvariants of a free resolution."""
    n_max, a_max = table_window(V, n_max, a_max)
    rng = random.Random(shuffle_seed) if shuffle_seed is not None else None
    res = resolution(restrict_window(V, n_max), a_max + 1, strategy, rng)

    def column(n):
        return [
            homology_dim(res.coinvariant_differential(a, n), res.coinvariant_differential(a + 1, n))
            for a in range(a_max + 1)
        ]

    columns = tabulate(column, n_max, workers)
    return HomologyTable(
        provenance=Provenance.TOR,
        field=V.field,
        a_max=a_max,
        n_max=n_max,
        dims=tuple(tuple(columns[n][a] for n in range(n_max + 1)) for a in range(a_max + 1)),
    )


@dataclasses.dataclass(frozen=True)
class ComparisonReport:
    koszul: HomologyTable
    tor: HomologyTable
    mismatches: Tuple[Tuple[int, int, Optional[int], Optional[int]], ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def __bool__(self):
        return self.ok


def compare_tables(koszul: HomologyTable, tor: HomologyTable) -> ComparisonReport:
    return ComparisonReport(koszul, tor, tuple(koszul.differences(tor)))


def compare_koszul_with_tor(V: TruncatedFIModule, a_max: Optional[int] = None, n_max: Optional[int] = None,
                            strategy: CoverStrategy = CoverStrategy.BASIS,
                            convention: SignConvention = SignConvention.PAPER, workers: int = 1) -> ComparisonReport:
    """Koszul homology against FI-homology, cell by cell."""
    report = compare_tables(
        koszul_homology_table(V, n_max, a_max, convention, workers=workers),
        tor_table(V, a_max, n_max, strategy, workers=workers),
    )
    if not report.ok:
        logger.warning("Koszul and Tor tables of %r differ in %d cells", V, len(report.mismatches))
    return report


class Verdict(Enum):
    EQUAL = "reg_observed == deg"
    NOT_ATTAINED = "reg_observed < deg"
    BOUND_VIOLATED = "deg H_a > deg + a"


@dataclasses.dataclass(frozen=True)
class RegularityReport:
    deg_V: Degree
    a_max: int
    degrees: Tuple[Degree, ...]
    reg_observed: Degree
    bound_ok: bool
    verdict: Verdict
    first_nonvanishing_a: Optional[int] = None
    certificate_a: Optional[int] = None
    lower_bounds: Tuple[int, ...] = ()
    reg_certified: bool = False
    table: Optional[HomologyTable] = None

    def degree_of(self, a: int) -> Degree:
        """``deg H_a`` for ``1 <= a <= a_max``."""
        return self.degrees[a - 1]

    def nonvanishing_lower_bound(self, a: int) -> int:
        return self.lower_bounds[a - 1]

    @property
    def violations(self) -> Tuple[int, ...]:
        """The a for which ``deg H_a > deg V + a``."""
        p = self.deg_V.value
        return tuple(
            a for a, d in enumerate(self.degrees, start=1)
            if not d.is_neg_inf and (d.unbounded or d.value > p + a)
        )


def nonvanishing_certificate(x: int, y: int, p: int) -> int:
    """Smallest ``a >= 1`` with ``(a + 1)·x > p·y``, so that ``H_a([p+a]) != 0``."""
    if x <= 0:
        raise InputError("The top degree of a torsion module is nonzero")
    return max(1, p * y // x)


def nonvanishing_lower_bound(x: int, y: int, p: int, a: int) -> int:
    """``dim C_a − dim C_{a+1}`` at ``[p+a]``, a lower bound for ``dim H_a([p+a])``."""
    return comb(p + a, a) * x - comb(p + a, a + 1) * y


def regularity_report(V: TruncatedFIModule, a_max: int,
                      convention: SignConvention = SignConvention.PAPER, workers: int = 1) -> RegularityReport:
    """Degrees of ``H_a`` for ``1 <= a <= a_max`` over the window, compared with ``deg V``.

    V must be torsion with ``deg V < N − a_max``; pad the window with
    :func:`~fi_koszul.ficore.extend_window` if needed.
    """
    if a_max < 1:
        raise InputError("Regularity needs a_max >= 1")
    deg_V = degree(V)
    if deg_V.is_neg_inf:
        return RegularityReport(
            deg_V=NEG_INF,
            a_max=a_max,
            degrees=(NEG_INF,) * a_max,
            reg_observed=NEG_INF,
            bound_ok=True,
            verdict=Verdict.EQUAL,
            reg_certified=True,
        )
    if deg_V.unbounded:
        raise NonTorsionError("{!r} is nonzero at the top of its window, its degree is not determined".format(V))
    p = deg_V.value
    if not p < V.N - a_max:
        raise WindowTooSmallError(
            "deg = {} needs a window N > {} for a_max = {}, got N = {}".format(p, p + a_max, a_max, V.N)
        )
    if p == V.N - a_max - 1:
        logger.warning("Window N=%d of %r is exactly at the limit for a_max=%d", V.N, V, a_max)

    n_max = p + a_max + 1
    table = koszul_homology_table(V, n_max=n_max, a_max=a_max, convention=convention, workers=workers)
    degrees = tuple(table.row_degree(a) for a in range(1, a_max + 1))
    shifted = [d.value - a for a, d in enumerate(degrees, start=1) if not d.is_neg_inf]
    reg_observed = Degree(max(shifted)) if shifted else NEG_INF
    bound_ok = all(d.is_neg_inf or (not d.unbounded and d.value <= p + a) for a, d in enumerate(degrees, start=1))
    first = next((a for a in range(1, a_max + 1) if table[a, p + a]), None)

    x, y = V.dims[p], V.dims[p - 1] if p > 0 else 0
    lower_bounds = tuple(nonvanishing_lower_bound(x, y, p, a) for a in range(1, a_max + 1))
    for a, bound in enumerate(lower_bounds, start=1):
        if table[a, p + a] < bound:
            raise InternalConsistencyError("dim H_{}([{}]) = {} is below {}".format(a, p + a, table[a, p + a], bound))

    if not bound_ok:
        verdict = Verdict.BOUND_VIOLATED
    elif reg_observed.value == p:
        verdict = Verdict.EQUAL
    else:
        verdict = Verdict.NOT_ATTAINED
    return RegularityReport(
        deg_V=deg_V,
        a_max=a_max,
        degrees=degrees,
        reg_observed=reg_observed,
        bound_ok=bound_ok,
        verdict=verdict,
        first_nonvanishing_a=first,
        certificate_a=nonvanishing_certificate(x, y, p),
        lower_bounds=lower_bounds,
        reg_certified=bound_ok,
        table=table,
    )
