"""The Koszul complex ``(S̃_{-*} V)([n])`` of an FI-module and its homology.

The a-th term at ``[n]`` is the sum over a-subsets ``I ⊆ [n]`` of
``V([n] ∖ I) ⊗ det(I)``. Each ``V([n] ∖ I)`` is identified with ``V([n-a])``
through the order-preserving bijection. Subsets are enumerated in colex
order and the basis of the term is ``(subset, inner)`` with ``inner``
running fastest.
"""
import dataclasses
import itertools
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from functools import lru_cache
from math import comb
from typing import Callable, List, Optional, Sequence, Tuple

from .exactla import Field, Matrix, homology_dim
from .exceptions import ComplexError, InputError, TruncationError
from .ficore import (
    Degree,
    Injection,
    NEG_INF,
    TruncatedFIModule,
    free_module_basis,
    injection_matrix,
    restrict_window,
)

logger = logging.getLogger(__name__)


class SignConvention(Enum):
    PAPER = "paper"
    SHIFTED = "shifted"

    def sign(self, p: int) -> int:
        """Sign of the term that removes the p-th smallest element of I."""
        exponent = p if self is SignConvention.PAPER else p - 1
        return -1 if exponent % 2 else 1


class Provenance(Enum):
    KOSZUL = "koszul"
    TOR = "tor"


@lru_cache(maxsize=None)
def colex_subsets(n: int, a: int) -> Tuple[Tuple[int, ...], ...]:
    """a-subsets of ``[n]`` as increasing tuples, in colexicographic order."""
    return tuple(sorted(itertools.combinations(range(1, n + 1), a), key=lambda s: s[::-1]))


def colex_rank(subset: Sequence[int]) -> int:
    return sum(comb(i - 1, k) for k, i in enumerate(sorted(subset), start=1))


def complement(n: int, subset: Sequence[int]) -> Tuple[int, ...]:
    removed = set(subset)
    return tuple(k for k in range(1, n + 1) if k not in removed)


def face_injection(n: int, subset: Sequence[int], p: int) -> Injection:
    """The inclusion ``[n] ∖ I ↪ [n] ∖ (I ∖ {i_p})`` as an injection ``[n-a] → [n-a+1]``."""
    subset = tuple(subset)
    target = complement(n, subset[:p - 1] + subset[p:])
    position = {x: k for k, x in enumerate(target, start=1)}
    return Injection(len(target), tuple(position[x] for x in complement(n, subset)))


@dataclasses.dataclass(frozen=True)
class KoszulIndex:
    n: int
    a: int
    subset_pos: int
    inner: int

    @property
    def subset(self) -> Tuple[int, ...]:
        return colex_subsets(self.n, self.a)[self.subset_pos]

    def offset(self, inner_dim: int) -> int:
        return self.subset_pos * inner_dim + self.inner


def koszul_index(V: TruncatedFIModule, n: int, a: int, position: int) -> KoszulIndex:
    inner_dim = V.dim(n - a)
    if not 0 <= position < comb(n, a) * inner_dim:
        raise InputError("Position {} outside the term of dimension {}".format(position, comb(n, a) * inner_dim))
    subset_pos, inner = divmod(position, inner_dim)
    return KoszulIndex(n, a, subset_pos, inner)


def koszul_term_dim(V: TruncatedFIModule, n: int, a: int) -> int:
    V.check_degree(n)
    if a < 0 or a > n:
        return 0
    return comb(n, a) * V.dims[n - a]


def _differential(V: TruncatedFIModule, n: int, a: int, sources: Sequence[Tuple[int, ...]],
                  targets: Sequence[Tuple[int, ...]], convention: SignConvention) -> Matrix:
    inner_src, inner_tgt = V.dims[n - a], V.dims[n - a + 1]
    rows, cols = len(targets) * inner_tgt, len(sources) * inner_src
    if rows == 0 or cols == 0:
        return Matrix.zeros(rows, cols, V.field)
    target_pos = {s: k for k, s in enumerate(targets)}
    blocks = []
    for k, subset in enumerate(sources):
        for p in range(1, a + 1):
            block = injection_matrix(V, face_injection(n, subset, p))
            if convention.sign(p) < 0:
                block = -block
            blocks.append((target_pos[subset[:p - 1] + subset[p:]] * inner_tgt, k * inner_src, block))
    return Matrix.from_blocks(rows, cols, V.field, blocks)


def koszul_differential(V: TruncatedFIModule, n: int, a: int,
                        convention: SignConvention = SignConvention.PAPER) -> Matrix:
    """``d: (S̃_{-a} V)([n]) → (S̃_{-a+1} V)([n])`` in colex bases."""
    V.check_degree(n)
    if not 1 <= a <= n:
        raise InputError("Differential d_{} does not exist at degree {}".format(a, n))
    return _differential(V, n, a, colex_subsets(n, a), colex_subsets(n, a - 1), convention)


def _insertion_matrix(V: TruncatedFIModule, m: int, q: int) -> Matrix:
    """V of the injection ``[m] → [m+1]`` whose image misses q, as ``T_q ⋯ T_m φ_m``."""
    block = V.inclusions[m]
    for j in range(m, q - 1, -1):
        block = V.transpositions[m + 1][j - 1] @ block
    return block


def koszul_differential_direct(V: TruncatedFIModule, n: int, a: int,
                               convention: SignConvention = SignConvention.PAPER) -> Matrix:
    """Same matrix as :func:`koszul_differential`, for any V.

    Each face inclusion ``[n] ∖ I ↪ [n] ∖ (I ∖ {i_p})`` is written as the
    standard inclusion followed by the cycle that moves the new point into
    place, so neither :func:`~fi_koszul.ficore.factor_injection` nor reduced
    words are involved.
    """
    V.check_degree(n)
    if not 1 <= a <= n:
        raise InputError("Differential d_{} does not exist at degree {}".format(a, n))
    sources, targets = colex_subsets(n, a), colex_subsets(n, a - 1)
    m = n - a
    inner_src, inner_tgt = V.dims[m], V.dims[m + 1]
    target_pos = {s: k for k, s in enumerate(targets)}
    blocks = []
    for k, subset in enumerate(sources):
        for p, removed in enumerate(subset, start=1):
            face = subset[:p - 1] + subset[p:]
            q = complement(n, face).index(removed) + 1
            block = _insertion_matrix(V, m, q).scale(convention.sign(p))
            blocks.append((target_pos[face] * inner_tgt, k * inner_src, block))
    return Matrix.from_blocks(len(targets) * inner_tgt, len(sources) * inner_src, V.field, blocks)


def free_koszul_differential_direct(d: int, n: int, a: int, field: Field,
                                    convention: SignConvention = SignConvention.PAPER) -> Matrix:
    """Differential of the complex for M(d) only, built by relabelling every basis injection
    ``[d] → [n] ∖ I`` directly instead of going through the module presentation."""
    sources, targets = colex_subsets(n, a), colex_subsets(n, a - 1)
    inner_src, inner_tgt = free_module_basis(d, n - a), free_module_basis(d, n - a + 1)
    target_pos = {s: k for k, s in enumerate(targets)}
    target_index = {values: k for k, values in enumerate(inner_tgt)}
    entries = {}
    for k, subset in enumerate(sources):
        source_labels = complement(n, subset)
        for inner, alpha in enumerate(inner_src):
            labels = tuple(source_labels[v - 1] for v in alpha)
            for p in range(1, a + 1):
                face = subset[:p - 1] + subset[p:]
                target_labels = complement(n, face)
                relabelled = tuple(target_labels.index(x) + 1 for x in labels)
                key = (target_pos[face] * len(inner_tgt) + target_index[relabelled], k * len(inner_src) + inner)
                entries[key] = entries.get(key, 0) + convention.sign(p)
    return Matrix.from_sparse(len(targets) * len(inner_tgt), len(sources) * len(inner_src), entries, field)


@dataclasses.dataclass(frozen=True)
class ChainComplexAt:
    """Terms ``C_0 .. C_n`` and differentials ``d_a: C_a → C_{a-1}``; ``differentials[a-1]`` is ``d_a``.

    Only ``d_1 .. d_top`` are stored when the complex was built with a limit.
    """

    n: int
    field: Field
    term_dims: Tuple[int, ...]
    differentials: Tuple[Matrix, ...]

    @property
    def top(self) -> int:
        return len(self.differentials)

    def differential(self, a: int) -> Matrix:
        """``d_a``, with the zero maps at the two ends of the complex."""
        if a <= 0:
            return Matrix.zeros(0, self.term_dims[0], self.field)
        if a > self.n:
            return Matrix.zeros(self.term_dims[self.n] if a == self.n + 1 else 0, 0, self.field)
        if a > self.top:
            raise InputError("d_{} was not built (limit {})".format(a, self.top))
        return self.differentials[a - 1]

    def homology(self, a: int) -> int:
        if a < 0 or a > self.n:
            return 0
        return homology_dim(self.differential(a), self.differential(a + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** a * dim for a, dim in enumerate(self.term_dims))


def koszul_complex(V: TruncatedFIModule, n: int, convention: SignConvention = SignConvention.PAPER,
                   limit: Optional[int] = None, rng: Optional[random.Random] = None) -> ChainComplexAt:
    """Assemble ``(S̃_{-*} V)([n])``.

    ``limit`` stops after ``d_limit``. ``rng`` shuffles the subset enumeration
    of every term, which changes bases but never homology.
    """
    V.check_degree(n)
    top = n if limit is None else min(n, limit)
    enumerations = [list(colex_subsets(n, a)) for a in range(top + 1)]
    if rng is not None:
        for subsets in enumerations:
            rng.shuffle(subsets)
    differentials = tuple(
        _differential(V, n, a, enumerations[a], enumerations[a - 1], convention) for a in range(1, top + 1)
    )
    for a in range(1, top):
        if not (differentials[a - 1] @ differentials[a]).is_zero():
            raise ComplexError("d_{} ∘ d_{} ≠ 0 at degree {}".format(a, a + 1, n))
    return ChainComplexAt(
        n=n,
        field=V.field,
        term_dims=tuple(koszul_term_dim(V, n, a) for a in range(n + 1)),
        differentials=differentials,
    )


def euler_characteristic(complex_at: ChainComplexAt) -> int:
    return complex_at.euler_characteristic()


def homology_euler_characteristic(table: "HomologyTable", n: int) -> int:
    if table.a_max < n:
        raise InputError("Column {} is cut off at a_max={}".format(n, table.a_max))
    return table.euler_characteristic(n)


@dataclasses.dataclass(frozen=True)
class HomologyTable:
    """``dims[a][n]`` for ``0 <= a <= a_max`` and ``0 <= n <= n_max``."""

    provenance: Provenance
    field: Field
    a_max: int
    n_max: int
    dims: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(tuple(row) for row in self.dims))
        if len(self.dims) != self.a_max + 1 or any(len(row) != self.n_max + 1 for row in self.dims):
            raise InputError("Table shape does not match a_max={}, n_max={}".format(self.a_max, self.n_max))

    def __getitem__(self, cell: Tuple[int, int]) -> int:
        a, n = cell
        return self.dims[a][n]

    def row(self, a: int) -> Tuple[int, ...]:
        return self.dims[a]

    def column(self, n: int) -> Tuple[int, ...]:
        return tuple(row[n] for row in self.dims)

    def row_degree(self, a: int) -> Degree:
        nonzero = [n for n, value in enumerate(self.dims[a]) if value]
        if not nonzero:
            return NEG_INF
        return Degree(nonzero[-1], unbounded=nonzero[-1] == self.n_max)

    def euler_characteristic(self, n: int) -> int:
        """Alternating sum of column n; the full characteristic only when ``a_max >= n``."""
        return sum((-1) ** a * value for a, value in enumerate(self.column(n)))

    def differences(self, other: "HomologyTable") -> List[Tuple[int, int, Optional[int], Optional[int]]]:
        """Cells ``(a, n, mine, theirs)`` that differ; cells outside one window count as ``None``."""
        result = []
        for a in range(max(self.a_max, other.a_max) + 1):
            for n in range(max(self.n_max, other.n_max) + 1):
                mine = self.dims[a][n] if a <= self.a_max and n <= self.n_max else None
                theirs = other.dims[a][n] if a <= other.a_max and n <= other.n_max else None
                if mine != theirs:
                    result.append((a, n, mine, theirs))
        return result

    def same_entries(self, other: "HomologyTable") -> bool:
        return not self.differences(other)


def tabulate(columns: Callable[[int], Sequence[int]], n_max: int, workers: int = 1) -> List[Sequence[int]]:
    """Evaluate ``columns(n)`` for ``n = 0..n_max``, in parallel when ``workers > 1``; results
    keep degree order."""
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(columns, range(n_max + 1)))
    return [columns(n) for n in range(n_max + 1)]


def table_window(V: TruncatedFIModule, n_max: Optional[int], a_max: Optional[int]) -> Tuple[int, int]:
    n_max = V.N if n_max is None else n_max
    if n_max > V.N:
        raise TruncationError("n_max={} exceeds the window N={}".format(n_max, V.N))
    a_max = n_max if a_max is None else a_max
    if n_max < 0 or a_max < 0:
        raise InputError("Negative table bounds")
    return n_max, a_max


def koszul_homology_table(V: TruncatedFIModule, n_max: Optional[int] = None, a_max: Optional[int] = None,
                          convention: SignConvention = SignConvention.PAPER,
                          subset_order_seed: Optional[int] = None, workers: int = 1) -> HomologyTable:
    """``dim H_a((S̃_{-*} V)([n]))`` over the window."""
    n_max, a_max = table_window(V, n_max, a_max)
    W = restrict_window(V, n_max)

    def column(n):
        rng = random.Random("{}:{}".format(subset_order_seed, n)) if subset_order_seed is not None else None
        cx = koszul_complex(W, n, convention, limit=a_max + 1, rng=rng)
        values = [cx.homology(a) if a <= n else 0 for a in range(a_max + 1)]
        logger.debug("Koszul homology of %r at degree %d: %s", V, n, values)
        return values

    columns = tabulate(column, n_max, workers)
    return HomologyTable(
        provenance=Provenance.KOSZUL,
        field=V.field,
        a_max=a_max,
        n_max=n_max,
        dims=tuple(tuple(columns[n][a] for n in range(n_max + 1)) for a in range(a_max + 1)),
    )
