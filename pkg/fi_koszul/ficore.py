"""Truncated FI-modules presented as consistent sequences.

A module is stored by its dimensions ``d_0 .. d_N``, the matrices of the
adjacent transpositions ``s_i = (i, i+1)`` on each ``V([n])`` and the
matrices of the standard inclusions ``φ_n: V([n]) → V([n+1])``. Every
other injection acts through the canonical factorization
``α = σ ∘ ι`` (see :func:`factor_injection`).
"""
import dataclasses
import itertools
import logging
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactla import Field, Matrix, RATIONALS, Subspace, image_basis, kernel_basis, rank
from .exceptions import (
    DimensionMismatch,
    FieldMismatch,
    InputError,
    InternalConsistencyError,
    ModuleValidationError,
    SubmoduleError,
    TruncationError,
)

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class Permutation:
    """Element of S_n in one-line notation: ``one_line[i-1] = σ(i)``."""

    one_line: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "one_line", tuple(self.one_line))
        if sorted(self.one_line) != list(range(1, len(self.one_line) + 1)):
            raise InputError("{} is not a permutation of 1..{}".format(self.one_line, len(self.one_line)))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def adjacent(cls, n: int, i: int) -> "Permutation":
        """The transposition s_i = (i, i+1) in S_n."""
        if not 1 <= i < n:
            raise InputError("s_{} does not exist in S_{}".format(i, n))
        one_line = list(range(1, n + 1))
        one_line[i - 1], one_line[i] = one_line[i], one_line[i - 1]
        return cls(tuple(one_line))

    @classmethod
    def cycle(cls, j: int, n: int) -> "Permutation":
        """The cycle j ↦ j+1 ↦ … ↦ n ↦ j."""
        return cls(tuple(k if k < j else (k + 1 if k < n else j) for k in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.one_line)

    def __call__(self, i: int) -> int:
        return self.one_line[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """``self ∘ other`` (``other`` is applied first)."""
        if other.n != self.n:
            raise InputError("Cannot compose S_{} with S_{}".format(self.n, other.n))
        return Permutation(tuple(self(other(i)) for i in range(1, self.n + 1)))

    def inverse(self) -> "Permutation":
        result = [0] * self.n
        for i, v in enumerate(self.one_line, start=1):
            result[v - 1] = i
        return Permutation(tuple(result))

    def inversions(self) -> int:
        return sum(
            1 for a, b in itertools.combinations(self.one_line, 2) if a > b
        )

    def is_identity(self) -> bool:
        return self.one_line == tuple(range(1, self.n + 1))


@dataclasses.dataclass(frozen=True)
class Injection:
    """Injective map ``[m] → [n]`` given by its values ``(α(1), …, α(m))``."""

    n: int
    values: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(set(self.values)) != len(self.values):
            raise InputError("{} is not injective".format(self.values))
        if any(not 1 <= v <= self.n for v in self.values):
            raise InputError("{} does not map into [{}]".format(self.values, self.n))

    @classmethod
    def standard(cls, m: int, n: int) -> "Injection":
        if m > n:
            raise InputError("No injection [{}] → [{}]".format(m, n))
        return cls(n, tuple(range(1, m + 1)))

    @classmethod
    def from_permutation(cls, sigma: Permutation) -> "Injection":
        return cls(sigma.n, sigma.one_line)

    @classmethod
    def all(cls, m: int, n: int) -> List["Injection"]:
        """All injections ``[m] → [n]`` in lexicographic order of value tuples."""
        return [cls(n, values) for values in free_module_basis(m, n)]

    @property
    def m(self) -> int:
        return len(self.values)

    def __call__(self, i: int) -> int:
        return self.values[i - 1]

    def compose(self, other: "Injection") -> "Injection":
        """``self ∘ other`` for ``other: [l] → [m]`` and ``self: [m] → [n]``."""
        if other.n != self.m:
            raise InputError("Cannot compose [{}]→[{}] after [{}]→[{}]".format(
                self.m, self.n, other.m, other.n))
        return Injection(self.n, tuple(self(v) for v in other.values))


def reduced_word(sigma: Permutation, rightmost: bool = False) -> Tuple[int, ...]:
    """Indices ``(i_1, …, i_k)`` with ``σ = s_{i_1} ∘ … ∘ s_{i_k}`` and ``k`` the inversion number.

    Peels right descents by bubble sort; ``rightmost`` picks the last descent
    each time instead of the first, which gives a different reduced word for
    most permutations.
    """
    current = list(sigma.one_line)
    peeled = []
    while True:
        descents = [i for i in range(len(current) - 1) if current[i] > current[i + 1]]
        if not descents:
            break
        i = descents[-1] if rightmost else descents[0]
        current[i], current[i + 1] = current[i + 1], current[i]
        peeled.append(i + 1)
    return tuple(reversed(peeled))


def factor_injection(alpha: Injection) -> Permutation:
    """The canonical σ with ``σ ∘ ι_{m→n} = α``: it agrees with α on ``[m]`` and sends
    ``m+1 .. n`` onto the complement of the image in increasing order."""
    image = set(alpha.values)
    complement = [k for k in range(1, alpha.n + 1) if k not in image]
    return Permutation(alpha.values + tuple(complement))


@lru_cache(maxsize=None)
def free_module_basis(d: int, n: int) -> Tuple[Tuple[int, ...], ...]:
    """Value tuples of the injections ``[d] → [n]``, lexicographically ordered."""
    if d > n:
        return ()
    return tuple(itertools.permutations(range(1, n + 1), d))


@lru_cache(maxsize=None)
def _free_module_index(d: int, n: int) -> Dict[Tuple[int, ...], int]:
    return {values: k for k, values in enumerate(free_module_basis(d, n))}


class Relation(Enum):
    INVOLUTION = "coxeter-involution"
    COMMUTATION = "coxeter-commutation"
    BRAID = "coxeter-braid"
    EQUIVARIANCE = "equivariance"
    SWAP_TRIVIALITY = "swap-triviality"
    NATURALITY = "naturality"


MODULE_RELATIONS = frozenset(
    [Relation.INVOLUTION, Relation.COMMUTATION, Relation.BRAID, Relation.EQUIVARIANCE, Relation.SWAP_TRIVIALITY]
)


@dataclasses.dataclass(frozen=True)
class ValidationFailure:
    relation: Relation
    n: int
    i: Optional[int] = None
    j: Optional[int] = None

    def __str__(self):
        where = ", ".join(
            "{}={}".format(k, v) for k, v in (("n", self.n), ("i", self.i), ("j", self.j)) if v is not None
        )
        return "{} violated at {}".format(self.relation.value, where)


@dataclasses.dataclass(frozen=True)
class ValidationReport:
    failures: Tuple[ValidationFailure, ...] = ()
    checked: frozenset = MODULE_RELATIONS

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def first_failure(self) -> Optional[ValidationFailure]:
        return self.failures[0] if self.failures else None

    def __bool__(self):
        return self.ok

    def raise_for_failure(self):
        if not self.ok:
            raise ModuleValidationError(self)


@dataclasses.dataclass(frozen=True, eq=False)
class TruncatedFIModule:
    """``V([0]) … V([N])`` with its consistent-sequence structure.

    ``transpositions[n][i-1]`` is the matrix of ``s_i`` on ``V([n])``;
    ``inclusions[n]`` is ``φ_n``. Submodules built by :func:`kernel_module`
    also carry their :class:`Embedding`, through which group actions are
    evaluated.
    """

    field: Field
    dims: Tuple[int, ...]
    transpositions: Tuple[Tuple[Matrix, ...], ...]
    inclusions: Tuple[Matrix, ...]
    note: str = ""
    embedding: Optional["Embedding"] = dataclasses.field(default=None, repr=False)
    _cache: dict = dataclasses.field(default_factory=dict, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(self.dims))
        object.__setattr__(self, "transpositions", tuple(tuple(t) for t in self.transpositions))
        object.__setattr__(self, "inclusions", tuple(self.inclusions))
        N = len(self.dims) - 1
        if N < 0:
            raise InputError("A module needs at least degree 0")
        if len(self.transpositions) != N + 1 or len(self.inclusions) != N:
            raise DimensionMismatch("Structure data does not match the window N={}".format(N))
        for n, gens in enumerate(self.transpositions):
            if len(gens) != max(n - 1, 0):
                raise DimensionMismatch("Degree {} needs {} transpositions, got {}".format(n, max(n - 1, 0), len(gens)))
            for t in gens:
                self._check_matrix(t, (self.dims[n], self.dims[n]), "s_i on degree {}".format(n))
        for n, phi in enumerate(self.inclusions):
            self._check_matrix(phi, (self.dims[n + 1], self.dims[n]), "φ_{}".format(n))

    def _check_matrix(self, m: Matrix, shape: Tuple[int, int], what: str):
        if m.field != self.field:
            raise FieldMismatch("{} is over {}, module over {}".format(what, m.field, self.field))
        if m.shape != shape:
            raise DimensionMismatch("{} has shape {}, expected {}".format(what, m.shape, shape))

    @property
    def N(self) -> int:
        return len(self.dims) - 1

    def dim(self, n: int) -> int:
        self.check_degree(n)
        return self.dims[n]

    def check_degree(self, n: int):
        if n > self.N:
            raise TruncationError("Degree {} lies outside the window N={}".format(n, self.N))
        if n < 0:
            raise InputError("Negative degree {}".format(n))

    def transposition(self, n: int, i: int) -> Matrix:
        self.check_degree(n)
        if not 1 <= i < n:
            raise InputError("s_{} does not act on degree {}".format(i, n))
        return self.transpositions[n][i - 1]

    def inclusion(self, n: int) -> Matrix:
        self.check_degree(n + 1)
        return self.inclusions[n]

    def inclusion_chain(self, m: int, n: int) -> Matrix:
        """``φ_{n-1} ⋯ φ_m: V([m]) → V([n])``."""
        self.check_degree(n)
        key = ("chain", m, n)
        if key not in self._cache:
            result = Matrix.identity(self.dims[m], self.field)
            for k in range(m, n):
                result = self.inclusions[k] @ result
            self._cache[key] = result
        return self._cache[key]

    def is_zero(self) -> bool:
        return not any(self.dims)

    def with_note(self, note: str) -> "TruncatedFIModule":
        return TruncatedFIModule(self.field, self.dims, self.transpositions, self.inclusions, note,
                                 embedding=self.embedding)

    def __eq__(self, other):
        if not isinstance(other, TruncatedFIModule):
            return NotImplemented
        return (
            self.field == other.field
            and self.dims == other.dims
            and self.transpositions == other.transpositions
            and self.inclusions == other.inclusions
        )

    __hash__ = object.__hash__

    def __repr__(self):
        return "<TruncatedFIModule N={} over {} dims={}{}>".format(
            self.N, self.field, self.dims, " ({})".format(self.note) if self.note else ""
        )


@dataclasses.dataclass(frozen=True, eq=False)
class Embedding:
    """A submodule placed inside ``ambient``: degree n is ``subspaces[n]``, written in its anchor coordinates."""

    ambient: TruncatedFIModule
    subspaces: Tuple[Subspace, ...]

    def __post_init__(self):
        object.__setattr__(self, "subspaces", tuple(self.subspaces))
        if len(self.subspaces) != self.ambient.N + 1:
            raise DimensionMismatch("One subspace per degree 0..{} required".format(self.ambient.N))
        for n, s in enumerate(self.subspaces):
            if s.ambient_dim != self.ambient.dims[n]:
                raise DimensionMismatch("Subspace in degree {} lives in dimension {}".format(n, s.ambient_dim))

    def lift(self, n: int, m: Matrix) -> Matrix:
        return self.subspaces[n].basis @ m

    def restrict(self, n: int, m: Matrix) -> Matrix:
        """Coordinates of ambient vectors that lie in the submodule."""
        return self.subspaces[n].coordinates(m)


def _zero_structure(dims: Sequence[int], field: Field):
    transpositions = tuple(
        tuple(Matrix.zeros(dims[n], dims[n], field) for _ in range(max(n - 1, 0))) for n in range(len(dims))
    )
    inclusions = tuple(Matrix.zeros(dims[n + 1], dims[n], field) for n in range(len(dims) - 1))
    return transpositions, inclusions


def zero_module(N: int, field: Field = RATIONALS) -> TruncatedFIModule:
    dims = (0,) * (N + 1)
    transpositions, inclusions = _zero_structure(dims, field)
    return TruncatedFIModule(field, dims, transpositions, inclusions, note="0")


def permutation_action(V: TruncatedFIModule, sigma: Permutation) -> Matrix:
    """Matrix of σ on ``V([n])``, the product of generators along :func:`reduced_word`."""
    V.check_degree(sigma.n)
    key = ("perm", sigma.one_line)
    if key not in V._cache:
        V._cache[key] = word_action(V, sigma.n, reduced_word(sigma))
    return V._cache[key]


def apply_word(V: TruncatedFIModule, n: int, word: Sequence[int], m: Matrix) -> Matrix:
    """``T_{i_1} ⋯ T_{i_k} · m`` on ``V([n])``, one generator at a time from the right."""
    for i in reversed(word):
        m = V.transposition(n, i) @ m
    return m


def word_action(V: TruncatedFIModule, n: int, word: Sequence[int]) -> Matrix:
    """Product ``T_{i_1} ⋯ T_{i_k}`` on ``V([n])`` for an arbitrary word in the generators."""
    return apply_word(V, n, word, Matrix.identity(V.dim(n), V.field))


def injection_matrix(V: TruncatedFIModule, alpha: Injection) -> Matrix:
    """``V(α): V([m]) → V([n])``."""
    V.check_degree(alpha.n)
    key = ("inj", alpha.n, alpha.values)
    if key not in V._cache:
        word = reduced_word(factor_injection(alpha))
        V._cache[key] = apply_word(V, alpha.n, word, V.inclusion_chain(alpha.m, alpha.n))
    return V._cache[key]


def _acting_module(V: TruncatedFIModule) -> TruncatedFIModule:
    return V.embedding.ambient if V.embedding is not None else V


def _carrier(V: TruncatedFIModule, n: int) -> Matrix:
    """``V([n])`` inside the acting module's degree n."""
    if V.embedding is not None:
        return V.embedding.subspaces[n].basis
    return Matrix.identity(V.dims[n], V.field)


def _restrict(V: TruncatedFIModule, n: int, m: Matrix) -> Matrix:
    return V.embedding.restrict(n, m) if V.embedding is not None else m


def validate_module(V: TruncatedFIModule, relations: Iterable[Relation] = MODULE_RELATIONS) -> ValidationReport:
    """Check the presentation relations exactly; failures are listed in the order
    degree, then relation, then generator index."""
    relations = frozenset(relations)
    failures = []
    for n in range(V.N + 1):
        gens = V.transpositions[n]
        identity = Matrix.identity(V.dims[n], V.field)
        if Relation.INVOLUTION in relations:
            for i, t in enumerate(gens, start=1):
                if t @ t != identity:
                    failures.append(ValidationFailure(Relation.INVOLUTION, n, i))
        if Relation.COMMUTATION in relations:
            for i, j in itertools.combinations(range(1, n), 2):
                if j - i >= 2 and gens[i - 1] @ gens[j - 1] != gens[j - 1] @ gens[i - 1]:
                    failures.append(ValidationFailure(Relation.COMMUTATION, n, i, j))
        if Relation.BRAID in relations:
            for i in range(1, n - 1):
                a, b = gens[i - 1], gens[i]
                if a @ b @ a != b @ a @ b:
                    failures.append(ValidationFailure(Relation.BRAID, n, i))
        if n < V.N and Relation.EQUIVARIANCE in relations:
            phi = V.inclusions[n]
            for i in range(1, n):
                if phi @ gens[i - 1] != V.transpositions[n + 1][i - 1] @ phi:
                    failures.append(ValidationFailure(Relation.EQUIVARIANCE, n, i))
        if n + 2 <= V.N and Relation.SWAP_TRIVIALITY in relations:
            twice = V.inclusions[n + 1] @ V.inclusions[n]
            if V.transpositions[n + 2][n] @ twice != twice:
                failures.append(ValidationFailure(Relation.SWAP_TRIVIALITY, n, n + 1))
    if failures:
        logger.debug("Validation of %r found %d failures, first: %s", V, len(failures), failures[0])
    return ValidationReport(tuple(failures), relations)


@lru_cache(maxsize=None)
def free_module(d: int, N: int, field: Field = RATIONALS) -> TruncatedFIModule:
    """M(d): basis of ``M(d)([n])`` are the injections ``[d] → [n]`` in lexicographic order."""
    dims = tuple(len(free_module_basis(d, n)) for n in range(N + 1))
    transpositions = []
    for n in range(N + 1):
        basis = free_module_basis(d, n)
        index = _free_module_index(d, n)
        gens = []
        for i in range(1, n):
            swap = {i: i + 1, i + 1: i}
            gens.append(Matrix.from_sparse(
                dims[n], dims[n],
                {(index[tuple(swap.get(v, v) for v in alpha)], k): 1 for k, alpha in enumerate(basis)},
                field,
            ))
        transpositions.append(tuple(gens))
    inclusions = tuple(
        Matrix.from_sparse(
            dims[n + 1], dims[n],
            {(_free_module_index(d, n + 1)[alpha], k): 1 for k, alpha in enumerate(free_module_basis(d, n))},
            field,
        )
        for n in range(N)
    )
    return TruncatedFIModule(field, dims, tuple(transpositions), inclusions, note="M({})".format(d))


def free_module_injection_matrix(d: int, alpha: Injection, field: Field = RATIONALS) -> Matrix:
    """``M(d)(α)`` computed directly by post-composition, without any factorization."""
    source = free_module_basis(d, alpha.m)
    index = _free_module_index(d, alpha.n)
    return Matrix.from_sparse(
        len(free_module_basis(d, alpha.n)), len(source),
        {(index[tuple(alpha(v) for v in beta)], k): 1 for k, beta in enumerate(source)},
        field,
    )


class Representation(Enum):
    TRIVIAL = "trivial"
    SIGN = "sign"
    REGULAR = "regular"
    EXPLICIT = "explicit"


def atom_module(p: int, rep: Representation = Representation.TRIVIAL, N: Optional[int] = None,
                field: Field = RATIONALS, matrices: Optional[Sequence[Matrix]] = None) -> TruncatedFIModule:
    """An S_p-representation placed in degree p with all inclusions zero."""
    rep = Representation(rep)
    N = p if N is None else N
    if p > N:
        raise TruncationError("Atom in degree {} does not fit into the window N={}".format(p, N))
    if rep is Representation.TRIVIAL:
        size, gens = 1, [Matrix.identity(1, field) for _ in range(1, p)]
    elif rep is Representation.SIGN:
        size, gens = 1, [Matrix.identity(1, field).scale(-1) for _ in range(1, p)]
    elif rep is Representation.REGULAR:
        elements = [Permutation(t) for t in itertools.permutations(range(1, p + 1))]
        index = {g.one_line: k for k, g in enumerate(elements)}
        size = len(elements)
        gens = [
            Matrix.from_sparse(
                size, size,
                {(index[Permutation.adjacent(p, i).compose(g).one_line], k): 1 for k, g in enumerate(elements)},
                field,
            )
            for i in range(1, p)
        ]
    else:
        if matrices is None or len(matrices) != max(p - 1, 0):
            raise InputError("An explicit S_{} representation needs {} matrices".format(p, max(p - 1, 0)))
        gens = list(matrices)
        size = gens[0].rows if gens else 1
    dims = tuple(size if n == p else 0 for n in range(N + 1))
    transpositions, inclusions = _zero_structure(dims, field)
    transpositions = transpositions[:p] + (tuple(gens),) + transpositions[p + 1:]
    V = TruncatedFIModule(field, dims, transpositions, inclusions, note="atom({}, {})".format(p, rep.value))
    if rep is Representation.EXPLICIT:
        validate_module(V).raise_for_failure()
    return V


def truncate_above(V: TruncatedFIModule, q: int) -> TruncatedFIModule:
    """Zero out every degree above q; φ_q becomes the zero map."""
    V.check_degree(q)
    dims = tuple(d if n <= q else 0 for n, d in enumerate(V.dims))
    zero_t, zero_i = _zero_structure(dims, V.field)
    transpositions = V.transpositions[:q + 1] + zero_t[q + 1:]
    inclusions = V.inclusions[:q] + zero_i[q:]
    return TruncatedFIModule(V.field, dims, transpositions, inclusions, note="truncate({}, {})".format(q, V.note))


def restrict_window(V: TruncatedFIModule, N: int) -> TruncatedFIModule:
    """The same data seen through the smaller window ``0 .. N``."""
    V.check_degree(N)
    if N == V.N:
        return V
    return TruncatedFIModule(V.field, V.dims[:N + 1], V.transpositions[:N + 1], V.inclusions[:N], note=V.note)


def extend_window(V: TruncatedFIModule, N: int) -> TruncatedFIModule:
    """Pad a module whose top stored degree vanishes with zero degrees up to N."""
    if N <= V.N:
        return restrict_window(V, N)
    if V.dims[V.N] != 0:
        raise TruncationError("Degree {} is nonzero, so degrees above it are not determined".format(V.N))
    dims = V.dims + (0,) * (N - V.N)
    zero_t, zero_i = _zero_structure(dims, V.field)
    return TruncatedFIModule(
        V.field, dims, V.transpositions + zero_t[V.N + 1:], V.inclusions + zero_i[V.N:], note=V.note
    )


def _check_compatible(V: TruncatedFIModule, W: TruncatedFIModule):
    if V.field != W.field:
        raise FieldMismatch("Modules over {} and {}".format(V.field, W.field))
    if V.N != W.N:
        raise InputError("Modules with windows N={} and N={}".format(V.N, W.N))


def direct_sum(V: TruncatedFIModule, W: TruncatedFIModule) -> TruncatedFIModule:
    return direct_sum_of([V, W])


def direct_sum_of(modules: Sequence[TruncatedFIModule]) -> TruncatedFIModule:
    modules = list(modules)
    if not modules:
        raise InputError("Direct sum of no modules")
    for W in modules[1:]:
        _check_compatible(modules[0], W)
    if len(modules) == 1:
        return modules[0]
    field, N = modules[0].field, modules[0].N
    dims = tuple(sum(W.dims[n] for W in modules) for n in range(N + 1))
    transpositions = tuple(
        tuple(Matrix.block_diagonal([W.transpositions[n][i] for W in modules], field) for i in range(max(n - 1, 0)))
        for n in range(N + 1)
    )
    inclusions = tuple(Matrix.block_diagonal([W.inclusions[n] for W in modules], field) for n in range(N))
    return TruncatedFIModule(field, dims, transpositions, inclusions, note=" ⊕ ".join(W.note for W in modules))


def j_image(V: TruncatedFIModule, n: int) -> Subspace:
    """``(JV)_n``: the sum over the cycles ``σ_j = (j, j+1, …, n)`` of ``σ_j · im(φ_{n-1})``."""
    V.check_degree(n)
    if n == 0:
        return Subspace.zero(V.dims[0], V.field)
    key = ("jimage", n)
    if key not in V._cache:
        W = _acting_module(V)
        # σ_n is the identity and σ_j = s_j ∘ σ_{j+1}
        image = W.inclusions[n - 1] @ _carrier(V, n - 1)
        images = [image]
        for j in range(n - 1, 0, -1):
            image = W.transpositions[n][j - 1] @ image
            images.append(image)
        stacked = _restrict(V, n, Matrix.hstack(images, W.dims[n], V.field))
        V._cache[key] = image_basis(stacked)
    return V._cache[key]


def j_image_bruteforce(V: TruncatedFIModule, n: int) -> Subspace:
    """``(JV)_n`` as the span of ``im V(α)`` over all injections ``[n-1] → [n]``."""
    V.check_degree(n)
    if n == 0:
        return Subspace.zero(V.dims[0], V.field)
    images = [injection_matrix(V, alpha) for alpha in Injection.all(n - 1, n)]
    return image_basis(Matrix.hstack(images, V.dims[n], V.field))


@dataclasses.dataclass(frozen=True)
class Coinvariants:
    """``H_0 = V/JV`` degreewise: dimensions, projections onto the complement basis and lifts."""

    dims: Tuple[int, ...]
    projections: Tuple[Matrix, ...]
    sections: Tuple[Matrix, ...]
    j_images: Tuple[Subspace, ...]


def coinvariants(V: TruncatedFIModule) -> Coinvariants:
    images = tuple(j_image(V, n) for n in range(V.N + 1))
    return Coinvariants(
        dims=tuple(V.dims[n] - images[n].dim for n in range(V.N + 1)),
        projections=tuple(s.quotient_projection() for s in images),
        sections=tuple(s.quotient_section() for s in images),
        j_images=images,
    )


@dataclasses.dataclass(frozen=True)
class Degree:
    """``sup{n : V([n]) ≠ 0}`` as seen through a window.

    ``value`` is ``None`` for −∞. ``unbounded`` means the top degree of the
    window is nonzero, so the true degree is only known to be ``>= value``.
    """

    value: Optional[int]
    unbounded: bool = False

    @property
    def is_neg_inf(self) -> bool:
        return self.value is None

    @property
    def is_finite(self) -> bool:
        return self.value is not None and not self.unbounded

    def __str__(self):
        if self.value is None:
            return "-inf"
        return ">={}".format(self.value) if self.unbounded else str(self.value)


NEG_INF = Degree(None)


def degree(V: TruncatedFIModule) -> Degree:
    nonzero = [n for n, d in enumerate(V.dims) if d]
    if not nonzero:
        return NEG_INF
    return Degree(nonzero[-1], unbounded=nonzero[-1] == V.N)


@dataclasses.dataclass(frozen=True, eq=False)
class FIMorphism:
    source: TruncatedFIModule
    target: TruncatedFIModule
    mats: Tuple[Matrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "mats", tuple(self.mats))
        _check_compatible(self.source, self.target)
        if len(self.mats) != self.source.N + 1:
            raise DimensionMismatch("One matrix per degree 0..{} required".format(self.source.N))
        for n, m in enumerate(self.mats):
            if m.shape != (self.target.dims[n], self.source.dims[n]):
                raise DimensionMismatch("f_{} has shape {}, expected {}".format(
                    n, m.shape, (self.target.dims[n], self.source.dims[n])))

    @property
    def N(self) -> int:
        return self.source.N

    def compose(self, other: "FIMorphism") -> "FIMorphism":
        """``self ∘ other``."""
        return FIMorphism(other.source, self.target, [a @ b for a, b in zip(self.mats, other.mats)])

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats)

    def ranks(self) -> Tuple[int, ...]:
        return tuple(rank(m) for m in self.mats)


def validate_morphism(f: FIMorphism) -> ValidationReport:
    failures = []
    src, tgt = f.source, f.target
    for n in range(f.N + 1):
        for i in range(1, n):
            if f.mats[n] @ src.transpositions[n][i - 1] != tgt.transpositions[n][i - 1] @ f.mats[n]:
                failures.append(ValidationFailure(Relation.NATURALITY, n, i))
        if n < f.N and f.mats[n + 1] @ src.inclusions[n] != tgt.inclusions[n] @ f.mats[n]:
            failures.append(ValidationFailure(Relation.NATURALITY, n))
    return ValidationReport(tuple(failures), frozenset([Relation.NATURALITY]))


def identity_morphism(V: TruncatedFIModule) -> FIMorphism:
    return FIMorphism(V, V, [Matrix.identity(d, V.field) for d in V.dims])


def zero_morphism(V: TruncatedFIModule, W: TruncatedFIModule) -> FIMorphism:
    return FIMorphism(V, W, [Matrix.zeros(W.dims[n], V.dims[n], V.field) for n in range(V.N + 1)])


def _translates(V: TruncatedFIModule, n: int, w: Matrix, wanted: Iterable[Permutation]) -> Dict[Tuple[int, ...], Matrix]:
    """``V(σ)·w`` for every wanted σ in S_n, sharing work along left descents."""
    found = {tuple(range(1, n + 1)): w}

    def translate(one_line):
        if one_line not in found:
            # σ = s_i ∘ σ' where i+1 occurs before i in the one-line notation
            position = {v: k for k, v in enumerate(one_line)}
            i = next(i for i in range(1, n) if position[i + 1] < position[i])
            swap = {i: i + 1, i + 1: i}
            shorter = tuple(swap.get(v, v) for v in one_line)
            found[one_line] = V.transpositions[n][i - 1] @ translate(shorter)
        return found[one_line]

    for sigma in wanted:
        translate(sigma.one_line)
    return found


def yoneda_columns(V: TruncatedFIModule, d: int, v: Sequence) -> Tuple[Matrix, ...]:
    """Images of the basis injections of ``M(d)([n])`` under ``id ↦ v``, one matrix per degree.

    The columns are written in the acting module, which is the ambient
    module when V carries an :class:`Embedding`.
    """
    V.check_degree(d)
    if len(v) != V.dims[d]:
        raise DimensionMismatch("Vector of length {} in a degree of dimension {}".format(len(v), V.dims[d]))
    W = _acting_module(V)
    generator = _carrier(V, d) @ Matrix.column_vector(v, V.field)
    columns = []
    for n in range(V.N + 1):
        basis = free_module_basis(d, n)
        if not basis:
            columns.append(Matrix.zeros(W.dims[n], 0, V.field))
            continue
        pushed = W.inclusion_chain(d, n) @ generator
        sigmas = [factor_injection(Injection(n, alpha)) for alpha in basis]
        translates = _translates(W, n, pushed, sigmas)
        columns.append(Matrix.hstack([translates[s.one_line] for s in sigmas], W.dims[n], V.field))
    return tuple(columns)


def yoneda_morphism(V: TruncatedFIModule, d: int, v: Sequence) -> FIMorphism:
    """The morphism ``M(d) → V`` sending the identity injection to v."""
    columns = yoneda_columns(V, d, v)
    return FIMorphism(free_module(d, V.N, V.field), V, [_restrict(V, n, c) for n, c in enumerate(columns)])


def kernel_module(f: FIMorphism) -> Tuple[TruncatedFIModule, FIMorphism]:
    """The kernel of f with the structure maps restricted from the source, and its inclusion."""
    src = f.source
    kernels = [kernel_basis(m) for m in f.mats]
    dims = tuple(k.dim for k in kernels)
    transpositions = []
    for n in range(src.N + 1):
        gens = []
        for i in range(1, n):
            moved = src.transpositions[n][i - 1] @ kernels[n].basis
            if not (f.mats[n] @ moved).is_zero():
                raise InternalConsistencyError("s_{} does not preserve the kernel in degree {}".format(i, n))
            gens.append(kernels[n].coordinates(moved))
        transpositions.append(tuple(gens))
    inclusions = []
    for n in range(src.N):
        moved = src.inclusions[n] @ kernels[n].basis
        if not (f.mats[n + 1] @ moved).is_zero():
            raise InternalConsistencyError("φ_{} does not map the kernel into the kernel".format(n))
        inclusions.append(kernels[n + 1].coordinates(moved))
    K = TruncatedFIModule(src.field, dims, tuple(transpositions), tuple(inclusions), note="ker",
                          embedding=Embedding(src, kernels))
    logger.debug("Kernel of a morphism out of %r has dims %s", src, dims)
    return K, FIMorphism(K, src, [k.basis for k in kernels])


def quotient_module(V: TruncatedFIModule, sub: Sequence[Subspace]) -> TruncatedFIModule:
    """``V / sub`` on the complement bases chosen by :meth:`Subspace.complement`."""
    sub = list(sub)
    if len(sub) != V.N + 1:
        raise DimensionMismatch("One subspace per degree 0..{} required".format(V.N))
    for n, s in enumerate(sub):
        if s.ambient_dim != V.dims[n]:
            raise DimensionMismatch("Subspace in degree {} lives in dimension {}".format(n, s.ambient_dim))
    projections = [s.quotient_projection() for s in sub]
    sections = [s.quotient_section() for s in sub]
    transpositions = []
    for n in range(V.N + 1):
        gens = []
        for i in range(1, n):
            t = V.transpositions[n][i - 1]
            if not sub[n].contains(t @ sub[n].basis):
                raise SubmoduleError("Subspace in degree {} is not invariant under s_{}".format(n, i))
            gens.append(projections[n] @ (t @ sections[n]))
        transpositions.append(tuple(gens))
    inclusions = []
    for n in range(V.N):
        phi = V.inclusions[n]
        if not sub[n + 1].contains(phi @ sub[n].basis):
            raise SubmoduleError("φ_{} does not map the subspace in degree {} into degree {}".format(n, n, n + 1))
        inclusions.append(projections[n + 1] @ (phi @ sections[n]))
    dims = tuple(V.dims[n] - s.dim for n, s in enumerate(sub))
    return TruncatedFIModule(V.field, dims, tuple(transpositions), tuple(inclusions), note="{} / sub".format(V.note))


def span_submodule(V: TruncatedFIModule, seeds: Sequence[Tuple[int, Sequence]]) -> Tuple[Subspace, ...]:
    """Smallest family of subspaces containing the seeds, closed under every s_i and pushed forward by φ."""
    by_degree: Dict[int, list] = {}
    for n, vector in seeds:
        V.check_degree(n)
        if len(vector) != V.dims[n]:
            raise DimensionMismatch("Seed of length {} in degree {} of dimension {}".format(len(vector), n, V.dims[n]))
        by_degree.setdefault(n, []).append(Matrix.column_vector(vector, V.field))
    spaces = []
    for n in range(V.N + 1):
        generators = list(by_degree.get(n, []))
        if spaces:
            generators.append(V.inclusions[n - 1] @ spaces[-1].basis)
        current = image_basis(Matrix.hstack(generators, V.dims[n], V.field))
        while current.dim:
            moved = [t @ current.basis for t in V.transpositions[n]]
            grown = image_basis(Matrix.hstack([current.basis] + moved, V.dims[n], V.field))
            if grown.dim == current.dim:
                break
            current = grown
        spaces.append(current)
    return tuple(spaces)
