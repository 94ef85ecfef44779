"""Exact linear algebra over the rationals and over prime fields.

Scalars are exposed as :class:`fractions.Fraction` (over ``Q``) or as plain
``int`` residues in ``[0, p)`` (over ``Fp``). Internally every :class:`Matrix`
wraps a sparse :class:`sympy.polys.matrices.DomainMatrix` over ``QQ`` or ``GF(p)``,
which does all products and row reductions.

All values are immutable; every function here is pure.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from sympy import Rational, isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from .exceptions import ComplexError, DimensionMismatch, FieldMismatch, InputError

logger = logging.getLogger(__name__)

Scalar = Union[Fraction, int]


@lru_cache(maxsize=None)
def _domain_for(characteristic: int):
    if characteristic == 0:
        return QQ
    return GF(characteristic)


@dataclass(frozen=True)
class Field:
    """Field descriptor: characteristic 0 means Q, otherwise the prime field of that order."""

    characteristic: int = 0

    def __post_init__(self):
        if self.characteristic != 0 and (
            self.characteristic < 2 or not isprime(self.characteristic)
        ):
            raise InputError("Fp needs a prime p, got {}".format(self.characteristic))

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Accepts ``Q``, ``QQ``, ``Fp:<p>`` and ``F<p>``."""
        value = text.strip()
        if value in ("Q", "QQ"):
            return cls(0)
        for prefix in ("Fp:", "GF:", "F"):
            if value.startswith(prefix) and value[len(prefix):].isdigit():
                return cls(int(value[len(prefix):]))
        raise InputError("Unknown field descriptor {!r}".format(text))

    def __str__(self):
        if self.is_rational:
            return "Q"
        return "Fp:{}".format(self.characteristic)

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def domain(self):
        return _domain_for(self.characteristic)

    def normalize(self, value) -> Scalar:
        if isinstance(value, str):
            return self.parse_scalar(value)
        if self.is_rational:
            return Fraction(value)
        p = self.characteristic
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise InputError("{} has no residue modulo {}".format(value, p))
            return value.numerator * pow(value.denominator, -1, p) % p
        return int(value) % p

    def parse_scalar(self, text: str) -> Scalar:
        try:
            value = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InputError("Not a scalar: {!r}".format(text)) from e
        return self.normalize(value)

    def format_scalar(self, value: Scalar):
        """Rationals become ``"p/q"`` or ``"n"`` strings, residues stay integers."""
        if self.is_rational:
            return str(Fraction(value))
        return int(value) % self.characteristic

    def to_domain(self, value: Scalar):
        value = self.normalize(value)
        if self.is_rational:
            return self.domain.from_sympy(Rational(value.numerator, value.denominator))
        return self.domain(value)

    def from_domain(self, element) -> Scalar:
        converted = self.domain.to_sympy(element)
        if self.is_rational:
            return Fraction(int(converted.p), int(converted.q))
        return int(converted) % self.characteristic


RATIONALS = Field(0)


def prime_field(p: int) -> Field:
    return Field(p)


def _clean(dod) -> dict:
    """Drop zero entries and empty rows from a dict-of-dicts."""
    cleaned = {}
    for i, row in dod.items():
        kept = {j: v for j, v in row.items() if v}
        if kept:
            cleaned[i] = kept
    return cleaned


class Matrix:
    """Immutable matrix over a single :class:`Field`.

    Storage is sympy's sparse ``DomainMatrix`` format: most matrices here are
    permutation matrices or selections, and products of those stay linear in
    the number of nonzero entries.
    """

    __slots__ = ("field", "_dm")

    def __init__(self, dm: DomainMatrix, field: Field):
        if dm.domain != field.domain:
            raise FieldMismatch("Domain {} does not belong to field {}".format(dm.domain, field))
        self.field = field
        self._dm = dm.to_sparse()

    # Construction

    @classmethod
    def _from_dod(cls, dod: dict, shape: Tuple[int, int], field: Field) -> "Matrix":
        return cls(DomainMatrix(_clean(dod), shape, field.domain), field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field) -> "Matrix":
        return cls._from_dod({}, (rows, cols), field)

    @classmethod
    def identity(cls, n: int, field: Field) -> "Matrix":
        one = field.domain.one
        return cls._from_dod({i: {i: one} for i in range(n)}, (n, n), field)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field, cols: Optional[int] = None) -> "Matrix":
        rows = [list(row) for row in rows]
        if cols is None:
            if not rows:
                raise DimensionMismatch("Column count of an empty row list is ambiguous")
            cols = len(rows[0])
        if any(len(row) != cols for row in rows):
            raise DimensionMismatch("Ragged rows for a matrix with {} columns".format(cols))
        dod = {i: {j: field.to_domain(v) for j, v in enumerate(row)} for i, row in enumerate(rows)}
        return cls._from_dod(dod, (len(rows), cols), field)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Sequence, field: Field) -> "Matrix":
        """Row-major construction."""
        if len(entries) != rows * cols:
            raise DimensionMismatch(
                "{} entries for a {}x{} matrix".format(len(entries), rows, cols)
            )
        return cls.from_rows(
            [entries[i * cols:(i + 1) * cols] for i in range(rows)], field, cols=cols
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], field: Field, rows: Optional[int] = None) -> "Matrix":
        columns = [list(c) for c in columns]
        if rows is None:
            if not columns:
                raise DimensionMismatch("Row count of an empty column list is ambiguous")
            rows = len(columns[0])
        if not columns:
            return cls.zeros(rows, 0, field)
        return cls.from_rows([[c[i] for c in columns] for i in range(rows)], field, cols=len(columns))

    @classmethod
    def column_vector(cls, values: Sequence, field: Field) -> "Matrix":
        return cls.from_rows([[v] for v in values], field, cols=1)

    @classmethod
    def from_sparse(cls, rows: int, cols: int, entries: dict, field: Field) -> "Matrix":
        """Build from ``{(i, j): value}``; missing entries are zero."""
        dod: dict = {}
        for (i, j), value in entries.items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise DimensionMismatch("Entry ({}, {}) outside a {}x{} matrix".format(i, j, rows, cols))
            dod.setdefault(i, {})[j] = field.to_domain(value)
        return cls._from_dod(dod, (rows, cols), field)

    @classmethod
    def from_blocks(cls, rows: int, cols: int, field: Field, blocks: Iterable[Tuple[int, int, "Matrix"]]) -> "Matrix":
        """Place blocks at ``(row_offset, col_offset)``; overlapping blocks are added."""
        zero = field.domain.zero
        dod: dict = {}
        for r0, c0, block in blocks:
            _check_field(field, block.field)
            for i, row in block.sparse_rows().items():
                target = dod.setdefault(r0 + i, {})
                for j, value in row.items():
                    target[c0 + j] = target.get(c0 + j, zero) + value
        return cls._from_dod(dod, (rows, cols), field)

    @staticmethod
    def hstack(matrices: Sequence["Matrix"], rows: int, field: Field) -> "Matrix":
        placements = []
        cols = 0
        for m in matrices:
            if m.rows != rows:
                raise DimensionMismatch("hstack of {} rows onto {}".format(m.rows, rows))
            placements.append((0, cols, m))
            cols += m.cols
        return Matrix.from_blocks(rows, cols, field, placements)

    @staticmethod
    def vstack(matrices: Sequence["Matrix"], cols: int, field: Field) -> "Matrix":
        placements = []
        rows = 0
        for m in matrices:
            if m.cols != cols:
                raise DimensionMismatch("vstack of {} columns onto {}".format(m.cols, cols))
            placements.append((rows, 0, m))
            rows += m.rows
        return Matrix.from_blocks(rows, cols, field, placements)

    @staticmethod
    def block_diagonal(blocks: Sequence["Matrix"], field: Field) -> "Matrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        placements = []
        r0 = c0 = 0
        for b in blocks:
            placements.append((r0, c0, b))
            r0 += b.rows
            c0 += b.cols
        return Matrix.from_blocks(rows, cols, field, placements)

    # Access

    @property
    def rows(self) -> int:
        return self._dm.shape[0]

    @property
    def cols(self) -> int:
        return self._dm.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self._dm.shape

    @property
    def domain_matrix(self) -> DomainMatrix:
        return self._dm

    def sparse_rows(self) -> dict:
        """The nonzero entries as ``{i: {j: domain element}}``; do not mutate."""
        return self._dm.rep

    def domain_rows(self) -> List[list]:
        zero = self.field.domain.zero
        data = [[zero] * self.cols for _ in range(self.rows)]
        for i, row in self.sparse_rows().items():
            for j, value in row.items():
                data[i][j] = value
        return data

    def to_rows(self) -> List[List[Scalar]]:
        return [[self.field.from_domain(v) for v in row] for row in self.domain_rows()]

    @property
    def entries(self) -> Tuple[Scalar, ...]:
        return tuple(v for row in self.to_rows() for v in row)

    def nnz(self) -> int:
        return sum(len(row) for row in self.sparse_rows().values())

    def entry(self, i: int, j: int) -> Scalar:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise DimensionMismatch("Entry ({}, {}) outside {}".format(i, j, self.shape))
        return self.field.from_domain(self.sparse_rows().get(i, {}).get(j, self.field.domain.zero))

    def column(self, j: int) -> Tuple[Scalar, ...]:
        return tuple(self.entry(i, j) for i in range(self.rows))

    def columns(self) -> List[Tuple[Scalar, ...]]:
        rows = self.to_rows()
        return [tuple(row[j] for row in rows) for j in range(self.cols)]

    def select_rows(self, indices: Sequence[int]) -> "Matrix":
        source = self.sparse_rows()
        dod = {k: dict(source[i]) for k, i in enumerate(indices) if i in source}
        return Matrix._from_dod(dod, (len(indices), self.cols), self.field)

    def select_columns(self, indices: Sequence[int]) -> "Matrix":
        position = {j: k for k, j in enumerate(indices)}
        if len(position) != len(indices):
            return self @ Matrix.from_sparse(self.cols, len(indices), {(j, k): 1 for k, j in enumerate(indices)},
                                             self.field)
        dod = {
            i: {position[j]: v for j, v in row.items() if j in position}
            for i, row in self.sparse_rows().items()
        }
        return Matrix._from_dod(dod, (self.rows, len(indices)), self.field)

    def is_zero(self) -> bool:
        return not _clean(self.sparse_rows())

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Matrix.identity(self.rows, self.field)

    # Arithmetic

    def transpose(self) -> "Matrix":
        dod: dict = {}
        for i, row in self.sparse_rows().items():
            for j, value in row.items():
                dod.setdefault(j, {})[i] = value
        return Matrix._from_dod(dod, (self.cols, self.rows), self.field)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        _check_field(self.field, other.field)
        if self.cols != other.rows:
            raise DimensionMismatch("Cannot multiply {} by {}".format(self.shape, other.shape))
        if 0 in (self.rows, self.cols, other.cols):
            return Matrix.zeros(self.rows, other.cols, self.field)
        return Matrix(self._dm.matmul(other._dm), self.field)

    def __add__(self, other: "Matrix") -> "Matrix":
        _check_field(self.field, other.field)
        if self.shape != other.shape:
            raise DimensionMismatch("Cannot add {} and {}".format(self.shape, other.shape))
        return Matrix.from_blocks(self.rows, self.cols, self.field, [(0, 0, self), (0, 0, other)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, factor: Scalar) -> "Matrix":
        c = self.field.to_domain(factor)
        dod = {i: {j: c * v for j, v in row.items()} for i, row in self.sparse_rows().items()}
        return Matrix._from_dod(dod, self.shape, self.field)

    def apply(self, vector: Sequence) -> Tuple[Scalar, ...]:
        """``m · v`` for a plain coordinate sequence."""
        if len(vector) != self.cols:
            raise DimensionMismatch("Vector of length {} for {} columns".format(len(vector), self.cols))
        return (self @ Matrix.column_vector(vector, self.field)).column(0)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and _clean(self.sparse_rows()) == _clean(other.sparse_rows())
        )

    def __hash__(self):
        items = frozenset(
            (i, j, self.field.from_domain(v)) for i, row in _clean(self.sparse_rows()).items() for j, v in row.items()
        )
        return hash((self.field, self.shape, items))

    def __repr__(self):
        return "Matrix({}x{} over {}: {})".format(
            self.rows, self.cols, self.field, [[self.field.format_scalar(v) for v in row] for row in self.to_rows()]
        )


def _check_field(expected: Field, actual: Field):
    if expected != actual:
        raise FieldMismatch("Mixed fields {} and {}".format(expected, actual))


def _rref(m: Matrix) -> Tuple[dict, Tuple[int, ...]]:
    """Reduced row echelon form as ``{row: {col: value}}`` and the pivot columns. Pivots are
    the first nonzero entries in column order, so the result is canonical; row k holds pivot k."""
    if m.rows == 0 or m.cols == 0:
        return {}, ()
    reduced, pivots = m.domain_matrix.rref()
    return _clean(reduced.to_sparse().rep), tuple(pivots)


@dataclass(frozen=True)
class Subspace:
    """Subspace of ``field^ambient_dim`` given by a column basis.

    The basis is kept in reduced form: the rows listed in ``anchors`` form an
    identity matrix. Coordinates of a member vector are therefore just its
    entries at the anchor rows.
    """

    ambient_dim: int
    basis: Matrix
    anchors: Tuple[int, ...]

    def __post_init__(self):
        if self.basis.rows != self.ambient_dim:
            raise DimensionMismatch(
                "Basis vectors of length {} in ambient dimension {}".format(self.basis.rows, self.ambient_dim)
            )
        if len(self.anchors) != self.basis.cols:
            raise DimensionMismatch("One anchor row per basis vector required")

    @classmethod
    def zero(cls, ambient_dim: int, field: Field) -> "Subspace":
        return cls(ambient_dim, Matrix.zeros(ambient_dim, 0, field), ())

    @classmethod
    def full(cls, ambient_dim: int, field: Field) -> "Subspace":
        return cls(ambient_dim, Matrix.identity(ambient_dim, field), tuple(range(ambient_dim)))

    @classmethod
    def spanned_by(cls, vectors: Matrix) -> "Subspace":
        return image_basis(vectors)

    @property
    def dim(self) -> int:
        return self.basis.cols

    @property
    def field(self) -> Field:
        return self.basis.field

    def vectors(self) -> List[Tuple[Scalar, ...]]:
        return self.basis.columns()

    def coordinates(self, vectors: Matrix) -> Matrix:
        """Coordinates of member vectors (the columns of ``vectors``) in this basis."""
        if vectors.rows != self.ambient_dim:
            raise DimensionMismatch("Vectors of length {} in ambient {}".format(vectors.rows, self.ambient_dim))
        return vectors.select_rows(self.anchors)

    def contains(self, vectors: Matrix) -> bool:
        if vectors.rows != self.ambient_dim:
            raise DimensionMismatch("Vectors of length {} in ambient {}".format(vectors.rows, self.ambient_dim))
        return self.basis @ self.coordinates(vectors) == vectors

    def contains_subspace(self, other: "Subspace") -> bool:
        return self.contains(other.basis)

    def complement(self) -> Tuple[int, ...]:
        """Standard basis indices spanning a complement."""
        anchored = set(self.anchors)
        return tuple(j for j in range(self.ambient_dim) if j not in anchored)

    def quotient_projection(self) -> Matrix:
        """Matrix of ``field^ambient → field^ambient / self`` in the complement basis."""
        complement = self.complement()
        basis_rows = self.basis.sparse_rows()
        one = self.field.domain.one
        dod = {}
        for row_idx, j in enumerate(complement):
            row = {j: one}
            for k, value in basis_rows.get(j, {}).items():
                row[self.anchors[k]] = -value
            dod[row_idx] = row
        return Matrix._from_dod(dod, (len(complement), self.ambient_dim), self.field)

    def quotient_section(self) -> Matrix:
        """Lift of the complement basis: the standard vectors at :meth:`complement`."""
        complement = self.complement()
        return Matrix.from_sparse(
            self.ambient_dim, len(complement), {(j, idx): 1 for idx, j in enumerate(complement)}, self.field
        )


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(_rref(m)[1])


def kernel_basis(m: Matrix) -> Subspace:
    reduced, pivots = _rref(m)
    field = m.field
    pivot_set = set(pivots)
    free = tuple(j for j in range(m.cols) if j not in pivot_set)
    free_pos = {f: k for k, f in enumerate(free)}
    dod = {f: {k: field.domain.one} for k, f in enumerate(free)}
    for i, c in enumerate(pivots):
        for j, value in reduced.get(i, {}).items():
            if j in free_pos:
                dod.setdefault(c, {})[free_pos[j]] = -value
    basis = Matrix._from_dod(dod, (m.cols, len(free)), field)
    return Subspace(m.cols, basis, free)


def image_basis(m: Matrix) -> Subspace:
    reduced, pivots = _rref(m.transpose())
    dod: dict = {}
    for k in range(len(pivots)):
        for i, value in reduced.get(k, {}).items():
            dod.setdefault(i, {})[k] = value
    basis = Matrix._from_dod(dod, (m.rows, len(pivots)), m.field)
    return Subspace(m.rows, basis, pivots)


def solve_columns(m: Matrix, rhs: Matrix) -> Optional[Matrix]:
    """Solve ``m · X = rhs`` column by column with one elimination; ``None`` if any column
    of ``rhs`` leaves the column space of ``m``."""
    _check_field(m.field, rhs.field)
    if rhs.rows != m.rows:
        raise DimensionMismatch("Right-hand side has {} rows, matrix has {}".format(rhs.rows, m.rows))
    if m.rows == 0:
        return Matrix.zeros(m.cols, rhs.cols, m.field)
    reduced, pivots = _rref(Matrix.hstack([m, rhs], m.rows, m.field))
    if any(c >= m.cols for c in pivots):
        return None
    dod = {}
    for i, c in enumerate(pivots):
        dod[c] = {j - m.cols: v for j, v in reduced.get(i, {}).items() if j >= m.cols}
    return Matrix._from_dod(dod, (m.cols, rhs.cols), m.field)


def solve_in_image(m: Matrix, v: Sequence) -> Optional[Tuple[Scalar, ...]]:
    if len(v) != m.rows:
        raise DimensionMismatch("Vector of length {} for a matrix with {} rows".format(len(v), m.rows))
    x = solve_columns(m, Matrix.column_vector(v, m.field))
    if x is None:
        return None
    return x.column(0)


def sum_of_subspaces(subspaces: Sequence[Subspace], ambient_dim: Optional[int] = None,
                     field: Optional[Field] = None) -> Subspace:
    subspaces = list(subspaces)
    if ambient_dim is None or field is None:
        if not subspaces:
            raise InputError("The sum of no subspaces needs an ambient dimension and a field")
        ambient_dim = subspaces[0].ambient_dim if ambient_dim is None else ambient_dim
        field = subspaces[0].field if field is None else field
    for s in subspaces:
        if s.ambient_dim != ambient_dim:
            raise DimensionMismatch("Ambient dimensions {} and {}".format(s.ambient_dim, ambient_dim))
        _check_field(field, s.field)
    if not subspaces:
        return Subspace.zero(ambient_dim, field)
    return image_basis(Matrix.hstack([s.basis for s in subspaces], ambient_dim, field))


def homology_dim(d_out: Matrix, d_in: Matrix) -> int:
    """``dim ker(d_out) − dim im(d_in)`` for ``C_{a+1} --d_in--> C_a --d_out--> C_{a-1}``."""
    if d_out.field != d_in.field:
        raise ComplexError("Differentials over different fields")
    if d_out.cols != d_in.rows:
        raise ComplexError(
            "Outgoing map has {} columns, incoming map has {} rows".format(d_out.cols, d_in.rows)
        )
    if not (d_out @ d_in).is_zero():
        raise ComplexError("Differentials do not compose to zero")
    return d_out.cols - rank(d_out) - rank(d_in)
