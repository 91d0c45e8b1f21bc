"""Exact linear algebra over the rationals and prime fields.

Every rank, kernel and subspace computation in the package goes through this
module.  Matrices are sparse and column-major; vectors are plain ``dict``
objects mapping an index to a nonzero field element.  Nothing here ever touches
a float.
"""

from __future__ import annotations

import contextlib
import contextvars
import random
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

Vector = dict


class FieldError(ValueError):
    pass


class DimensionError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class Rationals:
    """The field of rational numbers.

    Elements are Python ``int`` whenever they are integral and
    :class:`fractions.Fraction` otherwise, which keeps the common case of
    ``+-1`` boundary coefficients in fast integer arithmetic.
    """

    name = "Q"
    characteristic = 0
    zero = 0
    one = 1

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    @staticmethod
    def _norm(x):
        if type(x) is Fraction and x.denominator == 1:
            return x.numerator
        return x

    def coerce(self, x):
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction):
            return self._norm(x)
        if isinstance(x, str):
            return self._norm(Fraction(x.strip()))
        raise FieldError(f"cannot coerce {x!r} into Q exactly")

    def add(self, a, b):
        return self._norm(a + b)

    def sub(self, a, b):
        return self._norm(a - b)

    def mul(self, a, b):
        return self._norm(a * b)

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if a == 1 or a == -1:
            return a
        return self._norm(Fraction(1) / a)

    def div(self, a, b):
        if b == 1:
            return a
        if b == -1:
            return -a
        if type(a) is int and type(b) is int:
            q, r = divmod(a, b)
            return q if r == 0 else Fraction(a, b)
        return self._norm(Fraction(a) / b)

    def sub_multiple(self, target: dict, c, src: Mapping) -> None:
        """In place ``target -= c * src``, dropping entries that cancel."""
        norm = self._norm
        for k, v in src.items():
            t = target.get(k)
            nv = (0 if t is None else t) - c * v
            if nv:
                target[k] = norm(nv) if type(nv) is Fraction else nv
            elif t is not None:
                del target[k]

    def parse(self, s: str):
        return self.coerce(s)

    def format(self, x) -> str:
        return str(x)

    def random_element(self, rng: random.Random, nonzero: bool = False, size: int = 3):
        while True:
            num = rng.randint(-size, size)
            den = rng.choice((1, 1, 1, 2, 3))
            x = self._norm(Fraction(num, den))
            if x or not nonzero:
                return x


class PrimeField:
    """GF(p) with elements stored as reduced representatives in ``[0, p)``."""

    zero = 0
    one = 1

    def __init__(self, p: int):
        if not _is_prime(p):
            raise FieldError(f"GF(p) requires p prime, got {p}")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def coerce(self, x):
        p = self.p
        if isinstance(x, bool):
            return int(x) % p
        if isinstance(x, int):
            return x % p
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise FieldError(f"{x} has no image in {self.name}")
            return x.numerator * pow(x.denominator, -1, p) % p
        raise FieldError(f"cannot coerce {x!r} into {self.name}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * pow(b, -1, self.p) % self.p

    def sub_multiple(self, target: dict, c, src: Mapping) -> None:
        p = self.p
        for k, v in src.items():
            nv = (target.get(k, 0) - c * v) % p
            if nv:
                target[k] = nv
            elif k in target:
                del target[k]

    def parse(self, s: str):
        return self.coerce(s)

    def format(self, x) -> str:
        return str(x)

    def random_element(self, rng: random.Random, nonzero: bool = False, size: int = 0):
        return rng.randrange(1 if nonzero else 0, self.p)


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name: str):
    """Parse ``"Q"``, ``"QQ"``, ``"GF(p)"`` or ``"GF:p"``."""
    s = name.strip().upper().replace(" ", "")
    if s in ("Q", "QQ"):
        return QQ
    for prefix, suffix in (("GF(", ")"), ("GF:", ""), ("GF", "")):
        if s.startswith(prefix) and s.endswith(suffix):
            body = s[len(prefix): len(s) - len(suffix)] if suffix else s[len(prefix):]
            try:
                return PrimeField(int(body))
            except ValueError:
                break
    raise FieldError(f"unknown field {name!r}")


_active_field = contextvars.ContextVar("active_field", default=QQ)


def get_field():
    return _active_field.get()


def set_field(field) -> None:
    _active_field.set(field)


@contextlib.contextmanager
def using_field(field):
    token = _active_field.set(field)
    try:
        yield field
    finally:
        _active_field.reset(token)


def _resolve(field):
    return get_field() if field is None else field


# ---------------------------------------------------------------------------
# sparse matrices


class SparseMatrix:
    """Immutable sparse matrix, stored as a dict of nonzero columns."""

    __slots__ = ("rows", "cols", "field", "_cols")

    def __init__(self, rows: int, cols: int, entries=None, field=None):
        field = _resolve(field)
        if rows < 0 or cols < 0:
            raise DimensionError("negative shape")
        data: dict[int, dict] = {}
        if entries is not None:
            items = entries.items() if isinstance(entries, Mapping) else entries
            for (r, c), v in items:
                if not (0 <= r < rows and 0 <= c < cols):
                    raise DimensionError(f"entry ({r}, {c}) outside {rows}x{cols}")
                v = field.coerce(v)
                col = data.setdefault(c, {})
                s = field.add(col.get(r, 0), v)
                if s:
                    col[r] = s
                else:
                    col.pop(r, None)
            data = {c: col for c, col in data.items() if col}
        self.rows = rows
        self.cols = cols
        self.field = field
        self._cols = data

    @classmethod
    def _raw(cls, rows, cols, data, field):
        m = cls.__new__(cls)
        m.rows, m.cols, m.field, m._cols = rows, cols, field, data
        return m

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable[Mapping], field=None, cols: int | None = None):
        """Build from a sequence of sparse column vectors (already in the field)."""
        field = _resolve(field)
        data = {}
        n = 0
        for j, col in enumerate(columns):
            n = j + 1
            clean = {r: v for r, v in col.items() if v}
            for r in clean:
                if not 0 <= r < rows:
                    raise DimensionError(f"row {r} outside 0..{rows - 1}")
            if clean:
                data[j] = clean
        return cls._raw(rows, n if cols is None else cols, data, field)

    @classmethod
    def from_dense(cls, rows_list, field=None):
        field = _resolve(field)
        nr = len(rows_list)
        nc = len(rows_list[0]) if nr else 0
        entries = {}
        for i, row in enumerate(rows_list):
            if len(row) != nc:
                raise DimensionError("ragged dense matrix")
            for j, v in enumerate(row):
                v = field.coerce(v)
                if v:
                    entries[(i, j)] = v
        return cls(nr, nc, entries, field)

    @classmethod
    def identity(cls, n: int, field=None):
        field = _resolve(field)
        return cls._raw(n, n, {i: {i: field.one} for i in range(n)}, field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field=None):
        return cls._raw(rows, cols, {}, _resolve(field))

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, rc):
        r, c = rc
        return self._cols.get(c, {}).get(r, 0)

    def column(self, j: int) -> dict:
        return dict(self._cols.get(j, {}))

    def columns(self) -> list[dict]:
        return [dict(self._cols.get(j, {})) for j in range(self.cols)]

    def entries(self) -> Iterator[tuple[int, int, object]]:
        for c in sorted(self._cols):
            col = self._cols[c]
            for r in sorted(col):
                yield r, c, col[r]

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self._cols.values())

    def is_zero(self) -> bool:
        return not self._cols

    def to_dense(self) -> list[list]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for c, col in self._cols.items():
            for r, v in col.items():
                out[r][c] = v
        return out

    def transpose(self) -> "SparseMatrix":
        data: dict[int, dict] = {}
        for c, col in self._cols.items():
            for r, v in col.items():
                data.setdefault(r, {})[c] = v
        return SparseMatrix._raw(self.cols, self.rows, data, self.field)

    T = property(transpose)

    def _check_field(self, other):
        if other.field != self.field:
            raise FieldError(f"field mismatch: {self.field} vs {other.field}")

    def apply(self, vec: Mapping) -> dict:
        """Matrix times sparse column vector."""
        F = self.field
        out: dict = {}
        for j, x in vec.items():
            col = self._cols.get(j)
            if col:
                F.sub_multiple(out, F.neg(x), col)
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        self._check_field(other)
        data = {}
        for j, col in other._cols.items():
            v = self.apply(col)
            if v:
                data[j] = v
        return SparseMatrix._raw(self.rows, other.cols, data, self.field)

    def _combine(self, other, sign):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        self._check_field(other)
        F = self.field
        data = {c: dict(col) for c, col in self._cols.items()}
        c_ = F.neg(F.one) if sign > 0 else F.one
        for c, col in other._cols.items():
            tgt = data.setdefault(c, {})
            F.sub_multiple(tgt, c_, col)
            if not tgt:
                del data[c]
        return SparseMatrix._raw(self.rows, self.cols, data, F)

    def __add__(self, other):
        return self._combine(other, +1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(self.field.neg(self.field.one))

    def scale(self, c) -> "SparseMatrix":
        F = self.field
        c = F.coerce(c)
        if not c:
            return SparseMatrix.zeros(self.rows, self.cols, F)
        data = {j: {r: F.mul(c, v) for r, v in col.items()} for j, col in self._cols.items()}
        return SparseMatrix._raw(self.rows, self.cols, data, F)

    def select_columns(self, idx: Iterable[int]) -> "SparseMatrix":
        idx = list(idx)
        data = {k: dict(self._cols[j]) for k, j in enumerate(idx) if j in self._cols}
        return SparseMatrix._raw(self.rows, len(idx), data, self.field)

    def hstack(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.rows != other.rows:
            raise DimensionError("hstack needs equal row counts")
        self._check_field(other)
        data = {c: dict(col) for c, col in self._cols.items()}
        for c, col in other._cols.items():
            data[c + self.cols] = dict(col)
        return SparseMatrix._raw(self.rows, self.cols + other.cols, data, self.field)

    def vstack(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.cols:
            raise DimensionError("vstack needs equal column counts")
        self._check_field(other)
        data = {c: dict(col) for c, col in self._cols.items()}
        for c, col in other._cols.items():
            tgt = data.setdefault(c, {})
            for r, v in col.items():
                tgt[r + self.rows] = v
        return SparseMatrix._raw(self.rows + other.rows, self.cols, data, self.field)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.shape == other.shape and self.field == other.field
                and self._cols == other._cols)

    def __hash__(self):
        return hash((self.rows, self.cols, self.nnz))

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz}, {self.field})"


# ---------------------------------------------------------------------------
# elimination


class Eliminator:
    """Column reduction ``R = M V`` with pivot-row caching.

    Columns are processed left to right and the pivot of a column is its
    largest row index (the persistence-reduction convention).  With
    ``reverse=True`` columns go right to left and pivots are smallest row
    indices, which gives an independent elimination of the same matrix.
    """

    def __init__(self, m: SparseMatrix, track: bool = True, skip: Iterable[int] = (),
                 reverse: bool = False):
        self.matrix = m
        self.field = m.field
        self.reverse = reverse
        self.pivots: dict[int, int] = {}
        self.R: dict[int, dict] = {}
        self.V: dict[int, dict] = {}
        self.track = track
        F = m.field
        pick = min if reverse else max
        skip = set(skip)
        order = range(m.cols - 1, -1, -1) if reverse else range(m.cols)
        pivots, R, V = self.pivots, self.R, self.V
        for j in order:
            if j in skip:
                continue
            col = dict(m._cols.get(j, ()))
            v = {j: F.one} if track else None
            while col:
                low = pick(col)
                k = pivots.get(low)
                if k is None:
                    break
                rk = R[k]
                c = F.div(col[low], rk[low])
                F.sub_multiple(col, c, rk)
                if track:
                    F.sub_multiple(v, c, V[k])
            if col:
                pivots[pick(col)] = j
                R[j] = col
            if track:
                V[j] = v

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def zero_columns(self) -> list[int]:
        return sorted(j for j in self.V if j not in self.R)

    def kernel_vectors(self) -> list[dict]:
        if not self.track:
            raise RuntimeError("kernel needs a tracked elimination")
        return [self.V[j] for j in self.zero_columns()]

    def pivot_columns(self) -> list[int]:
        return sorted(self.pivots.values())

    def reduce(self, b: Mapping) -> tuple[dict, dict]:
        """Reduce ``b`` against the pivots; return (remainder, x) with b - M x = remainder."""
        F = self.field
        pick = min if self.reverse else max
        b = dict(b)
        x: dict = {}
        rest: dict = {}
        while b:
            low = pick(b)
            k = self.pivots.get(low)
            if k is None:
                rest[low] = b.pop(low)
                continue
            rk = self.R[k]
            c = F.div(b[low], rk[low])
            F.sub_multiple(b, c, rk)
            if self.track:
                F.sub_multiple(x, F.neg(c), self.V[k])
        return rest, x

    def solve(self, b: Mapping):
        """Some ``x`` with ``M x = b``, or ``None`` if ``b`` is outside the image."""
        if not self.track:
            raise RuntimeError("solve needs a tracked elimination")
        rem, x = self.reduce(b)
        return None if rem else x

    def in_image(self, b: Mapping) -> bool:
        rem, _ = self.reduce(b)
        return not rem


def rank(m: SparseMatrix) -> int:
    return Eliminator(m, track=False).rank


def solve(m: SparseMatrix, b: Mapping, reverse: bool = False):
    """A solution of ``m x = b`` as a sparse vector, or ``None``."""
    return Eliminator(m, reverse=reverse).solve(b)


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """A subspace of ``F^ambient_dim`` given by independent basis columns."""

    __slots__ = ("ambient_dim", "basis", "_elim")

    def __init__(self, ambient_dim: int, basis: SparseMatrix, check: bool = True):
        if basis.rows != ambient_dim:
            raise DimensionError(f"basis has {basis.rows} rows, ambient is {ambient_dim}")
        self.ambient_dim = ambient_dim
        self.basis = basis
        self._elim = None
        if check and self.elim.rank != basis.cols:
            raise ValueError("basis columns are not linearly independent")

    @property
    def elim(self) -> Eliminator:
        if self._elim is None:
            self._elim = Eliminator(self.basis)
        return self._elim

    @property
    def field(self):
        return self.basis.field

    @property
    def dim(self) -> int:
        return self.basis.cols

    def __len__(self):
        return self.dim

    def vectors(self) -> list[dict]:
        return self.basis.columns()

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Mapping], field=None) -> "Subspace":
        """Subspace spanned by arbitrary (possibly dependent) vectors."""
        m = SparseMatrix.from_columns(ambient_dim, list(vectors), field)
        return image_basis(m)

    @classmethod
    def zero(cls, ambient_dim: int, field=None) -> "Subspace":
        return cls(ambient_dim, SparseMatrix.zeros(ambient_dim, 0, field), check=False)

    @classmethod
    def full(cls, ambient_dim: int, field=None) -> "Subspace":
        return cls(ambient_dim, SparseMatrix.identity(ambient_dim, field), check=False)

    def contains(self, v: Mapping) -> bool:
        return self.elim.in_image(_as_sparse(v, self.field))

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def coordinates(self, v: Mapping) -> dict:
        """Coefficients of ``v`` in this basis; raises if ``v`` is not in the span."""
        x = self.elim.solve(_as_sparse(v, self.field))
        if x is None:
            raise ValueError("vector is not in the subspace")
        return x

    def issubspace(self, other: "Subspace") -> bool:
        return all(other.contains(c) for c in self.vectors())

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self.dim == other.dim
                and self.issubspace(other))

    def __hash__(self):
        return hash((self.ambient_dim, self.dim))

    def __add__(self, other: "Subspace") -> "Subspace":
        _check_ambient(self, other)
        return image_basis(self.basis.hstack(other.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def _as_sparse(v, field) -> dict:
    if isinstance(v, Mapping):
        return {k: x for k, x in v.items() if x}
    return {i: field.coerce(x) for i, x in enumerate(v) if field.coerce(x)}


def _check_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")


def kernel_basis(m: SparseMatrix) -> Subspace:
    e = Eliminator(m)
    # V is unitriangular on the zero columns, so these are independent
    return Subspace(m.cols, SparseMatrix.from_columns(m.cols, e.kernel_vectors(), m.field), check=False)


def image_basis(m: SparseMatrix) -> Subspace:
    e = Eliminator(m, track=False)
    return Subspace(m.rows, m.select_columns(e.pivot_columns()), check=False)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    na = a.dim
    if na == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim, a.field)
    # (u, w) in ker [A | -B]  <=>  A u = B w
    stacked = a.basis.hstack(-b.basis)
    ker = kernel_basis(stacked)
    vecs = []
    for kv in ker.vectors():
        u = {j: x for j, x in kv.items() if j < na}
        vecs.append(a.basis.apply(u))
    return Subspace.span(a.ambient_dim, vecs, a.field)


def restrict_map(m: SparseMatrix, domain: Subspace) -> SparseMatrix:
    """The map ``m`` on ``domain``: columns indexed by the domain basis."""
    if m.cols != domain.ambient_dim:
        raise DimensionError(f"map has {m.cols} columns, domain ambient is {domain.ambient_dim}")
    return m @ domain.basis


def membership(v, s: Subspace) -> bool:
    if not isinstance(v, Mapping) and len(v) != s.ambient_dim:
        raise DimensionError("vector length differs from ambient dimension")
    return s.contains(v)


def random_matrix(rows: int, cols: int, rng: random.Random, density: float = 0.5,
                  field=None, size: int = 3) -> SparseMatrix:
    field = _resolve(field)
    entries = {}
    for i in range(rows):
        for j in range(cols):
            if rng.random() < density:
                x = field.random_element(rng, nonzero=True, size=size)
                entries[(i, j)] = x
    return SparseMatrix(rows, cols, entries, field)


def random_invertible(n: int, rng: random.Random, field=None) -> SparseMatrix:
    field = _resolve(field)
    while True:
        m = random_matrix(n, n, rng, density=0.6, field=field)
        if rank(m) == n:
            return m


def inverse(m: SparseMatrix) -> SparseMatrix:
    if m.rows != m.cols:
        raise DimensionError("inverse of a non-square matrix")
    e = Eliminator(m)
    cols = []
    for i in range(m.rows):
        x = e.solve({i: m.field.one})
        if x is None:
            raise ValueError("matrix is singular")
        cols.append(x)
    return SparseMatrix.from_columns(m.rows, cols, m.field)
