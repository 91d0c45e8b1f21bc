"""Simplicial complexes, filtrations, chain and cochain complexes.

Also provides the Alexander-Whitney diagonal, the cup product of simplicial
cochains and a Vietoris-Rips builder on exact rational coordinates.
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Mapping

from .exactla import SparseMatrix, _resolve, rank


class ParseError(ValueError):
    pass


class DegreeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# simplicial complexes


class SimplicialComplex:
    """A finite abstract simplicial complex.

    Simplices are sorted tuples of non-negative vertex ids.  Within each
    dimension they are kept in lexicographic order, and ``index`` maps a
    simplex to its position in that list.
    """

    def __init__(self, simplices: Iterable[Iterable[int]] = (), close: bool = True):
        found: set[tuple] = set()
        for s in simplices:
            t = tuple(sorted(set(int(v) for v in s)))
            if not t:
                continue
            if t[0] < 0:
                raise ValueError(f"negative vertex id in {t}")
            found.add(t)
        if close:
            closed = set()
            for t in found:
                if t in closed:
                    continue
                for k in range(1, len(t) + 1):
                    closed.update(itertools.combinations(t, k))
            found = closed
        else:
            for t in found:
                if len(t) > 1:
                    for f in itertools.combinations(t, len(t) - 1):
                        if f not in found:
                            raise ValueError(f"face {f} of {t} missing")
        top = max((len(t) for t in found), default=0)
        self.by_dim: list[list[tuple]] = [[] for _ in range(top)]
        for t in found:
            self.by_dim[len(t) - 1].append(t)
        for lst in self.by_dim:
            lst.sort()
        self.index: dict[tuple, int] = {}
        for lst in self.by_dim:
            for i, t in enumerate(lst):
                self.index[t] = i
        self._front_cache: dict = {}

    @property
    def dim(self) -> int:
        return len(self.by_dim) - 1

    def simplices(self, p: int | None = None) -> list[tuple]:
        if p is None:
            return [t for lst in self.by_dim for t in lst]
        return self.by_dim[p] if 0 <= p < len(self.by_dim) else []

    def count(self, p: int) -> int:
        return len(self.simplices(p))

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(lst) for lst in self.by_dim)

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * n for p, n in enumerate(self.f_vector))

    def __contains__(self, s) -> bool:
        return tuple(sorted(s)) in self.index

    def __len__(self) -> int:
        return len(self.index)

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self.by_dim == other.by_dim

    def __repr__(self):
        return f"SimplicialComplex(f={self.f_vector})"

    def vertices(self) -> list[int]:
        return [t[0] for t in self.simplices(0)]

    def subcomplex(self, keep: Iterable[tuple]) -> "SimplicialComplex":
        return SimplicialComplex(keep, close=True)

    def front_back(self, p: int, q: int) -> dict[int, list[tuple[int, int]]]:
        """For (p+q)-simplices, map front p-face index to [(simplex, back q-face)]."""
        key = (p, q)
        if key not in self._front_cache:
            table: dict[int, list] = {}
            idx = self.index
            for n, s in enumerate(self.simplices(p + q)):
                table.setdefault(idx[s[: p + 1]], []).append((n, idx[s[p:]]))
            self._front_cache[key] = table
        return self._front_cache[key]


@dataclass
class Filtration:
    """A simplicial complex with a monotone entry level per simplex."""

    complex: SimplicialComplex
    level: dict
    n_levels: int | None = None

    def __post_init__(self):
        for s in self.complex.simplices():
            if s not in self.level:
                raise ValueError(f"simplex {s} has no level")
            if len(s) > 1:
                for f in itertools.combinations(s, len(s) - 1):
                    if self.level[f] > self.level[s]:
                        raise ValueError(f"level of face {f} exceeds level of {s}")
        top = max(self.level.values(), default=-1) + 1
        if self.n_levels is None:
            self.n_levels = max(top, 1)
        elif self.n_levels < top:
            raise ValueError("n_levels smaller than the largest level")

    @property
    def N(self) -> int:
        """Index of the last filtration step."""
        return self.n_levels - 1

    def at(self, i: int) -> SimplicialComplex:
        return SimplicialComplex((s for s in self.complex.simplices() if self.level[s] <= i), close=False)

    @classmethod
    def constant(cls, K: SimplicialComplex, n_levels: int = 1) -> "Filtration":
        return cls(K, {s: 0 for s in K.simplices()}, n_levels)


def parse_filtration(text: str) -> Filtration:
    """Parse the line format ``v0 v1 ... [@ level]`` with ``#`` comments.

    Faces not listed explicitly enter with the earliest of their cofaces.
    """
    explicit: dict[tuple, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        body, _, lev = line.partition("@")
        try:
            verts = tuple(sorted(int(x) for x in body.split()))
            level = int(lev) if lev.strip() else 0
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        if not verts:
            raise ParseError(f"line {lineno}: no vertices")
        if len(set(verts)) != len(verts):
            raise ParseError(f"line {lineno}: repeated vertex")
        if verts[0] < 0 or level < 0:
            raise ParseError(f"line {lineno}: negative vertex or level")
        if verts in explicit and explicit[verts] != level:
            raise ParseError(f"line {lineno}: simplex {verts} listed with two levels")
        explicit[verts] = level
    K = SimplicialComplex(explicit)
    level: dict[tuple, int] = {}
    # walk top-down so each face sees all its cofaces first
    for p in range(K.dim, -1, -1):
        for s in K.simplices(p):
            inherited = level.get(s)
            if s in explicit:
                if inherited is not None and explicit[s] > inherited:
                    raise ParseError(f"simplex {s} enters after one of its cofaces")
                lv = explicit[s]
            else:
                lv = inherited
            level[s] = lv
            if p:
                for f in itertools.combinations(s, p):
                    cur = level.get(f)
                    level[f] = lv if cur is None else min(cur, lv)
    return Filtration(K, level)


def load_filtration(path) -> Filtration:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(str(exc)) from None
    return parse_filtration(text)


def load_complex(path) -> SimplicialComplex:
    return load_filtration(path).complex


def dump_filtration(f: Filtration) -> str:
    lines = []
    for s in f.complex.simplices():
        lines.append(" ".join(map(str, s)) + f" @ {f.level[s]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# graded spaces and chain complexes


class GradedSpace:
    """A graded vector space with a global basis ordered by degree."""

    def __init__(self, degrees: Iterable[int], labels: Iterable | None = None):
        self.degrees: list[int] = list(degrees)
        if any(a > b for a, b in zip(self.degrees, self.degrees[1:])):
            raise ValueError("basis must be ordered by degree")
        self.labels = list(labels) if labels is not None else [f"e{i}" for i in range(len(self.degrees))]
        if len(self.labels) != len(self.degrees):
            raise ValueError("labels and degrees differ in length")
        self.offset: dict[int, int] = {}
        self.dims: dict[int, int] = {}
        for g, d in enumerate(self.degrees):
            self.offset.setdefault(d, g)
            self.dims[d] = self.dims.get(d, 0) + 1
        self._words: dict = {}

    @classmethod
    def from_dims(cls, dims: Mapping[int, int], labels: Mapping[int, list] | None = None):
        degs, labs = [], []
        for d in sorted(dims):
            degs += [d] * dims[d]
            labs += list(labels[d]) if labels and d in labels else [f"e{d}_{i}" for i in range(dims[d])]
        return cls(degs, labs)

    def __len__(self):
        return len(self.degrees)

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self.degrees == other.degrees

    def dim(self, p: int) -> int:
        return self.dims.get(p, 0)

    def basis(self, p: int) -> range:
        o = self.offset.get(p, 0)
        return range(o, o + self.dim(p))

    def local(self, g: int) -> tuple[int, int]:
        d = self.degrees[g]
        return d, g - self.offset[d]

    def glob(self, p: int, i: int) -> int:
        return self.offset[p] + i

    def words(self, n: int, total: int) -> list[tuple]:
        """All basis words of length ``n`` and total degree ``total``, lexicographic."""
        key = (n, total)
        if key in self._words:
            return self._words[key][0]
        out: list[tuple] = []
        if n == 1:
            out = [(g,) for g in self.basis(total)]
        elif n > 1 and self.dims:
            _words_of_degree(self, n, total, out)
        index = {w: i for i, w in enumerate(out)}
        self._words[key] = (out, index)
        return out

    def word_index(self, n: int, total: int) -> dict[tuple, int]:
        self.words(n, total)
        return self._words[(n, total)][1]

    def word_degree(self, w: tuple) -> int:
        return sum(self.degrees[g] for g in w)


def _words_of_degree(space: GradedSpace, n: int, total: int, out: list) -> None:
    degs = sorted(space.dims)
    lo, hi = degs[0], degs[-1]

    def rec(prefix, remaining, k):
        if k == 0:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        for d in degs:
            rest = remaining - d
            if not (lo * (k - 1) <= rest <= hi * (k - 1)):
                continue
            for g in space.basis(d):
                prefix.append(g)
                rec(prefix, rest, k - 1)
                prefix.pop()

    rec([], total, n)


class ChainComplex:
    """Graded boundary data over a fixed field.

    ``step`` is -1 for chain complexes (``d: C_p -> C_{p-1}``) and +1 for
    cochain complexes.  ``d[p]`` is the block leaving degree ``p`` in local
    coordinates; missing blocks are zero.
    """

    def __init__(self, dims: Mapping[int, int], differential: Mapping[int, SparseMatrix],
                 labels: Mapping[int, list] | None = None, step: int = -1, field=None):
        if step not in (-1, 1):
            raise ValueError("step must be -1 or +1")
        self.field = _resolve(field)
        self.dims = {p: n for p, n in dims.items() if n > 0}
        self.step = step
        self.labels = {p: list(labels[p]) if labels and p in labels else [f"e{p}_{i}" for i in range(n)]
                       for p, n in self.dims.items()}
        self.d: dict[int, SparseMatrix] = {}
        for p, m in differential.items():
            src, tgt = self.dim(p), self.dim(p + step)
            if m.shape != (tgt, src):
                raise ValueError(f"differential in degree {p} has shape {m.shape}, expected {(tgt, src)}")
            if m.field != self.field:
                raise ValueError("differential field differs from complex field")
            if not m.is_zero():
                self.d[p] = m
        self.space = GradedSpace.from_dims(self.dims, self.labels)
        self._dcols: dict | None = None

    def dim(self, p: int) -> int:
        return self.dims.get(p, 0)

    @property
    def degrees(self) -> list[int]:
        return sorted(self.dims)

    def diff(self, p: int) -> SparseMatrix:
        m = self.d.get(p)
        if m is None:
            return SparseMatrix.zeros(self.dim(p + self.step), self.dim(p), self.field)
        return m

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def check_d_squared(self) -> bool:
        return all((self.diff(p + self.step) @ self.diff(p)).is_zero() for p in self.dims)

    def betti(self, p: int) -> int:
        return self.dim(p) - rank(self.diff(p)) - rank(self.diff(p - self.step))

    def betti_vector(self) -> dict[int, int]:
        return {p: self.betti(p) for p in self.degrees}

    @property
    def dcols(self) -> dict[int, dict]:
        """Differential as global-index columns: ``g -> {g': coeff}``."""
        if self._dcols is None:
            cols: dict[int, dict] = {}
            sp = self.space
            for p, m in self.d.items():
                tgt_off = sp.offset[p + self.step]
                src_off = sp.offset[p]
                for j, col in m._cols.items():
                    cols[src_off + j] = {tgt_off + r: v for r, v in col.items()}
            self._dcols = cols
        return self._dcols

    def apply_d(self, vec: Mapping) -> dict:
        F = self.field
        out: dict = {}
        dc = self.dcols
        for g, x in vec.items():
            col = dc.get(g)
            if col:
                F.sub_multiple(out, F.neg(x), col)
        return out

    def dual(self) -> "ChainComplex":
        """Cochain complex: the differential leaving degree p is d_{p+1} transposed."""
        step = -self.step
        diff = {}
        for p, m in self.d.items():
            diff[p + self.step] = m.transpose()
        return ChainComplex(self.dims, diff, self.labels, step=step, field=self.field)

    def __repr__(self):
        kind = "chain" if self.step < 0 else "cochain"
        return f"ChainComplex({kind}, dims={dict(sorted(self.dims.items()))}, {self.field})"


EMPTY_SIMPLEX: tuple = ()


def chain_complex(K: SimplicialComplex, reduced: bool = False, field=None,
                  basepoint: int | None = None) -> ChainComplex:
    """Simplicial chains with the alternating-sign boundary.

    With ``reduced`` an augmentation to a one-dimensional degree -1 is added,
    so homology is reduced homology.  With ``basepoint`` the chains are taken
    relative to that vertex; this also computes reduced homology and, unlike
    the augmented version, still carries the Alexander-Whitney diagonal.
    """
    F = _resolve(field)
    if reduced and basepoint is not None:
        raise ValueError("choose either reduced or basepoint")
    one, mone = F.one, F.neg(F.one)
    dims = {p: K.count(p) for p in range(K.dim + 1)}
    labels = {p: list(K.simplices(p)) for p in dims}
    idx = dict(K.index)
    if basepoint is not None:
        if (basepoint,) not in K.index:
            raise ValueError(f"basepoint {basepoint} is not a vertex")
        labels[0] = [v for v in labels[0] if v != (basepoint,)]
        dims[0] -= 1
        for i, v in enumerate(labels[0]):
            idx[v] = i
        del idx[(basepoint,)]
    diff = {}
    for p in range(1, K.dim + 1):
        cols = []
        for s in K.simplices(p):
            col = {}
            for i in range(p + 1):
                r = idx.get(s[:i] + s[i + 1:])
                if r is not None:
                    col[r] = one if i % 2 == 0 else mone
            cols.append(col)
        diff[p] = SparseMatrix.from_columns(dims[p - 1], cols, F)
    if reduced:
        dims[-1] = 1
        labels[-1] = [EMPTY_SIMPLEX]
        if dims.get(0):
            diff[0] = SparseMatrix.from_columns(1, [{0: one}] * dims[0], F)
    return ChainComplex(dims, diff, labels, step=-1, field=F)


def cochain_complex(K: SimplicialComplex, reduced: bool = False, field=None,
                    basepoint: int | None = None) -> ChainComplex:
    return chain_complex(K, reduced, field, basepoint).dual()


def label_index(C: ChainComplex, p: int) -> dict:
    """Map basis labels of degree ``p`` to local indices."""
    return {lab: i for i, lab in enumerate(C.labels.get(p, []))}


def betti(K: SimplicialComplex, p: int, field=None) -> int:
    F = _resolve(field)
    C = chain_complex(K, field=F)
    return C.betti(p)


def betti_numbers(K: SimplicialComplex, field=None) -> tuple[int, ...]:
    C = chain_complex(K, field=field)
    return tuple(C.betti(p) for p in range(K.dim + 1))


# ---------------------------------------------------------------------------
# graded maps


class GradedMap:
    """A linear map between graded spaces, possibly into a tensor power.

    Columns are indexed by global source basis indices.  For ``arity == 1``
    a column is ``{target_index: coeff}``; for larger arity it is
    ``{word_tuple: coeff}``.  Columns may be supplied eagerly as a dict or
    lazily through a function, in which case they are computed on first use
    and cached.  ``block(p)`` materialises the matrix leaving degree ``p``.
    """

    def __init__(self, source: GradedSpace, target: GradedSpace, degree_shift: int,
                 columns: Mapping | Callable, arity: int = 1, field=None,
                 vector_fn: Callable | None = None):
        self.source = source
        self.target = target
        self.degree_shift = degree_shift
        self.arity = arity
        self.field = _resolve(field)
        # optional whole-vector evaluation, cheaper than summing cached columns
        self.vector_fn = vector_fn
        if callable(columns):
            self._fn = columns
            self._cols: dict = {}
        else:
            self._fn = None
            self._cols = {g: dict(c) for g, c in columns.items() if c}

    def column(self, g: int) -> dict:
        if self._fn is not None and g not in self._cols:
            self._cols[g] = {k: v for k, v in self._fn(g).items() if v}
        return self._cols.get(g, {})

    def materialize(self) -> "GradedMap":
        for g in range(len(self.source)):
            self.column(g)
        self._fn = None
        self._cols = {g: c for g, c in self._cols.items() if c}
        return self

    @classmethod
    def from_blocks(cls, source: GradedSpace, target: GradedSpace, degree_shift: int,
                    blocks: Mapping[int, SparseMatrix], field=None) -> "GradedMap":
        """Linear map (arity 1) from per-degree matrices in local coordinates."""
        cols: dict = {}
        for p, m in blocks.items():
            q = p + degree_shift
            if m.shape != (target.dim(q), source.dim(p)):
                raise ValueError(f"block for degree {p} has shape {m.shape}")
            for j, col in m._cols.items():
                cols[source.glob(p, j)] = {target.glob(q, r): v for r, v in col.items()}
        return cls(source, target, degree_shift, cols, field=field)

    def apply(self, vec: Mapping) -> dict:
        if self.vector_fn is not None:
            return {k: v for k, v in self.vector_fn(vec).items() if v}
        F = self.field
        out: dict = {}
        for g, x in vec.items():
            col = self.column(g)
            if col:
                F.sub_multiple(out, F.neg(x), col)
        return out

    def block(self, p: int) -> SparseMatrix:
        q = p + self.degree_shift
        src = self.source.basis(p)
        if self.arity == 1:
            off = self.target.offset.get(q, 0)
            rows = self.target.dim(q)
            cols = []
            for g in src:
                cols.append({t - off: v for t, v in self.column(g).items()})
            return SparseMatrix.from_columns(rows, cols, self.field, cols=len(src))
        index = self.target.word_index(self.arity, q)
        cols = [{index[w]: v for w, v in self.column(g).items()} for g in src]
        return SparseMatrix.from_columns(len(index), cols, self.field, cols=len(src))

    def is_zero(self) -> bool:
        return all(not self.column(g) for g in range(len(self.source)))

    def check_degrees(self) -> bool:
        for g in range(len(self.source)):
            want = self.source.degrees[g] + self.degree_shift
            for k in self.column(g):
                deg = self.target.degrees[k] if self.arity == 1 else self.target.word_degree(k)
                if deg != want:
                    return False
        return True

    def __repr__(self):
        return f"GradedMap(shift={self.degree_shift}, arity={self.arity}, {len(self.source)}->{len(self.target)})"


def aw_diagonal(K: SimplicialComplex, C: ChainComplex | None = None) -> GradedMap:
    """Alexander-Whitney diagonal on the chains ``C`` of ``K``.

    ``C`` may be the absolute or the basepoint-relative chain complex; terms
    with a factor outside the basis of ``C`` are dropped.
    """
    if C is None:
        C = chain_complex(K)
    sp = C.space
    F = C.field
    one = F.one
    where = {}
    for p in C.dims:
        if p >= 0:
            for i, lab in enumerate(C.labels[p]):
                where[lab] = sp.glob(p, i)

    def col(g):
        p, i = sp.local(g)
        if p < 0:
            return {}
        s = C.labels[p][i]
        out = {}
        for k in range(p + 1):
            a = where.get(s[: k + 1])
            b = where.get(s[k:])
            if a is not None and b is not None:
                out[(a, b)] = one
        return out

    return GradedMap(sp, sp, 0, col, arity=2, field=F)


# ---------------------------------------------------------------------------
# cochains and cup product


@dataclass(frozen=True)
class Cochain:
    """A simplicial cochain of pure degree; ``values`` maps simplex index to coefficient."""

    degree: int
    values: Mapping = dc_field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "values", {k: v for k, v in self.values.items() if v})

    def is_zero(self) -> bool:
        return not self.values


def unit_cochain(K: SimplicialComplex, field=None) -> Cochain:
    F = _resolve(field)
    return Cochain(0, {i: F.one for i in range(K.count(0))})


def coboundary(K: SimplicialComplex, a: Cochain, field=None) -> Cochain:
    F = _resolve(field)
    p = a.degree
    out: dict = {}
    idx = K.index
    for n, s in enumerate(K.simplices(p + 1)):
        acc = 0
        for i in range(p + 2):
            x = a.values.get(idx[s[:i] + s[i + 1:]])
            if x:
                acc = F.add(acc, x) if i % 2 == 0 else F.sub(acc, x)
        if acc:
            out[n] = acc
    return Cochain(p + 1, out)


def cup_on_cochains(K: SimplicialComplex, a: Cochain, b: Cochain, field=None) -> Cochain:
    """``(a cup b)(v0..v_{p+q}) = a(v0..vp) * b(vp..v_{p+q})``."""
    F = _resolve(field)
    if not isinstance(a, Cochain) or not isinstance(b, Cochain):
        raise DegreeError("cup product expects Cochain arguments of pure degree")
    p, q = a.degree, b.degree
    if p < 0 or q < 0:
        raise DegreeError("negative cochain degree")
    out: dict = {}
    if p + q > K.dim:
        return Cochain(p + q, {})
    table = K.front_back(p, q)
    bv = b.values
    for i, x in a.values.items():
        for n, back in table.get(i, ()):
            y = bv.get(back)
            if y:
                out[n] = F.mul(x, y)
    return Cochain(p + q, out)


# ---------------------------------------------------------------------------
# Vietoris-Rips


def _exact(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"coordinates must be exact (int, Fraction or decimal string), got {x!r}")


def rips_filtration(points, radii, max_dim: int = 2) -> Filtration:
    """Vietoris-Rips filtration indexed by the given radii.

    A simplex enters at the first radius ``r`` for which every pairwise
    distance is at most ``2r``.  Comparisons use squared distances on exact
    rational coordinates.
    """
    pts = [tuple(_exact(c) for c in p) for p in points]
    if not pts:
        raise ValueError("empty point set")
    if len({len(p) for p in pts}) != 1:
        raise ValueError("points have different dimensions")
    rs = [_exact(r) for r in radii]
    if not rs or any(a >= b for a, b in zip(rs, rs[1:])) or rs[0] < 0:
        raise ValueError("radii must be non-negative and strictly ascending")
    thresholds = [4 * r * r for r in rs]
    n = len(pts)
    edge_level: dict[tuple, int] = {}
    for i in range(n):
        for j in range(i + 1, n):
            d2 = sum((a - b) ** 2 for a, b in zip(pts[i], pts[j]))
            for lv, t in enumerate(thresholds):
                if d2 <= t:
                    edge_level[(i, j)] = lv
                    break
    level: dict[tuple, int] = {(i,): 0 for i in range(n)}
    nbrs: dict[int, list[int]] = {i: [] for i in range(n)}
    for (i, j) in edge_level:
        nbrs[i].append(j)
    for i in nbrs:
        nbrs[i].sort()

    def expand(simplex, cands, lv):
        level[simplex] = lv
        if len(simplex) > max_dim:
            return
        for k, v in enumerate(cands):
            nl = max([lv] + [edge_level[(u, v)] for u in simplex])
            expand(simplex + (v,), [w for w in cands[k + 1:] if (v, w) in edge_level], nl)

    for i in range(n):
        expand((i,), nbrs[i], 0)
    K = SimplicialComplex(level.keys(), close=False)
    return Filtration(K, level, n_levels=len(rs))


def load_point_cloud(path) -> list[tuple[Fraction, ...]]:
    pts = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            row = [c for c in row if c.strip()]
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                pts.append(tuple(Fraction(c.strip()) for c in row))
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from None
    return pts


# ---------------------------------------------------------------------------
# small named complexes


def sphere_boundary(vertices: Iterable[int]) -> SimplicialComplex:
    """Boundary of the simplex on the given vertices."""
    vs = tuple(sorted(vertices))
    return SimplicialComplex(itertools.combinations(vs, len(vs) - 1))


def torus7() -> SimplicialComplex:
    """Seven-vertex (Moebius-Csaszar) triangulation of the torus."""
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 2) % 7, (i + 3) % 7))
    return SimplicialComplex(tris)


def wedge_s1_s2_s1() -> SimplicialComplex:
    """Two circles and a 2-sphere glued at vertex 0."""
    a = [(0, 1), (1, 2), (0, 2)]
    b = [(0, 3), (3, 4), (0, 4)]
    s2 = list(itertools.combinations((0, 5, 6, 7), 3))
    return SimplicialComplex(a + b + s2)


def product_complex(K: SimplicialComplex, L: SimplicialComplex) -> tuple[SimplicialComplex, int]:
    """Staircase triangulation of ``K x L``.

    Vertex ``(v, w)`` becomes ``v * m + w`` with ``m`` one more than the
    largest vertex of ``L``; this numbering is increasing along every
    staircase, so cup products on the product are the usual cross products.
    Returns the complex and ``m``.
    """
    m = max(v for (v,) in L.simplices(0)) + 1
    tops = []
    for s in K.simplices():
        for t in L.simplices():
            p, q = len(s) - 1, len(t) - 1
            for ups in itertools.combinations(range(p + q), p):
                i = j = 0
                verts = [s[0] * m + t[0]]
                for k in range(p + q):
                    if k in ups:
                        i += 1
                    else:
                        j += 1
                    verts.append(s[i] * m + t[j])
                tops.append(tuple(verts))
    return SimplicialComplex(tops), m


def pullback_cochain(P: SimplicialComplex, K: SimplicialComplex, vertex_map, a: Cochain) -> Cochain:
    """Pull ``a`` back along an order-preserving simplicial map ``P -> K``."""
    out = {}
    for n, s in enumerate(P.simplices(a.degree)):
        img = tuple(vertex_map(v) for v in s)
        if len(set(img)) == len(img):
            x = a.values.get(K.index.get(img))
            if x:
                out[n] = x
    return Cochain(a.degree, out)


# ---------------------------------------------------------------------------
# cohomology representatives


def cohomology_representatives(K: SimplicialComplex, p: int, field=None) -> list[Cochain]:
    """Cocycles whose classes form a basis of ``H^p(K)`` (unreduced)."""
    from .exactla import Eliminator, kernel_basis

    F = _resolve(field)
    C = cochain_complex(K, field=F)
    Z = kernel_basis(C.diff(p))
    B = C.diff(p - 1)
    stacked = B.hstack(Z.basis)
    e = Eliminator(stacked, track=False)
    reps = [j - B.cols for j in e.pivot_columns() if j >= B.cols]
    return [Cochain(p, Z.basis.column(j)) for j in reps]


def cohomologous_rank(K: SimplicialComplex, cochains: list[Cochain], field=None) -> int:
    """Rank of the span of the classes of the given cocycles of equal degree."""
    F = _resolve(field)
    if not cochains:
        return 0
    p = cochains[0].degree
    C = cochain_complex(K, field=F)
    B = C.diff(p - 1)
    cols = SparseMatrix.from_columns(K.count(p), [dict(c.values) for c in cochains], F)
    return rank(B.hstack(cols)) - rank(B)


def cup_rank(K: SimplicialComplex, p: int = 1, q: int = 1, field=None) -> int:
    """Rank of the cup product ``H^p x H^q -> H^{p+q}`` over all basis pairs."""
    F = _resolve(field)
    hp = cohomology_representatives(K, p, F)
    hq = hp if q == p else cohomology_representatives(K, q, F)
    prods = [cup_on_cochains(K, a, b, F) for a in hp for b in hq]
    return cohomologous_rank(K, prods, F) if prods else 0


def presentation_complex(n_generators: int, relators: Iterable[Iterable[int]]) -> SimplicialComplex:
    """Triangulated 2-complex of a group presentation.

    Generator ``k`` (1-based) is a triangle loop through the base vertex 0;
    a relator is a sequence of signed generator numbers (``-k`` for the
    inverse).  Each relator disk is an annulus onto a fresh inner polygon,
    coned to a fresh apex, so no two faces are identified by accident.
    """
    loops = {}
    nxt = 1
    for k in range(1, n_generators + 1):
        loops[k] = (0, nxt, nxt + 1, 0)
        nxt += 2
    simplices: list[tuple] = []
    for k, (a, b, c, _) in loops.items():
        simplices += [(a, b), (b, c), (c, a)]
    for rel in relators:
        boundary: list[int] = []
        for letter in rel:
            path = loops[abs(letter)]
            seq = list(path if letter > 0 else reversed(path))
            if boundary:
                seq = seq[1:]
            boundary += seq
        boundary = boundary[:-1]  # closed polygon, last vertex repeats the first
        m = len(boundary)
        inner = list(range(nxt, nxt + m))
        apex = nxt + m
        nxt = apex + 1
        for i in range(m):
            o0, o1 = boundary[i], boundary[(i + 1) % m]
            r0, r1 = inner[i], inner[(i + 1) % m]
            simplices += [(o0, o1, r0), (o1, r0, r1), (r0, r1, apex)]
    return SimplicialComplex(simplices)
