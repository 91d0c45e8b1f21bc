"""Persistence modules and barcodes from rank tables.

A persistence module over indices ``0..N`` is a sequence of finite
dimensional spaces with maps ``f^{i,i+1}``.  Its rank table holds
``d^{i,j} = rank f^{i,j}`` (with ``d^{i,i} = dim V_i``), and the barcode is
read off by inclusion-exclusion:

    N^{i,j} = d^{i,j} - d^{i-1,j} - d^{i,j+1} + d^{i-1,j+1}.

Intervals are stored closed, ``[i, j]`` with ``0 <= i <= j <= N``.  The
half-open rendering turns ``[i, j]`` into ``[i, j+1)`` and ``[i, N]`` into
``[i, inf)``; the closed rendering prints them as stored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping, Sequence

from .complexes import ChainComplex, Filtration, SimplicialComplex, chain_complex
from .exactla import DimensionError, SparseMatrix, _resolve, rank
from .transfer.contraction import Contraction, homology_contraction

HALF_OPEN = "half-open"
CLOSED = "closed"


class ConsistencyError(RuntimeError):
    """An invariant that holds for every valid input was violated."""


class RankTableError(ValueError):
    """A table that cannot be the rank table of a persistence module."""


# ---------------------------------------------------------------------------
# modules


class PersistenceModule:
    """Spaces of dimensions ``dims[0..N]`` and maps ``maps[i]: V_i -> V_{i+1}``."""

    def __init__(self, dims: Sequence[int], maps: Sequence[SparseMatrix], field=None):
        self.field = _resolve(field if field is not None else (maps[0].field if maps else None))
        self.dims = [int(d) for d in dims]
        self.maps = list(maps)
        if not self.dims:
            raise DimensionError("a persistence module needs at least one space")
        if len(self.maps) != len(self.dims) - 1:
            raise DimensionError(f"{len(self.dims)} spaces need {len(self.dims) - 1} maps, got {len(self.maps)}")
        for i, m in enumerate(self.maps):
            if m.shape != (self.dims[i + 1], self.dims[i]):
                raise DimensionError(f"map {i}->{i + 1} has shape {m.shape}, expected "
                                     f"{(self.dims[i + 1], self.dims[i])}")

    @property
    def N(self) -> int:
        return len(self.dims) - 1

    def compose(self, i: int, j: int) -> SparseMatrix:
        """``f^{i,j}``; the identity when ``i == j``."""
        if not 0 <= i <= j <= self.N:
            raise IndexError(f"need 0 <= i <= j <= {self.N}, got ({i}, {j})")
        m = SparseMatrix.identity(self.dims[i], self.field)
        for k in range(i, j):
            m = self.maps[k] @ m
        return m

    def __repr__(self):
        return f"PersistenceModule(dims={self.dims})"


def interval_module(intervals: Iterable[tuple[int, int]], N: int, field=None) -> PersistenceModule:
    """Direct sum of interval modules ``F[i, j]`` (closed index intervals)."""
    F = _resolve(field)
    ivs = list(intervals)
    dims = [sum(1 for b, e in ivs if b <= k <= e) for k in range(N + 1)]
    pos = [{} for _ in range(N + 1)]
    for n, (b, e) in enumerate(ivs):
        if not 0 <= b <= e <= N:
            raise ValueError(f"interval {(b, e)} outside 0..{N}")
        for k in range(b, e + 1):
            pos[k][n] = len(pos[k])
    maps = []
    for k in range(N):
        cols = [{} for _ in range(dims[k])]
        for n, r in pos[k].items():
            if n in pos[k + 1]:
                cols[r] = {pos[k + 1][n]: F.one}
        maps.append(SparseMatrix.from_columns(dims[k + 1], cols, F, cols=dims[k]))
    return PersistenceModule(dims, maps, F)


# ---------------------------------------------------------------------------
# rank tables and barcodes


class RankTable:
    """``d^{i,j}`` for ``0 <= i <= j <= N``; other index pairs read as 0."""

    def __init__(self, N: int, values: Mapping[tuple[int, int], int]):
        self.N = N
        self._v = {(i, j): int(values.get((i, j), 0)) for i in range(N + 1) for j in range(i, N + 1)}

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self._v.get(key, 0)

    def __eq__(self, other):
        return isinstance(other, RankTable) and self.N == other.N and self._v == other._v

    def as_rows(self) -> list[list[int]]:
        return [[self[i, j] if j >= i else 0 for j in range(self.N + 1)] for i in range(self.N + 1)]

    def __repr__(self):
        return f"RankTable(N={self.N}, {self.as_rows()})"


def ranks_table(m: PersistenceModule) -> RankTable:
    vals = {}
    for i in range(m.N + 1):
        vals[(i, i)] = m.dims[i]
        comp = SparseMatrix.identity(m.dims[i], m.field)
        for j in range(i + 1, m.N + 1):
            comp = m.maps[j - 1] @ comp
            r = rank(comp)
            vals[(i, j)] = r
            if r == 0:
                break
    return RankTable(m.N, vals)


@dataclass
class Barcode:
    """Multiset of closed index intervals ``[birth, end]`` over ``0..N``."""

    N: int
    intervals: dict = dc_field(default_factory=dict)   # (birth, end) -> multiplicity
    flavor: str = HALF_OPEN
    degree: int | None = None
    kind: str = "H"

    def __post_init__(self):
        if self.flavor not in (HALF_OPEN, CLOSED):
            raise ValueError(f"unknown flavor {self.flavor!r}")
        clean = {}
        for (b, e), m in self.intervals.items():
            if m < 0 or not 0 <= b <= e <= self.N:
                raise ValueError(f"invalid interval {(b, e)} with multiplicity {m}")
            if m:
                clean[(b, e)] = m
        self.intervals = dict(sorted(clean.items()))

    def __eq__(self, other):
        return isinstance(other, Barcode) and self.N == other.N and self.intervals == other.intervals

    def __len__(self):
        return sum(self.intervals.values())

    def covering(self, i: int, j: int) -> int:
        """Number of bars containing every index of ``[i, j]``."""
        return sum(m for (b, e), m in self.intervals.items() if b <= i and j <= e)

    def rank_table(self) -> RankTable:
        return RankTable(self.N, {(i, j): self.covering(i, j)
                                  for i in range(self.N + 1) for j in range(i, self.N + 1)})

    def rendered(self) -> list[tuple[int, int | None, int]]:
        """``(birth, death, multiplicity)`` in this barcode's flavor; ``None`` is infinity."""
        out = []
        for (b, e), m in self.intervals.items():
            if self.flavor == CLOSED:
                out.append((b, e, m))
            else:
                out.append((b, None if e == self.N else e + 1, m))
        return out

    def to_records(self) -> list[dict]:
        return [{"degree": self.degree, "birth": b, "death": d, "multiplicity": m,
                 "flavor": self.flavor, "kind": self.kind} for b, d, m in self.rendered()]

    def to_json(self) -> str:
        return json.dumps(self.to_records(), indent=1)

    def __str__(self):
        parts = []
        for b, d, m in self.rendered():
            if self.flavor == CLOSED:
                s = f"[{b},{d}]"
            else:
                s = f"[{b},{'inf' if d is None else d})"
            parts.append(s if m == 1 else f"{s}x{m}")
        return "{" + ", ".join(parts) + "}"


def barcodes_from_records(records: Iterable[Mapping], N: int) -> dict[int | None, Barcode]:
    """Inverse of :meth:`Barcode.to_records`, grouped by degree."""
    out: dict = {}
    for r in records:
        flavor = r.get("flavor", HALF_OPEN)
        b, d = int(r["birth"]), r.get("death")
        if flavor == CLOSED:
            e = int(d)
        else:
            e = N if d is None else int(d) - 1
        bc = out.setdefault(r.get("degree"), Barcode(N, {}, flavor, r.get("degree"), r.get("kind", "H")))
        bc.intervals[(b, e)] = bc.intervals.get((b, e), 0) + int(r["multiplicity"])
    for bc in out.values():
        bc.__post_init__()
    return out


def inclusion_exclusion(d, N: int) -> dict[tuple[int, int], int]:
    """``N^{i,j}`` for all ``0 <= i <= j <= N``; ``d`` is indexable by pairs (0 outside)."""

    def get(i, j):
        if i < 0 or j > N or i > j:
            return 0
        return d[i, j]

    return {(i, j): get(i, j) - get(i - 1, j) - get(i, j + 1) + get(i - 1, j + 1)
            for i in range(N + 1) for j in range(i, N + 1)}


def barcode_from_ranks(d: RankTable, flavor: str = HALF_OPEN, degree: int | None = None,
                       kind: str = "H") -> Barcode:
    """Decompose a rank table; raises :class:`RankTableError` on a negative multiplicity."""
    mult = inclusion_exclusion(d, d.N)
    neg = {k: v for k, v in mult.items() if v < 0}
    if neg:
        raise RankTableError(f"negative multiplicities {neg}: not the rank table of a module")
    return Barcode(d.N, mult, flavor, degree, kind)


def module_barcode(m: PersistenceModule, flavor: str = HALF_OPEN, degree: int | None = None) -> Barcode:
    try:
        return barcode_from_ranks(ranks_table(m), flavor, degree)
    except RankTableError as exc:
        raise ConsistencyError(f"module rank table violates the Frobenius inequality: {exc}") from None


def frobenius_defect(A: SparseMatrix, B: SparseMatrix, C: SparseMatrix) -> int:
    """``rank B - rank AB - rank BC + rank ABC``, which is never negative."""
    if A.cols != B.rows or B.cols != C.rows:
        raise DimensionError(f"shapes {A.shape}, {B.shape}, {C.shape} are not conformable")
    AB = A @ B
    v = rank(B) - rank(AB) - rank(B @ C) + rank(AB @ C)
    if v < 0:
        raise ConsistencyError(f"Frobenius inequality violated ({v})")
    return v


# ---------------------------------------------------------------------------
# filtrations


@dataclass
class LevelData:
    """Complex, chains and homology contraction at one filtration step."""

    complex: SimplicialComplex
    chains: ChainComplex
    contraction: Contraction


def level_data(f: Filtration, field=None, basepoint: int | None = None) -> list[LevelData]:
    """Per-step data; with ``basepoint`` (a vertex present at step 0) homology is reduced."""
    F = _resolve(field)
    out = []
    for i in range(f.N + 1):
        K = f.at(i)
        C = chain_complex(K, field=F, basepoint=basepoint)
        out.append(LevelData(K, C, homology_contraction(C)))
    return out


def induced_map(src: LevelData, tgt: LevelData, p: int) -> SparseMatrix:
    """``pi_tgt . inclusion . iota_src`` on ``H_p``, in local homology coordinates."""
    F = tgt.chains.field
    ssp, tsp = src.contraction.small.space, tgt.contraction.small.space
    csp = src.chains.space
    tidx = {lab: i for i, lab in enumerate(tgt.chains.labels.get(p, []))}
    toff = tgt.chains.space.offset.get(p, 0)
    hoff = tsp.offset.get(p, 0)
    cols = []
    for e in ssp.basis(p):
        chain = src.contraction.incl.column(e)
        moved = {toff + tidx[csp.labels[g]]: x for g, x in chain.items()}
        img = tgt.contraction.proj.apply(moved)
        cols.append({h - hoff: x for h, x in img.items()})
    return SparseMatrix.from_columns(tsp.dim(p), cols, F, cols=ssp.dim(p))


def homology_module(f: Filtration, p: int, field=None, levels: list[LevelData] | None = None) -> PersistenceModule:
    """The persistence module ``H_p(K_0) -> ... -> H_p(K_N)``."""
    F = _resolve(field)
    levels = levels or level_data(f, F)
    dims = [lv.contraction.small.dim(p) for lv in levels]
    maps = [induced_map(levels[i], levels[i + 1], p) for i in range(len(levels) - 1)]
    return PersistenceModule(dims, maps, F)


def persistent_betti(f: Filtration, p: int, i: int, j: int, field=None) -> int:
    """Rank of ``H_p(K_i) -> H_p(K_j)``."""
    if not 0 <= i <= j <= f.N:
        raise IndexError(f"need 0 <= i <= j <= {f.N}")
    return rank(homology_module(f, p, field).compose(i, j))


def homology_barcode(f: Filtration, p: int, field=None, levels: list[LevelData] | None = None) -> Barcode:
    return module_barcode(homology_module(f, p, field, levels), HALF_OPEN, p)
