"""Persistence of the kernels of higher comultiplications.

Fix a homological degree ``p`` and an arity ``n``.  Given homology spaces
``V_i = H_p(K_i)`` with induced maps ``f^{i,i+1}`` and, for every index, the
block ``Delta^i: V_i -> (H(K_i))^{(x)n}`` of a transferred structure, the
table

    D^{i,j} = dim f^{i,j}( intersection over k in [i, j] of Ker(Delta^k f^{i,k}) )

is decomposed by the same inclusion-exclusion as ordinary rank tables.  The
resulting intervals are closed.

All computations run on the matrices ``f^{i,i+1}`` and ``Delta^i``; the
optional ``spaces`` and ``structures`` only record where they came from.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .complexes import Filtration, GradedSpace, ParseError, aw_diagonal
from .exactla import (
    DimensionError, SparseMatrix, Subspace, _resolve, field_from_name, image_basis, intersect,
    kernel_basis, random_matrix, rank,
)
from .persist import (
    CLOSED, Barcode, ConsistencyError, PersistenceModule, RankTable, inclusion_exclusion,
    induced_map, level_data, ranks_table,
)
from .transfer.htt import transfer_coalgebra
from .transfer.structures import AInftyCoalgebra


class PreconditionError(ValueError):
    """Input does not satisfy the requirements of the requested operation."""


class APersistenceInput:
    """Maps ``f[i]: V_i -> V_{i+1}`` and comultiplication blocks ``delta[i]`` on ``V_i``."""

    def __init__(self, dims: Sequence[int], maps: Sequence[SparseMatrix], deltas: Sequence[SparseMatrix],
                 degree: int = 0, arity: int = 2, field=None,
                 spaces: Sequence[GradedSpace] | None = None,
                 structures: Sequence[AInftyCoalgebra] | None = None):
        self.field = _resolve(field)
        self.dims = [int(d) for d in dims]
        self.maps = list(maps)
        self.deltas = list(deltas)
        self.degree = degree
        self.arity = arity
        self.spaces = list(spaces) if spaces is not None else None
        self.structures = list(structures) if structures is not None else None
        n = len(self.dims)
        if n == 0:
            raise DimensionError("need at least one index")
        if len(self.maps) != n - 1 or len(self.deltas) != n:
            raise DimensionError(f"{n} spaces need {n - 1} maps and {n} comultiplication blocks")
        for i, m in enumerate(self.maps):
            if m.shape != (self.dims[i + 1], self.dims[i]):
                raise DimensionError(f"map {i} has shape {m.shape}")
        for i, d in enumerate(self.deltas):
            if d.cols != self.dims[i]:
                raise DimensionError(f"block {i} has {d.cols} columns, space has dimension {self.dims[i]}")
        self._module = PersistenceModule(self.dims, self.maps, self.field)

    @classmethod
    def from_matrices(cls, maps, deltas, degree: int = 0, arity: int = 2, field=None,
                      dims: Sequence[int] | None = None) -> "APersistenceInput":
        """Build from matrices or dense row lists.

        Dimensions are read off the ``deltas`` unless given; pass ``dims``
        when some block has no rows.
        """
        F = _resolve(field)
        if dims is None:
            dm = [_as_matrix(d, F) for d in deltas]
            dims = [d.cols for d in dm]
        else:
            dm = [_as_matrix(d, F, 0, dims[i]) for i, d in enumerate(deltas)]
        fm = [_as_matrix(m, F, dims[i + 1], dims[i]) for i, m in enumerate(maps)]
        return cls(dims, fm, dm, degree, arity, F)

    @classmethod
    def from_structures(cls, spaces: Sequence[GradedSpace], maps: Sequence[SparseMatrix],
                        structures: Sequence[AInftyCoalgebra], degree: int, arity: int,
                        field=None) -> "APersistenceInput":
        """``maps`` are the degree-``degree`` blocks of the induced maps."""
        for sp, s in zip(spaces, structures):
            if s.space != sp:
                raise DimensionError("structure does not live on the given space")
        F = _resolve(field)
        deltas = [s.block(arity, degree) for s in structures]
        dims = [sp.dim(degree) for sp in spaces]
        return cls(dims, maps, deltas, degree, arity, F, spaces, structures)

    @property
    def N(self) -> int:
        return len(self.dims) - 1

    @property
    def module(self) -> PersistenceModule:
        return self._module

    def compose(self, i: int, j: int) -> SparseMatrix:
        return self._module.compose(i, j)

    def kernel(self, i: int) -> Subspace:
        return kernel_basis(self.deltas[i])

    def __repr__(self):
        return f"APersistenceInput(dims={self.dims}, p={self.degree}, n={self.arity})"


def _as_matrix(x, F, rows: int = 0, cols: int = 0) -> SparseMatrix:
    if isinstance(x, SparseMatrix):
        return x
    if not x or not x[0]:
        return SparseMatrix.zeros(len(x) or rows, cols, F)
    return SparseMatrix.from_dense([[F.coerce(v) for v in row] for row in x], F)


def from_filtration(f: Filtration, degree: int, arity: int, field=None,
                    basepoint: int | None = None) -> APersistenceInput:
    """Homology of each step with the structure transferred along its deterministic contraction.

    Pass a ``basepoint`` vertex to work with reduced homology, where the
    comultiplication has no counit terms.
    """
    F = _resolve(field)
    levels = level_data(f, F, basepoint)
    structures = []
    for lv in levels:
        diag = aw_diagonal(lv.complex, lv.chains)
        structures.append(transfer_coalgebra(lv.contraction, diag, n_max=max(arity, 2), check=False))
    maps = [induced_map(levels[i], levels[i + 1], degree) for i in range(len(levels) - 1)]
    return APersistenceInput.from_structures([s.space for s in structures], maps, structures,
                                             degree, arity, F)


# ---------------------------------------------------------------------------
# group dimensions and barcodes


def _check_range(inp: APersistenceInput, i: int, j: int):
    if not 0 <= i <= j <= inp.N:
        raise IndexError(f"need 0 <= i <= j <= {inp.N}, got ({i}, {j})")


def delta_table(inp: APersistenceInput) -> RankTable:
    """All ``D^{i,j}`` at once, sweeping ``j`` upward from each ``i``."""
    F = inp.field
    vals = {}
    for i in range(inp.N + 1):
        comp = SparseMatrix.identity(inp.dims[i], F)
        live = Subspace.full(inp.dims[i], F)
        for j in range(i, inp.N + 1):
            if j > i:
                comp = inp.maps[j - 1] @ comp
            live = intersect(live, kernel_basis(inp.deltas[j] @ comp))
            vals[(i, j)] = rank(comp @ live.basis) if live.dim else 0
            if live.dim == 0:
                break
    return RankTable(inp.N, vals)


def delta_group_dim(inp: APersistenceInput, i: int, j: int) -> int:
    _check_range(inp, i, j)
    F = inp.field
    comp = SparseMatrix.identity(inp.dims[i], F)
    live = Subspace.full(inp.dims[i], F)
    for k in range(i, j + 1):
        if k > i:
            comp = inp.maps[k - 1] @ comp
        live = intersect(live, kernel_basis(inp.deltas[k] @ comp))
    return rank(comp @ live.basis) if live.dim else 0


def delta_barcode(inp: APersistenceInput) -> Barcode:
    mult = inclusion_exclusion(delta_table(inp), inp.N)
    neg = {k: v for k, v in mult.items() if v < 0}
    if neg:
        raise ConsistencyError(f"negative multiplicities in the kernel table: {neg}")
    return Barcode(inp.N, mult, CLOSED, inp.degree, "Delta")


@dataclass
class CompatibilityReport:
    ok: bool
    index: int | None = None
    witness: dict | None = None     # vector in Ker Delta^index leaving Ker Delta^{index+1}

    def __bool__(self):
        return self.ok


def compatibility_check(inp: APersistenceInput) -> CompatibilityReport:
    """Whether ``f^{i,i+1}`` maps ``Ker Delta^i`` into ``Ker Delta^{i+1}`` for every ``i``."""
    for i in range(inp.N):
        nxt = inp.deltas[i + 1]
        for v in inp.kernel(i).vectors():
            if nxt.apply(inp.maps[i].apply(v)):
                return CompatibilityReport(False, i, v)
    return CompatibilityReport(True)


def kernel_submodule(inp: APersistenceInput) -> PersistenceModule:
    """``Ker Delta^0 -> ... -> Ker Delta^N`` with the restricted maps."""
    rep = compatibility_check(inp)
    if not rep.ok:
        raise PreconditionError(f"kernels are not nested at index {rep.index}")
    kers = [inp.kernel(i) for i in range(inp.N + 1)]
    maps = []
    for i in range(inp.N):
        cols = [kers[i + 1].coordinates(inp.maps[i].apply(v)) for v in kers[i].vectors()]
        maps.append(SparseMatrix.from_columns(kers[i + 1].dim, cols, inp.field, cols=kers[i].dim))
    return PersistenceModule([k.dim for k in kers], maps, inp.field)


def kernel_submodule_barcode(inp: APersistenceInput) -> Barcode:
    mult = inclusion_exclusion(ranks_table(kernel_submodule(inp)), inp.N)
    if any(v < 0 for v in mult.values()):
        raise ConsistencyError("kernel submodule violates the Frobenius inequality")
    return Barcode(inp.N, mult, CLOSED, inp.degree, "Delta")


@dataclass
class KernelPattern:
    """Fate of one class born at ``start``: alive (nonzero) and in-kernel flags per index."""

    start: int
    vector: dict
    alive: list[bool]
    in_kernel: list[bool]

    @property
    def support(self) -> list[int]:
        return [self.start + k for k, x in enumerate(self.in_kernel) if x]

    @property
    def contiguous(self) -> bool:
        s = self.support
        return not s or s[-1] - s[0] + 1 == len(s)


def kernel_patterns(inp: APersistenceInput) -> list[KernelPattern]:
    """Patterns of the classes born at each index.

    New classes at ``i`` are the standard basis vectors that extend a basis of
    the image of ``f^{i-1,i}`` to all of ``V_i`` (chosen greedily in order).
    """
    F = inp.field
    out = []
    for i in range(inp.N + 1):
        if i == 0:
            old = Subspace.zero(inp.dims[0], F)
        else:
            old = image_basis(inp.maps[i - 1])
        span = old
        for e in range(inp.dims[i]):
            v = {e: F.one}
            if span.contains(v):
                continue
            span = Subspace.span(inp.dims[i], span.vectors() + [v], F)
            alive, ink = [], []
            cur = v
            for k in range(i, inp.N + 1):
                if k > i:
                    cur = inp.maps[k - 1].apply(cur)
                a = bool(cur)
                alive.append(a)
                ink.append(a and not inp.deltas[k].apply(cur))
            out.append(KernelPattern(i, v, alive, ink))
    return out


def sleep_wake_diagnostic(inp: APersistenceInput) -> list[KernelPattern]:
    """Classes whose in-kernel support is not an interval: they fall out of the kernel and return."""
    return [pat for pat in kernel_patterns(inp) if not pat.contiguous]


# ---------------------------------------------------------------------------
# synthetic instances


def kernel_drop_instance(N: int = 9, drops=(5,), spectators: int = 0, arity: int = 3,
                         field=None) -> APersistenceInput:
    """One class alive on ``0..N`` lying in the kernel everywhere except at ``drops``.

    ``spectators`` adds classes that stay in the kernel throughout.
    """
    F = _resolve(field)
    dim = 1 + spectators
    ident = SparseMatrix.identity(dim, F)
    deltas = []
    for k in range(N + 1):
        entries = {(0, 0): F.one} if k in drops else {}
        deltas.append(SparseMatrix(1, dim, entries, F))
    return APersistenceInput([dim] * (N + 1), [ident] * N, deltas, 0, arity, F)


def _annihilator_rows(sub: Subspace, F) -> SparseMatrix:
    """Matrix whose kernel is exactly ``sub``."""
    n = sub.ambient_dim
    if sub.dim == 0:
        return SparseMatrix.identity(n, F)
    ann = kernel_basis(sub.basis.transpose())
    return ann.basis.transpose() if ann.dim else SparseMatrix.zeros(0, n, F)


def _random_subspace(n: int, rng: random.Random, F, base: Subspace | None = None) -> Subspace:
    vecs = list(base.vectors()) if base is not None else []
    for _ in range(rng.randint(0, n)):
        vecs.append(random_matrix(n, 1, rng, 0.6, F).column(0))
    return Subspace.span(n, vecs, F)


def random_instance(rng: random.Random, N: int | None = None, max_dim: int = 4, compatible: bool = True,
                    field=None, scramble: bool = True) -> APersistenceInput:
    """Random module with kernels; when ``compatible`` the kernels are nested along the maps.

    Each ``Delta^i`` is a matrix with prescribed kernel, optionally mixed by a
    random matrix with the same kernel (rows are combined, never dropped).
    """
    F = _resolve(field)
    N = rng.randint(0, 5) if N is None else N
    dims = [rng.randint(0, max_dim) for _ in range(N + 1)]
    maps = [random_matrix(dims[i + 1], dims[i], rng, 0.5, F) for i in range(N)]
    kers: list[Subspace] = []
    for i in range(N + 1):
        if compatible and i > 0:
            pushed = Subspace.span(dims[i], [maps[i - 1].apply(v) for v in kers[-1].vectors()], F)
            kers.append(_random_subspace(dims[i], rng, F, pushed) if rng.random() < 0.7 else pushed)
        else:
            kers.append(_random_subspace(dims[i], rng, F))
    deltas = []
    for k in kers:
        rows = _annihilator_rows(k, F)
        if scramble and rows.rows:
            extra = rng.randint(0, 2)
            mix = random_matrix(rows.rows + extra, rows.rows, rng, 0.7, F)
            while rank(mix) < rows.rows:
                mix = random_matrix(rows.rows + extra, rows.rows, rng, 0.7, F)
            rows = mix @ rows
        deltas.append(rows)
    return APersistenceInput(dims, maps, deltas, 0, 2, F)


# ---------------------------------------------------------------------------
# JSON bundle


def input_to_dict(inp: APersistenceInput) -> dict:
    F = inp.field

    def dense(m: SparseMatrix):
        return [[F.format(x) for x in row] for row in m.to_dense()]

    return {"field": F.name, "degree": inp.degree, "arity": inp.arity, "dims": inp.dims,
            "maps": [dense(m) for m in inp.maps],
            "deltas": [{"rows": inp.deltas[i].rows, "matrix": dense(inp.deltas[i])}
                       for i in range(inp.N + 1)]}


def input_from_dict(d: Mapping) -> APersistenceInput:
    try:
        F = field_from_name(d.get("field", "Q"))
        dims = [int(x) for x in d["dims"]]

        def mat(rows, r, c):
            if r == 0 or c == 0:
                return SparseMatrix.zeros(r, c, F)
            m = SparseMatrix.from_dense([[F.parse(str(x)) for x in row] for row in rows], F)
            if m.shape != (r, c):
                raise DimensionError(f"matrix has shape {m.shape}, expected {(r, c)}")
            return m

        maps = [mat(m, dims[i + 1], dims[i]) for i, m in enumerate(d["maps"])]
        deltas = [mat(e["matrix"], int(e["rows"]), dims[i]) for i, e in enumerate(d["deltas"])]
        return APersistenceInput(dims, maps, deltas, int(d.get("degree", 0)), int(d.get("arity", 2)), F)
    except (KeyError, TypeError, IndexError) as exc:
        raise ParseError(f"malformed kernel-persistence JSON: {exc!r}") from None


def save_input(inp: APersistenceInput, path) -> None:
    Path(path).write_text(json.dumps(input_to_dict(inp), indent=1) + "\n", encoding="utf-8")


def load_input(path) -> APersistenceInput:
    try:
        d = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return input_from_dict(d)
