"""A-infinity coalgebras and algebras on finite graded spaces.

A coalgebra stores ``ops[n][g] = {word: coeff}`` for ``Delta_n`` applied to
basis element ``g``; an algebra stores ``ops[n][word] = {g: coeff}`` for
``mu_n`` applied to a word.  Words are tuples of global basis indices.
Coalgebras are homologically graded (``Delta_n`` has degree ``n - 2``),
algebras cohomologically (``mu_n`` has degree ``2 - n``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from ..complexes import GradedSpace
from ..exactla import SparseMatrix, _resolve, rank

INFINITY = math.inf


class StructureError(ValueError):
    pass


class AInftyStructure:
    kind = "structure"

    def __init__(self, space: GradedSpace, ops: Mapping[int, Mapping], arity_bound: int | None = None,
                 field=None, check: bool = True):
        self.space = space
        self.field = _resolve(field)
        self.ops: dict[int, dict] = {}
        for n, table in ops.items():
            if n < 1:
                raise StructureError(f"arity {n} < 1")
            clean = {}
            for src, col in table.items():
                col = {k: v for k, v in col.items() if v}
                if col:
                    clean[src] = col
            if clean:
                self.ops[int(n)] = clean
        top = max(self.ops, default=2)
        self.arity_bound = max(top, 2) if arity_bound is None else arity_bound
        if self.ops and max(self.ops) > self.arity_bound:
            raise StructureError("operation above the arity bound")
        if check:
            self._check_degrees()

    def op(self, n: int) -> dict:
        return self.ops.get(n, {})

    @property
    def minimal(self) -> bool:
        return 1 not in self.ops

    def is_zero(self) -> bool:
        return not self.ops

    def __repr__(self):
        return (f"{type(self).__name__}(dims={dict(sorted(self.space.dims.items()))}, "
                f"arities={sorted(self.ops)}, bound={self.arity_bound}, {self.field})")


class AInftyCoalgebra(AInftyStructure):
    """Operations ``Delta_n: C -> C^{(x)n}`` of degree ``n - 2``."""

    kind = "coalgebra"

    def _check_degrees(self):
        deg = self.space.degrees
        for n, table in self.ops.items():
            for g, col in table.items():
                for w in col:
                    if len(w) != n:
                        raise StructureError(f"Delta_{n} output word {w} has wrong length")
                    if sum(deg[x] for x in w) != deg[g] + n - 2:
                        raise StructureError(f"Delta_{n} on basis {g} has wrong degree")

    def apply(self, n: int, vec: Mapping) -> dict:
        F = self.field
        out: dict = {}
        table = self.op(n)
        for g, x in vec.items():
            col = table.get(g)
            if col:
                F.sub_multiple(out, F.neg(x), col)
        return out

    def block(self, n: int, p: int) -> SparseMatrix:
        sp = self.space
        index = sp.word_index(n, p + n - 2)
        table = self.op(n)
        cols = [{index[w]: v for w, v in table.get(g, {}).items()} for g in sp.basis(p)]
        return SparseMatrix.from_columns(len(index), cols, self.field, cols=sp.dim(p))

    def truncated(self, keep) -> "AInftyCoalgebra":
        return AInftyCoalgebra(self.space, {n: t for n, t in self.ops.items() if n in keep},
                               self.arity_bound, self.field, check=False)


class AInftyAlgebra(AInftyStructure):
    """Operations ``mu_n: A^{(x)n} -> A`` of degree ``2 - n``."""

    kind = "algebra"

    def _check_degrees(self):
        deg = self.space.degrees
        for n, table in self.ops.items():
            for w, col in table.items():
                if len(w) != n:
                    raise StructureError(f"mu_{n} input word {w} has wrong length")
                for g in col:
                    if deg[g] != sum(deg[x] for x in w) + 2 - n:
                        raise StructureError(f"mu_{n} on {w} has wrong degree")

    def apply(self, n: int, tensor: Mapping) -> dict:
        """``mu_n`` applied to a linear combination of words."""
        F = self.field
        out: dict = {}
        table = self.op(n)
        for w, x in tensor.items():
            col = table.get(w)
            if col:
                F.sub_multiple(out, F.neg(x), col)
        return out

    def value(self, n: int, *args: Mapping) -> dict:
        """``mu_n(a_1, ..., a_n)`` for vectors ``a_i`` (multilinear expansion)."""
        F = self.field
        words = {(): F.one}
        for a in args:
            nxt: dict = {}
            for w, c in words.items():
                for g, x in a.items():
                    k = w + (g,)
                    nxt[k] = F.add(nxt.get(k, 0), F.mul(c, x))
            words = {k: v for k, v in nxt.items() if v}
        return self.apply(n, words)

    def block(self, n: int, p: int) -> SparseMatrix:
        """Matrix of ``mu_n`` on input words of total degree ``p``."""
        sp = self.space
        words = sp.words(n, p)
        q = p + 2 - n
        off = sp.offset.get(q, 0)
        table = self.op(n)
        cols = [{g - off: v for g, v in table.get(w, {}).items()} for w in words]
        return SparseMatrix.from_columns(sp.dim(q), cols, self.field, cols=len(words))

    def truncated(self, keep) -> "AInftyAlgebra":
        return AInftyAlgebra(self.space, {n: t for n, t in self.ops.items() if n in keep},
                             self.arity_bound, self.field, check=False)


def _sign(e: int) -> int:
    return -1 if e & 1 else 1


# ---------------------------------------------------------------------------
# Stasheff identities


@dataclass
class StasheffReport:
    n_max: int
    failures: list[int]

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok

    @property
    def max_violated(self) -> int | None:
        return max(self.failures) if self.failures else None

    def summary(self) -> str:
        if self.ok:
            return f"Stasheff identities hold for all n <= {self.n_max}"
        return f"Stasheff identities fail for n in {self.failures}"


def stasheff_coalgebra_terms(s: AInftyCoalgebra, n: int, g: int) -> dict:
    """Left side of the arity-n Stasheff identity evaluated on basis element ``g``.

    Sum over ``i`` and ``j`` of ``(-1)^(i+j+ij) (1^(n-i-j) x Delta_i x 1^j) Delta_(n-i+1)``,
    with the Koszul sign from moving ``Delta_i`` past the first factors.
    """
    F = s.field
    deg = s.space.degrees
    out: dict = {}
    for i in range(1, n + 1):
        inner = s.op(n - i + 1).get(g)
        di = s.op(i)
        if not inner or not di:
            continue
        for j in range(0, n - i + 1):
            a = n - i - j
            base = _sign(i + j + i * j)
            for w, c in inner.items():
                col = di.get(w[a])
                if not col:
                    continue
                sg = base * _sign((i - 2) * sum(deg[x] for x in w[:a]))
                head, tail = w[:a], w[a + 1:]
                coeff = F.mul(c, sg)
                for u, e in col.items():
                    k = head + u + tail
                    out[k] = F.add(out.get(k, 0), F.mul(coeff, e))
    return {k: v for k, v in out.items() if v}


def stasheff_algebra_terms(s: AInftyAlgebra, n: int, word: tuple) -> dict:
    """Left side of the algebra arity-n Stasheff identity on an input word.

    Sum over ``r + s + t = n`` of ``(-1)^(r + s t) mu_(r+1+t) (1^r x mu_s x 1^t)``.
    """
    F = s.field
    deg = s.space.degrees
    out: dict = {}
    for sa in range(1, n + 1):
        ms = s.op(sa)
        if not ms:
            continue
        for r in range(0, n - sa + 1):
            t = n - sa - r
            outer = s.op(r + 1 + t)
            if not outer:
                continue
            col = ms.get(word[r:r + sa])
            if not col:
                continue
            sg = _sign(r + sa * t) * _sign(sa * sum(deg[x] for x in word[:r]))
            head, tail = word[:r], word[r + sa:]
            for g, c in col.items():
                res = outer.get(head + (g,) + tail)
                if not res:
                    continue
                coeff = F.mul(c, sg)
                for h, e in res.items():
                    out[h] = F.add(out.get(h, 0), F.mul(coeff, e))
    return {k: v for k, v in out.items() if v}


def _candidate_words(s: AInftyAlgebra, n: int):
    """Input words of length n on which some arity-n Stasheff term can be nonzero."""
    sp = s.space
    degs = sorted(sp.dims)
    if not degs:
        return []
    out = []
    for total in range(degs[0] * n, degs[-1] * n + 1):
        out.extend(sp.words(n, total))
    return out


def verify_stasheff(s: AInftyStructure, n_max: int | None = None) -> StasheffReport:
    """Evaluate the Stasheff identities up to n_max exactly; arities without stored operations count as zero."""
    n_max = s.arity_bound if n_max is None else n_max
    failures = []
    for n in range(1, n_max + 1):
        if isinstance(s, AInftyCoalgebra):
            bad = any(stasheff_coalgebra_terms(s, n, g) for g in range(len(s.space)))
        else:
            bad = any(stasheff_algebra_terms(s, n, w) for w in _candidate_words(s, n))
        if bad:
            failures.append(n)
    return StasheffReport(n_max, failures)


# ---------------------------------------------------------------------------
# invariants of minimal structures


def min_nonzero_arity(s: AInftyStructure):
    """Smallest ``n >= 2`` with a nonzero operation, or ``math.inf``."""
    if not s.minimal:
        raise StructureError("structure is not minimal")
    ks = [n for n in s.ops if n >= 2]
    return min(ks) if ks else INFINITY


def dim_ker_op(s: AInftyStructure, n: int, p: int | None = None) -> int:
    """Dimension of the kernel of the degree-``p`` block of the ``n``-th operation.

    With ``p=None`` the total over all degrees is returned.
    """
    if p is None:
        sp = s.space
        if isinstance(s, AInftyCoalgebra):
            return sum(dim_ker_op(s, n, q) for q in sorted(sp.dims))
        degs = sorted(sp.dims)
        if not degs:
            return 0
        return sum(dim_ker_op(s, n, q) for q in range(degs[0] * n, degs[-1] * n + 1))
    m = s.block(n, p)
    return m.cols - rank(m)


def truncate_to_arity(s: AInftyStructure, k) -> AInftyStructure:
    """Keep only the operation of arity ``k``, which must be the least nonzero one."""
    kmin = min_nonzero_arity(s)
    if kmin == INFINITY:
        raise StructureError("zero structure has no nonzero arity")
    if k != kmin:
        raise StructureError(f"k={k} is not the least nonzero arity ({kmin})")
    return s.truncated({k})


def zero_coalgebra(space: GradedSpace, arity_bound: int = 4, field=None) -> AInftyCoalgebra:
    return AInftyCoalgebra(space, {}, arity_bound, field)


def identity_ops_equal(a: AInftyStructure, b: AInftyStructure) -> bool:
    return type(a) is type(b) and a.space == b.space and a.ops == b.ops
