"""Cobar construction, A-infinity morphisms and transport of structure.

Elements of the tensor algebra on the desuspension ``s^-1 C`` are dicts
mapping words (tuples of global basis indices of ``C``) to coefficients.  A
generator ``s^-1 c`` has degree ``|c| - 1``.  All series are truncated at a
word-length bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping

from ..complexes import GradedSpace
from ..exactla import Eliminator, SparseMatrix
from .structures import AInftyCoalgebra, StructureError, _sign


def _susp_sign(deg, word) -> int:
    """Sign of ``(s^-1)^{(x)n}`` on ``c_1 (x) ... (x) c_n``: ``(-1)^sum |c_k| (n-k)``."""
    n = len(word)
    e = 0
    for k, g in enumerate(word, 1):
        e += deg[g] * (n - k)
    return _sign(e)


def _desusp_sign(deg, word) -> int:
    """Sign of ``s^{(x)n}`` on ``s^-1 c_1 (x) ... (x) s^-1 c_n``."""
    n = len(word)
    e = 0
    for k, g in enumerate(word, 1):
        e += (deg[g] - 1) * (n - k)
    return _sign(e)


def _tri(n: int) -> int:
    return n * (n - 1) // 2


def _add_into(F, out: dict, src: Mapping, c) -> None:
    if c:
        F.sub_multiple(out, F.neg(c), src)


@dataclass
class CobarComplex:
    """Generators ``s^-1 C`` with differential components ``d_n`` on generators."""

    space: GradedSpace
    components: dict          # n -> {g: {word: coeff}}
    word_bound: int
    field: object

    def gen_degree(self, g: int) -> int:
        return self.space.degrees[g] - 1

    def d_generator(self, g: int, max_len: int | None = None) -> dict:
        out: dict = {}
        L = self.word_bound if max_len is None else max_len
        for n, table in self.components.items():
            if n <= L and g in table:
                _add_into(self.field, out, table[g], self.field.one)
        return out

    def d(self, elem: Mapping, max_len: int | None = None) -> dict:
        """Extend ``d`` as a derivation, keeping words of length <= max_len."""
        F = self.field
        L = self.word_bound if max_len is None else max_len
        out: dict = {}
        for w, c in elem.items():
            e = 0
            for pos, g in enumerate(w):
                room = L - (len(w) - 1)
                if room >= 1:
                    dg = self.d_generator(g, room)
                    if dg:
                        head, tail = w[:pos], w[pos + 1:]
                        coeff = F.mul(c, _sign(e))
                        for u, x in dg.items():
                            k = head + u + tail
                            out[k] = F.add(out.get(k, 0), F.mul(coeff, x))
                e += self.gen_degree(g)
        return {k: v for k, v in out.items() if v}


def cobar(s: AInftyCoalgebra, word_bound: int | None = None) -> CobarComplex:
    """``d_n = -(-1)^{n(n-1)/2} (s^-1)^{(x)n} Delta_n s`` on each generator."""
    F = s.field
    L = s.arity_bound if word_bound is None else word_bound
    deg = s.space.degrees
    comps: dict = {}
    for n, table in s.ops.items():
        if n > L:
            continue
        base = -_sign(_tri(n))
        comp = {}
        for g, col in table.items():
            comp[g] = {w: F.mul(c, base * _susp_sign(deg, w)) for w, c in col.items()}
        comps[n] = comp
    return CobarComplex(s.space, comps, L, F)


def coalgebra_from_cobar(cb: CobarComplex, arity_bound: int | None = None) -> AInftyCoalgebra:
    """Inverse correspondence ``Delta_n = -s^{(x)n} d_n s^-1``."""
    F = cb.field
    deg = cb.space.degrees
    ops = {}
    for n, comp in cb.components.items():
        table = {}
        for g, col in comp.items():
            table[g] = {w: F.mul(c, -_desusp_sign(deg, w)) for w, c in col.items()}
        ops[n] = table
    return AInftyCoalgebra(cb.space, ops, arity_bound or cb.word_bound, F)


@dataclass
class CobarReport:
    word_bound: int
    failing_lengths: list[int]
    witnesses: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failing_lengths

    def __bool__(self):
        return self.ok

    def summary(self) -> str:
        if self.ok:
            return f"d^2 = 0 on generators in word lengths <= {self.word_bound}"
        return f"d^2 != 0 in word lengths {self.failing_lengths}"


def cobar_d_squared_check(cb: CobarComplex) -> CobarReport:
    """Evaluate ``d(d(x))`` on every generator; report word lengths where it is nonzero."""
    bad: dict[int, dict] = {}
    for g in range(len(cb.space)):
        dd = cb.d(cb.d_generator(g))
        for w, c in dd.items():
            n = len(w)
            bad.setdefault(n, {})
            bad[n].setdefault(g, {})[w] = c
    return CobarReport(cb.word_bound, sorted(bad), bad)


# ---------------------------------------------------------------------------
# morphisms


class AInftyMorphism:
    """Components ``f_(k): C -> C'^{(x)k}`` of degree ``k - 1``, stored as columns."""

    def __init__(self, source: GradedSpace, target: GradedSpace, components: Mapping[int, Mapping],
                 arity_bound: int = 4, field=None):
        from ..exactla import _resolve
        self.source = source
        self.target = target
        self.field = _resolve(field)
        self.arity_bound = arity_bound
        self.components: dict[int, dict] = {}
        for k, table in components.items():
            clean = {g: {w: v for w, v in col.items() if v} for g, col in table.items()}
            self.components[k] = {g: c for g, c in clean.items() if c}
        tdeg = target.degrees
        for k, table in self.components.items():
            for g, col in table.items():
                for w in col:
                    if len(w) != k or sum(tdeg[x] for x in w) != source.degrees[g] + k - 1:
                        raise StructureError(f"f_({k}) has wrong degree or length on {g}")

    @classmethod
    def identity(cls, space: GradedSpace, arity_bound: int = 4, field=None) -> "AInftyMorphism":
        from ..exactla import _resolve
        F = _resolve(field)
        return cls(space, space, {1: {g: {(g,): F.one} for g in range(len(space))}}, arity_bound, F)

    @classmethod
    def linear(cls, space: GradedSpace, blocks: Mapping[int, SparseMatrix], arity_bound: int = 4,
               field=None, higher: Mapping[int, Mapping] | None = None) -> "AInftyMorphism":
        """Morphism with ``f_(1)`` given by per-degree matrices and optional higher components."""
        comps = {1: {}}
        for p, m in blocks.items():
            for j, col in m._cols.items():
                comps[1][space.glob(p, j)] = {(space.glob(p, r),): v for r, v in col.items()}
        if higher:
            comps.update(higher)
        return cls(space, space, comps, arity_bound, field or next(iter(blocks.values())).field)

    def f1_block(self, p: int) -> SparseMatrix:
        src = self.source.basis(p)
        off = self.target.offset.get(p, 0)
        cols = [{w[0] - off: v for w, v in self.components.get(1, {}).get(g, {}).items()} for g in src]
        return SparseMatrix.from_columns(self.target.dim(p), cols, self.field, cols=len(src))

    def is_iso(self) -> bool:
        from ..exactla import rank
        for p in set(self.source.dims) | set(self.target.dims):
            m = self.f1_block(p)
            if m.rows != m.cols or rank(m) != m.rows:
                return False
        return True

    def generator_map(self) -> dict:
        """Components ``F_k = (s^{(x)k})^-1 f_(k) s`` on cobar generators."""
        F = self.field
        tdeg = self.target.degrees
        out: dict[int, dict] = {}
        for k, table in self.components.items():
            base = _sign(_tri(k))
            out[k] = {g: {w: F.mul(c, base * _susp_sign(tdeg, w)) for w, c in col.items()}
                      for g, col in table.items()}
        return out


def _apply_multiplicative(F, gen_map: Mapping[int, Mapping], elem: Mapping, max_len: int) -> dict:
    """Apply the algebra map determined by degree-0 generator images, truncated."""
    out: dict = {}
    for w, c in elem.items():
        partial = {(): c}
        for g in w:
            nxt: dict = {}
            for prefix, x in partial.items():
                room = max_len - len(prefix)
                for k, table in gen_map.items():
                    if k > room:
                        continue
                    col = table.get(g)
                    if not col:
                        continue
                    for u, y in col.items():
                        key = prefix + u
                        nxt[key] = F.add(nxt.get(key, 0), F.mul(x, y))
            partial = {kk: v for kk, v in nxt.items() if v}
            if not partial:
                break
        for key, v in partial.items():
            out[key] = F.add(out.get(key, 0), v)
    return {k: v for k, v in out.items() if v}


@dataclass
class MorphismReport:
    i_max: int
    failures: list[int]

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok

    def summary(self) -> str:
        if self.ok:
            return f"morphism identities hold for all word lengths <= {self.i_max}"
        return f"morphism identities fail for word lengths {self.failures}"


def verify_morphism(f: AInftyMorphism, src: AInftyCoalgebra, tgt: AInftyCoalgebra,
                    i_max: int | None = None) -> MorphismReport:
    """Check the morphism identities through ``F d = d' F`` on cobar generators."""
    L = i_max or min(f.arity_bound, src.arity_bound, tgt.arity_bound)
    F = f.field
    cs, ct = cobar(src, L), cobar(tgt, L)
    gm = f.generator_map()
    failures = set()
    for g in range(len(f.source)):
        lhs = _apply_multiplicative(F, gm, cs.d_generator(g), L)
        img = {}
        for k, table in gm.items():
            if k <= L and g in table:
                _add_into(F, img, table[g], F.one)
        rhs = ct.d(img, L)
        diff = dict(lhs)
        F.sub_multiple(diff, F.one, rhs)
        failures.update(len(w) for w in diff)
    return MorphismReport(L, sorted(failures))


def _tensor_power_solver(F, f1_inv: Mapping[int, Mapping], word_map_len: int):
    """Apply ``(F_1^{(x)m})^{-1}`` to a homogeneous word-length-m element."""

    def apply(elem: Mapping) -> dict:
        out: dict = {}
        for w, c in elem.items():
            partial = {(): c}
            for g in w:
                nxt: dict = {}
                col = f1_inv.get(g, {})
                for prefix, x in partial.items():
                    for h, y in col.items():
                        key = prefix + (h,)
                        nxt[key] = F.add(nxt.get(key, 0), F.mul(x, y))
                partial = nxt
            for key, v in partial.items():
                out[key] = F.add(out.get(key, 0), v)
        return {k: v for k, v in out.items() if v}

    return apply


def invert_generator_map(f: AInftyMorphism, max_len: int) -> dict:
    """Generator images of the inverse algebra map, by recursion on word length.

    ``G_1 = F_1^-1`` and ``G_m = -(F_1^{(x)m})^-1 sum_{k<m} [F(G_k)]_m``.
    """
    F = f.field
    gm = f.generator_map()
    # invert F_1 degreewise on generator coordinates
    f1 = gm.get(1, {})
    f1_inv: dict = {}
    for p in set(f.source.dims) | set(f.target.dims):
        src, tgt = f.source.basis(p), f.target.basis(p)
        if len(src) != len(tgt):
            raise StructureError("f_(1) is not an isomorphism")
        cols = [{w[0] - tgt.start: c for w, c in f1.get(g, {}).items()} for g in src]
        m = SparseMatrix.from_columns(len(tgt), cols, F, cols=len(src))
        e = Eliminator(m)
        if e.rank != len(tgt):
            raise StructureError("f_(1) is singular")
        for i, h in enumerate(tgt):
            x = e.solve({i: F.one})
            f1_inv[h] = {src[j]: v for j, v in x.items()}
    # generator map of the inverse, expressed on words of the source generators
    inv_power = _tensor_power_solver(F, f1_inv, max_len)
    G: dict[int, dict] = {1: {h: {(g,): v for g, v in col.items()} for h, col in f1_inv.items()}}
    for m in range(2, max_len + 1):
        table = {}
        for h in range(len(f.target)):
            acc: dict = {}
            for k in range(1, m):
                gk = G.get(k, {}).get(h)
                if gk:
                    img = _apply_multiplicative(F, gm, gk, m)
                    _add_into(F, acc, {w: c for w, c in img.items() if len(w) == m}, F.one)
            if acc:
                sol = inv_power(acc)
                table[h] = {w: F.neg(c) for w, c in sol.items()}
        G[m] = table
    return G


def transport_structure(s: AInftyCoalgebra, g: AInftyMorphism, arity_bound: int | None = None) -> AInftyCoalgebra:
    """The structure on the target making ``g`` a morphism from ``s``.

    The cobar differential is conjugated by the algebra automorphism induced by
    ``g``: ``d' = F d F^-1`` on generators, truncated at the arity bound.
    """
    if g.source != s.space:
        raise StructureError("morphism source differs from the structure's space")
    if not g.is_iso():
        raise StructureError("f_(1) is singular")
    L = arity_bound or s.arity_bound
    F = s.field
    cb = cobar(s, L)
    gm = g.generator_map()
    G = invert_generator_map(g, L)
    comps: dict[int, dict] = {}
    for h in range(len(g.target)):
        pre: dict = {}
        for m, table in G.items():
            if h in table:
                _add_into(F, pre, table[h], F.one)
        dpre = cb.d(pre, L)
        img = _apply_multiplicative(F, gm, dpre, L)
        for w, c in img.items():
            comps.setdefault(len(w), {}).setdefault(h, {})[w] = c
    tcb = CobarComplex(g.target, comps, L, F)
    return coalgebra_from_cobar(tcb, L)
