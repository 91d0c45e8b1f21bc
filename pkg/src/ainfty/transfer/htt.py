"""Homotopy transfer of a DG coalgebra or algebra structure to (co)homology.

Both directions use the binary-tree recursion.  For coalgebras

    rho_n = sum_{s+t=n} c(s, t) (T_s (x) T_t) Delta,
    T_1 = proj,   T_k = rho_k h,
    Delta_n = rho_n incl,

and for algebras

    lambda_1 = id,  lambda_n = sum_{s+t=n} c(s, t) mu_2 (T_s (x) T_t),
    T_1 = id,       T_k = h lambda_k,
    mu_n = proj lambda_n incl^{(x)n},

with ``h = sign * htpy`` and Koszul signs when ``T_t`` moves past inputs.
"""

from __future__ import annotations

from typing import Callable, Mapping

from ..complexes import ChainComplex, GradedMap, SimplicialComplex, cup_on_cochains, Cochain
from .contraction import Contraction
from .structures import AInftyAlgebra, AInftyCoalgebra, StructureError, _sign


def coalgebra_tree_sign(s: int, t: int) -> int:
    return _sign(t * (s + 1))


COALGEBRA_HTPY_SIGN = 1


def algebra_tree_sign(s: int, t: int) -> int:
    return _sign(t * (s + 1))


ALGEBRA_HTPY_SIGN = 1


def _tensor(F, left: Mapping, right: Mapping, sign: int, coeff, out: dict) -> None:
    c0 = F.mul(coeff, sign)
    for u, x in left.items():
        cx = F.mul(c0, x)
        for v, y in right.items():
            k = u + v
            out[k] = F.add(out.get(k, 0), F.mul(cx, y))


def check_dg_coalgebra(C: ChainComplex, diag: GradedMap) -> list[str]:
    """Problems with ``diag`` as a coassociative chain-map comultiplication."""
    F = C.field
    deg = C.space.degrees
    problems = []
    for g in range(len(C.space)):
        col = diag.column(g)
        left: dict = {}
        right: dict = {}
        for (a, b), c in col.items():
            for (x, y), e in diag.column(a).items():
                k = (x, y, b)
                left[k] = F.add(left.get(k, 0), F.mul(c, e))
            for (x, y), e in diag.column(b).items():
                k = (a, x, y)
                right[k] = F.add(right.get(k, 0), F.mul(c, e))
        if {k: v for k, v in left.items() if v} != {k: v for k, v in right.items() if v}:
            problems.append(f"not coassociative on basis {g}")
            break
        # chain map: Delta d = (d (x) 1 + 1 (x) d) Delta
        lhs: dict = {}
        for h, c in C.apply_d({g: F.one}).items():
            for w, e in diag.column(h).items():
                lhs[w] = F.add(lhs.get(w, 0), F.mul(c, e))
        rhs: dict = {}
        for (a, b), c in col.items():
            for x, e in C.apply_d({a: F.one}).items():
                rhs[(x, b)] = F.add(rhs.get((x, b), 0), F.mul(c, e))
            sg = _sign(deg[a])
            for y, e in C.apply_d({b: F.one}).items():
                rhs[(a, y)] = F.add(rhs.get((a, y), 0), F.mul(F.mul(c, sg), e))
        if {k: v for k, v in lhs.items() if v} != {k: v for k, v in rhs.items() if v}:
            problems.append(f"not a chain map on basis {g}")
            break
    return problems


def transfer_coalgebra(c: Contraction, diag: GradedMap, n_max: int = 4, check: bool = True,
                       tree_sign: Callable[[int, int], int] = coalgebra_tree_sign,
                       htpy_sign: int = COALGEBRA_HTPY_SIGN) -> AInftyCoalgebra:
    """Minimal A-infinity coalgebra on the homology of ``c.big``."""
    if n_max < 2:
        raise StructureError("arity bound must be at least 2")
    C = c.big
    if C.step != -1:
        raise StructureError("coalgebra transfer needs a chain complex (step -1)")
    if check:
        problems = check_dg_coalgebra(C, diag)
        if problems:
            raise StructureError("; ".join(problems))
    F = C.field
    deg = C.space.degrees
    cache: dict[tuple[int, int], dict] = {}
    htpy_cols: dict[int, dict] = {}

    def h_col(g):
        if g not in htpy_cols:
            col = c.htpy.column(g)
            htpy_cols[g] = {k: F.mul(v, htpy_sign) for k, v in col.items()}
        return htpy_cols[g]

    nsp = c.small.space
    proj_memo: dict[int, dict] = {}

    def proj(g):
        if g not in proj_memo:
            proj_memo[g] = {(e,): v for e, v in c.proj.column(g).items()}
        return proj_memo[g]

    # projected trees: rho(n, g) = proj^{(x)n} rho_n(e_g), words in homology indices
    def rho_vec(n, vec):
        out: dict = {}
        for g, x in vec.items():
            r = rho(n, g)
            if r:
                F.sub_multiple(out, F.neg(x), r)
        return out

    def T(k, g):
        if k == 1:
            return proj(g)
        hv = h_col(g)
        return rho_vec(k, hv) if hv else {}

    def rho(n, g):
        key = (n, g)
        if key in cache:
            return cache[key]
        res: dict = {}
        for (a, b), x in diag.column(g).items():
            for s in range(1, n):
                t = n - s
                ta = T(s, a)
                if not ta:
                    continue
                tb = T(t, b)
                if not tb:
                    continue
                sg = tree_sign(s, t) * _sign((t - 1) * deg[a])
                _tensor(F, ta, tb, sg, x, res)
        res = {k: v for k, v in res.items() if v}
        cache[key] = res
        return res

    ops: dict[int, dict] = {}
    for n in range(2, n_max + 1):
        table = {}
        for e in range(len(nsp)):
            out = rho_vec(n, c.incl.column(e))
            if out:
                table[e] = out
        if table:
            ops[n] = table
    return AInftyCoalgebra(nsp, ops, n_max, F)


def cochain_cup(K: SimplicialComplex, D: ChainComplex) -> Callable[[Mapping, Mapping], dict]:
    """Cup product on global-index cochain vectors of a cochain complex ``D`` of ``K``.

    ``D`` may be absolute or relative to a basepoint; its basis labels are
    matched against the simplices of ``K``.
    """
    sp = D.space
    F = D.field
    to_k: dict[int, int] = {}
    from_k: dict[tuple[int, int], int] = {}
    for p in D.dims:
        if p < 0:
            continue
        for i, lab in enumerate(D.labels[p]):
            k = K.index[lab]
            to_k[sp.glob(p, i)] = k
            from_k[(p, k)] = sp.glob(p, i)

    def split(vec):
        parts: dict[int, dict] = {}
        for g, x in vec.items():
            p = sp.degrees[g]
            parts.setdefault(p, {})[to_k[g]] = x
        return parts

    def cup(a: Mapping, b: Mapping) -> dict:
        out: dict = {}
        pa, pb = split(a), split(b)
        for p, av in pa.items():
            for q, bv in pb.items():
                if p + q not in sp.dims:
                    continue
                r = cup_on_cochains(K, Cochain(p, av), Cochain(q, bv), F)
                for k, x in r.values.items():
                    g = from_k.get((p + q, k))
                    if g is not None:
                        out[g] = F.add(out.get(g, 0), x)
        return {k: v for k, v in out.items() if v}

    return cup


class AlgebraTransfer:
    """Lazy transferred operations ``mu_n`` on cohomology, memoised on input words."""

    def __init__(self, c: Contraction, cup: Callable[[Mapping, Mapping], dict],
                 tree_sign: Callable[[int, int], int] = algebra_tree_sign,
                 htpy_sign: int = ALGEBRA_HTPY_SIGN):
        if c.big.step != 1:
            raise StructureError("algebra transfer needs a cochain complex (step +1)")
        self.c = c
        self.cup = cup
        self.tree_sign = tree_sign
        self.htpy_sign = htpy_sign
        self.F = c.field
        self.space = c.small.space
        self._lam: dict[tuple, dict] = {}
        self._T: dict[tuple, dict] = {}
        self._incl = {e: c.incl.column(e) for e in range(len(self.space))}

    def lam(self, word: tuple) -> dict:
        """``lambda_n`` on the included classes of ``word`` (a cochain)."""
        if word in self._lam:
            return self._lam[word]
        F = self.F
        n = len(word)
        if n == 1:
            res = dict(self._incl[word[0]])
        else:
            res: dict = {}
            deg = self.space.degrees
            for s in range(1, n):
                t = n - s
                left = self.T(word[:s])
                if not left:
                    continue
                right = self.T(word[s:])
                if not right:
                    continue
                sg = self.tree_sign(s, t) * _sign((t - 1) * sum(deg[x] for x in word[:s]))
                prod = self.cup(left, right)
                if prod:
                    F.sub_multiple(res, F.neg(F.mul(F.one, sg)), prod)
        self._lam[word] = res
        return res

    def T(self, word: tuple) -> dict:
        if len(word) == 1:
            return self.lam(word)
        if word not in self._T:
            lv = self.lam(word)
            hv = self.c.htpy.apply(lv) if lv else {}
            if self.htpy_sign != 1:
                hv = {k: self.F.neg(v) for k, v in hv.items()}
            self._T[word] = hv
        return self._T[word]

    def mu(self, word: tuple) -> dict:
        lv = self.lam(word)
        return self.c.proj.apply(lv) if lv else {}

    def mu_vectors(self, *args: Mapping) -> dict:
        """``mu_n(a_1, ..., a_n)`` for cohomology vectors, by multilinear expansion."""
        F = self.F
        words = {(): F.one}
        for a in args:
            words = {w + (g,): F.mul(c, x) for w, c in words.items() for g, x in a.items()}
        out: dict = {}
        for w, c in words.items():
            if c:
                m = self.mu(w)
                if m:
                    F.sub_multiple(out, F.neg(c), m)
        return out

    def structure(self, n_max: int = 4) -> AInftyAlgebra:
        sp = self.space
        degs = sorted(sp.dims)
        ops: dict[int, dict] = {}
        for n in range(2, n_max + 1):
            table = {}
            if degs:
                for total in range(degs[0] * n, degs[-1] * n + 1):
                    for w in sp.words(n, total):
                        m = self.mu(w)
                        if m:
                            table[w] = m
            if table:
                ops[n] = table
        return AInftyAlgebra(sp, ops, n_max, self.F)


def transfer_algebra(c: Contraction, cup: Callable[[Mapping, Mapping], dict], n_max: int = 4,
                     **kw) -> AInftyAlgebra:
    """Minimal A-infinity algebra on the cohomology of ``c.big``."""
    if n_max < 2:
        raise StructureError("arity bound must be at least 2")
    return AlgebraTransfer(c, cup, **kw).structure(n_max)
