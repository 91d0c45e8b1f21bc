"""Constructors for DG coalgebras, minimal structures and isomorphisms.

Used by the demos and the property tests: wedge-of-spheres models with a
zero homotopy, random simplicial DG coalgebras (optionally in a scrambled
basis), random minimal A-infinity coalgebras and random isomorphisms.
"""

from __future__ import annotations

import random
from typing import Mapping

from ..complexes import (
    ChainComplex, GradedMap, GradedSpace, SimplicialComplex, aw_diagonal, chain_complex,
)
from ..exactla import _resolve, inverse, random_invertible
from .cobar import AInftyMorphism
from .structures import AInftyCoalgebra


def wedge_of_spheres(sphere_dims, field=None) -> tuple[ChainComplex, GradedMap]:
    """Cellular chains of a wedge of spheres: one 0-cell, zero differential.

    The diagonal is ``pt -> pt (x) pt`` and ``e -> pt (x) e + e (x) pt``.
    """
    F = _resolve(field)
    dims: dict[int, int] = {0: 1}
    labels: dict[int, list] = {0: ["pt"]}
    for n, d in enumerate(sorted(sphere_dims)):
        if d < 1:
            raise ValueError("sphere dimensions must be positive")
        dims[d] = dims.get(d, 0) + 1
        labels.setdefault(d, []).append(f"S{d}_{dims[d] - 1}")
    C = ChainComplex(dims, {}, labels, step=-1, field=F)
    sp = C.space
    cols = {0: {(0, 0): F.one}}
    for g in range(1, len(sp)):
        cols[g] = {(0, g): F.one, (g, 0): F.one}
    return C, GradedMap(sp, sp, 0, cols, arity=2, field=F)


def wedge_of_spheres_cup(C: ChainComplex):
    """Cup product on the cellular cochains of a wedge of spheres (only the unit acts)."""
    F = C.field

    def cup(a: Mapping, b: Mapping) -> dict:
        out: dict = {}
        ua, ub = a.get(0, 0), b.get(0, 0)
        for g, x in b.items():
            if ua:
                out[g] = F.add(out.get(g, 0), F.mul(ua, x))
        for g, x in a.items():
            if ub and g != 0:
                out[g] = F.add(out.get(g, 0), F.mul(x, ub))
        return {k: v for k, v in out.items() if v}

    return cup


def random_complex(rng: random.Random, max_simplices: int = 20, n_vertices: int = 7,
                   max_dim: int = 3) -> SimplicialComplex:
    """Random complex with at most ``max_simplices`` simplices in total."""
    while True:
        tops = []
        for _ in range(rng.randint(1, 6)):
            k = rng.randint(1, max_dim + 1)
            tops.append(rng.sample(range(n_vertices), min(k, n_vertices)))
        K = SimplicialComplex(tops)
        if len(K) <= max_simplices:
            return K


def conjugate_dgc(C: ChainComplex, diag: GradedMap, rng: random.Random) -> tuple[ChainComplex, GradedMap]:
    """Change basis degreewise by random invertible ``g``: ``d' = g d g^-1``, ``Delta' = (g x g) Delta g^-1``."""
    F = C.field
    g = {p: random_invertible(n, rng, F) for p, n in C.dims.items()}
    gi = {p: inverse(m) for p, m in g.items()}
    diff = {}
    for p, m in C.d.items():
        diff[p] = g[p + C.step] @ m @ gi[p]
    D = ChainComplex(C.dims, diff, {p: [f"{lab}'" for lab in C.labels[p]] for p in C.dims}, C.step, F)
    sp = C.space

    def glob_cols(p, m):
        return {sp.glob(p, j): {sp.glob(p, r): v for r, v in col.items()} for j, col in m._cols.items()}

    G, Gi = {}, {}
    for p in C.dims:
        G.update(glob_cols(p, g[p]))
        Gi.update(glob_cols(p, gi[p]))
    cols = {}
    for x in range(len(sp)):
        acc: dict = {}
        for y, c in Gi.get(x, {}).items():
            for (a, b), e in diag.column(y).items():
                ce = F.mul(c, e)
                for a2, u in G.get(a, {}).items():
                    for b2, v in G.get(b, {}).items():
                        k = (a2, b2)
                        acc[k] = F.add(acc.get(k, 0), F.mul(ce, F.mul(u, v)))
        cols[x] = {k: v for k, v in acc.items() if v}
    return D, GradedMap(sp, sp, 0, cols, arity=2, field=F)


def random_dgc(rng: random.Random, max_total: int = 20, scramble: bool | None = None,
               field=None) -> tuple[SimplicialComplex, ChainComplex, GradedMap]:
    """A random simplicial DG coalgebra of total dimension at most ``max_total``."""
    F = _resolve(field)
    K = random_complex(rng, max_total)
    C = chain_complex(K, field=F)
    diag = aw_diagonal(K, C)
    if scramble is None:
        scramble = rng.random() < 0.5
    if scramble:
        C, diag = conjugate_dgc(C, diag, rng)
    return K, C, diag


def random_single_arity(rng: random.Random, k: int, field=None, max_dim: int = 6) -> AInftyCoalgebra:
    """Minimal coalgebra whose only operation is ``Delta_k``, mapping a top part into primitives.

    Since ``Delta_k`` lands in words of primitive elements, on which every
    operation vanishes, all Stasheff identities hold.
    """
    F = _resolve(field)
    while True:
        prim_degs = [rng.randint(1, 3) for _ in range(rng.randint(1, 3))]
        word_degs = [rng.choice(prim_degs) for _ in range(k)]
        top_deg = sum(word_degs) - k + 2
        if top_deg > max(prim_degs):
            break
    n_top = rng.randint(1, 2)
    entries = [(d, "p") for d in prim_degs] + [(top_deg, "t")] * n_top
    entries.sort(key=lambda e: (e[0], e[1]))
    sp = GradedSpace([d for d, _ in entries], [f"{kind}{i}" for i, (_, kind) in enumerate(entries)])
    prims = [g for g, (_, kind) in enumerate(entries) if kind == "p"]
    tops = [g for g, (_, kind) in enumerate(entries) if kind == "t"]
    pspace_words = [w for w in _words(prims, k) if sum(sp.degrees[x] for x in w) == top_deg + k - 2]
    table = {}
    for t in tops:
        if rng.random() < 0.8 or t == tops[0]:
            chosen = rng.sample(pspace_words, min(len(pspace_words), rng.randint(1, 3)))
            table[t] = {w: F.random_element(rng, nonzero=True) for w in chosen}
    return AInftyCoalgebra(sp, {k: table}, max(k + 1, 4), F)


def _words(letters, k):
    if k == 0:
        return [()]
    return [w + (x,) for w in _words(letters, k - 1) for x in letters]


def random_iso(space: GradedSpace, rng: random.Random, max_arity: int = 3, field=None,
               density: float = 0.3) -> AInftyMorphism:
    """Random isomorphism: invertible ``f_(1)`` per degree plus sparse higher components."""
    F = _resolve(field)
    blocks = {p: random_invertible(n, rng, F) for p, n in space.dims.items()}
    higher: dict[int, dict] = {}
    for k in range(2, max_arity + 1):
        table = {}
        for g in range(len(space)):
            ws = space.words(k, space.degrees[g] + k - 1)
            if ws and rng.random() < density:
                chosen = rng.sample(ws, min(len(ws), 2))
                table[g] = {w: F.random_element(rng, nonzero=True) for w in chosen}
        if table:
            higher[k] = table
    return AInftyMorphism.linear(space, blocks, max(max_arity, 4), F, higher)
