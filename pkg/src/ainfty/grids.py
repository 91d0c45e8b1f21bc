"""Grid models of link and sphere-link complements.

The unit cube ``[0,1]^D`` is cut into ``R^D`` cells, each split into ``D!``
simplices along monotone lattice paths (the Kuhn triangulation, which is
compatible across shared faces).  Cells near the link are removed and the
boundary of the cube is coned to an apex, which closes the cube up to
``S^D``; the result is a simplicial model of the complement of an open
neighbourhood of the link.

Removed cells of different components must stay at Chebyshev distance at
least 2 and away from the cube boundary; otherwise the tubes would merge or
cut into the cone and the builder refuses.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .complexes import ParseError, SimplicialComplex

DEFAULT_CELL_CAP = 12 ** 3


class GridError(ValueError):
    """The requested grid model cannot be built (merging tubes, cap exceeded, ...)."""


def _exact(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise ParseError("coordinates must be exact decimal strings or rationals, not floats")
    try:
        return Fraction(str(x).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad coordinate {x!r}: {exc}") from None


@dataclass
class LinkSpec:
    """Closed polygonal curves in the unit cube, a tube radius and a grid resolution."""

    curves: list
    tube_radius: Fraction
    resolution: int = 8
    name: str = ""

    def __post_init__(self):
        self.curves = [[tuple(_exact(c) for c in p) for p in curve] for curve in self.curves]
        self.tube_radius = _exact(self.tube_radius)
        for curve in self.curves:
            if len(curve) < 3:
                raise ParseError("a closed curve needs at least three vertices")
            for p in curve:
                if len(p) != 3:
                    raise ParseError("curve vertices must have three coordinates")
                if any(not 0 < c < 1 for c in p):
                    raise ParseError(f"vertex {tuple(map(str, p))} is not inside the open unit cube")
        if self.tube_radius < 0:
            raise ParseError("tube radius must be non-negative")
        if int(self.resolution) < 2:
            raise ParseError("resolution must be at least 2")
        self.resolution = int(self.resolution)

    @classmethod
    def from_dict(cls, d: dict) -> "LinkSpec":
        try:
            return cls(d["curves"], d.get("tube_radius", "0"), d.get("resolution", 8), d.get("name", ""))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed link spec: {exc!r}") from None

    def to_dict(self) -> dict:
        return {"name": self.name, "resolution": self.resolution, "tube_radius": str(self.tube_radius),
                "curves": [[[str(c) for c in p] for p in curve] for curve in self.curves]}


def load_link_spec(path) -> LinkSpec:
    try:
        d = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return LinkSpec.from_dict(d)


def link_fixture(name: str) -> LinkSpec:
    """Shipped link specs: ``unlink2``, ``hopf``, ``unlink3``, ``borromean``."""
    from importlib.resources import files
    return load_link_spec(files("ainfty.data") / f"link_{name}.json")


# ---------------------------------------------------------------------------
# cell selection


def _segment_hits_box(a, b, lo, hi) -> bool:
    """Exact slab test: does the closed segment ``ab`` meet the closed box ``[lo, hi]``?"""
    t0, t1 = Fraction(0), Fraction(1)
    for k in range(len(a)):
        d = b[k] - a[k]
        if d == 0:
            if a[k] < lo[k] or a[k] > hi[k]:
                return False
            continue
        u, v = (lo[k] - a[k]) / d, (hi[k] - a[k]) / d
        if u > v:
            u, v = v, u
        t0, t1 = max(t0, u), min(t1, v)
        if t0 > t1:
            return False
    return True


def _dist2_point_segment(c, a, b) -> Fraction:
    ab = [y - x for x, y in zip(a, b)]
    L = sum(x * x for x in ab)
    ac = [y - x for x, y in zip(a, c)]
    t = Fraction(0) if L == 0 else min(Fraction(1), max(Fraction(0), sum(x * y for x, y in zip(ac, ab)) / L))
    return sum((ci - ai - t * di) ** 2 for ci, ai, di in zip(c, a, ab))


def curve_cells(curve: Sequence[tuple], R: int, radius: Fraction) -> set[tuple]:
    """Cells meeting the closed polyline or with centre within ``radius`` of it."""
    cells: set[tuple] = set()
    h = Fraction(1, R)
    r2 = radius * radius
    n = len(curve)
    for s in range(n):
        a, b = curve[s], curve[(s + 1) % n]
        lo = [max(0, int((min(x, y) - radius) * R) - 1) for x, y in zip(a, b)]
        hi = [min(R - 1, int((max(x, y) + radius) * R) + 1) for x, y in zip(a, b)]
        for cell in itertools.product(*(range(l, u + 1) for l, u in zip(lo, hi))):
            if cell in cells:
                continue
            box_lo = [k * h for k in cell]
            box_hi = [(k + 1) * h for k in cell]
            if _segment_hits_box(a, b, box_lo, box_hi):
                cells.add(cell)
                continue
            centre = [(k + Fraction(1, 2)) * h for k in cell]
            if radius and _dist2_point_segment(centre, a, b) <= r2:
                cells.add(cell)
    return cells


def check_separation(components: Sequence[set[tuple]], R: int) -> None:
    for k, cells in enumerate(components):
        if not cells:
            raise GridError(f"component {k} removes no cells")
        for c in cells:
            if any(x <= 0 or x >= R - 1 for x in c):
                raise GridError(f"component {k} reaches the cube boundary at resolution {R}")
    for a, b in itertools.combinations(range(len(components)), 2):
        near = {tuple(x + d for x, d in zip(c, off)) for c in components[b]
                for off in itertools.product((-1, 0, 1), repeat=len(c))}
        if near & components[a]:
            raise GridError(f"components {a} and {b} come within one cell at resolution {R}")


# ---------------------------------------------------------------------------
# triangulation


@dataclass
class GridComplement:
    """A triangulated complement with the bookkeeping needed for duality."""

    complex: SimplicialComplex
    resolution: int
    dim: int
    removed: list[set[tuple]]
    apex: int
    meridians: list[list[int]] = dc_field(default_factory=list)   # closed vertex loops

    def vertex(self, point: Iterable[int]) -> int:
        return vertex_id(point, self.resolution)

    @property
    def n_cells(self) -> int:
        return self.resolution ** self.dim


def vertex_id(point: Iterable[int], R: int) -> int:
    v = 0
    for x in point:
        v = v * (R + 1) + x
    return v


def _kuhn_simplices(cell: tuple, R: int) -> list[tuple]:
    D = len(cell)
    out = []
    for perm in itertools.permutations(range(D)):
        p = list(cell)
        verts = [vertex_id(p, R)]
        for axis in perm:
            p[axis] += 1
            verts.append(vertex_id(p, R))
        out.append(tuple(sorted(verts)))
    return out


def grid_complement(R: int, D: int, removed: Sequence[set[tuple]], cell_cap: int = DEFAULT_CELL_CAP) -> GridComplement:
    if R ** D > cell_cap:
        raise GridError(f"{R}^{D} = {R ** D} cells exceeds the cap of {cell_cap}")
    check_separation(removed, R)
    gone = set().union(*removed) if removed else set()
    tops = []
    for cell in itertools.product(range(R), repeat=D):
        if cell not in gone:
            tops.extend(_kuhn_simplices(cell, R))
    apex = (R + 1) ** D
    # cone the boundary: Kuhn facets lying in a face x_k = 0 or x_k = R
    for k in range(D):
        for side in (0, R):
            for rest in itertools.product(range(R), repeat=D - 1):
                cell = list(rest[:k]) + [0 if side == 0 else R - 1] + list(rest[k:])
                for s in _kuhn_simplices(tuple(cell), R):
                    facet = tuple(v for v in s if _coord(v, R, D, k) == side)
                    if len(facet) == D:
                        tops.append(facet + (apex,))
    K = SimplicialComplex(tops)
    return GridComplement(K, R, D, [set(c) for c in removed], apex)


def _coord(v: int, R: int, D: int, k: int) -> int:
    return (v // (R + 1) ** (D - 1 - k)) % (R + 1)


# ---------------------------------------------------------------------------
# meridians


def _meridian(curve, cells: set[tuple], R: int, K: SimplicialComplex) -> list[int] | None:
    """Boundary of a grid square pierced once by the curve, lying in the complement."""
    h = Fraction(1, R)
    n = len(curve)
    for cell in sorted(cells):
        for axis in range(3):
            nxt = tuple(x + (1 if k == axis else 0) for k, x in enumerate(cell))
            if nxt not in cells:
                continue
            plane = (cell[axis] + 1) * h
            o = [k for k in range(3) if k != axis]
            lo = [cell[k] * h for k in o]
            hi = [(cell[k] + 1) * h for k in o]
            crossings = 0
            ok = True
            for s in range(n):
                a, b = curve[s], curve[(s + 1) % n]
                if a[axis] == b[axis]:
                    if a[axis] == plane and _segment_hits_box([a[k] for k in o], [b[k] for k in o], lo, hi):
                        ok = False
                    continue
                t = (plane - a[axis]) / (b[axis] - a[axis])
                if not 0 <= t <= 1:
                    continue
                if t in (0, 1):
                    ok = False   # crossing at a polyline vertex: skip this square
                    continue
                q = [a[k] + t * (b[k] - a[k]) for k in o]
                if all(l < x < u for x, l, u in zip(q, lo, hi)):
                    crossings += 1 if b[axis] > a[axis] else -1
                elif all(l <= x <= u for x, l, u in zip(q, lo, hi)):
                    ok = False
            if not ok or abs(crossings) != 1:
                continue
            base = list(cell)
            base[axis] += 1
            corners = []
            for du, dv in ((0, 0), (1, 0), (1, 1), (0, 1)):
                p = list(base)
                p[o[0]] += du
                p[o[1]] += dv
                corners.append(vertex_id(p, R))
            if crossings < 0:
                corners.reverse()
            loop = corners + corners[:1]
            if all(tuple(sorted(e)) in K for e in zip(loop, loop[1:])):
                return corners
    return None


def build_link_complement(spec: LinkSpec, resolution: int | None = None,
                          cell_cap: int = DEFAULT_CELL_CAP) -> GridComplement:
    """Complement in ``S^3`` of an open neighbourhood of the link, with one meridian per component."""
    R = spec.resolution if resolution is None else int(resolution)
    comps = [curve_cells(c, R, spec.tube_radius) for c in spec.curves]
    G = grid_complement(R, 3, comps, cell_cap)
    for k, curve in enumerate(spec.curves):
        m = _meridian(curve, comps[k], R, G.complex)
        if m is None:
            raise GridError(f"no meridian square found for component {k} at resolution {R}")
        G.meridians.append(m)
    return G


# ---------------------------------------------------------------------------
# box spheres for higher Borromean-type links


def box_sphere_cells(p: int, q: int, r: int, R: int, which: int) -> set[tuple]:
    """Cells of the ``which``-th box sphere in ``[0,1]^(p+q+r)``.

    Coordinates split into blocks of sizes ``p, q, r``.  Sphere ``k`` sets its
    own block to the centre and is the boundary of a box in the other two
    blocks, short in the next block and long in the one after (cyclically),
    so that for ``p = q = r = 1`` the three spheres form Borromean rings.
    """
    sizes = (p, q, r)
    D = sum(sizes)
    blocks, start = [], 0
    for s in sizes:
        blocks.append(range(start, start + s))
        start += s
    c = R // 2 - (1 if R % 2 == 0 else 0)
    short = max(2, (R - 3) // 4)
    long = 2 * short
    own, nb, far = blocks[which], blocks[(which + 1) % 3], blocks[(which + 2) % 3]
    cells = set()
    for cell in itertools.product(range(R), repeat=D):
        if any(cell[i] != c for i in own):
            continue
        a = max(abs(cell[i] - c) for i in nb) / short
        b = max(abs(cell[i] - c) for i in far) / long
        if max(a, b) == 1:
            cells.add(cell)
    return cells


def box_sphere_meridian(p: int, q: int, r: int, R: int, which: int) -> list[int] | None:
    """A square loop linking box sphere ``which`` once, when its own block has size 1.

    The loop lies in the plane of the sphere's own axis and the first axis of
    the neighbouring block, around the middle of the box face on that axis.
    """
    sizes = (p, q, r)
    if sizes[which] != 1:
        return None
    starts = [0, p, p + q]
    own = starts[which]
    nb = starts[(which + 1) % 3]
    D = p + q + r
    c = R // 2 - (1 if R % 2 == 0 else 0)
    short = max(2, (R - 3) // 4)
    corners = []
    for du, dv in ((0, 0), (1, 0), (1, 1), (0, 1)):
        pt = [c] * D
        pt[own] = c + du
        pt[nb] = c + short + dv
        corners.append(vertex_id(pt, R))
    return corners


def higher_sphere_complement(p: int, q: int, r: int, resolution: int,
                             cell_cap: int = DEFAULT_CELL_CAP) -> GridComplement:
    """Complement of three box spheres; ``meridians[k]`` is ``None`` unless sphere ``k`` has codimension 2."""
    if min(p, q, r) < 1:
        raise GridError("block sizes must be positive")
    D = p + q + r
    if resolution ** D > cell_cap:
        raise GridError(f"{resolution}^{D} cells exceeds the cap of {cell_cap}")
    comps = [box_sphere_cells(p, q, r, resolution, k) for k in range(3)]
    G = grid_complement(resolution, D, comps, cell_cap)
    for k in range(3):
        m = box_sphere_meridian(p, q, r, resolution, k)
        if m is not None:
            loop = m + m[:1]
            if not all(tuple(sorted(e)) in G.complex for e in zip(loop, loop[1:])):
                raise GridError(f"meridian of sphere {k} leaves the complement at resolution {resolution}")
        G.meridians.append(m)
    return G
