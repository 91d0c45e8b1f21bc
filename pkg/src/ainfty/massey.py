"""Triple Massey products, their indeterminacy, and link detection.

For cocycles ``a, b, c`` of degrees ``p, q, r`` with ``[ab] = [bc] = 0`` pick
``x, y`` with ``dx = ab`` and ``dy = bc``.  The class of

    (-1)^{1+q} (x c - (-1)^p a y)

is a representative of ``<a, b, c>``, a coset of

    [a] H^{q+r-1} + H^{p+q-1} [c]   inside   H^{p+q+r-1}.

Classes are written in the coordinates of the cohomology basis chosen by
the deterministic contraction of the cochain complex, and the transferred
operation ``mu_3`` on the same basis satisfies
``(-1)^{1+q} mu_3(a, b, c) in <a, b, c>``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .complexes import (
    Cochain, DegreeError, SimplicialComplex, betti_numbers, cochain_complex, cup_rank,
)
from .exactla import Eliminator, SparseMatrix, Subspace, _resolve, inverse
from .grids import (
    DEFAULT_CELL_CAP, GridComplement, GridError, LinkSpec, build_link_complement,
    higher_sphere_complement,
)
from .transfer.contraction import homology_contraction
from .transfer.htt import AlgebraTransfer, cochain_cup
from .transfer.structures import AInftyAlgebra, StructureError


class MasseyError(ValueError):
    """The product is undefined or an input is not a cocycle."""


DEFAULT_RESOLUTIONS = (8, 10, 12)


def _sign(e: int) -> int:
    return -1 if e & 1 else 1


class CohomologyModel:
    """Cochains of ``K`` with a fixed contraction onto cohomology and the cup product.

    Cochain vectors use the global basis of the cochain complex; class vectors
    use per-degree coordinates ``{i: coeff}`` in ``H^p``.
    """

    def __init__(self, K: SimplicialComplex, field=None):
        self.K = K
        self.field = F = _resolve(field)
        self.cochains = cochain_complex(K, field=F)
        self.contraction = homology_contraction(self.cochains)
        self.cup = cochain_cup(K, self.cochains)
        self._solvers: dict[int, Eliminator] = {}
        self._algebra: AlgebraTransfer | None = None

    # -- conversions --------------------------------------------------------

    @property
    def H(self):
        return self.contraction.small.space

    def h_dim(self, p: int) -> int:
        return self.H.dim(p)

    def vector(self, a: Cochain) -> dict:
        sp = self.cochains.space
        if a.values and not 0 <= a.degree <= self.K.dim:
            raise DegreeError(f"cochain degree {a.degree} out of range")
        return {sp.glob(a.degree, i): x for i, x in a.values.items()}

    def cochain(self, p: int, vec: Mapping) -> Cochain:
        off = self.cochains.space.offset.get(p, 0)
        return Cochain(p, {g - off: x for g, x in vec.items()})

    def is_cocycle(self, vec: Mapping) -> bool:
        return not self.cochains.apply_d(vec)

    def class_of(self, vec: Mapping, p: int) -> dict:
        """Coordinates in ``H^p`` of a cocycle of degree ``p``."""
        off = self.H.offset.get(p, 0)
        return {g - off: x for g, x in self.contraction.proj.apply(vec).items()}

    def representative(self, cls: Mapping, p: int) -> dict:
        """A cocycle of degree ``p`` in the class with coordinates ``cls``."""
        F = self.field
        off = self.H.offset.get(p, 0)
        out: dict = {}
        for i, x in cls.items():
            F.sub_multiple(out, F.neg(x), self.contraction.incl.column(off + i))
        return out

    def basis_representatives(self, p: int) -> list[dict]:
        return [self.representative({i: self.field.one}, p) for i in range(self.h_dim(p))]

    def solve_coboundary(self, vec: Mapping, p: int) -> dict | None:
        """Some cochain ``x`` of degree ``p - 1`` with ``dx = vec``, or ``None``."""
        if not vec:
            return {}
        if p - 1 not in self._solvers:
            self._solvers[p - 1] = Eliminator(self.cochains.diff(p - 1))
        sp = self.cochains.space
        src, tgt = sp.offset.get(p - 1, 0), sp.offset[p]
        x = self._solvers[p - 1].solve({g - tgt: v for g, v in vec.items()})
        if x is None:
            return None
        return {src + i: v for i, v in x.items()}

    @property
    def algebra(self) -> AlgebraTransfer:
        if self._algebra is None:
            self._algebra = AlgebraTransfer(self.contraction, self.cup)
        return self._algebra

    def global_class(self, cls: Mapping, p: int) -> dict:
        off = self.H.offset.get(p, 0)
        return {off + i: x for i, x in cls.items()}


# ---------------------------------------------------------------------------
# Massey triples


@dataclass
class MasseyTriple:
    degree: int
    defined: bool
    representative: dict = dc_field(default_factory=dict)
    indeterminacy: Subspace | None = None
    x: dict | None = None
    y: dict | None = None

    def contains(self, cls: Mapping) -> bool:
        """Whether the class with coordinates ``cls`` lies in the coset."""
        if not self.defined:
            raise MasseyError("Massey product is undefined")
        F = self.indeterminacy.field
        diff = dict(cls)
        F.sub_multiple(diff, F.one, self.representative)
        return self.indeterminacy.contains({k: v for k, v in diff.items() if v})

    @property
    def contains_zero(self) -> bool:
        return self.contains({})

    def same_coset(self, other: "MasseyTriple") -> bool:
        return (self.defined and other.defined and self.indeterminacy == other.indeterminacy
                and self.contains(other.representative))


def _as_vector(model: CohomologyModel, a) -> tuple[dict, int]:
    if isinstance(a, Cochain):
        vec = model.vector(a)
        deg = a.degree
    else:
        raise MasseyError("Massey inputs must be Cochain objects")
    if not model.is_cocycle(vec):
        raise MasseyError(f"degree-{deg} input is not a cocycle")
    return vec, deg


def triple_massey(K: SimplicialComplex, a: Cochain, b: Cochain, c: Cochain, field=None,
                  model: CohomologyModel | None = None, bounding: tuple | None = None) -> MasseyTriple:
    """``<a, b, c>`` for cocycles ``a, b, c``.

    The overall sign ``(-1)^{1+|b|}`` only matters when ``|b|`` is even; it
    makes ``(-1)^{1+|b|} mu_3`` of the transferred structure land in the coset.

    ``bounding`` may supply cochains ``(x, y)`` with ``dx = ab`` and
    ``dy = bc``; otherwise they are found by an exact sparse solve.
    """
    model = model or CohomologyModel(K, field)
    if model.K is not K:
        raise ValueError("model was built for a different complex")
    F = model.field
    av, p = _as_vector(model, a)
    bv, q = _as_vector(model, b)
    cv, r = _as_vector(model, c)
    deg = p + q + r - 1
    ab, bc = model.cup(av, bv), model.cup(bv, cv)
    if bounding is None:
        x = model.solve_coboundary(ab, p + q)
        y = model.solve_coboundary(bc, q + r)
        if x is None or y is None:
            return MasseyTriple(deg, False)
    else:
        x, y = (model.vector(z) if isinstance(z, Cochain) else dict(z) for z in bounding)
        for z, target in ((x, ab), (y, bc)):
            dz = model.cochains.apply_d(z)
            F.sub_multiple(dz, F.one, target)
            if any(dz.values()):
                raise MasseyError("supplied bounding cochain does not bound the cup product")
    omega = model.cup(x, cv)
    F.sub_multiple(omega, F.coerce(_sign(p)), model.cup(av, y))
    rep = model.class_of(omega, deg)
    if q % 2 == 0:
        rep = {k: F.neg(v) for k, v in rep.items()}
    gens = []
    for h in model.basis_representatives(q + r - 1):
        gens.append(model.class_of(model.cup(av, h), deg))
    for h in model.basis_representatives(p + q - 1):
        gens.append(model.class_of(model.cup(h, cv), deg))
    ind = Subspace.span(model.h_dim(deg), [g for g in gens if g], F)
    return MasseyTriple(deg, True, rep, ind, x, y)


def hopf_cup_check(K: SimplicialComplex, field=None) -> int:
    """Rank of the cup product ``H^1 x H^1 -> H^2``."""
    return cup_rank(K, 1, 1, field)


@dataclass
class MembershipResult:
    holds: bool
    mu3: dict
    triple: MasseyTriple

    def __bool__(self):
        return self.holds


def mu3_membership_check(A, K: SimplicialComplex, alpha: Mapping, beta: Mapping, gamma: Mapping,
                         degrees: Sequence[int] = (1, 1, 1), model: CohomologyModel | None = None,
                         field=None) -> MembershipResult:
    """Whether ``(-1)^{1+|beta|} mu_3(alpha, beta, gamma)`` lies in ``<alpha, beta, gamma>``.

    ``alpha, beta, gamma`` are class coordinates in degrees ``degrees``.  ``A``
    is the transferred structure of the cochains of ``K`` (an
    :class:`AlgebraTransfer` or a computed :class:`AInftyAlgebra`) on the
    basis of ``model``, which defaults to the contraction behind ``A``.
    """
    if model is None:
        model = CohomologyModel(K, field)
        if isinstance(A, AlgebraTransfer):
            model.contraction = A.c
    if A.space.degrees != model.H.degrees:
        raise StructureError("structure does not live on the cohomology of this complex")
    p, q, r = degrees
    reps = [model.cochain(d, model.representative(v, d)) for v, d in zip((alpha, beta, gamma), degrees)]
    t = triple_massey(K, *reps, model=model)
    if not t.defined:
        raise MasseyError("Massey product is undefined")
    args = [model.global_class(v, d) for v, d in zip((alpha, beta, gamma), degrees)]
    if isinstance(A, AlgebraTransfer):
        mg = A.mu_vectors(*args)
    elif isinstance(A, AInftyAlgebra):
        mg = A.value(3, *args)
    else:
        raise TypeError("expected an AlgebraTransfer or AInftyAlgebra")
    F = model.field
    off = model.H.offset.get(t.degree, 0)
    mu = {g - off: x for g, x in mg.items()}
    s = F.coerce(_sign(1 + q))
    return MembershipResult(t.contains({k: F.mul(s, v) for k, v in mu.items()}), mu, t)


# ---------------------------------------------------------------------------
# link complements


def evaluate_on_loop(model: CohomologyModel, vec: Mapping, loop: Sequence[int]) -> object:
    """Pair a 1-cochain with a closed vertex loop."""
    F = model.field
    K = model.K
    sp = model.cochains.space
    off = sp.offset.get(1, 0)
    total = 0
    cyc = list(loop) + [loop[0]]
    for u, w in zip(cyc, cyc[1:]):
        e = K.index[tuple(sorted((u, w)))]
        x = vec.get(off + e, 0)
        if x:
            total = F.add(total, x) if u < w else F.sub(total, x)
    return total


def alexander_duals(model: CohomologyModel, meridians: Sequence[Sequence[int]]) -> list[dict]:
    """Classes in ``H^1`` taking value 1 on one meridian and 0 on the others."""
    F = model.field
    n = model.h_dim(1)
    if n != len(meridians):
        raise GridError(f"H^1 has dimension {n} but there are {len(meridians)} meridians")
    if n == 0:
        return []
    reps = model.basis_representatives(1)
    E = SparseMatrix.from_dense([[evaluate_on_loop(model, reps[i], m) for i in range(n)]
                                 for m in meridians], F)
    try:
        Einv = inverse(E)
    except ValueError as exc:
        raise GridError(f"meridians do not detect H^1: {exc}") from None
    return [Einv.column(j) for j in range(n)]


@dataclass
class LinkReport:
    name: str
    resolution: int
    field: str
    f_vector: tuple
    betti: tuple
    expected_betti: tuple
    cup_rank: int
    massey_defined: bool | None = None
    zero_in_massey: bool | None = None
    mu3: dict | None = None
    mu3_in_indeterminacy: bool | None = None
    mu3_nonzero: bool | None = None
    membership: bool | None = None
    attempts: list = dc_field(default_factory=list)

    @property
    def verdict(self) -> str:
        if self.massey_defined is None:
            return "Massey product not evaluated"
        if not self.massey_defined:
            return "Massey product undefined (cup products do not vanish)"
        return "0 in <a,b,c>" if self.zero_in_massey else "0 not in <a,b,c>"

    def to_dict(self) -> dict:
        return {"name": self.name, "resolution": self.resolution, "field": self.field,
             "f_vector": list(self.f_vector), "betti": list(self.betti),
             "expected_betti": list(self.expected_betti), "cup_rank": self.cup_rank,
             "massey": {"defined": self.massey_defined, "zero_in_coset": self.zero_in_massey},
             "mu3": None if self.mu3 is None else {
                 "value": {str(k): str(v) for k, v in sorted(self.mu3.items())},
                 "nonzero": self.mu3_nonzero, "in_indeterminacy": self.mu3_in_indeterminacy,
                 "membership_theorem_holds": self.membership},
             "verdict": self.verdict, "attempts": self.attempts}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def expected_link_betti(components: int) -> tuple:
    return (1, components, max(components - 1, 0), 0)


def analyse_complement(G: GridComplement, name: str = "", field=None,
                       expected: tuple | None = None) -> LinkReport:
    """Betti numbers, cup rank and, for three components, Massey and ``mu_3``."""
    F = _resolve(field)
    K = G.complex
    comps = len(G.meridians)
    betti = betti_numbers(K, F)
    model = CohomologyModel(K, F)
    reps = model.basis_representatives(1)
    prods = [model.class_of(model.cup(u, v), 2) for u in reps for v in reps]
    cr = Subspace.span(model.h_dim(2), [x for x in prods if x], F).dim if prods else 0
    rep = LinkReport(name, G.resolution, F.name, K.f_vector, betti,
                     expected if expected is not None else expected_link_betti(comps), cr)
    if comps == 3 and model.h_dim(1) == 3:
        duals = alexander_duals(model, G.meridians)
        A = model.algebra
        res = mu3_membership_check(A, K, *duals, model=model)
        t = res.triple
        rep.massey_defined = True
        rep.zero_in_massey = t.contains_zero
        rep.mu3 = res.mu3
        rep.mu3_nonzero = bool(res.mu3)
        rep.mu3_in_indeterminacy = t.indeterminacy.contains(res.mu3)
        rep.membership = res.holds
    elif comps == 3:
        rep.massey_defined = None
    elif comps >= 2 and model.h_dim(1) >= 2:
        duals = alexander_duals(model, G.meridians)
        c = [model.cochain(1, model.representative(v, 1)) for v in duals[:3]]
        t = triple_massey(K, c[0], c[1], c[0], model=model)
        rep.massey_defined = t.defined
        rep.zero_in_massey = t.contains_zero if t.defined else None
    return rep


def link_pipeline(spec: LinkSpec, field=None, resolutions: Sequence[int] | None = None,
                  cell_cap: int = DEFAULT_CELL_CAP) -> LinkReport:
    """Build the complement, escalating resolution until Betti numbers match duality.

    Resolutions are tried in ascending order (default: 8, 10, 12 and the
    resolution stored in the link description).
    A resolution is rejected when the builder refuses it or when the Betti
    numbers differ from ``(1, c, c - 1, 0)`` for ``c`` components.
    """
    F = _resolve(field)
    if resolutions is None:
        resolutions = sorted(set(DEFAULT_RESOLUTIONS) | {spec.resolution})
    expected = expected_link_betti(len(spec.curves))
    attempts = []
    for R in resolutions:
        try:
            G = build_link_complement(spec, R, cell_cap)
        except GridError as exc:
            attempts.append({"resolution": R, "status": f"rejected: {exc}"})
            continue
        b = betti_numbers(G.complex, F)
        if b != expected:
            attempts.append({"resolution": R, "status": f"betti {list(b)} != {list(expected)}"})
            continue
        attempts.append({"resolution": R, "status": "ok"})
        rep = analyse_complement(G, spec.name, F, expected)
        rep.attempts = attempts
        return rep
    raise GridError(f"no resolution in {list(resolutions)} gives a valid complement: {attempts}")


def higher_sphere_link(p: int, q: int, r: int, resolution: int, field=None,
                       cell_cap: int = DEFAULT_CELL_CAP) -> tuple[SimplicialComplex, MasseyTriple]:
    """Complement of three linked box spheres in ``S^{p+q+r}`` and the Massey triple of their duals.

    Sphere ``k`` has codimension ``s_k + 1`` where ``(s_0, s_1, s_2) = (p, q, r)``,
    so its dual class has degree ``s_k``.  Degree-1 duals are fixed by their
    values on meridian loops; a dual of higher degree must be the only class
    of its degree and is taken to be that basis class.
    """
    F = _resolve(field)
    G = higher_sphere_complement(p, q, r, resolution, cell_cap)
    K = G.complex
    model = CohomologyModel(K, F)
    degs = (p, q, r)
    ones = [k for k in range(3) if degs[k] == 1]
    duals = dict(zip(ones, alexander_duals(model, [G.meridians[k] for k in ones]))) if ones else {}
    for k, d in enumerate(degs):
        if d == 1:
            continue
        if degs.count(d) != 1 or model.h_dim(d) != 1:
            raise GridError(f"cannot single out the dual of sphere {k} in H^{d} "
                            f"(dimension {model.h_dim(d)})")
        duals[k] = {0: F.one}
    reps = [model.cochain(degs[k], model.representative(duals[k], degs[k])) for k in range(3)]
    return K, triple_massey(K, *reps, model=model)
