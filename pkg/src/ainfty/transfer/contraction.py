"""Contractions of a (co)chain complex onto its (co)homology."""

from __future__ import annotations

from dataclasses import dataclass

from ..complexes import ChainComplex, GradedMap
from ..exactla import Eliminator, SparseMatrix


@dataclass
class Contraction:
    """Strong deformation retract data ``(big, small, proj, incl, htpy)``.

    ``proj`` and ``incl`` have degree 0.  ``htpy`` moves one step against
    the differential, so that ``htpy d + d htpy = incl proj - id``.
    """

    big: ChainComplex
    small: ChainComplex
    proj: GradedMap
    incl: GradedMap
    htpy: GradedMap

    @property
    def field(self):
        return self.big.field

    def is_zero_htpy(self) -> bool:
        return self.htpy.is_zero()


class _DegreeData:
    __slots__ = ("kind", "vec", "pre", "hidx")

    def __init__(self):
        self.kind: dict[int, str] = {}
        self.vec: dict[int, dict] = {}
        self.pre: dict[int, dict] = {}     # for boundaries: a preimage under d
        self.hidx: dict[int, int] = {}     # for homology classes: index in the small complex


def homology_contraction(C: ChainComplex) -> Contraction:
    """Contract ``C`` onto its homology (zero differential).

    For each degree the outgoing differential is column-reduced, reusing the
    pivots of the incoming one (clearing).  Every basis vector ``e_j`` is then
    paired with a triangular replacement of leading index ``j``: a chain that
    is not a cycle, a boundary with a chosen preimage, or a homology
    representative.  The homotopy inverts ``d`` on boundaries and vanishes on
    the other two parts.
    """
    F = C.field
    step = C.step
    sp = C.space
    degrees = sorted(C.dims, reverse=(step < 0))
    data: dict[int, _DegreeData] = {}
    # per degree q: lows of the reduced incoming matrix -> (R column, V column)
    incoming: dict[int, dict[int, tuple[dict, dict]]] = {q: {} for q in degrees}
    for q in degrees:
        dd = _DegreeData()
        cleared = incoming[q]
        e = Eliminator(C.diff(q), skip=cleared.keys())
        out_lows: dict[int, tuple[dict, dict]] = {}
        for low, j in e.pivots.items():
            out_lows[low] = (e.R[j], e.V[j])
        for j in range(C.dim(q)):
            if j in cleared:
                r, v = cleared[j]
                dd.kind[j] = "B"
                dd.vec[j] = r
                dd.pre[j] = v
            elif j in e.R:
                dd.kind[j] = "D"
                dd.vec[j] = e.V[j]
            else:
                dd.kind[j] = "H"
                dd.vec[j] = e.V[j]
        nxt = q + step
        if nxt in incoming:
            incoming[nxt] = out_lows
        elif out_lows:
            raise ValueError("differential lands outside the complex")
        data[q] = dd
    # homology indices in leading-index order
    hdims, hlabels = {}, {}
    for q in sorted(data):
        dd = data[q]
        hs = sorted(j for j, k in dd.kind.items() if k == "H")
        for n, j in enumerate(hs):
            dd.hidx[j] = n
        hdims[q] = len(hs)
        hlabels[q] = [C.labels[q][j] for j in hs]
    small = ChainComplex(hdims, {}, hlabels, step=step, field=F)
    ssp = small.space

    def decompose(q: int, x: dict) -> dict[int, object]:
        """Coefficients of local vector ``x`` in the triangular basis of degree q."""
        dd = data[q]
        x = dict(x)
        coeffs = {}
        while x:
            j = max(x)
            v = dd.vec[j]
            c = F.div(x[j], v[j])
            coeffs[j] = c
            F.sub_multiple(x, c, v)
        return coeffs

    def split_by_degree(vec: dict) -> dict[int, dict]:
        out: dict[int, dict] = {}
        for g, x in vec.items():
            q, i = sp.local(g)
            out.setdefault(q, {})[i] = x
        return out

    def proj_vec(vec):
        out = {}
        for q, x in split_by_degree(vec).items():
            dd = data[q]
            for j, c in decompose(q, x).items():
                if dd.kind[j] == "H":
                    out[ssp.glob(q, dd.hidx[j])] = c
        return out

    def htpy_vec(vec):
        out: dict = {}
        for q, x in split_by_degree(vec).items():
            dd = data[q]
            tgt = q - step
            for j, c in decompose(q, x).items():
                if dd.kind[j] == "B":
                    pre = {sp.glob(tgt, i): v for i, v in dd.pre[j].items()}
                    F.sub_multiple(out, c, pre)
        return out

    incl_cols = {}
    for q, dd in data.items():
        for j, n in dd.hidx.items():
            incl_cols[ssp.glob(q, n)] = {sp.glob(q, i): v for i, v in dd.vec[j].items()}

    one = F.one
    proj = GradedMap(sp, ssp, 0, lambda g: proj_vec({g: one}), field=F, vector_fn=proj_vec)
    incl = GradedMap(ssp, sp, 0, incl_cols, field=F)
    htpy = GradedMap(sp, sp, -step, lambda g: htpy_vec({g: one}), field=F, vector_fn=htpy_vec)
    return Contraction(C, small, proj, incl, htpy)


def trivial_contraction(C: ChainComplex) -> Contraction:
    """Identity contraction of a complex with zero differential onto itself."""
    if C.d:
        raise ValueError("trivial contraction needs a zero differential")
    F = C.field
    sp = C.space
    ident = {g: {g: F.one} for g in range(len(sp))}
    small = ChainComplex(C.dims, {}, C.labels, step=C.step, field=F)
    return Contraction(C, small, GradedMap(sp, small.space, 0, ident, field=F),
                       GradedMap(small.space, sp, 0, ident, field=F),
                       GradedMap(sp, sp, -C.step, {}, field=F))


@dataclass
class ContractionReport:
    violations: dict[str, list[int]]

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def __bool__(self):
        return self.ok

    def summary(self) -> str:
        if self.ok:
            return "all side conditions hold"
        bad = [f"{k} (degrees {v})" for k, v in self.violations.items() if v]
        return "violated: " + ", ".join(bad)


IDENTITIES = ("pi iota = id", "pi phi = 0", "phi iota = 0", "phi phi = 0", "phi d + d phi = iota pi - id")


def verify_contraction(c: Contraction) -> ContractionReport:
    """Check the five side conditions as exact matrix identities per degree."""
    C, N = c.big, c.small
    F = C.field
    step = C.step
    viol = {k: [] for k in IDENTITIES}
    degs = sorted(set(C.dims) | set(N.dims))
    for q in degs:
        P = c.proj.block(q)
        I = c.incl.block(q)
        H = c.htpy.block(q)
        Hn = c.htpy.block(q + step)  # leaves degree q+step, lands in q
        Hback = c.htpy.block(q - step)
        if not (P @ I) == SparseMatrix.identity(N.dim(q), F):
            viol["pi iota = id"].append(q)
        if not (c.proj.block(q - step) @ H).is_zero():
            viol["pi phi = 0"].append(q)
        if not (H @ I).is_zero():
            viol["phi iota = 0"].append(q)
        if not (Hback @ H).is_zero():
            viol["phi phi = 0"].append(q)
        lhs = Hn @ C.diff(q) + C.diff(q - step) @ H
        rhs = I @ P - SparseMatrix.identity(C.dim(q), F)
        if lhs != rhs:
            viol["phi d + d phi = iota pi - id"].append(q)
        if N.d:
            raise ValueError("small complex must have zero differential")
    return ContractionReport(viol)
