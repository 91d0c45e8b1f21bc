import json
import random

import pytest

from ainfty.complexes import (
    Cochain, SimplicialComplex, coboundary, cochain_complex, cohomology_representatives,
    cup_on_cochains, presentation_complex, product_complex, pullback_cochain, sphere_boundary,
    torus7, wedge_s1_s2_s1,
)
from ainfty.exactla import GF, QQ, SparseMatrix, rank, solve, using_field
from ainfty.grids import GridError, build_link_complement, link_fixture
from ainfty.massey import (
    CohomologyModel, MasseyError, alexander_duals, evaluate_on_loop, higher_sphere_link,
    hopf_cup_check, link_pipeline, mu3_membership_check, triple_massey,
)
from ainfty.transfer.builders import random_complex
from ainfty.transfer.htt import transfer_algebra

# x, y, z with the single relator [[x, y], z]: all cup products vanish and
# <x*, y*, z*> is nonzero (the relator has a nonzero degree-3 Magnus coefficient)
COMMUTATOR_RELATOR = [1, 2, -1, -2, 3, 2, 1, -2, -1, -3]


def generator_loops(n):
    return [[0, 2 * k - 1, 2 * k] for k in range(1, n + 1)]


@pytest.fixture(scope="module")
def commutator():
    with using_field(QQ):
        K = presentation_complex(3, [COMMUTATOR_RELATOR])
        M = CohomologyModel(K)
        duals = alexander_duals(M, generator_loops(3))
        reps = [M.cochain(1, M.representative(v, 1)) for v in duals]
        yield K, M, duals, reps


@pytest.fixture(scope="module")
def commutator_times_circle(commutator):
    """``X x S^1`` with ``a = x*``, ``b = y* x u`` (degree 2), ``c = z*``."""
    K, M, _, reps = commutator
    with using_field(QQ):
        S1 = sphere_boundary([0, 1, 2])
        P, m = product_complex(K, S1)
        pr1, pr2 = (lambda v: v // m), (lambda v: v % m)
        u = Cochain(1, {S1.index[(0, 1)]: QQ.one})
        a = pullback_cochain(P, K, pr1, reps[0])
        b = cup_on_cochains(P, pullback_cochain(P, K, pr1, reps[1]), pullback_cochain(P, S1, pr2, u))
        c = pullback_cochain(P, K, pr1, reps[2])
        yield P, CohomologyModel(P), (a, b, c)


def oracle_zero_in_massey(K, a, b, c, F):
    """Decide ``0 in <a,b,c>`` from cocycle spaces and coboundary ranks only.

    ``0`` lies in the product iff ``w = x c -+ a y`` is a coboundary plus
    ``a z + z' c`` for cocycles ``z, z'``; this avoids any contraction.
    """
    p, q, r = a.degree, b.degree, c.degree
    D = cochain_complex(K, field=F)

    def bound(v, k):
        x = solve(D.diff(k - 1), dict(v.values), reverse=True)
        assert x is not None
        return Cochain(k - 1, x)

    x = bound(cup_on_cochains(K, a, b, F), p + q)
    y = bound(cup_on_cochains(K, b, c, F), q + r)
    w = dict(cup_on_cochains(K, x, c, F).values)
    for k, v in cup_on_cochains(K, a, y, F).values.items():
        w[k] = F.sub(w.get(k, 0), v) if p % 2 == 0 else F.add(w.get(k, 0), v)
    gens = [cup_on_cochains(K, a, z, F) for z in cohomology_representatives(K, q + r - 1, F)]
    gens += [cup_on_cochains(K, z, c, F) for z in cohomology_representatives(K, p + q - 1, F)]
    deg = p + q + r - 1
    B = D.diff(deg - 1)
    base = B.hstack(SparseMatrix.from_columns(K.count(deg), [dict(g.values) for g in gens], F,
                                              cols=len(gens)))
    with_w = base.hstack(SparseMatrix.from_columns(K.count(deg), [w], F, cols=1))
    return rank(with_w) == rank(base)


# -- basic behaviour ----------------------------------------------------------


def test_zero_input_gives_zero_product():
    K = torus7()
    M = CohomologyModel(K)
    a, b = cohomology_representatives(K, 1)
    t = triple_massey(K, Cochain(1, {}), b, b, model=M)
    assert t.defined and t.representative == {} and t.contains_zero


def test_non_cocycle_rejected():
    K = torus7()
    with pytest.raises(MasseyError, match="cocycle"):
        triple_massey(K, Cochain(1, {0: 1}), Cochain(1, {}), Cochain(1, {}))
    with pytest.raises(MasseyError):
        triple_massey(K, [1], Cochain(1, {}), Cochain(1, {}))


def test_undefined_when_cup_is_nonzero():
    K = torus7()
    a, b = cohomology_representatives(K, 1)
    t = triple_massey(K, a, b, a)
    assert not t.defined
    with pytest.raises(MasseyError):
        t.contains_zero
    M = CohomologyModel(K)
    cls = [M.class_of(M.vector(z), 1) for z in (a, b, a)]
    with pytest.raises(MasseyError):
        mu3_membership_check(M.algebra, K, *cls, model=M)


@pytest.mark.parametrize("K, rank_", [(torus7(), 1), (wedge_s1_s2_s1(), 0)])
def test_cup_rank(K, rank_):
    assert hopf_cup_check(K, GF(2)) == rank_
    assert hopf_cup_check(K, QQ) == rank_


def test_meridian_duals_are_dual(commutator):
    K, M, duals, _ = commutator
    for j, d in enumerate(duals):
        rep = M.representative(d, 1)
        assert [evaluate_on_loop(M, rep, m) for m in generator_loops(3)] == [int(j == k) for k in range(3)]


def test_duals_need_matching_count(commutator):
    _, M, _, _ = commutator
    with pytest.raises(GridError):
        alexander_duals(M, generator_loops(2))


# -- a nontrivial product -----------------------------------------------------


def test_commutator_relator_massey(commutator):
    K, M, duals, reps = commutator
    t = triple_massey(K, *reps, model=M)
    assert t.defined and not t.contains_zero
    assert t.indeterminacy.dim == 0
    assert oracle_zero_in_massey(K, *reps, QQ) is False
    res = mu3_membership_check(M.algebra, K, *duals, model=M)
    assert res.holds and res.mu3


def test_swapped_order_is_trivial(commutator):
    K, M, _, reps = commutator
    t = triple_massey(K, reps[0], reps[0], reps[1], model=M)
    assert t.defined and t.contains_zero == oracle_zero_in_massey(K, reps[0], reps[0], reps[1], QQ)


def test_coset_independent_of_bounding_cochains(commutator, rng):
    K, M, _, reps = commutator
    a, b, c = reps
    base = triple_massey(K, a, b, c, model=M)
    h1 = cohomology_representatives(K, 1)
    for _ in range(5):
        shifts = []
        for v in (base.x, base.y):
            z = dict(v)
            for h in h1:
                QQ.sub_multiple(z, QQ.coerce(rng.randint(-3, 3)), M.vector(h))
            w = Cochain(0, {i: QQ.coerce(rng.randint(-2, 2)) for i in range(K.count(0))})
            QQ.sub_multiple(z, QQ.one, M.vector(coboundary(K, w)))
            shifts.append({k: x for k, x in z.items() if x})
        other = triple_massey(K, a, b, c, model=M, bounding=tuple(shifts))
        assert other.same_coset(base)


def test_bad_bounding_rejected(commutator):
    K, M, _, reps = commutator
    base = triple_massey(K, *reps, model=M)
    wrong = dict(base.x)
    wrong[next(iter(wrong))] = QQ.coerce(99)
    with pytest.raises(MasseyError):
        triple_massey(K, *reps, model=M, bounding=(wrong, base.y))


def test_even_middle_degree_membership(commutator_times_circle):
    P, M, (a, b, c) = commutator_times_circle
    t = triple_massey(P, a, b, c, model=M)
    assert t.defined and not t.contains_zero
    assert oracle_zero_in_massey(P, a, b, c, QQ) is False
    cls = [M.class_of(M.vector(z), z.degree) for z in (a, b, c)]
    res = mu3_membership_check(M.algebra, P, *cls, degrees=(1, 2, 1), model=M)
    assert res.holds and res.mu3


def test_membership_via_computed_structure(commutator):
    K, M, duals, _ = commutator
    A = transfer_algebra(M.contraction, M.cup, n_max=3)
    assert mu3_membership_check(A, K, *duals, model=M).holds


def test_membership_on_random_complexes():
    rng = random.Random(11)
    checked = 0
    for _ in range(500):
        K = random_complex(rng, max_simplices=22, n_vertices=8, max_dim=4)
        M = CohomologyModel(K, QQ)
        degs = [d for d in range(1, K.dim + 1) if M.h_dim(d)]
        if not degs:
            continue
        for _ in range(4):
            ds = [rng.choice(degs) for _ in range(3)]
            cls = [{rng.randrange(M.h_dim(d)): QQ.one} for d in ds]
            try:
                res = mu3_membership_check(M.algebra, K, *cls, degrees=ds, model=M)
            except MasseyError:
                continue
            assert res.holds
            reps = [M.cochain(d, M.representative(v, d)) for v, d in zip(cls, ds)]
            assert res.triple.contains_zero == oracle_zero_in_massey(K, *reps, QQ)
            checked += 1
    assert checked > 50


# -- link complements ---------------------------------------------------------


@pytest.mark.parametrize("name, rank_", [("unlink2", 0), ("hopf", 1)])
def test_link_cup_rank(name, rank_):
    G = build_link_complement(link_fixture(name))
    assert hopf_cup_check(G.complex, QQ) == rank_


def test_hopf_report_has_undefined_massey():
    rep = link_pipeline(link_fixture("hopf"), QQ)
    assert rep.cup_rank >= 1 and rep.massey_defined is False


def test_unlink_versus_borromean():
    u = link_pipeline(link_fixture("unlink3"), QQ)
    b = link_pipeline(link_fixture("borromean"), QQ)
    assert u.betti == b.betti == (1, 3, 2, 0)
    assert u.cup_rank == b.cup_rank == 0
    assert u.zero_in_massey is True and u.mu3_in_indeterminacy is True and u.membership is True
    assert b.zero_in_massey is False and b.mu3_nonzero and b.membership is True
    d = json.loads(b.to_json())
    assert d["verdict"] == "0 not in <a,b,c>" and d["mu3"]["nonzero"] is True
    assert [a["status"] for a in d["attempts"]][-1] == "ok"


def test_escalation_records_rejected_resolutions():
    rep = link_pipeline(link_fixture("borromean"), QQ, resolutions=[8, 10, 12])
    assert rep.resolution == 12
    assert [a["resolution"] for a in rep.attempts] == [8, 10, 12]
    with pytest.raises(GridError):
        link_pipeline(link_fixture("borromean"), QQ, resolutions=[8])


def test_borromean_over_gf2():
    rep = link_pipeline(link_fixture("borromean"), GF(2))
    assert rep.zero_in_massey is False and rep.membership


def test_box_sphere_borromean():
    K, t = higher_sphere_link(1, 1, 1, 11, QQ)
    assert t.defined and not t.contains_zero
    assert isinstance(K, SimplicialComplex)


def test_higher_spheres_gated():
    with pytest.raises(GridError):
        higher_sphere_link(1, 1, 2, 11)
