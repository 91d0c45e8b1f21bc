import json

import pytest

from ainfty.complexes import Filtration, SimplicialComplex, parse_filtration, rips_filtration, sphere_boundary
from ainfty.exactla import GF, QQ, DimensionError, SparseMatrix, inverse, random_invertible, random_matrix
from ainfty.persist import (
    CLOSED, HALF_OPEN, Barcode, ConsistencyError, PersistenceModule, RankTable, RankTableError,
    barcode_from_ranks, barcodes_from_records, frobenius_defect, homology_barcode, homology_module,
    interval_module, module_barcode, persistent_betti, ranks_table,
)
from oracles import dense_identity, dense_matmul, dense_rank


def _p(F):
    return getattr(F, "p", 0)


def random_module(rng, F, max_dim=6, max_N=8):
    N = rng.randint(0, max_N)
    dims = [rng.randint(0, max_dim) for _ in range(N + 1)]
    maps = [random_matrix(dims[i + 1], dims[i], rng, rng.choice([0.2, 0.5, 0.9]), F) for i in range(N)]
    return PersistenceModule(dims, maps, F)


def oracle_ranks(m):
    p = _p(m.field)
    out = {}
    for i in range(m.N + 1):
        comp = dense_identity(m.dims[i], p)
        out[(i, i)] = m.dims[i]
        for j in range(i + 1, m.N + 1):
            f = m.maps[j - 1].to_dense() if m.dims[j] else []
            comp = dense_matmul(f, comp, p) if f and comp else []
            out[(i, j)] = dense_rank(comp, p) if comp and comp[0] else 0
    return out


def scrambled_interval_module(rng, F, intervals, N):
    m = interval_module(intervals, N, F)
    g = [random_invertible(d, rng, F) for d in m.dims]
    maps = [g[k + 1] @ m.maps[k] @ inverse(g[k]) for k in range(N)]
    return PersistenceModule(m.dims, maps, F)


# -- rank tables --------------------------------------------------------------


def test_identity_and_zero_modules():
    one = SparseMatrix.identity(1)
    m = PersistenceModule([1, 1], [one])
    d = ranks_table(m)
    assert d.as_rows() == [[1, 1], [0, 1]]
    assert barcode_from_ranks(d).intervals == {(0, 1): 1}
    assert str(barcode_from_ranks(d)) == "{[0,inf)}"
    z = PersistenceModule([1, 1], [SparseMatrix.zeros(1, 1)])
    dz = ranks_table(z)
    assert dz[0, 1] == 0 and dz[0, 0] == dz[1, 1] == 1
    assert str(barcode_from_ranks(dz)) == "{[0,1), [1,inf)}"


def test_out_of_range_reads_zero():
    d = ranks_table(PersistenceModule([2], []))
    assert d[-1, 0] == 0 and d[0, 1] == 0 and d[0, 0] == 2


def test_ranks_match_dense_oracle(rng, field):
    for _ in range(40):
        m = random_module(rng, field, max_dim=4, max_N=5)
        d = ranks_table(m)
        for k, v in oracle_ranks(m).items():
            assert d[k] == v


def test_shape_mismatch_rejected():
    with pytest.raises(DimensionError):
        PersistenceModule([1, 2], [SparseMatrix.zeros(1, 1)])
    with pytest.raises(DimensionError):
        PersistenceModule([1, 2], [])


# -- barcodes -----------------------------------------------------------------


def test_counting_property(rng, field):
    for _ in range(60):
        m = random_module(rng, field)
        d = ranks_table(m)
        bc = barcode_from_ranks(d)
        assert bc.rank_table() == d


def test_planted_decomposition_recovered(rng, field):
    for _ in range(40):
        N = rng.randint(0, 5)
        ivs = []
        for _ in range(rng.randint(0, 5)):
            b = rng.randint(0, N)
            ivs.append((b, rng.randint(b, N)))
        m = scrambled_interval_module(rng, field, ivs, N)
        expected = {}
        for iv in ivs:
            expected[iv] = expected.get(iv, 0) + 1
        assert module_barcode(m).intervals == expected


def test_corrupted_table_rejected():
    d = RankTable(1, {(0, 0): 1, (1, 1): 1, (0, 1): 2})
    with pytest.raises(RankTableError):
        barcode_from_ranks(d)


def test_rendering_flavors_and_json():
    bc = Barcode(3, {(0, 3): 1, (1, 2): 2}, HALF_OPEN, degree=1)
    assert bc.rendered() == [(0, None, 1), (1, 3, 2)]
    closed = Barcode(3, bc.intervals, CLOSED, degree=1, kind="Delta")
    assert closed.rendered() == [(0, 3, 1), (1, 2, 2)]
    assert str(closed) == "{[0,3], [1,2]x2}"
    recs = json.loads(bc.to_json())
    assert recs[0] == {"degree": 1, "birth": 0, "death": None, "multiplicity": 1,
                       "flavor": "half-open", "kind": "H"}
    assert barcodes_from_records(recs, 3)[1] == bc
    assert barcodes_from_records(closed.to_records(), 3)[1] == closed


def test_invalid_barcode_entries():
    with pytest.raises(ValueError):
        Barcode(2, {(1, 0): 1})
    with pytest.raises(ValueError):
        Barcode(2, {(0, 1): 1}, flavor="open")


# -- filtrations --------------------------------------------------------------


def test_point_barcode():
    f = parse_filtration("0\n")
    assert homology_barcode(f, 0).intervals == {(0, 0): 1}
    assert str(homology_barcode(f, 0)) == "{[0,inf)}"


def test_circle_born_then_filled():
    f = parse_filtration("0 1 @ 1\n1 2 @ 1\n0 2 @ 1\n0 1 2 @ 3\n")
    bc = homology_barcode(f, 1)
    assert bc.rendered() == [(1, 3, 1)]
    assert persistent_betti(f, 1, 1, 2) == 1
    assert persistent_betti(f, 1, 1, 3) == 0


def test_circle_filled_at_step_one():
    f = parse_filtration("0 1\n1 2\n0 2\n0 1 2 @ 1\n")
    assert persistent_betti(f, 1, 0, 0) == 1
    assert persistent_betti(f, 1, 0, 1) == 0


def test_constant_filtration_gives_betti():
    K = sphere_boundary([0, 1, 2, 3])
    f = Filtration.constant(K, 3)
    for p, b in enumerate([1, 0, 1]):
        for i in range(3):
            for j in range(i, 3):
                assert persistent_betti(f, p, i, j) == b


def test_hexagon_rips_counting():
    hexagon = [("1", "0"), ("0.5", "0.866"), ("-0.5", "0.866"), ("-1", "0"), ("-0.5", "-0.866"),
               ("0.5", "-0.866")]
    f = rips_filtration(hexagon, ["0.1", "0.51", "0.9"], max_dim=2)
    bc = homology_barcode(f, 1)
    assert bc.intervals == {(1, 1): 1}
    m = homology_module(f, 1)
    assert bc.rank_table() == ranks_table(m)


def test_diagonal_recovers_betti(rng):
    from ainfty.complexes import betti_numbers
    for _ in range(10):
        tops = [rng.sample(range(6), rng.randint(1, 4)) for _ in range(rng.randint(1, 5))]
        K = SimplicialComplex(tops)
        level = {s: rng.randint(0, 3) for s in K.simplices()}
        # make the levels monotone by pushing each simplex after its faces
        for s in sorted(K.simplices(), key=len):
            if len(s) > 1:
                level[s] = max([level[s]] + [level[s[:i] + s[i + 1:]] for i in range(len(s))])
        f = Filtration(K, level, 4)
        for p in range(K.dim + 1):
            bc = homology_barcode(f, p)
            for i in range(4):
                assert bc.covering(i, i) == (betti_numbers(f.at(i))[p] if p <= f.at(i).dim else 0)


# -- Frobenius ----------------------------------------------------------------


def test_frobenius_trivial_cases():
    I = SparseMatrix.identity(3)
    assert frobenius_defect(I, I, I) == 0
    Z = SparseMatrix.zeros(3, 3)
    assert frobenius_defect(I, Z, I) == 0


def test_frobenius_matches_dense(rng, field):
    p = _p(field)
    for _ in range(100):
        a, b, c, d = (rng.randint(0, 5) for _ in range(4))
        A = random_matrix(a, b, rng, 0.5, field)
        B = random_matrix(b, c, rng, 0.5, field)
        C = random_matrix(c, d, rng, 0.5, field)
        v = frobenius_defect(A, B, C)
        assert v >= 0

        def r(m):
            rows = m.to_dense()
            return dense_rank(rows, p) if rows and rows[0] else 0

        assert v == r(B) - r(A @ B) - r(B @ C) + r(A @ B @ C)


def test_frobenius_shape_error():
    with pytest.raises(DimensionError):
        frobenius_defect(SparseMatrix.zeros(2, 3), SparseMatrix.zeros(2, 2), SparseMatrix.zeros(2, 2))
