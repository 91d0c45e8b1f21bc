import json

import pytest

from ainfty.apersist import (
    APersistenceInput, PreconditionError, compatibility_check, delta_barcode, delta_group_dim,
    delta_table, from_filtration, input_from_dict, input_to_dict, kernel_drop_instance,
    kernel_submodule_barcode, load_input, random_instance, save_input, sleep_wake_diagnostic,
)
from ainfty.complexes import Filtration, ParseError, torus7, wedge_s1_s2_s1
from ainfty.exactla import GF, SparseMatrix, using_field
from ainfty.persist import CLOSED, homology_barcode, module_barcode
from oracles import dense_identity, dense_matmul, dense_nullspace, dense_rank


def _p(F):
    return getattr(F, "p", 0)


def oracle_D(inp, i, j):
    """Intersection of kernels as the kernel of the stacked matrices ``Delta^k f^{i,k}``."""
    p = _p(inp.field)
    n = inp.dims[i]
    if n == 0:
        return 0
    comp = dense_identity(n, p)
    stacked = []
    for k in range(i, j + 1):
        if k > i:
            if inp.dims[k] == 0:
                return 0
            comp = dense_matmul(inp.maps[k - 1].to_dense(), comp, p)
        d = inp.deltas[k].to_dense()
        if d:
            stacked.extend(dense_matmul(d, comp, p))
    kern = dense_nullspace(stacked, n, p)
    if not kern:
        return 0
    cols = [[sum(row[c] * v[c] for c in range(n)) for row in comp] for v in kern]
    rows = [list(r) for r in zip(*cols)]
    return dense_rank(rows, p)


def test_kernel_drop_example():
    inp = kernel_drop_instance(9, (5,))
    bc = delta_barcode(inp)
    assert bc.flavor == CLOSED
    assert bc.rendered() == [(0, 4, 1), (6, 9, 1)]
    rep = compatibility_check(inp)
    assert not rep.ok and rep.index == 4 and rep.witness == {0: 1}
    flags = sleep_wake_diagnostic(inp)
    assert len(flags) == 1
    assert flags[0].support == [0, 1, 2, 3, 4, 6, 7, 8, 9]
    with pytest.raises(PreconditionError):
        kernel_submodule_barcode(inp)


def test_spectators_are_not_flagged():
    inp = kernel_drop_instance(9, (5,), spectators=2)
    assert delta_barcode(inp).intervals == {(0, 4): 1, (0, 9): 2, (6, 9): 1}
    assert len(sleep_wake_diagnostic(inp)) == 1


def test_diagonal_is_kernel_dimension(rng, field):
    for _ in range(20):
        inp = random_instance(rng, compatible=False, field=field)
        for i in range(inp.N + 1):
            assert delta_group_dim(inp, i, i) == inp.kernel(i).dim


def test_table_matches_dense_oracle(rng, field):
    for _ in range(25):
        inp = random_instance(rng, compatible=rng.random() < 0.5, field=field)
        D = delta_table(inp)
        for i in range(inp.N + 1):
            for j in range(i, inp.N + 1):
                assert D[i, j] == oracle_D(inp, i, j) == delta_group_dim(inp, i, j)


def test_table_monotone_and_nonnegative(rng):
    for _ in range(40):
        inp = random_instance(rng, compatible=False)
        D = delta_table(inp)
        for i in range(inp.N + 1):
            for j in range(i, inp.N):
                assert D[i, j] >= D[i, j + 1]
                if i > 0:
                    assert D[i, j] >= D[i - 1, j]
        delta_barcode(inp)


def test_all_kernel_case_is_homology_barcode(rng, field):
    for _ in range(15):
        inp = random_instance(rng, field=field)
        zero = APersistenceInput(inp.dims, inp.maps, [SparseMatrix.zeros(0, d, field) for d in inp.dims],
                                 field=field)
        bc = delta_barcode(zero)
        ref = module_barcode(inp.module)
        assert bc.intervals == ref.intervals
        assert kernel_submodule_barcode(zero).intervals == ref.intervals
        assert compatibility_check(zero).ok
        assert not sleep_wake_diagnostic(zero)


def test_single_space():
    inp = APersistenceInput.from_matrices([], [[[1, 0, 0]]], dims=[3])
    assert delta_barcode(inp).intervals == {(0, 0): 2}
    assert kernel_submodule_barcode(inp).intervals == {(0, 0): 2}


def test_three_step_hand_instance():
    # V = F^2 at each step, identity maps; Delta^1 kills only e0, others vanish
    I = [[1, 0], [0, 1]]
    inp = APersistenceInput.from_matrices([I, I], [[], [[0, 1]], []], dims=[2, 2, 2])
    assert [delta_group_dim(inp, 0, j) for j in range(3)] == [2, 1, 1]
    assert delta_group_dim(inp, 1, 2) == 1
    assert delta_barcode(inp).intervals == {(0, 2): 1, (0, 0): 1, (2, 2): 1}
    assert len(sleep_wake_diagnostic(inp)) == 1


def test_compatible_pathways_agree(rng, field):
    for _ in range(30):
        inp = random_instance(rng, field=field)
        assert compatibility_check(inp).ok
        assert kernel_submodule_barcode(inp) == delta_barcode(inp)
        assert not sleep_wake_diagnostic(inp)


def test_bad_range():
    inp = kernel_drop_instance(3, ())
    with pytest.raises(IndexError):
        delta_group_dim(inp, 2, 1)
    with pytest.raises(IndexError):
        delta_group_dim(inp, 0, 4)


def test_json_round_trip(tmp_path, rng):
    inp = random_instance(rng, N=4, compatible=False)
    again = input_from_dict(json.loads(json.dumps(input_to_dict(inp))))
    assert delta_table(again) == delta_table(inp)
    path = tmp_path / "bundle.json"
    save_input(kernel_drop_instance(), path)
    assert delta_barcode(load_input(path)).rendered() == [(0, 4, 1), (6, 9, 1)]
    path.write_text("{\"dims\": [1]}")
    with pytest.raises(ParseError):
        load_input(path)


@pytest.mark.parametrize("K, bars", [(torus7(), {}), (wedge_s1_s2_s1(), {(1, 1): 1})])
def test_filtration_separates_torus_and_wedge(K, bars):
    with using_field(GF(2)):
        level = {s: (0 if len(s) <= 2 else 1) for s in K.simplices()}
        f = Filtration(K, level)
        inp = from_filtration(f, 2, 2, basepoint=0)
        assert delta_barcode(inp).intervals == bars
        assert homology_barcode(f, 2).intervals == {(1, 1): 1}
