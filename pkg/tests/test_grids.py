import json
from fractions import Fraction

import pytest

from ainfty.complexes import ParseError, betti_numbers
from ainfty.grids import (
    DEFAULT_CELL_CAP, GridError, LinkSpec, box_sphere_cells, build_link_complement, curve_cells,
    grid_complement, higher_sphere_complement, link_fixture, load_link_spec,
)


def ring(z, lo=1, hi=3, R=8):
    """Square ring through cell centres in the plane ``z = const``."""
    c = lambda k: Fraction(2 * k + 1, 2 * R)
    return [(c(lo), c(lo), c(z)), (c(hi), c(lo), c(z)), (c(hi), c(hi), c(z)), (c(lo), c(hi), c(z))]


def test_empty_link_gives_three_sphere():
    G = grid_complement(4, 3, [])
    assert betti_numbers(G.complex) == (1, 0, 0, 1)


def test_single_ring_complement_is_a_solid_torus():
    G = build_link_complement(LinkSpec([ring(3)], "1/32", 8))
    assert betti_numbers(G.complex) == (1, 1, 0, 0)
    assert len(G.meridians) == 1


@pytest.mark.parametrize("name, betti", [("unlink2", (1, 2, 1, 0)), ("hopf", (1, 2, 1, 0)),
                                         ("unlink3", (1, 3, 2, 0)), ("borromean", (1, 3, 2, 0))])
def test_fixture_complements_obey_duality(name, betti):
    spec = link_fixture(name)
    G = build_link_complement(spec)
    assert betti_numbers(G.complex) == betti
    assert len(G.meridians) == len(spec.curves)
    assert G.complex.dim == 3


def test_touching_components_rejected():
    with pytest.raises(GridError, match="within one cell"):
        build_link_complement(LinkSpec([ring(3), ring(4)], "0", 8))


def test_boundary_contact_rejected():
    with pytest.raises(GridError, match="boundary"):
        build_link_complement(LinkSpec([ring(3, lo=0)], "0", 8))


def test_cell_cap():
    with pytest.raises(GridError, match="cap"):
        grid_complement(13, 3, [])
    assert DEFAULT_CELL_CAP == 12 ** 3


def test_exact_coordinates(tmp_path):
    spec = LinkSpec([[("1/4", "0.25", "0.5"), ("0.75", "1/4", "0.5"), ("0.5", "0.75", "0.5")]], "0.01")
    assert spec.curves[0][0] == (Fraction(1, 4), Fraction(1, 4), Fraction(1, 2))
    with pytest.raises(ParseError):
        LinkSpec([[(0.25, 0.25, 0.5), (0.75, 0.25, 0.5), (0.5, 0.75, 0.5)]], "0")
    with pytest.raises(ParseError):
        LinkSpec([[("0", "0.5", "0.5"), ("0.5", "0.5", "0.5"), ("0.5", "0.7", "0.5")]], "0")
    with pytest.raises(ParseError):
        LinkSpec([[("0.5", "0.5", "0.5"), ("0.6", "0.5", "0.5")]], "0")
    path = tmp_path / "link.json"
    path.write_text(json.dumps(spec.to_dict()))
    again = load_link_spec(path)
    assert again.curves == spec.curves and again.tube_radius == spec.tube_radius
    path.write_text("{\"tube_radius\": \"0\"}")
    with pytest.raises(ParseError):
        load_link_spec(path)


def test_curve_cells_follow_the_polyline():
    cells = curve_cells(ring(3), 8, Fraction(0))
    # a 3x3 square frame of cells: 8 cells, all at z = 3
    assert len(cells) == 8 and {c[2] for c in cells} == {3}
    fat = curve_cells(ring(3), 8, Fraction(1, 8))
    assert cells < fat


def test_box_spheres_are_borromean_circles():
    G = higher_sphere_complement(1, 1, 1, 11)
    assert betti_numbers(G.complex) == (1, 3, 2, 0)
    assert all(m is not None for m in G.meridians)
    for k in range(3):
        cells = box_sphere_cells(1, 1, 1, 11, k)
        assert len({c[k] for c in cells}) == 1


def test_four_dimensional_spheres_hit_the_cap():
    with pytest.raises(GridError, match="cap"):
        higher_sphere_complement(1, 1, 2, 11)
    with pytest.raises(GridError):
        higher_sphere_complement(1, 1, 2, 6)
