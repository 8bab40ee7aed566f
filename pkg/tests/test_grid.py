import numpy as np
import pytest
from hypothesis import given, strategies as st

from deltadelta.errors import InvalidMeshError, MeshIncompatibilityError
from deltadelta.grid import build_grid, grid_from_N, interior_indices

from conftest import A, B


def test_reference_mesh_n10():
    g = build_grid(A, B, 15)
    assert g.h == pytest.approx(0.1, abs=1e-15)
    assert g.node(1) == pytest.approx(-0.10, abs=1e-15)
    assert g.node(15) == pytest.approx(1.30, abs=1e-15)
    assert g.node(8) == pytest.approx(0.6, abs=1e-15)
    assert g.node(8) == pytest.approx((A + B) / 2, abs=1e-15)


def test_two_cells():
    g = build_grid(0, 1, 2)
    np.testing.assert_allclose(g.nodes, [0.25, 0.75], rtol=0, atol=0)


@pytest.mark.parametrize("N, M", [(10, 15), (30, 45), (90, 135)])
def test_grid_from_N(N, M):
    g = grid_from_N(A, B, N)
    assert g.M == M
    assert g.h == pytest.approx(1 / N, rel=1e-15)
    assert g.scale == N


def test_unit_interval():
    assert grid_from_N(0, 1, 7).M == 7


@pytest.mark.parametrize("args", [(1.0, 1.0, 4), (1.0, 0.0, 4), (0.0, 1.0, 1), (0.0, 1.0, 2.5)])
def test_invalid_mesh(args):
    with pytest.raises(InvalidMeshError):
        build_grid(*args)


def test_incompatible_N():
    with pytest.raises(MeshIncompatibilityError):
        grid_from_N(A, B, 7)
    with pytest.raises(MeshIncompatibilityError):
        grid_from_N(0, 1.0000001, 10)


def test_interior_reference_window():
    g = build_grid(A, B, 15)
    # x_m = -0.2 + 0.1 m: x_2 = 0.0 ... x_14 = 1.2
    idx = interior_indices(g, 0.0, 1.2)
    np.testing.assert_array_equal(idx + 1, np.arange(2, 15))


def test_interior_full_and_empty():
    g = build_grid(0, 1, 4)
    np.testing.assert_array_equal(interior_indices(g, 0.0, 1.0), np.arange(4))
    assert interior_indices(g, 0.9, 0.95).size == 0
    with pytest.raises(InvalidMeshError):
        interior_indices(g, -0.1, 0.5)


def test_cells_partition():
    g = build_grid(A, B, 45)
    cells = [g.cell(m) for m in range(1, g.M + 1)]
    assert cells[0].lo == pytest.approx(A)
    assert cells[-1].hi == pytest.approx(B)
    for prev, cur in zip(cells, cells[1:]):
        assert cur.lo == prev.hi
    for m, c in enumerate(cells, start=1):
        assert c.hi - c.lo == pytest.approx(g.h, rel=1e-12)
        assert c.midpoint == pytest.approx(g.node(m), abs=1e-15)


def test_nodes_read_only():
    g = build_grid(0, 1, 4)
    with pytest.raises(ValueError):
        g.nodes[0] = 1.0


finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)


@given(a=finite, length=st.floats(min_value=1e-3, max_value=1e3), M=st.integers(2, 2000))
def test_mesh_invariants(a, length, M):
    b = a + length
    if not b > a:
        return
    g = build_grid(a, b, M)
    ulp = np.spacing(max(abs(a), abs(b)))
    assert abs(g.h * M - (b - a)) <= 2 * np.spacing(b - a) + 2 * ulp
    assert abs(g.nodes[0] - a - g.h / 2) <= 4 * ulp
    assert abs(b - g.nodes[-1] - g.h / 2) <= 4 * ulp
    assert np.max(np.abs(g.nodes + g.nodes[::-1] - (a + b))) <= 4 * ulp
    assert np.all(np.diff(g.nodes) > 0)
    np.testing.assert_allclose(np.diff(g.nodes), g.h, rtol=1e-9, atol=4 * ulp)


@given(N=st.sampled_from([10, 30, 50, 70, 90, 810]))
def test_build_and_from_N_agree(N):
    g1 = grid_from_N(A, B, N)
    g2 = build_grid(A, B, g1.M)
    np.testing.assert_array_equal(g1.nodes, g2.nodes)
