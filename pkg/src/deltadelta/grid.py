"""Regular midpoint mesh on an interval (a, b).

The interval is cut into M cells of width h = (b - a) / M and the nodes are
the cell midpoints x_m = a + (m - 1/2) h, m = 1..M, so that a and b are
themselves midpoints of the (infinite) regular grid.

Mathematical labels m are 1-based (``Grid.node``, ``Grid.cell``); numpy
arrays such as ``Grid.nodes`` are 0-based as usual.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidMeshError, MeshIncompatibilityError

INTEGRAL_RTOL = 1e-9


@dataclass(frozen=True)
class Cell:
    index: int
    lo: float
    hi: float

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


@dataclass(frozen=True)
class Grid:
    a: float
    b: float
    M: int
    h: float
    nodes: np.ndarray = field(repr=False, compare=False)
    N: int | None = None

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def scale(self) -> float:
        """Mesh density 1/h; equals N for meshes built from N."""
        return float(self.N) if self.N is not None else 1.0 / self.h

    def node(self, m: int) -> float:
        if not 1 <= m <= self.M:
            raise IndexError(f"node label {m} outside 1..{self.M}")
        return float(self.nodes[m - 1])

    def cell(self, m: int) -> Cell:
        if not 1 <= m <= self.M:
            raise IndexError(f"cell label {m} outside 1..{self.M}")
        # closed forms keep neighbouring cells sharing the same float endpoint
        return Cell(m, self.a + (m - 1) * self.h, self.a + m * self.h)

    def cell_edges(self) -> np.ndarray:
        edges = self.a + np.arange(self.M + 1) * self.h
        edges[-1] = self.b
        return edges

    def gaps(self) -> tuple[np.ndarray, np.ndarray]:
        """Distances (x_m - a, b - x_m) computed without cancellation."""
        m = np.arange(1, self.M + 1)
        return (m - 0.5) * self.h, (self.M - m + 0.5) * self.h


def build_grid(a: float, b: float, M: int) -> Grid:
    a = float(a)
    b = float(b)
    if not (np.isfinite(a) and np.isfinite(b)) or b <= a:
        raise InvalidMeshError(f"need a < b, got a={a}, b={b}", field="b")
    if int(M) != M or M < 2:
        raise InvalidMeshError(f"need an integer cell count M >= 2, got {M}", field="M")
    M = int(M)
    h = (b - a) / M
    nodes = a + (np.arange(1, M + 1) - 0.5) * h
    nodes.flags.writeable = False
    return Grid(a, b, M, h, nodes)


def grid_from_N(a: float, b: float, N: int) -> Grid:
    """Mesh with h = 1/N; (b - a) N must be a whole number of cells."""
    if int(N) != N or N < 1:
        raise InvalidMeshError(f"N must be a positive integer, got {N}", field="N")
    N = int(N)
    cells = (float(b) - float(a)) * N
    M = int(round(cells))
    if M < 2 or abs(cells - M) > INTEGRAL_RTOL * max(abs(cells), 1.0):
        raise MeshIncompatibilityError(
            f"(b - a) * N = {cells!r} is not an integer >= 2 "
            f"(a={a}, b={b}, N={N})",
            field="N",
        )
    g = build_grid(a, b, M)
    return Grid(g.a, g.b, g.M, g.h, g.nodes, N)


def interior_indices(g: Grid, lo: float, hi: float) -> np.ndarray:
    """0-based positions of the nodes with lo <= x_m <= hi.

    Nodes that sit on a window end up to rounding (within 1e-9 h) count as
    inside.
    """
    if not (g.a <= lo < hi <= g.b):
        raise InvalidMeshError(
            f"interior window [{lo}, {hi}] must satisfy a <= lo < hi <= b "
            f"for [{g.a}, {g.b}]",
            field="interior",
        )
    slack = 1e-9 * g.h
    return np.flatnonzero((g.nodes >= lo - slack) & (g.nodes <= hi + slack))
