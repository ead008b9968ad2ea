"""Space-filling-curve reduction of a box in R^N to the unit interval.

The mapping ``y(x)`` sends ``x in [0,1]`` to the center of a level-``m``
subcube of the search box, ordered along an N-dimensional Hilbert walk.
Consecutive cells share a face, so the mapping is continuous in the
adjacency sense and a Lipschitz function over the box turns into a
Hoelder-continuous function of ``x`` with exponent ``1/N``.

The walk is built by per-level digit recursion: the cell index is split
into ``m`` chunks of ``N`` bits and each chunk is passed through a
Gray-code transform oriented by the (start, end) corners inherited from
the parent level (Butz/Witham construction).  All index arithmetic is
exact integer arithmetic, so the mapping is deterministic bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# cell_of() resolves cells through a float64 input, so the total index
# width must fit the 53-bit mantissa.
MAX_INDEX_BITS = 53


@dataclass(frozen=True)
class CurveSpec:
    """Dimension, approximation depth and bounds of the search box.

    ``dim * depth`` is the total number of index bits; one level-``depth``
    cell has edge ``2**-depth`` per axis in the unit cube.
    """

    dim: int
    depth: int
    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "lower", tuple(float(v) for v in self.lower))
        object.__setattr__(self, "upper", tuple(float(v) for v in self.upper))
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        if len(self.lower) != self.dim or len(self.upper) != self.dim:
            raise ValueError("lower/upper must have exactly dim entries")
        if self.dim * self.depth > MAX_INDEX_BITS:
            raise ValueError(
                f"dim*depth = {self.dim * self.depth} exceeds the "
                f"{MAX_INDEX_BITS}-bit budget for exact cell indexing"
            )
        for lo, hi in zip(self.lower, self.upper):
            if not hi > lo:
                raise ValueError(f"degenerate box edge [{lo}, {hi}]")

    @classmethod
    def unit(cls, dim: int, depth: int) -> "CurveSpec":
        """Spec over the unit cube [0,1]^dim."""
        return cls(dim, depth, (0.0,) * dim, (1.0,) * dim)

    @property
    def total_bits(self) -> int:
        return self.dim * self.depth

    @property
    def cells(self) -> int:
        """Number of level-depth cells along the curve."""
        return 1 << self.total_bits

    @property
    def max_edge(self) -> float:
        """Longest box edge (the ``d`` in the Hoelder constant 4*L*d*sqrt(N))."""
        return max(hi - lo for lo, hi in zip(self.lower, self.upper))


def _gray(i: int) -> int:
    return i ^ (i >> 1)


def _gray_travel(start: int, end: int, mask: int, i: int) -> int:
    # Gray code walking from `start` to `end`: rotate the canonical code so
    # the travelled bit is start^end, then re-anchor at start.
    travel_bit = start ^ end
    modulus = mask + 1
    g = _gray(i) * (travel_bit * 2)
    return ((g | (g // modulus)) & mask) ^ start


def _child_start_end(start: int, end: int, mask: int, i: int) -> tuple[int, int]:
    start_i = max(0, (i - 1) & ~1)
    end_i = min(mask, (i + 1) | 1)
    return (
        _gray_travel(start, end, mask, start_i),
        _gray_travel(start, end, mask, end_i),
    )


def cell_of(x: float, spec: CurveSpec) -> int:
    """Index of the level-m cell containing the curve parameter ``x``.

    ``x = 1`` clamps to the last cell so the right endpoint stays usable.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"curve parameter {x} outside [0, 1]")
    k = int(math.floor(x * spec.cells))
    return min(k, spec.cells - 1)


def map_unit(k: int, spec: CurveSpec) -> np.ndarray:
    """Center of cell ``k`` in the unit cube, following the Hilbert walk.

    Cell 0 sits at the lower corner; consecutive cells differ by one cell
    edge along a single axis.  Each coordinate is an odd multiple of
    ``2**-(depth+1)``.
    """
    if not 0 <= k < spec.cells:
        raise ValueError(f"cell index {k} outside [0, {spec.cells})")
    n, m = spec.dim, spec.depth
    mask = (1 << n) - 1
    start, end = 0, 1 << ((-m - 1) % n)
    coords = [0] * n
    for level in range(m - 1, -1, -1):
        chunk = (k >> (n * level)) & mask
        g = _gray_travel(start, end, mask, chunk)
        for axis in range(n):
            coords[axis] = (coords[axis] << 1) | ((g >> (n - 1 - axis)) & 1)
        start, end = _child_start_end(start, end, mask, chunk)
    half_scale = 2.0 * (1 << m)
    return np.array([(2 * c + 1) / half_scale for c in coords])


def map_to_domain(x: float, spec: CurveSpec) -> np.ndarray:
    """Image ``y(x)`` in the search box of the curve parameter ``x``."""
    u = map_unit(cell_of(x, spec), spec)
    lo = np.asarray(spec.lower)
    hi = np.asarray(spec.upper)
    return lo + (hi - lo) * u
