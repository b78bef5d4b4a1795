"""Exact cohomology of line bundles on smooth complete toric surfaces.

h0 counts the lattice points of the divisor polytope {m : <m, v_e> >= -c_e},
h2 comes from duality as h0 of the adjoint-twisted dual divisor, and h1 is
filled in from the Euler characteristic.  All arithmetic is integral; numpy
is used only for the bounding-box scan.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .grothendieck import picard
from .intlinalg import solve2
from .lattice_fan import Fan

__all__ = ["CohomologyVector", "line_bundle_cohomology", "ext_line_bundles", "h0"]


@dataclass(frozen=True)
class CohomologyVector:
    h0: int
    h1: int
    h2: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.h0, self.h1, self.h2)

    @property
    def euler(self) -> int:
        return self.h0 - self.h1 + self.h2


@lru_cache(maxsize=None)
def _ray_matrix(fan: Fan) -> np.ndarray:
    return np.array(fan.rays, dtype=np.int64)


def _polytope_vertices(fan: Fan, coeffs) -> list[tuple[int, int]]:
    """Candidate vertices: one per maximal cone, from its two ray equalities."""
    n = fan.n
    out = []
    for i in range(n):
        j = (i + 1) % n
        m = solve2(fan.rays[i], fan.rays[j], (-coeffs[i], -coeffs[j]))
        out.append(m)
    return out


def h0(fan: Fan, coeffs) -> int:
    """Number of lattice points m with <m, v_e> >= -c_e for every ray."""
    return _h0_cached(fan, tuple(int(c) for c in coeffs))


@lru_cache(maxsize=1 << 17)
def _h0_cached(fan: Fan, coeffs: tuple[int, ...]) -> int:
    verts = _polytope_vertices(fan, coeffs)
    xs = [v[0] for v in verts]
    ys = [v[1] for v in verts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x0 > x1 or y0 > y1:
        return 0
    gx, gy = np.meshgrid(
        np.arange(x0, x1 + 1, dtype=np.int64),
        np.arange(y0, y1 + 1, dtype=np.int64),
        indexing="ij",
    )
    pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
    pairing = pts @ _ray_matrix(fan).T
    mask = (pairing >= -np.array(coeffs, dtype=np.int64)).all(axis=1)
    return int(mask.sum())


def line_bundle_cohomology(fan: Fan, coeffs) -> CohomologyVector:
    """Exact (h0, h1, h2) of O(D) for D = sum(c_e D_e) over the split field."""
    coeffs = tuple(int(c) for c in coeffs)
    lat = picard(fan)
    coords = lat.divisor_coords(coeffs)
    chi = lat.chi(coords)
    dim0 = h0(fan, coeffs)
    dual = tuple(-1 - c for c in coeffs)  # adjoint divisor minus D
    dim2 = h0(fan, dual)
    dim1 = dim0 + dim2 - chi
    if dim1 < 0:
        raise ArithmeticError(
            f"negative h1 = {dim1} for divisor {coeffs}: h0={dim0}, h2={dim2}, chi={chi}"
        )
    return CohomologyVector(dim0, dim1, dim2)


def ext_line_bundles(fan: Fan, first, second) -> CohomologyVector:
    """Ext groups Ext^r(O(D1), O(D2)) = H^r(O(D2 - D1))."""
    diff = tuple(int(b) - int(a) for a, b in zip(first, second))
    if len(diff) != fan.n:
        raise ValueError(f"expected {fan.n} coefficients")
    return line_bundle_cohomology(fan, diff)
