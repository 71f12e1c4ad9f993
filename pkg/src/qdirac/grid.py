"""Spacetime lattice sampling, central differences, and Riemann-sum quadrature.

A grid axis with a periodic flag generates N points covering one full
period (no duplicated endpoint), which makes the plain Riemann sum exact
for commensurate trigonometric integrands and lets the difference
stencil wrap.  Layout is row-major (it, ix, iy, iz) and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spinor import FourVector, QSpinor4

@dataclass(frozen=True, slots=True)
class SpacetimeGrid:
    """Rectangular lattice: origin plus counts x spacing per axis."""

    origin: FourVector
    spacing: tuple[float, float, float, float]
    counts: tuple[int, int, int, int]
    periodic: tuple[bool, bool, bool, bool] = (False, False, False, False)

    def __post_init__(self) -> None:
        spacing = tuple(float(s) for s in self.spacing)
        counts = tuple(int(c) for c in self.counts)
        periodic = tuple(bool(p) for p in self.periodic)
        if len(spacing) != 4 or len(counts) != 4 or len(periodic) != 4:
            raise ValueError("spacing, counts and periodic must have 4 entries")
        if any(s <= 0 for s in spacing):
            raise ValueError("grid spacings must be positive")
        if any(c < 1 for c in counts):
            raise ValueError("grid counts must be >= 1")
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "periodic", periodic)

    def axis(self, i: int) -> np.ndarray:
        o = self.origin.as_array()[i]
        return o + self.spacing[i] * np.arange(self.counts[i])

    def axes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return tuple(self.axis(i) for i in range(4))

    @property
    def cell_volume(self) -> float:
        """Spatial cell volume dx*dy*dz."""
        return self.spacing[1] * self.spacing[2] * self.spacing[3]

    def point(self, it: int, ix: int, iy: int, iz: int) -> FourVector:
        ts, xs, ys, zs = self.axes()
        return FourVector(ts[it], xs[ix], ys[iy], zs[iz])

    def refined(self, factor: int = 2) -> "SpacetimeGrid":
        """Grid with all spacings divided by `factor`.

        Periodic axes keep their extent (counts multiply, origin fixed);
        non-periodic axes keep their counts, so their window shrinks
        about its own center.  Either way the difference stencils probe
        the same region of the field with a halved step.
        """
        spacing = tuple(s / factor for s in self.spacing)
        counts = []
        origin = list(self.origin.as_array())
        for i, (n, per) in enumerate(zip(self.counts, self.periodic)):
            if per:
                counts.append(factor * n)
            else:
                counts.append(n)
                center = origin[i] + 0.5 * (n - 1) * self.spacing[i]
                origin[i] = center - 0.5 * (n - 1) * spacing[i]
        return SpacetimeGrid(FourVector.from_array(origin), spacing, tuple(counts), self.periodic)

    def to_dict(self) -> dict:
        return {
            "origin": list(self.origin.as_array()),
            "spacing": list(self.spacing),
            "counts": list(self.counts),
            "periodic": list(self.periodic),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SpacetimeGrid":
        return cls(
            origin=FourVector.from_array(d.get("origin", (0.0, 0.0, 0.0, 0.0))),
            spacing=tuple(d["spacing"]),
            counts=tuple(d["counts"]),
            periodic=tuple(d.get("periodic", (False, False, False, False))),
        )


@dataclass(frozen=True, slots=True)
class SampledField:
    """Field values on a grid, stored as symplectic arrays of shape
    (nt, nx, ny, nz, 4)."""

    grid: SpacetimeGrid
    psi0: np.ndarray
    psi1: np.ndarray

    def __post_init__(self) -> None:
        shape = self.grid.counts + (4,)
        for name in ("psi0", "psi1"):
            a = np.ascontiguousarray(getattr(self, name), dtype=complex)
            if a.shape != shape:
                raise ValueError(f"{name} must have shape {shape}, got {a.shape}")
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    def qspinor(self, it: int, ix: int, iy: int, iz: int) -> QSpinor4:
        return QSpinor4(self.psi0[it, ix, iy, iz], self.psi1[it, ix, iy, iz])


def sample(field, grid: SpacetimeGrid) -> SampledField:
    """Evaluate a field on every lattice point.

    Uses the field's vectorized evaluate_grid when available, otherwise
    falls back to pointwise evaluate(x)."""
    if hasattr(field, "evaluate_grid"):
        return field.evaluate_grid(grid)
    shape = grid.counts + (4,)
    psi0 = np.zeros(shape, dtype=complex)
    psi1 = np.zeros(shape, dtype=complex)
    ts, xs, ys, zs = grid.axes()
    for it, t in enumerate(ts):
        for ix, x in enumerate(xs):
            for iy, y in enumerate(ys):
                for iz, z in enumerate(zs):
                    s = field.evaluate(FourVector(t, x, y, z))
                    psi0[it, ix, iy, iz] = s.psi0
                    psi1[it, ix, iy, iz] = s.psi1
    return SampledField(grid, psi0, psi1)


def central_diff(values: np.ndarray, axis: int, spacing: float, periodic: bool = False) -> np.ndarray:
    """Second-order central difference (f[+1] - f[-1]) / 2h along `axis`.

    Periodic axes wrap the stencil; otherwise boundary slots are NaN so
    downstream reductions can mask them out.  Requires >= 3 points.
    """
    n = values.shape[axis]
    if n < 3:
        raise ValueError(f"central difference needs >= 3 points on axis {axis}, got {n}")
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    if periodic:
        fwd = np.roll(values, -1, axis=axis)
        bwd = np.roll(values, 1, axis=axis)
        return (fwd - bwd) / (2.0 * spacing)
    out = np.full_like(values, np.nan, dtype=np.result_type(values, float))
    inner = [slice(None)] * values.ndim
    lo = [slice(None)] * values.ndim
    hi = [slice(None)] * values.ndim
    inner[axis] = slice(1, -1)
    hi[axis] = slice(2, None)
    lo[axis] = slice(None, -2)
    out[tuple(inner)] = (values[tuple(hi)] - values[tuple(lo)]) / (2.0 * spacing)
    return out


def integrate_spatial(values: np.ndarray, grid: SpacetimeGrid):
    """Riemann sum times the cell volume over a fixed-time slice.

    `values` must have the spatial lattice shape (nx, ny, nz) possibly
    followed by extra component axes, which are preserved."""
    expected = grid.counts[1:]
    if values.shape[:3] != expected:
        raise ValueError(f"expected leading shape {expected}, got {values.shape[:3]}")
    total = values.sum(axis=(0, 1, 2)) * grid.cell_volume
    if np.isscalar(total) or total.shape == ():
        return total.item() if hasattr(total, "item") else total
    return total
