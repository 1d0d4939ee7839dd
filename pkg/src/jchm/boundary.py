"""Mott-lobe boundaries and the critical hopping of the reduced chain.

Chemical potentials are always energy differences of lower-branch dressed
levels,

    mu_particle(n) = E_P(n+1, -) - E_P(n, -)      add one excitation
    mu_hole(n)     = E_H(n, -)   - E_H(n-1, -)    remove one excitation

with the zero-excitation energy exactly 0; no pre-simplified closed form is
ever evaluated.  For zero detuning and n = 1 the differences reduce to

    (mu_p - omega_c)/g = -(sqrt3+1) J/g - sqrt((2+sqrt3) J^2/(2g^2) + 2)
                                        + sqrt((2+sqrt3) J^2/(2g^2) + 1)
    (mu_h - omega_c)/g = (sqrt3-1) J/(2g) - sqrt((2-sqrt3) J^2/(2g^2) + 1)

which the test suite verifies on a grid.  All ratio-level functions run at
g = 1 and depend only on (delta/g, J/g, n); curves report (mu - omega_c)/g.

The particle branch is the upper lobe boundary, the hole branch the lower
one; they meet at the critical hopping J_c (the lobe tip).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .spectrum import Branch, ExcitationKind, SystemParams, dressed_level, ground_energy


class NoCrossingError(RuntimeError):
    """The particle and hole chemical potentials do not cross in the bracket."""

    def __init__(self, delta_over_g, n, bracket, gap_lo, gap_hi):
        self.delta_over_g = delta_over_g
        self.n = n
        self.bracket = bracket
        self.gap_endpoints = (gap_lo, gap_hi)
        super().__init__(
            f"no particle-hole crossing for delta/g={delta_over_g:g}, lobe n={n} "
            f"in J/g bracket [{bracket[0]:g}, {bracket[1]:g}] "
            f"(gap {gap_lo:.6g} .. {gap_hi:.6g})"
        )


@dataclass(frozen=True)
class LobeQuery:
    """Point query on lobe n: detuning and hopping in units of g."""

    delta_over_g: float
    n: int = 1
    j_over_g: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"lobe index must be >= 1, got {self.n}")
        if self.j_over_g < 0.0:
            raise ValueError(f"hopping must be >= 0, got {self.j_over_g}")


class BoundarySample(NamedTuple):
    j_over_g: float
    mu_particle: float
    mu_hole: float


@dataclass(frozen=True)
class BoundaryCurve:
    """Sampled lobe boundary: (J/g, (mu_p - omega_c)/g, (mu_h - omega_c)/g)."""

    delta_over_g: float
    n: int
    samples: tuple[BoundarySample, ...]


@dataclass(frozen=True)
class CriticalPoint:
    """Solved lobe tip: J_c/g where the two boundaries meet."""

    delta_over_g: float
    n: int
    jc_over_g: float
    mu_at_crossing: float
    solver_residual: float


def particle_mu(params: SystemParams, j_hop: float, n: int = 1) -> float:
    """Energy to add one excitation on top of n per site (absolute units)."""
    upper = dressed_level(n + 1, Branch.LOWER, ExcitationKind.PARTICLE, j_hop, params)
    lower = dressed_level(n, Branch.LOWER, ExcitationKind.PARTICLE, j_hop, params)
    return upper.energy - lower.energy


def hole_mu(params: SystemParams, j_hop: float, n: int = 1) -> float:
    """Energy to remove one excitation from n per site (absolute units)."""
    top = dressed_level(n, Branch.LOWER, ExcitationKind.HOLE, j_hop, params)
    if n == 1:
        below = ground_energy(ExcitationKind.HOLE, j_hop, params)
    else:
        below = dressed_level(
            n - 1, Branch.LOWER, ExcitationKind.HOLE, j_hop, params
        ).energy
    return top.energy - below


def _ratio_params(delta_over_g: float) -> SystemParams:
    # g = 1 and omega_z = 0: (mu - omega_c)/g depends only on delta/g
    return SystemParams(omega_c=delta_over_g, omega_z=0.0, g=1.0)


def mu_particle(q: LobeQuery) -> float:
    """Upper lobe boundary (mu_particle - omega_c)/g at the query point."""
    p = _ratio_params(q.delta_over_g)
    return particle_mu(p, q.j_over_g, q.n) - p.omega_c


def mu_hole(q: LobeQuery) -> float:
    """Lower lobe boundary (mu_hole - omega_c)/g at the query point."""
    p = _ratio_params(q.delta_over_g)
    return hole_mu(p, q.j_over_g, q.n) - p.omega_c


def boundary_curve(
    delta_over_g: float, n: int, j_grid: Sequence[float]
) -> BoundaryCurve:
    """Sample both lobe boundaries on a strictly ascending J/g grid."""
    grid = [float(j) for j in j_grid]
    if not grid:
        raise ValueError("hopping grid must not be empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("hopping grid must be strictly ascending")
    samples = tuple(
        BoundarySample(
            j,
            mu_particle(LobeQuery(delta_over_g, n, j)),
            mu_hole(LobeQuery(delta_over_g, n, j)),
        )
        for j in grid
    )
    return BoundaryCurve(delta_over_g=delta_over_g, n=n, samples=samples)


def lobe_gap(delta_over_g: float, n: int, j_over_g: float) -> float:
    """Lobe width mu_particle - mu_hole at one point; positive inside."""
    q = LobeQuery(delta_over_g, n, j_over_g)
    return mu_particle(q) - mu_hole(q)


def critical_hopping(
    delta_over_g: float,
    n: int = 1,
    *,
    j_min: float = 0.0,
    j_max: float = 2.0,
    scan_points: int = 64,
    j_tol: float = 1e-12,
) -> CriticalPoint:
    """Smallest hopping where the particle and hole boundaries cross.

    Scans ``scan_points`` intervals of [j_min, j_max] for the first sign
    change of the gap, then bisects it down to ``j_tol``.  Raises
    :class:`NoCrossingError` when the scan finds no sign change.
    """
    if not j_min < j_max:
        raise ValueError(f"need j_min < j_max, got [{j_min}, {j_max}]")
    grid = np.linspace(j_min, j_max, scan_points + 1)
    gaps = [lobe_gap(delta_over_g, n, j) for j in grid]

    bracket = None
    for a, b, ga, gb in zip(grid, grid[1:], gaps, gaps[1:]):
        if (ga > 0.0) != (gb > 0.0):
            bracket = (float(a), float(b), ga, gb)
            break
    if bracket is None:
        raise NoCrossingError(delta_over_g, n, (j_min, j_max), gaps[0], gaps[-1])

    lo, hi, g_lo, _ = bracket
    positive_low = g_lo > 0.0
    for _ in range(200):
        if hi - lo <= j_tol:
            break
        mid = 0.5 * (lo + hi)
        if (lobe_gap(delta_over_g, n, mid) > 0.0) == positive_low:
            lo = mid
        else:
            hi = mid

    jc = 0.5 * (lo + hi)
    q = LobeQuery(delta_over_g, n, jc)
    mu_p, mu_h = mu_particle(q), mu_hole(q)
    return CriticalPoint(
        delta_over_g=delta_over_g,
        n=n,
        jc_over_g=jc,
        mu_at_crossing=0.5 * (mu_p + mu_h),
        solver_residual=abs(mu_p - mu_h),
    )


def jc_vs_detuning(
    delta_grid: Sequence[float],
    n: int = 1,
    *,
    j_max: float = 2.0,
) -> list[CriticalPoint | None]:
    """Critical hopping for each detuning on a strictly ascending grid.

    Detunings whose gap never changes sign in the bracket yield ``None``
    instead of aborting the sweep.
    """
    deltas = [float(d) for d in delta_grid]
    if not deltas:
        raise ValueError("detuning grid must not be empty")
    if any(b <= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("detuning grid must be strictly ascending")
    points: list[CriticalPoint | None] = []
    for d in deltas:
        try:
            points.append(critical_hopping(d, n, j_max=j_max))
        except NoCrossingError:
            points.append(None)
    return points
