"""Reduction of chain hopping sums under a two-term amplitude recurrence.

Chain amplitudes are postulated to satisfy

    alpha_{j+1} = c alpha_j - alpha_{j-1}

with c = sqrt(3) + 1 for particle-like excitations and c = -(sqrt(3) - 1)
for hole-like ones.  Under this relation every distance-k bilinear sum
collapses to a multiple of the occupancy sum,

    sum_j (conj(alpha_{j+k}) alpha_j + c.c.) = lambda_k sum_j |alpha_j|^2,

where lambda_0 = 2, lambda_1 = c and lambda_{k+1} = c lambda_k -
lambda_{k-1}.  Since c^2 - 2 = 2c for both coefficient values, lambda_2 =
2 lambda_1, so adding second-neighbour hopping at half the
nearest-neighbour strength and opposite sign cancels the reduced hopping
entirely: -lambda_1 + lambda_2 / 2 = 0.

Sign convention: with the hole coefficient -(sqrt(3) - 1), the reduced
nearest-neighbour term -J lambda_1 N becomes +(sqrt(3) - 1) J N, matching
the hole shift applied by :func:`jchm.spectrum.effective_params`.

The characteristic roots r + 1/r = c are real for the particle coefficient
(larger root about 2.297, so amplitudes grow geometrically) and unimodular
for the hole coefficient (|lambda_k| <= 2 for all k, windows stay bounded).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectrum import ExcitationKind

_SQRT3 = math.sqrt(3.0)

# beyond ~200 sites the particle amplitudes overflow double precision
PARTICLE_WINDOW_MAX = 200
WINDOW_MAX = 4096


def recurrence_coefficient(kind: ExcitationKind) -> float:
    """Two-term recurrence coefficient c for the given excitation kind."""
    if kind is ExcitationKind.PARTICLE:
        return _SQRT3 + 1.0
    if kind is ExcitationKind.HOLE:
        return -(_SQRT3 - 1.0)
    raise ValueError(f"no recurrence is defined for kind {kind!r}")


@dataclass(frozen=True)
class AnsatzTable:
    """Distance-k reduction coefficients lambda_0..lambda_K for one kind."""

    kind: ExcitationKind
    c: float
    lam: tuple[float, ...]

    @property
    def max_distance(self) -> int:
        return len(self.lam) - 1


@dataclass(frozen=True)
class WindowCheckReport:
    """Finite-window residual of the hopping-sum reduction identity."""

    kind: ExcitationKind
    length: int
    seeds: tuple[complex, complex]
    residual: float
    scale: float

    @property
    def relative_residual(self) -> float:
        return self.residual / max(self.scale, 1.0)


def build_table(kind: ExcitationKind, max_distance: int) -> AnsatzTable:
    """Reduction coefficients up to the given neighbour distance (K >= 2)."""
    if max_distance < 2:
        raise ValueError(f"max_distance must be >= 2, got {max_distance}")
    c = recurrence_coefficient(kind)
    lam = [2.0, c]
    for _ in range(max_distance - 1):
        lam.append(c * lam[-1] - lam[-2])
    return AnsatzTable(kind=kind, c=c, lam=tuple(lam))


def second_neighbor_residual(lambda_1: float, lambda_2: float) -> float:
    """|−lambda_1 + lambda_2 / 2|, the leftover hopping weight when a
    second-neighbour term at strength +J/2 is added to the chain."""
    return abs(-lambda_1 + 0.5 * lambda_2)


def cancellation_residual(kind: ExcitationKind) -> float:
    """Residual of the second-neighbour cancellation; 0 for both kinds."""
    table = build_table(kind, 2)
    return second_neighbor_residual(table.lam[1], table.lam[2])


def window_identity_check(
    kind: ExcitationKind,
    length: int,
    seeds: tuple[complex, complex],
) -> WindowCheckReport:
    """Check the nearest-neighbour reduction on a finite amplitude window.

    Generates alpha_0..alpha_{L-1} from the two seeds by the recurrence and
    compares the bilinear hopping sum

        T = sum_{j=0}^{L-2} (conj(alpha_j) alpha_{j+1} + c.c.)

    against its reduced form.  On a finite window the identity picks up
    boundary terms: for interior sites alpha_{j+1} + alpha_{j-1} =
    c alpha_j; multiplying by conj(alpha_j), adding the conjugate and
    summing j = 1..L-2 telescopes to

        2 T - P_0 - P_{L-2} = 2 c sum_{j=1}^{L-2} |alpha_j|^2

    with P_j = 2 Re(conj(alpha_j) alpha_{j+1}).  Hence

        T = c sum_{j=1}^{L-2} |alpha_j|^2
            + Re(conj(alpha_0) alpha_1) + Re(conj(alpha_{L-2}) alpha_{L-1})

    and the report's residual is the absolute mismatch of that equality,
    with scale = max_j |alpha_j|^2.
    """
    a0, a1 = complex(seeds[0]), complex(seeds[1])
    if a0 == 0 and a1 == 0:
        raise ValueError("seed amplitudes must not both be zero")
    if not 3 <= length <= WINDOW_MAX:
        raise ValueError(f"window length must be in [3, {WINDOW_MAX}], got {length}")
    c = recurrence_coefficient(kind)
    if kind is ExcitationKind.PARTICLE and length > PARTICLE_WINDOW_MAX:
        raise ValueError(
            "particle amplitudes grow geometrically; windows longer than "
            f"{PARTICLE_WINDOW_MAX} sites overflow double precision"
        )

    amps = np.empty(length, dtype=np.complex128)
    amps[0], amps[1] = a0, a1
    for j in range(1, length - 1):
        amps[j + 1] = c * amps[j] - amps[j - 1]

    hop_sum = 2.0 * float(np.sum((np.conj(amps[:-1]) * amps[1:]).real))
    occupancy_interior = float(np.sum(np.abs(amps[1:-1]) ** 2))
    boundary = float(
        (np.conj(amps[0]) * amps[1]).real + (np.conj(amps[-2]) * amps[-1]).real
    )
    residual = abs(hop_sum - c * occupancy_interior - boundary)
    scale = float(np.max(np.abs(amps) ** 2))
    return WindowCheckReport(
        kind=kind, length=length, seeds=(a0, a1), residual=residual, scale=scale
    )
