"""Single-site Jaynes-Cummings spectra and their hopping-shifted variants.

Conventions (hbar = 1): a cavity mode of frequency ``omega_c`` couples with
strength ``g > 0`` to a two-level system of splitting ``omega_z``; the
detuning is ``omega_c - omega_z``.  The n-excitation doublet mixes
|n, down> with |n-1, up> and is split by chi(n) = sqrt(detuning^2 + 4 g^2 n).

On a chain, the amplitude recurrence implemented in :mod:`jchm.ansatz`
collapses the nearest-neighbour hopping sum into a multiple of the total
boson number, so chain excitations see the bare single-site spectrum at a
shifted cavity frequency:

    particle-like:  omega_c -> omega_c - (sqrt(3) + 1) J
    hole-like:      omega_c -> omega_c + (sqrt(3) - 1) J

with J >= 0 the hopping strength.  The zero-excitation state carries
neither a boson nor a qubit excitation, so its energy is exactly zero for
every kind and every J.

The coupling g = 0 is rejected everywhere: the mixing angle is
discontinuous at zero detuning in that limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

_SQRT3 = math.sqrt(3.0)


class Branch(Enum):
    """Upper (+) or lower (-) member of an excitation doublet."""

    LOWER = "lower"
    UPPER = "upper"

    @property
    def sign(self) -> float:
        return 1.0 if self is Branch.UPPER else -1.0


class ExcitationKind(Enum):
    """Which hopping shift applies: none (bare), particle-like, or hole-like."""

    BARE = "bare"
    PARTICLE = "particle"
    HOLE = "hole"


@dataclass(frozen=True)
class SystemParams:
    """Cavity frequency, qubit splitting and coupling strength, common units."""

    omega_c: float
    omega_z: float
    g: float

    def __post_init__(self):
        if not self.g > 0.0:
            raise ValueError(f"coupling g must be positive, got {self.g}")

    @property
    def delta(self) -> float:
        """Detuning omega_c - omega_z (always derived, never stored)."""
        return self.omega_c - self.omega_z

    def scaled(self, s: float) -> SystemParams:
        """All frequencies multiplied by s > 0; every energy scales by s."""
        if not s > 0.0:
            raise ValueError(f"scale factor must be positive, got {s}")
        return SystemParams(self.omega_c * s, self.omega_z * s, self.g * s)


@dataclass(frozen=True)
class DressedLevel:
    """One member of the n-excitation doublet with its mixing coefficients.

    ``sin_half_theta`` is the weight of |n, down> in the upper state; the
    two coefficients satisfy sin^2 + cos^2 = 1 and are shared by both
    branches of the doublet.
    """

    n: int
    branch: Branch
    energy: float
    sin_half_theta: float
    cos_half_theta: float


def chi(n: int, delta_eff: float, g: float) -> float:
    """Doublet splitting sqrt(delta_eff^2 + 4 g^2 n) of the n-th doublet."""
    if n < 1:
        raise ValueError(f"excitation number must be >= 1, got {n}")
    if not g > 0.0:
        raise ValueError(f"coupling g must be positive, got {g}")
    return math.sqrt(delta_eff * delta_eff + 4.0 * g * g * n)


def hopping_shift(kind: ExcitationKind, j_hop: float) -> float:
    """Cavity-frequency shift produced by the hopping reduction."""
    if kind is ExcitationKind.PARTICLE:
        return -(_SQRT3 + 1.0) * j_hop
    if kind is ExcitationKind.HOLE:
        return (_SQRT3 - 1.0) * j_hop
    return 0.0


def effective_params(
    kind: ExcitationKind, j_hop: float, params: SystemParams
) -> SystemParams:
    """Parameters seen by an excitation of the given kind at hopping j_hop.

    Only omega_c (and therefore the detuning) shifts; omega_z and g are
    untouched.  ``bare`` and j_hop = 0 return the input unchanged.
    """
    if j_hop < 0.0:
        raise ValueError(f"hopping strength must be >= 0, got {j_hop}")
    shift = hopping_shift(kind, j_hop)
    if shift == 0.0:
        return params
    return replace(params, omega_c=params.omega_c + shift)


def dressed_level(
    n: int,
    branch: Branch,
    kind: ExcitationKind,
    j_hop: float,
    params: SystemParams,
) -> DressedLevel:
    """Energy and mixing coefficients of the n-th doublet member.

    Evaluates the bare closed form at ``effective_params(kind, j_hop,
    params)``:

        E(n, +/-) = (n - 1/2) omega_c_eff + omega_z / 2 +/- chi(n) / 2

    with sin(theta/2) = sqrt((1 - delta_eff/chi)/2).  The zero-excitation
    state is not a doublet member; see :func:`ground_energy`.
    """
    if n < 1:
        raise ValueError(f"excitation number must be >= 1, got {n}")
    p = effective_params(kind, j_hop, params)
    split = chi(n, p.delta, p.g)
    energy = (n - 0.5) * p.omega_c + 0.5 * p.omega_z + 0.5 * branch.sign * split
    # split >= |delta| up to rounding; clamp so sqrt never sees -1e-17
    sin_half = math.sqrt(max(0.0, 0.5 * (1.0 - p.delta / split)))
    cos_half = math.sqrt(max(0.0, 0.5 * (1.0 + p.delta / split)))
    return DressedLevel(n, branch, energy, sin_half, cos_half)


def ground_energy(
    kind: ExcitationKind, j_hop: float, params: SystemParams
) -> float:
    """Energy of the zero-excitation state: exactly 0 for every kind.

    With no boson present the hopping shift multiplies zero occupation, so
    it does not act on this state.
    """
    return 0.0


def jc_numeric_check(n: int, params: SystemParams) -> float:
    """Residual between the closed-form doublet and a direct 2x2 eigensolve.

    Builds the single-site block spanned by {|n, down>, |n-1, up>},
    diagonalizes it numerically and returns the largest absolute
    difference from the closed-form energies.  Stays below
    1e-12 * max(1, |E|) in double precision.
    """
    if n < 1:
        raise ValueError(f"excitation number must be >= 1, got {n}")
    coupling = params.g * math.sqrt(n)
    block = np.array(
        [
            [n * params.omega_c, coupling],
            [coupling, (n - 1) * params.omega_c + params.omega_z],
        ]
    )
    numeric = np.linalg.eigvalsh(block)
    closed = np.array(
        [
            dressed_level(n, Branch.LOWER, ExcitationKind.BARE, 0.0, params).energy,
            dressed_level(n, Branch.UPPER, ExcitationKind.BARE, 0.0, params).energy,
        ]
    )
    return float(np.max(np.abs(numeric - closed)))
