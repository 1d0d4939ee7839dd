"""Finite-chain reference values by exact diagonalization in fixed sectors.

The chain Hamiltonian (hbar = 1)

    H = omega_c sum_j n_j + omega_z sum_j q_j
        + g sum_j (a_j^dag sigma_j^- + sigma_j^+ a_j)
        - J sum_j (a_j^dag a_{j+1} + a_{j+1}^dag a_j)

conserves the total excitation number N = sum_j (n_j + q_j), so every N
sector is enumerated, assembled and solved independently.  Basis states are
(boson occupations, qubit flags) pairs; bosons are truncated at n_max per
site and raising terms past the cutoff are dropped (hard cutoff), which
makes the truncated spaces nested: the ground energy is non-increasing in
n_max.

Boundary conventions: periodic chains include the wrap-around bond, and for
L = 2 both directed bond terms of the hopping sum are kept, so the single
shared bond is counted twice.  An L = 1 "ring" has no hopping.  Open
boundaries drop the wrap-around bond.

Chemical potentials at filling n come from sector ground energies:
mu_particle = E0(L n + 1) - E0(L n), mu_hole = E0(L n) - E0(L n - 1),
reported as (mu - omega_c)/g.  This plays the role that matrix-product
reference data plays for the infinite chain, at desk scale: a finite ring
need not match the reduced-spectrum boundaries quantitatively.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Sequence

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .spectrum import SystemParams

DENSE_CUTOFF = 2000
DEFAULT_MAX_BYTES = 2 * 1024**3  # 2 GiB


class TruncationWarning(UserWarning):
    """The boson cutoff may visibly truncate the requested sector."""


class SolverError(RuntimeError):
    """The iterative eigensolver did not converge."""

    def __init__(self, message: str, iterations: int):
        self.iterations = iterations
        super().__init__(message)


class SectorSizeError(RuntimeError):
    """A sector exceeds the configured memory ceiling."""

    def __init__(self, dimension: int, estimated_bytes: int, max_bytes: int):
        self.dimension = dimension
        self.estimated_bytes = estimated_bytes
        self.max_bytes = max_bytes
        super().__init__(
            f"sector dimension {dimension} needs about {estimated_bytes} bytes, "
            f"over the ceiling of {max_bytes} bytes"
        )


class BasisState(NamedTuple):
    """Boson occupations and qubit flags (0 down / 1 up), one per site."""

    bosons: tuple[int, ...]
    qubits: tuple[int, ...]

    @property
    def n_total(self) -> int:
        return sum(self.bosons) + sum(self.qubits)


@dataclass(frozen=True)
class ChainSpec:
    """Finite chain: geometry, cutoff, hopping and single-site parameters."""

    length: int
    n_max: int
    params: SystemParams
    j_hop: float = 0.0
    boundary: str = "periodic"

    def __post_init__(self):
        if self.length < 1:
            raise ValueError(f"chain length must be >= 1, got {self.length}")
        if self.n_max < 1:
            raise ValueError(f"boson cutoff must be >= 1, got {self.n_max}")
        if self.j_hop < 0.0:
            raise ValueError(f"hopping must be >= 0, got {self.j_hop}")
        if self.boundary not in ("periodic", "open"):
            raise ValueError(f"boundary must be periodic or open, got {self.boundary!r}")


@dataclass(frozen=True)
class SectorBasis:
    """Ordered basis of one fixed-excitation sector with a position lookup."""

    n_total: int
    states: tuple[BasisState, ...]
    index: dict[BasisState, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        index = {s: i for i, s in enumerate(self.states)}
        if len(index) != len(self.states):
            raise ValueError("basis contains duplicate states")
        bad = [s for s in self.states if s.n_total != self.n_total]
        if bad:
            raise ValueError(f"state {bad[0]} is not in the N={self.n_total} sector")
        object.__setattr__(self, "index", index)

    @property
    def dim(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class SparseHamiltonian:
    """Assembled sector Hamiltonian as (row, col, value) triplets.

    Off-diagonal couplings are emitted in both directions with bit-identical
    values, so the matrix is exactly symmetric; duplicate triplets (the
    doubled L = 2 periodic bond) sum on conversion.
    """

    dim: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    symmetric: bool = True

    @property
    def nnz(self) -> int:
        return len(self.vals)

    def to_coo(self) -> scipy.sparse.coo_matrix:
        return scipy.sparse.coo_matrix(
            (self.vals, (self.rows, self.cols)), shape=(self.dim, self.dim)
        )

    def to_csr(self) -> scipy.sparse.csr_matrix:
        return self.to_coo().tocsr()

    def to_dense(self) -> np.ndarray:
        return self.to_coo().toarray()

    def max_asymmetry(self) -> float:
        m = self.to_csr()
        diff = m - m.T
        return float(np.max(np.abs(diff.toarray()))) if diff.nnz else 0.0


def _capped_compositions(total: int, length: int, cap: int) -> Iterator[tuple[int, ...]]:
    """All length-tuples of integers in [0, cap] summing to total."""
    if length == 0:
        if total == 0:
            yield ()
        return
    lo = max(0, total - cap * (length - 1))
    hi = min(cap, total)
    for head in range(lo, hi + 1):
        for tail in _capped_compositions(total - head, length - 1, cap):
            yield (head,) + tail


def _capped_composition_count(total: int, length: int, cap: int) -> int:
    # inclusion-exclusion over sites forced past the cap
    if total < 0:
        return 0
    count = 0
    for i in range(length + 1):
        rest = total - i * (cap + 1)
        if rest < 0:
            break
        count += (-1) ** i * math.comb(length, i) * math.comb(rest + length - 1, length - 1)
    return count


def sector_dimension(length: int, n_total: int, n_max: int) -> int:
    """Sector size without enumerating it (safe for huge sectors)."""
    if n_total < 0 or n_total > length * (n_max + 1):
        return 0
    return sum(
        math.comb(length, ups) * _capped_composition_count(n_total - ups, length, n_max)
        for ups in range(min(length, n_total) + 1)
    )


def enumerate_sector(length: int, n_total: int, n_max: int) -> SectorBasis:
    """Complete, duplicate-free basis of the N = n_total sector.

    States are ordered lexicographically on (occupations, flags).
    """
    if length < 1 or n_max < 1:
        raise ValueError("need length >= 1 and n_max >= 1")
    if not 0 <= n_total <= length * (n_max + 1):
        raise ValueError(
            f"sector N={n_total} is outside [0, {length * (n_max + 1)}] "
            f"for L={length}, n_max={n_max}"
        )
    states = []
    for ups in range(min(length, n_total) + 1):
        n_bosons = n_total - ups
        for occ in _capped_compositions(n_bosons, length, n_max):
            for positions in itertools.combinations(range(length), ups):
                flags = [0] * length
                for p in positions:
                    flags[p] = 1
                states.append(BasisState(occ, tuple(flags)))
    states.sort()
    return SectorBasis(n_total=n_total, states=tuple(states))


def _bonds(length: int, boundary: str) -> list[tuple[int, int]]:
    if length == 1:
        return []
    if boundary == "open":
        return [(j, j + 1) for j in range(length - 1)]
    return [(j, (j + 1) % length) for j in range(length)]


def build_hamiltonian(spec: ChainSpec, basis: SectorBasis) -> SparseHamiltonian:
    """Assemble the sector Hamiltonian from the basis.

    Every directed term is applied to every basis state, so each coupling
    appears once per direction with the same value; the result is exactly
    symmetric.  Hopping targets past the boson cutoff are dropped.
    """
    wc, wz, g = spec.params.omega_c, spec.params.omega_z, spec.params.g
    j_hop = spec.j_hop
    bonds = _bonds(spec.length, spec.boundary)
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []

    def push(row: int, col: int, val: float) -> None:
        rows.append(row)
        cols.append(col)
        vals.append(val)

    for i, state in enumerate(basis.states):
        nb, q = state.bosons, state.qubits
        push(i, i, wc * sum(nb) + wz * sum(q))
        for site in range(spec.length):
            if q[site] == 1 and nb[site] < spec.n_max:
                # a^dag sigma^-: qubit down, boson up
                target = BasisState(
                    _bump(nb, site, +1), _flip(q, site)
                )
                push(basis.index[target], i, g * math.sqrt(nb[site] + 1))
            if q[site] == 0 and nb[site] > 0:
                # sigma^+ a: boson down, qubit up
                target = BasisState(_bump(nb, site, -1), _flip(q, site))
                push(basis.index[target], i, g * math.sqrt(nb[site]))
        if j_hop != 0.0:
            for u, v in bonds:
                for src, dst in ((v, u), (u, v)):
                    if nb[src] > 0 and nb[dst] < spec.n_max:
                        moved = list(nb)
                        moved[src] -= 1
                        moved[dst] += 1
                        target = BasisState(tuple(moved), q)
                        amp = -j_hop * math.sqrt(nb[src] * (nb[dst] + 1))
                        push(basis.index[target], i, amp)

    return SparseHamiltonian(
        dim=basis.dim,
        rows=np.asarray(rows, dtype=np.int64),
        cols=np.asarray(cols, dtype=np.int64),
        vals=np.asarray(vals, dtype=np.float64),
    )


def _bump(occ: tuple[int, ...], site: int, step: int) -> tuple[int, ...]:
    out = list(occ)
    out[site] += step
    return tuple(out)


def _flip(flags: tuple[int, ...], site: int) -> tuple[int, ...]:
    out = list(flags)
    out[site] = 1 - out[site]
    return tuple(out)


def ground_energy(
    h: SparseHamiltonian,
    tol: float = 1e-10,
    dense_cutoff: int = DENSE_CUTOFF,
    method: str = "auto",
    maxiter: int = 10000,
) -> float:
    """Lowest eigenvalue of the assembled sector Hamiltonian.

    ``auto`` uses a dense solver up to ``dense_cutoff`` and implicitly
    restarted Lanczos (ARPACK, full reorthogonalization of the Krylov
    basis) above it, started from the normalized all-ones vector so results
    are bit-stable run to run.  Dimensions below 3 always go dense (the
    iterative solver needs room for a Krylov basis).
    """
    if method not in ("auto", "dense", "iterative"):
        raise ValueError(f"method must be auto, dense or iterative, got {method!r}")
    if h.dim < 1:
        raise ValueError("empty sector has no ground energy")
    use_dense = method == "dense" or h.dim < 3 or (method == "auto" and h.dim <= dense_cutoff)
    if use_dense:
        return float(np.linalg.eigvalsh(h.to_dense())[0])
    v0 = np.ones(h.dim) / math.sqrt(h.dim)
    try:
        vals = scipy.sparse.linalg.eigsh(
            h.to_csr(), k=1, which="SA", v0=v0, tol=tol, maxiter=maxiter
        )[0]
    except scipy.sparse.linalg.ArpackNoConvergence as exc:
        raise SolverError(
            f"Lanczos iteration did not converge within {maxiter} iterations "
            f"for dimension {h.dim}",
            iterations=maxiter,
        ) from exc
    return float(vals[0])


@dataclass(frozen=True)
class EdResult:
    """Sector ground energies and the derived chemical potentials.

    ``mu_particle_ed`` and ``mu_hole_ed`` are reported as (mu - omega_c)/g.
    """

    spec: ChainSpec
    filling: int
    sector_energies: dict[int, float]
    mu_particle_ed: float
    mu_hole_ed: float


def sector_energies(
    spec: ChainSpec, sectors: Sequence[int], tol: float = 1e-10
) -> dict[int, float]:
    """Ground energy of each requested excitation sector."""
    energies = {}
    for n_tot in sectors:
        basis = enumerate_sector(spec.length, n_tot, spec.n_max)
        h = build_hamiltonian(spec, basis)
        energies[n_tot] = ground_energy(h, tol=tol)
    return energies


def chemical_potentials_ed(spec: ChainSpec, filling: int = 1) -> EdResult:
    """Particle and hole chemical potentials at integer filling.

    Warns when the boson cutoff leaves fewer than two free levels above the
    filling, since the particle sector is then visibly truncated.
    """
    if filling < 1:
        raise ValueError(f"filling must be >= 1, got {filling}")
    if spec.n_max < filling + 2:
        warnings.warn(
            f"boson cutoff n_max={spec.n_max} leaves little room above filling "
            f"{filling}; chemical potentials may be truncation-limited",
            TruncationWarning,
            stacklevel=2,
        )
    n0 = spec.length * filling
    energies = sector_energies(spec, (n0 - 1, n0, n0 + 1))
    mu_p = energies[n0 + 1] - energies[n0]
    mu_h = energies[n0] - energies[n0 - 1]
    wc, g = spec.params.omega_c, spec.params.g
    return EdResult(
        spec=spec,
        filling=filling,
        sector_energies=energies,
        mu_particle_ed=(mu_p - wc) / g,
        mu_hole_ed=(mu_h - wc) / g,
    )


def ensure_sector_fits(
    length: int,
    n_total: int,
    n_max: int,
    max_bytes: int = DEFAULT_MAX_BYTES,
    dense_cutoff: int = DENSE_CUTOFF,
) -> int:
    """Check a sector against the memory ceiling before enumerating it.

    Returns the sector dimension; raises :class:`SectorSizeError` when the
    estimated solver footprint exceeds ``max_bytes``.
    """
    dim = sector_dimension(length, n_total, n_max)
    if dim <= dense_cutoff:
        estimate = 8 * dim * dim  # dense eigensolve workspace
    else:
        estimate = 16 * dim * (1 + 6 * length)  # triplet storage upper bound
    if estimate > max_bytes:
        raise SectorSizeError(dim, estimate, max_bytes)
    return dim
