"""Physics-level claims assembled from the builders and solvers.

* :func:`dirac_distribution` -- site-resolved amplitude profile P(j) of a
  wavefunction (the quantity plotted when comparing chain sizes).
* :func:`common_part_compare` -- the finite-size projection property: zero
  modes of different chain lengths share their edge profiles, up to the
  length dependence of the normalization constant.
* :func:`census_sweep` -- (n, mu) parameter sweep of the mode census; the
  derived edge-mode count jumps exactly at mu = 1, the phase boundary of
  the underlying Hermitian chain.
* :func:`gap_bound_check` -- scattering eigenvalues stay inside the band
  ``|1 - mu| <= |eps| <= 1 + mu``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bethe
from .model import build_ssh, gamma_ep, _require_even_sites
from .spectral import (
    ModeClass,
    ModeCensus,
    ModeRecord,
    Tolerances,
    DEFAULT_TOLERANCES,
    classify_modes,
    eig,
)

__all__ = [
    "DistributionProfile",
    "SweepPoint",
    "SweepResult",
    "dirac_distribution",
    "common_part_compare",
    "gap_bound_check",
    "census_sweep",
    "edge_mode_count",
]


@dataclass(frozen=True)
class DistributionProfile:
    """Site-resolved amplitude moduli P(j) = |<j|psi>| of a unit vector."""

    n: int
    mu: float | None
    values: np.ndarray


def dirac_distribution(wavefunction) -> DistributionProfile:
    """Amplitude-modulus profile of a normalized wavefunction.

    Accepts a :class:`~.bethe.ZeroModeWavefunction` or a plain vector.
    The input must be Dirac-normalized; the squared profile then sums to 1.
    """
    if isinstance(wavefunction, bethe.ZeroModeWavefunction):
        amps = wavefunction.amplitudes
        n, mu = wavefunction.n, wavefunction.mu
    else:
        amps = np.asarray(wavefunction, dtype=complex)
        n, mu = amps.size, None
    norm = np.linalg.norm(amps)
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"wavefunction is not Dirac-normalized (norm {norm})")
    return DistributionProfile(n=n, mu=mu, values=np.abs(amps))


def common_part_compare(n_small: int, n_large: int, mu: float) -> float:
    """Largest profile deviation between zero modes of two chain sizes.

    The left halves are compared site by site on the odd sublattice
    (j = 1, 3, ...) and the right edges at equal distance from the right
    end, matching the nesting of the profiles.  The amplitude pattern is
    size-independent, so the whole deviation comes from the normalization
    constant and decays like mu**(-n_small) for mu > 1.
    """
    _require_even_sites(n_small)
    _require_even_sites(n_large)
    if n_small > n_large:
        raise ValueError("expected n_small <= n_large")
    if mu <= 1:
        raise ValueError("the shared-profile comparison applies for mu > 1")
    p_small = dirac_distribution(bethe.zero_mode(n_small, mu)).values
    p_large = dirac_distribution(bethe.zero_mode(n_large, mu)).values
    deviation = 0.0
    for j in range(1, n_small + 1, 2):
        deviation = max(deviation, abs(p_small[j - 1] - p_large[j - 1]))
        deviation = max(
            deviation, abs(p_small[n_small - j] - p_large[n_large - j])
        )
    return float(deviation)


def gap_bound_check(
    census_modes: list[ModeRecord], mu: float, tolerance: float = 1e-10
) -> bool:
    """True when every real scattering level lies inside the band.

    The dispersion confines scattering eigenvalues to
    ``|1 - mu| <= |eps| <= 1 + mu``; the lower edge is the protected gap.
    """
    lo, hi = abs(1.0 - mu), 1.0 + mu
    for record in census_modes:
        if record.mode_class is not ModeClass.REAL_SCATTERING:
            continue
        magnitude = abs(record.eigenvalue)
        if magnitude < lo - tolerance or magnitude > hi + tolerance:
            return False
    return True


def edge_mode_count(census: ModeCensus, mu: float) -> int:
    """Derived edge-mode count: 2 n_EP for mu > 1, 2 n_EP + n_I for mu < 1.

    Counts the coalescing pair as two states and, below the phase boundary,
    adds the imaginary evanescent pair, so the count jumps from 2 to 4
    across mu = 1 for every chain length.
    """
    if mu > 1:
        return 2 * census.n_EP
    return 2 * census.n_EP + census.n_I


@dataclass(frozen=True)
class SweepPoint:
    n: int
    mu: float
    gamma: float
    census: ModeCensus
    edge_modes: int


@dataclass(frozen=True)
class SweepResult:
    points: list[SweepPoint]


def _sweep_point(n: int, mu: float, tolerances: Tolerances) -> SweepPoint:
    gamma = gamma_ep(mu, n)
    es = eig(build_ssh(n, mu, gamma), tolerances.residual)
    _, census = classify_modes(es, tolerances)
    return SweepPoint(
        n=n, mu=mu, gamma=gamma, census=census,
        edge_modes=edge_mode_count(census, mu),
    )


def census_sweep(
    n_list,
    mu_list,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    max_workers: int | None = None,
) -> SweepResult:
    """Mode census over a grid of chain lengths and couplings.

    Every grid point is solved at its own coalescence coupling
    ``gamma_ep(mu, n)``.  Points are independent; with ``max_workers > 1``
    they are computed in a thread pool and merged back in grid order, so the
    result is deterministic either way.  A census identity violation at any
    point aborts with the offending (n, mu).
    """
    n_list = [int(n) for n in n_list]
    mu_list = [float(mu) for mu in mu_list]
    for n in n_list:
        _require_even_sites(n)
    for mu in mu_list:
        if mu <= 0 or mu == 1.0:
            raise ValueError(f"sweep requires mu > 0 and mu != 1, got {mu}")
    grid = [(n, mu) for n in n_list for mu in mu_list]
    if max_workers is None or max_workers <= 1:
        points = [_sweep_point(n, mu, tolerances) for n, mu in grid]
    else:
        workers = min(max_workers, len(grid), os.cpu_count() or 1)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_sweep_point, n, mu, tolerances) for n, mu in grid]
            points = []
            for (n, mu), future in zip(grid, futures):
                try:
                    points.append(future.result())
                except Exception as exc:
                    raise RuntimeError(f"sweep failed at (n={n}, mu={mu}): {exc}") from exc
    return SweepResult(points=points)
