"""Closed-form spectra of the SSH chain at the coalescence locus.

On the locus ``gamma = mu**(1 - n/2)`` the chain of :func:`~.model.build_ssh`
is solvable by a plane-wave ansatz

    f_l = A e^{ikl} + B e^{-ikl}   (odd sites l)
    f_l = C e^{ikl} + D e^{-ikl}   (even sites l)

with dispersion ``eps(k) = +/- sqrt(1 + mu^2 - mu (e^{2ik} + e^{-2ik}))`` and
a transcendental quantization condition on k (:func:`quantization_residual`).
Three solution families exhaust the spectrum:

* real k in (0, pi): scattering levels with real eigenvalues
  (:func:`solve_real_k`),
* ``k = (i/2) ln mu``: the coalescing zero mode, in closed form
  (:func:`zero_mode`),
* ``k = i kappa`` with large real kappa, only for ``mu < 1``: a pair of
  end-localized levels with imaginary eigenvalues (exact roots from
  :func:`solve_evanescent_pair`, asymptotic form from
  :func:`evanescent_modes`).

The sign convention matches :func:`~.model.build_ssh` (positive couplings);
closed-form amplitudes therefore carry the
:func:`~.model.staggered_signs` pattern.
"""

from __future__ import annotations

import cmath
import warnings
from dataclasses import dataclass, replace

import mpmath
import numpy as np
from scipy.optimize import brentq

from .model import gamma_ep, staggered_signs, _require_even_sites

__all__ = [
    "UniformChainError",
    "RootScanError",
    "BetheRoot",
    "ZeroModeWavefunction",
    "epsilon_of_k",
    "quantization_residual",
    "quantization_scale",
    "evanescent_residual",
    "solve_real_k",
    "solve_evanescent_pair",
    "zero_mode",
    "zero_mode_root",
    "omega_constant",
    "omega_limit",
    "evanescent_modes",
    "amplitude_ratio",
    "bethe_wavefunction",
    "k_from_epsilon",
    "match_spectrum_to_roots",
]

#: Trivial quantization roots: every sine factor vanishes identically there
#: for even n, but the ansatz degenerates and no eigenstate corresponds.
_TRIVIAL_ROOT_WINDOW = 1e-9


class UniformChainError(ValueError):
    """mu = 1 collapses the dimerization; the closed forms divide by 1 - mu^2."""


class RootScanError(RuntimeError):
    """The root scan did not reproduce the expected level count."""


def _require_mu(mu: float, *, forbid_uniform: bool = False) -> float:
    mu = float(mu)
    if not np.isfinite(mu) or mu <= 0:
        raise ValueError(f"mu must be positive, got {mu}")
    if forbid_uniform and mu == 1.0:
        raise UniformChainError(
            "mu = 1 is the uniform chain; the dimerized closed forms do not apply"
        )
    return mu


def epsilon_of_k(k: complex, mu: float) -> tuple[complex, complex]:
    """Both branches of the dispersion at wave vector k.

    ``eps^2 = 1 + mu^2 - mu (e^{2ik} + e^{-2ik})``; returns
    ``(+sqrt, -sqrt)`` with the principal square root.  Entire in k, so any
    complex wave vector is accepted; ``k = (i/2) ln mu`` annihilates both
    branches.
    """
    _require_mu(mu)
    k = complex(k)
    e2 = 1 + mu * mu - mu * (cmath.exp(2j * k) + cmath.exp(-2j * k))
    root = cmath.sqrt(e2)
    return root, -root


def _quantization_terms(k: complex, mu: float, gamma: float, n: int):
    k = complex(k)
    e2 = 1 + mu * mu - mu * (cmath.exp(2j * k) + cmath.exp(-2j * k))
    t1 = (e2 - gamma * gamma - 1) * (
        cmath.exp(1j * (n - 2) * k) - cmath.exp(-1j * (n - 2) * k)
    )
    t2 = mu * (cmath.exp(1j * (n - 4) * k) - cmath.exp(-1j * (n - 4) * k))
    t3 = mu * (gamma * gamma + e2) * (cmath.exp(1j * n * k) - cmath.exp(-1j * n * k))
    return t1, t2, t3


def quantization_residual(k: complex, mu: float, gamma: float, n: int) -> complex:
    """Value of the wave-vector quantization condition at k.

    Evaluates

        (eps_k^2 - gamma^2 - 1) [e^{i(n-2)k} - e^{-i(n-2)k}]
        + mu [e^{i(n-4)k} - e^{-i(n-4)k}]
        + mu (gamma^2 + eps_k^2) [e^{ink} - e^{-ink}]

    which vanishes exactly on allowed wave vectors.  Along real k the value
    is 2i times a real function; along ``k = i kappa`` it is purely real.
    """
    _require_mu(mu)
    _require_even_sites(n)
    t1, t2, t3 = _quantization_terms(k, mu, gamma, n)
    return t1 + t2 + t3


def quantization_scale(k: complex, mu: float, gamma: float, n: int) -> float:
    """Largest term magnitude in the quantization condition at k.

    Divides out the exponential growth of the individual terms; the
    normalized residual ``|quantization_residual| / quantization_scale`` is
    the meaningful smallness measure for roots with complex k.
    """
    t1, t2, t3 = _quantization_terms(k, mu, gamma, n)
    return max(abs(t1), abs(t2), abs(t3), 1e-300)


def evanescent_residual(kappa: float, mu: float, gamma: float, n: int) -> float:
    """Quantization condition restricted to ``k = i kappa`` (real form).

    Evaluates ``(eps^2 - gamma^2 - 1) sinh((n-2) kappa)
    + mu sinh((n-4) kappa) + mu (gamma^2 + eps^2) sinh(n kappa)`` with
    ``eps^2 = 1 + mu^2 - 2 mu cosh(2 kappa)``; this equals
    ``-quantization_residual(i kappa)/2``.  For even n the sector
    ``k = pi + i kappa`` yields the identical expression, since every
    exponent carries an even multiple of k.  Vanishes at kappa = 0 and at
    ``kappa = +/- (1/2) ln mu`` for every mu.
    """
    _require_mu(mu)
    _require_even_sites(n)
    kappa = float(kappa)
    e2 = 1 + mu * mu - 2 * mu * np.cosh(2 * kappa)
    return float(
        (e2 - gamma * gamma - 1) * np.sinh((n - 2) * kappa)
        + mu * np.sinh((n - 4) * kappa)
        + mu * (gamma * gamma + e2) * np.sinh(n * kappa)
    )


@dataclass(frozen=True)
class BetheRoot:
    """One solution of the quantization condition, per eigenvalue branch.

    ``residual`` is the normalized quantization residual
    ``|quantization_residual(k)| / quantization_scale(k)``.  ``sector`` is
    "real" for scattering roots and "imaginary" for evanescent ones
    (``k = i kappa``; for even chains the ``pi + i kappa`` sector coincides).
    """

    k: complex
    branch: int
    epsilon: complex
    residual: float
    sector: str

    def __post_init__(self):
        if self.branch not in (+1, -1):
            raise ValueError(f"branch must be +1 or -1, got {self.branch}")
        if self.sector not in ("real", "imaginary"):
            raise ValueError(f"unknown sector {self.sector!r}")


def _real_line(k: float, mu: float, gamma: float, n: int) -> float:
    """quantization_residual / 2i along real k: a real, sign-changing function."""
    e2 = 1 + mu * mu - 2 * mu * np.cos(2 * k)
    return (
        (e2 - gamma * gamma - 1) * np.sin((n - 2) * k)
        + mu * np.sin((n - 4) * k)
        + mu * (gamma * gamma + e2) * np.sin(n * k)
    )


def solve_real_k(
    mu: float,
    gamma: float,
    n: int,
    root_tolerance: float = 1e-12,
    grid_points: int | None = None,
    max_refinements: int = 3,
) -> list[BetheRoot]:
    """All scattering roots: real k in (0, pi), both eigenvalue branches.

    Scans a uniform grid (at least 20n points) for sign changes of the real
    quantization function, polishes each bracket with Brent's method, drops
    the trivial roots k = 0, pi/2, pi (every sine factor vanishes there for
    even n), and deduplicates k and pi - k, which carry the same eigenvalue
    pair.  On the coalescence locus the number of distinct roots must equal
    (n-2)/2 for mu > 1 and (n-4)/2 for mu < 1; the grid is refined up to
    ``max_refinements`` times before giving up.

    Returns two :class:`BetheRoot` entries per distinct k, one per branch,
    ordered by ascending k then descending branch.
    """
    mu = _require_mu(mu, forbid_uniform=True)
    _require_even_sites(n)
    if root_tolerance <= 0:
        raise ValueError("root_tolerance must be positive")
    locus = gamma_ep(mu, n)
    on_locus = abs(gamma - locus) <= 1e-9 * locus
    if not on_locus:
        warnings.warn(
            f"gamma={gamma!r} is off the coalescence locus {locus!r}; "
            "the root census is not enforced",
            stacklevel=2,
        )
    expected = None
    if on_locus:
        expected = (n - 2) // 2 if mu > 1 else (n - 4) // 2

    points = max(grid_points or 0, 20 * n)
    for attempt in range(max_refinements + 1):
        ks = np.linspace(0.0, np.pi, points + 2)[1:-1]
        vals = _real_line(ks, mu, gamma, n)
        found: list[float] = []
        for i in range(len(ks) - 1):
            if vals[i] == 0.0:
                found.append(float(ks[i]))
            elif vals[i] * vals[i + 1] < 0:
                found.append(
                    brentq(
                        _real_line,
                        ks[i],
                        ks[i + 1],
                        args=(mu, gamma, n),
                        xtol=1e-15,
                        rtol=8.9e-16,
                    )
                )
        found = [k for k in found if abs(k - np.pi / 2) > _TRIVIAL_ROOT_WINDOW]
        distinct: list[tuple[float, float]] = []
        for k in sorted(found):
            e2 = 1 + mu * mu - 2 * mu * np.cos(2 * k)
            if any(abs(e2 - other) < 1e-9 * max(1.0, abs(other)) for _, other in distinct):
                continue
            distinct.append((k, e2))
        if expected is None or len(distinct) == expected:
            break
        points *= 3
    if expected is not None and len(distinct) != expected:
        raise RootScanError(
            f"found {len(distinct)} distinct scattering roots for n={n}, "
            f"mu={mu}; census expects {expected}"
        )

    roots: list[BetheRoot] = []
    for k, e2 in distinct:
        eps = float(np.sqrt(e2))
        res = abs(quantization_residual(k, mu, gamma, n)) / quantization_scale(
            k, mu, gamma, n
        )
        if res > root_tolerance:
            raise RootScanError(
                f"polished root k={k} has normalized residual {res:.3e} > "
                f"{root_tolerance}"
            )
        for branch in (+1, -1):
            roots.append(
                BetheRoot(
                    k=complex(k), branch=branch, epsilon=branch * eps,
                    residual=res, sector="real",
                )
            )
    return roots


def solve_evanescent_pair(mu: float, gamma: float, n: int, dps: int = 60) -> list[BetheRoot]:
    """Exact imaginary-eigenvalue pair for mu < 1, by high-precision root finding.

    The quantization condition along ``k = i kappa``, rescaled by
    ``sinh(n kappa)`` to keep every term of order one, is solved with a
    ``dps``-digit Newton iteration seeded at the asymptotic root
    ``kappa = (n-1)/2 * ln(1/mu)``.  The individual hyperbolic terms reach
    ~ e^{n kappa} while the balanced combination ``gamma^2 + eps^2`` is of
    order one, so double precision cannot certify small residuals here;
    extended precision can, and the result rounds back to a float root.

    Returns the two branches (+i|eps|, -i|eps|) as :class:`BetheRoot` with
    sector "imaginary".
    """
    mu = _require_mu(mu, forbid_uniform=True)
    _require_even_sites(n)
    if mu >= 1:
        raise ValueError("the imaginary pair exists only for mu < 1")
    with mpmath.workdps(dps):
        mmu = mpmath.mpf(repr(mu))
        mgam = mpmath.mpf(repr(gamma))

        def rescaled(kappa):
            e2 = 1 + mmu * mmu - 2 * mmu * mpmath.cosh(2 * kappa)
            sinh_n = mpmath.sinh(n * kappa)
            return (
                (e2 - mgam * mgam - 1) * mpmath.sinh((n - 2) * kappa) / sinh_n
                + mmu * mpmath.sinh((n - 4) * kappa) / sinh_n
                + mmu * (mgam * mgam + e2)
            )

        seed = (mpmath.mpf(n) - 1) / 2 * mpmath.log(1 / mmu)
        kappa = mpmath.findroot(rescaled, seed)
        e2 = 1 + mmu * mmu - 2 * mmu * mpmath.cosh(2 * kappa)
        if e2 >= 0:  # pragma: no cover - cannot happen at the locus
            raise RootScanError("evanescent root has non-imaginary eigenvalue")
        eps_mag = mpmath.sqrt(-e2)
        pieces = [
            abs((e2 - mgam * mgam - 1) * mpmath.sinh((n - 2) * kappa) / mpmath.sinh(n * kappa)),
            abs(mmu * mpmath.sinh((n - 4) * kappa) / mpmath.sinh(n * kappa)),
            abs(mmu * (mgam * mgam + e2)),
        ]
        residual = float(abs(rescaled(kappa)) / max(pieces))
        k_root = complex(0.0, float(kappa))
        eps = float(eps_mag)
    return [
        BetheRoot(k=k_root, branch=+1, epsilon=1j * eps, residual=residual, sector="imaginary"),
        BetheRoot(k=k_root, branch=-1, epsilon=-1j * eps, residual=residual, sector="imaginary"),
    ]


def zero_mode_root(mu: float) -> complex:
    """Wave vector ``(i/2) ln mu`` of the coalescing zero mode."""
    _require_mu(mu, forbid_uniform=True)
    return 0.5j * np.log(mu)


def omega_constant(n: int, mu: float) -> float:
    """Dirac normalization ``mu^{n/2-1} sqrt((1 - mu^2) / (2 - 2 mu^n))``."""
    _require_even_sites(n)
    mu = _require_mu(mu, forbid_uniform=True)
    return mu ** (n // 2 - 1) * np.sqrt((1 - mu * mu) / (2 - 2.0 * mu ** n))


def omega_limit(mu: float) -> float:
    """Large-n limit of :func:`omega_constant` for mu > 1: sqrt((mu^2-1)/2)/mu."""
    mu = _require_mu(mu, forbid_uniform=True)
    if mu < 1:
        raise ValueError("the normalization converges only for mu > 1")
    return np.sqrt((mu * mu - 1) / 2) / mu


@dataclass(frozen=True)
class ZeroModeWavefunction:
    """Closed-form coalescing zero mode (right) or its left partner.

    Odd-site amplitudes are ``s_l Omega mu^{1-j}`` and even-site ones
    ``-/+ i s_l Omega mu^{j - n/2}`` (minus for the right vector, plus for
    the left), ``j = 1..n/2``, where ``s_l`` is the staggered sign pattern
    of the positive-coupling convention.  The vector is Dirac-normalized;
    the left/right pair is biorthogonal with zero overlap, which is the
    coalescence signature.
    """

    n: int
    mu: float
    side: str
    omega: float
    amplitudes: np.ndarray


def zero_mode(n: int, mu: float, side: str = "right") -> ZeroModeWavefunction:
    """Coalescing zero mode of the chain at ``gamma = gamma_ep(mu, n)``.

    The right vector is annihilated by ``build_ssh(n, mu, gamma_ep(mu, n))``
    and the left one by its conjugate transpose.  ``mu = 1`` is rejected:
    the normalization degenerates to 0/0 on the uniform chain.
    """
    if side not in ("right", "left"):
        raise ValueError(f"side must be 'right' or 'left', got {side!r}")
    _require_even_sites(n)
    mu = _require_mu(mu, forbid_uniform=True)
    omega = omega_constant(n, mu)
    j = np.arange(1, n // 2 + 1)
    amps = np.zeros(n, dtype=complex)
    amps[0::2] = omega * mu ** (1.0 - j)
    sign = -1j if side == "right" else +1j
    amps[1::2] = sign * omega * mu ** (j - n / 2.0)
    amps *= staggered_signs(n)
    return ZeroModeWavefunction(n=n, mu=mu, side=side, omega=float(omega), amplitudes=amps)


def evanescent_modes(n: int, mu: float) -> tuple[np.ndarray, np.ndarray]:
    """Asymptotic end-localized pair for mu < 1.

    Returns ``(vectors, eigenvalues)`` with ``vectors[0] = |1>`` (sigma=+1)
    and ``vectors[1] = |n>`` (sigma=-1), and eigenvalues
    ``+/- i mu^{1-n/2}``.  Both are asymptotic, valid for large n or small
    mu; the dense eigensolver is the accuracy reference, never this.
    """
    _require_even_sites(n)
    mu = _require_mu(mu, forbid_uniform=True)
    if mu >= 1:
        raise ValueError("evanescent imaginary modes exist only for mu < 1")
    vectors = np.zeros((2, n), dtype=complex)
    vectors[0, 0] = 1.0
    vectors[1, n - 1] = 1.0
    eps = gamma_ep(mu, n)
    return vectors, np.array([1j * eps, -1j * eps])


def amplitude_ratio(k: complex, mu: float) -> complex:
    """Plane-wave coefficient ratio ``B/D = C/A`` at wave vector k.

    ``exp(-ik) sqrt((1 - mu e^{2ik}) / (1 - mu e^{-2ik}))`` with the
    principal square root.  Unimodular for real k.  At ``k = (i/2) ln mu``
    the numerator vanishes (B = C = 0); the mirrored root has the vanishing
    denominator and is a pole, reported as an error.
    """
    _require_mu(mu)
    k = complex(k)
    num = 1 - mu * cmath.exp(2j * k)
    den = 1 - mu * cmath.exp(-2j * k)
    if abs(den) <= 1e-14 * (1 + mu):
        raise ValueError(f"amplitude ratio pole: 1 - mu e^(-2ik) = {den}")
    return cmath.exp(-1j * k) * cmath.sqrt(num / den)


def bethe_wavefunction(
    k: complex, epsilon: complex, mu: float, gamma: float, n: int
) -> np.ndarray:
    """Eigenvector for a quantization root with nonzero eigenvalue.

    Builds ``f_l = A e^{ikl} + B e^{-ikl}`` (odd l) and
    ``C e^{ikl} + D e^{-ikl}`` (even l) with the branch-consistent ratio
    ``C/A = B/D = e^{-ik} (1 - mu e^{2ik}) / epsilon`` and the free pair
    (A, D) from the null space of the two end conditions; applies the
    staggered sign pattern and Dirac-normalizes.  The zero mode has
    epsilon = 0 and its own closed form, :func:`zero_mode`.
    """
    mu = _require_mu(mu)
    _require_even_sites(n)
    k = complex(k)
    epsilon = complex(epsilon)
    if epsilon == 0:
        raise ValueError("epsilon = 0 is the coalescing zero mode; use zero_mode()")
    ratio = cmath.exp(-1j * k) * (1 - mu * cmath.exp(2j * k)) / epsilon
    e_p = cmath.exp(1j * k)
    e_m = cmath.exp(-1j * k)
    end = np.array(
        [
            [
                (epsilon - 1j * gamma) * e_p - ratio * e_p ** 2,
                (epsilon - 1j * gamma) * ratio * e_m - e_m ** 2,
            ],
            [
                e_p ** (n - 1) - (epsilon + 1j * gamma) * ratio * e_p ** n,
                ratio * e_m ** (n - 1) - (epsilon + 1j * gamma) * e_m ** n,
            ],
        ],
        dtype=complex,
    )
    _, _, vh = np.linalg.svd(end)
    a_coef, d_coef = vh.conj()[-1]
    b_coef, c_coef = ratio * d_coef, ratio * a_coef
    l = np.arange(1, n + 1)
    odd = a_coef * np.exp(1j * k * l) + b_coef * np.exp(-1j * k * l)
    even = c_coef * np.exp(1j * k * l) + d_coef * np.exp(-1j * k * l)
    f = np.where(l % 2 == 1, odd, even) * staggered_signs(n)
    return f / np.linalg.norm(f)


def k_from_epsilon(epsilon: complex, mu: float) -> complex:
    """Invert the dispersion: a wave vector with the given eigenvalue.

    Solves ``cos 2k = (1 + mu^2 - eps^2) / (2 mu)`` with the principal
    branch.  Real eigenvalues inside the scattering band give real k;
    eigenvalue zero gives the zero-mode root; imaginary eigenvalues give
    ``k = i kappa``.
    """
    mu = _require_mu(mu)
    z = (1 + mu * mu - complex(epsilon) ** 2) / (2 * mu)
    return 0.5 * cmath.acos(z)


def match_spectrum_to_roots(
    records,
    mu: float,
    gamma: float,
    n: int,
) -> tuple[list, list[float]]:
    """Attach a quantization root to every classified level.

    Real scattering levels and the coalescing pair are inverted through the
    dispersion; the imaginary pair (mu < 1) is matched against
    :func:`solve_evanescent_pair`, whose residual certificate survives the
    hyperbolic term growth.  Returns new records with
    ``matched_bethe_root`` filled, plus the list of normalized residuals in
    record order.
    """
    from .spectral import ModeClass

    mu = _require_mu(mu, forbid_uniform=True)
    imag_pair = None
    out, residuals = [], []
    for record in records:
        if record.mode_class is ModeClass.IMAGINARY_EVANESCENT:
            if imag_pair is None:
                imag_pair = solve_evanescent_pair(mu, gamma, n)
            root = min(imag_pair, key=lambda r: abs(r.epsilon - record.eigenvalue))
            k = root.k if record.eigenvalue.imag >= 0 else -root.k
            res = root.residual
        else:
            if record.mode_class is ModeClass.ZERO_COALESCING:
                k = zero_mode_root(mu)
            else:
                k = k_from_epsilon(record.eigenvalue, mu)
                k = complex(k.real, 0.0) if abs(k.imag) < 1e-9 else k
            res = abs(quantization_residual(k, mu, gamma, n)) / quantization_scale(
                k, mu, gamma, n
            )
        out.append(replace(record, matched_bethe_root=k))
        residuals.append(res)
    return out, residuals
