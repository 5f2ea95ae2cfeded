"""Matrix builders for the non-Hermitian PT-symmetric Kitaev ring.

A Kitaev ring of ``n`` fermionic sites with two impurity chemical potentials
(at sites 1 and n/2+1) maps, in the Majorana basis, onto a ``2n x 2n`` core
matrix describing a dimerized ring.  With the PT-symmetric impurity choice
``mu_left = i*gamma``, ``mu_right = -i*gamma`` and symmetric pairing
``delta = t``, a linear change of basis splits that ring into two decoupled
``n x n`` SSH chains with opposite imaginary ending potentials.

This module builds every matrix in that chain of reductions:

* :func:`build_majorana_ring` -- the ``2n x 2n`` Majorana core matrix,
* :func:`build_block_transform` -- the change of basis that block-diagonalizes it,
* :func:`decompose_blocks` -- the two SSH blocks plus consistency diagnostics,
* :func:`build_ssh` -- the ``n x n`` non-Hermitian SSH chain itself,
* :func:`gamma_ep` -- the coupling ``gamma = mu**(1 - n/2)`` at which the two
  zero modes of the SSH chain coalesce (the exceptional point used throughout).

Sign convention: :func:`build_ssh` uses positive couplings ``(1, mu)`` on the
alternating bonds.  The equivalent convention with ``(1, -mu)`` is related by
conjugation with ``diag(staggered_signs(n))``; see :func:`staggered_signs`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ModelParams",
    "BlockDecomposition",
    "BLOCK_GRAM",
    "MAX_DIM",
    "gamma_ep",
    "build_ssh",
    "build_majorana_ring",
    "build_block_transform",
    "decompose_blocks",
    "fit_block_scale",
    "parity_matrix",
    "staggered_signs",
    "pt_deviation",
]

#: Gram constant of the block transform: V^dag V equals BLOCK_GRAM * identity.
BLOCK_GRAM = 0.5

#: Dense-solver dimension ceiling accepted by the builders.
MAX_DIM = 4096


def _require_even_sites(n: int) -> None:
    if not isinstance(n, (int, np.integer)):
        raise TypeError(f"site count must be an integer, got {type(n).__name__}")
    if n < 4 or n % 2 != 0:
        raise ValueError(f"site count must be even and >= 4, got {n}")
    if 2 * n > MAX_DIM:
        raise ValueError(f"site count {n} exceeds the dimension ceiling {MAX_DIM // 2}")


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the Kitaev ring with two impurities.

    Parameters
    ----------
    n : int
        Number of fermionic sites.  Must be even and >= 4 so the impurity
        site n/2+1 exists and differs from site 1.
    t : float
        Hopping amplitude.
    delta : float
        Pairing amplitude.  The closed-form results of the solver modules
        assume the symmetric point ``delta == t``; the builder accepts any
        real value.
    mu : float
        Uniform chemical potential, required positive.
    gamma : float
        Non-Hermiticity strength, required >= 0.
    mu_left, mu_right : complex, optional
        Impurity potentials at sites 1 and n/2+1.  Default to the
        PT-symmetric pair ``(i*gamma, -i*gamma)``.
    """

    n: int
    t: float = 1.0
    delta: float = 1.0
    mu: float = 1.0
    gamma: float = 0.0
    mu_left: complex = field(default=None)   # type: ignore[assignment]
    mu_right: complex = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        _require_even_sites(self.n)
        if not np.isfinite(self.t) or not np.isfinite(self.delta):
            raise ValueError("t and delta must be finite")
        if not np.isfinite(self.mu) or self.mu <= 0:
            raise ValueError(f"mu must be positive and finite, got {self.mu}")
        if not np.isfinite(self.gamma) or self.gamma < 0:
            raise ValueError(f"gamma must be >= 0 and finite, got {self.gamma}")
        if self.mu_left is None:
            object.__setattr__(self, "mu_left", 1j * self.gamma)
        if self.mu_right is None:
            object.__setattr__(self, "mu_right", -1j * self.gamma)
        for name in ("mu_left", "mu_right"):
            value = complex(getattr(self, name))
            if not np.isfinite(value.real) or not np.isfinite(value.imag):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)

    @property
    def is_pt_configuration(self) -> bool:
        """True when both impurities are purely imaginary and conjugate."""
        return (
            self.mu_left.real == 0.0
            and self.mu_right.real == 0.0
            and self.mu_left == -self.mu_right
        )

    @property
    def is_symmetric_pairing(self) -> bool:
        return self.delta == self.t

    def gamma_at_ep(self) -> float:
        """Coalescence-locus coupling for these (mu, n)."""
        return gamma_ep(self.mu, self.n)


def gamma_ep(mu: float, n: int) -> float:
    """Coupling ``gamma = mu**(1 - n/2)`` at which the zero modes coalesce.

    Examples: ``gamma_ep(2, 6) == 0.25``, ``gamma_ep(0.5, 6) == 4.0`` and
    ``gamma_ep(1, n) == 1`` (the uniform chain).

    Raises
    ------
    ValueError
        If ``mu <= 0`` or ``n`` is odd or smaller than 4.
    """
    _require_even_sites(n)
    if not np.isfinite(mu) or mu <= 0:
        raise ValueError(f"mu must be positive, got {mu}")
    return float(mu) ** (1 - n // 2)


def build_ssh(n: int, mu: float, gamma: float) -> np.ndarray:
    """Dense non-Hermitian SSH chain with imaginary ending potentials.

    The ``n x n`` matrix has unit couplings on the (2l-1, 2l) bonds, ``mu``
    on the (2l, 2l+1) bonds (both directions; 1-based site labels), and
    diagonal entries ``+i*gamma`` at site 1 and ``-i*gamma`` at site n.
    All other entries vanish: 2(n-1) off-diagonal nonzeros and at most two
    diagonal ones.

    Parameters
    ----------
    n : int
        Even site count >= 4.
    mu : float
        Positive bulk coupling (the hopping amplitude is normalized to 1).
    gamma : float
        End-potential strength; ``gamma = 0`` gives the Hermitian chain and
        ``gamma = gamma_ep(mu, n)`` places the chain at the exceptional point.

    Returns
    -------
    np.ndarray
        Complex ``(n, n)`` matrix.
    """
    _require_even_sites(n)
    if not np.isfinite(mu) or mu <= 0:
        raise ValueError(f"mu must be positive, got {mu}")
    if not np.isfinite(gamma):
        raise ValueError("gamma must be finite")
    h = np.zeros((n, n), dtype=complex)
    for l in range(1, n // 2 + 1):
        h[2 * l - 2, 2 * l - 1] = 1.0
        h[2 * l - 1, 2 * l - 2] = 1.0
    for l in range(1, n // 2):
        h[2 * l - 1, 2 * l] = mu
        h[2 * l, 2 * l - 1] = mu
    h[0, 0] = 1j * gamma
    h[n - 1, n - 1] = -1j * gamma
    return h


def build_majorana_ring(params: ModelParams) -> np.ndarray:
    """Majorana core matrix of the Kitaev ring with two impurity dimers.

    Basis ordering is ``(a_1, b_1, a_2, b_2, ..., a_n, b_n)`` where each
    fermionic site contributes the Majorana pair (a, b); the matrix is
    ``2n x 2n``.  Ring bonds connect ``b_l`` to ``a_{l+1}`` (periodic,
    ``a_{n+1} == a_1``) with entries ``-i(t+delta)/4`` and the reversed
    ``b_{l+1}`` to ``a_l`` bonds carry ``-i(t-delta)/4``; at the symmetric
    point ``delta == t`` only the forward bonds survive, with ``-i t/2``.
    Dimer bonds connect ``a_l`` to ``b_l`` with ``-i mu_l / 2`` where
    ``mu_l`` is ``mu`` in the bulk and ``mu_left``, ``mu_right`` on the two
    impurity dimers.  Each entry is accompanied by its Hermitian-conjugate
    partner computed from the same coefficient, so purely imaginary impurity
    potentials make the matrix non-Hermitian.

    With ``mu_left = 0`` the first dimer bond disappears and the ring opens
    into a single 2n-site chain.
    """
    n = params.n
    dim = 2 * n
    t, delta = params.t, params.delta
    h = np.zeros((dim, dim), dtype=complex)
    for l in range(1, n + 1):
        b_l = 2 * l - 1            # 0-based index of b_l
        a_next = (2 * l) % dim     # 0-based index of a_{l+1}, wrapping to a_1
        h[b_l, a_next] += -0.25j * (t + delta)
        h[a_next, b_l] += +0.25j * (t + delta)
        b_next = (2 * l + 1) % dim
        a_l = 2 * l - 2
        h[b_next, a_l] += -0.25j * (t - delta)
        h[a_l, b_next] += +0.25j * (t - delta)
    for l in range(1, n + 1):
        if l == 1:
            pot = params.mu_left
        elif l == n // 2 + 1:
            pot = params.mu_right
        else:
            pot = params.mu
        h[2 * l - 2, 2 * l - 1] += -0.5j * pot
        h[2 * l - 1, 2 * l - 2] += +0.5j * pot
    return h


def build_block_transform(n: int) -> np.ndarray:
    """Change-of-basis matrix splitting the Majorana ring into two chains.

    Column ``(sigma, 2l-1)`` is ``exp(-i pi/4)/2 * (|2l> + i sigma |2n+3-2l>)``
    and column ``(sigma, 2l)`` is ``exp(+i pi/4)/2 * (|2l+1> - i sigma |2n+2-2l>)``
    for ``l = 1..n/2`` and ``sigma = +1, -1``, with 1-based ring labels taken
    modulo 2n (so ``|2n+1>`` is ``|1>``).  Columns are ordered sigma=+1 first
    (block columns 1..n), then sigma=-1.

    The columns are orthogonal with squared norm 1/2, i.e.
    ``V.conj().T @ V == BLOCK_GRAM * identity``; the transform is stored as
    defined (not rescaled to a unitary).
    """
    _require_even_sites(n)
    dim = 2 * n
    v = np.zeros((dim, dim), dtype=complex)
    a = np.exp(-1j * np.pi / 4) / 2
    b = np.exp(+1j * np.pi / 4) / 2
    for block, sigma in enumerate((1, -1)):
        offset = block * n
        for l in range(1, n // 2 + 1):
            col = offset + 2 * l - 2
            v[(2 * l - 1) % dim, col] += a
            v[(2 * n + 3 - 2 * l - 1) % dim, col] += 1j * sigma * a
            col = offset + 2 * l - 1
            v[(2 * l + 1 - 1) % dim, col] += b
            v[(2 * n + 2 - 2 * l - 1) % dim, col] += -1j * sigma * b
    return v


@dataclass(frozen=True)
class BlockDecomposition:
    """Result of splitting the Majorana ring matrix into its two SSH blocks.

    Attributes
    ----------
    h_plus, h_minus : np.ndarray
        The two ``n x n`` diagonal blocks in the ring normalization,
        oriented so that ``h_plus`` carries the ``+i`` ending potential at
        site 1 (``h_minus`` is its conjugate transpose).
    leakage : float
        Largest off-block entry magnitude after the change of basis.
    commutator : float
        Largest entry of the commutator of the two blocks re-embedded in the
        ring space; vanishes for a consistent decomposition.
    """

    h_plus: np.ndarray
    h_minus: np.ndarray
    leakage: float
    commutator: float


def decompose_blocks(h: np.ndarray, n: int) -> BlockDecomposition:
    """Split a PT-configured Majorana ring matrix into its two SSH blocks.

    Conjugates ``h`` by :func:`build_block_transform` (inverting the
    transform explicitly rather than assuming unitarity) and returns the two
    diagonal blocks.  Raises if the off-diagonal blocks do not vanish or the
    blocks are not conjugate transposes of each other, which signals an input
    not built in the PT configuration at ``delta == t``.
    """
    h = np.asarray(h, dtype=complex)
    if h.shape != (2 * n, 2 * n):
        raise ValueError(f"expected a {2 * n} x {2 * n} matrix, got {h.shape}")
    v = build_block_transform(n)
    v_inv = np.linalg.inv(v)
    ht = v_inv @ h @ v
    scale = max(float(np.max(np.abs(h))), 1e-300)
    leakage = float(max(np.max(np.abs(ht[:n, n:])), np.max(np.abs(ht[n:, :n]))))
    if leakage > 1e-10 * scale:
        raise ValueError(
            f"input does not block-diagonalize (leakage {leakage:.3e}); "
            "expected a PT-configured ring at delta == t"
        )
    first, second = ht[:n, :n].copy(), ht[n:, n:].copy()
    if first[0, 0].imag < second[0, 0].imag:
        h_plus, h_minus = second, first
    else:
        h_plus, h_minus = first, second
    if np.max(np.abs(h_minus - h_plus.conj().T)) > 1e-10 * scale:
        raise ValueError("blocks are not conjugate transposes; inconsistent input")
    embed_p = np.zeros_like(ht)
    embed_m = np.zeros_like(ht)
    embed_p[:n, :n] = first
    embed_m[n:, n:] = second
    hp = v @ embed_p @ v_inv
    hm = v @ embed_m @ v_inv
    commutator = float(np.max(np.abs(hp @ hm - hm @ hp)))
    return BlockDecomposition(h_plus, h_minus, leakage, commutator)


def fit_block_scale(block: np.ndarray, n: int, mu: float, gamma: float) -> complex:
    """Least-squares complex scale relating a ring block to :func:`build_ssh`.

    The blocks of :func:`decompose_blocks` inherit the ring normalization
    (couplings ``t/2``, ``mu/2``) and the negative-coupling sign convention,
    while :func:`build_ssh` uses unit hopping and positive couplings.  This
    fits ``s`` minimizing ``|block - s * g @ build_ssh(n, mu, gamma) @ g|``
    in the Frobenius norm, with ``g = diag(staggered_signs(n))``.  For a
    consistent decomposition ``s`` is 1/2 up to rounding.
    """
    s = staggered_signs(n)
    reference = s[:, None] * build_ssh(n, mu, gamma) * s[None, :]
    denom = np.vdot(reference, reference)
    if denom == 0:
        raise ValueError("degenerate reference matrix")
    return complex(np.vdot(reference, np.asarray(block, dtype=complex)) / denom)


def parity_matrix(n: int) -> np.ndarray:
    """Site-reversal permutation sending site l to n+1-l (anti-diagonal)."""
    return np.eye(n)[::-1].copy()


def staggered_signs(n: int) -> np.ndarray:
    """Sign pattern ``(+1, +1, -1, -1, +1, ...)`` over the chain sites.

    Conjugating :func:`build_ssh` output with ``diag(staggered_signs(n))``
    flips the sign of every (2l, 2l+1) bond, mapping the positive-coupling
    convention ``(1, mu)`` onto the equivalent ``(1, -mu)`` one.  Closed-form
    eigenvectors derived in the latter convention pick up this pattern.
    """
    return (-1.0) ** (np.arange(n) // 2)


def pt_deviation(h: np.ndarray) -> float:
    """Largest entry of ``P conj(h) P - h``: zero for a PT-symmetric chain."""
    h = np.asarray(h, dtype=complex)
    p = parity_matrix(h.shape[0])
    return float(np.max(np.abs(p @ h.conj() @ p - h)))
