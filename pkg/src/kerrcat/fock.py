"""Truncated Fock-space operators, coherent/cat states, and Wigner maps.

All operators are dense complex numpy arrays.  States are 1-D complex
arrays normalized after truncation.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from .model import ModelParams


def annihilation(dim: int) -> np.ndarray:
    """Ladder operator a with a[n-1, n] = sqrt(n)."""
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    a = np.zeros((dim, dim), dtype=complex)
    n = np.arange(1, dim)
    a[n - 1, n] = np.sqrt(n)
    return a


def number_operator(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def parity_operator(dim: int) -> np.ndarray:
    """Photon parity (-1)^n."""
    return np.diag((-1.0) ** np.arange(dim)).astype(complex)


def displacement(beta: complex, dim: int) -> np.ndarray:
    """D(beta) = exp(beta a' - conj(beta) a) on the truncated space.

    Computed by scaling-and-squaring matrix exponential of the exact
    anti-Hermitian truncated generator, so D is unitary on the truncated
    space regardless of |beta|.
    """
    a = annihilation(dim)
    return expm(beta * a.conj().T - np.conj(beta) * a)


def coherent_state(
    alpha: complex, dim: int, tail_tol: float = 1e-10, on_tail: str = "raise"
) -> np.ndarray:
    """Coherent state |alpha> truncated to dim levels and renormalized.

    The untruncated tail mass is estimated from the Poisson weights; if
    it exceeds tail_tol the state is either rejected (on_tail="raise"),
    reported (on_tail="warn") or silently accepted (on_tail="ignore").
    """
    n = np.arange(dim)
    if alpha == 0:
        amps = np.zeros(dim, dtype=complex)
        amps[0] = 1.0
        return amps
    # log |c_n| = n log|alpha| - alpha^2/2 - log(n!)/2, phases from alpha^n
    log_mag = n * np.log(np.abs(alpha)) - 0.5 * np.abs(alpha) ** 2 - 0.5 * gammaln(n + 1.0)
    phase = np.exp(1j * n * np.angle(alpha))
    amps = np.exp(log_mag) * phase
    captured = float(np.sum(np.abs(amps) ** 2))
    tail = max(0.0, 1.0 - captured)
    if tail > tail_tol:
        msg = (
            f"coherent-state tail mass {tail:.3e} beyond dim={dim} exceeds "
            f"{tail_tol:.1e} for |alpha|={abs(alpha):.3f}"
        )
        if on_tail == "raise":
            raise ValueError(msg)
        if on_tail == "warn":
            warnings.warn(msg)
    return amps / np.sqrt(captured)


def cat_state(alpha: float, parity: str, dim: int, **kwargs) -> np.ndarray:
    """Even or odd cat state N^± (|alpha> ± |-alpha>), normalized.

    The even (odd) cat has support only on even (odd) Fock levels; the
    opposite-parity amplitudes are zeroed exactly to remove roundoff.
    """
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    plus = coherent_state(alpha, dim, **kwargs)
    minus = coherent_state(-alpha, dim, **kwargs)
    v = plus + minus if parity == "even" else plus - minus
    mask = np.arange(dim) % 2 == (0 if parity == "even" else 1)
    v[~mask] = 0.0
    return v / np.linalg.norm(v)


def build_hamiltonian(params: ModelParams, dim: int) -> np.ndarray:
    """H = delta a'a - K a'^2 a^2 + P (a'^2 + a^2) + eps (a' + a)."""
    a = annihilation(dim)
    ad = a.conj().T
    n_op = ad @ a
    a2 = a @ a
    ad2 = ad @ ad
    H = (
        params.delta * n_op
        - params.kerr * (ad2 @ a2)
        + params.two_photon * (ad2 + a2)
        + params.drive * (ad + a)
    )
    # enforce exact Hermiticity against accumulation of matmul roundoff
    return 0.5 * (H + H.conj().T)


def wigner(
    state_or_rho: np.ndarray, x_grid: np.ndarray, p_grid: np.ndarray
) -> np.ndarray:
    """Wigner function on a phase-space grid via displaced parity.

    W(beta) = (2/pi) Tr[D(beta)' rho D(beta) Pi] at beta = x + i p, so
    (x, p) are the real and imaginary parts of the coherent amplitude
    and integral(W dx dp) = 1.  Using D(b)' Pi D(b)... = D(2b) Pi this
    equals (2/pi) Tr[rho D(2 beta) Pi]; the matrix elements
    <m|D(gamma)|n> are generated by the exact ladder recurrence, so the
    result is free of truncation error beyond that of rho itself (a
    truncated unitary exponential would corrupt W far from the origin).
    Returns a real array of shape (len(x_grid), len(p_grid)).
    """
    state_or_rho = np.asarray(state_or_rho, dtype=complex)
    if state_or_rho.ndim == 1:
        rho = np.outer(state_or_rho, state_or_rho.conj())
    else:
        rho = state_or_rho
    dim = rho.shape[0]
    if rho.shape != (dim, dim):
        raise ValueError(f"density matrix must be square, got {rho.shape}")
    x_grid = np.asarray(x_grid, dtype=float)
    p_grid = np.asarray(p_grid, dtype=float)

    X, P = np.meshgrid(x_grid, p_grid, indexing="ij")
    gamma = 2.0 * (X + 1j * P).ravel()
    sq = np.sqrt(np.arange(1.0, dim))
    signs = (-1.0) ** np.arange(dim)
    weights = rho * signs[:, None]  # weights[n, m] = rho[n, m] (-1)^n

    # row[:, n] holds <m|D(gamma)|n> for the current bra index m;
    # contract row by row: W = sum_{n,m} weights[n, m] <m|D|n>
    row = np.empty((gamma.size, dim), dtype=complex)
    row[:, 0] = np.exp(-0.5 * np.abs(gamma) ** 2)
    for n in range(1, dim):
        row[:, n] = row[:, n - 1] * (-np.conj(gamma)) / sq[n - 1]
    acc = row @ weights[:, 0]
    for m in range(1, dim):
        nxt = np.empty_like(row)
        nxt[:, 0] = gamma * row[:, 0] / sq[m - 1]
        nxt[:, 1:] = (gamma[:, None] * row[:, 1:] + sq * row[:, :-1]) / sq[m - 1]
        acc += nxt @ weights[:, m]
        row = nxt
    return (2.0 / np.pi) * acc.real.reshape(x_grid.size, p_grid.size)
