"""Vectorization, full-space Liouvillian assembly, spectrum, steady state.

Vectorization is ROW-stacking: vec(rho)[i*N + j] = rho[i, j].  Under
this convention the Lindblad generator takes the matrix form

    L = -i (H (x) I - I (x) H^T)
        + sum_k [ G_k (x) conj(G_k)
                  - (G_k' G_k (x) I)/2 - (I (x) G_k^T conj(G_k))/2 ]

with (x) the Kronecker product and G_k the jump operators.  Column
stacking would transpose the Kronecker factors; mixing the two is the
classic silent sign bug this module pins down.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .fock import annihilation, build_hamiltonian
from .model import ModelParams


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Row-stack a square matrix into a vector."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"expected square matrix, got shape {rho.shape}")
    return rho.reshape(-1)


def devectorize(v: np.ndarray) -> np.ndarray:
    """Inverse of vectorize."""
    v = np.asarray(v)
    n = int(round(np.sqrt(v.size)))
    if n * n != v.size:
        raise ValueError(f"vector length {v.size} is not a perfect square")
    return v.reshape(n, n)


def build_liouvillian(H: np.ndarray, jumps: list[np.ndarray]) -> np.ndarray:
    """Dense Lindblad superoperator in row-stacking convention."""
    H = np.asarray(H, dtype=complex)
    n = H.shape[0]
    if H.shape != (n, n):
        raise ValueError(f"H must be square, got {H.shape}")
    eye = np.eye(n, dtype=complex)
    L = -1j * (np.kron(H, eye) - np.kron(eye, H.T))
    for G in jumps:
        G = np.asarray(G, dtype=complex)
        if G.shape != (n, n):
            raise ValueError(f"jump operator shape {G.shape} != {(n, n)}")
        GdG = G.conj().T @ G
        L += (
            np.kron(G, G.conj())
            - 0.5 * np.kron(GdG, eye)
            - 0.5 * np.kron(eye, GdG.T)
        )
    return L


def kerr_cat_liouvillian(params: ModelParams, dim: int) -> np.ndarray:
    """Full-space Liouvillian of the lossy Kerr resonator model."""
    H = build_hamiltonian(params, dim)
    jump = np.sqrt(params.kappa) * annihilation(dim)
    return build_liouvillian(H, [jump])


@dataclass
class Spectrum:
    """Eigen-decomposition of a Liouvillian.

    Eigenvalues are sorted by descending real part, ties broken by
    ascending imaginary part; eigenvector columns follow the same order.
    Left/right pairs are normalized to l_i' r_i = 1 where possible, so
    biorthogonality l_i' r_j = delta_ij holds away from exceptional
    points.
    """

    eigenvalues: np.ndarray
    right_eigenvectors: np.ndarray
    left_eigenvectors: np.ndarray


def spectrum(L: np.ndarray) -> Spectrum:
    L = np.asarray(L, dtype=complex)
    if not np.all(np.isfinite(L)):
        raise ValueError("Liouvillian contains non-finite entries")
    try:
        w, vl, vr = scipy.linalg.eig(L, left=True, right=True)
    except Exception as exc:  # pragma: no cover - LAPACK failure is exotic
        raise RuntimeError(
            f"dense eigensolver failed on {L.shape[0]}x{L.shape[1]} matrix "
            f"(1-norm {np.abs(L).sum(axis=0).max():.3e}): {exc}"
        ) from exc
    order = np.lexsort((w.imag, -w.real))
    w, vl, vr = w[order], vl[:, order], vr[:, order]
    # scale left vectors for biorthonormality; keep unscaled where the
    # pairing is numerically defective (at an EP l_i' r_i -> 0)
    for i in range(w.size):
        c = vl[:, i].conj() @ vr[:, i]
        if np.abs(c) > 1e-12:
            vl[:, i] = vl[:, i] / np.conj(c)
    return Spectrum(eigenvalues=w, right_eigenvectors=vr, left_eigenvectors=vl)


def steady_state(
    L: np.ndarray, residual_tol: float = 1e-8, null_tol: float = 1e-8
) -> np.ndarray:
    """Normalized steady-state density matrix from the null eigenvector.

    The eigenvalue nearest zero is taken, its eigenvector is reshaped,
    Hermitized and trace-normalized.  A residual check ||L vec(rho)||
    guards against picking a slow non-stationary mode, and more than one
    eigenvalue inside the null tolerance raises an ambiguity error.
    """
    L = np.asarray(L, dtype=complex)
    w, vr = scipy.linalg.eig(L, right=True)
    idx = np.argsort(np.abs(w))
    if w.size > 1 and np.abs(w[idx[1]]) < null_tol:
        raise RuntimeError(
            f"degenerate Liouvillian null space: |E| = {np.abs(w[idx[0]]):.3e} "
            f"and {np.abs(w[idx[1]]):.3e} both below {null_tol:.1e}"
        )
    rho = devectorize(vr[:, idx[0]])
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if abs(tr) < 1e-12:
        raise RuntimeError("null eigenvector has vanishing trace; not a state")
    rho = rho / tr
    resid = float(np.linalg.norm(L @ vectorize(rho)))
    if resid > residual_tol:
        raise RuntimeError(
            f"steady-state residual ||L vec(rho)|| = {resid:.3e} exceeds "
            f"{residual_tol:.1e}; nearest eigenvalue {w[idx[0]]:.3e}"
        )
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -1e-8:
        raise RuntimeError(f"steady state not PSD: min eigenvalue {evals.min():.3e}")
    return rho
