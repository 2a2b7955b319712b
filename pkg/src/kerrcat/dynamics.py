"""Time evolution and cross-validation of full vs cat-subspace dynamics.

Two propagation routes for the same physics:

  * `evolve_full`     -- master equation in truncated Fock space, stepped
                         with cached matrix exponentials (or explicit RK
                         for small, non-stiff problems),
  * `evolve_reduced`  -- the analytic 4x4 cat-subspace generator, solved
                         by eigenmode decomposition when the eigenbasis
                         is well conditioned and by `expm` stepping when
                         it degenerates (near exceptional points).

`fidelity_map` ties them together: it propagates an initial state both
ways over a (detuning, time) grid and reports the Uhlmann fidelity
between the reduced state and the cat-projected full state, plus the
population that leaked out of the cat span.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.integrate
import scipy.linalg

from .catspace import reduced_liouvillian
from .fock import cat_state, coherent_state, number_operator, parity_operator
from .liouville import devectorize, kerr_cat_liouvillian, vectorize
from .model import ModelParams, subspace_constants
from .records import SweepRecord

__all__ = [
    "Trajectory",
    "ModeDecomposition",
    "check_density_matrix",
    "evolve_full",
    "evolve_reduced",
    "decompose_modes",
    "project_to_cat",
    "embed_from_cat",
    "fidelity",
    "fidelity_map",
    "DEFAULT_DELTA_GRID",
    "DEFAULT_TIME_GRID",
]

_TRACE_TOL = 1e-8
_HERM_TOL = 1e-10
_EIG_FLOOR = -1e-8
_EIG_FLOOR_HARD = -1e-6
_COND_MAX = 1e8
# explicit RK45 needs ||L||*span steps of work; beyond this it is not a
# sensible integrator for the stiff vectorized Liouvillian
_RK_STIFF_LIMIT = 2.0e5

# detuning in rad/us covering delta/2pi in [-0.5, 0.5] MHz, and times in us
DEFAULT_DELTA_GRID = 2.0 * np.pi * np.linspace(-0.5, 0.5, 21)
DEFAULT_TIME_GRID = np.linspace(0.0, 60.0, 121)

INITIAL_STATES = ("catplus", "coherent")


def check_density_matrix(
    rho: np.ndarray,
    trace_tol: float = _TRACE_TOL,
    herm_tol: float = _HERM_TOL,
    eig_floor: float = _EIG_FLOOR,
) -> None:
    """Validate trace one, Hermiticity and positivity up to roundoff."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"trace {tr:.12g} deviates from 1 by more than {trace_tol:.1e}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > herm_tol:
        raise ValueError(f"Hermiticity defect {herm:.3e} exceeds {herm_tol:.1e}")
    wmin = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    if wmin < eig_floor:
        raise ValueError(f"minimum eigenvalue {wmin:.3e} below floor {eig_floor:.1e}")


def _check_time_grid(t_grid: np.ndarray) -> np.ndarray:
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise ValueError(f"time grid must be 1-D with >= 2 points, got shape {t.shape}")
    if not np.all(np.isfinite(t)) or np.any(np.diff(t) <= 0.0):
        raise ValueError("time grid must be finite and strictly increasing")
    return t


def _expm_steps(L: np.ndarray, v0: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Step v0 across t with per-gap cached matrix exponentials."""
    props: dict[float, np.ndarray] = {}
    out = np.empty((t.size, v0.size), dtype=complex)
    out[0] = v0
    v = v0
    for k in range(1, t.size):
        gap = float(t[k] - t[k - 1])
        P = props.get(gap)
        if P is None:
            P = scipy.linalg.expm(L * gap)
            props[gap] = P
        v = P @ v
        out[k] = v
    return out


def _trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    d = a - b
    d = 0.5 * (d + d.conj().T)
    return 0.5 * float(np.abs(np.linalg.eigvalsh(d)).sum())


def _settling_index(dist: np.ndarray) -> int:
    """First index from which the distance sequence is non-increasing."""
    tol = 1e-10 * max(1.0, float(dist[0]))
    idx = 0
    for k in range(dist.size - 1):
        if dist[k + 1] > dist[k] + tol:
            idx = k + 1
    return idx


@dataclass(frozen=True)
class Trajectory:
    """States on a time grid plus the observables used for validation.

    `states` holds full density matrices or reduced 4-vectors depending
    on origin; `path` records which solver produced them ("expm",
    "rk45" or "eigenmodes") and `degenerate` flags an ill-conditioned
    reduced eigenbasis that forced the expm fallback.  When a steady
    state is available, `distance_to_steady` carries the trace distance
    to it at each grid time and `settling_index` the first index from
    which that sequence is non-increasing (0 for a trajectory that
    contracts monotonically from the start, as a CPTP semigroup must).
    """

    times: np.ndarray
    states: np.ndarray
    photon_number: np.ndarray
    parity: np.ndarray
    subspace_population: np.ndarray
    path: str
    degenerate: bool = False
    distance_to_steady: np.ndarray | None = None
    settling_index: int | None = None

    @property
    def monotone(self) -> bool | None:
        if self.distance_to_steady is None:
            return None
        return self.settling_index == 0


def _full_steady(L: np.ndarray, dim: int) -> np.ndarray | None:
    """Steady state from a single bordered linear solve, or None.

    One row of `L vec(rho) = 0` is replaced by the trace constraint;
    a residual check rejects solutions the truncated Liouvillian does
    not actually annihilate.
    """
    A = L.copy()
    trace_row = vectorize(np.eye(dim)).conj()
    A[0, :] = trace_row
    b = np.zeros(dim * dim, dtype=complex)
    b[0] = 1.0
    try:
        v = np.linalg.solve(A, b)
    except np.linalg.LinAlgError:
        return None
    resid = float(np.linalg.norm(L @ v))
    if not np.isfinite(resid) or resid > 1e-6 * max(1.0, float(np.linalg.norm(v))):
        return None
    rho = devectorize(v)
    rho = 0.5 * (rho + rho.conj().T)
    tr = float(np.trace(rho).real)
    if abs(tr) < 1e-12:
        return None
    return rho / tr


def evolve_full(
    rho0: np.ndarray,
    params: ModelParams,
    t_grid: np.ndarray,
    dim: int | None = None,
    method: str = "expm",
    compute_steady: bool = True,
) -> Trajectory:
    """Propagate a density matrix under the full truncated Liouvillian.

    method="expm" steps with cached exponentials per unique grid gap
    (exact for the truncated generator, cost independent of stiffness).
    method="rk45" integrates adaptively and raises for problems where
    an explicit scheme would need a prohibitive number of steps.
    Output states are re-Hermitized; a trace drift beyond 1e-8 aborts,
    since it signals a truncation dimension too small for the state.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    check_density_matrix(rho0)
    if dim is None:
        dim = rho0.shape[0]
    if rho0.shape != (dim, dim):
        raise ValueError(f"rho0 shape {rho0.shape} does not match dim={dim}")
    t = _check_time_grid(t_grid)

    L = kerr_cat_liouvillian(params, dim)
    v0 = vectorize(rho0)
    if method == "expm":
        vecs = _expm_steps(L, v0, t)
    elif method == "rk45":
        stiffness = float(np.linalg.norm(L, 1)) * float(t[-1] - t[0])
        if stiffness > _RK_STIFF_LIMIT:
            raise RuntimeError(
                f"Liouvillian too stiff for explicit RK45: ||L||_1 * span = "
                f"{stiffness:.3e} exceeds {_RK_STIFF_LIMIT:.1e}; use "
                f"method='expm' or a smaller dim"
            )
        sol = scipy.integrate.solve_ivp(
            lambda _s, v: L @ v,
            (float(t[0]), float(t[-1])),
            v0,
            t_eval=t,
            method="RK45",
            rtol=1e-8,
            atol=1e-10,
        )
        if not sol.success:
            raise RuntimeError(f"adaptive integration failed: {sol.message}")
        vecs = sol.y.T.astype(complex)
    else:
        raise ValueError(f"method must be 'expm' or 'rk45', got {method!r}")

    states = np.empty((t.size, dim, dim), dtype=complex)
    for k in range(t.size):
        rho = devectorize(vecs[k])
        states[k] = 0.5 * (rho + rho.conj().T)
    traces = np.einsum("kii->k", states).real
    drift = float(np.max(np.abs(traces - 1.0)))
    if drift > _TRACE_TOL:
        raise RuntimeError(
            f"trace drift {drift:.3e} exceeds {_TRACE_TOL:.1e}; "
            f"increase the truncation dimension"
        )

    n_op = number_operator(dim)
    pi_op = parity_operator(dim)
    cp = cat_state(params.alpha, "even", dim)
    cm = cat_state(params.alpha, "odd", dim)
    photon = np.einsum("ij,kji->k", n_op, states).real
    parity = np.einsum("ij,kji->k", pi_op, states).real
    pop = (
        np.einsum("i,kij,j->k", cp.conj(), states, cp)
        + np.einsum("i,kij,j->k", cm.conj(), states, cm)
    ).real

    dist = None
    settle = None
    if compute_steady and params.kappa > 0.0:
        rho_ss = _full_steady(L, dim)
        if rho_ss is not None:
            dist = np.array([_trace_distance(states[k], rho_ss) for k in range(t.size)])
            settle = _settling_index(dist)

    return Trajectory(
        times=t,
        states=states,
        photon_number=photon,
        parity=parity,
        subspace_population=pop,
        path=method,
        degenerate=False,
        distance_to_steady=dist,
        settling_index=settle,
    )


def _check_reduced_state(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.shape != (4,):
        raise ValueError(f"reduced state must have 4 components, got shape {v.shape}")
    if abs(v[0].imag) > _HERM_TOL or abs(v[3].imag) > _HERM_TOL:
        raise ValueError("diagonal components rho_++ and rho_-- must be real")
    if abs(v[1] - v[2].conjugate()) > _HERM_TOL:
        raise ValueError("off-diagonal components must be complex conjugates")
    if v[0].real < _EIG_FLOOR or v[3].real < _EIG_FLOOR:
        raise ValueError("negative population in reduced state")
    return v


def _as_two_by_two(v: np.ndarray) -> np.ndarray:
    m = np.array([[v[0], v[1]], [v[2], v[3]]], dtype=complex)
    return 0.5 * (m + m.conj().T)


def _solve_reduced(
    L4: np.ndarray, v0: np.ndarray, t: np.ndarray
) -> tuple[np.ndarray, str, bool]:
    """Reduced states on t, preferring eigenmodes, total via expm.

    The eigenmode route is taken when the eigenvector matrix is well
    conditioned AND reproduces the conserved subspace trace to 1e-10;
    otherwise the trajectory is recomputed by expm stepping, which has
    no conditioning failure mode.
    """
    tr0 = float((v0[0] + v0[3]).real)
    w, V = scipy.linalg.eig(L4)
    cond = float(np.linalg.cond(V))
    if np.isfinite(cond) and cond < _COND_MAX:
        c = np.linalg.solve(V, v0)
        phases = np.exp(np.outer(t - t[0], w))
        states = phases * c[None, :] @ V.T
        tr = (states[:, 0] + states[:, 3]).real
        if float(np.max(np.abs(tr - tr0))) <= 1e-10 * max(1.0, abs(tr0)):
            return states, "eigenmodes", False
    states = _expm_steps(L4, v0, t)
    tr = (states[:, 0] + states[:, 3]).real
    drift = float(np.max(np.abs(tr - tr0)))
    if drift > 1e-10 * max(1.0, abs(tr0)):
        raise RuntimeError(f"reduced trace drift {drift:.3e}; generator inconsistent")
    return states, "expm", True


def evolve_reduced(
    v0: np.ndarray,
    params: ModelParams,
    t_grid: np.ndarray,
) -> Trajectory:
    """Propagate a cat-subspace 4-vector (rho_++, rho_+-, rho_-+, rho_--).

    Eigenmode decomposition is used when the generator's eigenbasis is
    well conditioned; otherwise (near exceptional points, where
    eigenvectors coalesce and the basis degenerates) the trajectory
    falls back to expm stepping and is flagged `degenerate`.  The
    subspace trace is conserved to 1e-10 on every returned trajectory.
    """
    v0 = _check_reduced_state(v0)
    t = _check_time_grid(t_grid)
    L4 = reduced_liouvillian(params)
    states, path, degenerate = _solve_reduced(L4, v0, t)
    w, V = scipy.linalg.eig(L4)

    tr = (states[:, 0] + states[:, 3]).real
    tr0 = float((v0[0] + v0[3]).real)

    consts = subspace_constants(params.alpha)
    p_sq = consts.p * consts.p
    a2 = params.alpha_sq
    photon = a2 * (p_sq * states[:, 0] + states[:, 3] / p_sq).real
    parity = (states[:, 0] - states[:, 3]).real

    dist = None
    settle = None
    if params.kappa > 0.0:
        order = np.argsort(np.abs(w))
        scale = float(np.abs(w).max())
        if float(np.abs(w[order[0]])) <= 1e-8 * max(scale, 1e-300):
            null = V[:, order[0]]
            tr_null = null[0] + null[3]
            if abs(tr_null) > 1e-12:
                v_ss = null * (tr0 / tr_null)
                m_ss = _as_two_by_two(v_ss)
                dist = np.array(
                    [_trace_distance(_as_two_by_two(states[k]), m_ss) for k in range(t.size)]
                )
                settle = _settling_index(dist)

    return Trajectory(
        times=t,
        states=states,
        photon_number=photon,
        parity=parity,
        subspace_population=tr,
        path=path,
        degenerate=degenerate,
        distance_to_steady=dist,
        settling_index=settle,
    )


@dataclass(frozen=True)
class ModeDecomposition:
    """Eigenmode expansion v(t) = sum_i c_i exp(E_i t) mode_i.

    `modes` holds unit-norm right eigenvectors as columns, ordered by
    descending real part of the eigenvalue (slowest decay first).
    """

    eigenvalues: np.ndarray
    modes: np.ndarray
    coefficients: np.ndarray

    def reconstruct(self, t: float = 0.0) -> np.ndarray:
        return self.modes @ (self.coefficients * np.exp(self.eigenvalues * t))


def decompose_modes(v0: np.ndarray, params: ModelParams) -> ModeDecomposition:
    """Expand a reduced state over the 4x4 generator's eigenmodes.

    Raises when the eigenbasis condition number reaches 1e8, at which
    point mode coefficients stop being meaningful (exceptional-point
    degeneracy); callers should fall back to `evolve_reduced`, which
    switches to expm stepping in that regime.
    """
    v0 = _check_reduced_state(v0)
    L4 = reduced_liouvillian(params)
    w, V = scipy.linalg.eig(L4)
    cond = float(np.linalg.cond(V))
    if not np.isfinite(cond) or cond >= _COND_MAX:
        raise RuntimeError(
            f"degenerate eigenbasis: cond(V) = {cond:.3e} >= {_COND_MAX:.1e}"
        )
    order = np.argsort(-w.real)
    w = w[order]
    V = V[:, order]
    c = np.linalg.solve(V, v0)
    return ModeDecomposition(eigenvalues=w, modes=V, coefficients=c)


def _cat_pair(alpha: float, dim: int) -> tuple[np.ndarray, np.ndarray]:
    return cat_state(alpha, "even", dim), cat_state(alpha, "odd", dim)


def project_to_cat(rho: np.ndarray, alpha: float, dim: int | None = None) -> np.ndarray:
    """Project a full density matrix onto the cat pair at amplitude alpha.

    Returns (rho_++, rho_+-, rho_-+, rho_--); the trace of the result is
    the population retained in the cat span, so 1 minus it is leakage.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"expected a square density matrix, got shape {rho.shape}")
    if dim is None:
        dim = rho.shape[0]
    if rho.shape != (dim, dim):
        raise ValueError(f"rho shape {rho.shape} does not match dim={dim}")
    cp, cm = _cat_pair(alpha, dim)
    return np.array(
        [
            cp.conj() @ rho @ cp,
            cp.conj() @ rho @ cm,
            cm.conj() @ rho @ cp,
            cm.conj() @ rho @ cm,
        ]
    )


def embed_from_cat(v: np.ndarray, alpha: float, dim: int) -> np.ndarray:
    """Rebuild the Fock-space operator with cat-subspace components v."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.shape != (4,):
        raise ValueError(f"expected 4 components, got shape {v.shape}")
    cp, cm = _cat_pair(alpha, dim)
    return (
        v[0] * np.outer(cp, cp.conj())
        + v[1] * np.outer(cp, cm.conj())
        + v[2] * np.outer(cm, cp.conj())
        + v[3] * np.outer(cm, cm.conj())
    )


def _clip_spectrum(w: np.ndarray, what: str) -> np.ndarray:
    wmin = float(w.min())
    if wmin < _EIG_FLOOR_HARD:
        raise ValueError(f"{what} has eigenvalue {wmin:.3e} below {_EIG_FLOOR_HARD:.1e}")
    w = np.clip(w, 0.0, None)
    # roundoff eigenvalues of order eps enter the fidelity as sqrt(eps);
    # zero them so rank-deficient (pure-state) inputs stay exact
    floor = float(w.max()) * w.size * 8.0 * np.finfo(float).eps
    w[w < floor] = 0.0
    return w


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    Eigenvalues in [-1e-8, 0) are treated as roundoff and clipped to
    zero; anything below -1e-6 is rejected as not a state.
    """
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape or rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"shape mismatch: {rho.shape} vs {sigma.shape}")
    w, U = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    w = _clip_spectrum(w, "rho")
    sqrt_rho = (U * np.sqrt(w)) @ U.conj().T
    inner = sqrt_rho @ (0.5 * (sigma + sigma.conj().T)) @ sqrt_rho
    lam = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    lam = _clip_spectrum(lam, "sqrt(rho) sigma sqrt(rho)")
    f = float(np.sqrt(lam).sum() ** 2)
    if f > 1.0 + 1e-8:
        raise RuntimeError(f"fidelity {f:.12g} exceeds 1 beyond roundoff")
    return min(f, 1.0)


def _initial_full(name: str, alpha: float, dim: int) -> np.ndarray:
    if name == "catplus":
        psi = cat_state(alpha, "even", dim)
    elif name == "coherent":
        psi = coherent_state(alpha, dim)
    else:
        raise ValueError(f"initial state must be one of {INITIAL_STATES}, got {name!r}")
    return np.outer(psi, psi.conj())


def _fidelity_column(args: tuple) -> list[tuple]:
    """All (initial, t) fidelity rows for one detuning; runs in workers.

    The full-space propagator is built once per column and shared by
    every initial state, which dominates the cost at dim ~ 40.  The
    comparison state is the reduced 2x2 state embedded back into Fock
    space, so leakage out of the cat span depresses the fidelity.
    """
    (delta, base, t_tuple, dim, initials) = args
    params = ModelParams(
        delta=delta,
        kerr=base[1],
        two_photon=base[2],
        drive=base[3],
        kappa=base[4],
    )
    t = np.asarray(t_tuple, dtype=float)
    alpha = params.alpha
    L = kerr_cat_liouvillian(params, dim)
    props = {}
    for gap in sorted({float(g) for g in np.diff(t)}):
        props[gap] = scipy.linalg.expm(L * gap)
    L4 = reduced_liouvillian(params)

    rows = []
    for name in initials:
        rho0 = _initial_full(name, alpha, dim)
        v = vectorize(rho0)
        red, _path, _deg = _solve_reduced(L4, project_to_cat(rho0, alpha, dim), t)
        for k in range(t.size):
            if k > 0:
                v = props[float(t[k] - t[k - 1])] @ v
            rho = devectorize(v)
            rho = 0.5 * (rho + rho.conj().T)
            v4 = project_to_cat(rho, alpha, dim)
            leak = 1.0 - float((v4[0] + v4[3]).real)
            sigma = embed_from_cat(red[k], alpha, dim)
            f = fidelity(rho, sigma)
            rows.append((name, float(delta), float(t[k]), f, leak))
    return rows


def fidelity_map(
    initial: str | Sequence[str],
    params_base: ModelParams,
    delta_grid: np.ndarray | None = None,
    t_grid: np.ndarray | None = None,
    eps_on: bool = True,
    dim: int = 40,
    workers: int = 1,
) -> list[SweepRecord]:
    """Reduced-vs-full fidelity and leakage over a (detuning, time) grid.

    For each detuning the initial state is evolved under the full
    truncated master equation and, after projection, under the 4x4
    reduced generator; each record carries the Uhlmann fidelity between
    the full state and the embedded reduced state, plus the population
    leaked out of the cat span.  With eps_on=False the single-photon
    drive of params_base is switched off.  Row order is (delta,
    initial, t) regardless of worker count, so serialized output is
    deterministic.
    """
    deltas = np.asarray(
        DEFAULT_DELTA_GRID if delta_grid is None else delta_grid, dtype=float
    ).reshape(-1)
    if deltas.size == 0 or not np.all(np.isfinite(deltas)):
        raise ValueError("delta grid must be non-empty and finite")
    t = _check_time_grid(DEFAULT_TIME_GRID if t_grid is None else t_grid)
    if dim < 12:
        raise ValueError(f"dim {dim} too small to hold the cat pair reliably")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    initials = (initial,) if isinstance(initial, str) else tuple(initial)
    for name in initials:
        if name not in INITIAL_STATES:
            raise ValueError(f"initial state must be one of {INITIAL_STATES}, got {name!r}")

    drive = params_base.drive if eps_on else 0.0
    base = (params_base.delta, params_base.kerr, params_base.two_photon, drive, params_base.kappa)
    jobs = [(float(d), base, tuple(map(float, t)), dim, initials) for d in deltas]
    if workers == 1:
        columns = [_fidelity_column(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            columns = list(pool.map(_fidelity_column, jobs, chunksize=1))

    records = []
    for d, rows in zip(deltas, columns):
        params_d = params_base.replace(delta=float(d), drive=drive)
        for name, delta, t_k, f, leak in rows:
            records.append(
                SweepRecord(
                    params=params_d,
                    coords=(("delta", delta), ("t", t_k)),
                    values=(("fidelity", f), ("leakage", leak)),
                    label=name,
                )
            )
    return records
