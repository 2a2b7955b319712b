"""Exceptional-point detection in the (eps, delta) plane.

LEP2 lines are the zero set of the cubic discriminant q^2 - m^3; LEP3
points are the simultaneous zeros q = m = 0.  Detection runs on the
closed-form invariants, which are polynomial in the parameters and
therefore well-conditioned, while `coalescence_metric` supplies the
independent eigenvector-level confirmation.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .catspace import cubic_invariants, reduced_liouvillian
from .model import ModelParams, subspace_constants

logger = logging.getLogger(__name__)

__all__ = [
    "EpPoint",
    "discriminant",
    "lep2_delta_roots",
    "lep2_trace",
    "lep3_closed_form",
    "lep3_numeric",
    "coalescence_metric",
]


@dataclass(frozen=True)
class EpPoint:
    """A certified exceptional point (order 2 on a line, 3 at a vertex)."""

    eps: float
    delta: float
    order: int
    disc_residual: float  # |q^2 - m^3|
    q: float
    m: float
    coalescence: float

    def __post_init__(self) -> None:
        if self.order not in (2, 3):
            raise ValueError(f"order must be 2 or 3, got {self.order}")


def _params(alpha: float, kappa: float, eps: float, delta: float) -> ModelParams:
    # q, m depend on (alpha, kappa, eps, delta) only; kerr is a dummy scale
    return ModelParams(
        delta=delta, kerr=1.0, two_photon=alpha * alpha, drive=eps, kappa=kappa
    )


def discriminant(params: ModelParams, consts=None) -> float:
    """q^2 - m^3; zero exactly on LEP2 lines and LEP3 points.

    Negative where the nonzero triple is real and distinct (in
    particular at eps = delta = 0, where it equals
    -(kappa alpha^2)^6 p2m^4 / 432), positive where a complex pair is
    present.
    """
    inv = cubic_invariants(params, consts)
    return inv.q * inv.q - inv.m**3


def coalescence_metric(
    reduced: np.ndarray, null_tol: float = 1e-8, return_all: bool = False
):
    """Largest pairwise eigenvector overlap of the nonzero triple.

    Right eigenvectors of the 4x4 reduced Liouvillian, steady-state mode
    (eigenvalue nearest zero) excluded, each normalized; returns the
    maximum |<v_i|v_j>| over the three distinct pairs, -> 1 at an EP.
    With return_all=True returns the three overlaps sorted descending,
    so the second entry certifies order-3 coalescence.
    """
    reduced = np.asarray(reduced, dtype=complex)
    if reduced.shape != (4, 4):
        raise ValueError(f"expected a 4x4 reduced Liouvillian, got {reduced.shape}")
    w, v = np.linalg.eig(reduced)
    order = np.argsort(np.abs(w))
    scale = max(np.abs(w).max(), 1.0e-300)
    if np.abs(w[order[0]]) > null_tol * scale:
        raise ValueError(
            "no eigenvalue near zero: matrix is not a trace-preserving "
            f"reduced Liouvillian (min |E| = {np.abs(w[order[0]]):.3e})"
        )
    v = v[:, order[1:]]
    v /= np.linalg.norm(v, axis=0)
    gram = np.abs(v.conj().T @ v)
    overlaps = sorted((gram[0, 1], gram[0, 2], gram[1, 2]), reverse=True)
    return tuple(overlaps) if return_all else overlaps[0]


def _ep_point(
    alpha: float, kappa: float, eps: float, delta: float, order: int, consts
) -> EpPoint:
    params = _params(alpha, kappa, eps, delta)
    inv = cubic_invariants(params, consts)
    metric = coalescence_metric(reduced_liouvillian(params, consts))
    return EpPoint(
        eps=eps,
        delta=delta,
        order=order,
        disc_residual=abs(inv.q * inv.q - inv.m**3),
        q=inv.q,
        m=inv.m,
        coalescence=metric,
    )


def lep2_delta_roots(
    alpha: float,
    kappa: float,
    eps: float,
    delta_max: float | None = None,
    n_cells: int = 1200,
) -> list[float]:
    """All delta >= 0 roots of the discriminant at fixed eps.

    Sign-change bracketing on a uniform scan followed by Brent
    refinement to relative tolerance 1e-10 in delta.
    """
    consts = subspace_constants(alpha)
    if delta_max is None:
        delta_max = 1.25 * max(kappa / consts.pj_minus[2], _lep3_delta(consts, kappa))

    def f(delta: float) -> float:
        return discriminant(_params(alpha, kappa, eps, delta), consts)

    grid = np.linspace(0.0, delta_max, n_cells + 1)
    vals = np.array([f(d) for d in grid])
    sgn = np.sign(vals)
    roots = [float(grid[i]) for i in np.nonzero(vals == 0.0)[0]]
    for i in np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]:
        roots.append(
            brentq(f, grid[i], grid[i + 1], xtol=1e-300, rtol=1e-10, maxiter=200)
        )
    return sorted(roots)


def lep2_trace(
    alpha: float,
    kappa: float,
    eps_range: tuple[float, float] | None = None,
    n_seeds: int = 49,
) -> list[list[EpPoint]]:
    """LEP2 curves traced over the first quadrant plus mirror images.

    Scans eps slices, finds delta roots per slice, and assembles them
    into polylines by nearest-neighbor continuation.  When a slice loses
    roots relative to its predecessor the scan density doubles (three
    times at most) before the affected curves are terminated: curves may
    genuinely end, pinching off at an LEP3.  Returns the traced
    quadrant-I polylines followed by their (-eps, delta), (eps, -delta),
    (-eps, -delta) images; kappa = 0 yields no curves.
    """
    if kappa < 0:
        raise ValueError("kappa must be >= 0")
    consts = subspace_constants(alpha)
    if eps_range is None:
        eps_range = (0.0, 1.05 * _lep3_eps(consts, kappa))
    eps_grid = np.linspace(eps_range[0], eps_range[1], n_seeds)
    delta_max = 1.25 * max(kappa / consts.pj_minus[2], _lep3_delta(consts, kappa))
    # curves fragment rather than cross-stitch when a branch moves more
    # than this per slice
    jump_max = 0.08 * delta_max

    closed_curves: list[list[EpPoint]] = []
    open_curves: list[list[EpPoint]] = []
    prev_count = 0
    for eps in eps_grid:
        cells = 1200
        roots = lep2_delta_roots(alpha, kappa, float(eps), delta_max, n_cells=cells)
        while len(roots) < prev_count and cells < 1200 * 8:
            cells *= 2
            roots = lep2_delta_roots(alpha, kappa, float(eps), delta_max, n_cells=cells)
        prev_count = len(roots)
        points = [_ep_point(alpha, kappa, float(eps), r, 2, consts) for r in roots]

        matched: set[int] = set()
        fresh: list[list[EpPoint]] = []
        for pt in points:
            best = None
            for curve in open_curves:
                if id(curve) in matched:
                    continue
                d = abs(curve[-1].delta - pt.delta)
                if d > jump_max:
                    continue
                if best is None or d < abs(best[-1].delta - pt.delta):
                    best = curve
            if best is not None:
                best.append(pt)
                matched.add(id(best))
            else:
                fresh.append([pt])
        for curve in open_curves:
            if id(curve) not in matched:
                logger.info(
                    "curve terminated at eps=%.6g after %d points (last delta=%.6g)",
                    eps,
                    len(curve),
                    curve[-1].delta,
                )
                closed_curves.append(curve)
        open_curves = [c for c in open_curves if id(c) in matched] + fresh

    curves = [c for c in closed_curves + open_curves if len(c) >= 2]
    images = []
    for curve in curves:
        for se, sd in ((-1, 1), (1, -1), (-1, -1)):
            images.append(
                [
                    EpPoint(
                        eps=se * p.eps,
                        delta=sd * p.delta,
                        order=p.order,
                        disc_residual=p.disc_residual,
                        q=p.q,
                        m=p.m,
                        coalescence=p.coalescence,
                    )
                    for p in curve
                ]
            )
    return curves + images


def _lep3_eps(consts, kappa: float) -> float:
    p = consts.p
    p2 = p * p
    return (
        math.sqrt(6.0)
        * kappa
        / 18.0
        * consts.alpha
        * (p2 * p2 + 1.0) ** 1.5
        / (p * (p2 + 1.0) ** 2)
    )


def _lep3_delta(consts, kappa: float) -> float:
    p2 = consts.p ** 2
    one_minus_p2 = consts.pj_minus[1] * consts.p  # 1 - p^2, cancellation-free
    if one_minus_p2 <= 0.0:
        raise OverflowError(
            f"alpha = {consts.alpha} too large: p^2 - 1 underflows and the "
            "LEP3 detuning diverges"
        )
    return (
        math.sqrt(3.0)
        * kappa
        / 18.0
        * (p2 * p2 + 6.0 * p2 + 1.0) ** 1.5
        / (one_minus_p2 * (p2 + 1.0) ** 2)
    )


def lep3_closed_form(alpha: float, kappa: float) -> list[EpPoint]:
    """The four symmetry images (+-eps3, +-delta3) of the LEP3.

    |eps3| = sqrt(6) kappa/18 * alpha (p^4+1)^(3/2) / (p (p^2+1)^2) and
    |delta3| = sqrt(3) kappa/18 * (p^4+6p^2+1)^(3/2) / (|p^2-1| (p^2+1)^2);
    the detuning is reported as a magnitude since p < 1 makes p^2 - 1
    negative.  Raises OverflowError when alpha is so large that p^2 - 1
    underflows to zero.
    """
    if kappa <= 0 or alpha <= 0:
        raise ValueError("lep3_closed_form requires kappa > 0 and alpha > 0")
    consts = subspace_constants(alpha)
    eps3 = _lep3_eps(consts, kappa)
    delta3 = _lep3_delta(consts, kappa)
    ref = _ep_point(alpha, kappa, eps3, delta3, 3, consts)
    return [
        EpPoint(
            eps=se * eps3,
            delta=sd * delta3,
            order=3,
            disc_residual=ref.disc_residual,
            q=ref.q,
            m=ref.m,
            coalescence=ref.coalescence,
        )
        for se, sd in ((1, 1), (-1, 1), (1, -1), (-1, -1))
    ]


def lep3_numeric(
    alpha: float, kappa: float, seed: tuple[float, float], max_iter: int = 100
) -> EpPoint:
    """LEP3 located by 2D Newton iteration on (q, m) = (0, 0).

    Works on the nondimensionalized residual (q/x^3, m/x^2) with
    x = kappa alpha^2 and a finite-difference Jacobian; converges to
    residual < 1e-12 and lands on the closed-form point to relative
    1e-8.  A seed at the origin sits on a symmetry point where the
    Jacobian is singular (q, m are even in both coordinates) and raises.
    """
    consts = subspace_constants(alpha)
    x = kappa * alpha * alpha
    scale = np.array([x**3, x**2])

    def residual(z: np.ndarray) -> np.ndarray:
        inv = cubic_invariants(_params(alpha, kappa, z[0], z[1]), consts)
        return np.array([inv.q, inv.m]) / scale

    def converged(z: np.ndarray) -> bool:
        # 1e-12 in units of x^k, relaxed to the invariants' own roundoff
        # floor where term cancellation dominates (large delta3 / x)
        inv = cubic_invariants(_params(alpha, kappa, z[0], z[1]), consts)
        return abs(inv.q) <= max(1e-12 * scale[0], 4.0 * inv.q_floor) and abs(
            inv.m
        ) <= max(1e-12 * scale[1], 4.0 * inv.m_floor)

    z = np.array(seed, dtype=float)
    trace = [z.copy()]
    r = residual(z)
    for _ in range(max_iter):
        if converged(z):
            ep = _ep_point(alpha, kappa, float(z[0]), float(z[1]), 3, consts)
            return ep
        jac = np.empty((2, 2))
        for k in range(2):
            h = 1e-6 * max(abs(z[k]), 1e-4 * x)
            zp, zm = z.copy(), z.copy()
            zp[k] += h
            zm[k] -= h
            jac[:, k] = (residual(zp) - residual(zm)) / (2.0 * h)
        try:
            step = np.linalg.solve(jac, r)
        except np.linalg.LinAlgError:
            raise RuntimeError(
                f"Jacobian singular at {z.tolist()} (trace: {[t.tolist() for t in trace]})"
            ) from None
        if not np.all(np.isfinite(step)) or np.linalg.cond(jac) > 1e12:
            raise RuntimeError(
                f"Jacobian singular at {z.tolist()} (trace: {[t.tolist() for t in trace]})"
            )
        # backtracking keeps the iteration inside the basin
        lam = 1.0
        for _ in range(20):
            z_new = z - lam * step
            r_new = residual(z_new)
            if np.abs(r_new).max() < np.abs(r).max():
                break
            lam *= 0.5
        else:
            raise RuntimeError(
                f"no convergence from seed {list(seed)} "
                f"(trace: {[t.tolist() for t in trace]})"
            )
        z, r = z_new, r_new
        trace.append(z.copy())
    raise RuntimeError(
        f"no convergence in {max_iter} iterations from seed {list(seed)} "
        f"(trace: {[t.tolist() for t in trace]})"
    )
