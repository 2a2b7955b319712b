"""Resultant-vector winding numbers certifying LEP3 topology.

The planar vector (R1, R2) of symmetric eigenvalue polynomials vanishes
only at a triple degeneracy, so its winding number around a closed
(eps, delta) contour counts enclosed LEP3s with orientation sign.
Components are nondimensionalized by powers of x = kappa alpha^2
(R1 ~ x^6, R2 ~ x^3) so tolerances are scale-invariant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .catspace import cardano_eigenvalues, cubic_invariants
from .model import ModelParams, subspace_constants

__all__ = [
    "Contour",
    "ResultantVector",
    "WindingResult",
    "resultant_vector",
    "winding_number",
    "winding_trajectory",
]

_ANGLE_STEP_MAX = math.pi / 2
_SAMPLE_CAP = 46080
_EP_NORM_TOL = 1e-8  # nondimensional ||(r1, r2)|| floor along a contour


@dataclass(frozen=True)
class Contour:
    """Closed sampling path in the (eps, delta) plane.

    Either a circle (center + radius) or a closed polyline through
    `vertices`; phi in [0, 2pi] parameterizes one full traversal.
    """

    kind: str = "circle"
    center: tuple[float, float] = (0.0, 0.0)
    radius: float = 0.0
    vertices: tuple[tuple[float, float], ...] = field(default_factory=tuple)
    samples: int = 720

    def __post_init__(self) -> None:
        if self.kind not in ("circle", "polyline"):
            raise ValueError(f"kind must be 'circle' or 'polyline', got {self.kind!r}")
        if self.samples < 8:
            raise ValueError("need at least 8 samples")
        if self.kind == "circle":
            if not self.radius > 0:
                raise ValueError("circle contour needs radius > 0")
        else:
            if len(self.vertices) < 3:
                raise ValueError("polyline contour needs at least 3 vertices")

    def point(self, phi: float) -> tuple[float, float]:
        """Map phi in [0, 2pi] to an (eps, delta) point; closed at 2pi."""
        if self.kind == "circle":
            return (
                self.center[0] + self.radius * math.cos(phi),
                self.center[1] + self.radius * math.sin(phi),
            )
        verts = list(self.vertices)
        if verts[0] != verts[-1]:
            verts = verts + [verts[0]]
        seg = np.array(verts)
        lengths = np.hypot(*(seg[1:] - seg[:-1]).T)
        total = lengths.sum()
        if total == 0.0:
            raise ValueError("degenerate polyline")
        s = (phi % (2.0 * math.pi)) / (2.0 * math.pi) * total
        if phi >= 2.0 * math.pi:
            s = total
        acc = 0.0
        for k in range(len(lengths)):
            ell = lengths[k]
            if s <= acc + ell or k == len(lengths) - 1:
                f = 0.0 if ell == 0 else min(max((s - acc) / ell, 0.0), 1.0)
                (x0, y0), (x1, y1) = seg[k], seg[k + 1]
                return (x0 + f * (x1 - x0), y0 + f * (y1 - y0))
            acc += ell
        return (float(seg[-1][0]), float(seg[-1][1]))


@dataclass(frozen=True)
class ResultantVector:
    r1: float
    r2: float

    @property
    def norm(self) -> float:
        return math.hypot(self.r1, self.r2)


@dataclass(frozen=True)
class WindingResult:
    winding: int
    raw: float
    samples: int
    min_norm: float
    contour: Contour


def resultant_vector(E2: complex, E3: complex, E4: complex) -> ResultantVector:
    """R1 = -prod (E_i - E_j)^2, R2 = -8 prod (E_i + E_j - 2 E_k).

    Symmetric in the three eigenvalues.  The inputs must form a
    conjugation-closed triple of a real cubic, so both values are real;
    a larger imaginary residue is a domain error.
    """
    d23, d24, d34 = E2 - E3, E2 - E4, E3 - E4
    R1 = -(d23 * d23 * d24 * d24 * d34 * d34)
    R2 = -8.0 * (E2 + E3 - 2 * E4) * (E2 + E4 - 2 * E3) * (E3 + E4 - 2 * E2)
    for val in (R1, R2):
        if abs(val.imag) > 1e-9 * max(abs(val), 1e-300):
            raise ValueError(
                "eigenvalues are not conjugation-closed: imaginary residue "
                f"{val.imag:.3e} on |value| {abs(val):.3e}"
            )
    return ResultantVector(r1=float(R1.real), r2=float(R2.real))


def _resultant_fn(alpha: float, kappa: float, fast: bool):
    consts = subspace_constants(alpha)
    x = kappa * alpha * alpha
    if x <= 0:
        raise ValueError("winding requires kappa > 0 and alpha > 0")
    x3, x6 = x**3, x**6

    def params(eps: float, delta: float) -> ModelParams:
        return ModelParams(
            delta=delta, kerr=1.0, two_photon=alpha * alpha, drive=eps, kappa=kappa
        )

    if fast:

        def fn(eps: float, delta: float) -> tuple[float, float]:
            inv = cubic_invariants(params(eps, delta), consts)
            return (
                108.0 * (inv.q * inv.q - inv.m**3) / x6,
                432.0 * inv.q / x3,
            )

    else:

        def fn(eps: float, delta: float) -> tuple[float, float]:
            s = cardano_eigenvalues(params(eps, delta), consts)
            rv = resultant_vector(s.E2, s.E3, s.E4)
            return rv.r1 / x6, rv.r2 / x3

    return fn


def _trace(contour: Contour, alpha: float, kappa: float, fast: bool, cap: int):
    """Sample (r1, r2) along the contour, bisecting any segment whose
    angle step exceeds _ANGLE_STEP_MAX.

    The winding concentrates in phi windows of width ~1e-3 rad near an
    enclosed LEP3 (r1 is quadratic in q and flips sign only where
    |q|^2 < m^3), so uniform sampling aliases; local bisection resolves
    the sweep with a few dozen extra evaluations.
    """
    fn = _resultant_fn(alpha, kappa, fast)

    def sample(phi: float):
        r1, r2 = fn(*contour.point(phi))
        norm = math.hypot(r1, r2)
        if norm < _EP_NORM_TOL:
            raise RuntimeError(
                f"contour passes within {norm:.3e} of a resultant zero at "
                f"phi={phi:.6f}: shrink or move the contour off the LEP3"
            )
        return phi, r1, r2, math.atan2(r2, r1), norm

    rows = [sample(f) for f in np.linspace(0.0, 2.0 * math.pi, contour.samples + 1)]
    i = 0
    while i < len(rows) - 1:
        a1, a2 = rows[i][3], rows[i + 1][3]
        step = math.atan2(math.sin(a2 - a1), math.cos(a2 - a1))
        width = rows[i + 1][0] - rows[i][0]
        if abs(step) > _ANGLE_STEP_MAX and width > 1e-12:
            if len(rows) >= cap:
                raise RuntimeError(
                    f"angle step {step:.3f} rad unresolved at the {cap}-sample "
                    "cap: contour resolution insufficient"
                )
            rows.insert(i + 1, sample(0.5 * (rows[i][0] + rows[i + 1][0])))
        else:
            i += 1
    return rows


def winding_number(
    contour: Contour,
    alpha: float,
    kappa: float,
    fast: bool = True,
    sample_cap: int = _SAMPLE_CAP,
) -> WindingResult:
    """Winding number of (R1, R2) around the origin along the contour.

    Accumulates wrapped atan2 increments over the refined sample set;
    the total must quantize to an integer within 1e-3.  fast=True uses
    (R1, R2) = (108(q^2 - m^3), 432 q) directly; fast=False rebuilds the
    vector from Cardano eigenvalue products as a cross-check.
    """
    rows = _trace(contour, alpha, kappa, fast, sample_cap)
    total = 0.0
    for (_, _, _, a1, _), (_, _, _, a2, _) in zip(rows[:-1], rows[1:]):
        total += math.atan2(math.sin(a2 - a1), math.cos(a2 - a1))
    raw = total / (2.0 * math.pi)
    w = round(raw)
    if abs(raw - w) >= 1e-3:
        raise RuntimeError(
            f"winding {raw:.6f} does not quantize to an integer within 1e-3"
        )
    return WindingResult(
        winding=int(w),
        raw=raw,
        samples=len(rows),
        min_norm=min(r[4] for r in rows),
        contour=contour,
    )


def winding_trajectory(
    contour: Contour,
    alpha: float,
    kappa: float,
    fast: bool = True,
    sample_cap: int = _SAMPLE_CAP,
) -> list[tuple[float, float, float]]:
    """Normalized resultant trajectory rows (phi, r1/||r||, r2/||r||).

    Emitted at the refined (non-uniform) phi samples including the
    closing phi = 2pi row, whose vector coincides with the first.
    """
    rows = _trace(contour, alpha, kappa, fast, sample_cap)
    return [(phi, r1 / norm, r2 / norm) for phi, r1, r2, _, norm in rows]
