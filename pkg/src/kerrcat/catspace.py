"""Analytic 4x4 cat-subspace Liouvillian, cubic invariants, Cardano roots.

Projecting the full Liouvillian onto the span of the even/odd cat
states, ordered as (rho_++, rho_+-, rho_-+, rho_--), gives a 4x4
generator whose nonzero eigenvalues are the roots of a depressed cubic

    t^3 - 3 m t - 2 q = 0,      t = E - shift,

with real invariants q, m and shift = -(2/3) kappa alpha^2 p2+.  The
eigenvalues therefore follow in closed form from Cardano's method, and
all exceptional-point structure reduces to polynomial conditions on
(q, m): the discriminant q^2 - m^3 vanishes on second-order degeneracy
lines, q = m = 0 at third-order points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import CatSubspaceConstants, ModelParams, subspace_constants

# Machine epsilon multiples used for the roundoff floors of q, m and the
# discriminant.  The floors track the largest magnitude appearing in the
# cancellation-prone sums, so degeneracy snapping is invariant under a
# global rescaling of rates.
_EPS = np.finfo(float).eps
_FLOOR_ULPS = 8.0
_SNAP_FACTOR = 64.0

_OMEGA = np.exp(2j * np.pi / 3.0)


def reduced_liouvillian(params: ModelParams, consts: CatSubspaceConstants | None = None) -> np.ndarray:
    """The 4x4 cat-subspace generator in basis (++, +-, -+, --)."""
    c = consts if consts is not None else subspace_constants(params.alpha)
    a2 = params.alpha_sq
    kap = params.kappa
    p_sq = c.p * c.p

    drive = params.alpha * params.drive * c.pj_plus[1]  # alpha en p1+
    rot = params.delta * a2 * c.pj_minus[2]             # Delta alpha^2 p2-
    gain = a2 * kap / p_sq
    loss = a2 * kap * p_sq
    coh = -0.5 * a2 * kap * c.pj_plus[2]

    e = 1j * drive
    return np.array(
        [
            [-loss, e, -e, gain],
            [e, coh + 1j * rot, a2 * kap, -e],
            [-e, a2 * kap, coh - 1j * rot, e],
            [loss, -e, e, -gain],
        ],
        dtype=complex,
    )


@dataclass(frozen=True)
class CubicInvariants:
    """shift, q, m of the depressed cubic, plus the Cardano cube roots.

    eta_plus is the principal cube root of q + sqrt(q^2 - m^3) (principal
    square root); eta_minus is fixed by eta_plus * eta_minus = m, which
    removes the branch-matching ambiguity near degeneracies.  q_floor and
    m_floor are roundoff floors: |q| below q_floor is numerically
    indistinguishable from zero (same for m).
    """

    shift: float
    q: float
    m: float
    eta_plus: complex
    eta_minus: complex
    q_floor: float
    m_floor: float

    @property
    def discriminant(self) -> float:
        return self.q * self.q - self.m**3

    @property
    def discriminant_floor(self) -> float:
        return (
            2.0 * abs(self.q) * self.q_floor
            + 3.0 * self.m * self.m * self.m_floor
            + 4.0 * _EPS * max(self.q * self.q, abs(self.m) ** 3)
        )


def cubic_invariants(params: ModelParams, consts: CatSubspaceConstants | None = None) -> CubicInvariants:
    """Closed-form q and m of the reduced spectrum's depressed cubic."""
    c = consts if consts is not None else subspace_constants(params.alpha)
    a2 = params.alpha_sq
    kap2 = params.kappa * params.kappa
    d2 = params.delta * params.delta
    e2 = params.drive * params.drive
    p2p, p4p, p6p = c.pj_plus[2], c.pj_plus[4], c.pj_plus[6]

    shift = -(2.0 / 3.0) * params.kappa * a2 * p2p

    pref_q = params.kappa * a2 * a2 / 216.0
    tq = (
        -a2 * (36.0 * d2 + kap2) * p6p,
        72.0 * e2 * p4p,
        (36.0 * d2 * a2 + 576.0 * e2 + 33.0 * kap2 * a2) * p2p,
        1008.0 * e2,
    )
    q = pref_q * (tq[0] + tq[1] + tq[2] + tq[3])
    q_floor = _FLOOR_ULPS * _EPS * pref_q * sum(abs(t) for t in tq)

    pref_m = -a2 / 36.0
    tm = (
        a2 * (12.0 * d2 - kap2) * p4p,
        48.0 * e2 * p2p,
        -24.0 * d2 * a2,
        96.0 * e2,
        -14.0 * a2 * kap2,
    )
    m = pref_m * (tm[0] + tm[1] + tm[2] + tm[3] + tm[4])
    m_mag = a2 * (12.0 * d2 + kap2) * p4p + tm[1] + abs(tm[2]) + tm[3] + abs(tm[4])
    m_floor = _FLOOR_ULPS * _EPS * abs(pref_m) * m_mag

    disc = q * q - m**3
    s = np.sqrt(complex(disc))
    eta_plus = complex(q + s) ** (1.0 / 3.0)
    if eta_plus != 0:
        eta_minus = m / eta_plus
    else:
        eta_minus = complex(q - s) ** (1.0 / 3.0)

    return CubicInvariants(
        shift=shift,
        q=q,
        m=m,
        eta_plus=eta_plus,
        eta_minus=eta_minus,
        q_floor=q_floor,
        m_floor=m_floor,
    )


@dataclass(frozen=True)
class ReducedSpectrum:
    """Labeled eigenvalues of the 4x4 generator.

    E1 = 0 always (trace preservation).  When one root of the cubic is
    real and two form a conjugate pair: E2 is the real root, E3 the pair
    member with positive imaginary part, E4 its conjugate.  When all
    three are real, E2 >= E3 >= E4.  degeneracy is None, "double" or
    "triple" when roots were snapped onto an exact degeneracy because
    the invariants sat below their roundoff floors.
    """

    E1: complex
    E2: complex
    E3: complex
    E4: complex
    degeneracy: str | None = None

    @property
    def nonzero(self) -> tuple[complex, complex, complex]:
        return (self.E2, self.E3, self.E4)

    def as_array(self) -> np.ndarray:
        return np.array([self.E1, self.E2, self.E3, self.E4])


def _depressed_roots(inv: CubicInvariants, snap_factor: float) -> tuple[tuple[complex, complex, complex], str | None]:
    """Roots of t^3 - 3mt - 2q with degeneracy snapping.

    Within the roundoff floors the computed (q, m) carry no information
    beyond "zero", so the exact multiple root is returned there instead
    of Cardano output polluted by eps^(1/3)-amplified noise.
    """
    q, m = inv.q, inv.m
    if abs(q) <= snap_factor * inv.q_floor and abs(m) <= snap_factor * inv.m_floor:
        return (0.0, 0.0, 0.0), "triple"

    disc = inv.discriminant
    if abs(disc) <= snap_factor * inv.discriminant_floor:
        s = np.cbrt(q)  # double root at -s, simple root at 2s
        return (2.0 * s, -s, -s), "double"

    if disc < 0.0:
        # three distinct real roots; eta_minus = conj(eta_plus), so the
        # roots 2 Re(omega^k eta_plus) are exactly real
        eta = complex(q + 1j * np.sqrt(-disc)) ** (1.0 / 3.0)
        return (
            2.0 * (eta).real,
            2.0 * (_OMEGA * eta).real,
            2.0 * (_OMEGA.conjugate() * eta).real,
        ), None

    # one real root, one conjugate pair; pick the non-cancelling branch
    s = np.sqrt(disc)
    u = q + s if q >= 0.0 else q - s
    eta_a = np.cbrt(u)
    eta_b = m / eta_a if eta_a != 0.0 else 0.0
    re = eta_a + eta_b
    im = np.sqrt(3.0) / 2.0 * abs(eta_a - eta_b)
    return (re, complex(-0.5 * re, im), complex(-0.5 * re, -im)), None


def cardano_eigenvalues(
    params: ModelParams,
    consts: CatSubspaceConstants | None = None,
    snap_factor: float = _SNAP_FACTOR,
) -> ReducedSpectrum:
    """Closed-form spectrum {0, E2, E3, E4} of the reduced Liouvillian."""
    inv = cubic_invariants(params, consts)
    roots, degeneracy = _depressed_roots(inv, snap_factor)

    real_roots = [r for r in roots if complex(r).imag == 0.0]
    if len(real_roots) == 3:
        ordered = sorted((float(complex(r).real) for r in roots), reverse=True)
        e2, e3, e4 = ordered
    else:
        # one real, one conjugate pair (already arranged by _depressed_roots)
        e2, e3, e4 = roots

    return ReducedSpectrum(
        E1=0.0,
        E2=inv.shift + e2,
        E3=inv.shift + e3,
        E4=inv.shift + e4,
        degeneracy=degeneracy,
    )
