"""Physical parameters and cat-subspace constants.

Unit convention: every frequency-like quantity is stored internally in
angular rad/us.  Helpers that accept experimental values take cyclic MHz
and multiply by 2*pi, with one exception: the single-photon loss rate
kappa is a plain rate in 1/us (a quoted "1/15.5 MHz" loss corresponds to
a 15.5 us photon lifetime, so no 2*pi factor is applied).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

TWO_PI = 2.0 * math.pi

# Exponents j for which the combinations p^-j +/- p^j are tabulated.
PJ_ORDERS = (1, 2, 4, 6)

# Beyond this alpha^2 the factor exp(-2*alpha^2) underflows; p is then 1
# to machine precision and the p = 1 limits are used directly.
ALPHA_SQ_SATURATION = 350.0


@dataclass(frozen=True)
class ModelParams:
    """The five knobs of the driven-dissipative Kerr resonator.

    delta      detuning (rad/us)
    kerr       Kerr nonlinearity K > 0 (rad/us)
    two_photon two-photon drive amplitude P > 0 (rad/us)
    drive      single-photon drive amplitude eps (rad/us)
    kappa      single-photon loss rate (1/us), >= 0

    The cat amplitude alpha = sqrt(P/K) is derived, never set, which
    keeps alpha real and positive.
    """

    delta: float
    kerr: float
    two_photon: float
    drive: float
    kappa: float

    def __post_init__(self):
        vals = (self.delta, self.kerr, self.two_photon, self.drive, self.kappa)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"non-finite parameter in {vals}")
        if self.kerr <= 0 or self.two_photon <= 0:
            raise ValueError(
                f"K and P must be positive, got K={self.kerr}, P={self.two_photon}"
            )
        if self.kappa < 0:
            raise ValueError(f"kappa must be >= 0, got {self.kappa}")

    @property
    def alpha(self) -> float:
        return math.sqrt(self.two_photon / self.kerr)

    @property
    def alpha_sq(self) -> float:
        return self.two_photon / self.kerr

    def replace(self, **kwargs) -> "ModelParams":
        cur = dict(
            delta=self.delta,
            kerr=self.kerr,
            two_photon=self.two_photon,
            drive=self.drive,
            kappa=self.kappa,
        )
        cur.update(kwargs)
        return ModelParams(**cur)


@dataclass(frozen=True)
class CatSubspaceConstants:
    """p = N_alpha^+ / N_alpha^- and the combinations p_j^± = p^-j ± p^j."""

    alpha: float
    p: float
    pj_plus: dict[int, float] = field(repr=False)
    pj_minus: dict[int, float] = field(repr=False)


def subspace_constants(alpha: float) -> CatSubspaceConstants:
    """Cat-state normalization ratio p and the p_j^± combinations.

    Uses p^2 = tanh(alpha^2) and cancellation-free expressions for the
    1 - p^(2j) differences, so the minus combinations keep full relative
    precision even when p is exponentially close to 1.
    """
    if not (math.isfinite(alpha) and alpha > 0):
        raise ValueError(f"alpha must be positive and finite, got {alpha}")

    t = alpha * alpha
    if t > ALPHA_SQ_SATURATION:
        w = 0.0
    else:
        w = math.exp(-2.0 * t)

    p_sq = (1.0 - w) / (1.0 + w)  # tanh(alpha^2)
    p = math.sqrt(p_sq)

    # s = 1 - p^4 = sech(alpha^2)^2, computed without subtracting near-equal terms
    s = 4.0 * w / ((1.0 + w) * (1.0 + w))

    # 1 - p^(2j), rewritten in terms of s using p^4 = 1 - s
    one_minus = {
        1: s / (1.0 + p_sq),          # 1 - p^2
        2: s,                         # 1 - p^4
        4: s * (2.0 - s),             # 1 - p^8 = (1-p^4)(1+p^4)
        6: s * (3.0 + (s - 3.0) * s), # 1 - p^12 = s*(3 - 3s + s^2)
    }

    pj_plus: dict[int, float] = {}
    pj_minus: dict[int, float] = {}
    for j in PJ_ORDERS:
        pj = p**j
        if pj == 0.0:
            raise ValueError(f"p^{j} underflowed for alpha={alpha}")
        # clamp to the exact bounds p_j^+ >= 2, p_j^- >= 0 (AM-GM), which
        # roundoff can undershoot by an ulp near p = 1
        pj_plus[j] = max((2.0 - one_minus[j]) / pj, 2.0)
        pj_minus[j] = max(one_minus[j] / pj, 0.0)

    return CatSubspaceConstants(alpha=alpha, p=p, pj_plus=pj_plus, pj_minus=pj_minus)


def params_from_experiment(
    K_MHz: float,
    P_MHz: float,
    kappa_inv_us: float,
    eps_MHz: float = 0.0,
    delta_MHz: float = 0.0,
    kappa_angular: bool = False,
) -> ModelParams:
    """Build ModelParams from experimental cyclic-MHz inputs.

    K, P, eps and delta are cyclic frequencies and get the 2*pi factor;
    kappa_inv_us is a plain rate in 1/us.  Set kappa_angular=True to
    instead read kappa as a cyclic MHz value (the alternative convention
    some groups use), in which case it too is multiplied by 2*pi.
    """
    kappa = TWO_PI * kappa_inv_us if kappa_angular else kappa_inv_us
    return ModelParams(
        delta=TWO_PI * delta_MHz,
        kerr=TWO_PI * K_MHz,
        two_photon=TWO_PI * P_MHz,
        drive=TWO_PI * eps_MHz,
        kappa=kappa,
    )
