"""Tour of the reduced cat-subspace spectrum.

Walks the closed-form eigenvalues from the undriven symmetric point out
to the exceptional structure: where the three nonzero rates are real,
where two collide into a conjugate pair (an LEP2), and where all three
meet at once (the LEP3).
"""

import numpy as np

from kerrcat.catspace import cardano_eigenvalues, reduced_liouvillian
from kerrcat.exceptional import lep2_delta_roots, lep3_closed_form
from kerrcat.model import ModelParams, subspace_constants

ALPHA = 1.521
KAPPA = 1 / 15.5


def params_at(eps, delta):
    return ModelParams(
        delta=delta, kerr=1.0, two_photon=ALPHA**2, drive=eps, kappa=KAPPA
    )


def show(tag, eps, delta):
    s = cardano_eigenvalues(params_at(eps, delta))
    numeric = np.linalg.eigvals(reduced_liouvillian(params_at(eps, delta)))
    print(f"{tag}  (eps={eps:.6f}, delta={delta:.6f})")
    for label, E in zip(("E2", "E3", "E4"), s.nonzero):
        print(f"    {label} = {E.real:+.6f} {E.imag:+.6f}i")
    print(f"    degeneracy flag: {s.degeneracy}")
    print(f"    dense eigvals max deviation: "
          f"{min(np.abs(numeric[:, None] - np.array(s.as_array())[None, :]).min(0).max(), 1.0):.2e}")
    print()


def main():
    consts = subspace_constants(ALPHA)
    x = KAPPA * ALPHA**2

    print(f"alpha = {ALPHA}, kappa = {KAPPA:.6f} 1/us, x = kappa alpha^2 = {x:.6f}\n")

    # symmetric point: three real rates, the slowest exponentially small
    show("origin, all-real spectrum", 0.0, 0.0)

    # the eps = 0 LEP2 sits exactly at delta = kappa / p2-
    d2 = KAPPA / consts.pj_minus[2]
    print(f"LEP2 on the eps = 0 axis at delta = kappa/p2- = {d2:.6f}")
    roots = lep2_delta_roots(ALPHA, KAPPA, eps=0.0)
    print(f"discriminant root-find on that axis: {[f'{r:.6f}' for r in roots]}\n")
    show("just below the LEP2", 0.0, 0.999 * d2)
    show("just above the LEP2 (conjugate pair)", 0.0, 1.001 * d2)

    # the four LEP3 images, where the entire nonzero triple coalesces
    points = lep3_closed_form(ALPHA, KAPPA)
    print("LEP3 images (closed form):")
    for pt in points:
        print(f"    eps = {pt.eps:+.9f}, delta = {pt.delta:+.9f}, "
              f"coalescence = {pt.coalescence:.9f}")
    print()
    pt = points[0]
    show("at the LEP3 (triple point)", pt.eps, pt.delta)


if __name__ == "__main__":
    main()
