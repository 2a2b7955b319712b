"""Topological certification of the LEP3 by resultant-vector winding.

The pair (R1, R2) = (108(q^2 - m^3), 432 q) vanishes simultaneously only
where the whole nonzero triple coalesces.  Counting how often the vector
wraps the origin along a closed contour in the (eps, delta) plane gives
an integer that cannot change under smooth deformation: +-1 certifies an
enclosed LEP3, 0 certifies none, and LEP2 lines crossed along the way
leave no trace.
"""

from kerrcat.exceptional import lep3_closed_form
from kerrcat.winding import Contour, winding_number

ALPHA = 1.521
KAPPA = 1 / 15.5


def report(tag, center, radius):
    contour = Contour(kind="circle", center=center, radius=radius, samples=720)
    res = winding_number(contour, ALPHA, KAPPA)
    print(f"{tag:46s} W = {res.winding:+d}   (raw {res.raw:+.6f}, "
          f"{res.samples} samples, min |R| = {res.min_norm:.3f})")


def main():
    eps3, delta3 = (pt := lep3_closed_form(ALPHA, KAPPA)[0]).eps, pt.delta
    r = 0.3 * eps3
    print(f"LEP3 at (eps, delta) = ({eps3:.6f}, {delta3:.6f}); circles of radius {r:.6f}\n")

    report("around (+eps3, +delta3)", (eps3, delta3), r)
    report("around (-eps3, +delta3), mirror chirality", (-eps3, delta3), r)
    report("around (+eps3, -delta3), mirror chirality", (eps3, -delta3), r)
    report("around (-eps3, -delta3)", (-eps3, -delta3), r)
    report("congruent circle enclosing nothing", (1.5 * eps3, 0.0), r)
    report("small circle on an LEP2 line", (0.004, 1.2725457675), 8e-4)
    report("wide circle enclosing a mirror pair", (0.0, delta3), 2.0 * eps3)


if __name__ == "__main__":
    main()
