"""Identify the finite quotient of the Y333 deflation, and the E8 Weyl group for contrast."""

from coxdeflate import build_y_diagram, identify

for arms, n, cap in [((3, 3, 3), 8, 14), ((4, 2, 1), None, 8)]:
    rep = identify(build_y_diagram(arms), n, cap).report()
    print(f"Y{''.join(map(str, arms))}: dim {rep['dim']}, defect {rep['witt_defect']}, "
          f"{rep['nonsingular']} nonsingular, order {rep['order']:,}, orbits {rep['orbit_partition']}")
