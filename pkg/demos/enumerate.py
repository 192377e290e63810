"""Coset enumeration for deflated presentations."""

import time

from coxdeflate import build_named, deflated_presentation, todd_coxeter

for name, n, k in [("petersen", 6, 1), ("cube", 6, 1), ("cycle", 8, 1), ("cycle", 4, 2)]:
    d = build_named(name, n) if name == "cycle" else build_named(name)
    pres = deflated_presentation(d, n, k)
    t = time.perf_counter()
    ct = todd_coxeter(pres)
    print(f"{name:8s} n={n} k={k}: {ct.count:6d} cosets, verified {ct.verify(pres)}, "
          f"{time.perf_counter() - t:.2f} s")
