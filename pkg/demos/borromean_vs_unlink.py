"""Unlink and Borromean rings: same Betti numbers and cup products, different Massey products.

    python3 demos/borromean_vs_unlink.py
"""

import time

from ainfty.exactla import QQ, using_field
from ainfty.grids import link_fixture
from ainfty.massey import link_pipeline

with using_field(QQ):
    for name in ("unlink2", "hopf", "unlink3", "borromean"):
        t0 = time.perf_counter()
        rep = link_pipeline(link_fixture(name))
        mu3 = "-" if rep.mu3 is None else ("nonzero" if rep.mu3_nonzero else "zero")
        print(f"{name:10s} R={rep.resolution:2d}  betti={rep.betti}  cup rank={rep.cup_rank}  "
              f"{rep.verdict:52s} mu_3 {mu3}  ({time.perf_counter() - t0:.1f} s)")
