"""The torus and a wedge of two circles and a sphere over GF(2).

Homology agrees; the cup product and the kernel of the transferred
comultiplication tell them apart.

    python3 demos/torus_vs_wedge.py
"""

from ainfty.apersist import delta_barcode, from_filtration
from ainfty.complexes import Filtration, betti_numbers, cup_rank, torus7, wedge_s1_s2_s1
from ainfty.exactla import GF, using_field
from ainfty.persist import homology_barcode

with using_field(GF(2)):
    for name, K in (("torus", torus7()), ("wedge", wedge_s1_s2_s1())):
        # 1-skeleton first, then the 2-cells
        f = Filtration(K, {s: (0 if len(s) <= 2 else 1) for s in K.simplices()})
        inp = from_filtration(f, degree=2, arity=2, basepoint=0)
        print(f"{name}: betti {betti_numbers(K)}, cup rank {cup_rank(K)}, "
              f"H2 bars {homology_barcode(f, 2)}, Ker Delta_2 bars on H2 {delta_barcode(inp)}")
