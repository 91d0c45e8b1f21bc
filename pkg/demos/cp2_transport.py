"""Two isomorphic minimal structures with different kernel dimensions.

Structure A is carried to B by an explicit morphism; the lowest nonzero
arity agrees, but dim Ker Delta_3 does not, so that number alone is not an
invariant.

    python3 demos/cp2_transport.py
"""

from ainfty.transfer.io import load_fixture
from ainfty.transfer.structures import dim_ker_op, min_nonzero_arity, verify_stasheff

for name in ("cp2_s7_A", "cp2_s7_B"):
    s = load_fixture(name)
    print(f"{name}: {verify_stasheff(s, 4).summary()}; lowest nonzero arity {min_nonzero_arity(s)}; "
          f"dim Ker Delta_2 = {dim_ker_op(s, 2)}, dim Ker Delta_3 = {dim_ker_op(s, 3)}")
