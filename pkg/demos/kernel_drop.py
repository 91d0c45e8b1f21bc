"""One class that leaves the kernel of the comultiplication for a single step.

The kernel table splits its lifetime into two unrelated bars, and the
diagnostic flags the class.  Writes ``kernel_drop.svg`` next to this script.

    python3 demos/kernel_drop.py
"""

from pathlib import Path

from ainfty.apersist import compatibility_check, delta_barcode, kernel_drop_instance, sleep_wake_diagnostic
from ainfty.plot import barcode_svg

inp = kernel_drop_instance(N=9, drops=(5,), spectators=1)
bc = delta_barcode(inp)
print("kernel bars:", bc)
rep = compatibility_check(inp)
print("kernels nested:", rep.ok, "" if rep.ok else f"(first failure at index {rep.index})")
for pat in sleep_wake_diagnostic(inp):
    print(f"class born at {pat.start}: in the kernel at {pat.support}")
out = Path(__file__).with_name("kernel_drop.svg")
out.write_text(barcode_svg([bc], title="kernel bars, N = 9"), encoding="utf-8")
print("wrote", out)
