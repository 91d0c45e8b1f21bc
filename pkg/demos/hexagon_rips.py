"""Vietoris-Rips barcode of six points on a hexagon, as text and SVG.

    python3 demos/hexagon_rips.py
"""

from pathlib import Path

from ainfty.complexes import rips_filtration
from ainfty.persist import homology_barcode
from ainfty.plot import barcode_svg

hexagon = [("1", "0"), ("0.5", "0.866"), ("-0.5", "0.866"), ("-1", "0"), ("-0.5", "-0.866"), ("0.5", "-0.866")]
radii = ["0.1", "0.51", "0.9"]
f = rips_filtration(hexagon, radii, max_dim=2)
bars = [homology_barcode(f, p) for p in (0, 1)]
for bc in bars:
    print(f"H{bc.degree}: {bc}   (index i is radius {radii[0]}..{radii[-1]})")
out = Path(__file__).with_name("hexagon_rips.svg")
out.write_text(barcode_svg(bars, title="hexagon"), encoding="utf-8")
print("wrote", out)
