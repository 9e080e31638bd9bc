"""Color space basics: sRGB <-> CIELAB conversion and CIEDE2000 distances.

Everything downstream (grouping thresholds, the top-color band, evaluation
statistics) is built on these two primitives, so this is the place to start.
"""

import numpy as np

from gencolor.colorspace import (
    ColorRGB8,
    LabColor,
    ciede2000,
    ciede2000_array,
    lab_to_srgb,
    srgb_to_lab,
    srgb_to_lab_array,
)

# A single color, scalar API.
brick = ColorRGB8(203, 101, 99)
lab = srgb_to_lab(brick)
print(f"{brick.hex()} -> Lab({lab.L:.2f}, {lab.a:.2f}, {lab.b:.2f})")

# Round-trip is exact on the 8-bit lattice (up to rounding).
print("round trip:", lab_to_srgb(lab))

# Perceptual distances. A just-noticeable difference is around 2.3;
# the pipeline groups image dominants at 12 and filters top colors at 7.
pairs = [
    (ColorRGB8(203, 101, 99), ColorRGB8(208, 104, 102)),  # nearly identical
    (ColorRGB8(203, 101, 99), ColorRGB8(150, 75, 70)),    # same hue, darker
    (ColorRGB8(203, 101, 99), ColorRGB8(40, 160, 60)),    # different hue
]
for a, b in pairs:
    d = ciede2000(srgb_to_lab(a), srgb_to_lab(b))
    print(f"dE00({a.hex()}, {b.hex()}) = {d:.2f}")

# The array API broadcasts; useful for scoring thousands of bins at once.
rng = np.random.default_rng(0)
batch = srgb_to_lab_array(rng.integers(0, 256, (5, 3)))
target = srgb_to_lab_array(np.array([203, 101, 99], dtype=float))
print("batch distances:", np.round(ciede2000_array(batch, target), 2))

# Gray-axis colors have a degenerate hue angle but the metric stays finite.
print("gray axis:", ciede2000(LabColor(40, 0, 0), LabColor(60, 0, 0)))
