"""gencolor: mine primary-accent color compositions for concepts from
text-to-image corpora.

Pipeline: prompt building -> image generation (external backend or fixtures)
-> text-guided segmentation -> color association -> palette glyphs, with an
evaluation harness and a searchable gallery service on top.
"""

from gencolor.colorspace import ColorRGB8, LabColor, ciede2000, lab_to_srgb, srgb_to_lab

__version__ = "0.1.0"

__all__ = [
    "ColorRGB8",
    "LabColor",
    "ciede2000",
    "srgb_to_lab",
    "lab_to_srgb",
    "__version__",
]
