"""xychain - state transfer and one-tangle through an anisotropic xy chain"""

__version__ = "1.0.0"
