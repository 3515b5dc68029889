"""Computational toolkit for two-parameter dilation extensions of the Heisenberg group.

Exact group and Lie-algebra arithmetic, classification invariants with
certificate verification, and pointwise-verifiable wavelet/metaplectic
representations with their intertwiners.
"""

__version__ = "0.1.0"
