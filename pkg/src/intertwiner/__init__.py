"""Exact SU(2) intertwiner recoupling in the discrete coherent channel basis.

Submodules:
  exact       — big-integer combinatorics, exact radicals
  channels    — 4-valent channel labels, scalar products, Gram/projector
  recoupling  — triangle coefficients, 6j, channel overlaps, 15j/20j
  graphs      — cycle/loop enumeration and generalized Racah sums
  foursimplex — the 4-simplex network and its explicit parameterizations
  bargmann    — symbolic Gaussian-moment oracle
  geometry    — framed tetrahedra, closure solving, twisted actions
  scan        — exact scaling-trend tables
  cli         — command-line interface
"""

from .channels import (
    AdmissibilityError,
    ChannelLabel,
    Corners,
    KMatrix,
    admissible_channels,
    channels_from_corners,
    corners_from_channels,
    gram_matrix,
    intertwiner_dimension,
    norm_squared,
    projector_matrix,
    scalar_product,
)
from .exact import Fraction, SqrtRational, binomial, factorial
from .foursimplex import SimplexChannels, twenty_j_racah
from .recoupling import fifteen_j, normalized_twenty_j, triangle_delta_sq, twenty_j, wigner_6j

__version__ = "0.1.0"
