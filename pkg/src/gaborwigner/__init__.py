"""Discrete phase-space analysis: windowed transforms, Gabor/Wigner/diamond
products, mixed norms and phase-space forms of the cubic NLSE."""
from .errors import *  # noqa: F401,F403
from .grid import (Grid, PhaseField, Signal, decimate2, edge_ratio, inner, inner2,
                   l2_norm, l2_norm2, oversample2, quad_sum, quad_sum2)
from .products import diamond_product, gabor_product, wigner_product
from .transforms import (ambiguity, cross_wigner, fourier, inverse_fourier, stft,
                         stft_adjoint, stft_invert, wavepacket, wigner)

__version__ = "0.1.0"
