"""Grid-based real-variable harmonic analysis: Radon and X-ray transforms,
Riesz potentials, rearrangements and Lorentz norms, maximal functions, BMO,
Steiner symmetrization, Whitney and Calderon-Zygmund decompositions and
atomic decompositions of H^1."""

from .errors import *  # noqa: F401,F403
from .grid import GridSpec, SampledFunction, Spectrum, dft, idft, lp_norm  # noqa: F401

__version__ = "0.1.0"
