"""Phase-only compressive sensing toolkit.

Reconstructs sparse vectors and low-rank matrices from the phases of complex
Gaussian measurements by recasting the problem as real linear compressive
sensing and solving it with proximal ADMM.
"""

__version__ = "1.0.0"
