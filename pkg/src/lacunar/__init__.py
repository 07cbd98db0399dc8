"""Almost-Newman lacunary polynomials of class B: factorization, root geometry, beta dynamics."""

__version__ = "0.1.0"
