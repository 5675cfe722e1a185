"""murmur-lab: murmuration experiments for Dirichlet character families."""

__version__ = "0.1.0"
