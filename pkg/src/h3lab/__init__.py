"""Lower-bound machinery for 3-uniform hypergraph Ramsey numbers."""

__version__ = "0.1.0"
