"""Hyperbolic surfaces glued from pairs of pants, in Fenchel-Nielsen coordinates."""

__version__ = "0.1.0"
