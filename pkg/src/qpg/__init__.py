"""Truncated weighted-shift models of quantum groups, spheres and projective
spaces, together with finite groupoid convolution algebras."""

__version__ = "0.1.0"
