"""Reference-conditioned face rigging diffusion on a synthetic face world."""

__version__ = "0.1.0"
