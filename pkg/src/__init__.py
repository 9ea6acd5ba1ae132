"""Galois action on Hecke orbits: exact number-field algebra, orbit analysis and Galois-group certification."""

__version__ = "0.1.0"
