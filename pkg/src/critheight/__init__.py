"""Canonical and critical heights of rational maps of the projective line over Q."""

__version__ = "0.1.0"
