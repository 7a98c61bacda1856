"""
Simulation API Package

HTTP endpoints for running experiments, walk reports and lemma checks.
"""

from .routes import router

__all__ = ['router']
