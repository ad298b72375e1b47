"""Tropical and ultradiscrete two-variable Oregonator.

Modules: ``grid`` (fields, boundaries, five-point stencils), ``tropical``
(positive difference schemes and the continuous reference), ``ultradiscrete``
(max-plus maps and the lambda -> 0 probe), ``automaton`` and ``patterns``
(binary excitable-medium automaton), ``zerodim`` (diffusion-free integer map),
``io`` (PBM/PGM/CSV) and ``verify`` (property suites).
"""
__version__ = "0.1.0"
