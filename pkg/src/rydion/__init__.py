"""Simulation and pulse optimization of CZ gates between microwave-dressed
trapped Rydberg ions: atomic structure, Coulomb-crystal mechanics, gate
dynamics, fidelity metrics, and differential-evolution pulse search."""

__version__ = "0.1.0"
