"""Hilbert-Kunz type invariants of Frobenius powers in two-dimensional quotient rings."""
from .algebra import Polynomial, PolynomialRing
from .groebner import GroebnerBasis, buchberger
from .ideals import Ideal, QuotientRing, colength, frobenius_power, ideal_colon

__version__ = "0.1.0"
