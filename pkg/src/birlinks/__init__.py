"""Sarkisov links of codimension-2 weighted complete intersection Fano 3-folds."""

__version__ = "0.1.0"
