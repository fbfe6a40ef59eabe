"""Ticketing analytics for a performing-arts presenter: descriptive reports,
description stylometrics, masked-ALS purchase factorization, lifecycle
Markov chains, and a planted-truth synthetic data generator."""

__version__ = "0.1.0"
