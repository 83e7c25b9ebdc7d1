"""Verification engine for sigma(2^a), sigma(3^b), sigma(5^c) sharing the same
two prime factors: certified linear-form bounds, exact lattice reduction, and
a sieve over the remaining exponents."""

__version__ = "0.1.0"
