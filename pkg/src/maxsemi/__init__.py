"""Exact toolkit for the maximal-subsemigroup structure of self-maps of
the naturals: a closed expression algebra with computable parameters,
membership deciders for every family, generating-pair decisions, a finite
relation calculus, and a brute-force oracle on finitely many points."""

__version__ = "0.1.0"
