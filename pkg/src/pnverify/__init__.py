"""Exact and numerical checks of Nijenhuis-differential identities on compact
hermitian symmetric spaces."""

__version__ = "0.1.0"
