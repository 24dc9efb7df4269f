"""Seeded faults used to show that each suite can fail."""
from __future__ import annotations

from contextlib import contextmanager

from . import shuffle

FAULTS = ("lattice", "k-sign", "hecke-cross", "global")


@contextmanager
def k_sign_fault():
    """Flip the sign of the q-exponent in the K_i action while active."""
    orig = shuffle.k_exponent
    shuffle.k_exponent = lambda d, i, w: -orig(d, i, w)
    try:
        yield
    finally:
        shuffle.k_exponent = orig
