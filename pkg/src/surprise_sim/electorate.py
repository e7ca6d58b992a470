"""Two-class voter population.

Class 1 voters prefer candidate a1, class 2 voters prefer a2.  Class sizes
are the source of truth; the margin ``epsilon`` is always recomputed from
them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

A1, A2 = 1, 2


@dataclass(frozen=True)
class Electorate:
    n1: int
    n2: int
    sigma: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        n1, n2 = int(self.n1), int(self.n2)
        if n1 < 0 or n2 < 0:
            raise ValueError(f"class sizes must be non-negative, got ({n1}, {n2})")
        if n1 + n2 == 0:
            raise ValueError("electorate has no voters")
        object.__setattr__(self, "n1", n1)
        object.__setattr__(self, "n2", n2)
        if self.sigma is None:
            sigma = np.concatenate(
                [np.full(n1, A1, dtype=np.int8), np.full(n2, A2, dtype=np.int8)]
            )
        else:
            sigma = np.asarray(self.sigma, dtype=np.int8).copy()
            if sigma.shape != (n1 + n2,):
                raise ValueError("sigma must map every voter to a class")
            if not np.isin(sigma, (A1, A2)).all():
                raise ValueError("sigma values must be 1 or 2")
            if int((sigma == A1).sum()) != n1:
                raise ValueError("sigma disagrees with n1")
        sigma.setflags(write=False)
        object.__setattr__(self, "sigma", sigma)

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    @property
    def epsilon(self) -> float:
        return margin(self)

    @property
    def winner(self) -> int:
        """True winner; ties go to a2."""
        return A1 if self.n1 > self.n2 else A2

    @property
    def majority_class(self) -> int:
        return A1 if self.n1 >= self.n2 else A2

    @property
    def minority_class(self) -> int:
        return A2 if self.majority_class == A1 else A1

    def class_size(self, cls: int) -> int:
        return self.n1 if cls == A1 else self.n2


def build_electorate(n1: int, n2: int) -> Electorate:
    """Electorate with the canonical voter order (class 1 first)."""
    return Electorate(n1, n2)


def margin_exact(e: Electorate) -> Fraction:
    return Fraction(e.n1 - e.n2, 2 * e.n)


def margin(e: Electorate) -> float:
    """epsilon such that n1 = n(1/2 + epsilon); negative when class 2 is larger."""
    return float(margin_exact(e))
