"""Beta prior encoding traditional media influence and bias."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .electorate import Electorate, margin

INFLUENTIAL = "influential"
UNINFLUENTIAL = "uninfluential"
ABSENT = "absent"
REGIMES = (INFLUENTIAL, UNINFLUENTIAL, ABSENT)


class InvalidPrior(ValueError):
    pass


@dataclass(frozen=True)
class MediaSpec:
    """Media configuration.

    ``delta`` is the bias toward candidate a2 (the loser when class 1 is the
    larger class).  Influential media carry prior mass ``c * n``,
    uninfluential media ``a * n**gamma``.
    """

    regime: str = ABSENT
    c: float = 0.0
    a: float = 0.0
    gamma: Optional[float] = None
    delta: float = 0.0

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ValueError(f"unknown media regime {self.regime!r}")
        if self.c < 0 or self.a < 0:
            raise ValueError("global weights c and a must be non-negative")
        if self.regime == UNINFLUENTIAL:
            if self.gamma is None or not 0.0 < self.gamma < 1.0:
                raise ValueError("uninfluential media need gamma in (0, 1)")
        elif self.gamma is not None:
            raise ValueError("gamma only applies to the uninfluential regime")

    def influence(self, n: int) -> float:
        """Prior mass t = alpha + beta for an electorate of size n."""
        if self.regime == INFLUENTIAL:
            return self.c * n
        if self.regime == UNINFLUENTIAL:
            return self.a * n ** self.gamma
        return 2.0


@dataclass(frozen=True)
class MediaPrior:
    alpha: float
    beta: float

    @property
    def t(self) -> float:
        return self.alpha + self.beta

    @property
    def shift(self) -> float:
        """alpha - beta, the only prior quantity a prediction depends on."""
        return self.alpha - self.beta


UNIFORM = MediaPrior(1.0, 1.0)


def delta_bounds(epsilon: float) -> tuple[float, float]:
    return -(0.5 - epsilon), 0.5 + epsilon


def prior_from_influence(t: float, epsilon: float, delta: float) -> MediaPrior:
    lo, hi = delta_bounds(epsilon)
    if not lo <= delta <= hi:
        raise InvalidPrior(
            f"delta={delta} outside [{lo:g}, {hi:g}] for epsilon={epsilon:g}"
        )
    lean = epsilon - delta
    alpha = t * (0.5 + lean)
    beta = t * (0.5 - lean)
    if alpha < 1.0 or beta < 1.0:
        slack = 0.5 - abs(lean)
        need = "no finite t" if slack <= 0 else f"t >= {1.0 / slack:.6g}"
        raise InvalidPrior(
            f"prior (alpha={alpha:.6g}, beta={beta:.6g}) has a parameter below 1 "
            f"at t={t:.6g}; the MAP estimate needs {need}"
        )
    return MediaPrior(alpha, beta)


def build_prior(spec: MediaSpec, e: Electorate) -> MediaPrior:
    # zero global weight is the same as no media at all
    if spec.regime == ABSENT:
        return UNIFORM
    t = spec.influence(e.n)
    if t == 0.0:
        lo, hi = delta_bounds(margin(e))
        if not lo <= spec.delta <= hi:
            raise InvalidPrior(f"delta={spec.delta} outside [{lo:g}, {hi:g}]")
        return UNIFORM
    return prior_from_influence(t, margin(e), spec.delta)
