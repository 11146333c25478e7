"""Critical Sobolev indices for the maximal-operator bounds."""

from __future__ import annotations

__all__ = ["critical_exponent", "gamma_critical", "local_critical_exponent"]


def critical_exponent(a: float, gamma: float) -> float:
    """Sharp index for the global H^s -> L^2(R) maximal bound:
    a * (1 - 1/gamma)^+ / 4."""
    if not a > 1:
        raise ValueError(f"need a > 1, got {a}")
    if not gamma > 0:
        raise ValueError(f"need gamma > 0, got {gamma}")
    return 0.25 * a * max(0.0, 1.0 - 1.0 / gamma)


def local_critical_exponent(a: float, gamma: float) -> float:
    """Sharp index for the local H^s -> L^2([-1, 1]) bound:
    min(a (1 - 1/gamma)^+ / 4, 1/4)."""
    return min(critical_exponent(a, gamma), 0.25)


def gamma_critical(a: float) -> float:
    """Damping power at which the two indices meet: a / (a - 1)."""
    if not a > 1:
        raise ValueError(f"need a > 1, got {a}")
    return a / (a - 1.0)
