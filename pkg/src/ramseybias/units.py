"""Unit conversions between the angular-frequency core and GHz/ns interfaces.

All internal frequencies are angular (rad/s) and all internal times are
seconds; configuration files, CSV output and reports use cyclic GHz (or MHz
where stated) and nanoseconds.
"""

import math

TWO_PI = 2.0 * math.pi

RAD_PER_GHZ = TWO_PI * 1e9
RAD_PER_MHZ = TWO_PI * 1e6


def ghz(value: float) -> float:
    """Cyclic GHz to angular rad/s."""
    return value * RAD_PER_GHZ


def to_ghz(value: float) -> float:
    """Angular rad/s to cyclic GHz."""
    return value / RAD_PER_GHZ


def to_mhz(value: float) -> float:
    """Angular rad/s to cyclic MHz."""
    return value / RAD_PER_MHZ


def ns(value: float) -> float:
    """Nanoseconds to seconds."""
    return value * 1e-9


def to_ns(value: float) -> float:
    """Seconds to nanoseconds."""
    return value * 1e9
