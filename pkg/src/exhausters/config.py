"""Global numeric tolerance.

One tolerance drives every feasibility decision and comparison in the
package.  It defaults to 1e-9 and can be overridden with the
``EXH_TOLERANCE`` environment variable (read at import time) or
programmatically through :func:`set_tolerance`.
"""

import os

DEFAULT_TOLERANCE = 1e-9

_tolerance = float(os.environ.get("EXH_TOLERANCE", DEFAULT_TOLERANCE))


def tolerance() -> float:
    """Current global tolerance epsilon."""
    return _tolerance


def set_tolerance(value: float) -> None:
    """Override the global tolerance (must be positive)."""
    value = float(value)
    if not value > 0.0:
        raise ValueError(f"tolerance must be positive, got {value}")
    global _tolerance
    _tolerance = value


def reload_from_env() -> None:
    """Re-read EXH_TOLERANCE; used by the CLI entry point."""
    raw = os.environ.get("EXH_TOLERANCE")
    if raw is not None:
        set_tolerance(float(raw))
