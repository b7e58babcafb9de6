import operator
import os

from .errors import SizeLimitError

DEFAULT_MAX_M = 6
PAULI_MAX_M = 4
DENSE_MAX_QUBITS = 12
MAX_M_ENV = "STRATAFORGE_MAX_M"


def max_m() -> int:
    """Size cap on m, overridable through ``STRATAFORGE_MAX_M``."""
    raw = os.environ.get(MAX_M_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_M
    try:
        value = int(raw)
    except ValueError:
        raise SizeLimitError(f"{MAX_M_ENV}={raw!r} is not an integer") from None
    if value < 1:
        raise SizeLimitError(f"{MAX_M_ENV} must be >= 1, got {value}")
    return value


def check_m(m: int, cap: int | None = None) -> int:
    cap = max_m() if cap is None else cap
    if isinstance(m, bool):
        raise SizeLimitError(f"m must be an integer, got {m!r}")
    try:
        m = operator.index(m)
    except TypeError:
        raise SizeLimitError(f"m must be an integer, got {m!r}") from None
    if not 1 <= m <= cap:
        raise SizeLimitError(f"m={m} outside supported range 1..{cap}")
    return m
