"""Default size bounds and the FORESTCALC_LIMIT override.

All enumerative cores blow up combinatorially, so every entry point is
guarded by a bound.  Defaults:

    trees    n <= 7   (forest/tree enumeration; hard ceiling 8)
    tau      <= 7     (weight-box integration, tau! orderings)
    mayer    k <= 6   (connected-coefficient sequence length)
    fermion  n <= 4   (tree-expansion order)

The environment variable FORESTCALC_LIMIT overrides them.  Accepted forms:

    FORESTCALC_LIMIT=8                      # set every bound to 8
    FORESTCALC_LIMIT="trees=8,tau=6"        # per-key override
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

from .errors import SizeLimitError, ValidationError

_KEYS = ("trees", "tau", "mayer", "fermion")


@dataclass(frozen=True)
class Limits:
    trees: int = 7
    tau: int = 7
    mayer: int = 6
    fermion: int = 4


DEFAULT_LIMITS = Limits()


def parse_limit_spec(spec: str) -> Limits:
    spec = spec.strip()
    if not spec:
        return DEFAULT_LIMITS
    if spec.isdigit():
        v = int(spec)
        return Limits(trees=v, tau=v, mayer=v, fermion=v)
    lims = DEFAULT_LIMITS
    for piece in spec.split(","):
        key, _, value = piece.partition("=")
        key = key.strip()
        if key not in _KEYS or not value.strip().isdigit():
            raise ValidationError(
                f"bad FORESTCALC_LIMIT entry {piece!r}; expected one of {_KEYS} = <int>"
            )
        lims = replace(lims, **{key: int(value)})
    return lims


def active_limits() -> Limits:
    """Limits currently in force (re-reads the environment on each call)."""
    spec = os.environ.get("FORESTCALC_LIMIT")
    if spec is None:
        return DEFAULT_LIMITS
    return parse_limit_spec(spec)


def check_bound(value: int, bound: int, what: str) -> None:
    if value > bound:
        raise SizeLimitError(
            f"{what} = {value} exceeds the active bound {bound}; "
            "set FORESTCALC_LIMIT to raise it"
        )
