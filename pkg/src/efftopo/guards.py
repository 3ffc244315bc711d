"""Size guards for exhaustive quantifications.

Limits live in a context variable so that concurrent callers can use
different settings; :func:`size_limits` overrides them for a block.
"""
import contextvars
from contextlib import contextmanager
from dataclasses import dataclass, replace

from .errors import SizeGuardExceeded


@dataclass(frozen=True)
class Limits:
    subsets: int = 12       # carrier bound for "all (directed) subsets" scans
    lemma22: int = 8        # carrier bound for the full open-set oracle
    topology: int = 14      # carrier bound for materialising open families
    enumeration: int = 6    # largest carrier for exhaustive enumeration
    catalog: int = 24       # largest carrier built by constructors


_LIMITS = contextvars.ContextVar("efftopo_limits", default=Limits())


def limits():
    return _LIMITS.get()


@contextmanager
def size_limits(**overrides):
    token = _LIMITS.set(replace(_LIMITS.get(), **overrides))
    try:
        yield _LIMITS.get()
    finally:
        _LIMITS.reset(token)


def require(what, size, guard):
    bound = getattr(limits(), guard)
    if size > bound:
        raise SizeGuardExceeded(what, size, bound)
