"""Global evaluation limits for lazy series."""

from contextlib import contextmanager
from dataclasses import dataclass


@dataclass
class Settings:
    budget: int = 32          # default number of terms forced for display and comparison
    cancel_limit: int = 64    # consecutive cancelled monomials before a stream is declared stalled
    scan_limit: int = 256     # terms scanned when locating the constant part of a series


settings = Settings()


@contextmanager
def using(**changes):
    old = {k: getattr(settings, k) for k in changes}
    for k, v in changes.items():
        setattr(settings, k, v)
    try:
        yield settings
    finally:
        for k, v in old.items():
            setattr(settings, k, v)
