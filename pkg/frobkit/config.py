"""
Runtime configuration read from the environment.

Values are read once at import time; CLI flags and explicit ``Budget``
arguments override them per call.
"""

import os
import time
from dataclasses import dataclass
from typing import Optional

# Groebner engine budgets
MAX_REDUCTIONS = int(os.getenv("FROBKIT_MAX_REDUCTIONS", "1000000"))
MAX_SPAIRS = int(os.getenv("FROBKIT_MAX_SPAIRS", "200000"))
# 0 disables the wall-clock limit
TIMEOUT_SECONDS = float(os.getenv("FROBKIT_TIMEOUT_SECONDS", "0"))

# Ideal powers fall back to a GB-reduced generating set above this many generators
POWER_GENERATOR_CAP = int(os.getenv("FROBKIT_POWER_GENERATOR_CAP", "200"))

DEFAULT_TAU = float(os.getenv("FROBKIT_DEFAULT_TAU", "0.001"))
LOG_LEVEL = os.getenv("FROBKIT_LOG_LEVEL", "WARNING").upper()
THREADS = int(os.getenv("FROBKIT_THREADS", "1"))

ENGINE_VERSION = "1.0.0"


def default_emax(p: int) -> int:
    """Bracket powers blow up GB sizes as q^n, so larger primes get fewer steps"""
    return 3 if p <= 3 else 2


@dataclass
class Budget:
    """Per-call limits for Groebner basis computations"""
    max_reductions: int = MAX_REDUCTIONS
    max_spairs: int = MAX_SPAIRS
    timeout: float = TIMEOUT_SECONDS

    @classmethod
    def from_config(cls, **overrides) -> "Budget":
        values = {k: v for k, v in overrides.items() if v is not None}
        return cls(**values)

    def deadline(self) -> Optional[float]:
        if self.timeout and self.timeout > 0:
            return time.monotonic() + self.timeout
        return None
