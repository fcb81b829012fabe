"""Seeded random streams. All randomness in the package goes through ``make_rng``."""
from __future__ import annotations

import numpy as np


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based (Philox) generator keyed by ``seed`` and an optional stream path.

    Distinct ``stream`` tuples give independent generators, so experiment rows can
    be reproduced individually.
    """
    ss = np.random.SeedSequence([int(seed), *(int(s) for s in stream)])
    return np.random.Generator(np.random.Philox(ss))
