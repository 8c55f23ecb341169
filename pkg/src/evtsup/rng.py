"""Counter-based splittable random streams.

Every stochastic routine in this package takes an explicit
``numpy.random.Generator``.  Experiments derive one Philox stream per
(root_seed, replication, entity) triple, so the same plan produces the
same bytes under any parallel schedule.
"""

from __future__ import annotations

import numpy as np

# Entity 0 is reserved for the shared common-factor path; idiosyncratic
# paths use entities 1..n.
COMMON_ENTITY = 0

_MASK32 = (1 << 32) - 1
_MASK64 = (1 << 64) - 1


def stream(root_seed: int, replication: int = 0, entity: int = 0) -> np.random.Generator:
    """Pure mapping (root_seed, replication, entity) -> independent generator.

    The 128-bit Philox key packs the three indices, so distinct triples
    give distinct counter-based streams with no shared state.
    """
    if not 0 <= replication <= _MASK32:
        raise ValueError(f"replication out of range: {replication}")
    if not 0 <= entity <= _MASK32:
        raise ValueError(f"entity out of range: {entity}")
    key = ((root_seed & _MASK64) << 64) | (replication << 32) | entity
    return np.random.Generator(np.random.Philox(key=key))
