"""Deterministic random-stream derivation.

A single 64-bit root seed is split into independent child streams by
purpose and replicate index via ``numpy.random.SeedSequence`` spawn keys.
The derivation is part of the file-format contract: stream(seed, purpose, rep)
is reproducible across runs, machines and worker counts, so any single
replicate of a study can be replayed in isolation.

Purpose indices: 0 = driving Levy process, 1 = time change, 2 = limit-law
oracle, 3 = auxiliary (tests, synthetic data).
"""

import numpy as np

PURPOSE_PROCESS = 0
PURPOSE_TIME_CHANGE = 1
PURPOSE_ORACLE = 2
PURPOSE_AUX = 3


def stream(seed: int, purpose: int = 0, replicate: int = 0) -> np.random.Generator:
    """Return the child generator for (seed, purpose, replicate)."""
    seq = np.random.SeedSequence(int(seed), spawn_key=(int(purpose), int(replicate)))
    return np.random.Generator(np.random.PCG64(seq))


def substreams(seed: int, purpose: int, n: int, offset: int = 0):
    """Generators for replicates offset..offset+n-1 of one purpose."""
    return [stream(seed, purpose, offset + i) for i in range(n)]
