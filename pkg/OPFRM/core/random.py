"""Deterministic random streams. All randomness in OPFRM flows through here."""

__author__ = "OPFRM Developers"
__copyright__ = "Copyright 2026, OPFRM Developers"
__maintainer__ = "OPFRM Developers"


import numpy as np

MAX_SEED = 2**64 - 1


def _check_seed(seed):
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(
            f"Seed must be a 64-bit unsigned integer, got {seed}."
        )

    return seed


def rng_stream(seed, stream_id=0):
    """
    Returns an independent random stream for `(seed, stream_id)`.

    Identical pairs give identical draw sequences. Distinct `stream_id` values
    under one seed are spawned children of the same `SeedSequence`, so they
    are statistically independent and safe to hand to parallel replicates.

    Parameters
    ----------
    seed : int
        64-bit unsigned seed.
    stream_id : int
        Non-negative stream index.

    Returns
    -------
    np.random.Generator
    """

    stream_id = int(stream_id)
    if stream_id < 0:
        raise ValueError(f"stream_id must be non-negative, got {stream_id}.")

    ss = np.random.SeedSequence(_check_seed(seed), spawn_key=(stream_id,))
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(seed, stream_id):
    """
    Derives a child 64-bit seed, used to give each replicate or fold its own
    model seed.

    Parameters
    ----------
    seed : int
    stream_id : int

    Returns
    -------
    int
    """

    ss = np.random.SeedSequence(
        _check_seed(seed), spawn_key=(int(stream_id), 0xF17)
    )
    return int(ss.generate_state(1, dtype=np.uint64)[0])
