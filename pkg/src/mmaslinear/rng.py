"""Seeding discipline.

Every run draws from its own PCG64 stream seeded by a 64-bit integer. Sweeps
derive each run's seed from ``(master_seed, grid point, replicate)`` through
``numpy.random.SeedSequence``, so a run's statistics never depend on
scheduling and any single run can be replayed from its seed alone.
"""

import struct
import zlib

import numpy as np

ALGORITHM_STREAM = 0
INSTANCE_STREAM = 1


def make_rng(seed, stream=ALGORITHM_STREAM):
    """Generator for one run. ``stream`` separates independent uses of a seed."""
    seq = np.random.SeedSequence(int(seed), spawn_key=(stream,))
    return np.random.Generator(np.random.PCG64(seq))


def label_key(label):
    """Stable non-negative integer for a string label."""
    return zlib.crc32(label.encode("utf-8"))


def float_key(value):
    """The IEEE-754 bit pattern of ``value`` as an integer."""
    return struct.unpack("<Q", struct.pack("<d", float(value)))[0]


def derive_seed(master_seed, *key):
    """64-bit seed determined by ``master_seed`` and a tuple of ints."""
    seq = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(k) for k in key))
    return int(seq.generate_state(1, np.uint64)[0])
