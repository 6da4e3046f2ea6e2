"""Детерминированные потоки случайных чисел.

Каждая реплика k получает свои подпотоки, выведенные из пары (seed, k), поэтому
результат не зависит ни от порядка, ни от числа параллельных процессов.
"""

import enum

import numpy as np


class Stream(enum.IntEnum):
    """Независимые подпотоки одной реплики.

    Режимы correlated/independent используют одни и те же PATTERN, OBSTACLES, CELL_SHADOW
    и FADING потоки (общие случайные числа); independent дополнительно читает POINT_SHADOW.
    """

    PATTERN = 0
    OBSTACLES = 1
    CELL_SHADOW = 2
    POINT_SHADOW = 3
    FADING = 4
    GENERIC = 5


def replication_rng(seed: int, replication: int, stream: Stream = Stream.GENERIC) -> np.random.Generator:
    sequence = np.random.SeedSequence(entropy=int(seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=(int(replication), int(stream)))
    return np.random.default_rng(sequence)


def as_generator(seed: int | np.random.Generator) -> np.random.Generator:
    """Принимает как готовый генератор, так и целое зерно."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF))
