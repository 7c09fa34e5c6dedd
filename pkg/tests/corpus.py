"""Shared fan corpus for the test suite (built-ins plus seeded random fans)."""

from __future__ import annotations

import random
from functools import lru_cache

from toric_betti.fan import Fan, validate_fan
from toric_betti.fanfile import BUILTINS
from toric_betti.generators import (pyramid_fan, random_face_fan, random_fan_2d,
                                    random_star_fan)

P2 = ([[1, 0], [0, 1], [-1, -1]], [[0, 1], [1, 2], [0, 2]])
A2_SING = ([[1, 0], [0, 1], [-1, -2]], [[0, 1], [1, 2], [0, 2]])
HEXAGON = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]
# unimodular map sending the hexagon pyramid's rays to a mix of zero patterns
MIXER = [[1, 1, 1], [0, 1, 2], [0, 0, 1]]


def builtin_fan(name: str) -> Fan:
    return BUILTINS[name].to_fan()


@lru_cache(maxsize=None)
def corpus_3d() -> tuple[Fan, ...]:
    rng = random.Random(2024)
    fans = [builtin_fan(n) for n in ("p3", "p1cubed", "pyramid")]
    fans.append(pyramid_fan(HEXAGON, MIXER, name="hexagon"))
    fans += [random_face_fan(rng) for _ in range(6)]
    fans += [random_star_fan(rng, f) for f in (4, 5, 6, 7)]
    return tuple(fans)


@lru_cache(maxsize=None)
def corpus_2d() -> tuple[Fan, ...]:
    rng = random.Random(7)
    fans = [builtin_fan("p1p1"), validate_fan(2, *P2, name="p2"),
            validate_fan(2, *A2_SING, name="a1")]
    fans += [random_fan_2d(rng) for _ in range(4)]
    return tuple(fans)
