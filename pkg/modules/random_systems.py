"""Seeded random systems for the property suites."""

from __future__ import annotations

import logging
import random
from typing import Dict, Iterator, List, Optional

from core.boolean_algebra import FiniteGBA, GbaIdeal, GbaMorphism, Member
from core.dynamical_system import DynamicalSystem, validate_system

logger = logging.getLogger(__name__)

LETTERS = "abcdefgh"


def _random_partition(rng: random.Random, size: int) -> List[Member]:
    blocks: List[Member] = []
    for i in range(size):
        if blocks and rng.random() < 0.25:
            j = rng.randrange(len(blocks))
            blocks[j] |= 1 << i
        else:
            blocks.append(1 << i)
    return blocks


def _random_morphism(rng: random.Random, gba: FiniteGBA, density: float) -> GbaMorphism:
    images: Dict[Member, Member] = {atom: 0 for atom in gba.atoms}
    for target in gba.atoms:
        if rng.random() < density:
            images[rng.choice(gba.atoms)] |= target
    return GbaMorphism(gba, gba, images)


def _random_union(rng: random.Random, atoms, p: float) -> Member:
    out = 0
    for atom in atoms:
        if rng.random() < p:
            out |= atom
    return out


def random_system(seed: int, max_ground: int = 4, max_letters: int = 3,
                  relative: Optional[bool] = None) -> DynamicalSystem:
    """A valid system drawn from ``seed``; ``relative`` forces or forbids a proper J."""
    rng = random.Random(seed)
    size = rng.randint(1, max_ground)
    ground = tuple(f"v{i + 1}" for i in range(size))
    gba = FiniteGBA.from_atoms(ground, _random_partition(rng, size))
    alphabet = tuple(LETTERS[: rng.randint(1, max_letters)])
    density = rng.choice((0.3, 0.5, 0.7))
    theta = {a: _random_morphism(rng, gba, density) for a in alphabet}
    ideals = {
        a: GbaIdeal(gba, theta[a](gba.top) | _random_union(rng, gba.atoms, 0.3))
        for a in alphabet
    }
    draft = validate_system(gba, alphabet, theta, ideals)
    if relative is None:
        relative = rng.random() < 0.4
    if not relative:
        return draft
    regular_atoms = gba.atoms_below(draft.regular_sets.top)
    top = _random_union(rng, regular_atoms, 0.5)
    return draft.with_relative_ideal(GbaIdeal(gba, top))


def random_system_seeds(count: int, seed: int) -> List[int]:
    """Per-system seeds drawn from ``seed``; a failing system is reproduced from its own seed."""
    rng = random.Random(seed)
    return [rng.randrange(2**31) for _ in range(count)]


def random_systems(count: int, seed: int, max_ground: int = 4, max_letters: int = 3,
                   relative: Optional[bool] = None) -> Iterator[DynamicalSystem]:
    for system_seed in random_system_seeds(count, seed):
        yield random_system(system_seed, max_ground, max_letters, relative)


__all__ = ["random_system", "random_systems", "random_system_seeds"]
