"""Synthesis recipes: token alphabet, parsing, encoding, sampling, statistics.

A recipe is a fixed-length sequence of optimization passes drawn from a
seven-token alphabet.  Tokens have a stable numeric code (used when recipes
are fed to downstream models as integer vectors) and a surface syntax that
mirrors the usual script form of the passes ("b", "rw", "rw -z", ...).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Mapping, Sequence, Union


class RecipeError(ValueError):
    """Raised for malformed recipe text, codes, or statistics inputs."""


class TransformToken(IntEnum):
    """One optimization pass; the value is the token's numeric code."""

    B = 0
    RW = 1
    RWZ = 2
    RF = 3
    RFZ = 4
    RS = 5
    RSZ = 6


_SURFACE = {
    TransformToken.B: "b",
    TransformToken.RW: "rw",
    TransformToken.RWZ: "rw -z",
    TransformToken.RF: "rf",
    TransformToken.RFZ: "rf -z",
    TransformToken.RS: "rs",
    TransformToken.RSZ: "rs -z",
}

_BASE_WORDS = {
    "b": TransformToken.B,
    "rw": TransformToken.RW,
    "rf": TransformToken.RF,
    "rs": TransformToken.RS,
}

# "-z" upgrades the preceding base token to its zero-cost variant.
_ZERO_COST = {
    TransformToken.RW: TransformToken.RWZ,
    TransformToken.RF: TransformToken.RFZ,
    TransformToken.RS: TransformToken.RSZ,
}

ALPHABET_SIZE = 7

DEFAULT_RECIPE_LENGTH = 20
DEFAULT_RECIPE_COUNT = 1500


def token_surface(token: TransformToken) -> str:
    """Surface syntax of a token, e.g. RWZ -> "rw -z"."""
    return _SURFACE[TransformToken(token)]


@dataclass(frozen=True)
class Recipe:
    """An identified sequence of transform tokens."""

    recipe_id: int
    tokens: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.recipe_id < 0:
            raise RecipeError(f"recipe_id must be non-negative, got {self.recipe_id}")
        object.__setattr__(
            self, "tokens", tuple(TransformToken(t) for t in self.tokens)
        )

    def __len__(self) -> int:
        return len(self.tokens)


TokensLike = Union[Recipe, Sequence[TransformToken]]


def _tokens_of(value: TokensLike) -> tuple:
    if isinstance(value, Recipe):
        return value.tokens
    return tuple(TransformToken(t) for t in value)


def parse_recipe(text: str, recipe_id: int = 0) -> Recipe:
    """Parse recipe text into a Recipe.

    Tokens may be separated by semicolons, whitespace, or both; a bare
    "-z" word attaches to the preceding pass ("rw -z" and "rw;-z" parse
    the same way).  Raises RecipeError on unknown tokens or empty input.
    """
    words = text.replace(";", " ").split()
    if not words:
        raise RecipeError("empty recipe")
    tokens = []
    for word in words:
        if word == "-z":
            if not tokens or tokens[-1] not in _ZERO_COST:
                raise RecipeError(f"'-z' does not follow a pass that accepts it")
            tokens[-1] = _ZERO_COST[tokens[-1]]
        elif word in _BASE_WORDS:
            tokens.append(_BASE_WORDS[word])
        else:
            raise RecipeError(f"unknown recipe token {word!r}")
    return Recipe(recipe_id=recipe_id, tokens=tuple(tokens))


def render_recipe(recipe: TokensLike, sep: str = "; ") -> str:
    """Render tokens back to surface syntax; inverse of parse_recipe."""
    return sep.join(_SURFACE[t] for t in _tokens_of(recipe))


def encode_recipe(recipe: TokensLike) -> list:
    """Numeric code vector of the recipe's tokens."""
    return [int(t) for t in _tokens_of(recipe)]


def decode_recipe(codes: Sequence[int], recipe_id: int = 0) -> Recipe:
    """Rebuild a Recipe from a code vector; inverse of encode_recipe."""
    tokens = []
    for c in codes:
        if not 0 <= int(c) < ALPHABET_SIZE:
            raise RecipeError(f"token code out of range: {c}")
        tokens.append(TransformToken(int(c)))
    return Recipe(recipe_id=recipe_id, tokens=tuple(tokens))


def sample_recipes(count: int, length: int, seed: int) -> list:
    """Sample `count` recipes of `length` iid uniform tokens.

    Deterministic for a given seed; recipe ids run 0..count-1.  Duplicate
    token sequences are permitted (draws are independent).
    """
    if count < 1:
        raise RecipeError(f"count must be >= 1, got {count}")
    if length < 1:
        raise RecipeError(f"length must be >= 1, got {length}")
    rng = random.Random(seed)
    recipes = []
    for rid in range(count):
        tokens = tuple(
            TransformToken(rng.randrange(ALPHABET_SIZE)) for _ in range(length)
        )
        recipes.append(Recipe(recipe_id=rid, tokens=tokens))
    return recipes


def recipe_similarity(r1: TokensLike, r2: TokensLike) -> float:
    """Positional similarity: fraction of positions holding equal tokens.

    Symmetric, 1.0 iff the sequences are identical, 0.0 when they differ
    everywhere.  Raises RecipeError when lengths differ.
    """
    t1, t2 = _tokens_of(r1), _tokens_of(r2)
    if len(t1) != len(t2):
        raise RecipeError(f"length mismatch: {len(t1)} vs {len(t2)}")
    if not t1:
        raise RecipeError("empty recipes have no similarity")
    same = sum(1 for a, b in zip(t1, t2) if a == b)
    return same / len(t1)


def top_k_overlap(
    results: Mapping[str, Sequence[tuple]], k_fraction: float
) -> tuple:
    """Pairwise overlap of the top-k recipe sets across designs.

    `results` maps design name to (recipe_id, final_nodes) pairs.  Each
    design's recipes are ranked by final node count ascending, ties by
    recipe_id, and the top k = max(1, floor(K * k_fraction)) ids are kept,
    where K is the largest result count over the designs.  Returns
    (sorted design names, matrix) with entry (i, j) the intersection size
    of the two top-k sets divided by k; symmetric with unit diagonal.
    """
    if not results:
        raise RecipeError("no results to rank")
    if not 0.0 < k_fraction <= 1.0:
        raise RecipeError(f"k_fraction must be in (0, 1], got {k_fraction}")
    universe = max(len(v) for v in results.values())
    k = max(1, int(universe * k_fraction))
    names = sorted(results)
    top_sets = []
    for name in names:
        ranked = sorted(results[name], key=lambda p: (p[1], p[0]))
        if len(ranked) < k:
            raise RecipeError(
                f"design {name!r} has {len(ranked)} results, needs {k}"
            )
        top_sets.append({rid for rid, _ in ranked[:k]})
    matrix = [
        [len(si & sj) / k for sj in top_sets]
        for si in top_sets
    ]
    return names, matrix


def save_recipes(path, recipes: Iterable[Recipe]) -> None:
    """Write recipes as `id<TAB>surface` lines, compact ";" separators."""
    with open(path, "w", encoding="utf-8") as fh:
        for r in recipes:
            fh.write(f"{r.recipe_id}\t{render_recipe(r, sep=';')}\n")


def load_recipes(path) -> list:
    """Read a file written by save_recipes."""
    recipes = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            head, _, body = line.partition("\t")
            try:
                rid = int(head)
            except ValueError:
                raise RecipeError(f"line {lineno}: bad recipe id {head!r}")
            recipes.append(parse_recipe(body, recipe_id=rid))
    return recipes
