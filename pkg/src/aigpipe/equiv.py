"""Functional-equivalence oracles for pairs of AIGs.

Both checkers match primary inputs and outputs by name, simulate
word-parallel and report the first mismatching assignment when one
exists.  The random checker draws its patterns from splitmix64, a small
fixed generator, so runs reproduce exactly from the seed alone.
"""

from __future__ import annotations

from dataclasses import dataclass

from .aig import Aig, AigError

_MASK64 = (1 << 64) - 1

DEFAULT_EXHAUSTIVE_LIMIT = 16


@dataclass(frozen=True)
class EquivReport:
    equivalent: bool
    method: str  # "exhaustive" or "random"
    patterns_checked: int
    first_mismatch: dict[str, int] | None = None
    mismatched_output: str | None = None


def splitmix64(seed: int):
    """Infinite stream of 64-bit words from the splitmix64 recurrence."""
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def _matched_interfaces(a: Aig, b: Aig) -> tuple[list[str], list[str]]:
    pis_a, pis_b = sorted(a.pi_names), sorted(b.pi_names)
    if pis_a != pis_b:
        raise AigError(f"input name mismatch: {pis_a} vs {pis_b}")
    pos_a = sorted(name for name, _ in a.pos)
    pos_b = sorted(name for name, _ in b.pos)
    if pos_a != pos_b:
        raise AigError(f"output name mismatch: {pos_a} vs {pos_b}")
    return pis_a, pos_a


def _simulate_by_name(aig: Aig, pi_names: list[str], words: list[int],
                      width: int) -> dict[str, int]:
    by_name = dict(zip(pi_names, words))
    ordered = [by_name[n] for n in aig.pi_names]
    out = aig.simulate(ordered, width=width)
    return {name: word for (name, _), word in zip(aig.pos, out)}


def _compare(a: Aig, b: Aig, pi_names: list[str], po_names: list[str],
             words: list[int], width: int) -> tuple[str, int] | None:
    """First differing (output name, bit position) or None."""
    va = _simulate_by_name(a, pi_names, words, width)
    vb = _simulate_by_name(b, pi_names, words, width)
    hit: tuple[str, int] | None = None
    for name in po_names:
        diff = va[name] ^ vb[name]
        if diff:
            bit = (diff & -diff).bit_length() - 1
            if hit is None or bit < hit[1]:
                hit = (name, bit)
    return hit


def _mismatch_assignment(pi_names: list[str], words: list[int],
                         bit: int) -> dict[str, int]:
    return {n: (w >> bit) & 1 for n, w in zip(pi_names, words)}


def exhaustive_equiv(a: Aig, b: Aig,
                     limit: int = DEFAULT_EXHAUSTIVE_LIMIT) -> EquivReport:
    """Check all ``2**PI`` assignments; PI count must not exceed ``limit``."""
    pi_names, po_names = _matched_interfaces(a, b)
    n = len(pi_names)
    if n > limit:
        raise AigError(f"{n} inputs exceed the exhaustive limit of {limit}")
    width = 1 << n
    words = []
    for i in range(n):
        # input i toggles with period 2^(i+1) across the assignment index
        w = 0
        unit = ((1 << (1 << i)) - 1) << (1 << i)
        for start in range(0, width, 1 << (i + 1)):
            w |= unit << start
        words.append(w)
    hit = _compare(a, b, pi_names, po_names, words, width)
    if hit is None:
        return EquivReport(True, "exhaustive", width)
    name, bit = hit
    return EquivReport(False, "exhaustive", width,
                       _mismatch_assignment(pi_names, words, bit), name)


def random_sim_equiv(a: Aig, b: Aig, num_words: int = 64,
                     seed: int = 1) -> EquivReport:
    """Probabilistic check over ``num_words`` random 64-bit words per input.

    Finding a mismatch is conclusive; agreement only says no difference was
    sampled.  Words are assigned to inputs in sorted-name order so the two
    graphs see identical stimulus regardless of construction order.
    """
    pi_names, po_names = _matched_interfaces(a, b)
    gen = splitmix64(seed)
    checked = 0
    for _ in range(num_words):
        words = [next(gen) for _ in pi_names]
        hit = _compare(a, b, pi_names, po_names, words, 64)
        if hit is not None:
            name, bit = hit
            return EquivReport(False, "random", checked + bit + 1,
                               _mismatch_assignment(pi_names, words, bit),
                               name)
        checked += 64
    return EquivReport(True, "random", checked)
