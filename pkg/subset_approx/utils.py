from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence, Tuple, Union


def full_mask(n: int) -> int:
    return (1 << n) - 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def remap_mask(mask: int, mapping: Sequence[int]) -> int:
    # mapping[i] is the target index of source bit i
    out = 0
    for i in iter_bits(mask):
        out |= 1 << mapping[i]
    return out


def compress_mask(mask: int, keep: Sequence[int]) -> int:
    # inverse of remap_mask restricted to the kept positions
    out = 0
    for new, old in enumerate(keep):
        if mask >> old & 1:
            out |= 1 << new
    return out


@lru_cache(maxsize=None)
def harmonic(d: int) -> Fraction:
    """H_d = 1 + 1/2 + ... + 1/d as an exact rational (H_0 is taken as 1)."""
    return sum((Fraction(1, i) for i in range(2, d + 1)), Fraction(1))


def to_fraction(value: Union[str, int, float, Fraction]) -> Fraction:
    # floats go through their shortest repr so 0.1 means 1/10
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def one_based(members: Iterable[int]) -> Tuple[int, ...]:
    return tuple(m + 1 for m in members)
