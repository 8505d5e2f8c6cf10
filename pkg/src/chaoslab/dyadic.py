"""Dyadic sample space: Rademacher/Walsh evaluation and exact step functions.

Every function in scope is constant on open dyadic cells, so all evaluation
happens on cells, never at breakpoints (where sign(sin) vanishes).  A cell of
generation ``m`` is described by its binary digits ``s_1 .. s_m`` (most
significant first): it is the interval ``(sum s_i 2^-i, sum s_i 2^-i + 2^-m)``.

The k-th Rademacher function equals ``+1`` on cells whose k-th digit is 0 and
``-1`` otherwise.  Polynomials in ``r_1 .. r_n`` are stored densely, indexed
by a sign-vector bitmask: bit ``i-1`` of the mask holds the i-th digit, so a
set bit means ``r_i = -1`` there.  All atoms of a generation carry equal
weight, hence masks can be enumerated in any order without touching the
distribution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EnumerationCapError, InsufficientPrecisionError

#: Default cap on the number of enumerated sign bits for a 1D step function.
MAX_BITS_1D = 24

#: Default cap on the total number of sign bits (both axes) materialized in 2D.
MAX_BITS_2D = 26


@dataclass(frozen=True)
class DyadicPoint:
    """An open dyadic cell, given by its binary digits, most significant first."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) == 0:
            raise ValueError("a dyadic point needs at least one bit")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")

    @property
    def precision(self) -> int:
        return len(self.bits)

    @property
    def left(self) -> float:
        """Left endpoint of the cell."""
        return sum(b * 2.0 ** -(i + 1) for i, b in enumerate(self.bits))

    @classmethod
    def cell(cls, index: int, precision: int) -> "DyadicPoint":
        """The index-th cell (0-based, left to right) of the given generation."""
        if not 0 <= index < 2**precision:
            raise ValueError(f"cell index {index} out of range for precision {precision}")
        return cls(tuple((index >> (precision - 1 - i)) & 1 for i in range(precision)))


def rademacher(k: int, p: DyadicPoint) -> int:
    """Value of the k-th Rademacher function on the cell ``p``.

    Equals +1 when the k-th binary digit of the cell is 0; this is the sign of
    the corresponding sine on the open cell.
    """
    if k < 1:
        raise ValueError("Rademacher index must be >= 1")
    if k > p.precision:
        raise InsufficientPrecisionError(
            f"insufficient precision: r_{k} needs {k} bits, point has {p.precision}"
        )
    return 1 - 2 * p.bits[k - 1]


def walsh(j: int, p: DyadicPoint) -> int:
    """Value of the j-th Walsh function (1-based, w_1 = 1) on the cell ``p``.

    w_{2^i + j'} = r_{i+1} * w_{j'}; unwinding the recursion, w_j is the
    product of r_{b+1} over the set bits b of j-1.  The first 2^k Walsh
    functions therefore only involve r_1 .. r_k and are constant on cells of
    generation k.
    """
    if j < 1:
        raise ValueError("Walsh index must be >= 1")
    sign = 1
    b = j - 1
    pos = 1
    while b:
        if b & 1:
            sign *= rademacher(pos, p)
        b >>= 1
        pos += 1
    return sign


def dyadic_add(s: DyadicPoint, u: DyadicPoint) -> DyadicPoint:
    """Dyadic group addition: bitwise XOR of the digit sequences."""
    if s.precision != u.precision:
        raise ValueError(
            f"precision mismatch: {s.precision} vs {u.precision}"
        )
    return DyadicPoint(tuple(a ^ b for a, b in zip(s.bits, u.bits)))


def signs_from_masks(masks: np.ndarray, n: int) -> np.ndarray:
    """Sign matrix for an array of bitmasks: entry (m, i) is the sign of r_{i+1}.

    A set bit i of the mask maps to -1.
    """
    masks = np.asarray(masks, dtype=np.uint64)
    shifts = np.arange(n, dtype=np.uint64)
    bits = (masks[:, None] >> shifts[None, :]) & np.uint64(1)
    return 1.0 - 2.0 * bits.astype(np.float64)


def mask_from_signs(eps) -> int:
    """Bitmask of a sign vector (entries +-1); -1 sets the bit."""
    mask = 0
    for i, e in enumerate(eps):
        if e == -1:
            mask |= 1 << i
        elif e != 1:
            raise ValueError(f"sign vector entries must be +-1, got {e}")
    return mask


def full_sign_matrix(n: int) -> np.ndarray:
    """All 2^n sign vectors as a (2^n, n) matrix of +-1 floats, mask order."""
    return signs_from_masks(np.arange(2**n, dtype=np.uint64), n)


def point_to_mask(p: DyadicPoint) -> int:
    """Bitmask of the sign vector realized on the cell ``p``."""
    mask = 0
    for i, b in enumerate(p.bits):
        mask |= b << i
    return mask


@dataclass(frozen=True, eq=False)
class StepFunction1D:
    """Exact step function on the interval, one value per generation-n cell."""

    n: int
    values: np.ndarray  # shape (2**n,), indexed by sign-vector bitmask

    def __post_init__(self):
        if self.values.shape != (2**self.n,):
            raise ValueError(
                f"values shape {self.values.shape} does not match generation {self.n}"
            )

    @property
    def atom_measure(self) -> float:
        return 2.0**-self.n

    def flat_values(self) -> np.ndarray:
        return self.values

    def integral(self) -> float:
        """Exact integral over the interval."""
        return float(self.values.sum()) * self.atom_measure


@dataclass(frozen=True, eq=False)
class StepFunction2D:
    """Exact step function on the square, one value per pair of cells."""

    n: int
    m: int
    values: np.ndarray  # shape (2**n, 2**m), indexed by (s-mask, t-mask)

    def __post_init__(self):
        if self.values.shape != (2**self.n, 2**self.m):
            raise ValueError(
                f"values shape {self.values.shape} does not match generations "
                f"({self.n}, {self.m})"
            )

    @property
    def atom_measure(self) -> float:
        return 2.0 ** -(self.n + self.m)

    def flat_values(self) -> np.ndarray:
        return self.values.reshape(-1)

    def integral(self) -> float:
        return float(self.values.sum()) * self.atom_measure


def materialize_1d(coeffs, max_bits: int = MAX_BITS_1D) -> StepFunction1D:
    """Step function of the linear polynomial sum(c_i * r_i) over all sign vectors.

    Exact: the value at mask m is the signed sum of the coefficients, built by
    one doubling pass per coefficient.
    """
    c = np.asarray(coeffs, dtype=np.float64).reshape(-1)
    n = c.size
    if n < 1:
        raise ValueError("need at least one coefficient")
    if n > max_bits:
        raise EnumerationCapError(
            f"enumeration too large: {n} bits exceeds cap {max_bits}"
        )
    vals = np.zeros(1, dtype=np.float64)
    for ci in c:
        vals = np.concatenate([vals + ci, vals - ci])
    return StepFunction1D(n=n, values=vals)
