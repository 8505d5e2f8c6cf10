"""Exact sup norms of chaos polynomials and extremal sign-matrix searches.

The sup of |sum a_ij r_i(s) r_j(t)| over the square reduces to scanning sign
vectors of the s-axis only: for fixed signs eps the best t-signs align every
column, giving max_eps sum_j |sum_i a_ij eps_i|.  Sign vectors are scanned as
bitmasks (negation symmetry halves the range); for exact +-1 matrices the
inner sums collapse to popcounts of XORed masks.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .chaos import as_coefficient_matrix, eval_decoupled
from .dyadic import DyadicPoint, StepFunction2D, materialize_1d, signs_from_masks, walsh
from .errors import EnumerationCapError
from .rearrange import Rearrangement, rearrangement
from .spaces import marcinkiewicz_norm, phi_eps, quasinorm_phi_eps

SUP_DECOUPLED_CAP = 30
SUP_UNDECOUPLED_CAP = 24
EXHAUSTIVE_CAP = 5
EXACT_AVERAGE_CAP = 4
MONTE_CARLO_CAP = 16
WALSH_K_CAP = 5
SIDON_K_CAP = 4
THEOREM7_FULL_CAP = 2
THEOREM7_CORNER_CAP = 4

_CHUNK = 1 << 16
_RNG_NAME = "philox4x64"


@dataclass(frozen=True)
class SearchReport:
    """Outcome of one extremal computation, with enough state to reproduce it."""

    n: int
    mode: str  # "exhaustive" | "exhaustive_average" | "monte_carlo" | "walsh"
    value: float
    samples: int
    seed: int
    elapsed: float
    stddev: float | None = None
    rng: str | None = None


def _even_masks(n: int) -> np.ndarray:
    """Masks of the 2^(n-1) sign vectors with first sign fixed to +1."""
    return (np.arange(2 ** (n - 1), dtype=np.uint64)) << np.uint64(1)


def _column_masks(theta: np.ndarray) -> np.ndarray:
    """Bitmask per column of a +-1 matrix; bit i set where row i is -1."""
    bits = (theta < 0).astype(np.uint64)
    weights = np.uint64(1) << np.arange(theta.shape[0], dtype=np.uint64)
    return bits.T @ weights


def sup_norm_decoupled(a, cap: int = SUP_DECOUPLED_CAP) -> float:
    """Exact sup norm of the decoupled chaos polynomial with coefficients ``a``.

    Scans 2^(n-1) sign vectors of the row axis; +-1 matrices go through the
    popcount kernel, general real matrices through chunked matrix products.
    """
    a = as_coefficient_matrix(a)
    n, m = a.shape
    if n > cap:
        raise EnumerationCapError(f"row dimension {n} exceeds scan cap {cap}")
    total = 2 ** (n - 1)
    best = 0.0
    if np.all(np.abs(a) == 1.0):
        cols = _column_masks(a)
        for start in range(0, total, _CHUNK):
            eps = (np.arange(start, min(start + _CHUNK, total), dtype=np.uint64)
                   << np.uint64(1))
            pc = np.bitwise_count(cols[None, :] ^ eps[:, None]).astype(np.int64)
            best = max(best, float(np.abs(n - 2 * pc).sum(axis=1).max()))
        return best
    for start in range(0, total, _CHUNK):
        masks = (np.arange(start, min(start + _CHUNK, total), dtype=np.uint64)
                 << np.uint64(1))
        signs = signs_from_masks(masks, n)
        best = max(best, float(np.abs(signs @ a).sum(axis=1).max()))
    return best


def sup_norm_undecoupled(b, cap: int = SUP_UNDECOUPLED_CAP) -> float:
    """Exact sup norm of sum b_ij r_i(t) r_j(t) (diagonal included, as a quadratic form)."""
    b = as_coefficient_matrix(b)
    n, m = b.shape
    if n != m:
        raise ValueError(f"undecoupled coefficients must be square, got {n}x{m}")
    if n > cap:
        raise EnumerationCapError(f"dimension {n} exceeds scan cap {cap}")
    total = 2 ** (n - 1)
    best = 0.0
    for start in range(0, total, _CHUNK):
        masks = (np.arange(start, min(start + _CHUNK, total), dtype=np.uint64)
                 << np.uint64(1))
        signs = signs_from_masks(masks, n)
        quad = np.einsum("ci,ci->c", signs @ b, signs)
        best = max(best, float(np.abs(quad).max()))
    return best


def walsh_sign_arrangement(k: int, cap: int = WALSH_K_CAP) -> np.ndarray:
    """Sign matrix of the first 2^k Walsh functions on the generation-k cells.

    Row i holds the signs on the i-th cell; the resulting arrangement keeps
    the decoupled sup norm at or below 2^(3k/2).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if k > cap:
        raise EnumerationCapError(f"k={k} exceeds cap {cap}")
    if k == 0:
        return np.ones((1, 1))
    size = 2**k
    theta = np.empty((size, size))
    for i in range(size):
        cell = DyadicPoint.cell(i, k)
        for j in range(size):
            theta[i, j] = walsh(j + 1, cell)
    return theta


def _phi_table(n: int) -> np.ndarray:
    """T[x, y] = sum-free column score |n - 2 popcount(x ^ y)| on (n-1)-bit masks."""
    x = np.arange(2 ** (n - 1), dtype=np.uint64)
    pc = np.bitwise_count(x[:, None] ^ x[None, :]).astype(np.int64)
    return np.abs(n - 2 * pc)


def exhaustive_inf(n: int, symmetric: bool = False,
                   cap: int = EXHAUSTIVE_CAP) -> SearchReport:
    """Exact minimum of the sup norm over all sign matrices.

    Decoupled mode canonicalizes by row/column sign flips (first row and
    column pinned to +1), shrinking the scan to 2^((n-1)^2) matrices; flipping
    a row or column permutes the sign vectors so the sup norm is unchanged.
    Symmetric mode enumerates all 2^(n(n+1)/2) symmetric matrices directly.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise EnumerationCapError(f"n={n} exceeds exhaustive cap {cap}")
    t0 = time.perf_counter()
    if not symmetric:
        width = n - 1
        combos = np.arange(2 ** (width * width), dtype=np.uint64)
        table = _phi_table(n)
        scores = np.broadcast_to(table[0], (combos.size, 2**width)).copy()
        digit_mask = np.uint64(2**width - 1)
        for j in range(width):
            digits = (combos >> np.uint64(j * width)) & digit_mask
            scores += table[digits.astype(np.int64)]
        value = float(scores.max(axis=1).min())
        samples = int(combos.size)
    else:
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        bits_total = len(pairs) + n
        combos = np.arange(2**bits_total, dtype=np.uint64)
        eps = signs_from_masks(_even_masks(n), n)  # (E, n)
        off = np.stack([eps[:, i] * eps[:, j] for i, j in pairs], axis=1) if pairs \
            else np.zeros((eps.shape[0], 0))
        coeff = np.empty((combos.size, bits_total))
        for b in range(bits_total):
            coeff[:, b] = 1.0 - 2.0 * ((combos >> np.uint64(b)) & np.uint64(1)).astype(np.float64)
        theta_off = coeff[:, : len(pairs)]
        theta_diag = coeff[:, len(pairs):]
        quad = 2.0 * theta_off @ off.T + theta_diag.sum(axis=1, keepdims=True)
        value = float(np.abs(quad).max(axis=1).min())
        samples = int(combos.size)
    return SearchReport(
        n=n,
        mode="exhaustive",
        value=value,
        samples=samples,
        seed=0,
        elapsed=time.perf_counter() - t0,
    )


def exact_average(n: int, cap: int = EXACT_AVERAGE_CAP) -> SearchReport:
    """Exact mean of the decoupled sup norm over all 2^(n^2) sign matrices."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise EnumerationCapError(f"n={n} exceeds exact-average cap {cap}")
    t0 = time.perf_counter()
    eps = _even_masks(n)
    col_space = np.arange(2**n, dtype=np.uint64)
    pc = np.bitwise_count(col_space[:, None] ^ eps[None, :]).astype(np.int64)
    table = np.abs(n - 2 * pc)  # (2^n, 2^(n-1))
    combos = np.arange(2 ** (n * n), dtype=np.uint64)
    scores = np.zeros((combos.size, eps.size), dtype=np.int64)
    col_mask = np.uint64(2**n - 1)
    for j in range(n):
        cols = (combos >> np.uint64(j * n)) & col_mask
        scores += table[cols.astype(np.int64)]
    phis = scores.max(axis=1)
    return SearchReport(
        n=n,
        mode="exhaustive_average",
        value=float(phis.mean()),
        samples=int(combos.size),
        seed=0,
        elapsed=time.perf_counter() - t0,
    )


def monte_carlo_average(n: int, samples: int, seed: int,
                        cap: int = MONTE_CARLO_CAP) -> SearchReport:
    """Unbiased estimate of the mean sup norm over uniform random sign matrices.

    Matrices are drawn from a counter-based Philox generator keyed by ``seed``
    in a fixed order, so identical (n, samples, seed) reproduce the report
    bit for bit.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise EnumerationCapError(f"n={n} exceeds Monte-Carlo cap {cap}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    t0 = time.perf_counter()
    rng = np.random.Generator(np.random.Philox(key=seed))
    cols = rng.integers(0, 2**n, size=(samples, n), dtype=np.uint64)
    eps = _even_masks(n)
    phis = np.empty(samples, dtype=np.float64)
    step = max(1, _CHUNK // max(1, n * eps.size // 64))
    for start in range(0, samples, step):
        block = cols[start : start + step]
        pc = np.bitwise_count(block[:, :, None] ^ eps[None, None, :]).astype(np.int64)
        phis[start : start + block.shape[0]] = (
            np.abs(n - 2 * pc).sum(axis=1).max(axis=1)
        )
    std = float(phis.std(ddof=1)) if samples > 1 else 0.0
    return SearchReport(
        n=n,
        mode="monte_carlo",
        value=float(phis.mean()),
        samples=samples,
        seed=seed,
        elapsed=time.perf_counter() - t0,
        stddev=std,
        rng=_RNG_NAME,
    )


def sidon_defect(k: int, cap: int = SIDON_K_CAP) -> float:
    """Sup norm of the Walsh arrangement divided by its l1 coefficient mass 2^(2k).

    Decays like 2^(-k/2), witnessing that the product system is not Sidon.
    The scan cap keeps k at or below 4 (k=5 would need 2^31 sign vectors).
    """
    if k > cap:
        raise EnumerationCapError(f"k={k} exceeds cap {cap}")
    theta = walsh_sign_arrangement(k)
    return sup_norm_decoupled(theta) / 4.0**k


@dataclass(frozen=True)
class Theorem7Block:
    """Per-block record of the blow-up construction."""

    k: int
    window: tuple[int, int]  # half-open index window (lo, hi]
    signed_sup: float  # sup norm of the Walsh-signed block
    signed_bound: float  # 2^(3k/2)
    corner_value: float  # flipped block at the all-plus sign pair
    corner_expected: float  # 2^(2k)
    rearranged_at_uk: float | None = None  # flipped block rearrangement at u_k
    u_k: float | None = None
    marc_quasi_ratio: float | None = None


@dataclass(frozen=True)
class Theorem7Report:
    eps: float
    mode: str  # "full" | "corner"
    blocks: list[Theorem7Block]
    partial_quasinorms: list[float] = field(default_factory=list)
    lower_bounds: list[float] = field(default_factory=list)  # 2^(eps*k/2 - 1)


def _block_windows(K: int) -> list[tuple[int, int]]:
    return [(2**k, 2 ** (k + 1)) for k in range(K + 1)]


def theorem7_witness(eps: float, K: int, mode: str = "full") -> Theorem7Report:
    """Build and check the block construction that escapes the Marcinkiewicz space.

    Block k carries Walsh signs on the index window (2^k, 2^(k+1)]; its sup
    norm stays below 2^(3k/2) while flipping the signs to all-ones produces
    the peak value 2^(2k) on a corner of the square.  Full mode additionally
    computes exact rearrangements of the flipped blocks and the quasi-norms of
    the partial sign-flipped images, whose lower bounds grow like
    2^(eps*k/2 - 1).
    """
    if not 0.0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    if mode not in ("full", "corner"):
        raise ValueError(f"mode must be 'full' or 'corner', got {mode}")
    cap = THEOREM7_FULL_CAP if mode == "full" else THEOREM7_CORNER_CAP
    if K > cap:
        raise EnumerationCapError(f"K={K} exceeds {mode}-mode cap {cap}")

    blocks: list[Theorem7Block] = []
    for k, (lo, hi) in enumerate(_block_windows(K)):
        width = hi - lo
        theta = walsh_sign_arrangement(k)
        signed_sup = sup_norm_decoupled(theta)
        corner = float(np.ones((width, width)).sum())
        rearr_at = None
        u_k = None
        ratio = None
        if mode == "full":
            u_k = 2.0 ** (-(2 ** (k + 2)) + 1)
            # the flipped block factors through the window variables only
            axis = materialize_1d(np.ones(width))
            y_k = StepFunction2D(
                n=width, m=width, values=np.outer(axis.values, axis.values)
            )
            r = rearrangement(y_k)
            rearr_at = r.at(u_k)
            marc = marcinkiewicz_norm(r, phi_eps(eps))
            quasi = quasinorm_phi_eps(r, eps)
            ratio = marc / quasi if quasi > 0 else math.inf
        blocks.append(
            Theorem7Block(
                k=k,
                window=(lo, hi),
                signed_sup=signed_sup,
                signed_bound=2.0 ** (1.5 * k),
                corner_value=corner,
                corner_expected=4.0**k,
                rearranged_at_uk=rearr_at,
                u_k=u_k,
                marc_quasi_ratio=ratio,
            )
        )

    partial_quasinorms: list[float] = []
    lower_bounds = [2.0 ** (eps * k / 2.0 - 1.0) for k in range(K + 1)]
    if mode == "full":
        top = 2 ** (K + 1)
        for kk in range(K + 1):
            coeffs = np.zeros((top, top))
            for k, (lo, hi) in enumerate(_block_windows(kk)):
                coeffs[lo:hi, lo:hi] = 2.0 ** (-(3.0 + eps) * k / 2.0)
            image = eval_decoupled(coeffs)
            partial_quasinorms.append(quasinorm_phi_eps(rearrangement(image), eps))
    return Theorem7Report(
        eps=eps,
        mode=mode,
        blocks=blocks,
        partial_quasinorms=partial_quasinorms,
        lower_bounds=lower_bounds,
    )
