"""M x 1-bit hash-mask rejection filters and their unwanted-rejection rate.

A mask of M single-bit cells accepts a frame iff the bit at the frame's hash
index is set. Setting the bits of k wanted addresses gives a perfect
rejection filter: wanted frames are never rejected, and an unwanted address
slips through only when it collides with a set bit. Under uniform hashing
the expected fraction of zero bits after k insertions is (1 - 1/M)^k, which
is the unwanted-rejection rate; for M >> k it is approximately 1 - k/M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .address import ADDRESS_BITS, Address
from .schemes import BitWindow, HashScheme, hash_index, scheme_from_name, window_indexes

CURVE_CSV_HEADER = "model,M,k,rate,ci_halfwidth"
DEFAULT_MASK_SIZES = (2, 4, 8, 16, 32, 64, 128, 512)
_Z95 = 1.959963984540054  # two-sided 95% normal quantile


@dataclass(frozen=True)
class HashMask:
    """An M-bit rejection filter for one scheme/window pair.

    `bits` holds cell i at integer bit position i (cell 0 is the least
    significant bit of the hex form). `wanted_count` is the number of
    addresses inserted, collisions included.
    """

    size: int
    bits: int
    scheme: HashScheme
    window: BitWindow
    wanted_count: int

    @property
    def set_bit_count(self) -> int:
        return self.bits.bit_count()

    def to_hex(self) -> str:
        return f"{self.bits:0{-(-self.size // 4)}x}"


def build_mask(wanted: "set[Address] | list[Address]", scheme: HashScheme,
               window: BitWindow) -> HashMask:
    """Set the hash-index bit of every wanted address."""
    wanted = list(wanted)
    if not wanted:
        raise ValueError("cannot build a mask from an empty wanted set")
    bits = 0
    for addr in wanted:
        bits |= 1 << hash_index(addr, scheme, window)
    return HashMask(
        size=1 << window.length,
        bits=bits,
        scheme=scheme,
        window=window,
        wanted_count=len(wanted),
    )


def filter_accepts(mask: HashMask, addr: Address) -> bool:
    """True iff the mask bit at the address's hash index is set."""
    return bool((mask.bits >> hash_index(addr, mask.scheme, mask.window)) & 1)


def analytic_rejection_rate(wanted_count: int, mask_size: int) -> float:
    """Expected fraction of zero bits after `wanted_count` uniform insertions."""
    if wanted_count < 0 or mask_size < 1:
        raise ValueError(f"need wanted_count >= 0 and mask_size >= 1, "
                         f"got {wanted_count}, {mask_size}")
    return (1.0 - 1.0 / mask_size) ** wanted_count


def approx_rejection_rate(wanted_count: int, mask_size: int) -> float:
    """Linear large-mask approximation max(0, 1 - k/M)."""
    if mask_size < 1:
        raise ValueError(f"mask_size must be >= 1, got {mask_size}")
    return max(0.0, 1.0 - wanted_count / mask_size)


@dataclass(frozen=True)
class MaskSizing:
    """Result of sizing a mask for a target rejection rate.

    `mask_size` is the smallest power of two whose analytic rate meets the
    target; `linear_size` is the ceil(k / (1 - target)) estimate from the
    linear model (e.g. 5x the wanted count for an 80% target).
    """

    mask_size: int
    linear_size: int
    achieved_rate: float


def mask_size_for(target_rate: float, wanted_count: int) -> MaskSizing:
    """Smallest power-of-two mask whose rejection rate reaches the target."""
    if not 0.0 <= target_rate < 1.0:
        raise ValueError(f"target rate must be in [0, 1), got {target_rate} "
                         f"(a rate of 1 is unsatisfiable for a finite mask)")
    if wanted_count < 1:
        raise ValueError(f"wanted_count must be >= 1, got {wanted_count}")
    size = 1
    while analytic_rejection_rate(wanted_count, size) < target_rate:
        size *= 2
    # nudge before ceil: float targets like 0.8 sit a hair below their
    # decimal value, which would push k/(1-t) past the exact quotient
    linear = math.ceil(wanted_count / (1.0 - target_rate) - 1e-9)
    return MaskSizing(
        mask_size=size,
        linear_size=linear,
        achieved_rate=analytic_rejection_rate(wanted_count, size),
    )


@dataclass(frozen=True)
class EmpiricalRate:
    rate: float
    ci_halfwidth: float
    trials: int


def _random_octets(rng: np.random.Generator, count: int) -> np.ndarray:
    """(count, 6) uint8 array of uniform 48-bit addresses."""
    values = rng.integers(0, 1 << ADDRESS_BITS, size=count, dtype=np.uint64)
    shifts = np.arange(40, -1, -8, dtype=np.uint64)
    return ((values[:, None] >> shifts) & np.uint64(0xFF)).astype(np.uint8)


def empirical_rejection_rate(scheme: HashScheme, window: BitWindow,
                             wanted_count: int, trials: int,
                             seed: "int | list[int]") -> EmpiricalRate:
    """Monte-Carlo unwanted-rejection rate with a 95% confidence half-width.

    Each trial inserts `wanted_count` random addresses into a fresh mask and
    probes it with one random address outside the wanted set. Deterministic
    for a given seed.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if wanted_count < 0:
        raise ValueError(f"wanted_count must be >= 0, got {wanted_count}")
    if wanted_count == 0:
        return EmpiricalRate(rate=1.0, ci_halfwidth=0.0, trials=trials)

    rng = np.random.default_rng(seed)
    wanted = rng.integers(0, 1 << ADDRESS_BITS, size=(trials, wanted_count), dtype=np.uint64)
    unwanted = rng.integers(0, 1 << ADDRESS_BITS, size=trials, dtype=np.uint64)
    # a probe address colliding with its own wanted set is ~k/2^48 unlikely,
    # but the contract says "not in the wanted set"
    clash = (unwanted[:, None] == wanted).any(axis=1)
    while clash.any():
        unwanted[clash] = rng.integers(0, 1 << ADDRESS_BITS, size=int(clash.sum()), dtype=np.uint64)
        clash = (unwanted[:, None] == wanted).any(axis=1)

    shifts = np.arange(40, -1, -8, dtype=np.uint64)

    def to_cells(values: np.ndarray) -> np.ndarray:
        octets = ((values.reshape(-1, 1) >> shifts) & np.uint64(0xFF)).astype(np.uint8)
        return window_indexes(scheme, window, octets)

    wanted_cells = to_cells(wanted).reshape(trials, wanted_count)
    probe_cells = to_cells(unwanted)
    rejected = ~(wanted_cells == probe_cells[:, None]).any(axis=1)

    rate = float(np.mean(rejected))
    halfwidth = _Z95 * math.sqrt(rate * (1.0 - rate) / trials)
    return EmpiricalRate(rate=rate, ci_halfwidth=halfwidth, trials=trials)


@dataclass(frozen=True)
class CurveRow:
    mask_size: int
    wanted_count: int
    rate: float
    ci_halfwidth: float | None


@dataclass(frozen=True)
class RejectionCurve:
    """Rejection rate over a (mask size, wanted count) grid for one model."""

    model: str
    rows: tuple[CurveRow, ...]

    def to_csv(self, out: TextIO) -> None:
        out.write(CURVE_CSV_HEADER + "\n")
        for row in self.rows:
            ci = "" if row.ci_halfwidth is None else repr(row.ci_halfwidth)
            out.write(f"{self.model},{row.mask_size},{row.wanted_count},{row.rate!r},{ci}\n")


def rejection_curve(mask_sizes=DEFAULT_MASK_SIZES,
                    wanted_counts=range(1, 101),
                    model: str = "analytic",
                    scheme: "HashScheme | None" = None,
                    trials: int = 10_000,
                    seed: int = 12345) -> RejectionCurve:
    """Evaluate the chosen rate model at every (mask size, wanted count).

    Models: `analytic`, `approximate`, `empirical`. The empirical model
    hashes random addresses through `scheme` (default crc32) with a
    full-mask window and derives each grid point's seed from
    (seed, mask size, wanted count) so results are order-independent.
    """
    mask_sizes = sorted(set(int(m) for m in mask_sizes))
    wanted_counts = sorted(set(int(k) for k in wanted_counts))
    if not mask_sizes or not wanted_counts:
        raise ValueError("mask_sizes and wanted_counts must be non-empty")
    if model not in ("analytic", "approximate", "empirical"):
        raise ValueError(f"unknown model {model!r} "
                         f"(expected analytic, approximate or empirical)")

    rows = []
    if model == "empirical":
        scheme = scheme if scheme is not None else scheme_from_name("crc32")
        for size in mask_sizes:
            length = size.bit_length() - 1
            if 1 << length != size:
                raise ValueError(f"empirical model needs power-of-two mask sizes, got {size}")
            window = BitWindow(0, length)
            for k in wanted_counts:
                est = empirical_rejection_rate(scheme, window, k, trials, seed=[seed, size, k])
                rows.append(CurveRow(size, k, est.rate, est.ci_halfwidth))
    else:
        rate_fn = analytic_rejection_rate if model == "analytic" else approx_rejection_rate
        for size in mask_sizes:
            for k in wanted_counts:
                rows.append(CurveRow(size, k, rate_fn(k, size), None))
    return RejectionCurve(model=model, rows=tuple(rows))
