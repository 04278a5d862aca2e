"""Information content of hashed address traces.

Bucketing a trace through a scheme and bit window yields per-cell counts of
distinct addresses (n_i) and frame references (r_i). With p_i = n_i/N and
q_i = r_i/R, the lookups saved per frame by hashing equal

    sum over referenced cells of  -q_i * log2(p_i)

which is the information content (in bits) of the hashed window. When every
address is referenced equally often this collapses to the plain entropy
-sum p_i * log2(p_i).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .schemes import (MAX_WINDOW_LEN, BitWindow, HashScheme, WindowRangeError,
                      octet_matrix, window_indexes)
from .trace import Trace

SWEEP_CSV_HEADER = "scheme,start_bit,window_len,info_bits"


@dataclass(frozen=True, eq=False)
class CellDistribution:
    """Per-cell occupancy after hashing a trace into 2^m cells.

    addr_counts[i] is the number of distinct addresses in cell i,
    frame_counts[i] the number of frame references; a cell holds references
    iff it holds addresses.
    """

    cell_count: int
    addr_counts: np.ndarray
    frame_counts: np.ndarray
    distinct_count: int
    frame_count: int

    @property
    def addr_fractions(self) -> np.ndarray:
        """p_i: fraction of distinct addresses per cell."""
        return self.addr_counts / self.distinct_count

    @property
    def frame_fractions(self) -> np.ndarray:
        """q_i: fraction of frame references per cell."""
        return self.frame_counts / self.frame_count


def _distinct_arrays(trace: Trace) -> tuple[np.ndarray, np.ndarray]:
    """Octet matrix of the distinct addresses plus their reference counts."""
    return octet_matrix(trace.ref_counts), np.fromiter(
        trace.ref_counts.values(), dtype=np.int64, count=trace.distinct_count)


def _bucket_cells(cells: np.ndarray, freqs: np.ndarray, cell_count: int,
                  frame_count: int) -> CellDistribution:
    n = np.bincount(cells, minlength=cell_count)
    r = np.zeros(cell_count, dtype=np.int64)
    np.add.at(r, cells, freqs)
    return CellDistribution(
        cell_count=cell_count,
        addr_counts=n.astype(np.int64),
        frame_counts=r,
        distinct_count=len(cells),
        frame_count=frame_count,
    )


def bucket(trace: Trace, scheme: HashScheme, window: BitWindow) -> CellDistribution:
    """Hash every address of the trace and count cell occupancy."""
    octets, freqs = _distinct_arrays(trace)
    cells = window_indexes(scheme, window, octets)
    return _bucket_cells(cells, freqs, 1 << window.length, trace.frame_count)


def info_content(dist: CellDistribution) -> float:
    """Expected binary-search lookups saved per frame, in bits."""
    referenced = dist.frame_counts > 0
    q = dist.frame_counts[referenced] / dist.frame_count
    p = dist.addr_counts[referenced] / dist.distinct_count
    return float(np.sum(-q * np.log2(p)))


def address_entropy(dist: CellDistribution) -> float:
    """-sum p_i log2 p_i over occupied cells: info content under uniform references."""
    occupied = dist.addr_counts > 0
    p = dist.addr_counts[occupied] / dist.distinct_count
    return float(np.sum(-p * np.log2(p)))


@dataclass(frozen=True)
class LookupCost:
    """Per-frame binary-search cost of a hashed table versus one flat table.

    avg_lookups is the real-valued cost sum q_i * log2(2 n_i);
    lookups_saved is log2(2N) minus that. avg_lookup_steps is the
    supplementary integer model ceil(log2(2 n_i)) averaged per frame.
    """

    avg_lookups: float
    lookups_saved: float
    avg_lookup_steps: float


def simulate_lookups(trace: Trace, scheme: HashScheme, window: BitWindow) -> LookupCost:
    """Walk the trace frame by frame and charge each frame its subtable cost.

    This is a direct simulation over the reference sequence; its
    lookups_saved agrees with info_content(bucket(...)) to float precision.
    """
    octets, _ = _distinct_arrays(trace)
    cells = window_indexes(scheme, window, octets)
    subtable = np.bincount(cells, minlength=1 << window.length)

    cell_by_addr = dict(zip(trace.ref_counts, cells))
    frame_cells = np.fromiter((cell_by_addr[a] for a in trace.refs),
                              dtype=np.int64, count=trace.frame_count)
    per_frame = np.log2(2.0 * subtable[frame_cells])
    avg = float(np.mean(per_frame))
    return LookupCost(
        avg_lookups=avg,
        lookups_saved=math.log2(2 * trace.distinct_count) - avg,
        avg_lookup_steps=float(np.mean(np.ceil(per_frame))),
    )


@dataclass(frozen=True)
class SweepRow:
    start_bit: int
    window_len: int
    info_bits: float


@dataclass(frozen=True)
class SweepReport:
    """Information content of every (start, length) window for one scheme.

    Rows are ordered by (window_len, start_bit); `length_range` and
    `start_range` give the inclusive axis bounds actually covered.
    """

    scheme: str
    rows: tuple[SweepRow, ...]
    length_range: tuple[int, int]
    start_range: tuple[int, int]

    def to_csv(self, out: TextIO) -> None:
        """Write `scheme,start_bit,window_len,info_bits` rows at full precision."""
        out.write(SWEEP_CSV_HEADER + "\n")
        for row in self.rows:
            out.write(f"{self.scheme},{row.start_bit},{row.window_len},{row.info_bits!r}\n")


def sweep(trace: Trace, scheme: HashScheme,
          lengths: "range | list[int]",
          starts: "range | list[int] | None" = None) -> SweepReport:
    """info_content for every window (start, length) that fits the scheme.

    Hashes the distinct addresses once, then re-windows the cached values,
    so the report is identical to calling bucket() per window.
    """
    octets, freqs = _distinct_arrays(trace)
    values = scheme.hash_many(octets)

    rows = []
    for m in lengths:
        if not 1 <= m <= MAX_WINDOW_LEN:
            raise WindowRangeError(f"window length must be in 1..{MAX_WINDOW_LEN}, got {m}")
        cell_count = 1 << m
        low_mask = np.uint64(cell_count - 1)
        for i in (starts if starts is not None else range(scheme.width)):
            if i < 0 or i + m > scheme.width:
                continue
            cells = ((values >> np.uint64(scheme.width - i - m)) & low_mask).astype(np.int64)
            dist = _bucket_cells(cells, freqs, cell_count, trace.frame_count)
            rows.append(SweepRow(i, m, info_content(dist)))

    if not rows:
        raise ValueError(
            f"no valid windows for scheme {scheme.name!r} (width {scheme.width}) "
            f"in the requested ranges")
    rows.sort(key=lambda row: (row.window_len, row.start_bit))
    return SweepReport(
        scheme=scheme.name,
        rows=tuple(rows),
        length_range=(min(r.window_len for r in rows), max(r.window_len for r in rows)),
        start_range=(min(r.start_bit for r in rows), max(r.start_bit for r in rows)),
    )
