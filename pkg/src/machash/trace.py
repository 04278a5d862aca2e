"""Address reference traces: file ingestion, synthesis, summary statistics.

Trace files are UTF-8 text, one destination address per line, `#` comments
and blank lines ignored, LF or CRLF line endings.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .address import Address, AddressParseError

SUFFIX_BITS = 24
SUFFIX_SPACE = 1 << SUFFIX_BITS


class TraceParseError(ValueError):
    """A trace line failed to parse; carries the 1-based line number."""

    def __init__(self, line_no: int, text: str, reason: str):
        super().__init__(f"line {line_no}: {reason}: {text!r}")
        self.line_no = line_no
        self.text = text


class EmptyTraceError(ValueError):
    """The input contained no address references."""


class CapacityError(ValueError):
    """Requested more stations than the address space can hold."""


class Trace:
    """An ordered sequence of destination-address references.

    `frame_count` is the number of references (R); `distinct_count` the
    number of distinct addresses (N). Immutable once built.
    """

    __slots__ = ("refs", "ref_counts")

    def __init__(self, refs: Iterable[Address]):
        self.refs: tuple[Address, ...] = tuple(refs)
        if not self.refs:
            raise EmptyTraceError("empty trace: no address references")
        self.ref_counts: Counter[Address] = Counter(self.refs)

    @property
    def frame_count(self) -> int:
        return len(self.refs)

    @property
    def distinct_count(self) -> int:
        return len(self.ref_counts)

    @property
    def distinct(self) -> tuple[Address, ...]:
        """Distinct addresses in first-seen order."""
        return tuple(self.ref_counts)

    def __len__(self) -> int:
        return len(self.refs)

    def __iter__(self):
        return iter(self.refs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Trace) and self.refs == other.refs

    def __repr__(self) -> str:
        return f"<Trace frames={self.frame_count} distinct={self.distinct_count}>"


def parse_trace(lines: Iterable[str]) -> Trace:
    """Parse a trace from an iterable of text lines (e.g. an open file)."""
    refs = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            refs.append(Address.parse(line))
        except AddressParseError:
            raise TraceParseError(line_no, line, "malformed address") from None
    return Trace(refs)


def write_trace(trace: Trace, out: TextIO) -> None:
    """Serialize one address per line in the canonical colon form."""
    for addr in trace.refs:
        out.write(f"{addr}\n")


@dataclass(frozen=True)
class SynthConfig:
    """Parameters for deterministic trace synthesis.

    `vendor_prefixes` is a sequence of (3-octet prefix, positive weight)
    pairs; stations draw their first three octets from it. `reference_skew`
    is the exponent of the Zipf-like popularity law over stations (0 is
    uniform).
    """

    station_count: int
    frame_count: int
    reference_skew: float = 1.0
    vendor_prefixes: tuple[tuple[bytes, float], ...] = ((b"\x02\x00\x00", 1.0),)
    seed: int = 12345

    def __post_init__(self):
        if self.station_count < 1:
            raise ValueError(f"station_count must be >= 1, got {self.station_count}")
        if self.frame_count < self.station_count:
            raise ValueError(
                f"frame_count ({self.frame_count}) must be >= station_count ({self.station_count})")
        if self.reference_skew < 0:
            raise ValueError(f"reference_skew must be >= 0, got {self.reference_skew}")
        if not self.vendor_prefixes:
            raise ValueError("need at least one vendor prefix")
        prefixes = tuple((bytes(p), float(w)) for p, w in self.vendor_prefixes)
        object.__setattr__(self, "vendor_prefixes", prefixes)
        for prefix, weight in prefixes:
            if len(prefix) != 3:
                raise ValueError(f"vendor prefix must be 3 octets, got {prefix.hex()}")
            if weight <= 0:
                raise ValueError(f"prefix weight must be positive, got {weight}")


# share of each prefix's stations carrying dense protocol-style numbers
DENSE_SHARE = 0.4


def _prefix_suffixes(rng: np.random.Generator, need: int) -> list[int]:
    """`need` distinct 24-bit suffixes for one vendor prefix.

    Real station populations are not uniform in their low octets: protocol
    group and node numbers count up densely from 1 and sit at whichever
    suffix octet the protocol uses, while hardware serials scatter. A fixed
    share of the stations therefore gets small dense numbers cycled over the
    three suffix octet positions (carrying into the next octet past 255);
    the rest draw uniform random suffixes.
    """
    used: set[int] = set()
    out: list[int] = []
    for j in range(round(DENSE_SHARE * need)):
        pos = j % 3
        num = 1 + j // 3
        octets = [0, 0, 0]
        octets[pos] = num & 0xFF
        octets[(pos + 1) % 3] = (num >> 8) & 0xFF
        suffix = (octets[0] << 16) | (octets[1] << 8) | octets[2]
        if suffix not in used:
            used.add(suffix)
            out.append(suffix)
    if need - len(out) > SUFFIX_SPACE // 2:
        for v in rng.permutation(SUFFIX_SPACE):
            if len(out) == need:
                break
            v = int(v)
            if v not in used:
                used.add(v)
                out.append(v)
        return out
    while len(out) < need:
        for v in rng.integers(0, SUFFIX_SPACE, size=max(16, 2 * (need - len(out)))):
            v = int(v)
            if v not in used:
                used.add(v)
                out.append(v)
                if len(out) == need:
                    break
    return out


def synthesize(config: SynthConfig) -> Trace:
    """Generate a trace: prefix-structured stations, Zipf-skewed references.

    Station addresses take their first 3 octets from the weighted vendor
    prefixes; the last 3 octets are unique within each prefix, so the
    distinct count equals station_count. Reference popularity is a
    Zipf(reference_skew) law over a random permutation of the stations, so
    hot stations are not clustered in address space. Identical configs
    (seed included) produce identical traces.
    """
    prefix_count = len(config.vendor_prefixes)
    if config.station_count > prefix_count * SUFFIX_SPACE:
        raise CapacityError(
            f"station_count {config.station_count} exceeds the "
            f"{prefix_count * SUFFIX_SPACE} addresses available under "
            f"{prefix_count} prefix(es)")
    rng = np.random.default_rng(config.seed)

    weights = np.array([w for _, w in config.vendor_prefixes], dtype=float)
    prefix_choice = rng.choice(prefix_count, size=config.station_count, p=weights / weights.sum())
    counts = np.bincount(prefix_choice, minlength=prefix_count)
    # weighted draw may overfill a prefix's 2^24 suffix space; spill over
    for p in np.argsort(-counts):
        excess = int(counts[p]) - SUFFIX_SPACE
        if excess > 0:
            counts[p] = SUFFIX_SPACE
            room = np.flatnonzero(counts < SUFFIX_SPACE)
            for q in room:
                take = min(excess, SUFFIX_SPACE - int(counts[q]))
                counts[q] += take
                excess -= take
                if excess == 0:
                    break

    stations = []
    for p in range(prefix_count):
        prefix = config.vendor_prefixes[p][0]
        for suffix in _prefix_suffixes(rng, int(counts[p])):
            stations.append(Address(prefix + suffix.to_bytes(3, "big")))
    stations = [stations[int(i)] for i in rng.permutation(config.station_count)]

    ranks = np.arange(1, config.station_count + 1, dtype=float)
    popularity = ranks ** -config.reference_skew
    popularity /= popularity.sum()
    # every station appears at least once so the trace's N hits the target;
    # the remaining references follow the popularity law
    extra = rng.choice(config.station_count,
                       size=config.frame_count - config.station_count, p=popularity)
    ref_idx = np.concatenate([np.arange(config.station_count), extra])
    rng.shuffle(ref_idx)
    return Trace(stations[int(i)] for i in ref_idx)


@dataclass(frozen=True)
class TraceStats:
    """Summary of a trace: totals, the most-referenced addresses, and how
    concentrated references are on the popular stations."""

    frame_count: int
    distinct_count: int
    top: tuple[tuple[Address, int], ...]
    top_decile_share: float


def trace_stats(trace: Trace, top_n: int = 10) -> TraceStats:
    """R, N, the `top_n` most-referenced addresses, and the fraction of all
    frames that reference the most popular tenth of the addresses."""
    ordered = sorted(trace.ref_counts.items(), key=lambda kv: (-kv[1], kv[0].octets))
    decile = max(1, -(-trace.distinct_count // 10))
    decile_share = sum(c for _, c in ordered[:decile]) / trace.frame_count
    return TraceStats(
        frame_count=trace.frame_count,
        distinct_count=trace.distinct_count,
        top=tuple(ordered[:top_n]),
        top_decile_share=decile_share,
    )
