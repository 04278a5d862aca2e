"""Hashing-scheme comparison and hash-mask sizing for 48-bit network addresses."""

from .address import Address, AddressParseError
from .schemes import (
    SCHEMES,
    AddressBitsScheme,
    BitWindow,
    CrcScheme,
    FletcherScheme,
    HashScheme,
    HashValue,
    ModChecksumScheme,
    WindowRangeError,
    XorFoldScheme,
    bit_extract,
    crc,
    fletcher,
    hash_index,
    mod_checksum,
    scheme_from_name,
    xor_fold,
)
from .trace import (
    CapacityError,
    EmptyTraceError,
    SynthConfig,
    Trace,
    TraceParseError,
    TraceStats,
    parse_trace,
    synthesize,
    trace_stats,
    write_trace,
)
from .entropy import (
    CellDistribution,
    LookupCost,
    SweepReport,
    SweepRow,
    address_entropy,
    bucket,
    info_content,
    simulate_lookups,
    sweep,
)
from .maskfilter import (
    EmpiricalRate,
    HashMask,
    MaskSizing,
    RejectionCurve,
    analytic_rejection_rate,
    approx_rejection_rate,
    build_mask,
    empirical_rejection_rate,
    filter_accepts,
    mask_size_for,
    rejection_curve,
)

__version__ = "0.1.0"
