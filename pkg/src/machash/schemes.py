"""Address hashing schemes: bit extraction, CRC family, Fletcher, mod-checksum, XOR fold.

Every scheme is a deterministic total function from a 6-octet address to a
fixed-width hash value. Bit numbering is MSB-first throughout: bit 0 of a
hash value is the most significant bit of its register, matching the address
bit numbering in :mod:`machash.address`.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .address import ADDRESS_BITS, Address

MAX_WINDOW_LEN = 16


class WindowRangeError(ValueError):
    """Bit window does not fit inside the value it is applied to."""


@dataclass(frozen=True)
class BitWindow:
    """Bits start..start+length-1 of an address or hash value, MSB-first."""

    start: int
    length: int

    def __post_init__(self):
        if self.start < 0:
            raise WindowRangeError(f"window start must be >= 0, got {self.start}")
        if not 1 <= self.length <= MAX_WINDOW_LEN:
            raise WindowRangeError(f"window length must be in 1..{MAX_WINDOW_LEN}, got {self.length}")

    @classmethod
    def parse(cls, text: str) -> "BitWindow":
        """Parse the `start:length` CLI form."""
        start, sep, length = text.partition(":")
        if not sep:
            raise ValueError(f"window must look like start:length, got {text!r}")
        return cls(int(start), int(length))

    def __str__(self) -> str:
        return f"{self.start}:{self.length}"


@dataclass(frozen=True)
class HashValue:
    """An unsigned hash register of a known bit width (1..48)."""

    value: int
    width: int

    def __post_init__(self):
        if not 1 <= self.width <= ADDRESS_BITS:
            raise ValueError(f"hash width must be in 1..{ADDRESS_BITS}, got {self.width}")
        if not 0 <= self.value < 1 << self.width:
            raise ValueError(f"value {self.value:#x} does not fit in {self.width} bits")

    def extract(self, window: BitWindow) -> "HashValue":
        return HashValue(extract_bits(self.value, self.width, window), window.length)


def extract_bits(value: int, width: int, window: BitWindow) -> int:
    """Bits window.start..start+length-1 of `value`, bit 0 being the MSB of `value`."""
    if window.start + window.length > width:
        raise WindowRangeError(
            f"window bits {window.start}..{window.start + window.length - 1} "
            f"exceed the {width}-bit value")
    return (value >> (width - window.start - window.length)) & ((1 << window.length) - 1)


def octet_matrix(addresses: Iterable[Address]) -> np.ndarray:
    """Stack addresses into an (n, 6) uint8 array for the vectorized hash paths."""
    buf = b"".join(a.octets for a in addresses)
    return np.frombuffer(buf, dtype=np.uint8).reshape(-1, 6)


class HashScheme:
    """Base class; concrete schemes define name, width and the two hash paths."""

    name: str
    width: int

    def value_of(self, addr: Address) -> int:
        raise NotImplementedError

    def hash_many(self, octets: np.ndarray) -> np.ndarray:
        """Hash an (n, 6) uint8 array of addresses to an (n,) uint64 array."""
        raise NotImplementedError

    def apply(self, addr: Address) -> HashValue:
        return HashValue(self.value_of(addr), self.width)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} width={self.width}>"


class AddressBitsScheme(HashScheme):
    """Identity scheme: the hash value is the 48-bit address itself."""

    name = "bits"
    width = ADDRESS_BITS

    def value_of(self, addr: Address) -> int:
        return addr.to_int()

    def hash_many(self, octets: np.ndarray) -> np.ndarray:
        cols = octets.astype(np.uint64)
        out = np.zeros(len(octets), dtype=np.uint64)
        for j in range(6):
            out = (out << np.uint64(8)) | cols[:, j]
        return out


class CrcScheme(HashScheme):
    """Table-driven CRC over the 48 address bits, MSB-first, no final XOR.

    The register convention is non-reflected polynomial long division: each
    message bit is XORed into the register MSB before the shift. The default
    initial register is all-ones for degree 32 and zero otherwise.
    """

    def __init__(self, width: int, poly: int, init: int, name: str | None = None):
        if not 8 <= width <= 32 or width % 8:
            raise ValueError(f"CRC width must be 8, 16, 24 or 32, got {width}")
        if not 0 < poly < 1 << width:
            raise ValueError(f"polynomial {poly:#x} does not fit degree {width}")
        if not 0 <= init < 1 << width:
            raise ValueError(f"initial register {init:#x} does not fit in {width} bits")
        self.width = width
        self.poly = poly
        self.init = init
        self.name = name if name is not None else f"crc{width}"
        self._mask = (1 << width) - 1
        self._table = self._build_table()
        self._np_table = np.array(self._table, dtype=np.uint64)

    def _build_table(self) -> list[int]:
        top = 1 << (self.width - 1)
        table = []
        for dividend in range(256):
            rem = dividend << (self.width - 8)
            for _ in range(8):
                if rem & top:
                    rem = ((rem << 1) ^ self.poly) & self._mask
                else:
                    rem = (rem << 1) & self._mask
            table.append(rem)
        return table

    def value_of(self, addr: Address) -> int:
        reg = self.init
        shift = self.width - 8
        for byte in addr.octets:
            idx = ((reg >> shift) ^ byte) & 0xFF
            reg = ((reg << 8) & self._mask) ^ self._table[idx]
        return reg

    def hash_many(self, octets: np.ndarray) -> np.ndarray:
        reg = np.full(len(octets), self.init, dtype=np.uint64)
        mask = np.uint64(self._mask)
        shift = np.uint64(self.width - 8)
        for j in range(6):
            idx = ((reg >> shift) ^ octets[:, j]) & np.uint64(0xFF)
            reg = ((reg << np.uint64(8)) & mask) ^ self._np_table[idx]
        return reg


class FletcherScheme(HashScheme):
    """Two running octet sums; the second accumulates the first.

    Each accumulation is reduced by `modulus` (255 per the published
    checksum; 256 gives the natural 8-bit wraparound variant). The 16-bit
    output packs the first sum into the high octet.
    """

    width = 16

    def __init__(self, modulus: int = 255):
        if modulus not in (255, 256):
            raise ValueError(f"fletcher modulus must be 255 or 256, got {modulus}")
        self.modulus = modulus
        self.name = "fletcher" if modulus == 255 else "fletcher256"

    def value_of(self, addr: Address) -> int:
        c0 = c1 = 0
        for byte in addr.octets:
            c0 = (c0 + byte) % self.modulus
            c1 = (c1 + c0) % self.modulus
        return (c0 << 8) | c1

    def hash_many(self, octets: np.ndarray) -> np.ndarray:
        mod = np.uint64(self.modulus)
        c0 = np.zeros(len(octets), dtype=np.uint64)
        c1 = np.zeros(len(octets), dtype=np.uint64)
        for j in range(6):
            c0 = (c0 + octets[:, j]) % mod
            c1 = (c1 + c0) % mod
        return (c0 << np.uint64(8)) | c1


class ModChecksumScheme(HashScheme):
    """Weighted-octet checksum reduced modulo 2^16 - 1.

    C = (2^8*(4*b1 + 2*b3 + b5) + (4*b2 + 2*b4 + b6)) mod 65535 with the
    inner sums taken in full precision before the single final reduction.
    """

    name = "modsum"
    width = 16
    MODULUS = (1 << 16) - 1

    def value_of(self, addr: Address) -> int:
        b = addr.octets
        high = 4 * b[0] + 2 * b[2] + b[4]
        low = 4 * b[1] + 2 * b[3] + b[5]
        return ((high << 8) + low) % self.MODULUS

    def hash_many(self, octets: np.ndarray) -> np.ndarray:
        cols = octets.astype(np.uint64)
        high = 4 * cols[:, 0] + 2 * cols[:, 2] + cols[:, 4]
        low = 4 * cols[:, 1] + 2 * cols[:, 3] + cols[:, 5]
        return ((high << np.uint64(8)) + low) % np.uint64(self.MODULUS)


class XorFoldScheme(HashScheme):
    """Exclusive-or of the six octets into one."""

    name = "xor"
    width = 8

    def value_of(self, addr: Address) -> int:
        b = addr.octets
        return b[0] ^ b[1] ^ b[2] ^ b[3] ^ b[4] ^ b[5]

    def hash_many(self, octets: np.ndarray) -> np.ndarray:
        return np.bitwise_xor.reduce(octets.astype(np.uint64), axis=1)


CRC32_IEEE802_POLY = 0x04C11DB7
CRC16_CCITT_POLY = 0x1021
CRC8_ATM_POLY = 0x07

SCHEMES: dict[str, HashScheme] = {
    s.name: s
    for s in (
        AddressBitsScheme(),
        CrcScheme(32, CRC32_IEEE802_POLY, init=0xFFFFFFFF, name="crc32"),
        CrcScheme(16, CRC16_CCITT_POLY, init=0, name="crc16"),
        CrcScheme(8, CRC8_ATM_POLY, init=0, name="crc8"),
        FletcherScheme(255),
        FletcherScheme(256),
        ModChecksumScheme(),
        XorFoldScheme(),
    )
}


def scheme_from_name(name: str) -> HashScheme:
    try:
        return SCHEMES[name]
    except KeyError:
        known = ", ".join(sorted(SCHEMES))
        raise ValueError(f"unknown scheme {name!r} (known: {known})") from None


def bit_extract(addr: Address, window: BitWindow) -> HashValue:
    """The integer formed by address bits start..start+length-1, MSB-first."""
    return HashValue(extract_bits(addr.to_int(), ADDRESS_BITS, window), window.length)


def crc(addr: Address, scheme: CrcScheme) -> HashValue:
    return scheme.apply(addr)


def fletcher(addr: Address, modulus: int = 255) -> HashValue:
    return FletcherScheme(modulus).apply(addr)


def mod_checksum(addr: Address) -> HashValue:
    return ModChecksumScheme().apply(addr)


def xor_fold(addr: Address) -> HashValue:
    return XorFoldScheme().apply(addr)


def hash_index(addr: Address, scheme: HashScheme, window: BitWindow) -> int:
    """Apply the scheme, then take the window: the hash cell of the address."""
    return extract_bits(scheme.value_of(addr), scheme.width, window)


def window_indexes(scheme: HashScheme, window: BitWindow, octets: np.ndarray) -> np.ndarray:
    """Vectorized hash_index over an (n, 6) uint8 address array."""
    if window.start + window.length > scheme.width:
        raise WindowRangeError(
            f"window bits {window.start}..{window.start + window.length - 1} "
            f"exceed the {scheme.width}-bit value")
    values = scheme.hash_many(octets)
    shift = np.uint64(scheme.width - window.start - window.length)
    return ((values >> shift) & np.uint64((1 << window.length) - 1)).astype(np.int64)
