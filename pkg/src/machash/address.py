"""48-bit station addresses and their text form."""

from __future__ import annotations

import re
from dataclasses import dataclass

ADDRESS_OCTETS = 6
ADDRESS_BITS = 48

_ADDR_RE = re.compile(r"^([0-9a-fA-F]{2})([:-])([0-9a-fA-F]{2})[:-]([0-9a-fA-F]{2})"
                      r"[:-]([0-9a-fA-F]{2})[:-]([0-9a-fA-F]{2})[:-]([0-9a-fA-F]{2})$")


class AddressParseError(ValueError):
    """Text did not parse as a 6-octet hex address."""


@dataclass(frozen=True)
class Address:
    """A 6-octet station address.

    Bit 0 is the most significant bit of the first octet, bit 47 the least
    significant bit of the last octet; bits 32..39 are therefore the fifth
    octet.
    """

    octets: bytes

    def __post_init__(self):
        if not isinstance(self.octets, bytes):
            object.__setattr__(self, "octets", bytes(self.octets))
        if len(self.octets) != ADDRESS_OCTETS:
            raise ValueError(f"address needs exactly {ADDRESS_OCTETS} octets, got {len(self.octets)}")

    @classmethod
    def parse(cls, text: str) -> "Address":
        """Parse `aa-bb-cc-dd-ee-ff` or `aa:bb:cc:dd:ee:ff` (case-insensitive)."""
        m = _ADDR_RE.match(text.strip())
        if m is None:
            raise AddressParseError(f"not a valid address: {text!r}")
        groups = m.groups()
        return cls(bytes(int(groups[i], 16) for i in (0, 2, 3, 4, 5, 6)))

    @classmethod
    def from_int(cls, value: int) -> "Address":
        if not 0 <= value < 1 << ADDRESS_BITS:
            raise ValueError(f"address value out of 48-bit range: {value}")
        return cls(value.to_bytes(ADDRESS_OCTETS, "big"))

    def to_int(self) -> int:
        return int.from_bytes(self.octets, "big")

    def __str__(self) -> str:
        return ":".join(f"{b:02x}" for b in self.octets)
