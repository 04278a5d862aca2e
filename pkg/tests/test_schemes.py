"""Hash scheme unit tests against independent oracles and frozen vectors."""

import random

import numpy as np
import pytest

from machash import (
    SCHEMES,
    Address,
    AddressParseError,
    BitWindow,
    CrcScheme,
    FletcherScheme,
    HashValue,
    WindowRangeError,
    bit_extract,
    crc,
    fletcher,
    hash_index,
    mod_checksum,
    scheme_from_name,
    xor_fold,
)
from machash.schemes import extract_bits, octet_matrix


def crc_shift_register(octets, width, poly, init):
    """Naive bit-at-a-time CRC register, MSB-first, independent of the package."""
    mask = (1 << width) - 1
    reg = init & mask
    for byte in octets:
        for bit in range(7, -1, -1):
            msb = (reg >> (width - 1)) & 1
            reg = (reg << 1) & mask
            if msb ^ ((byte >> bit) & 1):
                reg ^= poly
    return reg


def rand_address(rnd):
    return Address(bytes(rnd.randrange(256) for _ in range(6)))


# ---------------------------------------------------------------------------
# addresses
# ---------------------------------------------------------------------------

def test_address_parse_separators_and_case():
    a = Address.parse("aa-bb-cc-dd-ee-ff")
    b = Address.parse("AA:BB:CC:DD:EE:FF")
    assert a == b
    assert str(a) == "aa:bb:cc:dd:ee:ff"


@pytest.mark.parametrize("text", ["zz:00:00:00:00:00", "aa:bb:cc:dd:ee",
                                  "aabbccddeeff", "", "aa:bb:cc:dd:ee:ff:00"])
def test_address_parse_rejects(text):
    with pytest.raises(AddressParseError):
        Address.parse(text)


def test_address_int_round_trip():
    a = Address.parse("aa-bb-cc-dd-ee-ff")
    assert a.to_int() == 0xAABBCCDDEEFF
    assert Address.from_int(a.to_int()) == a
    with pytest.raises(ValueError):
        Address.from_int(1 << 48)
    with pytest.raises(ValueError):
        Address(b"\x00" * 5)


# ---------------------------------------------------------------------------
# bit windows and extraction
# ---------------------------------------------------------------------------

def test_bit_extract_fifth_octet():
    a = Address.parse("aa-bb-cc-dd-ee-ff")
    got = bit_extract(a, BitWindow(32, 8))
    assert (got.value, got.width) == (0xEE, 8)


def test_bit_extract_zero_address():
    a = Address(bytes(6))
    for start in (0, 13, 40):
        assert bit_extract(a, BitWindow(start, 8)).value == 0


def test_bit_extract_msb_first():
    a = Address.parse("80-00-00-00-00-00")
    assert bit_extract(a, BitWindow(0, 1)).value == 1
    assert bit_extract(a, BitWindow(1, 1)).value == 0


def test_window_out_of_range_names_indices():
    a = Address(bytes(6))
    with pytest.raises(WindowRangeError, match="44..51"):
        bit_extract(a, BitWindow(44, 8))


@pytest.mark.parametrize("start,length", [(-1, 4), (0, 0), (0, 17)])
def test_bad_window(start, length):
    with pytest.raises(WindowRangeError):
        BitWindow(start, length)


def test_window_parse():
    assert BitWindow.parse("32:8") == BitWindow(32, 8)
    with pytest.raises(ValueError):
        BitWindow.parse("32-8")


def test_window_recomposition():
    # extracting single bits and recomposing MSB-first equals the wide window
    rnd = random.Random(7)
    for _ in range(200):
        a = rand_address(rnd)
        start = rnd.randrange(0, 40)
        length = rnd.randrange(1, min(9, 49 - start))
        wide = bit_extract(a, BitWindow(start, length)).value
        recomposed = 0
        for j in range(length):
            recomposed = (recomposed << 1) | bit_extract(a, BitWindow(start + j, 1)).value
        assert recomposed == wide


def test_hash_value_validation():
    with pytest.raises(ValueError):
        HashValue(4, 2)
    with pytest.raises(ValueError):
        HashValue(0, 49)
    assert HashValue(0xEE, 8).extract(BitWindow(0, 4)).value == 0xE


# ---------------------------------------------------------------------------
# CRC family
# ---------------------------------------------------------------------------

def test_crc_zero_address_zero_init():
    zero = Address(bytes(6))
    for width, poly in ((32, 0x04C11DB7), (16, 0x1021), (8, 0x07)):
        scheme = CrcScheme(width, poly, init=0)
        assert scheme.value_of(zero) == 0


def test_crc32_frozen_vector():
    # frozen from the independent shift-register oracle
    a = Address.parse("aa-bb-cc-dd-ee-ff")
    assert SCHEMES["crc32"].value_of(a) == 0x4F5C4FA0


def test_crc16_frozen_vector():
    a = Address(b"\xff" * 6)
    assert SCHEMES["crc16"].value_of(a) == 0x97DF


@pytest.mark.parametrize("name", ["crc32", "crc16", "crc8"])
def test_crc_matches_shift_register_oracle(name):
    scheme = SCHEMES[name]
    rnd = random.Random(42)
    for _ in range(2000):
        a = rand_address(rnd)
        assert scheme.value_of(a) == crc_shift_register(
            a.octets, scheme.width, scheme.poly, scheme.init)


def test_crc_linearity_with_zero_init():
    rnd = random.Random(11)
    for width, poly in ((32, 0x04C11DB7), (16, 0x1021), (8, 0x07)):
        scheme = CrcScheme(width, poly, init=0)
        for _ in range(300):
            a, b = rand_address(rnd), rand_address(rnd)
            both = Address(bytes(x ^ y for x, y in zip(a.octets, b.octets)))
            assert scheme.value_of(both) == scheme.value_of(a) ^ scheme.value_of(b)


def test_crc_construction_validation():
    with pytest.raises(ValueError):
        CrcScheme(12, 0x80F, 0)
    with pytest.raises(ValueError):
        CrcScheme(8, 0x107, 0)
    with pytest.raises(ValueError):
        CrcScheme(8, 0x07, 0x100)
    assert crc(Address(bytes(6)), SCHEMES["crc32"]).width == 32


# ---------------------------------------------------------------------------
# Fletcher
# ---------------------------------------------------------------------------

def test_fletcher_zero():
    assert fletcher(Address(bytes(6))).value == 0x0000


def test_fletcher_single_leading_octet():
    # first sum sticks at 1, second accumulates it six times
    got = fletcher(Address.parse("01-00-00-00-00-00"))
    assert (got.value, got.width) == (0x0106, 16)


def test_fletcher_running_sums():
    assert fletcher(Address.parse("01-02-03-04-05-06")).value == 0x1538
    # sums stay below 255, so both modulus variants agree here
    assert fletcher(Address.parse("01-02-03-04-05-06"), modulus=256).value == 0x1538


def test_fletcher_ff_aliases_zero_only_mod_255():
    ff_lead = Address.parse("ff-00-00-00-00-00")
    assert fletcher(ff_lead, modulus=255).value == 0x0000
    assert fletcher(ff_lead, modulus=256).value != 0x0000


def test_fletcher_modulus_validation():
    with pytest.raises(ValueError):
        FletcherScheme(254)


# ---------------------------------------------------------------------------
# mod-checksum and XOR fold
# ---------------------------------------------------------------------------

def test_mod_checksum_vectors():
    assert mod_checksum(Address(bytes(6))).value == 0
    assert mod_checksum(Address.parse("00-00-00-00-01-01")).value == 257
    # 4*0x40 = 256 in both halves: 65792 mod 65535 = 257, reduction fires
    assert mod_checksum(Address.parse("40-40-00-00-00-00")).value == 257


def test_xor_fold_vectors():
    assert xor_fold(Address(bytes(6))).value == 0x00
    assert xor_fold(Address.parse("ab-00-00-00-00-00")).value == 0xAB
    assert xor_fold(Address.parse("ff-ff-00-00-00-00")).value == 0x00


def test_xor_fold_octet_permutation_invariant():
    rnd = random.Random(5)
    for _ in range(100):
        a = rand_address(rnd)
        shuffled = list(a.octets)
        rnd.shuffle(shuffled)
        assert xor_fold(Address(bytes(shuffled))).value == xor_fold(a).value


# ---------------------------------------------------------------------------
# composition and cross-scheme properties
# ---------------------------------------------------------------------------

def test_hash_index_identity_scheme():
    a = Address.parse("aa-bb-cc-dd-ee-ff")
    window = BitWindow(32, 8)
    assert hash_index(a, SCHEMES["bits"], window) == bit_extract(a, window).value


def test_hash_index_full_width_xor():
    a = Address.parse("ab-00-00-00-00-00")
    assert hash_index(a, SCHEMES["xor"], BitWindow(0, 8)) == 0xAB


def test_hash_index_fletcher_top_octet():
    a = Address.parse("01-02-03-04-05-06")
    assert hash_index(a, SCHEMES["fletcher"], BitWindow(0, 8)) == 21


def test_hash_index_window_overflow():
    with pytest.raises(WindowRangeError):
        hash_index(Address(bytes(6)), SCHEMES["xor"], BitWindow(0, 16))


def test_schemes_deterministic_and_width_contained():
    rnd = random.Random(99)
    for scheme in SCHEMES.values():
        for _ in range(50):
            a = rand_address(rnd)
            v1, v2 = scheme.value_of(a), scheme.value_of(a)
            assert v1 == v2
            assert 0 <= v1 < 1 << scheme.width


def test_registry_names_and_widths():
    expected = {"bits": 48, "crc32": 32, "crc16": 16, "crc8": 8,
                "fletcher": 16, "fletcher256": 16, "modsum": 16, "xor": 8}
    assert {name: s.width for name, s in SCHEMES.items()} == expected
    for name in expected:
        assert scheme_from_name(name).name == name
    with pytest.raises(ValueError, match="unknown scheme"):
        scheme_from_name("md5")


def test_vectorized_matches_scalar():
    rnd = random.Random(123)
    addrs = [rand_address(rnd) for _ in range(400)]
    matrix = octet_matrix(addrs)
    assert matrix.shape == (400, 6)
    for scheme in SCHEMES.values():
        vec = scheme.hash_many(matrix)
        assert all(int(v) == scheme.value_of(a) for v, a in zip(vec, addrs))


def test_extract_bits_window_semantics():
    # bits 4..11 of a 16-bit value, MSB numbering
    assert extract_bits(0xABCD, 16, BitWindow(4, 8)) == 0xBC
    with pytest.raises(WindowRangeError):
        extract_bits(0xABCD, 16, BitWindow(9, 8))
