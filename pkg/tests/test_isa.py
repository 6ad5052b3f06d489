"""Instruction effect decoding: register roles, memory widths, atomics."""

import pytest

from memdag import MemAccess, NotAMemoryOp, UnknownMnemonic, decode_effect
from memdag.isa import mem_access_size, list_isa, supported_mnemonics
from memdag.trace import parse_trace_line


def effect(line, permissive=False):
    return decode_effect(parse_trace_line(line, 1), permissive=permissive)


def test_load_reads_base_and_bytes_writes_dest():
    eff = effect("lw a4,0(a5);0xa04")
    assert eff.kind == "load"
    assert eff.writes == {"a4"}
    assert eff.reads == {"a5"} | set(range(0xA04, 0xA04 + 4))
    assert eff.mem == MemAccess(0xA04, 4, False)


def test_store_reads_data_and_base_writes_bytes():
    eff = effect("sd s1,-16(sp);0x7feed0")
    assert eff.kind == "store"
    assert eff.reads == {"s1", "sp"}
    assert eff.writes == set(range(0x7FEED0, 0x7FEED0 + 8))
    assert eff.mem == MemAccess(0x7FEED0, 8, True)


@pytest.mark.parametrize("line,size", [
    ("lb a0,0(a1);0x10", 1), ("lbu a0,0(a1);0x10", 1),
    ("lh a0,0(a1);0x10", 2), ("lhu a0,0(a1);0x10", 2),
    ("lw a0,0(a1);0x10", 4), ("lwu a0,0(a1);0x10", 4),
    ("ld a0,0(a1);0x10", 8),
    ("flw fa0,0(a1);0x10", 4), ("fld fa0,0(a1);0x10", 8),
])
def test_load_widths(line, size):
    eff = effect(line)
    assert eff.mem.size == size
    assert not eff.mem.is_write


@pytest.mark.parametrize("line,size", [
    ("sb a0,0(a1);0x10", 1), ("sh a0,0(a1);0x10", 2),
    ("sw a0,0(a1);0x10", 4), ("sd a0,0(a1);0x10", 8),
    ("fsw fa0,0(a1);0x10", 4), ("fsd fa0,0(a1);0x10", 8),
])
def test_store_widths(line, size):
    eff = effect(line)
    assert eff.mem.size == size
    assert eff.mem.is_write


def test_arith_reads_sources_writes_dest():
    eff = effect("mulw a4,a4,a3")
    assert eff.kind == "arith"
    assert eff.reads == {"a4", "a3"}
    assert eff.writes == {"a4"}
    assert eff.mem is None


def test_branch_reads_everything_writes_nothing():
    eff = effect("bne a3,a5,-9")
    assert eff.kind == "branch"
    assert eff.reads == {"a3", "a5"}
    assert eff.writes == set()


def test_zero_register_never_a_dependence_key():
    assert effect("mv a0,zero").reads == set()
    assert effect("li zero,5").writes == set()
    assert effect("sw zero,0(a5);0x10").reads == {"a5"}
    assert effect("beqz zero,8").reads == set()


def test_jal_and_ret_link_register():
    assert effect("jal 0x1000").writes == {"ra"}
    assert effect("jalr a5").reads == {"a5"}
    assert effect("jalr a5").writes == {"ra"}
    assert effect("ret").reads == {"ra"}
    assert effect("ret").writes == set()


def test_amo_reads_and_writes_the_same_bytes():
    eff = effect("amoadd.w a4,a2,(a3);0x100")
    span = set(range(0x100, 0x104))
    assert eff.reads == {"a2", "a3"} | span
    assert eff.writes == {"a4"} | span
    # read side governs the cache: treat like a load at the access point
    assert eff.kind == "load"
    assert eff.mem == MemAccess(0x100, 4, False)


def test_amo_ordering_suffixes_are_normalized():
    eff = effect("amoswap.d.aqrl a0,a1,(a2);0x40")
    assert eff.mem.size == 8


def test_lr_sc_pair():
    lr = effect("lr.w a0,(a1);0x20")
    assert lr.mem == MemAccess(0x20, 4, False)
    assert lr.writes == {"a0"}
    sc = effect("sc.w a0,a2,(a1);0x20")
    assert sc.mem == MemAccess(0x20, 4, True)
    assert "a0" in sc.writes            # success flag
    assert sc.reads == {"a2", "a1"}


def test_unknown_mnemonic_strict_raises_with_line():
    with pytest.raises(UnknownMnemonic):
        effect("frobnicate a0,a1")


def test_unknown_mnemonic_permissive_guesses_dest_role():
    eff = effect("frobnicate a0,a1", permissive=True)
    assert eff.kind == "other"
    assert eff.writes == {"a0"}
    assert eff.reads == {"a1"}
    assert eff.mem is None


def test_fence_and_nop_touch_nothing():
    for line in ["fence", "nop", "ecall"]:
        eff = effect(line)
        assert eff.reads == set() and eff.writes == set()


def test_mem_access_size_rejects_non_memory():
    assert mem_access_size("lw") == 4
    assert mem_access_size("amomax.d") == 8
    with pytest.raises(NotAMemoryOp):
        mem_access_size("addi")


def test_isa_listing_covers_table():
    table = supported_mnemonics()
    listing = list_isa()
    assert "lw" in table and "sc.d" in table
    for name in ("lw", "sd", "amoadd.w", "bne", "fcvt.d.w"):
        assert name in listing
