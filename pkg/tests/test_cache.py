"""Cache model: geometry validation, policy oracles, reference equivalence."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from memdag import CacheConfig, CacheState, InvalidSpec, PassthroughCache, make_cache
from conftest import ReferenceLRU


def test_geometry_derived_quantities():
    cfg = CacheConfig(32768, 64, 2)
    assert cfg.num_sets == 256
    cfg = CacheConfig(256, 64, 2)
    assert cfg.num_sets == 2


@pytest.mark.parametrize("total,line,assoc", [
    (0, 64, 2), (100, 64, 2), (32768, 0, 2), (32768, 48, 2),
    (32768, 64, 3), (32768, 64, 0), (64, 64, 2), (-64, 64, 1),
])
def test_bad_geometry_rejected(total, line, assoc):
    with pytest.raises(InvalidSpec):
        CacheConfig(total, line, assoc)


def test_parse_cache_spec():
    cfg = CacheConfig.parse("32768:64:2")
    assert (cfg.total_size, cfg.line_size, cfg.associativity) == (32768, 64, 2)
    assert CacheConfig.parse("0x8000:0x40:2") == cfg
    for bad in ["32768:64", "a:b:c", "32768:64:2:9", ""]:
        with pytest.raises(InvalidSpec):
            CacheConfig.parse(bad)


def test_disabled_config_skips_validation():
    cfg = CacheConfig.disabled()
    assert not cfg.enabled
    assert isinstance(make_cache(cfg), PassthroughCache)


def test_cold_miss_then_hit():
    # 256B, 64B lines, 2-way: 2 sets; 0x0 and 0x40 land in different sets
    c = CacheState(CacheConfig(256, 64, 2))
    assert c.access(0x0, 4, False) == (True, 1)
    assert c.access(0x40, 4, False) == (True, 1)
    assert c.access(0x0, 4, False) == (False, 0)
    assert c.misses_load == 2 and c.hits_load == 1


def test_lru_eviction_within_set():
    # 0x0, 0x80, 0x100 all map to set 0 of a 2-set cache; third insert
    # evicts the first, so re-reading 0x0 misses again
    c = CacheState(CacheConfig(256, 64, 2))
    for addr in (0x0, 0x80, 0x100, 0x0):
        missed, _ = c.access(addr, 8, False)
        assert missed
    assert c.misses_load == 4


def test_reuse_protects_against_eviction():
    c = CacheState(CacheConfig(256, 64, 2))
    c.access(0x0, 8, False)
    c.access(0x80, 8, False)
    c.access(0x0, 8, False)              # 0x0 becomes most recent
    c.access(0x100, 8, False)            # evicts 0x80, not 0x0
    assert c.access(0x0, 8, False) == (False, 0)
    assert c.access(0x80, 8, False) == (True, 1)


def test_write_miss_does_not_allocate():
    c = CacheState(CacheConfig(256, 64, 2))
    assert c.access(0x0, 8, True) == (True, 1)
    assert c.access(0x0, 8, True) == (True, 1)    # still not resident
    assert c.misses_store == 2
    assert c.access(0x0, 8, False) == (True, 1)   # reads do allocate
    assert c.access(0x0, 8, True) == (False, 0)   # now a store hit
    assert c.hits_store == 1


def test_write_hit_refreshes_recency():
    c = CacheState(CacheConfig(256, 64, 2))
    c.access(0x0, 8, False)
    c.access(0x80, 8, False)
    c.access(0x0, 8, True)               # store hit; 0x0 most recent again
    c.access(0x100, 8, False)            # must evict 0x80
    assert c.access(0x0, 8, False) == (False, 0)


def test_straddling_access_probes_both_lines():
    c = CacheState(CacheConfig(256, 64, 2))
    missed, lines = c.access(0x3C, 8, False)      # crosses 0x40 boundary
    assert (missed, lines) == (True, 2)
    assert c.access(0x3C, 8, False) == (False, 0)
    # one line resident, one not: partial miss still counts the access once
    c2 = CacheState(CacheConfig(256, 64, 2))
    c2.access(0x40, 4, False)
    missed, lines = c2.access(0x3C, 8, False)
    assert (missed, lines) == (True, 1)
    assert c2.misses_load == 2 and c2.hits_load == 0


def test_passthrough_counts_every_access_as_miss():
    c = PassthroughCache()
    assert c.access(0x0, 8, False) == (True, 1)
    assert c.access(0x0, 8, False) == (True, 1)
    assert c.access(0x0, 8, True) == (True, 1)
    assert c.misses_load == 2 and c.misses_store == 1
    assert c.hits_load == 0 and c.hits_store == 0


_CONFIGS = [(256, 64, 2), (512, 64, 1), (1024, 32, 4),
            (32768, 64, 2), (65536, 64, 2)]


@pytest.mark.parametrize("total,line,assoc", _CONFIGS)
def test_matches_reference_lru_on_random_streams(total, line, assoc):
    rng = random.Random(total * 31 + line + assoc)
    cfg = CacheConfig(total, line, assoc)
    real = CacheState(cfg)
    ref = ReferenceLRU(total, line, assoc)
    # address universe a few times the cache size, so evictions are common
    span = total * 4
    for i in range(20_000):
        addr = rng.randrange(span)
        size = rng.choice((1, 2, 4, 8))
        is_write = rng.random() < 0.3
        assert real.access(addr, size, is_write) == ref.access(addr, size, is_write), \
            f"diverged at access {i}"


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 1023), st.sampled_from((1, 2, 4, 8)),
                          st.booleans()),
                max_size=300))
def test_reference_equivalence_small_cache(stream):
    cfg = CacheConfig(256, 64, 2)
    real = CacheState(cfg)
    ref = ReferenceLRU(256, 64, 2)
    for addr, size, is_write in stream:
        assert real.access(addr, size, is_write) == ref.access(addr, size, is_write)
