"""Set-associative write-through LRU cache and its pass-through stand-in.

The model only answers one question per access: did any touched line miss,
and how many lines missed.  Write-through with no write allocation means a
write hit refreshes recency, a write miss changes nothing, and only reads
install lines.  An access that straddles line boundaries probes every line
it touches and counts as a miss if any of them missed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidSpec


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True, slots=True)
class CacheConfig:
    total_size: int
    line_size: int
    associativity: int
    enabled: bool = True

    def __post_init__(self):
        if not self.enabled:
            return
        if not _is_pow2(self.line_size):
            raise InvalidSpec(f"line size must be a power of two, got {self.line_size}")
        if not _is_pow2(self.associativity):
            raise InvalidSpec(f"associativity must be a power of two, got {self.associativity}")
        way_bytes = self.line_size * self.associativity
        if self.total_size <= 0 or self.total_size % way_bytes:
            raise InvalidSpec(
                f"total size {self.total_size} is not a whole number of "
                f"{way_bytes}-byte set frames")

    @property
    def num_sets(self) -> int:
        return self.total_size // (self.line_size * self.associativity)

    @classmethod
    def parse(cls, spec: str) -> "CacheConfig":
        """Parse the SIZE:LINE:ASSOC command-line form."""
        parts = spec.split(":")
        if len(parts) != 3:
            raise InvalidSpec(f"cache spec must be SIZE:LINE:ASSOC, got {spec!r}")
        try:
            total, line, assoc = (int(p, 0) for p in parts)
        except ValueError:
            raise InvalidSpec(f"non-integer field in cache spec {spec!r}") from None
        return cls(total, line, assoc)

    @classmethod
    def disabled(cls) -> "CacheConfig":
        return cls(0, 0, 0, enabled=False)


class CacheState:
    """Mutable LRU state for one enabled configuration.

    Each set is a list of line numbers ordered most-recent first; real
    associativities are small, so list scans beat fancier structures.
    """

    def __init__(self, config: CacheConfig):
        if not config.enabled:
            raise InvalidSpec("CacheState needs an enabled configuration")
        self.config = config
        self._shift = config.line_size.bit_length() - 1
        self._nsets = config.num_sets
        self._assoc = config.associativity
        self._sets: list[list[int]] = [[] for _ in range(self._nsets)]
        self.hits_load = 0
        self.hits_store = 0
        self.misses_load = 0
        self.misses_store = 0

    def access(self, addr: int, size: int, is_write: bool) -> tuple[bool, int]:
        """Run one access; returns (missed, number_of_missed_lines)."""
        shift = self._shift
        first = addr >> shift
        last = (addr + size - 1) >> shift
        assoc = self._assoc
        nsets = self._nsets
        sets = self._sets
        missed_lines = 0
        line = first
        while line <= last:
            lines = sets[line % nsets]
            if line in lines:
                if lines[0] != line:
                    lines.remove(line)
                    lines.insert(0, line)
            else:
                missed_lines += 1
                if not is_write:
                    lines.insert(0, line)
                    if len(lines) > assoc:
                        lines.pop()
            line += 1
        if missed_lines:
            if is_write:
                self.misses_store += 1
            else:
                self.misses_load += 1
            return True, missed_lines
        if is_write:
            self.hits_store += 1
        else:
            self.hits_load += 1
        return False, 0

    @property
    def hits(self) -> int:
        return self.hits_load + self.hits_store

    @property
    def misses(self) -> int:
        return self.misses_load + self.misses_store


class PassthroughCache:
    """Disabled-cache stand-in: every access misses, counters still tick."""

    config = CacheConfig.disabled()

    def __init__(self):
        self.hits_load = 0
        self.hits_store = 0
        self.misses_load = 0
        self.misses_store = 0

    def access(self, addr: int, size: int, is_write: bool) -> tuple[bool, int]:
        if is_write:
            self.misses_store += 1
        else:
            self.misses_load += 1
        return True, 1

    hits = CacheState.hits
    misses = CacheState.misses


def make_cache(config: CacheConfig | None):
    if config is None or not config.enabled:
        return PassthroughCache()
    return CacheState(config)
