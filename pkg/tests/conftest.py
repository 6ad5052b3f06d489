"""Shared test plumbing: text-based build helper and an independent LRU model."""

from memdag import build
from memdag.trace import read_trace


def build_text(text, *args, **kwargs):
    """Build straight from trace text, newline separated."""
    return build(read_trace(text.strip("\n").split("\n")), *args, **kwargs)


class ReferenceLRU:
    """Timestamp-based set-associative LRU, written independently of the
    production cache: each set is a dict of line index -> last-touch tick,
    and eviction removes the stalest entry by argmin over the ticks.

    Same policy contract: write-through, no allocation on write miss, hits
    refresh recency for reads and writes alike, multi-line accesses probe
    every touched line in ascending order.
    """

    def __init__(self, total_size, line_size, associativity):
        self.line_size = line_size
        self.num_sets = total_size // (line_size * associativity)
        self.assoc = associativity
        self.sets = [dict() for _ in range(self.num_sets)]
        self.tick = 0

    def access(self, addr, size, is_write):
        first = addr // self.line_size
        last = (addr + size - 1) // self.line_size
        missed = 0
        for line in range(first, last + 1):
            resident = self.sets[line % self.num_sets]
            self.tick += 1
            if line in resident:
                resident[line] = self.tick
                continue
            missed += 1
            if is_write:
                continue
            if len(resident) >= self.assoc:
                victim = min(resident, key=resident.get)
                del resident[victim]
            resident[line] = self.tick
        return missed > 0, missed
