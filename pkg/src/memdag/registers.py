"""Register name tables and canonicalization.

Every register reference in a parsed trace is reduced to one canonical ABI
name so that dependence tracking uses a single key space regardless of how
the producing tool spelled the register (x10 vs a0, fp vs s0, f10 vs fa0).
"""

_INT_ABI = (
    "zero,ra,sp,gp,tp,t0,t1,t2,s0,s1,"
    "a0,a1,a2,a3,a4,a5,a6,a7,"
    "s2,s3,s4,s5,s6,s7,s8,s9,s10,s11,"
    "t3,t4,t5,t6"
).split(",")

_FP_ABI = (
    "ft0,ft1,ft2,ft3,ft4,ft5,ft6,ft7,fs0,fs1,"
    "fa0,fa1,fa2,fa3,fa4,fa5,fa6,fa7,"
    "fs2,fs3,fs4,fs5,fs6,fs7,fs8,fs9,fs10,fs11,"
    "ft8,ft9,ft10,ft11"
).split(",")

INT_REGISTERS = frozenset(_INT_ABI)
FP_REGISTERS = frozenset(_FP_ABI)

# The discard target: writes to it vanish, reads of it are constant zero,
# so it never participates in dependence tracking.
ZERO = "zero"

CANONICAL: dict[str, str] = {}
for _i, _name in enumerate(_INT_ABI):
    CANONICAL[f"x{_i}"] = _name
    CANONICAL[_name] = _name
CANONICAL["fp"] = "s0"
for _i, _name in enumerate(_FP_ABI):
    CANONICAL[f"f{_i}"] = _name
    CANONICAL[_name] = _name


def canonical_register(name: str) -> str | None:
    """Return the canonical ABI name, or None if this is not a register."""
    return CANONICAL.get(name)
