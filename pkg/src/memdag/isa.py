"""Instruction effect extraction for an RV64IMAFD trace vocabulary.

Each executed instruction is reduced to the value keys it reads and writes:
registers by canonical name, memory by byte address (a k-byte access touches
k byte keys, so misaligned and overlapping accesses resolve correctly).
The zero register is dropped on both sides.

Effects say nothing about architectural results; they only carry the
dependence structure and the memory access descriptor.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotAMemoryOp, UnknownMnemonic
from .registers import ZERO
from .trace import MEM, REG, Operand, TraceRecord

LOAD = "load"
STORE = "store"
BRANCH = "branch"
JUMP = "jump"
ARITH = "arith"
MOVE = "move"
OTHER = "other"

_LOAD_SIZES = {
    "lb": 1, "lbu": 1, "lh": 2, "lhu": 2, "lw": 4, "lwu": 4, "ld": 8,
    "flw": 4, "fld": 8,
    "lr.w": 4, "lr.d": 8,
}
_STORE_SIZES = {
    "sb": 1, "sh": 2, "sw": 4, "sd": 8,
    "fsw": 4, "fsd": 8,
    "sc.w": 4, "sc.d": 8,
}
_AMO_SIZES = {}
for _op in ("swap", "add", "xor", "and", "or", "min", "max", "minu", "maxu"):
    _AMO_SIZES[f"amo{_op}.w"] = 4
    _AMO_SIZES[f"amo{_op}.d"] = 8

# Operand role templates.  'dst' is the common write-first shape; stores and
# branches are the exceptions where the leading operand is a source.
_R_DST = "dst"
_R_STORE = "store"
_R_SC = "sc"
_R_AMO = "amo"
_R_LOAD = "load"
_R_READ = "read"
_R_NONE = "none"
_R_RET = "ret"
_R_JAL = "jal"
_R_JALR = "jalr"

_TABLE: dict[str, tuple[str, str]] = {}


def _add(kind: str, role: str, names: str) -> None:
    for name in names.split():
        _TABLE[name] = (kind, role)


_add(LOAD, _R_LOAD, "lb lbu lh lhu lw lwu ld flw fld lr.w lr.d")
_add(LOAD, _R_AMO, " ".join(_AMO_SIZES))
_add(STORE, _R_STORE, "sb sh sw sd fsw fsd")
_add(STORE, _R_SC, "sc.w sc.d")

_add(ARITH, _R_DST,
     "add sub sll slt sltu xor srl sra or and "
     "addw subw sllw srlw sraw "
     "addi slti sltiu xori ori andi slli srli srai "
     "addiw slliw srliw sraiw "
     "lui auipc "
     "mul mulh mulhsu mulhu div divu rem remu "
     "mulw divw divuw remw remuw "
     "neg negw not seqz snez sltz sgtz sext.w")
_add(ARITH, _R_NONE, "nop")

for _sfx in (".s", ".d"):
    _add(ARITH, _R_DST,
         " ".join(m + _sfx for m in (
             "fadd fsub fmul fdiv fsqrt fsgnj fsgnjn fsgnjx fmin fmax "
             "fmadd fmsub fnmadd fnmsub feq flt fle fclass fneg fabs")))
_add(ARITH, _R_DST,
     "fcvt.w.s fcvt.wu.s fcvt.l.s fcvt.lu.s fcvt.s.w fcvt.s.wu fcvt.s.l fcvt.s.lu "
     "fcvt.w.d fcvt.wu.d fcvt.l.d fcvt.lu.d fcvt.d.w fcvt.d.wu fcvt.d.l fcvt.d.lu "
     "fcvt.s.d fcvt.d.s")

_add(MOVE, _R_DST, "mv li fmv.s fmv.d fmv.x.w fmv.w.x fmv.x.d fmv.d.x")

_add(BRANCH, _R_READ,
     "beq bne blt bge bltu bgeu "
     "beqz bnez blez bgez bltz bgtz bgt ble bgtu bleu")

_add(JUMP, _R_NONE, "j")
_add(JUMP, _R_READ, "jr")
_add(JUMP, _R_RET, "ret")
_add(JUMP, _R_JAL, "jal")
_add(JUMP, _R_JALR, "jalr")

_add(OTHER, _R_NONE, "fence fence.i ecall ebreak")
_add(OTHER, _R_DST, "csrrw csrrs csrrc csrrwi csrrsi csrrci csrr csrw csrs csrc")


@dataclass(frozen=True, slots=True)
class MemAccess:
    """The single data access an executed load or store performed."""

    address: int
    size: int
    is_write: bool


@dataclass(frozen=True, slots=True)
class InstructionEffect:
    """Read/write key sets plus the optional memory access descriptor.

    Keys are canonical register names (str) or byte addresses (int).
    """

    reads: frozenset
    writes: frozenset
    mem: MemAccess | None
    kind: str


@dataclass(frozen=True, slots=True)
class EffectTemplate:
    """Address-independent part of an effect, reusable across repeats."""

    kind: str
    read_regs: tuple[str, ...]
    write_regs: tuple[str, ...]
    mem_size: int
    mem_reads: bool
    mem_writes: bool
    mem_is_write: bool
    unknown: bool = False
    atomic: bool = False


def _normalize_mnemonic(mnemonic: str) -> str:
    if mnemonic in _TABLE:
        return mnemonic
    # Atomics carry ordering suffixes in disassembly (amoadd.w.aqrl etc.).
    for sfx in (".aqrl", ".aq", ".rl"):
        if mnemonic.endswith(sfx):
            base = mnemonic[: -len(sfx)]
            if base in _TABLE:
                return base
    return mnemonic


def _reg_operands(operands: tuple[Operand, ...]) -> list[str]:
    regs = []
    for op in operands:
        if op.kind == REG or op.kind == MEM:
            regs.append(op.reg)
    return regs


def _split_roles(operands: tuple[Operand, ...], role: str,
                 mnemonic: str, line_no: int | None) -> tuple[list[str], list[str]]:
    """Return (reads, writes) register lists for the given operand role."""
    if role == _R_NONE:
        return [], []
    if role == _R_READ:
        return _reg_operands(operands), []
    if role == _R_RET:
        return ["ra"], []
    if role in (_R_STORE,):
        return _reg_operands(operands), []
    if role in (_R_LOAD, _R_DST, _R_SC, _R_AMO, _R_JAL, _R_JALR):
        regs_with_pos = [(i, op) for i, op in enumerate(operands)
                         if op.kind in (REG, MEM)]
        if role == _R_JAL:
            # `jal offset` is the link form with an implied ra destination.
            if not regs_with_pos:
                return [], ["ra"]
        if role == _R_JALR and len(regs_with_pos) == 1:
            i, op = regs_with_pos[0]
            if op.kind == REG:
                return [op.reg], ["ra"]
        reads: list[str] = []
        writes: list[str] = []
        for pos, (i, op) in enumerate(regs_with_pos):
            if pos == 0 and i == 0 and op.kind == REG:
                writes.append(op.reg)
            else:
                reads.append(op.reg)
        return reads, writes
    raise UnknownMnemonic(mnemonic, line_no)


def effect_template(mnemonic: str, operands: tuple[Operand, ...],
                    permissive: bool = False,
                    line_no: int | None = None) -> EffectTemplate:
    """Compile the reusable effect shape for one decoded instruction text."""
    name = _normalize_mnemonic(mnemonic)
    entry = _TABLE.get(name)
    unknown = False
    if entry is None:
        if not permissive:
            raise UnknownMnemonic(mnemonic, line_no)
        entry = (OTHER, _R_DST)
        unknown = True
    kind, role = entry
    reads, writes = _split_roles(operands, role, mnemonic, line_no)

    mem_size = 0
    mem_reads = mem_writes = mem_is_write = False
    atomic = False
    if kind == LOAD:
        mem_size = _LOAD_SIZES.get(name) or _AMO_SIZES[name]
        mem_reads = True
        if role == _R_AMO:
            # Read-modify-write in one record: the byte range sits in both
            # key sets, and the read side governs allocation on a miss.
            mem_writes = True
            atomic = True
        elif name.startswith("lr."):
            atomic = True
    elif kind == STORE:
        mem_size = _STORE_SIZES[name]
        mem_writes = True
        mem_is_write = True
        if role == _R_SC:
            atomic = True

    drop_zero = lambda names: tuple(n for n in names if n != ZERO)
    return EffectTemplate(
        kind=kind,
        read_regs=drop_zero(dict.fromkeys(reads)),
        write_regs=drop_zero(dict.fromkeys(writes)),
        mem_size=mem_size,
        mem_reads=mem_reads,
        mem_writes=mem_writes,
        mem_is_write=mem_is_write,
        unknown=unknown,
        atomic=atomic,
    )


def decode_effect(record: TraceRecord, permissive: bool = False) -> InstructionEffect:
    """Decode one record into its full effect.

    Strict mode raises UnknownMnemonic for anything outside the table.
    Permissive mode falls back to a generic write-first template with
    kind 'other' and no memory effect; callers count such records.
    """
    tpl = effect_template(record.mnemonic, record.operands,
                          permissive=permissive, line_no=record.line_no)
    reads: set = set(tpl.read_regs)
    writes: set = set(tpl.write_regs)
    mem = None
    if tpl.mem_size and record.data_addr is not None:
        span = range(record.data_addr, record.data_addr + tpl.mem_size)
        if tpl.mem_reads:
            reads.update(span)
        if tpl.mem_writes:
            writes.update(span)
        mem = MemAccess(record.data_addr, tpl.mem_size, tpl.mem_is_write)
    return InstructionEffect(frozenset(reads), frozenset(writes), mem, tpl.kind)


def mem_access_size(mnemonic: str) -> int:
    """Architectural access width in bytes; NotAMemoryOp for everything else."""
    name = _normalize_mnemonic(mnemonic.lower())
    size = _LOAD_SIZES.get(name) or _STORE_SIZES.get(name) or _AMO_SIZES.get(name)
    if size is None:
        raise NotAMemoryOp(f"{mnemonic!r} does not access memory")
    return size


def supported_mnemonics() -> dict[str, tuple[str, str]]:
    """mnemonic -> (kind, operand role) for the whole table."""
    return dict(_TABLE)


def list_isa() -> str:
    """Human-readable mnemonic table (kind, role, access bytes)."""
    rows = ["mnemonic        kind    role   bytes"]
    for name in sorted(_TABLE):
        kind, role = _TABLE[name]
        size = _LOAD_SIZES.get(name) or _STORE_SIZES.get(name) or _AMO_SIZES.get(name) or ""
        rows.append(f"{name:<15} {kind:<7} {role:<6} {size}")
    return "\n".join(rows)
