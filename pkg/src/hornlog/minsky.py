"""Nondeterministic n-counter machines.

A machine is an ordered instruction list; duplicate labels are allowed and are
the source of nondeterminism.  Counters hold non-negative integers.  The
halting configuration is label L0 with every counter at zero.

Machine text format (line oriented, ``#`` starts a comment)::

    counters <n>
    L<i>: inc x<m> goto L<j>
    L<i>: dec x<m> goto L<j>
    L<i>: ifpos x<m> goto L<j>
    L<i>: ifzero x<m> goto L<j>
    L0: halt

The halt line may be omitted; exactly one halt at L0 is implied.

Computation text format: the initial configuration on the first line as
``L<i> : c1,c2,...`` and one ``I<k> -> L<i> : c1,c2,...`` line per move,
where ``I<k>`` is the 1-based index of the applied instruction.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass

INC, DEC, TESTPOS, TESTZERO, HALT = "inc", "dec", "ifpos", "ifzero", "halt"

HALT_LABEL = 0


class MachineFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Instruction:
    kind: str  # one of INC, DEC, TESTPOS, TESTZERO, HALT
    label: int
    counter: int | None = None  # 1-based; None for halt
    target: int | None = None

    def __post_init__(self):
        if self.kind == HALT:
            if self.label != HALT_LABEL or self.counter is not None or self.target is not None:
                raise ValueError("halt must be 'L0: halt'")
        else:
            if self.kind not in (INC, DEC, TESTPOS, TESTZERO):
                raise ValueError(f"unknown instruction kind {self.kind!r}")
            if self.label < 1:
                raise ValueError(f"non-halt instruction label must be >= 1, got L{self.label}")
            if self.counter is None or self.counter < 1 or self.target is None or self.target < 0:
                raise ValueError(f"malformed instruction {self!r}")

    def __str__(self) -> str:
        if self.kind == HALT:
            return "L0: halt"
        return f"L{self.label}: {self.kind} x{self.counter} goto L{self.target}"


@dataclass(frozen=True)
class Configuration:
    label: int
    counters: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.counters):
            raise ValueError(f"negative counter in {self!r}")

    def __str__(self) -> str:
        return f"L{self.label} : {','.join(str(c) for c in self.counters)}"


@dataclass(frozen=True)
class MinskyMachine:
    n: int
    instructions: tuple[Instruction, ...]
    labels: frozenset[int]

    @staticmethod
    def build(n: int, instructions: list[Instruction] | tuple[Instruction, ...]) -> "MinskyMachine":
        if n < 1:
            raise ValueError(f"need at least one counter, got {n}")
        instructions = tuple(instructions)
        halts = [i for i in instructions if i.kind == HALT]
        if not halts:
            instructions = instructions + (Instruction(HALT, HALT_LABEL),)
        elif len(halts) > 1:
            raise ValueError("more than one halt instruction")
        labels = frozenset(i.label for i in instructions)
        for i in instructions:
            if i.kind == HALT:
                continue
            if not 1 <= i.counter <= n:
                raise ValueError(f"counter x{i.counter} out of range in {i}")
            if i.target not in labels and i.target != HALT_LABEL:
                raise ValueError(f"goto target L{i.target} has no instruction ({i})")
        return MinskyMachine(n, instructions, labels)

    def halting_configuration(self) -> Configuration:
        return Configuration(HALT_LABEL, (0,) * self.n)

    def initial_configuration(self, counters: tuple[int, ...], label: int = 1) -> Configuration:
        if len(counters) != self.n:
            raise ValueError(f"expected {self.n} counters, got {len(counters)}")
        return Configuration(label, tuple(counters))


@dataclass(frozen=True)
class Computation:
    """A validated-shape move sequence: len(moves) == len(configs) - 1.

    Moves are 0-based indices into the machine's instruction list; whether
    each move is actually enabled is the business of validate_computation.
    """

    configs: tuple[Configuration, ...]
    moves: tuple[int, ...]

    def __post_init__(self):
        if not self.configs:
            raise ValueError("a computation has at least one configuration")
        if len(self.moves) != len(self.configs) - 1:
            raise ValueError("need exactly one move per configuration step")


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    index: int | None = None
    reason: str | None = None


def _step(instruction: Instruction, config: Configuration) -> Configuration | None:
    """The configuration after the move, or None when the move is not enabled."""
    if instruction.kind == HALT or instruction.label != config.label:
        return None
    m = instruction.counter - 1
    value = config.counters[m]
    if instruction.kind == INC:
        counters = config.counters[:m] + (value + 1,) + config.counters[m + 1:]
        return Configuration(instruction.target, counters)
    if instruction.kind == DEC:
        if value == 0:
            return None
        counters = config.counters[:m] + (value - 1,) + config.counters[m + 1:]
        return Configuration(instruction.target, counters)
    if instruction.kind == TESTPOS:
        return Configuration(instruction.target, config.counters) if value > 0 else None
    if instruction.kind == TESTZERO:
        return Configuration(instruction.target, config.counters) if value == 0 else None
    raise AssertionError(instruction.kind)


def successors(machine: MinskyMachine, config: Configuration) -> tuple[tuple[int, Configuration], ...]:
    """Every enabled move as (instruction index, next configuration), in program order."""
    if len(config.counters) != machine.n:
        raise ValueError(f"configuration has {len(config.counters)} counters, machine has {machine.n}")
    moves = []
    for index, instruction in enumerate(machine.instructions):
        nxt = _step(instruction, config)
        if nxt is not None:
            moves.append((index, nxt))
    return tuple(moves)


def validate_computation(machine: MinskyMachine, computation: Computation) -> ValidationResult:
    """Accept iff every recorded move is enabled at its source configuration."""
    for u, move in enumerate(computation.moves):
        if not 0 <= move < len(machine.instructions):
            return ValidationResult(False, u, f"no instruction I{move + 1}")
        expected = _step(machine.instructions[move], computation.configs[u])
        if expected is None:
            return ValidationResult(False, u, f"I{move + 1} not enabled at {computation.configs[u]}")
        if expected != computation.configs[u + 1]:
            return ValidationResult(
                False, u,
                f"I{move + 1} yields {expected}, computation records {computation.configs[u + 1]}",
            )
    return ValidationResult(True)


def search_halting(
    machine: MinskyMachine,
    init: Configuration,
    max_steps: int,
    max_counter: int,
) -> Computation | None:
    """Breadth-first search for a shortest run from init to the halting configuration.

    Visited configurations are expanded once; successors with any counter above
    max_counter are pruned.  Absence within the bounds proves nothing.
    """
    if max_steps < 1 or max_counter < 1:
        raise ValueError("bounds must be positive")
    target = machine.halting_configuration()
    if init == target:
        return Computation((init,), ())
    parent: dict[Configuration, tuple[Configuration, int] | None] = {init: None}
    frontier = deque([(init, 0)])
    while frontier:
        config, depth = frontier.popleft()
        if depth >= max_steps:
            continue
        for index, nxt in successors(machine, config):
            if nxt in parent:
                continue
            if any(c > max_counter for c in nxt.counters):
                continue
            parent[nxt] = (config, index)
            if nxt == target:
                configs = [nxt]
                moves = []
                at = nxt
                while parent[at] is not None:
                    at, move = parent[at]
                    configs.append(at)
                    moves.append(move)
                return Computation(tuple(reversed(configs)), tuple(reversed(moves)))
            frontier.append((nxt, depth + 1))
    return None


# --- Text formats -----------------------------------------------------------

_COUNTERS_RE = re.compile(r"counters\s+(\d+)\Z")
_INSTR_RE = re.compile(r"L(\d+)\s*:\s*(inc|dec|ifpos|ifzero)\s+x(\d+)\s+goto\s+L(\d+)\Z")
_HALT_RE = re.compile(r"L(\d+)\s*:\s*halt\Z")


def parse_machine(text: str) -> MinskyMachine:
    n = None
    instructions: list[Instruction] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            m = _COUNTERS_RE.match(line)
            if m is None:
                raise MachineFormatError("expected 'counters <n>' first", lineno)
            n = int(m.group(1))
            if n < 1:
                raise MachineFormatError("need at least one counter", lineno)
            continue
        m = _INSTR_RE.match(line)
        if m:
            label, kind, counter, target = int(m.group(1)), m.group(2), int(m.group(3)), int(m.group(4))
            try:
                instructions.append(Instruction(kind, label, counter, target))
            except ValueError as exc:
                raise MachineFormatError(str(exc), lineno) from None
            continue
        m = _HALT_RE.match(line)
        if m:
            if int(m.group(1)) != HALT_LABEL:
                raise MachineFormatError("halt must be labelled L0", lineno)
            instructions.append(Instruction(HALT, HALT_LABEL))
            continue
        raise MachineFormatError(f"unrecognized line {line!r}", lineno)
    if n is None:
        raise MachineFormatError("empty machine text")
    try:
        return MinskyMachine.build(n, instructions)
    except ValueError as exc:
        raise MachineFormatError(str(exc)) from None


def machine_text(machine: MinskyMachine) -> str:
    lines = [f"counters {machine.n}"]
    lines.extend(str(i) for i in machine.instructions)
    return "\n".join(lines) + "\n"


_CONFIG_RE = re.compile(r"L(\d+)\s*:\s*(\d+(?:\s*,\s*\d+)*)\Z")
_MOVE_RE = re.compile(r"I(\d+)\s*->\s*(.*)\Z")


def _parse_config(text: str, lineno: int) -> Configuration:
    m = _CONFIG_RE.match(text.strip())
    if m is None:
        raise MachineFormatError(f"bad configuration {text.strip()!r}", lineno)
    counters = tuple(int(c) for c in m.group(2).split(","))
    return Configuration(int(m.group(1)), counters)


def parse_computation(text: str) -> Computation:
    configs: list[Configuration] = []
    moves: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not configs:
            configs.append(_parse_config(line, lineno))
            continue
        m = _MOVE_RE.match(line)
        if m is None:
            raise MachineFormatError("expected 'I<k> -> L<i> : c1,c2,...'", lineno)
        moves.append(int(m.group(1)) - 1)
        configs.append(_parse_config(m.group(2), lineno))
    if not configs:
        raise MachineFormatError("empty computation text")
    return Computation(tuple(configs), tuple(moves))


def computation_text(computation: Computation) -> str:
    lines = [str(computation.configs[0])]
    for move, config in zip(computation.moves, computation.configs[1:]):
        lines.append(f"I{move + 1} -> {config}")
    return "\n".join(lines) + "\n"
