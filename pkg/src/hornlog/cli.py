"""Command-line front end.

Exit status: 0 on success/accept, 1 on reject or no witness within bounds,
2 on malformed input.  Machine-readable results go to stdout, diagnostics to
stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bridge, hll, ll, minsky, programs
from .encoding import MachineEncoding, build_sequent
from .minsky import MachineFormatError, parse_computation, parse_machine
from .syntax import FormatError, parse_sequent, sequent_text

OK, REJECT, MALFORMED = 0, 1, 2


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write_out(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _parse_inputs(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise FormatError(f"bad counter list {text!r}") from None
    if any(v < 0 for v in values):
        raise FormatError("counters must be non-negative")
    return values


def _load_machine(path: str) -> minsky.MinskyMachine:
    return parse_machine(_read(path))


def _maybe_dot(program: programs.HornProgram, path: str | None):
    if path:
        _write_out(programs.program_to_dot(program), path)


# --- machine ---------------------------------------------------------------


def cmd_machine_check(args) -> int:
    machine = _load_machine(args.machine)
    print(f"ok: {machine.n} counters, {len(machine.instructions)} instructions")
    return OK


def cmd_machine_run(args) -> int:
    machine = _load_machine(args.machine)
    computation = parse_computation(_read(args.computation))
    result = minsky.validate_computation(machine, computation)
    if result.ok:
        print("accept")
        return OK
    print(f"reject at index {result.index}: {result.reason}")
    return REJECT


def cmd_machine_search(args) -> int:
    machine = _load_machine(args.machine)
    init = machine.initial_configuration(_parse_inputs(args.input), label=args.start)
    computation = minsky.search_halting(machine, init, args.max_steps, args.max_counter)
    if computation is None:
        print("absent")
        return REJECT
    _write_out(minsky.computation_text(computation), args.output)
    return OK


# --- encode / prove ----------------------------------------------------------


def cmd_encode(args) -> int:
    machine = _load_machine(args.machine)
    enc = MachineEncoding.build(machine)
    sequent = build_sequent(enc.ctx, machine, _parse_inputs(args.input))
    _write_out(sequent_text(sequent) + "\n", args.output)
    return OK


def cmd_prove(args) -> int:
    sequent = parse_sequent(_read(args.sequent))
    witness = programs.prove_bounded(sequent, args.depth)
    if witness is None:
        print("absent")
        return REJECT
    _write_out(programs.program_to_json(witness), args.output)
    _maybe_dot(witness, args.dot)
    return OK


# --- verify -------------------------------------------------------------------


def cmd_verify_sequent_program(args) -> int:
    sequent = parse_sequent(_read(args.sequent))
    program = programs.program_from_json(_read(args.program))
    report = programs.verify_strong_solution(program, sequent)
    if report.ok:
        print("accept")
        return OK
    for violation in report.violations:
        print(violation)
    return REJECT


def cmd_verify_hll(args) -> int:
    proof = hll.hll_proof_from_json(_read(args.proof))
    result = hll.check_hll_proof(proof)
    if result.ok:
        print("accept")
        return OK
    print(result.failure)
    return REJECT


def cmd_verify_ll(args) -> int:
    proof = ll.ll_proof_from_json(_read(args.proof))
    result = ll.check_ll_proof(proof)
    if result.ok:
        print("accept")
        return OK
    print(result.failure)
    return REJECT


# --- compile --------------------------------------------------------------------


def cmd_compile_ll_to_hll(args) -> int:
    proof = ll.ll_proof_from_json(_read(args.proof))
    translated = ll.translate_ll_to_hll(proof)
    _write_out(hll.hll_proof_to_json(translated), args.output)
    return OK


def cmd_compile_hll_to_program(args) -> int:
    proof = hll.hll_proof_from_json(_read(args.proof))
    program = hll.compile_hll_to_program(proof)
    _write_out(programs.program_to_json(program), args.output)
    _maybe_dot(program, args.dot)
    return OK


# --- bridge ----------------------------------------------------------------------


def cmd_bridge_comp_to_prog(args) -> int:
    machine = _load_machine(args.machine)
    enc = MachineEncoding.build(machine)
    computation = parse_computation(_read(args.computation))
    trace = bridge.computation_to_program(enc, computation)
    _write_out(programs.program_to_json(trace.program), args.output)
    _maybe_dot(trace.program, args.dot)
    return OK


def cmd_bridge_prog_to_comp(args) -> int:
    machine = _load_machine(args.machine)
    enc = MachineEncoding.build(machine)
    program = programs.program_from_json(_read(args.program))
    init = machine.initial_configuration(_parse_inputs(args.input), label=args.start)
    try:
        computation = bridge.program_to_computation(enc, program, init)
    except bridge.ExtractionError as exc:
        print(exc)
        return REJECT
    _write_out(minsky.computation_text(computation), args.output)
    return OK


def cmd_bridge_roundtrip(args) -> int:
    machine = _load_machine(args.machine)
    enc = MachineEncoding.build(machine)
    report = bridge.round_trip_check(
        enc, _parse_inputs(args.input), args.max_steps, args.max_counter, args.depth
    )
    print(report)
    if report.code == bridge.AGREE_HALTS:
        return OK
    if report.code == bridge.DISAGREEMENT:
        return REJECT
    return REJECT if args.strict else OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hornlog", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    machine = sub.add_parser("machine", help="counter machine tools")
    machine_sub = machine.add_subparsers(dest="subcommand", required=True)
    p = machine_sub.add_parser("check", help="validate a machine file")
    p.add_argument("machine")
    p.set_defaults(handler=cmd_machine_check)
    p = machine_sub.add_parser("run", help="validate a computation against a machine")
    p.add_argument("machine")
    p.add_argument("computation")
    p.set_defaults(handler=cmd_machine_run)
    p = machine_sub.add_parser("search", help="breadth-first halting search")
    p.add_argument("machine")
    p.add_argument("--input", required=True, help="comma-separated counters")
    p.add_argument("--start", type=int, default=1, help="start label index (default 1)")
    p.add_argument("--max-steps", type=int, default=1000)
    p.add_argument("--max-counter", type=int, default=100)
    p.add_argument("--output", default=None)
    p.set_defaults(handler=cmd_machine_search)

    p = sub.add_parser("encode", help="machine + inputs to a sequent")
    p.add_argument("machine")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default=None)
    p.set_defaults(handler=cmd_encode)

    p = sub.add_parser("prove", help="bounded witness search for a sequent")
    p.add_argument("sequent", help="file holding one sequent")
    p.add_argument("--depth", type=int, default=20)
    p.add_argument("--output", default=None)
    p.add_argument("--dot", default=None, help="also write the witness as dot")
    p.set_defaults(handler=cmd_prove)

    verify = sub.add_parser("verify", help="check programs and proofs")
    verify_sub = verify.add_subparsers(dest="subcommand", required=True)
    p = verify_sub.add_parser("sequent-program", help="strong-solution check")
    p.add_argument("sequent")
    p.add_argument("program")
    p.set_defaults(handler=cmd_verify_sequent_program)
    p = verify_sub.add_parser("hll", help="check a zoned-calculus proof")
    p.add_argument("proof")
    p.set_defaults(handler=cmd_verify_hll)
    p = verify_sub.add_parser("ll", help="check a flat-calculus proof")
    p.add_argument("proof")
    p.set_defaults(handler=cmd_verify_ll)

    compile_ = sub.add_parser("compile", help="proof transformations")
    compile_sub = compile_.add_subparsers(dest="subcommand", required=True)
    p = compile_sub.add_parser("ll-to-hll", help="normalize and translate")
    p.add_argument("proof")
    p.add_argument("--output", default=None)
    p.set_defaults(handler=cmd_compile_ll_to_hll)
    p = compile_sub.add_parser("hll-to-program", help="compile to a Horn program")
    p.add_argument("proof")
    p.add_argument("--output", default=None)
    p.add_argument("--dot", default=None)
    p.set_defaults(handler=cmd_compile_hll_to_program)

    bridge_ = sub.add_parser("bridge", help="machine run <-> Horn program")
    bridge_sub = bridge_.add_subparsers(dest="subcommand", required=True)
    p = bridge_sub.add_parser("comp-to-prog")
    p.add_argument("machine")
    p.add_argument("computation")
    p.add_argument("--output", default=None)
    p.add_argument("--dot", default=None)
    p.set_defaults(handler=cmd_bridge_comp_to_prog)
    p = bridge_sub.add_parser("prog-to-comp")
    p.add_argument("machine")
    p.add_argument("program")
    p.add_argument("--input", required=True)
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--output", default=None)
    p.set_defaults(handler=cmd_bridge_prog_to_comp)
    p = bridge_sub.add_parser("roundtrip")
    p.add_argument("machine")
    p.add_argument("--input", required=True)
    p.add_argument("--max-steps", type=int, default=1000)
    p.add_argument("--max-counter", type=int, default=100)
    p.add_argument("--depth", type=int, default=20)
    p.add_argument("--strict", action="store_true",
                   help="nonzero exit unless both searches succeed")
    p.set_defaults(handler=cmd_bridge_roundtrip)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (FormatError, MachineFormatError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return MALFORMED
    except (ValueError, OSError, ll.ProofStructureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return MALFORMED


if __name__ == "__main__":
    sys.exit(main())
