import subprocess
import sys

import pytest

from hornlog.minsky import parse_computation, parse_machine, validate_computation
from hornlog.programs import program_from_json, program_to_json, single_edge
from hornlog.syntax import parse_formula, parse_sequent

DEC_TEXT = "counters 2\nL1: ifzero x1 goto L0\nL1: dec x1 goto L1\nL0: halt\n"


def run_cli(*args, expect: int = 0):
    result = subprocess.run(
        [sys.executable, "-m", "hornlog.cli", *args],
        capture_output=True,
        text=True,
    )
    assert result.returncode == expect, (
        f"exit {result.returncode} != {expect}\nstdout: {result.stdout}\nstderr: {result.stderr}"
    )
    return result


@pytest.fixture
def dec_file(tmp_path):
    path = tmp_path / "dec.mm"
    path.write_text(DEC_TEXT)
    return path


def test_machine_check(dec_file):
    result = run_cli("machine", "check", str(dec_file))
    assert "2 counters" in result.stdout


def test_machine_check_malformed(tmp_path):
    path = tmp_path / "bad.mm"
    path.write_text("counters 2\nL1: jmp x1 goto L0\n")
    result = run_cli("machine", "check", str(path), expect=2)
    assert "line 2" in result.stderr


def test_machine_search_and_run(dec_file, tmp_path):
    out = tmp_path / "run.txt"
    run_cli("machine", "search", str(dec_file), "--input", "2,0",
            "--max-steps", "100", "--max-counter", "10", "--output", str(out))
    computation = parse_computation(out.read_text())
    assert validate_computation(parse_machine(DEC_TEXT), computation).ok
    assert len(computation.moves) == 3
    result = run_cli("machine", "run", str(dec_file), str(out))
    assert result.stdout.strip() == "accept"


def test_machine_search_absent(dec_file):
    result = run_cli("machine", "search", str(dec_file), "--input", "0,1", expect=1)
    assert result.stdout.strip() == "absent"


def test_encode_output_parses(dec_file):
    result = run_cli("encode", str(dec_file), "--input", "2,0")
    sequent = parse_sequent(result.stdout)
    assert sequent.input == parse_sequent("l1*r1*r1 ; ; |- l0").input
    assert len(sequent.banged) == 6


def test_prove_and_verify(dec_file, tmp_path):
    seq_file = tmp_path / "dec.seq"
    result = run_cli("encode", str(dec_file), "--input", "1,0")
    seq_file.write_text(result.stdout)
    prog_file = tmp_path / "dec.prog.json"
    run_cli("prove", str(seq_file), "--depth", "8", "--output", str(prog_file))
    program = program_from_json(prog_file.read_text())
    assert len(program.leaves) >= 2
    accept = run_cli("verify", "sequent-program", str(seq_file), str(prog_file))
    assert accept.stdout.strip() == "accept"


def test_prove_absent(dec_file, tmp_path):
    seq_file = tmp_path / "stuck.seq"
    result = run_cli("encode", str(dec_file), "--input", "0,1")
    seq_file.write_text(result.stdout)
    out = run_cli("prove", str(seq_file), "--depth", "10", expect=1)
    assert out.stdout.strip() == "absent"


def test_verify_rejects_bad_program(dec_file, tmp_path):
    seq_file = tmp_path / "dec.seq"
    seq_file.write_text(run_cli("encode", str(dec_file), "--input", "1,0").stdout)
    prog_file = tmp_path / "bad.prog.json"
    prog_file.write_text(program_to_json(single_edge(parse_formula("l1 -o l9"))))
    result = run_cli("verify", "sequent-program", str(seq_file), str(prog_file), expect=1)
    assert "LEAF_MISMATCH" in result.stdout or "FOREIGN_FORMULA" in result.stdout


def test_bridge_pipeline(dec_file, tmp_path):
    comp_file = tmp_path / "run.txt"
    run_cli("machine", "search", str(dec_file), "--input", "2,0", "--output", str(comp_file))
    prog_file = tmp_path / "run.prog.json"
    dot_file = tmp_path / "run.dot"
    run_cli("bridge", "comp-to-prog", str(dec_file), str(comp_file),
            "--output", str(prog_file), "--dot", str(dot_file))
    assert dot_file.read_text().startswith("digraph")
    back_file = tmp_path / "back.txt"
    run_cli("bridge", "prog-to-comp", str(dec_file), str(prog_file),
            "--input", "2,0", "--output", str(back_file))
    assert parse_computation(back_file.read_text()) == parse_computation(comp_file.read_text())


def test_bridge_roundtrip_agreement(dec_file):
    result = run_cli("bridge", "roundtrip", str(dec_file), "--input", "2,0",
                     "--max-steps", "100", "--depth", "20")
    assert result.stdout.strip() == "AGREE_HALTS"
    result = run_cli("bridge", "roundtrip", str(dec_file), "--input", "0,1",
                     "--max-steps", "100", "--depth", "12")
    assert result.stdout.strip() == "AGREE_NO_WITNESS_WITHIN_BOUNDS"
    run_cli("bridge", "roundtrip", str(dec_file), "--input", "0,1", "--strict", expect=1)


def test_compile_pipeline(tmp_path):
    from corpora import ll_corpus
    from hornlog import ll

    proof = ll_corpus()[0]
    ll_file = tmp_path / "proof.ll.json"
    ll_file.write_text(ll.ll_proof_to_json(proof))
    run_cli("verify", "ll", str(ll_file))
    hll_file = tmp_path / "proof.hll.json"
    run_cli("compile", "ll-to-hll", str(ll_file), "--output", str(hll_file))
    run_cli("verify", "hll", str(hll_file))
    prog_file = tmp_path / "proof.prog.json"
    run_cli("compile", "hll-to-program", str(hll_file), "--output", str(prog_file))
    program = program_from_json(prog_file.read_text())
    assert program.vertices


def test_malformed_json_exits_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    run_cli("verify", "hll", str(bad), expect=2)


def test_missing_file_exits_2():
    run_cli("machine", "check", "/nonexistent/machine.mm", expect=2)
