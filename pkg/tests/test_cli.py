from __future__ import annotations

import io
import subprocess
import sys

import pytest

from pfdimers import graphfile, lattice
from pfdimers.cli import main
from pfdimers.errors import MalformedFile


def _roundtrip(inst):
    buf = io.StringIO()
    graphfile.dump(inst, buf)
    buf.seek(0)
    return graphfile.load(buf)


def test_roundtrip_identity():
    for surf in ("planar", "torus", "klein_hexagon", "rp2"):
        inst = lattice(3, 4, surf)
        back = _roundtrip(inst)
        m1, m2 = inst.map, back.map
        assert m1.vertex_count == m2.vertex_count
        assert m1.rotations == m2.rotations
        assert [(e.u, e.v, e.twist) for e in m1.edges] == \
            [(e.u, e.v, e.twist) for e in m2.edges]
        assert len(back.curves) == len(inst.curves)
        for c1, c2 in zip(inst.curves, back.curves):
            assert (c1.kind, c1.cross, c1.companion, c1.crossing_edge) == \
                (c2.kind, c2.cross, c2.companion, c2.crossing_edge)


def test_malformed_file_messages():
    with pytest.raises(MalformedFile):
        graphfile.load(io.StringIO("vertices 2\nbogus 1\n"))
    with pytest.raises(MalformedFile):
        graphfile.load(io.StringIO("edge 0 0 1 0 1\n"))
    with pytest.raises(MalformedFile):
        graphfile.load(io.StringIO("vertices 2\nedge 5 0 1 0 1\n"))


def test_fraction_weights_roundtrip(tmp_path):
    from fractions import Fraction

    inst = lattice(2, 2, "planar", weights=[Fraction(3, 2)] * 4)
    back = _roundtrip(inst)
    assert [e.weight for e in back.map.edges] == [Fraction(3, 2)] * 4


def test_cli_gen_partition_pipeline(tmp_path):
    path = tmp_path / "klein.graph"
    assert main(["gen", "--surface", "klein_hexagon", "--size", "3x4",
                 "--out", str(path)]) == 0
    out = subprocess.run(
        [sys.executable, "-m", "pfdimers.cli", "partition", str(path),
         "--method", "practical", "--backend", "exact", "--format", "kv"],
        capture_output=True, text=True)
    assert out.returncode == 0
    kv = dict(line.split(" ", 1) for line in out.stdout.strip().splitlines())
    assert kv["Z"] == "54"
    assert kv["method"] == "practical"
    assert kv["surface"] == "klein_bottle"
    assert kv["b1"] == "2"
    assert any(k.startswith("pf.") for k in kv)


def test_cli_pipe_stdin(tmp_path):
    gen = subprocess.run(
        [sys.executable, "-m", "pfdimers.cli", "gen", "--surface", "torus",
         "--size", "3x4"],
        capture_output=True, text=True)
    assert gen.returncode == 0
    part = subprocess.run(
        [sys.executable, "-m", "pfdimers.cli", "partition", "-",
         "--method", "pin"],
        input=gen.stdout, capture_output=True, text=True)
    assert part.returncode == 0
    assert part.stdout.strip() == "50"  # brute-force count for the 3x4 torus


def test_cli_verify(tmp_path):
    path = tmp_path / "rp2.graph"
    main(["gen", "--surface", "rp2", "--size", "2x3", "--out", str(path)])
    assert main(["verify", str(path)]) == 0


def test_cli_orient_and_invariants(tmp_path, capsys):
    path = tmp_path / "t.graph"
    main(["gen", "--surface", "torus", "--size", "2x2", "--out", str(path)])
    assert main(["orient", str(path)]) == 0
    capsys.readouterr()
    assert main(["invariants", str(path), "--format", "kv"]) == 0
    out = capsys.readouterr().out
    assert "brown." in out and "arf." in out


def test_cli_oracle_buckets(tmp_path, capsys):
    path = tmp_path / "k.graph"
    main(["gen", "--surface", "klein_hexagon", "--size", "2x4", "--out", str(path)])
    assert main(["oracle", str(path), "--buckets", "--format", "kv"]) == 0
    out = capsys.readouterr().out
    assert "Z 16" in out
    assert "bucket." in out


def test_cli_malformed_exit_code(tmp_path):
    path = tmp_path / "bad.graph"
    path.write_text("vertices 2\nwhat 1 2\n")
    assert main(["partition", str(path)]) == 1


def test_cli_gen_usage_error():
    assert main(["gen", "--surface", "torus", "--size", "bogus"]) == 1


def test_cli_no_matching_prints_zero(tmp_path, capsys):
    # a path with 3 vertices has no perfect matching: Z = 0, exit 0
    path = tmp_path / "p.graph"
    path.write_text(
        "vertices 4\n"
        "edge 0 0 1 0 1\nedge 1 0 2 0 1\nedge 2 0 3 0 1\n"
        "rotation 0 0.0 1.0 2.0\nrotation 1 0.1\nrotation 2 1.1\nrotation 3 2.1\n")
    assert main(["partition", str(path)]) == 0
    assert capsys.readouterr().out.strip() == "0"
