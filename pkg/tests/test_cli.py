import csv
import io
import subprocess
import sys

import pytest

from detrelay.cli import main
from detrelay.gaussian_gap import GaussianDiamond, diamond_gap

P2P = "node S\nnode D\nsource S\ndest D\nedge S D 4\n"
RELAY = "node S\nnode R\nnode D\nsource S\ndest D\nedge S R 3\nedge S D 1\nedge R D 2\n"
DIAMOND = (
    "node S\nnode A1\nnode A2\nnode D\nsource S\ndest D\n"
    "edge S A1 4\nedge S A2 2\nedge A1 D 1\nedge A2 D 3\n"
)


@pytest.fixture
def netfile(tmp_path):
    def write(text, name="net.txt"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)

    return write


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def rows(text):
    return list(csv.reader(io.StringIO(text)))


class TestCapacity:
    def test_p2p(self, netfile):
        code, out = run("capacity", "--file", netfile(P2P))
        assert code == 0
        assert "capacity: 4" in out.splitlines()

    def test_relay(self, netfile):
        code, out = run("capacity", "--file", netfile(RELAY))
        assert code == 0
        assert out == "q: 3\ncapacity: 2\ncut: {S,R} | {D}\n"

    def test_undeclared_node(self, netfile, capsys):
        code, _ = run("capacity", "--file", netfile("node S\nnode D\nsource S\ndest D\nedge S X 4\n"))
        assert code == 2
        assert "line 5" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert run("capacity", "--file", str(tmp_path / "nope"))[0] == 2

    def test_size_limit(self, netfile):
        relays = [f"R{i}" for i in range(23)]
        text = "node S\n" + "".join(f"node {r}\n" for r in relays) + "node D\nsource S\ndest D\nedge S D 1\n"
        assert run("capacity", "--file", netfile(text))[0] == 3


class TestCuts:
    def test_relay(self, netfile):
        code, out = run("cuts", "--file", netfile(RELAY))
        assert code == 0
        lines = out.splitlines()[1:]
        assert lines == ["{S,R} | {D}  rank 2 *", "{S} | {R,D}  rank 3"]

    def test_p2p(self, netfile):
        _, out = run("cuts", "--file", netfile(P2P))
        assert out.splitlines()[1:] == ["{S} | {D}  rank 4 *"]

    def test_diamond(self, netfile):
        _, out = run("cuts", "--file", netfile(DIAMOND))
        lines = out.splitlines()[1:]
        assert len(lines) == 4
        assert [ln.endswith("*") for ln in lines] == [True, True, False, False]
        assert all("rank 3" in ln for ln in lines[:2])


class TestRelayGap:
    def test_single_point(self, capsys):
        code, out = run("relay-gap", "--lo-db", "5", "--hi-db", "5")
        assert code == 0
        table = rows(out)
        assert table[0] == ["sr_db", "rd_db", "gap_bits"]
        assert len(table) == 2
        assert "max_gap=" in capsys.readouterr().err

    def test_step_zero(self):
        assert run("relay-gap", "--step-db", "0")[0] == 2

    def test_reversed_range(self):
        assert run("relay-gap", "--lo-db", "3", "--hi-db", "1")[0] == 2

    def test_round_trip_nine_digits(self):
        _, out = run("relay-gap", "--lo-db", "-3", "--hi-db", "3", "--step-db", "0.5")
        for sr, rd, gap in rows(out)[1:]:
            assert format(float(gap), ".9g") == gap
            assert 0 <= float(gap) <= 1


class TestDiamondGap:
    def test_zero_gains(self):
        code, out = run("diamond-gap", "--", "-inf", "-inf", "-inf", "-inf")
        assert code == 0
        assert rows(out)[1][-4:] == ["0", "0", "0", "0"]

    def test_explicit_symmetric(self):
        db = "11.7609125905568"  # 10*log10(15)
        code, out = run("diamond-gap", db, db, db, db)
        assert code == 0
        rep = diamond_gap(GaussianDiamond.from_power(15, 15, 15, 15))
        row = rows(out)[1]
        assert float(row[5]) == pytest.approx(rep.achievable, abs=1e-8)
        assert float(row[-1]) == pytest.approx(rep.gap, abs=1e-8)

    def test_swap_reported(self):
        _, out = run("diamond-gap", "0", "10", "5", "5")
        assert rows(out)[1][4] == "1"

    def test_random(self):
        code, out = run("diamond-gap", "--random", "200", "--seed", "7")
        assert code == 0
        table = rows(out)[1:]
        assert len(table) == 200
        assert all(float(r[-1]) <= 2 + 1e-9 for r in table)

    def test_bad_arguments(self):
        assert run("diamond-gap", "1", "2")[0] == 2
        assert run("diamond-gap", "1", "2", "3", "4", "--random", "3")[0] == 2
        assert run("diamond-gap", "--random", "0")[0] == 2


class TestRegion:
    def test_mac_corners(self):
        code, out = run("region", "--kind", "mac", "--n1", "5", "--n2", "2")
        assert code == 0
        assert "  (0, 2)\n  (3, 2)\n  (5, 0)\n" in out

    def test_bc_corners(self):
        _, out = run("region", "--kind", "bc", "--n1", "5", "--n2", "2")
        assert "  (3, 2)" in out

    def test_gaussian_table(self):
        code, out = run("region", "--kind", "bc", "--snr1-db", "15", "--snr2-db", "6")
        assert code == 0
        lines = out.splitlines()
        start = lines.index("t,r1,r2")
        assert len(lines) - start - 1 == 64

    def test_label_order(self, capsys):
        code, out = run("region", "--kind", "mac", "--n1", "2", "--n2", "5")
        assert code == 2 and out == ""
        assert "swap" in capsys.readouterr().err

    def test_bad_kind(self):
        assert run("region", "--kind", "xyz", "--n1", "2", "--n2", "1")[0] == 2

    def test_unknown_flag(self):
        assert run("region", "--kind", "mac", "--n3", "1")[0] == 2


class TestSimulate:
    def test_p2p(self, netfile):
        code, out = run("simulate", "--file", netfile(P2P), "--block-k", "1,3", "--trials", "2")
        assert code == 0
        table = rows(out)
        assert table[0] == ["K", "trials", "best_rate", "mean_rate", "capacity"]
        assert [r[2] for r in table[1:]] == ["4", "4"]

    def test_diamond_curve(self, netfile):
        _, out = run("simulate", "--file", netfile(DIAMOND), "--block-k", "2,4,8")
        best = [float(r[2]) for r in rows(out)[1:]]
        assert best == sorted(best)
        assert all(b <= 3 for b in best)

    def test_not_layered(self, netfile, capsys):
        code, _ = run("simulate", "--file", netfile(RELAY))
        assert code == 4
        assert "S -> D" in capsys.readouterr().err

    def test_bad_k(self, netfile):
        assert run("simulate", "--file", netfile(P2P), "--block-k", "0")[0] == 2


def test_module_entry_point(tmp_path):
    p = tmp_path / "p2p.txt"
    p.write_text(P2P)
    res = subprocess.run(
        [sys.executable, "-m", "detrelay", "capacity", "--file", str(p)],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0
    assert "capacity: 4" in res.stdout
