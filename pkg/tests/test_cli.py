import json
import subprocess
import sys

import pytest

RUN = [sys.executable, "-m", "favoid"]


def run_cli(*args, cwd=None):
    return subprocess.run(
        RUN + list(args), capture_output=True, text=True, cwd=cwd, timeout=300
    )


class TestDensityCommand:
    def test_triangle_two_colors(self):
        res = run_cli("density", "K3", "--r", "2")
        assert res.returncode == 0
        assert "m2_bar[r=2] = 3/2" in res.stdout
        assert "exponent[r=2] = 4/3" in res.stdout

    def test_json_output(self):
        res = run_cli("density", "K3", "--r", "2", "--json")
        data = json.loads(res.stdout)
        assert data["schema"] == "favoid.density/1"
        assert data["values"]["m2_bar[r=2]"] == "3/2"
        assert data["values"]["exponent[r=2]"] == "4/3"
        assert data["balancedness"]["strictly_two_balanced"] is True
        assert data["premise"]["satisfied"] is True

    def test_unknown_graph_usage_error(self):
        res = run_cli("density", "notagraph")
        assert res.returncode == 2

    def test_graph_file(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("v 4\ne 0 1\ne 1 2\ne 2 3\ne 0 3\n")
        res = run_cli("density", str(path), "--r", "2")
        assert res.returncode == 0
        assert "m2_bar[r=2] = 4/3" in res.stdout

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("vertices four\n")
        res = run_cli("density", str(path))
        assert res.returncode == 2

    def test_manifest_on_stderr(self):
        res = run_cli("density", "K3")
        line = res.stderr.strip().splitlines()[-1]
        manifest = json.loads(line)
        assert manifest["schema"] == "favoid.manifest/1"
        assert manifest["command"][:2] == ["favoid", "density"]
        assert "version" in manifest


class TestConstructCommand:
    def test_k3_level_three(self, tmp_path):
        sidecar = tmp_path / "trees.json"
        res = run_cli(
            "construct", "--F", "K3", "--edge", "0,1", "--k", "3",
            "--sidecar", str(sidecar),
        )
        assert res.returncode == 0
        assert res.stdout.count("v 4") == 1 and res.stdout.count("v 6") == 1
        data = json.loads(sidecar.read_text())
        assert data["schema"] == "favoid.construct/1"
        assert len(data["members"]) == 2
        assert all(m["kind"] == "join" for m in data["members"])
        # manifest digest matches the emitted sidecar
        manifest = json.loads(res.stderr.strip().splitlines()[-1])
        import hashlib

        digest = hashlib.sha256(sidecar.read_bytes()).hexdigest()
        assert manifest["outputs"][str(sidecar)] == digest

    def test_densest(self, tmp_path):
        sidecar = tmp_path / "trees.json"
        res = run_cli(
            "construct", "--F", "K3", "--edge", "0,1", "--k", "3",
            "--densest", "--sidecar", str(sidecar),
        )
        assert res.stdout.count("v 6") == 1 and "v 4" not in res.stdout

    def test_bad_edge_spec(self, tmp_path):
        res = run_cli("construct", "--F", "K3", "--edge", "xy", "--k", "2")
        assert res.returncode == 2

    def test_premise_violation_is_usage_error(self, tmp_path):
        res = run_cli(
            "construct", "--F", "bowtie", "--edge", "0,1", "--k", "2",
            "--sidecar", str(tmp_path / "t.json"),
        )
        assert res.returncode == 2


class TestSimulateCommand:
    def test_record_and_transcript(self, tmp_path):
        transcript = tmp_path / "t.jsonl"
        res = run_cli(
            "simulate", "--n", "16", "--F", "K3", "--r", "2",
            "--seed", "11", "--max-rounds", "60", "--transcript", str(transcript),
        )
        assert res.returncode == 0
        record = json.loads(res.stdout)
        assert record["schema"] == "favoid.simulate/1"
        lines = transcript.read_text().splitlines()
        entries = [json.loads(x) for x in lines]
        assert entries[0]["round"] == 1
        assert set(entries[0]) == {"round", "edge", "color"}
        rounds_played = record["duration"]
        assert len(entries) == rounds_played

    def test_requires_seed(self):
        res = run_cli("simulate", "--n", "10", "--F", "K3")
        assert res.returncode == 2

    def test_byte_identical_repeats(self, tmp_path):
        args = [
            "simulate", "--n", "20", "--F", "C4", "--r", "2",
            "--seed", "5", "--max-rounds", "80",
        ]
        a, b = run_cli(*args), run_cli(*args)
        assert a.stdout == b.stdout


class TestEstimateCommand:
    def test_csv_and_json(self, tmp_path):
        csv = tmp_path / "out.csv"
        res = run_cli(
            "estimate", "--F", "K3", "--r", "1", "--grid", "24,48",
            "--trials", "4", "--seed", "9", "--csv", str(csv),
        )
        assert res.returncode == 0
        data = json.loads(res.stdout)
        assert data["schema"] == "favoid.estimate/1"
        assert data["theoretical_exponent"] == "1"
        header, *rows = csv.read_text().strip().splitlines()
        assert header == "n,trial,seed,duration,survived"
        assert len(rows) == 8

    def test_jobs_do_not_change_output(self, tmp_path):
        base = [
            "estimate", "--F", "K3", "--r", "1", "--grid", "16,32",
            "--trials", "3", "--seed", "2",
        ]
        a = run_cli(*base, "--jobs", "1")
        b = run_cli(*base, "--jobs", "2")
        if b.returncode != 0:
            pytest.skip("process pool unavailable in sandbox")
        assert a.stdout == b.stdout


class TestRegcheckCommand:
    def test_pair_falsified_exit_one(self, tmp_path):
        spec = tmp_path / "pair.json"
        spec.write_text(
            json.dumps(
                {
                    "U": 10,
                    "W": 10,
                    "edges": [[u, w] for u in range(5) for w in range(10)],
                }
            )
        )
        res = run_cli("regcheck", "pair", str(spec), "--eps", "2/5", "--p", "1/2")
        assert res.returncode == 1
        data = json.loads(res.stdout)
        assert data["status"] == "falsified" and data["certificate"]

    def test_pair_sampled_requires_seed(self, tmp_path):
        spec = tmp_path / "pair.json"
        spec.write_text(json.dumps({"U": 4, "W": 4, "edges": []}))
        res = run_cli("regcheck", "pair", str(spec), "--samples", "5")
        assert res.returncode == 2

    def test_uniform_verified(self, tmp_path):
        g = tmp_path / "g.txt"
        g.write_text("v 5\ne 0 1\n")
        res = run_cli("regcheck", "uniform", str(g), "--eta", "1/4", "--p", "1")
        assert res.returncode == 0
        assert json.loads(res.stdout)["status"] == "verified"

    def test_codegree(self, tmp_path):
        spec = tmp_path / "hg.json"
        spec.write_text(json.dumps({"vertices": 3, "edges": [[0, 1, 2]]}))
        res = run_cli("regcheck", "codegree", str(spec), "--tau", "1.0")
        data = json.loads(res.stdout)
        assert data["delta"] == 6.0

    def test_lower_and_extensible(self, tmp_path):
        spec = tmp_path / "roots.json"
        spec.write_text(
            json.dumps(
                {
                    "parts": {"size": 4, "count": 3},
                    "roots": [[a, b] for a in range(4) for b in range(4)],
                }
            )
        )
        res = run_cli(
            "regcheck", "lower", str(spec), "--F", "K3", "--q", "1/2", "--eps", "1/2"
        )
        assert res.returncode == 0
        res = run_cli("regcheck", "extensible", str(spec), "--F", "K3", "--q", "1", "--A", "1")
        assert res.returncode == 0


class TestVerifyCommand:
    def test_chain_small(self, tmp_path):
        report = tmp_path / "report.json"
        res = run_cli(
            "verify", "chain", "--vmax", "4", "--r", "3", "--json", str(report)
        )
        assert res.returncode == 0
        assert "[pass] density-chain" in res.stdout
        data = json.loads(report.read_text())
        assert data["passed"] is True

    def test_m2_le_2m(self):
        res = run_cli("verify", "m2-le-2m", "--vmax", "4")
        assert res.returncode == 0

    def test_fstar_single_pattern(self):
        res = run_cli(
            "verify", "fstar-density", "--patterns", "K3", "--k", "2", "--r", "2"
        )
        assert res.returncode == 0
