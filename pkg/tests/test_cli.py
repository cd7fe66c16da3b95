import json
from pathlib import Path

import numpy as np
import pytest

from stepup.cli import main
from stepup.colorings import load_coloring, save_coloring, solid_coloring
from stepup.hypergraphs import (
    Certificate,
    complete_hypergraph,
    save_hypergraph,
)
from stepup.manifest import load_manifest, sha256_file


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture(scope="module")
def d6_coloring_file(tmp_path_factory, searched_d6):
    path = tmp_path_factory.mktemp("col") / "d6.txt"
    save_coloring(searched_d6, path)
    return path


@pytest.fixture(scope="module")
def d5_coloring_file(tmp_path_factory):
    from stepup.colorings import random_coloring

    path = tmp_path_factory.mktemp("col5") / "d5.txt"
    save_coloring(random_coloring(5, 21), path)
    return path


class TestSearchCmd:
    def test_search_success_writes_coloring_and_manifest(self, tmp_path):
        out = tmp_path / "phi.txt"
        code = run(
            "search", "--pattern", "lemma41", "--D", 6, "--n", 5,
            "--restarts", 10000, "--seed", 0, "--out", out,
        )
        assert code == 0
        phi = load_coloring(out)
        assert phi.D == 6 and phi.seed is not None
        man = load_manifest(str(out) + ".manifest.json")
        assert man.outputs[str(out)] == sha256_file(out)
        assert man.seeds == {"search": 0}

    def test_fixed_seed_rerun_identical_digest(self, tmp_path):
        outs = []
        for sub in ("a", "b"):
            out = tmp_path / sub / "phi.txt"
            out.parent.mkdir()
            assert run(
                "search", "--pattern", "lemma41", "--D", 6, "--n", 5,
                "--restarts", 10000, "--seed", 12, "--out", out,
            ) == 0
            outs.append(sha256_file(out))
        assert outs[0] == outs[1]

    def test_search_exhausted_exit_2_with_report(self, tmp_path):
        out = tmp_path / "phi.txt"
        code = run(
            "search", "--pattern", "lemma41", "--D", 7, "--n", 5,
            "--restarts", 30, "--seed", 0, "--out", out,
        )
        assert code == 2
        assert not out.exists()
        report = json.loads((tmp_path / "phi.txt.failure.json").read_text())
        assert report["status"] == "exhausted"
        assert report["restarts"] == 30
        assert report["best_bad_count"] >= 1
        best = load_coloring(tmp_path / "phi.txt.best")
        assert best.D == 7

    def test_invalid_pattern_exit_3(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as exc:
            run("search", "--pattern", "nope", "--D", 6, "--n", 5,
                "--out", tmp_path / "x.txt")
        assert exc.value.code == 3


class TestVerifyCmd:
    def test_k6free_exhaustive_pass(self, tmp_path, d6_coloring_file):
        out = tmp_path / "cert.json"
        code = run(
            "verify", "--check", "k6free", "--rules", "section3",
            "--coloring", d6_coloring_file, "--out", out,
        )
        assert code == 0
        cert = Certificate.from_json(out.read_text())
        assert cert.kind == "FreenessChecked"
        assert cert.N == 64
        assert cert.provenance["ruleset"] == "section3"

    def test_k6free_fail_exit_1_with_witness(self, tmp_path):
        hpath = tmp_path / "complete.txt"
        save_hypergraph(complete_hypergraph(6, 4), hpath)
        out = tmp_path / "cert.json"
        code = run("verify", "--check", "k6free", "--hypergraph", hpath, "--out", out)
        assert code == 1
        cert = Certificate.from_json(out.read_text())
        assert cert.kind == "CliqueFound"
        assert cert.witness == (0, 1, 2, 3, 4, 5)

    def test_budget_exit_4(self, tmp_path):
        phi = solid_coloring(10, 0)
        cpath = tmp_path / "c.txt"
        save_coloring(phi, cpath)
        code = run(
            "verify", "--check", "k6free", "--rules", "section3",
            "--coloring", cpath, "--mode", "exhaustive",
            "--budget", 1000, "--out", tmp_path / "cert.json",
        )
        assert code == 4

    def test_alpha_certificate(self, tmp_path, d5_coloring_file):
        out = tmp_path / "alpha.json"
        code = run(
            "verify", "--check", "alpha", "--rules", "section4",
            "--coloring", d5_coloring_file, "--t", 2, "--out", out,
        )
        assert code == 0
        cert = Certificate.from_json(out.read_text())
        assert cert.kind == "AlphaBound"
        assert cert.m == len(cert.witness) + 1

    def test_alpha_m_gate(self, tmp_path, d5_coloring_file):
        out = tmp_path / "alpha.json"
        code = run(
            "verify", "--check", "alpha", "--rules", "section4",
            "--coloring", d5_coloring_file, "--t", 2, "--m", 2, "--out", out,
        )
        assert code == 1  # independence certainly >= 4 > 1

    def test_alpha_dense_conflicts_budget_exit_4(self, tmp_path, d6_coloring_file):
        # at 64 vertices the 2-edge pattern generates millions of forbidden
        # 5-sets; the solver budget turns that into a clean exit
        out = tmp_path / "alpha.json"
        code = run(
            "verify", "--check", "alpha", "--rules", "section4",
            "--coloring", d6_coloring_file, "--t", 2, "--out", out,
        )
        assert code == 4

    def test_universal_pass_and_fail(self, tmp_path, d6_coloring_file):
        out = tmp_path / "u.json"
        code = run(
            "verify", "--check", "universal", "--coloring", d6_coloring_file,
            "--pattern", "lemma41", "--n", 5, "--out", out,
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["holds"] is True and doc["sets_checked"] == 6

        bad = tmp_path / "bad.txt"
        save_coloring(solid_coloring(8, 0), bad)
        code = run(
            "verify", "--check", "universal", "--coloring", bad,
            "--pattern", "lemma41", "--n", 5, "--out", out,
        )
        assert code == 1
        doc = json.loads(out.read_text())
        assert doc["holds"] is False and doc["counterexample"] == [0, 1, 2, 3, 4]


class TestWalkCmd:
    def test_section4_walk_summary(self, tmp_path, d6_coloring_file):
        outdir = tmp_path / "walks"
        code = run(
            "walk", "--which", "section4", "--coloring", d6_coloring_file,
            "--n", 5, "--q-count", 12, "--q-seed", 3, "--out-dir", outdir,
        )
        assert code == 0
        summary = json.loads((outdir / "summary.json").read_text())
        assert summary["outcomes"] == {"PatternCertificate": 12}
        files = sorted(outdir.glob("q_*.outcome.txt"))
        assert len(files) == 12
        first = files[0].read_text().splitlines()
        assert first[0].startswith("format=1 which=section4 q_index=0")
        man = load_manifest(outdir / "manifest.json")
        assert str(outdir / "summary.json") in man.outputs

    def test_bad_q_size_exit_3(self, tmp_path, d6_coloring_file):
        code = run(
            "walk", "--which", "section4", "--coloring", d6_coloring_file,
            "--n", 5, "--q-count", 2, "--q-size", 24, "--out-dir", tmp_path / "w",
        )
        assert code == 3

    def test_explicit_q_file_deterministic(self, tmp_path, d6_coloring_file):
        rng = np.random.default_rng(5)
        qf = tmp_path / "qs.txt"
        lines = ["format=1"]
        for _ in range(3):
            Q = np.sort(rng.choice(64, size=25, replace=False))
            lines.append(" ".join(map(str, Q)))
        qf.write_text("\n".join(lines) + "\n")
        digests = []
        for sub in ("w1", "w2"):
            outdir = tmp_path / sub
            code = run(
                "walk", "--which", "section4", "--coloring", d6_coloring_file,
                "--n", 5, "--q-file", qf, "--out-dir", outdir,
            )
            assert code == 0
            digests.append([sha256_file(p) for p in sorted(outdir.glob("q_*.outcome.txt"))])
        assert digests[0] == digests[1]

    def test_section3_walk(self, tmp_path):
        phi = solid_coloring(20, 0)
        cpath = tmp_path / "c20.txt"
        save_coloring(phi, cpath)
        outdir = tmp_path / "w3"
        code = run(
            "walk", "--which", "section3", "--coloring", cpath,
            "--n", 2, "--q-count", 3, "--q-seed", 1, "--out-dir", outdir,
        )
        assert code == 0
        summary = json.loads((outdir / "summary.json").read_text())
        assert sum(summary["outcomes"].values()) == 3
        assert "Exhausted" not in summary["outcomes"]


class TestRerun:
    def test_rerun_reproduces_digests(self, tmp_path):
        out = tmp_path / "phi.txt"
        assert run(
            "search", "--pattern", "lemma41", "--D", 6, "--n", 5,
            "--restarts", 10000, "--seed", 7, "--out", out,
        ) == 0
        man_path = str(out) + ".manifest.json"
        code = run("rerun", man_path, "--out-dir", tmp_path / "replay")
        assert code == 0

    def test_rerun_detects_divergence(self, tmp_path):
        out = tmp_path / "phi.txt"
        assert run(
            "search", "--pattern", "lemma41", "--D", 6, "--n", 5,
            "--restarts", 10000, "--seed", 7, "--out", out,
        ) == 0
        man_path = Path(str(out) + ".manifest.json")
        man = load_manifest(man_path)
        man.outputs[str(out)] = "0" * 64  # corrupt the recorded digest
        man_path.write_text(man.to_json())
        code = run("rerun", man_path, "--out-dir", tmp_path / "replay2")
        assert code == 1
