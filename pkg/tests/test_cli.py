import csv

import numpy as np
import pytest

from wordring.cli import main
from wordring.io import load_embeddings, read_tour, write_tour
from wordring.tsp import brute_force_tour, tour_cost

from conftest import random_embedding
from synth import circle_embedding, separable_corpus, write_corpus, write_embeddings


@pytest.fixture
def small_embeddings(tmp_path):
    emb, _ = circle_embedding(1, n=20)
    path = tmp_path / "emb.txt"
    write_embeddings(path, emb)
    return path


@pytest.fixture
def corpus_files(tmp_path):
    emb, train, test, truth = separable_corpus(
        5, n_vocab=60, n_classes=3, n_docs=40, n_train=30, spread=3.0, extra_dims=2
    )
    emb_path = tmp_path / "cls_emb.txt"
    train_path = tmp_path / "train.txt"
    test_path = tmp_path / "test.txt"
    write_embeddings(emb_path, emb)
    write_corpus(train_path, train, emb)
    write_corpus(test_path, test, emb)
    return emb_path, train_path, test_path, truth


class TestTourCommand:
    def test_smoke_writes_tour(self, small_embeddings, tmp_path, capsys):
        out = tmp_path / "tour.txt"
        rc = main(["tour", "--embeddings", str(small_embeddings), "--output", str(out)])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 20
        captured = capsys.readouterr()
        assert "n=20" in captured.out and "d=2" in captured.out

    def test_printed_cost_matches_written_tour(self, tmp_path, capsys):
        emb = random_embedding(71, 1000, 8)
        emb_path = tmp_path / "big.txt"
        write_embeddings(emb_path, emb)
        out = tmp_path / "tour.txt"
        rc = main(["tour", "--embeddings", str(emb_path), "--output", str(out)])
        assert rc == 0
        printed = capsys.readouterr().out
        cost_str = next(f for f in printed.split() if f.startswith("cost=")).split("=")[1]
        reloaded = load_embeddings(emb_path)
        recomputed = tour_cost(reloaded, read_tour(out, reloaded))
        assert cost_str == f"{recomputed:.6f}"

    def test_missing_input_fails(self, tmp_path, capsys):
        rc = main(["tour", "--embeddings", str(tmp_path / "nope.txt"),
                   "--output", str(tmp_path / "t.txt")])
        assert rc == 1
        assert "error:" in capsys.readouterr().err

    def test_zero_budget_notes_exhaustion(self, small_embeddings, tmp_path, capsys):
        out = tmp_path / "tour.txt"
        rc = main(["tour", "--embeddings", str(small_embeddings), "--output", str(out),
                   "--budget", "0"])
        assert rc == 0
        assert "budget exhausted" in capsys.readouterr().err

    def test_byte_identical_across_runs(self, small_embeddings, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        assert main(["tour", "--embeddings", str(small_embeddings), "--output", str(a)]) == 0
        assert main(["tour", "--embeddings", str(small_embeddings), "--output", str(b),
                     "--threads", "2"]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestBoundCommand:
    def test_triangle_ratio_one(self, tmp_path, capsys):
        emb_path = tmp_path / "tri.txt"
        emb_path.write_text(
            "a 0.0 0.0\nb 1.0 0.0\nc 0.5 0.86602540378443864676\n", encoding="utf-8"
        )
        tour_path = tmp_path / "tri_tour.txt"
        tour_path.write_text("a\nb\nc\n", encoding="utf-8")
        rc = main(["bound", "--embeddings", str(emb_path), "--tour", str(tour_path)])
        assert rc == 0
        out = capsys.readouterr().out
        ratio = float(next(l for l in out.splitlines() if l.startswith("ratio=")).split("=")[1])
        assert abs(ratio - 1.0) <= 1e-6

    def test_bound_on_bruteforce_tour(self, tmp_path, capsys):
        emb = random_embedding(81, 9, 2)
        emb_path = tmp_path / "nine.txt"
        write_embeddings(emb_path, emb)
        tour, _ = brute_force_tour(emb)
        tour_path = tmp_path / "opt.txt"
        write_tour(tour, emb, tour_path)
        rc = main(["bound", "--embeddings", str(emb_path), "--tour", str(tour_path),
                   "--iterations", "200"])
        assert rc == 0
        lines = capsys.readouterr().out.splitlines()
        cost = float(lines[0].split("=")[1])
        bound = float(lines[1].split("=")[1])
        ratio = float(lines[2].split("=")[1])
        assert bound <= cost + 1e-9
        assert ratio >= 1.0 - 1e-9

    def test_zero_iterations_allowed(self, small_embeddings, tmp_path, capsys):
        out = tmp_path / "t.txt"
        main(["tour", "--embeddings", str(small_embeddings), "--output", str(out)])
        capsys.readouterr()
        rc = main(["bound", "--embeddings", str(small_embeddings), "--tour", str(out),
                   "--iterations", "0"])
        assert rc == 0
        lines = capsys.readouterr().out.splitlines()
        cost = float(lines[0].split("=")[1])
        bound = float(lines[1].split("=")[1])
        assert 0 < bound <= cost + 1e-9


class TestNeighborsCommand:
    @pytest.fixture
    def tour_file(self, tmp_path):
        p = tmp_path / "t.txt"
        p.write_text("".join(f"w{i}\n" for i in range(10)), encoding="utf-8")
        return p

    def test_radius_zero_is_the_word(self, tour_file, capsys):
        assert main(["neighbors", "--tour", str(tour_file), "--word", "w3",
                     "--radius", "0"]) == 0
        assert capsys.readouterr().out.strip() == "w3"

    def test_wraps_at_the_seam(self, tour_file, capsys):
        assert main(["neighbors", "--tour", str(tour_file), "--word", "w0",
                     "--radius", "2"]) == 0
        assert capsys.readouterr().out.strip() == "w8 w9 w0 w1 w2"

    def test_window_size(self, tour_file, capsys):
        assert main(["neighbors", "--tour", str(tour_file), "--word", "w5",
                     "--radius", "4"]) == 0
        assert len(capsys.readouterr().out.split()) == 9

    def test_unknown_word_fails(self, tour_file, capsys):
        assert main(["neighbors", "--tour", str(tour_file), "--word", "zzz"]) == 1
        assert "unknown word" in capsys.readouterr().err


class TestClassifyCommand:
    def test_bow_table_output(self, corpus_files, capsys):
        emb_path, train_path, test_path, _ = corpus_files
        rc = main(["classify", "--embeddings", str(emb_path), "--train", str(train_path),
                   "--test", str(test_path), "--method", "bow"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "method" in out and "bow" in out

    def test_csv_output_with_tour_method(self, corpus_files, tmp_path, capsys):
        emb_path, train_path, test_path, _ = corpus_files
        tour_out = tmp_path / "tour.txt"
        assert main(["tour", "--embeddings", str(emb_path), "--output", str(tour_out)]) == 0
        report = tmp_path / "report.csv"
        rc = main(["classify", "--embeddings", str(emb_path), "--train", str(train_path),
                   "--test", str(test_path), "--method", "blurred:tour",
                   "--tour", str(tour_out), "--format", "csv", "--output", str(report)])
        assert rc == 0
        rows = list(csv.DictReader(report.open()))
        assert rows[0]["method"] == "blurred:tour"
        assert float(rows[0]["test_error_pct"]) == 0.0  # separable fixture

    def test_degenerate_variance_equals_bow(self, corpus_files, tmp_path):
        emb_path, train_path, test_path, _ = corpus_files
        tour_out = tmp_path / "tour.txt"
        assert main(["tour", "--embeddings", str(emb_path), "--output", str(tour_out)]) == 0
        reports = {}
        for name, method in [("bow", "bow"), ("blur", "blurred:tour")]:
            report = tmp_path / f"{name}.csv"
            rc = main(["classify", "--embeddings", str(emb_path), "--train", str(train_path),
                       "--test", str(test_path), "--method", method, "--tour", str(tour_out),
                       "--k", "3", "--variance", "1e-6", "--format", "csv",
                       "--output", str(report)])
            assert rc == 0
            reports[name] = list(csv.DictReader(report.open()))[0]
        assert reports["bow"]["test_error_pct"] == reports["blur"]["test_error_pct"]

    def test_unknown_method_is_usage_error(self, corpus_files):
        emb_path, train_path, test_path, _ = corpus_files
        with pytest.raises(SystemExit) as exc:
            main(["classify", "--embeddings", str(emb_path), "--train", str(train_path),
                  "--test", str(test_path), "--method", "wmd"])
        assert exc.value.code == 2

    def test_partial_override_fails(self, corpus_files, capsys):
        emb_path, train_path, test_path, _ = corpus_files
        rc = main(["classify", "--embeddings", str(emb_path), "--train", str(train_path),
                   "--test", str(test_path), "--method", "bow", "--k", "3"])
        assert rc == 1
        assert "both k and variance" in capsys.readouterr().err


class TestExportCommand:
    def test_writes_tsplib(self, small_embeddings, tmp_path, capsys):
        out = tmp_path / "inst.tsp"
        rc = main(["export", "--embeddings", str(small_embeddings), "--output", str(out)])
        assert rc == 0
        text = out.read_text()
        assert text.startswith("NAME:")
        assert "DIMENSION: 20" in text
        assert "EDGE_WEIGHT_TYPE: EXPLICIT" in text

    def test_byte_identical_across_runs(self, small_embeddings, tmp_path):
        d1, d2 = tmp_path / "r1", tmp_path / "r2"
        d1.mkdir()
        d2.mkdir()
        a, b = d1 / "inst.tsp", d2 / "inst.tsp"
        main(["export", "--embeddings", str(small_embeddings), "--output", str(a)])
        main(["export", "--embeddings", str(small_embeddings), "--output", str(b)])
        assert a.read_bytes() == b.read_bytes()
