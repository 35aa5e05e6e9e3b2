import json
import struct

import numpy as np
import pytest

import semshift as ss
from semshift.cli import main


@pytest.fixture(scope="module")
def bench_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("bench")
    assert main(["synth", "--out", str(out), "--seed", "7"]) == 0
    return out


def read(path):
    return path.read_bytes()


class TestSynthValidateDetectEval:
    def test_synth_writes_stores_and_gold(self, bench_dir):
        assert (bench_dir / "t0" / "manifest.json").is_file()
        assert (bench_dir / "t0" / "vectors.bin").is_file()
        assert (bench_dir / "t1" / "manifest.json").is_file()
        gold = (bench_dir / "gold.tsv").read_text().splitlines()
        assert len(gold) == 20
        targets = (bench_dir / "targets.txt").read_text().split()
        assert len(targets) == 20

    def test_validate_ok(self, bench_dir, capsys):
        assert main(["validate", str(bench_dir / "t0"), str(bench_dir / "t1")]) == 0
        out = capsys.readouterr().out
        assert out.count("ok\t") == 2

    def test_detect_then_eval_perfect_accuracy(self, bench_dir, tmp_path, capsys):
        pred = tmp_path / "pred.tsv"
        code = main(["detect", "--store-t0", str(bench_dir / "t0"),
                     "--store-t1", str(bench_dir / "t1"),
                     "--words", str(bench_dir / "targets.txt"),
                     "--lang", "en", "--out", str(pred)])
        assert code == 0
        rows = pred.read_text().splitlines()
        assert len(rows) == 20
        assert all(len(r.split("\t")) == 4 for r in rows)
        capsys.readouterr()
        assert main(["eval", "--pred", str(pred),
                     "--gold", str(bench_dir / "gold.tsv")]) == 0
        assert capsys.readouterr().out.strip() == "accuracy\t1.000000"

    def test_detect_byte_identical_reruns(self, bench_dir, tmp_path):
        args = ["detect", "--store-t0", str(bench_dir / "t0"),
                "--store-t1", str(bench_dir / "t1"), "--lang", "en"]
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert read(a) == read(b)

    def test_threads_do_not_change_output(self, bench_dir, tmp_path, monkeypatch):
        base = ["detect", "--store-t0", str(bench_dir / "t0"),
                "--store-t1", str(bench_dir / "t1"), "--lang", "en"]
        a, b, c = (tmp_path / n for n in ("a.tsv", "b.tsv", "c.tsv"))
        assert main(base + ["--out", str(a)]) == 0
        assert main(base + ["--out", str(b), "--threads", "4"]) == 0
        monkeypatch.setenv("SEMSHIFT_THREADS", "3")
        assert main(base + ["--out", str(c)]) == 0
        assert read(a) == read(b) == read(c)

    def test_words_file_subset(self, bench_dir, tmp_path):
        words = tmp_path / "words.txt"
        words.write_text("g0\nu4\n")
        out = tmp_path / "out.tsv"
        assert main(["detect", "--store-t0", str(bench_dir / "t0"),
                     "--store-t1", str(bench_dir / "t1"), "--lang", "en",
                     "--words", str(words), "--out", str(out)]) == 0
        rows = [r.split("\t") for r in out.read_text().splitlines()]
        assert [r[0] for r in rows] == ["g0", "u4"]
        assert [r[1] for r in rows] == ["1", "0"]

    def test_json_report(self, bench_dir, tmp_path):
        out = tmp_path / "out.tsv"
        j = tmp_path / "out.json"
        words = tmp_path / "w.txt"
        words.write_text("g0\n")
        assert main(["detect", "--store-t0", str(bench_dir / "t0"),
                     "--store-t1", str(bench_dir / "t1"), "--lang", "en",
                     "--words", str(words), "--out", str(out),
                     "--json", str(j)]) == 0
        payload = json.loads(j.read_text())
        assert payload[0]["word"] == "g0" and payload[0]["changed"]


class TestErrors:
    def test_truncated_store_exits_2(self, bench_dir, tmp_path, capsys):
        import shutil
        broken = tmp_path / "broken"
        shutil.copytree(bench_dir / "t0", broken)
        blob = (broken / "vectors.bin").read_bytes()
        (broken / "vectors.bin").write_bytes(blob[:-8])
        assert main(["validate", str(broken)]) == 2
        assert "truncated vector file" in capsys.readouterr().err

    def test_unknown_flag_exits_1(self, bench_dir, capsys):
        code = main(["detect", "--store-t0", "x", "--store-t1", "y",
                     "--out", "z", "--bogus"])
        assert code == 1
        assert "usage error" in capsys.readouterr().err

    def test_unknown_subcommand_exits_1(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_missing_store_exits_2(self, tmp_path, capsys):
        assert main(["validate", str(tmp_path / "nowhere")]) == 2

    def test_eval_word_mismatch_exits_2(self, tmp_path, capsys):
        a = tmp_path / "a.tsv"
        b = tmp_path / "b.tsv"
        a.write_text("x\t1\n")
        b.write_text("y\t1\n")
        assert main(["eval", "--pred", str(a), "--gold", str(b)]) == 2


class TestRankCommand:
    def test_rank_ordering(self, tmp_path, capsys):
        t0, t1, planted = ss.build_ranking_fixture(seed=11,
                                                   fractions=[0.0, 0.5, 1.0])
        ss.save_store(t0, tmp_path / "t0")
        ss.save_store(t1, tmp_path / "t1")
        words = tmp_path / "words.txt"
        words.write_text("".join(w + "\n" for w in sorted(planted)))
        out = tmp_path / "rank.tsv"
        assert main(["rank", "--store-t0", str(tmp_path / "t0"),
                     "--store-t1", str(tmp_path / "t1"), "--lang", "en",
                     "--words", str(words), "--out", str(out)]) == 0
        rows = [r.split("\t") for r in out.read_text().splitlines()]
        assert [r[0] for r in rows] == ["r2", "r1", "r0"]
        assert rows[0][1] == "1.000000"
        assert rows[2][1] == "0.000000"

    def test_eval_graded(self, tmp_path, capsys):
        pred = tmp_path / "p.tsv"
        gold = tmp_path / "g.tsv"
        pred.write_text("a\t0.9\nb\t0.5\nc\t0.1\n")
        gold.write_text("a\t3\nb\t2\nc\t1\n")
        assert main(["eval", "--pred", str(pred), "--gold", str(gold),
                     "--mode", "graded"]) == 0
        assert capsys.readouterr().out.strip() == "spearman\t1.000000"


class TestGraphCommand:
    def test_tree_json(self, bench_dir, tmp_path):
        out = tmp_path / "g.json"
        assert main(["graph", "--mode", "tree", "--store-t0", str(bench_dir / "t0"),
                     "--word", "g0", "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert payload["kind"] == "tree"
        senses = [n for n in payload["nodes"] if n["layer"] == 1]
        assert len(senses) == 1  # g0 has one sense at t0

    def test_temporal_dot(self, bench_dir, tmp_path):
        out = tmp_path / "g.dot"
        assert main(["graph", "--mode", "temporal",
                     "--store-t0", str(bench_dir / "t0"),
                     "--store-t1", str(bench_dir / "t1"),
                     "--word", "g0", "--format", "dot", "--out", str(out)]) == 0
        text = out.read_text()
        assert text.startswith("digraph temporal {")
        assert 'color="blue"' in text  # the planted gain

    def test_spatiotemporal_requires_l2_flags(self, bench_dir, capsys):
        code = main(["graph", "--mode", "spatiotemporal",
                     "--store-t0", str(bench_dir / "t0"),
                     "--store-t1", str(bench_dir / "t1"),
                     "--word", "g0", "--out", "-"])
        assert code == 1

    def test_graph_byte_identical(self, bench_dir, tmp_path):
        args = ["graph", "--mode", "tree", "--store-t0", str(bench_dir / "t0"),
                "--word", "u4", "--format", "dot"]
        a, b = tmp_path / "a.dot", tmp_path / "b.dot"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert read(a) == read(b)


class TestCompareCommand:
    def test_pseudo_language_pair(self, bench_dir, tmp_path):
        t0 = ss.load_store(bench_dir / "t0")
        t1 = ss.load_store(bench_dir / "t1")
        v = np.zeros(t0.dim)
        v[t0.dim - 4] = 0.6

        def shift(store, language):
            clouds = {w: ss.TokenCloud(
                w, (store.cloud(w).vectors.astype(np.float64) + v).astype(np.float32))
                for w in store.words()}
            mean = (store.language_mean.astype(np.float64) + v).astype(np.float32)
            return ss.EmbeddingStore(ss.SliceId(language, store.slice.period),
                                     clouds, language_mean=mean)

        ss.save_store(shift(t0, "de"), tmp_path / "l2t0")
        ss.save_store(shift(t1, "de"), tmp_path / "l2t1")
        pairs = tmp_path / "pairs.tsv"
        pairs.write_text("g0\tg0\nu4\tu4\n")
        out = tmp_path / "cmp.json"
        assert main(["compare", "--l1-t0", str(bench_dir / "t0"),
                     "--l1-t1", str(bench_dir / "t1"),
                     "--l2-t0", str(tmp_path / "l2t0"),
                     "--l2-t1", str(tmp_path / "l2t1"),
                     "--pairs", str(pairs), "--lang", "en",
                     "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        by_pair = {tuple(p["word_pair"]): p for p in payload}
        assert len(by_pair[("g0", "g0")]["consistent_gains"]) == 1
        assert by_pair[("u4", "u4")]["consistent_gains"] == []


class TestConfigPrecedence:
    def test_flags_override_config_file(self, bench_dir, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"language": "en", "strategy": "time_independent"}))
        words = tmp_path / "w.txt"
        words.write_text("l0\n")  # a planted loss: invisible to time_independent
        out_cfg = tmp_path / "a.tsv"
        out_flag = tmp_path / "b.tsv"
        base = ["detect", "--store-t0", str(bench_dir / "t0"),
                "--store-t1", str(bench_dir / "t1"), "--words", str(words)]
        assert main(base + ["--config", str(cfg), "--out", str(out_cfg)]) == 0
        assert main(base + ["--config", str(cfg), "--strategy", "time_dependent",
                            "--out", str(out_flag)]) == 0
        assert out_cfg.read_text().split("\t")[1] == "0"
        assert out_flag.read_text().split("\t")[1] == "1"

    def test_unknown_config_key_rejected(self, bench_dir, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"nope": 1}))
        assert main(["detect", "--store-t0", str(bench_dir / "t0"),
                     "--store-t1", str(bench_dir / "t1"),
                     "--config", str(cfg), "--out", "-"]) == 2


class TestTuneCommand:
    def test_tune_writes_reproducible_report(self, tmp_path):
        cloud = ss.synth_cloud(
            [(np.eye(8)[0], 4, 0.0),
             (0.845 * np.eye(8)[0] + np.sqrt(1 - 0.845 ** 2) * np.eye(8)[1], 4, 0.0),
             (np.eye(8)[2], 4, 0.0),
             (0.845 * np.eye(8)[2] + np.sqrt(1 - 0.845 ** 2) * np.eye(8)[3], 4, 0.0)],
            seed=0, word="target")
        store = ss.EmbeddingStore(ss.SliceId("en", "dev"), {"target": cloud})
        ss.save_store(store, tmp_path / "devstore")
        dev = tmp_path / "dev.json"
        dev.write_text(json.dumps({"target": {
            "labels": [0] * 8 + [1] * 8, "store_ref": "devstore"}}))
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        args = ["tune", "--devset", str(dev),
                "--t0-grid", "0.10:0.25", "--t1-grid", "0.10:0.25"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert read(a) == read(b)
        payload = json.loads(a.read_text())
        assert payload["best"] == {"t0_sc": 0.16, "t1_sc": 0.16}
