import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from svgbench.bench import (
    DuplicateKey,
    EmptyManifest,
    EvalItem,
    ManifestError,
    MetricReport,
    aggregate_report,
    attach_predictions,
    count_tokens,
    extract_mcq_answer,
    format_table,
    load_manifest,
    load_predictions,
    score_animation,
    score_mcq,
    score_pixels,
)
from svgbench.bench.scoring import FrameCountMismatch, ItemResult
from svgbench.cli import main as cli_main
from svgbench.corpus import generate_canonical_corpus, make_animation
from svgbench.tokenizer import compression_stats


def write_jsonl(path: Path, records: list[dict]) -> Path:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r) + "\n")
    return path


def mcq_item(i, reference="A", prediction=None):
    item = EvalItem(
        id=f"q{i}", task="mcq", domain="icon",
        prompt="Which shape?", reference=reference,
    )
    item.prediction = prediction
    return item


def svg_item(i, reference, prediction=None, task="edit"):
    item = EvalItem(
        id=f"e{i}", task=task, domain="icon", prompt="edit", reference=reference
    )
    item.prediction = prediction
    return item


WHITE_SVG = '<svg viewBox="0 0 128 128"/>'
BROKEN_SVG = '<svg viewBox="0 0 128 128"><path d="M0 0L"/></svg>'


class TestManifest:
    def test_load_and_validate(self, tmp_path):
        path = write_jsonl(tmp_path / "m.jsonl", [
            {"id": "a", "task": "mcq", "domain": "icon", "prompt": "?", "reference": "A"},
            {"id": "b", "task": "mcq", "domain": "icon", "prompt": "?", "reference": "B"},
        ])
        manifest = load_manifest(path)
        assert manifest.task == "mcq" and len(manifest.items) == 2

    @pytest.mark.parametrize("record,message", [
        ({"id": "a", "task": "nope", "domain": "icon", "prompt": "?", "reference": "A"}, "task"),
        ({"id": "a", "task": "mcq", "domain": "space", "prompt": "?", "reference": "A"}, "domain"),
        ({"id": "a", "task": "mcq", "domain": "icon", "prompt": "?", "reference": "E"}, "reference"),
        ({"id": "a", "task": "mcq", "domain": "icon", "reference": "A"}, "prompt"),
        ({"id": "a", "task": "mcq", "domain": "icon", "prompt": "?", "reference": "A", "bonus": 1}, "bonus"),
    ])
    def test_schema_violations(self, tmp_path, record, message):
        path = write_jsonl(tmp_path / "m.jsonl", [record])
        with pytest.raises(ManifestError, match=message):
            load_manifest(path)

    def test_duplicate_ids(self, tmp_path):
        rec = {"id": "a", "task": "mcq", "domain": "icon", "prompt": "?", "reference": "A"}
        path = write_jsonl(tmp_path / "m.jsonl", [rec, rec])
        with pytest.raises(ManifestError, match="duplicate"):
            load_manifest(path)

    def test_predictions_join(self, tmp_path):
        man = write_jsonl(tmp_path / "m.jsonl", [
            {"id": "a", "task": "mcq", "domain": "icon", "prompt": "?", "reference": "A"},
        ])
        pred = write_jsonl(tmp_path / "p.jsonl", [{"id": "a", "output": "A."}])
        manifest = load_manifest(man)
        attach_predictions(manifest, load_predictions(pred))
        assert manifest.items[0].prediction == "A."


class TestMcq:
    def test_letter_extraction(self):
        assert extract_mcq_answer("B.") == "B"
        assert extract_mcq_answer("The answer is B.") == "B"
        assert extract_mcq_answer("  C") == "C"
        assert extract_mcq_answer("no letter here") is None
        assert extract_mcq_answer(None) is None

    def test_perfect_and_zero(self):
        items = [mcq_item(i, "A", "A.") for i in range(4)]
        assert score_mcq(items).aggregate["accuracy"] == 100.0
        items = [mcq_item(i, "A", "B.") for i in range(4)]
        assert score_mcq(items).aggregate["accuracy"] == 0.0

    def test_quarter_steps(self):
        for wrong in range(5):
            items = [
                mcq_item(i, "A", "D." if i < wrong else "A.") for i in range(4)
            ]
            assert score_mcq(items).aggregate["accuracy"] == 100.0 - 25.0 * wrong

    def test_unparsable_counts_wrong(self):
        items = [mcq_item(0, "A", "I cannot tell.")]
        assert score_mcq(items).aggregate["accuracy"] == 0.0

    def test_empty(self):
        with pytest.raises(EmptyManifest):
            score_mcq([])


class TestPixelScoring:
    def test_echo_reference_hits_ceiling(self, canonical_corpus):
        items = [svg_item(i, t, t) for i, t in enumerate(canonical_corpus[:3])]
        report = score_pixels(items, "edit", size=256)
        assert report.aggregate["ssim"] == 1.0
        assert report.aggregate["psnr"] == 100.0
        assert all(r.renderable for r in report.per_item)

    def test_broken_prediction_penalized(self):
        items = [svg_item(0, WHITE_SVG, BROKEN_SVG)]
        report = score_pixels(items, "edit", size=128)
        assert not report.per_item[0].renderable
        # black vs white reference: psnr exactly 0
        assert report.per_item[0].scores["psnr"] == 0.0

    def test_missing_prediction_penalized(self):
        items = [svg_item(0, WHITE_SVG, None)]
        report = score_pixels(items, "edit", size=128)
        assert not report.per_item[0].renderable

    def test_penalized_items_not_dropped(self, canonical_corpus):
        items = [
            svg_item(0, canonical_corpus[0], canonical_corpus[0]),
            svg_item(1, canonical_corpus[1], BROKEN_SVG),
        ]
        report = score_pixels(items, "edit", size=128)
        assert report.n_items == 2

    def test_exports_written(self, tmp_path, canonical_corpus):
        items = [svg_item(0, canonical_corpus[0], canonical_corpus[0])]
        score_pixels(items, "edit", size=128, export_dir=tmp_path / "frames")
        assert (tmp_path / "frames" / "e0" / "ref_0.png").exists()
        assert (tmp_path / "frames" / "e0" / "pred_0.png").exists()

    def test_reference_must_render(self):
        items = [svg_item(0, BROKEN_SVG, WHITE_SVG)]
        with pytest.raises(ValueError, match="reference"):
            score_pixels(items, "edit", size=128)


class TestAnimationScoring:
    def test_identical_animations_ceiling(self):
        anim = make_animation(12)
        items = [svg_item(0, anim, anim, task="video_to_sani")]
        report = score_animation(items, n_frames=4, size=128)
        assert report.aggregate["psnr"] == 100.0

    def test_static_prediction_below_ceiling(self):
        anim = (
            '<svg viewBox="0 0 128 128"><circle cx="20" cy="64" r="10" fill="#000">'
            '<animate attributeName="cx" from="20" to="108" dur="1s" fill="freeze"/>'
            "</circle></svg>"
        )
        static = '<svg viewBox="0 0 128 128"><circle cx="20" cy="64" r="10" fill="#000"/></svg>'
        items = [svg_item(0, anim, static, task="video_to_sani")]
        report = score_animation(items, n_frames=4, size=128)
        assert report.aggregate["psnr"] < 100.0

    def test_unrenderable_prediction_all_black(self):
        anim = make_animation(12)
        items = [svg_item(0, anim, "<svg broke", task="video_to_sani")]
        report = score_animation(items, n_frames=4, size=128)
        assert not report.per_item[0].renderable

    def test_frame_count_mismatch(self, tmp_path):
        item = svg_item(0, "unused", WHITE_SVG, task="video_to_sani")
        item.media_paths = {"reference_frames": [str(tmp_path / "a.png")]}
        with pytest.raises(FrameCountMismatch):
            score_animation([item], n_frames=4, size=128)


class TestAggregation:
    def _report(self, task, domain, value):
        return MetricReport(
            task=task, domain=domain,
            per_item=[ItemResult("x", True, {"psnr": value})],
            aggregate={"psnr": value},
        )

    def test_fixed_domain_order(self):
        rows = aggregate_report([
            self._report("edit", "animation", 1.0),
            self._report("edit", "icon", 2.0),
            self._report("edit", "chemistry", 3.0),
        ])["rows"]
        assert [r["domain"] for r in rows] == ["icon", "chemistry", "animation"]

    def test_duplicate_key(self):
        with pytest.raises(DuplicateKey):
            aggregate_report([
                self._report("edit", "icon", 1.0),
                self._report("edit", "icon", 2.0),
            ])

    def test_deterministic_and_formattable(self):
        reports = [self._report("edit", "icon", 1.23456)]
        a = json.dumps(aggregate_report(reports), sort_keys=True)
        b = json.dumps(aggregate_report(reports), sort_keys=True)
        assert a == b
        table = format_table(aggregate_report(reports))
        assert "icon" in table and "edit" in table

    def test_count_tokens_matches_compression_stats(self, canonical_corpus, svg_tokenizer):
        texts = canonical_corpus[:5]
        mean = count_tokens(texts, svg_tokenizer)
        stats = compression_stats(texts, svg_tokenizer)
        assert mean == pytest.approx(stats.mean_after)

    def test_count_tokens_empty(self, svg_tokenizer):
        assert count_tokens([], svg_tokenizer) == 0.0


class TestCli:
    @pytest.fixture()
    def bench_files(self, tmp_path):
        texts = generate_canonical_corpus(3, seed=21)
        man = write_jsonl(tmp_path / "m.jsonl", [
            {"id": f"i{k}", "task": "edit", "domain": "icon",
             "prompt": "p", "reference": t}
            for k, t in enumerate(texts)
        ])
        pred = write_jsonl(tmp_path / "p.jsonl", [
            {"id": f"i{k}", "output": t} for k, t in enumerate(texts)
        ])
        return man, pred, tmp_path

    def test_bench_run_success(self, bench_files):
        man, pred, tmp = bench_files
        runner = CliRunner()
        result = runner.invoke(cli_main, [
            "bench", "run", "--manifest", str(man), "--pred", str(pred),
            "--task", "edit", "--out", str(tmp / "report"), "--size", "128",
        ])
        assert result.exit_code == 0, result.output
        agg = json.loads((tmp / "report" / "aggregate.json").read_text())
        assert agg["metrics"]["ssim"] == 1.0
        assert agg["metrics"]["psnr"] == 100.0
        assert (tmp / "report" / "items.jsonl").exists()
        assert (tmp / "report" / "frames" / "manifest.json").exists()

    def test_bench_run_schema_violation_exit_2(self, tmp_path):
        man = write_jsonl(tmp_path / "bad.jsonl", [
            {"id": "a", "task": "bogus", "domain": "icon", "prompt": "p", "reference": "x"},
        ])
        pred = write_jsonl(tmp_path / "p.jsonl", [{"id": "a", "output": "y"}])
        runner = CliRunner()
        result = runner.invoke(cli_main, [
            "bench", "run", "--manifest", str(man), "--pred", str(pred),
            "--out", str(tmp_path / "r"),
        ])
        assert result.exit_code == 2

    def test_bench_run_deterministic(self, bench_files):
        man, pred, tmp = bench_files
        runner = CliRunner()
        for out in ("r1", "r2"):
            result = runner.invoke(cli_main, [
                "bench", "run", "--manifest", str(man), "--pred", str(pred),
                "--task", "edit", "--out", str(tmp / out), "--size", "128",
            ])
            assert result.exit_code == 0
        a = (tmp / "r1" / "aggregate.json").read_bytes()
        b = (tmp / "r2" / "aggregate.json").read_bytes()
        assert a == b

    def test_normalize_cli(self, tmp_path):
        src = tmp_path / "in.svg"
        src.write_text('<svg viewBox="0 0 256 256"><!-- x --><circle cx="128" cy="128" r="64"/></svg>')
        runner = CliRunner()
        result = runner.invoke(cli_main, [
            "normalize", str(src), "--out", str(tmp_path / "out.svg"),
        ])
        assert result.exit_code == 0, result.output
        out = (tmp_path / "out.svg").read_text()
        assert 'viewBox="0 0 128 128"' in out and 'cx="64"' in out
        record = json.loads(result.output)
        assert record["bytes_after"] <= record["bytes_before"]
        assert record["renderable"] is True

    def test_normalize_batch_log(self, tmp_path):
        src = tmp_path / "corpus"
        src.mkdir()
        for i in range(3):
            (src / f"f{i}.svg").write_text(
                f'<svg viewBox="0 0 256 256"><circle cx="{64+i}" cy="64" r="16"/></svg>'
            )
        runner = CliRunner()
        result = runner.invoke(cli_main, [
            "normalize", str(src), "--out", str(tmp_path / "outdir"),
        ])
        assert result.exit_code == 0, result.output
        log = (tmp_path / "outdir" / "normalize_log.jsonl").read_text().splitlines()
        assert len(log) == 3
        assert all({"bytes_before", "bytes_after", "renderable"} <= set(json.loads(l)) for l in log)

    def test_render_and_metric_cli(self, tmp_path):
        svg = tmp_path / "a.svg"
        svg.write_text('<svg viewBox="0 0 128 128"><rect width="128" height="128" fill="#000"/></svg>')
        runner = CliRunner()
        result = runner.invoke(cli_main, [
            "render", str(svg), "--size", "64", "--out", str(tmp_path / "a.png"),
        ])
        assert result.exit_code == 0, result.output
        result = runner.invoke(cli_main, [
            "metric", "--ref", str(tmp_path / "a.png"), "--pred", str(tmp_path / "a.png"),
            "--ssim", "--psnr",
        ])
        assert result.exit_code == 0
        out = json.loads(result.output)
        assert out["ssim"] == 1.0 and out["psnr"] == 100.0

    def test_render_frames_cli(self, tmp_path):
        svg = tmp_path / "anim.svg"
        svg.write_text(make_animation(5))
        runner = CliRunner()
        result = runner.invoke(cli_main, [
            "render", str(svg), "--size", "64", "--frames", "4",
            "--out-dir", str(tmp_path / "fr"),
        ])
        assert result.exit_code == 0, result.output
        assert sorted(p.name for p in (tmp_path / "fr").iterdir()) == [
            f"frame_{k}.png" for k in range(4)
        ]

    def test_tokenize_cli(self, tmp_path):
        svg = tmp_path / "t.svg"
        svg.write_text('<svg viewBox="0 0 128 128"><circle cx="64" cy="64" r="9"/></svg>')
        runner = CliRunner()
        result = runner.invoke(cli_main, ["tokenize", str(svg), "--stats"])
        assert result.exit_code == 0, result.output
        stats = json.loads(result.output)
        assert stats["special_tokens"] < stats["base_only_tokens"]

    def test_init_embed_cli(self, tmp_path, base_tokenizer):
        base_tokenizer.save(tmp_path / "v.json", tmp_path / "e.bin")
        runner = CliRunner()
        result = runner.invoke(cli_main, [
            "init-embed", "--base-vocab", str(tmp_path / "v.json"),
            "--base-emb", str(tmp_path / "e.bin"),
            "--out", str(tmp_path / "rows.bin"),
        ])
        assert result.exit_code == 0, result.output
        import numpy as np

        rows = np.fromfile(tmp_path / "rows.bin", dtype="<f4")
        assert rows.size == 464 * base_tokenizer.dim

    def test_edit_synth_cli(self, tmp_path):
        corpus_dir = tmp_path / "corpus"
        corpus_dir.mkdir()
        for i, t in enumerate(generate_canonical_corpus(2, seed=9)):
            (corpus_dir / f"icon{i}.svg").write_text(t)
        runner = CliRunner()
        result = runner.invoke(cli_main, [
            "edit-synth", str(corpus_dir), "--out", str(tmp_path / "pairs.jsonl"),
            "--ops-per-doc", "4", "--seed", "2",
        ])
        assert result.exit_code == 0, result.output
        lines = (tmp_path / "pairs.jsonl").read_text().splitlines()
        assert len(lines) >= 6
        record = json.loads(lines[0])
        assert "instruction" in record and "edited_svg" in record
