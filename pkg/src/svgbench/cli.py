"""Command-line interface.

Subcommands: normalize, tokenize, init-embed, edit-synth, render, metric,
bench run, make-corpus.  See README for examples.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .bench.manifest import (
    EmptyManifest,
    ManifestError,
    attach_predictions,
    load_manifest,
    load_predictions,
)
from .bench.report import write_report
from .bench.scoring import (
    MetricReport,
    count_tokens,
    count_tokens_base,
    score_animation,
    score_mcq,
    score_pixels,
)
from .core.parser import MalformedXml, NotSvg, parse_svg
from .core.serializer import serialize_svg
from .corpus import generate_animation_corpus, generate_corpus
from .edits import samples_to_jsonl, synthesize_pairs
from .metrics import (
    RasterImage,
    psnr as psnr_fn,
    rasterize,
    rasterize_animation,
    ssim as ssim_fn,
    mse as mse_fn,
    validate_renderable,
)
from .normalize import NoExtent, DegenerateExtent, NormalizeConfig, pipeline
from .render.png import read_png, write_png
from .tokenizer import (
    BaseTokenizerView,
    SvgTokenizer,
    build_vocab,
    compression_stats,
    init_embeddings,
    synthetic_base,
    write_embeddings,
)

import numpy as np


@click.group()
def main() -> None:
    """SVG canonicalization, tokenization, edit synthesis and evaluation."""


# ---------------------------------------------------------------------------
# normalize
# ---------------------------------------------------------------------------

@main.command()
@click.argument("source", type=click.Path(exists=True, path_type=Path))
@click.option("--out", "out_path", type=click.Path(path_type=Path), required=True)
@click.option("--canvas", type=float, default=128.0, show_default=True)
@click.option("--precision", type=int, default=2, show_default=True)
@click.option("--no-simplify", is_flag=True, default=False)
@click.option("--log", "log_path", type=click.Path(path_type=Path), default=None,
              help="JSONL log (batch mode defaults to <out>/normalize_log.jsonl)")
def normalize(source: Path, out_path: Path, canvas: float, precision: int,
              no_simplify: bool, log_path: Path | None) -> None:
    """Canonicalize one file or every *.svg under a directory."""
    cfg = NormalizeConfig(target_canvas=(canvas, canvas), precision=precision)
    if source.is_dir():
        files = sorted(source.rglob("*.svg"))
        out_path.mkdir(parents=True, exist_ok=True)
        log_file = log_path or (out_path / "normalize_log.jsonl")
        records = []
        for f in files:
            record = _normalize_one(f, out_path / f.name, cfg, not no_simplify)
            records.append(record)
        with open(log_file, "w", encoding="utf-8") as fh:
            for record in records:
                fh.write(json.dumps(record, sort_keys=True) + "\n")
        ok = sum(1 for r in records if "error" not in r)
        click.echo(f"normalized {ok}/{len(records)} files -> {out_path}")
    else:
        record = _normalize_one(source, out_path, cfg, not no_simplify)
        if "error" in record:
            raise click.ClickException(record["error"])
        click.echo(json.dumps(record, sort_keys=True))


def _normalize_one(src: Path, dst: Path, cfg: NormalizeConfig, simplify: bool) -> dict:
    text = src.read_text(encoding="utf-8")
    record: dict = {"file": src.name, "bytes_before": len(text.encode("utf-8"))}
    try:
        doc = parse_svg(text)
        result = pipeline(doc, cfg, run_simplify=simplify)
    except (MalformedXml, NotSvg, NoExtent, DegenerateExtent) as exc:
        record["error"] = f"{type(exc).__name__}: {exc}"
        return record
    out_text = serialize_svg(result, precision=cfg.precision)
    dst.parent.mkdir(parents=True, exist_ok=True)
    dst.write_text(out_text, encoding="utf-8")
    record["bytes_after"] = len(out_text.encode("utf-8"))
    record["renderable"] = validate_renderable(result)
    return record


# ---------------------------------------------------------------------------
# tokenize / init-embed
# ---------------------------------------------------------------------------

def _load_base(base_vocab: Path | None, base_emb: Path | None) -> BaseTokenizerView:
    if base_vocab is not None:
        return BaseTokenizerView.from_files(base_vocab, base_emb)
    return synthetic_base()


@main.command()
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@click.option("--stats", is_flag=True, help="print compression statistics")
@click.option("--ids", "show_ids", is_flag=True, help="print raw token ids")
@click.option("--pretty", is_flag=True, help="print one token per line")
@click.option("--base-vocab", type=click.Path(exists=True, path_type=Path))
@click.option("--base-emb", type=click.Path(exists=True, path_type=Path))
def tokenize(file: Path, stats: bool, show_ids: bool, pretty: bool,
             base_vocab: Path | None, base_emb: Path | None) -> None:
    """Encode an SVG file with the special vocabulary."""
    base = _load_base(base_vocab, base_emb)
    tok = SvgTokenizer(base, build_vocab())
    text = file.read_text(encoding="utf-8")
    seq = tok.encode(text)
    if stats:
        st = compression_stats([text], tok)
        click.echo(json.dumps({
            "base_only_tokens": st.per_file[0][0],
            "special_tokens": st.per_file[0][1],
            "ratio": round(st.ratio, 4),
        }, sort_keys=True))
        return
    if pretty:
        offset = tok.id_offset
        tokens = tok.vocab.all_tokens
        for tid in seq.ids:
            if tid >= offset:
                click.echo(f"{tid}\t[special]\t{tokens[tid - offset]!r}")
            else:
                by_id = {i: s for s, i in base.vocab.items()}
                click.echo(f"{tid}\t[base]\t{by_id[tid]!r}")
        return
    if show_ids:
        click.echo(" ".join(str(i) for i in seq.ids))
        return
    click.echo(f"{len(seq)} tokens (base-only: {tok.count_base_only(text)})")


@main.command("init-embed")
@click.option("--base-vocab", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--base-emb", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path), required=True)
@click.option("--index", "index_path", type=click.Path(path_type=Path), default=None)
def init_embed(base_vocab: Path, base_emb: Path, out_path: Path,
               index_path: Path | None) -> None:
    """Subword-averaged embedding rows for the 464 special tokens."""
    base = BaseTokenizerView.from_files(base_vocab, base_emb)
    inits = init_embeddings(build_vocab(), base)
    index_file = index_path or out_path.with_suffix(".index.json")
    write_embeddings(inits, out_path, index_file)
    click.echo(f"wrote {len(inits)} rows x dim {base.dim} -> {out_path}")


# ---------------------------------------------------------------------------
# edit-synth
# ---------------------------------------------------------------------------

@main.command("edit-synth")
@click.argument("corpus_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--out", "out_path", type=click.Path(path_type=Path), required=True)
@click.option("--ops-per-doc", type=int, default=8, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def edit_synth(corpus_dir: Path, out_path: Path, ops_per_doc: int, seed: int) -> None:
    """Synthesize paired editing samples from canonical SVGs."""
    docs = []
    for f in sorted(corpus_dir.rglob("*.svg")):
        try:
            docs.append(parse_svg(f.read_text(encoding="utf-8")))
        except (MalformedXml, NotSvg) as exc:
            click.echo(f"skipping {f.name}: {exc}", err=True)
    if not docs:
        raise click.ClickException("no parseable SVG files in corpus directory")
    samples = synthesize_pairs(docs, ops_per_doc, seed)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(samples_to_jsonl(samples), encoding="utf-8")
    click.echo(f"wrote {len(samples)} samples -> {out_path}")


# ---------------------------------------------------------------------------
# render / metric
# ---------------------------------------------------------------------------

@main.command()
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@click.option("--size", type=int, default=512, show_default=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None)
@click.option("--frames", type=int, default=None, help="sample an animation")
@click.option("--duration", type=float, default=None)
@click.option("--out-dir", type=click.Path(path_type=Path), default=None)
def render(file: Path, size: int, out_path: Path | None, frames: int | None,
           duration: float | None, out_dir: Path | None) -> None:
    """Rasterize an SVG (or sample an animation into PNG frames)."""
    text = file.read_text(encoding="utf-8")
    if frames is not None:
        from .metrics import rasterize_animation_text

        outdir = out_dir or Path("frames")
        outdir.mkdir(parents=True, exist_ok=True)
        outcome = rasterize_animation_text(text, size, frames, duration)
        for k, frame in enumerate(outcome):
            write_png(outdir / f"frame_{k}.png", frame.image.data)
        penalized = sum(1 for f in outcome if f.penalized)
        click.echo(f"wrote {frames} frames -> {outdir} ({penalized} penalized)")
        return
    from .metrics import rasterize_text

    outcome = rasterize_text(text, size)
    target = out_path or file.with_suffix(".png")
    write_png(target, outcome.image.data)
    status = "penalized (black)" if outcome.penalized else "ok"
    click.echo(f"{status} -> {target}")


@main.command()
@click.option("--ref", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--pred", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--ssim", "want_ssim", is_flag=True)
@click.option("--psnr", "want_psnr", is_flag=True)
@click.option("--mse", "want_mse", is_flag=True)
def metric(ref: Path, pred: Path, want_ssim: bool, want_psnr: bool,
           want_mse: bool) -> None:
    """Pixel metrics between two PNGs; defaults to ssim+psnr."""
    a = RasterImage(read_png(ref)[..., :3].copy())
    b = RasterImage(read_png(pred)[..., :3].copy())
    if not (want_ssim or want_psnr or want_mse):
        want_ssim = want_psnr = True
    out = {}
    if want_ssim:
        out["ssim"] = round(ssim_fn(a, b), 6)
    if want_psnr:
        out["psnr"] = round(psnr_fn(a, b), 6)
    if want_mse:
        out["mse"] = round(mse_fn(a, b), 6)
    click.echo(json.dumps(out, sort_keys=True))


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

@main.group()
def bench() -> None:
    """Benchmark scoring."""


@bench.command("run")
@click.option("--manifest", "manifest_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--pred", "pred_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--task", type=str, default=None, help="filter manifest by task")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
@click.option("--frames", type=int, default=8, show_default=True)
@click.option("--size", type=int, default=512, show_default=True)
@click.option("--base-vocab", type=click.Path(exists=True, path_type=Path))
@click.option("--base-emb", type=click.Path(exists=True, path_type=Path))
def bench_run(manifest_path: Path, pred_path: Path, task: str | None,
              out_dir: Path, frames: int, size: int,
              base_vocab: Path | None, base_emb: Path | None) -> None:
    """Score a prediction file against a manifest; exit 2 on schema errors."""
    try:
        manifest = load_manifest(manifest_path, task)
        predictions = load_predictions(pred_path)
    except (ManifestError, EmptyManifest) as exc:
        click.echo(f"manifest error: {exc}", err=True)
        sys.exit(2)
    attach_predictions(manifest, predictions)

    items = manifest.items
    frames_dir = out_dir / "frames"
    n_frames = 1
    if manifest.task == "mcq":
        report = score_mcq(items, manifest.domain)
    elif manifest.task == "description":
        report = _record_descriptions(items, manifest.domain, out_dir)
    elif manifest.task in ("edit", "text_to_svg", "image_to_svg"):
        report = score_pixels(
            items, manifest.task, manifest.domain, size=size, export_dir=frames_dir
        )
    elif manifest.task in ("text_to_sani", "video_to_sani"):
        n_frames = frames
        report = score_animation(
            items, manifest.domain, n_frames=frames, size=size, export_dir=frames_dir
        )
    else:  # pragma: no cover - manifest validation rejects unknown tasks
        raise click.ClickException(f"unhandled task {manifest.task}")

    if manifest.task != "mcq":
        base = _load_base(base_vocab, base_emb)
        tok = SvgTokenizer(base, build_vocab())
        texts = [i.prediction for i in items if i.prediction is not None]
        report.token_stats = {
            "tokens": count_tokens(texts, tok),
            "tokens_base": count_tokens_base(texts, tok),
        }

    write_report(report, out_dir, size=size, n_frames=n_frames)
    click.echo(json.dumps({
        "task": report.task,
        "domain": report.domain,
        "n_items": report.n_items,
        "metrics": {k: round(v, 6) for k, v in sorted(report.aggregate.items())},
    }, sort_keys=True))


def _record_descriptions(items, domain, out_dir: Path) -> MetricReport:
    """Description answers are persisted for external judging, not scored."""
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "descriptions.jsonl", "w", encoding="utf-8") as fh:
        for item in items:
            fh.write(json.dumps(
                {"id": item.id, "prompt": item.prompt, "output": item.prediction},
                sort_keys=True, ensure_ascii=False) + "\n")
    from .bench.scoring import ItemResult

    per_item = [ItemResult(i.id, renderable=True, scores={}) for i in items]
    return MetricReport(
        task="description", domain=domain, per_item=per_item, aggregate={}
    )


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------

@main.command("make-corpus")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
@click.option("--count", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--canonical", is_flag=True, help="run the pipeline on each file")
@click.option("--animations", is_flag=True, help="emit SMIL animations instead")
def make_corpus(out_dir: Path, count: int, seed: int, canonical: bool,
                animations: bool) -> None:
    """Write a synthetic icon (or animation) corpus."""
    out_dir.mkdir(parents=True, exist_ok=True)
    if animations:
        texts = generate_animation_corpus(count, seed)
    elif canonical:
        from .corpus import generate_canonical_corpus

        texts = generate_canonical_corpus(count, seed)
    else:
        texts = generate_corpus(count, seed)
    for i, text in enumerate(texts):
        (out_dir / f"{'anim' if animations else 'icon'}_{i:05d}.svg").write_text(
            text, encoding="utf-8"
        )
    click.echo(f"wrote {count} files -> {out_dir}")


if __name__ == "__main__":
    main()
