"""Command-line interface.

Exit codes: 0 success, 2 configuration error (bad arguments or config),
3 data error (defective manifests, images, or checkpoints).
"""

import json
import sys
from pathlib import Path

import click

from .errors import ConfigError, DataError
from .evaluation import ExperimentConfig, render_report, run_experiment
from .fusion import DCF_PRESETS, FusionConfig, ensemble_predict


def _run(fn):
    try:
        fn()
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    except DataError as exc:
        click.echo(f"data error: {exc}", err=True)
        sys.exit(3)


@click.group()
def main():
    """Glyph recognition toolkit: datasets, descriptors, training, fusion."""


@main.group()
def dataset():
    """Dataset inspection, splitting, and synthesis."""


@dataset.command("stats")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--as-json", is_flag=True, help="emit machine-readable JSON")
def dataset_stats(manifest_path, as_json):
    """Class histogram and split totals for a manifest."""

    def body():
        from .dataset import class_histogram, load_manifest

        m = load_manifest(manifest_path)
        hist = class_histogram(m)
        splits = {split: len(m.subset(split)) for split in ("train", "test", "unassigned")}
        if as_json:
            click.echo(json.dumps({"histogram": hist.as_dict(), "splits": splits, "samples": len(m.samples)}))
            return
        click.echo(f"samples: {len(m.samples)}  classes: {hist.total_classes}")
        click.echo(f"splits: {splits}")
        for b in hist.bins:
            click.echo(f"  {b.label:>7}: {b.count}")
        click.echo(f"classes with <=20 samples: {hist.classes_le20_fraction * 100:.1f}%")
        click.echo(f"classes with <5 samples: {hist.classes_lt5}")

    _run(body)


@dataset.command("split")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--test-fraction", type=float, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), default=None, help="defaults to rewriting in place")
def dataset_split(manifest_path, test_fraction, seed, out):
    """Assign a seeded stratified train/test split."""

    def body():
        from .dataset import load_manifest, save_manifest, stratified_split

        if not 0.0 < test_fraction < 1.0:
            raise ConfigError("--test-fraction must be in (0, 1)")
        m = load_manifest(manifest_path)
        m = stratified_split(m, test_fraction, seed)
        target = out or manifest_path
        save_manifest(m, target)
        click.echo(
            f"wrote {target}: {len(m.subset('train'))} train / {len(m.subset('test'))} test"
        )

    _run(body)


@dataset.command("synth")
@click.option("--classes", type=int, required=True)
@click.option("--per-class", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--size", type=int, default=64, show_default=True)
@click.option("--out", type=click.Path(), required=True)
def dataset_synth(classes, per_class, seed, size, out):
    """Render a procedural glyph dataset."""

    def body():
        from .dataset import generate_synthetic

        if classes < 2 or per_class < 1:
            raise ConfigError("need --classes >= 2 and --per-class >= 1")
        m = generate_synthetic(classes, per_class, size, seed, out)
        click.echo(f"wrote {len(m.samples)} samples, {len(m.classes)} classes under {out}")

    _run(body)


@main.command("extract")
@click.argument("descriptor", type=click.Choice(["lbp", "lgbp"]))
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--P", "-p", "p_", type=int, default=8, show_default=True, help="neighbor count")
@click.option("--R", "-r", "r_", type=float, default=1.0, show_default=True, help="ring radius")
@click.option("--grid", default="4x4", show_default=True)
@click.option("--split", default=None, help="restrict to one split")
@click.option("--out", type=click.Path(), required=True, help=".npz output")
def extract(descriptor, manifest_path, p_, r_, grid, split, out):
    """Compute descriptor features for every (selected) sample."""

    def body():
        import numpy as np

        from .dataset import load_manifest, load_png
        from .evaluation import make_descriptor

        m = load_manifest(manifest_path)
        extract_fn, fingerprint = make_descriptor(
            descriptor, {"P": p_, "R": r_, "grid": grid}
        )
        samples = m.samples if split is None else m.subset(split)
        feats, ids, labels = [], [], []
        for s in samples:
            feats.append(extract_fn(load_png(m.resolve(s))))
            ids.append(s.id)
            labels.append(m.class_index(s.character) if s.labeled else -1)
        np.savez_compressed(
            out,
            features=np.stack(feats) if feats else np.zeros((0, 0)),
            ids=np.array(ids),
            labels=np.array(labels, dtype=np.int64),
            descriptor_id=fingerprint,
        )
        click.echo(f"{len(feats)} vectors of dim {feats[0].size if feats else 0} -> {out}")

    _run(body)


@main.command("train")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--arch", required=True,
              type=click.Choice(["cnn7", "cnn9", "cnn11", "lenet", "alexnet", "resnet34"]))
@click.option("--epochs", type=int, default=100, show_default=True)
@click.option("--batch-size", type=int, default=64, show_default=True)
@click.option("--lr", type=float, default=0.001, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--width-scale", type=float, default=1.0, show_default=True)
@click.option("--input-size", type=int, default=None)
@click.option("--out", type=click.Path(), required=True, help="checkpoint path")
def train(manifest_path, arch, epochs, batch_size, lr, seed, width_scale, input_size, out):
    """Train one architecture on the manifest's train split."""

    def body():
        from .dataset import load_manifest
        from .nn import ModelConfig, TrainConfig, save_checkpoint, train_model

        m = load_manifest(manifest_path)
        cfg_m = ModelConfig(
            arch_id=arch,
            num_classes=len(m.classes),
            input_size=input_size,
            width_scale=width_scale,
        )
        cfg_t = TrainConfig(epochs=epochs, batch_size=batch_size, learning_rate=lr, seed=seed)
        trained = train_model(cfg_m, m, cfg_t)
        save_checkpoint(trained, out)
        last = trained.history[-1] if trained.history else {"loss": float("nan"), "accuracy": 0.0}
        click.echo(
            f"{arch}: {epochs} epochs, train loss {last['loss']:.4f}, "
            f"train acc {last['accuracy']:.4f} -> {out}"
        )

    _run(body)


@main.command("fuse")
@click.option("--preset", required=True, type=click.Choice(sorted(DCF_PRESETS)))
@click.option("--members", "member_paths", multiple=True, required=True,
              type=click.Path(exists=True), help="checkpoints in roster order")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--method", default="soft_vote", show_default=True,
              type=click.Choice(["soft_vote", "naive_bayes", "hard_vote"]))
@click.option("--split", default="test", show_default=True)
def fuse(preset, member_paths, manifest_path, method, split):
    """Evaluate a fusion preset over trained member checkpoints."""

    def body():
        import numpy as np

        from .dataset import load_manifest
        from .errors import MissingMember
        from .evaluation import evaluate
        from .nn import load_checkpoint, predict_proba

        roster = DCF_PRESETS[preset]
        if len(member_paths) != len(roster):
            raise MissingMember(
                f"{preset} needs {len(roster)} checkpoints ({', '.join(roster)}), got {len(member_paths)}"
            )
        members = {arch: load_checkpoint(path) for arch, path in zip(roster, member_paths)}
        cfg = FusionConfig(method=method, members=tuple(roster))
        m = load_manifest(manifest_path)

        def fused_label(img):
            outputs = {arch: predict_proba(model, img) for arch, model in members.items()}
            return ensemble_predict(cfg, outputs)[0]

        metrics = evaluate(fused_label, m, split)
        click.echo(f"{preset} ({method}) accuracy: {metrics.accuracy_percent}% on {metrics.n_evaluated} samples")

    _run(body)


@main.command("eval")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--method", required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--params", "params_json", default="{}", help="method params as JSON")
@click.option("--report", "report_style", default=None,
              type=click.Choice(["table2", "table3", "table5"]))
@click.option("--runs-dir", type=click.Path(), default="runs", show_default=True)
def eval_cmd(manifest_path, method, seed, params_json, report_style, runs_dir):
    """Run one experiment end to end and print its metrics."""

    def body():
        try:
            params = json.loads(params_json)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--params is not valid JSON: {exc}") from exc
        cfg = ExperimentConfig(manifest=str(manifest_path), method=method, seed=seed, params=params)
        result = run_experiment(cfg, runs_root=runs_dir)
        click.echo(f"accuracy: {result.metrics.accuracy_percent}%  artifacts: {result.out_dir}")
        if report_style:
            bundle = render_report([(method, result.metrics)], report_style)
            click.echo(bundle.markdown, nl=False)

    _run(body)


@main.command("serve")
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--models-dir", type=click.Path(), default=None, help="directory of .ckpt files")
@click.option("--ui-dir", type=click.Path(), default=None, help="static UI bundle to mount at /")
def serve(port, host, manifest_path, models_dir, ui_dir):
    """Start the annotation/prediction HTTP service."""

    def body():
        import uvicorn

        from .service import create_app

        app = create_app(manifest_path, models_dir=models_dir, ui_dir=ui_dir)
        uvicorn.run(app, host=host, port=port, log_level="info")

    _run(body)


@main.command("bench")
@click.option("--repeats", type=int, default=3, show_default=True)
def bench(repeats):
    """Compare the compiled and numpy kernel backends."""

    def body():
        from .benchmark import run_benchmark

        for line in run_benchmark(repeats=repeats):
            click.echo(line)

    _run(body)


if __name__ == "__main__":
    main()
