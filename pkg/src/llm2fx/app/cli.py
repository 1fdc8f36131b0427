"""Command-line interface.

Every subcommand is reproducible: the same flags and seed produce
byte-identical outputs. Failures surface as one JSON line on stderr,
{"error": <code>, "message": ...}, with exit status 1; usage mistakes
exit 2 (standard click behavior).
"""

from __future__ import annotations

import functools
import json
import logging
import sys
from pathlib import Path

import click

from ..audio import load_wav, save_wav
from ..dataset import (
    make_fixture,
    prepare_corpus,
    write_fixture_wavs,
)
from ..errors import Llm2FxError, MissingCorpus
from ..evalkit import (
    compute_bounds,
    macro_bounds,
    run_eval,
    write_bounds_csv,
    write_bounds_json,
    write_eval_csv,
    write_eval_json,
)
from ..eq import apply_eq, apply_graphic_eq
from ..features import extract_features
from ..params import EqParams, GraphicEqParams, params_to_json
from ..reverb import apply_reverb
from ..textgen import (
    ContextConfig,
    GenerationRequest,
    MockBackend,
    generate,
    load_fewshot,
    write_results_jsonl,
)
from .config import AppConfig, load_config
from .schemas import load_params_file

log = logging.getLogger(__name__)

MINI_DATA = Path(__file__).resolve().parent.parent / "dataset" / "data" / "mini"


def _fail_on_error(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except Llm2FxError as exc:
            click.echo(json.dumps({"error": exc.code, "message": str(exc)}), err=True)
            sys.exit(1)
    return wrapper


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="JSON settings file; env vars override it.")
@click.pass_context
def main(ctx: click.Context, config_path: str | None) -> None:
    """Timbre words to effect parameters: generate, render, evaluate."""
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    ctx.obj = load_config(config_path)


@main.command()
@click.option("--word", required=True, help="Timbre descriptor, e.g. 'warm'.")
@click.option("--instrument", required=True, help="e.g. 'guitar'.")
@click.option("--fx", "fx_type", required=True, type=click.Choice(["eq", "reverb"]))
@click.option("--fewshot", is_flag=True, help="Include the shipped example pairs.")
@click.option("--code", "with_code", is_flag=True, help="Include the effect code listing.")
@click.option("--features", "features_wav", type=click.Path(exists=True), default=None,
              help="Dry WAV whose features go into the prompt.")
@click.option("--trials", default=1, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", type=click.Path(), default="out", show_default=True)
@click.pass_obj
@_fail_on_error
def generate_cmd(config: AppConfig, word: str, instrument: str, fx_type: str,
                 fewshot: bool, with_code: bool, features_wav: str | None,
                 trials: int, seed: int, out_dir: str) -> None:
    """Predict parameters; writes params_NNN.json per trial plus a
    transcript JSONL."""
    features = None
    if features_wav is not None:
        features = extract_features(load_wav(features_wav)[0])
    context = ContextConfig(
        include_features=features is not None,
        features=features,
        include_code=with_code,
        fewshot=load_fewshot(fx_type) if fewshot else (),
    )
    req = GenerationRequest(timbre_word=word, instrument=instrument, fx_type=fx_type,
                            context=context, trials=trials, seed=seed)
    results = generate(req, config.backend, concurrency=config.parallelism)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_results_jsonl(out / "transcript.jsonl", req, results)
    ok = 0
    for r in results:
        if r.params is None:
            log.warning("trial %d failed: %s", r.trial, r.error)
            continue
        ok += 1
        (out / f"params_{r.trial:03d}.json").write_text(params_to_json(r.params) + "\n")
    click.echo(f"{ok}/{trials} trials parsed; outputs in {out}")
    if ok == 0:
        sys.exit(1)


main.add_command(generate_cmd, name="generate")


@main.command()
@click.option("--in", "in_wav", required=True, type=click.Path(exists=True))
@click.option("--params", "params_file", required=True, type=click.Path(exists=True))
@click.option("--out", "out_wav", required=True, type=click.Path())
@click.option("--seed", default=0, show_default=True, help="Reverb noise seed.")
@_fail_on_error
def render(in_wav: str, params_file: str, out_wav: str, seed: int) -> None:
    """Apply a params file (schema auto-detected) to a WAV."""
    audio, encoding = load_wav(in_wav)
    params = load_params_file(params_file)
    if isinstance(params, EqParams):
        wet = apply_eq(audio, params)
    elif isinstance(params, GraphicEqParams):
        wet = apply_graphic_eq(audio, params)
    else:
        wet = apply_reverb(audio, params, seed=seed)
    save_wav(out_wav, wet, encoding=encoding)
    if wet.clipped:
        log.warning("output rescaled to avoid clipping")
    click.echo(f"wrote {out_wav}")


@main.command()
@click.option("--wav", "in_wav", required=True, type=click.Path(exists=True))
@_fail_on_error
def features(in_wav: str) -> None:
    """Print the feature block for a WAV."""
    from ..features import serialize_features

    click.echo(serialize_features(extract_features(load_wav(in_wav)[0])))


def _load_corpus(corpus_dir: str | None, mini: bool, seed: int,
                 no_probe: bool, threshold_eq: int | None,
                 threshold_reverb: int | None, sample_rate: int):
    if mini:
        corpus_dir = str(MINI_DATA)
        thresholds = {"eq": 8, "reverb": 8}
    elif corpus_dir is None:
        raise MissingCorpus("pass --corpus DIR or --mini")
    else:
        thresholds = {}
    if threshold_eq is not None:
        thresholds["eq"] = threshold_eq
    if threshold_reverb is not None:
        thresholds["reverb"] = threshold_reverb
    rules = Path(corpus_dir) / "rules.txt"
    if not rules.exists():
        raise MissingCorpus(f"{rules} not found")
    corpus, manifest = prepare_corpus(
        corpus_dir, rules, seed=seed, thresholds=thresholds or None,
        probe=not no_probe, sample_rate=sample_rate)
    return corpus, manifest


_corpus_options = [
    click.option("--corpus", "corpus_dir", type=click.Path(exists=True), default=None,
                 help="Directory with eq.csv/reverb.csv and rules.txt."),
    click.option("--mini", is_flag=True, help="Use the packaged sample corpus."),
    click.option("--no-probe", is_flag=True, help="Skip the probe filter stage."),
    click.option("--threshold-eq", type=int, default=None),
    click.option("--threshold-reverb", type=int, default=None),
    click.option("--sample-rate", default=44100, show_default=True),
    click.option("--seed", default=0, show_default=True),
    click.option("--out", "out_dir", type=click.Path(), default="reports",
                 show_default=True),
]


def _with_corpus_options(fn):
    for option in reversed(_corpus_options):
        fn = option(fn)
    return fn


@main.command(name="eval")
@click.option("--fx", "fx_types", default="eq,reverb", show_default=True)
@click.option("--instruments", default="guitar", show_default=True)
@click.option("--trials", default=10, show_default=True)
@click.option("--replay", type=click.Choice(["groundtruth", "random"]), default=None,
              help="Drive the mock from ground truth or uniform draws.")
@_with_corpus_options
@click.pass_obj
@_fail_on_error
def eval_cmd(config: AppConfig, fx_types: str, instruments: str, trials: int,
             replay: str | None, corpus_dir: str | None, mini: bool, no_probe: bool,
             threshold_eq: int | None, threshold_reverb: int | None,
             sample_rate: int, seed: int, out_dir: str) -> None:
    """Score generated parameters against the corpus; writes CSV + JSON."""
    corpus, _ = _load_corpus(corpus_dir, mini, seed, no_probe,
                             threshold_eq, threshold_reverb, sample_rate)
    fixture_map = {name: make_fixture(name, sample_rate)
                   for name in instruments.split(",")}
    reference = corpus.runner_reference()

    requests = []
    for fx_type in fx_types.split(","):
        for word in corpus.reference(fx_type):
            for instrument in fixture_map:
                requests.append(GenerationRequest(
                    timbre_word=word, instrument=instrument, fx_type=fx_type,
                    trials=trials, seed=seed))

    backend = config.backend
    if replay == "groundtruth":
        playlist = {
            (word, instrument, fx_type): tuple(sets)
            for (fx_type, word), sets in reference.items()
            for instrument in fixture_map
        }
        backend = MockBackend(playlist=playlist)
    elif replay == "random":
        backend = MockBackend(random_mode=True)

    report = run_eval(requests, backend, fixture_map, reference)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_eval_csv(report, out / "eval.csv")
    write_eval_json(report, out / "eval.json")
    click.echo(f"macro MMD {report.macro_overall:.4f}; reports in {out}")


@main.command()
@click.option("--fx", "fx_type", required=True, type=click.Choice(["eq", "reverb"]))
@click.option("--seeds", default=5, show_default=True)
@click.option("--instrument", default="guitar", show_default=True)
@click.option("--random-count", type=int, default=None,
              help="Random draws per lower-bound comparison.")
@_with_corpus_options
@_fail_on_error
def bounds(fx_type: str, seeds: int, instrument: str, random_count: int | None,
           corpus_dir: str | None, mini: bool, no_probe: bool,
           threshold_eq: int | None, threshold_reverb: int | None,
           sample_rate: int, seed: int, out_dir: str) -> None:
    """Upper/lower MMD reference bounds per word; writes CSV + JSON."""
    corpus, _ = _load_corpus(corpus_dir, mini, seed, no_probe,
                             threshold_eq, threshold_reverb, sample_rate)
    reference = corpus.reference(fx_type)
    if not reference:
        raise MissingCorpus(f"corpus has no {fx_type} split")
    reports = compute_bounds(reference, fx_type, make_fixture(instrument, sample_rate),
                             seeds=seeds, random_count=random_count)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_bounds_csv(reports, out / f"bounds_{fx_type}.csv")
    write_bounds_json(reports, out / f"bounds_{fx_type}.json")
    macro = macro_bounds(reports)
    click.echo(f"U.B {macro.upper_bound:.4f}  L.B {macro.lower_bound:.4f}  "
               f"delta {macro.delta:.4f}; reports in {out}")


@main.group()
def dataset() -> None:
    """Corpus preparation commands."""


@dataset.command()
@click.option("--data", "data_dir", type=click.Path(exists=True), default=None,
              help="Directory with eq.csv / reverb.csv.")
@click.option("--rules", "rules_file", type=click.Path(exists=True), default=None)
@click.option("--mini", is_flag=True)
@click.option("--no-probe", is_flag=True)
@click.option("--threshold-eq", type=int, default=None)
@click.option("--threshold-reverb", type=int, default=None)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", type=click.Path(), default="corpus", show_default=True)
@_fail_on_error
def prep(data_dir: str | None, rules_file: str | None, mini: bool, no_probe: bool,
         threshold_eq: int | None, threshold_reverb: int | None,
         seed: int, out_dir: str) -> None:
    """Run the full pipeline and write the corpus manifest + caches."""
    if mini:
        data_dir = str(MINI_DATA)
        rules_file = rules_file or str(MINI_DATA / "rules.txt")
        thresholds = {"eq": 8, "reverb": 8}
    elif data_dir is None or rules_file is None:
        raise MissingCorpus("pass --data DIR and --rules FILE, or --mini")
    else:
        thresholds = {}
    if threshold_eq is not None:
        thresholds["eq"] = threshold_eq
    if threshold_reverb is not None:
        thresholds["reverb"] = threshold_reverb
    _, manifest = prepare_corpus(
        data_dir, rules_file, out_dir=out_dir, seed=seed,
        thresholds=thresholds or None, probe=not no_probe)
    for fx_type, entry in manifest["fx"].items():
        click.echo(f"{fx_type}: {len(entry['vocabulary'])} words, "
                   f"{entry['total_sets']} sets, "
                   f"avg {entry['avg_sets_per_word']} per word")
    click.echo(f"manifest written to {Path(out_dir) / 'manifest.json'}")


@main.command()
@click.option("--out", "out_dir", type=click.Path(), default="fixtures", show_default=True)
@click.option("--sample-rate", default=44100, show_default=True)
@_fail_on_error
def fixtures(out_dir: str, sample_rate: int) -> None:
    """Write the shipped dry clips as WAV files."""
    paths = write_fixture_wavs(out_dir, sample_rate)
    for name, path in paths.items():
        click.echo(f"{name}: {path}")


@main.command()
@click.option("--host", default=None, help="Override the configured host.")
@click.option("--port", type=int, default=None, help="Override the configured port.")
@click.pass_obj
@_fail_on_error
def serve(config: AppConfig, host: str | None, port: int | None) -> None:
    """Run the HTTP service."""
    from .service import serve as run_service

    if host or port:
        addr = f"{host or config.host}:{port or config.port}"
        from dataclasses import replace
        config = replace(config, listen_addr=addr)
    run_service(config)


if __name__ == "__main__":
    main()
