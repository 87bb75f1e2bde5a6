"""Operator command line: ask one question, run benchmark evaluations,
convert public datasets, and serve the tutoring API.

Exit codes are a stable contract for CI: 0 success, 1 runtime failure,
2 usage error. Every command accepts ``--backend scripted:<fixture.json>``
for fully offline operation; a fixture file is either a JSON array of
responses (ordered mode) or an object with "ordered" and/or "keyed" lists.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalog import PromptCatalog, default_catalog
from .config import AppConfig, ConfigError, load_config
from .datasets import (
    CONVERTERS,
    DatasetError,
    Dataset,
    convert,
    load_gen_dataset,
    load_mc_dataset,
)
from .gateway import Backend, GatewayError, HttpBackend, KeyedResponse, ScriptedBackend
from .harness import ReportFormat, render_report, run_eval
from .pipeline import (
    PipelineConfig,
    PipelineError,
    PipelineKind,
    Transcript,
    serialize_transcript,
    run_pipeline,
)
from .scoring import ScoreMode, load_lexicon
from .tutor import SessionStore, TutorPipeline, TutorError
from .wordnet import WordNetError, load_wordnet_dir

CONFIG_KINDS = {
    "zero-shot": PipelineKind.ZERO_SHOT,
    "zero-shot-cot": PipelineKind.ZERO_SHOT_COT,
    "zero-shot-cot-validity": PipelineKind.ZERO_SHOT_COT_PLUS_VALIDITY,
    "zero-shot-cot-critique": PipelineKind.ZERO_SHOT_COT_PLUS_CRITIQUE,
    "raw-critique": PipelineKind.PLUS_RAW_CRITIQUE,
    "full-edu": PipelineKind.FULL_EDU,
}

REPORT_FORMATS = {
    "plain": ReportFormat.PLAIN_TABLE,
    "csv": ReportFormat.DELIMITED_VALUES,
    "markdown": ReportFormat.MARKUP_TABLE,
}


class CliError(Exception):
    """Runtime failure; reported on stderr with exit code 1."""


def load_scripted_fixture(path: Path) -> ScriptedBackend:
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot read scripted fixture {path}: {exc}") from exc
    if isinstance(raw, list):
        return ScriptedBackend(raw)
    ordered = raw.get("ordered", [])
    keyed = [
        KeyedResponse(match=tuple(entry["match"]), response=entry["response"])
        for entry in raw.get("keyed", [])
    ]
    return ScriptedBackend(ordered, keyed=keyed)


def build_backend(args: argparse.Namespace, config: AppConfig, parser: argparse.ArgumentParser) -> Backend:
    spec = getattr(args, "backend", None)
    if spec:
        scheme, _, rest = spec.partition(":")
        if scheme == "scripted":
            fixture = Path(rest)
            if not fixture.is_file():
                parser.error(f"scripted fixture not found: {fixture}")
            return load_scripted_fixture(fixture)
        if scheme in ("http", "https"):
            return HttpBackend(spec, api_key=config.api_key)
        parser.error(f"unsupported backend spec '{spec}' (use scripted:<path> or an http(s) URL)")
    if config.backend_url:
        return HttpBackend(config.backend_url, api_key=config.api_key)
    parser.error("no backend configured: pass --backend or set backend_url in the config file")
    raise AssertionError("unreachable")


def resolve_catalog(config: AppConfig) -> PromptCatalog:
    if config.template_dir:
        return PromptCatalog(config.template_dir)
    return default_catalog()


def pipeline_config(args: argparse.Namespace, config: AppConfig) -> PipelineConfig:
    kind = CONFIG_KINDS[args.config]
    model_id = args.model or config.model_id
    if kind is PipelineKind.PLUS_RAW_CRITIQUE:
        base = CONFIG_KINDS[args.base] if getattr(args, "base", None) else PipelineKind.ZERO_SHOT_COT
        return PipelineConfig(kind, model_id=model_id, base=base)
    return PipelineConfig(kind, model_id=model_id)


def print_transcript(transcript: Transcript, out=None) -> None:
    out = out if out is not None else sys.stdout
    for position, step in enumerate(transcript.steps, start=1):
        print(f"=== step {position}: {step.agent_id.value} ===", file=out)
        print(step.output, file=out)
        print(file=out)
    print("=== final answer ===", file=out)
    print(transcript.final_answer, file=out)


def cmd_ask(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    config = load_config(args.config_file)
    backend = build_backend(args, config, parser)
    catalog = resolve_catalog(config)
    transcript = run_pipeline(args.question, pipeline_config(args, config), backend, catalog=catalog)
    if args.transcript_out:
        Path(args.transcript_out).write_bytes(serialize_transcript(transcript) + b"\n")
    if args.show_transcript:
        print_transcript(transcript)
    else:
        print(transcript.final_answer)
    return 0


def cmd_eval(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    config = load_config(args.config_file)
    dataset_path = Path(args.dataset)
    if not dataset_path.is_file():
        parser.error(f"dataset not found: {dataset_path}")
    data = dataset_path.read_bytes()
    if args.task == "mc":
        dataset = Dataset(id=dataset_path.stem, kind="mc", mc_items=tuple(load_mc_dataset(data)))
    else:
        dataset = Dataset(id=dataset_path.stem, kind="gen", gen_items=tuple(load_gen_dataset(data)))
    lexicon = None
    if args.task == "lexicon":
        lexicon_path = args.lexicon or config.lexicon_path
        if not lexicon_path:
            parser.error("lexicon task needs --lexicon or lexicon_path in the config file")
        lexicon = load_lexicon(Path(lexicon_path).read_bytes())
    backend = build_backend(args, config, parser)
    report = run_eval(
        dataset,
        pipeline_config(args, config),
        backend,
        parallelism=args.parallelism,
        task=args.task,
        run_log=args.run_log or (str(args.out) + ".runlog.jsonl" if args.out else None),
        catalog=resolve_catalog(config),
        lexicon=lexicon,
        score_mode=ScoreMode.JUDGE if args.judge else ScoreMode.CONTAINS_GOLD,
        lexicon_metric=args.lexicon_metric,
    )
    rendered = render_report([report], REPORT_FORMATS[args.format])
    if args.out:
        Path(args.out).write_text(rendered, encoding="utf-8")
    print(rendered, end="")
    return 0


def cmd_convert(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    source_path = Path(args.infile)
    if not source_path.is_file():
        parser.error(f"input file not found: {source_path}")
    converted = convert(args.source, source_path.read_bytes())
    Path(args.outfile).write_text(converted, encoding="utf-8")
    print(f"wrote {len(converted.splitlines())} records to {args.outfile}")
    return 0


def cmd_serve(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    import uvicorn

    from .api import create_app

    config = load_config(args.config_file)
    backend = build_backend(args, config, parser)
    index = None
    wordnet_dir = args.wordnet_dir or config.wordnet_dir
    if wordnet_dir:
        try:
            index = load_wordnet_dir(wordnet_dir)
        except (OSError, WordNetError) as exc:
            raise CliError(f"cannot load WordNet directory {wordnet_dir}: {exc}") from exc
    store = SessionStore(args.session_dir or config.session_dir)
    tutor = TutorPipeline(
        backend,
        model_id=args.model or config.model_id,
        catalog=resolve_catalog(config),
        lexicon_index=index,
        store=store,
    )
    app = create_app(tutor, store, allowed_origins=config.allowed_origins)
    host, _, port = args.addr.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8750), log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="edu", description=__doc__)
    parser.add_argument("--config-file", default=None, help="JSON config file (or set EDU_CONFIG)")
    commands = parser.add_subparsers(dest="command", required=True)

    ask = commands.add_parser("ask", help="run one question through a pipeline configuration")
    ask.add_argument("question")
    ask.add_argument("--config", choices=sorted(CONFIG_KINDS), default="full-edu")
    ask.add_argument("--base", choices=sorted(CONFIG_KINDS), default=None,
                     help="base pipeline for raw-critique")
    ask.add_argument("--model", default=None)
    ask.add_argument("--backend", default=None, help="scripted:<fixture.json> or an http(s) URL")
    ask.add_argument("--show-transcript", action="store_true")
    ask.add_argument("--transcript-out", default=None, help="write the full transcript JSON here")
    ask.set_defaults(func=cmd_ask)

    evaluate = commands.add_parser("eval", help="run a benchmark evaluation")
    evaluate.add_argument("--dataset", required=True)
    evaluate.add_argument("--task", choices=("mc", "gen", "lexicon"), required=True)
    evaluate.add_argument("--config", choices=sorted(CONFIG_KINDS), default="full-edu")
    evaluate.add_argument("--base", choices=sorted(CONFIG_KINDS), default=None)
    evaluate.add_argument("--model", default=None)
    evaluate.add_argument("--backend", default=None)
    evaluate.add_argument("--parallelism", type=int, default=1)
    evaluate.add_argument("--out", default=None, help="report file path")
    evaluate.add_argument("--run-log", default=None, help="resumable per-item transcript log")
    evaluate.add_argument("--format", choices=sorted(REPORT_FORMATS), default="plain")
    evaluate.add_argument("--lexicon", default=None, help="lexicon file for the lexicon task")
    evaluate.add_argument("--lexicon-metric", choices=("toxic", "honest"), default="toxic")
    evaluate.add_argument("--judge", action="store_true", help="grade gen answers with a judge call")
    evaluate.set_defaults(func=cmd_eval)

    converter = commands.add_parser("convert", help="convert a public dataset file")
    converter.add_argument("--source", choices=sorted(CONVERTERS), required=True)
    converter.add_argument("infile")
    converter.add_argument("outfile")
    converter.set_defaults(func=cmd_convert)

    serve = commands.add_parser("serve", help="serve the tutoring API")
    serve.add_argument("--addr", default="127.0.0.1:8750")
    serve.add_argument("--session-dir", default=None)
    serve.add_argument("--wordnet-dir", default=None)
    serve.add_argument("--model", default=None)
    serve.add_argument("--backend", default=None)
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except (CliError, ConfigError, DatasetError, GatewayError, PipelineError, TutorError, WordNetError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
