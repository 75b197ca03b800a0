"""Command-line surface: corpus-level inject / detect / attack / eval.

Corpora are newline-delimited JSON records, one document per line, at least
``{"id": <str>, "text": <str>}``. Documents are processed by a worker pool
with ordered output writing, and memory stays bounded per document. Exit
status: 0 on success, 1 if any document-level error record was emitted, 2 on
configuration errors.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Iterator, TextIO

from . import evaluation
from .attacks import (
    AttackSpec,
    ExternalTransformerHandle,
    TapeTransformer,
    TransformerClient,
    run_attack,
)
from .config import WatermarkConfig
from .detect import detect_fast, detect_precise
from .encoding import encode_pair, hash_word
from .errors import AttackAborted, ConfigError, ProviderError, TextmarkError
from .inject import inject
from .providers import Lexicon, LexiconProvider, RemoteProvider
from .textmodel import analyze, bundled_exclusions, load_exclusions

_CHUNK = 64


@dataclass
class CliConfig:
    """Merged command-line and config-file settings for one run."""

    command: str
    input_path: str | None = None
    output_path: str | None = None
    config_path: str | None = None
    provider: str = "lexicon"
    mode: str | None = None
    attack_kind: str | None = None
    attack_p: float | None = None
    seed: int = 0
    remote_endpoint: str | None = None
    synonyms: str | None = None
    vectors: str | None = None
    exclusions_file: str | None = None
    transform_endpoint: str | None = None
    tape: str | None = None
    route: str = ""
    fixture: str | None = None
    curve_out: str | None = None
    workers: int = 4
    timeout: float = 30.0
    watermark: dict = field(default_factory=dict)  # lam/k/tau_sent/tau_word/alpha/language


def _load_ini(path: str) -> dict:
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    out: dict = {"watermark": {}, "provider": {}, "exclusion": {}, "attack": {}}
    for section in out:
        if parser.has_section(section):
            out[section] = dict(parser[section])
    return out


def _merge(cli: CliConfig) -> CliConfig:
    """Overlay config-file values under explicit CLI flags."""
    if not cli.config_path:
        return cli
    ini = _load_ini(cli.config_path)
    wm = ini["watermark"]
    for key in ("lambda", "k", "tau_sent", "tau_word", "alpha", "language"):
        if key in wm and key not in cli.watermark:
            cli.watermark[key] = wm[key]
    prov = ini["provider"]
    if cli.provider == "lexicon" and "kind" in prov:
        cli.provider = prov["kind"]
    cli.synonyms = cli.synonyms or prov.get("synonyms")
    cli.vectors = cli.vectors or prov.get("vectors")
    cli.remote_endpoint = cli.remote_endpoint or prov.get("endpoint")
    if "timeout" in prov:
        cli.timeout = float(prov["timeout"])
    cli.exclusions_file = cli.exclusions_file or ini["exclusion"].get("file")
    att = ini["attack"]
    cli.attack_kind = cli.attack_kind or att.get("kind")
    if cli.attack_p is None and "p" in att:
        cli.attack_p = float(att["p"])
    cli.transform_endpoint = cli.transform_endpoint or att.get("endpoint")
    cli.tape = cli.tape or att.get("tape")
    cli.route = cli.route or att.get("route", "")
    return cli


def _build_watermark_config(cli: CliConfig) -> WatermarkConfig:
    wm = cli.watermark
    language = wm.get("language", "en")
    try:
        if cli.exclusions_file:
            excl = load_exclusions(cli.exclusions_file, language=language)
        else:
            excl = bundled_exclusions(language)
    except OSError as exc:
        raise ConfigError(f"cannot load exclusion list: {exc}") from exc
    try:
        cfg = WatermarkConfig(
            lam=float(wm.get("lambda", 0.83)),
            k=int(wm.get("k", 32)),
            tau_sent=float(wm.get("tau_sent", 0.8)),
            tau_word=float(wm.get("tau_word", 0.8)),
            alpha=float(wm.get("alpha", 0.05)),
            exclusion=excl,
            language=language,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def _build_provider(cli: CliConfig):
    if cli.provider == "lexicon":
        if not (cli.synonyms and cli.vectors):
            raise ConfigError("lexicon provider needs --synonyms and --vectors")
        try:
            lexicon = Lexicon.load(cli.synonyms, cli.vectors)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot load lexicon: {exc}") from exc
        return LexiconProvider(lexicon)
    if cli.provider == "remote":
        if not cli.remote_endpoint:
            raise ConfigError("remote provider needs --remote-endpoint")
        lexicon = None
        if cli.synonyms and cli.vectors:
            try:
                lexicon = Lexicon.load(cli.synonyms, cli.vectors)
            except (OSError, ValueError) as exc:
                raise ConfigError(f"cannot load lexicon: {exc}") from exc
        try:
            return RemoteProvider.connect(
                cli.remote_endpoint, lexicon=lexicon, timeout=cli.timeout,
                seed=cli.seed,
            )
        except ProviderError as exc:
            raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown provider kind {cli.provider!r}")


def _open_in(path: str | None) -> TextIO:
    if path in (None, "-"):
        return sys.stdin
    try:
        return open(path, encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read input: {exc}") from exc


def _open_out(path: str | None) -> TextIO:
    if path in (None, "-"):
        return sys.stdout
    try:
        return open(path, "w", encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot write output: {exc}") from exc


def _records(fh: TextIO) -> Iterator[dict]:
    for lineno, line in enumerate(fh, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            yield {"id": f"line-{lineno}", "_bad_line": str(exc)}
            continue
        if not isinstance(rec, dict):
            yield {"id": f"line-{lineno}", "_bad_line": "record is not an object"}
            continue
        yield rec


def _doc_text(rec: dict) -> str:
    marked = rec.get("watermarked")
    if isinstance(marked, str):
        return marked
    text = rec.get("text")
    if not isinstance(text, str):
        raise ValueError("record has no text field")
    return text


def _chunked(it: Iterator[dict], size: int) -> Iterator[list[dict]]:
    block: list[dict] = []
    for item in it:
        block.append(item)
        if len(block) >= size:
            yield block
            block = []
    if block:
        yield block


def _process_corpus(cli: CliConfig, fn: Callable[[dict], dict]) -> int:
    """Map records through fn with ordered output; return exit status."""
    failures = 0

    def safe(rec: dict) -> dict:
        doc_id = rec.get("id", "?")
        if "_bad_line" in rec:
            return {"id": doc_id, "error": rec["_bad_line"]}
        try:
            return fn(rec)
        except (TextmarkError, ValueError) as exc:
            return {"id": doc_id, "error": str(exc)}

    fin = _open_in(cli.input_path)
    fout = _open_out(cli.output_path)
    try:
        with ThreadPoolExecutor(max_workers=max(1, cli.workers)) as pool:
            for block in _chunked(_records(fin), _CHUNK):
                for out in pool.map(safe, block):
                    if "error" in out:
                        failures += 1
                    fout.write(json.dumps(out, ensure_ascii=False) + "\n")
        fout.flush()
    finally:
        if fin is not sys.stdin:
            fin.close()
        if fout is not sys.stdout:
            fout.close()
    return 1 if failures else 0


def _sig4(x: float) -> float:
    return float(f"{x:.4g}")


def _cmd_inject(cli: CliConfig) -> int:
    cfg = _build_watermark_config(cli)
    cfg.provider = _build_provider(cli)

    def one(rec: dict) -> dict:
        doc = analyze(_doc_text(rec), cfg.exclusion)
        report = inject(doc, cfg)
        return {
            "id": rec.get("id"),
            "text": doc.text,
            "watermarked": report.doc_out.text,
            "replaced": report.replaced,
            "visited": report.visited,
        }

    try:
        return _process_corpus(cli, one)
    finally:
        cfg.provider.close()


def _cmd_detect(cli: CliConfig) -> int:
    if cli.mode not in ("fast", "precise"):
        raise ConfigError("detect requires --mode fast or --mode precise")
    cfg = _build_watermark_config(cli)
    if cli.mode == "precise":
        cfg.provider = _build_provider(cli)
    detector = detect_fast if cli.mode == "fast" else detect_precise

    def one(rec: dict) -> dict:
        doc = analyze(_doc_text(rec), cfg.exclusion)
        report = detector(doc, cfg)
        return {
            "id": rec.get("id"),
            "mode": report.mode,
            "N": report.n,
            "ones": report.count_one,
            "p_hat": round(report.p_hat, 10),
            "z": round(report.z, 10),
            "p_value": _sig4(report.p_value),
            "watermarked": report.watermarked,
        }

    try:
        return _process_corpus(cli, one)
    finally:
        if cfg.provider is not None:
            cfg.provider.close()


def _cmd_attack(cli: CliConfig) -> int:
    if not cli.attack_kind:
        raise ConfigError("attack requires --attack-kind")
    if cli.attack_p is None:
        raise ConfigError("attack requires --attack-p")
    cfg = None
    client = None
    if cli.attack_kind == "synonym":
        cfg = _build_watermark_config(cli)
        cfg.provider = _build_provider(cli)
    elif cli.attack_kind in ("retranslate", "polish"):
        if cli.tape:
            try:
                client = TapeTransformer(cli.tape)
            except OSError as exc:
                raise ConfigError(f"cannot read tape: {exc}") from exc
        elif cli.transform_endpoint:
            try:
                client = TransformerClient(ExternalTransformerHandle(
                    endpoint=cli.transform_endpoint,
                    prompt_or_route=cli.route,
                    timeout=cli.timeout,
                ))
            except AttackAborted as exc:
                raise ConfigError(str(exc)) from exc
        else:
            raise ConfigError(
                f"{cli.attack_kind} attack needs --transform-endpoint or --tape"
            )
    elif cli.attack_kind != "delete":
        raise ConfigError(f"unknown attack kind {cli.attack_kind!r}")

    base_excl = cfg.exclusion if cfg else bundled_exclusions()

    def one(rec: dict) -> dict:
        doc = analyze(_doc_text(rec), base_excl)
        doc_seed = (cli.seed ^ hash_word(str(rec.get("id"))).value) & ((1 << 64) - 1)
        spec = AttackSpec(kind=cli.attack_kind, p=cli.attack_p,
                          rng_seed=doc_seed, client=client)
        attacked = run_attack(doc, spec, cfg)
        return {"id": rec.get("id"), "text": attacked.text}

    try:
        return _process_corpus(cli, one)
    finally:
        if cfg is not None and cfg.provider is not None:
            cfg.provider.close()
        if client is not None:
            client.close()


def _cmd_eval(cli: CliConfig) -> int:
    """Inject the corpus, detect both ways on marked and clean text, and
    write summary metrics as a results CSV."""
    if not cli.output_path:
        raise ConfigError("eval requires --out for the results CSV")
    cfg = _build_watermark_config(cli)
    cfg.provider = _build_provider(cli)
    clean_fast, clean_precise = [], []
    marked_fast, marked_precise = [], []
    skipped = 0
    fin = _open_in(cli.input_path)
    try:
        for rec in _records(fin):
            if "_bad_line" in rec:
                continue
            try:
                doc = analyze(_doc_text(rec), cfg.exclusion)
                marked = inject(doc, cfg).doc_out
                reports = (
                    detect_fast(doc, cfg),
                    detect_precise(doc, cfg),
                    detect_fast(marked, cfg),
                    detect_precise(marked, cfg),
                )
            except (TextmarkError, ValueError) as exc:
                skipped += 1
                print(f"eval: skipping {rec.get('id')!r}: {exc}", file=sys.stderr)
                continue
            clean_fast.append(reports[0])
            clean_precise.append(reports[1])
            marked_fast.append(reports[2])
            marked_precise.append(reports[3])
    finally:
        if fin is not sys.stdin:
            fin.close()
        cfg.provider.close()
    if not marked_fast:
        raise ConfigError("eval corpus is empty")

    rows = []
    curves = {}
    for mode, marked_reports, clean_reports in (
        ("fast", marked_fast, clean_fast),
        ("precise", marked_precise, clean_precise),
    ):
        curve, auc = evaluation.roc_auc(
            [r.z for r in marked_reports], [r.z for r in clean_reports]
        )
        curves[mode] = curve
        f1 = evaluation.f1_at_alpha(marked_reports, clean_reports, cfg.alpha)
        rows.append(("detection", mode, "auc", auc))
        rows.append(("detection", mode, "f1_at_alpha", f1))
        rows.append(("detection", mode, "mean_z_watermarked",
                     sum(r.z for r in marked_reports) / len(marked_reports)))
        rows.append(("detection", mode, "mean_z_clean",
                     sum(r.z for r in clean_reports) / len(clean_reports)))
    evaluation.write_results(cli.output_path, rows)
    if cli.curve_out:
        evaluation.write_curve(cli.curve_out, curves["fast"])
    return 1 if skipped else 0


def _cmd_conformance(cli: CliConfig) -> int:
    """Verify the golden-bit fixture; nonzero exit on any mismatch."""
    if cli.fixture:
        lines = open(cli.fixture, encoding="utf-8").read().splitlines()
    else:
        lines = (
            resources.files("textmark.data")
            .joinpath("golden_bits.tsv")
            .read_text("utf-8")
            .splitlines()
        )
    checked = 0
    bad = 0
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            print(f"line {lineno}: expected prev<TAB>cur<TAB>bit", file=sys.stderr)
            bad += 1
            continue
        prev, cur, want = parts
        got = encode_pair(prev, cur)
        checked += 1
        if got != int(want):
            print(f"line {lineno}: {prev!r},{cur!r} -> {got}, fixture says {want}",
                  file=sys.stderr)
            bad += 1
    print(f"conformance: {checked - bad}/{checked} golden bits match")
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="textmark",
        description="Inject and detect lexical watermarks in text corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("inject", "detect", "attack", "eval", "conformance"):
        p = sub.add_parser(name)
        p.add_argument("--in", dest="input_path")
        p.add_argument("--out", dest="output_path")
        p.add_argument("--config", dest="config_path")
        p.add_argument("--provider", choices=["lexicon", "remote"], default="lexicon")
        p.add_argument("--mode", choices=["fast", "precise"])
        p.add_argument("--alpha", type=float)
        p.add_argument("--attack-kind",
                       choices=["delete", "synonym", "retranslate", "polish"])
        p.add_argument("--attack-p", type=float)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--remote-endpoint")
        p.add_argument("--synonyms")
        p.add_argument("--vectors")
        p.add_argument("--exclusions", dest="exclusions_file")
        p.add_argument("--language")
        p.add_argument("--tau-word", type=float)
        p.add_argument("--tau-sent", type=float)
        p.add_argument("--lambda", dest="lam", type=float)
        p.add_argument("--k", type=int)
        p.add_argument("--transform-endpoint")
        p.add_argument("--tape")
        p.add_argument("--route", default="")
        p.add_argument("--fixture")
        p.add_argument("--curve-out")
        p.add_argument("--workers", type=int, default=4)
        p.add_argument("--timeout", type=float, default=30.0)
    return parser


def _cli_from_args(args: argparse.Namespace) -> CliConfig:
    watermark = {}
    for flag, key in (("alpha", "alpha"), ("tau_word", "tau_word"),
                      ("tau_sent", "tau_sent"), ("lam", "lambda"),
                      ("k", "k"), ("language", "language")):
        value = getattr(args, flag, None)
        if value is not None:
            watermark[key] = value
    return CliConfig(
        command=args.command,
        input_path=args.input_path,
        output_path=args.output_path,
        config_path=args.config_path,
        provider=args.provider,
        mode=args.mode,
        attack_kind=args.attack_kind,
        attack_p=args.attack_p,
        seed=args.seed,
        remote_endpoint=args.remote_endpoint,
        synonyms=args.synonyms,
        vectors=args.vectors,
        exclusions_file=args.exclusions_file,
        transform_endpoint=args.transform_endpoint,
        tape=args.tape,
        route=args.route,
        fixture=args.fixture,
        curve_out=args.curve_out,
        workers=args.workers,
        timeout=args.timeout,
        watermark=watermark,
    )


_COMMANDS = {
    "inject": _cmd_inject,
    "detect": _cmd_detect,
    "attack": _cmd_attack,
    "eval": _cmd_eval,
    "conformance": _cmd_conformance,
}


def run(cli: CliConfig) -> int:
    """Execute one command; exit status per the corpus-processing contract."""
    try:
        cli = _merge(cli)
        return _COMMANDS[cli.command](cli)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


def main(argv: list[str] | None = None) -> None:
    args = build_parser().parse_args(argv)
    sys.exit(run(_cli_from_args(args)))


if __name__ == "__main__":
    main()
