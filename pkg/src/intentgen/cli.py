"""Command line interface.

Exit codes: 0 success, 1 bad input (including bad arguments), 2 a pipeline
stage failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from .errors import InputError, IntentGenError
from .export import export_agent, intent_name
from .model import Intent, dump_json
from .pipeline import DEMO_GRAPHS, PipelineConfig, PipelineError, bundled, run_pipeline
from .sentences import DEFAULT_CAP
from .slots import EntityVocabulary


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _cap(text: str) -> int | None:
    if text.lower() in ("none", "0"):
        return None
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("cap must be positive (or 0/none for no cap)")
    return value


def _beta(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError("beta must lie strictly between 0 and 1")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="intentgen", description="Generate dialogue intents from schema.org actions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    graphs = _Parser(add_help=False)
    graphs.add_argument("--graph", action="append", default=[], metavar="FILE",
                        help="JSON-LD annotation file (repeatable)")
    graphs.add_argument("--demo", action="store_true", help="add the bundled hotel example graphs")
    graphs.add_argument("--vocab", default=bundled("schemaorg-mini.nt"), help="vocabulary triples file")
    graphs.add_argument("--json", action="store_true", help="machine-readable output")

    words = _Parser(add_help=False)
    words.add_argument("--wordnet", default=bundled("mini-wordnet"), help="WordNet dict directory")
    words.add_argument("--generic-vec", default=bundled("toy-generic.vec"), help="generic vector table")
    words.add_argument("--domain-vec", default=bundled("toy-domain.vec"), help="domain vector table")
    words.add_argument("--grammar", default=None, help="grammar file (default: bundled intent.cfg)")
    words.add_argument("--beta", type=_beta, default=0.5, help="similarity threshold (default 0.5)")
    words.add_argument("--cap", type=_cap, default=DEFAULT_CAP,
                       help=f"sentences per intent, 0 for no cap (default {DEFAULT_CAP})")
    words.add_argument("--seed", type=int, default=42, help="sampling seed (default 42)")
    words.add_argument("--samples", type=_positive, default=3, help="values sampled per slot (default 3)")
    words.add_argument("--synset-k", type=_positive, default=2, help="WordNet senses kept per word (default 2)")

    out = _Parser(add_help=False)
    out.add_argument("--out", required=True, help="bundle output directory")
    out.add_argument("--force", action="store_true", help="overwrite differing files")

    sub.add_parser("ingest", parents=[graphs], help="load graphs, apply entailment, print counts")
    sub.add_parser("extract", parents=[graphs], help="print the intents found in the graphs")
    sub.add_parser("entities", parents=[graphs], help="print slot vocabularies")
    sub.add_parser("sentences", parents=[graphs, words], help="print generated training sentences")
    exp = sub.add_parser("export", parents=[out], help="write a bundle from 'sentences --json' output")
    exp.add_argument("input", help="JSON document written by 'intentgen sentences --json'")
    sub.add_parser("run", parents=[graphs, words, out], help="run the whole pipeline")
    return parser


def _config(args, until: str) -> PipelineConfig:
    graphs = list(args.graph)
    if args.demo:
        graphs += [bundled(g) for g in DEMO_GRAPHS]
    if not graphs:
        raise InputError("no input graphs; pass --graph FILE or --demo")
    cfg = PipelineConfig(graphs=graphs, vocab=args.vocab, until=until)
    for name in ("wordnet", "generic_vec", "domain_vec", "grammar", "beta", "cap", "seed", "samples",
                 "synset_k", "out", "force"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    return cfg


def _print(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _cmd_ingest(args):
    result = run_pipeline(_config(args, "entail"))
    stages = result.report["stages"]
    if args.json:
        _print(dump_json({"ingest": stages["ingest"], "entail": stages["entail"]}))
        return
    for name, count in stages["ingest"]["graphs"].items():
        _print(f"{name}: {count} triples, {stages['entail']['derived'][name]} entailed")


def _cmd_extract(args):
    result = run_pipeline(_config(args, "extract"))
    if args.json:
        _print(dump_json([i.to_dict() for i in result.intents]))
        return
    for intent in result.intents:
        _print(intent_name(intent))
        for m in intent.modifiers:
            flag = "required" if m.required else "optional"
            _print(f"  {m.name}  {m.value_type.rsplit('/', 1)[-1]}  {flag}")


def _cmd_entities(args):
    result = run_pipeline(_config(args, "populate"))
    vocabs = [result.vocabularies[k] for k in sorted(result.vocabularies)]
    if args.json:
        _print(dump_json([v.to_dict() for v in vocabs]))
        return
    for v in vocabs:
        _print(v.slot_path)
        for e in v.values:
            _print(f"  {e.value}" + (f"  ({', '.join(e.synonyms[1:])})" if len(e.synonyms) > 1 else ""))


def _cmd_sentences(args):
    result = run_pipeline(_config(args, "generate"))
    if args.json:
        _print(dump_json({
            "intents": [i.to_dict() for i in result.intents],
            "vocabularies": [result.vocabularies[k].to_dict() for k in sorted(result.vocabularies)],
        }))
        return
    for intent in result.intents:
        _print(intent_name(intent))
        for s in intent.sentences:
            _print(f"  {s.text}")


def _cmd_export(args):
    try:
        with open(args.input, encoding="utf-8") as fh:
            doc = json.load(fh)
        intents = [Intent.from_dict(d) for d in doc["intents"]]
        vocabs = {v["slotPath"]: EntityVocabulary.from_dict(v) for v in doc.get("vocabularies", [])}
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read {args.input}: {exc}") from None
    for path in export_agent(intents, vocabs, args.out, force=args.force):
        _print(path)


def _cmd_run(args):
    result = run_pipeline(_config(args, "export"))
    if args.json:
        _print(dump_json(result.report))
        return
    stages = result.report["stages"]
    ex = stages["extract"]
    _print(f"{ex['actions']} action(s), {ex['intents']} intent(s), {ex['modifiers']} modifier(s)")
    for name, n in stages["generate"]["sentences"].items():
        _print(f"{name}: {n} sentences")
    for path in result.files:
        _print(f"wrote {path}")
    for w in result.report["warnings"]:
        sys.stderr.write(f"warning [{w['stage']}]: {w['message']}\n")


COMMANDS = {
    "ingest": _cmd_ingest,
    "extract": _cmd_extract,
    "entities": _cmd_entities,
    "sentences": _cmd_sentences,
    "export": _cmd_export,
    "run": _cmd_run,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            # the run report already carries them
            warnings.simplefilter("ignore")
            COMMANDS[args.command](args)
    except PipelineError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except IntentGenError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
