"""Command-line entry points: train, mine, classify, replay, serve."""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import cba, evaluate, relay
from .labels import NOT_DEFINED


def _data(name: str) -> Path:
    return Path(str(resources.files("phishmon").joinpath(f"data/{name}")))


def _fraction(text: str) -> Fraction:
    return Fraction(text) if "/" in text else Fraction(str(float(text)))


def cmd_train(args) -> int:
    classifier = cba.train(args.prdb, args.rules, args.min_supp, args.min_conf)
    print(cba.export_rules(classifier))
    return 0


def cmd_mine(args) -> int:
    records = cba.load_training(args.prdb)
    itemsets = cba.mine_frequent_itemsets(records, args.min_supp)
    mined = cba.generate_cars(itemsets, records, args.min_conf)
    print(json.dumps([cba.rule_to_dict(r) for r in mined], indent=2))
    return 0


def cmd_classify(args) -> int:
    classifier = cba.train(args.prdb, args.rules, args.min_supp, args.min_conf)
    rows = []
    for inst in cba.load_instances(args.instances):
        label, rule_id = classifier.classify_detail(inst)
        rows.append(
            {
                "keyword": inst.keyword,
                "domain": inst.domain,
                "context": inst.context,
                "threshold": inst.threshold,
                "label": label,
                "rule_id": rule_id,
            }
        )
    print(json.dumps(rows, indent=2))
    return 0


def cmd_replay(args) -> int:
    messages = evaluate.load_transcript(args.transcript)
    truth = evaluate.load_truth(args.truth)
    report = evaluate.replay(messages, truth, stores_dir=args.stores_dir)
    print(report.table())
    print(json.dumps(report.as_dict(), indent=2))
    return 0


def cmd_serve(args) -> int:
    try:
        asyncio.run(
            relay.serve_forever(
                args.stores_dir,
                host=args.host,
                tcp_port=args.port,
                ws_port=args.ws_port,
            )
        )
    except KeyboardInterrupt:
        pass
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phishmon",
        description="Context-aware phishing detection for instant-message streams.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_training_args(p):
        p.add_argument("--prdb", default=_data("prdb.csv"), help="training table CSV")
        p.add_argument("--rules", default=_data("prdb_rules.json"), help="seeded rules JSON")
        p.add_argument("--min-supp", type=_fraction, default=cba.MIN_SUPP)
        p.add_argument("--min-conf", type=_fraction, default=cba.MIN_CONF)

    p = sub.add_parser("train", help="train and print the ordered rule list")
    add_training_args(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("mine", help="print the mined classification rules")
    add_training_args(p)
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("classify", help="classify instances from a CSV")
    add_training_args(p)
    p.add_argument("--instances", default=_data("test_instances.csv"))
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("replay", help="replay a transcript against ground truth")
    p.add_argument("--transcript", default=_data("transcripts.jsonl"))
    p.add_argument("--truth", default=_data("ground_truth.json"))
    p.add_argument("--stores-dir", default=None, help="defaults to a throwaway directory")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("serve", help="run the chat relay with live detection")
    p.add_argument("--port", type=int, default=9009, help="TCP port (0 for ephemeral)")
    p.add_argument("--ws-port", type=int, default=None, help="WebSocket port (default: port+1)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--stores-dir", required=True)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
