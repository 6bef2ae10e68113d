"""Transcript replay against ground truth, with precision/recall math.

Ground truth maps (session, seq, keyword stem) to a label; keys absent
from the map count as non-phish. A YES finding is a true positive when
the truth says yes, otherwise a false positive. A phish keyword that
came out NO is a false negative; one that came out SPC lands in the
suspicious count and also counts as a false negative (flagged, but not
confirmed); one the pipeline never surfaced at all is likewise a false
negative. Metrics are exact rationals, reported as percentages with two
decimals, and stay undefined (not zero) when a denominator is zero.
"""

from __future__ import annotations

import json
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .labels import NO, SPC, YES
from .monitor import Alert, ChatMessage, Monitor
from .stores import Stores


def load_transcript(path: str | Path) -> list[ChatMessage]:
    messages = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            raw = json.loads(line)
            messages.append(
                ChatMessage(
                    session_id=raw["session_id"],
                    seq=int(raw["seq"]),
                    sender=raw["sender"],
                    text=raw["text"],
                    ts=int(raw.get("ts", 0)),
                )
            )
    return messages


def load_truth(path: str | Path) -> dict:
    """Load a ground-truth map; top-level keys starting with "_" are
    comments, not session ids."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return {k: v for k, v in raw.items() if not k.startswith("_")}


def truth_label(truth: dict, session_id: str, seq: int, stem: str) -> str:
    return truth.get(session_id, {}).get(str(seq), {}).get(stem, NO)


def percent(value: Fraction) -> str:
    """Exact half-up rounding to two decimals, e.g. 94.17."""
    scaled = value * 10000
    units = (scaled.numerator * 2 + scaled.denominator) // (scaled.denominator * 2)
    return f"{units // 100}.{units % 100:02d}"


def metrics(tp: int, fp: int, fn: int) -> tuple[Fraction | None, Fraction | None]:
    if min(tp, fp, fn) < 0:
        raise ValueError("counts must be non-negative")
    precision = Fraction(tp, tp + fp) if tp + fp else None
    recall = Fraction(tp, tp + fn) if tp + fn else None
    return precision, recall


@dataclass(frozen=True)
class EvalReport:
    tp: int
    fp: int
    fn: int
    suspicious_count: int
    precision: Fraction | None
    recall: Fraction | None
    alerts: tuple[Alert, ...]

    def as_dict(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "suspicious_count": self.suspicious_count,
            "precision_pct": percent(self.precision) if self.precision is not None else None,
            "recall_pct": percent(self.recall) if self.recall is not None else None,
            "alerts": [
                {
                    "session_id": a.session_id,
                    "seq": a.seq,
                    "keyword": a.keyword,
                    "color": a.color,
                }
                for a in self.alerts
            ],
        }

    def table(self) -> str:
        p = percent(self.precision) + "%" if self.precision is not None else "undefined"
        r = percent(self.recall) + "%" if self.recall is not None else "undefined"
        lines = [
            f"{'true positives':<18} {self.tp}",
            f"{'false positives':<18} {self.fp}",
            f"{'false negatives':<18} {self.fn}",
            f"{'suspicious':<18} {self.suspicious_count}",
            f"{'precision':<18} {p}",
            f"{'recall':<18} {r}",
        ]
        return "\n".join(lines)


def _counterparts(messages: list[ChatMessage]) -> dict[str, dict[str, str]]:
    """For each session, map each sender to the other participant."""
    per_session: dict[str, list[str]] = {}
    for msg in messages:
        seen = per_session.setdefault(msg.session_id, [])
        if msg.sender not in seen:
            seen.append(msg.sender)
    out = {}
    for session_id, senders in per_session.items():
        if len(senders) == 1:
            out[session_id] = {senders[0]: "peer"}
        elif len(senders) == 2:
            a, b = senders
            out[session_id] = {a: b, b: a}
        else:
            raise ValueError(f"session {session_id} has {len(senders)} senders")
    return out


def replay(
    messages: list[ChatMessage],
    truth: dict,
    stores_dir: str | Path | None = None,
) -> EvalReport:
    for session_id, by_seq in truth.items():
        keyed = {(m.session_id, m.seq) for m in messages}
        for seq in by_seq:
            if (session_id, int(seq)) not in keyed:
                raise ValueError(f"ground truth references missing message {session_id}:{seq}")

    if stores_dir is None:
        with tempfile.TemporaryDirectory(prefix="phishmon-replay-") as tmp:
            return _replay(messages, truth, tmp)
    return _replay(messages, truth, stores_dir)


def _replay(messages: list[ChatMessage], truth: dict, stores_dir) -> EvalReport:
    counterparts = _counterparts(messages)
    tp = fp = fn = suspicious = 0
    alerts: list[Alert] = []
    seen: set[tuple[str, int, str]] = set()
    with Stores(stores_dir) as stores:
        mon = Monitor(stores)
        for msg in messages:
            counterpart = counterparts[msg.session_id][msg.sender]
            result, msg_alerts = mon.process_message(msg, counterpart)
            alerts.extend(msg_alerts)
            for finding in result.findings:
                seen.add((msg.session_id, msg.seq, finding.stem))
                expected = truth_label(truth, msg.session_id, msg.seq, finding.stem)
                if finding.label == YES:
                    if expected == YES:
                        tp += 1
                    else:
                        fp += 1
                elif finding.label == SPC:
                    suspicious += 1
                    if expected == YES:
                        fn += 1
                elif expected == YES:
                    fn += 1

    # a phish word the pipeline never even surfaced is still a miss
    for session_id, by_seq in truth.items():
        for seq, stems in by_seq.items():
            for stem, label in stems.items():
                if label == YES and (session_id, int(seq), stem) not in seen:
                    fn += 1

    precision, recall = metrics(tp, fp, fn)
    return EvalReport(
        tp=tp,
        fp=fp,
        fn=fn,
        suspicious_count=suspicious,
        precision=precision,
        recall=recall,
        alerts=tuple(alerts),
    )
