"""Per-message detection pipeline.

For each incoming message: store it, run triplet extraction to resolve
the message theme's domain and context (appending implicitly resolved
harmless themes to the ontology), then classify every filtered keyword
with its own attributes and occurrence threshold. YES findings are
recorded in the phish-word store and alert the counterpart in RED; SPC
findings alert in ORANGE; NO findings pass through silently. Store
failures never block the message: detection is skipped and the result is
marked degraded.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import stores as store_layer
from .cba import CbaClassifier, TestInstance, train
from .extraction import IMPLICIT, TripletExtractor, resolve_domain
from .labels import (
    ALERT_COLORS,
    DOMAINS,
    HARMLESS,
    NO,
    NOT_DEFINED,
    SPC,
    YES,
    context_of,
)
from .textprep import keywords


@dataclass(frozen=True)
class ChatMessage:
    session_id: str
    seq: int
    sender: str
    text: str
    ts: int


@dataclass(frozen=True)
class Finding:
    stem: str
    surface: str
    domain: str
    context: str
    threshold: int
    label: str
    rule_id: int | None


@dataclass(frozen=True)
class Alert:
    session_id: str
    seq: int
    keyword: str
    surface: str
    label: str
    color: str
    recipient: str


@dataclass(frozen=True)
class DetectionResult:
    session_id: str
    seq: int
    findings: tuple[Finding, ...] = ()
    theme: str | None = None
    domain: str = NOT_DEFINED
    context: str = HARMLESS
    learned: tuple[tuple[str, str], ...] = ()
    degraded: bool = False


def conversation_scope(a: str, b: str) -> str:
    """Threshold counters accumulate per unordered chatter pair."""
    return "|".join(sorted((a, b)))


def raise_alert(msg: ChatMessage, finding: Finding, recipient: str) -> Alert:
    if finding.label == NO:
        raise ValueError("NO findings never alert")
    return Alert(
        session_id=msg.session_id,
        seq=msg.seq,
        keyword=finding.stem,
        surface=finding.surface,
        label=finding.label,
        color=ALERT_COLORS[finding.label],
        recipient=recipient,
    )


class Monitor:
    """Shared classifier + per-directory stores, processing messages in
    arrival order."""

    def __init__(self, stores: store_layer.Stores, classifier: CbaClassifier | None = None):
        self.stores = stores
        self.classifier = classifier or train(stores.prdb_csv, stores.prdb_rules)
        self.extractor = TripletExtractor(stores.lexicon())

    def keyword_attributes(self, stem: str) -> tuple[str, str]:
        """Resolve one keyword's (domain, context) for classification.

        Only the keyword's own explicit lexicon membership counts here;
        domains outside the classifier's vocabulary collapse to
        "not defined" so that, say, hotel terms stay unclassified rather
        than inheriting someone else's rules.
        """
        domain, _ = resolve_domain(stem, self.extractor.lexicon)
        if domain not in DOMAINS:
            domain = NOT_DEFINED
        return domain, context_of(domain)

    def process_message(
        self, msg: ChatMessage, counterpart: str
    ) -> tuple[DetectionResult, list[Alert]]:
        base = DetectionResult(session_id=msg.session_id, seq=msg.seq)
        try:
            return self._process(msg, counterpart)
        except OSError:
            return (
                DetectionResult(
                    session_id=base.session_id, seq=base.seq, degraded=True
                ),
                [],
            )

    def _process(self, msg: ChatMessage, counterpart: str):
        self.stores.append(
            store_layer.MDB,
            {
                "session_id": msg.session_id,
                "seq": msg.seq,
                "sender": msg.sender,
                "text": msg.text,
                "ts": msg.ts,
            },
        )

        analysis = self.extractor.analyze(msg.text)
        learned = []
        if (
            analysis.theme is not None
            and analysis.method == IMPLICIT
            and analysis.context == HARMLESS
            and not self.extractor.lexicon.domains_of(analysis.theme.value)
        ):
            # New harmless vocabulary only. Escalating the harmful lexicons
            # from chat inference would let one stray mention poison every
            # later session.
            self.stores.odb_append(analysis.domain, analysis.theme.value)
            self.extractor.learn(analysis.domain, analysis.theme.value)
            learned.append((analysis.domain, analysis.theme.value))

        scope = conversation_scope(msg.sender, counterpart)
        findings = []
        alerts = []
        for kw in keywords(msg.text, phrases=self.extractor.phrases):
            count = self.stores.bump_threshold(scope, kw.stem)
            domain, context = self.keyword_attributes(kw.stem)
            label, rule_id = self.classifier.classify_detail(
                TestInstance(kw.stem, domain, context, count)
            )
            finding = Finding(
                stem=kw.stem,
                surface=kw.surface,
                domain=domain,
                context=context,
                threshold=count,
                label=label,
                rule_id=rule_id,
            )
            findings.append(finding)
            self.stores.append(
                store_layer.FWDB,
                {
                    "session_id": msg.session_id,
                    "seq": msg.seq,
                    "scope": scope,
                    "stem": kw.stem,
                    "surface": kw.surface,
                    "domain": domain,
                    "context": context,
                    "threshold": count,
                    "label": label,
                },
            )
            if label == YES:
                self.stores.append(
                    store_layer.PWDB,
                    {
                        "stem": kw.stem,
                        "domain": domain,
                        "session_id": msg.session_id,
                        "seq": msg.seq,
                    },
                )
            if label in (YES, SPC):
                alerts.append(raise_alert(msg, finding, counterpart))

        result = DetectionResult(
            session_id=msg.session_id,
            seq=msg.seq,
            findings=tuple(findings),
            theme=analysis.theme.value if analysis.theme else None,
            domain=analysis.domain,
            context=analysis.context,
            learned=tuple(learned),
        )
        return result, alerts
