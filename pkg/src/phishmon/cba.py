"""Associative classifier over the phishing-rules training table.

Training records become transactions of attribute=value items plus a
label item. Apriori mines the frequent itemsets, every frequent itemset
containing a label item becomes a candidate classification rule, and the
rules that clear the confidence floor are ordered into a classifier:
hand-seeded rules first, then mined ones by confidence, support,
antecedent size, and finally rule id. Classification takes the first
matching rule (threshold items match by >=, everything else exactly) and
falls back to NO; a NO with an occurrence threshold at or above
``spc_threshold`` is escalated to SPC.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from .labels import NO, RULE_LABELS, SPC, YES, canonical_domain
from .textprep import canonical

ATTRIBUTES = ("keyword", "domain", "context", "threshold")
LABEL_ATTR = "label"

MIN_SUPP = Fraction(2, 100)
MIN_CONF = Fraction(60, 100)
SPC_THRESHOLD = 3

MINED = "mined"
SEEDED = "seeded"

# (attribute, value); threshold values are ints, the rest strings.
Item = tuple[str, object]


@dataclass(frozen=True)
class TrainingRecord:
    keyword: str
    domain: str
    context: str
    threshold: int
    label: str

    def items(self) -> frozenset[Item]:
        return frozenset(
            [
                ("keyword", self.keyword),
                ("domain", self.domain),
                ("context", self.context),
                ("threshold", self.threshold),
                (LABEL_ATTR, self.label),
            ]
        )


@dataclass(frozen=True)
class TestInstance:
    keyword: str
    domain: str
    context: str
    threshold: int


@dataclass(frozen=True)
class PhishRule:
    antecedent: frozenset[Item]
    consequent: str
    support: Fraction
    confidence: Fraction
    origin: str
    rule_id: int

    def matches(self, instance: TestInstance) -> bool:
        for attr, value in self.antecedent:
            if attr == "threshold":
                if instance.threshold < value:
                    return False
            elif getattr(instance, attr) != value:
                return False
        return True


def _norm_keyword(raw: str) -> str:
    return canonical(raw)


def load_training(path: str | Path) -> list[TrainingRecord]:
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            label = row["label"].strip().lower()
            if label not in RULE_LABELS:
                raise ValueError(f"training label must be yes/no, got {label!r}")
            records.append(
                TrainingRecord(
                    keyword=_norm_keyword(row["keyword"]),
                    domain=canonical_domain(row["domain"]),
                    context=row["context"].strip().lower(),
                    threshold=int(row["threshold"]),
                    label=label,
                )
            )
    return records


def load_instances(path: str | Path) -> list[TestInstance]:
    instances = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            instances.append(
                TestInstance(
                    keyword=_norm_keyword(row["keyword"]),
                    domain=canonical_domain(row["domain"]),
                    context=row["context"].strip().lower(),
                    threshold=int(row["threshold"]),
                )
            )
    return instances


def mine_frequent_itemsets(
    records: list[TrainingRecord], min_supp: Fraction = MIN_SUPP
) -> dict[frozenset[Item], Fraction]:
    """Level-wise Apriori over the record transactions.

    Returns every non-empty itemset whose support (fraction of records
    containing all its items) is at least *min_supp*.
    """
    if not records:
        raise ValueError("no training records to mine")
    transactions = [r.items() for r in records]
    total = len(transactions)

    def support(itemset: frozenset[Item]) -> Fraction:
        hits = sum(1 for t in transactions if itemset <= t)
        return Fraction(hits, total)

    frequent: dict[frozenset[Item], Fraction] = {}
    singles = {frozenset([item]) for t in transactions for item in t}
    level = []
    for cand in singles:
        s = support(cand)
        if s >= min_supp:
            frequent[cand] = s
            level.append(cand)

    while level:
        # join step: grow by one frequent single, prune by anti-monotonicity
        candidates = set()
        k = len(level[0]) + 1
        units = [next(iter(s)) for s in singles if s in frequent]
        for base in level:
            for unit in units:
                if unit in base:
                    continue
                cand = base | {unit}
                if len(cand) != k or cand in candidates:
                    continue
                if all(frozenset(sub) in frequent for sub in combinations(cand, k - 1)):
                    candidates.add(cand)
        level = []
        for cand in candidates:
            s = support(cand)
            if s >= min_supp:
                frequent[cand] = s
                level.append(cand)

    return frequent


def _item_key(item: Item) -> str:
    return f"{item[0]}={item[1]}"


def generate_cars(
    itemsets: dict[frozenset[Item], Fraction],
    records: list[TrainingRecord],
    min_conf: Fraction = MIN_CONF,
) -> list[PhishRule]:
    """Turn label-bearing frequent itemsets into classification rules."""
    rules = []
    for itemset, supp in itemsets.items():
        labels = [item for item in itemset if item[0] == LABEL_ATTR]
        if len(labels) != 1:
            continue
        antecedent = itemset - frozenset(labels)
        if not antecedent:
            continue
        conf = supp / itemsets[antecedent]
        if conf >= min_conf:
            rules.append((antecedent, labels[0][1], supp, conf))

    rules.sort(key=lambda r: (len(r[0]), sorted(map(_item_key, r[0])), r[1]))
    return [
        PhishRule(
            antecedent=antecedent,
            consequent=consequent,
            support=supp,
            confidence=conf,
            origin=MINED,
            rule_id=1000 + i,
        )
        for i, (antecedent, consequent, supp, conf) in enumerate(rules)
    ]


def load_seeded(path: str | Path, records: list[TrainingRecord]) -> list[PhishRule]:
    """Read the hand-written rules file and measure each rule against the
    training records (>= on thresholds, exact elsewhere). A rule matching
    no record keeps confidence 1 and support 0."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    total = max(len(records), 1)
    rules = []
    for entry in raw:
        ante = entry["antecedent"]
        items: set[Item] = set()
        if "keyword" in ante:
            items.add(("keyword", _norm_keyword(ante["keyword"])))
        if "domain" in ante:
            items.add(("domain", canonical_domain(ante["domain"])))
        if "context" in ante:
            items.add(("context", ante["context"].strip().lower()))
        if "threshold" in ante:
            items.add(("threshold", int(ante["threshold"])))
        if not items:
            raise ValueError(f"rule {entry.get('rule_id')}: empty antecedent")
        consequent = entry["consequent"].strip().lower()
        if consequent not in RULE_LABELS:
            raise ValueError(f"rule consequent must be yes/no, got {consequent!r}")
        rule = PhishRule(
            antecedent=frozenset(items),
            consequent=consequent,
            support=Fraction(0),
            confidence=Fraction(1),
            origin=SEEDED,
            rule_id=int(entry["rule_id"]),
        )
        probe = [
            r
            for r in records
            if rule.matches(TestInstance(r.keyword, r.domain, r.context, r.threshold))
        ]
        if probe:
            agree = sum(1 for r in probe if r.label == consequent)
            rule = PhishRule(
                antecedent=rule.antecedent,
                consequent=consequent,
                support=Fraction(agree, total),
                confidence=Fraction(agree, len(probe)),
                origin=SEEDED,
                rule_id=rule.rule_id,
            )
        rules.append(rule)
    return rules


class CbaClassifier:
    """Ordered rule list with default label NO and the SPC post-rule."""

    def __init__(
        self,
        ordered_rules: list[PhishRule],
        min_supp: Fraction = MIN_SUPP,
        min_conf: Fraction = MIN_CONF,
        spc_threshold: int = SPC_THRESHOLD,
    ):
        self.ordered_rules = list(ordered_rules)
        self.default_label = NO
        self.min_supp = min_supp
        self.min_conf = min_conf
        self.spc_threshold = spc_threshold

    def first_match(self, instance: TestInstance) -> PhishRule | None:
        for rule in self.ordered_rules:
            if rule.matches(instance):
                return rule
        return None

    def classify_detail(self, instance: TestInstance) -> tuple[str, int | None]:
        rule = self.first_match(instance)
        label = rule.consequent if rule else self.default_label
        rule_id = rule.rule_id if rule else None
        if label == NO and instance.threshold >= self.spc_threshold:
            return SPC, rule_id
        return label, rule_id

    def classify(self, instance: TestInstance) -> str:
        return self.classify_detail(instance)[0]


def build_classifier(
    mined: list[PhishRule],
    seeded: list[PhishRule],
    min_supp: Fraction = MIN_SUPP,
    min_conf: Fraction = MIN_CONF,
    spc_threshold: int = SPC_THRESHOLD,
) -> CbaClassifier:
    def order(rule: PhishRule):
        return (
            0 if rule.origin == SEEDED else 1,
            -rule.confidence,
            -rule.support,
            -len(rule.antecedent),
            rule.rule_id,
        )

    ordered = sorted(list(seeded) + list(mined), key=order)
    return CbaClassifier(ordered, min_supp, min_conf, spc_threshold)


def train(
    prdb_csv: str | Path,
    rules_json: str | Path,
    min_supp: Fraction = MIN_SUPP,
    min_conf: Fraction = MIN_CONF,
) -> CbaClassifier:
    records = load_training(prdb_csv)
    itemsets = mine_frequent_itemsets(records, min_supp)
    mined = generate_cars(itemsets, records, min_conf)
    seeded = load_seeded(rules_json, records)
    return build_classifier(mined, seeded, min_supp, min_conf)


def rule_to_dict(rule: PhishRule) -> dict:
    antecedent = {}
    for attr, value in sorted(rule.antecedent, key=_item_key):
        antecedent[attr] = value
    return {
        "rule_id": rule.rule_id,
        "origin": rule.origin,
        "antecedent": antecedent,
        "consequent": rule.consequent,
        "support": round(float(rule.support), 4),
        "confidence": round(float(rule.confidence), 4),
    }


def export_rules(classifier: CbaClassifier) -> str:
    return json.dumps([rule_to_dict(r) for r in classifier.ordered_rules], indent=2)
