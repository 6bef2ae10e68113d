"""Acceptance gate: one test per shipped guarantee, each printing an
explicit PASS line (run with ``pytest tests/test_acceptance.py -v -s``).

1. rule-output oracle: the 13-row training table plus seeded rules
   reproduce all 12 labels of the shipped instance table, under 1 s
2. transcript replay: the six demo sessions raise exactly the checked-in
   alert set (nine RED keywords, one ORANGE on the third probe)
3. metric arithmetic: (97, 6, 4) gives 94.17 / 96.03 within 0.01 pp
4. miner equivalence: Apriori output equals brute-force enumeration and
   every rule's support/confidence survives a recount, under 5 s
5. triplet oracle: the three reference passages yield the expected
   subject/predicate/object, themes, domains, and contexts
6. property suite: the pipeline laws hold over generated inputs with no
   UI or network component involved
"""

import json
import pathlib
import random
import string
import tempfile
import time
from fractions import Fraction
from itertools import combinations

from phishmon import cba
from phishmon.evaluate import load_transcript, load_truth, metrics, percent, replay
from phishmon.extraction import (
    EXPLICIT,
    IMPLICIT,
    OntologyLexicon,
    TripletExtractor,
    build_triplets,
    extract_object,
    extract_predicate,
    extract_subject,
    resolve_domain,
    theme_concept,
)
from phishmon.chunker import chunk, pos_tag
from phishmon.labels import (
    ALERT_COLORS,
    DOMAINS,
    HARMLESS,
    NO,
    ORANGE,
    RED,
    SPC,
    YES,
)
from phishmon.porter import stem
from phishmon.stores import MDB, Stores
from phishmon.textprep import load_stop_words, remove_stop_words, tokenize

DATA = pathlib.Path(__file__).resolve().parents[1] / "src" / "phishmon" / "data"


def test_acceptance_rule_output_oracle():
    started = time.monotonic()
    classifier = cba.train(DATA / "prdb.csv", DATA / "prdb_rules.json")
    instances = cba.load_instances(DATA / "test_instances.csv")
    labels = [classifier.classify(inst) for inst in instances]
    elapsed = time.monotonic() - started

    expected = [
        YES, YES, YES, NO, NO, YES, YES, YES, NO, SPC, YES, YES,
    ]
    assert labels == expected, labels
    assert labels.count(YES) == 8
    assert labels.count(NO) == 3
    assert labels.count(SPC) == 1
    assert elapsed < 1.0, f"took {elapsed:.2f}s"
    print(f"\n[PASS] rule-output oracle: 12/12 labels in {elapsed:.2f}s")


def test_acceptance_transcript_replay():
    messages = load_transcript(DATA / "transcripts.jsonl")
    truth = load_truth(DATA / "ground_truth.json")
    report = replay(messages, truth)

    got = [
        {"session_id": a.session_id, "seq": a.seq, "keyword": a.keyword, "color": a.color}
        for a in report.alerts
    ]
    expected = json.loads((DATA / "expected_alerts.json").read_text())
    assert got == expected

    reds = {a.keyword for a in report.alerts if a.color == RED}
    assert reds == {
        "lucki no",
        "dob",
        "password",
        "special charact",
        "debit card",
        "code",
        "account",
        "favorit food",
        "cap",
    }
    oranges = [a for a in report.alerts if a.color == ORANGE]
    assert [(a.session_id, a.keyword) for a in oranges] == [("T5", "favorit teacher")]
    # the third occurrence, counting across the pair's prior sessions
    assert oranges[0].seq == 7

    alerted = {a.keyword for a in report.alerts}
    assert alerted.isdisjoint({"pizza", "school", "kill", "name"})
    assert (report.tp, report.fp, report.fn) == (10, 0, 0)
    print(f"\n[PASS] transcript replay: {len(got)} alerts match the expectation file")


def test_acceptance_metrics_arithmetic():
    precision, recall = metrics(97, 6, 4)
    tolerance = Fraction(1, 100)  # 0.01 percentage points
    assert abs(precision * 100 - Fraction("94.17")) <= tolerance
    assert abs(recall * 100 - Fraction("96.03")) <= tolerance
    assert percent(precision) == "94.17"
    print(
        f"\n[PASS] metrics arithmetic: precision {percent(precision)}%, "
        f"recall {percent(recall)}% (within 0.01pp of 94.17/96.03)"
    )


def test_acceptance_miner_equivalence():
    started = time.monotonic()
    records = cba.load_training(DATA / "prdb.csv")
    transactions = [r.items() for r in records]

    mined = cba.mine_frequent_itemsets(records, Fraction(2, 100))

    candidates = set()
    for t in transactions:
        items = sorted(t, key=lambda i: (i[0], str(i[1])))
        for k in range(1, len(items) + 1):
            candidates.update(frozenset(c) for c in combinations(items, k))
    brute = {}
    for cand in candidates:
        count = sum(1 for t in transactions if cand <= t)
        supp = Fraction(count, len(transactions))
        if supp >= Fraction(2, 100):
            brute[cand] = supp
    assert mined == brute

    rules = cba.generate_cars(mined, records)
    for rule in rules:
        cover = sum(1 for t in transactions if rule.antecedent <= t)
        hits = sum(
            1 for t in transactions if (rule.antecedent | {("label", rule.consequent)}) <= t
        )
        assert rule.support == Fraction(hits, len(transactions))
        assert rule.confidence == Fraction(hits, cover)
        assert rule.confidence >= Fraction(60, 100)

    elapsed = time.monotonic() - started
    assert elapsed < 5.0, f"took {elapsed:.2f}s"
    print(
        f"\n[PASS] miner equivalence: {len(mined)} itemsets, {len(rules)} rules "
        f"recounted in {elapsed:.2f}s"
    )


def test_acceptance_triplet_oracle():
    tree = chunk(pos_tag(["novotel", "is", "located", "at", "hyderabad"]))
    spo = (extract_subject(tree), extract_predicate(tree), extract_object(tree))
    assert spo == ("novotel", stem("located"), "hyderabad")

    extractor = TripletExtractor()
    taj = extractor.analyze(
        "The Taj Banjara is a nice hotel. Taj Banjara is located at Banjara Hills."
    )
    assert taj.theme is not None and taj.theme.value == "taj banjara"
    assert (taj.domain, taj.method) == ("hotel", EXPLICIT)

    choc_text = (
        "Joe is so fond of chocolates. He would kill anybody for a bar of chocolate."
    )
    trip = build_triplets(choc_text)
    theme = theme_concept(trip)
    assert theme is not None and theme.value == stem("chocolate")
    domain, method = resolve_domain(
        theme.value, OntologyLexicon.load(), trip.vocabulary()
    )
    assert (domain, method) == ("eatables", IMPLICIT)
    assert "kill" in trip.predicate_list
    choc = TripletExtractor().analyze(choc_text)
    assert choc.context == HARMLESS
    print("\n[PASS] triplet oracle: novotel/taj banjara/chocolate passages check out")


def test_acceptance_property_suite():
    rng = random.Random(0)

    # stemming is idempotent over ten thousand fuzzed words
    for _ in range(10_000):
        word = "".join(
            rng.choice(string.ascii_lowercase) for _ in range(rng.randint(1, 14))
        )
        once = stem(word)
        assert stem(once) == once, word

    # stop-word removal keeps a subsequence and never keeps a stop word
    stop = load_stop_words()
    pool = [
        "the", "a", "password", "dog", "pizza", "is", "kill", "at",
        "for", "lucky", "no", "dob", "your", "very", "nice",
    ]
    for _ in range(300):
        text = " ".join(rng.choice(pool) for _ in range(rng.randint(0, 12)))
        tokens = tokenize(text)
        kept = remove_stop_words(tokens)
        positions = [t.position for t in kept]
        assert positions == sorted(positions)
        assert all(t.surface.lower() not in stop for t in kept)

        trip = build_triplets(text)
        theme = theme_concept(trip)
        if theme is not None:
            assert theme.value in trip.concepts
            assert theme.value in trip.subject_list
            assert theme.value in trip.max_occur()

    # label closure and the SPC gate, exhaustively over the value grid
    classifier = cba.train(DATA / "prdb.csv", DATA / "prdb_rules.json")
    keywords = sorted({r.keyword for r in cba.load_training(DATA / "prdb.csv")}) + ["zzz"]
    for keyword in keywords:
        for domain in DOMAINS:
            for context in ("harmful", "harmless"):
                for threshold in range(1, 6):
                    label = classifier.classify(
                        cba.TestInstance(keyword, domain, context, threshold)
                    )
                    assert label in (YES, NO, SPC)
                    if label == SPC:
                        assert threshold >= 3

    # journals survive a reopen byte-for-byte, in order
    with tempfile.TemporaryDirectory() as tmp:
        with Stores(tmp) as stores:
            for seq in range(1, 6):
                stores.append(
                    MDB,
                    {
                        "session_id": "s",
                        "seq": seq,
                        "sender": "a",
                        "text": f"m{seq}",
                        "ts": 0,
                    },
                )
            before = stores.scan(MDB)
        with Stores(tmp) as stores:
            assert stores.scan(MDB) == before

    # alert colors map labels one-to-one
    assert ALERT_COLORS[YES] == RED
    assert ALERT_COLORS[SPC] == ORANGE
    assert len(set(ALERT_COLORS.values())) == len(ALERT_COLORS)

    print("\n[PASS] property suite: idempotence, subsequence, theme, closure, durability, colors")
