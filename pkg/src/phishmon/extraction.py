"""Triplet extraction and domain resolution over chunked sentences.

A message is split into sentences, each sentence is tagged and chunked,
and the trees are folded into a :class:`TripletSet`: the concept nouns
with their occurrence counts, plus ordered subject, predicate and object
lists. The theme concept is the most frequent subject noun; its domain is
resolved against the ontology lexicons, either explicitly (the theme is a
domain name or a term of exactly one domain) or implicitly (the domain
whose lexicon overlaps the message vocabulary the most). Implicitly
resolved themes are new vocabulary and get appended to the winning
domain's lexicon.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .chunker import Node, chunk, pos_tag
from .labels import HARMFUL, HARMFUL_DOMAINS, HARMLESS, NOT_DEFINED, context_of
from .textprep import canonical, load_phrases, normalize_slang, tokenize

_SENTENCE_RE = re.compile(r"[.!?]+")

EXPLICIT = "explicit"
IMPLICIT = "implicit"
UNRESOLVED = "unresolved"


def split_sentences(text: str) -> list[str]:
    return [part.strip() for part in _SENTENCE_RE.split(text) if part.strip()]


class OntologyLexicon:
    """Immutable map of domain name -> canonical vocabulary terms."""

    def __init__(self, domains: dict[str, frozenset[str]]):
        self._domains = {name: frozenset(terms) for name, terms in domains.items()}
        self._by_term: dict[str, tuple[str, ...]] = {}
        for name in sorted(self._domains):
            for term in self._domains[name]:
                self._by_term.setdefault(term, ())
                self._by_term[term] += (name,)

    @classmethod
    def load(cls, path: str | Path | None = None) -> "OntologyLexicon":
        """Read one lexicon file per domain from a directory.

        File stems name the domain, with underscores standing in for
        spaces. Terms are canonicalized on the way in.
        """
        domains: dict[str, frozenset[str]] = {}
        if path is None:
            root = resources.files("phishmon").joinpath("data/odb")
            entries = [e for e in root.iterdir() if e.name.endswith(".txt")]
        else:
            entries = sorted(Path(path).glob("*.txt"))
        for entry in entries:
            name = entry.name.rsplit(".", 1)[0].replace("_", " ")
            terms = set()
            for line in entry.read_text(encoding="utf-8").splitlines():
                line = line.strip()
                if line and not line.startswith("#"):
                    terms.add(canonical(line))
            domains[name] = frozenset(terms)
        return cls(domains)

    def domains(self) -> tuple[str, ...]:
        return tuple(sorted(self._domains))

    def terms(self, domain: str) -> frozenset[str]:
        return self._domains.get(domain, frozenset())

    def domains_of(self, term: str) -> tuple[str, ...]:
        return self._by_term.get(term, ())

    def multiword_terms(self) -> tuple[str, ...]:
        """Terms of more than one word, for the tokenizer's phrase joining."""
        out = [t for t in self._by_term if " " in t]
        return tuple(sorted(out))

    def as_dict(self) -> dict[str, frozenset[str]]:
        return dict(self._domains)


def learn_lexicon(lexicon: OntologyLexicon, domain: str, term: str) -> OntologyLexicon:
    """Return a lexicon with *term* added to *domain*'s vocabulary."""
    term = canonical(term)
    if not term:
        raise ValueError("cannot learn an empty term")
    if not domain or not domain.strip():
        raise ValueError("cannot learn into an unnamed domain")
    domains = lexicon.as_dict()
    domains[domain] = domains.get(domain, frozenset()) | {term}
    return OntologyLexicon(domains)


@dataclass(frozen=True)
class TripletSet:
    """Concept nouns and S/P/O lists accumulated over one message."""

    concepts: tuple[str, ...]
    subject_list: tuple[str, ...]
    predicate_list: tuple[str, ...]
    object_list: tuple[str, ...]
    occurrences: dict[str, int] = field(compare=False)

    def max_occur(self) -> frozenset[str]:
        if not self.occurrences:
            return frozenset()
        top = max(self.occurrences.values())
        return frozenset(c for c, n in self.occurrences.items() if n == top)

    def vocabulary(self) -> frozenset[str]:
        return frozenset(self.concepts) | frozenset(self.predicate_list)


@dataclass(frozen=True)
class ThemeConcept:
    value: str
    occurrences: int


def _noun_leaves(node: Node) -> list[str]:
    return [canonical(leaf.surface) for leaf in node.leaves() if leaf.tag == "NOUN"]


def extract_subject(tree: Node) -> str | None:
    """First noun inside the first noun phrase that has one."""
    for np in tree.subtrees("NP"):
        nouns = _noun_leaves(np)
        if nouns:
            return nouns[0]
    return None


def extract_predicate(tree: Node) -> str | None:
    """Deepest verb across the verb phrases, leftmost on a tie."""
    best: tuple[int, int] | None = None
    best_stem = None
    order = 0

    def walk(node: Node, depth: int, inside_vp: bool) -> None:
        nonlocal best, best_stem, order
        if node.is_leaf:
            if inside_vp and node.token.tag == "VERB":
                key = (-depth, order)
                if best is None or key < best:
                    best = key
                    best_stem = canonical(node.token.surface)
            order += 1
            return
        for child in node.children:
            walk(child, depth + 1, inside_vp or node.label == "VP")

    walk(tree, 0, False)
    return best_stem


def extract_object(tree: Node) -> str | None:
    """First noun in a prepositional phrase, then in a verb phrase's noun
    phrase, then the first adjective phrase head."""
    for pp in tree.subtrees("PP"):
        nouns = _noun_leaves(pp)
        if nouns:
            return nouns[0]
    for vp in tree.subtrees("VP"):
        for np in vp.subtrees("NP"):
            nouns = _noun_leaves(np)
            if nouns:
                return nouns[0]
    for adjp in tree.subtrees("ADJP"):
        for leaf in adjp.leaves():
            if leaf.tag == "ADJ":
                return canonical(leaf.surface)
    return None


def build_triplets(text: str, phrases: tuple[str, ...] | None = None) -> TripletSet:
    concepts: list[str] = []
    seen: set[str] = set()
    counts: Counter[str] = Counter()
    subjects: list[str] = []
    predicates: list[str] = []
    objects: list[str] = []

    # fold slang before parsing so "ur" reads as the determiner "your",
    # not an unknown noun
    text = normalize_slang(text)
    for sentence in split_sentences(text):
        tokens = tokenize(sentence, phrases=phrases)
        if not tokens:
            continue
        tagged = pos_tag([t.surface for t in tokens])
        tree = chunk(tagged)

        for leaf in tree.leaves():
            if leaf.tag == "NOUN":
                stem = canonical(leaf.surface)
                counts[stem] += 1
                if stem not in seen:
                    seen.add(stem)
                    concepts.append(stem)
        for np in tree.subtrees("NP"):
            subjects.extend(_noun_leaves(np))
        predicate = extract_predicate(tree)
        if predicate is not None:
            predicates.append(predicate)
        obj = extract_object(tree)
        if obj is not None:
            objects.append(obj)

    return TripletSet(
        concepts=tuple(concepts),
        subject_list=tuple(subjects),
        predicate_list=tuple(predicates),
        object_list=tuple(objects),
        occurrences=dict(counts),
    )


def theme_concept(triplets: TripletSet) -> ThemeConcept | None:
    """Most frequent concept that also appears as a subject.

    Ties break toward the subject that occurred first.
    """
    candidates = frozenset(triplets.concepts) & frozenset(triplets.subject_list)
    candidates &= triplets.max_occur()
    if not candidates:
        return None
    value = min(candidates, key=triplets.subject_list.index)
    return ThemeConcept(value=value, occurrences=triplets.occurrences[value])


def resolve_domain(
    term: str,
    lexicon: OntologyLexicon,
    vocabulary: frozenset[str] | None = None,
) -> tuple[str, str]:
    """Map a term to a domain name, reporting how the match was made.

    Explicit match: the term is itself a domain name, or belongs to
    exactly one domain's vocabulary. Implicit match (only attempted when
    *vocabulary* is given): the domain whose vocabulary overlaps it the
    most, provided there is a single winner with nonzero overlap.
    """
    for name in lexicon.domains():
        if term == canonical(name):
            return name, EXPLICIT
    owners = lexicon.domains_of(term)
    if len(owners) == 1:
        return owners[0], EXPLICIT
    if vocabulary:
        scores = {name: len(lexicon.terms(name) & vocabulary) for name in lexicon.domains()}
        top = max(scores.values(), default=0)
        if top > 0:
            winners = [name for name, score in scores.items() if score == top]
            if len(winners) == 1:
                return winners[0], IMPLICIT
    return NOT_DEFINED, UNRESOLVED


def identify_domain(
    term: str,
    lexicon: OntologyLexicon,
    vocabulary: frozenset[str] | None = None,
) -> str:
    return resolve_domain(term, lexicon, vocabulary)[0]


def identify_context(domain: str, harmful: frozenset[str] = HARMFUL_DOMAINS) -> str:
    return HARMFUL if domain in harmful else HARMLESS


@dataclass(frozen=True)
class MessageAnalysis:
    triplets: TripletSet
    theme: ThemeConcept | None
    domain: str
    method: str
    context: str


class TripletExtractor:
    """Stateful front end: keeps the working lexicon and phrase list."""

    def __init__(self, lexicon: OntologyLexicon | None = None):
        self._base_phrases = load_phrases()
        self.lexicon = lexicon if lexicon is not None else OntologyLexicon.load()

    @property
    def lexicon(self) -> OntologyLexicon:
        return self._lexicon

    @lexicon.setter
    def lexicon(self, lexicon: OntologyLexicon) -> None:
        self._lexicon = lexicon
        merged = dict.fromkeys(self._base_phrases)
        merged.update(dict.fromkeys(lexicon.multiword_terms()))
        self._phrases = tuple(merged)

    @property
    def phrases(self) -> tuple[str, ...]:
        return self._phrases

    def analyze(self, text: str) -> MessageAnalysis:
        triplets = build_triplets(text, phrases=self._phrases)
        theme = theme_concept(triplets)
        if theme is None:
            domain, method = NOT_DEFINED, UNRESOLVED
        else:
            domain, method = resolve_domain(theme.value, self._lexicon, triplets.vocabulary())
        return MessageAnalysis(
            triplets=triplets,
            theme=theme,
            domain=domain,
            method=method,
            context=context_of(domain),
        )

    def learn(self, domain: str, term: str) -> None:
        self.lexicon = learn_lexicon(self._lexicon, domain, term)
