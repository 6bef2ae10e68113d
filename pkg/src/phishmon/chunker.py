"""Rule-based part-of-speech tagging and shallow chunk parsing.

The tagger is a closed-class lexicon plus three suffix rules with a NOUN
default. The chunker is a greedy single-pass grammar:

    NP   := DET? ADJ* NOUN+   (a lone PRON is also an NP)
    PP   := PREP NP           (one level of nesting)
    ADJP := ADV* ADJ+
    VP   := VERB ADV* (VP | (PP | NP | ADJP)*)

Each further VERB in a verb group opens a nested VP, so auxiliaries sit above
their participle ("is located ..." puts "located" one level deeper). Tokens no
rule covers become LEAF children of S; flattening the tree always returns the
input tokens in order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

from .porter import stem

TAGS = ("NOUN", "VERB", "ADJ", "ADV", "PREP", "DET", "PRON", "NUM", "OTHER")


@dataclass(frozen=True)
class TaggedToken:
    surface: str
    tag: str


@dataclass
class Node:
    """Parse tree node; leaves carry a TaggedToken and the label LEAF."""

    label: str
    children: list["Node"] = field(default_factory=list)
    token: TaggedToken | None = None

    @property
    def is_leaf(self) -> bool:
        return self.token is not None

    def leaves(self) -> list[TaggedToken]:
        if self.is_leaf:
            return [self.token]
        out = []
        for child in self.children:
            out.extend(child.leaves())
        return out

    def subtrees(self, label: str) -> list["Node"]:
        """All descendants (document order, self included) with a label."""
        found = []
        if self.label == label:
            found.append(self)
        for child in self.children:
            if not child.is_leaf:
                found.extend(child.subtrees(label))
        return found

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        if self.is_leaf:
            return f"{self.token.surface}/{self.token.tag}"
        inner = " ".join(repr(c) for c in self.children)
        return f"({self.label} {inner})"


def _load_lexicon() -> dict[str, str]:
    table = {}
    text = resources.files("phishmon").joinpath(
        "data", "tagger_lexicon.tsv"
    ).read_text("utf-8")
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, _, tag = line.partition("\t")
        table[word.strip().lower()] = tag.strip().upper()
    return table


_LEXICON = _load_lexicon()


def pos_tag(tokens: list[str]) -> list[TaggedToken]:
    """Tag token surfaces. Lexicon first (surface, then stem), then suffix
    rules (-ed/-ing verbs, -ly adverbs, digits), NOUN otherwise."""
    tagged = []
    for surface in tokens:
        word = surface.lower()
        tag = _LEXICON.get(word)
        if tag is None and " " not in word:
            tag = _LEXICON.get(stem(word))
        if tag is None:
            if word.isdigit():
                tag = "NUM"
            elif word.endswith(("ed", "ing")) and len(word) > 4:
                tag = "VERB"
            elif word.endswith("ly") and len(word) > 3:
                tag = "ADV"
            else:
                tag = "NOUN"
        tagged.append(TaggedToken(surface, tag))
    return tagged


def _leaf(token: TaggedToken) -> Node:
    return Node("LEAF", token=token)


class _Parser:
    def __init__(self, tokens: list[TaggedToken]):
        self.tokens = tokens

    def tag(self, i: int) -> str | None:
        if 0 <= i < len(self.tokens):
            return self.tokens[i].tag
        return None

    def parse_np(self, i: int, allow_pp: bool = True) -> tuple[Node, int] | None:
        del allow_pp  # NPs never nest PPs; kept for signature clarity
        if self.tag(i) == "PRON":
            return Node("NP", [_leaf(self.tokens[i])]), i + 1
        j = i
        children = []
        if self.tag(j) == "DET":
            children.append(_leaf(self.tokens[j]))
            j += 1
        while self.tag(j) == "ADJ":
            children.append(_leaf(self.tokens[j]))
            j += 1
        nouns = 0
        while self.tag(j) == "NOUN":
            children.append(_leaf(self.tokens[j]))
            j += 1
            nouns += 1
        if nouns == 0:
            return None
        return Node("NP", children), j

    def parse_pp(self, i: int) -> tuple[Node, int] | None:
        if self.tag(i) != "PREP":
            return None
        inner = self.parse_np(i + 1)
        if inner is None:
            return None
        np, j = inner
        return Node("PP", [_leaf(self.tokens[i]), np]), j

    def parse_adjp(self, i: int) -> tuple[Node, int] | None:
        j = i
        children = []
        while self.tag(j) == "ADV":
            children.append(_leaf(self.tokens[j]))
            j += 1
        adjs = 0
        while self.tag(j) == "ADJ":
            children.append(_leaf(self.tokens[j]))
            j += 1
            adjs += 1
        if adjs == 0:
            return None
        return Node("ADJP", children), j

    def parse_vp(self, i: int) -> tuple[Node, int] | None:
        if self.tag(i) != "VERB":
            return None
        children = [_leaf(self.tokens[i])]
        j = i + 1
        while self.tag(j) == "ADV" and self.tag(j + 1) == "VERB":
            children.append(_leaf(self.tokens[j]))
            j += 1
        nested = self.parse_vp(j)
        if nested is not None:
            node, j = nested
            children.append(node)
            return Node("VP", children), j
        while True:
            for rule in (self.parse_pp, self.parse_np, self.parse_adjp):
                result = rule(j)
                if result is not None:
                    node, j = result
                    children.append(node)
                    break
            else:
                break
        return Node("VP", children), j

    def parse(self) -> Node:
        children = []
        i = 0
        while i < len(self.tokens):
            for rule in (self.parse_pp, self.parse_vp, self.parse_np,
                         self.parse_adjp):
                result = rule(i)
                if result is not None:
                    node, i = result
                    children.append(node)
                    break
            else:
                children.append(_leaf(self.tokens[i]))
                i += 1
        return Node("S", children)


def chunk(tagged: list[TaggedToken]) -> Node:
    return _Parser(tagged).parse()


def flatten(tree: Node) -> list[TaggedToken]:
    return tree.leaves()
