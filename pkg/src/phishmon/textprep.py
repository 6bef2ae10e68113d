"""Message text preparation: slang normalization, tokenization with phrase
joining, stop-word removal and stemming.

Two views of a message come out of this module. The parser view keeps every
token (determiners and prepositions drive the chunk grammar). The keyword
view drops stop words and numeric noise and reduces each surviving token to a
canonical stem, which is the identity used by rules, lexicons, thresholds and
ground-truth files.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .porter import stem

__all__ = [
    "Token",
    "Keyword",
    "normalize_slang",
    "tokenize",
    "remove_stop_words",
    "stem",
    "keywords",
    "canonical",
    "canonical_stems",
    "load_stop_words",
    "load_slang",
    "load_phrases",
]


@dataclass(frozen=True)
class Token:
    """One tokenizer output unit; a phrase entry yields a single Token."""

    surface: str
    position: int


@dataclass(frozen=True)
class Keyword:
    """A filtered word: canonical stem plus the surface it came from."""

    stem: str
    surface: str
    position: int


def _data_text(name: str) -> str:
    return resources.files("phishmon").joinpath("data", name).read_text("utf-8")


def load_stop_words() -> frozenset[str]:
    words = set()
    for line in _data_text("stop_words.txt").splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


def load_slang() -> dict[str, str]:
    table = {}
    for line in _data_text("slang.tsv").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        form, _, replacement = line.partition("\t")
        table[form.strip().lower()] = replacement.strip().lower()
    return table


def load_phrases() -> frozenset[str]:
    entries = set()
    for line in _data_text("phrases.txt").splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            entries.add(line)
    return frozenset(entries)


_STOP_WORDS = load_stop_words()
_SLANG = load_slang()
_PHRASES = load_phrases()

# Longest form first so "d'ya" beats "d".
_SLANG_RE = re.compile(
    "|".join(
        re.escape(form)
        for form in sorted(_SLANG, key=len, reverse=True)
    ),
    re.IGNORECASE,
)

_WORD_RE = re.compile(r"[a-z0-9']+")


def normalize_slang(text: str, table: dict[str, str] | None = None) -> str:
    """Replace whole-word slang forms; everything else passes verbatim."""
    table = _SLANG if table is None else table
    if not table:
        return text
    if table is _SLANG:
        pattern = _SLANG_RE
    else:
        pattern = re.compile(
            "|".join(re.escape(f) for f in sorted(table, key=len, reverse=True)),
            re.IGNORECASE,
        )

    def _sub(match: re.Match) -> str:
        start, end = match.start(), match.end()
        before = match.string[start - 1] if start > 0 else " "
        after = match.string[end] if end < len(match.string) else " "
        # Whole-word check: the regex has no \b because forms may hold
        # apostrophes; reject matches glued to letters or digits.
        if before.isalnum() or after.isalnum():
            return match.group(0)
        return table[match.group(0).lower()]

    return pattern.sub(_sub, text)


def _words(text: str) -> list[str]:
    """Word extraction shared by the canonical and token paths. Leftover
    possessives ("kid's") fold into their base noun; contracted slang
    forms were already rewritten by normalize_slang."""
    out = []
    for raw in _WORD_RE.findall(text):
        word = raw.strip("'")
        if word.endswith("'s"):
            word = word[:-2]
        if word:
            out.append(word)
    return out


def canonical_stems(text: str) -> tuple[str, ...]:
    """Per-word canonical stems of a phrase, slang folded first."""
    folded = normalize_slang(text.lower())
    return tuple(stem(w) for w in _words(folded))


def canonical(text: str) -> str:
    """Canonical keyword form: slang-folded, stemmed, space-joined."""
    return " ".join(canonical_stems(text))


def _phrase_index(phrases: frozenset[str]) -> tuple[dict[tuple[str, ...], str], int]:
    index = {}
    longest = 1
    for entry in phrases:
        key = canonical_stems(entry)
        if len(key) < 2:
            continue
        index[key] = entry
        longest = max(longest, len(key))
    return index, longest


_PHRASE_INDEX, _PHRASE_MAX = _phrase_index(_PHRASES)


def tokenize(text: str, phrases: frozenset[str] | None = None) -> list[Token]:
    """Split normalized text into word tokens, joining dictionary phrases.

    Phrase membership is decided on canonical stems, so "kids name" joins the
    "kid name" entry and "internet banking" joins "internet bank". The Token
    surface keeps the words as written.
    """
    if phrases is None:
        index, longest = _PHRASE_INDEX, _PHRASE_MAX
    else:
        index, longest = _phrase_index(phrases)

    words = _words(text.lower())
    stems = [stem(w) for w in words]

    tokens: list[Token] = []
    i = 0
    while i < len(words):
        joined = False
        for width in range(min(longest, len(words) - i), 1, -1):
            if tuple(stems[i : i + width]) in index:
                tokens.append(Token(" ".join(words[i : i + width]), len(tokens)))
                i += width
                joined = True
                break
        if not joined:
            tokens.append(Token(words[i], len(tokens)))
            i += 1
    return tokens


def remove_stop_words(
    tokens: list[Token], stop_words: frozenset[str] | None = None
) -> list[Token]:
    stop = _STOP_WORDS if stop_words is None else stop_words
    return [t for t in tokens if t.surface.lower() not in stop]


def keywords(text: str, phrases: frozenset[str] | None = None) -> list[Keyword]:
    """Full keyword path: normalize, tokenize, drop stops and numeric noise,
    stem what is left."""
    normalized = normalize_slang(text)
    kept = remove_stop_words(tokenize(normalized, phrases))
    out = []
    for token in kept:
        if not any(c.isalpha() for c in token.surface):
            continue
        out.append(
            Keyword(
                stem=" ".join(stem(w) for w in token.surface.split()),
                surface=token.surface,
                position=token.position,
            )
        )
    return out
