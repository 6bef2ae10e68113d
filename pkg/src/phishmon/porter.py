"""Porter suffix-stripping stemmer.

Classic five-step algorithm, written against the original rule tables. Two
local adjustments, both documented where they happen:

* ``stem`` repeats the pass until the output stops changing, so the public
  function is a true fixed point (stem(stem(w)) == stem(w)) even for the rare
  words where one classic pass is not.
* a small irregular pool maps agentive forms like "fisher" to "fish"; the
  measure test blocks the -er rule there and the whole family is expected to
  share one root downstream.
"""

from __future__ import annotations

_VOWELS = set("aeiou")

# Irregular forms the rule tables cannot reach.  Values must themselves be
# fixed points of the pass below.
_POOL = {
    "fisher": "fish",
    "fishers": "fish",
    "fishery": "fish",
    "fisheries": "fish",
}


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Count VC sequences: a stem has the form [C](VC)^m[V]."""
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        if _is_consonant(stem, i):
            if prev_vowel:
                m += 1
            prev_vowel = False
        else:
            prev_vowel = True
    return m


def _has_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word: str) -> bool:
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _ends_cvc(word: str) -> bool:
    # *o condition: ...cvc where the final consonant is not w, x or y.
    if len(word) < 3:
        return False
    return (
        _is_consonant(word, len(word) - 3)
        and not _is_consonant(word, len(word) - 2)
        and _is_consonant(word, len(word) - 1)
        and word[-1] not in "wxy"
    )


def _replace(word: str, suffix: str, repl: str) -> str:
    return word[: len(word) - len(suffix)] + repl


# (suffix, replacement) tables for steps 2-4.  Within a step only the longest
# matching suffix is considered; if its measure condition fails the step does
# nothing, it does not fall through to shorter suffixes.
_STEP2 = [
    ("ational", "ate"), ("tional", "tion"), ("enci", "ence"), ("anci", "ance"),
    ("izer", "ize"), ("abli", "able"), ("alli", "al"), ("entli", "ent"),
    ("eli", "e"), ("ousli", "ous"), ("ization", "ize"), ("ation", "ate"),
    ("ator", "ate"), ("alism", "al"), ("iveness", "ive"), ("fulness", "ful"),
    ("ousness", "ous"), ("aliti", "al"), ("iviti", "ive"), ("biliti", "ble"),
]

_STEP3 = [
    ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
    ("ical", "ic"), ("ful", ""), ("ness", ""),
]

_STEP4 = [
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
    "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
]


def _longest_suffix(word: str, suffixes: list[str]) -> str | None:
    best = None
    for s in suffixes:
        if word.endswith(s) and (best is None or len(s) > len(best)):
            best = s
    return best


def _step1a(word: str) -> str:
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ies"):
        return word[:-2]
    if word.endswith("ss"):
        return word
    if word.endswith("s"):
        return word[:-1]
    return word


def _step1b(word: str) -> str:
    if word.endswith("eed"):
        if _measure(word[:-3]) > 0:
            return word[:-1]
        return word
    applied = False
    if word.endswith("ed") and _has_vowel(word[:-2]):
        word = word[:-2]
        applied = True
    elif word.endswith("ing") and _has_vowel(word[:-3]):
        word = word[:-3]
        applied = True
    if applied:
        if word.endswith(("at", "bl", "iz")):
            return word + "e"
        if _ends_double_consonant(word) and word[-1] not in "lsz":
            return word[:-1]
        if _measure(word) == 1 and _ends_cvc(word):
            return word + "e"
    return word


def _step1c(word: str) -> str:
    if word.endswith("y") and _has_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


def _step2(word: str) -> str:
    suffix = _longest_suffix(word, [s for s, _ in _STEP2])
    if suffix is None:
        return word
    repl = dict(_STEP2)[suffix]
    if _measure(word[: len(word) - len(suffix)]) > 0:
        return _replace(word, suffix, repl)
    return word


def _step3(word: str) -> str:
    suffix = _longest_suffix(word, [s for s, _ in _STEP3])
    if suffix is None:
        return word
    repl = dict(_STEP3)[suffix]
    if _measure(word[: len(word) - len(suffix)]) > 0:
        return _replace(word, suffix, repl)
    return word


def _step4(word: str) -> str:
    suffix = _longest_suffix(word, _STEP4)
    if suffix is None:
        return word
    stem = word[: len(word) - len(suffix)]
    if _measure(stem) <= 1:
        return word
    if suffix == "ion" and not stem.endswith(("s", "t")):
        return word
    return stem


def _step5a(word: str) -> str:
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            return stem
    return word


def _step5b(word: str) -> str:
    if _measure(word) > 1 and _ends_double_consonant(word) and word.endswith("l"):
        return word[:-1]
    return word


def _one_pass(word: str) -> str:
    # Strings of length 1 or 2 are left alone, as in the reference code.
    if len(word) <= 2:
        return word
    for step in (_step1a, _step1b, _step1c, _step2, _step3, _step4,
                 _step5a, _step5b):
        word = step(word)
    return word


def stem(word: str) -> str:
    """Stem a single lowercase-folded word.

    Non-alphabetic tokens (numbers, noise) pass through untouched.
    """
    word = word.lower()
    if not word.isalpha():
        return word
    if word in _POOL:
        return _POOL[word]
    for _ in range(4):
        out = _one_pass(word)
        if out == word:
            return out
        word = out
    return word
