"""Shared vocabulary: class labels, contexts, domain names, alert colors."""

from __future__ import annotations

YES = "yes"
NO = "no"
SPC = "spc"
LABELS = (YES, NO, SPC)
RULE_LABELS = (YES, NO)

HARMFUL = "harmful"
HARMLESS = "harmless"
CONTEXTS = (HARMFUL, HARMLESS)

NOT_DEFINED = "not defined"

# The eight domain values classification rules speak about.
DOMAINS = (
    "financial gain",
    "account creation tips",
    "fame and notoriety",
    "deceitful elicitation",
    "identity access",
    "life threatening",
    "url related",
    NOT_DEFINED,
)

# The seven harmful-bearing domains: everything except "not defined".
HARMFUL_DOMAINS = frozenset(d for d in DOMAINS if d != NOT_DEFINED)

# Spellings seen in the wild for the same domains.
DOMAIN_ALIASES = {
    "financial_gain": "financial gain",
    "acc_creation_tips": "account creation tips",
    "account_creation_tips": "account creation tips",
    "fame_noteriety": "fame and notoriety",
    "fame_notoriety": "fame and notoriety",
    "fame_and_notoriety": "fame and notoriety",
    "deceitful_elicitation": "deceitful elicitation",
    "identity_access": "identity access",
    "life_threatening": "life threatening",
    "url_related": "url related",
    "not_defined": NOT_DEFINED,
}

RED = "RED"
ORANGE = "ORANGE"
BLACK = "BLACK"

# Label -> alert color. Only RED and ORANGE are ever emitted as alerts.
ALERT_COLORS = {YES: RED, SPC: ORANGE, NO: BLACK}


def canonical_domain(name: str) -> str:
    name = name.strip().lower()
    name = DOMAIN_ALIASES.get(name, name)
    if name not in DOMAINS:
        raise ValueError(f"unknown domain: {name!r}")
    return name


def context_of(domain: str) -> str:
    return HARMFUL if domain in HARMFUL_DOMAINS else HARMLESS
