"""Lexicon files and the small built-in word classes the rules consult.

All shipped lexica are plain UTF-8 text with ``#`` comments, so the
fixtures can be edited by hand.  Formats:

* multiword list  - one expression per line, words space-separated
* phonetic list   - ``word<TAB>phonetic``
* frozen table    - ``pattern<TAB>role``
* affect list     - ``word-or-phrase<TAB>{sad|exclaim|exhort}``
* quantifier list - one word per line
* communication-verb list - one lemma per line
"""

from __future__ import annotations

import importlib.resources
from pathlib import Path

from .ingest import PhonLexicon

DATA_PACKAGE = "prosomark.data"


def data_path(name: str) -> Path:
    return Path(str(importlib.resources.files(DATA_PACKAGE) / name))


def _lines(path: str | Path) -> list[str]:
    out = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def load_multiwords(path: str | Path) -> list[list[str]]:
    return [line.lower().split() for line in _lines(path)]


def load_phon_lexicon(path: str | Path) -> PhonLexicon:
    entries = {}
    for line in _lines(path):
        word, _, phon = line.partition("\t")
        if not phon:
            word, _, phon = line.partition(" ")
        entries[word.strip()] = phon.strip()
    return PhonLexicon(entries)


def load_word_set(path: str | Path) -> set[str]:
    return {line.lower().replace(" ", "_") for line in _lines(path)}


def load_tagged_words(path: str | Path) -> dict[str, str]:
    """word -> tag map (affect lexicon); phrases keep internal spaces."""
    out = {}
    for line in _lines(path):
        word, _, tag = line.partition("\t")
        if not tag:
            word, _, tag = line.rpartition(" ")
        out[word.strip().lower()] = tag.strip()
    return out


def load_frozen_table(path: str | Path) -> list[tuple[list[str], str]]:
    out = []
    for line in _lines(path):
        pattern, _, role = line.partition("\t")
        if not role:
            pattern, _, role = line.rpartition(" ")
        out.append((pattern.strip().lower().split(), role.strip()))
    return out


# Built-in word classes -----------------------------------------------------
# Small closed classes used by segmentation and head marking.  These are not
# a tag set; just enough to tell function words from content words.

DETERMINERS = {"the", "a", "an", "this", "that", "these", "those", "some",
               "any", "no", "every", "each", "all"}

PREPOSITIONS = {"of", "in", "on", "at", "by", "to", "from", "with", "for",
                "round", "around", "into", "over", "under", "about", "above",
                "below", "between", "without", "through", "during", "upon"}

AUXILIARIES = {"is", "are", "was", "were", "am", "be", "been", "being",
               "have", "has", "had", "do", "does", "did",
               "can", "could", "will", "would", "shall", "should",
               "may", "might", "must", "ought"}

PRONOUNS = {"i", "you", "he", "she", "it", "we", "they", "me", "him", "us",
            "them", "himself", "herself", "one_another", "each_other",
            "themselves", "myself", "yourself", "itself"}

POSSESSIVES = {"my", "your", "his", "her", "its", "our", "their"}

COORDINATORS = {"and", "or", "nor"}

#: adversative connectives that stand off prosodically after a strong break
ADVERSATIVE_CONNECTIVES = {"but", "however", "yet"}

#: subordinate-clause openers that create a breath-group boundary
SUBORDINATORS = {"while", "until", "if", "because", "although", "though",
                 "since", "unless", "whereas", "as", "than"}

#: temporal discourse markers that take the announcing contour instead of
#: opening a new group
SUBORDINATE_MARKERS = {"when"}

#: words that open a complement right after a governing head (tight BI-33)
COMPLEMENT_OPENERS = {"that", "this", "what", "which", "who", "whom", "whose",
                      "while", "if", "because"}

#: words that open a looser continuation after a head (BI-32)
LOOSE_OPENERS = {"to", "at_last"}

RELATIVE_PRONOUNS = {"which", "who", "whom", "whose"}

SENTENCE_ADVERBS = {"now", "then", "therefore", "however", "meanwhile",
                    "long_ago", "at_last", "by_this_means", "yesterday",
                    "today", "soon", "here", "there"}

#: small irregular past-tense list for the shallow analyzer
IRREGULAR_PASTS = {"was", "were", "said", "got", "met", "ran", "came", "went",
                   "saw", "took", "spoke", "looked", "had", "did", "stood",
                   "sat", "told", "thought", "made", "gave", "found", "left",
                   "broke", "fell", "rose", "flew", "ate", "drank", "heard",
                   "held", "kept", "knew", "led", "lost", "meant", "paid",
                   "put", "read", "sent", "sold", "slept", "won", "wrote",
                   "brought", "bought", "caught", "taught", "began", "sang"}

COPULAS = {"is", "are", "was", "were", "am", "be", "been"}

#: negation/privative words an affect span extends over to its left
NEGATION_WORDS = {"without", "no", "not", "never"}

#: address terms accepted as the tail of an exhortative frozen expression
DEAR_TERMS = {"baby", "dear", "darling", "honey", "friend", "friends", "love"}


def function_word(norm: str) -> bool:
    return (norm in DETERMINERS or norm in PREPOSITIONS or norm in AUXILIARIES
            or norm in PRONOUNS or norm in COORDINATORS
            or norm in ADVERSATIVE_CONNECTIVES or norm in SUBORDINATORS
            or norm in SUBORDINATE_MARKERS)
