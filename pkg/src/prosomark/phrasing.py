"""Breath-group segmentation.

A breath group is a syntactically and semantically coherent token span read
in one breath.  Punctuation is followed first, then a cascade of syntactic
triggers (coordination, subordinators, infinitival complements, relatives,
long subjects, sentence-initial adverbials, final adjuncts).  Constituent
length is checked both ways: splits that would create a group shorter than
``min_len`` source words are suppressed (appositives, parentheticals and
comma-marked sentence-initial adverbials stay standalone, as the reference
decomposition shows), and groups longer than ``max_len`` are re-split at
the strongest internal trigger.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import lexica
from .annotations import AnnotationSet
from .ingest import COMMA, OTHER_PUNCT, QUOTE, TERMINAL, WORD, Sentence

END_STOPPED = "end_stopped"
ENJAMBED = "enjambed"

#: trigger identifiers, in rule priority order
TRIGGERS = ("start", "punct", "quote", "coordination", "subordinator",
            "comparative", "infinitival", "complement", "relative",
            "subject_vp", "adverbial", "adjunct")

_LOCATIVE_PREPS = {"above", "below", "under", "over", "behind", "beside",
                   "near", "beneath"}

_INTENSIFIERS = {"very", "quite", "rather", "so", "too"}


@dataclass
class BreathGroup:
    token_span: tuple[int, int]          # sentence-local positions, words only
    head_index: int = -1                 # sentence-local position of the head
    trigger: str = "start"               # rule that opened this group
    clause_no: int | None = None
    junction: str = ENJAMBED
    demoted: set[int] = field(default_factory=set)

    def positions(self) -> range:
        return range(self.token_span[0], self.token_span[1] + 1)


def _word_positions(sentence: Sentence) -> list[int]:
    return [i for i, t in enumerate(sentence.tokens) if t.kind == WORD]


def _is_verbish(tok, ann: AnnotationSet) -> bool:
    n = tok.normalized
    if n in lexica.AUXILIARIES or n in lexica.IRREGULAR_PASTS:
        return True
    if n.endswith("ed") and n not in lexica.DETERMINERS:
        return True
    # predicates of stative clauses are predicative adjectives, not verbs
    return any(c.pred == n and c.aspect != "state" for c in ann.clauses)


def _clause_starts(sentence: Sentence, ann: AnnotationSet) -> set[int]:
    starts = set()
    doc_index = {t.index: i for i, t in enumerate(sentence.tokens)}
    for span in ann.clause_spans.values():
        if span[0] in doc_index:
            starts.add(doc_index[span[0]])
    return starts


def segment(sentence: Sentence, ann: AnnotationSet, config) -> list[BreathGroup]:
    """Split one sentence into breath groups."""
    toks = sentence.tokens
    words = _word_positions(sentence)
    if not words:
        return []

    min_len = config.min_len
    max_len = config.max_len
    affect_words = set(getattr(config, "affect_words", ()) or ())

    boundaries: dict[int, str] = {words[0]: "start"}
    clause_starts = _clause_starts(sentence, ann)

    def add(pos: int, trigger: str):
        # boundaries attach to word tokens; first (strongest) trigger wins
        if pos in boundaries or toks[pos].kind != WORD:
            return
        boundaries[pos] = trigger

    # rule: punctuation first; quote marks always close/open a group
    for i, t in enumerate(toks[:-1]):
        if t.kind in (COMMA, OTHER_PUNCT, TERMINAL):
            j = i + 1
            while j < len(toks) and toks[j].kind != WORD:
                j += 1
            if j < len(toks):
                add(j, "punct")
        elif t.kind == QUOTE:
            j = i + 1
            while j < len(toks) and toks[j].kind != WORD:
                j += 1
            if j < len(toks):
                add(j, "quote")
            k = i - 1
            while k >= 0 and toks[k].kind != WORD:
                k -= 1

    for i in words:
        n = toks[i].normalized
        prev_word = None
        for k in range(i - 1, -1, -1):
            if toks[k].kind == WORD:
                prev_word = toks[k]
                break
        # rule: coordinate structures joining clauses
        if n in lexica.COORDINATORS and i > words[0]:
            if i in clause_starts or (i + 1) in clause_starts or any(
                    toks[j].kind == WORD and toks[j].index == span[0]
                    for span in ann.clause_spans.values() for j in (i, i + 1)
                    if j < len(toks)):
                add(i, "coordination")
            elif (prev_word is not None and prev_word.normalized in affect_words):
                add(i, "coordination")
        # rule: subordinate clauses (comparatives share the slot)
        elif n in lexica.SUBORDINATORS and i > words[0]:
            add(i, "comparative" if n in ("as", "than") else "subordinator")
        # rule: infinitival complements (not after a verb)
        elif n == "to" and i > words[0]:
            nxt = next((toks[j] for j in range(i + 1, len(toks))
                        if toks[j].kind == WORD), None)
            if (nxt is not None and not lexica.function_word(nxt.normalized)
                    and prev_word is not None
                    and not _is_verbish(prev_word, ann)
                    and prev_word.normalized not in lexica.PREPOSITIONS):
                add(i, "infinitival")
        # rule: relative clauses after a content noun
        elif n in lexica.RELATIVE_PRONOUNS and prev_word is not None:
            if prev_word.normalized in lexica.PREPOSITIONS:
                k = next((j for j in range(i - 1, -1, -1) if toks[j].kind == WORD), None)
                kk = next((j for j in range(k - 1, -1, -1) if toks[j].kind == WORD), None) if k else None
                if kk is not None and not lexica.function_word(toks[kk].normalized):
                    add(k, "relative")
            elif not lexica.function_word(prev_word.normalized):
                add(i, "relative")

    # rule: long subject before its verb phrase
    lead = []
    for i in words:
        if toks[i].normalized in lexica.AUXILIARIES or _is_verbish(toks[i], ann):
            if len(lead) >= config.max_subj:
                add(i, "subject_vp")
            break
        lead.append(i)

    # rule: sentence-initial adverbial phrase (no comma after it)
    first = words[0]
    if toks[first].normalized in lexica.SENTENCE_ADVERBS:
        run_end = first
        src = toks[first].source_words
        j = words.index(first)
        while (j + 1 < len(words)
               and toks[words[j + 1]].normalized in (lexica.SENTENCE_ADVERBS | _INTENSIFIERS)):
            j += 1
            run_end = words[j]
            src += toks[run_end].source_words
        nxt_tok = next((t for t in toks[run_end + 1:] if t.kind != WORD or True), None)
        comma_follows = run_end + 1 < len(toks) and toks[run_end + 1].kind == COMMA
        if src >= config.min_len and not comma_follows and j + 1 < len(words):
            add(words[j + 1], "adverbial")
    elif toks[first].normalized in _INTENSIFIERS and len(words) > 2:
        second = words[1]
        if toks[second].normalized.endswith("ly"):
            add(words[2], "adverbial")

    # rule: final locative adjunct of an exclamative/interrogative sentence
    if sentence.terminal in ("question", "exclamation") and len(words) >= 4:
        in_quote = any(t.kind == QUOTE for t in toks)
        if in_quote:
            for i in reversed(words[:-1]):
                if toks[i].normalized in _LOCATIVE_PREPS:
                    tail = [w for w in words if w >= i]
                    if 2 <= len(tail) <= 3 and i != words[0]:
                        add(i, "adjunct")
                    break

    groups = _build_groups(sentence, boundaries, words)
    groups = _suppress_short(sentence, groups, ann, config)
    groups = _resplit_long(sentence, groups, ann, max_len)
    for g in groups:
        g.junction = classify_junction(g, None, sentence)
        g.head_index, g.demoted = mark_heads(g, sentence, ann)
        owner = ann.clause_at(sentence.tokens[g.head_index].index) if g.head_index >= 0 else None
        g.clause_no = owner.clause_no if owner else None
    return groups


def _build_groups(sentence, boundaries, words) -> list[BreathGroup]:
    ordered = sorted(boundaries)
    groups = []
    for b, nxt in zip(ordered, ordered[1:] + [None]):
        span_words = [w for w in words if w >= b and (nxt is None or w < nxt)]
        if span_words:
            groups.append(BreathGroup((span_words[0], span_words[-1]),
                                      trigger=boundaries[b]))
    return groups


def _src_len(sentence, group) -> int:
    return sum(sentence.tokens[i].source_words for i in group.positions()
               if sentence.tokens[i].kind == WORD)


def _suppress_short(sentence, groups, ann, config) -> list[BreathGroup]:
    """Merge punctuation-created fragments shorter than min_len.

    Appositive and parenthetical comma groups stay standalone, and so does a
    comma-marked sentence-initial adverbial.
    """
    from .ingest import classify_comma

    out = []
    for g in groups:
        if out and _src_len(sentence, g) < config.min_len:
            keep = False
            first_tok = sentence.tokens[g.token_span[0]]
            prev_comma = None
            for j in range(g.token_span[0] - 1, -1, -1):
                if sentence.tokens[j].kind == COMMA:
                    prev_comma = j
                break
            if g.trigger == "punct" and prev_comma is not None:
                cls = classify_comma(sentence, prev_comma, ann)
                if cls in ("appositive", "parenthetical", "vocative"):
                    keep = True
            if (g.token_span[0] == _word_positions(sentence)[0]
                    and first_tok.normalized in lexica.SENTENCE_ADVERBS):
                keep = True
            if not keep:
                out[-1] = BreathGroup((out[-1].token_span[0], g.token_span[1]),
                                      trigger=out[-1].trigger)
                continue
        out.append(g)
    # forward-merge a short sentence-initial fragment that earned no exception
    if len(out) >= 2:
        first_tok = sentence.tokens[out[0].token_span[0]]
        nxt = out[0].token_span[1] + 1
        comma_follows = (nxt < len(sentence.tokens)
                         and sentence.tokens[nxt].kind == COMMA)
        adverbial_ok = first_tok.normalized in lexica.SENTENCE_ADVERBS and comma_follows
        if _src_len(sentence, out[0]) < config.min_len and not adverbial_ok \
                and out[1].trigger not in ("punct", "quote"):
            merged = BreathGroup((out[0].token_span[0], out[1].token_span[1]),
                                 trigger="start")
            out = [merged] + out[2:]
    return out


_RESPLIT_OPENERS = ("complement", "relative", "subordinator", "coordination")


def _resplit_long(sentence, groups, ann, max_len) -> list[BreathGroup]:
    out = []
    for g in groups:
        if _src_len(sentence, g) <= max_len:
            out.append(g)
            continue
        toks = sentence.tokens
        split_at = None
        for i in g.positions():
            if toks[i].kind != WORD or i == g.token_span[0]:
                continue
            n = toks[i].normalized
            if n in lexica.COMPLEMENT_OPENERS or n in lexica.RELATIVE_PRONOUNS \
                    or n in lexica.SUBORDINATORS or n in lexica.COORDINATORS:
                split_at = i
                break
        if split_at is None:
            out.append(g)
            continue
        left_words = [i for i in g.positions() if toks[i].kind == WORD and i < split_at]
        right_words = [i for i in g.positions() if toks[i].kind == WORD and i >= split_at]
        if left_words and right_words:
            out.append(BreathGroup((left_words[0], left_words[-1]), trigger=g.trigger))
            out.extend(_resplit_long(
                sentence,
                [BreathGroup((right_words[0], right_words[-1]), trigger="complement")],
                ann, max_len))
        else:
            out.append(g)
    return out


def classify_junction(group: BreathGroup, next_group, sentence: Sentence) -> str:
    """End-stopped at classified punctuation or sentence end, else enjambed."""
    toks = sentence.tokens
    j = group.token_span[1] + 1
    while j < len(toks):
        t = toks[j]
        if t.kind == QUOTE:
            j += 1
            continue
        if t.kind in (COMMA, OTHER_PUNCT, TERMINAL):
            return END_STOPPED
        return ENJAMBED
    return END_STOPPED


def mark_heads(group: BreathGroup, sentence: Sentence,
               ann: AnnotationSet) -> tuple[int, set[int]]:
    """Head position plus the demoted (never accented) positions.

    The group-final word is the nuclear-accent slot: it heads the group
    unless it is a determiner, coordinator or auxiliary, in which case the
    rightmost content word (or the clause predicate) takes over.  Function
    words and non-final pronouns are demoted.
    """
    toks = sentence.tokens
    positions = [i for i in group.positions() if toks[i].kind == WORD]
    final = positions[-1]
    demonstratives = {"this", "that", "these", "those"}
    demoted = set()
    for i in positions:
        n = toks[i].normalized
        if n in demonstratives and i == final:
            continue  # group-final demonstrative is an accentable object
        if n in lexica.DETERMINERS or n in lexica.COORDINATORS \
                or n in lexica.AUXILIARIES or n in lexica.SUBORDINATORS \
                or n in lexica.SUBORDINATE_MARKERS:
            demoted.add(i)
        elif n in lexica.PREPOSITIONS and i != final:
            demoted.add(i)
        elif n in lexica.PRONOUNS and i != final:
            demoted.add(i)

    head = None
    if final not in demoted:
        head = final
    else:
        for c in ann.clauses:
            span = ann.clause_spans.get(c.clause_no)
            if not span:
                continue
            for i in reversed(positions):
                if span[0] <= toks[i].index <= span[1] and toks[i].normalized == c.pred:
                    head = i
                    break
            if head is not None:
                break
        if head is None:
            for i in reversed(positions):
                if i not in demoted:
                    head = i
                    break
        if head is None:
            head = final
    demoted.discard(head)
    return head, demoted


# Debug dump -----------------------------------------------------------------

GROUP_MARK = "β"  # β


def render_groups(doc, groups_by_sentence, include_title: bool = False) -> str:
    """One group per line followed by the boundary mark.

    Zero-width boundaries (a bare mark on its own line) appear where a quote
    mark meets a sentence terminal; none is emitted at the document edges.
    """
    lines: list[str] = []
    for sent in doc.sentences:
        if sent.is_title and not include_title:
            continue
        groups = groups_by_sentence.get(sent.index, [])
        if not groups:
            continue
        toks = sent.tokens
        if toks and toks[0].kind == QUOTE and lines:
            lines.append(GROUP_MARK)
        for g in groups:
            text = " ".join(toks[i].normalized for i in g.positions()
                            if toks[i].kind == WORD)
            lines.append(f"{text} {GROUP_MARK}")
        tail = [t for t in toks[-3:]]
        kinds = [t.kind for t in tail]
        quote_at_edge = False
        for a, b in zip(kinds, kinds[1:]):
            if {a, b} == {QUOTE, TERMINAL}:
                quote_at_edge = True
        if quote_at_edge:
            lines.append(GROUP_MARK)
    while lines and lines[-1] == GROUP_MARK:
        lines.pop()
    while lines and lines[0] == GROUP_MARK:
        lines.pop(0)
    return "\n".join(lines) + ("\n" if lines else "")
