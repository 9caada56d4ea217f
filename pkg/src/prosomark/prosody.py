"""Symbolic prosody: break indices, tone contours, analogical parameters.

The extended break-index inventory maps each emitted index to a silence
duration plus an optional parameter reset.  Tone contours are the pitch
labels of the extended inventory (nuclear accents, phrase accents, boundary
tones, downstep, opaque intensity variants 1-4).  Point-of-view tracking
attributes quoted spans to a character so continuation sentences can take
downstepped contours.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

from . import lexica
from .ingest import QUOTE, WORD, Document, Token


class BreakIndex(enum.Enum):
    BI0 = "0"
    BI1 = "1"
    BI2 = "2"
    BI3 = "3"
    BI4 = "4"
    BI22 = "22"
    BI23 = "23"
    BI32 = "32"
    BI33 = "33"
    BI44 = "44"

    @property
    def label(self) -> str:
        return f"BI-{self.value}"


#: break index -> (silence ms, reset follows).  BI0/BI1 have no realization
#: and are never emitted by the pipeline.
BI_REALIZATION: dict[BreakIndex, tuple[int, bool]] = {
    BreakIndex.BI4: (300, True),
    BreakIndex.BI3: (200, True),
    BreakIndex.BI2: (100, False),
    BreakIndex.BI32: (30, True),
    BreakIndex.BI33: (50, True),
    BreakIndex.BI23: (100, True),
    BreakIndex.BI22: (300, False),
    BreakIndex.BI44: (400, False),
}

EMITTED_BIS = tuple(BI_REALIZATION)


@dataclass(frozen=True)
class ParamEvent:
    """One embedded synthesizer instruction.

    ``pbas`` pitch base, ``rate`` speaking rate, ``volm`` signed volume
    delta, ``slnc`` silence in ms, ``rset`` reset-all.  A reset is always an
    event of its own.
    """
    pbas: float | None = None
    rate: int | None = None
    volm: float | None = None
    slnc: int | None = None
    rset: bool = False

    def __post_init__(self):
        fields = (self.pbas, self.rate, self.volm, self.slnc)
        if self.rset and any(f is not None for f in fields):
            raise ValueError("reset events carry no other fields")
        if not self.rset and all(f is None for f in fields):
            raise ValueError("an event carries at least one field")


RSET = ParamEvent(rset=True)


def ev(pbas=None, rate=None, volm=None, slnc=None) -> ParamEvent:
    return ParamEvent(pbas=pbas, rate=rate, volm=volm, slnc=slnc)


class Nucleus(enum.Enum):
    HSTAR = "H*"
    LSTAR = "L*"
    HSTAR_L = "H*+L"     # bitonal
    BANGL_HSTAR = "!L+H*"  # upstepped-from-low bitonal
    NONE = ""


class Phrase(enum.Enum):
    H = "H"
    L = "L"
    BANG_H = "!H"
    BANG_L = "!L"
    NONE = ""


class Boundary(enum.Enum):
    HPCT = "H%"
    LPCT = "L%"
    PCT = "%"
    NONE = ""


@dataclass(frozen=True)
class ToneContour:
    nucleus: Nucleus = Nucleus.NONE
    phrase: Phrase = Phrase.NONE
    boundary: Boundary = Boundary.NONE
    downstepped: bool = False
    variant: int | None = None
    phrase_first: bool = False
    row_id: str | None = None

    @property
    def label(self) -> str:
        # bitonal nucleus + phrase tone prints as e.g. H*+L- (trailing dash)
        if (self.nucleus is Nucleus.HSTAR_L and self.phrase is Phrase.L
                and self.boundary is Boundary.NONE):
            label = "H*+L-"
            if self.variant is not None:
                label += f"-{self.variant}"
            return label
        nuc = self.nucleus.value
        if self.downstepped and nuc and not nuc.startswith("!"):
            nuc = "!" + nuc
        parts = []
        if self.phrase_first:
            if self.phrase is not Phrase.NONE:
                parts.append(self.phrase.value)
            if nuc:
                parts.append(nuc)
        else:
            if nuc:
                parts.append(nuc)
            if self.phrase is not Phrase.NONE:
                parts.append(self.phrase.value)
        label = "-".join(parts)
        if self.boundary is not Boundary.NONE:
            if self.boundary is Boundary.PCT:
                label += "%"
            else:
                label = "-".join([label, self.boundary.value]) if label else self.boundary.value
        if self.variant is not None:
            label += f"-{self.variant}"
        return label

    def same_shape(self, other: "ToneContour") -> bool:
        return self.label == other.label


def contour(label: str, row_id: str | None = None) -> ToneContour:
    """Build a ToneContour from its printed label."""
    base = label
    variant = None
    for v in (1, 2, 3, 4):
        if base.endswith(f"-{v}"):
            variant = v
            base = base[:-2]
            break
    table = {
        "H*-L": (Nucleus.HSTAR, Phrase.L, Boundary.NONE, False, False),
        "H*-H": (Nucleus.HSTAR, Phrase.H, Boundary.NONE, False, False),
        "H*-L%": (Nucleus.HSTAR, Phrase.NONE, Boundary.LPCT, False, False),
        "H*-H%": (Nucleus.HSTAR, Phrase.NONE, Boundary.HPCT, False, False),
        "L-L%": (Nucleus.NONE, Phrase.L, Boundary.LPCT, False, True),
        "L*-L%": (Nucleus.LSTAR, Phrase.NONE, Boundary.LPCT, False, False),
        "H-H*": (Nucleus.HSTAR, Phrase.H, Boundary.NONE, False, True),
        "H-!H*": (Nucleus.HSTAR, Phrase.H, Boundary.NONE, True, True),
        "H-!L*": (Nucleus.LSTAR, Phrase.H, Boundary.NONE, True, True),
        "H*+L%": (Nucleus.HSTAR_L, Phrase.NONE, Boundary.PCT, False, False),
        "H*+L-": (Nucleus.HSTAR_L, Phrase.L, Boundary.NONE, False, False),
        "!L+H*%": (Nucleus.BANGL_HSTAR, Phrase.NONE, Boundary.PCT, False, False),
    }
    if base not in table:
        raise ValueError(f"unknown contour label {label!r}")
    nuc, phr, bnd, down, pfirst = table[base]
    return ToneContour(nuc, phr, bnd, down, variant, pfirst, row_id)


def downstep(c: ToneContour | None) -> ToneContour:
    """Downstepped counterpart of a sentence-initial contour (H -> !H)."""
    if c is None:
        return contour("H-!H*-1")
    return replace(c, downstepped=True, phrase_first=True,
                   variant=c.variant if c.variant is not None else 1)


# Point of view ---------------------------------------------------------------

NARRATOR = "narrator"


@dataclass
class PointOfView:
    holder: str = NARRATOR
    opened_at: int = 0            # sentence index
    quote_depth: int = 0


@dataclass
class POVSpan:
    holder: str
    start_token: int              # document token index of the opening quote
    end_token: int                # document token index of the closing quote
    sentences: list[int] = field(default_factory=list)

    @property
    def character(self) -> bool:
        return self.holder != NARRATOR


def track_point_of_view(doc: Document, ann, comm_verbs: set[str],
                        diagnostics: list[str] | None = None) -> list[POVSpan]:
    """Quoted spans attributed to a character via a communication verb.

    The point of view persists across sentences until the closing quote;
    unattributed quotes open an anonymous character span.  A quote mark is
    an opener when it hugs the following word; stray marks draw a
    diagnostic, and a span left open is force-closed at its paragraph end.
    """
    from .ingest import quote_is_opener

    spans: list[POVSpan] = []
    tokens = doc.tokens()
    open_quote: int | None = None
    holder = NARRATOR
    para_of = {}
    sent_of = {}
    for s in doc.sentences:
        for t in s.tokens:
            para_of[t.index] = s.paragraph_index
            sent_of[t.index] = s.index

    def attribution(q_index: int) -> str:
        # look for a communication verb near the quote
        verb = None
        for t in tokens:
            if t.kind == WORD and t.normalized in comm_verbs \
                    and abs(t.index - q_index) <= 12:
                verb = t
                if t.index > q_index:
                    break
        if verb is None:
            return "character:anon"
        for t in reversed([t for t in tokens if t.index < verb.index and t.kind == WORD]):
            if not lexica.function_word(t.normalized) and t.normalized not in comm_verbs:
                return f"character:{t.normalized}"
        return "character:anon"

    for i, t in enumerate(tokens):
        if t.kind != QUOTE:
            continue
        if open_quote is None:
            if quote_is_opener(tokens, i):
                open_quote = t.index
                holder = attribution(t.index)
            elif diagnostics is not None:
                diagnostics.append(
                    f"unbalanced quotation mark at token {t.index}")
        else:
            span_sents = sorted({sent_of[j] for j in
                                 range(open_quote, t.index + 1) if j in sent_of})
            spans.append(POVSpan(holder, open_quote, t.index, span_sents))
            open_quote = None
            holder = NARRATOR
    if open_quote is not None:
        if diagnostics is not None:
            diagnostics.append("unbalanced quotation marks; "
                               "point of view force-closed at paragraph end")
        para = para_of[open_quote]
        last = max((t.index for t in tokens if para_of[t.index] == para),
                   default=open_quote)
        spans.append(POVSpan(holder, open_quote, last,
                             sorted({sent_of[open_quote], sent_of[last]})))
    return spans


def span_for_sentence(spans: list[POVSpan], sent_index: int) -> POVSpan | None:
    for sp in spans:
        if sp.character and sent_index in sp.sentences:
            return sp
    return None


def pov_state(spans: list[POVSpan], sent_index: int) -> PointOfView:
    """The point-of-view switch state in force at a sentence."""
    span = span_for_sentence(spans, sent_index)
    if span is None:
        return PointOfView(NARRATOR, sent_index, 0)
    return PointOfView(span.holder, span.sentences[0], 1)


def apply_downstep(contours: list[ToneContour | None]) -> list[ToneContour]:
    """Downstep the continuation contours of one character-POV span.

    Input: the sentence-initial contours of the span's sentences, in order.
    The first stays; each following one is replaced by its downstepped
    counterpart (variant preserved, defaulting to 1).
    """
    out: list[ToneContour] = []
    for i, c in enumerate(contours):
        if i == 0:
            out.append(c if c is not None else contour("H*-H-1"))
        else:
            out.append(downstep(c))
    return out


# Break indices ---------------------------------------------------------------

@dataclass
class BreakContext:
    at_punct: bool = False
    head_followed_by_dependent: bool | None = None
    sentence_final: bool = False
    paragraph_final: bool = False
    title_final: bool = False
    before_quantifier: bool = False
    pre_exclamative: bool = False
    enjambed: bool = False


def assign_break_index(group, context: BreakContext) -> BreakIndex:
    """Map a boundary context to its break index.

    Punctuation outranks paragraph position: the markup gives a punctuated
    paragraph-final sentence the plain end-of-group index, so the strong
    paragraph break only fires on punctuation-less sentences.
    """
    if context.title_final:
        return BreakIndex.BI44
    if context.pre_exclamative:
        return BreakIndex.BI22
    if context.before_quantifier:
        return BreakIndex.BI23
    if context.head_followed_by_dependent is True:
        return BreakIndex.BI33
    if context.head_followed_by_dependent is False:
        return BreakIndex.BI32
    if context.at_punct:
        return BreakIndex.BI3
    if context.sentence_final and context.paragraph_final:
        return BreakIndex.BI4
    if context.sentence_final:
        return BreakIndex.BI3
    return BreakIndex.BI2


# Frozen expressions ----------------------------------------------------------

@dataclass
class FrozenEntry:
    pattern: list[str]
    role: str
    tail_class: str | None = None        # e.g. address term after the pattern
    contour_seq: list[ToneContour] = field(default_factory=list)
    param_seq: list[list[ParamEvent]] = field(default_factory=list)
    tail_contour: ToneContour | None = None
    tail_params: list[list[ParamEvent]] = field(default_factory=list)


def _exhortative_entry(pattern: list[str]) -> FrozenEntry:
    # bitonal H*+L- over the pattern, upstepped !L+H*% over the address term,
    # closed by the quantifier-class pause
    return FrozenEntry(
        pattern=pattern, role="exhortative", tail_class="dear",
        contour_seq=[contour("H*+L-", row_id="exhortative")],
        param_seq=[[ev(pbas=57.0, rate=170, volm=+0.5)],
                   [ev(pbas=36.0, rate=170, volm=+0.5)]],
        tail_contour=contour("!L+H*%", row_id="exhortative_tail"),
        tail_params=[[ev(pbas=24.0, rate=130, volm=+0.5)],
                     [ev(pbas=60.0, rate=150, volm=+0.5)],
                     [ev(slnc=100), RSET]],
    )


_ROLE_BUILDERS = {"exhortative": _exhortative_entry}


def build_frozen_entries(table: list[tuple[list[str], str]]) -> list[FrozenEntry]:
    entries = []
    for pattern, role in table:
        builder = _ROLE_BUILDERS.get(role)
        if builder is not None:
            entries.append(builder(pattern))
    return entries


@dataclass
class FrozenMatch:
    length: int                       # tokens covered, address tail included
    entry: FrozenEntry
    pattern_positions: list[int]
    tail_position: int | None


def match_frozen(tokens: list[Token], start: int,
                 entries: list[FrozenEntry],
                 dear_terms: set[str] | None = None) -> FrozenMatch | None:
    """Longest frozen-expression match at the current token."""
    dear_terms = dear_terms if dear_terms is not None else lexica.DEAR_TERMS
    best: FrozenMatch | None = None
    for entry in entries:
        n = len(entry.pattern)
        window = tokens[start:start + n]
        if len(window) < n:
            continue
        if any(t.kind != WORD or t.normalized != w
               for t, w in zip(window, entry.pattern)):
            continue
        length = n
        tail_pos = None
        if entry.tail_class == "dear":
            j = start + n
            while j < len(tokens) and tokens[j].kind == "comma":
                j += 1
            if j < len(tokens) and tokens[j].kind == WORD \
                    and tokens[j].normalized in dear_terms:
                tail_pos = j
                length = j - start + 1
        match = FrozenMatch(length, entry, list(range(start, start + n)), tail_pos)
        if best is None or match.length > best.length:
            best = match
    return best


# Quantifier and head slowdowns ------------------------------------------------

SLOWDOWN_QUANTIFIER = ev(rate=110, volm=+0.3)
SLOWDOWN_HEAD = ev(rate=130, volm=+0.5)

#: quantifier pronouns stand alone and take the pre-quantifier slowdown with
#: its closing pause; modifier quantifiers join the following head under the
#: head slowdown instead
PRONOUN_QUANTIFIERS = {"nobody", "nothing", "none", "everyone", "everybody",
                       "anybody", "anything", "someone", "somebody", "no_one"}


def mark_quantifier_slowdown(group, sentence, quantifiers: set[str],
                             skip: set[int] | None = None):
    """Pre-word slowdown adjustments for one group.

    A standalone quantifier pronoun takes the pre-quantifier slowdown with
    its closing pause; a modifier quantifier directly before the group-final
    head takes the head slowdown (which then covers the final pair, so the
    head position is returned for suppression).  Result: a list of
    (token position, prefix event, closing BreakIndex or None, covered
    positions).
    """
    toks = sentence.tokens
    skip = skip or set()
    out = []
    positions = [i for i in group.positions() if toks[i].kind == WORD]
    if not positions:
        return out
    final = positions[-1]
    for i in positions:
        if i in skip:
            continue
        n = toks[i].normalized
        if n not in quantifiers:
            continue
        if n in PRONOUN_QUANTIFIERS and i != final:
            out.append((i, SLOWDOWN_QUANTIFIER, BreakIndex.BI23, {i}))
        elif i != final and all(toks[j].kind != WORD or j == final
                                for j in range(i + 1, final + 1)):
            out.append((i, SLOWDOWN_HEAD, None, {i, final}))
    return out


# Tone selection ---------------------------------------------------------------

POSITIONS = ("sentence_initial", "sentence_internal", "group_final")
AFFECTS = ("neutral", "sad", "exclaim", "exhort")


@dataclass
class ToneContext:
    """Everything select_tone may consult for one decision point."""
    position: str = "sentence_internal"
    move: str = "level"
    relevance: str = "background"
    disc_rel: str = "narration"
    affect: str = "neutral"
    in_quote: bool = False
    character_pov: bool = False
    paragraph_initial: bool = False
    after_first_paragraph: bool = False
    subordinate_marker: bool = False
    elaboration_predicate: bool = False
    comparative_continuation: bool = False
    resultative_infinitival: bool = False
    exclamative: bool = False
    split_exclamative: bool = False
    head_at_bi33: bool = False
    copular_head: bool = False
    quote_final_sentence: bool = False
    sentence_final_group: bool = False


def select_tone(ctx: ToneContext) -> ToneContour:
    """Decision table mapping a prosodic context to a tone contour.

    Transcribed row by row from the tone inventory; the neutral default
    falls through to H*-L.
    """
    if ctx.affect == "sad":
        return contour("L*-L%", row_id="sad")
    if ctx.affect == "exhort":
        return contour("H*+L-", row_id="exhortative")
    if ctx.split_exclamative:
        return contour("H*+L%", row_id="split_exclamative")
    if ctx.exclamative and (ctx.in_quote or ctx.character_pov):
        return contour("H*-H-1", row_id="ds_exclamative")
    if ctx.position == "sentence_initial":
        if ctx.move == "up" and ctx.relevance == "foreground":
            if ctx.paragraph_initial and ctx.after_first_paragraph:
                return contour("H*-H-1", row_id="up_fg_parainit")
            return contour("H*-H", row_id="up_fg")
        return contour("H*-L", row_id="default")
    if ctx.subordinate_marker:
        return contour("H*-H-3", row_id="subordinate_marker")
    if ctx.elaboration_predicate:
        return contour("H*-H-3", row_id="subordinate_marker")
    if ctx.comparative_continuation:
        return contour("H-!H*-1", row_id="ds_elaboration")
    if ctx.resultative_infinitival:
        return contour("H*-L", row_id="internal_fg")
    if ctx.position == "group_final":
        if ctx.head_at_bi33:
            return contour("L-L%", row_id="head_bi33")
        if ctx.copular_head:
            return contour("H*-L%-1", row_id="internal_boundary")
        if ctx.character_pov and ctx.quote_final_sentence and ctx.sentence_final_group:
            return contour("H*-L%-2", row_id="adjunct_bg")
        if ctx.in_quote and ctx.relevance == "foreground":
            return contour("H*-L", row_id="internal_fg")
        return contour("H*-L%", row_id="eog_internal")
    if ctx.position == "sentence_internal":
        if ctx.relevance == "foreground":
            return contour("H-H*-2", row_id="adjunct_fg")
        if ctx.in_quote and ctx.disc_rel == "elaboration":
            return contour("H*-L", row_id="internal_fg")
    return contour("H*-L", row_id="default")
