"""The prosody manager: wires ingest, annotations, phrasing and prosody
into a prosodic script ready for rendering.

Per sentence, in rule order: title treatment; the sentence-initial contour
for up-moving foreground clauses; frozen pragmatic expressions; affect
spans and the paragraph-initial fronted adverbial; the direct-speech
exclamative; clause-level contours (subordinate marker, quoted elaboration,
comparative continuation, resultative infinitival, foreground clause);
adversative connectives; head contours with their closing pauses;
clause-coordination pauses; quantifier slowdowns; group-final contours and
break indices; point-of-view chaining with downstepped continuations; and
the pre-quote announcement after a reporting colon.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import lexica
from .annotations import AnnotationSet, resolve_moves, resolve_relevance, shallow_analyze
from .config import Config
from .emit import (GLUE_COMPOUND, GLUE_LEFT, GLUE_NONE, GLUE_RIGHT,
                   DEFAULT_TABLE, MappingTable, ProsodicScript)
from .ingest import (COMMA, OTHER_PUNCT, QUOTE, TERMINAL, WORD, Document,
                     Sentence, phon_exception, split_document, tokenize)
from .phrasing import END_STOPPED, BreathGroup, render_groups, segment
from .prosody import (BI_REALIZATION, RSET, BreakContext, BreakIndex,
                      ParamEvent, POVSpan, PRONOUN_QUANTIFIERS, SLOWDOWN_HEAD,
                      ToneContext, ToneContour, assign_break_index,
                      build_frozen_entries, ev, mark_quantifier_slowdown,
                      match_frozen, select_tone, span_for_sentence,
                      track_point_of_view)

ANNOUNCE_EVENT = ev(pbas=48.0, rate=130, volm=+0.9)  # reporting colon, pre-quote


@dataclass
class PipelineResult:
    doc: Document
    ann: AnnotationSet
    groups: dict[int, list[BreathGroup]]
    script: ProsodicScript
    pov_spans: list[POVSpan]
    diagnostics: list[str] = field(default_factory=list)

    def groups_text(self) -> str:
        return render_groups(self.doc, self.groups)


@dataclass
class _Placed:
    event: ParamEvent
    glue: str = GLUE_RIGHT
    tone: str | None = None
    bi: BreakIndex | None = None


class _SentencePlan:
    def __init__(self, sentence: Sentence):
        self.sentence = sentence
        self.prefix: dict[int, list[_Placed]] = {}
        self.suffix: dict[int, list[_Placed]] = {}
        self.consumed: set[int] = set()
        self.end_bi2 = False          # sentence chained onward with BI-2

    def add_prefix(self, pos: int, placed: _Placed):
        self.prefix.setdefault(pos, []).append(placed)

    def add_suffix(self, pos: int, placed: _Placed):
        self.suffix.setdefault(pos, []).append(placed)

    def add_suffix_bi(self, pos: int, bi: BreakIndex):
        silence, reset = BI_REALIZATION[bi]
        self.add_suffix(pos, _Placed(ev(slnc=silence), GLUE_LEFT, bi=bi))
        if reset:
            self.add_suffix(pos, _Placed(RSET, GLUE_COMPOUND))

    def has_prefix(self, pos: int) -> bool:
        return pos in self.prefix

    def has_bi_suffix(self, pos: int) -> bool:
        return any(p.bi is not None for p in self.suffix.get(pos, ()))


class ProsodyManager:
    def __init__(self, config: Config, table: MappingTable = DEFAULT_TABLE):
        self.config = config
        self.table = table
        self.diagnostics: list[str] = []

    # -- document-level preparation ---------------------------------------

    def process(self, text: str, ann: AnnotationSet | None = None) -> PipelineResult:
        cfg = self.config
        tokens = tokenize(text, cfg.multiwords)
        doc = split_document(tokens, text, cfg.title_mode)
        for t in tokens:
            if t.kind == WORD and cfg.phon_lexicon is not None:
                t.phon_override = phon_exception(t, cfg.phon_lexicon)
        if ann is None:
            ann = shallow_analyze(doc, cfg.relevance_rules)
        else:
            resolve_relevance(ann, cfg.relevance_rules)
            resolve_moves(ann)
            self.diagnostics.extend(ann.warnings)

        self.contoured: set[int] = set()
        self.final_suppressed: set[int] = set()
        self.fired_preds: set[str] = set()
        self._scan_quotes(doc)
        groups = {s.index: segment(s, ann, cfg) for s in doc.sentences}
        pov_spans = (track_point_of_view(doc, ann, cfg.comm_verbs, self.diagnostics)
                     if cfg.pov_tracking else [])
        script = self._build_script(doc, ann, groups, pov_spans)
        return PipelineResult(doc, ann, groups, script, pov_spans,
                              self.diagnostics)

    def _scan_quotes(self, doc: Document):
        """Quote depth after each token plus quote regions (token spans).

        A quote mark opens a quotation when it hugs the following word
        (no whitespace between them); nesting deeper than one is not
        attempted.  Stray marks draw a diagnostic and do not toggle.
        """
        tokens = doc.tokens()
        sent_of = {}
        for s in doc.sentences:
            for t in s.tokens:
                sent_of[t.index] = s.index
        depth = 0
        open_at: int | None = None
        self.depth: dict[int, int] = {}
        self.quote_regions: list[tuple[int, int]] = []
        for i, t in enumerate(tokens):
            if t.kind == QUOTE:
                nxt = tokens[i + 1] if i + 1 < len(tokens) else None
                opener = nxt is not None and nxt.kind == WORD and nxt.pre_ws == ""
                if opener and depth == 0:
                    depth = 1
                    open_at = t.index
                elif depth > 0:
                    depth = 0
                    self.quote_regions.append((open_at, t.index))
                    open_at = None
                else:
                    self.diagnostics.append(
                        f"unbalanced quotation mark ignored ({t.surface!r} "
                        f"in sentence {sent_of.get(t.index, '?')})")
            self.depth[t.index] = depth
        if open_at is not None:
            self.diagnostics.append("quotation left open at document end")
            self.quote_regions.append((open_at, tokens[-1].index))
        self.sent_of_token = sent_of

    def _region_of(self, token_index: int) -> tuple[int, int] | None:
        for region in self.quote_regions:
            if region[0] <= token_index <= region[1]:
                return region
        return None

    def _region_sentences(self, region: tuple[int, int]) -> list[int]:
        return sorted({self.sent_of_token[i] for i in range(region[0], region[1] + 1)
                       if i in self.sent_of_token})

    # -- script assembly ---------------------------------------------------

    def _build_script(self, doc, ann, groups, pov_spans) -> ProsodicScript:
        cfg = self.config
        script = ProsodicScript()
        body = [s for s in doc.sentences if not s.is_title]
        first_body_para = min((s.paragraph_index for s in body), default=0)
        para_first = {}
        for s in body:
            para_first.setdefault(s.paragraph_index, s.index)
        frozen_entries = build_frozen_entries(cfg.frozen_table)

        plans: dict[int, _SentencePlan] = {}
        for sent in doc.sentences:
            plan = _SentencePlan(sent)
            plans[sent.index] = plan
            if sent.is_title:
                self._plan_title(plan)
                continue
            sgroups = groups[sent.index]
            if not sgroups:
                continue
            paragraph_initial = para_first.get(sent.paragraph_index) == sent.index
            pov = span_for_sentence(pov_spans, sent.index)
            self._plan_initial(plan, ann, paragraph_initial,
                               sent.paragraph_index > first_body_para)
            self._plan_frozen(plan, frozen_entries)
            self._plan_affect(plan, sgroups, paragraph_initial)
            self._plan_exclamative(plan, ann, sgroups, pov)
            self._plan_clauses(plan, ann, sgroups)
            self._plan_connectives(plan)
            self._plan_head_contours(plan, ann)
            self._plan_coordination(plan, ann)
            self._plan_quantifiers(plan, sgroups, ann)
            self._plan_group_finals(plan, sgroups, ann, doc)
            self._plan_announcement(plan, ann, doc)

        if cfg.pov_tracking:
            self._plan_pov_chains(plans, pov_spans)

        prev_para = None
        for sent in doc.sentences:
            if prev_para is not None and sent.paragraph_index != prev_para:
                script.paragraph_break()
            prev_para = sent.paragraph_index
            script.sentence_start(sent.index)
            plan = plans[sent.index]
            for pos, tok in enumerate(sent.tokens):
                for p in plan.prefix.get(pos, ()):
                    script.add_event(p.event, p.glue, p.tone, p.bi)
                script.add_token(tok)
                for p in plan.suffix.get(pos, ()):
                    script.add_event(p.event, p.glue, p.tone, p.bi)
        return script

    # -- individual rules ----------------------------------------------------

    def _select(self, **kwargs) -> ToneContour:
        return select_tone(ToneContext(**kwargs))

    def _params(self, c: ToneContour) -> list[ParamEvent]:
        row, idx = self.table.row_for_contour(c)
        return list(row.params[idx])

    def _first_word(self, sent: Sentence) -> int | None:
        for i, t in enumerate(sent.tokens):
            if t.kind == WORD:
                return i
        return None

    def _move_of(self, ann, clause) -> str:
        node = ann.node(clause.clause_no)
        return node.move if node is not None else "level"

    def _plan_title(self, plan: _SentencePlan):
        sent = plan.sentence
        first = self._first_word(sent)
        if first is None:
            return
        row = self.table.row("title")
        plan.add_prefix(first, _Placed(row.params[0][0], GLUE_RIGHT,
                                       tone=row.contours[0].label))
        bi = assign_break_index(None, BreakContext(title_final=True))
        silence, _ = BI_REALIZATION[bi]
        plan.add_suffix(len(sent.tokens) - 1,
                        _Placed(ev(slnc=silence), GLUE_NONE, bi=bi))

    def _sentence_first_clause(self, sent: Sentence, ann: AnnotationSet):
        indices = {t.index for t in sent.tokens}
        best = None
        for c in ann.clauses:
            span = ann.clause_spans.get(c.clause_no)
            if span and span[0] in indices:
                if best is None or span[0] < ann.clause_spans[best.clause_no][0]:
                    best = c
        return best

    def _plan_initial(self, plan, ann, paragraph_initial, after_first_para):
        sent = plan.sentence
        fc = self._sentence_first_clause(sent, ann)
        if fc is None or self._move_of(ann, fc) != "up" \
                or fc.relevance != "foreground":
            return
        c = self._select(position="sentence_initial", move="up",
                         relevance="foreground",
                         paragraph_initial=paragraph_initial,
                         after_first_paragraph=after_first_para)
        first = self._first_word(sent)
        plan.add_prefix(first, _Placed(self._params(c)[0], GLUE_RIGHT, tone=c.label))
        self.contoured.add(fc.clause_no)
        self.final_suppressed.add(fc.clause_no)

    def _plan_frozen(self, plan, entries):
        if not entries:
            return
        sent = plan.sentence
        pos = 0
        while pos < len(sent.tokens):
            m = match_frozen(sent.tokens, pos, entries)
            if m is None:
                pos += 1
                continue
            entry = m.entry
            for i, p in enumerate(m.pattern_positions):
                if i < len(entry.param_seq):
                    tone = entry.contour_seq[0].label if i == 0 else None
                    plan.add_prefix(p, _Placed(entry.param_seq[i][0], GLUE_RIGHT,
                                               tone=tone))
                plan.consumed.add(p)
            if m.tail_position is not None:
                t = m.tail_position
                plan.add_prefix(t, _Placed(entry.tail_params[0][0], GLUE_RIGHT,
                                           tone=entry.tail_contour.label))
                plan.add_suffix(t, _Placed(entry.tail_params[1][0], GLUE_LEFT))
                plan.add_suffix(t, _Placed(entry.tail_params[2][0], GLUE_LEFT,
                                           bi=BreakIndex.BI23))
                plan.add_suffix(t, _Placed(RSET, GLUE_COMPOUND))
                plan.consumed.add(t)
            pos += m.length

    def _affect_spans(self, plan) -> list[tuple[int, int]]:
        toks = plan.sentence.tokens
        affect = self.config.affect_words
        hits: list[tuple[int, int]] = []
        i = 0
        while i < len(toks):
            if toks[i].kind != WORD or i in plan.consumed:
                i += 1
                continue
            matched = 0
            for length in (3, 2, 1):
                window = toks[i:i + length]
                if len(window) < length or any(t.kind != WORD for t in window):
                    continue
                key = " ".join(t.normalized for t in window)
                if affect.get(key) == "sad":
                    matched = length
                    break
            if matched:
                hits.append((i, i + matched - 1))
                i += matched
            else:
                i += 1
        merged: list[list[int]] = []
        for start, end in hits:
            if merged and self._only_connectors(toks, merged[-1][1] + 1, start):
                merged[-1][1] = end
                merged[-1][2] += 1
            else:
                merged.append([start, end, 1])
        out = []
        for start, end, n_hits in merged:
            while start > 0 and toks[start - 1].kind == WORD \
                    and toks[start - 1].normalized in lexica.NEGATION_WORDS:
                start -= 1
            if n_hits == 1 and end + 1 < len(toks) and toks[end + 1].kind == WORD \
                    and not lexica.function_word(toks[end + 1].normalized):
                end += 1
            out.append((start, end))
        return out

    @staticmethod
    def _only_connectors(toks, a, b) -> bool:
        between = toks[a:b]
        return bool(between) and all(
            t.kind == COMMA or (t.kind == WORD and t.normalized in ("and", "or"))
            for t in between)

    def _plan_affect(self, plan, sgroups, paragraph_initial):
        sent = plan.sentence
        toks = sent.tokens
        spans = self._affect_spans(plan)
        if paragraph_initial and sgroups:
            g = sgroups[0]
            if all(toks[i].normalized in lexica.SENTENCE_ADVERBS
                   for i in g.positions() if toks[i].kind == WORD):
                spans.insert(0, (g.token_span[0], g.token_span[1]))
        for start, end in spans:
            c = self._select(affect="sad")
            plan.add_prefix(start, _Placed(self._params(c)[0], GLUE_RIGHT,
                                           tone=c.label))
            plan.add_suffix(end, _Placed(RSET, GLUE_NONE))
            plan.consumed.update(range(start, end + 1))

    def _plan_exclamative(self, plan, ann, sgroups, pov):
        sent = plan.sentence
        if sent.terminal not in ("question", "exclamation"):
            return
        term_pos = max(i for i, t in enumerate(sent.tokens) if t.kind == TERMINAL)
        region = self._region_of(sent.tokens[term_pos].index)
        if region is None:
            return
        last_word = max((i for i in range(term_pos) if sent.tokens[i].kind == WORD),
                        default=None)
        if last_word is None:
            return
        owner = ann.clause_at(sent.tokens[last_word].index)
        start = None
        if owner is not None:
            span = ann.clause_spans[owner.clause_no]
            for i, t in enumerate(sent.tokens):
                if t.index == span[0]:
                    start = i
                    break
        if start is None:
            start = self._first_word(sent)
        c = self._select(exclamative=True, in_quote=True)
        if sent.terminal == "question":
            plan.add_prefix(start, _Placed(self._params(c)[0], GLUE_RIGHT,
                                           tone=c.label))
        for g, nxt in zip(sgroups, sgroups[1:]):
            if g.token_span[1] >= start and nxt.token_span[0] <= last_word:
                plan.add_suffix_bi(g.token_span[1], BreakIndex.BI3)
        pre_bi = assign_break_index(None, BreakContext(pre_exclamative=True))
        silence, _ = BI_REALIZATION[pre_bi]
        base = self._params(c)[0]
        fused = ev(slnc=silence, pbas=base.pbas, rate=base.rate, volm=base.volm)
        plan.add_suffix(last_word, _Placed(fused, GLUE_LEFT,
                                           tone=c.label, bi=pre_bi))
        if self.config.pov_tracking:
            region_sents = self._region_sentences(region)
            if region_sents and region_sents[-1] == sent.index:
                plan.add_suffix(term_pos, _Placed(RSET, GLUE_NONE))
        plan.consumed.update(range(start, term_pos + 1))
        if owner is not None:
            self.contoured.add(owner.clause_no)
            self.final_suppressed.add(owner.clause_no)

    def _clauses_in(self, sent: Sentence, ann) -> list[tuple[int, object]]:
        by_index = {t.index: i for i, t in enumerate(sent.tokens)}
        out = []
        for c in ann.clauses:
            span = ann.clause_spans.get(c.clause_no)
            if span and span[0] in by_index:
                out.append((by_index[span[0]], c))
        out.sort(key=lambda pair: pair[0])
        return out

    def _plan_clauses(self, plan, ann, sgroups):
        sent = plan.sentence
        toks = sent.tokens
        first = self._first_word(sent)
        for start, c in self._clauses_in(sent, ann):
            if c.clause_no in self.contoured or start in plan.consumed:
                continue
            in_quote = self.depth.get(toks[start].index, 0) > 0
            word = toks[start].normalized
            prev = next((toks[i] for i in range(start - 1, -1, -1)
                         if toks[i].kind == WORD), None)
            group = next((g for g in sgroups
                          if g.token_span[0] <= start <= g.token_span[1]), None)

            if (c.disc_rel == "circumstance" and c.relevance == "foreground"
                    and word in lexica.SUBORDINATE_MARKERS):
                # announcing contour on the marker itself; the clause's own
                # final head still takes its end-of-group treatment
                tone = self._select(subordinate_marker=True)
                base = self._params(tone)[0]
                fused = ev(slnc=100, pbas=base.pbas, rate=base.rate, volm=base.volm)
                plan.add_prefix(start, _Placed(fused, GLUE_RIGHT, tone=tone.label))
            elif c.disc_rel == "elaboration" and in_quote:
                opener = self._select(position="sentence_internal", in_quote=True,
                                      disc_rel="elaboration")
                plan.add_prefix(start, _Placed(self._params(opener)[0], GLUE_RIGHT,
                                               tone=opener.label))
                pred_pos = self._pred_position(sent, ann, c)
                if pred_pos is not None and pred_pos != start:
                    ptone = self._select(elaboration_predicate=True)
                    plan.add_prefix(pred_pos, _Placed(self._params(ptone)[0],
                                                      GLUE_RIGHT, tone=ptone.label))
                self.contoured.add(c.clause_no)
            elif (in_quote and group is not None and group.trigger == "comparative"
                    and start != group.token_span[0]):
                tone = self._select(comparative_continuation=True)
                plan.add_prefix(start, _Placed(ev(slnc=100), GLUE_RIGHT,
                                               bi=BreakIndex.BI2))
                plan.add_prefix(start, _Placed(self._params(tone)[0], GLUE_RIGHT,
                                               tone=tone.label))
                self.contoured.add(c.clause_no)
            elif c.disc_rel == "result" and prev is not None \
                    and prev.normalized == "to":
                tone = self._select(resultative_infinitival=True)
                plan.add_prefix(start, _Placed(ev(slnc=100), GLUE_RIGHT,
                                               bi=BreakIndex.BI2))
                plan.add_prefix(start, _Placed(self._params(tone)[0], GLUE_RIGHT,
                                               tone=tone.label))
                self.contoured.add(c.clause_no)
            elif c.relevance == "foreground" and start != first:
                tone = self._select(position="sentence_internal",
                                    relevance="foreground")
                plan.add_prefix(start, _Placed(ev(slnc=100), GLUE_RIGHT,
                                               bi=BreakIndex.BI2))
                plan.add_prefix(start, _Placed(self._params(tone)[0], GLUE_RIGHT,
                                               tone=tone.label))
                self.contoured.add(c.clause_no)
                self.final_suppressed.add(c.clause_no)

    def _pred_position(self, sent, ann, clause) -> int | None:
        span = ann.clause_spans.get(clause.clause_no)
        if not span:
            return None
        for i, t in enumerate(sent.tokens):
            if span[0] <= t.index <= span[1] and t.kind == WORD \
                    and t.normalized == clause.pred:
                return i
        return None

    def _plan_connectives(self, plan):
        toks = plan.sentence.tokens
        for i, t in enumerate(toks):
            if t.kind != WORD or i in plan.consumed:
                continue
            if t.normalized not in lexica.ADVERSATIVE_CONNECTIVES:
                continue
            prev = toks[i - 1] if i > 0 else None
            if prev is not None and prev.kind == OTHER_PUNCT:
                tone = self._select(position="group_final", head_at_bi33=True)
                plan.add_prefix(i, _Placed(self._params(tone)[0], GLUE_RIGHT,
                                           tone=tone.label))
                plan.add_suffix_bi(i, BreakIndex.BI32)

    def _plan_head_contours(self, plan, ann):
        sent = plan.sentence
        toks = sent.tokens
        for _, c in self._clauses_in(sent, ann):
            if c.clause_no in self.contoured:
                continue
            p = self._pred_position(sent, ann, c)
            if p is None or p in plan.consumed or plan.has_prefix(p):
                continue
            if p + 1 >= len(toks) or toks[p + 1].kind != WORD:
                continue
            nxt = toks[p + 1].normalized
            if nxt in lexica.COMPLEMENT_OPENERS:
                bi = assign_break_index(None, BreakContext(head_followed_by_dependent=True))
            elif nxt in lexica.LOOSE_OPENERS:
                bi = assign_break_index(None, BreakContext(head_followed_by_dependent=False))
            else:
                continue
            if plan.has_prefix(p + 1):
                continue  # the opener already carries its own contour
            if c.pred in self.fired_preds:
                continue  # repeated predicate: prominence follows novelty
            self.fired_preds.add(c.pred)
            copular = False
            for j in range(p - 1, -1, -1):
                if toks[j].kind != WORD:
                    break
                copular = toks[j].normalized in lexica.COPULAS
                break
            tone = self._select(position="group_final", copular_head=copular,
                                head_at_bi33=not copular)
            plan.add_prefix(p, _Placed(self._params(tone)[0], GLUE_RIGHT,
                                       tone=tone.label))
            plan.add_suffix_bi(p, bi)

    def _plan_coordination(self, plan, ann):
        toks = plan.sentence.tokens
        starts = {span[0] for span in ann.clause_spans.values()}
        for i, t in enumerate(toks):
            if t.kind != WORD or t.normalized not in lexica.COORDINATORS:
                continue
            if i in plan.consumed or plan.has_prefix(i):
                continue
            nxt = toks[i + 1] if i + 1 < len(toks) else None
            if t.index in starts or (nxt is not None and nxt.index in starts):
                plan.add_prefix(i, _Placed(ev(slnc=100), GLUE_RIGHT,
                                           bi=BreakIndex.BI2))

    def _plan_quantifiers(self, plan, sgroups, ann):
        for g in sgroups:
            for pos, event, bi, covered in mark_quantifier_slowdown(
                    g, plan.sentence, self.config.quantifiers, plan.consumed):
                plan.add_prefix(pos, _Placed(event, GLUE_RIGHT))
                if bi is not None:
                    plan.add_suffix_bi(pos, assign_break_index(
                        None, BreakContext(before_quantifier=True)))
                else:
                    plan.consumed.update(covered)

    def _plan_group_finals(self, plan, sgroups, ann, doc):
        sent = plan.sentence
        toks = sent.tokens
        continues_in_quote = self.depth.get(sent.tokens[-1].index, 0) > 0
        for gi, g in enumerate(sgroups):
            positions = [i for i in g.positions() if toks[i].kind == WORD]
            if not positions:
                continue
            end = positions[-1]
            sentence_final_group = gi == len(sgroups) - 1
            if end in plan.consumed:
                continue
            owner = ann.clause_at(toks[end].index)
            owner_pred = owner is not None and owner.pred == toks[end].normalized
            suppressed = owner_pred and (
                owner.clause_no in self.final_suppressed or plan.has_prefix(end))

            if len(positions) >= 2:
                t2 = positions[-2]
                t2n = toks[t2].normalized
                cluster = False
                if t2n in lexica.POSSESSIVES and t2 not in plan.consumed:
                    cluster = True
                elif (owner_pred and not suppressed
                        and not lexica.function_word(t2n)
                        and t2n not in PRONOUN_QUANTIFIERS
                        and t2 not in plan.consumed):
                    cluster = True
                if cluster:
                    plan.add_prefix(t2, _Placed(SLOWDOWN_HEAD, GLUE_RIGHT))
                    continue

            if g.junction == END_STOPPED:
                if gi == 0 and all(toks[i].normalized in lexica.SENTENCE_ADVERBS
                                   for i in positions):
                    continue
                if suppressed:
                    if continues_in_quote and sentence_final_group \
                            and not plan.has_bi_suffix(end):
                        plan.add_suffix(end, _Placed(ev(slnc=100), GLUE_LEFT,
                                                     bi=BreakIndex.BI2))
                        plan.end_bi2 = True
                    continue
                if plan.has_bi_suffix(end):
                    continue
                region = self._region_of(toks[end].index)
                in_quote = region is not None
                multi = in_quote and len(self._region_sentences(region)) > 1
                quote_final = multi and self._region_sentences(region)[-1] == sent.index
                tone = self._select(
                    position="group_final",
                    in_quote=in_quote,
                    character_pov=in_quote,
                    relevance=(owner.relevance if owner else "background"),
                    quote_final_sentence=quote_final,
                    sentence_final_group=sentence_final_group)
                plan.add_prefix(end, _Placed(self._params(tone)[0], GLUE_RIGHT,
                                             tone=tone.label))
                if continues_in_quote and sentence_final_group:
                    plan.add_suffix(end, _Placed(ev(slnc=100), GLUE_LEFT,
                                                 bi=BreakIndex.BI2))
                    plan.end_bi2 = True
                else:
                    ctx = BreakContext(
                        at_punct=sent.terminal != "none" or not sentence_final_group,
                        sentence_final=sentence_final_group,
                        paragraph_final=self._paragraph_final(sent, doc))
                    plan.add_suffix_bi(end, assign_break_index(g, ctx))
            else:
                nxt = sgroups[gi + 1] if gi + 1 < len(sgroups) else None
                if nxt is not None and nxt.trigger == "comparative" \
                        and not plan.has_prefix(nxt.token_span[0]):
                    plan.add_prefix(nxt.token_span[0],
                                    _Placed(ev(slnc=100), GLUE_RIGHT,
                                            bi=BreakIndex.BI2))
                if continues_in_quote and sentence_final_group \
                        and not plan.has_bi_suffix(end):
                    plan.add_suffix(end, _Placed(ev(slnc=100), GLUE_LEFT,
                                                 bi=BreakIndex.BI2))
                    plan.end_bi2 = True

    @staticmethod
    def _paragraph_final(sent, doc) -> bool:
        return not any(s.paragraph_index == sent.paragraph_index
                       and s.index > sent.index for s in doc.sentences)

    def _plan_announcement(self, plan, ann, doc):
        sent = plan.sentence
        if sent.terminal != "colon":
            return
        nxt = next((s for s in doc.sentences if s.index == sent.index + 1), None)
        if nxt is None or not nxt.tokens or nxt.tokens[0].kind != QUOTE:
            return
        clauses = self._clauses_in(sent, ann)
        if not clauses:
            return
        if clauses[-1][1].pred not in self.config.comm_verbs:
            return
        plan.add_suffix(len(sent.tokens) - 1, _Placed(ANNOUNCE_EVENT, GLUE_NONE))

    def _plan_pov_chains(self, plans, pov_spans):
        for span in pov_spans:
            if not span.character or len(span.sentences) < 2:
                continue
            prev_plan = None
            for si in span.sentences:
                plan = plans.get(si)
                if plan is None:
                    continue
                if prev_plan is not None:
                    first = self._first_word(plan.sentence)
                    if first is not None:
                        items = []
                        if not prev_plan.end_bi2:
                            items.append(_Placed(ev(slnc=100), GLUE_RIGHT,
                                                 bi=BreakIndex.BI2))
                        tone = self._select(comparative_continuation=True)
                        items.append(_Placed(self._params(tone)[0], GLUE_RIGHT,
                                             tone=tone.label))
                        plan.prefix[first] = items + plan.prefix.get(first, [])
                prev_plan = plan


def run_pipeline(text: str, sidecar_text: str | None, config: Config,
                 table: MappingTable = DEFAULT_TABLE) -> PipelineResult:
    from .annotations import parse_sidecar

    manager = ProsodyManager(config, table)
    ann = parse_sidecar(sidecar_text) if sidecar_text is not None else None
    return manager.process(text, ann)
