"""Plain text with no sidecar: the shallow analysis path.

Without clause annotations the pipeline falls back to heuristics: clauses
split at punctuation and conjunctions, tense from suffixes and a small
irregular list, relevance from the change feature, moves derived.  The
result is rougher than the sidecar path but runs on anything.
"""

from prosomark import Config, render_markup, render_tobi, run_pipeline

TEXT = """The storm broke at last. Nobody moved, and the old captain said:
"That is all very well, but who is to steer the ship?" The sailors looked
at one another and everybody waited."""

cfg = Config().load_lexica()
cfg.title_mode = "off"
result = run_pipeline(TEXT, None, cfg)

print("=== shallow clause analysis")
for c in result.ann.clauses:
    span = result.ann.clause_spans[c.clause_no]
    print(f"  clause {c.clause_no:>2}  pred={c.pred:<8} tense={c.tense:<4} "
          f"{c.relevance:<10} {c.disc_rel:<12} span={span}")

print("\n=== breath groups")
print(result.groups_text())

print("=== markup")
print(render_markup(result.doc, result.script))

print("=== annotation")
print(render_tobi(result.doc, result.script))
