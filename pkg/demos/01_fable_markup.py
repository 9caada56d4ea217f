"""From a fable to bit-exact speech-command markup.

Walks the full pipeline on the shipped mice-council story: tokenization
with multiword merging, the gold clause sidecar, breath-group
segmentation, and the rendered embedded-command text, which is verified
against the golden file at the end.
"""

from prosomark import Config, render_markup, run_pipeline
from prosomark.lexica import data_path

FIXTURES = data_path("fixtures")

cfg = Config().load_lexica()
text = (FIXTURES / "belling_cat.txt").read_text(encoding="utf-8")
sidecar = (FIXTURES / "belling_cat.ann").read_text(encoding="utf-8")

result = run_pipeline(text, sidecar, cfg)

print("=== tokens of the first sentence (multiwords merged)")
for tok in result.doc.sentences[1].tokens[:12]:
    print(f"  {tok.index:>3}  {tok.normalized:<12} {tok.surface!r}")

print("\n=== breath groups (one per line, boundary-marked)")
print(result.groups_text())

print("=== embedded-command markup (copy-pasteable)")
markup = render_markup(result.doc, result.script)
print(markup)

golden = (FIXTURES / "belling_cat.markup.golden").read_text(encoding="utf-8")
print("byte-identical to the golden file:", markup == golden)
