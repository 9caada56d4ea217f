"""Run configuration.

Thresholds, lexicon paths and switches.  Everything defaults to the shipped
fixture lexica so the tool runs with zero configuration.  A config file is
flat ``key = value`` text; command-line flags override it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from . import lexica
from .annotations import DEFAULT_RELEVANCE_RULES


@dataclass
class Config:
    min_len: int = 2
    max_len: int = 12
    max_subj: int = 4
    title_mode: str = "auto"            # auto | force | off
    emit_mode: str = "markup"           # markup | tobi | both | groups
    pov_tracking: bool = True
    multiword_path: Path = field(default_factory=lambda: lexica.data_path("multiwords.txt"))
    phonetic_path: Path = field(default_factory=lambda: lexica.data_path("phonetic.tsv"))
    frozen_path: Path = field(default_factory=lambda: lexica.data_path("frozen.tsv"))
    affect_path: Path = field(default_factory=lambda: lexica.data_path("affect.tsv"))
    quantifier_path: Path = field(default_factory=lambda: lexica.data_path("quantifiers.txt"))
    comm_verb_path: Path = field(default_factory=lambda: lexica.data_path("comm_verbs.txt"))
    relevance_rules: list = field(default_factory=lambda: list(DEFAULT_RELEVANCE_RULES))

    # loaded lexica (filled by load_lexica)
    multiwords: list[list[str]] = field(default_factory=list)
    phon_lexicon: object = None
    frozen_table: list = field(default_factory=list)
    affect_words: dict[str, str] = field(default_factory=dict)
    quantifiers: set[str] = field(default_factory=set)
    comm_verbs: set[str] = field(default_factory=set)

    def __post_init__(self):
        if self.min_len > self.max_len:
            raise ValueError("min_len must not exceed max_len")

    def load_lexica(self) -> "Config":
        for path in (self.multiword_path, self.phonetic_path, self.frozen_path,
                     self.affect_path, self.quantifier_path, self.comm_verb_path):
            if not Path(path).exists():
                raise FileNotFoundError(f"lexicon file not found: {path}")
        self.multiwords = lexica.load_multiwords(self.multiword_path)
        self.phon_lexicon = lexica.load_phon_lexicon(self.phonetic_path)
        self.frozen_table = lexica.load_frozen_table(self.frozen_path)
        self.affect_words = lexica.load_tagged_words(self.affect_path)
        self.quantifiers = lexica.load_word_set(self.quantifier_path)
        self.comm_verbs = lexica.load_word_set(self.comm_verb_path)
        return self


_BOOL_KEYS = {"pov_tracking"}
_INT_KEYS = {"min_len", "max_len", "max_subj"}
_PATH_KEYS = {"multiword_path", "phonetic_path", "frozen_path", "affect_path",
              "quantifier_path", "comm_verb_path"}
_STR_KEYS = {"title_mode", "emit_mode"}


def parse_config_file(path: str | Path, base: Config | None = None) -> Config:
    cfg = base or Config()
    text = Path(path).read_text(encoding="utf-8")
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not value:
            raise ValueError(f"{path}:{line_no}: expected key = value")
        if key in _INT_KEYS:
            setattr(cfg, key, int(value))
        elif key in _BOOL_KEYS:
            setattr(cfg, key, value.lower() in ("1", "true", "yes", "on"))
        elif key in _PATH_KEYS:
            setattr(cfg, key, (Path(path).parent / value).resolve()
                    if not Path(value).is_absolute() else Path(value))
        elif key in _STR_KEYS:
            setattr(cfg, key, value)
        else:
            raise ValueError(f"{path}:{line_no}: unknown key {key!r}")
    if cfg.min_len > cfg.max_len:
        raise ValueError("min_len must not exceed max_len")
    return cfg
