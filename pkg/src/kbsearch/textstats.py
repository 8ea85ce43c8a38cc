"""Term-frequency reports per language.

English text is lowercased and split on non-alphanumeric runs. Chinese
text is tokenized one CJK codepoint per token; embedded Latin runs fall
back to the English rule. Character-level CJK keeps the report
deterministic with no segmenter dependency.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass

from .corpus import CorpusManifest

_EN_TOKEN_RE = re.compile(r"[0-9a-z]+")

# CJK Unified Ideographs plus extension A and the compatibility block.
_CJK_RANGES = (
    (0x4E00, 0x9FFF),
    (0x3400, 0x4DBF),
    (0xF900, 0xFAFF),
)


def _is_cjk(ch: str) -> bool:
    code = ord(ch)
    return any(lo <= code <= hi for lo, hi in _CJK_RANGES)


def tokenize(text: str, language: str) -> list[str]:
    if language == "en":
        return _EN_TOKEN_RE.findall(text.lower())
    if language == "zh":
        tokens = []
        latin_run = []
        for ch in text:
            if _is_cjk(ch):
                if latin_run:
                    tokens.extend(tokenize("".join(latin_run), "en"))
                    latin_run = []
                tokens.append(ch)
            else:
                latin_run.append(ch)
        if latin_run:
            tokens.extend(tokenize("".join(latin_run), "en"))
        return tokens
    raise ValueError(f"unknown language {language!r}")


@dataclass(frozen=True)
class TermCount:
    term: str
    count: int


def term_frequencies(manifest: CorpusManifest, language: str | None = None,
                     stopwords=frozenset()) -> list[TermCount]:
    """Aggregate token counts over item texts, sorted count desc, term asc."""
    stopwords = frozenset(stopwords)
    counts = {}
    for item in manifest.items:
        if language is not None and item.language != language:
            continue
        for token in tokenize(item.text, item.language):
            if token in stopwords:
                continue
            counts[token] = counts.get(token, 0) + 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [TermCount(term=t, count=c) for t, c in ranked]


def report_to_csv(report: list[TermCount]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["term", "count"])
    for tc in report:
        writer.writerow([tc.term, tc.count])
    return buf.getvalue()
