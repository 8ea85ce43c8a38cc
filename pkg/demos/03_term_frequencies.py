"""Term-frequency reports for mixed Chinese/English descriptions.

English tokenizes on word boundaries; Chinese tokenizes per CJK
codepoint with embedded Latin runs handled by the English rule.
"""

import json

from kbsearch import load_manifest
from kbsearch.textstats import report_to_csv, term_frequencies, tokenize

print(tokenize("Renal cell carcinoma, grade 2", "en"))
print(tokenize("IgA肾病 PAS染色", "zh"))

RECORDS = [
    ("P00000001", "membranous nephropathy with spikes", "en"),
    ("P00000002", "crescentic glomerulonephritis with fibrinoid necrosis", "en"),
    ("P00000003", "membranous pattern on silver stain", "en"),
    ("P00000004", "肾小球 膜性 病变", "zh"),
    ("P00000005", "IgA肾病 系膜区 沉积", "zh"),
]
lines = [json.dumps({
    "id": rid, "text": text, "image_path": f"img/{rid}.jpg",
    "language": lang, "image_kind": "histopathology",
    "disease_class": "other", "source_book": "demo",
}, ensure_ascii=False) for rid, text, lang in RECORDS]
manifest = load_manifest("\n".join(lines).encode("utf-8"))

for language in ("en", "zh"):
    report = term_frequencies(manifest, language=language,
                              stopwords={"with", "on"})
    print(f"\ntop {language} terms:")
    for tc in report[:6]:
        print(f"  {tc.term}\t{tc.count}")

print("\nCSV output:")
print(report_to_csv(term_frequencies(manifest, language="zh")))
