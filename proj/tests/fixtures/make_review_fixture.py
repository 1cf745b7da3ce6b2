#!/usr/bin/env python3
"""Regenerates review_270.jsonl and the mock rule files next to this script.

Six comment groups, each marked by its opening phrase, so the mock backends
can answer by substring:

  group  gold   n   gpt35  llama3
  P      valid  63  valid  valid
  T      valid  83  noisy  valid
  W      valid  26  noisy  noisy
  M      noisy  11  valid  valid
  Y      noisy  37  noisy  valid
  K      noisy  50  noisy  noisy
"""
import json
import pathlib
import random

HERE = pathlib.Path(__file__).resolve().parent
rng = random.Random(20240611)

SUBJECTS = ["parseHeader", "retryCount", "configLoader", "buffer", "userCache", "timeoutMs", "pathJoin",
            "tokenList", "sessionId", "writeBatch", "indexMap", "lockGuard", "queueDepth", "fileHandle"]
MODULES = ["Loader", "Client", "Store", "Parser", "Worker", "Router", "Codec"]
LANGS = [("java", ".java"), ("py", ".py"), ("go", ".go"), ("js", ".js"), ("cpp", ".cc"), ("rb", ".rb"),
         ("php", ".php"), ("c", ".c"), ("cs", ".cs")]

GROUPS = [
    ("P", "valid", 63, "valid", "valid", [
        "Please rename {s} to something that says what it holds.",
        "Please add a null check before using {s}, it can be unset here.",
        "Please extract the {s} handling into a helper, it is duplicated below.",
        "Please add a unit test covering the empty {s} case.",
    ]),
    ("T", "valid", 83, "noisy", "valid", [
        "Nit: {s} should be final.",
        "Nit: the log message for {s} has a typo.",
        "Nit: move {s} closer to where it is used.",
    ]),
    ("W", "valid", 26, "noisy", "noisy", [
        "Should we close {s} in a finally block instead?",
        "Should we use the existing constant for {s} here?",
    ]),
    ("M", "noisy", 11, "valid", "valid", [
        "Maybe later we can revisit {s}.",
        "Maybe later, not sure {s} matters.",
    ]),
    ("Y", "noisy", 37, "noisy", "valid", [
        "Why did you change {s}?",
        "Why did you pick this name for {s}?",
    ]),
    ("K", "noisy", 50, "noisy", "noisy", [
        "Thanks for cleaning up {s}.",
        "Thanks for the quick fix on {s}, looks good.",
    ]),
]

MARKERS = {"P": "Please ", "T": "Nit: ", "W": "Should we ", "M": "Maybe later", "Y": "Why did you", "K": "Thanks for"}


def make_diff(subject, i):
    start = 10 + (i * 7) % 180
    return (f"@@ -{start},4 +{start},4 @@\n"
            f" int compute() {{\n"
            f"-    int {subject} = load({i});\n"
            f"+    int {subject} = load({i}, true);\n"
            f"     return {subject};\n"
            f" }}\n")


def main():
    rows = []
    for code, gold, n, _, _, templates in GROUPS:
        for i in range(n):
            subject = SUBJECTS[(i + len(rows)) % len(SUBJECTS)]
            lang, ext = LANGS[(i * 3 + len(rows)) % len(LANGS)]
            where = f"{subject} in {MODULES[len(rows) % len(MODULES)]}{len(rows)}{ext}"
            rows.append({"group": code, "label": gold, "lang": lang,
                         "msg": templates[i % len(templates)].format(s=where),
                         "patch": make_diff(subject, len(rows))})
    rng.shuffle(rows)
    with open(HERE / "review_270.jsonl", "w") as f:
        for i, r in enumerate(rows, 1):
            rec = {"id": f"r{i:04d}", "lang": r["lang"], "split": "test", "msg": r["msg"], "patch": r["patch"],
                   "label": r["label"]}
            f.write(json.dumps(rec, sort_keys=True) + "\n")

    for model, col in (("gpt35", 3), ("llama3", 4)):
        rules = [{"match": f"Review comment:\n{MARKERS[g[0]]}",
                  "response": f"Label: {g[col]}\nReason: group {g[0]}."} for g in GROUPS]
        doc = {"rules": rules, "default": "I cannot tell.", "embedding_dim": 64}
        (HERE / f"mock_{model}.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
