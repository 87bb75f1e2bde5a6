"""Parse the committed WNDB fixture and run a few lookups.

The same loader works on a full WordNet database directory: point
``load_wordnet_dir`` at it and every index/data pair found is merged.
"""
from pathlib import Path

from edu_prompting.wordnet import TermNotFound, load_wordnet_dir, lookup, synset_listing

WORDNET_DIR = Path(__file__).resolve().parent.parent / "testdata" / "wordnet"

index = load_wordnet_dir(WORDNET_DIR)
print(f"loaded {len(index.synsets)} synsets, {len(index.senses)} lemmas\n")

for term in ("dog", "draft", "concise", "True Cat"):
    bundle = lookup(term, index)
    print(f"{term}:")
    print("  " + bundle.as_text().replace("\n", "\n  "))
    print()

try:
    lookup("zeppelin", index)
except TermNotFound as missing:
    print(f"missing terms raise: {missing}\n")

print("deterministic synset listing (first three rows):")
for line in synset_listing(index).splitlines()[:3]:
    print(" ", line)
