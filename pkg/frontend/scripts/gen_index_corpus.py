#!/usr/bin/env python3
"""Regenerate the validator fuzz corpus from the backend parser.

Every case is labeled by actually running the service-side index parser,
so the TypeScript validator test asserts exact accept/reject equivalence
rather than a hand-maintained approximation. Run from frontend/:

    python3 scripts/gen_index_corpus.py
"""

import json
import random
from pathlib import Path

from glyphforge.dataset import format_index, parse_index
from glyphforge.dataset.index import AnnotationIndex
from glyphforge.errors import MalformedIndex

N_CASES = 500
SEED = 20240424


def random_valid(rng):
    ix = AnnotationIndex(
        rng.randint(1, 10**6), rng.randint(1, 10**4), rng.randint(1, 100), rng.randint(0, 10**4)
    )
    return format_index(ix)


def mutate(rng, s):
    mutators = [
        lambda: s.replace("_", "-", 1),
        lambda: s + "_" + str(rng.randint(0, 9)),
        lambda: "_".join(s.split("_")[:3]),
        lambda: "0" + s,
        lambda: s.replace("_", "_0", 1),
        lambda: s + " ",
        lambda: " " + s,
        lambda: s.replace("_", "__", 1),
        lambda: s[: len(s) // 2] + "x" + s[len(s) // 2 :],
        lambda: "-" + s,
        lambda: s.upper().replace("_", "_+", 1),
        lambda: "",
        lambda: "_".join("0" for _ in range(4)),
        lambda: s.replace(s.split("_")[0], "0", 1),
        lambda: s.replace("_", "_ ", 1),
        lambda: str(rng.random()),
        lambda: s.replace("_", ".", 1),
        lambda: "一_1_1_0",
        lambda: s.split("_")[0],
        lambda: s + "_",
    ]
    return rng.choice(mutators)()


def main():
    rng = random.Random(SEED)
    cases = []
    seen = set()
    while len(cases) < N_CASES:
        base = random_valid(rng)
        candidate = base if rng.random() < 0.4 else mutate(rng, base)
        if candidate in seen:
            continue
        seen.add(candidate)
        try:
            parse_index(candidate)
            valid = True
        except MalformedIndex:
            valid = False
        cases.append({"input": candidate, "valid": valid})
    out = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "index_corpus.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps({"seed": SEED, "cases": cases}, indent=1, ensure_ascii=False) + "\n")
    n_valid = sum(1 for c in cases if c["valid"])
    print(f"wrote {len(cases)} cases ({n_valid} valid, {len(cases) - n_valid} invalid) -> {out}")


if __name__ == "__main__":
    main()
