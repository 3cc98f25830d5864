#!/usr/bin/env python3
"""Regenerate the bundled benchmark fixtures under src/splcover/data/.

Maintenance tool; the generated files are committed so tests never depend
on this script at runtime.
"""

import random
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "tests"))

from modelgen import model_with_products, random_pp_text  # noqa: E402

from splcover.model import parse_model, serialize  # noqa: E402

DATA = REPO / "src" / "splcover" / "data"


def main():
    # prioritized products for the bundled GPL model
    fm = parse_model((DATA / "gpl.fm").read_text())
    rng = random.Random(11)
    (DATA / "gpl.pp").write_text(random_pp_text(rng, fm, 8))

    bench = DATA / "bench"
    bench.mkdir(exist_ok=True)
    for seed in range(10):
        fm = model_with_products(seed, 13, 60, 2000)
        fm.name = f"synth{seed:02d}"
        (bench / f"synth{seed:02d}.fm").write_text(serialize(fm))
        rng = random.Random(seed + 500)
        (bench / f"synth{seed:02d}.pp").write_text(random_pp_text(rng, fm, 8))
    print("fixtures written to", DATA)


if __name__ == "__main__":
    main()
