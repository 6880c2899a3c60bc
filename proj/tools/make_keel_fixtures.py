#!/usr/bin/env python3
"""Rebuild the KEEL `.dat` fixtures under tests/data/keel/.

The `keel-ds` wheel ships the KEEL benchmark rows with the header block
stripped, so a header is synthesized here: one `@attribute` per input
column (integer or real, with its observed range), a nominal `Class`
output listing labels in order of first appearance, and the usual
`@inputs` / `@outputs` / `@data` lines.

    pip download --no-deps keel-ds && python tools/make_keel_fixtures.py keel_ds-*.whl
"""

import argparse
import io
import pathlib
import zipfile

# fixture name -> path inside the wheel
DATASETS = {
    "australian": "balanced/raw/australian.dat",
    "bupa": "balanced/raw/bupa.dat",
    "german": "balanced/raw/german.dat",
    "haberman": "imbalanced/raw/haberman.dat",
    "heart": "balanced/raw/heart.dat",
    "ionosphere": "balanced/raw/ionosphere.dat",
    "mammographic": "balanced/raw/mammographic.dat",
    "monk-2": "balanced/raw/monk-2.dat",
    "phoneme": "balanced/raw/phoneme.dat",
    "pima": "balanced/raw/pima.dat",
    "ring": "balanced/raw/ring.dat",
    "sonar": "balanced/raw/sonar.dat",
    "spambase": "balanced/raw/spambase.dat",
    "titanic": "balanced/raw/titanic.dat",
    "twonorm": "balanced/raw/twonorm.dat",
    "wisconsin": "balanced/raw/wisconsin.dat",
}


def is_int(token):
    try:
        return float(token) == int(float(token)) and "." not in token and "e" not in token.lower()
    except ValueError:
        return False


def convert(name, text):
    rows = [[t.strip() for t in line.split(",")] for line in text.splitlines() if line.strip()]
    n_inputs = len(rows[0]) - 1
    out = io.StringIO()
    out.write(f"@relation {name}\n")
    for c in range(n_inputs):
        col = [r[c] for r in rows]
        try:
            values = [float(v) for v in col]
        except ValueError:
            # nominal input column (german); kept so the loader's rejection path has a real fixture
            levels = list(dict.fromkeys(col))
            out.write(f"@attribute A{c + 1} {{{', '.join(levels)}}}\n")
            continue
        kind = "integer" if all(is_int(v) for v in col) else "real"
        lo, hi = min(values), max(values)
        if kind == "integer":
            out.write(f"@attribute A{c + 1} {kind} [{int(lo)}, {int(hi)}]\n")
        else:
            out.write(f"@attribute A{c + 1} {kind} [{lo!r}, {hi!r}]\n")
    labels = []
    for r in rows:
        if r[-1] not in labels:
            labels.append(r[-1])
    out.write("@attribute Class {" + ", ".join(labels) + "}\n")
    out.write("@inputs " + ", ".join(f"A{c + 1}" for c in range(n_inputs)) + "\n")
    out.write("@outputs Class\n@data\n")
    for r in rows:
        out.write(", ".join(r) + "\n")
    return out.getvalue()


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("wheel")
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parents[1] / "tests/data/keel"))
    args = ap.parse_args()
    dest = pathlib.Path(args.out)
    dest.mkdir(parents=True, exist_ok=True)
    with zipfile.ZipFile(args.wheel) as wheel:
        for name, inner in DATASETS.items():
            text = wheel.read("keel_ds/data/" + inner).decode()
            (dest / f"{name}.dat").write_text(convert(name, text))
            print(name)


if __name__ == "__main__":
    main()
