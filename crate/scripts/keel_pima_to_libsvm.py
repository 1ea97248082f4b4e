#!/usr/bin/env python3
"""Convert the Pima Indians diabetes table shipped in the `keel-ds` wheel to
LIBSVM sparse text (the `diabetes` benchmark: 768 samples, 8 features).

Usage: python3 scripts/keel_pima_to_libsvm.py path/to/keel_ds-*.whl > data/diabetes
"""
import sys
import zipfile

MEMBER = "keel_ds/data/balanced/raw/pima.dat"
LABELS = {"tested_positive": "+1", "tested_negative": "-1"}


def main() -> None:
    wheel = zipfile.ZipFile(sys.argv[1])
    for line in wheel.read(MEMBER).decode().splitlines():
        line = line.strip()
        if not line or line.startswith("@"):
            continue
        *values, label = [tok.strip() for tok in line.split(",")]
        feats = " ".join(
            f"{i}:{v}" for i, v in enumerate(values, start=1) if float(v) != 0.0
        )
        print(f"{LABELS[label]} {feats}")


if __name__ == "__main__":
    main()
