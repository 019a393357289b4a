#!/usr/bin/env python3
"""Download the two binary-classification benchmark datasets into data/.

Both come from the LIBSVM binary collection. Files are stored uncompressed
as data/a9a.libsvm and data/phishing.libsvm; the real-dataset benchmark
tests and example configs look them up there (override the directory with
the PROXSGD_DATA_DIR environment variable).

This needs outbound network access, so it typically has to run outside a
sandboxed environment. Downloads are verified by parsing and checking the
expected shape before being kept.
"""

import gzip
import sys
import urllib.request
from pathlib import Path

BASE = "https://www.csie.ntu.edu.tw/~cjlin/libsvmtools/datasets/binary"

# name -> (url suffix, expected samples, expected features)
DATASETS = {
    "a9a": ("a9a", 32_561, 123),
    "phishing": ("phishing", 11_055, 68),
}

DATA_DIR = Path(__file__).resolve().parents[1] / "data"


def fetch(name: str, suffix: str, n_rows: int, n_cols: int) -> bool:
    dest = DATA_DIR / f"{name}.libsvm"
    if dest.exists():
        print(f"{dest} already present, skipping")
        return True
    url = f"{BASE}/{suffix}"
    print(f"downloading {url} ...")
    try:
        with urllib.request.urlopen(url, timeout=120) as resp:
            raw = resp.read()
    except OSError as e:
        print(f"  failed: {e}", file=sys.stderr)
        return False
    if raw[:2] == b"\x1f\x8b":
        raw = gzip.decompress(raw)
    text = raw.decode("ascii")

    # validate before keeping
    from proxsgd.core import parse_libsvm

    ds = parse_libsvm(text)
    if ds.n_samples != n_rows or ds.n_features > n_cols:
        print(
            f"  unexpected shape {ds.n_samples}x{ds.n_features}, "
            f"wanted {n_rows}x<= {n_cols}",
            file=sys.stderr,
        )
        return False
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    dest.write_text(text)
    print(f"  wrote {dest} ({ds.n_samples} samples, {ds.n_features} features)")
    return True


def main() -> int:
    ok = True
    for name, (suffix, rows, cols) in DATASETS.items():
        ok &= fetch(name, suffix, rows, cols)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
