#!/usr/bin/env python3
"""Fetch the MovieLens-100K ratings file (u.data) into data/ml-100k/.

Tries the GroupLens archive first. When that host is unreachable, rebuilds
u.data from the copy bundled in the pytorch-widedeep wheel on PyPI (same
100000 rows, same order).
"""
import argparse
import glob
import io
import pathlib
import subprocess
import sys
import tempfile
import urllib.request
import zipfile

GROUPLENS_URL = "https://files.grouplens.org/datasets/movielens/ml-100k.zip"
WHEEL_MEMBER = "pytorch_widedeep/datasets/data/MovieLens100k_data.parquet.brotli"


def from_grouplens(dest: pathlib.Path) -> bool:
    try:
        with urllib.request.urlopen(GROUPLENS_URL, timeout=30) as resp:
            payload = resp.read()
    except OSError as err:
        print(f"grouplens.org unavailable: {err}", file=sys.stderr)
        return False
    with zipfile.ZipFile(io.BytesIO(payload)) as archive:
        dest.write_bytes(archive.read("ml-100k/u.data"))
    return True


def from_wheel(dest: pathlib.Path) -> bool:
    import pandas as pd

    with tempfile.TemporaryDirectory() as tmp:
        cmd = [sys.executable, "-m", "pip", "download", "--no-deps", "-d", tmp,
               "pytorch-widedeep==1.7.0"]
        if subprocess.run(cmd, check=False).returncode != 0:
            return False
        wheel = glob.glob(f"{tmp}/*.whl")[0]
        with zipfile.ZipFile(wheel) as archive:
            frame = pd.read_parquet(io.BytesIO(archive.read(WHEEL_MEMBER)))
    frame = frame[["user_id", "movie_id", "rating", "timestamp"]]
    frame.to_csv(dest, sep="\t", header=False, index=False)
    return True


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    root = pathlib.Path(__file__).resolve().parent.parent
    parser.add_argument("--dest", default=root / "data" / "ml-100k" / "u.data",
                        type=pathlib.Path)
    args = parser.parse_args()
    args.dest.parent.mkdir(parents=True, exist_ok=True)
    if args.dest.exists():
        print(f"{args.dest} already present")
        return 0
    if from_grouplens(args.dest) or from_wheel(args.dest):
        lines = sum(1 for _ in args.dest.open())
        print(f"wrote {args.dest} ({lines} ratings)")
        return 0 if lines == 100000 else 1
    print("could not obtain MovieLens-100K", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
