"""Run every config in configs/ and store SHA-256 digests of its outputs in tests/goldens/."""

import argparse
import hashlib
import json
import tempfile
from pathlib import Path

from syncert.cli import run_config

ROOT = Path(__file__).resolve().parents[1]


def digests(out_dir):
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in sorted(Path(out_dir).iterdir())}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("configs", nargs="*", help="subset of config paths (default: all)")
    args = ap.parse_args()
    paths = [Path(p) for p in args.configs] or sorted((ROOT / "configs").glob("*.json"))
    gold = ROOT / "tests" / "goldens"
    gold.mkdir(exist_ok=True)
    for path in paths:
        with tempfile.TemporaryDirectory() as tmp:
            _, summary = run_config(path, tmp)
            record = {"summary": summary, "files": digests(tmp)}
        (gold / f"{path.stem}.json").write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")
        print(f"{path.stem}: {summary}")


if __name__ == "__main__":
    main()
