#!/usr/bin/env python3
"""Download and unpack the benchmark datasets the presets expect.

Usage:
    python3 tools/fetch_data.py [--data-dir data] [archive ...]

Without arguments every archive any preset needs is fetched. Each archive
lands as data/<Name>/<Name>_TRAIN.ts and data/<Name>/<Name>_TEST.ts, which is
where `alt run --preset <name>` looks by default. Stdlib only; needs plain
HTTPS access to timeseriesclassification.com.
"""

import argparse
import io
import sys
import urllib.error
import urllib.request
import zipfile
from pathlib import Path

ARCHIVES = [
    "BasicMotions",
    "Coffee",
    "Epilepsy",
    "Epilepsy2",
    "FordA",
    "FordB",
    "GunPoint",
    "GunPointAgeSpan",
    "GunPointMaleVersusFemale",
    "GunPointOldVersusYoung",
    "PowerCons",
]

URL_TEMPLATES = [
    "https://timeseriesclassification.com/aeon-toolkit/{name}.zip",
    "https://www.timeseriesclassification.com/aeon-toolkit/{name}.zip",
]


def fetch(name: str, data_dir: Path) -> bool:
    target = data_dir / name
    train = target / f"{name}_TRAIN.ts"
    test = target / f"{name}_TEST.ts"
    if train.exists() and test.exists():
        print(f"{name}: already present, skipping")
        return True

    payload = None
    for template in URL_TEMPLATES:
        url = template.format(name=name)
        try:
            print(f"{name}: downloading {url}")
            with urllib.request.urlopen(url, timeout=120) as resp:
                payload = resp.read()
            break
        except (urllib.error.URLError, OSError) as exc:
            print(f"{name}: {exc}", file=sys.stderr)
    if payload is None:
        return False

    target.mkdir(parents=True, exist_ok=True)
    with zipfile.ZipFile(io.BytesIO(payload)) as zf:
        for member in zf.namelist():
            leaf = Path(member).name
            if leaf in (train.name, test.name):
                (target / leaf).write_bytes(zf.read(member))
    ok = train.exists() and test.exists()
    print(f"{name}: {'ok' if ok else 'archive did not contain the .ts files'}")
    return ok


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data-dir", default="data", type=Path)
    parser.add_argument("archives", nargs="*", default=None)
    args = parser.parse_args()

    names = args.archives or ARCHIVES
    unknown = [n for n in names if n not in ARCHIVES]
    if unknown:
        print(f"unknown archive(s): {', '.join(unknown)}", file=sys.stderr)
        print(f"known: {', '.join(ARCHIVES)}", file=sys.stderr)
        return 2

    failures = [n for n in names if not fetch(n, args.data_dir)]
    if failures:
        print(f"failed: {', '.join(failures)}", file=sys.stderr)
        return 1
    print("all archives ready")
    return 0


if __name__ == "__main__":
    sys.exit(main())
