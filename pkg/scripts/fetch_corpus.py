#!/usr/bin/env python3
"""Fetch the benchmark corpus used by the golden acceptance tests.

Downloads the SteinLib testsets that contain the desk-scale instances
(B, PUC, DIW, ES10FST, LIN) plus the obstacle-avoiding and rectilinear
DIMACS-challenge sets (ind*/rc* and CARIOCA), and unpacks the needed
files into:

    data/steinlib/<name>.stp
    data/carioca/<name>.pts     (integral point sets, scaled by 10^8)

Needs outbound network access.  Instance files are upstream benchmark
data and are not redistributed with this repository.

Usage: python3 scripts/fetch_corpus.py [--data-dir DIR] [--base-url URL]
"""

from __future__ import annotations

import argparse
import gzip
import io
import re
import sys
import tarfile
import urllib.request
from decimal import Decimal
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent

STEINLIB_BASE = "https://steinlib.zib.de/download"
DIMACS_BASE = "https://dimacs11.zib.de/instances"

# testset archive -> instances we need from it
STEINLIB_SETS = {
    "B.tgz": ["b01", "b02", "b04", "b05"]
    + [f"b{i:02d}" for i in range(1, 19)],
    "PUC.tgz": ["cc3-4p", "cc3-4u", "cc6-2p", "cc6-2u"],
    "DIW.tgz": ["diw0250", "diw0393"],
    "ES10FST.tgz": [f"es10fst{i:02d}" for i in range(1, 16)],
    "LIN.tgz": [f"lin{i:02d}" for i in range(1, 11)],
}

# DIMACS-challenge archives carrying the obstacle-avoiding STP instances
DIMACS_STP_ARCHIVES = ["Copenhagen14.tgz", "copenhagen14.tgz", "RPFST.tgz"]
DIMACS_STP_WANTED = ["ind1", "rc01"]

CARIOCA_ARCHIVES = ["CARIOCA.tgz", "carioca.tgz"]
CARIOCA_WANTED = ["carioca_3_11_01", "carioca_4_11_01"]

SCALE = 10 ** 8


def fetch(url: str) -> bytes:
    print(f"  GET {url}")
    with urllib.request.urlopen(url, timeout=120) as resp:
        return resp.read()


def try_fetch(urls) -> bytes | None:
    for url in urls:
        try:
            return fetch(url)
        except Exception as exc:  # noqa: BLE001 - report and try the next mirror
            print(f"    failed: {exc}")
    return None


def extract_members(blob: bytes):
    """Yield (basename, bytes) for every file in a .tgz / .tar.gz / .gz blob."""
    bio = io.BytesIO(blob)
    try:
        with tarfile.open(fileobj=bio, mode="r:*") as tar:
            for member in tar.getmembers():
                if member.isfile():
                    data = tar.extractfile(member).read()
                    yield Path(member.name).name, data
        return
    except tarfile.TarError:
        pass
    bio.seek(0)
    try:
        yield "member", gzip.decompress(bio.read())
    except OSError:
        bio.seek(0)
        yield "member", bio.read()


def save_stp(data_dir: Path, name: str, data: bytes) -> None:
    out = data_dir / "steinlib" / f"{name}.stp"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(data)
    print(f"    wrote {out}")


def points_from_stp_coordinates(text: str) -> list[tuple[int, ...]] | None:
    """Terminal point set from an STP file carrying a Coordinates section."""
    coords = {}
    terms = []
    for line in text.splitlines():
        tokens = line.split()
        if not tokens:
            continue
        key = tokens[0].upper()
        if set(key) == {"D"} and len(key) >= 2:
            coords[int(tokens[1])] = tuple(
                scale_to_int(t) for t in tokens[2:]
            )
        elif key == "T" and len(tokens) == 2:
            terms.append(int(tokens[1]))
    if not terms or any(t not in coords for t in terms):
        return None
    return [coords[t] for t in terms]


def scale_to_int(token: str) -> int:
    value = Decimal(token)
    scaled = value * SCALE
    if scaled != scaled.to_integral_value():
        raise ValueError(f"coordinate {token} not integral after 10^8 scaling")
    return int(scaled)


def points_from_plain_rows(text: str) -> list[tuple[int, ...]] | None:
    """Point set from a plain numeric table (one point per row)."""
    rows = []
    for line in text.splitlines():
        tokens = line.split()
        if not tokens or tokens[0].startswith(("#", "%")):
            continue
        try:
            rows.append(tuple(scale_to_int(t) for t in tokens))
        except Exception:
            return None
    widths = {len(r) for r in rows}
    if len(rows) < 2 or len(widths) != 1 or widths.pop() < 2:
        return None
    return rows


def save_points(data_dir: Path, name: str, pts: list[tuple[int, ...]]) -> None:
    out = data_dir / "carioca" / f"{name}.pts"
    out.parent.mkdir(parents=True, exist_ok=True)
    d = len(pts[0])
    lines = [f"{d} {len(pts)}"]
    lines += [" ".join(str(x) for x in p) for p in pts]
    out.write_text("\n".join(lines) + "\n")
    print(f"    wrote {out}")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--data-dir", default=str(REPO_ROOT / "data"))
    ap.add_argument("--steinlib-url", default=STEINLIB_BASE)
    ap.add_argument("--dimacs-url", default=DIMACS_BASE)
    args = ap.parse_args()
    data_dir = Path(args.data_dir)

    missing = []

    for archive, wanted in STEINLIB_SETS.items():
        print(f"SteinLib {archive}")
        blob = try_fetch([f"{args.steinlib_url}/{archive}"])
        if blob is None:
            missing.extend(wanted)
            continue
        found = {}
        for fname, data in extract_members(blob):
            stem = fname.lower().removesuffix(".stp")
            if stem in wanted:
                found[stem] = data
        for name in wanted:
            if name in found:
                save_stp(data_dir, name, found[name])
            else:
                missing.append(name)

    print("DIMACS obstacle-avoiding instances")
    got = set()
    for archive in DIMACS_STP_ARCHIVES:
        blob = try_fetch([f"{args.dimacs_url}/{archive}"])
        if blob is None:
            continue
        for fname, data in extract_members(blob):
            stem = fname.lower().removesuffix(".stp")
            if stem in DIMACS_STP_WANTED:
                save_stp(data_dir, stem, data)
                got.add(stem)
        if got == set(DIMACS_STP_WANTED):
            break
    missing.extend(sorted(set(DIMACS_STP_WANTED) - got))

    print("CARIOCA rectilinear point sets")
    got = set()
    for archive in CARIOCA_ARCHIVES:
        blob = try_fetch([f"{args.dimacs_url}/{archive}"])
        if blob is None:
            continue
        for fname, data in extract_members(blob):
            stem = re.sub(r"\.(stp|txt|pts|inst)$", "", fname.lower())
            if stem not in CARIOCA_WANTED:
                continue
            text = data.decode("ascii", errors="replace")
            pts = points_from_stp_coordinates(text) or points_from_plain_rows(text)
            if pts is None:
                print(f"    could not interpret {fname}")
                continue
            save_points(data_dir, stem, pts)
            got.add(stem)
        if got == set(CARIOCA_WANTED):
            break
    missing.extend(sorted(set(CARIOCA_WANTED) - got))

    if missing:
        print("\nNOT fetched (download failed or file not in archive):")
        for name in sorted(set(missing)):
            print(f"  {name}")
        print("Corpus-gated tests will stay skipped for these instances.")
        return 1
    print("\nCorpus complete.")
    return 0


if __name__ == "__main__":
    sys.exit(main())
