#!/usr/bin/env python3
"""Convert a LINQS citation dataset (<name>.content, <name>.cites) into the
nodes.tsv / edges.tsv / meta.tsv layout read by gcnsel."""

import argparse
import pathlib
import sys


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("content", type=pathlib.Path)
    ap.add_argument("cites", type=pathlib.Path)
    ap.add_argument("out", type=pathlib.Path)
    ap.add_argument("--name", default=None)
    args = ap.parse_args()

    ids, labels, rows = {}, [], []
    for line in args.content.read_text().splitlines():
        if not line.strip():
            continue
        cols = line.split("\t")
        ids[cols[0]] = len(ids)
        labels.append(cols[-1])
        rows.append(" ".join(f"{k}:{v}" for k, v in enumerate(cols[1:-1]) if float(v) != 0.0))
    num_features = len(line.split("\t")) - 2

    edges, dropped = [], 0
    for line in args.cites.read_text().splitlines():
        if not line.strip():
            continue
        a, b = line.split()
        if a not in ids or b not in ids:
            dropped += 1
            continue
        edges.append((ids[b], ids[a]))  # cites file is "cited<TAB>citing"
    if dropped:
        print(f"dropped {dropped} citation rows naming unknown papers", file=sys.stderr)

    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "nodes.tsv", "w") as f:
        for i, (label, row) in enumerate(zip(labels, rows)):
            f.write(f"{i}\t{label}\t{row}\n")
    with open(args.out / "edges.tsv", "w") as f:
        for a, b in edges:
            f.write(f"{a}\t{b}\n")
    with open(args.out / "meta.tsv", "w") as f:
        f.write(f"name\t{args.name or args.content.stem}\n")
        f.write(f"nodes\t{len(ids)}\n")
        f.write(f"features\t{num_features}\n")
        f.write(f"classes\t{len(set(labels))}\n")


if __name__ == "__main__":
    main()
