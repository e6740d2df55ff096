#!/usr/bin/env python3
"""Fetch and convert the C. elegans hermaphrodite chemical-synapse wiring
diagram into data/celegans_chemical.tsv.

The expected source is the classic 'NeuronConnect' table (one row per
neuron pair and connection type):

    Neuron1, Neuron2, Type, Nbr

Type codes: S/Sp mark chemical synapses sent from Neuron1 to Neuron2,
R/Rp are the same synapses listed again from the receiving side, EJ are
gap junctions and NMJ neuromuscular junctions.  Only S/Sp rows are kept,
each directed edge once with weight 1, and neurons that end up with no
chemical connections are dropped.  The connected somatic network has 279
neurons and 2194 directed edges.

Usage:
    python3 scripts/fetch_celegans.py                 # try the known URLs
    python3 scripts/fetch_celegans.py NeuronConnect.csv   # convert a local copy

The download needs outbound network access; on an offline machine obtain
NeuronConnect (csv or tsv) elsewhere and pass its path.
"""

import csv
import io
import sys
import urllib.request
from pathlib import Path

URLS = [
    "https://www.wormatlas.org/images/NeuronConnect.xls",
    "https://raw.githubusercontent.com/openworm/data/master/NeuronConnect.csv",
]

OUT = Path(__file__).resolve().parent.parent / "data" / "celegans_chemical.tsv"


def parse_rows(text):
    sniff = csv.Sniffer().sniff(text[:2000], delimiters=",;\t")
    rows = list(csv.reader(io.StringIO(text), dialect=sniff))
    header = [h.strip().lower() for h in rows[0]]
    if "neuron1" in header[0].lower():
        rows = rows[1:]
    return [(r[0].strip(), r[1].strip(), r[2].strip()) for r in rows if len(r) >= 3]


def convert(rows):
    edges = set()
    for a, b, kind in rows:
        if kind in ("S", "Sp"):
            edges.add((a, b))
    nodes = sorted({n for e in edges for n in e})
    ids = {name: i for i, name in enumerate(nodes)}
    lines = [f"# nodes: {len(nodes)}"]
    lines += [f"# label: {i} {name}" for name, i in ids.items()]
    lines += [f"{a}\t{b}\t1.0" for a, b in sorted(edges, key=lambda e: (ids[e[0]], ids[e[1]]))]
    return len(nodes), len(edges), "\n".join(lines) + "\n"


def main():
    if len(sys.argv) > 1:
        text = Path(sys.argv[1]).read_text(encoding="utf-8", errors="replace")
    else:
        text = None
        for url in URLS:
            if url.endswith(".xls"):
                continue            # needs a spreadsheet reader; csv mirrors first
            try:
                with urllib.request.urlopen(url, timeout=30) as resp:
                    text = resp.read().decode("utf-8", errors="replace")
                print(f"downloaded {url}")
                break
            except Exception as exc:
                print(f"failed {url}: {exc}")
        if text is None:
            print("no mirror reachable; pass a local NeuronConnect csv/tsv path")
            return 1

    n, m, payload = convert(parse_rows(text))
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(payload, encoding="utf-8", newline="\n")
    print(f"wrote {OUT} ({n} neurons, {m} directed chemical edges)")
    if (n, m) != (279, 2194):
        print("warning: expected 279 neurons / 2194 edges for the standard "
              "connected somatic network; check the source variant")
    return 0


if __name__ == "__main__":
    sys.exit(main())
