#!/usr/bin/env python3
"""Regenerates tests/fixtures/scaffold_text.json and scaffold_mol.json.

Text: hashed TF-IDF vectors and cosine similarities recomputed in plain
Python. Molecules: RDKit parses each SMILES; Morgan bits and Tanimoto come
from the independent re-implementation in make_metrics_fixture.py.
"""
import json
import math
import re
from collections import Counter
from pathlib import Path

from rdkit import Chem

from make_metrics_fixture import fnv_bytes, morgan_bits, tanimoto

OUT = Path(__file__).resolve().parents[2] / "tests" / "fixtures"

TEXT_PAIRS = [
    ("T1", "The molecule is a primary alcohol with two carbon atoms.", "CCO"),
    ("T2", "The molecule is a carboxylic acid with two carbon atoms.", "CC(=O)O"),
    ("T3", "An aromatic hydrocarbon with six carbon atoms in a ring.", "c1ccccc1"),
    ("T4", "The molecule is a primary amine derived from ethane.", "CCN"),
    ("T5", "A cyclic alkane; the ring has six carbon atoms.", "C1CCCCC1"),
    ("T6", "The molecule is a nitrile with two carbon atoms.", "CC#N"),
]
TEXT_QUERIES = [
    "A primary alcohol with three carbon atoms.",
    "The molecule is an aromatic ring with six carbon atoms.",
]

MOL_PAIRS = [
    ("M1", "CCO"), ("M2", "CCCO"), ("M3", "c1ccccc1O"), ("M4", "CC(=O)O"),
    ("M5", "N"), ("M6", "c1ccccc1"), ("M7", "OCCO"), ("M8", "CCN"),
]
MOL_QUERIES = ["CCO", "Oc1ccccc1C", "CC(=O)OC"]


def words(text):
    return [w.lower() for w in re.findall(rb"[A-Za-z0-9\x80-\xff]+", text.encode())]


def tfidf(text, df, n, dim=256):
    v = [0.0] * dim
    for w, c in sorted(Counter(words(text)).items()):
        idf = math.log((1 + n) / (1 + df.get(w, 0))) + 1
        v[fnv_bytes(w) % dim] += c * idf
    norm = math.sqrt(sum(x * x for x in v))
    return [x / norm for x in v] if norm else v


def cos(a, b):
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(x * x for x in b))
    return 0.0 if na == 0 or nb == 0 else sum(x * y for x, y in zip(a, b)) / (na * nb)


def ranking(scores):
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    return order


def main():
    df = Counter()
    for _, d, _ in TEXT_PAIRS:
        for w in set(words(d)):
            df[w] += 1
    n = len(TEXT_PAIRS)
    vecs = [tfidf(d, df, n) for _, d, _ in TEXT_PAIRS]
    text_cases = []
    for q in TEXT_QUERIES:
        qv = tfidf(q, df, n)
        scores = [cos(qv, v) for v in vecs]
        order = ranking(scores)
        text_cases.append({"query": q, "ranking": [TEXT_PAIRS[i][0] for i in order],
                           "similarity": [scores[i] for i in order]})
    with open(OUT / "scaffold_text.json", "w") as f:
        json.dump({"pairs": [{"id": i, "description": d, "smiles": s} for i, d, s in TEXT_PAIRS],
                   "cases": text_cases}, f, indent=1)
        f.write("\n")

    fps = [morgan_bits(Chem.MolFromSmiles(s)) for _, s in MOL_PAIRS]
    mol_cases = []
    for q in MOL_QUERIES:
        qf = morgan_bits(Chem.MolFromSmiles(q))
        scores = [tanimoto(qf, fp) for fp in fps]
        order = ranking(scores)
        mol_cases.append({"query": q, "ranking": [MOL_PAIRS[i][0] for i in order],
                          "similarity": [scores[i] for i in order]})
    with open(OUT / "scaffold_mol.json", "w") as f:
        json.dump({"pairs": [{"id": i, "smiles": s} for i, s in MOL_PAIRS], "cases": mol_cases},
                  f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
