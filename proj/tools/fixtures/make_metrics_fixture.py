#!/usr/bin/env python3
"""Regenerates tests/fixtures/text2mol_pairs.tsv and text2mol_expected.json.

Each metric is recomputed here from its definition, independently of the C++
code: RDKit parses the molecules and supplies atom/bond facts; BLEU,
Levenshtein and both fingerprints are re-derived in plain Python.
"""
import json
import math
from collections import Counter
from functools import lru_cache
from pathlib import Path

from rdkit import Chem, RDLogger

RDLogger.DisableLog("rdApp.*")

OUT = Path(__file__).resolve().parents[2] / "tests" / "fixtures"

PAIRS = [
    ("CCO", "CCO"),
    ("CC", "CCO"),
    ("C1CCCCC1", "c1ccccc1"),
    ("OCC", "CCO"),
    ("c1ccccc1O", "Oc1ccccc1"),
    ("CC(=O)O", "CC(=O)OC"),
    ("C1CC", "CCC"),
    ("N", "C"),
    ("CCN(CC)CC", "CCNCC"),
    ("c1ccncc1", "c1ccccc1"),
]

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
MASK = (1 << 64) - 1


def fnv_bytes(data, state=FNV_OFFSET):
    for c in data:
        state ^= c
        state = (state * FNV_PRIME) & MASK
    return state


def fnv_u64(value, state=FNV_OFFSET):
    return fnv_bytes((value & MASK).to_bytes(8, "little"), state)


def bond_code(b):
    t = b.GetBondType()
    return {Chem.BondType.SINGLE: 1, Chem.BondType.DOUBLE: 2, Chem.BondType.TRIPLE: 3,
            Chem.BondType.AROMATIC: 4}[t]


def morgan_bits(m, radius=2, nbits=2048):
    ids = []
    bits = set()
    for a in m.GetAtoms():
        h = fnv_bytes(b"morgan0")
        for v in (a.GetAtomicNum(), a.GetDegree(), a.GetTotalNumHs(), a.GetFormalCharge(),
                  int(a.IsInRing()), int(a.GetIsAromatic())):
            h = fnv_u64(v, h)
        ids.append(h)
        bits.add(h & (nbits - 1))
    for r in range(1, radius + 1):
        nxt = []
        for a in m.GetAtoms():
            env = sorted((bond_code(b), ids[b.GetOtherAtomIdx(a.GetIdx())]) for b in a.GetBonds())
            h = fnv_u64(r, fnv_bytes(b"morgan"))
            h = fnv_u64(ids[a.GetIdx()], h)
            for order, nid in env:
                h = fnv_u64(order, h)
                h = fnv_u64(nid, h)
            nxt.append(h)
            bits.add(h & (nbits - 1))
        ids = nxt
    return bits


def label(a):
    s = a.GetSymbol()
    return s[0].lower() + s[1:] if a.GetIsAromatic() else s


SYM = {1: "-", 2: "=", 3: "#", 4: ":"}


def path_bits(m, max_len=7, nbits=2048):
    paths = set()

    def walk(atoms, bonds):
        if bonds:
            fwd = label(m.GetAtomWithIdx(atoms[0]))
            for k, b in enumerate(bonds):
                fwd += SYM[bond_code(b)] + label(m.GetAtomWithIdx(atoms[k + 1]))
            rev = label(m.GetAtomWithIdx(atoms[-1]))
            for k in range(len(bonds) - 1, -1, -1):
                rev += SYM[bond_code(bonds[k])] + label(m.GetAtomWithIdx(atoms[k]))
            paths.add(min(fwd, rev))
        if len(bonds) == max_len:
            return
        for b in m.GetAtomWithIdx(atoms[-1]).GetBonds():
            o = b.GetOtherAtomIdx(atoms[-1])
            if o in atoms:
                continue
            walk(atoms + [o], bonds + [b])

    for a in m.GetAtoms():
        walk([a.GetIdx()], [])
    return {fnv_bytes(p.encode()) & (nbits - 1) for p in paths}


def tanimoto(a, b):
    u = len(a | b)
    return 0.0 if u == 0 else len(a & b) / u


def bleu(c, r, max_n=4):
    if not c or not r:
        return 0.0
    orders = min(max_n, len(c))
    logs = 0.0
    for n in range(1, orders + 1):
        cg = Counter(tuple(c[i:i + n]) for i in range(len(c) - n + 1))
        rg = Counter(tuple(r[i:i + n]) for i in range(len(r) - n + 1))
        match = sum(min(v, rg[g]) for g, v in cg.items())
        total = sum(cg.values())
        p = (match if match else 1e-9) / total
        logs += (1.0 / orders) * math.log(p)
    bp = math.exp(1 - len(r) / len(c)) if len(c) < len(r) else 1.0
    return bp * math.exp(logs)


def levenshtein(a, b):
    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))
    return d(len(a), len(b))


def mean(xs):
    xs = sorted(xs)
    return sum(xs) / len(xs) if xs else 0.0


def main():
    bleus, edits, morgans, paths = [], [], [], []
    exact = valid = mutual = canon = 0
    per_pair = []
    for cand, ref in PAIRS:
        b = bleu(list(cand), list(ref))
        e = levenshtein(cand, ref)
        bleus.append(b)
        edits.append(e)
        exact += cand == ref
        row = {"candidate": cand, "reference": ref, "bleu": b, "levenshtein": e}
        mc = Chem.MolFromSmiles(cand)
        mr = Chem.MolFromSmiles(ref)
        if mc is not None:
            valid += 1
        if mc is not None and mr is not None:
            mutual += 1
            same = Chem.MolToSmiles(mc) == Chem.MolToSmiles(mr)
            canon += same
            mt = tanimoto(morgan_bits(mc), morgan_bits(mr))
            morgans.append(mt)
            pc, pr = path_bits(mc), path_bits(mr)
            row.update({"canonical_match": same, "morgan_fts": mt})
            if pc or pr:
                pt = tanimoto(pc, pr)
                paths.append(pt)
                row["path_fts"] = pt
        per_pair.append(row)
    expected = {
        "bleu": mean(bleus),
        "exact": exact / len(PAIRS),
        "canonical_match": canon / mutual,
        "levenshtein_mean": mean(edits),
        "validity": valid / len(PAIRS),
        "morgan_fts_mean": mean(morgans),
        "path_fts_mean": mean(paths),
        "counts": {"total": len(PAIRS), "valid_candidates": valid, "mutually_valid": mutual,
                   "path_fts_pairs": len(paths)},
        "pairs": per_pair,
    }
    with open(OUT / "text2mol_pairs.tsv", "w") as f:
        f.write("# candidate<TAB>reference\n")
        for c, r in PAIRS:
            f.write("%s\t%s\n" % (c, r))
    with open(OUT / "text2mol_expected.json", "w") as f:
        json.dump(expected, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
