#!/usr/bin/env python3
"""Regenerates the SMILES fixtures under tests/fixtures from RDKit.

Run offline, once; the outputs are committed. RDKit is only a fixture oracle
and is never needed to build or test the C++ code.

  smiles_validity.tsv   200 labelled strings (100 valid, 100 invalid)
  smiles_reference.tsv  per-molecule counts for cross-checking the parser
"""
import random
import sys
from pathlib import Path

from rdkit import Chem, RDLogger

RDLogger.DisableLog("rdApp.*")

OUT = Path(__file__).resolve().parents[2] / "tests" / "fixtures"

BASE = """
C CC CCC CCO OCC CC=O CC(=O)O CC(=O)OC CCN CCCl CCBr CI CF C=C C#C C#N CC#N
C1CC1 C1CCC1 C1CCCC1 C1CCCCC1 C1CCO1 O1CCC1 C1CCNCC1 C1COCCO1 C1=CC=CC=C1
c1ccccc1 c1ccncc1 c1ccoc1 c1ccsc1 c1cc[nH]c1 c1cnc[nH]1 c1ccc2ccccc2c1
c1ccc2[nH]ccc2c1 c1ccc2occc2c1 c1ncncn1 c1cnccn1 O=c1cc[nH]cc1 Cc1ccccc1
Oc1ccccc1 Nc1ccccc1 Clc1ccccc1 O=C(O)c1ccccc1 CC(=O)Oc1ccccc1C(=O)O
CC(C)Cc1ccc(cc1)C(C)C(=O)O CN1C=NC2=C1C(=O)N(C(=O)N2C)C Cn1cnc2c1c(=O)n(C)c(=O)n2C
OC(=O)CC(O)(CC(O)=O)C(O)=O NC(CO)C(=O)O NCC(=O)O CC(N)C(=O)O CSCCC(N)C(=O)O
OCC(O)CO OCC1OC(O)C(O)C(O)C1O C(C(=O)O)N CCCCCCCCCCCCCCCC(=O)O CCCCCC=CCCCCCCCC(=O)O
O=C=O N#N O=O [H][H] [Na+].[Cl-] [NH4+] C[N+](C)(C)C [O-]C(=O)C CC(=O)[O-]
C[N+](=O)[O-] c1ccc(cc1)[N+](=O)[O-] [Cu+2] [Fe] [Se] [se]1cccc1 [Si](C)(C)(C)C
OS(=O)(=O)O CS(C)=O CS(=O)(=O)C OP(=O)(O)O COP(=O)(OC)OC P(Cl)(Cl)Cl FC(F)(F)F
ClC(Cl)(Cl)Cl BrCCBr ICI B(O)(O)O CB(O)O [BH4-] C1CC2CCC1C2 C1CC2CC1CC2
C12C3C4C1C5C2C3C45 C%10CCCCC%10 C1CCCCC1C1CCCCC1 c1ccc(cc1)-c1ccccc1
c1ccccc1c1ccccc1 C(=O)N CNC=O CC(C)(C)O CC(C)(C)C CCOC(=O)C CC#CC C=CC=C
C=C=C O=Cc1ccccc1 c1ccc2c(c1)ccc1ccccc12 c1ccc2cc3ccccc3cc2c1 OC1CCCCC1
N1CCOCC1 C1CCSC1 S1CCCC1 c1ccc(Br)cc1 COc1ccccc1OC CC(=O)NC1=CC=C(C=C1)O
CCN(CC)CC CC[N+](CC)(CC)CC [2H]C [13CH4] [OH-] [H+] [He] [Xe] [Ne]
c1cc[n+](C)cc1 [cH-]1cccc1 O=S(=O)([O-])[O-] [O-][N+]#N
""".split()

BAD_CHUNKS = ["(", ")", "1", "2", "=", "#", "[", "]", "%", "c", "n", "C", "N", "O", ".", "+", "H"]


def canonical_or_none(s):
    m = Chem.MolFromSmiles(s)
    return None if m is None else Chem.MolToSmiles(m)


def mutate(s, rng):
    ops = ["insert", "delete", "replace", "valence"]
    op = rng.choice(ops)
    i = rng.randrange(len(s) + 1)
    if op == "insert":
        return s[:i] + rng.choice(BAD_CHUNKS) + s[i:]
    if op == "delete" and len(s) > 1:
        j = min(i, len(s) - 1)
        return s[:j] + s[j + 1:]
    if op == "replace" and len(s) > 0:
        j = min(i, len(s) - 1)
        return s[:j] + rng.choice(BAD_CHUNKS) + s[j + 1:]
    # valence: hang extra substituents off one atom position
    return s[:i] + "(C)(C)(C)(C)" + s[i:] if s else "C"


def main():
    rng = random.Random(20240611)
    excluded = set("@/\\*$")
    valid, invalid = [], []
    seen = set()

    def add(s, note):
        if s in seen or not s or any(c in excluded for c in s):
            return
        seen.add(s)
        ok = Chem.MolFromSmiles(s) is not None
        (valid if ok else invalid).append((s, note))

    for s in BASE:
        if len(valid) < 70:
            add(s, "curated")
    hand_invalid = [
        ("", "empty"), ("C1CC", "unclosed ring"), ("C(C)(C)(C)(C)C", "pentavalent carbon"),
        ("c1cccc1", "odd aromatic ring"), ("c1ccnc1", "pyrrole without [nH]"), ("cc", "non-ring aromatic"),
        ("C(", "unclosed branch"), ("C)", "unbalanced paren"), ("C==C", "double bond symbol"),
        ("O(C)(C)C", "trivalent oxygen"), ("N(C)(C)(C)C", "tetravalent neutral nitrogen"),
        ("[C", "unterminated bracket"), ("[Xx]", "unknown element"), ("C11", "self ring bond"),
        ("C1CC1C1", "dangling second ring"), ("FF(F)", "divalent fluorine"), ("C%1CC%1", "bad percent label"),
        ("Cl(C)C", "divalent chlorine"), ("[CH5]", "bracket over valence"), ("C.", "trailing dot"),
        (".C", "leading dot"), ("()", "empty branch"),
        ("c1ccccc1c", "dangling aromatic atom"), ("B(C)(C)(C)C", "tetravalent neutral boron"),
    ]
    for s, note in hand_invalid:
        if s == "":
            seen.add(s)
            invalid.append((s, note))
        else:
            add(s, note)

    attempts = 0
    while (len(valid) < 100 or len(invalid) < 100) and attempts < 100000:
        attempts += 1
        src = rng.choice(BASE)
        s = mutate(src, rng)
        if s in seen or not s or any(c in excluded for c in s):
            continue
        ok = Chem.MolFromSmiles(s) is not None
        if ok and len(valid) < 100:
            add(s, "mutant of " + src)
        elif not ok and len(invalid) < 100:
            add(s, "mutant of " + src)

    valid = valid[:100]
    invalid = invalid[:100]
    if len(valid) != 100 or len(invalid) != 100:
        sys.exit("could not assemble 100/100 fixture")

    with open(OUT / "smiles_validity.tsv", "w") as f:
        f.write("# Labels: RDKit %s MolFromSmiles with default sanitization.\n" % Chem.rdBase.rdkitVersion)
        f.write("# Columns: smiles<TAB>label<TAB>note. An empty smiles column is the empty string.\n")
        f.write("# Divergences from the molgen parser are recorded as '# divergence:' lines.\n")
        for s, note in valid:
            f.write("%s\tvalid\t%s\n" % (s, note))
        for s, note in invalid:
            f.write("%s\tinvalid\t%s\n" % (s, note))

    with open(OUT / "smiles_reference.tsv", "w") as f:
        f.write("# RDKit %s counts for curated valid molecules.\n" % Chem.rdBase.rdkitVersion)
        f.write("# smiles\tatoms\tbonds\ttotal_h\taromatic_atoms\tring_bonds\tcanonical_rdkit\n")
        for s in BASE:
            m = Chem.MolFromSmiles(s)
            if m is None:
                continue
            total_h = sum(a.GetTotalNumHs() for a in m.GetAtoms())
            # Explicit [H] atoms count as atoms in RDKit; they stay atoms here too.
            arom = sum(1 for a in m.GetAtoms() if a.GetIsAromatic())
            ring_bonds = sum(1 for b in m.GetBonds() if b.IsInRing())
            f.write("%s\t%d\t%d\t%d\t%d\t%d\t%s\n" % (s, m.GetNumAtoms(), m.GetNumBonds(), total_h,
                                                     arom, ring_bonds, Chem.MolToSmiles(m)))


if __name__ == "__main__":
    main()
