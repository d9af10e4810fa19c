#!/usr/bin/env python3
"""Writes tests/fixtures/porter_vectors.tsv (word, stem) using NLTK's Porter
stemmer in ORIGINAL_ALGORITHM mode as the reference."""
from pathlib import Path

from nltk.stem.porter import PorterStemmer

WORDS = """
caresses ponies ties caress cats feed agreed plastered motoring sing conflated troubled sized
hopping tanned falling hissing fizzed failing filing happy sky relational conditional rational
valenci digitizer conformabli radicalli differentli vileli analogousli vietnamization predication
operator feudalism decisiveness hopefulness callousness formaliti sensitiviti sensibiliti
triplicate formative formalize electriciti electrical hopeful goodness revival allowance inference
airliner gyroscopic adjustable defensible irritant replacement adjustment dependent adoption
homologou communism activate angulariti homologous effective bowdlerize probate rate cease
controll roll generalizations oscillators molecule molecules acidic hydroxyl derived carboxylic
compound compounds contains containing amino acids alcohol alcohols aromatic rings ring bonded
functional groups group esterification oxidized reduction conjugate base ionization agent
metabolite isolated natural product derivative substituted hydrogens atoms carbon nitrogen
oxygen sulfur analogy analogous is was as by s a ss y ys ing sing ed eed bed this yes flies
dying""".split()

stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
out = Path(__file__).resolve().parents[2] / "tests" / "fixtures" / "porter_vectors.tsv"
with open(out, "w") as f:
    f.write("# word<TAB>stem; reference: NLTK PorterStemmer(ORIGINAL_ALGORITHM)\n")
    for w in WORDS:
        f.write("%s\t%s\n" % (w, stemmer.stem(w)))
