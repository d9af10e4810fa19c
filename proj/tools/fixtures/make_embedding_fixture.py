"""Writes tests/fixtures/embeddings/<sha256>.emb for the text "ethanol molecule"
using struct, independent of the C++ writer."""
import hashlib
import pathlib
import struct

OUT = pathlib.Path(__file__).resolve().parents[2] / "tests" / "fixtures" / "embeddings"
TEXT = "ethanol molecule"
TOKENS = ["ethanol", "molecule"]
ROWS = [[0.5, -1.25, 3.0], [1e-3, 2.0, -0.0625]]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    digest = hashlib.sha256(TEXT.encode()).digest()
    blob = digest + struct.pack("<II", len(ROWS), len(ROWS[0]))
    for row in ROWS:
        blob += struct.pack("<%dd" % len(row), *row)
    for tok in TOKENS:
        blob += struct.pack("<I", len(tok)) + tok.encode()
    (OUT / (digest.hex() + ".emb")).write_bytes(blob)


if __name__ == "__main__":
    main()
