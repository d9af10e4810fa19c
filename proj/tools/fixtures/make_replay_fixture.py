"""Writes tests/fixtures/replay_small.jsonl: recorded responses keyed by the
SHA-256 of literal prompts, hashed here with hashlib."""
import hashlib
import json
import pathlib

OUT = pathlib.Path(__file__).resolve().parents[2] / "tests" / "fixtures" / "replay_small.jsonl"

RECORDS = [
    ("Describe ethanol.", None, "timeout", 1),
    ("Describe ethanol.", "1. CCO\n2. OCC\nExplanation: a two-carbon alcohol", "", 2),
    ("Describe benzene.", "1. c1ccccc1\n\nExplanation: aromatic ring", "", 1),
    ("Describe nothing.", "I cannot answer that.", "", 1),
]


def main():
    with OUT.open("w") as f:
        for prompt, raw, error, attempt in RECORDS:
            rec = {
                "prompt_sha256": hashlib.sha256(prompt.encode()).hexdigest(),
                "raw_response": raw,
                "provider_id": "fixture",
                "timestamp": "2026-01-01T00:00:00Z",
                "attempt": attempt,
            }
            if error:
                rec["error"] = error
            f.write(json.dumps(rec) + "\n")


if __name__ == "__main__":
    main()
