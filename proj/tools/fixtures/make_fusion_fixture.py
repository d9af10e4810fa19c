"""Writes tests/fixtures/fusion_oracle.json: pooling, prediction encoding and
two-layer attention fusion evaluated with scalar Python loops."""
import json
import math
import pathlib
import random

OUT = pathlib.Path(__file__).resolve().parents[2] / "tests" / "fixtures" / "fusion_oracle.json"


def mat(rng, rows, cols):
    return [[round(rng.uniform(-1, 1), 6) for _ in range(cols)] for _ in range(rows)]


def vecmat(x, w):
    return [sum(x[k] * w[k][j] for k in range(len(x))) for j in range(len(w[0]))]


def softmax(z):
    m = max(z)
    e = [math.exp(v - m) for v in z]
    s = sum(e)
    return [v / s for v in e]


def pool(h, w):
    logits = [sum(w[k] * row[k] for k in range(len(w))) for row in h]
    alpha = softmax(logits)
    return [sum(alpha[i] * h[i][k] for i in range(len(h))) for k in range(len(h[0]))], alpha


def mha(a, b, sa, sb, wo, heads, dh):
    qa, qb = vecmat(a, sa["wq"]), vecmat(b, sb["wq"])
    ka, kb = vecmat(a, sa["wk"]), vecmat(b, sb["wk"])
    va, vb = vecmat(a, sa["wv"]), vecmat(b, sb["wv"])
    concat, trace = [], []
    for h in range(heads):
        lo, hi = h * dh, (h + 1) * dh
        q = [qa[i] + qb[i] for i in range(lo, hi)]
        s0 = sum(q[i - lo] * ka[i] for i in range(lo, hi)) / math.sqrt(dh)
        s1 = sum(q[i - lo] * kb[i] for i in range(lo, hi)) / math.sqrt(dh)
        w = softmax([s0, s1])
        trace.append(w)
        concat += [w[0] * va[i] + w[1] * vb[i] for i in range(lo, hi)]
    return vecmat(concat, wo), trace


def stream(rng, d, width):
    return {"wq": mat(rng, d, width), "wk": mat(rng, d, width), "wv": mat(rng, d, width)}


def main():
    rng = random.Random(20240611)
    out = {}

    h = [[1.0, 2.0], [0.0, -1.0], [3.0, 0.5]]
    y, alpha = pool(h, [1.0, 0.0])
    out["pool"] = {"tokens": h, "w": [1.0, 0.0], "alpha": alpha, "output": y}

    # Single-head attention, d = 4.
    d = 4
    a, b = mat(rng, 1, d)[0], mat(rng, 1, d)[0]
    sa, sb = stream(rng, d, d), stream(rng, d, d)
    wo = mat(rng, d, d)
    y, trace = mha(a, b, sa, sb, wo, 1, 4)
    out["mha"] = {"a": a, "b": b, "sa": sa, "sb": sb, "wo": wo, "heads": 1, "head_dim": 4,
                  "output": y, "trace": trace}

    # Full composition: d = 4, two heads of width 2, r = 2 slots over 3 symbols.
    symbols = ["C", "O", "="]
    cands = ["CO", "C"]
    multi_hot = [0.0] * 6
    for slot, cand in enumerate(cands):
        for ch in cand:
            multi_hot[slot * 3 + symbols.index(ch)] = 1.0
    params = {
        "u": mat(rng, 1, d)[0], "v": mat(rng, 1, d)[0],
        "org": stream(rng, d, d), "exp": stream(rng, d, d),
        "pred": stream(rng, d, d), "uni": stream(rng, d, d),
        "wo_uni": mat(rng, d, d), "wo_cross": mat(rng, d, d), "w_pred": mat(rng, 6, d),
    }
    h_org, h_exp = mat(rng, 3, d), mat(rng, 2, d)
    y_org, _ = pool(h_org, params["v"])
    y_exp, _ = pool(h_exp, params["u"])
    y_pred = vecmat(multi_hot, params["w_pred"])
    y_uni, t1 = mha(y_org, y_exp, params["org"], params["exp"], params["wo_uni"], 2, 2)
    y_cross, t2 = mha(y_uni, y_pred, params["uni"], params["pred"], params["wo_cross"], 2, 2)
    out["cross"] = {"symbols": symbols, "candidates": cands, "multi_hot": multi_hot, "params": params,
                    "h_org": h_org, "h_exp": h_exp, "y_org": y_org, "y_exp": y_exp, "y_pred": y_pred,
                    "y_uni": y_uni, "y_cross": y_cross, "trace1": t1, "trace2": t2}

    OUT.write_text(json.dumps(out, indent=1) + "\n")


if __name__ == "__main__":
    main()
