#!/usr/bin/env python3
"""Independent Monte-Carlo oracle for the golden values frozen in
tests/test_closed_form.cpp.

Events are evaluated directly from the raw rate inequalities (MAC region,
single-user SINR conditions, accumulated mutual information) with NumPy; no
code is shared with the C++ library. Run:

    python3 tests/oracle/mc_oracle.py

and paste the printed table into the test if the definitions ever change.
"""

import numpy as np

TRIALS = 20_000_000
CHUNK = 2_000_000


def lg(x):
    return np.log2(1.0 + x)


def events(g1, g2, R, P, a, b):
    a1, a2 = a * P, (1 - a) * P
    b1, b2 = b * P, (1 - b) * P
    # slot 1
    both1 = (R <= lg(g1 * a1)) & (R <= lg(g1 * a2)) & (2 * R <= lg(g1 * P))
    sinr1 = lg(g1 * a1 / (1 + g1 * a2))
    sinr2 = lg(g1 * a2 / (1 + g1 * a1))
    only1 = (R <= sinr1) & (R > lg(g1 * a2))
    only2 = (R <= sinr2) & (R > lg(g1 * a1))
    fail1 = (R > sinr1) & (R > sinr2) & (2 * R > lg(g1 * P))
    # accumulated quantities over both slots after a double failure
    A1 = lg(g1 * a1) + lg(g2 * b1)
    B2 = lg(g1 * a2) + lg(g2 * b2)
    S = lg(g1 * P) + lg(g2 * P)
    S1 = sinr1 + lg(g2 * b1 / (1 + g2 * b2))
    S2 = sinr2 + lg(g2 * b2 / (1 + g2 * b1))
    joint2 = (R <= A1) & (R <= B2) & (2 * R <= S)
    m1_only2 = (R <= S1) & (R > B2)
    m2_only2 = (R <= S2) & (R > A1)
    return {
        "p0": both1,
        "p1": only1 & (R <= lg(g1 * a2) + lg(g2 * P)),
        "p1p": only2 & (R <= lg(g1 * a1) + lg(g2 * P)),
        "p2": only1 & (R > lg(g1 * a2) + lg(g2 * P)),
        "p2p": only2 & (R > lg(g1 * a1) + lg(g2 * P)),
        "p3": fail1 & joint2,
        "p4": fail1 & m1_only2,
        "p4p": fail1 & m2_only2,
    }


def sc_events(g1, g2, R, P, a):
    # superposition coding decodes only from the combined two-slot signal
    a1, a2 = a * P, (1 - a) * P
    A1 = lg(g1 * a1) + lg(g2 * a1)
    B2 = lg(g1 * a2) + lg(g2 * a2)
    S = lg(g1 * P) + lg(g2 * P)
    S1 = lg(g1 * a1 / (1 + g1 * a2)) + lg(g2 * a1 / (1 + g2 * a2))
    S2 = lg(g1 * a2 / (1 + g1 * a1)) + lg(g2 * a2 / (1 + g2 * a1))
    return {
        "tp3": (R <= A1) & (R <= B2) & (2 * R <= S),
        "tp4": (R <= S1) & (R > B2),
        "tp4p": (R <= S2) & (R > A1),
    }


def estimate(seed, R, P, a, b, keys, sc=False):
    rng = np.random.default_rng(seed)
    counts = {k: 0 for k in keys}
    reward = 0
    slots = 0
    done = 0
    while done < TRIALS:
        n = min(CHUNK, TRIALS - done)
        g1 = rng.exponential(1.0, n)
        g2 = rng.exponential(1.0, n)
        ev = sc_events(g1, g2, R, P, a) if sc else events(g1, g2, R, P, a, b)
        for k in keys:
            counts[k] += int(np.count_nonzero(ev[k]))
        if not sc:
            two = ev["p0"] | ev["p1"] | ev["p1p"] | ev["p3"]
            one = ev["p2"] | ev["p2p"] | ev["p4"] | ev["p4p"]
            reward += 2 * int(np.count_nonzero(two)) + int(np.count_nonzero(one))
            slots += n + int(np.count_nonzero(~ev["p0"]))
        done += n
    out = {}
    for k in keys:
        p = counts[k] / TRIALS
        out[k] = (p, np.sqrt(p * (1 - p) / TRIALS))
    if not sc:
        out["throughput"] = R * reward / slots
    return out


def main():
    cases = [
        ("p1 at alpha=0.9", 1, 1.0, 2.0, 0.9, 0.5, ["p1", "p2"], False),
        ("mlh at (0.5,0.5)", 2, 1.0, 2.0, 0.5, 0.5, ["p0", "p3", "p4", "p4p"], False),
        ("ts", 3, 1.0, 2.0, 1.0, 1.0, ["p1", "p2", "p4"], False),
        ("mlh at (0.3,0.7)", 4, 1.0, 2.0, 0.3, 0.7, ["p3", "p4", "p4p"], False),
        ("mlh at (0.8,0.3) R=1.5 P=6", 5, 1.5, 6.0, 0.8, 0.3,
         ["p0", "p1", "p1p", "p2", "p2p", "p3", "p4", "p4p"], False),
        ("sc at 0.5", 6, 1.0, 2.0, 0.5, 0.5, ["tp3", "tp4", "tp4p"], True),
        ("sc at 0.7", 7, 1.0, 2.0, 0.7, 0.7, ["tp3", "tp4", "tp4p"], True),
    ]
    for name, seed, R, P, a, b, keys, sc in cases:
        res = estimate(seed, R, P, a, b, keys, sc)
        print(f"# {name}: R={R} P={P} alpha={a} beta={b} trials={TRIALS}")
        for k in keys:
            p, se = res[k]
            print(f"  {k:5s} {p:.7f}  se {se:.2e}")
        if "throughput" in res:
            print(f"  throughput {res['throughput']:.7f}")


if __name__ == "__main__":
    main()
