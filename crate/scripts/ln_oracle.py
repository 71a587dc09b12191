"""Seeded random ln/lm cases with 200-digit reference values.

Each case is one of
  ln     q          -> ln q
  add    q1 q2      -> ln q1 + ln q2
  scale  q k        -> k ln q
  lnln   q          -> ln ln q   (q > 1)
Rationals are written "num/den".

Usage: python3 scripts/ln_oracle.py > crates/core/tests/data/ln_cases.json
"""
import json
import random

from mpmath import mp, mpf, log, nstr

mp.dps = 220
CASES = 1000
SEED = 20240611


def rand_q(rng, above_one=False):
    bits = rng.choice([4, 16, 64, 200])
    num = rng.randrange(1, 2**bits)
    den = rng.randrange(1, 2**rng.choice([4, 16, 64, 200]))
    if above_one and num <= den:
        num, den = den + num, den
    return num, den


def val(q):
    return mpf(q[0]) / q[1]


def main():
    rng = random.Random(SEED)
    cases = []
    for _ in range(CASES):
        op = rng.choice(["ln", "add", "scale", "lnln"])
        if op == "ln":
            q = rand_q(rng)
            args, ref = [q], log(val(q))
        elif op == "add":
            a, b = rand_q(rng), rand_q(rng)
            args, ref = [a, b], log(val(a)) + log(val(b))
        elif op == "scale":
            q = rand_q(rng)
            k = (rng.randrange(-10**6, 10**6), rng.randrange(1, 10**4))
            args, ref = [q, k], mpf(k[0]) / k[1] * log(val(q))
        else:
            q = rand_q(rng, above_one=True)
            args, ref = [q], log(log(val(q)))
        cases.append(
            {
                "op": op,
                "args": [f"{n}/{d}" for n, d in args],
                "ref": nstr(ref, 200, strip_zeros=False, min_fixed=-mp.inf, max_fixed=mp.inf),
            }
        )
    print(json.dumps({"seed": SEED, "digits": 200, "cases": cases}, indent=1))


if __name__ == "__main__":
    main()
