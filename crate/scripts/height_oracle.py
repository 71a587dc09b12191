"""Reference heights and field discriminants for the test suite.

Mahler measures come from mpmath polyroots at 60 digits; discriminants of
maximal orders come from sympy's round-two algorithm.

Usage: python3 scripts/height_oracle.py > crates/core/tests/data/height_oracle.json
"""
import json

from mpmath import mp, log, nstr, polyroots
from sympy import Poly, factorint, symbols
from sympy.polys.numberfields.basis import round_two

mp.dps = 60
x = symbols("x")

FIELDS = [
    [1, 0, 1],
    [-2, 0, 1],
    [1, 1, 1],
    [-1, -1, 1],
    [-2, 0, 0, 1],
    [1, 1, 1, 1, 1],
]


def height(coeffs):
    """Absolute log height from the Mahler measure; coefficients constant first."""
    roots = polyroots(list(reversed(coeffs)), maxsteps=200, extraprec=200)
    m = log(abs(coeffs[-1])) + sum(log(max(1, abs(r))) for r in roots)
    return m / (len(coeffs) - 1)


def main():
    fields = []
    for c in FIELDS:
        f = Poly(list(reversed(c)), x)
        _, disc = round_two(f)
        fields.append(
            {
                "minpoly": c,
                "disc": int(disc),
                "ramified": sorted(int(q) for q in factorint(abs(int(disc)))),
            }
        )
    out = {
        "golden_ratio_height": nstr(height([-1, -1, 1]), 40, strip_zeros=False),
        "fields": fields,
    }
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
