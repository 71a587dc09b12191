"""Independent 100-digit evaluation of the X0(p) height bounds.

Usage: python3 scripts/bound_oracle.py > crates/core/tests/data/headline_oracle.json
"""
import json

from mpmath import mp, mpf, log, nstr

mp.dps = 110


def simplified(p, d=1, s=1, abs_disc=1, ell=1, norms=()):
    c_ks = (
        31 * s * log(2)
        + 9 * s * log(d)
        + 2 * s * log(s)
        + d * log(ell)
        + log(abs_disc)
        + d * log(log(abs_disc + 1))
        + sum(log(log(n)) for n in norms)
    )
    return 9 * s * s * p**4 * log(p) + p * p * c_ks


def delta_p(p, d, abs_disc, norms):
    dstar = mpf(d * d * (p - 1) ** 3) / 8 * log(p) + mpf(p - 1) / 2 * log(abs_disc)
    y = d * p * (p - 1) * log(2 * p) + (p - 1) * dstar
    return (
        y / 2
        + mpf(d * (p - 1) ** 2) / 2 * log(y)
        + mpf((p - 1) ** 2) / 2 * sum((log(log(n)) for n in norms), mpf(0))
    )


def precise(p, d=1, s=1, abs_disc=1, ell=1, norms=(), c=2**15):
    q = p * (p - 1)
    return (
        mpf(s * (p - 1) ** 2) / 2 * log(2)
        + 2 * s * q * log(mpf(c) * d * s * (p - 1) ** 2 * p * p)
        + 3 * s * q * log(log(d * q))
        + d * q * log(ell)
        + delta_p(p, d, abs_disc, norms)
    )


if __name__ == "__main__":
    out = {
        "p": 11,
        "log_main_simplified": nstr(simplified(11), 100, strip_zeros=False),
        "log_main_precise": nstr(precise(11), 100, strip_zeros=False),
    }
    print(json.dumps(out, indent=2))
