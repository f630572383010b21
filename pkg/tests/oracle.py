"""Brute-force discovery oracle, written against raw classification digits.

Deliberately avoids ``Selection.matches``, the scan kernels and the index.
"""

from fractions import Fraction

BEHAVIOR_CODES = {"Collective": "01", "Notifying": "02", "Interactive": "03"}
COST_CODES = {"FreeUnlimited": "0101", "FreeLimited": "0102", "Subscribe": "0201", "PayPerUse": "0202"}


def passes(cid, labels):
    behaviors = {BEHAVIOR_CODES[l] for l in labels if l in BEHAVIOR_CODES}
    costs = {COST_CODES[l] for l in labels if l in COST_CODES}
    return (not behaviors or cid[:2] in behaviors) and (not costs or cid[2:] in costs)


def brute_force(records, labels, keywords):
    """Returns (hits as [(record_id, score)] ranked, x)."""
    kws = set(k.lower() for k in keywords)
    x = 0
    scored = []
    for pos, rec in enumerate(records):
        if not passes(rec.classification, labels):
            continue
        x += 1
        common = 0
        for k in kws:
            if k in rec.match_tokens:
                common += 1
        if common:
            scored.append((-Fraction(common, len(kws)), pos, rec.record_id))
    scored.sort()
    return [(rid, -neg) for neg, _, rid in scored], x
