"""Pure-Python scan kernel. Reference for, and fallback to, ``_ckernels``."""

import numpy as np


def spin(n):
    s = 2463534242
    for _ in range(n):
        s = (s * 1103515245 + 12345) & 0xFFFFFFFF
    return s


def scan(beh, mode, indptr, tokens, bmask, cmask, kw, nf_spin, disc_spin):
    """Prefilter every record, keyword-match the survivors.

    ``beh``/``mode`` hold per-record behavior (0..2) and cost mode (0..3)
    indices, ``indptr``/``tokens`` the CSR layout of each record's sorted
    unique token ids, ``kw`` the sorted unique query token ids. Returns
    ``(hit_rows, overlaps, x, sink)`` where ``x`` counts prefilter passes
    and ``sink`` only exists to keep the padding loops observable.
    """
    beh = beh.tolist() if hasattr(beh, "tolist") else list(beh)
    mode = mode.tolist() if hasattr(mode, "tolist") else list(mode)
    indptr = indptr.tolist() if hasattr(indptr, "tolist") else list(indptr)
    tokens = tokens.tolist() if hasattr(tokens, "tolist") else list(tokens)
    kw = kw.tolist() if hasattr(kw, "tolist") else list(kw)
    nkw = len(kw)
    hits = []
    overlaps = []
    x = 0
    sink = 0
    for i in range(len(beh)):
        if nf_spin:
            sink ^= spin(nf_spin)
        if not ((bmask >> beh[i]) & 1 and (cmask >> mode[i]) & 1):
            continue
        x += 1
        if disc_spin:
            sink ^= spin(disc_spin)
        # merge two sorted unique id lists
        a = indptr[i]
        end = indptr[i + 1]
        b = 0
        common = 0
        while a < end and b < nkw:
            ta = tokens[a]
            tb = kw[b]
            if ta == tb:
                common += 1
                a += 1
                b += 1
            elif ta < tb:
                a += 1
            else:
                b += 1
        if common:
            hits.append(i)
            overlaps.append(common)
    return (
        np.asarray(hits, dtype=np.int64),
        np.asarray(overlaps, dtype=np.int32),
        x,
        sink,
    )
