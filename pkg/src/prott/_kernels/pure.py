"""Pure-Python closure kernels on element bitmasks.

Subgroups are encoded as Python int bitmasks: bit ``i`` set means element
index ``i`` belongs to the set. Index 0 is always the identity.
"""

from __future__ import annotations


def close_mask(mul_rows, seed_mask: int) -> int:
    """Subgroup generated by the elements of ``seed_mask``.

    Worklist closure under multiplication; in a finite group this also
    closes under inverses and forces the identity in.
    """
    mask = seed_mask | 1
    elems = []
    m = mask
    while m:
        low = m & -m
        elems.append(low.bit_length() - 1)
        m ^= low
    queue = list(elems)
    while queue:
        a = queue.pop()
        row_a = mul_rows[a]
        for b in list(elems):
            c = row_a[b]
            if not (mask >> c) & 1:
                mask |= 1 << c
                elems.append(c)
                queue.append(c)
            d = mul_rows[b][a]
            if not (mask >> d) & 1:
                mask |= 1 << d
                elems.append(d)
                queue.append(d)
    return mask


def conjugate_mask(mul_rows, inv_row, mask: int, g: int) -> int:
    """Image of a subset under x -> g x g^-1."""
    gi = inv_row[g]
    row_g = mul_rows[g]
    out = 0
    m = mask
    while m:
        low = m & -m
        x = low.bit_length() - 1
        m ^= low
        out |= 1 << mul_rows[row_g[x]][gi]
    return out


def image_mask(mapping, mask: int) -> int:
    """Image of a subset under an index mapping (list/tuple)."""
    out = 0
    m = mask
    while m:
        low = m & -m
        m ^= low
        out |= 1 << mapping[low.bit_length() - 1]
    return out
