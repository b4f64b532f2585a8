"""Independent tensor oracles: plain loops over the generator formulas.

Nothing here touches the package's kernels or contraction code.
"""

import itertools
import math

import numpy as np


def z_spider(in_dims, out_dims, r):
    legs = list(out_dims) + list(in_dims)
    out = np.zeros(legs, dtype=complex)
    n = min(legs) if legs else len(r)
    if not legs:
        return np.asarray(sum(r[:n]), dtype=complex)
    for k in range(n):
        out[(k,) * len(legs)] = r[k]
    return out


def x_spider(a, n_in, n_out):
    out = np.zeros((a,) * (n_out + n_in), dtype=complex)
    for idx in itertools.product(range(a), repeat=n_out + n_in):
        if (sum(idx[:n_out]) - sum(idx[n_out:])) % a == 0:
            out[idx] = 1
    return out


def embedding(a, b):
    out = np.zeros((b, a), dtype=complex)
    for k in range(min(a, b)):
        out[k, k] = 1
    return out


def zw_spider(r, label, n_in, n_out):
    dim = label + 1
    legs = n_in + n_out
    if legs == 0:
        return np.asarray(sum(r**k * math.sqrt(math.factorial(k)) ** -2 for k in range(dim)), dtype=complex)
    out = np.zeros((dim,) * legs, dtype=complex)
    for k in range(dim):
        out[(k,) * legs] = r**k * math.sqrt(math.factorial(k)) ** (legs - 2)
    return out


def multinomial(ks):
    return math.factorial(sum(ks)) // math.prod(math.factorial(k) for k in ks)


def w_node(big, smalls):
    """Axes: small legs (outputs) then the big leg (input)."""
    out = np.zeros([b + 1 for b in smalls] + [big + 1], dtype=complex)
    for ks in itertools.product(*[range(b + 1) for b in smalls]):
        if sum(ks) <= big:
            out[ks + (sum(ks),)] = math.sqrt(multinomial(ks))
    return out


def zw_ket(k, label):
    out = np.zeros(label + 1, dtype=complex)
    if 0 < k <= label:
        out[k] = math.sqrt(math.factorial(k))
    return out


def mod_matrix(a):
    out = np.zeros((a, 2 * a))
    for k in range(2 * a):
        out[k % a, k] = 1
    return out
