"""Numpy cross-check of the icosahedron Hodge Laplacian values pinned in the Rust tests.

Builds signed incidence matrices from the clique complex of the icosahedral graph and
prints the nonzero block spectra and the pseudo-inverse diagonal per dimension.

Usage: python3 python/hodge_oracle.py
"""
from fractions import Fraction

import networkx as nx
import numpy as np


def incidence(lower, upper):
    index = {f: i for i, f in enumerate(lower)}
    d = np.zeros((len(upper), len(lower)))
    for row, face in enumerate(upper):
        for i in range(len(face)):
            d[row, index[face[:i] + face[i + 1:]]] = (-1) ** i
    return d


def main():
    g = nx.icosahedral_graph()
    cliques = [tuple(sorted(c)) for c in nx.enumerate_all_cliques(g)]
    faces = [sorted(c for c in cliques if len(c) == k) for k in (1, 2, 3)]
    d0 = incidence(faces[0], faces[1])
    d1 = incidence(faces[1], faces[2])
    blocks = [d0.T @ d0, d0 @ d0.T + d1.T @ d1, d1 @ d1.T]
    for k, lap in enumerate(blocks):
        ev = np.linalg.eigvalsh(lap)
        nonzero = sorted(np.round(ev[np.abs(ev) > 1e-9], 9))
        diag = sorted(set(np.round(np.diag(np.linalg.pinv(lap)), 12)))
        print(f"L{k}: kernel {int(np.sum(np.abs(ev) <= 1e-9))}, nonzero {nonzero}")
        print(f"L{k}+ diagonal: {[Fraction(x).limit_denominator(1000) for x in diag]}")


if __name__ == "__main__":
    main()
