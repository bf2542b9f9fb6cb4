# From Latin squares to alignment schemes and eigenvector chains.
#
# Run with:  python3 demos/01_latin_schemes.py

import numpy as np

from latinia.latin import (alignment_pairs, build_schemes,
                           enumerate_fixed_first_row, expected_square_count,
                           extract_chains)

# How many squares keep the first row fixed?
for K in (3, 4, 5):
    n = len(enumerate_fixed_first_row(K))
    print(f"K={K}: {n} squares (formula says {expected_square_count(K)})")

# Each square, cut down to three columns, tells every receiver which pairs
# of interference streams to stack on top of each other.
first, second = build_schemes(3, 'all')
print("\nfirst K=3 scheme (rows = transmitters, columns = receivers):")
print(first)

for r in range(3):
    pairs = ', '.join(str(p) for p in alignment_pairs(first, r))
    print(f"receiver {r + 1}: {pairs}")

# The pairs link up into K three-member chains, one constraint per receiver
print("\nchains:")
for chain in extract_chains(first):
    links = '; '.join(f"rx{s.receiver + 1}: {s.source}->{s.target}" for s in chain.steps)
    print(f"  {chain}  anchor {chain.anchor}  [{links}]")

# the second square pairs things up differently
print("\nsecond scheme chains:", [str(c) for c in extract_chains(second)])
print("identical pairing?",
      np.array_equal(first.symbols, second.symbols))
