# Picking a good beamformer set: exhaustive vs CN shortlist vs random.

import numpy as np

from latinia.beamform import BeamformerSpace
from latinia.channel import SELECTION, draw_channel, stream
from latinia.latin import build_schemes
from latinia.select import (Objective, select_cn_shortlist, select_exhaustive,
                            select_random_u)

scheme = build_schemes(3, 'first')[0]
obj = Objective('minmax')

draws = 50
us = (1, 3, 10, 20)
table = {'optimal': [], **{f'cn{u}': [] for u in us}, **{f'random{u}': [] for u in us}}
cost = {}

for d in range(draws):
    ch = draw_channel(3, seed=3, draw_index=d)
    space = BeamformerSpace(scheme, ch)
    best = select_exhaustive(obj, scheme, ch, space)
    table['optimal'].append(best.value ** 2)
    cost['optimal'] = (best.svd_count, best.eval_count)
    for u in us:
        r = select_cn_shortlist(obj, 'cn', u, scheme, ch, space)
        table[f'cn{u}'].append(r.value ** 2)
        cost[f'cn{u}'] = (r.svd_count, r.eval_count)
        r = select_random_u(obj, u, scheme, ch, stream(3, d, SELECTION, u), space)
        table[f'random{u}'].append(r.value ** 2)
        cost[f'random{u}'] = (r.svd_count, r.eval_count)

print(f"{'strategy':>10} {'mean min SNR gain':>18} {'svd':>6} {'eval':>6}")
for name, vals in table.items():
    svd, ev = cost[name]
    print(f"{name:>10} {np.mean(vals):18.4f} {svd:6d} {ev:6d}")

# the shortlist only pays for u true evaluations on top of one cheap pass,
# and already at u = 1 it sits far above a random pick
