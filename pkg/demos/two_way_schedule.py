"""Two-way channel: when may the reverse link react to the forward link?

Node 1 talks to node 2 over a BSC and node 2 answers over a second BSC.
Letting the encoder of (2,1) read Y(1,2) in the same slot is only
physically meaningful if the forward channel fires first.
"""

import itertools

import numpy as np

from zdcut.infocalc import dmc_region, edge_capacities
from zdcut.schedule import available_inputs, feasible_sequences, is_feasible, positive_profile
from zdcut.sim import RepetitionCode, bsc_if, run

s = bsc_if(p=0.1)
part = s.partition
print("blocks:", part.blocks)

# the zero-delay profile only works when block 1 fires before block 2
for seq in itertools.permutations(range(1, part.alpha + 1)):
    v = is_feasible(s.profile, seq, part)
    print(f"  sequence {seq}: {'feasible' if v else 'infeasible, witness ' + str(v.witness)}")
print("feasible sequences:", feasible_sequences(s.profile, part))
print("unit delays fit every sequence:", len(feasible_sequences(positive_profile(2), part)) == 6)

row = available_inputs((2, 1), part, s.sequence, s.profile)
print("encoder of (2,1) may read in the current slot:", sorted(row.same_slot))

# the region does not care about the schedule for independent channels
C = edge_capacities(s.network)
for T, bound in dmc_region(C, s.network.demand):
    print(f"  sum of R_i over {sorted(T)} <= {bound:.6f}")

# repetition codes of growing length trace the rate/reliability tradeoff
n, trials = 300, 400
for bits in (1, 5, 20, 60):
    rep = run(s, s.sequence, s.profile, RepetitionCode({(1, 2): bits, (2, 1): bits}, n), n, trials, seed=bits)
    print(f"  {bits:3d} bits each way: rate {rep.rates[0]:.3f}, P_err {rep.p_err:.3f}")

assert np.isclose(C[0, 1], 0.5310044, atol=1e-6)
